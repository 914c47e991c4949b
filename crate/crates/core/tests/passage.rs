use proptest::prelude::*;
use slowdec::environment::{sample_seed, WeightField};
use slowdec::passage::{
    passage_batch, passage_values, point_to_point, point_to_point_excl, superadditivity_check,
    PassageQuery, SemiringMode, Site, Source, WeightGrid,
};

/// Every up-right path from `from` to `to`, weights summed from the start.
fn totals(g: &WeightGrid, from: Site, to: Site) -> Vec<f64> {
    fn go(g: &WeightGrid, at: Site, to: Site, acc: f64, out: &mut Vec<f64>) {
        let acc = acc + g.get(at.0, at.1);
        if at == to {
            return out.push(acc);
        }
        if at.0 < to.0 {
            go(g, (at.0 + 1, at.1), to, acc, out);
        }
        if at.1 < to.1 {
            go(g, (at.0, at.1 + 1), to, acc, out);
        }
    }
    let mut out = Vec::new();
    go(g, from, to, 0.0, &mut out);
    out
}

fn brute(g: &WeightGrid, mode: SemiringMode, from: Site, to: Site) -> f64 {
    let t = totals(g, from, to);
    let max = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    match mode {
        SemiringMode::MaxPlus => max,
        SemiringMode::MinPlus => t.iter().copied().fold(f64::INFINITY, f64::min),
        SemiringMode::LogSumExp { beta } => {
            max + t.iter().map(|x| (beta * (x - max)).exp()).sum::<f64>().ln() / beta
        }
    }
}

fn grid_strategy() -> impl Strategy<Value = WeightGrid> {
    (1usize..=6, 1usize..=6)
        .prop_flat_map(|(nx, ny)| prop::collection::vec(prop::collection::vec(0.0f64..5.0, ny), nx))
        .prop_map(|rows| WeightGrid::from_rows(&rows))
}

fn mode_strategy() -> impl Strategy<Value = SemiringMode> {
    prop_oneof![
        Just(SemiringMode::MaxPlus),
        Just(SemiringMode::MinPlus),
        (0.1f64..5.0).prop_map(|beta| SemiringMode::LogSumExp { beta }),
    ]
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn small_grid_by_hand() {
    let g = WeightGrid::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
    assert_eq!(
        point_to_point(&g, SemiringMode::MaxPlus, (0, 0), (1, 1)).unwrap(),
        8.0
    );
    assert_eq!(
        point_to_point(&g, SemiringMode::MinPlus, (0, 0), (1, 1)).unwrap(),
        7.0
    );
    let lse = point_to_point(&g, SemiringMode::LogSumExp { beta: 1.0 }, (0, 0), (1, 1)).unwrap();
    assert!(close(lse, (7f64.exp() + 8f64.exp()).ln()));
    assert_eq!(
        point_to_point_excl(&g, SemiringMode::MaxPlus, (0, 0), (1, 1)).unwrap(),
        7.0
    );
}

#[test]
fn corner_source_is_the_origin_under_max_plus() {
    let f = WeightField::exponential(4);
    let targets: Vec<Site> = (0..12).flat_map(|i| (0..12).map(move |j| (i, j))).collect();
    let a = passage_batch(
        &f,
        SemiringMode::MaxPlus,
        Source::HalfLineOrCorner,
        &targets,
    )
    .unwrap();
    let b = passage_batch(
        &f,
        SemiringMode::MaxPlus,
        Source::Point { i: 0, j: 0 },
        &targets,
    )
    .unwrap();
    assert_eq!(a, b);
}

proptest! {
    #[test]
    fn matches_exhaustive_enumeration(g in grid_strategy(), mode in mode_strategy(), si in 0usize..6, sj in 0usize..6) {
        let (nx, ny) = g.dims();
        let src = ((si % nx) as i64, (sj % ny) as i64);
        let targets: Vec<Site> = (src.0..nx as i64).flat_map(|i| (src.1..ny as i64).map(move |j| (i, j))).collect();
        let q = PassageQuery { field: &g, mode, source: Source::Point { i: src.0, j: src.1 }, targets };
        for v in passage_values(&q).unwrap() {
            let want = brute(&g, mode, src, v.target);
            prop_assert!(close(v.value, want), "{:?}: {} vs {}", v.target, v.value, want);
        }
    }

    #[test]
    fn raising_a_weight_never_lowers_the_value(g in grid_strategy(), mode in mode_strategy(), bump in 0.0f64..3.0, k in 0usize..36) {
        let (nx, ny) = g.dims();
        let site = ((k % nx) as i64, ((k / 6) % ny) as i64);
        let end = (nx as i64 - 1, ny as i64 - 1);
        let before = point_to_point(&g, mode, (0, 0), end).unwrap();
        let mut h = g.clone();
        h.set(site.0, site.1, g.get(site.0, site.1) + bump);
        let after = point_to_point(&h, mode, (0, 0), end).unwrap();
        prop_assert!(after >= before - 1e-12);
        prop_assert!(after <= before + bump + 1e-9);
    }

    #[test]
    fn compensator_has_the_engine_sign(seed in 0u64..1000, p in (0i64..12, 0i64..12), d in (0i64..12, 0i64..12), mode in mode_strategy()) {
        let f = WeightField::exponential(seed);
        let source = match mode {
            SemiringMode::LogSumExp { .. } => Source::Point { i: 0, j: 0 },
            _ => Source::HalfLineOrCorner,
        };
        let x = superadditivity_check(&f, mode, source, p, (p.0 + d.0, p.1 + d.1)).unwrap();
        match mode {
            SemiringMode::MinPlus => prop_assert!(x <= 0.0),
            _ => prop_assert!(x >= 0.0),
        }
    }

    #[test]
    fn one_sweep_agrees_with_separate_sweeps(seed in 0u64..1000, pts in prop::collection::vec((0i64..25, 0i64..25), 1..8)) {
        let f = WeightField::exponential(sample_seed(seed, 1));
        let all = passage_batch(&f, SemiringMode::MaxPlus, Source::HalfLineOrCorner, &pts).unwrap();
        for (t, v) in pts.iter().zip(&all) {
            let one = passage_batch(&f, SemiringMode::MaxPlus, Source::HalfLineOrCorner, &[*t]).unwrap()[0];
            prop_assert_eq!(one, *v);
        }
    }

    #[test]
    fn free_energy_is_bracketed(g in grid_strategy(), beta in 0.1f64..5.0) {
        let (nx, ny) = g.dims();
        let end = (nx as i64 - 1, ny as i64 - 1);
        let paths = totals(&g, (0, 0), end).len() as f64;
        let max = point_to_point(&g, SemiringMode::MaxPlus, (0, 0), end).unwrap();
        let lse = point_to_point(&g, SemiringMode::LogSumExp { beta }, (0, 0), end).unwrap();
        prop_assert!(lse >= max - 1e-9);
        prop_assert!(lse <= max + paths.ln() / beta + 1e-9);
    }
}
