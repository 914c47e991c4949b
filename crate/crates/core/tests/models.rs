use slowdec::environment::{sample_seed, WeightField};
use slowdec::models::{
    corner_passage_grid, current_from_height, height_from_grid, height_from_passage,
    map_tasep_initial_condition, ModelSpec, TasepIc,
};
use slowdec::pasep::{simulate, PasepConfig, PasepIc};
use slowdec::refdist::ks_two_sample;

#[test]
fn heights_are_lattice_paths_above_the_wedge() {
    let f = WeightField::exponential(17);
    let n = 80;
    let grid = corner_passage_grid(&f, n).unwrap();
    let mut prev: Option<Vec<i64>> = None;
    for t in [5.0, 15.0, 30.0] {
        let h = height_from_grid(&grid, n, t, (-20, 20)).unwrap();
        for (k, w) in h.values.windows(2).enumerate() {
            assert_eq!((w[1] - w[0]).abs(), 1, "slope at {}", h.x0 + k as i64);
        }
        for x in -20..=20 {
            let v = h.at(x).unwrap();
            assert!(v >= x.abs());
            assert_eq!((v - x).rem_euclid(2), 0);
        }
        if let Some(p) = &prev {
            assert!(
                p.iter().zip(&h.values).all(|(a, b)| a <= b),
                "heights must grow in time"
            );
        }
        prev = Some(h.values);
    }
}

#[test]
fn a_box_that_is_too_small_is_reported() {
    let f = WeightField::exponential(1);
    assert!(height_from_passage(&f, 100.0, (0, 0), 10).is_err());
}

#[test]
fn lattice_and_particle_heights_share_a_law() {
    // Totally asymmetric step data: the passage route and the particle route
    // describe the same height at the origin.
    let t = 12.0;
    let n = 2000;
    let lpp: Vec<f64> = (0..n)
        .map(|k| {
            let h =
                height_from_passage(&WeightField::exponential(sample_seed(3, k)), t, (0, 0), 30)
                    .unwrap();
            h.at(0).unwrap() as f64
        })
        .collect();
    let tasep: Vec<f64> = (0..n)
        .map(|k| {
            let c = PasepConfig::auto(1.0, PasepIc::Step, t, sample_seed(4, k), 2, 2.0).unwrap();
            simulate(&c, &[t]).unwrap()[0].height(0).unwrap() as f64
        })
        .collect();
    assert!(ks_two_sample(&lpp, &tasep).unwrap() < 0.06);
}

#[test]
fn current_counts_crossings() {
    assert_eq!(current_from_height(10.0, 0.0), 5.0);
    assert_eq!(current_from_height(3.0, 3.0), 0.0);
}

#[test]
fn initial_conditions_map_to_models() {
    assert_eq!(
        map_tasep_initial_condition(TasepIc::Step).unwrap(),
        ModelSpec::CornerGrowthStep
    );
    assert_eq!(
        map_tasep_initial_condition(TasepIc::Flat).unwrap(),
        ModelSpec::FlatTasep
    );
    assert!(map_tasep_initial_condition(TasepIc::TwoSidedBernoulli {
        rho_minus: 1.2,
        rho_plus: 0.1
    })
    .is_err());
}
