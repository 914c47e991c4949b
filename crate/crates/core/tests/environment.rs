use slowdec::environment::{
    BoundarySpec, DistributionSpec, PointField, Rect, Region, Support, WeightField,
};

fn moments(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    (
        m,
        xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0),
    )
}

fn block(f: &WeightField, n: i64) -> Vec<f64> {
    (0..n)
        .flat_map(|i| (0..n).map(move |j| f.weight(i, j).unwrap()))
        .collect()
}

#[test]
fn exponential_weights_have_unit_moments() {
    let (m, v) = moments(&block(&WeightField::exponential(11), 400));
    assert!((m - 1.0).abs() < 0.01, "mean {m}");
    assert!((v - 1.0).abs() < 0.03, "variance {v}");
}

#[test]
fn geometric_weights_match_their_law() {
    let spec = DistributionSpec::Geometric { p: 0.3 };
    let f = WeightField::new(5, Support::Quadrant, spec, BoundarySpec::None).unwrap();
    let xs = block(&f, 400);
    assert!(xs.iter().all(|x| x.fract() == 0.0 && *x >= 0.0));
    let (m, v) = moments(&xs);
    assert!((m - spec.mean()).abs() < 0.03 * spec.mean(), "mean {m}");
    assert!(
        (v - spec.variance()).abs() < 0.06 * spec.variance(),
        "variance {v}"
    );
}

#[test]
fn boundary_rows_use_their_rates() {
    let f = WeightField::new(
        2,
        Support::Quadrant,
        DistributionSpec::Exponential { rate: 1.0 },
        BoundarySpec::TwoSided { pi: 0.5, eta: 4.0 },
    )
    .unwrap();
    assert_eq!(f.weight(0, 0).unwrap(), 0.0);
    let row: Vec<f64> = (1..100_001).map(|i| f.weight(i, 0).unwrap()).collect();
    let col: Vec<f64> = (1..100_001).map(|j| f.weight(0, j).unwrap()).collect();
    assert!((moments(&row).0 - 2.0).abs() < 0.03);
    assert!((moments(&col).0 - 0.25).abs() < 0.004);
}

#[test]
fn neighbours_and_seeds_are_uncorrelated() {
    let a = WeightField::exponential(1);
    let b = a.reseeded(2);
    let n = 300;
    let x: Vec<f64> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| a.weight(i, j).unwrap())
        .collect();
    let right: Vec<f64> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j + 1)))
        .map(|(i, j)| a.weight(i, j).unwrap())
        .collect();
    let other: Vec<f64> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| b.weight(i, j).unwrap())
        .collect();
    let corr = |u: &[f64], w: &[f64]| {
        let (mu, vu) = moments(u);
        let (mw, vw) = moments(w);
        u.iter()
            .zip(w)
            .map(|(p, q)| (p - mu) * (q - mw))
            .sum::<f64>()
            / ((u.len() as f64 - 1.0) * (vu * vw).sqrt())
    };
    assert!(corr(&x, &right).abs() < 0.015);
    assert!(corr(&x, &other).abs() < 0.015);
}

#[test]
fn weights_are_pure_functions_of_seed_and_site() {
    let f = WeightField::exponential(9);
    assert_eq!(
        f.weight(123, 456).unwrap(),
        WeightField::exponential(9).weight(123, 456).unwrap()
    );
    assert!(f.weight(-1, 3).is_err());
}

#[test]
fn poisson_counts_have_poisson_moments() {
    let r = Rect::new(0.0, 0.0, 10.0, 5.0);
    let counts: Vec<f64> = (0..2000)
        .map(|s| {
            PointField::new(s, 2.0, Region::Rect(r), None)
                .unwrap()
                .sample_points(r)
                .unwrap()
                .len() as f64
        })
        .collect();
    let (m, v) = moments(&counts);
    assert!((m - 100.0).abs() < 1.0, "mean {m}");
    assert!((v - 100.0).abs() < 10.0, "variance {v}");
}

#[test]
fn poisson_windows_are_consistent() {
    let big = Rect::new(0.0, 0.0, 30.0, 30.0);
    let f = PointField::new(4, 1.0, Region::Rect(big), None).unwrap();
    let all = f.sample_points(big).unwrap();
    let sub = Rect::new(5.0, 7.0, 20.0, 18.0);
    let mut inside: Vec<_> = all.into_iter().filter(|p| sub.contains(p.0, p.1)).collect();
    let mut direct = f.sample_points(sub).unwrap();
    let key = |a: &(f64, f64), b: &(f64, f64)| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1));
    inside.sort_by(key);
    direct.sort_by(key);
    assert_eq!(inside, direct);
}
