use proptest::prelude::*;
use slowdec::environment::{PointField, Rect, Region};
use slowdec::passage::{lis_length, png_point_to_point};

/// Quadratic longest chain, strictly increasing in both coordinates.
fn slow_lis(points: &[(f64, f64)]) -> usize {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut best = vec![1usize; pts.len()];
    for i in 0..pts.len() {
        for j in 0..i {
            if pts[j].0 < pts[i].0 && pts[j].1 < pts[i].1 {
                best[i] = best[i].max(best[j] + 1);
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}

proptest! {
    #[test]
    fn patience_sorting_matches_quadratic(pts in prop::collection::vec((0.0f64..10.0, 0.0f64..10.0), 0..120)) {
        prop_assert_eq!(lis_length(&pts), slow_lis(&pts));
    }

    #[test]
    fn ties_never_extend_a_chain(xs in prop::collection::vec(0u8..6, 0..60), ys in prop::collection::vec(0u8..6, 0..60)) {
        let pts: Vec<(f64, f64)> = xs.iter().zip(&ys).map(|(&x, &y)| (x as f64, y as f64)).collect();
        prop_assert_eq!(lis_length(&pts), slow_lis(&pts));
        prop_assert!(lis_length(&pts) <= 6);
    }
}

#[test]
fn poisson_box_values_grow_with_the_box() {
    let f = PointField::new(3, 1.0, Region::Rect(Rect::new(0.0, 0.0, 50.0, 50.0)), None).unwrap();
    let small = png_point_to_point(&f, (0.0, 0.0), (20.0, 20.0)).unwrap();
    let large = png_point_to_point(&f, (0.0, 0.0), (40.0, 40.0)).unwrap();
    assert!(small <= large);
    let pts = f.sample_points(Rect::new(0.0, 0.0, 40.0, 40.0)).unwrap();
    assert_eq!(large, slow_lis(&pts));
}
