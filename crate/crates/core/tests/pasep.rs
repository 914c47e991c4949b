use proptest::prelude::*;
use slowdec::pasep::{
    attractiveness, coupled_step_reset, simulate_from, PasepConfig, PasepIc, PasepState,
};

fn lone_particle_displacement(p: f64, t: f64, seed: u64) -> i64 {
    let cfg = PasepConfig::auto(p, PasepIc::Step, t, seed, 0, 3.0).unwrap();
    let l = cfg.half_width;
    let occ: Vec<bool> = (-l..=l).map(|y| y == 0).collect();
    let s = simulate_from(&cfg, PasepState::from_occupation(-l, &occ), &[t])
        .unwrap()
        .remove(0);
    assert_eq!(s.particle_count(), 1);
    (-l..=l).find(|&y| s.occupied(y) == Some(true)).unwrap()
}

#[test]
fn lone_particle_drifts_at_unit_speed() {
    let n = 2000;
    let t = 20.0;
    let mean = (0..n)
        .map(|k| lone_particle_displacement(1.0, t, k) as f64)
        .sum::<f64>()
        / n as f64;
    // Poisson(t) jumps: standard error sqrt(t / n) = 0.1.
    assert!((mean - t).abs() < 0.4, "mean displacement {mean}");
}

#[test]
fn partially_asymmetric_drift_is_p_minus_q() {
    let n = 2000;
    let t = 20.0;
    let mean = (0..n)
        .map(|k| lone_particle_displacement(0.75, t, 10_000 + k) as f64)
        .sum::<f64>()
        / n as f64;
    assert!((mean - 0.5 * t).abs() < 0.4, "mean displacement {mean}");
}

#[test]
fn reset_decomposition_is_exact() {
    for seed in 0..200 {
        let cfg = PasepConfig::auto(
            0.8,
            PasepIc::StepBernoulli { rho: 0.6 },
            60.0,
            seed,
            12,
            1.5,
        )
        .unwrap();
        let r = coupled_step_reset(&cfg, 0.1, 0.5, 0.5, 40.0).unwrap();
        assert!(r.x_t <= 0.0);
        assert_eq!(r.i_main, r.i_base + r.i_reset + r.x_t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn basic_coupling_preserves_order(seed in 0u64..10_000, p in 0.55f64..1.0, x0 in -6i64..=6, lift in 0i64..5, rho in 0.1f64..0.9) {
        let ic = PasepIc::TwoSidedBernoulli { rho_minus: rho, rho_plus: 1.0 - rho };
        let cfg = PasepConfig::auto(p, ic, 30.0, seed, 8, 1.5).unwrap();
        let c = 2 * lift + x0.rem_euclid(2);
        prop_assert_eq!(attractiveness(&cfg, x0, c, &[1.0, 10.0, 30.0]).unwrap(), 0);
    }
}
