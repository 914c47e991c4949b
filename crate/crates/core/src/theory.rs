//! Closed-form limit shapes, scaling constants and characteristic directions.

use serde::{Deserialize, Serialize};

use crate::error::{config, Result};

/// Regime of the two-sided boundary model (plus the plain bulk case).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
    Case6,
    BulkGue,
}

/// Limit law of the rescaled fluctuations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitLaw {
    Gue,
    GoeSq,
    F0,
    Gaussian,
    MaxTwoGaussians,
}

/// Constants attached to a model and a macroscopic point `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicInfo {
    pub case: Case,
    /// Macroscopic point `p`.
    pub p: (f64, f64),
    pub ell_hl: f64,
    /// Point-to-point shape along `u`; absent when there is no characteristic.
    pub ell_pp: Option<f64>,
    pub gamma_hl: f64,
    pub gamma_pp: f64,
    /// Fluctuation scale of the half-line value; absent when only an empirical
    /// estimate is available.
    pub c_hl: Option<f64>,
    /// Fluctuation scale of the point-to-point value along `u`.
    pub c_pp: Option<f64>,
    /// Characteristic direction.
    pub u: Option<(f64, f64)>,
    pub law: LimitLaw,
    pub law_pp: LimitLaw,
    pub slow_decorrelation: bool,
    /// Exclusive upper end of the admissible `nu` range.
    pub nu_max: f64,
    pub kappa: f64,
    /// `None` encodes an infinite value (no boundary on that side).
    pub kappa_eta: Option<f64>,
    pub kappa_pi: f64,
    pub kappa_sh: Option<f64>,
}

impl CharacteristicInfo {
    pub fn nu_admissible(&self, nu: f64) -> bool {
        nu > 0.0 && nu < self.nu_max
    }
}

/// Asymptotic corner-growth height `lim h(vt, t) / t`.
pub fn corner_limit_shape(v: f64) -> f64 {
    if v.abs() < 1.0 {
        0.5 * (v * v + 1.0)
    } else {
        v.abs()
    }
}

/// Step-initial PASEP height shape with drift `gamma = p - q`.
pub fn pasep_step_shape(v: f64, gamma: f64) -> f64 {
    gamma * corner_limit_shape(v / gamma)
}

/// Slope `1 - 2 rho` of TASEP characteristics at density `rho`.
pub fn tasep_characteristic_speed(rho: f64) -> f64 {
    1.0 - 2.0 * rho
}

/// Rate-1 exponential point-to-point shape `(sqrt u1 + sqrt u2)^2`.
pub fn exp_pp_shape(u: (f64, f64)) -> f64 {
    let s = u.0.sqrt() + u.1.sqrt();
    s * s
}

/// Fluctuation scale of rate-1 exponential point-to-point values in direction `u`.
pub fn exp_pp_scale(u: (f64, f64)) -> f64 {
    (u.0.sqrt() + u.1.sqrt()).powf(4.0 / 3.0) * (u.0 * u.1).powf(-1.0 / 6.0)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Bulk corner growth from the origin towards `p`.
pub fn corner_growth_info(p: (f64, f64)) -> Result<CharacteristicInfo> {
    if !(p.0 > 0.0 && p.1 > 0.0) {
        return config(format!("direction {p:?} must have positive entries"));
    }
    Ok(CharacteristicInfo {
        case: Case::BulkGue,
        p,
        ell_hl: exp_pp_shape(p),
        ell_pp: Some(exp_pp_shape(p)),
        gamma_hl: 1.0 / 3.0,
        gamma_pp: 1.0 / 3.0,
        c_hl: Some(exp_pp_scale(p)),
        c_pp: Some(exp_pp_scale(p)),
        u: Some(p),
        law: LimitLaw::Gue,
        law_pp: LimitLaw::Gue,
        slow_decorrelation: true,
        nu_max: 1.0,
        kappa: (p.1 / p.0).sqrt(),
        kappa_eta: None,
        kappa_pi: 0.0,
        kappa_sh: None,
    })
}

/// Six-case classification of two-sided boundary LPP at `p = (1, kappa^2)`.
///
/// `eta >= 1` removes the column boundary (`kappa_eta` infinite) and
/// `pi >= 1` removes the row boundary (`kappa_pi = 0`).
pub fn classify_two_sided(pi: f64, eta: f64, kappa: f64) -> Result<CharacteristicInfo> {
    if !(pi > 0.0 && eta > 0.0 && kappa > 0.0)
        || !(pi.is_finite() && eta.is_finite() && kappa.is_finite())
    {
        return config(format!(
            "need pi, eta, kappa > 0, got ({pi}, {eta}, {kappa})"
        ));
    }
    let kappa_eta = (eta < 1.0).then(|| eta / (1.0 - eta));
    let kappa_pi = if pi < 1.0 { (1.0 - pi) / pi } else { 0.0 };
    let kappa_sh = (pi < 1.0 && eta < 1.0).then(|| (eta * (1.0 - pi) / (pi * (1.0 - eta))).sqrt());
    let p = (1.0, kappa * kappa);
    let k2 = kappa * kappa;
    let rarefaction = pi >= 1.0 || eta >= 1.0 || pi + eta >= 1.0;

    let below_eta = kappa_eta.is_none_or(|ke| kappa <= ke || close(kappa, ke));
    let above_pi = kappa >= kappa_pi || close(kappa, kappa_pi);
    let column = |case| {
        (
            case,
            k2 / eta + 1.0 / (1.0 - eta),
            (1.0, kappa_eta.unwrap().powi(2)),
        )
    };
    let row = |case| (case, 1.0 / pi + k2 / (1.0 - pi), (1.0, kappa_pi * kappa_pi));

    let gaussian = |case: Case, ell: f64, u: (f64, f64)| CharacteristicInfo {
        case,
        p,
        ell_hl: ell,
        ell_pp: Some(exp_pp_shape(u)),
        gamma_hl: 0.5,
        gamma_pp: 1.0 / 3.0,
        c_hl: None,
        c_pp: Some(exp_pp_scale(u)),
        u: Some(u),
        law: LimitLaw::Gaussian,
        law_pp: LimitLaw::Gue,
        slow_decorrelation: true,
        nu_max: 1.0,
        kappa,
        kappa_eta,
        kappa_pi,
        kappa_sh,
    };

    if rarefaction {
        if below_eta && above_pi {
            let eq_eta = kappa_eta.is_some_and(|ke| close(kappa, ke));
            let eq_pi = close(kappa, kappa_pi);
            let law = match (eq_eta, eq_pi) {
                (false, false) => LimitLaw::Gue,
                (true, true) => LimitLaw::F0,
                _ => LimitLaw::GoeSq,
            };
            return Ok(CharacteristicInfo {
                case: Case::Case1,
                p,
                ell_hl: (1.0 + kappa) * (1.0 + kappa),
                ell_pp: Some(exp_pp_shape(p)),
                gamma_hl: 1.0 / 3.0,
                gamma_pp: 1.0 / 3.0,
                c_hl: Some(exp_pp_scale(p)),
                c_pp: Some(exp_pp_scale(p)),
                u: Some(p),
                law,
                law_pp: LimitLaw::Gue,
                slow_decorrelation: true,
                nu_max: 1.0,
                kappa,
                kappa_eta,
                kappa_pi,
                kappa_sh,
            });
        }
        let (case, ell, u) = if !below_eta {
            column(Case::Case2)
        } else {
            row(Case::Case3)
        };
        return Ok(gaussian(case, ell, u));
    }
    let ksh = kappa_sh.expect("both boundaries present");
    if close(kappa, ksh) {
        return Ok(CharacteristicInfo {
            case: Case::Case6,
            p,
            // Both neighbouring regimes meet here; this equals 1/(pi(1-pi)) when pi = eta.
            ell_hl: 1.0 / (pi * (1.0 - eta)),
            ell_pp: None,
            gamma_hl: 0.5,
            gamma_pp: 1.0 / 3.0,
            c_hl: None,
            c_pp: None,
            u: None,
            law: LimitLaw::MaxTwoGaussians,
            law_pp: LimitLaw::Gue,
            slow_decorrelation: false,
            nu_max: 1.0,
            kappa,
            kappa_eta,
            kappa_pi,
            kappa_sh,
        });
    }
    let (case, ell, u) = if kappa > ksh {
        column(Case::Case4)
    } else {
        row(Case::Case5)
    };
    Ok(gaussian(case, ell, u))
}

/// Law-of-large-numbers shape of two-sided boundary LPP at an arbitrary
/// point `(x, y)` of the quadrant.
pub fn two_sided_shape(pi: f64, eta: f64, x: f64, y: f64) -> f64 {
    if x <= 0.0 || y <= 0.0 {
        return x.max(0.0) / pi + y.max(0.0) / eta;
    }
    let kappa = (y / x).sqrt();
    let info = classify_two_sided(pi, eta, kappa).expect("validated parameters");
    match info.case {
        Case::Case6 => x * (1.0 / pi + kappa * kappa / (1.0 - pi)),
        _ => x * info.ell_hl,
    }
}

/// The corner-growth scaling frame around `(t/4, t/4)` at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFrame {
    pub t: f64,
    pub nu: f64,
    pub tau: f64,
    pub theta: f64,
    pub s: f64,
}

impl ScalingFrame {
    pub fn new(t: f64, nu: f64, tau: f64, theta: f64, s: f64) -> Result<Self> {
        if !(t > 0.0) || !(0.0..1.0).contains(&nu) {
            return config(format!(
                "frame needs t > 0 and nu in [0,1), got t={t}, nu={nu}"
            ));
        }
        Ok(Self {
            t,
            nu,
            tau,
            theta,
            s,
        })
    }

    /// Fixed `y = t/4` slice.
    pub fn slice(t: f64, nu: f64, tau: f64, s: f64) -> Result<Self> {
        let theta = tau * 2f64.powf(4.0 / 3.0) * t.powf(2.0 / 3.0) / t.powf(nu);
        Self::new(t, nu, tau, theta, s)
    }

    /// Level set `ell = t`.
    pub fn level(t: f64, nu: f64, tau: f64, s: f64) -> Result<Self> {
        let theta = -(s - tau * tau) * 2f64.powf(2.0 / 3.0) * t.powf(1.0 / 3.0) / t.powf(nu);
        Self::new(t, nu, tau, theta, s)
    }

    /// Off-line points at time `t + theta_tilde t^nu`.
    pub fn off_line(t: f64, nu: f64, tau: f64, theta_tilde: f64, s: f64) -> Result<Self> {
        let theta =
            theta_tilde - (s - tau * tau) * 2f64.powf(2.0 / 3.0) * t.powf(1.0 / 3.0) / t.powf(nu);
        Self::new(t, nu, tau, theta, s)
    }

    fn centre(&self) -> f64 {
        0.25 * (self.t + self.theta * self.t.powf(self.nu))
    }

    fn spread(&self) -> f64 {
        self.tau * 2f64.powf(-2.0 / 3.0) * self.t.powf(2.0 / 3.0)
    }

    /// Unfloored coordinates.
    pub fn xy_exact(&self) -> (f64, f64) {
        (self.centre() + self.spread(), self.centre() - self.spread())
    }

    pub fn x(&self) -> i64 {
        self.xy_exact().0.floor() as i64
    }

    pub fn y(&self) -> i64 {
        self.xy_exact().1.floor() as i64
    }

    pub fn ell(&self) -> f64 {
        let t = self.t;
        t + self.theta * t.powf(self.nu)
            + (self.s - self.tau * self.tau) * 2f64.powf(2.0 / 3.0) * t.powf(1.0 / 3.0)
    }

    /// Time ratio `1 + theta t^(nu-1)` relating this frame's time to `t`.
    pub fn time_ratio(&self) -> f64 {
        1.0 + self.theta * self.t.powf(self.nu - 1.0)
    }
}

/// `(x, y, ell)` of the scaling frame with floors applied to `x` and `y`.
pub fn scaling_frame(t: f64, nu: f64, tau: f64, theta: f64, s: f64) -> Result<(i64, i64, f64)> {
    let f = ScalingFrame::new(t, nu, tau, theta, s)?;
    Ok((f.x(), f.y(), f.ell()))
}

/// The line `a x + b y = c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceLine {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl ReferenceLine {
    /// `y = y0`.
    pub fn horizontal(y0: f64) -> Self {
        Self {
            a: 0.0,
            b: 1.0,
            c: y0,
        }
    }

    /// `x + y = sum`.
    pub fn antidiagonal(sum: f64) -> Self {
        Self {
            a: 1.0,
            b: 1.0,
            c: sum,
        }
    }
}

/// Result of moving a point along a direction onto a reference line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub x: f64,
    pub y: f64,
    /// `(x - y) / (2^{1/3} t^{2/3})` at the projected point.
    pub tau: f64,
}

/// Intersects the line through `point` with direction `u` and `line`.
pub fn project_to_reference_line(
    point: (f64, f64),
    line: ReferenceLine,
    u: (f64, f64),
    t: f64,
) -> Result<Projection> {
    if !(u.0 >= 0.0 && u.1 >= 0.0 && u.0 + u.1 > 0.0) {
        return config(format!("direction {u:?} is not time-like"));
    }
    let denom = line.a * u.0 + line.b * u.1;
    if denom.abs() < 1e-14 * (line.a.abs() + line.b.abs()) {
        return config("direction is parallel to the reference line");
    }
    let lambda = (line.c - line.a * point.0 - line.b * point.1) / denom;
    let x = point.0 + lambda * u.0;
    let y = point.1 + lambda * u.1;
    Ok(Projection {
        x,
        y,
        tau: (x - y) / (2f64.powf(1.0 / 3.0) * t.powf(2.0 / 3.0)),
    })
}

/// Which normalized fluctuation to form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chi {
    /// Half-line value at `tp`.
    One,
    /// Half-line value at `tp + t^nu u`.
    Two,
    /// Point-to-point value over `t^nu u`.
    Three,
}

/// Normalized fluctuation variable.
///
/// `scale` overrides the theoretical `c_HL` (empirical Gaussian standardization).
pub fn rescale(
    raw: f64,
    t: f64,
    nu: f64,
    info: &CharacteristicInfo,
    which: Chi,
    scale: Option<f64>,
) -> Result<f64> {
    let tn = t.powf(nu);
    let need = |v: Option<f64>, what: &str| {
        v.ok_or_else(|| {
            crate::Error::Config(format!("{what} is not available for {:?}", info.case))
        })
    };
    match which {
        Chi::One | Chi::Two => {
            let c = match scale {
                Some(c) => c,
                None => need(info.c_hl, "c_HL")?,
            };
            let mut centre = t * info.ell_hl;
            if which == Chi::Two {
                centre += tn * need(info.ell_pp, "ell_PP")?;
            }
            Ok((raw - centre) / (c * t.powf(info.gamma_hl)))
        }
        Chi::Three => {
            let c = need(info.c_pp, "c_PP")?;
            Ok((raw - tn * need(info.ell_pp, "ell_PP")?) / (c * tn.powf(info.gamma_pp)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn limit_shape_values() {
        assert_eq!(corner_limit_shape(0.0), 0.5);
        assert_eq!(corner_limit_shape(0.5), 0.625);
        assert_eq!(corner_limit_shape(2.0), 2.0);
        assert_eq!(corner_limit_shape(-1.0), 1.0);
    }

    #[test]
    fn characteristic_speeds() {
        assert_eq!(tasep_characteristic_speed(0.5), 0.0);
        assert_eq!(tasep_characteristic_speed(0.0), 1.0);
        assert_eq!(tasep_characteristic_speed(1.0), -1.0);
    }

    #[test]
    fn no_boundary_is_case_one() {
        let c = classify_two_sided(1.0, 1.0, 1.0).unwrap();
        assert_eq!(c.case, Case::Case1);
        assert_eq!(c.ell_hl, 4.0);
        assert_eq!(c.gamma_hl, 1.0 / 3.0);
        assert_eq!(c.law, LimitLaw::Gue);
        assert_eq!(c.u, Some((1.0, 1.0)));
        assert!(c.slow_decorrelation);
        assert_relative_eq!(c.c_hl.unwrap(), 2f64.powf(4.0 / 3.0), epsilon = 1e-12);
    }

    #[test]
    fn column_dominated_case() {
        let c = classify_two_sided(2.0 / 3.0, 2.0 / 3.0, 3.0).unwrap();
        assert_eq!(c.case, Case::Case2);
        assert_relative_eq!(c.ell_hl, 16.5, epsilon = 1e-12);
        assert_eq!(c.gamma_hl, 0.5);
        assert_eq!(c.law, LimitLaw::Gaussian);
        let u = c.u.unwrap();
        assert_relative_eq!(u.1, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn shock_case() {
        let c = classify_two_sided(1.0 / 3.0, 1.0 / 3.0, 1.0).unwrap();
        assert_eq!(c.case, Case::Case6);
        assert_relative_eq!(c.ell_hl, 4.5, epsilon = 1e-12);
        assert_eq!(c.law, LimitLaw::MaxTwoGaussians);
        assert!(!c.slow_decorrelation);
    }

    #[test]
    fn shock_value_is_continuous() {
        let (pi, eta) = (0.2, 0.5);
        let ksh = classify_two_sided(pi, eta, 1.0).unwrap().kappa_sh.unwrap();
        let at = classify_two_sided(pi, eta, ksh).unwrap();
        assert_eq!(at.case, Case::Case6);
        for k in [ksh * (1.0 + 1e-7), ksh * (1.0 - 1e-7)] {
            let near = classify_two_sided(pi, eta, k).unwrap();
            assert!((near.ell_hl - at.ell_hl).abs() < 1e-5, "{near:?}");
        }
    }

    #[test]
    fn boundary_equalities_change_the_law() {
        let c = classify_two_sided(2.0 / 3.0, 2.0 / 3.0, 2.0).unwrap();
        assert_eq!((c.case, c.law), (Case::Case1, LimitLaw::GoeSq));
        let c = classify_two_sided(0.5, 0.5, 1.0).unwrap();
        assert_eq!((c.case, c.law), (Case::Case1, LimitLaw::F0));
    }

    #[test]
    fn frame_special_choices() {
        let (t, nu, tau, s) = (1000.0, 0.5, 0.7, -0.3);
        let f = ScalingFrame::slice(t, nu, tau, s).unwrap();
        let (x, y) = f.xy_exact();
        assert_relative_eq!(
            x,
            t / 4.0 + tau * 2f64.powf(1.0 / 3.0) * t.powf(2.0 / 3.0),
            epsilon = 1e-9
        );
        assert_relative_eq!(y, t / 4.0, epsilon = 1e-9);
        let l = f.ell();
        let want = t
            + tau * 2f64.powf(4.0 / 3.0) * t.powf(2.0 / 3.0)
            + (s - tau * tau) * 2f64.powf(2.0 / 3.0) * t.powf(1.0 / 3.0);
        assert_relative_eq!(l, want, epsilon = 1e-9);

        let g = ScalingFrame::level(t, nu, tau, s).unwrap();
        assert_relative_eq!(g.ell(), t, epsilon = 1e-9);
        let (x, y) = g.xy_exact();
        assert_relative_eq!(
            x - y,
            tau * 2f64.powf(1.0 / 3.0) * t.powf(2.0 / 3.0),
            epsilon = 1e-9
        );
        assert_relative_eq!(
            x + y,
            0.5 * t - (s - tau * tau) * 2f64.powf(-1.0 / 3.0) * t.powf(1.0 / 3.0),
            epsilon = 1e-9
        );

        assert_eq!(scaling_frame(t, nu, 0.0, 0.0, 0.0).unwrap(), (250, 250, t));
    }

    #[test]
    fn projection_geometry() {
        let line = ReferenceLine::horizontal(250.0);
        let p = project_to_reference_line((300.0, 250.0), line, (1.0, 1.0), 1000.0).unwrap();
        assert_eq!((p.x, p.y), (300.0, 250.0));
        let q = project_to_reference_line((307.0, 257.0), line, (1.0, 1.0), 1000.0).unwrap();
        assert_eq!((q.x, q.y), (300.0, 250.0));
        assert!(project_to_reference_line((1.0, 1.0), line, (1.0, 0.0), 1000.0).is_err());
    }

    #[test]
    fn rescale_centres() {
        let info = classify_two_sided(1.0, 1.0, 1.0).unwrap();
        assert_eq!(
            rescale(4000.0, 1000.0, 0.5, &info, Chi::One, None).unwrap(),
            0.0
        );
        let two = 4000.0 + 4.0 * 1000f64.sqrt();
        assert_relative_eq!(
            rescale(two, 1000.0, 0.5, &info, Chi::Two, None).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }
}
