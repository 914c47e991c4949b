//! Slow decorrelation along a direction: both passage values of a sample come
//! from one coupled environment.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{binomial_se, correlation, mean, std_dev, Range};
use crate::environment::sample_seed;
use crate::error::{config, Result};
use crate::models::ModelSpec;
use crate::passage::{
    passage_batch, point_to_point_excl, superadditivity_check, Lattice, SemiringMode, Site, Source,
};
use crate::refdist::ks_two_sample;
use crate::theory::{
    classify_two_sided, exp_pp_scale, exp_pp_shape, two_sided_shape, Case, CharacteristicInfo,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecorrConfig {
    pub model: ModelSpec,
    /// The macroscopic point is `p = (1, kappa^2)`.
    pub kappa: f64,
    /// Shift direction; defaults to the characteristic direction.
    #[serde(default)]
    pub u: Option<(f64, f64)>,
    pub nu: f64,
    pub t_grid: Vec<f64>,
    pub m_grid: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    /// Permit configurations without slow decorrelation (the shock point).
    #[serde(default)]
    pub allow_no_decorrelation: bool,
}

/// Values of one sample at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecorrSample {
    pub sample: usize,
    pub t: f64,
    pub l_p: f64,
    pub l_q: f64,
    /// Point-to-point value from `tp` (excluded) to the shifted point.
    pub pp: f64,
    pub delta: f64,
    pub x_t: f64,
    pub chi1: f64,
    pub chi2: f64,
    pub chi3: f64,
}

/// Tail estimate `P(|delta| >= m t^gamma)` at one `(t, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub t: f64,
    pub m: f64,
    pub threshold: f64,
    pub hits: usize,
    pub tail: f64,
    pub se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSummary {
    pub t: f64,
    /// Lattice sites actually used for `tp` and the shifted point.
    pub p_site: Site,
    pub q_site: Site,
    /// Exponent realized by the rounded shift.
    pub achieved_nu: f64,
    /// Deterministic part subtracted from the increment.
    pub centre_pp: f64,
    pub compensator: Range,
    pub violations: usize,
    pub corr_chi12: f64,
    pub delta_mean: f64,
    pub delta_std: f64,
    /// Mean of the compensator in units of the half-line fluctuation scale.
    pub gap_scaled_mean: f64,
    /// Two-sample distance between `chi2` and `chi1` plus the rescaled `chi3`.
    pub ks_decomposition: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecorrReport {
    pub case: Option<Case>,
    pub p: (f64, f64),
    pub u: (f64, f64),
    pub nu: f64,
    pub gamma_hl: f64,
    pub samples: usize,
    /// Half-line fluctuation constant used for the `chi` variables.
    pub scale: f64,
    pub scale_empirical: bool,
    pub centring_empirical: bool,
    pub times: Vec<TimeSummary>,
    pub tails: Vec<TailRow>,
    pub per_sample: Vec<DecorrSample>,
    pub notes: Vec<String>,
}

impl DecorrReport {
    pub fn tail(&self, t: f64, m: f64) -> Option<&TailRow> {
        self.tails.iter().find(|r| r.t == t && r.m == m)
    }

    pub fn time(&self, t: f64) -> Option<&TimeSummary> {
        self.times.iter().find(|r| r.t == t)
    }

    pub fn violations(&self) -> usize {
        self.times.iter().map(|r| r.violations).sum()
    }
}

/// Theory constants of a lattice model at `p = (1, kappa^2)`; `None` when the
/// model has no closed-form constants and must be centred empirically.
pub fn model_info(model: &ModelSpec, kappa: f64) -> Result<Option<CharacteristicInfo>> {
    match model {
        ModelSpec::CornerGrowthStep => classify_two_sided(1.0, 1.0, kappa).map(Some),
        ModelSpec::TwoSidedBoundaryLpp { pi, eta } => {
            classify_two_sided(*pi, *eta, kappa).map(Some)
        }
        ModelSpec::Polymer { .. } | ModelSpec::Fpp { .. } => Ok(None),
        other => config(format!("no decorrelation harness for {other:?}")),
    }
}

/// Law-of-large-numbers shape at a macroscopic point, where known.
pub fn model_shape(model: &ModelSpec, x: f64, y: f64) -> Option<f64> {
    match model {
        ModelSpec::CornerGrowthStep => Some(exp_pp_shape((x, y))),
        ModelSpec::TwoSidedBoundaryLpp { pi, eta } => Some(two_sided_shape(*pi, *eta, x, y)),
        _ => None,
    }
}

/// Site of the 1-based cell nearest to a macroscopic point.
pub fn nearest_site(x: f64, y: f64) -> Result<Site> {
    let (i, j) = (x.round() as i64, y.round() as i64);
    if i < 1 || j < 1 {
        return config(format!("point ({x}, {y}) rounds outside the quadrant"));
    }
    Ok((i - 1, j - 1))
}

struct TimePlan {
    t: f64,
    p: Site,
    q: Site,
    /// Theoretical `l_PP` of the realized shift, when available.
    centre_pp: Option<f64>,
    /// Theoretical half-line value at the realized `tp`.
    centre_hl: Option<f64>,
    achieved_nu: f64,
}

pub(crate) fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return config(format!(
            "{name} must be a non-empty list of positive numbers"
        ));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return config(format!("{name} must be strictly increasing"));
    }
    Ok(())
}

fn plan(
    cfg: &DecorrConfig,
    info: Option<&CharacteristicInfo>,
) -> Result<(Vec<TimePlan>, (f64, f64))> {
    if !(cfg.kappa > 0.0 && cfg.kappa.is_finite()) {
        return config(format!("kappa must be positive, got {}", cfg.kappa));
    }
    check_grid("t_grid", &cfg.t_grid)?;
    check_grid("m_grid", &cfg.m_grid)?;
    if cfg.samples < 2 {
        return config("at least two samples are needed");
    }
    let nu_max = info.map_or(1.0, |i| i.nu_max);
    if !(cfg.nu > 0.0 && cfg.nu < nu_max) {
        return config(format!(
            "nu = {} is outside the admissible range (0, {nu_max})",
            cfg.nu
        ));
    }
    if let Some(info) = info {
        if !info.slow_decorrelation && !cfg.allow_no_decorrelation {
            return config(format!(
                "{:?} has no slow decorrelation; set allow_no_decorrelation to run it anyway",
                info.case
            ));
        }
    }
    let u = match (cfg.u, info.and_then(|i| i.u)) {
        (Some(u), _) | (None, Some(u)) => u,
        (None, None) => return config("no characteristic direction here; set u explicitly"),
    };
    if !(u.0 > 0.0 && u.1 > 0.0) {
        return config(format!("direction {u:?} must have positive entries"));
    }
    let p = (1.0, cfg.kappa * cfg.kappa);
    let theory = info.is_some();
    let times = cfg
        .t_grid
        .iter()
        .map(|&t| {
            let tn = t.powf(cfg.nu);
            let ps = nearest_site(t * p.0, t * p.1)?;
            let qs = nearest_site(t * p.0 + tn * u.0, t * p.1 + tn * u.1)?;
            let d = ((qs.0 - ps.0) as f64, (qs.1 - ps.1) as f64);
            let ratio = (d.0 * d.0 + d.1 * d.1).sqrt() / (u.0 * u.0 + u.1 * u.1).sqrt();
            Ok(TimePlan {
                t,
                p: ps,
                q: qs,
                centre_pp: theory.then(|| exp_pp_shape(d)),
                centre_hl: model_shape(&cfg.model, (ps.0 + 1) as f64, (ps.1 + 1) as f64),
                achieved_nu: ratio.ln() / t.ln(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((times, u))
}

/// Where paths start: the corner for log-sum-exp (which needs a point
/// source), otherwise the whole boundary.
pub fn model_source(mode: SemiringMode) -> Source {
    match mode {
        SemiringMode::LogSumExp { .. } => Source::Point { i: 0, j: 0 },
        _ => Source::HalfLineOrCorner,
    }
}

struct Raw {
    l_p: f64,
    l_q: f64,
    pp: f64,
    x_t: f64,
}

fn sample_raw<L: Lattice + ?Sized>(
    field: &L,
    mode: SemiringMode,
    times: &[TimePlan],
) -> Result<Vec<Raw>> {
    let targets: Vec<Site> = times.iter().flat_map(|tp| [tp.p, tp.q]).collect();
    let source = model_source(mode);
    let hl = passage_batch(field, mode, source, &targets)?;
    times
        .iter()
        .enumerate()
        .map(|(k, tp)| {
            let (l_p, l_q) = (hl[2 * k], hl[2 * k + 1]);
            let pp = point_to_point_excl(field, mode, tp.p, tp.q)?;
            let x_t = match mode {
                SemiringMode::LogSumExp { .. } => {
                    superadditivity_check(field, mode, source, tp.p, tp.q)?
                }
                _ => l_q - l_p - pp,
            };
            Ok(Raw { l_p, l_q, pp, x_t })
        })
        .collect()
}

/// Runs the harness on the model's own environment.
pub fn run_decorrelation(cfg: &DecorrConfig) -> Result<DecorrReport> {
    let model = cfg.model.clone();
    model.weight_field(0)?;
    run_decorrelation_with(cfg, |seed| model.weight_field(seed))
}

/// Same as [`run_decorrelation`] with the direction `u` required to be off
/// the characteristic, and `nu > 1/3` so the drift mismatch dominates.
pub fn run_off_characteristic_control(cfg: &DecorrConfig) -> Result<DecorrReport> {
    if cfg.u.is_none() {
        return config("the control run needs an explicit direction u");
    }
    if cfg.nu <= 1.0 / 3.0 {
        return config(format!("the control run needs nu > 1/3, got {}", cfg.nu));
    }
    run_decorrelation(cfg)
}

/// Harness on environments produced by `make(seed)`; constants still come
/// from `cfg.model`.
pub fn run_decorrelation_with<L, F>(cfg: &DecorrConfig, make: F) -> Result<DecorrReport>
where
    L: Lattice,
    F: Fn(u64) -> Result<L> + Sync,
{
    let info = model_info(&cfg.model, cfg.kappa)?;
    let (times, u) = plan(cfg, info.as_ref())?;
    let mode = cfg.model.mode();
    let raw: Vec<Vec<Raw>> = (0..cfg.samples)
        .into_par_iter()
        .map(|k| sample_raw(&make(sample_seed(cfg.seed, k as u64))?, mode, &times))
        .collect::<Result<_>>()?;
    assemble(cfg, info.as_ref(), mode, &times, u, raw)
}

fn assemble(
    cfg: &DecorrConfig,
    info: Option<&CharacteristicInfo>,
    mode: SemiringMode,
    times: &[TimePlan],
    u: (f64, f64),
    raw: Vec<Vec<Raw>>,
) -> Result<DecorrReport> {
    let n = cfg.samples;
    let gamma = info.map_or(1.0 / 3.0, |i| i.gamma_hl);
    let column = |k: usize, f: fn(&Raw) -> f64| raw.iter().map(|s| f(&s[k])).collect::<Vec<f64>>();
    let mut notes = vec!["tail thresholds and grids are calibration choices".to_string()];

    let last = times.len() - 1;
    let t_last = times[last].t;
    let (scale, scale_empirical) = match info.and_then(|i| i.c_hl) {
        Some(c) => (c, false),
        None => {
            notes.push(format!(
                "fluctuation scale estimated from the sample std at t = {t_last}"
            ));
            (std_dev(&column(last, |r| r.l_p)) / t_last.powf(gamma), true)
        }
    };
    let centring_empirical = info.is_none() || times.iter().any(|tp| tp.centre_hl.is_none());
    if centring_empirical {
        notes.push("centring constants are sample means".to_string());
    }
    if info.is_none() {
        notes.push("fluctuation exponent 1/3 assumed".to_string());
    }

    let sign = if mode == SemiringMode::MinPlus {
        -1.0
    } else {
        1.0
    };
    let mut summaries = Vec::with_capacity(times.len());
    let mut tails = Vec::new();
    let mut per_sample = Vec::with_capacity(n * times.len());
    for (k, tp) in times.iter().enumerate() {
        let (l_p, l_q, pp, x_t) = (
            column(k, |r| r.l_p),
            column(k, |r| r.l_q),
            column(k, |r| r.pp),
            column(k, |r| r.x_t),
        );
        let centre_pp = tp.centre_pp.unwrap_or_else(|| mean(&pp));
        let centre_hl = tp.centre_hl.unwrap_or_else(|| mean(&l_p));
        let norm = scale * tp.t.powf(gamma);
        let d = ((tp.q.0 - tp.p.0) as f64, (tp.q.1 - tp.p.1) as f64);
        let pp_norm = match info {
            Some(_) if d.0 > 0.0 && d.1 > 0.0 => exp_pp_scale(d),
            _ => std_dev(&pp),
        };
        let delta: Vec<f64> = (0..n).map(|s| l_q[s] - l_p[s] - centre_pp).collect();
        let chi1: Vec<f64> = l_p.iter().map(|v| (v - centre_hl) / norm).collect();
        let chi2: Vec<f64> = l_q
            .iter()
            .map(|v| (v - centre_hl - centre_pp) / norm)
            .collect();
        let chi3: Vec<f64> = pp.iter().map(|v| (v - centre_pp) / pp_norm).collect();
        let weight = pp_norm / norm;
        let recombined: Vec<f64> = (0..n).map(|s| chi1[s] + weight * chi3[s]).collect();
        let mut sorted2 = chi2.clone();
        sorted2.sort_by(f64::total_cmp);
        let mut sorted_r = recombined;
        sorted_r.sort_by(f64::total_cmp);
        let gap: Vec<f64> = x_t.iter().map(|x| sign * x / norm).collect();

        for &m in &cfg.m_grid {
            let threshold = m * tp.t.powf(gamma);
            let hits = delta.iter().filter(|d| d.abs() >= threshold).count();
            let tail = hits as f64 / n as f64;
            tails.push(TailRow {
                t: tp.t,
                m,
                threshold,
                hits,
                tail,
                se: binomial_se(tail, n),
            });
        }
        summaries.push(TimeSummary {
            t: tp.t,
            p_site: tp.p,
            q_site: tp.q,
            achieved_nu: tp.achieved_nu,
            centre_pp,
            compensator: Range::of(&x_t),
            violations: x_t.iter().filter(|&&x| sign * x < 0.0).count(),
            corr_chi12: correlation(&chi1, &chi2),
            delta_mean: mean(&delta),
            delta_std: std_dev(&delta),
            gap_scaled_mean: mean(&gap),
            ks_decomposition: ks_two_sample(&sorted2, &sorted_r)?,
        });
        for s in 0..n {
            per_sample.push(DecorrSample {
                sample: s,
                t: tp.t,
                l_p: l_p[s],
                l_q: l_q[s],
                pp: pp[s],
                delta: delta[s],
                x_t: x_t[s],
                chi1: chi1[s],
                chi2: chi2[s],
                chi3: chi3[s],
            });
        }
    }
    Ok(DecorrReport {
        case: info.map(|i| i.case),
        p: (1.0, cfg.kappa * cfg.kappa),
        u,
        nu: cfg.nu,
        gamma_hl: gamma,
        samples: n,
        scale,
        scale_empirical,
        centring_empirical,
        times: summaries,
        tails,
        per_sample,
        notes,
    })
}

/// Polymer harness: log-sum-exp values of an i.i.d. bulk at inverse
/// temperature `beta`, centred empirically.
#[allow(clippy::too_many_arguments)]
pub fn run_polymer_decorrelation(
    beta: f64,
    bulk: crate::environment::DistributionSpec,
    kappa: f64,
    u: (f64, f64),
    nu: f64,
    t_grid: Vec<f64>,
    m_grid: Vec<f64>,
    samples: usize,
    seed: u64,
) -> Result<DecorrReport> {
    let cfg = DecorrConfig {
        model: ModelSpec::Polymer { beta, bulk },
        kappa,
        u: Some(u),
        nu,
        t_grid,
        m_grid,
        samples,
        seed,
        allow_no_decorrelation: false,
    };
    run_decorrelation(&cfg)
}
