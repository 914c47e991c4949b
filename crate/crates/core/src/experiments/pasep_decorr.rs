//! Slow decorrelation of PASEP currents through the step-reset coupling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::decorr::{check_grid, TailRow};
use super::stats::{binomial_se, correlation, mean, std_dev, Range};
use crate::environment::sample_seed;
use crate::error::{config, Result};
use crate::pasep::{coupled_step_reset, PasepConfig, PasepIc};
use crate::theory::pasep_step_shape;

fn default_margin() -> f64 {
    1.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PasepDecorrConfig {
    pub p: f64,
    pub ic: PasepIc,
    /// Base point `v t`.
    pub v: f64,
    /// Shift `u t^nu`; the characteristic of step data is `u = v`.
    pub u: f64,
    pub nu: f64,
    pub t_grid: Vec<f64>,
    pub m_grid: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    #[serde(default = "default_margin")]
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PasepSample {
    pub sample: usize,
    pub t: f64,
    pub i_base: f64,
    pub i_main: f64,
    pub i_reset: f64,
    pub x_t: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PasepTimeSummary {
    pub t: f64,
    pub x0: i64,
    pub y: i64,
    pub half_width: i64,
    /// Deterministic current of the reset system, subtracted from the increment.
    pub centre: f64,
    pub compensator: Range,
    pub violations: usize,
    pub corr_base_main: f64,
    pub delta_mean: f64,
    pub delta_std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PasepReport {
    pub samples: usize,
    pub times: Vec<PasepTimeSummary>,
    pub tails: Vec<TailRow>,
    pub per_sample: Vec<PasepSample>,
    pub notes: Vec<String>,
}

impl PasepReport {
    pub fn violations(&self) -> usize {
        self.times.iter().map(|t| t.violations).sum()
    }
}

/// Current of a step system over time `s` at `u s`, to first order.
pub fn step_current_rate(u: f64, gamma: f64) -> f64 {
    0.5 * (pasep_step_shape(u, gamma) - u)
}

fn sample_config(cfg: &PasepDecorrConfig, t: f64, k: usize) -> Result<PasepConfig> {
    let dt = t.powf(cfg.nu);
    let monitor = ((cfg.v * t).abs() + (cfg.u * dt).abs()).ceil() as i64 + 1;
    PasepConfig::auto(
        cfg.p,
        cfg.ic,
        t + dt,
        sample_seed(cfg.seed, k as u64),
        monitor,
        cfg.margin,
    )
}

pub fn run_pasep_decorrelation(cfg: &PasepDecorrConfig) -> Result<PasepReport> {
    check_grid("t_grid", &cfg.t_grid)?;
    check_grid("m_grid", &cfg.m_grid)?;
    if !(cfg.nu > 0.0 && cfg.nu < 1.0) || cfg.samples < 2 {
        return config("need nu in (0, 1) and at least two samples");
    }
    let gamma = 2.0 * cfg.p - 1.0;
    let mut times = Vec::new();
    let mut tails = Vec::new();
    let mut per_sample = Vec::new();
    for &t in &cfg.t_grid {
        let width = sample_config(cfg, t, 0)?.half_width;
        let out = (0..cfg.samples)
            .into_par_iter()
            .map(|k| coupled_step_reset(&sample_config(cfg, t, k)?, cfg.v, cfg.u, cfg.nu, t))
            .collect::<Result<Vec<_>>>()?;
        let dt = t.powf(cfg.nu);
        let centre = dt * step_current_rate(cfg.u, gamma);
        let delta: Vec<f64> = out.iter().map(|r| r.i_main - r.i_base - centre).collect();
        let x_t: Vec<f64> = out.iter().map(|r| r.x_t).collect();
        let base: Vec<f64> = out.iter().map(|r| r.i_base).collect();
        let main: Vec<f64> = out.iter().map(|r| r.i_main).collect();
        for &m in &cfg.m_grid {
            let threshold = m * t.powf(1.0 / 3.0);
            let hits = delta.iter().filter(|d| d.abs() >= threshold).count();
            let tail = hits as f64 / cfg.samples as f64;
            tails.push(TailRow {
                t,
                m,
                threshold,
                hits,
                tail,
                se: binomial_se(tail, cfg.samples),
            });
        }
        times.push(PasepTimeSummary {
            t,
            x0: out[0].x0,
            y: out[0].y,
            half_width: width,
            centre,
            compensator: Range::of(&x_t),
            violations: x_t.iter().filter(|&&x| x > 0.0).count(),
            corr_base_main: correlation(&base, &main),
            delta_mean: mean(&delta),
            delta_std: std_dev(&delta),
        });
        for (s, r) in out.iter().enumerate() {
            per_sample.push(PasepSample {
                sample: s,
                t,
                i_base: r.i_base,
                i_main: r.i_main,
                i_reset: r.i_reset,
                x_t: r.x_t,
                delta: delta[s],
            });
        }
    }
    Ok(PasepReport {
        samples: cfg.samples,
        times,
        tails,
        per_sample,
        notes: vec!["tail thresholds use t^(1/3) and are calibration choices".to_string()],
    })
}
