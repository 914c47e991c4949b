//! One-point law of the rescaled half-line value against a reference.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::decorr::{model_info, model_source, nearest_site};
use super::stats::{mean, std_dev};
use crate::environment::sample_seed;
use crate::error::{config, Result};
use crate::models::ModelSpec;
use crate::passage::passage_batch;
use crate::refdist::{ks_statistic, quantiles, CdfTable, ReferenceDistribution};
use crate::theory::{rescale, Chi};

/// Reference law for the comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ReferenceChoice {
    Gue,
    StandardNormal,
    MaxTwoGaussians {
        mean1: f64,
        std1: f64,
        mean2: f64,
        std2: f64,
    },
    /// Squared GOE law, tabulated on `[-6, 6]` at start-up.
    GoeSq,
}

impl ReferenceChoice {
    pub fn build(&self) -> Result<ReferenceDistribution> {
        Ok(match *self {
            Self::Gue => ReferenceDistribution::Gue,
            Self::StandardNormal => ReferenceDistribution::gaussian(0.0, 1.0)?,
            Self::MaxTwoGaussians {
                mean1,
                std1,
                mean2,
                std2,
            } => ReferenceDistribution::MaxTwoGaussians {
                mean1,
                std1,
                mean2,
                std2,
            },
            Self::GoeSq => ReferenceDistribution::GoeSq(CdfTable::goe(-6.0, 6.0, 121, 100)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionConfig {
    pub model: ModelSpec,
    pub kappa: f64,
    pub t: f64,
    pub samples: usize,
    pub seed: u64,
    pub reference: ReferenceChoice,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantileRow {
    pub level: f64,
    pub empirical: f64,
    pub reference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionReport {
    pub ks: f64,
    pub samples: usize,
    /// Whether the sample was standardized by its own mean and std.
    pub standardized: bool,
    pub mean: f64,
    pub std: f64,
    pub quantiles: Vec<QuantileRow>,
    /// Normalized values in sample order.
    pub values: Vec<f64>,
    pub notes: Vec<String>,
}

const LEVELS: [f64; 9] = [0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99];

/// Inverse of a CDF by bisection on `[-15, 15]`.
pub fn reference_quantile(r: &ReferenceDistribution, level: f64) -> f64 {
    let (mut lo, mut hi) = (-15.0, 15.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if r.cdf(mid) < level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn run_distribution_test(cfg: &DistributionConfig) -> Result<DistributionReport> {
    if !(cfg.t >= 1.0) || cfg.samples < 2 {
        return config("need t >= 1 and at least two samples");
    }
    let info = model_info(&cfg.model, cfg.kappa)?;
    let site = nearest_site(cfg.t, cfg.t * cfg.kappa * cfg.kappa)?;
    let model = cfg.model.clone();
    let mode = model.mode();
    let raw: Vec<f64> = (0..cfg.samples)
        .into_par_iter()
        .map(|k| {
            let f = model.weight_field(sample_seed(cfg.seed, k as u64))?;
            Ok(passage_batch(&f, mode, model_source(mode), &[site])?[0])
        })
        .collect::<Result<_>>()?;
    let mut notes = Vec::new();
    let (values, standardized) = match info.as_ref().filter(|i| i.c_hl.is_some()) {
        Some(info) => {
            let v = raw
                .iter()
                .map(|&x| rescale(x, cfg.t, 0.0, info, Chi::One, None))
                .collect::<Result<Vec<_>>>()?;
            (v, false)
        }
        None => {
            notes.push("standardized by the sample mean and std".to_string());
            let (m, s) = (mean(&raw), std_dev(&raw));
            (raw.iter().map(|x| (x - m) / s).collect(), true)
        }
    };
    let reference = cfg.reference.build()?;
    let ks = ks_statistic(&values, &reference)?;
    let emp = quantiles(&values, &LEVELS);
    let quantiles = LEVELS
        .iter()
        .zip(emp)
        .map(|(&level, empirical)| QuantileRow {
            level,
            empirical,
            reference: reference_quantile(&reference, level),
        })
        .collect();
    notes.push("KS tolerances are calibration choices".to_string());
    Ok(DistributionReport {
        ks,
        samples: cfg.samples,
        standardized,
        mean: mean(&values),
        std: std_dev(&values),
        quantiles,
        values,
        notes,
    })
}
