//! Growth exponent of half-line fluctuations from a log-log fit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::decorr::{check_grid, model_source, nearest_site};
use super::stats::{linear_fit, mean, std_dev};
use crate::environment::sample_seed;
use crate::error::{config, Error, Result};
use crate::models::ModelSpec;
use crate::passage::{passage_batch, Lattice, Site};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentConfig {
    pub model: ModelSpec,
    pub kappa: f64,
    pub t_grid: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub t_grid: Vec<f64>,
    pub sites: Vec<Site>,
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    pub slope: f64,
    pub slope_se: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
    pub samples: usize,
}

/// Fits `log std(L(tp))` against `log t`. All times of one sample share an
/// environment, which leaves each per-time std unbiased.
pub fn run_exponent_fit(cfg: &ExponentConfig) -> Result<ExponentFit> {
    let model = cfg.model.clone();
    model.weight_field(0)?;
    run_exponent_fit_with(cfg, |seed| model.weight_field(seed))
}

pub fn run_exponent_fit_with<L, F>(cfg: &ExponentConfig, make: F) -> Result<ExponentFit>
where
    L: Lattice,
    F: Fn(u64) -> Result<L> + Sync,
{
    check_grid("t_grid", &cfg.t_grid)?;
    if cfg.t_grid.len() < 4 {
        return config("the fit needs at least four times");
    }
    if cfg.t_grid[cfg.t_grid.len() - 1] < 10.0 * cfg.t_grid[0] {
        return config("the times must span at least one decade");
    }
    if cfg.samples < 2 {
        return config("at least two samples are needed");
    }
    let p = (1.0, cfg.kappa * cfg.kappa);
    let sites: Vec<Site> = cfg
        .t_grid
        .iter()
        .map(|&t| nearest_site(t * p.0, t * p.1))
        .collect::<Result<_>>()?;
    let mode = cfg.model.mode();
    let values: Vec<Vec<f64>> = (0..cfg.samples)
        .into_par_iter()
        .map(|k| {
            passage_batch(
                &make(sample_seed(cfg.seed, k as u64))?,
                mode,
                model_source(mode),
                &sites,
            )
        })
        .collect::<Result<_>>()?;
    let per_t = |k: usize| values.iter().map(|v| v[k]).collect::<Vec<f64>>();
    let means: Vec<f64> = (0..sites.len()).map(|k| mean(&per_t(k))).collect();
    let stds: Vec<f64> = (0..sites.len()).map(|k| std_dev(&per_t(k))).collect();
    if stds.iter().any(|s| !(*s > 0.0)) {
        return Err(Error::Fit(
            "fluctuations vanish at some time; the exponent is undefined".into(),
        ));
    }
    let x: Vec<f64> = cfg.t_grid.iter().map(|t| t.ln()).collect();
    let y: Vec<f64> = stds.iter().map(|s| s.ln()).collect();
    let fit = linear_fit(&x, &y)?;
    Ok(ExponentFit {
        t_grid: cfg.t_grid.clone(),
        sites,
        means,
        stds,
        slope: fit.slope,
        slope_se: fit.slope_se,
        intercept: fit.intercept,
        residuals: fit.residuals,
        samples: cfg.samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::passage::WeightGrid;

    fn cfg() -> ExponentConfig {
        ExponentConfig {
            model: ModelSpec::CornerGrowthStep,
            kappa: 1.0,
            t_grid: vec![4.0, 8.0, 16.0, 32.0, 64.0],
            samples: 40,
            seed: 2,
        }
    }

    #[test]
    fn deterministic_environment_is_a_fit_error() {
        let r = run_exponent_fit_with(&cfg(), |_| Ok(WeightGrid::filled(64, 64, 1.0)));
        assert!(matches!(r, Err(Error::Fit(_))));
    }

    #[test]
    fn grid_requirements() {
        let mut c = cfg();
        c.t_grid = vec![4.0, 8.0, 16.0];
        assert!(run_exponent_fit(&c).is_err());
        c.t_grid = vec![4.0, 5.0, 6.0, 7.0];
        assert!(run_exponent_fit(&c).is_err());
    }

    #[test]
    fn small_run_reports_residuals() {
        let f = run_exponent_fit(&cfg()).unwrap();
        assert_eq!(f.residuals.len(), 5);
        assert!(f.slope > 0.0 && f.slope < 0.7, "slope {}", f.slope);
    }
}
