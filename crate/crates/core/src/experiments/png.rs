//! Longest chains through Poisson points in a square.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{mean, std_dev};
use crate::environment::{sample_seed, PointField, Rect, Region};
use crate::error::{config, Result};
use crate::passage::lis_sorted;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PngConfig {
    pub intensity: f64,
    pub side: f64,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PngReport {
    pub mean_points: f64,
    pub mean_lis: f64,
    /// Mean of `LIS / sqrt(point count)`.
    pub mean_ratio: f64,
    pub std_ratio: f64,
    pub samples: usize,
}

pub fn run_png_lis(cfg: &PngConfig) -> Result<PngReport> {
    if !(cfg.side > 0.0) || cfg.samples == 0 {
        return config("need a positive side and at least one sample");
    }
    let square = Rect::new(0.0, 0.0, cfg.side, cfg.side);
    PointField::new(cfg.seed, cfg.intensity, Region::Rect(square), None)?;
    let stats: Vec<(f64, f64)> = (0..cfg.samples)
        .into_par_iter()
        .map(|k| {
            let f = PointField::new(
                sample_seed(cfg.seed, k as u64),
                cfg.intensity,
                Region::Rect(square),
                None,
            )?;
            let pts = f.sample_points(square)?;
            Ok((pts.len() as f64, lis_sorted(&pts) as f64))
        })
        .collect::<Result<_>>()?;
    let ratios: Vec<f64> = stats
        .iter()
        .filter(|s| s.0 > 0.0)
        .map(|&(n, l)| l / n.sqrt())
        .collect();
    Ok(PngReport {
        mean_points: mean(&stats.iter().map(|s| s.0).collect::<Vec<_>>()),
        mean_lis: mean(&stats.iter().map(|s| s.1).collect::<Vec<_>>()),
        mean_ratio: mean(&ratios),
        std_ratio: std_dev(&ratios),
        samples: cfg.samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_square() {
        let r = run_png_lis(&PngConfig {
            intensity: 1.0,
            side: 20.0,
            samples: 20,
            seed: 1,
        })
        .unwrap();
        assert!((r.mean_points - 400.0).abs() < 30.0);
        assert!(r.mean_ratio > 1.5 && r.mean_ratio < 2.1, "{}", r.mean_ratio);
    }
}
