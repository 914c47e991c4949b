//! Fluctuations at off-line points against their projections along the
//! characteristic direction of corner growth.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::decorr::check_grid;
use super::stats::correlation;
use crate::environment::{sample_seed, WeightField};
use crate::error::{config, Result};
use crate::passage::{passage_batch, SemiringMode, Site, Source};
use crate::theory::{project_to_reference_line, ReferenceLine, ScalingFrame};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectionConfig {
    pub t_grid: Vec<f64>,
    pub nu: f64,
    pub tau: f64,
    /// Time offsets `theta_tilde`, in units of `t^nu`.
    pub offsets: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectionRow {
    pub t: f64,
    pub theta_tilde: f64,
    pub off_site: Site,
    pub projected_site: Site,
    /// Spatial frame coordinate of the projected point.
    pub projected_tau: f64,
    pub correlation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionReport {
    pub rows: Vec<ProjectionRow>,
    /// `(t, correlation)` between the diagonal point and a point moved by
    /// `t/16` along the anti-diagonal.
    pub control: Vec<(f64, f64)>,
    pub notes: Vec<String>,
}

impl ProjectionReport {
    pub fn correlation(&self, t: f64, theta_tilde: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.t == t && r.theta_tilde == theta_tilde)
            .map(|r| r.correlation)
    }
}

fn floor_site(x: f64, y: f64) -> Result<Site> {
    let (i, j) = (x.floor() as i64, y.floor() as i64);
    if i < 1 || j < 1 {
        return config(format!("frame point ({x}, {y}) leaves the quadrant"));
    }
    Ok((i - 1, j - 1))
}

/// Correlations for every `(t, theta_tilde)`; the projection lands on the
/// `theta_tilde = 0` line of the same frame.
pub fn run_projection_experiment(cfg: &ProjectionConfig) -> Result<ProjectionReport> {
    check_grid("t_grid", &cfg.t_grid)?;
    if !(cfg.nu > 0.0 && cfg.nu < 1.0) || cfg.samples < 2 {
        return config("need nu in (0, 1) and at least two samples");
    }
    let mut rows = Vec::new();
    let mut targets: Vec<Site> = Vec::new();
    let mut controls = Vec::new();
    for &t in &cfg.t_grid {
        let base = ScalingFrame::off_line(t, cfg.nu, cfg.tau, 0.0, 0.0)?;
        let (bx, by) = base.xy_exact();
        let line = ReferenceLine::antidiagonal(bx + by);
        for &th in &cfg.offsets {
            let f = ScalingFrame::off_line(t, cfg.nu, cfg.tau, th, 0.0)?;
            let (x, y) = f.xy_exact();
            let pr = project_to_reference_line((x, y), line, (1.0, 1.0), t)?;
            let off = floor_site(x, y)?;
            let projected = floor_site(pr.x, pr.y)?;
            rows.push(ProjectionRow {
                t,
                theta_tilde: th,
                off_site: off,
                projected_site: projected,
                projected_tau: pr.tau,
                correlation: f64::NAN,
            });
            targets.push(off);
            targets.push(projected);
        }
        let q = t / 4.0;
        controls.push(t);
        targets.push(floor_site(q, q)?);
        targets.push(floor_site(q + t / 16.0, q - t / 16.0)?);
    }
    let values: Vec<Vec<f64>> = (0..cfg.samples)
        .into_par_iter()
        .map(|k| {
            let f = WeightField::exponential(sample_seed(cfg.seed, k as u64));
            passage_batch(
                &f,
                SemiringMode::MaxPlus,
                Source::HalfLineOrCorner,
                &targets,
            )
        })
        .collect::<Result<_>>()?;
    let col = |k: usize| values.iter().map(|v| v[k]).collect::<Vec<f64>>();
    let per_t = cfg.offsets.len() + 1;
    for (r, row) in rows.iter_mut().enumerate() {
        let block = r / cfg.offsets.len();
        let k = 2 * (block * per_t + r % cfg.offsets.len());
        row.correlation = if row.off_site == row.projected_site {
            1.0
        } else {
            correlation(&col(k), &col(k + 1))
        };
    }
    let control = controls
        .iter()
        .enumerate()
        .map(|(b, &t)| {
            let k = 2 * (b * per_t + cfg.offsets.len());
            (t, correlation(&col(k), &col(k + 1)))
        })
        .collect();
    Ok(ProjectionReport {
        rows,
        control,
        notes: vec!["correlation thresholds are calibration choices".to_string()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_offset_is_the_same_point() {
        let cfg = ProjectionConfig {
            t_grid: vec![200.0, 400.0],
            nu: 0.6,
            tau: 0.5,
            offsets: vec![0.0, 1.0],
            samples: 30,
            seed: 9,
        };
        let r = run_projection_experiment(&cfg).unwrap();
        assert_eq!(r.rows.len(), 4);
        for row in &r.rows {
            if row.theta_tilde == 0.0 {
                assert_eq!(row.off_site, row.projected_site);
                assert_eq!(row.correlation, 1.0);
            } else {
                assert!(row.correlation < 1.0 && row.correlation > 0.0);
                assert!((row.projected_tau - cfg.tau).abs() < 0.05);
            }
        }
        assert_eq!(r.control.len(), 2);
    }
}
