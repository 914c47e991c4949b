//! Catalog of growth models and the TASEP height correspondence.
//!
//! Heights use 1-based cells `(x, y)`, which sit at lattice site `(x-1, y-1)`.

use serde::{Deserialize, Serialize};

use crate::environment::{
    BoundarySpec, DistributionSpec, PointField, Rect, Region, Sources, Support, WeightField,
};
use crate::error::{config, domain, Result};
use crate::passage::{passage_batch, Lattice, SemiringMode, Site, Source};

/// A model from the catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    CornerGrowthStep,
    TwoSidedBoundaryLpp {
        pi: f64,
        eta: f64,
    },
    ThickOneSidedLpp {
        rates: Vec<f64>,
    },
    /// Period-2 flat TASEP.
    FlatTasep,
    HalfFlatTasep,
    PngDroplet {
        intensity: f64,
    },
    PngFlat {
        intensity: f64,
    },
    PngTwoSources {
        intensity: f64,
        source_x: f64,
        source_y: f64,
    },
    Polymer {
        beta: f64,
        bulk: DistributionSpec,
    },
    Fpp {
        bulk: DistributionSpec,
    },
}

impl ModelSpec {
    /// Whether the model lives on a weighted lattice (as opposed to Poisson points).
    pub fn is_lattice(&self) -> bool {
        !matches!(
            self,
            Self::PngDroplet { .. } | Self::PngFlat { .. } | Self::PngTwoSources { .. }
        )
    }

    pub fn mode(&self) -> SemiringMode {
        match self {
            Self::Polymer { beta, .. } => SemiringMode::LogSumExp { beta: *beta },
            Self::Fpp { .. } => SemiringMode::MinPlus,
            _ => SemiringMode::MaxPlus,
        }
    }

    /// The lattice environment of this model for one seed.
    pub fn weight_field(&self, seed: u64) -> Result<WeightField> {
        let rate1 = DistributionSpec::Exponential { rate: 1.0 };
        let (support, bulk, boundary) = match self {
            Self::CornerGrowthStep => (Support::Quadrant, rate1, BoundarySpec::None),
            Self::TwoSidedBoundaryLpp { pi, eta } => (
                Support::Quadrant,
                rate1,
                BoundarySpec::TwoSided { pi: *pi, eta: *eta },
            ),
            Self::ThickOneSidedLpp { rates } => (
                Support::Quadrant,
                rate1,
                BoundarySpec::ThickOneSided {
                    rates: rates.clone(),
                },
            ),
            Self::FlatTasep => (Support::FlatHalfPlane, rate1, BoundarySpec::None),
            Self::HalfFlatTasep => (Support::HalfFlat, rate1, BoundarySpec::None),
            Self::Polymer { bulk, beta } => {
                if !(*beta > 0.0 && beta.is_finite()) {
                    return config(format!("inverse temperature must be positive, got {beta}"));
                }
                (Support::Quadrant, *bulk, BoundarySpec::None)
            }
            Self::Fpp { bulk } => (Support::Quadrant, *bulk, BoundarySpec::None),
            _ => return config("Poisson-point models have no lattice weight field"),
        };
        WeightField::new(seed, support, bulk, boundary)
    }

    /// The Poisson environment of a PNG model; droplets live on `[0, size]^2`.
    pub fn point_field(&self, seed: u64, size: f64) -> Result<PointField> {
        match *self {
            Self::PngDroplet { intensity } => PointField::new(
                seed,
                intensity,
                Region::Rect(Rect::new(0.0, 0.0, size, size)),
                None,
            ),
            Self::PngFlat { intensity } => {
                PointField::new(seed, intensity, Region::HalfPlane, None)
            }
            Self::PngTwoSources {
                intensity,
                source_x,
                source_y,
            } => PointField::new(
                seed,
                intensity,
                Region::Rect(Rect::new(0.0, 0.0, size, size)),
                Some(Sources {
                    x_axis: source_x,
                    y_axis: source_y,
                    resolution: 1.0,
                }),
            ),
            _ => config("lattice models have no Poisson point field"),
        }
    }
}

/// TASEP initial data with a last-passage representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TasepIc {
    Step,
    TwoSidedBernoulli { rho_minus: f64, rho_plus: f64 },
    Flat,
    HalfFlat,
}

/// Model realizing the given TASEP initial data.
///
/// Bernoulli densities become boundary rates `pi = 1 - rho_plus` and
/// `eta = rho_minus`. A rate of zero would mean infinite weights and is
/// rejected.
pub fn map_tasep_initial_condition(ic: TasepIc) -> Result<ModelSpec> {
    Ok(match ic {
        TasepIc::Step => ModelSpec::CornerGrowthStep,
        TasepIc::TwoSidedBernoulli {
            rho_minus,
            rho_plus,
        } => {
            if !(0.0..=1.0).contains(&rho_minus) || !(0.0..=1.0).contains(&rho_plus) {
                return domain(format!(
                    "densities ({rho_minus}, {rho_plus}) must lie in [0, 1]"
                ));
            }
            let (pi, eta) = (1.0 - rho_plus, rho_minus);
            if pi == 0.0 || eta == 0.0 {
                return domain(
                    "a boundary of rate zero (rho_minus = 0 or rho_plus = 1) has no finite weights",
                );
            }
            ModelSpec::TwoSidedBoundaryLpp { pi, eta }
        }
        TasepIc::Flat => ModelSpec::FlatTasep,
        TasepIc::HalfFlat => ModelSpec::HalfFlatTasep,
    })
}

/// Height function `h(X, t)` on an integer window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightProfile {
    pub t: f64,
    /// Leftmost `X` of the window.
    pub x0: i64,
    pub values: Vec<i64>,
}

impl HeightProfile {
    pub fn at(&self, x: i64) -> Option<i64> {
        let k = x.checked_sub(self.x0)?;
        usize::try_from(k)
            .ok()
            .and_then(|k| self.values.get(k).copied())
    }

    /// Linear interpolation between lattice points.
    pub fn interpolate(&self, x: f64) -> Option<f64> {
        let lo = x.floor() as i64;
        let a = self.at(lo)? as f64;
        if x == lo as f64 {
            return Some(a);
        }
        let b = self.at(lo + 1)? as f64;
        Some(a + (x - lo as f64) * (b - a))
    }
}

/// Corner-growth passage values `L(x, y)` for 1-based cells in `[1, n]^2`,
/// stored row-major by `x`.
pub fn corner_passage_grid<L: Lattice + ?Sized>(field: &L, n: i64) -> Result<Vec<f64>> {
    if field.support() != Support::Quadrant {
        return domain("height functions are available on the quadrant only");
    }
    let targets: Vec<Site> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    passage_batch(
        field,
        SemiringMode::MaxPlus,
        Source::HalfLineOrCorner,
        &targets,
    )
}

/// `h(X, t) = max{x + y : x - y = X, L(x, y) <= t}`, or `|X|` when no such
/// cell is filled, for `X` in `window`, using cells in `[1, n]^2`.
///
/// Fails when the filled region along a requested diagonal reaches the edge of
/// the box, since the value could then depend on cells outside it.
pub fn height_from_passage<L: Lattice + ?Sized>(
    field: &L,
    t: f64,
    window: (i64, i64),
    n: i64,
) -> Result<HeightProfile> {
    if !(t >= 0.0) {
        return domain(format!("time must be non-negative, got {t}"));
    }
    if window.0 > window.1 || window.0.abs() >= n || window.1.abs() >= n {
        return domain(format!("window {window:?} does not fit a box of side {n}"));
    }
    let grid = corner_passage_grid(field, n)?;
    height_from_grid(&grid, n, t, window)
}

/// Same as [`height_from_passage`] from a precomputed grid.
pub fn height_from_grid(grid: &[f64], n: i64, t: f64, window: (i64, i64)) -> Result<HeightProfile> {
    let l = |x: i64, y: i64| grid[((x - 1) * n + (y - 1)) as usize];
    let mut values = Vec::with_capacity((window.1 - window.0 + 1) as usize);
    for xx in window.0..=window.1 {
        // Cells on the diagonal x - y = X, starting from the corner end.
        let (mut x, mut y) = if xx >= 0 { (xx + 1, 1) } else { (1, 1 - xx) };
        let mut h = xx.abs();
        while x <= n && y <= n && l(x, y) <= t {
            h = x + y;
            x += 1;
            y += 1;
        }
        if (x > n || y > n) && h != xx.abs() {
            return domain(format!(
                "filled region at X={xx} reaches the edge of the {n}-box at t={t}"
            ));
        }
        values.push(h);
    }
    Ok(HeightProfile {
        t,
        x0: window.0,
        values,
    })
}

/// Integrated current `(h - x) / 2`.
pub fn current_from_height(h: f64, x: f64) -> f64 {
    0.5 * (h - x)
}

/// Period-2 sawtooth height of flat initial data.
pub fn flat_initial_height(x: i64) -> i64 {
    x.rem_euclid(2)
}
