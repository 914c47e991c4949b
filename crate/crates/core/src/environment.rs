//! Counter-based random environments.
//!
//! Every weight is a pure function of `(seed, i, j)`: a per-row 64-bit key is
//! derived from the seed, the cell index is hashed against it into a 24-bit
//! uniform and the uniform is pushed through an inverse CDF. Re-evaluating a
//! site always gives the same bits, so different passage queries on one field
//! share one probability space without storing anything.
//!
//! Exponential weights are quantized to multiples of [`QUANTUM`]. Passage
//! values are then sums of dyadic rationals and stay exact in `f64`, which
//! keeps superadditivity compensators exactly signed.

use serde::{Deserialize, Serialize};

use crate::error::{config, domain, Result};

/// Resolution of exponential weights.
pub const QUANTUM: f64 = 1.0 / (1u64 << 24) as f64;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const WEIGHT_DOMAIN: u64 = 0x5745_4947_4854_5321;
const POINT_DOMAIN: u64 = 0x504f_494e_5453_2121;
const SOURCE_DOMAIN: u64 = 0x534f_5552_4345_5321;

/// SplitMix64 finalizer.
#[inline(always)]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline(always)]
fn mix32(mut x: u32) -> u32 {
    x ^= x >> 16;
    x = x.wrapping_mul(0x7feb_352d);
    x ^= x >> 15;
    x = x.wrapping_mul(0x846c_a68b);
    x ^ (x >> 16)
}

/// Seed for the `index`-th independent replica of an experiment.
pub fn sample_seed(seed: u64, index: u64) -> u64 {
    mix64(mix64(seed ^ GOLDEN).wrapping_add(index.wrapping_mul(GOLDEN)))
}

/// Natural log in single precision, max relative error about 1e-7.
///
/// Written without division or lookups so the weight loops vectorize. The
/// evaluation order is fixed, which makes the result bit-reproducible.
#[inline(always)]
#[allow(clippy::excessive_precision)]
fn ln32(x: f32) -> f32 {
    let bits = x.to_bits();
    let mut e = ((bits >> 23) & 0xff) as i32 - 127;
    let mut m = f32::from_bits((bits & 0x007f_ffff) | 0x3f80_0000);
    let big = m > std::f32::consts::SQRT_2;
    m = if big { m * 0.5 } else { m };
    e += big as i32;
    let x = m - 1.0;
    let z = x * x;
    let mut p: f32 = 7.037_683_6e-2;
    p = p * x - 1.151_461_0e-1;
    p = p * x + 1.167_699_9e-1;
    p = p * x - 1.242_014_1e-1;
    p = p * x + 1.424_932_3e-1;
    p = p * x - 1.666_805_8e-1;
    p = p * x + 2.000_071_5e-1;
    p = p * x - 2.499_999_4e-1;
    p = p * x + 3.333_333_1e-1;
    let y = x * z * p - 0.5 * z;
    e as f32 * std::f32::consts::LN_2 + (x + y)
}

/// Unit-mean exponential variate for column `j` of a row with keys `(lo, mul)`.
#[inline(always)]
fn unit_exp(lo: u32, mul: u32, j: u32) -> f32 {
    let h = mix32(lo ^ j.wrapping_mul(mul));
    let u = ((h >> 8) as f32 + 0.5) * (1.0 / 16_777_216.0);
    -ln32(u)
}

/// Exponential weight of the given rate, rounded to the quantum.
#[inline(always)]
fn scaled_exp(e: f32, rate: f64) -> f64 {
    ((e as f64) * ((1.0 / rate) * (1u64 << 24) as f64)).round() * QUANTUM
}

#[inline(always)]
fn geometric(e: f32, p: f64) -> f64 {
    ((e as f64) * (1.0 / -(1.0 - p).ln())).floor()
}

/// Lattice region carrying weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    /// `i, j >= 0`.
    Quadrant,
    /// `i + j >= 0`.
    FlatHalfPlane,
    /// `i + j >= 0` and `j >= 0`.
    HalfFlat,
}

impl Support {
    pub fn contains(self, i: i64, j: i64) -> bool {
        match self {
            Support::Quadrant => i >= 0 && j >= 0,
            Support::FlatHalfPlane => i + j >= 0,
            Support::HalfFlat => i + j >= 0 && j >= 0,
        }
    }
}

/// Law of the bulk weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionSpec {
    Exponential {
        rate: f64,
    },
    /// Failures before the first success, supported on `{0, 1, 2, ...}`.
    Geometric {
        p: f64,
    },
}

impl DistributionSpec {
    pub fn mean(&self) -> f64 {
        match *self {
            DistributionSpec::Exponential { rate } => 1.0 / rate,
            DistributionSpec::Geometric { p } => (1.0 - p) / p,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            DistributionSpec::Exponential { rate } => 1.0 / (rate * rate),
            DistributionSpec::Geometric { p } => (1.0 - p) / (p * p),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            DistributionSpec::Exponential { rate } if !(rate > 0.0 && rate.is_finite()) => {
                config(format!("exponential rate must be positive, got {rate}"))
            }
            DistributionSpec::Geometric { p } if !(p > 0.0 && p < 1.0) => {
                config(format!("geometric parameter must lie in (0,1), got {p}"))
            }
            _ => Ok(()),
        }
    }
}

/// Special weights along the axes of a quadrant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundarySpec {
    #[default]
    None,
    /// Rate `pi` on row `j = 0`, rate `eta` on column `i = 0`, zero at the origin.
    TwoSided { pi: f64, eta: f64 },
    /// Row `i` carries rate `rates[i]` for `i < rates.len()`; rate 1 beyond.
    ThickOneSided { rates: Vec<f64> },
}

/// Deterministic weight field on a lattice support.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightField {
    seed: u64,
    support: Support,
    bulk: DistributionSpec,
    boundary: BoundarySpec,
    key: u64,
}

/// Row keys cached for a range of first coordinates.
pub(crate) struct RowKeys {
    i0: i64,
    lo: Vec<u32>,
    mul: Vec<u32>,
    unit: Vec<f32>,
}

impl WeightField {
    pub fn new(
        seed: u64,
        support: Support,
        bulk: DistributionSpec,
        boundary: BoundarySpec,
    ) -> Result<Self> {
        bulk.validate()?;
        match &boundary {
            BoundarySpec::None => {}
            BoundarySpec::TwoSided { pi, eta } => {
                for (name, r) in [("pi", pi), ("eta", eta)] {
                    if !(*r > 0.0 && r.is_finite()) {
                        return config(format!("boundary rate {name} must be positive, got {r}"));
                    }
                }
            }
            BoundarySpec::ThickOneSided { rates } => {
                if let Some(r) = rates.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
                    return config(format!("boundary rates must be positive, got {r}"));
                }
            }
        }
        if !matches!(boundary, BoundarySpec::None) {
            if support != Support::Quadrant {
                return config("boundary weights require the quadrant support");
            }
            if !matches!(bulk, DistributionSpec::Exponential { .. }) {
                return config("boundary rates are defined for exponential bulk weights");
            }
        }
        Ok(Self {
            seed,
            support,
            bulk,
            boundary,
            key: mix64(seed ^ WEIGHT_DOMAIN),
        })
    }

    /// Rate-1 exponential weights on the quadrant.
    pub fn exponential(seed: u64) -> Self {
        Self::new(
            seed,
            Support::Quadrant,
            DistributionSpec::Exponential { rate: 1.0 },
            BoundarySpec::None,
        )
        .expect("rate 1 is valid")
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn bulk(&self) -> DistributionSpec {
        self.bulk
    }

    pub fn boundary(&self) -> &BoundarySpec {
        &self.boundary
    }

    /// Same field law with a different seed.
    pub fn reseeded(&self, seed: u64) -> Self {
        Self {
            seed,
            key: mix64(seed ^ WEIGHT_DOMAIN),
            ..self.clone()
        }
    }

    #[inline(always)]
    fn row_key(&self, i: i64) -> (u32, u32) {
        let r = mix64(self.key.wrapping_add((i as u64).wrapping_mul(GOLDEN)));
        (r as u32, ((r >> 32) as u32) | 1)
    }

    pub(crate) fn rows(&self, i0: i64, i1: i64) -> RowKeys {
        let n = (i1 - i0 + 1).max(0) as usize;
        let mut lo = Vec::with_capacity(n);
        let mut mul = Vec::with_capacity(n);
        for i in i0..=i1 {
            let (a, b) = self.row_key(i);
            lo.push(a);
            mul.push(b);
        }
        RowKeys {
            i0,
            lo,
            mul,
            unit: vec![0.0; n],
        }
    }

    /// Exponential rate at a site, if it differs from the bulk.
    #[inline]
    fn special_rate(&self, i: i64, j: i64) -> Option<f64> {
        match &self.boundary {
            BoundarySpec::None => None,
            BoundarySpec::TwoSided { pi, eta } => match (i, j) {
                (0, 0) => Some(f64::INFINITY),
                (_, 0) => Some(*pi),
                (0, _) => Some(*eta),
                _ => None,
            },
            BoundarySpec::ThickOneSided { rates } => rates.get(usize::try_from(i).ok()?).copied(),
        }
    }

    #[inline]
    fn transform(&self, e: f32, i: i64, j: i64) -> f64 {
        if let Some(rate) = self.special_rate(i, j) {
            return if rate.is_infinite() {
                0.0
            } else {
                scaled_exp(e, rate)
            };
        }
        match self.bulk {
            DistributionSpec::Exponential { rate } => scaled_exp(e, rate),
            DistributionSpec::Geometric { p } => geometric(e, p),
        }
    }

    /// Weight at `(i, j)`.
    pub fn weight(&self, i: i64, j: i64) -> Result<f64> {
        if !self.support.contains(i, j) {
            return domain(format!(
                "site ({i},{j}) lies outside the {:?} support",
                self.support
            ));
        }
        Ok(self.weight_unchecked(i, j))
    }

    pub(crate) fn weight_unchecked(&self, i: i64, j: i64) -> f64 {
        let (lo, mul) = self.row_key(i);
        self.transform(unit_exp(lo, mul, j as u32), i, j)
    }

    /// Weights of the cells `(i, d - i)` for `i` in `lo..=hi`.
    ///
    /// The single- and double-precision stages run as separate loops; fused,
    /// they vectorize noticeably worse.
    pub(crate) fn fill_diagonal(
        &self,
        rows: &mut RowKeys,
        d: i64,
        lo: i64,
        hi: i64,
        out: &mut [f64],
    ) {
        let n = (hi - lo + 1) as usize;
        let out = &mut out[..n];
        let off = (lo - rows.i0) as usize;
        let klo = &rows.lo[off..off + n];
        let kmul = &rows.mul[off..off + n];
        let unit = &mut rows.unit[..n];
        let j0 = (d - lo) as u32;
        for k in 0..n {
            unit[k] = unit_exp(klo[k], kmul[k], j0.wrapping_sub(k as u32));
        }
        match self.bulk {
            DistributionSpec::Exponential { rate } => {
                for k in 0..n {
                    out[k] = scaled_exp(unit[k], rate);
                }
            }
            DistributionSpec::Geometric { p } => {
                for k in 0..n {
                    out[k] = geometric(unit[k], p);
                }
            }
        }
        match &self.boundary {
            BoundarySpec::None => {}
            BoundarySpec::TwoSided { .. } => {
                if lo == 0 {
                    out[0] = self.transform(unit_exp(klo[0], kmul[0], d as u32), 0, d);
                }
                if d > 0 && (lo..=hi).contains(&d) {
                    let k = (d - lo) as usize;
                    out[k] = self.transform(unit_exp(klo[k], kmul[k], 0), d, 0);
                }
            }
            BoundarySpec::ThickOneSided { rates } => {
                let top = (rates.len() as i64 - 1).min(hi);
                for i in lo.max(0)..=top {
                    let k = (i - lo) as usize;
                    let j = d - i;
                    out[k] = self.transform(unit_exp(klo[k], kmul[k], j as u32), i, j);
                }
            }
        }
    }
}

/// Axis-aligned rectangle `[x0, x1) x [y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self { x0, y0, x1, y1 }
    }

    pub fn area(&self) -> f64 {
        (self.x1 - self.x0).max(0.0) * (self.y1 - self.y0).max(0.0)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x0 && x < self.x1 && y >= self.y0 && y < self.y1
    }

    fn covers(&self, other: &Rect) -> bool {
        other.x0 >= self.x0 && other.x1 <= self.x1 && other.y0 >= self.y0 && other.y1 <= self.y1
    }
}

/// Where the Poisson points live.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Region {
    Rect(Rect),
    /// `x + y >= 0`.
    HalfPlane,
}

/// One-dimensional Poisson sources on the positive axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sources {
    /// Intensity along the x-axis.
    pub x_axis: f64,
    /// Intensity along the y-axis.
    pub y_axis: f64,
    /// Length of the hashing cells on each axis.
    #[serde(default = "default_resolution")]
    pub resolution: f64,
}

fn default_resolution() -> f64 {
    1.0
}

/// A planar point.
pub type Point = (f64, f64);

/// Poisson point field generated cell by cell from a counter hash.
#[derive(Debug, Clone, PartialEq)]
pub struct PointField {
    seed: u64,
    intensity: f64,
    region: Region,
    sources: Option<Sources>,
    cell: f64,
}

struct Stream(u64);

impl Stream {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(GOLDEN);
        mix64(self.0)
    }

    fn uniform(&mut self) -> f64 {
        ((self.next() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }
}

/// Inverse-CDF Poisson draw; fine for the small means used per cell.
fn poisson(mean: f64, u: f64) -> usize {
    let mut p = (-mean).exp();
    let mut cdf = p;
    let mut k = 0;
    while u > cdf && k < 10_000 {
        k += 1;
        p *= mean / k as f64;
        cdf += p;
        if p == 0.0 {
            break;
        }
    }
    k
}

impl PointField {
    pub fn new(
        seed: u64,
        intensity: f64,
        region: Region,
        sources: Option<Sources>,
    ) -> Result<Self> {
        if !(intensity >= 0.0 && intensity.is_finite()) {
            return config(format!("intensity must be non-negative, got {intensity}"));
        }
        if let Some(s) = &sources {
            if !(s.x_axis >= 0.0 && s.y_axis >= 0.0) {
                return config("source intensities must be non-negative");
            }
            if !(s.resolution > 0.0) {
                return config("source resolution must be positive");
            }
        }
        let cell = if intensity > 0.0 {
            1.0 / intensity.sqrt()
        } else {
            1.0
        };
        Ok(Self {
            seed,
            intensity,
            region,
            sources,
            cell,
        })
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn sources(&self) -> Option<Sources> {
        self.sources
    }

    pub fn reseeded(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    fn in_region(&self, x: f64, y: f64) -> bool {
        match self.region {
            Region::Rect(r) => r.contains(x, y),
            Region::HalfPlane => x + y >= 0.0,
        }
    }

    /// Bulk points inside `window`, sorted by `x`.
    pub fn sample_points(&self, window: Rect) -> Result<Vec<Point>> {
        if let Region::Rect(r) = self.region {
            if !r.covers(&window) {
                return domain("sampling window extends beyond the point field region");
            }
        }
        let mut pts = Vec::new();
        if self.intensity == 0.0 || window.area() == 0.0 {
            return Ok(pts);
        }
        let h = self.cell;
        let base = mix64(self.seed ^ POINT_DOMAIN);
        let a0 = (window.x0 / h).floor() as i64;
        let a1 = (window.x1 / h).ceil() as i64;
        let b0 = (window.y0 / h).floor() as i64;
        let b1 = (window.y1 / h).ceil() as i64;
        for a in a0..a1 {
            let ka = mix64(base.wrapping_add((a as u64).wrapping_mul(GOLDEN)));
            for b in b0..b1 {
                let mut s = Stream(mix64(ka ^ (b as u64).wrapping_mul(0xD6E8_FEB8_6659_FD93)));
                let n = poisson(1.0, s.uniform());
                for _ in 0..n {
                    let x = (a as f64 + s.uniform()) * h;
                    let y = (b as f64 + s.uniform()) * h;
                    if window.contains(x, y) && self.in_region(x, y) {
                        pts.push((x, y));
                    }
                }
            }
        }
        pts.sort_by(|p, q| p.0.total_cmp(&q.0).then(q.1.total_cmp(&p.1)));
        Ok(pts)
    }

    /// Source points on `[0, x_max)` and `[0, y_max)`, nudged off the axes.
    ///
    /// An x-axis point `x` becomes `(x, -1e-9 e^{-x})` and a y-axis point `y`
    /// becomes `(-1e-9 e^{-y}, y)`, so a strictly increasing chain can collect
    /// sources from one axis only.
    pub fn source_points(&self, x_max: f64, y_max: f64) -> Vec<Point> {
        let Some(s) = self.sources else {
            return Vec::new();
        };
        let mut pts = Vec::new();
        for (axis, rate, len) in [(0u64, s.x_axis, x_max), (1u64, s.y_axis, y_max)] {
            if rate == 0.0 || len <= 0.0 {
                continue;
            }
            let base = mix64(self.seed ^ SOURCE_DOMAIN ^ axis.wrapping_mul(GOLDEN));
            let cells = (len / s.resolution).ceil() as u64;
            for c in 0..cells {
                let mut st = Stream(mix64(base.wrapping_add(c.wrapping_mul(GOLDEN))));
                let n = poisson(rate * s.resolution, st.uniform());
                for _ in 0..n {
                    let v = (c as f64 + st.uniform()) * s.resolution;
                    if v < len {
                        let off = -1e-9 * (-v).exp();
                        pts.push(if axis == 0 { (v, off) } else { (off, v) });
                    }
                }
            }
        }
        pts
    }
}
