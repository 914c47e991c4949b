//! Passage values by dynamic programming over antidiagonals, and the
//! longest-increasing-subsequence engine for Poisson points.
//!
//! One sweep visits the box spanned by the source and the targets diagonal by
//! diagonal, keeping two frontiers. Values at every requested target are
//! harvested on the way, so all targets see the same environment.
//!
//! Point-to-point values include the weights at both endpoints. The
//! superadditivity compensator uses the variant that drops the start weight,
//! so a path through `p` is never counted twice.

use serde::{Deserialize, Serialize};

use crate::environment::{Point, PointField, Rect, Region, RowKeys, Support, WeightField};
use crate::error::{domain, Result};

/// A lattice site `(i, j)`.
pub type Site = (i64, i64);

/// How path weights are combined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SemiringMode {
    MaxPlus,
    MinPlus,
    /// Free energy `(1/beta) log sum exp(beta T)`.
    LogSumExp {
        beta: f64,
    },
}

/// Where admissible paths start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Source {
    /// Paths enter the support anywhere on its boundary with value zero. On
    /// the quadrant under max-plus this is the corner start.
    HalfLineOrCorner,
    Point {
        i: i64,
        j: i64,
    },
}

/// Fills `out[k]` with the weight of `(lo + k, d - lo - k)`, given `(d, lo, hi, out)`.
pub type DiagonalFill<'a> = Box<dyn FnMut(i64, i64, i64, &mut [f64]) + 'a>;

/// Anything that can hand out weights along antidiagonals.
pub trait Lattice: Sync {
    fn support(&self) -> Support;

    fn contains(&self, i: i64, j: i64) -> bool {
        self.support().contains(i, j)
    }

    fn weight_at(&self, i: i64, j: i64) -> Result<f64>;

    /// Returns a closure filling `out[k]` with the weight of `(lo + k, d - lo - k)`.
    fn diagonals(&self, i0: i64, i1: i64) -> DiagonalFill<'_>;
}

impl Lattice for WeightField {
    fn support(&self) -> Support {
        WeightField::support(self)
    }

    fn weight_at(&self, i: i64, j: i64) -> Result<f64> {
        self.weight(i, j)
    }

    fn diagonals(&self, i0: i64, i1: i64) -> DiagonalFill<'_> {
        let mut rows: RowKeys = self.rows(i0, i1);
        Box::new(move |d, lo, hi, out| self.fill_diagonal(&mut rows, d, lo, hi, out))
    }
}

/// Explicit finite weight array on `[0, nx) x [0, ny)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightGrid {
    nx: usize,
    ny: usize,
    w: Vec<f64>,
}

impl WeightGrid {
    /// `rows[i][j]` is the weight at `(i, j)`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let nx = rows.len();
        let ny = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ny), "ragged weight grid");
        Self {
            nx,
            ny,
            w: rows.concat(),
        }
    }

    pub fn filled(nx: usize, ny: usize, value: f64) -> Self {
        Self {
            nx,
            ny,
            w: vec![value; nx * ny],
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn get(&self, i: i64, j: i64) -> f64 {
        self.w[i as usize * self.ny + j as usize]
    }

    pub fn set(&mut self, i: i64, j: i64, value: f64) {
        self.w[i as usize * self.ny + j as usize] = value;
    }
}

impl Lattice for WeightGrid {
    fn support(&self) -> Support {
        Support::Quadrant
    }

    fn contains(&self, i: i64, j: i64) -> bool {
        i >= 0 && j >= 0 && (i as usize) < self.nx && (j as usize) < self.ny
    }

    fn weight_at(&self, i: i64, j: i64) -> Result<f64> {
        if !Lattice::contains(self, i, j) {
            return domain(format!(
                "site ({i},{j}) lies outside the {}x{} grid",
                self.nx, self.ny
            ));
        }
        Ok(self.get(i, j))
    }

    fn diagonals(&self, _i0: i64, _i1: i64) -> DiagonalFill<'_> {
        Box::new(move |d, lo, hi, out| {
            for i in lo..=hi {
                out[(i - lo) as usize] = self.get(i, d - i);
            }
        })
    }
}

/// A batch of targets evaluated in one sweep.
#[derive(Debug, Clone)]
pub struct PassageQuery<'a, L: Lattice + ?Sized> {
    pub field: &'a L,
    pub mode: SemiringMode,
    pub source: Source,
    pub targets: Vec<Site>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PassageValue {
    pub target: Site,
    pub value: f64,
}

#[derive(Clone, Copy)]
enum Op {
    Max,
    Min,
    Lse(f64),
}

impl Op {
    fn of(mode: SemiringMode) -> Self {
        match mode {
            SemiringMode::MaxPlus => Op::Max,
            SemiringMode::MinPlus => Op::Min,
            SemiringMode::LogSumExp { beta } => Op::Lse(beta),
        }
    }

    /// Semiring zero: the value of "no path".
    fn zero(self) -> f64 {
        match self {
            Op::Min => f64::INFINITY,
            _ => f64::NEG_INFINITY,
        }
    }
}

#[inline(always)]
fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

fn validate(
    support_of: &dyn Fn(i64, i64) -> bool,
    mode: SemiringMode,
    source: Source,
    targets: &[Site],
) -> Result<()> {
    if let SemiringMode::LogSumExp { beta } = mode {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(crate::Error::Config(format!(
                "inverse temperature must be positive, got {beta}"
            )));
        }
        if source == Source::HalfLineOrCorner {
            return domain("log-sum-exp passage needs a point source");
        }
    }
    if let Source::Point { i, j } = source {
        if !support_of(i, j) {
            return domain(format!("source ({i},{j}) lies outside the support"));
        }
    }
    for &(ti, tj) in targets {
        if !support_of(ti, tj) {
            return domain(format!("target ({ti},{tj}) lies outside the support"));
        }
        if let Source::Point { i, j } = source {
            if ti < i || tj < j {
                return domain(format!(
                    "target ({ti},{tj}) is not reachable from ({i},{j})"
                ));
            }
        }
    }
    Ok(())
}

/// Core sweep. Values are returned in target order; `blocked` removes one site.
fn sweep<L: Lattice + ?Sized>(
    field: &L,
    mode: SemiringMode,
    source: Source,
    targets: &[Site],
    blocked: Option<Site>,
) -> Result<Vec<f64>> {
    validate(&|i, j| field.contains(i, j), mode, source, targets)?;
    if targets.is_empty() {
        return Ok(Vec::new());
    }
    let op = Op::of(mode);
    let i1 = targets.iter().map(|t| t.0).max().unwrap();
    let j1 = targets.iter().map(|t| t.1).max().unwrap();
    let support = field.support();
    let (i0, j0, out) = match source {
        Source::Point { i, j } => (i, j, op.zero()),
        Source::HalfLineOrCorner => match support {
            Support::Quadrant => (0, 0, 0.0),
            Support::FlatHalfPlane => (-j1, -i1, 0.0),
            Support::HalfFlat => (-j1, 0, 0.0),
        },
    };
    let d_start = match source {
        Source::Point { .. } => i0 + j0,
        Source::HalfLineOrCorner => (i0 + j0).max(0),
    };
    let d_end = targets.iter().map(|t| t.0 + t.1).max().unwrap();
    let width = (i1 - i0 + 3) as usize;
    let mut prev = vec![out; width];
    let mut cur = vec![out; width];
    let mut w = vec![0.0; width];
    if let Source::Point { i, .. } = source {
        prev[(i - i0 + 1) as usize] = 0.0;
    }
    let mut order: Vec<usize> = (0..targets.len()).collect();
    order.sort_by_key(|&k| targets[k].0 + targets[k].1);
    let mut next = 0;
    let mut values = vec![0.0; targets.len()];
    let mut fill = field.diagonals(i0, i1);
    for d in d_start..=d_end {
        let lo = i0.max(d - j1);
        let mut hi = i1.min(d - j0);
        if support == Support::HalfFlat {
            hi = hi.min(d);
        }
        if lo <= hi {
            let n = (hi - lo + 1) as usize;
            fill(d, lo, hi, &mut w[..n]);
            let base = (lo - i0) as usize;
            let p = &prev[base..base + n + 1];
            let c = &mut cur[base + 1..base + 1 + n];
            let w = &w[..n];
            match op {
                Op::Max => {
                    for k in 0..n {
                        let (a, b) = (p[k], p[k + 1]);
                        c[k] = w[k] + if a > b { a } else { b };
                    }
                }
                Op::Min => {
                    for k in 0..n {
                        let (a, b) = (p[k], p[k + 1]);
                        c[k] = w[k] + if a < b { a } else { b };
                    }
                }
                Op::Lse(beta) => {
                    for k in 0..n {
                        c[k] = beta * w[k] + log_add_exp(p[k], p[k + 1]);
                    }
                }
            }
            if let Some((bi, bj)) = blocked {
                if bi + bj == d && (lo..=hi).contains(&bi) {
                    c[(bi - lo) as usize] = op.zero();
                }
            }
            cur[base] = out;
            if base + n + 1 < width {
                cur[base + n + 1] = out;
            }
        } else {
            cur.fill(out);
        }
        while next < order.len() && targets[order[next]].0 + targets[order[next]].1 == d {
            let k = order[next];
            values[k] = cur[(targets[k].0 - i0 + 1) as usize];
            next += 1;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    if let Op::Lse(beta) = op {
        for v in &mut values {
            *v /= beta;
        }
    }
    Ok(values)
}

/// Passage values for every target of the query, from one sweep.
pub fn passage_values<L: Lattice + ?Sized>(q: &PassageQuery<'_, L>) -> Result<Vec<PassageValue>> {
    let values = sweep(q.field, q.mode, q.source, &q.targets, None)?;
    Ok(q.targets
        .iter()
        .zip(values)
        .map(|(&target, value)| PassageValue { target, value })
        .collect())
}

/// Values for many targets, in target order.
pub fn passage_batch<L: Lattice + ?Sized>(
    field: &L,
    mode: SemiringMode,
    source: Source,
    targets: &[Site],
) -> Result<Vec<f64>> {
    sweep(field, mode, source, targets, None)
}

/// Point-to-point value, counting the weights at both `p` and `q`.
pub fn point_to_point<L: Lattice + ?Sized>(
    field: &L,
    mode: SemiringMode,
    p: Site,
    q: Site,
) -> Result<f64> {
    Ok(sweep(field, mode, Source::Point { i: p.0, j: p.1 }, &[q], None)?[0])
}

/// Point-to-point value without the weight at `p`.
pub fn point_to_point_excl<L: Lattice + ?Sized>(
    field: &L,
    mode: SemiringMode,
    p: Site,
    q: Site,
) -> Result<f64> {
    Ok(point_to_point(field, mode, p, q)? - field.weight_at(p.0, p.1)?)
}

/// `value(shifted) - value(p) - value_excl(p, shifted)`.
///
/// Non-negative under max-plus and log-sum-exp, non-positive under min-plus.
/// The log-sum-exp gap is computed from the partition function of paths that
/// avoid `p`, so its sign is exact rather than subject to cancellation.
pub fn superadditivity_check<L: Lattice + ?Sized>(
    field: &L,
    mode: SemiringMode,
    source: Source,
    p: Site,
    shifted: Site,
) -> Result<f64> {
    if shifted.0 < p.0 || shifted.1 < p.1 {
        return domain(format!("{shifted:?} does not dominate {p:?}"));
    }
    let both = sweep(field, mode, source, &[p, shifted], None)?;
    match mode {
        SemiringMode::LogSumExp { beta } => {
            let avoid = sweep(field, mode, source, &[shifted], Some(p))?[0];
            let through = both[0] + point_to_point_excl(field, mode, p, shifted)?;
            let ratio = (beta * (avoid - through)).exp();
            Ok(ratio.ln_1p() / beta)
        }
        _ => Ok(both[1] - both[0] - point_to_point_excl(field, mode, p, shifted)?),
    }
}

/// Length of the longest chain increasing strictly in both coordinates.
pub fn lis_length(points: &[Point]) -> usize {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));
    lis_sorted(&pts)
}

/// Patience sorting on points already ordered by `x` ascending, ties by `y` descending.
pub fn lis_sorted(points: &[Point]) -> usize {
    let mut tails: Vec<f64> = Vec::new();
    for &(_, y) in points {
        let k = tails.partition_point(|&t| t < y);
        if k == tails.len() {
            tails.push(y);
        } else {
            tails[k] = y;
        }
    }
    tails.len()
}

/// Half-line value of a Poisson field at `(a, b)`: droplet geometry on a
/// rectangle region, flat geometry on the half-plane. Sources are merged in.
pub fn png_half_line(field: &PointField, target: Point) -> Result<usize> {
    let (a, b) = target;
    let window = match field.region() {
        Region::Rect(r) => Rect::new(r.x0, r.y0, a, b),
        Region::HalfPlane => Rect::new(-b, -a, a, b),
    };
    let mut pts = field.sample_points(window)?;
    pts.extend(field.source_points(a, b));
    Ok(lis_length(&pts))
}

/// Chain length using only bulk points strictly inside the box from `p` to `q`.
pub fn png_point_to_point(field: &PointField, p: Point, q: Point) -> Result<usize> {
    if q.0 < p.0 || q.1 < p.1 {
        return domain(format!("{q:?} does not dominate {p:?}"));
    }
    let pts = field.sample_points(Rect::new(p.0, p.1, q.0, q.1))?;
    Ok(lis_sorted(&pts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block() -> WeightGrid {
        WeightGrid::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]])
    }

    #[test]
    fn two_by_two_block() {
        let g = block();
        let corner = passage_batch(
            &g,
            SemiringMode::MaxPlus,
            Source::HalfLineOrCorner,
            &[(1, 1)],
        )
        .unwrap();
        assert_eq!(corner, vec![8.0]);
        assert_eq!(
            point_to_point(&g, SemiringMode::MinPlus, (0, 0), (1, 1)).unwrap(),
            7.0
        );
        let f = point_to_point(&g, SemiringMode::LogSumExp { beta: 50.0 }, (0, 0), (1, 1)).unwrap();
        assert!((8.0..=8.0 + 2f64.ln() / 50.0).contains(&f), "{f}");
        assert_eq!(
            point_to_point(&g, SemiringMode::MaxPlus, (1, 0), (1, 0)).unwrap(),
            3.0
        );
    }

    #[test]
    fn junction_convention() {
        let g = block();
        let x = superadditivity_check(
            &g,
            SemiringMode::MaxPlus,
            Source::HalfLineOrCorner,
            (0, 0),
            (1, 1),
        )
        .unwrap();
        assert_eq!(x, 0.0);
    }

    #[test]
    fn all_ones_min_plus() {
        for n in 1..8 {
            let g = WeightGrid::filled(n, n, 1.0);
            let v = point_to_point(
                &g,
                SemiringMode::MinPlus,
                (0, 0),
                (n as i64 - 1, n as i64 - 1),
            )
            .unwrap();
            assert_eq!(v, 2.0 * n as f64 - 1.0);
        }
    }

    #[test]
    fn all_zero_weights() {
        let g = WeightGrid::filled(5, 4, 0.0);
        let v = passage_batch(
            &g,
            SemiringMode::MaxPlus,
            Source::HalfLineOrCorner,
            &[(4, 3), (2, 1)],
        )
        .unwrap();
        assert_eq!(v, vec![0.0, 0.0]);
    }

    #[test]
    fn unreachable_and_outside_targets() {
        let g = block();
        assert!(point_to_point(&g, SemiringMode::MaxPlus, (1, 1), (0, 1)).is_err());
        assert!(passage_batch(
            &g,
            SemiringMode::MaxPlus,
            Source::HalfLineOrCorner,
            &[(2, 0)]
        )
        .is_err());
        assert!(passage_batch(
            &g,
            SemiringMode::LogSumExp { beta: 1.0 },
            Source::HalfLineOrCorner,
            &[(1, 1)]
        )
        .is_err());
    }

    #[test]
    fn lis_small_cases() {
        assert_eq!(lis_length(&[]), 0);
        let diag: Vec<Point> = (1..=9).map(|k| (k as f64, k as f64)).collect();
        assert_eq!(lis_length(&diag), 9);
        assert_eq!(lis_length(&[(1.0, 1.0), (1.0, 2.0), (2.0, 2.0)]), 2);
    }

    #[test]
    fn log_add_exp_handles_empty() {
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 2.0), 2.0);
        assert!((log_add_exp(0.0, 0.0) - 2f64.ln()).abs() < 1e-15);
    }
}
