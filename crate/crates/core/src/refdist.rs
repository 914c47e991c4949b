//! Reference distributions and goodness-of-fit statistics.
//!
//! The Tracy-Widom laws are Fredholm determinants on `(s, inf)`, computed with
//! Gauss-Legendre quadrature after the map `x = s + u / (1 - u)`.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{domain, Error, Result};

const AI0: f64 = 0.355_028_053_887_817_2;
const AIP0: f64 = 0.258_819_403_792_806_8;
const SQRT_PI: f64 = 1.772_453_850_905_516;

/// `(Ai(x), Ai'(x))` for any `x >= -15`; large positive `x` underflows to zero.
fn airy_pair(x: f64) -> (f64, f64) {
    if x > 6.0 {
        airy_decaying(x)
    } else if x < -7.0 {
        airy_oscillating(-x)
    } else {
        airy_series(x)
    }
}

fn airy_series(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    let (mut f, mut g) = (1.0, x);
    let (mut fd, mut gd) = (0.0, 1.0);
    let (mut a, mut b) = (1.0, x);
    let (mut e, mut h) = (x * x / 2.0, 1.0);
    fd += e;
    for k in 1..200 {
        let kf = k as f64;
        a *= x3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        b *= x3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        e *= x3 / ((3.0 * kf) * (3.0 * kf + 2.0));
        h *= x3 / ((3.0 * kf - 2.0) * (3.0 * kf));
        f += a;
        g += b;
        fd += e;
        gd += h;
        let scale = f.abs() + g.abs() + fd.abs() + gd.abs();
        if a.abs() + b.abs() + e.abs() + h.abs() < 1e-18 * scale {
            break;
        }
    }
    (AI0 * f - AIP0 * g, AI0 * fd - AIP0 * gd)
}

/// Coefficients `u_k` of the asymptotic expansions, until the terms at `zeta`
/// stop decreasing.
fn asymptotic_coeffs(zeta: f64) -> Vec<(f64, f64)> {
    let mut out = vec![(1.0, 1.0)];
    let mut u = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / (216.0 * kf * (2.0 * kf - 1.0));
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        let size = u.abs().max(v.abs()) / zeta.powi(k);
        if size > last || size < 1e-17 {
            break;
        }
        last = size;
        out.push((u, v));
    }
    out
}

fn airy_decaying(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let (mut su, mut sv) = (0.0, 0.0);
    let mut zk = 1.0;
    for (k, (u, v)) in asymptotic_coeffs(zeta).into_iter().enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        su += sign * u * zk;
        sv += sign * v * zk;
        zk /= zeta;
    }
    let q = x.powf(0.25);
    let ez = (-zeta).exp() / (2.0 * SQRT_PI);
    (ez / q * su, -ez * q * sv)
}

fn airy_oscillating(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    // Even and odd parts of the alternating-in-pairs sums.
    let (mut pu, mut qu, mut pv, mut qv) = (0.0, 0.0, 0.0, 0.0);
    let mut zk = 1.0;
    for (k, (u, v)) in asymptotic_coeffs(zeta).into_iter().enumerate() {
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            pu += sign * u * zk;
            pv += sign * v * zk;
        } else {
            qu += sign * u * zk;
            qv += sign * v * zk;
        }
        zk /= zeta;
    }
    let phase = zeta + std::f64::consts::FRAC_PI_4;
    let (s, c) = phase.sin_cos();
    let q = z.powf(0.25);
    let ai = (s * pu - c * qu) / (SQRT_PI * q);
    let aip = -q / SQRT_PI * (c * pv + s * qv);
    (ai, aip)
}

fn check_airy_range(x: f64) -> Result<()> {
    if !(-15.0..=30.0).contains(&x) {
        return domain(format!("Airy argument {x} outside [-15, 30]"));
    }
    Ok(())
}

/// Airy function `Ai(x)` on `[-15, 30]`.
pub fn airy_fn(x: f64) -> Result<f64> {
    check_airy_range(x)?;
    Ok(airy_pair(x).0)
}

/// Derivative `Ai'(x)` on `[-15, 30]`.
pub fn airy_prime(x: f64) -> Result<f64> {
    check_airy_range(x)?;
    Ok(airy_pair(x).1)
}

/// Gauss-Legendre nodes and weights on `(0, 1)`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = 0.5 * (1.0 - z);
        nodes[n - 1 - i] = 0.5 * (1.0 + z);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

/// Determinant by LU with partial pivoting; `a` is row-major `n x n`.
fn determinant(mut a: Vec<f64>, n: usize) -> f64 {
    let mut det = 1.0;
    for c in 0..n {
        let piv = (c..n)
            .max_by(|&r, &s| a[r * n + c].abs().total_cmp(&a[s * n + c].abs()))
            .unwrap();
        if a[piv * n + c] == 0.0 {
            return 0.0;
        }
        if piv != c {
            for k in 0..n {
                a.swap(c * n + k, piv * n + k);
            }
            det = -det;
        }
        let d = a[c * n + c];
        det *= d;
        for r in c + 1..n {
            let f = a[r * n + c] / d;
            if f != 0.0 {
                for k in c + 1..n {
                    a[r * n + k] -= f * a[c * n + k];
                }
            }
        }
    }
    det
}

/// `det(I - K)` on `L^2(s, inf)` for a kernel built from per-node data.
fn fredholm<F>(s: f64, nodes: usize, kernel: F) -> f64
where
    F: Fn(&[f64], usize, usize) -> f64,
{
    let (u, w) = gauss_legendre(nodes);
    let x: Vec<f64> = u.iter().map(|&u| s + u / (1.0 - u)).collect();
    let sw: Vec<f64> = u
        .iter()
        .zip(&w)
        .map(|(&u, &w)| (w / ((1.0 - u) * (1.0 - u))).sqrt())
        .collect();
    let mut a = vec![0.0; nodes * nodes];
    for i in 0..nodes {
        for j in 0..nodes {
            let id = if i == j { 1.0 } else { 0.0 };
            a[i * nodes + j] = id - sw[i] * kernel(&x, i, j) * sw[j];
        }
    }
    determinant(a, nodes).clamp(0.0, 1.0)
}

fn gue_raw(s: f64, nodes: usize) -> f64 {
    let (u, _) = gauss_legendre(nodes);
    let ai: Vec<(f64, f64)> = u.iter().map(|&u| airy_pair(s + u / (1.0 - u))).collect();
    fredholm(s, nodes, |x, i, j| {
        let (a, ap) = ai[i];
        let (b, bp) = ai[j];
        if i == j {
            ap * ap - x[i] * a * a
        } else {
            (a * bp - ap * b) / (x[i] - x[j])
        }
    })
}

fn goe_raw(s: f64, nodes: usize) -> f64 {
    fredholm(s, nodes, |x, i, j| 0.5 * airy_pair(0.5 * (x[i] + x[j])).0)
}

fn converged(s: f64, nodes: usize, f: impl Fn(f64, usize) -> f64) -> Result<f64> {
    let a = f(s, nodes);
    let b = f(s, 2 * nodes);
    if (a - b).abs() > 1e-6 {
        return Err(Error::Accuracy(format!(
            "quadrature at s={s} moved by {:.3e} when doubling {nodes} nodes",
            (a - b).abs()
        )));
    }
    Ok(b)
}

/// GUE Tracy-Widom CDF `F_2(s)` for `s` in `[-10, 6]`.
///
/// The value is computed with `nodes` and `2 nodes` points; a change above
/// `1e-6` is reported as an accuracy error.
pub fn tw_gue_cdf(s: f64, nodes: usize) -> Result<f64> {
    if !(-10.0..=6.0).contains(&s) {
        return domain(format!("s = {s} outside [-10, 6]"));
    }
    if nodes < 20 {
        return domain(format!("need at least 20 nodes, got {nodes}"));
    }
    converged(s, nodes, gue_raw)
}

/// GOE Tracy-Widom CDF `F_1(s)` from the kernel `Ai((x+y)/2)/2`.
///
/// This kernel decays slowly for negative `s`, so far-left values need more
/// nodes than the GUE case.
pub fn tw_goe_cdf(s: f64, nodes: usize) -> Result<f64> {
    if !(-10.0..=6.0).contains(&s) {
        return domain(format!("s = {s} outside [-10, 6]"));
    }
    if nodes < 20 {
        return domain(format!("need at least 20 nodes, got {nodes}"));
    }
    converged(s, nodes, goe_raw)
}

/// Tabulated CDF with linear interpolation, clamped to 0 and 1 outside the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfTable {
    s: Vec<f64>,
    f: Vec<f64>,
}

impl CdfTable {
    pub fn new(s: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        if s.len() != f.len() || s.len() < 2 {
            return domain("a table needs at least two (s, F) rows");
        }
        if s.windows(2).any(|w| w[0] >= w[1]) || f.windows(2).any(|w| w[0] > w[1]) {
            return domain("table grid must increase and CDF values must not decrease");
        }
        Ok(Self { s, f })
    }

    /// Two whitespace-separated columns `s F(s)`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Vec::new();
        let mut f = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<f64> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Domain(format!("table line {}: {e}", n + 1)))?;
            if cols.len() != 2 {
                return domain(format!("table line {}: expected two columns", n + 1));
            }
            s.push(cols[0]);
            f.push(cols[1]);
        }
        Self::new(s, f)
    }

    /// GOE table on `[lo, hi]` with `points` grid values.
    pub fn goe(lo: f64, hi: f64, points: usize, nodes: usize) -> Result<Self> {
        let s: Vec<f64> = (0..points)
            .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
            .collect();
        let f = s
            .iter()
            .map(|&s| tw_goe_cdf(s, nodes))
            .collect::<Result<Vec<_>>>()?;
        let mut f = f;
        for k in 1..f.len() {
            f[k] = f[k].max(f[k - 1]);
        }
        Self::new(s, f)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let n = self.s.len();
        if x <= self.s[0] {
            return if x < self.s[0] { 0.0 } else { self.f[0] };
        }
        if x >= self.s[n - 1] {
            return 1.0;
        }
        let k = self.s.partition_point(|&s| s <= x);
        let (s0, s1) = (self.s[k - 1], self.s[k]);
        let w = (x - s0) / (s1 - s0);
        self.f[k - 1] * (1.0 - w) + self.f[k] * w
    }
}

/// Nodes used when evaluating the GUE law inside goodness-of-fit tests.
const GUE_NODES: usize = 48;

/// A one-dimensional law with a CDF.
#[derive(Debug, Clone)]
pub enum ReferenceDistribution {
    Gue,
    Gaussian {
        mean: f64,
        std: f64,
    },
    MaxTwoGaussians {
        mean1: f64,
        std1: f64,
        mean2: f64,
        std2: f64,
    },
    /// Square of a tabulated GOE CDF.
    GoeSq(CdfTable),
    /// Sorted sample.
    Empirical(Vec<f64>),
}

impl ReferenceDistribution {
    pub fn gaussian(mean: f64, std: f64) -> Result<Self> {
        if !(std > 0.0 && std.is_finite() && mean.is_finite()) {
            return domain(format!("invalid Gaussian ({mean}, {std})"));
        }
        Ok(Self::Gaussian { mean, std })
    }

    pub fn empirical(mut sample: Vec<f64>) -> Self {
        sample.sort_by(f64::total_cmp);
        Self::Empirical(sample)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Self::Gue => {
                if x < -10.0 {
                    0.0
                } else if x > 6.0 {
                    1.0
                } else {
                    gue_raw(x, GUE_NODES)
                }
            }
            Self::Gaussian { mean, std } => normal_cdf(x, *mean, *std),
            Self::MaxTwoGaussians {
                mean1,
                std1,
                mean2,
                std2,
            } => normal_cdf(x, *mean1, *std1) * normal_cdf(x, *mean2, *std2),
            Self::GoeSq(table) => table.cdf(x).powi(2),
            Self::Empirical(v) => v.partition_point(|&y| y <= x) as f64 / v.len().max(1) as f64,
        }
    }
}

fn normal_cdf(x: f64, mean: f64, std: f64) -> f64 {
    Normal::new(mean, std).map(|n| n.cdf(x)).unwrap_or(f64::NAN)
}

/// Kolmogorov-Smirnov distance between a sample and a reference.
///
/// Against an `Empirical` reference this is the two-sample statistic.
pub fn ks_statistic(sample: &[f64], reference: &ReferenceDistribution) -> Result<f64> {
    if sample.is_empty() {
        return domain("KS statistic of an empty sample");
    }
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    if let ReferenceDistribution::Empirical(other) = reference {
        return ks_two_sample(&xs, other);
    }
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = reference.cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d.clamp(0.0, 1.0))
}

/// Two-sample KS distance, with ties stepped together.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return domain("KS statistic of an empty sample");
    }
    let sorted = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_by(f64::total_cmp);
        v
    };
    let (a, b) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Empirical quantiles at the given levels (linear interpolation).
pub fn quantiles(sample: &[f64], levels: &[f64]) -> Vec<f64> {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    levels
        .iter()
        .map(|&q| {
            if xs.is_empty() {
                return f64::NAN;
            }
            let pos = q.clamp(0.0, 1.0) * (xs.len() - 1) as f64;
            let k = pos.floor() as usize;
            let w = pos - k as f64;
            if k + 1 < xs.len() {
                xs[k] * (1.0 - w) + xs[k + 1] * w
            } else {
                xs[k]
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // (x, Ai(x), Ai'(x)) from a 30-digit reference evaluation.
    #[allow(clippy::excessive_precision)]
    const AIRY: [(f64, f64, f64); 20] = [
        (-15.0, 0.27821749087082893, 0.27237420430864202),
        (-12.0, -0.066555175054373129, 1.0231104533679707),
        (-9.5, 0.3191032477191282, -0.10809531881187124),
        (-7.5, 0.32177571638064788, 0.3188095066985546),
        (-7.0, 0.18428083525050564, -0.77100816841012655),
        (-6.5, -0.2380203019971158, -0.67495249251320217),
        (-3.0, -0.37881429367765807, 0.31458376921659881),
        (-1.0, 0.53556088329235212, -0.010160567116645209),
        (0.0, 0.35502805388781724, -0.2588194037928068),
        (0.5, 0.23169360648083349, -0.22491053266468389),
        (1.0, 0.13529241631288142, -0.15914744129679321),
        (2.0, 0.034924130423274379, -0.053090384433653632),
        (4.5, 0.00033025032351430898, -0.00071786656755750889),
        (5.0, 0.00010834442813607442, -0.00024741389086846248),
        (6.0, 9.9476943602528896e-6, -2.4765200397034955e-5),
        (6.5, 2.7958823432049136e-6, -7.2319314666017926e-6),
        (8.0, 4.6922076160992316e-8, -1.3414392979067866e-7),
        (12.0, 1.3931846888753608e-13, -4.8547365549853085e-13),
        (20.0, 1.6916728686705403e-27, -7.586391625748355e-27),
        (30.0, 3.2082175915504956e-49, -1.759876581432726e-48),
    ];

    #[test]
    fn airy_matches_reference_values() {
        for &(x, ai, aip) in &AIRY {
            assert_abs_diff_eq!(airy_fn(x).unwrap(), ai, epsilon = 1e-10);
            assert_abs_diff_eq!(airy_prime(x).unwrap(), aip, epsilon = 1e-10);
        }
    }

    #[test]
    fn airy_at_zero_is_closed_form() {
        let closed = 3f64.powf(-2.0 / 3.0) / statrs::function::gamma::gamma(2.0 / 3.0);
        assert_abs_diff_eq!(airy_fn(0.0).unwrap(), closed, epsilon = 1e-14);
    }

    #[test]
    fn airy_branches_agree_at_switch_points() {
        for x in [-7.0, 6.0] {
            let a = airy_series(x);
            let b = if x > 0.0 {
                airy_decaying(x)
            } else {
                airy_oscillating(-x)
            };
            assert_abs_diff_eq!(a.0, b.0, epsilon = 1e-10);
            assert_abs_diff_eq!(a.1, b.1, epsilon = 1e-10);
        }
    }

    #[test]
    fn airy_rejects_out_of_range() {
        assert!(matches!(airy_fn(-15.5), Err(Error::Domain(_))));
        assert!(matches!(airy_fn(31.0), Err(Error::Domain(_))));
    }

    #[test]
    fn airy_decays_monotonically() {
        let mut prev = airy_fn(1.0).unwrap();
        for k in 1..=290 {
            let v = airy_fn(1.0 + 0.1 * k as f64).unwrap();
            assert!(v < prev && v > 0.0);
            prev = v;
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(7);
        let total: f64 = w.iter().sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-14);
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(13)).sum();
        assert_abs_diff_eq!(m, 1.0 / 14.0, epsilon = 1e-14);
    }

    #[test]
    fn determinant_small() {
        assert_abs_diff_eq!(
            determinant(vec![0.0, 2.0, 3.0, 4.0], 2),
            -6.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn gue_reference_values() {
        assert_abs_diff_eq!(
            tw_gue_cdf(0.0, 40).unwrap(),
            0.9693728283552,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            tw_gue_cdf(-2.0, 40).unwrap(),
            0.413224142505,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            tw_gue_cdf(-4.0, 40).unwrap(),
            0.0035445535955,
            epsilon = 1e-9
        );
        assert!(tw_gue_cdf(6.0, 40).unwrap() >= 0.9999);
    }

    #[test]
    fn gue_argument_checks() {
        assert!(matches!(tw_gue_cdf(7.0, 40), Err(Error::Domain(_))));
        assert!(matches!(tw_gue_cdf(0.0, 10), Err(Error::Domain(_))));
    }

    #[test]
    fn goe_reference_values() {
        assert_abs_diff_eq!(tw_goe_cdf(0.0, 40).unwrap(), 0.8319080662, epsilon = 1e-8);
        assert_abs_diff_eq!(tw_goe_cdf(-2.0, 80).unwrap(), 0.2743201979, epsilon = 1e-8);
    }

    #[test]
    fn table_interpolates_and_parses() {
        let t = CdfTable::parse("# s F\n-1 0\n0 0.5\n1 1\n").unwrap();
        assert_eq!(t.cdf(-2.0), 0.0);
        assert_abs_diff_eq!(t.cdf(0.5), 0.75, epsilon = 1e-15);
        assert_eq!(t.cdf(3.0), 1.0);
        assert!(CdfTable::parse("0 1 2").is_err());
        assert!(CdfTable::parse("1 0.5\n0 0.2").is_err());
    }

    #[test]
    fn max_of_gaussians_is_product() {
        let m = ReferenceDistribution::MaxTwoGaussians {
            mean1: 0.0,
            std1: 1.0,
            mean2: 1.0,
            std2: 2.0,
        };
        for x in [-2.0, 0.0, 0.7, 3.0] {
            assert_abs_diff_eq!(
                m.cdf(x),
                normal_cdf(x, 0.0, 1.0) * normal_cdf(x, 1.0, 2.0),
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn ks_simple_cases() {
        let median = -1.8047;
        let d = ks_statistic(&[median], &ReferenceDistribution::Gue).unwrap();
        assert_abs_diff_eq!(d, 0.5, epsilon = 1e-3);
        let g = ReferenceDistribution::gaussian(0.0, 1.0).unwrap();
        assert_abs_diff_eq!(ks_statistic(&[0.0], &g).unwrap(), 0.5, epsilon = 1e-15);
        let s = vec![3.0, 1.0, 2.0, 2.0];
        let e = ReferenceDistribution::empirical(s.clone());
        assert_eq!(ks_statistic(&s, &e).unwrap(), 0.0);
        assert!(ks_statistic(&[], &g).is_err());
    }

    #[test]
    fn two_sample_disjoint() {
        assert_eq!(ks_two_sample(&[0.0, 1.0], &[2.0, 3.0]).unwrap(), 1.0);
    }

    #[test]
    fn two_sample_ignores_input_order() {
        let a = [3.0, 1.0, 2.0, 2.0];
        let b = [2.0, 2.0, 1.0, 3.0];
        assert_eq!(ks_two_sample(&a, &b).unwrap(), 0.0);
        assert_eq!(ks_two_sample(&[5.0, 0.0], &[0.0, 5.0]).unwrap(), 0.0);
    }

    #[test]
    fn quantile_levels() {
        let q = quantiles(&[4.0, 1.0, 3.0, 2.0, 5.0], &[0.0, 0.5, 1.0, 0.25]);
        assert_eq!(q, vec![1.0, 3.0, 5.0, 2.0]);
    }
}
