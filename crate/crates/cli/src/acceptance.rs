//! The acceptance checklist, shared by `slowdec verify` and the `acceptance`
//! test target.
//!
//! Each criterion returns a verdict plus a one-line account of the numbers
//! behind it. Runtimes are reported, not enforced.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use slowdec::environment::{
    mix64, sample_seed, BoundarySpec, DistributionSpec, Support, WeightField,
};
use slowdec::experiments::{
    model_source, run_decorrelation, run_distribution_test, run_exponent_fit,
    run_off_characteristic_control, run_pasep_decorrelation, run_png_lis,
    run_projection_experiment, DecorrConfig, DecorrReport, DistributionConfig, ExponentConfig,
    PasepDecorrConfig, PngConfig, ProjectionConfig, ReferenceChoice,
};
use slowdec::models::{height_from_passage, ModelSpec};
use slowdec::pasep::{attractiveness, simulate, PasepConfig, PasepIc};
use slowdec::passage::{
    passage_values, superadditivity_check, PassageQuery, SemiringMode, Site, Source, WeightGrid,
};
use slowdec::refdist::{airy_fn, airy_prime, ks_two_sample, tw_gue_cdf};
use slowdec::Result;

use crate::config::{parse, RunConfig};
use crate::runner::{execute, CliError, Overrides};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Exact oracles and invariants.
    Fast,
    /// Everything, including the statistical criteria.
    Full,
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> std::result::Result<Self, CliError> {
        match s {
            "fast" => Ok(Self::Fast),
            "full" => Ok(Self::Full),
            other => Err(CliError::Schema(format!(
                "unknown suite `{other}`; expected `fast` or `full`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "{} {:>2}. {:<30} {} [{:.1}s]",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.seconds
        )
    }
}

type Check = Result<(bool, String)>;

struct Criterion {
    id: u32,
    title: &'static str,
    fast: bool,
    run: fn() -> Check,
}

const CRITERIA: [Criterion; 12] = [
    Criterion {
        id: 1,
        title: "exact oracle equivalence",
        fast: true,
        run: oracle_equivalence,
    },
    Criterion {
        id: 2,
        title: "exact superadditivity",
        fast: true,
        run: superadditivity,
    },
    Criterion {
        id: 3,
        title: "limit shape",
        fast: false,
        run: limit_shape,
    },
    Criterion {
        id: 4,
        title: "one-point law",
        fast: false,
        run: one_point_law,
    },
    Criterion {
        id: 5,
        title: "exponent regimes",
        fast: false,
        run: exponent_regimes,
    },
    Criterion {
        id: 6,
        title: "slow decorrelation",
        fast: false,
        run: slow_decorrelation,
    },
    Criterion {
        id: 7,
        title: "direction specificity",
        fast: false,
        run: direction_specificity,
    },
    Criterion {
        id: 8,
        title: "projection property",
        fast: false,
        run: projection_property,
    },
    Criterion {
        id: 9,
        title: "exclusion cross-validation",
        fast: false,
        run: pasep_cross_validation,
    },
    Criterion {
        id: 10,
        title: "Poisson chain sanity",
        fast: false,
        run: png_sanity,
    },
    Criterion {
        id: 11,
        title: "reference numerics",
        fast: true,
        run: refdist_numerics,
    },
    Criterion {
        id: 12,
        title: "determinism",
        fast: true,
        run: determinism,
    },
];

/// Criterion ids in a suite.
pub fn ids(suite: Suite) -> Vec<u32> {
    CRITERIA
        .iter()
        .filter(|c| suite == Suite::Full || c.fast)
        .map(|c| c.id)
        .collect()
}

/// Runs one criterion; library errors count as failures.
pub fn run_criterion(id: u32) -> Option<Outcome> {
    let c = CRITERIA.iter().find(|c| c.id == id)?;
    let start = Instant::now();
    let (passed, detail) = match (c.run)() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    Some(Outcome {
        id: c.id,
        title: c.title,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Runs a suite in order, handing each outcome to `report` as soon as it is known.
pub fn run_suite(suite: Suite, mut report: impl FnMut(&Outcome)) -> Vec<Outcome> {
    ids(suite)
        .into_iter()
        .filter_map(|id| {
            let o = run_criterion(id)?;
            report(&o);
            Some(o)
        })
        .collect()
}

fn count_true(xs: impl IntoIterator<Item = bool>) -> usize {
    xs.into_iter().filter(|&x| x).count()
}

// ---------------------------------------------------------------- 1

fn combine(mode: SemiringMode, totals: &[f64]) -> f64 {
    match mode {
        SemiringMode::MaxPlus => totals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        SemiringMode::MinPlus => totals.iter().copied().fold(f64::INFINITY, f64::min),
        SemiringMode::LogSumExp { beta } => {
            let m = totals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            m + totals
                .iter()
                .map(|t| (beta * (t - m)).exp())
                .sum::<f64>()
                .ln()
                / beta
        }
    }
}

/// Weights of every up-right path from `from` to `to`, accumulated from the start.
fn path_totals(g: &WeightGrid, from: Site, to: Site) -> Vec<f64> {
    fn walk(g: &WeightGrid, at: Site, to: Site, acc: f64, out: &mut Vec<f64>) {
        let acc = acc + g.get(at.0, at.1);
        if at == to {
            out.push(acc);
            return;
        }
        if at.0 < to.0 {
            walk(g, (at.0 + 1, at.1), to, acc, out);
        }
        if at.1 < to.1 {
            walk(g, (at.0, at.1 + 1), to, acc, out);
        }
    }
    let mut out = Vec::new();
    walk(g, from, to, 0.0, &mut out);
    out
}

fn random_grid(k: u64) -> Result<WeightGrid> {
    let r = mix64(sample_seed(101, k));
    let nx = 1 + (r % 6) as usize;
    let ny = 1 + ((r >> 8) % 6) as usize;
    // Integer weights on every other grid, so that ties occur.
    let bulk = if k.is_multiple_of(2) {
        DistributionSpec::Exponential { rate: 1.0 }
    } else {
        DistributionSpec::Geometric { p: 0.4 }
    };
    let field = WeightField::new(
        sample_seed(102, k),
        Support::Quadrant,
        bulk,
        BoundarySpec::None,
    )?;
    let rows = (0..nx as i64)
        .map(|i| {
            (0..ny as i64)
                .map(|j| field.weight(i, j))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightGrid::from_rows(&rows))
}

fn oracle_equivalence() -> Check {
    const GRIDS: u64 = 500;
    let mut compared = 0usize;
    let mut worst_rel = 0.0f64;
    let mut mismatches = 0usize;
    for k in 0..GRIDS {
        let g = random_grid(k)?;
        let (nx, ny) = g.dims();
        let r = mix64(sample_seed(103, k));
        let src: Site = ((r % nx as u64) as i64, ((r >> 16) % ny as u64) as i64);
        let beta = [0.25, 1.0, 4.0][(k % 3) as usize];
        let targets: Vec<Site> = (src.0..nx as i64)
            .flat_map(|i| (src.1..ny as i64).map(move |j| (i, j)))
            .collect();
        let mut cases = vec![
            (
                SemiringMode::MaxPlus,
                Source::Point { i: src.0, j: src.1 },
                src,
            ),
            (
                SemiringMode::MinPlus,
                Source::Point { i: src.0, j: src.1 },
                src,
            ),
            (
                SemiringMode::LogSumExp { beta },
                Source::Point { i: src.0, j: src.1 },
                src,
            ),
        ];
        if src != (0, 0) {
            cases.push((SemiringMode::MaxPlus, Source::HalfLineOrCorner, (0, 0)));
        }
        for (mode, source, from) in cases {
            let tg: Vec<Site> = if from == (0, 0) {
                (0..nx as i64)
                    .flat_map(|i| (0..ny as i64).map(move |j| (i, j)))
                    .collect()
            } else {
                targets.clone()
            };
            let got = passage_values(&PassageQuery {
                field: &g,
                mode,
                source,
                targets: tg.clone(),
            })?;
            for v in got {
                let want = combine(mode, &path_totals(&g, from, v.target));
                compared += 1;
                let ok = match mode {
                    SemiringMode::LogSumExp { .. } => {
                        let rel = (v.value - want).abs() / want.abs().max(1e-300);
                        worst_rel = worst_rel.max(if want == 0.0 {
                            (v.value - want).abs()
                        } else {
                            rel
                        });
                        rel <= 1e-9 || (v.value - want).abs() <= 1e-12
                    }
                    _ => v.value == want,
                };
                mismatches += usize::from(!ok);
            }
        }
    }
    Ok((
        mismatches == 0,
        format!("{GRIDS} grids, {compared} values, {mismatches} mismatches, worst log-sum-exp rel err {worst_rel:.1e}"),
    ))
}

// ---------------------------------------------------------------- 2

fn superadditivity() -> Check {
    const N: u64 = 10_000;
    let engines = [
        ("max-plus", SemiringMode::MaxPlus),
        ("min-plus", SemiringMode::MinPlus),
        ("log-sum-exp", SemiringMode::LogSumExp { beta: 1.0 }),
    ];
    let mut parts = Vec::new();
    let mut total = 0usize;
    for (e, (name, mode)) in engines.into_iter().enumerate() {
        let bad = (0..N)
            .into_par_iter()
            .map(|k| -> Result<bool> {
                let seed = sample_seed(200 + e as u64, k);
                let r = mix64(seed);
                let p: Site = ((r % 20) as i64, ((r >> 8) % 20) as i64);
                let q: Site = (p.0 + ((r >> 16) % 20) as i64, p.1 + ((r >> 24) % 20) as i64);
                let mode = match mode {
                    SemiringMode::LogSumExp { .. } => SemiringMode::LogSumExp {
                        beta: [0.5, 1.0, 2.0][(k % 3) as usize],
                    },
                    m => m,
                };
                let x = superadditivity_check(
                    &WeightField::exponential(seed),
                    mode,
                    model_source(mode),
                    p,
                    q,
                )?;
                Ok(match mode {
                    SemiringMode::MinPlus => x.is_nan() || x > 0.0,
                    _ => x.is_nan() || x < 0.0,
                })
            })
            .collect::<Result<Vec<bool>>>()?;
        let v = count_true(bad);
        total += v;
        parts.push(format!("{name} {v}"));
    }
    let pasep = run_pasep_decorrelation(&PasepDecorrConfig {
        p: 0.75,
        ic: PasepIc::Step,
        v: 0.0,
        u: 1.0,
        nu: 0.5,
        t_grid: vec![100.0],
        m_grid: vec![1.0],
        samples: N as usize,
        seed: 204,
        margin: 1.5,
    })?;
    total += pasep.violations();
    parts.push(format!("exclusion {}", pasep.violations()));
    Ok((
        total == 0,
        format!("{N} samples per engine; violations: {}", parts.join(", ")),
    ))
}

// ---------------------------------------------------------------- 3

fn limit_shape() -> Check {
    const T: f64 = 2000.0;
    const N: u64 = 200;
    let h = (0..N)
        .into_par_iter()
        .map(|k| -> Result<f64> {
            let prof = height_from_passage(
                &WeightField::exponential(sample_seed(300, k)),
                T,
                (0, 0),
                600,
            )?;
            Ok(prof.at(0).expect("window holds the origin") as f64 / T)
        })
        .collect::<Result<Vec<f64>>>()?;
    let m = h.iter().sum::<f64>() / h.len() as f64;
    Ok((
        (m - 0.5).abs() <= 0.02,
        format!("mean h(0,{T})/t = {m:.4} over {N} samples (target 0.5 +- 0.02)"),
    ))
}

// ---------------------------------------------------------------- 4

fn one_point_law() -> Check {
    let r = run_distribution_test(&DistributionConfig {
        model: ModelSpec::CornerGrowthStep,
        kappa: 1.0,
        t: 250.0,
        samples: 10_000,
        seed: 400,
        reference: ReferenceChoice::Gue,
    })?;
    Ok((
        r.ks <= 0.05,
        format!("KS {:.4} vs GUE at n=250, N={} (<= 0.05)", r.ks, r.samples),
    ))
}

// ---------------------------------------------------------------- 5

fn exponent_regimes() -> Check {
    let grid = vec![250.0, 500.0, 1000.0, 2000.0, 4000.0];
    let fit = |model: ModelSpec, seed: u64| {
        run_exponent_fit(&ExponentConfig {
            model,
            kappa: 1.0,
            t_grid: grid.clone(),
            samples: 2000,
            seed,
        })
    };
    let bulk = fit(ModelSpec::CornerGrowthStep, 500)?;
    let gauss = fit(
        ModelSpec::TwoSidedBoundaryLpp {
            pi: 0.75,
            eta: 1.0 / 3.0,
        },
        501,
    )?;
    let ok = (0.28..=0.38).contains(&bulk.slope) && (0.45..=0.55).contains(&gauss.slope);
    Ok((
        ok,
        format!(
            "Case1 {:.3} +- {:.3} in [0.28, 0.38]; Case2 {:.3} +- {:.3} in [0.45, 0.55]",
            bulk.slope, bulk.slope_se, gauss.slope, gauss.slope_se
        ),
    ))
}

// ---------------------------------------------------------------- 6, 7

const DECORR_TIMES: [f64; 3] = [500.0, 2000.0, 8000.0];

fn tails(r: &DecorrReport) -> Vec<(f64, f64)> {
    DECORR_TIMES
        .iter()
        .map(|&t| r.tail(t, 1.0).map_or((f64::NAN, 0.0), |x| (x.tail, x.se)))
        .collect()
}

fn fmt_tails(ts: &[(f64, f64)]) -> String {
    ts.iter()
        .map(|(p, se)| format!("{p:.3}({se:.3})"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Bulk corner growth at `p = (1, 1/4)`.
fn decorr_base(samples: usize, seed: u64) -> DecorrConfig {
    DecorrConfig {
        model: ModelSpec::CornerGrowthStep,
        kappa: 0.5,
        u: None,
        nu: 0.5,
        t_grid: DECORR_TIMES.to_vec(),
        m_grid: vec![1.0],
        samples,
        seed,
        allow_no_decorrelation: false,
    }
}

fn separated(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 - b.0 > 2.0 * (a.1 * a.1 + b.1 * b.1).sqrt()
}

fn slow_decorrelation() -> Check {
    let r = run_decorrelation(&decorr_base(10_000, 600))?;
    let ts = tails(&r);
    let decreasing = separated(ts[0], ts[1]) && separated(ts[1], ts[2]);
    let last = ts[2].0 <= 0.1;
    let corr = r.time(8000.0).map_or(f64::NAN, |s| s.corr_chi12);
    Ok((
        decreasing && last && corr >= 0.9,
        format!(
            "tails {} (decreasing beyond 2 SE, last <= 0.1); corr(chi1,chi2) {corr:.3} (>= 0.9)",
            fmt_tails(&ts)
        ),
    ))
}

fn direction_specificity() -> Check {
    let off = run_off_characteristic_control(&DecorrConfig {
        u: Some((1.0, 4.0)),
        nu: 0.7,
        ..decorr_base(2000, 700)
    })?;
    let ot = tails(&off);
    let rising = ot
        .windows(2)
        .all(|w| w[1].0 >= w[0].0 - 2.0 * (w[0].1 * w[0].1 + w[1].1 * w[1].1).sqrt())
        && ot[2].0 >= 0.95;
    let shock = run_decorrelation(&DecorrConfig {
        model: ModelSpec::TwoSidedBoundaryLpp { pi: 0.5, eta: 0.2 },
        u: Some((1.0, 1.0)),
        allow_no_decorrelation: true,
        ..decorr_base(2000, 701)
    })?;
    let st = tails(&shock);
    let stuck = st.iter().all(|x| x.0 >= 0.2);
    Ok((
        rising && stuck,
        format!(
            "off-characteristic tails {} (toward 1); shock {:?} tails {} (>= 0.2)",
            fmt_tails(&ot),
            shock.case,
            fmt_tails(&st)
        ),
    ))
}

// ---------------------------------------------------------------- 8

fn projection_property() -> Check {
    let r = run_projection_experiment(&ProjectionConfig {
        t_grid: DECORR_TIMES.to_vec(),
        nu: 0.6,
        tau: 0.5,
        offsets: vec![0.0, 1.0],
        samples: 10_000,
        seed: 800,
    })?;
    let c = r.correlation(8000.0, 1.0).unwrap_or(f64::NAN);
    let path: Vec<String> = DECORR_TIMES
        .iter()
        .map(|&t| format!("{:.3}", r.correlation(t, 1.0).unwrap_or(f64::NAN)))
        .collect();
    let ctl: Vec<String> = r.control.iter().map(|(_, c)| format!("{c:.3}")).collect();
    Ok((
        c >= 0.9,
        format!(
            "corr at t=8000: {c:.3} (>= 0.9); along t {}; control {}",
            path.join(" "),
            ctl.join(" ")
        ),
    ))
}

// ---------------------------------------------------------------- 9

fn pasep_cross_validation() -> Check {
    const T: f64 = 50.0;
    const N: u64 = 10_000;
    let lpp = (0..N)
        .into_par_iter()
        .map(|k| -> Result<f64> {
            let prof = height_from_passage(
                &WeightField::exponential(sample_seed(900, k)),
                T,
                (0, 0),
                40,
            )?;
            Ok(prof.at(0).expect("origin") as f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    let runs = (0..N)
        .into_par_iter()
        .map(|k| -> Result<(f64, usize)> {
            let cfg = PasepConfig::auto(1.0, PasepIc::Step, T, sample_seed(901, k), 6, 2.0)?;
            let h = simulate(&cfg, &[T])?[0].height(0).expect("origin") as f64;
            let r = mix64(sample_seed(902, k));
            let x0 = (r % 11) as i64 - 5;
            let c = ((r >> 8) % 6) as i64 * 2 + x0.rem_euclid(2);
            let v = attractiveness(&cfg, x0, c, &[5.0, 20.0, T])?;
            Ok((h, v))
        })
        .collect::<Result<Vec<_>>>()?;
    let heights: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let violations: usize = runs.iter().map(|r| r.1).sum();
    let ks = ks_two_sample(&heights, &lpp)?;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    Ok((
        ks <= 0.03 && violations == 0,
        format!(
            "KS {ks:.4} (<= 0.03) between exclusion and passage h(0,{T}), means {:.3} / {:.3}; attractiveness violations {violations}",
            mean(&heights),
            mean(&lpp)
        ),
    ))
}

// ---------------------------------------------------------------- 10

fn png_sanity() -> Check {
    let r = run_png_lis(&PngConfig {
        intensity: 1.0,
        side: 100.0,
        samples: 200,
        seed: 1000,
    })?;
    Ok((
        (1.90..=2.05).contains(&r.mean_ratio),
        format!(
            "mean LIS/sqrt(N) {:.4} with mean N {:.0} (in [1.90, 2.05])",
            r.mean_ratio, r.mean_points
        ),
    ))
}

// ---------------------------------------------------------------- 11

fn refdist_numerics() -> Check {
    let base = tw_gue_cdf(0.0, 40)?;
    let doubled = tw_gue_cdf(0.0, 80)?;
    let stable = (base - doubled).abs() <= 1e-8;

    let grid: Vec<f64> = (0..200).map(|k| -10.0 + 16.0 * k as f64 / 199.0).collect();
    let f = grid
        .iter()
        .map(|&s| tw_gue_cdf(s, 48))
        .collect::<Result<Vec<f64>>>()?;
    let monotone = f.windows(2).all(|w| w[1] >= w[0]);

    let h = 1e-4;
    let mut residual = 0.0f64;
    for x in [1.0, 2.0, 5.0] {
        let second = (airy_prime(x + h)? - airy_prime(x - h)?) / (2.0 * h);
        residual = residual.max((second - x * airy_fn(x)?).abs());
    }
    Ok((
        stable && monotone && residual <= 1e-6,
        format!(
            "F2(0) {doubled:.12}, node-doubling change {:.1e} (<= 1e-8); monotone on 200 points: {monotone}; Airy residual {residual:.1e} (<= 1e-6)",
            (base - doubled).abs()
        ),
    ))
}

// ---------------------------------------------------------------- 12

const DETERMINISM_CONFIGS: [&str; 3] = [
    r#"{"schema_version":1,"experiment":"decorr","seed":12,"run_id":"decorr","params":{
        "model":{"id":"corner_growth_step"},"kappa":1,"nu":0.5,"t_grid":[100,400],"m_grid":[0.5,1],"samples":200}}"#,
    r#"{"schema_version":1,"experiment":"pasep","seed":12,"run_id":"pasep","params":{
        "p":0.75,"ic":{"kind":"step_bernoulli","rho":0.5},"v":0,"u":1,"nu":0.5,"t_grid":[20,40],"m_grid":[1],"samples":100}}"#,
    r#"{"schema_version":1,"experiment":"dist","seed":12,"run_id":"dist","params":{
        "model":{"id":"corner_growth_step"},"kappa":1,"t":100,"samples":300,"reference":{"kind":"gue"}}}"#,
];

fn csv_files(dir: &Path) -> std::io::Result<Vec<(PathBuf, Vec<u8>)>> {
    let mut out = Vec::new();
    for run in fs::read_dir(dir)? {
        for f in fs::read_dir(run?.path())? {
            let p = f?.path();
            if p.extension().is_some_and(|e| e == "csv") {
                let bytes = fs::read(&p)?;
                out.push((p.strip_prefix(dir).expect("inside").to_path_buf(), bytes));
            }
        }
    }
    out.sort();
    Ok(out)
}

fn determinism() -> Check {
    let root = std::env::temp_dir().join(format!("slowdec-determinism-{}", std::process::id()));
    let configs: Vec<RunConfig> = DETERMINISM_CONFIGS
        .iter()
        .map(|t| parse(t))
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| slowdec::Error::Config(e.to_string()))?;
    let mut snapshots = Vec::new();
    for (k, workers) in [1usize, 3, 1].into_iter().enumerate() {
        let out = root.join(format!("run{k}"));
        for c in &configs {
            let ov = Overrides {
                out: Some(out.clone()),
                workers: Some(workers),
                seed: None,
            };
            execute(c, &ov).map_err(|e| slowdec::Error::Config(e.to_string()))?;
        }
        snapshots.push(csv_files(&out).map_err(|e| slowdec::Error::Config(e.to_string()))?);
    }
    let _ = fs::remove_dir_all(&root);
    let files = snapshots[0].len();
    let bytes: usize = snapshots[0].iter().map(|f| f.1.len()).sum();
    let same = snapshots.windows(2).all(|w| w[0] == w[1]);
    Ok((
        same && files > 0,
        format!("{files} CSV files ({bytes} bytes) identical across runs with 1, 3 and 1 workers: {same}"),
    ))
}
