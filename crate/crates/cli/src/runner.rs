//! Dispatch from a validated config to the library, then report writing.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::Value;
use slowdec::environment::DistributionSpec;
use slowdec::experiments::{
    run_decorrelation, run_distribution_test, run_exponent_fit, run_off_characteristic_control,
    run_pasep_decorrelation, run_polymer_decorrelation, run_projection_experiment, DecorrConfig,
    DecorrReport, DistributionConfig, ExponentConfig, PasepDecorrConfig, ProjectionConfig, TailRow,
};
use slowdec::theory::{classify_two_sided, corner_limit_shape};

use crate::config::{config_hash, effective_params, parse, typed, Experiment, RunConfig};
use crate::output::{opt, write_csv, write_json, Stamp, Table};
use crate::row;

/// Environment variable that overrides the output directory of the config.
pub const OUT_ENV: &str = "SLOWDEC_OUT";
const DEFAULT_OUT: &str = "slowdec-out";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("schema error {0}")]
    Schema(String),
    #[error(transparent)]
    Lib(#[from] slowdec::Error),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Schema(_) => 2,
            Self::Lib(slowdec::Error::Accuracy(_)) => 4,
            Self::Lib(_) => 3,
            Self::Io(_) | Self::Failed(_) => 1,
        }
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub experiment: Experiment,
    pub run_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub config_hash: String,
    pub seed: Option<u64>,
    /// Human-readable result table.
    pub table: String,
}

/// What one experiment produces before anything touches the disk.
struct Artifacts {
    tables: Vec<Table>,
    json: Value,
    summary: String,
}

/// Reads, validates and runs a config file for the given subcommand.
pub fn run_file(expected: Experiment, path: &Path, ov: &Overrides) -> Result<RunSummary, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let cfg = parse(&text)?;
    if cfg.experiment != expected {
        return Err(CliError::Schema(format!(
            "at `experiment`: config is for `{}` but the subcommand is `{expected}`",
            cfg.experiment
        )));
    }
    execute(&cfg, ov)
}

/// Runs a parsed config and writes its reports.
pub fn execute(cfg: &RunConfig, ov: &Overrides) -> Result<RunSummary, CliError> {
    let seed = ov.seed.or(cfg.seed);
    if cfg.experiment.needs_seed() && seed.is_none() {
        return Err(CliError::Schema("at `.`: missing field `seed`".into()));
    }
    let params = effective_params(
        &cfg.params,
        if cfg.experiment.needs_seed() {
            seed
        } else {
            None
        },
    )?;
    let hash = config_hash(cfg.experiment, seed, &cfg.params);

    let workers = ov.workers.or(cfg.workers).unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Failed(format!("cannot start worker pool: {e}")))?;
    let art = pool.install(|| compute(cfg.experiment, params))?;

    let out = ov
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let run_id = cfg
        .run_id
        .clone()
        .unwrap_or_else(|| format!("{}-{}", cfg.experiment, &hash[..12]));
    let run_dir = out.join(run_id);
    fs::create_dir_all(&run_dir)
        .map_err(|e| CliError::Io(format!("{}: {e}", run_dir.display())))?;

    let stamp = Stamp {
        experiment: cfg.experiment.name().into(),
        config_hash: hash.clone(),
        seed,
    };
    let mut files = Vec::new();
    for t in &art.tables {
        files.push(write_csv(&run_dir, &stamp, t)?);
    }
    files.push(write_json(&run_dir, &stamp, &cfg.params, art.json)?);
    Ok(RunSummary {
        experiment: cfg.experiment,
        run_dir,
        files,
        config_hash: hash,
        seed,
        table: art.summary,
    })
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn compute(exp: Experiment, params: Value) -> Result<Artifacts, CliError> {
    match exp {
        Experiment::Decorr => {
            let c: DecorrConfig = typed(params)?;
            Ok(decorr_artifacts(run_decorrelation(&c)?))
        }
        Experiment::OffChar => {
            let c: DecorrConfig = typed(params)?;
            Ok(decorr_artifacts(run_off_characteristic_control(&c)?))
        }
        Experiment::Polymer => {
            let c: PolymerParams = typed(params)?;
            let r = run_polymer_decorrelation(
                c.beta, c.bulk, c.kappa, c.u, c.nu, c.t_grid, c.m_grid, c.samples, c.seed,
            )?;
            Ok(decorr_artifacts(r))
        }
        Experiment::Exponent => exponent(typed(params)?),
        Experiment::Dist => dist(typed(params)?),
        Experiment::Projection => projection(typed(params)?),
        Experiment::Pasep => pasep(typed(params)?),
        Experiment::Classify => classify(typed(params)?),
        Experiment::Shape => shape(typed(params)?),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolymerParams {
    beta: f64,
    bulk: DistributionSpec,
    kappa: f64,
    u: (f64, f64),
    nu: f64,
    t_grid: Vec<f64>,
    m_grid: Vec<f64>,
    samples: usize,
    seed: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassifyParams {
    pi: f64,
    eta: f64,
    kappa: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ShapeParams {
    v_grid: Vec<f64>,
}

/// Compact number for the terminal: six significant digits, no trailing zeros.
fn num(x: f64) -> String {
    if x == x.round() && x.abs() < 1e12 {
        return format!("{}", x as i64);
    }
    let s = format!("{:.6}", x);
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn tails_table(tails: &[TailRow]) -> Table {
    let mut t = Table::new("", &["t", "m", "threshold", "hits", "tail", "se"]);
    for r in tails {
        t.push(row![r.t, r.m, r.threshold, r.hits, r.tail, r.se]);
    }
    t
}

fn tail_lines(out: &mut String, tails: &[TailRow]) {
    let _ = writeln!(
        out,
        "{:>10} {:>6} {:>10} {:>8} {:>8}",
        "t", "M", "threshold", "tail", "se"
    );
    for r in tails {
        let _ = writeln!(
            out,
            "{:>10} {:>6} {:>10} {:>8} {:>8}",
            num(r.t),
            num(r.m),
            num(r.threshold),
            num(r.tail),
            num(r.se)
        );
    }
}

fn decorr_artifacts(r: DecorrReport) -> Artifacts {
    let mut times = Table::new(
        "times",
        &[
            "t",
            "p_i",
            "p_j",
            "q_i",
            "q_j",
            "achieved_nu",
            "centre_pp",
            "compensator_min",
            "compensator_mean",
            "compensator_max",
            "violations",
            "corr_chi12",
            "delta_mean",
            "delta_std",
            "gap_scaled_mean",
            "ks_decomposition",
        ],
    );
    for s in &r.times {
        times.push(row![
            s.t,
            s.p_site.0,
            s.p_site.1,
            s.q_site.0,
            s.q_site.1,
            s.achieved_nu,
            s.centre_pp,
            s.compensator.min,
            s.compensator.mean,
            s.compensator.max,
            s.violations,
            s.corr_chi12,
            s.delta_mean,
            s.delta_std,
            s.gap_scaled_mean,
            s.ks_decomposition
        ]);
    }
    let mut samples = Table::new(
        "samples",
        &[
            "sample", "t", "l_p", "l_q", "pp", "delta", "x_t", "chi1", "chi2", "chi3",
        ],
    );
    for s in &r.per_sample {
        samples.push(row![
            s.sample, s.t, s.l_p, s.l_q, s.pp, s.delta, s.x_t, s.chi1, s.chi2, s.chi3
        ]);
    }

    let mut out = String::new();
    let case = r
        .case
        .map_or_else(|| "none".to_string(), |c| format!("{c:?}"));
    let _ = writeln!(
        out,
        "case {case}  p=({}, {})  u=({}, {})  nu={}  samples={}  scale={}{}",
        num(r.p.0),
        num(r.p.1),
        num(r.u.0),
        num(r.u.1),
        num(r.nu),
        r.samples,
        num(r.scale),
        if r.scale_empirical {
            " (empirical)"
        } else {
            ""
        }
    );
    tail_lines(&mut out, &r.tails);
    let _ = writeln!(
        out,
        "{:>10} {:>10} {:>10} {:>10}",
        "t", "corr12", "violations", "ks_decomp"
    );
    for s in &r.times {
        let _ = writeln!(
            out,
            "{:>10} {:>10} {:>10} {:>10}",
            num(s.t),
            num(s.corr_chi12),
            s.violations,
            num(s.ks_decomposition)
        );
    }
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }

    let mut json = to_json(&r);
    if let Some(m) = json.as_object_mut() {
        m.remove("per_sample");
    }
    Artifacts {
        tables: vec![tails_table(&r.tails), times, samples],
        json,
        summary: out,
    }
}

fn exponent(c: ExponentConfig) -> Result<Artifacts, CliError> {
    let f = run_exponent_fit(&c)?;
    let mut t = Table::new("", &["t", "site_i", "site_j", "mean", "std", "residual"]);
    for k in 0..f.t_grid.len() {
        t.push(row![
            f.t_grid[k],
            f.sites[k].0,
            f.sites[k].1,
            f.means[k],
            f.stds[k],
            f.residuals[k]
        ]);
    }
    let mut out = format!(
        "slope {} +- {}  intercept {}  samples {}\n",
        num(f.slope),
        num(f.slope_se),
        num(f.intercept),
        f.samples
    );
    let _ = writeln!(out, "{:>10} {:>12} {:>10}", "t", "mean", "std");
    for k in 0..f.t_grid.len() {
        let _ = writeln!(
            out,
            "{:>10} {:>12} {:>10}",
            num(f.t_grid[k]),
            num(f.means[k]),
            num(f.stds[k])
        );
    }
    Ok(Artifacts {
        tables: vec![t],
        json: to_json(&f),
        summary: out,
    })
}

fn dist(c: DistributionConfig) -> Result<Artifacts, CliError> {
    let r = run_distribution_test(&c)?;
    let mut q = Table::new("", &["level", "empirical", "reference"]);
    for x in &r.quantiles {
        q.push(row![x.level, x.empirical, x.reference]);
    }
    let mut s = Table::new("samples", &["sample", "value"]);
    for (k, v) in r.values.iter().enumerate() {
        s.push(row![k, v]);
    }
    let mut out = format!(
        "ks {}  mean {}  std {}  samples {}{}\n",
        num(r.ks),
        num(r.mean),
        num(r.std),
        r.samples,
        if r.standardized {
            "  (standardized)"
        } else {
            ""
        }
    );
    let _ = writeln!(out, "{:>8} {:>10} {:>10}", "level", "sample", "reference");
    for x in &r.quantiles {
        let _ = writeln!(
            out,
            "{:>8} {:>10} {:>10}",
            num(x.level),
            num(x.empirical),
            num(x.reference)
        );
    }
    let mut json = to_json(&r);
    if let Some(m) = json.as_object_mut() {
        m.remove("values");
    }
    Ok(Artifacts {
        tables: vec![q, s],
        json,
        summary: out,
    })
}

fn projection(c: ProjectionConfig) -> Result<Artifacts, CliError> {
    let r = run_projection_experiment(&c)?;
    let mut t = Table::new(
        "",
        &[
            "t",
            "theta_tilde",
            "off_i",
            "off_j",
            "projected_i",
            "projected_j",
            "projected_tau",
            "correlation",
        ],
    );
    for x in &r.rows {
        t.push(row![
            x.t,
            x.theta_tilde,
            x.off_site.0,
            x.off_site.1,
            x.projected_site.0,
            x.projected_site.1,
            x.projected_tau,
            x.correlation
        ]);
    }
    let mut ctl = Table::new("control", &["t", "correlation"]);
    for (tt, c) in &r.control {
        ctl.push(row![tt, c]);
    }
    let mut out = format!("{:>10} {:>8} {:>12}\n", "t", "theta", "correlation");
    for x in &r.rows {
        let _ = writeln!(
            out,
            "{:>10} {:>8} {:>12}",
            num(x.t),
            num(x.theta_tilde),
            num(x.correlation)
        );
    }
    for (tt, c) in &r.control {
        let _ = writeln!(out, "control t={} correlation {}", num(*tt), num(*c));
    }
    Ok(Artifacts {
        tables: vec![t, ctl],
        json: to_json(&r),
        summary: out,
    })
}

fn pasep(c: PasepDecorrConfig) -> Result<Artifacts, CliError> {
    let r = run_pasep_decorrelation(&c)?;
    let mut times = Table::new(
        "times",
        &[
            "t",
            "x0",
            "y",
            "half_width",
            "centre",
            "compensator_min",
            "compensator_mean",
            "compensator_max",
            "violations",
            "corr_base_main",
            "delta_mean",
            "delta_std",
        ],
    );
    for s in &r.times {
        times.push(row![
            s.t,
            s.x0,
            s.y,
            s.half_width,
            s.centre,
            s.compensator.min,
            s.compensator.mean,
            s.compensator.max,
            s.violations,
            s.corr_base_main,
            s.delta_mean,
            s.delta_std
        ]);
    }
    let mut samples = Table::new(
        "samples",
        &["sample", "t", "i_base", "i_main", "i_reset", "x_t", "delta"],
    );
    for s in &r.per_sample {
        samples.push(row![
            s.sample, s.t, s.i_base, s.i_main, s.i_reset, s.x_t, s.delta
        ]);
    }
    let mut out = format!(
        "p={}  samples={}  coupling violations={}\n",
        num(c.p),
        r.samples,
        r.violations()
    );
    tail_lines(&mut out, &r.tails);
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    let mut json = to_json(&r);
    if let Some(m) = json.as_object_mut() {
        m.remove("per_sample");
    }
    Ok(Artifacts {
        tables: vec![tails_table(&r.tails), times, samples],
        json,
        summary: out,
    })
}

fn classify(c: ClassifyParams) -> Result<Artifacts, CliError> {
    let info = classify_two_sided(c.pi, c.eta, c.kappa)?;
    let mut t = Table::new(
        "",
        &[
            "case",
            "u_x",
            "u_y",
            "ell_hl",
            "ell_pp",
            "gamma_hl",
            "gamma_pp",
            "c_hl",
            "c_pp",
            "law",
            "slow_decorrelation",
            "nu_max",
        ],
    );
    t.push(row![
        format!("{:?}", info.case),
        opt(info.u.map(|u| u.0)),
        opt(info.u.map(|u| u.1)),
        info.ell_hl,
        opt(info.ell_pp),
        info.gamma_hl,
        info.gamma_pp,
        opt(info.c_hl),
        opt(info.c_pp),
        format!("{:?}", info.law),
        info.slow_decorrelation,
        info.nu_max
    ]);
    let u = info.u.map_or_else(
        || "none".to_string(),
        |u| format!("({}, {})", num(u.0), num(u.1)),
    );
    let mut out = format!("{:?}, u={u}, ℓ_HL={}\n", info.case, num(info.ell_hl));
    let _ = writeln!(
        out,
        "law {:?}  gamma_HL={}  slow decorrelation: {}",
        info.law,
        num(info.gamma_hl),
        if info.slow_decorrelation { "yes" } else { "no" }
    );
    Ok(Artifacts {
        tables: vec![t],
        json: to_json(&info),
        summary: out,
    })
}

fn shape(c: ShapeParams) -> Result<Artifacts, CliError> {
    if c.v_grid.is_empty() || c.v_grid.iter().any(|v| !v.is_finite()) {
        return Err(slowdec::Error::Config(
            "v_grid must be a non-empty list of finite numbers".into(),
        )
        .into());
    }
    let mut t = Table::new("", &["v", "h"]);
    let mut out = format!("{:>10} {:>10}\n", "v", "h(v)");
    for &v in &c.v_grid {
        let h = corner_limit_shape(v);
        t.push(row![v, h]);
        let _ = writeln!(out, "{:>10} {:>10}", num(v), num(h));
    }
    let json = serde_json::json!({ "v": c.v_grid, "h": c.v_grid.iter().map(|&v| corner_limit_shape(v)).collect::<Vec<_>>() });
    Ok(Artifacts {
        tables: vec![t],
        json,
        summary: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> RunConfig {
        parse(text).unwrap()
    }

    fn tmp(name: &str) -> PathBuf {
        std::env::temp_dir().join(format!("slowdec-runner-{name}-{}", std::process::id()))
    }

    #[test]
    fn classify_prints_the_case() {
        let c = cfg(
            r#"{"schema_version":1,"experiment":"classify","params":{"pi":0.6666666666666666,"eta":0.6666666666666666,"kappa":1}}"#,
        );
        let dir = tmp("classify");
        let s = execute(
            &c,
            &Overrides {
                out: Some(dir.clone()),
                ..Default::default()
            },
        )
        .unwrap();
        assert!(
            s.table.starts_with("Case1, u=(1, 1), ℓ_HL=4"),
            "{}",
            s.table
        );
        assert_eq!(s.files.len(), 2);
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn shape_matches_the_limit() {
        let c = cfg(r#"{"schema_version":1,"experiment":"shape","params":{"v_grid":[-2,0,0.5]}}"#);
        let dir = tmp("shape");
        let s = execute(
            &c,
            &Overrides {
                out: Some(dir.clone()),
                ..Default::default()
            },
        )
        .unwrap();
        let csv = fs::read_to_string(&s.files[0]).unwrap();
        assert!(csv.contains("\n-2,2\n0,0.5\n0.5,0.625\n"), "{csv}");
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn stochastic_runs_need_a_seed() {
        let c = cfg(r#"{"schema_version":1,"experiment":"dist","params":{}}"#);
        let err = execute(&c, &Overrides::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("seed"));
    }

    #[test]
    fn missing_param_is_a_schema_error() {
        let c = cfg(r#"{"schema_version":1,"experiment":"shape","params":{}}"#);
        let err = execute(&c, &Overrides::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("v_grid"), "{err}");
    }

    #[test]
    fn library_errors_map_to_exit_codes() {
        assert_eq!(
            CliError::from(slowdec::Error::Domain("x".into())).exit_code(),
            3
        );
        assert_eq!(
            CliError::from(slowdec::Error::Config("x".into())).exit_code(),
            3
        );
        assert_eq!(
            CliError::from(slowdec::Error::Accuracy("x".into())).exit_code(),
            4
        );
    }

    #[test]
    fn pasep_light_cone_is_a_domain_failure() {
        let c = cfg(
            r#"{"schema_version":1,"experiment":"pasep","seed":1,"params":{"p":0.75,"ic":{"kind":"step"},"v":0,"u":1,"nu":0.5,"t_grid":[10],"m_grid":[1],"samples":2,"margin":0.5}}"#,
        );
        assert_eq!(
            execute(&c, &Overrides::default()).unwrap_err().exit_code(),
            3
        );
    }
}
