//! Command-line driver: run configuration, the four subcommands, and the
//! JSON/CSV artifacts they emit.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cwmodel::{CheckResult, CwPairModel};
use crate::error::{ModelError, RepError, SymmError, TorsionError, VolformError};
use crate::repspace::{continue_circle, Gauge, TraceOptions};
use crate::symm::{
    check_symmetry, delta_sign, metabelian_locus, CertifiedPeripheral, FixedPoint, OuterAutomorphism, SymmetryReport,
    TorsionFunction, Transform,
};
use crate::torsion::{normalized_torsion, TorsionSample};
use crate::volform::{metrize, MetrizationSummary, MetrizedCircle};

/// Name accepted by `--model` for the built-in figure-eight model.
pub const BUILTIN_FIGURE_EIGHT: &str = "figure8";
/// Environment variable holding the worker count.
pub const THREADS_VAR: &str = "TORSION_THREADS";
pub const DEFAULT_STEP: f64 = 0.01;
pub const STEP_RANGE: (f64, f64) = (1e-5, 0.1);
/// Closure gap accepted by `trace`.
pub const DEFAULT_CLOSURE_TOL: f64 = 1e-6;
/// Deviation of the coefficients of `t^{±1}` from 1 accepted by `torsion`.
pub const DEFAULT_TORSION_TOL: f64 = 1e-8;
/// Residual accepted by `symmetry`.
pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-6;
/// Longest conjugator tried when certifying peripheral data.
const CERTIFY_WORD_LENGTH: usize = 4;
const CERTIFY_SEED: u64 = 11;

#[derive(Debug, Parser)]
#[command(name = "su2torsion", version, about = "SU(2) representation circles and torsion volume forms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a model file: ∂∂ = 0, homology, peripheral chains, chain map.
    Validate(CommonArgs),
    /// Trace the representation circle and write `circle.json`.
    Trace(CommonArgs),
    /// Sample the normalized torsion; writes `torsion-samples.json` and `f_of_s.csv`.
    Torsion(CommonArgs),
    /// Check the symmetry relations; writes `symmetry-report.json`.
    Symmetry(SymmetryArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Model file, or `figure8` for the built-in model.
    #[arg(value_name = "MODEL")]
    pub model_path: Option<String>,
    #[arg(long = "model", value_name = "PATH", conflicts_with = "model_path")]
    pub model: Option<String>,
    #[arg(long, default_value_t = DEFAULT_STEP)]
    pub step: f64,
    /// Overrides the tolerance of the command's pass/fail check.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Starting guess `θ,φ` (or `θ₁,θ₂,φ`) in gauge coordinates.
    #[arg(long, default_value = "1.05,1.9")]
    pub seed: Seed,
}

#[derive(Debug, Clone, Args)]
pub struct SymmetryArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value = "all")]
    pub check: Check,
}

/// Gauge seed `ρ(x₁) = exp(θ₁e₃)`, `ρ(x₂) = exp(θ₂ n(φ))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Seed {
    pub theta1: f64,
    pub theta2: f64,
    pub phi: f64,
}

impl FromStr for Seed {
    type Err = String;

    fn from_str(s: &str) -> Result<Seed, String> {
        let v = s
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|e| format!("bad seed component '{x}': {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        match v[..] {
            [theta, phi] => Ok(Seed { theta1: theta, theta2: theta, phi }),
            [theta1, theta2, phi] => Ok(Seed { theta1, theta2, phi }),
            _ => Err(format!("seed needs 2 or 3 components, got {}", v.len())),
        }
    }
}

impl Seed {
    pub fn gauge(&self) -> Gauge {
        Gauge::new(self.theta1, self.theta2, self.phi)
    }
}

/// Which symmetry relations `symmetry` checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Iota,
    /// `autN`, numbered from 1.
    Aut(usize),
    All,
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Check, String> {
        match s {
            "iota" => Ok(Check::Iota),
            "all" => Ok(Check::All),
            _ => s
                .strip_prefix("aut")
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .map(Check::Aut)
                .ok_or_else(|| format!("unknown check '{s}', expected iota, autN or all")),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Iota => write!(f, "iota"),
            Check::Aut(n) => write!(f, "aut{n}"),
            Check::All => write!(f, "all"),
        }
    }
}

/// Failure of a command, classified by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("numerical breakdown: {0}")]
    Numerical(String),
    #[error("symmetry check failed: {0}")]
    Symmetry(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Symmetry(_) => 4,
        }
    }
}

/// `Kind: message`, with the kind taken from the variant name.
fn named<E: fmt::Debug + fmt::Display>(e: &E) -> String {
    let debug = format!("{e:?}");
    let kind = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default();
    format!("{kind}: {e}")
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> CliError {
        CliError::Input(named(&e))
    }
}

impl From<RepError> for CliError {
    fn from(e: RepError) -> CliError {
        CliError::Numerical(e.to_string())
    }
}

impl From<TorsionError> for CliError {
    fn from(e: TorsionError) -> CliError {
        CliError::Numerical(e.to_string())
    }
}

impl From<VolformError> for CliError {
    fn from(e: VolformError) -> CliError {
        CliError::Numerical(e.to_string())
    }
}

impl From<SymmError> for CliError {
    fn from(e: SymmError) -> CliError {
        match e {
            SymmError::Model(m) => m.into(),
            SymmError::Algebra(a) => CliError::Input(a.to_string()),
            SymmError::Rep(_) | SymmError::Torsion(_) | SymmError::Volform(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Symmetry(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Input(e.to_string())
    }
}

/// Everything that determines the output of a run. Its hash is stamped on
/// every artifact; the output directory and thread count are excluded.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub model: String,
    /// SHA-256 of the model text.
    pub model_sha256: String,
    pub step: f64,
    pub tol: f64,
    pub seed: Seed,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<String>,
    #[serde(skip)]
    pub out: PathBuf,
    #[serde(skip)]
    model_text: String,
}

impl RunConfig {
    pub fn new(command: &str, args: &CommonArgs, default_tol: f64, check: Option<Check>) -> Result<RunConfig, CliError> {
        let name = args
            .model
            .clone()
            .or_else(|| args.model_path.clone())
            .ok_or_else(|| CliError::Input("no model given".into()))?;
        let model_text = if Path::new(&name).exists() || name != BUILTIN_FIGURE_EIGHT {
            fs::read_to_string(&name).map_err(|e| ModelError::Parse(format!("{name}: {e}")))?
        } else {
            CwPairModel::figure_eight().to_toml()
        };
        let cfg = RunConfig {
            command: command.into(),
            model: name,
            model_sha256: hex::encode(Sha256::digest(model_text.as_bytes())),
            step: args.step,
            tol: args.tol.unwrap_or(default_tol),
            seed: args.seed,
            check: check.map(|c| c.to_string()),
            out: args.out.clone(),
            model_text,
        };
        cfg.check()?;
        thread_count()?;
        Ok(cfg)
    }

    /// Range checks on the numeric parameters.
    pub fn check(&self) -> Result<(), CliError> {
        if !(STEP_RANGE.0..=STEP_RANGE.1).contains(&self.step) {
            return Err(CliError::Input(format!("step {} outside [{:e}, {}]", self.step, STEP_RANGE.0, STEP_RANGE.1)));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(CliError::Input(format!("tolerance {} must be positive", self.tol)));
        }
        if ![self.seed.theta1, self.seed.theta2, self.seed.phi].iter().all(|x| x.is_finite()) {
            return Err(CliError::Input("seed must be finite".into()));
        }
        Ok(())
    }

    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    pub fn model_text(&self) -> &str {
        &self.model_text
    }

    /// Parses the model without validating it.
    pub fn parse_model(&self) -> Result<CwPairModel, CliError> {
        Ok(CwPairModel::from_toml(&self.model_text)?)
    }

    /// Parses and validates the model; the first failure is returned.
    pub fn load_model(&self) -> Result<CwPairModel, CliError> {
        let model = self.parse_model()?;
        match model.validate().errors.into_iter().next() {
            Some(e) => Err(e.into()),
            None => Ok(model),
        }
    }
}

/// Worker count from `TORSION_THREADS`, defaulting to the available cores.
pub fn thread_count() -> Result<usize, CliError> {
    match std::env::var(THREADS_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| CliError::Input(format!("{THREADS_VAR}={v} is not a positive integer"))),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn pool() -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count()?)
        .build()
        .map_err(|e| CliError::Input(e.to_string()))
}

#[derive(Serialize)]
struct Stamped<'a, T: Serialize> {
    config_hash: String,
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

fn write_json<T: Serialize>(cfg: &RunConfig, file: &str, body: T) -> Result<PathBuf, CliError> {
    fs::create_dir_all(&cfg.out)?;
    let path = cfg.out.join(file);
    let mut text = serde_json::to_string_pretty(&Stamped { config_hash: cfg.hash(), config: cfg, body })
        .map_err(|e| CliError::Input(e.to_string()))?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}

#[derive(Serialize)]
pub struct ValidationOutput {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    /// `Kind: message` for each failure.
    pub failures: Vec<String>,
}

/// Runs every model check. Failures are returned as an input error after
/// the report has been written.
pub fn cmd_validate(cfg: &RunConfig) -> Result<ValidationOutput, CliError> {
    let model = cfg.parse_model()?;
    let report = model.validate();
    let out = ValidationOutput {
        passed: report.passed(),
        checks: report.checks,
        failures: report.errors.iter().map(named).collect(),
    };
    Ok(out)
}

/// The traced and metrized circle.
pub struct Traced {
    pub model: CwPairModel,
    pub closure_gap: f64,
    pub mc: MetrizedCircle,
    pub sys: crate::repspace::RepSystem,
}

pub fn trace(cfg: &RunConfig, closure_tol: f64) -> Result<Traced, CliError> {
    let model = cfg.load_model()?;
    let sys = model.rep_system()?;
    let start = sys.solve_near(&cfg.seed.gauge())?;
    let circle = continue_circle(&sys, &start, TraceOptions::new(cfg.step))?;
    if circle.closure_gap.is_nan() || circle.closure_gap > closure_tol {
        return Err(CliError::Numerical(format!("circle does not close: gap {:e}", circle.closure_gap)));
    }
    let mc = metrize(&model, &sys, &circle)?;
    Ok(Traced { model, closure_gap: circle.closure_gap, mc, sys })
}

#[derive(Serialize)]
pub struct CircleSample {
    /// Oriented arc length.
    pub s: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub phi: f64,
    pub trace_mu: f64,
    /// `τ` on the unit gauge tangent.
    pub speed: f64,
}

#[derive(Serialize)]
pub struct CircleOutput {
    pub closure_gap: f64,
    pub summary: MetrizationSummary,
    pub samples: Vec<CircleSample>,
}

pub fn circle_output(t: &Traced) -> CircleOutput {
    let mu = &t.model.peripheral().mu;
    let samples = t
        .mc
        .samples
        .iter()
        .zip(t.mc.oriented_positions())
        .map(|(x, s)| CircleSample {
            s,
            theta1: x.point.gauge.theta1,
            theta2: x.point.gauge.theta2,
            phi: x.point.gauge.phi,
            trace_mu: mu.eval_su2(&x.point.images).trace(),
            speed: x.speed,
        })
        .collect();
    CircleOutput { closure_gap: t.closure_gap, summary: t.mc.summary(), samples }
}

pub fn cmd_trace(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let t = trace(cfg, cfg.tol)?;
    Ok(vec![write_json(cfg, "circle.json", circle_output(&t))?])
}

#[derive(Serialize)]
pub struct TorsionOutput {
    pub samples: Vec<TorsionSample>,
}

/// Normalized torsion at every sample, computed on the worker pool.
pub fn torsion_samples(t: &Traced) -> Result<(Vec<TorsionSample>, TorsionFunction), CliError> {
    let s = t.mc.oriented_positions();
    let torsions = pool()?.install(|| {
        t.mc.samples
            .par_iter()
            .map(|x| normalized_torsion(&t.model, &x.point.images))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let samples = s.iter().zip(&torsions).map(|(&s, n)| TorsionSample::new(s, n)).collect();
    let f = TorsionFunction {
        component: 0,
        s,
        polys: torsions.into_iter().map(|n| n.poly).collect(),
        period: t.mc.total_volume,
    };
    Ok((samples, f))
}

/// Largest deviation of the coefficients of `t` and `t⁻¹` from 1.
pub fn leading_deviation(samples: &[TorsionSample]) -> f64 {
    samples
        .iter()
        .map(|x| {
            let c = |k: i64| {
                usize::try_from(k - x.lo).ok().and_then(|i| x.coefficients.get(i)).copied().unwrap_or(0.0)
            };
            (c(1) - 1.0).abs().max((c(-1) - 1.0).abs())
        })
        .fold(0.0, f64::max)
}

fn write_f_of_s(cfg: &RunConfig, f: &TorsionFunction) -> Result<PathBuf, CliError> {
    fs::create_dir_all(&cfg.out)?;
    let path = cfg.out.join("f_of_s.csv");
    let mut buf = Vec::new();
    writeln!(buf, "# config_hash={}", cfg.hash())?;
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(["s", "f"]).map_err(|e| CliError::Input(e.to_string()))?;
        for (s, v) in f.f_of_s() {
            w.write_record([format!("{s:.12}"), format!("{v:.12}")]).map_err(|e| CliError::Input(e.to_string()))?;
        }
        w.flush()?;
    }
    fs::write(&path, buf)?;
    Ok(path)
}

pub fn cmd_torsion(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let t = trace(cfg, DEFAULT_CLOSURE_TOL)?;
    let (samples, f) = torsion_samples(&t)?;
    let dev = leading_deviation(&samples);
    let paths = vec![
        write_json(cfg, "torsion-samples.json", TorsionOutput { samples })?,
        write_f_of_s(cfg, &f)?,
    ];
    if dev > cfg.tol {
        return Err(CliError::Numerical(format!("coefficient of t deviates from 1 by {dev:e}")));
    }
    Ok(paths)
}

/// The numbered automorphisms known for a model: `aut1`, `aut2`, ...
pub fn automorphisms(model: &CwPairModel) -> Result<Vec<OuterAutomorphism>, CliError> {
    let p = &model.presentation;
    if p.names != ["x", "y"] {
        return Ok(Vec::new());
    }
    let figure_eight = CwPairModel::figure_eight();
    if p.relators != figure_eight.presentation.relators {
        return Ok(Vec::new());
    }
    Ok(vec![OuterAutomorphism::figure_eight_phi1(p), OuterAutomorphism::figure_eight_phi2(p)])
}

#[derive(Serialize)]
pub struct AutomorphismEntry {
    pub name: String,
    pub images: Vec<String>,
    pub peripheral: CertifiedPeripheral,
    /// `δ_D`, the orientation sign of the induced map.
    pub delta: i8,
}

#[derive(Serialize)]
pub struct SymmetryOutput {
    pub pass: bool,
    pub total_volume: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_points: Option<Vec<FixedPoint>>,
    pub automorphisms: Vec<AutomorphismEntry>,
    pub reports: Vec<SymmetryReport>,
}

pub fn symmetry_output(cfg: &RunConfig, t: &Traced, check: Check) -> Result<SymmetryOutput, CliError> {
    let (_, d) = torsion_samples(t)?;
    let mut reports = Vec::new();
    let mut fixed_points = None;
    if matches!(check, Check::Iota | Check::All) {
        reports.extend(check_symmetry(&t.model, &t.mc, &d, &Transform::Iota, cfg.tol)?);
        fixed_points = Some(metabelian_locus(&t.model, &t.sys, &t.mc)?.points);
    }
    let auts = automorphisms(&t.model)?;
    let chosen: Vec<OuterAutomorphism> = match check {
        Check::Iota => Vec::new(),
        Check::All => auts,
        Check::Aut(n) => vec![auts
            .get(n - 1)
            .cloned()
            .ok_or_else(|| CliError::Input(format!("model has no automorphism aut{n}")))?],
    };
    let reps = t.model.validation_representations(CERTIFY_SEED);
    let irreducible = &reps[reps.len() / 2..];
    let samples: Vec<_> = t.mc.samples.iter().map(|x| x.point.images.clone()).collect();
    let mut automorphisms = Vec::new();
    for mut phi in chosen {
        let peripheral = phi.certify(&t.model.presentation, irreducible, CERTIFY_WORD_LENGTH)?.clone();
        let delta = delta_sign(&t.model, &phi, &samples)?;
        reports.extend(check_symmetry(&t.model, &t.mc, &d, &Transform::Automorphism(phi.clone()), cfg.tol)?);
        automorphisms.push(AutomorphismEntry {
            name: phi.name.clone(),
            images: phi.images.iter().map(|w| w.display(&t.model.presentation.names)).collect(),
            peripheral,
            delta,
        });
    }
    let pass = reports.iter().filter(|r| r.predicted).all(|r| r.pass);
    Ok(SymmetryOutput { pass, total_volume: t.mc.total_volume, fixed_points, automorphisms, reports })
}

pub fn cmd_symmetry(cfg: &RunConfig, check: Check) -> Result<Vec<PathBuf>, CliError> {
    let t = trace(cfg, DEFAULT_CLOSURE_TOL)?;
    let out = symmetry_output(cfg, &t, check)?;
    let failed: Vec<String> =
        out.reports.iter().filter(|r| r.predicted && !r.pass).map(|r| format!("{} {}", r.transform, r.relation)).collect();
    let path = write_json(cfg, "symmetry-report.json", out)?;
    if !failed.is_empty() {
        return Err(CliError::Symmetry(failed.join(", ")));
    }
    Ok(vec![path])
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Validate(a) => RunConfig::new("validate", a, DEFAULT_CLOSURE_TOL, None).and_then(|cfg| {
            let out = cmd_validate(&cfg)?;
            for c in &out.checks {
                println!("{} {}", if c.passed { "ok  " } else { "FAIL" }, c.name);
            }
            let passed = out.passed;
            let failures = out.failures.clone();
            let path = write_json(&cfg, "validation-report.json", out)?;
            println!("wrote {}", path.display());
            if passed {
                Ok(Vec::new())
            } else {
                Err(CliError::Input(failures.join("; ")))
            }
        }),
        Command::Trace(a) => RunConfig::new("trace", a, DEFAULT_CLOSURE_TOL, None).and_then(|cfg| cmd_trace(&cfg)),
        Command::Torsion(a) => RunConfig::new("torsion", a, DEFAULT_TORSION_TOL, None).and_then(|cfg| cmd_torsion(&cfg)),
        Command::Symmetry(a) => RunConfig::new("symmetry", &a.common, DEFAULT_SYMMETRY_TOL, Some(a.check))
            .and_then(|cfg| cmd_symmetry(&cfg, a.check)),
    };
    match result {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_parsing() {
        assert_eq!("1.05,1.9".parse::<Seed>().unwrap(), Seed { theta1: 1.05, theta2: 1.05, phi: 1.9 });
        assert_eq!("1,2,3".parse::<Seed>().unwrap().theta2, 2.0);
        assert!("1".parse::<Seed>().is_err());
        assert!("a,b".parse::<Seed>().is_err());
    }

    #[test]
    fn check_parsing() {
        assert_eq!("iota".parse::<Check>().unwrap(), Check::Iota);
        assert_eq!("aut2".parse::<Check>().unwrap(), Check::Aut(2));
        assert_eq!("all".parse::<Check>().unwrap(), Check::All);
        assert!("aut0".parse::<Check>().is_err());
        assert!("phi".parse::<Check>().is_err());
    }

    fn args(step: f64, tol: Option<f64>) -> CommonArgs {
        CommonArgs {
            model_path: None,
            model: Some(BUILTIN_FIGURE_EIGHT.into()),
            step,
            tol,
            out: PathBuf::from("unused"),
            seed: "1.05,1.9".parse().unwrap(),
        }
    }

    #[test]
    fn config_ranges() {
        assert!(RunConfig::new("trace", &args(0.01, None), 1e-6, None).is_ok());
        for (step, tol) in [(0.2, None), (1e-6, None), (0.01, Some(0.0)), (0.01, Some(-1.0)), (0.01, Some(f64::NAN))] {
            let e = RunConfig::new("trace", &args(step, tol), 1e-6, None).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{step} {tol:?}");
        }
    }

    #[test]
    fn hash_ignores_output_directory() {
        let a = RunConfig::new("trace", &args(0.01, None), 1e-6, None).unwrap();
        let mut other = args(0.01, None);
        other.out = PathBuf::from("elsewhere");
        assert_eq!(a.hash(), RunConfig::new("trace", &other, 1e-6, None).unwrap().hash());
        assert_ne!(a.hash(), RunConfig::new("trace", &args(0.02, None), 1e-6, None).unwrap().hash());
    }

    #[test]
    fn builtin_model_has_two_automorphisms() {
        let m = CwPairModel::figure_eight();
        assert_eq!(automorphisms(&m).unwrap().len(), 2);
    }
}
