//! Command-line driver: `construct`, `hunt`, `index`, `certify`, `selftest`.
//!
//! Exit codes: 0 success, 1 parse or input error, 2 empty kernel in the
//! vanishing system, 3 invariant or verification failure.

pub mod config;
pub mod hunt;
pub mod selftest;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use diophantine::auxpoly::{construct_auxiliary, index_at_proj, staircase_count_report, AuxReport, BivariatePolynomial, CountReport, WeightSystem};
use diophantine::blowup::{certify_pair, replay, Certificate};
use diophantine::heights::Place;
use diophantine::numbers::{AlgebraicSpec, ProjPoint};
use diophantine::Error;
use serde::Serialize;

use config::ExperimentConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("invariant failure: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 1,
            CliError::Invariant(_) => 3,
            CliError::Lib(e) => match e {
                Error::EmptyKernel { .. } => 2,
                Error::PrecisionExhausted
                | Error::SingularGram
                | Error::TrivialKernel
                | Error::NotInKernel
                | Error::QuadratureBudgetExceeded { .. }
                | Error::NotIsolated => 3,
                _ => 1,
            },
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "dioph", version, about = "Auxiliary polynomials, approximation hunts and certificates on P1 x P1")]
pub struct Cli {
    /// Experiment configuration (JSON, `schema: 1`).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; results go to stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Width of the rational enclosure of alpha used by `hunt`.
    #[arg(long, global = true)]
    pub precision: Option<f64>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the auxiliary polynomial for the config's weight system.
    Construct,
    /// List p/q with |alpha - p/q| <= q^-kappa, q <= q_max, as CSV.
    Hunt {
        /// Minimal polynomial, constant term first, e.g. `-2,0,1`.
        #[arg(long, allow_hyphen_values = true)]
        minpoly: Option<String>,
        /// Real root index, ascending.
        #[arg(long)]
        root: Option<usize>,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long)]
        q_max: Option<u64>,
        /// Comma-separated places, e.g. `inf,7`.
        #[arg(long, value_delimiter = ',')]
        places: Vec<Place>,
        /// Worker threads for the exhaustive range.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Print the index of a serialized polynomial at a point.
    Index {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        p1: ProjPoint,
        #[arg(long)]
        p2: ProjPoint,
        /// `theta1,theta2,d1,d2[,delta]`.
        #[arg(long)]
        weights: String,
    },
    /// Run the certificate chain for a pair of points, or replay one.
    Certify {
        #[arg(long)]
        p1: Option<ProjPoint>,
        #[arg(long)]
        p2: Option<ProjPoint>,
        /// Recompute the outcome of a certificate file from its chain.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Fixed-seed invariant checks.
    Selftest,
}

#[derive(Serialize)]
struct ConstructionReport<'a> {
    weights: &'a WeightSystem,
    staircase: CountReport,
    degenerate: bool,
    construction: &'a AuxReport,
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            match &e {
                CliError::Lib(Error::EmptyKernel { conditions, unknowns }) => {
                    let _ = writeln!(err, "error: empty kernel: conditions={conditions} unknowns={unknowns}");
                }
                _ => {
                    let _ = writeln!(err, "error: {e}");
                }
            }
            e.exit_code()
        }
    }
}

fn load_config(cli: &Cli) -> Result<Option<ExperimentConfig>, CliError> {
    let Some(path) = &cli.config else { return Ok(None) };
    let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let mut c = ExperimentConfig::from_json(&text)?;
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    Ok(Some(c))
}

fn require_config(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    load_config(cli)?.ok_or_else(|| CliError::Parse("this command needs --config".into()))
}

fn emit(cli: &Cli, name: &str, body: &[u8], out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(name), body)?;
        }
        None => out.write_all(body)?,
    }
    Ok(())
}

fn pretty<T: Serialize>(v: &T) -> Result<Vec<u8>, CliError> {
    let mut s = serde_json::to_vec_pretty(v).map_err(|e| CliError::Invariant(format!("serialization: {e}")))?;
    s.push(b'\n');
    Ok(s)
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Construct => cmd_construct(cli, out, err),
        Command::Hunt { minpoly, root, kappa, q_max, places, threads } => {
            cmd_hunt(cli, minpoly.as_deref(), *root, *kappa, *q_max, places, *threads, out, err)
        }
        Command::Index { poly, p1, p2, weights } => cmd_index(poly, p1, p2, weights, out),
        Command::Certify { p1, p2, replay } => match replay {
            Some(path) => cmd_replay(path, out),
            None => cmd_certify(cli, p1.as_ref(), p2.as_ref(), out, err),
        },
        Command::Selftest => {
            let seed = cli.seed.unwrap_or(1);
            let failed = selftest::run(seed, out);
            Ok(if failed == 0 { 0 } else { 3 })
        }
    }
}

fn cmd_construct(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = require_config(cli)?;
    cfg.validate(err)?;
    let w = cfg.weights()?;
    let counts = staircase_count_report(&w);
    let (f, report) = construct_auxiliary(&cfg.alpha1()?, &cfg.alpha2()?, &w, &cfg.construction)?;
    let degenerate = report.conditions == 0;
    if degenerate {
        let _ = writeln!(err, "warning: no vanishing conditions; the construction is degenerate");
    }
    if !report.conditions_verified {
        return Err(CliError::Invariant("vanishing conditions failed re-verification".into()));
    }
    let rep = ConstructionReport { weights: &w, staircase: counts, degenerate, construction: &report };
    match &cli.out {
        Some(_) => {
            emit(cli, &cfg.outputs.polynomial, &pretty(&f)?, out)?;
            emit(cli, &cfg.outputs.report, &pretty(&rep)?, out)?;
            let _ = writeln!(out, "conditions={} unknowns={} kernel_dim={}", report.conditions, report.unknowns, report.kernel_dim);
        }
        None => {
            #[derive(Serialize)]
            struct Both<'a> {
                polynomial: &'a BivariatePolynomial,
                report: &'a ConstructionReport<'a>,
            }
            out.write_all(&pretty(&Both { polynomial: &f, report: &rep })?)?;
        }
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_hunt(
    cli: &Cli,
    minpoly: Option<&str>,
    root: Option<usize>,
    kappa: Option<f64>,
    q_max: Option<u64>,
    places: &[Place],
    threads: Option<usize>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let cfg = load_config(cli)?;
    let spec = match (minpoly, &cfg) {
        (Some(m), _) => AlgebraicSpec {
            minpoly: m.split(',').map(|s| s.trim().to_string()).collect(),
            root: root.unwrap_or(0),
        },
        (None, Some(c)) => c.alpha.clone(),
        (None, None) => return Err(CliError::Parse("hunt needs --minpoly or --config".into())),
    };
    let settings = cfg.as_ref().and_then(|c| c.hunt.clone());
    let kappa = kappa.or(settings.as_ref().map(|s| s.kappa)).ok_or_else(|| CliError::Parse("hunt needs --kappa".into()))?;
    let q_max = q_max.or(settings.as_ref().map(|s| s.q_max)).ok_or_else(|| CliError::Parse("hunt needs --q-max".into()))?;
    let places = if places.is_empty() {
        cfg.as_ref().map(|c| c.places.clone()).unwrap_or_else(|| vec![Place::Archimedean])
    } else {
        places.to_vec()
    };
    let mut prm = hunt::HuntParams { kappa, q_max, places: places.clone(), ..Default::default() };
    if let Some(p) = cli.precision {
        prm.precision = p;
    }
    if let Some(t) = threads {
        prm.threads = t;
    }
    let alpha = spec.build()?;
    let res = hunt::hunt(&alpha, &prm)?;
    if res.rows.iter().any(|r| r.passes.is_none()) {
        let _ = writeln!(err, "warning: some rows are undecided at this precision");
    }
    let mut csv = vec![];
    hunt::write_csv(&res, &places, &mut csv)?;
    let name = cfg.as_ref().map(|c| c.outputs.hunt.clone()).unwrap_or_else(|| "hunt.csv".into());
    emit(cli, &name, &csv, out)?;
    let _ = writeln!(
        err,
        "{} solutions, {} candidates examined, exhaustive up to q = {}",
        res.rows.len(),
        res.candidates,
        res.q0
    );
    Ok(0)
}

fn parse_weights(s: &str) -> Result<WeightSystem, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 && parts.len() != 5 {
        return Err(CliError::Parse("weights are theta1,theta2,d1,d2[,delta]".into()));
    }
    let d = |t: &str| t.parse::<usize>().map_err(|_| CliError::Parse(format!("bad degree {t:?}")));
    let delta = parts.get(4).copied().unwrap_or("1");
    Ok(WeightSystem::parse(parts[0], parts[1], d(parts[2])?, d(parts[3])?, delta)?)
}

fn cmd_index(poly: &Path, p1: &ProjPoint, p2: &ProjPoint, weights: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let text = fs::read_to_string(poly).map_err(|e| CliError::Parse(format!("{}: {e}", poly.display())))?;
    let f: BivariatePolynomial = serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("polynomial: {e}")))?;
    let w = parse_weights(weights)?;
    let ind = index_at_proj(&f, p1, p2, &w)?;
    writeln!(out, "{ind}")?;
    Ok(0)
}

fn cmd_certify(cli: &Cli, p1: Option<&ProjPoint>, p2: Option<&ProjPoint>, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = require_config(cli)?;
    cfg.validate(err)?;
    let pts = cfg.points.clone();
    let p1 = p1.cloned().or(pts.as_ref().map(|p| p.p1.clone())).ok_or_else(|| CliError::Parse("certify needs --p1 or config points".into()))?;
    let p2 = p2.cloned().or(pts.as_ref().map(|p| p.p2.clone())).ok_or_else(|| CliError::Parse("certify needs --p2 or config points".into()))?;
    let cert = certify_pair(
        &cfg.alpha,
        &cfg.alpha2_spec(),
        &p1,
        &p2,
        &cfg.theta1,
        &cfg.theta2,
        &cfg.epsilon,
        &cfg.places,
        &cfg.phi()?,
        &cfg.certify,
    )?;
    emit(cli, &cfg.outputs.certificate, &pretty(&cert)?, out)?;
    if cli.out.is_some() {
        writeln!(out, "{}", serde_json::to_string(&cert.outcome).map_err(|e| CliError::Invariant(e.to_string()))?)?;
    }
    Ok(0)
}

fn cmd_replay(path: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let cert: Certificate = serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("certificate: {e}")))?;
    let stored = serde_json::to_string(&cert.outcome).map_err(|e| CliError::Invariant(e.to_string()))?;
    let again = serde_json::to_string(&replay(&cert)).map_err(|e| CliError::Invariant(e.to_string()))?;
    if stored != again {
        return Err(CliError::Invariant(format!("replayed outcome {again} differs from recorded {stored}")));
    }
    writeln!(out, "{again}")?;
    Ok(0)
}
