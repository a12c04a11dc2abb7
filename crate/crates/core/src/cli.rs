//! Command-line front end.
//!
//! Exit codes: 0 success, 1 `validate` found violations, 2 bad flags,
//! 3 data errors (unreadable, malformed or unusable input), 4 engine errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::data::{make_mds_data, read_dist_file, MdsData};
use crate::engine::{run_timed, EngineConfig, MdsResult, PhaseTimes};
use crate::error::{Error, Result};
use crate::init::{initial_configuration, InitMethod, QualityKind, DEFAULT_SEED};
use crate::linalg::check_irreducible;
use crate::majorize::Configuration;
use crate::monotone::TieApproach;
use crate::plot::{render, write_plots, PlotData, PlotKind, PlotSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_ENGINE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "smacofss",
    version,
    about = "Metric and nonmetric MDS by stress majorization"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a configuration and write the result as JSON.
    Fit(FitArgs),
    /// Compute an initial configuration and write it as JSON.
    Init(InitArgs),
    /// Draw plots from a result or initial-configuration JSON file.
    Plot(PlotArgs),
    /// Time repeated fits.
    Bench(BenchArgs),
    /// Check input files for structural problems.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Lower-triangular dissimilarities; NA marks a missing value.
    #[arg(long, value_name = "PATH")]
    pub delta: PathBuf,
    /// Lower-triangular weights, same layout as the dissimilarities.
    #[arg(long, value_name = "PATH")]
    pub weights: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    /// Number of dimensions.
    #[arg(long, default_value_t = 2, value_parser = parse_positive)]
    pub ndim: usize,
    /// Ordinal (nonmetric) analysis instead of numerical.
    #[arg(long)]
    pub ordinal: bool,
    /// Approach to ties: 1 primary, 2 secondary, 3 tertiary. Needs --ordinal. [default: 1]
    #[arg(long, requires = "ordinal", value_parser = parse_ties)]
    pub ties: Option<TieApproach>,
    /// Use the weights in the fit.
    #[arg(long)]
    pub weighted: bool,
    /// Maximum number of iterations.
    #[arg(long, default_value_t = 1000, value_parser = parse_positive)]
    pub itmax: usize,
    /// Stop when stress decreases by less than this.
    #[arg(long, default_value_t = 1e-10, value_parser = parse_eps, allow_negative_numbers = true)]
    pub eps: f64,
    /// Print stress at every iteration.
    #[arg(long)]
    pub verbose: bool,
    /// Decimals in the verbose stress column.
    #[arg(long, default_value_t = 10)]
    pub digits: usize,
    /// Width of the verbose stress column.
    #[arg(long, default_value_t = 12)]
    pub width: usize,
}

impl EngineArgs {
    pub fn config(&self) -> EngineConfig {
        EngineConfig {
            ndim: self.ndim,
            ties: self.ties.unwrap_or(TieApproach::Primary),
            weighted: self.weighted,
            ordinal: self.ordinal,
            itmax: self.itmax,
            eps: self.eps,
            verbose: self.verbose,
            digits: self.digits,
            width: self.width,
        }
    }
}

#[derive(Debug, Args)]
pub struct StartArgs {
    /// Initial configuration method: torgerson, guttman, fulldim or random. [default: torgerson]
    #[arg(long, value_name = "NAME", conflicts_with = "init_file")]
    pub init_method: Option<InitMethod>,
    /// Take the initial configuration from the "conf" field of a JSON file.
    #[arg(long, value_name = "PATH")]
    pub init_file: Option<PathBuf>,
    /// Seed for the random start.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub start: StartArgs,
    /// Write <STEM>-shepard.svg, <STEM>-conf.svg and <STEM>-distdhat.svg.
    #[arg(long, value_name = "STEM")]
    pub plots: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Initial configuration method: torgerson, guttman, fulldim or random.
    #[arg(
        long,
        visible_alias = "init-method",
        default_value = "torgerson",
        value_name = "NAME"
    )]
    pub method: InitMethod,
    /// Number of dimensions.
    #[arg(long, default_value_t = 2, value_parser = parse_positive)]
    pub ndim: usize,
    /// Seed for the random start.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_name = "STEM")]
    pub plots: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Result JSON written by `fit` or `init`.
    #[arg(long, value_name = "PATH")]
    pub result: PathBuf,
    /// Output file stem.
    #[arg(long, value_name = "STEM")]
    pub plots: PathBuf,
    /// Only this plot: shepard, conf or distdhat.
    #[arg(long, value_parser = ["shepard", "conf", "distdhat"])]
    pub kind: Option<String>,
    /// Object labels, one per line, for the configuration plot.
    #[arg(long, value_name = "PATH")]
    pub labels: Option<PathBuf>,
    #[arg(long)]
    pub title: Option<String>,
    #[arg(long)]
    pub colline: Option<String>,
    #[arg(long)]
    pub colpoint: Option<String>,
    /// Leave out the fit lines.
    #[arg(long)]
    pub no_fitlines: bool,
    #[arg(long, default_value_t = 1)]
    pub dim1: usize,
    #[arg(long, default_value_t = 2)]
    pub dim2: usize,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Number of timed fits.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub repetitions: u64,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Lower-triangular dissimilarities.
    #[arg(
        long,
        value_name = "PATH",
        required_unless_present = "data",
        conflicts_with = "data"
    )]
    pub delta: Option<PathBuf>,
    #[arg(long, value_name = "PATH", requires = "delta")]
    pub weights: Option<PathBuf>,
    /// An MDS data structure in JSON.
    #[arg(long, value_name = "PATH")]
    pub data: Option<PathBuf>,
}

fn parse_positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(format!("expected a positive integer, got {s:?}")),
    }
}

fn parse_eps(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("eps must be a positive number, got {s:?}")),
    }
}

fn parse_ties(s: &str) -> std::result::Result<TieApproach, String> {
    let k: u8 = s
        .parse()
        .map_err(|_| format!("ties must be 1, 2 or 3, got {s:?}"))?;
    TieApproach::try_from(k).map_err(|e| e.to_string())
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_data_error() {
                EXIT_DATA
            } else if matches!(e, Error::UnknownColor(_)) {
                EXIT_USAGE
            } else {
                EXIT_ENGINE
            }
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Fit(a) => fit(a),
        Command::Init(a) => init(a),
        Command::Plot(a) => plot(a),
        Command::Bench(a) => bench(a),
        Command::Validate(a) => validate(a),
    }
}

fn load_data(args: &DataArgs) -> Result<MdsData> {
    let delta = read_dist_file(&args.delta)?;
    let weights = args.weights.as_ref().map(read_dist_file).transpose()?;
    make_mds_data(&delta, weights.as_ref())
}

/// Serializes to pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Reads the `conf` field of any JSON object carrying one.
pub fn read_conf(path: &Path) -> Result<Configuration> {
    #[derive(Deserialize)]
    struct WithConf {
        conf: Configuration,
    }
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str::<WithConf>(&text)?.conf)
}

fn starting_configuration(
    data: &MdsData,
    cfg: &EngineConfig,
    start: &StartArgs,
) -> Result<Option<Configuration>> {
    if let Some(path) = &start.init_file {
        return read_conf(path).map(Some);
    }
    match start.init_method {
        None | Some(InitMethod::Torgerson) => Ok(None),
        Some(m) => {
            let init = initial_configuration(data, m, cfg.ndim, start.seed)?;
            for w in &init.warnings {
                eprintln!("warning: {w}");
            }
            Ok(Some(init.conf))
        }
    }
}

fn fit(a: FitArgs) -> Result<i32> {
    let data = load_data(&a.data)?;
    let cfg = a.engine.config();
    let xinit = starting_configuration(&data, &cfg, &a.start)?;
    let (result, _) = run_timed(&data, &cfg, xinit.as_ref())?;
    if let Some(stem) = &a.plots {
        write_plots(stem, &PlotData::from(&result), None)?;
    }
    emit(&to_json(&result)?, a.out.as_deref())?;
    Ok(EXIT_OK)
}

fn init(a: InitArgs) -> Result<i32> {
    let data = load_data(&a.data)?;
    let result = initial_configuration(&data, a.method, a.ndim, a.seed)?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(stem) = &a.plots {
        write_plots(stem, &PlotData::from(&result), None)?;
    }
    emit(&to_json(&result)?, a.out.as_deref())?;
    Ok(EXIT_OK)
}

/// The fields the plots need, present in both result kinds.
#[derive(Deserialize)]
struct PlotInput {
    delta: Vec<f64>,
    dhat: Vec<f64>,
    confdist: Vec<f64>,
    conf: Configuration,
    #[serde(default)]
    quality_kind: Option<QualityKind>,
}

fn plot(a: PlotArgs) -> Result<i32> {
    let input: PlotInput = serde_json::from_str(&fs::read_to_string(&a.result)?)?;
    let m = input.delta.len();
    if input.dhat.len() != m || input.confdist.len() != m {
        return Err(Error::InvalidData(
            "delta, dhat and confdist differ in length".into(),
        ));
    }
    let pd = PlotData {
        delta: &input.delta,
        dhat: &input.dhat,
        confdist: &input.confdist,
        conf: &input.conf,
        squared: input.quality_kind == Some(QualityKind::Sstress),
    };
    let labels = match &a.labels {
        Some(path) => Some(
            fs::read_to_string(path)?
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(String::from)
                .collect::<Vec<_>>(),
        ),
        None => None,
    };
    let stem = a.plots.to_string_lossy().into_owned();
    let kinds: Vec<(&str, PlotSpec)> = [
        ("shepard", PlotSpec::shepard()),
        ("conf", PlotSpec::configuration()),
        ("distdhat", PlotSpec::dist_dhat()),
    ]
    .into_iter()
    .filter(|(name, _)| a.kind.as_deref().is_none_or(|k| k == *name))
    .collect();
    for (name, base) in kinds {
        if base.kind == PlotKind::Configuration && a.kind.is_none() && input.conf.ndim() < 2 {
            continue;
        }
        let spec = PlotSpec {
            title: a.title.clone().unwrap_or(base.title),
            fitlines: base.fitlines && !a.no_fitlines,
            colline: a.colline.clone().unwrap_or(base.colline),
            colpoint: a.colpoint.clone().unwrap_or(base.colpoint),
            dim1: a.dim1,
            dim2: a.dim2,
            labels: labels.clone(),
            ..base
        };
        let doc = render(&pd, &spec)?;
        fs::write(format!("{stem}-{name}.svg"), doc)?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(samples: &[Duration]) -> Self {
        let mut s: Vec<f64> = samples.iter().map(Duration::as_secs_f64).collect();
        s.sort_by(f64::total_cmp);
        let k = s.len();
        let median = if k % 2 == 1 {
            s[k / 2]
        } else {
            0.5 * (s[k / 2 - 1] + s[k / 2])
        };
        Summary {
            min: s[0],
            median,
            max: s[k - 1],
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BenchReport {
    pub repetitions: u64,
    pub nobj: usize,
    pub ndat: usize,
    pub niter: usize,
    pub stress: f64,
    pub config: EngineConfig,
    pub total: Summary,
    pub setup: Summary,
    pub xphase: Summary,
    pub dphase: Summary,
    /// Median X-phase time divided by the iteration count.
    pub xphase_per_iteration: f64,
}

pub fn bench_report(data: &MdsData, cfg: &EngineConfig, repetitions: u64) -> Result<BenchReport> {
    let mut total = Vec::new();
    let mut phases: Vec<PhaseTimes> = Vec::new();
    let mut last: Option<MdsResult> = None;
    for _ in 0..repetitions {
        let t = Instant::now();
        let (r, p) = run_timed(data, cfg, None)?;
        total.push(t.elapsed());
        phases.push(p);
        last = Some(r);
    }
    let last = last.ok_or_else(|| Error::Config("repetitions must be at least 1".into()))?;
    let pick =
        |f: fn(&PhaseTimes) -> Duration| Summary::of(&phases.iter().map(f).collect::<Vec<_>>());
    let xphase = pick(|p| p.xphase);
    Ok(BenchReport {
        repetitions,
        nobj: data.nobj,
        ndat: data.ndat,
        niter: last.niter,
        stress: last.stress,
        config: cfg.clone(),
        total: Summary::of(&total),
        setup: pick(|p| p.setup),
        xphase_per_iteration: xphase.median / last.niter.max(1) as f64,
        xphase,
        dphase: pick(|p| p.dphase),
    })
}

fn bench(a: BenchArgs) -> Result<i32> {
    let data = load_data(&a.data)?;
    let cfg = EngineConfig {
        verbose: false,
        ..a.engine.config()
    };
    let report = bench_report(&data, &cfg, a.repetitions)?;
    emit(&to_json(&report)?, a.out.as_deref())?;
    Ok(EXIT_OK)
}

fn validate(a: ValidateArgs) -> Result<i32> {
    let data = match (&a.data, &a.delta) {
        (Some(path), _) => serde_json::from_str::<MdsData>(&fs::read_to_string(path)?)?,
        (None, Some(delta)) => {
            let delta = read_dist_file(delta)?;
            let weights = a.weights.as_ref().map(read_dist_file).transpose()?;
            match make_mds_data(&delta, weights.as_ref()) {
                Ok(d) => d,
                Err(Error::NoObservations) => {
                    println!("no observations");
                    return Ok(EXIT_VIOLATIONS);
                }
                Err(e) => return Err(e),
            }
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    match data.validate() {
        Ok(()) => {
            if let Err(e) = check_irreducible(&data) {
                eprintln!("warning: {e}");
            }
            println!(
                "ok: {} objects, {} observations, {} tie blocks",
                data.nobj,
                data.ndat,
                data.nblocks()
            );
            Ok(EXIT_OK)
        }
        Err(violations) => {
            for v in &violations {
                println!("{v}");
            }
            Ok(EXIT_VIOLATIONS)
        }
    }
}
