// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod experiment;
mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use heterour_core::bootstrap::{prepare, VolatilitySource};
use heterour_core::dgp::{simulate_series, DgpSpec, ErrorPreset, Innovation, VolCase};
use heterour_core::{
    abb_m_test, abb_test, BandwidthChoice, BlockChoice, DeterministicKind, DeterministicSpec,
    KernelSpec, StatChoice, TestConfig, TestResult, TimeSeries, VolatilityMode,
};

/// Exit status for unreadable input or invalid flags.
const EXIT_PARSE: u8 = 2;
/// Exit status when the data violate a statistical precondition.
const EXIT_STATS: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "heterour", version, about = "LAD unit root tests with an adaptive block bootstrap")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the bootstrap unit root test on a CSV series.
    Test(TestArgs),
    /// Estimate and export the volatility path of a CSV series.
    Volatility(VolatilityArgs),
    /// Simulate a series from the built-in data-generating process.
    Simulate(SimulateArgs),
    /// Run a Monte Carlo experiment grid and write rejection rates.
    Mc(McArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DeterministicArg {
    None,
    Mean,
    Trend,
}

impl From<DeterministicArg> for DeterministicKind {
    fn from(d: DeterministicArg) -> Self {
        match d {
            DeterministicArg::None => DeterministicKind::None,
            DeterministicArg::Mean => DeterministicKind::Mean,
            DeterministicArg::Trend => DeterministicKind::Trend,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StatArg {
    Lt,
    Tt,
    Mz,
    All,
}

impl From<StatArg> for StatChoice {
    fn from(s: StatArg) -> Self {
        match s {
            StatArg::Lt => StatChoice::Lt,
            StatArg::Tt => StatChoice::Tt,
            StatArg::Mz => StatChoice::Mz,
            StatArg::All => StatChoice::All,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KernelArg {
    Gaussian,
    Epanechnikov,
    Uniform,
}

impl From<KernelArg> for KernelSpec {
    fn from(k: KernelArg) -> Self {
        match k {
            KernelArg::Gaussian => KernelSpec::Gaussian,
            KernelArg::Epanechnikov => KernelSpec::Epanechnikov,
            KernelArg::Uniform => KernelSpec::Uniform,
        }
    }
}

fn parse_bandwidth(s: &str) -> Result<BandwidthChoice, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(BandwidthChoice::Auto);
    }
    let h: f64 = s.parse().map_err(|_| format!("expected `auto` or a number, got `{s}`"))?;
    if h > 0.0 && h <= 1.0 {
        Ok(BandwidthChoice::Fixed(h))
    } else {
        Err(format!("bandwidth {h} must lie in (0, 1]"))
    }
}

fn parse_block(s: &str) -> Result<BlockChoice, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(BlockChoice::Auto);
    }
    match s.parse::<usize>() {
        Ok(b) if b >= 1 => Ok(BlockChoice::Fixed(b)),
        _ => Err(format!("expected `auto` or a positive integer, got `{s}`")),
    }
}

#[derive(Debug, Args)]
struct SeriesArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "none")]
    deterministic: DeterministicArg,
    /// Quasi-differencing constant; defaults to 7 (mean) or 13.5 (trend).
    #[arg(long = "c-bar")]
    c_bar: Option<f64>,
    #[arg(long, value_parser = parse_bandwidth, default_value = "auto")]
    bandwidth: BandwidthChoice,
    #[arg(long, value_enum, default_value = "gaussian")]
    kernel: KernelArg,
}

impl SeriesArgs {
    fn deterministic(&self) -> DeterministicSpec {
        let kind: DeterministicKind = self.deterministic.into();
        match self.c_bar {
            Some(c) => DeterministicSpec::with_c_bar(kind, c),
            None => DeterministicSpec::new(kind),
        }
    }
}

#[derive(Debug, Args)]
struct TestArgs {
    #[command(flatten)]
    series: SeriesArgs,
    #[arg(long, value_enum, default_value = "all")]
    stat: StatArg,
    /// Number of bootstrap replications.
    #[arg(long = "B", default_value_t = 499)]
    replications: usize,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, value_parser = parse_block, default_value = "auto")]
    block: BlockChoice,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Lag order of the autoregression behind the M statistic.
    #[arg(long = "lag-p", default_value_t = 0)]
    lag_p: usize,
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write the volatility path as `t,sigma_hat` CSV.
    #[arg(long = "emit-volatility")]
    emit_volatility: Option<PathBuf>,
    /// Also write an SVG plot of the volatility path.
    #[arg(long = "emit-svg")]
    emit_svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VolatilityArgs {
    #[command(flatten)]
    series: SeriesArgs,
    /// CSV destination (`t,sigma_hat`); stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VolArg {
    Constant,
    OneShift,
    TwoShifts,
    Smooth,
}

impl From<VolArg> for VolCase {
    fn from(v: VolArg) -> Self {
        match v {
            VolArg::Constant => VolCase::Constant,
            VolArg::OneShift => VolCase::OneShift,
            VolArg::TwoShifts => VolCase::TwoShifts,
            VolArg::Smooth => VolCase::Smooth,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InnovArg {
    Normal,
    T3,
    De,
}

impl From<InnovArg> for Innovation {
    fn from(i: InnovArg) -> Self {
        match i {
            InnovArg::Normal => Innovation::Normal,
            InnovArg::T3 => Innovation::StudentT3,
            InnovArg::De => Innovation::DoubleExp,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PresetArg {
    Iid,
    PaperMa1,
    PaperAr1,
}

impl From<PresetArg> for ErrorPreset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Iid => ErrorPreset::Iid,
            PresetArg::PaperMa1 => ErrorPreset::PaperMa1,
            PresetArg::PaperAr1 => ErrorPreset::PaperAr1,
        }
    }
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 0.0)]
    c: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phi: f64,
    /// Named (theta, phi) pair; overrides --theta and --phi.
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
    #[arg(long, value_enum, default_value = "constant")]
    vol: VolArg,
    #[arg(long, default_value_t = 1.0)]
    sigma0: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma1: f64,
    #[arg(long, value_enum, default_value = "normal")]
    innov: InnovArg,
    #[arg(long = "T", default_value_t = 100)]
    t_len: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct McArgs {
    /// Experiment specification (TOML, or JSON with a `.json` extension).
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Directory for per-cell results; defaults to `<out>.cache`.
    #[arg(long = "cache-dir")]
    cache_dir: Option<PathBuf>,
    #[arg(long = "no-cache")]
    no_cache: bool,
}

/// Failure with an exit status and a machine-readable kind.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: String,
    pub message: String,
}

impl Failure {
    pub fn parse(kind: &str, message: impl Into<String>) -> Self {
        Self {
            code: EXIT_PARSE,
            kind: kind.into(),
            message: message.into(),
        }
    }
}

impl From<heterour_core::Error> for Failure {
    fn from(e: heterour_core::Error) -> Self {
        let code = if e.is_parse_error() || matches!(e, heterour_core::Error::InvalidDgp(_)) {
            EXIT_PARSE
        } else {
            EXIT_STATS
        };
        Self {
            code,
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_PARSE,
        kind: "Io".into(),
        message: format!("{}: {e}", path.display()),
    }
}

pub fn write_output(path: Option<&Path>, contents: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, contents).map_err(|e| io_failure(p, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents)
                .and_then(|_| stdout.flush())
                .map_err(|e| io_failure(Path::new("<stdout>"), e))
        }
    }
}

fn read_series(path: &Path) -> Result<TimeSeries, Failure> {
    if !path.exists() {
        return Err(Failure::parse("Io", format!("{}: no such file", path.display())));
    }
    Ok(TimeSeries::from_csv_path(path)?)
}

fn volatility_csv(sigma: &[f64]) -> String {
    let mut out = String::from("t,sigma_hat\n");
    for (i, s) in sigma.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i + 1, s));
    }
    out
}

fn emit_volatility(
    series: &TimeSeries,
    cfg: &TestConfig,
    csv_path: Option<&Path>,
    svg_path: Option<&Path>,
    csv_to_stdout: bool,
) -> Result<(), Failure> {
    let setup = prepare(series.values(), cfg, &VolatilitySource::FromConfig)?;
    if csv_path.is_some() || csv_to_stdout {
        write_output(csv_path, volatility_csv(&setup.sigma).as_bytes())?;
    }
    if let Some(p) = svg_path {
        let title = match setup.h_used {
            Some(h) => format!("Nonparametric volatility estimate (h = {h:.4})"),
            None => "Volatility path".to_string(),
        };
        fs::write(p, svg::line_chart(&setup.sigma, &title)).map_err(|e| io_failure(p, e))?;
    }
    Ok(())
}

fn cmd_test(args: &TestArgs) -> Result<(), Failure> {
    let series = read_series(&args.series.input)?;
    let stat: StatChoice = args.stat.into();
    let cfg = TestConfig {
        deterministic: args.series.deterministic(),
        stat,
        replications: args.replications,
        alpha: args.alpha,
        bandwidth: args.series.bandwidth,
        block: args.block,
        kernel: args.series.kernel.into(),
        volatility: VolatilityMode::Kernel,
        seed: args.seed,
        lag_p: args.lag_p,
    };
    cfg.validate()?;

    let mut result: TestResult = if stat.wants_lad() {
        let mut r = abb_test(series.values(), &cfg)?;
        if stat.wants_mz() {
            r.merge_mz(&abb_m_test(series.values(), &cfg, cfg.lag_p)?);
        }
        r
    } else {
        abb_m_test(series.values(), &cfg, cfg.lag_p)?
    };
    result.restrict(stat);

    if args.emit_volatility.is_some() || args.emit_svg.is_some() {
        emit_volatility(
            &series,
            &cfg,
            args.emit_volatility.as_deref(),
            args.emit_svg.as_deref(),
            false,
        )?;
    }

    let mut json = serde_json::to_vec_pretty(&result).expect("result serializes");
    json.push(b'\n');
    write_output(args.output.as_deref(), &json)
}

fn cmd_volatility(args: &VolatilityArgs) -> Result<(), Failure> {
    let series = read_series(&args.series.input)?;
    let cfg = TestConfig {
        deterministic: args.series.deterministic(),
        bandwidth: args.series.bandwidth,
        kernel: args.series.kernel.into(),
        block: BlockChoice::Fixed(1),
        ..TestConfig::default()
    };
    emit_volatility(&series, &cfg, args.out.as_deref(), args.svg.as_deref(), true)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), Failure> {
    let mut spec = DgpSpec {
        c: args.c,
        theta: args.theta,
        phi: args.phi,
        innovation: args.innov.into(),
        vol_case: args.vol.into(),
        sigma0: args.sigma0,
        sigma1: args.sigma1,
        t_len: args.t_len,
    };
    if let Some(p) = args.preset {
        spec = spec.with_preset(p.into());
    }
    let series = simulate_series(&spec, args.seed)?;
    let mut buf = Vec::new();
    series.write_csv(&mut buf)?;
    write_output(args.out.as_deref(), &buf)
}

fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("HETEROUR_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Failure::parse("InvalidConfig", format!("HETEROUR_THREADS=`{raw}` is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::parse("InvalidConfig", e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = init_threads().and_then(|_| match &cli.command {
        Command::Test(a) => cmd_test(a),
        Command::Volatility(a) => cmd_volatility(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Mc(a) => experiment::cmd_mc(a.spec.as_path(), a.out.as_path(), a.cache_dir.as_deref(), a.no_cache),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let body = json!({ "error": f.kind, "message": f.message });
            eprintln!("{body}");
            ExitCode::from(f.code)
        }
    }
}
