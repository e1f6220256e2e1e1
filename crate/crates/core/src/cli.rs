//! Command-line surface: sweeps, single-instance queries and reports.
//!
//! Every option can also come from a `key=value` config file (keys are the
//! long flag names). Flags win over the file; `NANOHEAT_SEED` sits between.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::error::Error;
use crate::extensions::{correlated_bound_check, CorrelationFamily};
use crate::macro_engine::{carnot, efficiency_breakdown};
use crate::multicycle::{plan_cycles, run_cycles};
use crate::nano_engine::{classify_regime, EpsilonFamily, QuasiStaticConfig};
use crate::second_laws::{max_extractable_work, transition_feasible};
use crate::thermo_core::{thermal_state_arc, EnergySpectrum, QubitBath};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

pub const SEED_ENV: &str = "NANOHEAT_SEED";

pub const SWEEP_HEADER: [&str; 11] = [
    "sweep_variable",
    "omega",
    "eta_nano",
    "eta_carnot",
    "regime_case",
    "w_ext",
    "g",
    "eps",
    "eta_numeric",
    "beta_gap",
    "status",
];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Numeric(#[from] Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => EXIT_CONFIG,
            Self::Numeric(_) | Self::Io { .. } => EXIT_NUMERIC,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "nanoheat", version, about = "Efficiency limits of nanoscale heat engines")]
pub struct Cli {
    /// key=value file supplying defaults for any long option
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Seed for randomized checks
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Efficiency against gap or bath temperature, written as CSV
    Sweep(SweepArgs),
    /// Maximum extractable work of one cold qubit bath
    Work(WorkArgs),
    /// Whether a thermal-to-thermal cold transition passes every free energy
    Feasible(FeasibleArgs),
    /// Omega, G(alpha) case and quasi-static efficiency of a single gap
    Classify(ClassifyArgs),
    /// Deficits of an N-cycle engine along a schedule of N
    Multicycle(MulticycleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    Energy,
    Tcold,
    Thot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Exponential,
    LogLinear,
    Power,
}

#[derive(Debug, Clone, Default, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyKind>,
    /// Prefactor of the power family
    #[arg(long = "family-c")]
    pub family_c: Option<f64>,
    /// kappa_bar of the power family
    #[arg(long = "family-k")]
    pub family_k: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub mode: Option<SweepMode>,
    #[arg(long = "t-hot")]
    pub t_hot: Option<f64>,
    #[arg(long = "t-cold")]
    pub t_cold: Option<f64>,
    #[arg(long = "e-min")]
    pub e_min: Option<f64>,
    #[arg(long)]
    pub lo: Option<f64>,
    #[arg(long)]
    pub hi: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub g: Option<f64>,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweep points
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct WorkArgs {
    #[arg(long)]
    pub e: Option<f64>,
    /// Number of identical qubits
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "t-hot")]
    pub t_hot: Option<f64>,
    #[arg(long = "t-cold")]
    pub t_cold: Option<f64>,
    #[arg(long)]
    pub g: Option<f64>,
    #[command(flatten)]
    pub family: FamilyArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FeasibleArgs {
    #[arg(long)]
    pub e: Option<f64>,
    #[arg(long = "t-hot")]
    pub t_hot: Option<f64>,
    #[arg(long = "t-cold")]
    pub t_cold: Option<f64>,
    /// Temperature of the final cold state
    #[arg(long = "t-final")]
    pub t_final: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub e: Option<f64>,
    #[arg(long = "t-hot")]
    pub t_hot: Option<f64>,
    #[arg(long = "t-cold")]
    pub t_cold: Option<f64>,
    /// Also sample correlated final states (only when Omega > 1)
    #[arg(long = "correlated-samples")]
    pub correlated_samples: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct MulticycleArgs {
    /// Target work
    #[arg(long)]
    pub w: Option<f64>,
    #[arg(long)]
    pub e: Option<f64>,
    #[arg(long = "t-hot")]
    pub t_hot: Option<f64>,
    #[arg(long = "t-cold")]
    pub t_cold: Option<f64>,
    #[arg(long = "kappa-bar")]
    pub kappa_bar: Option<f64>,
    /// Comma-separated cycle counts
    #[arg(long)]
    pub schedule: Option<String>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

/// Flat `key=value` settings with `#` comments.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key=value", no + 1)))?;
            let key = k.trim().replace('_', "-");
            if key.is_empty() {
                return Err(CliError::Config(format!("line {}: empty key", no + 1)));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Config(format!("bad value for {key}: {v:?}"))),
        }
    }

    fn get_enum<T: ValueEnum>(&self, key: &str) -> CliResult<Option<T>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => T::from_str(v, true)
                .map(Some)
                .map_err(|_| CliError::Config(format!("bad value for {key}: {v:?}"))),
        }
    }
}

struct Resolver<'a> {
    file: &'a ConfigFile,
}

impl Resolver<'_> {
    fn num<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> CliResult<T> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.file.get(key)?.unwrap_or(default)),
        }
    }

    fn opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.file.get(key),
        }
    }

    fn family(&self, args: &FamilyArgs) -> CliResult<EpsilonFamily> {
        let kind = match args.family {
            Some(k) => k,
            None => self.file.get_enum("family")?.unwrap_or(FamilyKind::Power),
        };
        Ok(match kind {
            FamilyKind::Exponential => EpsilonFamily::Exponential,
            FamilyKind::LogLinear => EpsilonFamily::LogLinear,
            FamilyKind::Power => {
                let c = self.num(args.family_c, "family-c", 1.0)?;
                let k = self.num(args.family_k, "family-k", 0.5)?;
                EpsilonFamily::power(c, k).map_err(|e| CliError::Config(e.to_string()))?
            }
        })
    }
}

fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{name} must be positive, got {v}")))
    }
}

/// Renders with at most 12 significant digits, like C's `%.12g`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", x);
    let (mant, exp) = sci.split_once('e').unwrap_or((&sci, "0"));
    let exp: i32 = exp.parse().unwrap_or(0);
    if !(-5..12).contains(&exp) {
        let mant = trim_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mant}e{sign}{:02}", exp.abs());
    }
    let decimals = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Self::Num(x) => format_float(*x),
            Self::Int(n) => n.to_string(),
            Self::Text(s) => s.clone(),
            Self::Empty => String::new(),
        }
    }
}

pub fn write_csv(rows: &[Vec<Cell>], header: &[&str], path: &Path) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    };
    if rows.iter().any(|r| r.len() != header.len()) {
        return Err(CliError::Config("rows do not match the header width".into()));
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| io(e.into()))?;
    w.write_record(header).map_err(|e| io(e.into()))?;
    for row in rows {
        w.write_record(row.iter().map(Cell::render)).map_err(|e| io(e.into()))?;
    }
    w.flush().map_err(io)
}

/// Resolved sweep parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mode: SweepMode,
    pub t_hot: f64,
    pub t_cold: f64,
    pub e_min: f64,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub g: f64,
    pub family: EpsilonFamily,
    pub out: PathBuf,
    pub jobs: usize,
}

impl SweepConfig {
    pub fn points(&self) -> Vec<f64> {
        crate::numerics::linspace(self.lo, self.hi, self.steps)
    }

    /// `(E, T_hot, T_cold)` at one sweep value.
    fn at(&self, x: f64) -> (f64, f64, f64) {
        match self.mode {
            SweepMode::Energy => (x, self.t_hot, self.t_cold),
            SweepMode::Tcold => (self.e_min, self.t_hot, x),
            SweepMode::Thot => (self.e_min, x, self.t_cold),
        }
    }
}

fn resolve_sweep(a: &SweepArgs, r: &Resolver) -> CliResult<SweepConfig> {
    let mode = match a.mode {
        Some(m) => m,
        None => r.file.get_enum("mode")?.unwrap_or(SweepMode::Energy),
    };
    let cfg = SweepConfig {
        mode,
        t_hot: positive("t-hot", r.num(a.t_hot, "t-hot", 15.0)?)?,
        t_cold: positive("t-cold", r.num(a.t_cold, "t-cold", 10.0)?)?,
        e_min: positive("e-min", r.num(a.e_min, "e-min", 15.0)?)?,
        lo: positive("lo", r.num(a.lo, "lo", 1.0)?)?,
        hi: positive("hi", r.num(a.hi, "hi", 60.0)?)?,
        steps: r.num(a.steps, "steps", 120)?,
        g: positive("g", r.num(a.g, "g", 1e-5)?)?,
        family: r.family(&a.family)?,
        out: r.num(a.out.clone(), "out", PathBuf::from("sweep.csv"))?,
        jobs: r.num(a.jobs, "jobs", 1)?,
    };
    if !(cfg.lo < cfg.hi) {
        return Err(CliError::Config(format!("need lo < hi, got {} and {}", cfg.lo, cfg.hi)));
    }
    if cfg.steps < 2 {
        return Err(CliError::Config("steps must be at least 2".into()));
    }
    if cfg.jobs == 0 {
        return Err(CliError::Config("jobs must be at least 1".into()));
    }
    Ok(cfg)
}

fn sweep_row(cfg: &SweepConfig, x: f64) -> crate::Result<Vec<Cell>> {
    let (e, t_hot, t_cold) = cfg.at(x);
    let (bh, bc) = (1.0 / t_hot, 1.0 / t_cold);
    let gap = bc - bh;
    if !(gap > cfg.g) {
        let mut row = vec![Cell::Num(x)];
        row.extend(std::iter::repeat_n(Cell::Empty, 8));
        row.push(Cell::Num(gap));
        row.push(Cell::Text("invalid".into()));
        return Ok(row);
    }
    let class = classify_regime(e, bc, bh)?;
    let qs = QuasiStaticConfig::new(QubitBath::identical(e, 1)?, bc, bh, cfg.g, cfg.family)?;
    let inst = qs.instance()?;
    let work = max_extractable_work(&inst)?;
    let eta_numeric = efficiency_breakdown(&inst, work.w_ext)?.eta;
    Ok(vec![
        Cell::Num(x),
        Cell::Num(class.omega),
        Cell::Num(class.eta_quasistatic),
        Cell::Num(class.eta_carnot),
        Cell::Text(class.g_case.label().into()),
        Cell::Num(work.w_ext),
        Cell::Num(cfg.g),
        Cell::Num(inst.eps()),
        Cell::Num(eta_numeric),
        Cell::Num(gap),
        Cell::Text("ok".into()),
    ])
}

/// Evaluates every sweep point, in order, on up to `cfg.jobs` threads.
pub fn run_sweep(cfg: &SweepConfig) -> CliResult<Vec<Vec<Cell>>> {
    let points = cfg.points();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let rows = pool.install(|| {
        points
            .par_iter()
            .map(|&x| sweep_row(cfg, x))
            .collect::<crate::Result<Vec<_>>>()
    })?;
    Ok(rows)
}

fn temps(r: &Resolver, t_hot: Option<f64>, t_cold: Option<f64>) -> CliResult<(f64, f64)> {
    let th = positive("t-hot", r.num(t_hot, "t-hot", 15.0)?)?;
    let tc = positive("t-cold", r.num(t_cold, "t-cold", 10.0)?)?;
    if !(tc < th) {
        return Err(CliError::Config(format!("need t-cold < t-hot, got {tc} and {th}")));
    }
    Ok((1.0 / tc, 1.0 / th))
}

fn resolve_seed(flag: Option<u64>, env: Option<&str>, file: &ConfigFile) -> CliResult<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Some(v) = env {
        return v
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{SEED_ENV} is not an integer: {v:?}")));
    }
    Ok(file.get("seed")?.unwrap_or(0))
}

fn dispatch(cli: &Cli, env_seed: Option<&str>, out: &mut dyn Write) -> CliResult<()> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let r = Resolver { file: &file };
    let seed = resolve_seed(cli.seed, env_seed, &file)?;
    let say = |out: &mut dyn Write, line: String| {
        writeln!(out, "{line}").map_err(|e| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source: e,
        })
    };
    match &cli.command {
        Command::Sweep(a) => {
            let cfg = resolve_sweep(a, &r)?;
            let rows = run_sweep(&cfg)?;
            write_csv(&rows, &SWEEP_HEADER, &cfg.out)?;
            let invalid = rows.iter().filter(|row| row[10] == Cell::Text("invalid".into())).count();
            say(
                out,
                format!(
                    "sweep {:?}: {} points ({} invalid) written to {}",
                    cfg.mode,
                    rows.len(),
                    invalid,
                    cfg.out.display()
                ),
            )
        }
        Command::Work(a) => {
            let (bc, bh) = temps(&r, a.t_hot, a.t_cold)?;
            let e = positive("e", r.num(a.e, "e", 15.0)?)?;
            let n = r.num(a.n, "n", 1)?;
            let g = positive("g", r.num(a.g, "g", 1e-5)?)?;
            let family = r.family(&a.family)?;
            let qs = QuasiStaticConfig::new(QubitBath::identical(e, n)?, bc, bh, g, family)?;
            let rep = crate::nano_engine::quasistatic_engine(&qs)?;
            say(
                out,
                format!(
                    "w_ext={} argmin_alpha={} eps={} eta={} eta_predicted={} eta_carnot={}",
                    format_float(rep.w_ext_numeric),
                    rep.argmin_alpha,
                    format_float(rep.eps),
                    format_float(rep.eta_numeric),
                    format_float(rep.eta_predicted),
                    format_float(carnot(bc, bh)),
                ),
            )
        }
        Command::Feasible(a) => {
            let (bc, bh) = temps(&r, a.t_hot, a.t_cold)?;
            let e = positive("e", r.num(a.e, "e", 15.0)?)?;
            let tf = positive("t-final", r.num(a.t_final, "t-final", 1.0 / bc)?)?;
            let s = Arc::new(EnergySpectrum::qubit(e)?);
            let rho0 = thermal_state_arc(s.clone(), bc)?;
            let rho1 = thermal_state_arc(s, 1.0 / tf)?;
            let rep = transition_feasible(&rho0, &rho1, bh)?;
            say(
                out,
                format!(
                    "feasible={} worst_gap={} worst_alpha={} violations={}",
                    rep.feasible,
                    format_float(rep.worst_gap),
                    rep.worst_alpha,
                    rep.violations.len()
                ),
            )
        }
        Command::Classify(a) => {
            let (bc, bh) = temps(&r, a.t_hot, a.t_cold)?;
            let e = positive("e", r.num(a.e, "e", 15.0)?)?;
            let c = classify_regime(e, bc, bh)?;
            let mut line = format!(
                "omega={} indicator={} case={} carnot_achievable={} eta={} eta_carnot={}",
                format_float(c.omega),
                format_float(c.tanh_indicator),
                c.g_case.label(),
                c.carnot_achievable,
                format_float(c.eta_quasistatic),
                format_float(c.eta_carnot),
            );
            if let Some(samples) = r.opt(a.correlated_samples, "correlated-samples")? {
                if !c.carnot_achievable {
                    let fam = CorrelationFamily { c: 1.0, p: 2.0 };
                    let rep = correlated_bound_check(e, bc, bh, 1e-4, fam, samples, seed)?;
                    line.push_str(&format!(" correlated_eta_max={}", format_float(rep.eta_max)));
                }
            }
            say(out, line)
        }
        Command::Multicycle(a) => {
            let (bc, bh) = temps(&r, a.t_hot, a.t_cold)?;
            let w = positive("w", r.num(a.w, "w", 1.0)?)?;
            let e = positive("e", r.num(a.e, "e", 15.0)?)?;
            let kappa = r.num(a.kappa_bar, "kappa-bar", 0.5)?;
            let sched_text = r.num(a.schedule.clone(), "schedule", "100,1000,10000,100000".to_string())?;
            let schedule = sched_text
                .split(',')
                .map(|s| s.trim().parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| CliError::Config(format!("bad schedule {sched_text:?}")))?;
            let mut rows = Vec::new();
            for n in &schedule {
                let ledger = plan_cycles(w, e, bc, bh, kappa, *n)?;
                let rep = run_cycles(&ledger);
                rows.push(vec![
                    Cell::Int(*n),
                    Cell::Num(ledger.g),
                    Cell::Num(ledger.eps),
                    Cell::Num(ledger.w_cyc),
                    Cell::Num(ledger.r),
                    Cell::Num(rep.delta_eta),
                    Cell::Num(rep.delta_work),
                    Cell::Num(rep.delta_entropy),
                    Cell::Num(rep.delta_failure),
                ]);
            }
            let header = [
                "n_cycles",
                "g",
                "eps",
                "w_cyc",
                "r",
                "delta_eta",
                "delta_work",
                "delta_entropy",
                "delta_failure",
            ];
            if let Some(path) = r.opt(a.out.clone(), "out")? {
                write_csv(&rows, &header, &path)?;
            }
            let last = rows.last().map(|row| row[5].render()).unwrap_or_default();
            say(out, format!("multicycle: {} schedules, final delta_eta={last}", rows.len()))
        }
    }
}

/// Runs one invocation and returns its exit code.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let env_seed = std::env::var(SEED_ENV).ok();
    let stdout = std::io::stdout();
    run_command_with(argv, env_seed.as_deref(), &mut stdout.lock())
}

pub fn run_command_with<I, T>(argv: I, env_seed: Option<&str>, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(&cli, env_seed, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("nanoheat: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        assert_eq!(format_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_float(2.0), "2");
        assert_eq!(format_float(1e-7), "1e-07");
        assert_eq!(format_float(-1.5e20), "-1.5e+20");
        assert_eq!(format_float(123456.789), "123456.789");
        assert_eq!(format_float(0.0001), "0.0001");
        assert_eq!(format_float(f64::INFINITY), "inf");
    }

    #[test]
    fn config_parsing() {
        let c = ConfigFile::parse("# comment\nt-hot = 20\nt_cold=5 # trailing\n\n").unwrap();
        assert_eq!(c.get::<f64>("t-hot").unwrap(), Some(20.0));
        assert_eq!(c.get::<f64>("t-cold").unwrap(), Some(5.0));
        assert!(ConfigFile::parse("novalue").is_err());
        assert!(c.get::<usize>("t-hot").is_err() || c.get::<usize>("t-hot").unwrap() == Some(20));
    }

    #[test]
    fn seed_precedence() {
        let f = ConfigFile::parse("seed=3").unwrap();
        assert_eq!(resolve_seed(Some(1), Some("2"), &f).unwrap(), 1);
        assert_eq!(resolve_seed(None, Some("2"), &f).unwrap(), 2);
        assert_eq!(resolve_seed(None, None, &f).unwrap(), 3);
        assert_eq!(resolve_seed(None, None, &ConfigFile::default()).unwrap(), 0);
        assert!(resolve_seed(None, Some("x"), &f).is_err());
    }

    #[test]
    fn exit_codes() {
        let mut sink = Vec::new();
        assert_eq!(run_command_with(["nanoheat", "--bogus"], None, &mut sink), EXIT_CONFIG);
        assert_eq!(run_command_with(["nanoheat", "--help"], None, &mut sink), EXIT_OK);
        assert_eq!(
            run_command_with(["nanoheat", "classify", "--e", "45"], None, &mut sink),
            EXIT_OK
        );
        let text = String::from_utf8(sink).unwrap();
        assert!(text.contains("omega=1.48351958605"), "{text}");
        assert!(text.contains("eta=0.252077168038"), "{text}");
    }
}
