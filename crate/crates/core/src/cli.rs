//! Command-line front end behind the `splitmesh` binary.
//!
//! Exit codes: 0 success, 1 runtime or verification failure, 2 usage.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::error::Error;
use crate::export::{curves_csv, trace_csv, trace_pgm, RunManifest, ThetaPolicy};
use crate::operators::{MixingAngle, DENSE_CAP};
use crate::oracle::{amplitude_defect, commutator_defect, dense_evolve, unitarity_defect};
use crate::scheduler::{
    mach_zehnder_spec, random_spec, uniform_spec, ArraySpec, DiagonalSchedule, RandomThetaPolicy,
    ThetaMap, SCHEDULE_VERSION,
};
use crate::simulator::{
    compose_total, compose_with_schedule, detector_curves, detector_readout_with_labels, evolve,
    DetectorLabels, DetectorReadout, EvolutionTrace,
};
use crate::state::{InputSpec, PureState};

/// Caps sweep worker threads.
pub const THREADS_ENV: &str = "SPLITMESH_THREADS";

pub const UNITARITY_TOL: f64 = 1e-12;
pub const EQUIVALENCE_TOL: f64 = 1e-12;
pub const COMMUTATOR_TOL: f64 = f64::EPSILON;
pub const PERMUTATION_TOL: f64 = 1e-13;
/// Allowed evolve-time growth when `p` doubles.
pub const DOUBLING_RATIO_MAX: f64 = 5.0;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Runtime(#[from] Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) | CliError::Failed(_) => 1,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(
    name = "splitmesh",
    version,
    about = "Single-photon evolution through square beam splitter arrays"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve one input state and write its trace.
    Run(RunArgs),
    /// Final probabilities over a grid of uniform angles.
    Sweep(SweepArgs),
    /// Check unitarity, commutation and fast-vs-dense equivalence.
    Verify(VerifyArgs),
    /// Time evolve over a ladder of array sizes.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Array size.
    #[arg(long)]
    pub p: Option<usize>,
    /// Angle for every device (`pi/4`, radians, or `T:<percent>`); with
    /// `--theta-file`, the angle of unlisted devices.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Per-device angles, `m n angle` per line.
    #[arg(long)]
    pub theta_file: Option<PathBuf>,
    /// Random transmissions `mean,sigma` in percent.
    #[arg(long = "random-T")]
    pub random_t: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Named configuration; `mz` is the p=2 Mach-Zehnder wiring.
    #[arg(long)]
    pub preset: Option<String>,
    /// Channel `k` or superposition `k:re[+im i],...`.
    #[arg(long, allow_hyphen_values = true)]
    pub input: String,
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub heatmap: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Detector names, `channel=label,...`.
    #[arg(long)]
    pub labels: Option<String>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub p: usize,
    /// `start:stop:count`, endpoints included.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
    #[arg(long, allow_hyphen_values = true)]
    pub input: String,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 8)]
    pub p_max: usize,
    #[arg(long, default_value_t = 100)]
    pub cases: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Corrupt one device angle with NaN to exercise failure reporting.
    #[arg(long)]
    pub inject_nan: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated array sizes.
    #[arg(long, default_value = "50,100,200,400")]
    pub ladder: String,
    /// Minimum measuring time per batch, in milliseconds.
    #[arg(long, default_value_t = 20)]
    pub min_time_ms: u64,
}

/// Parses argv and runs the command, writing reports to `out`.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("splitmesh: {e}");
            e.exit_code()
        }
    }
}

pub fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Run(args) => cmd_run(&args, out).map(|_| ()),
        Command::Sweep(args) => cmd_sweep(&args, out),
        Command::Verify(args) => {
            let report = cmd_verify(&args)?;
            write_out(out, &report.to_string())?;
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Failed("verification failed".into()))
            }
        }
        Command::Bench(args) => {
            let report = cmd_bench(&args)?;
            write_out(out, &report.to_string())?;
            match report.scaling_failure() {
                None => Ok(()),
                Some(msg) => Err(CliError::Failed(msg)),
            }
        }
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    writeln!(out, "{text}").map_err(|e| CliError::Runtime(e.into()))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Runtime(e.into()))
}

/// Splits `a,b` into two floats.
fn parse_pair(s: &str) -> Result<(f64, f64), CliError> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| usage(format!("expected `mean,sigma`, got `{s}`")))?;
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|e| usage(format!("bad number `{t}` in `{s}`: {e}")))
    };
    Ok((num(a)?, num(b)?))
}

fn parse_angle(s: &str) -> Result<MixingAngle, CliError> {
    s.parse::<MixingAngle>().map_err(|e| usage(e.to_string()))
}

/// Parses `start:stop:count`. Endpoints may themselves be `T:<percent>`.
pub fn parse_grid(s: &str) -> Result<Vec<MixingAngle>, CliError> {
    let mut parts: Vec<String> = Vec::new();
    let mut pending_t = false;
    for tok in s.split(':') {
        if pending_t {
            let last = parts.last_mut().expect("prefix pushed");
            last.push(':');
            last.push_str(tok);
            pending_t = false;
        } else {
            pending_t = tok.eq_ignore_ascii_case("t");
            parts.push(tok.to_string());
        }
    }
    let [start, stop, count] = &parts[..] else {
        return Err(usage(format!("grid `{s}` must be `start:stop:count`")));
    };
    let (start, stop) = (parse_angle(start)?, parse_angle(stop)?);
    let count = count
        .parse::<usize>()
        .map_err(|e| usage(format!("grid count `{count}`: {e}")))?;
    if count == 0 {
        return Err(usage("grid is empty"));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let (a, b) = (start.radians(), stop.radians());
    let step = (b - a) / (count - 1) as f64;
    (0..count)
        .map(|i| {
            let theta = if i == count - 1 {
                b
            } else {
                a + step * i as f64
            };
            MixingAngle::new(theta).map_err(CliError::from)
        })
        .collect()
}

/// Array and manifest policy selected by `run` flags.
pub fn resolve_array(args: &RunArgs) -> Result<(ArraySpec, ThetaPolicy), CliError> {
    if args.seed.is_some() && args.random_t.is_none() {
        return Err(usage("--seed only applies with --random-T"));
    }
    if let Some(preset) = &args.preset {
        if args.theta.is_some() || args.theta_file.is_some() || args.random_t.is_some() {
            return Err(usage(
                "--preset cannot be combined with --theta, --theta-file or --random-T",
            ));
        }
        if preset != "mz" {
            return Err(usage(format!("unknown preset `{preset}` (known: mz)")));
        }
        if args.p.is_some_and(|p| p != 2) {
            return Err(usage("--preset mz has p = 2"));
        }
        return Ok((
            mach_zehnder_spec(),
            ThetaPolicy::Preset {
                name: preset.clone(),
            },
        ));
    }
    let p = args
        .p
        .ok_or_else(|| usage("--p is required unless --preset is given"))?;
    if p == 0 {
        return Err(usage("--p must be at least 1"));
    }
    match (&args.theta, &args.theta_file, &args.random_t) {
        (theta, Some(path), None) => {
            let default = theta.as_deref().map(parse_angle).transpose()?;
            let spec = ThetaMap::read(path)?.resolve(p, default)?;
            let policy = ThetaPolicy::File {
                path: path.display().to_string(),
                default_theta: default.map(MixingAngle::radians),
                thetas: spec.thetas_row_major().iter().map(|t| t.radians()).collect(),
            };
            Ok((spec, policy))
        }
        (Some(theta), None, None) => {
            let theta = parse_angle(theta)?;
            Ok((uniform_spec(p, theta)?, ThetaPolicy::Uniform { theta: theta.radians() }))
        }
        (None, None, Some(pair)) => {
            let (mean_t, sigma_t) = parse_pair(pair)?;
            let seed = args.seed.unwrap_or(0);
            let policy = RandomThetaPolicy::new(mean_t, sigma_t, seed).map_err(|e| usage(e.to_string()))?;
            let (spec, sampled) = random_spec(p, &policy)?;
            Ok((
                spec,
                ThetaPolicy::Random {
                    mean_t,
                    sigma_t,
                    seed,
                    sampled_transmissions: sampled,
                },
            ))
        }
        (None, None, None) => Err(usage("one of --theta, --theta-file, --random-T or --preset is required")),
        _ => Err(usage("--theta, --theta-file and --random-T are mutually exclusive (except --theta as file default)")),
    }
}

/// What `run` produced.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub final_state: PureState,
    pub trace: EvolutionTrace,
    pub readout: DetectorReadout,
    pub manifest: RunManifest,
}

pub fn cmd_run(args: &RunArgs, out: &mut dyn Write) -> Result<RunOutcome, CliError> {
    let (spec, policy) = resolve_array(args)?;
    let input_spec: InputSpec = args
        .input
        .parse()
        .map_err(|e: Error| usage(e.to_string()))?;
    let input = input_spec.to_state(spec.p())?;
    let labels = match &args.labels {
        Some(s) => DetectorLabels::parse(s).map_err(|e| usage(e.to_string()))?,
        None => DetectorLabels::default(),
    };
    let evolution = evolve(&spec, &input)?;
    let readout = detector_readout_with_labels(&evolution.state, &labels);
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        schedule: SCHEDULE_VERSION.into(),
        p: spec.p(),
        input: input_spec.to_string(),
        policy,
        detector_labels: args.labels.clone().unwrap_or_default(),
    };
    if let Some(path) = &args.trace {
        write_file(path, &trace_csv(&evolution.trace))?;
    }
    if let Some(path) = &args.heatmap {
        write_file(path, &trace_pgm(&evolution.trace))?;
    }
    if let Some(path) = &args.manifest {
        write_file(path, &manifest.to_json())?;
    }
    write_out(out, &readout.to_string())?;
    Ok(RunOutcome {
        final_state: evolution.state,
        trace: evolution.trace,
        readout,
        manifest,
    })
}

/// Worker count for sweeps: `SPLITMESH_THREADS` if set, else all cores.
pub fn sweep_threads() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(usage(format!(
                "{THREADS_ENV} must be a positive integer, got `{v}`"
            ))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if args.p == 0 {
        return Err(usage("--p must be at least 1"));
    }
    let grid = parse_grid(&args.grid)?;
    let input_spec: InputSpec = args
        .input
        .parse()
        .map_err(|e: Error| usage(e.to_string()))?;
    let input = input_spec.to_state(args.p)?;
    let rows = detector_curves(args.p, &grid, &input, sweep_threads()?)?;
    let csv = curves_csv(&rows);
    match &args.out {
        Some(path) => write_file(path, &csv),
        None => out
            .write_all(csv.as_bytes())
            .map_err(|e| CliError::Runtime(e.into())),
    }
}

/// Outcome of one verification suite.
#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub max_defect: f64,
    pub tolerance: f64,
    pub diagnostic: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.diagnostic.is_none() && self.max_defect <= self.tolerance
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for s in &self.suites {
            write!(
                f,
                "{} {:<12} cases={:<5} max_defect={:.3e} tol={:.1e}",
                if s.passed() { "PASS" } else { "FAIL" },
                s.name,
                s.cases,
                s.max_defect,
                s.tolerance
            )?;
            if let Some(d) = &s.diagnostic {
                write!(f, "  ({d})")?;
            }
            writeln!(f)?;
        }
        write!(
            f,
            "{}",
            if self.passed() {
                "all suites passed"
            } else {
                "verification FAILED"
            }
        )
    }
}

struct SuiteAcc {
    name: &'static str,
    tolerance: f64,
    cases: usize,
    max_defect: f64,
    diagnostic: Option<String>,
}

impl SuiteAcc {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            cases: 0,
            max_defect: 0.0,
            diagnostic: None,
        }
    }

    fn record(&mut self, defect: f64, context: impl FnOnce() -> String) {
        self.cases += 1;
        if defect.is_nan() || defect > self.max_defect {
            self.max_defect = if self.max_defect.is_nan() {
                self.max_defect
            } else {
                defect
            };
        }
        if self.diagnostic.is_none() {
            if !defect.is_finite() {
                self.diagnostic = Some(format!("non-finite defect {defect} in {}", context()));
            } else if defect > self.tolerance {
                self.diagnostic = Some(format!("defect {defect:.3e} in {}", context()));
            }
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            cases: self.cases,
            max_defect: self.max_defect,
            tolerance: self.tolerance,
            diagnostic: self.diagnostic,
        }
    }
}

/// Array with independent angles uniform in `[-pi, pi)`.
pub fn random_angle_spec(p: usize, rng: &mut impl Rng) -> ArraySpec {
    ArraySpec::from_fn(p, |_, _| {
        MixingAngle::new(rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
            .expect("finite")
    })
    .expect("p >= 1")
}

/// Normalized state with Gaussian-distributed amplitudes.
pub fn random_state(p: usize, rng: &mut impl Rng) -> PureState {
    let normal = rand_distr::StandardNormal;
    loop {
        let terms: Vec<(usize, Complex64)> = (1..=2 * p)
            .map(|k| (k, Complex64::new(rng.sample(normal), rng.sample(normal))))
            .collect();
        if let Ok(s) = PureState::superposition(&terms, p, true) {
            return s;
        }
    }
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<VerifyReport, CliError> {
    if args.p_max == 0 || args.p_max > DENSE_CAP {
        return Err(usage(format!("--p-max must be in 1..={DENSE_CAP}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let corrupt = |spec: &mut ArraySpec| {
        if args.inject_nan {
            spec.set_theta(1, 1, MixingAngle::new_unchecked(f64::NAN))
                .expect("(1,1) exists");
        }
    };

    let mut unitarity = SuiteAcc::new("unitarity", UNITARITY_TOL);
    for case in 0..args.cases {
        let p = rng.random_range(1..=args.p_max);
        let mut spec = random_angle_spec(p, &mut rng);
        corrupt(&mut spec);
        let d = unitarity_defect(&compose_total(&spec)?).value();
        unitarity.record(d, || format!("case {case}, p={p}"));
    }

    let mut commutation = SuiteAcc::new("commutation", COMMUTATOR_TOL);
    let mut permutation = SuiteAcc::new("permutation", PERMUTATION_TOL);
    for p in 1..=args.p_max.min(6) {
        let mut spec = random_angle_spec(p, &mut rng);
        corrupt(&mut spec);
        let schedule = DiagonalSchedule::anti_diagonal(p)?;
        for diagonal in schedule.diagonals() {
            for (i, &(m1, n1)) in diagonal.iter().enumerate() {
                for &(m2, n2) in &diagonal[i + 1..] {
                    let d =
                        commutator_defect(&spec.device(m1, n1)?, &spec.device(m2, n2)?, p)?.value();
                    commutation.record(d, || format!("p={p}, ({m1},{n1}) vs ({m2},{n2})"));
                }
            }
        }
        let reference = compose_total(&spec)?;
        let shuffled = shuffle_within_diagonals(&schedule, &mut rng)?;
        let d = compose_with_schedule(&spec, &shuffled)?.max_abs_diff(&reference);
        permutation.record(d, || format!("p={p}"));
    }

    let mut equivalence = SuiteAcc::new("equivalence", EQUIVALENCE_TOL);
    for case in 0..args.cases {
        let p = rng.random_range(1..=args.p_max);
        let mut spec = random_angle_spec(p, &mut rng);
        corrupt(&mut spec);
        let input = random_state(p, &mut rng);
        let fast = evolve(&spec, &input)?.state;
        let slow = dense_evolve(&spec, &input)?;
        let d = amplitude_defect(fast.amplitudes(), slow.amplitudes()).value();
        equivalence.record(d, || format!("case {case}, p={p}"));
    }

    Ok(VerifyReport {
        suites: vec![
            unitarity.finish(),
            commutation.finish(),
            permutation.finish(),
            equivalence.finish(),
        ],
    })
}

/// Random reordering of each diagonal's devices.
pub fn shuffle_within_diagonals(
    schedule: &DiagonalSchedule,
    rng: &mut impl Rng,
) -> Result<DiagonalSchedule, Error> {
    use rand::seq::SliceRandom;
    let groups = schedule
        .diagonals()
        .iter()
        .map(|d| {
            let mut d = d.clone();
            d.shuffle(rng);
            d
        })
        .collect();
    DiagonalSchedule::from_groups(schedule.p(), groups)
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub p: usize,
    pub devices: usize,
    /// Best batch-average time of one evolve.
    pub per_run: Duration,
}

impl BenchRow {
    pub fn ns_per_device(&self) -> f64 {
        self.per_run.as_nanos() as f64 / self.devices as f64
    }
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    /// Time ratio between consecutive ladder steps, paired with the ratio
    /// allowed for that step (`DOUBLING_RATIO_MAX` per doubling of `p`,
    /// scaled quadratically for other steps).
    pub fn ratios(&self) -> Vec<(usize, usize, f64, f64)> {
        self.rows
            .windows(2)
            .map(|w| {
                let r = w[1].per_run.as_secs_f64() / w[0].per_run.as_secs_f64();
                let growth = w[1].p as f64 / w[0].p as f64;
                let allowed = DOUBLING_RATIO_MAX * (growth / 2.0).powi(2);
                (w[0].p, w[1].p, r, allowed)
            })
            .collect()
    }

    pub fn scaling_failure(&self) -> Option<String> {
        self.ratios()
            .into_iter()
            .find(|&(_, _, r, allowed)| r.is_nan() || r > allowed)
            .map(|(a, b, r, allowed)| {
                format!("evolve time grew {r:.2}x from p={a} to p={b} (allowed {allowed:.2}x)")
            })
    }
}

impl std::fmt::Display for BenchReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "p\tdevices\ttotal_ns\tns_per_device")?;
        for r in &self.rows {
            writeln!(
                f,
                "{}\t{}\t{}\t{:.2}",
                r.p,
                r.devices,
                r.per_run.as_nanos(),
                r.ns_per_device()
            )?;
        }
        for (a, b, r, allowed) in self.ratios() {
            writeln!(f, "ratio p={a}->{b}: {r:.3} (allowed {allowed:.2})")?;
        }
        write!(
            f,
            "{}",
            self.scaling_failure()
                .unwrap_or_else(|| "scaling ok".into())
        )
    }
}

/// Times `evolve` from `|1>` on a balanced array of size `p`: five batches
/// of at least `min_time` each, keeping the fastest batch average.
pub fn time_evolve(p: usize, min_time: Duration) -> Result<Duration, Error> {
    let spec = uniform_spec(p, MixingAngle::BALANCED)?;
    let input = PureState::basis(1, p)?;
    let mut best = Duration::MAX;
    for _ in 0..5 {
        let start = Instant::now();
        let mut runs = 0u32;
        while runs == 0 || start.elapsed() < min_time {
            std::hint::black_box(evolve(&spec, std::hint::black_box(&input))?);
            runs += 1;
        }
        best = best.min(start.elapsed() / runs);
    }
    Ok(best.max(Duration::from_nanos(1)))
}

pub fn cmd_bench(args: &BenchArgs) -> Result<BenchReport, CliError> {
    let ladder = args
        .ladder
        .split(',')
        .map(|s| match s.trim().parse::<usize>() {
            Ok(p) if p >= 1 => Ok(p),
            _ => Err(usage(format!("bad ladder entry `{s}`"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if ladder.is_empty() {
        return Err(usage("empty ladder"));
    }
    let min_time = Duration::from_millis(args.min_time_ms);
    let rows = ladder
        .into_iter()
        .map(|p| {
            Ok(BenchRow {
                p,
                devices: p * p,
                per_run: time_evolve(p, min_time)?,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(BenchReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn grid_parsing() {
        let g = parse_grid("0:pi/2:101").unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(g[0].radians(), 0.0);
        assert!((g[50].radians() - FRAC_PI_4).abs() < 1e-15);
        assert_eq!(g[100].radians(), FRAC_PI_2);
        assert_eq!(parse_grid("pi/4:pi/2:1").unwrap()[0].radians(), FRAC_PI_4);
        let t = parse_grid("T:100:T:0:3").unwrap();
        assert_eq!(t[0].radians(), 0.0);
        assert!((t[2].radians() - FRAC_PI_2).abs() < 1e-15);
        for bad in ["0:1:0", "0:1", "0:1:x", "a:1:3", "0:1:2:3"] {
            assert!(matches!(parse_grid(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn pair_parsing() {
        assert_eq!(parse_pair("50,10").unwrap(), (50.0, 10.0));
        assert!(parse_pair("50").is_err());
        assert!(parse_pair("50,x").is_err());
    }

    #[test]
    fn suite_acc_flags_nan() {
        let mut acc = SuiteAcc::new("x", 1e-12);
        acc.record(0.0, String::new);
        acc.record(f64::NAN, || "here".into());
        acc.record(1e-13, String::new);
        let r = acc.finish();
        assert!(!r.passed());
        assert!(r.max_defect.is_nan());
        assert!(r.diagnostic.unwrap().contains("non-finite"));
    }

    #[test]
    fn bench_ratio_rule() {
        let row = |p, ns| BenchRow {
            p,
            devices: p * p,
            per_run: Duration::from_nanos(ns),
        };
        let ok = BenchReport {
            rows: vec![row(50, 100), row(100, 400), row(200, 1700)],
        };
        assert!(ok.scaling_failure().is_none());
        let bad = BenchReport {
            rows: vec![row(100, 100), row(200, 800)],
        };
        assert!(bad.scaling_failure().is_some());
    }
}
