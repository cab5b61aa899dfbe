//! Command-line front end. `main.rs` only forwards `std::env::args` to [`run`].
//!
//! Every subcommand writes its primary output to `--out` (or stdout). When an
//! output file is written, a [`RunManifest`] goes next to it so the run can be
//! replayed with `monosum replay <manifest>`.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::colorings::{block_color, loglog_color, make_separated, phi_set, BlockColoring, ColorRule, LogLogParams};
use crate::density::{
    abar_direct, abar_recurrence, abar_sequence, delta_formula, delta_formula_exact, log_density_intervals,
    log_density_set, loglog_cover_density, natural_density_profile,
};
use crate::dynamics::{fixed_point_exact, sk_iterate, step_exact, IterationConfig, SearchBox};
use crate::error::{Error, Result};
use crate::exact::{self, ratio};
use crate::optimize::{c_upper_table, critical_root, f2_inf, minimize_delta, table_csv};
use crate::report::fmt_real;
use crate::sums::{bounded_subset_sums, subset_sums, IntSet, IntervalList};
use crate::verify::{prime_filter, thm22_check, worst_partition_search, SearchStrategy};

/// Exit status for domain errors (bad values, failed preconditions, I/O).
pub const EXIT_DOMAIN: i32 = 1;
/// Exit status for malformed command lines.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "monosum",
    version,
    about = "Monochromatic subset sums: exact tables, densities, bounds, and certificates"
)]
pub struct Cli {
    /// Worker threads for parallel kernels (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Where to write the run manifest (default: next to --out).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Subset sums Σ(A) or Σ^[k](A) up to a cap.
    Sums(SumsArgs),
    /// Classify integers or list φ-sets of a coloring.
    #[command(subcommand)]
    Coloring(ColoringCmd),
    /// Densities, δ_r(b), and the ā recurrence.
    #[command(subcommand)]
    Density(DensityCmd),
    /// Critical roots, the upper-bound table, and f2.
    #[command(subcommand)]
    Optimize(OptimizeCmd),
    /// The step map and S_K emptiness certificates.
    #[command(subcommand)]
    Dynamics(DynamicsCmd),
    /// Partition experiments on [N, eN).
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Re-run a manifest and compare its outputs byte for byte.
    Replay { manifest: PathBuf },
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct SetSource {
    /// Comma-separated elements.
    #[arg(long, value_delimiter = ',', conflicts_with = "input")]
    pub elements: Option<Vec<u64>>,
    /// File with one integer per line.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

impl SetSource {
    fn load(&self) -> Result<IntSet> {
        match (&self.elements, &self.input) {
            (Some(e), _) => IntSet::new(e.clone()),
            (None, Some(p)) => IntSet::read(p),
            (None, None) => Err(Error::invalid("give --elements or --input")),
        }
    }
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct Output {
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an SVG plot to this path, where the command has one.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SumsArgs {
    #[command(flatten)]
    pub set: SetSource,
    /// Largest sum tracked.
    #[arg(long)]
    pub cap: u64,
    /// At most k summands.
    #[arg(long)]
    pub k: Option<usize>,
    /// Print maximal intervals (`lo,hi` CSV) instead of individual sums.
    #[arg(long)]
    pub intervals: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
pub enum ColoringType {
    Loglog,
    Block,
}

#[derive(Debug, Args, Serialize)]
pub struct BlockSource {
    /// Comma-separated breakpoints starting at 1.
    #[arg(long, value_delimiter = ',', conflicts_with = "breakpoints")]
    pub h: Option<Vec<u64>>,
    /// Breakpoint file (one per line, optional color column).
    #[arg(long)]
    pub breakpoints: Option<PathBuf>,
    /// Number of cyclic colors when breakpoints come from --h.
    #[arg(long, default_value_t = 2)]
    pub colors: u32,
}

impl BlockSource {
    fn load(&self) -> Result<BlockColoring> {
        match (&self.h, &self.breakpoints) {
            (Some(h), _) => BlockColoring::new(h.clone(), ColorRule::Cyclic { r: self.colors }),
            (None, Some(p)) => BlockColoring::read(p),
            (None, None) => Err(Error::invalid("give --h or --breakpoints")),
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct LogLogArgs {
    /// Outer base b.
    #[arg(long, default_value_t = 4.0)]
    pub b: f64,
    /// Number of colors.
    #[arg(long, default_value_t = 2)]
    pub r: u32,
    /// Inner logarithm base (default: natural log).
    #[arg(long)]
    pub inner_base: Option<f64>,
}

impl LogLogArgs {
    fn params(&self) -> Result<LogLogParams> {
        let p = LogLogParams::new(self.b, self.r)?;
        match self.inner_base {
            Some(c) => p.with_inner_base(c),
            None => Ok(p),
        }
    }
}

#[derive(Debug, Subcommand, Serialize)]
pub enum ColoringCmd {
    /// Color of each n.
    Classify {
        #[arg(long = "type", value_enum)]
        kind: ColoringType,
        /// Integers to classify.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
        #[command(flatten)]
        loglog: LogLogArgs,
        #[command(flatten)]
        block: BlockSource,
        #[command(flatten)]
        output: Output,
    },
    /// S(φ, i) as maximal intervals.
    Phi {
        #[command(flatten)]
        block: BlockSource,
        #[arg(long)]
        color: u32,
        /// Upper end of the listing (default: 2(H_last - 1)).
        #[arg(long)]
        max: Option<u64>,
        /// Make the coloring separated first.
        #[arg(long)]
        separate: bool,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Subcommand, Serialize)]
pub enum DensityCmd {
    /// δ_r(b); exact when b is rational (`4`, `7/2`, `3.75`).
    Delta {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        b: String,
        #[command(flatten)]
        output: Output,
    },
    /// Upper log density of the log-log cover intervals.
    Cover {
        #[command(flatten)]
        loglog: LogLogArgs,
        #[command(flatten)]
        output: Output,
    },
    /// ā_n of a two-color block coloring, by recurrence and by the closed formula.
    Abar {
        #[command(flatten)]
        block: BlockSource,
        #[command(flatten)]
        output: Output,
    },
    /// The ā recurrence driven by a constant ratio z.
    Recurrence {
        #[arg(long)]
        z: String,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value = "1")]
        seed_a: String,
        #[arg(long, default_value = "0")]
        seed_b: String,
        #[command(flatten)]
        output: Output,
    },
    /// |S(φ, i) ∩ [1, t]| / t at the given t.
    Profile {
        #[command(flatten)]
        block: BlockSource,
        #[arg(long)]
        color: u32,
        /// Sample points (default: 2(H_n - 1) for every block).
        #[arg(long, value_delimiter = ',')]
        t: Option<Vec<u64>>,
        #[command(flatten)]
        output: Output,
    },
    /// (1/ln x) Σ_{a <= x, a ∈ A} 1/a for a set or a `lo,hi` interval file.
    Log {
        #[command(flatten)]
        set: SetSource,
        /// CSV of intervals with header `lo,hi`, instead of a set.
        #[arg(long, conflicts_with_all = ["elements", "input"])]
        intervals: Option<PathBuf>,
        #[arg(long)]
        x: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Subcommand, Serialize)]
pub enum OptimizeCmd {
    /// Rows r = 2..rmax of b0, c_upper, δ_r(b0).
    Table {
        #[arg(long, default_value_t = 10)]
        rmax: u32,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// The root b0 > 1 of b^r - 2rb + r - 1.
    Root {
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Golden-section minimum of δ_r.
    Minimize {
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// inf (1 - z/2)/(1 - z²) over [0, 1).
    F2 {
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Subcommand, Serialize)]
pub enum DynamicsCmd {
    /// Outer approximations of S_K until one is empty.
    Certify {
        #[arg(long, allow_hyphen_values = true)]
        epsilon: f64,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long, default_value_t = 10_000)]
        kmax: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Directory for polygons.csv, overlay.svg and the manifest.
        #[arg(long)]
        snapshots: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Exact fixed point of the step map for rational z.
    FixedPoint {
        #[arg(long)]
        z: String,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
pub enum StrategyArg {
    Random,
    Exhaustive,
    GreedyAdversarial,
}

impl From<StrategyArg> for SearchStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Random => SearchStrategy::Random,
            StrategyArg::Exhaustive => SearchStrategy::Exhaustive,
            StrategyArg::GreedyAdversarial => SearchStrategy::GreedyAdversarial,
        }
    }
}

#[derive(Debug, Subcommand, Serialize)]
pub enum VerifyCmd {
    /// Smallest c with [cN, N²/8] covered by one color, over partitions.
    Lemma21 {
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value_t = 2)]
        r: u32,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = StrategyArg::Random)]
        strategy: StrategyArg,
        #[command(flatten)]
        output: Output,
    },
    /// Integers of [lo, hi] with no prime factor at most r².
    Primes {
        #[arg(long)]
        lo: u64,
        #[arg(long)]
        hi: u64,
        #[arg(long)]
        r: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Longest intervals of Σ^[k] over divisor reductions.
    Thm22 {
        #[command(flatten)]
        set: SetSource,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        output: Output,
    },
}

/// Record of one run: enough to repeat it and check the outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    /// Arguments after the program name, verbatim.
    pub argv: Vec<String>,
    /// Parsed parameters, including defaults.
    pub parameters: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    pub wall_time_seconds: f64,
    pub outputs: Vec<PathBuf>,
}

/// Parses `argv` (program name first), runs the command, and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let args: Vec<String> = argv.iter().skip(1).map(|s| s.to_string_lossy().into_owned()).collect();
    match execute(&cli, &args, false) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_DOMAIN
        }
    }
}

fn execute(cli: &Cli, args: &[String], quiet: bool) -> Result<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::invalid("--threads must be positive"));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let mut sink = Sink {
        quiet,
        ..Sink::default()
    };
    pool.install(|| dispatch(&cli.command, &mut sink))?;
    if matches!(cli.command, Command::Replay { .. }) {
        return Ok(());
    }
    let manifest_path = cli.manifest.clone().or_else(|| sink.default_manifest());
    if let Some(path) = manifest_path {
        let manifest = RunManifest {
            subcommand: subcommand_name(&cli.command),
            argv: args.to_vec(),
            parameters: serde_json::to_value(&cli.command)?,
            seed: seed_of(&cli.command),
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_seconds: start.elapsed().as_secs_f64(),
            outputs: sink.written.clone(),
        };
        write_file(&path, &serde_json::to_string_pretty(&manifest)?)?;
    }
    Ok(())
}

fn subcommand_name(cmd: &Command) -> String {
    let v = serde_json::to_value(cmd).unwrap_or_default();
    let outer = match &v {
        serde_json::Value::Object(m) => m.keys().next().cloned(),
        serde_json::Value::String(s) => Some(s.clone()),
        _ => None,
    };
    let inner = v.as_object().and_then(|m| m.values().next()).and_then(|x| match x {
        serde_json::Value::Object(m) if m.len() == 1 => {
            let (k, val) = m.iter().next()?;
            val.is_object().then(|| k.clone())
        }
        _ => None,
    });
    match (outer, inner) {
        (Some(o), Some(i)) => format!("{} {}", o.to_lowercase(), i.to_lowercase()),
        (Some(o), None) => o.to_lowercase(),
        _ => String::new(),
    }
}

fn seed_of(cmd: &Command) -> Option<u64> {
    match cmd {
        Command::Verify(VerifyCmd::Lemma21 { seed, .. }) => Some(*seed),
        _ => None,
    }
}

#[derive(Default)]
struct Sink {
    /// Drop stdout output (used when replaying).
    quiet: bool,
    written: Vec<PathBuf>,
    /// Directory-style output (snapshots) puts the manifest inside it.
    manifest_dir: Option<PathBuf>,
}

impl Sink {
    fn primary(&mut self, output: &Output, text: &str) -> Result<()> {
        match &output.out {
            Some(path) => self.file(path, text),
            None => {
                self.stdout(text);
                Ok(())
            }
        }
    }

    fn stdout(&self, text: &str) {
        if !self.quiet {
            print!("{text}");
        }
    }

    fn svg(&mut self, output: &Output, make: impl FnOnce() -> String) -> Result<()> {
        if let Some(path) = &output.svg {
            self.file(path, &make())?;
        }
        Ok(())
    }

    fn file(&mut self, path: &Path, text: &str) -> Result<()> {
        write_file(path, text)?;
        self.written.push(path.to_path_buf());
        Ok(())
    }

    fn default_manifest(&self) -> Option<PathBuf> {
        if let Some(dir) = &self.manifest_dir {
            return Some(dir.join("manifest.json"));
        }
        let first = self.written.first()?;
        let mut name = first.as_os_str().to_owned();
        name.push(".manifest.json");
        Some(PathBuf::from(name))
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, text)?;
    Ok(())
}

/// Parses `a/b`, an integer, or a finite decimal into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let q = BigRational::new(digits, BigInt::from(10u32).pow(frac.len() as u32));
    Ok(if neg { -q } else { q })
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn dispatch(cmd: &Command, sink: &mut Sink) -> Result<()> {
    match cmd {
        Command::Sums(a) => run_sums(a, sink),
        Command::Coloring(c) => run_coloring(c, sink),
        Command::Density(d) => run_density(d, sink),
        Command::Optimize(o) => run_optimize(o, sink),
        Command::Dynamics(d) => run_dynamics(d, sink),
        Command::Verify(v) => run_verify(v, sink),
        Command::Replay { manifest } => replay(manifest),
    }
}

fn run_sums(a: &SumsArgs, sink: &mut Sink) -> Result<()> {
    let set = a.set.load()?;
    let sums = match a.k {
        Some(k) => bounded_subset_sums(&set, k, a.cap)?,
        None => subset_sums(&set, a.cap),
    };
    let text = if a.intervals {
        sums.maximal_intervals(0, a.cap)?.to_csv()
    } else {
        let mut s = String::from("sum\n");
        for x in sums.iter() {
            s.push_str(&x.to_string());
            s.push('\n');
        }
        s
    };
    sink.primary(&a.output, &text)
}

fn run_coloring(c: &ColoringCmd, sink: &mut Sink) -> Result<()> {
    match c {
        ColoringCmd::Classify {
            kind,
            n,
            loglog,
            block,
            output,
        } => {
            let mut s = String::new();
            match kind {
                ColoringType::Loglog => {
                    let p = loglog.params()?;
                    s.push_str("n,color,level,ambiguous\n");
                    for &x in n {
                        let c = loglog_color(x, &p);
                        let level = c.level.map_or(String::new(), |l| l.to_string());
                        s.push_str(&format!("{x},{},{level},{}\n", c.color, c.ambiguous));
                    }
                }
                ColoringType::Block => {
                    let col = block.load()?;
                    s.push_str("n,block,color\n");
                    for &x in n {
                        let color = block_color(x, &col)?;
                        s.push_str(&format!("{x},{},{color}\n", col.block_of(x)));
                    }
                }
            }
            sink.primary(output, &s)
        }
        ColoringCmd::Phi {
            block,
            color,
            max,
            separate,
            output,
        } => {
            let mut col = block.load()?;
            if *separate {
                col = make_separated(&col)?;
            }
            let range_max = max.unwrap_or_else(|| col.phi_limit());
            let phi = phi_set(&col, *color, range_max)?;
            sink.primary(output, &phi.intervals.to_csv())
        }
    }
}

fn run_density(d: &DensityCmd, sink: &mut Sink) -> Result<()> {
    match d {
        DensityCmd::Delta { r, b, output } => {
            let q = parse_rational(b)?;
            let exact_value = delta_formula_exact(*r, &q)?;
            let real = delta_formula(*r, exact::to_f64(&q))?;
            let text = format!(
                "r,b,delta,delta_real\n{r},{},{},{}\n",
                fmt_rational(&q),
                fmt_rational(&exact_value),
                fmt_real(real)
            );
            sink.primary(output, &text)
        }
        DensityCmd::Cover { loglog, output } => {
            let p = loglog.params()?;
            let text = format!(
                "b,r,cover_density\n{},{},{}\n",
                fmt_real(p.b()),
                p.r(),
                fmt_real(loglog_cover_density(&p))
            );
            sink.primary(output, &text)
        }
        DensityCmd::Abar { block, output } => {
            let col = block.load()?;
            let seq = abar_sequence(&col)?;
            let mut s = String::from("n,z,abar,bbar,abar_direct,abar_real\n");
            for st in &seq {
                let direct = abar_direct(&col, st.n)?;
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    st.n,
                    fmt_rational(&st.z),
                    fmt_rational(&st.abar),
                    fmt_rational(&st.bbar),
                    fmt_rational(&direct),
                    fmt_real(exact::to_f64(&st.abar))
                ));
            }
            sink.primary(output, &s)
        }
        DensityCmd::Recurrence {
            z,
            steps,
            seed_a,
            seed_b,
            output,
        } => {
            let z = parse_rational(z)?;
            let seed = (parse_rational(seed_a)?, parse_rational(seed_b)?);
            let states = abar_recurrence(&vec![z; *steps], seed)?;
            let mut s = String::from("n,abar_real,bbar_real\n");
            for st in &states {
                s.push_str(&format!(
                    "{},{},{}\n",
                    st.n,
                    fmt_real(exact::to_f64(&st.abar)),
                    fmt_real(exact::to_f64(&st.bbar))
                ));
            }
            sink.primary(output, &s)?;
            let pts: Vec<(f64, f64)> = states.iter().map(|st| (st.n as f64, exact::to_f64(&st.abar))).collect();
            sink.svg(output, || {
                crate::report::line_plot_svg(
                    "abar recurrence",
                    "n",
                    "abar",
                    &[crate::report::Series {
                        label: "abar",
                        points: &pts,
                    }],
                )
            })
        }
        DensityCmd::Profile {
            block,
            color,
            t,
            output,
        } => {
            let col = block.load()?;
            let ts: Vec<u64> = match t {
                Some(t) => t.clone(),
                None => col.breakpoints()[1..].iter().map(|h| 2 * (h - 1)).collect(),
            };
            let top = ts.iter().copied().max().unwrap_or(1);
            let phi = phi_set(&col, *color, top)?;
            let profile = natural_density_profile(&phi.intervals, &ts)?;
            sink.primary(output, &profile.to_csv())?;
            sink.svg(output, || profile.to_svg(&format!("density of S(phi, {color})")))
        }
        DensityCmd::Log {
            set,
            intervals,
            x,
            output,
        } => {
            let d = match intervals {
                Some(path) => log_density_intervals(&parse_interval_csv(&fs::read_to_string(path)?)?, *x)?,
                None => log_density_set(&set.load()?, *x)?,
            };
            let sum = d.reciprocal_sum.as_ref().map_or(String::new(), fmt_rational);
            let text = format!(
                "x,value,error,reciprocal_sum\n{x},{},{},{sum}\n",
                fmt_real(d.value.value),
                fmt_real(d.value.error)
            );
            sink.primary(output, &text)
        }
    }
}

/// Reads a `lo,hi` CSV (header optional) into an interval list.
pub fn parse_interval_csv(text: &str) -> Result<IntervalList> {
    let mut ranges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (i == 0 && line.starts_with(|c: char| c.is_ascii_alphabetic())) {
            continue;
        }
        let parse_err = |m: &str| Error::Parse {
            line: i + 1,
            message: m.to_string(),
        };
        let (lo, hi) = line.split_once(',').ok_or_else(|| parse_err("expected lo,hi"))?;
        let lo: u64 = lo.trim().parse().map_err(|_| parse_err("bad lo"))?;
        let hi: u64 = hi.trim().parse().map_err(|_| parse_err("bad hi"))?;
        if lo > hi {
            return Err(parse_err("lo exceeds hi"));
        }
        ranges.push((lo, hi));
    }
    Ok(IntervalList::from_ranges(ranges))
}

fn run_optimize(o: &OptimizeCmd, sink: &mut Sink) -> Result<()> {
    match o {
        OptimizeCmd::Table { rmax, tol, output } => {
            let rows = c_upper_table(*rmax, *tol)?;
            sink.primary(output, &table_csv(&rows))
        }
        OptimizeCmd::Root { r, tol, output } => {
            let root = critical_root(*r, *tol)?;
            let text = format!(
                "r,b0,residual,small_root,certified\n{r},{},{},{},{}\n",
                fmt_real(root.b0),
                fmt_real(root.residual),
                fmt_real(root.small_root),
                root.certificate.holds()
            );
            sink.primary(output, &text)
        }
        OptimizeCmd::Minimize { r, tol, output } => {
            let m = minimize_delta(*r, *tol)?;
            let text = format!("r,b_star,delta_star\n{r},{},{}\n", fmt_real(m.arg), fmt_real(m.value));
            sink.primary(output, &text)
        }
        OptimizeCmd::F2 { output } => {
            let f = f2_inf();
            let text = format!(
                "z_star,f2,z_exact,f2_exact\n{},{},{},{}\n",
                fmt_real(f.numeric.arg),
                fmt_real(f.numeric.value),
                "2-sqrt(3)",
                "(2+sqrt(3))/4"
            );
            sink.primary(output, &text)
        }
    }
}

#[derive(Serialize)]
struct CertifyReport {
    epsilon: f64,
    bound: String,
    grid: usize,
    k_max: usize,
    tol: f64,
    certification: crate::dynamics::Certification,
    stop: crate::dynamics::StopReason,
    polygons: usize,
    vertex_counts: Vec<usize>,
    areas: Vec<String>,
}

fn run_dynamics(d: &DynamicsCmd, sink: &mut Sink) -> Result<()> {
    match d {
        DynamicsCmd::Certify {
            epsilon,
            grid,
            kmax,
            tol,
            snapshots,
            output,
        } => {
            let search_box = SearchBox::new(*epsilon)?;
            let config = IterationConfig {
                grid: *grid,
                tol: *tol,
                k_max: *kmax,
            };
            let run = sk_iterate(&search_box, &config)?;
            let report = CertifyReport {
                epsilon: *epsilon,
                bound: fmt_real(search_box.bound),
                grid: *grid,
                k_max: *kmax,
                tol: *tol,
                certification: run.certification(),
                stop: run.stop,
                polygons: run.polygons.len(),
                vertex_counts: run.polygons.iter().map(|p| p.vertices().len()).collect(),
                areas: run.polygons.iter().map(|p| fmt_real(p.area())).collect(),
            };
            let mut json = serde_json::to_string_pretty(&report)?;
            json.push('\n');
            if let Some(dir) = snapshots {
                sink.file(&dir.join("polygons.csv"), &run.snapshots_csv())?;
                sink.file(&dir.join("overlay.svg"), &run.snapshots_svg())?;
                sink.file(&dir.join("certificate.json"), &json)?;
                sink.manifest_dir = Some(dir.clone());
                if output.out.is_some() {
                    sink.primary(output, &json)?;
                } else {
                    sink.stdout(&json);
                }
            } else {
                sink.primary(output, &json)?;
            }
            sink.svg(output, || run.snapshots_svg())
        }
        DynamicsCmd::FixedPoint { z, output } => {
            let z = parse_rational(z)?;
            let (a, b) = fixed_point_exact(&z)?;
            let fixed = z <= ratio(1, 2) && step_exact(&a, &b, &z)? == (a.clone(), b.clone());
            let text = format!(
                "z,a,b,a_real,b_real,step_fixed\n{},{},{},{},{},{}\n",
                fmt_rational(&z),
                fmt_rational(&a),
                fmt_rational(&b),
                fmt_real(exact::to_f64(&a)),
                fmt_real(exact::to_f64(&b)),
                fixed
            );
            sink.primary(output, &text)
        }
    }
}

#[derive(Serialize)]
struct Lemma21Report {
    #[serde(flatten)]
    search: crate::verify::SearchReport,
    min_c: Option<f64>,
}

fn run_verify(v: &VerifyCmd, sink: &mut Sink) -> Result<()> {
    match v {
        VerifyCmd::Lemma21 {
            n,
            r,
            trials,
            seed,
            strategy,
            output,
        } => {
            let search = worst_partition_search(*n, *r, *trials, *seed, (*strategy).into())?;
            let min_c = search.trials.iter().filter_map(|t| t.c).reduce(f64::min);
            let mut json = serde_json::to_string_pretty(&Lemma21Report { search, min_c })?;
            json.push('\n');
            sink.primary(output, &json)
        }
        VerifyCmd::Primes { lo, hi, r, output } => {
            let set = prime_filter(*lo, *hi, *r)?;
            sink.primary(output, &set.to_text())
        }
        VerifyCmd::Thm22 { set, n, k, output } => {
            let report = thm22_check(&set.load()?, *n, *k)?;
            let mut json = serde_json::to_string_pretty(&report)?;
            json.push('\n');
            sink.primary(output, &json)
        }
    }
}

fn replay(path: &Path) -> Result<()> {
    let manifest: RunManifest = serde_json::from_str(&fs::read_to_string(path)?)?;
    let before: Vec<Option<Vec<u8>>> = manifest.outputs.iter().map(|p| fs::read(p).ok()).collect();
    let mut argv = vec!["monosum".to_string()];
    argv.extend(manifest.argv.iter().cloned());
    let cli = Cli::try_parse_from(&argv).map_err(|e| Error::invalid(format!("manifest arguments: {e}")))?;
    if matches!(cli.command, Command::Replay { .. }) {
        return Err(Error::invalid("a manifest cannot replay another replay"));
    }
    // keep the original manifest; the rerun writes a fresh one beside it
    let saved = fs::read(path)?;
    execute(&cli, &manifest.argv, true)?;
    fs::write(path, saved)?;
    let mut mismatches = Vec::new();
    for (p, old) in manifest.outputs.iter().zip(before) {
        let new = fs::read(p).ok();
        // SVG and manifests carry no canonical data
        let canonical = p.extension().is_none_or(|e| e != "svg");
        if canonical && new != old {
            mismatches.push(p.display().to_string());
        }
    }
    if mismatches.is_empty() {
        println!("replay ok: {} outputs identical", manifest.outputs.len());
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "replay produced different output in {}",
            mismatches.join(", ")
        )))
    }
}
