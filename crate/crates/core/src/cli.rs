//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for usage or validation errors, 3 for I/O
//! errors. Reports are printed as `key=value` lines.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::channel::{BmsChannel, ChannelKind, ZPolicy};
use crate::codec::simulate;
use crate::construct::{build_code, PolarCode};
use crate::error::Error;
use crate::experiments::{
    fit_slope, fmt_g, group_curves, run_fig6, run_fig7, run_fig8, write_csv, Curve, Field, PPolicy, SweepGrid,
    SweepRecord, DEFAULT_SWEEP_N, MAX_SWEEP_N,
};
use crate::latency::{bound_at_inverse_mu, build_ssc_tree, serial_corollary, theorem1_bound, LatencyReport};
use crate::plot::plot_records;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "polarlat",
    version,
    about = "Polar code construction, SC/SSC decoding and decoding latency"
)]
pub struct Cli {
    /// Worker threads for parallel sweeps and simulations (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=1024))]
    pub threads: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a code and write it in the code file format.
    Construct {
        #[command(flatten)]
        code: CodeArgs,
        /// Output file; the code is written to standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report SC and SSC latency for a code and a number of processing elements.
    Latency {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        pes: PeArgs,
    },
    /// Check SC/SSC agreement and measure the frame error rate.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run one of the latency-scaling experiments and write CSV.
    Sweep(SweepArgs),
    /// Evaluate the latency upper bound.
    Bound {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=60))]
        n: u32,
        #[command(flatten)]
        pes: PeArgs,
        #[arg(long, default_value = "bec")]
        channel: ChannelKind,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
    },
}

/// Either a code file or the parameters to construct one.
#[derive(Debug, Args)]
pub struct CodeArgs {
    /// Read the code from a file instead of constructing it.
    #[arg(long, conflicts_with_all = ["capacity", "param", "pe", "n"])]
    pub code: Option<PathBuf>,
    #[arg(long, default_value = "bec")]
    pub channel: ChannelKind,
    /// Channel capacity in (0, 1).
    #[arg(long, conflicts_with = "param")]
    pub capacity: Option<f64>,
    /// Raw channel parameter: erasure probability, crossover probability or noise deviation.
    #[arg(long)]
    pub param: Option<f64>,
    /// Target block error probability.
    #[arg(long, default_value_t = 1e-3)]
    pub pe: f64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=MAX_SWEEP_N as i64))]
    pub n: Option<u32>,
}

#[derive(Debug, Args)]
pub struct PeArgs {
    /// Number of processing elements.
    #[arg(long, conflicts_with = "policy")]
    pub p: Option<u64>,
    /// Rule for P as a function of N: half, sqrt, invmu, eighth or one.
    #[arg(long)]
    pub policy: Option<PPolicy>,
    /// Scaling exponent for the invmu policy and the bound (default: the channel's).
    #[arg(long)]
    pub mu: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(6..=8))]
    pub figure: u8,
    /// Restrict the sweep to one channel family.
    #[arg(long)]
    pub channel: Option<ChannelKind>,
    /// Restrict the sweep to one capacity.
    #[arg(long)]
    pub capacity: Option<f64>,
    /// Restrict the sweep to one target error probability.
    #[arg(long)]
    pub pe: Option<f64>,
    #[arg(long, default_value_t = 4)]
    pub nmin: u32,
    #[arg(long, default_value_t = DEFAULT_SWEEP_N)]
    pub nmax: u32,
    /// Allow nmax above the default limit (up to 27).
    #[arg(long)]
    pub large: bool,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long, default_value_t = 1.01)]
    pub factor: f64,
    /// CSV output file; CSV goes to standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Write a gnuplot script (rendering to PNG) instead of, or besides, SVG.
    #[arg(long)]
    pub gnuplot: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => CliError::Io(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn io_err(path: &Path, e: io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

type CliResult<T> = Result<T, CliError>;

impl CodeArgs {
    fn channel(&self) -> CliResult<BmsChannel> {
        Ok(match (self.capacity, self.param) {
            (Some(cap), _) => BmsChannel::from_capacity(self.channel, cap)?,
            (None, Some(param)) => BmsChannel::new(self.channel, param)?,
            (None, None) => usage("one of --capacity or --param is required")?,
        })
    }

    fn load(&self) -> CliResult<PolarCode> {
        if let Some(path) = &self.code {
            let file = File::open(path).map_err(|e| io_err(path, e))?;
            return PolarCode::read_from(BufReader::new(file)).map_err(|e| match e {
                Error::Io(io) => io_err(path, io),
                other => CliError::Usage(format!("{}: {other}", path.display())),
            });
        }
        let Some(n) = self.n else {
            return usage("--n is required unless --code is given");
        };
        let channel = self.channel()?;
        Ok(build_code(&channel, n, self.pe, ZPolicy::for_kind(channel.kind()))?)
    }
}

impl PeArgs {
    fn mu(&self, kind: ChannelKind) -> CliResult<f64> {
        let mu = self.mu.unwrap_or_else(|| kind.scaling_exponent());
        if !(mu > 1.0 && mu.is_finite()) {
            return usage(format!("--mu {mu} must exceed 1"));
        }
        Ok(mu)
    }

    fn resolve(&self, n: u32, kind: ChannelKind) -> CliResult<u64> {
        match (self.p, self.policy) {
            (Some(0), _) => usage("--p must be at least 1"),
            (Some(p), _) => Ok(p),
            (None, Some(policy)) => Ok(policy.realize(n, self.mu(kind)?)),
            (None, None) => usage("one of --p or --policy is required"),
        }
    }
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| io_err(path, e))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| io_err(path, e))
}

fn cmd_construct(code: &CodeArgs, out_path: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    let built = code.load()?;
    let summary = format!(
        "N={}\nK={}\nfrozen={}\nrate={}\n",
        built.len(),
        built.info_count(),
        built.frozen_count(),
        fmt_g(built.rate())
    );
    match out_path {
        Some(path) => {
            let mut w = create(path)?;
            built
                .write_to(&mut w)
                .and_then(|_| w.flush())
                .map_err(|e| io_err(path, e))?;
            writeln!(out, "{summary}out={}", path.display()).map_err(|e| CliError::Io(e.to_string()))
        }
        None => {
            eprint!("{summary}");
            built.write_to(out).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn cmd_latency(code: &CodeArgs, pes: &PeArgs, out: &mut dyn Write) -> CliResult<()> {
    let built = code.load()?;
    let p = pes.resolve(built.n(), built.channel().kind())?;
    let report = LatencyReport::new(&build_ssc_tree(&built), p);
    let closed = report.sc_closed.map_or_else(|| "na".to_string(), |v| v.to_string());
    write!(
        out,
        "n={}\nN={}\nP={}\nssc={}\nsc_tree={}\nsc_closed={}\nlatency_norm={}\n",
        report.n,
        report.block_len,
        report.p,
        report.ssc,
        report.sc_tree,
        closed,
        fmt_g(report.normalized)
    )
    .map_err(|e| CliError::Io(e.to_string()))
}

fn cmd_simulate(code: &CodeArgs, trials: u64, seed: u64, out: &mut dyn Write) -> CliResult<()> {
    if trials == 0 {
        return usage("--trials must be at least 1");
    }
    let built = code.load()?;
    let report = simulate(&built, built.channel(), trials, seed)?;
    write!(
        out,
        "N={}\nK={}\nseed={}\ntrials={}\nagree={}/{}\nframe_errors={}\nfer={}\n",
        built.len(),
        built.info_count(),
        report.seed,
        report.trials,
        report.agree,
        report.trials,
        report.frame_errors,
        fmt_g(report.fer())
    )
    .map_err(|e| CliError::Io(e.to_string()))
}

fn sweep_axes(figure: u8) -> (Field, Field, usize, &'static str) {
    match figure {
        6 => (Field::Log2Log2N, Field::LatencyNorm, 5, "Normalized SSC latency, P = 1"),
        7 => (Field::Log2N, Field::Log2Latency, 8, "SSC latency for several P"),
        _ => (Field::Log2N, Field::Log2P, 8, "Smallest P within the latency factor"),
    }
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> CliResult<()> {
    if args.nmax > DEFAULT_SWEEP_N && !args.large {
        return usage(format!("--nmax above {DEFAULT_SWEEP_N} requires --large"));
    }
    if args.nmax > MAX_SWEEP_N {
        return usage(format!("--nmax must be at most {MAX_SWEEP_N}"));
    }
    let mut grid = if args.figure == 6 {
        SweepGrid::fig6(args.nmax)
    } else {
        SweepGrid::bec_half(args.nmax)
    };
    grid.n_min = args.nmin;
    if let Some(kind) = args.channel {
        grid.kinds = vec![kind];
    }
    if let Some(cap) = args.capacity {
        grid.capacities = vec![cap];
    }
    if let Some(pe) = args.pe {
        grid.pes = vec![pe];
    }
    let records: Vec<SweepRecord> = match args.figure {
        6 => run_fig6(&grid)?,
        7 => run_fig7(&grid, &PPolicy::FIG7, args.mu)?,
        _ => run_fig8(&grid, args.factor)?,
    };

    let (x, y, window, title) = sweep_axes(args.figure);
    match &args.out {
        Some(path) => {
            let mut w = create(path)?;
            write_csv(&records, &mut w)
                .and_then(|_| w.flush())
                .map_err(|e| io_err(path, e))?;
            let mut summary = format!("rows={}\nout={}\n", records.len(), path.display());
            for (key, rows) in group_curves(&records) {
                if key.curve == Curve::ScReference {
                    continue;
                }
                if let Ok(fit) = fit_slope(&rows, x, y, window) {
                    summary.push_str(&format!(
                        "slope[{key}]={} window={} residual={}\n",
                        fmt_g(fit.slope),
                        fit.window,
                        fmt_g(fit.residual)
                    ));
                }
            }
            out.write_all(summary.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
        None => write_csv(&records, out).map_err(|e| CliError::Io(e.to_string()))?,
    }

    let plot = plot_records(title, &records, x, y);
    if let Some(path) = &args.svg {
        write_file(path, &plot.to_svg())?;
    }
    if let Some(path) = &args.gnuplot {
        let png = path.with_extension("png");
        write_file(path, &plot.to_gnuplot(&png.display().to_string()))?;
    }
    Ok(())
}

fn cmd_bound(n: u32, pes: &PeArgs, kind: ChannelKind, c: f64, eps: f64, out: &mut dyn Write) -> CliResult<()> {
    let p = pes.resolve(n, kind)?;
    let mu = pes.mu(kind)?;
    let len = 2f64.powi(n as i32);
    let bound = theorem1_bound(len, p as f64, mu, c, eps)?;
    let at_inv_mu = bound_at_inverse_mu(len, mu, c, eps).map_or_else(|_| "na".to_string(), fmt_g);
    let serial = serial_corollary(len).map_or_else(|_| "na".to_string(), fmt_g);
    write!(
        out,
        "N={}\nP={p}\nmu={}\nc={}\neps={}\nbound={}\nbound_inv_mu={at_inv_mu}\nserial_leading={serial}\n",
        fmt_g(len),
        fmt_g(mu),
        fmt_g(c),
        fmt_g(eps),
        fmt_g(bound)
    )
    .map_err(|e| CliError::Io(e.to_string()))
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Construct { code, out: path } => cmd_construct(code, path.as_deref(), out),
        Command::Latency { code, pes } => cmd_latency(code, pes, out),
        Command::Simulate { code, trials, seed } => cmd_simulate(code, *trials, *seed, out),
        Command::Sweep(args) => cmd_sweep(args, out),
        Command::Bound {
            n,
            pes,
            channel,
            c,
            eps,
        } => cmd_bound(*n, pes, *channel, *c, *eps, out),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Reports go to `out`, diagnostics to standard error.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Some(threads) = cli.threads {
        // Fails only if the global pool was already built, in which case it is kept.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads as usize)
            .build_global();
    }
    match dispatch(&cli, out).and_then(|_| out.flush().map_err(|e| CliError::Io(e.to_string()))) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let (CliError::Usage(msg) | CliError::Io(msg)) = &e;
            eprintln!("polarlat: {msg}");
            e.exit_code()
        }
    }
}
