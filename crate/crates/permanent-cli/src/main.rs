//! `permanent` — exact matrix permanents and ensemble statistics.
//!
//! Subcommands: `compute` a permanent from a matrix file, `sample` an
//! ensemble into a sample file, `analyze` a sample file, `kstest` two
//! sample files against each other, and `bench` the kernels.
//!
//! Exit codes: 0 success, 2 unreadable or malformed input, 3 order or
//! window beyond an algorithm's limit, 4 inconsistent flags or any other
//! failed precondition.  Every command is deterministic under fixed
//! flags and `--seed`; with `PERM_CI=1` the randomized commands refuse
//! to run without one.

mod emit;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use permanent::ensembles::corpus;
use permanent::stats::DEFAULT_BOOTSTRAP_RESAMPLES;
use permanent::{
    collect_samples, compute_with, empirical_distribution, fit_polynomial, ks_test, moment,
    select_algorithm, AccumulationMode, Algorithm, EnsembleKind, EnsembleSpec, Error, Matrix,
    PermanentResult, Result, RngStream, SampleSet,
};

#[derive(Parser)]
#[command(
    name = "permanent",
    version,
    about = "Exact matrix permanents and ensemble statistics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the permanent of a matrix file.
    Compute(ComputeArgs),
    /// Draw ensemble matrices and write normalized permanent samples.
    Sample(SampleArgs),
    /// Estimate moments and the distribution of a sample file.
    Analyze(AnalyzeArgs),
    /// Compare two sample files with a two-sample KS test.
    Kstest(KstestArgs),
    /// Time the permanent kernels and report medians.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgorithmArg {
    Auto,
    Ryser,
    Naive,
    Repeated,
    Sparse,
    Band,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Plain,
    Compensated,
    Extended,
}

impl From<ModeArg> for AccumulationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Plain => AccumulationMode::Plain,
            ModeArg::Compensated => AccumulationMode::Compensated,
            ModeArg::Extended => AccumulationMode::Extended,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EnsembleArg {
    Gaussian,
    Circular,
    Bernoulli,
    UnitaryMinor,
}

impl From<EnsembleArg> for EnsembleKind {
    fn from(e: EnsembleArg) -> Self {
        match e {
            EnsembleArg::Gaussian => EnsembleKind::Gaussian,
            EnsembleArg::Circular => EnsembleKind::Circular,
            EnsembleArg::Bernoulli => EnsembleKind::Bernoulli,
            EnsembleArg::UnitaryMinor => EnsembleKind::UnitaryMinor,
        }
    }
}

#[derive(Args)]
struct ComputeArgs {
    /// Matrix file in the text format.
    #[arg(long)]
    matrix: PathBuf,
    /// Algorithm; `auto` picks from the matrix's structure.
    #[arg(long, value_enum, default_value = "auto")]
    algorithm: AlgorithmArg,
    /// Accumulation precision for the floating-point sums.
    #[arg(long, value_enum, default_value = "compensated")]
    mode: ModeArg,
    /// Worker threads; defaults to the hardware parallelism.
    #[arg(long)]
    threads: Option<usize>,
    /// Claimed bandwidth for `--algorithm band` (default: measured).
    #[arg(long)]
    band_width: Option<usize>,
    /// Seed for the sparse path's randomized partition search.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SampleArgs {
    /// Ensemble to draw from.
    #[arg(long, value_enum)]
    ensemble: EnsembleArg,
    /// Matrix order.
    #[arg(long)]
    n: usize,
    /// Host-dimension exponent (unitary-minor only): m = round(n^a).
    #[arg(long)]
    exponent: Option<f64>,
    /// Number of matrices to draw.
    #[arg(long)]
    samples: usize,
    /// Base seed; omitted outside CI, one is derived from the clock.
    #[arg(long)]
    seed: Option<u64>,
    /// Accumulation precision for the permanent evaluations.
    #[arg(long, value_enum, default_value = "compensated")]
    mode: ModeArg,
    /// Worker threads; defaults to the hardware parallelism.
    #[arg(long)]
    threads: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Sample file to analyze.
    #[arg(long)]
    input: PathBuf,
    /// Geometric grid density for the distribution.
    #[arg(long, default_value_t = permanent::stats::DEFAULT_PER_DECADE)]
    per_decade: usize,
    /// Bootstrap resamples behind each moment error bar.
    #[arg(long, default_value_t = DEFAULT_BOOTSTRAP_RESAMPLES)]
    resamples: usize,
    /// Bootstrap seed; omitted outside CI, one is derived from the clock.
    #[arg(long)]
    seed: Option<u64>,
    /// Fit F(x) by a polynomial of this degree over the small-x grid.
    #[arg(long)]
    fit_degree: Option<usize>,
    /// Largest x included in the fit window.
    #[arg(long)]
    fit_max_x: Option<f64>,
}

#[derive(Args)]
struct KstestArgs {
    /// First sample file.
    #[arg(long)]
    first: PathBuf,
    /// Second sample file.
    #[arg(long)]
    second: PathBuf,
    /// Significance level.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchSuite {
    /// Dense kernel across orders, with the log2-time slope.
    Dense,
    /// Banded kernel at two orders, with their time ratio.
    Band,
    /// Sparse kernel against the dense kernel at one order.
    Sparse,
    /// The three accumulation modes on one dense matrix.
    Modes,
}

#[derive(Args)]
struct BenchArgs {
    /// Which kernel family to time.
    #[arg(long, value_enum, default_value = "dense")]
    suite: BenchSuite,
    /// Smallest order (dense: default 16; band: default 200).
    #[arg(long)]
    min_n: Option<usize>,
    /// Largest order (dense: default 24; band: default 400; sparse/modes:
    /// the single order, default 24 and 20).
    #[arg(long)]
    max_n: Option<usize>,
    /// Order step for the dense suite.
    #[arg(long, default_value_t = 2)]
    step: usize,
    /// Timed repetitions per matrix; medians are reported.
    #[arg(long, default_value_t = 3)]
    reps: usize,
    /// Bandwidth for the band suite.
    #[arg(long, default_value_t = 2)]
    band_width: usize,
    /// Entry density for the sparse suite's Bernoulli-support matrix.
    #[arg(long, default_value_t = 0.01)]
    density: f64,
    /// Accumulation precision for every timed kernel.
    #[arg(long, value_enum, default_value = "compensated")]
    mode: ModeArg,
    /// Worker threads; defaults to the hardware parallelism.
    #[arg(long)]
    threads: Option<usize>,
    /// Matrix seed; omitted outside CI, one is derived from the clock.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Compute(args) => cmd_compute(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Kstest(args) => cmd_kstest(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Stable exit codes: unreadable/malformed input is 2, an order or
/// window beyond an algorithm's hard limit is 3, anything else
/// (inconsistent flags, failed preconditions) is 4.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. }
        | Error::Parse { .. }
        | Error::NotSquare { .. }
        | Error::NonFinite { .. }
        | Error::EmptyMatrix => 2,
        Error::OrderTooLarge { .. } | Error::BandWindowTooWide { .. } => 3,
        _ => 4,
    }
}

/// Sizes the global thread pool and returns the worker count used for
/// logical partitioning.  Later calls with a different size keep the
/// first pool, which is fine for a one-command process.
fn configure_threads(requested: Option<usize>) -> usize {
    let t = requested
        .or_else(|| std::thread::available_parallelism().ok().map(|v| v.get()))
        .unwrap_or(1)
        .max(1);
    let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    t
}

/// Resolves the seed for a randomized command: explicit wins; otherwise
/// CI mode refuses and interactive mode derives one from the clock (it
/// is echoed in the output so the run can be reproduced).
fn resolve_seed(seed: Option<u64>, command: &str) -> Result<u64> {
    if let Some(s) = seed {
        return Ok(s);
    }
    if std::env::var("PERM_CI").is_ok_and(|v| v == "1") {
        return Err(Error::InvalidArgument(format!(
            "PERM_CI=1 requires --seed on `{command}`"
        )));
    }
    let now = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .unwrap_or_default();
    Ok(now.as_nanos() as u64)
}

fn cmd_compute(args: ComputeArgs) -> Result<()> {
    if args.band_width.is_some() && args.algorithm != AlgorithmArg::Band {
        return Err(Error::InvalidArgument(
            "--band-width only applies to --algorithm band".to_string(),
        ));
    }
    let workers = configure_threads(args.threads) as u64;
    let a = Matrix::read_from(&args.matrix)?;
    let algorithm = match args.algorithm {
        AlgorithmArg::Auto => select_algorithm(&a),
        AlgorithmArg::Ryser => Algorithm::Ryser,
        AlgorithmArg::Naive => Algorithm::Naive,
        AlgorithmArg::Repeated => Algorithm::Repeated,
        AlgorithmArg::Sparse => Algorithm::Sparse,
        AlgorithmArg::Band => Algorithm::Band,
    };
    let r = compute_with(
        &a,
        algorithm,
        workers,
        args.mode.into(),
        args.seed,
        args.band_width,
    )?;
    print!("{}", render_compute(&r));
    Ok(())
}

fn render_compute(r: &PermanentResult) -> String {
    let mut w = emit::Object::new();
    w.float("value_re", r.value.re);
    w.float("value_im", r.value.im);
    w.string("algorithm", &r.algorithm.to_string());
    w.string("mode", &r.mode.to_string());
    w.integer("terms_evaluated", r.terms_evaluated);
    w.float("wall_seconds", r.wall_seconds);
    w.finish()
}

fn cmd_sample(args: SampleArgs) -> Result<()> {
    let seed = resolve_seed(args.seed, "sample")?;
    configure_threads(args.threads);
    let spec = EnsembleSpec::new(args.ensemble.into(), args.n, args.exponent, seed)?;
    let set = collect_samples(&spec, args.samples, args.mode.into())?;
    match &args.output {
        Some(path) => {
            set.write_to(path)?;
            eprintln!(
                "wrote {} samples (seed {seed}) to {}",
                set.count(),
                path.display()
            );
        }
        None => print!("{}", set.to_text()),
    }
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    let seed = resolve_seed(args.seed, "analyze")?;
    let set = SampleSet::read_from(&args.input)?;
    let rng = RngStream::new(seed, 0);
    let mut moments = Vec::new();
    for order in 1..=4 {
        moments.push(moment(&set, order, args.resamples, &rng.substream(order as u64))?);
    }
    let dist = empirical_distribution(&set, args.per_decade)?;

    let fit = match args.fit_degree {
        Some(degree) => {
            let max_x = args
                .fit_max_x
                .unwrap_or_else(|| *dist.grid().last().expect("grid is never empty"));
            let points: Vec<(f64, f64)> = dist
                .grid()
                .iter()
                .zip(dist.cdf())
                .filter(|&(&x, _)| x <= max_x)
                .map(|(&x, &f)| (x, f))
                .collect();
            Some((degree, max_x, fit_polynomial(&points, degree, true)?))
        }
        None => None,
    };

    let mut w = emit::Object::new();
    w.integer("seed", seed);
    w.string("ensemble", &set.spec().kind().to_string());
    w.integer("n", set.spec().n() as u64);
    w.integer("count", set.count() as u64);
    w.array_of_objects(
        "moments",
        moments.iter().map(|m| {
            let mut o = emit::Object::new();
            o.integer("order", m.order as u64);
            o.float("value", m.value);
            o.float("bootstrap_err", m.bootstrap_err);
            o
        }),
    );
    w.float_array("grid", dist.grid());
    w.float_array("F", dist.cdf());
    w.float_array("F_err", dist.cdf_err());
    w.float_array("f", dist.density());
    w.float_array("f_err", dist.density_err());
    match fit {
        Some((degree, max_x, r)) => {
            let mut o = emit::Object::new();
            o.integer("degree", degree as u64);
            o.float("max_x", max_x);
            o.float_array("coefficients", &r.coefficients);
            o.float_array("deletion_errors", &r.deletion_errors);
            w.object("fits", o);
        }
        None => w.null("fits"),
    }
    print!("{}", w.finish());
    Ok(())
}

fn cmd_kstest(args: KstestArgs) -> Result<()> {
    let first = SampleSet::read_from(&args.first)?;
    let second = SampleSet::read_from(&args.second)?;
    let r = ks_test(&first, &second, args.alpha)?;
    let mut w = emit::Object::new();
    w.float("D", r.statistic);
    w.float("D_alpha", r.threshold);
    w.float("alpha", r.alpha);
    w.boolean("reject", r.reject);
    print!("{}", w.finish());
    Ok(())
}

/// One timed row of benchmark output.
struct BenchRow {
    label: &'static str,
    n: usize,
    median_seconds: f64,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        0.5 * (xs[k / 2 - 1] + xs[k / 2])
    }
}

/// Median wall time of `reps` runs of `f`.
fn time_reps<F: FnMut() -> Result<()>>(reps: usize, mut f: F) -> Result<f64> {
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps {
        let started = Instant::now();
        f()?;
        times.push(started.elapsed().as_secs_f64());
    }
    Ok(median(times))
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    if args.reps == 0 || args.step == 0 {
        return Err(Error::InvalidArgument(
            "--reps and --step must be positive".to_string(),
        ));
    }
    let seed = resolve_seed(args.seed, "bench")?;
    let workers = configure_threads(args.threads) as u64;
    let mode: AccumulationMode = args.mode.into();
    let mut rng = RngStream::new(seed, 0);
    let mut rows: Vec<BenchRow> = Vec::new();
    let mut dense_slope = None;
    let mut band_ratio = None;
    let mut sparse_comparison = None;

    match args.suite {
        BenchSuite::Dense => {
            let lo = args.min_n.unwrap_or(16);
            let hi = args.max_n.unwrap_or(24);
            if lo < 2 || hi < lo {
                return Err(Error::InvalidArgument(format!(
                    "dense order range [{lo}, {hi}] is not usable"
                )));
            }
            let mut points = Vec::new();
            for n in (lo..=hi).step_by(args.step) {
                let a = corpus::gaussian_real(n, &mut rng);
                let t = time_reps(args.reps, || {
                    std::hint::black_box(permanent::permanent(&a, workers, mode)?);
                    Ok(())
                })?;
                rows.push(BenchRow {
                    label: "dense",
                    n,
                    median_seconds: t,
                });
                points.push((n as f64, t.max(f64::MIN_POSITIVE).log2()));
            }
            if points.len() >= 3 {
                dense_slope = Some(fit_polynomial(&points, 1, false)?.coefficients[1]);
            }
        }
        BenchSuite::Band => {
            let lo = args.min_n.unwrap_or(200);
            let hi = args.max_n.unwrap_or(400);
            let mut medians = Vec::new();
            for n in [lo, hi] {
                let a = corpus::banded_random(n, args.band_width, &mut rng);
                let t = time_reps(args.reps, || {
                    std::hint::black_box(permanent::band_permanent(&a, args.band_width)?);
                    Ok(())
                })?;
                rows.push(BenchRow {
                    label: "band",
                    n,
                    median_seconds: t,
                });
                medians.push(t);
            }
            band_ratio = Some(medians[1] / medians[0].max(f64::MIN_POSITIVE));
        }
        BenchSuite::Sparse => {
            let n = args.max_n.unwrap_or(24);
            if !(0.0..=1.0).contains(&args.density) {
                return Err(Error::InvalidArgument(format!(
                    "--density {} must lie in [0, 1]",
                    args.density
                )));
            }
            // Bernoulli support at the requested density; rows with no
            // entries legitimately short-circuit to an exact zero.
            let mut vals = vec![0.0f64; n * n];
            for v in vals.iter_mut() {
                if rng.uniform() < args.density {
                    *v = 0.5 + rng.uniform();
                }
            }
            let bernoulli = Matrix::from_real(n, &vals).expect("finite entries");
            let t_sparse = time_reps(args.reps, || {
                std::hint::black_box(compute_with(
                    &bernoulli,
                    Algorithm::Sparse,
                    workers,
                    mode,
                    seed,
                    None,
                )?);
                Ok(())
            })?;
            rows.push(BenchRow {
                label: "sparse-bernoulli",
                n,
                median_seconds: t_sparse,
            });

            // A full-support companion so the suite also times a
            // non-trivial enumeration.
            let structured = corpus::sparse_rows_matrix(n.min(24), 3, &mut rng);
            let t_structured = time_reps(args.reps, || {
                std::hint::black_box(compute_with(
                    &structured,
                    Algorithm::Sparse,
                    workers,
                    mode,
                    seed,
                    None,
                )?);
                Ok(())
            })?;
            rows.push(BenchRow {
                label: "sparse-structured",
                n: n.min(24),
                median_seconds: t_structured,
            });

            let dense_input = corpus::gaussian_real(n, &mut rng);
            let t_dense = time_reps(args.reps, || {
                std::hint::black_box(permanent::permanent(&dense_input, workers, mode)?);
                Ok(())
            })?;
            rows.push(BenchRow {
                label: "dense",
                n,
                median_seconds: t_dense,
            });
            sparse_comparison = Some((t_sparse, t_dense));
        }
        BenchSuite::Modes => {
            let n = args.max_n.unwrap_or(20);
            let a = corpus::gaussian_real(n, &mut rng);
            for (label, m) in [
                ("plain", AccumulationMode::Plain),
                ("compensated", AccumulationMode::Compensated),
                ("extended", AccumulationMode::Extended),
            ] {
                let t = time_reps(args.reps, || {
                    std::hint::black_box(permanent::permanent(&a, workers, m)?);
                    Ok(())
                })?;
                rows.push(BenchRow {
                    label,
                    n,
                    median_seconds: t,
                });
            }
        }
    }

    let suite = match args.suite {
        BenchSuite::Dense => "dense",
        BenchSuite::Band => "band",
        BenchSuite::Sparse => "sparse",
        BenchSuite::Modes => "modes",
    };
    let mut w = emit::Object::new();
    w.integer("seed", seed);
    w.string("suite", suite);
    w.integer("threads", workers);
    w.array_of_objects(
        "rows",
        rows.iter().map(|r| {
            let mut o = emit::Object::new();
            o.string("label", r.label);
            o.integer("n", r.n as u64);
            o.float("median_seconds", r.median_seconds);
            o
        }),
    );
    match dense_slope {
        Some(s) => w.float("dense_log2_slope", s),
        None => w.null("dense_log2_slope"),
    }
    match band_ratio {
        Some(r) => w.float("band_ratio", r),
        None => w.null("band_ratio"),
    }
    match sparse_comparison {
        Some((s, d)) => {
            let mut o = emit::Object::new();
            o.float("sparse_seconds", s);
            o.float("dense_seconds", d);
            o.boolean("sparse_faster", s < d);
            w.object("sparse_comparison", o);
        }
        None => w.null("sparse_comparison"),
    }
    print!("{}", w.finish());
    Ok(())
}
