//! Command-line front end: dataset generation, statistic evaluation,
//! approximating-set inspection, boundary and tail-bound tables, simulated
//! critical values, power sweeps, and empirical tail-bound verification.
//!
//! Every file the tool writes opens with `# key=value` lines recording the
//! parameters and seed that produced it, so outputs reproduce themselves.
//! Exits are coded: 2 for bad arguments or inputs, 3 for infeasible
//! configurations, 4 for a tripped resource guard.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::Error;
use crate::io;
use crate::mc::{self, BoundCheck, CritValue, StatSpec, VerifyParams};
use crate::models::{self, ModelParams, Regime, SignalConfig};
use crate::regions::{
    build_ball_levels, build_interval_levels, build_rectangle_levels, ApproxLevel, Region, Shape,
};
use crate::structured::{Evaluator, Family};
use crate::theory::{self, BoundaryResult};
use crate::Result;

/// Desk-scale defaults keep every subcommand interactive on one core; the
/// --full profile switches to the slow reference scale.
const DESK_N: usize = 4096;
const FULL_N: usize = 10_000;
const DESK_NULL_REPS: usize = 2000;
const FULL_NULL_REPS: usize = 10_000;
const DESK_POWER_REPS: usize = 500;
const FULL_POWER_REPS: usize = 2000;

#[derive(Parser)]
#[command(
    name = "blockscan",
    version,
    about = "Multiscale detection of block-structured signals in Gaussian noise"
)]
struct Cli {
    /// Worker threads for simulation (default: BLOCKSCAN_WORKERS or all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a block-signal dataset (CSV plus a JSON truth sidecar)
    Gen(GenArgs),
    /// Summarize an approximating set per level as CSV
    Approx(ApproxArgs),
    /// Evaluate statistics on a dataset, one JSON line each
    Stat(StatArgs),
    /// Print detection-boundary or tail-bound tables as CSV
    Bounds(BoundsArgs),
    /// Simulate null critical values into a CSV table
    Critval(CritvalArgs),
    /// Estimate rejection rates over a signal-strength sweep
    Power(PowerArgs),
    /// Check the analytic tail bounds against simulation
    Verify(VerifyArgs),
    /// Test a dataset against a critical value and report the verdict
    Detect(DetectArgs),
}

/// Entry point for the binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    configure_workers(cli.workers)?;
    match cli.command {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Approx(a) => cmd_approx(a),
        Cmd::Stat(a) => cmd_stat(a),
        Cmd::Bounds(a) => cmd_bounds(a),
        Cmd::Critval(a) => cmd_critval(a),
        Cmd::Power(a) => cmd_power(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Detect(a) => cmd_detect(a),
    }
}

fn configure_workers(flag: Option<usize>) -> Result<()> {
    let workers = match flag {
        Some(w) => Some(w),
        None => match std::env::var("BLOCKSCAN_WORKERS") {
            Ok(s) => Some(s.trim().parse::<usize>().map_err(|_| {
                Error::parse(format!("BLOCKSCAN_WORKERS='{s}' is not a worker count"))
            })?),
            Err(_) => None,
        },
    };
    if let Some(w) = workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| Error::config(format!("worker pool: {e}")))?;
    }
    Ok(())
}

/// Model exponents shared by `gen` and `power`.
#[derive(Args)]
struct ModelArgs {
    /// Grid dimension: 1 or 2
    #[arg(long, default_value_t = 1)]
    d: usize,

    /// Block shape: interval, rect or ball (default: the dimension's first)
    #[arg(long)]
    shape: Option<String>,

    /// Block size exponent; blocks hold about n^(d*alpha) cells
    #[arg(long)]
    alpha: f64,

    /// Sparsity exponent; about n^(d*(1-alpha-beta)) blocks carry signal
    #[arg(long)]
    beta: f64,

    /// Calibration regime: sparse, dense or auto
    #[arg(long, default_value = "auto")]
    regime: String,

    /// Block placement: free_disjoint or grid_aligned
    #[arg(long, default_value = "free_disjoint")]
    placement: String,
}

impl ModelArgs {
    fn shape(&self) -> Result<Shape> {
        match &self.shape {
            Some(s) => s.parse(),
            None => Ok(if self.d == 2 {
                Shape::Rect
            } else {
                Shape::Interval
            }),
        }
    }

    fn to_params(&self, n: usize, r: f64, seed: u64) -> Result<ModelParams> {
        let regime = match self.regime.as_str() {
            "auto" => Regime::auto(self.alpha, self.beta),
            other => other.parse()?,
        };
        Ok(ModelParams {
            n,
            d: self.d,
            shape: self.shape()?,
            alpha: self.alpha,
            beta: self.beta,
            regime,
            r,
            placement: self.placement.parse()?,
            seed,
        })
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    model: ModelArgs,

    /// Grid side length
    #[arg(long, default_value_t = DESK_N)]
    n: usize,

    /// Signal strength exponent
    #[arg(long)]
    r: f64,

    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Output CSV path; the truth sidecar lands next to it
    #[arg(long)]
    out: PathBuf,
}

fn cmd_gen(args: GenArgs) -> Result<()> {
    let config = SignalConfig::new(args.model.to_params(args.n, args.r, args.seed)?)?;
    let ds = models::generate(&config)?;
    io::write_dataset(&args.out, &ds)?;
    println!(
        "wrote {} (+ sidecar): n={} d={} shape={} m={} block_cells={} mu={:.6}",
        args.out.display(),
        config.n(),
        config.d(),
        config.shape(),
        config.m(),
        config.block_cells(),
        config.mu()
    );
    Ok(())
}

#[derive(Args)]
struct ApproxArgs {
    /// Grid side length
    #[arg(long, default_value_t = DESK_N)]
    n: usize,

    /// Region shape: interval, rect or ball
    #[arg(long, default_value = "interval")]
    shape: String,

    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_approx(args: ApproxArgs) -> Result<()> {
    let shape: Shape = args.shape.parse()?;
    let levels = build_levels_for(shape, args.n)?;
    let mut text = io::table_header(&[
        ("command", "approx".into()),
        ("n", args.n.to_string()),
        ("shape", shape.to_string()),
    ]);
    text.push_str("level,epsilon,grid_step,n_ell,i_max,min_group,max_group\n");
    for lv in &levels {
        let sizes = lv.group_sizes();
        let min = sizes.iter().min().copied().unwrap_or(0);
        let max = sizes.iter().max().copied().unwrap_or(0);
        writeln!(
            text,
            "{},{},{},{},{},{min},{max}",
            lv.level,
            lv.epsilon,
            lv.grid_step,
            lv.n_regions(),
            lv.i_max()
        )
        .expect("string write");
    }
    emit(args.out.as_deref(), &text)
}

#[derive(Args)]
struct StatArgs {
    /// Dataset CSV (one value per line, or n row-major columns for d = 2)
    #[arg(long)]
    input: PathBuf,

    /// Statistic: shc, shc+, sbj, ss:<s>, hc, bj, pn or pnapp (repeatable)
    #[arg(long = "family", value_delimiter = ',', required = true)]
    families: Vec<String>,

    /// Approximating-set shape for 2-d grids: rect or ball
    #[arg(long)]
    shape: Option<String>,

    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_stat(args: StatArgs) -> Result<()> {
    let grid = io::read_dataset(&args.input)?;
    let families = parse_families(&args.families)?;
    let shape = resolve_shape(grid.dim(), args.shape.as_deref())?;
    let levels = if families.iter().any(|f| f.needs_levels()) {
        build_levels_for(shape, grid.n())?
    } else {
        Vec::new()
    };
    let stats = Evaluator::new(&levels).eval_many(&grid, &families)?;
    let mut lines = String::new();
    for sv in &stats {
        writeln!(
            lines,
            "{}",
            serde_json::to_string(sv).expect("statistic serializes")
        )
        .expect("string write");
    }
    match &args.out {
        Some(path) => {
            let text = io::table_header(&[
                ("command", "stat".into()),
                ("input", args.input.display().to_string()),
                ("n", grid.n().to_string()),
                ("d", grid.dim().to_string()),
                ("shape", shape.to_string()),
            ]) + &lines;
            fs::write(path, text)?;
            println!("wrote {}", path.display());
        }
        None => print!("{lines}"),
    }
    Ok(())
}

#[derive(Args)]
struct BoundsArgs {
    /// Block size exponent(s) for a boundary table
    #[arg(long = "alpha", value_delimiter = ',')]
    alphas: Vec<f64>,

    /// Sparsity exponent(s) for a boundary table
    #[arg(long = "beta", value_delimiter = ',')]
    betas: Vec<f64>,

    /// Threshold(s) for a tail-bound table instead
    #[arg(long = "eta", value_delimiter = ',')]
    etas: Vec<f64>,

    /// Sample size entering the Berk-Jones and log-likelihood bounds
    #[arg(long, default_value_t = 1000)]
    n: u64,

    /// Log-factor constant of the Berk-Jones bound (any K > 1)
    #[arg(long, default_value_t = 2.0)]
    k_const: f64,

    /// Window for the bridge and log-likelihood bounds
    #[arg(long, default_value_t = 0.25)]
    a: f64,
    #[arg(long, default_value_t = 0.75)]
    b: f64,

    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_bounds(args: BoundsArgs) -> Result<()> {
    let have_ab = !args.alphas.is_empty() || !args.betas.is_empty();
    let have_eta = !args.etas.is_empty();
    if have_ab && have_eta {
        return Err(Error::parse(
            "give --alpha/--beta for a boundary table or --eta for a tail-bound table, not both",
        ));
    }

    if have_eta {
        let mut text = io::table_header(&[
            ("command", "bounds".into()),
            ("n", args.n.to_string()),
            ("k_const", args.k_const.to_string()),
            ("a", args.a.to_string()),
            ("b", args.b.to_string()),
        ]);
        text.push_str("eta,bound,value\n");
        for &eta in &args.etas {
            let bj = theory::bj_tail_bound(eta, args.n, args.k_const)?;
            let ll = theory::ks_loglik_bound(eta, args.a, args.b, args.n)?;
            let bb = theory::bb_sup_bound(eta, args.a, args.b)?;
            writeln!(text, "{eta},bj_iii,{bj}").expect("string write");
            writeln!(text, "{eta},loglik_ii,{ll}").expect("string write");
            writeln!(text, "{eta},bb_i,{bb}").expect("string write");
        }
        return emit(args.out.as_deref(), &text);
    }

    if args.alphas.is_empty() || args.betas.is_empty() {
        return Err(Error::parse(
            "need --alpha and --beta for a boundary table, or --eta for a tail-bound table",
        ));
    }
    let mut text = io::table_header(&[
        ("command", "bounds".into()),
        (
            "note",
            "rho_star_pen rows are omitted where beta/(1-alpha) = 1/2".into(),
        ),
    ]);
    text.push_str("alpha,beta,boundary,value,branch,scaling_exponent,note\n");
    for &alpha in &args.alphas {
        for &beta in &args.betas {
            let opt = theory::rho_star(alpha, beta)?;
            boundary_row(&mut text, alpha, beta, "rho_star", &opt);
            if let Ok(pen) = theory::rho_star_pen(alpha, beta) {
                boundary_row(&mut text, alpha, beta, "rho_star_pen", &pen);
            }
            let hc = theory::rho_star_unstructured_hc(alpha, beta)?;
            boundary_row(&mut text, alpha, beta, "rho_star_unstructured_hc", &hc);
        }
    }
    emit(args.out.as_deref(), &text)
}

fn boundary_row(text: &mut String, alpha: f64, beta: f64, name: &str, b: &BoundaryResult) {
    writeln!(
        text,
        "{alpha},{beta},{name},{},{},{},{}",
        b.rho_star, b.branch, b.scaling_exponent, b.note
    )
    .expect("string write");
}

#[derive(Args)]
struct CritvalArgs {
    /// Statistic: shc, shc+, sbj, ss:<s>, hc, bj, pn or pnapp (repeatable)
    #[arg(long = "family", value_delimiter = ',', required = true)]
    families: Vec<String>,

    /// Region shape the statistics scan: interval, rect or ball
    #[arg(long, default_value = "interval")]
    shape: String,

    /// Grid side length (4096, or 10000 with --full)
    #[arg(long)]
    n: Option<usize>,

    /// Null replicates (2000, or 10000 with --full)
    #[arg(long)]
    reps: Option<usize>,

    /// Significance level
    #[arg(long, default_value_t = 0.05)]
    level: f64,

    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Output table path
    #[arg(long)]
    out: PathBuf,

    /// Reference-scale defaults (slow)
    #[arg(long)]
    full: bool,
}

fn cmd_critval(args: CritvalArgs) -> Result<()> {
    let shape: Shape = args.shape.parse()?;
    let families = parse_families(&args.families)?;
    let specs = families
        .iter()
        .map(|&f| StatSpec::new(f, shape))
        .collect::<Result<Vec<_>>>()?;
    let n = args.n.unwrap_or(if args.full { FULL_N } else { DESK_N });
    let reps = args
        .reps
        .unwrap_or(if args.full { FULL_NULL_REPS } else { DESK_NULL_REPS });
    let reports = mc::simulate_null_many(&specs, n, reps, args.seed)?;
    let rows = reports
        .iter()
        .map(|rep| CritValue::from_report(rep, args.level))
        .collect::<Result<Vec<_>>>()?;
    let wall: f64 = reports.first().map_or(0.0, |r| r.wall_time);
    io::write_critvals(
        &args.out,
        &rows,
        &[
            ("command", "critval".into()),
            ("n", n.to_string()),
            ("shape", shape.to_string()),
            ("level", args.level.to_string()),
            ("reps", reps.to_string()),
            ("seed", args.seed.to_string()),
            ("wall_time", format!("{wall:.2}")),
        ],
    )?;
    println!(
        "wrote {} ({} statistics, {} replicates, {:.1}s)",
        args.out.display(),
        rows.len(),
        reps,
        wall
    );
    Ok(())
}

#[derive(Args)]
struct PowerArgs {
    #[command(flatten)]
    model: ModelArgs,

    /// Signal strength exponent(s) to sweep
    #[arg(long = "r", value_delimiter = ',', required = true)]
    rs: Vec<f64>,

    /// Statistic: shc, shc+, sbj, ss:<s>, hc, bj, pn or pnapp (repeatable)
    #[arg(long = "family", value_delimiter = ',', required = true)]
    families: Vec<String>,

    /// Grid side length (4096, or 10000 with --full)
    #[arg(long)]
    n: Option<usize>,

    /// Alternative replicates per sweep point (500, or 2000 with --full)
    #[arg(long)]
    reps: Option<usize>,

    /// Null replicates behind a fresh critical value (2000, or 10000 with --full)
    #[arg(long)]
    null_reps: Option<usize>,

    /// Significance level for fresh critical values
    #[arg(long, default_value_t = 0.05)]
    level: f64,

    /// Critical-value table from `critval`; simulated fresh when omitted
    #[arg(long)]
    critvals: Option<PathBuf>,

    /// Master seed of the alternative replicates
    #[arg(long, default_value_t = 2)]
    seed: u64,

    /// Master seed of the fresh null simulation
    #[arg(long, default_value_t = 1)]
    null_seed: u64,

    /// Reference-scale defaults (slow)
    #[arg(long)]
    full: bool,

    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_power(args: PowerArgs) -> Result<()> {
    let n = args.n.unwrap_or(if args.full { FULL_N } else { DESK_N });
    let shape = args.model.shape()?;
    let families = parse_families(&args.families)?;
    let specs = families
        .iter()
        .map(|&f| StatSpec::new(f, shape))
        .collect::<Result<Vec<_>>>()?;

    let (critvals, cv_source) = match &args.critvals {
        Some(path) => {
            let rows = io::read_critvals(path)?;
            let picked = specs
                .iter()
                .map(|spec| {
                    let name = spec.name();
                    rows.iter()
                        .find(|cv| cv.statistic == name)
                        .cloned()
                        .ok_or_else(|| {
                            Error::config(format!(
                                "{} has no critical value for {name}",
                                path.display()
                            ))
                        })
                })
                .collect::<Result<Vec<_>>>()?;
            (picked, path.display().to_string())
        }
        None => {
            let null_reps = args
                .null_reps
                .unwrap_or(if args.full { FULL_NULL_REPS } else { DESK_NULL_REPS });
            let reports = mc::simulate_null_many(&specs, n, null_reps, args.null_seed)?;
            let rows = reports
                .iter()
                .map(|rep| CritValue::from_report(rep, args.level))
                .collect::<Result<Vec<_>>>()?;
            (
                rows,
                format!("simulated: {null_reps} reps at seed {}", args.null_seed),
            )
        }
    };

    let reps = args
        .reps
        .unwrap_or(if args.full { FULL_POWER_REPS } else { DESK_POWER_REPS });
    let configs = args
        .rs
        .iter()
        .map(|&r| SignalConfig::new(args.model.to_params(n, r, args.seed)?))
        .collect::<Result<Vec<_>>>()?;
    let points = mc::power_curve(&configs, &specs, &critvals, reps, args.seed)?;

    let mut text = io::table_header(&[
        ("command", "power".into()),
        ("n", n.to_string()),
        ("d", args.model.d.to_string()),
        ("shape", shape.to_string()),
        ("alpha", args.model.alpha.to_string()),
        ("beta", args.model.beta.to_string()),
        ("regime", configs[0].params().regime.to_string()),
        ("placement", configs[0].params().placement.to_string()),
        (
            "families",
            specs
                .iter()
                .map(|s| s.name())
                .collect::<Vec<_>>()
                .join(" "),
        ),
        ("reps", reps.to_string()),
        ("seed", args.seed.to_string()),
        ("critical_values", cv_source),
    ]);
    text.push_str("r,statistic,power,se,exceed,reps\n");
    for p in &points {
        writeln!(
            text,
            "{},{},{},{},{},{}",
            p.r, p.statistic, p.power, p.se, p.exceed, p.reps
        )
        .expect("string write");
    }
    emit(args.out.as_deref(), &text)
}

#[derive(Args)]
struct VerifyArgs {
    /// Which bound to check: bj_iii, hc_iv, bb_i or loglik_ii
    #[arg(long)]
    which: String,

    /// Sample size per replicate (bb_i uses a fixed bridge grid instead)
    #[arg(long, default_value_t = 1000)]
    n: usize,

    #[arg(long, default_value_t = 10_000)]
    reps: usize,

    /// Threshold(s); defaults depend on the bound
    #[arg(long = "eta", value_delimiter = ',')]
    etas: Vec<f64>,

    /// Window for the bridge and log-likelihood checks
    #[arg(long, default_value_t = 0.25)]
    a: f64,
    #[arg(long, default_value_t = 0.75)]
    b: f64,

    /// Log-factor constant of the Berk-Jones bound (any K > 1)
    #[arg(long, default_value_t = 2.0)]
    k_const: f64,

    /// Floor constant of the higher-criticism envelope (any D > 2)
    #[arg(long, default_value_t = 3.0)]
    d_const: f64,

    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn default_etas(which: BoundCheck) -> Vec<f64> {
    match which {
        BoundCheck::BjIii => vec![4.0, 6.0, 8.0, 10.0],
        BoundCheck::LoglikIi => vec![5.0, 8.0, 12.0],
        BoundCheck::BbI => vec![2.0, 2.5, 3.0],
        BoundCheck::HcIv => vec![2.5, 3.0, 4.0],
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<()> {
    let which: BoundCheck = args.which.parse()?;
    let etas = if args.etas.is_empty() {
        default_etas(which)
    } else {
        args.etas.clone()
    };
    let params = VerifyParams {
        n: args.n,
        reps: args.reps,
        etas,
        a: args.a,
        b: args.b,
        k_const: args.k_const,
        d_const: args.d_const,
        seed: args.seed,
    };
    let report = mc::verify_tail_bound(which, &params)?;

    let mut header = vec![
        ("command", "verify".to_string()),
        ("which", report.which.clone()),
        ("n", report.n.to_string()),
        ("reps", report.reps.to_string()),
        ("seed", report.master_seed.to_string()),
        ("a", args.a.to_string()),
        ("b", args.b.to_string()),
        ("k_const", args.k_const.to_string()),
        ("d_const", args.d_const.to_string()),
        ("wall_time", format!("{:.2}", report.wall_time)),
    ];
    if let Some(c) = report.hc_constant {
        header.push(("hc_constant", c.to_string()));
    }
    let mut text = io::table_header(&header);
    text.push_str("eta,empirical,bound,sigma,pass\n");
    for row in &report.rows {
        writeln!(
            text,
            "{},{},{},{},{}",
            row.eta, row.empirical, row.bound, row.sigma, row.pass
        )
        .expect("string write");
    }
    emit(args.out.as_deref(), &text)
}

#[derive(Args)]
struct DetectArgs {
    /// Dataset CSV to test
    #[arg(long)]
    input: PathBuf,

    /// Statistic: shc, shc+, sbj, ss:<s>, hc, bj, pn or pnapp
    #[arg(long)]
    family: String,

    /// Approximating-set shape for 2-d grids: rect or ball
    #[arg(long)]
    shape: Option<String>,

    /// Critical-value table from `critval`; simulated fresh when omitted
    #[arg(long)]
    critvals: Option<PathBuf>,

    /// Significance level (default 0.05; with --critvals it must match the table)
    #[arg(long)]
    level: Option<f64>,

    /// Null replicates behind a fresh critical value (2000, or 10000 with --full)
    #[arg(long)]
    null_reps: Option<usize>,

    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Reference-scale defaults (slow)
    #[arg(long)]
    full: bool,
}

/// What `detect` prints: the statistic against its critical value, plus the
/// region behind the maximum when the scan has one.
#[derive(Serialize)]
struct Verdict {
    statistic: String,
    value: f64,
    critical_value: f64,
    reject: bool,
    maximizing_region: Option<Region>,
}

fn cmd_detect(args: DetectArgs) -> Result<()> {
    let grid = io::read_dataset(&args.input)?;
    let family: Family = args.family.parse()?;
    let shape = resolve_shape(grid.dim(), args.shape.as_deref())?;
    let spec = StatSpec::new(family, shape)?;

    let cv = match &args.critvals {
        Some(path) => {
            let name = spec.name();
            let row = io::read_critvals(path)?
                .into_iter()
                .find(|cv| cv.statistic == name)
                .ok_or_else(|| {
                    Error::config(format!(
                        "{} has no critical value for {name}",
                        path.display()
                    ))
                })?;
            // statistics are not portable across sample sizes
            if row.n != grid.n() {
                return Err(Error::config(format!(
                    "critical value simulated at n = {} cannot calibrate an n = {} dataset",
                    row.n,
                    grid.n()
                )));
            }
            if let Some(level) = args.level {
                if level != row.level {
                    return Err(Error::config(format!(
                        "critical-value table is at level {}, not {level}",
                        row.level
                    )));
                }
            }
            row
        }
        None => {
            let level = args.level.unwrap_or(0.05);
            let reps = args
                .null_reps
                .unwrap_or(if args.full { FULL_NULL_REPS } else { DESK_NULL_REPS });
            let report = mc::simulate_null(&spec, grid.n(), reps, args.seed)?;
            CritValue::from_report(&report, level)?
        }
    };

    let levels = if family.needs_levels() {
        build_levels_for(shape, grid.n())?
    } else {
        Vec::new()
    };
    let sv = Evaluator::new(&levels).eval(&grid, family)?;
    let verdict = Verdict {
        statistic: sv.name.clone(),
        value: sv.value,
        critical_value: cv.value,
        reject: sv.value > cv.value,
        maximizing_region: sv.region,
    };
    println!(
        "{}",
        serde_json::to_string(&verdict).expect("verdict serializes")
    );
    Ok(())
}

fn parse_families(raw: &[String]) -> Result<Vec<Family>> {
    raw.iter().map(|s| s.parse()).collect()
}

fn resolve_shape(dim: usize, flag: Option<&str>) -> Result<Shape> {
    let shape = match flag {
        Some(s) => s.parse::<Shape>()?,
        None => {
            return Ok(if dim == 2 { Shape::Rect } else { Shape::Interval });
        }
    };
    if shape.dim() != dim {
        return Err(Error::config(format!(
            "a {dim}-dimensional dataset cannot scan {shape} regions"
        )));
    }
    Ok(shape)
}

fn build_levels_for(shape: Shape, n: usize) -> Result<Vec<ApproxLevel>> {
    match shape {
        Shape::Interval => build_interval_levels(n),
        Shape::Rect => build_rectangle_levels(n, 2),
        Shape::Ball => build_ball_levels(n),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text)?;
            println!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}
