//! `plp`: project polyhedra, solve parametric programs, and benchmark
//! the schedulers from the command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pplp::explore::{PlpSolution, RunStats, Scheduler};
use pplp::gen::{random_polyhedron, GenParams};
use pplp::io::{
    dot_tree, emit_polyhedron, parse_plp, parse_polyhedron, regions_json, stats_json, IoError,
};
use pplp::plp::{ParametricLP, PlpError, SolveConfig};
use pplp::poly::{project, PolyError, Polyhedron};
use pplp::rat::{parse_rat, rat_int, RatVec};

const EXIT_INPUT: u8 = 1;
const EXIT_GEOMETRY: u8 = 2;
const EXIT_UNBOUNDED: u8 = 3;

#[derive(Parser)]
#[command(name = "plp", version, about = "Parametric LP solving and polyhedral projection over exact rationals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Project a polyhedron onto a subset of its variables.
    Project(ProjectArgs),
    /// Solve a parametric LP and dump its regions.
    Solve(SolveArgs),
    /// Time an instance across schedulers and thread counts.
    Bench(BenchArgs),
    /// Generate a random full-dimensional instance.
    Gen(GenArgs),
}

#[derive(Args)]
struct CommonSolveArgs {
    /// seq, static or dynamic.
    #[arg(long, default_value = "seq")]
    scheduler: String,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Regions dump (JSON).
    #[arg(long)]
    regions: Option<PathBuf>,
    /// Spanning tree of the exploration (DOT).
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Run statistics (JSON).
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Renumber regions by basis key for diffable output.
    #[arg(long)]
    sort_output: bool,
    /// Repair-recursion cap per probe chain.
    #[arg(long)]
    repair_depth: Option<u32>,
    /// Probe step scale (a rational, e.g. 1/1024).
    #[arg(long)]
    epsilon: Option<String>,
    /// Bounding box |mu_i| <= B for facet and witness LPs.
    #[arg(long)]
    box_bound: Option<String>,
}

#[derive(Args)]
struct ProjectArgs {
    /// Input .poly file.
    #[arg(long = "in")]
    input: PathBuf,
    /// 1-based indices of the variables to eliminate, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    eliminate: Vec<usize>,
    /// Output .poly file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: CommonSolveArgs,
}

#[derive(Args)]
struct SolveArgs {
    /// Input .plp file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Initial parameter point, comma-separated rationals (all ones when
    /// omitted).
    #[arg(long, allow_hyphen_values = true)]
    seed_point: Option<String>,
    #[command(flatten)]
    common: CommonSolveArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Input .poly or .plp file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Thread counts to sweep, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
    sweep: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    /// Output CSV file.
    #[arg(long)]
    csv: PathBuf,
    /// Required for .poly inputs: variables to eliminate (1-based).
    #[arg(long, value_delimiter = ',')]
    eliminate: Vec<usize>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 6)]
    nvars: usize,
    #[arg(long, default_value_t = 12)]
    nrows: usize,
    /// Probability that a coefficient is nonzero.
    #[arg(long, default_value_t = 0.6)]
    density: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output .poly file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::init();
    // keep usage errors on exit code 1; --help/--version stay 0
    let cli = Cli::try_parse().unwrap_or_else(|e| {
        let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
        let _ = e.print();
        std::process::exit(code.into());
    });
    let result = match cli.command {
        Command::Project(args) => run_project(args),
        Command::Solve(args) => run_solve(args),
        Command::Bench(args) => run_bench(args),
        Command::Gen(args) => run_gen(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("plp: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<PlpError> for CliError {
    fn from(e: PlpError) -> Self {
        let code = match e {
            PlpError::UnboundedDirection => EXIT_UNBOUNDED,
            _ => EXIT_GEOMETRY,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        let code = match &e {
            PolyError::Solve(PlpError::UnboundedDirection) => EXIT_UNBOUNDED,
            _ => EXIT_GEOMETRY,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

fn solve_config(common: &CommonSolveArgs) -> Result<SolveConfig, CliError> {
    let mut config = SolveConfig::default();
    if let Some(depth) = common.repair_depth {
        config.repair_depth_cap = depth;
    }
    if let Some(text) = &common.epsilon {
        config.epsilon = parse_rat(text).map_err(CliError::input)?;
    }
    if let Some(text) = &common.box_bound {
        config.box_bound = parse_rat(text).map_err(CliError::input)?;
    }
    Ok(config)
}

fn scheduler_of(common: &CommonSolveArgs) -> Result<Scheduler, CliError> {
    if common.threads < 1 {
        return Err(CliError::input("--threads must be at least 1"));
    }
    Scheduler::parse(&common.scheduler)
        .ok_or_else(|| CliError::input(format!("unknown scheduler `{}`", common.scheduler)))
}

fn to_zero_based(nvars: usize, one_based: &[usize]) -> Result<Vec<usize>, CliError> {
    let mut out = Vec::with_capacity(one_based.len());
    for &v in one_based {
        if v == 0 || v > nvars {
            return Err(CliError::input(format!(
                "--eliminate index {v} out of range 1..={nvars}"
            )));
        }
        out.push(v - 1);
    }
    Ok(out)
}

fn write_or_print(path: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, content).map_err(CliError::from),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn write_solution_outputs(
    common: &CommonSolveArgs,
    solution: &mut PlpSolution,
) -> Result<(), CliError> {
    if common.sort_output {
        solution.sort_by_basis();
    }
    if let Some(path) = &common.regions {
        fs::write(path, regions_json(solution))?;
    }
    if let Some(path) = &common.dot {
        fs::write(path, dot_tree(solution))?;
    }
    if let Some(path) = &common.stats {
        fs::write(path, stats_json(&solution.stats))?;
    }
    Ok(())
}

fn empty_solution(scheduler: Scheduler, threads: usize) -> PlpSolution {
    PlpSolution {
        regions: Vec::new(),
        stats: RunStats {
            regions: 0,
            tasks_spawned: 0,
            tasks_completed: 0,
            tasks_aborted_covered: 0,
            tasks_aborted_basis: 0,
            retries: 0,
            repairs: 0,
            exact_fallbacks: 0,
            degenerate_regions: 0,
            wall_ms: 0.0,
            threads,
            scheduler: scheduler.name().to_string(),
        },
    }
}

fn run_project(args: ProjectArgs) -> Result<(), CliError> {
    let poly = parse_polyhedron(&read_input(&args.input)?)?;
    let eliminated = to_zero_based(poly.nvars(), &args.eliminate)?;
    let scheduler = scheduler_of(&args.common)?;
    let config = solve_config(&args.common)?;
    let output = project(&poly, &eliminated, scheduler, args.common.threads, &config)?;
    write_or_print(&args.out, &emit_polyhedron(&output.polyhedron))?;
    let mut solution = output
        .solution
        .unwrap_or_else(|| empty_solution(scheduler, args.common.threads));
    write_solution_outputs(&args.common, &mut solution)?;
    Ok(())
}

fn run_solve(args: SolveArgs) -> Result<(), CliError> {
    let plp = parse_plp(&read_input(&args.input)?)?;
    let d0 = match &args.seed_point {
        Some(text) => parse_seed_point(text, plp.param_count())?,
        None => vec![rat_int(1); plp.param_count()],
    };
    let scheduler = scheduler_of(&args.common)?;
    let config = solve_config(&args.common)?;
    let mut solution = pplp::explore::solve(&plp, d0, scheduler, args.common.threads, &config)?;
    if args.common.sort_output {
        solution.sort_by_basis();
    }
    match &args.common.regions {
        Some(path) => fs::write(path, regions_json(&solution))?,
        None => println!("{}", regions_json(&solution)),
    }
    if let Some(path) = &args.common.dot {
        fs::write(path, dot_tree(&solution))?;
    }
    if let Some(path) = &args.common.stats {
        fs::write(path, stats_json(&solution.stats))?;
    }
    Ok(())
}

fn parse_seed_point(text: &str, k: usize) -> Result<RatVec, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != k {
        return Err(CliError::input(format!(
            "--seed-point has {} entries, expected {k}",
            parts.len()
        )));
    }
    parts
        .iter()
        .map(|p| parse_rat(p).map_err(CliError::input))
        .collect()
}

enum BenchInstance {
    Poly(Polyhedron, Vec<usize>),
    Plp(Box<ParametricLP>),
}

fn run_bench(args: BenchArgs) -> Result<(), CliError> {
    let text = read_input(&args.input)?;
    let first_word = text
        .lines()
        .find_map(|l| l.split('#').next().unwrap_or("").split_whitespace().next())
        .unwrap_or("");
    let instance = match first_word {
        "poly" => {
            let poly = parse_polyhedron(&text)?;
            if args.eliminate.is_empty() {
                return Err(CliError::input(
                    "--eliminate is required to benchmark a .poly instance",
                ));
            }
            let eliminated = to_zero_based(poly.nvars(), &args.eliminate)?;
            BenchInstance::Poly(poly, eliminated)
        }
        "plp" => BenchInstance::Plp(Box::new(parse_plp(&text)?)),
        other => {
            return Err(CliError::input(format!(
                "unrecognized input header `{other}` (expected `poly` or `plp`)"
            )))
        }
    };
    if args.repeats == 0 {
        return Err(CliError::input("--repeats must be at least 1"));
    }
    if args.sweep.iter().any(|&t| t == 0) {
        return Err(CliError::input("thread counts in --sweep must be positive"));
    }
    let config = SolveConfig::default();
    let mut csv = String::from("scheduler,threads,run,wall_ms,regions\n");
    let mut cells: Vec<(Scheduler, usize)> = vec![(Scheduler::Sequential, 1)];
    for &threads in &args.sweep {
        cells.push((Scheduler::Static, threads));
        cells.push((Scheduler::Dynamic, threads));
    }
    for (scheduler, threads) in cells {
        let mut walls = Vec::with_capacity(args.repeats);
        let mut failed = false;
        for run in 0..args.repeats {
            let outcome: Result<PlpSolution, CliError> = match &instance {
                BenchInstance::Poly(poly, eliminated) => {
                    project(poly, eliminated, scheduler, threads, &config)
                        .map(|out| {
                            out.solution
                                .unwrap_or_else(|| empty_solution(scheduler, threads))
                        })
                        .map_err(CliError::from)
                }
                BenchInstance::Plp(plp) => {
                    let d0 = vec![rat_int(1); plp.param_count()];
                    pplp::explore::solve(plp, d0, scheduler, threads, &config)
                        .map_err(CliError::from)
                }
            };
            match outcome {
                Ok(solution) => {
                    csv.push_str(&format!(
                        "{},{},{},{:.3},{}\n",
                        scheduler.name(),
                        threads,
                        run,
                        solution.stats.wall_ms,
                        solution.stats.regions
                    ));
                    walls.push(solution.stats.wall_ms);
                }
                Err(e) => {
                    csv.push_str(&format!(
                        "{},{},{},failed,{}\n",
                        scheduler.name(),
                        threads,
                        run,
                        e.message.replace(',', ";")
                    ));
                    failed = true;
                }
            }
        }
        if !walls.is_empty() {
            let mean = walls.iter().sum::<f64>() / walls.len() as f64;
            let var = walls.iter().map(|w| (w - mean).powi(2)).sum::<f64>() / walls.len() as f64;
            csv.push_str(&format!(
                "{},{},mean,{:.3},\n",
                scheduler.name(),
                threads,
                mean
            ));
            csv.push_str(&format!(
                "{},{},stddev,{:.3},\n",
                scheduler.name(),
                threads,
                var.sqrt()
            ));
        }
        if failed {
            log::warn!(
                "bench cell {}x{} had failed runs",
                scheduler.name(),
                threads
            );
        }
    }
    fs::write(&args.csv, csv)?;
    Ok(())
}

fn run_gen(args: GenArgs) -> Result<(), CliError> {
    if args.nvars == 0 || args.nrows == 0 {
        return Err(CliError::input("--nvars and --nrows must be positive"));
    }
    let poly = random_polyhedron(&GenParams {
        nvars: args.nvars,
        nrows: args.nrows,
        density: args.density,
        seed: args.seed,
    });
    write_or_print(&args.out, &emit_polyhedron(&poly))
}
