//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use compactvrp_core::moo::{MooError, RunResult};
use compactvrp_core::oracle::OracleTable;
use compactvrp_core::solver::{check_solution, Limits, SolveError};
use compactvrp_core::{
    enumerate_feasible_routes, epsilon_sweep, payoff_table, weighted_sum_sweep, EpsilonGrid, Instance, SweepReport,
};

use crate::clock::StdClock;
use crate::gen::{generate, GenError, GenParams, Profile};
use crate::io::{
    load_instance, read_check_input, read_front_csv, read_front_json, write_front_csv, write_front_json,
    write_instance, CheckInput, FormatError, FrontDoc,
};
use crate::plot::render_svg;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "compactvrp", version, about = "Exact bi-objective routing: travel time vs route compactness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Normalized weighted sum
    Wsum,
    /// Augmented epsilon-constraint
    Econ,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Grid {
    Uniform,
    Lattice,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args, Debug)]
struct Output {
    /// Output file. Without --format, solve and oracle write both PATH.json
    /// and PATH.csv.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a Pareto front with one of the two sweeps
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "econ")]
        method: Method,
        /// Grid points for the sweep
        #[arg(long, default_value_t = 10)]
        points: usize,
        /// Wall-clock budget per subproblem, in seconds
        #[arg(long, default_value_t = 1200.0, value_parser = parse_budget)]
        budget: f64,
        /// Solve every epsilon grid point
        #[arg(long)]
        no_bypass: bool,
        /// Epsilon grid layout
        #[arg(long, value_enum, default_value = "uniform")]
        grid: Grid,
        #[command(flatten)]
        output: Output,
    },
    /// Check a solution or every point of a front against all constraints
    Check { instance: PathBuf, solution: PathBuf },
    /// Exact front by exhaustive partition enumeration
    Oracle {
        instance: PathBuf,
        /// Largest customer count to accept
        #[arg(long, default_value_t = compactvrp_core::oracle::DEFAULT_GUARD)]
        guard: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Render a front file as SVG
    Plot {
        front: PathBuf,
        /// Second front drawn with square markers
        #[arg(long, value_name = "PATH")]
        overlay: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Generate a seeded synthetic instance
    Gen {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 9)]
        n: usize,
        #[arg(long, default_value = "clustered")]
        profile: Profile,
        /// Capacity as a fraction of total demand
        #[arg(long, default_value_t = 0.4)]
        cap_ratio: f64,
        /// Time limit as a multiple of the longest singleton route
        #[arg(long, default_value_t = 2.0)]
        time_ratio: f64,
        /// Largest random surcharge on travel times
        #[arg(long, default_value_t = 0)]
        asymmetry: u64,
        /// Fleet size (defaults to n)
        #[arg(long)]
        fleet: Option<usize>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

fn parse_budget(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err("budget must be a non-negative number of seconds".into())
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(EXIT_INTERNAL, format!("write failed: {e}"))
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::new(EXIT_VALIDATION, e.to_string())
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::new(EXIT_VALIDATION, format!("cannot read {}: {e}", path.display())))
}

fn read_instance(path: &Path) -> Result<Instance, Failure> {
    load_instance(&read(path)?).map_err(|e| Failure::new(EXIT_VALIDATION, format!("{}: {e}", path.display())))
}

fn read_front(path: &Path) -> Result<FrontDoc, Failure> {
    let bytes = read(path)?;
    let doc = if path.extension().is_some_and(|e| e == "csv") {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        read_front_csv(&bytes, &stem, "front")
    } else {
        read_front_json(&bytes)
    };
    doc.map_err(|e| Failure::new(EXIT_VALIDATION, format!("{}: {e}", path.display())))
}

/// Writes the front as requested. Returns true when it went to stdout.
fn emit_front(doc: &FrontDoc, output: &Output, out: &mut dyn Write) -> Result<bool, Failure> {
    match (&output.out, output.format) {
        (None, format) => {
            let text = match format.unwrap_or(Format::Json) {
                Format::Json => write_front_json(doc),
                Format::Csv => write_front_csv(doc),
            };
            out.write_all(text.as_bytes())?;
            Ok(true)
        }
        (Some(path), Some(Format::Json)) => {
            fs::write(path, write_front_json(doc))?;
            Ok(false)
        }
        (Some(path), Some(Format::Csv)) => {
            fs::write(path, write_front_csv(doc))?;
            Ok(false)
        }
        (Some(path), None) => {
            fs::write(path.with_extension("json"), write_front_json(doc))?;
            fs::write(path.with_extension("csv"), write_front_csv(doc))?;
            Ok(false)
        }
    }
}

fn write_or_print(path: &Option<PathBuf>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn summary(instance: &Instance, label: &str, report: &SweepReport) -> String {
    let mut s = String::new();
    let rows: [(&str, String); 7] = [
        ("instance", instance.name().to_string()),
        ("method", label.to_string()),
        ("points", report.front.len().to_string()),
        ("grid", report.grid_points_requested.to_string()),
        ("invocations", report.solver_invocations.to_string()),
        ("bypassed", report.bypassed.to_string()),
        ("duplicates", report.duplicates_discarded.to_string()),
    ];
    for (k, v) in rows {
        s.push_str(&format!("{k:<12} {v}\n"));
    }
    s.push_str("front:\n");
    for p in report.front.points() {
        s.push_str(&format!("  {:>8} {:>8}\n", p.f1, p.f2));
    }
    s
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    path: &Path,
    method: Method,
    points: usize,
    budget: f64,
    no_bypass: bool,
    grid: Grid,
    output: &Output,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let started = Instant::now();
    let instance = read_instance(path)?;
    let clock = StdClock::new();
    let limits = Limits::new(&clock, Some((budget * 1e6).round() as u64));
    let routes = enumerate_feasible_routes(&instance);
    writeln!(err, "time: route enumeration {} routes in {:.3} s", routes.len(), started.elapsed().as_secs_f64())?;

    let table = match payoff_table(&instance, &routes, &limits) {
        Ok(t) => t,
        Err(MooError::Infeasible) => {
            return Err(Failure::new(
                EXIT_INFEASIBLE,
                format!("{}: no feasible solution within fleet size {}", instance.name(), instance.fleet_size()),
            ))
        }
        Err(MooError::Solve(SolveError::BudgetExceeded { .. })) => {
            return Err(Failure::new(EXIT_BUDGET, "budget exhausted while building the payoff table; no front"))
        }
        Err(e) => return Err(Failure::new(EXIT_INTERNAL, e.to_string())),
    };
    let (name, label) = match method {
        Method::Wsum => ("wsum", "wsum".to_string()),
        Method::Econ => (
            "econ",
            format!(
                "econ ({} grid, bypass {})",
                match grid {
                    Grid::Uniform => "uniform",
                    Grid::Lattice => "lattice",
                },
                if no_bypass { "off" } else { "on" }
            ),
        ),
    };
    let sweep = match method {
        Method::Wsum => weighted_sum_sweep(&instance, &routes, &table, points, &limits),
        Method::Econ => {
            let g = match grid {
                Grid::Uniform => EpsilonGrid::Uniform,
                Grid::Lattice => EpsilonGrid::Lattice,
            };
            epsilon_sweep(&instance, &routes, &table, points, g, !no_bypass, &limits)
        }
    };
    let report = match sweep {
        Ok(r) => r,
        Err(MooError::GridTooSmall(q)) => {
            return Err(Failure::new(EXIT_VALIDATION, format!("--points must be at least 2, got {q}")))
        }
        Err(e) => return Err(Failure::new(EXIT_INTERNAL, e.to_string())),
    };

    for run in &report.runs {
        let what = match run.result {
            RunResult::Solved { f1, f2 } => format!("({f1}, {f2})"),
            RunResult::Infeasible => "infeasible".into(),
            RunResult::Bypassed => "bypassed".into(),
        };
        writeln!(err, "time: run {} {:?} -> {what} in {:.3} s", run.index, run.parameter, run.micros as f64 / 1e6)?;
    }
    let doc = FrontDoc::from_front(instance.name(), name, &report.front);
    let on_stdout = emit_front(&doc, output, out)?;
    let text = summary(&instance, &label, &report);
    if on_stdout {
        err.write_all(text.as_bytes())?;
    } else {
        out.write_all(text.as_bytes())?;
    }
    writeln!(err, "time: wall {:.3} s", started.elapsed().as_secs_f64())?;
    if let Some(e) = &report.aborted {
        writeln!(err, "warning: {e}; the front above is partial")?;
        return Ok(EXIT_BUDGET);
    }
    Ok(EXIT_OK)
}

fn cmd_check(instance: &Path, solution: &Path, out: &mut dyn Write) -> Result<i32, Failure> {
    let instance = read_instance(instance)?;
    let input = read_check_input(&read(solution)?)
        .map_err(|e| Failure::new(EXIT_VALIDATION, format!("{}: {e}", solution.display())))?;
    let candidates = match input {
        CheckInput::Solution(s) => vec![(None, s.to_candidate(&instance))],
        CheckInput::Front(f) => f
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| (Some(i), crate::io::candidate(&instance, &p.routes, p.f1, p.f2)))
            .collect(),
    };
    let mut all_pass = true;
    for (index, cand) in candidates {
        let prefix = index.map(|i| format!("point {i}: ")).unwrap_or_default();
        let verdict = check_solution(&instance, &cand);
        if verdict.passed() {
            writeln!(out, "{prefix}PASS")?;
        } else {
            all_pass = false;
            let families: Vec<&str> = verdict.families().iter().map(|f| f.label()).collect();
            writeln!(out, "{prefix}FAIL ({})", families.join(", "))?;
            for v in &verdict.violations {
                writeln!(out, "  {v}")?;
            }
        }
    }
    Ok(if all_pass { EXIT_OK } else { EXIT_INFEASIBLE })
}

fn cmd_oracle(path: &Path, guard: usize, output: &Output, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let started = Instant::now();
    let instance = read_instance(path)?;
    let table = OracleTable::build(&instance, guard).map_err(|e| Failure::new(EXIT_VALIDATION, e.to_string()))?;
    let front = table.front();
    let doc = FrontDoc::from_front(instance.name(), "oracle", &front);
    let on_stdout = emit_front(&doc, output, out)?;
    let text = format!(
        "{:<12} {}\n{:<12} {}\n{:<12} {}\n",
        "instance",
        instance.name(),
        "partitions",
        table.partitions_enumerated(),
        "points",
        front.len()
    );
    if on_stdout {
        err.write_all(text.as_bytes())?;
    } else {
        out.write_all(text.as_bytes())?;
    }
    writeln!(err, "time: wall {:.3} s", started.elapsed().as_secs_f64())?;
    if front.is_empty() {
        writeln!(err, "warning: no feasible solution within fleet size {}", instance.fleet_size())?;
        return Ok(EXIT_INFEASIBLE);
    }
    Ok(EXIT_OK)
}

fn cmd_plot(front: &Path, overlay: Option<&Path>, path: &Option<PathBuf>, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let doc = read_front(front)?;
    let over = overlay.map(read_front).transpose()?;
    if doc.points.is_empty() {
        writeln!(err, "warning: {} holds an empty front; plotting empty axes", front.display())?;
    }
    write_or_print(path, &render_svg(&doc, over.as_ref()), out)?;
    Ok(EXIT_OK)
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Solve {
            instance,
            method,
            points,
            budget,
            no_bypass,
            grid,
            output,
        } => cmd_solve(&instance, method, points, budget, no_bypass, grid, &output, out, err),
        Command::Check { instance, solution } => cmd_check(&instance, &solution, out),
        Command::Oracle { instance, guard, output } => cmd_oracle(&instance, guard, &output, out, err),
        Command::Plot { front, overlay, out: path } => cmd_plot(&front, overlay.as_deref(), &path, out, err),
        Command::Gen {
            seed,
            n,
            profile,
            cap_ratio,
            time_ratio,
            asymmetry,
            fleet,
            out: path,
        } => {
            let params = GenParams {
                seed,
                n,
                profile,
                cap_ratio,
                time_ratio,
                asymmetry,
                fleet,
            };
            let instance = generate(&params).map_err(|e: GenError| Failure::new(EXIT_VALIDATION, e.to_string()))?;
            write_or_print(&path, &write_instance(&instance), out)?;
            Ok(EXIT_OK)
        }
    }
}

/// Runs one command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
