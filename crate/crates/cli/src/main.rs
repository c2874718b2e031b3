//! Command-line front end for the advection-diffusion solver library.
//!
//! Subcommands map one-to-one onto the library layers: `solve-analytic`
//! (Fourier series), `solve-fdm` (explicit FTCS), `compare` (error report),
//! `pollutants` (registry table), `split-domain` (piecewise diffusivity),
//! and `converge` (refinement study). All file output is deterministic:
//! the same arguments and config produce byte-identical files.

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use advdiff::analysis::{
    builtin_registry, convergence_study, parse_registry, pointwise_error, pollutant_table,
    AnalysisError,
};
use advdiff::analytic::{closed_form_reference, AnalyticError, SeriesSolution};
use advdiff::fdm::{
    check_stability, ftcs_coefficients, solve_ftcs, solve_ftcs_piecewise, AdvectionStencil,
    FdmError,
};
use advdiff::model::{
    build_grid, parse_scenario, validate_scenario, Diffusivity, InitialCondition, ModelError,
    ScenarioSpec, SolutionSurface, UniformGrid, ValidatedScenario,
};
use advdiff::report::{
    write_profile_svg, write_profiles_csv, write_surface_csv, ProfileSeries, ReportError,
};

#[derive(Parser)]
#[command(name = "advdiff", version, about = "1-D advection-diffusion solver laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the Fourier-series solution on a grid
    SolveAnalytic(SolveAnalyticArgs),
    /// March the explicit FTCS scheme on a grid
    SolveFdm(SolveFdmArgs),
    /// Compare the FTCS solution against the analytic reference
    Compare(CompareArgs),
    /// Tabulate decay rates and scheme coefficients per pollutant
    Pollutants(PollutantsArgs),
    /// Solve with piecewise diffusivity split at the domain midpoint
    SplitDomain(SplitDomainArgs),
    /// Run a spatial refinement study at fixed alpha
    Converge(ConvergeArgs),
}

#[derive(Args)]
struct GridArgs {
    /// Scenario config JSON (defaults to the built-in worked example)
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Number of spatial steps
    #[arg(short = 'M', value_name = "M")]
    space_steps: Option<usize>,
    /// Number of time steps
    #[arg(short = 'N', value_name = "N")]
    time_steps: Option<usize>,
    /// Output directory for CSV/SVG files
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct SolveAnalyticArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Series truncation
    #[arg(long, value_name = "K", default_value_t = 64)]
    terms: usize,
}

#[derive(Args)]
struct SolveFdmArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Advection stencil
    #[arg(long, default_value = "forward")]
    stencil: AdvectionStencil,
    /// March even when the stability check fails
    #[arg(long)]
    unsafe_override: bool,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value = "forward")]
    stencil: AdvectionStencil,
    /// Series truncation for the reference when the initial condition is
    /// not a pure sine mode
    #[arg(long, value_name = "K", default_value_t = 64)]
    terms: usize,
    /// March even when the stability check fails
    #[arg(long)]
    unsafe_override: bool,
}

#[derive(Args)]
struct PollutantsArgs {
    /// Pollutant registry JSON (defaults to the built-in four-gas registry)
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Also report decay rates computed with pi = 3.14
    #[arg(long)]
    paper_pi: bool,
    #[arg(short = 'M', value_name = "M", default_value_t = 5)]
    space_steps: usize,
    #[arg(short = 'N', value_name = "N", default_value_t = 5)]
    time_steps: usize,
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct SplitDomainArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value = "forward")]
    stencil: AdvectionStencil,
    /// March even when the stability check fails
    #[arg(long)]
    unsafe_override: bool,
}

#[derive(Args)]
struct ConvergeArgs {
    /// Scenario config JSON (defaults to a diffusion-only study scenario)
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, default_value = "forward")]
    stencil: AdvectionStencil,
    /// Target alpha = D dt / dx^2 held fixed across levels
    #[arg(long, default_value_t = 0.25)]
    alpha: f64,
    /// Comma-separated spatial step counts, coarsest first
    #[arg(long, value_name = "M1,M2,...", default_value = "10,20,40", value_delimiter = ',')]
    levels: Vec<usize>,
}

#[derive(Debug)]
enum CliError {
    Model(ModelError),
    Analytic(AnalyticError),
    Fdm(FdmError),
    Analysis(AnalysisError),
    Report(ReportError),
    Io(std::io::Error),
    Domain(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Model(e) => write!(f, "{e}"),
            CliError::Analytic(e) => write!(f, "{e}"),
            CliError::Fdm(e) => write!(f, "{e}"),
            CliError::Analysis(e) => write!(f, "{e}"),
            CliError::Report(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Domain(msg) => write!(f, "{msg}"),
        }
    }
}

macro_rules! from_error {
    ($variant:ident, $ty:ty) => {
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::$variant(e)
            }
        }
    };
}

from_error!(Model, ModelError);
from_error!(Analytic, AnalyticError);
from_error!(Fdm, FdmError);
from_error!(Analysis, AnalysisError);
from_error!(Report, ReportError);
from_error!(Io, std::io::Error);

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::SolveAnalytic(args) => solve_analytic(args),
        Command::SolveFdm(args) => solve_fdm(args),
        Command::Compare(args) => compare(args),
        Command::Pollutants(args) => pollutants(args),
        Command::SplitDomain(args) => split_domain(args),
        Command::Converge(args) => converge(args),
    }
}

/// The worked example: D = 3.6e-3 m^2/hr, u = 3.6e-4 m/hr, unit domain and
/// horizon, first sine mode.
fn default_scenario() -> ValidatedScenario {
    validate_scenario(ScenarioSpec::uniform(
        3.6e-3,
        3.6e-4,
        1.0,
        1.0,
        InitialCondition::SineMode { n: 1 },
    ))
    .expect("default scenario is valid")
}

/// Ammonia on the left half, sulphur dioxide on the right, over two hours.
fn default_split_scenario() -> ValidatedScenario {
    validate_scenario(ScenarioSpec::piecewise(
        7.92e-2,
        4.68e-2,
        3.6e-4,
        1.0,
        2.0,
        InitialCondition::SineMode { n: 1 },
    ))
    .expect("default split scenario is valid")
}

fn load_scenario(
    config: &Option<PathBuf>,
    fallback: fn() -> ValidatedScenario,
) -> Result<ValidatedScenario, CliError> {
    match config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            Ok(parse_scenario(&text)?)
        }
        None => Ok(fallback()),
    }
}

fn make_grid(scenario: &ValidatedScenario, args: &GridArgs, default_m: usize, default_n: usize) -> Result<UniformGrid, CliError> {
    let m = args.space_steps.unwrap_or(default_m);
    let n = args.time_steps.unwrap_or(default_n);
    Ok(build_grid(scenario.length(), scenario.horizon(), m, n)?)
}

fn create_sink(dir: &Path, name: &str) -> Result<BufWriter<File>, CliError> {
    fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn require_uniform(scenario: &ValidatedScenario, context: &str) -> Result<f64, CliError> {
    scenario.diffusivity().as_uniform().ok_or_else(|| {
        CliError::Domain(format!(
            "{context} requires a uniform diffusivity; use split-domain for piecewise configs"
        ))
    })
}

fn solve_analytic(args: SolveAnalyticArgs) -> Result<(), CliError> {
    let scenario = load_scenario(&args.grid.config, default_scenario)?;
    require_uniform(&scenario, "solve-analytic")?;
    let grid = make_grid(&scenario, &args.grid, 5, 5)?;
    let series = SeriesSolution::for_scenario(&scenario, args.terms, 2048)?;

    let mut tail_bound = 0.0f64;
    let mut rows = Vec::with_capacity(grid.time_steps() + 1);
    for n in 0..=grid.time_steps() {
        let mut row = Vec::with_capacity(grid.space_steps() + 1);
        for m in 0..=grid.space_steps() {
            let v = series.evaluate(grid.x(m), grid.t(n))?;
            tail_bound = tail_bound.max(v.tail_bound);
            row.push(v.value);
        }
        rows.push(row);
    }
    let surface = SolutionSurface::new(grid, rows);

    let mut sink = create_sink(&args.grid.out, "series_surface.csv")?;
    write_surface_csv(&surface, &mut sink)?;
    sink.flush()?;
    println!(
        "wrote {} ({} terms, tail bound {:.3e})",
        args.grid.out.join("series_surface.csv").display(),
        series.truncation(),
        tail_bound
    );
    Ok(())
}

fn stability_summary(scenario: &ValidatedScenario, grid: &UniformGrid, stencil: AdvectionStencil) {
    let c = ftcs_coefficients(
        scenario.diffusivity().max(),
        scenario.velocity(),
        grid.dx(),
        grid.dt(),
    );
    let report = check_stability(c, stencil);
    println!(
        "alpha = {:.6}, beta = {:.6}, cell Peclet = {:.6}, {}",
        report.alpha,
        report.beta,
        report.cell_peclet,
        if report.stable { "stable" } else { "UNSTABLE" }
    );
}

fn solve_fdm(args: SolveFdmArgs) -> Result<(), CliError> {
    let scenario = load_scenario(&args.grid.config, default_scenario)?;
    require_uniform(&scenario, "solve-fdm")?;
    let grid = make_grid(&scenario, &args.grid, 5, 5)?;
    let surface = solve_ftcs(&scenario, &grid, args.stencil, args.unsafe_override)?;
    stability_summary(&scenario, &grid, args.stencil);

    let mut sink = create_sink(&args.grid.out, "fdm_surface.csv")?;
    write_surface_csv(&surface, &mut sink)?;
    sink.flush()?;
    println!("wrote {}", args.grid.out.join("fdm_surface.csv").display());
    for n in 0..=grid.time_steps() {
        let cells: Vec<String> = surface.row(n).iter().map(|v| format!("{v:.5}")).collect();
        println!("t = {:.3}: {}", grid.t(n), cells.join(" "));
    }
    Ok(())
}

fn compare(args: CompareArgs) -> Result<(), CliError> {
    let scenario = load_scenario(&args.grid.config, default_scenario)?;
    require_uniform(&scenario, "compare")?;
    let grid = make_grid(&scenario, &args.grid, 5, 5)?;
    let surface = solve_ftcs(&scenario, &grid, args.stencil, args.unsafe_override)?;

    let report = match scenario.initial_condition() {
        InitialCondition::SineMode { .. } => {
            let sc = scenario.clone();
            pointwise_error(&surface, move |x, t| {
                closed_form_reference(x, t, &sc).expect("reference in domain")
            })
        }
        InitialCondition::Samples { .. } => {
            let series = SeriesSolution::for_scenario(&scenario, args.terms, 2048)?;
            pointwise_error(&surface, move |x, t| {
                series.evaluate(x, t).expect("reference in domain").value
            })
        }
    };

    let mut sink = create_sink(&args.grid.out, "errors.csv")?;
    writeln!(sink, "x,t,exact,approx,abs_error,percent_error")?;
    for s in &report.samples {
        let percent = s
            .percent_error
            .map_or(String::new(), |p| format!("{p:.6}"));
        writeln!(
            sink,
            "{},{},{:.9},{:.9},{:.3e},{}",
            s.x, s.t, s.exact, s.approx, s.abs_error, percent
        )?;
    }
    sink.flush()?;

    println!("sup-norm error: {:.6e}", report.sup_norm);
    // Nodes quoted in the published error discussion, when they fall on
    // this grid.
    for (x, t) in [(0.2, 0.2), (0.4, 0.6), (0.6, 0.6), (0.8, 0.8)] {
        if let Some(s) = report.at(x, t) {
            let percent = s
                .percent_error
                .map_or(String::from("n/a"), |p| format!("{p:.4}%"));
            println!("node ({x}, {t}): |error| = {:.6e} ({percent})", s.abs_error);
        }
    }
    println!("wrote {}", args.grid.out.join("errors.csv").display());
    Ok(())
}

fn pollutants(args: PollutantsArgs) -> Result<(), CliError> {
    let registry = match &args.config {
        Some(path) => parse_registry(&fs::read_to_string(path)?)?,
        None => builtin_registry(),
    };
    let grid = build_grid(1.0, 1.0, args.space_steps, args.time_steps)?;
    let rows = pollutant_table(&registry, 1.0, &grid, args.paper_pi)?;

    let mut sink = create_sink(&args.out, "pollutants.csv")?;
    writeln!(
        sink,
        "name,diffusivity,velocity,decay_rate,decay_rate_pi_3_14,alpha,beta,closed_form"
    )?;
    for row in &rows {
        let pi314 = row
            .decay_paper_pi
            .map_or(String::new(), |d| format!("{:.5}", d.rate()));
        writeln!(
            sink,
            "{},{},{},{:.6},{},{:.3},{:.5},{}",
            row.name,
            row.diffusivity,
            row.velocity,
            row.decay.rate(),
            pi314,
            row.coefficients.alpha,
            row.coefficients.beta,
            row.label
        )?;
    }
    sink.flush()?;

    for row in &rows {
        let pi314 = row
            .decay_paper_pi
            .map_or(String::new(), |d| format!(" (pi=3.14: {:.5})", d.rate()));
        println!(
            "{:<24} D = {:.3e}  decay = {:.6}{}  alpha = {:.3}  beta = {:.5}  {}",
            row.name,
            row.diffusivity,
            row.decay.rate(),
            pi314,
            row.coefficients.alpha,
            row.coefficients.beta,
            row.label
        );
    }
    println!("wrote {}", args.out.join("pollutants.csv").display());
    Ok(())
}

fn split_domain(args: SplitDomainArgs) -> Result<(), CliError> {
    let scenario = load_scenario(&args.grid.config, default_split_scenario)?;
    let default_n = ((scenario.horizon() * 100.0).round() as usize).max(1);
    let grid = make_grid(&scenario, &args.grid, 20, default_n)?;
    let surface = solve_ftcs_piecewise(&scenario, &grid, args.stencil, args.unsafe_override)?;
    stability_summary(&scenario, &grid, args.stencil);
    if let Diffusivity::Piecewise { left, right } = scenario.diffusivity() {
        println!("D = {left:.3e} on the left half, {right:.3e} on the right");
    }

    let mut sink = create_sink(&args.grid.out, "split_surface.csv")?;
    write_surface_csv(&surface, &mut sink)?;
    sink.flush()?;

    // Profiles at the standard report times that land on time nodes; fall
    // back to the final row for short horizons.
    let mut profiles = Vec::new();
    for target in [0.5, 1.0, 1.5, 2.0] {
        if target > scenario.horizon() + 1e-9 {
            continue;
        }
        let steps = target / grid.dt();
        let n = steps.round() as usize;
        if (steps - n as f64).abs() > 1e-9 || n > grid.time_steps() {
            continue;
        }
        let points: Vec<(f64, f64)> = surface
            .row(n)
            .iter()
            .enumerate()
            .map(|(m, v)| (grid.x(m), *v))
            .collect();
        profiles.push(ProfileSeries::new(format!("t={target}"), points)?);
    }
    if profiles.is_empty() {
        let n = grid.time_steps();
        let points: Vec<(f64, f64)> = surface
            .row(n)
            .iter()
            .enumerate()
            .map(|(m, v)| (grid.x(m), *v))
            .collect();
        profiles.push(ProfileSeries::new(format!("t={}", grid.t(n)), points)?);
    }

    let mut csv = create_sink(&args.grid.out, "split_profiles.csv")?;
    write_profiles_csv(&profiles, &mut csv)?;
    csv.flush()?;
    let mut svg = create_sink(&args.grid.out, "split_profiles.svg")?;
    write_profile_svg(&profiles, "x (m)", "C(x, t)", &mut svg)?;
    svg.flush()?;

    for p in &profiles {
        let (x, v) = p
            .points()
            .iter()
            .copied()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("profile has points");
        println!("{}: max C = {v:.6} at x = {x}", p.label());
    }
    println!(
        "wrote {}, {}, {}",
        args.grid.out.join("split_surface.csv").display(),
        args.grid.out.join("split_profiles.csv").display(),
        args.grid.out.join("split_profiles.svg").display()
    );
    Ok(())
}

/// Diffusion-only scenario whose alpha = 0.25 step counts are integers at
/// M = 10, 20, 40.
fn default_converge_scenario() -> ValidatedScenario {
    validate_scenario(ScenarioSpec::uniform(
        1e-2,
        0.0,
        1.0,
        1.0,
        InitialCondition::SineMode { n: 1 },
    ))
    .expect("default convergence scenario is valid")
}

fn converge(args: ConvergeArgs) -> Result<(), CliError> {
    let scenario = load_scenario(&args.config, default_converge_scenario)?;
    let report = convergence_study(&scenario, args.stencil, &args.levels, args.alpha)?;

    println!("{:>6} {:>8} {:>12} {:>12} {:>12} {:>8}", "M", "N", "dx", "alpha", "sup_error", "order");
    for (i, level) in report.levels.iter().enumerate() {
        let order = i
            .checked_sub(1)
            .and_then(|j| report.orders[j])
            .map_or(String::from("-"), |o| format!("{o:.3}"));
        println!(
            "{:>6} {:>8} {:>12.6} {:>12.6} {:>12.4e} {:>8}",
            level.space_steps, level.time_steps, level.dx, level.alpha_effective, level.sup_error, order
        );
    }
    Ok(())
}
