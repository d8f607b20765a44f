//! Command-line front end: instance generation, solver invocation, oracle
//! verification, calibration sweeps, and reproducible experiment runs.
//!
//! Everything is JSON in, JSON out, fully determined by the `--seed` value.
//! Exit codes: 0 success, 2 precondition, 3 budget, 4 verification failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use latq::exec::Mode;
use latq::experiment::{
    calibrate_cell, gen_bdd_instance, run_trials, verify_rect_certificate, verify_row,
    CalibrationCell, CellCalibration, SolverKind, TrialResult,
};
use latq::qsim::pcs::Backend;
use latq::reduction::sample::BddInstance;
use latq::reduction::solve::SolveOptions;

#[derive(Parser)]
#[command(name = "latq", about = "BDD experiments on periodic lattices", version)]
struct Cli {
    /// Worker threads for trial-level parallelism (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a planted BDD instance on a random q-ary lattice.
    Gen(GenArgs),
    /// Run a solver against an instance file.
    Solve(SolveArgs),
    /// Sweep ε₁ per parameter cell and record success thresholds.
    Calibrate(CalibrateArgs),
    /// Re-check a result file against its instance with the oracles.
    Verify(VerifyArgs),
    /// Print the ground-truth solution of an instance.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BackendArg {
    Auto,
    Dense,
    Gram,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Auto => Backend::Auto,
            BackendArg::Dense => Backend::Dense,
            BackendArg::Gram => Backend::Gram,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SolverArg {
    Poly,
    Tradeoff,
    Rect,
    Babai,
    Oracle,
}

#[derive(Args)]
struct GenArgs {
    /// Lattice dimension n.
    #[arg(long)]
    n: usize,
    /// Periodicity q.
    #[arg(long)]
    q: u64,
    /// Finite group rank r.
    #[arg(long)]
    r: usize,
    /// Promise parameter ε₁ (0 plants on the lattice).
    #[arg(long, default_value_t = 0.0)]
    eps1: f64,
    #[arg(long)]
    seed: u64,
    /// Output path for the instance JSON.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file produced by `gen`.
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    solver: SolverArg,
    /// Block parameter for the trade-off solver.
    #[arg(long)]
    beta: Option<usize>,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    /// Error-probability budget handed to the reduction.
    #[arg(long, default_value_t = 0.1)]
    p_err: f64,
    /// Fixed phase-register size override (log2).
    #[arg(long)]
    t_log2: Option<u32>,
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    backend: BackendArg,
    /// Output path for the result JSON.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CalibrateArgs {
    /// Family spec JSON (cells + sweep settings).
    #[arg(long)]
    spec: PathBuf,
    /// Output path for the calibration table.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Result file produced by `solve`.
    #[arg(long)]
    results: PathBuf,
    /// Optional report output path (stdout otherwise).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Result file schema.
#[derive(Serialize, Deserialize)]
struct ResultFile {
    instance: String,
    solver: String,
    beta: Option<usize>,
    trials: u64,
    seed: u64,
    p_err: f64,
    t_log2: Option<u32>,
    rows: Vec<TrialResult>,
}

/// Calibration family spec schema.
#[derive(Serialize, Deserialize)]
struct FamilySpec {
    cells: Vec<CalibrationCell>,
    /// Swept ε₁ values; defaults to a coarse log grid when omitted.
    eps1_grid: Option<Vec<f64>>,
    trials: u64,
    /// Success-rate target defining the threshold (default 0.9).
    target: Option<f64>,
    seed: u64,
    p_err: Option<f64>,
    t_log2: Option<u32>,
}

/// Calibration table schema (versioned).
#[derive(Serialize, Deserialize)]
struct CalibrationTable {
    version: u32,
    seed: u64,
    trials: u64,
    target: f64,
    cells: Vec<CellCalibration>,
}

#[derive(Serialize)]
struct VerifyReport {
    results: String,
    rows: Vec<VerifyRowReport>,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyRowReport {
    trial: u64,
    pass: bool,
    violations: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        std::env::set_var("RAYON_NUM_THREADS", cli.jobs.to_string());
    }
    let outcome = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Calibrate(args) => cmd_calibrate(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Oracle(args) => cmd_oracle(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = e
                .downcast_ref::<latq::Error>()
                .map(|le| le.exit_code())
                .unwrap_or(2);
            ExitCode::from(code as u8)
        }
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn cmd_gen(args: GenArgs) -> anyhow::Result<ExitCode> {
    let mut rng = latq::rng::master(args.seed);
    let inst = gen_bdd_instance(args.n, args.r, args.q, args.eps1, &mut rng)?;
    write_json(&args.out, &inst)?;
    println!(
        "wrote instance n={} q={} r={} eps1={} to {}",
        args.n,
        args.q,
        inst.decomp.rank(),
        args.eps1,
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn solver_kind(arg: SolverArg, beta: Option<usize>) -> anyhow::Result<SolverKind> {
    Ok(match arg {
        SolverArg::Poly => SolverKind::Poly,
        SolverArg::Tradeoff => SolverKind::Tradeoff {
            beta: beta.ok_or_else(|| anyhow::anyhow!("--beta required for tradeoff"))?,
        },
        SolverArg::Rect => SolverKind::Rect,
        SolverArg::Babai => SolverKind::Babai,
        SolverArg::Oracle => SolverKind::Oracle,
    })
}

fn cmd_solve(args: SolveArgs) -> anyhow::Result<ExitCode> {
    let inst: BddInstance = read_json(&args.instance)?;
    let solver = solver_kind(args.solver, args.beta)?;
    let opts = SolveOptions {
        p_err: args.p_err,
        t_log2: args.t_log2,
        backend: args.backend.into(),
        ..SolveOptions::default()
    };
    let rows = run_trials(&inst, solver, &opts, args.trials, args.seed, Mode::auto());
    let succeeded = rows.iter().filter(|r| r.error.is_none()).count();
    let correct = rows.iter().filter(|r| r.correct == Some(true)).count();
    let file = ResultFile {
        instance: args.instance.display().to_string(),
        solver: format!("{:?}", args.solver).to_lowercase(),
        beta: args.beta,
        trials: args.trials,
        seed: args.seed,
        p_err: args.p_err,
        t_log2: args.t_log2,
        rows,
    };
    write_json(&args.out, &file)?;
    println!(
        "{} trials: {} returned a vector, {} correct -> {}",
        args.trials,
        succeeded,
        correct,
        args.out.display()
    );
    if succeeded == 0 {
        // Every trial failed: propagate the first error's class.
        let code = file.rows.first().and_then(|r| r.error_code).unwrap_or(2);
        return Ok(ExitCode::from(code as u8));
    }
    Ok(ExitCode::SUCCESS)
}

fn default_grid() -> Vec<f64> {
    vec![
        0.3, 0.2, 0.12, 0.08, 0.05, 0.03, 0.02, 0.012, 0.008, 0.005, 0.003, 0.002, 0.001,
    ]
}

fn cmd_calibrate(args: CalibrateArgs) -> anyhow::Result<ExitCode> {
    let spec: FamilySpec = read_json(&args.spec)?;
    let grid = spec.eps1_grid.clone().unwrap_or_else(default_grid);
    let target = spec.target.unwrap_or(0.9);
    let opts = SolveOptions {
        p_err: spec.p_err.unwrap_or(0.1),
        t_log2: spec.t_log2,
        ..SolveOptions::default()
    };
    let mut cells = Vec::with_capacity(spec.cells.len());
    for (i, cell) in spec.cells.iter().enumerate() {
        let cal = calibrate_cell(
            cell,
            &grid,
            spec.trials,
            target,
            spec.seed.wrapping_add((i as u64) << 32),
            &opts,
            Mode::auto(),
        );
        println!(
            "cell n={} r={} q={} {:?}: eps1* = {} (rate {:.2})",
            cell.n, cell.r, cell.q, cell.solver, cal.eps1_threshold, cal.success_rate
        );
        cells.push(cal);
    }
    let table = CalibrationTable {
        version: 1,
        seed: spec.seed,
        trials: spec.trials,
        target,
        cells,
    };
    write_json(&args.out, &table)?;
    println!("wrote calibration table to {}", args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let file: ResultFile = read_json(&args.results)?;
    let inst: BddInstance = read_json(Path::new(&file.instance))?;
    let mut rows = Vec::with_capacity(file.rows.len());
    let mut all_pass = true;
    for row in &file.rows {
        let mut violations = verify_row(&inst, row);
        if file.solver == "rect" && row.vector.is_some() {
            let basis = inst.decomp.lift_lattice()?;
            violations.extend(verify_rect_certificate(&basis)?);
        }
        let pass = violations.is_empty();
        all_pass &= pass;
        rows.push(VerifyRowReport {
            trial: row.trial,
            pass,
            violations,
        });
    }
    let report = VerifyReport {
        results: args.results.display().to_string(),
        rows,
        pass: all_pass,
    };
    match &args.out {
        Some(path) => write_json(path, &report)?,
        None => println!("{}", serde_json::to_string_pretty(&report)?),
    }
    if all_pass {
        println!("verify: pass");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("verify: FAIL");
        Ok(ExitCode::from(4))
    }
}

fn cmd_oracle(args: OracleArgs) -> anyhow::Result<ExitCode> {
    let inst: BddInstance = read_json(&args.instance)?;
    let rows = run_trials(
        &inst,
        SolverKind::Oracle,
        &SolveOptions::default(),
        1,
        0,
        Mode::Sequential,
    );
    let row = &rows[0];
    let report = serde_json::json!({
        "vector": row.vector,
        "dist_sq": row.dist_sq.map(|d| d.to_string()),
        "matches_planted": row.correct,
    });
    match &args.out {
        Some(path) => write_json(path, &report)?,
        None => println!("{}", serde_json::to_string_pretty(&report)?),
    }
    Ok(ExitCode::SUCCESS)
}
