use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bloch_steer::encoded::{DensityMatrix4, TwoQubitState};
use bloch_steer::propagator::DEFAULT_SAMPLES;
use bloch_steer::textfmt::c_exp;
use bloch_steer::{
    dfs_residual, evaluate_performance_numeric, fidelity_up_to_phase, integrate_rk4,
    plan_one_rotation, plan_three_rotation, schedule_from_json, schedule_to_json, simulate_encoded,
    simulate_master_equation, simulate_schedule, state_from_angles, BlochAngles, LindbladSpec,
    PerformanceReport, PulseShape, Schedule, Scheme,
};
use clap::{Args, Parser, Subcommand};
use thiserror::Error;

/// Transfers below this fidelity are reported as verification failures.
const FIDELITY_FLOOR: f64 = 1.0 - 1e-8;
/// Encoded runs additionally require the population outside the code space to stay below this.
const LEAKAGE_CEILING: f64 = 1e-10;

#[derive(Debug, Error)]
enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl From<bloch_steer::Error> for CliError {
    fn from(e: bloch_steer::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 2,
            CliError::Input(_) | CliError::Io(_) => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "bloch-steer", version, about = "Plan and verify pulse schedules that steer a qubit between Bloch states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Plan a schedule, verify it, and write schedule/trajectory/performance files.
    Plan(PlanArgs),
    /// Replay a schedule document from an initial state.
    Simulate(SimulateArgs),
    /// Plan with every pulse shape and list them ordered by J.
    Compare(PlanArgs),
    /// Tabulate the optimal cost for a list of λ values.
    Sweep(SweepArgs),
    /// Run the schedule on the two-qubit encoded logical qubit.
    Encoded(EncodedArgs),
}

#[derive(Args, Debug, Clone)]
struct StateArgs {
    /// Initial polar angle in [0, π] (radians).
    #[arg(long, allow_negative_numbers = true)]
    theta0: f64,
    /// Initial azimuth (radians, wrapped into [0, 2π)).
    #[arg(long, allow_negative_numbers = true)]
    phi0: f64,
    /// Target polar angle in [0, π] (radians).
    #[arg(long, allow_negative_numbers = true)]
    thetas: f64,
    /// Target azimuth (radians, wrapped into [0, 2π)).
    #[arg(long, allow_negative_numbers = true)]
    phis: f64,
}

#[derive(Args, Debug, Clone)]
struct PlanArgs {
    #[command(flatten)]
    states: StateArgs,
    #[arg(long, default_value = "three")]
    scheme: Scheme,
    /// Pulse shape (ignored by `compare`).
    #[arg(long, default_value = "bang")]
    shape: PulseShape,
    /// Weight of the final time in J = λ·t_f + ∫E dt.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    lambda: f64,
    /// Bound on each control component.
    #[arg(long, allow_negative_numbers = true)]
    bound: Option<f64>,
    /// Directory that receives schedule.json, trajectory.csv and performance.txt.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Number of uniform trajectory samples.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Step for the RK4 cross-check and the energy quadrature (default t_f·1e-4).
    #[arg(long, allow_negative_numbers = true)]
    dt: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct SimulateArgs {
    /// Schedule document produced by `plan`.
    #[arg(long)]
    schedule: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    theta0: f64,
    #[arg(long, allow_negative_numbers = true)]
    phi0: f64,
    /// Optional target polar angle; with --phis enables verification.
    #[arg(long, allow_negative_numbers = true, requires = "phis")]
    thetas: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "thetas")]
    phis: Option<f64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, allow_negative_numbers = true)]
    dt: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct SweepArgs {
    #[command(flatten)]
    states: StateArgs,
    #[arg(long, default_value = "three")]
    scheme: Scheme,
    /// Restrict the sweep to one shape (default: all shapes).
    #[arg(long)]
    shape: Option<PulseShape>,
    /// Comma-separated λ values.
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    lambdas: Vec<f64>,
    #[arg(long, allow_negative_numbers = true)]
    bound: Option<f64>,
    /// Directory that receives sweep.csv (default: stdout).
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    dt: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct EncodedArgs {
    #[command(flatten)]
    plan: PlanArgs,
    /// Lindblad document ({"operators": ..., "alpha": ...}); default collective dephasing, γ = 1.
    #[arg(long)]
    lindblad: Option<PathBuf>,
    /// Seed for the random logical states probed by the decoherence-free check.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn angles(theta: f64, phi: f64) -> CliResult<BlochAngles<f64>> {
    Ok(BlochAngles::new(theta, phi)?)
}

fn plan(
    initial: &BlochAngles<f64>,
    target: &BlochAngles<f64>,
    scheme: Scheme,
    shape: PulseShape,
    lambda: f64,
    bound: Option<f64>,
) -> CliResult<(Schedule<f64>, PerformanceReport<f64>)> {
    Ok(match scheme {
        Scheme::ThreeRotation => plan_three_rotation(initial, target, shape, lambda, bound)?,
        Scheme::OneRotation => plan_one_rotation(initial, target, shape, lambda, bound)?,
    })
}

fn step_for(sched: &Schedule<f64>, dt: Option<f64>) -> CliResult<f64> {
    match dt {
        Some(dt) if dt.is_finite() && dt > 0.0 => Ok(dt),
        Some(dt) => Err(CliError::Input(format!("--dt {dt} must be positive"))),
        None if sched.t_f() > 0.0 => Ok(sched.t_f() * 1e-4),
        None => Ok(1e-3),
    }
}

fn sci(x: f64) -> String {
    c_exp(x, 15)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)?;
    Ok(())
}

fn performance_table(closed: &PerformanceReport<f64>, numeric: &PerformanceReport<f64>, fidelity: f64, rk4: f64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<12} {:>24} {:>24}", "quantity", "closed_form", "numeric");
    let rows = [
        ("t_f", closed.t_f, numeric.t_f),
        ("energy", closed.energy, numeric.energy),
        ("j", closed.j_value, numeric.j_value),
        ("te_product", closed.te_product, numeric.te_product),
        ("magnitude", closed.magnitude_used, numeric.magnitude_used),
    ];
    for (name, a, b) in rows {
        let _ = writeln!(s, "{name:<12} {:>24} {:>24}", sci(a), sci(b));
    }
    let _ = writeln!(s, "{:<12} {:>24}", "clamped", closed.clamped);
    let _ = writeln!(s, "{:<12} {:>24} {:>24}", "fidelity", sci(fidelity), sci(rk4));
    s
}

fn run_plan(args: &PlanArgs) -> CliResult<()> {
    let initial = angles(args.states.theta0, args.states.phi0)?;
    let target = angles(args.states.thetas, args.states.phis)?;
    let (sched, closed) = plan(&initial, &target, args.scheme, args.shape, args.lambda, args.bound)?;
    let dt = step_for(&sched, args.dt)?;
    let psi0 = state_from_angles(&initial);
    let psi_s = state_from_angles(&target);
    let (fin, trajectory) = simulate_schedule(&psi0, &sched, args.samples);
    let fidelity = fidelity_up_to_phase(&fin, &psi_s);
    let rk4_dt = dt.min(sched.t_f() / 100.0).max(f64::MIN_POSITIVE);
    let rk4 = fidelity_up_to_phase(&integrate_rk4(&psi0, &sched, sched.t_f(), rk4_dt)?, &psi_s);
    let numeric = evaluate_performance_numeric(&sched, args.lambda, dt)?;

    let table = performance_table(&closed, &numeric, fidelity, rk4);
    print!("{table}");
    if let Some(dir) = &args.out_dir {
        write_file(dir, "schedule.json", &schedule_to_json(&sched))?;
        let mut csv = Vec::new();
        trajectory.write_csv(&mut csv)?;
        write_file(dir, "trajectory.csv", &String::from_utf8_lossy(&csv))?;
        write_file(dir, "performance.txt", &table)?;
    }
    if fidelity < FIDELITY_FLOOR || rk4 < FIDELITY_FLOOR {
        return Err(CliError::Verification(format!("fidelity {fidelity:.3e}, RK4 fidelity {rk4:.3e}")));
    }
    Ok(())
}

fn run_simulate(args: &SimulateArgs) -> CliResult<()> {
    let text = fs::read_to_string(&args.schedule)?;
    let sched: Schedule<f64> = schedule_from_json(&text)?;
    let initial = angles(args.theta0, args.phi0)?;
    let psi0 = state_from_angles(&initial);
    let (fin, trajectory) = simulate_schedule(&psi0, &sched, args.samples);
    let dt = step_for(&sched, args.dt)?;
    let rk4_dt = dt.min(sched.t_f() / 100.0).max(f64::MIN_POSITIVE);
    let rk4 = integrate_rk4(&psi0, &sched, sched.t_f(), rk4_dt)?;
    let [a, b] = fin.amplitudes();
    let r = fin.bloch_vector();
    println!("t_f          {:.15e}", sched.t_f());
    println!("final        ({:.12e}{:+.12e}i, {:.12e}{:+.12e}i)", a.re, a.im, b.re, b.im);
    println!("bloch        ({:.12e}, {:.12e}, {:.12e})", r[0], r[1], r[2]);
    println!("rk4_overlap  {:.15e}", fidelity_up_to_phase(&fin, &rk4));
    if let Some(dir) = &args.out_dir {
        let mut csv = Vec::new();
        trajectory.write_csv(&mut csv)?;
        write_file(dir, "trajectory.csv", &String::from_utf8_lossy(&csv))?;
    }
    if let (Some(ts), Some(ps)) = (args.thetas, args.phis) {
        let psi_s = state_from_angles(&angles(ts, ps)?);
        let fidelity = fidelity_up_to_phase(&fin, &psi_s);
        println!("fidelity     {fidelity:.15e}");
        if fidelity < FIDELITY_FLOOR {
            return Err(CliError::Verification(format!("fidelity {fidelity:.3e}")));
        }
    }
    Ok(())
}

fn run_compare(args: &PlanArgs) -> CliResult<()> {
    let initial = angles(args.states.theta0, args.states.phi0)?;
    let target = angles(args.states.thetas, args.states.phis)?;
    let psi_s = state_from_angles(&target);
    let mut rows = Vec::new();
    for shape in PulseShape::ALL {
        let (sched, report) = plan(&initial, &target, args.scheme, shape, args.lambda, args.bound)?;
        let (fin, _) = simulate_schedule(&state_from_angles(&initial), &sched, 2);
        let numeric = evaluate_performance_numeric(&sched, args.lambda, step_for(&sched, args.dt)?)?;
        rows.push((shape, report, numeric.j_value, fidelity_up_to_phase(&fin, &psi_s)));
    }
    rows.sort_by(|a, b| a.1.j_value.total_cmp(&b.1.j_value));
    println!(
        "{:<10} {:>22} {:>22} {:>22} {:>22} {:>22} {:>8} {:>22}",
        "shape", "j", "t_f", "energy", "te_product", "magnitude", "clamped", "j_numeric"
    );
    for (shape, r, j_num, _) in &rows {
        println!(
            "{:<10} {:>22} {:>22} {:>22} {:>22} {:>22} {:>8} {:>22}",
            shape.name(),
            sci(r.j_value),
            sci(r.t_f),
            sci(r.energy),
            sci(r.te_product),
            sci(r.magnitude_used),
            r.clamped,
            sci(*j_num)
        );
    }
    if let Some((shape, .., f)) = rows.iter().find(|row| row.3 < FIDELITY_FLOOR) {
        return Err(CliError::Verification(format!("{shape} schedule reached fidelity {f:.3e}")));
    }
    Ok(())
}

fn run_sweep(args: &SweepArgs) -> CliResult<()> {
    let initial = angles(args.states.theta0, args.states.phi0)?;
    let target = angles(args.states.thetas, args.states.phis)?;
    let shapes = match args.shape {
        Some(s) => vec![s],
        None => PulseShape::ALL.to_vec(),
    };
    let mut csv = String::from("lambda,shape,t_f,energy,j,te_product,magnitude,clamped,j_numeric\n");
    for &lambda in &args.lambdas {
        for &shape in &shapes {
            let (sched, r) = plan(&initial, &target, args.scheme, shape, lambda, args.bound)?;
            let numeric = evaluate_performance_numeric(&sched, lambda, step_for(&sched, args.dt)?)?;
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{},{},{}",
                sci(lambda),
                shape,
                sci(r.t_f),
                sci(r.energy),
                sci(r.j_value),
                sci(r.te_product),
                sci(r.magnitude_used),
                r.clamped,
                sci(numeric.j_value)
            );
        }
    }
    match &args.out_dir {
        Some(dir) => write_file(dir, "sweep.csv", &csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn run_encoded(args: &EncodedArgs) -> CliResult<()> {
    let p = &args.plan;
    let initial = angles(p.states.theta0, p.states.phi0)?;
    let target = angles(p.states.thetas, p.states.phis)?;
    let spec = match &args.lindblad {
        Some(path) => LindbladSpec::from_json(&fs::read_to_string(path)?)?,
        None => LindbladSpec::collective_dephasing(1.0)?,
    };
    let (sched, closed) = plan(&initial, &target, p.scheme, p.shape, p.lambda, p.bound)?;
    let encoded_target = TwoQubitState::from_logical(&state_from_angles(&target));
    let dt = step_for(&sched, p.dt)?;
    let (fin, leakage) = simulate_encoded(&initial, &sched, dt.min(sched.t_f() / 100.0).max(f64::MIN_POSITIVE))?;
    let fidelity = DensityMatrix4::from_pure(&fin).overlap(&encoded_target);
    let rho0 = DensityMatrix4::from_pure(&TwoQubitState::from_logical(&state_from_angles(&initial)));
    let me_dt = dt.min(sched.t_f() / 1000.0).max(f64::MIN_POSITIVE);
    let rho = simulate_master_equation(&rho0, &sched, &spec, me_dt)?;
    let open_fidelity = rho.overlap(&encoded_target);
    let residual = dfs_residual(&spec, args.seed);

    println!("t_f              {:.15e}", closed.t_f);
    println!("j                {:.15e}", closed.j_value);
    println!("fidelity         {fidelity:.15e}");
    println!("max_leakage      {leakage:.3e}");
    println!("open_fidelity    {open_fidelity:.15e}");
    println!("dfs_residual     {residual:.3e}");
    if let Some(dir) = &p.out_dir {
        write_file(dir, "schedule.json", &schedule_to_json(&sched))?;
    }
    if fidelity < FIDELITY_FLOOR || leakage > LEAKAGE_CEILING {
        return Err(CliError::Verification(format!("fidelity {fidelity:.3e}, leakage {leakage:.3e}")));
    }
    Ok(())
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Plan(a) => run_plan(a),
        Command::Simulate(a) => run_simulate(a),
        Command::Compare(a) => run_compare(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Encoded(a) => run_encoded(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(io::stderr(), "error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
