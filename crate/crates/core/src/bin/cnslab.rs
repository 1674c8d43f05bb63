use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cnslab::checks::entropy_checks;
use cnslab::diagnostics::{make_reference, validate_initial, InitialDataReport};
use cnslab::field::{format_snapshot, read_snapshot, FarField, Grid, SnapshotMeta, SolutionField};
use cnslab::riemann::{sample, solve_riemann, RiemannData, WaveStructure};
use cnslab::sweep::{emit_report, parse_config, run_single, run_sweep, RunConfig, SweepResult, SweepRow};
use cnslab::viscous::{mollified_riemann_data, ViscousParams};
use cnslab::{GammaLawEos, PointState};

/// Vanishing-viscosity laboratory for 1D isentropic Navier–Stokes with viscosity eps*rho^alpha.
#[derive(Parser, Debug)]
#[command(name = "cnslab", version, after_help = OUTPUT_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

const OUTPUT_HELP: &str =
    "Output files go to --output-dir, else $CNSLAB_OUTPUT_DIR, else the config's output_dir, else ./cnslab-out.";

#[derive(Subcommand, Debug)]
enum Command {
    /// Single viscous run with full diagnostics.
    Run(RunArgs),
    /// Viscosity sweep: convergence and uniformity tables.
    Sweep(SweepArgs),
    /// Exact Riemann solution: wave structure and a sampled profile.
    Riemann(RiemannArgs),
    /// Property suite of the entropy kernel.
    CheckEntropy(CheckArgs),
    /// Admissibility numbers (M0, E0, E1, c0) of an initial profile.
    ValidateData(ValidateArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// TOML config; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Viscosity to run; defaults to the first entry of `epsilons`.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// TOML config; the default sweep eps = 1e-2, 5e-3, 2.5e-3, 1.25e-3 when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RiemannArgs {
    #[arg(long, default_value_t = 2.0)]
    gamma: f64,
    /// Left state as `rho,u`.
    #[arg(long, value_parser = parse_state, allow_hyphen_values = true)]
    left: PointState,
    /// Right state as `rho,u`.
    #[arg(long, value_parser = parse_state, allow_hyphen_values = true)]
    right: PointState,
    /// Sampling time.
    #[arg(long, default_value_t = 0.4)]
    t: f64,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    x_min: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    x_max: f64,
    #[arg(long, default_value_t = 200)]
    n_cells: usize,
    /// Write the profile here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Adiabatic exponents to check (repeatable).
    #[arg(long = "gamma", default_values_t = [1.4, 5.0 / 3.0, 2.0, 3.0, 4.0])]
    gammas: Vec<f64>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// Validate the mollified data built from this config (every viscosity, or --epsilon).
    #[arg(long, conflicts_with = "snapshot")]
    config: Option<PathBuf>,
    #[arg(long, requires = "config")]
    epsilon: Option<f64>,
    /// Validate a snapshot file; far fields are taken from its end cells.
    #[arg(long)]
    snapshot: Option<PathBuf>,
    /// Reference cutoff length for snapshot validation.
    #[arg(long, default_value_t = 0.5)]
    l0: f64,
    #[arg(long, default_value_t = 1.0)]
    steepness: f64,
}

fn parse_state(text: &str) -> Result<PointState, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [r, u] => {
            let rho: f64 = r.parse().map_err(|e| format!("bad density `{r}`: {e}"))?;
            let u: f64 = u.parse().map_err(|e| format!("bad velocity `{u}`: {e}"))?;
            Ok(PointState::new(rho, u))
        }
        _ => Err(format!("expected `rho,u`, got `{text}`")),
    }
}

type CliResult = Result<ExitCode, String>;

fn load_config(path: Option<&Path>) -> Result<RunConfig, String> {
    match path {
        Some(p) => parse_config(p).map_err(|e| e.to_string()),
        None => RunConfig::with_epsilons(vec![1e-2, 5e-3, 2.5e-3, 1.25e-3]).map_err(|e| e.to_string()),
    }
}

fn output_dir(cli: Option<PathBuf>, config: &RunConfig) -> PathBuf {
    cli.unwrap_or_else(|| config.resolve_output_dir())
}

fn finish(result: &SweepResult, dir: &Path) -> CliResult {
    let files = emit_report(result, dir).map_err(|e| e.to_string())?;
    for f in &files {
        eprintln!("wrote {}", f.display());
    }
    print!("{}", cnslab::sweep::summary_text(result));
    let violations = result.invariant_violations();
    if violations.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        for v in &violations {
            eprintln!("invariant violated: {v}");
        }
        Ok(ExitCode::FAILURE)
    }
}

fn cmd_run(args: RunArgs) -> CliResult {
    let mut config = load_config(args.config.as_deref())?;
    let eps = args.epsilon.unwrap_or(config.epsilons[0]);
    config.epsilons = vec![eps];
    config.validate().map_err(|e| e.to_string())?;
    let dir = output_dir(args.output_dir, &config);
    let outcome = run_single(&config, eps).map_err(|e| e.to_string());
    let result = SweepResult {
        config,
        rows: vec![SweepRow { epsilon: eps, outcome }],
    };
    finish(&result, &dir)
}

fn cmd_sweep(args: SweepArgs) -> CliResult {
    let config = load_config(args.config.as_deref())?;
    let dir = output_dir(args.output_dir, &config);
    let result = run_sweep(&config).map_err(|e| e.to_string())?;
    finish(&result, &dir)
}

fn describe_waves(w: &WaveStructure) -> String {
    let wave = |name: &str, wave: &cnslab::riemann::Wave| {
        format!("# {name} = {:?} speeds [{:.17e}, {:.17e}]\n", wave.kind, wave.lo, wave.hi)
    };
    format!(
        "# star_rho = {:.17e}\n# star_u = {:.17e}\n{}{}# iterations = {}\n",
        w.star_rho,
        w.star_u,
        wave("wave1", &w.wave1),
        wave("wave2", &w.wave2),
        w.iterations
    )
}

fn cmd_riemann(args: RiemannArgs) -> CliResult {
    let eos = GammaLawEos::new(args.gamma).map_err(|e| e.to_string())?;
    if !(args.t > 0.0) {
        return Err(format!("--t must be positive, got {}", args.t));
    }
    let waves = solve_riemann(
        &eos,
        &RiemannData {
            left: args.left,
            right: args.right,
        },
    )
    .map_err(|e| e.to_string())?;
    let grid = Grid::new(args.x_min, args.x_max, args.n_cells).map_err(|e| e.to_string())?;
    let states: Vec<PointState> = grid.centers().iter().map(|&x| sample(&eos, &waves, x / args.t)).collect();
    let field = SolutionField::new(
        grid,
        args.t,
        states.iter().map(|s| s.rho).collect(),
        states.iter().map(|s| s.m()).collect(),
    )
    .map_err(|e| e.to_string())?;
    let meta = SnapshotMeta {
        gamma: args.gamma,
        alpha: 0.0,
        epsilon: 0.0,
    };
    let text = format_snapshot(&field, &meta) + &describe_waves(&waves);
    match args.output {
        Some(path) => std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check_entropy(args: CheckArgs) -> CliResult {
    let mut failed = 0;
    for g in args.gammas {
        let checks = entropy_checks(g).map_err(|e| e.to_string())?;
        for c in checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            println!("{tag} {} (worst {:.3e}, tolerance {:.0e})", c.name, c.worst, c.tolerance);
            failed += usize::from(!c.passed);
        }
    }
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn print_initial(label: &str, r: &InitialDataReport) -> bool {
    println!("{label} M0 = {:.10e}", r.m0);
    println!("{label} E0 = {:.10e}", r.e0);
    println!("{label} E1 = {:.10e}", r.e1);
    println!("{label} c0 = {:.10e}", r.c0);
    println!("{label} floor_hit = {}", r.floor_hit);
    let ok = !r.floor_hit && [r.m0, r.e0, r.e1, r.c0].iter().all(|v| v.is_finite() && *v >= 0.0) && r.c0 > 0.0;
    println!("{label} status = {}", if ok { "ok" } else { "invalid" });
    ok
}

fn cmd_validate(args: ValidateArgs) -> CliResult {
    let mut all_ok = true;
    if let Some(path) = args.snapshot {
        let (field, meta) = read_snapshot(&path).map_err(|e| e.to_string())?;
        let eos = GammaLawEos::new(meta.gamma).map_err(|e| e.to_string())?;
        let n = field.len();
        let far = FarField::new(field.state(0), field.state(n - 1)).map_err(|e| e.to_string())?;
        let reference = make_reference(far, args.l0, args.steepness).map_err(|e| e.to_string())?;
        let params = ViscousParams::new(meta.epsilon, meta.alpha).map_err(|e| e.to_string())?;
        let floor = 1e-10 * far.left.rho.max(far.right.rho);
        all_ok &= print_initial("", &validate_initial(&eos, &field, &reference, &params, floor));
    } else {
        let config = load_config(args.config.as_deref())?;
        let eos = config.eos().map_err(|e| e.to_string())?;
        let far = config.far_field().map_err(|e| e.to_string())?;
        let reference =
            make_reference(far, config.reference.l0, config.reference.steepness).map_err(|e| e.to_string())?;
        let epsilons = args.epsilon.map_or(config.epsilons.clone(), |e| vec![e]);
        for eps in epsilons {
            let grid = config.grid_for(eps).map_err(|e| e.to_string())?;
            let width = config.width_for(eps, &grid);
            let field = mollified_riemann_data(&grid, &far, width).map_err(|e| e.to_string())?;
            let params = ViscousParams::new(eps, config.alpha).map_err(|e| e.to_string())?;
            let floor = 1e-10 * far.left.rho.max(far.right.rho);
            let r = validate_initial(&eos, &field, &reference, &params, floor);
            all_ok &= print_initial(&format!("eps={eps:e}"), &r);
        }
    }
    Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Riemann(a) => cmd_riemann(a),
        Command::CheckEntropy(a) => cmd_check_entropy(a),
        Command::ValidateData(a) => cmd_validate(a),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
