//! `crossdiff`: command-line front end for the cross-diffusion
//! pattern-formation laboratory. Every subcommand reads one configuration
//! (file, preset, or both plus `--set` overrides) and writes reproducible,
//! file-based outputs.

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crossdiff_cli::config::{self, ConfigError, PgmVariant, RunConfig};
use crossdiff_core::analysis::{bifurcation_sweep, pattern_metrics, DEFAULT_REL_THRESHOLD};
use crossdiff_core::io as artifacts;
use crossdiff_core::ode::{integrate_ode, verify_lyapunov_descent};
use crossdiff_core::pde::{initial_condition, step, Field, SimDiagnostics};
use crossdiff_core::stability::{
    admissible_wavenumbers, det_cubic, dispersion_vs_parameter, dispersion_vs_wavenumber,
    turing_threshold, MuDomain,
};
use crossdiff_core::{Error as CoreError, SpeciesState};

const EXIT_HELP: &str = "Exit codes:
  0  success
  2  configuration parse error (syntax, duplicate or unknown key)
  3  configuration validation error (invariant violated)
  4  equilibrium existence condition violated
  5  step size too large (integration became non-finite)
  6  simulation blow-up
  7  threshold bracket does not straddle the onset
  8  I/O error";

#[derive(Parser)]
#[command(
    name = "crossdiff",
    version,
    about = "Stability analysis and pattern-formation simulation for a \
             two-prey one-predator system with cross-diffusion",
    after_help = EXIT_HELP
)]
struct Cli {
    /// Configuration file (line-oriented `key = value` with [section] headers)
    #[arg(short, long, global = true, value_name = "FILE")]
    config: Option<std::path::PathBuf>,

    /// Named preset (paper-fig3, fig1, fig2, fig3-k17, fig3-k18, fig3-k19,
    /// fig3-k20), applied before the config file keys
    #[arg(short, long, global = true, value_name = "NAME")]
    preset: Option<String>,

    /// Override one key, e.g. `--set model.k32=2` (repeatable)
    #[arg(long = "set", global = true, value_name = "SECTION.KEY=VALUE")]
    set: Vec<String>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Over {
    /// Sweep the chosen cross-diffusion coefficient, maximizing over the
    /// wavenumber lattice
    Parameter,
    /// Sweep the wavenumber lattice at fixed parameters
    Wavenumber,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DomainKind {
    /// Any wavenumber mu > 0
    Continuous,
    /// Only the Neumann eigenvalues of the configured rectangle
    Lattice,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the interior equilibrium and the existence condition check
    Equilibrium,
    /// Integrate the kinetics; write trajectory.csv and print a descent report
    Ode {
        /// Initial state as `u1,u2,u3`
        #[arg(long, default_value = "0.5,0.5,0.5")]
        u0: String,
        #[arg(long, default_value_t = 500.0)]
        t_end: f64,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
    },
    /// Write dispersion.csv: max Re(lambda) along a sweep
    Dispersion {
        #[arg(long, value_enum, default_value_t = Over::Parameter)]
        over: Over,
    },
    /// Bisect for the instability onset in the swept coefficient
    Threshold {
        #[arg(long, value_enum, default_value_t = DomainKind::Lattice)]
        domain: DomainKind,
    },
    /// Run the full 2D simulation; write snapshots and a manifest
    Simulate,
    /// Write sweep.csv: one full simulation per swept value
    Sweep,
}

enum CliError {
    Config(ConfigError),
    Core(CoreError),
    Io(std::io::Error),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn exit_code_and_kind(e: &CliError) -> (u8, &'static str, String) {
    match e {
        CliError::Config(ConfigError::Parse { .. }) => (2, "parse", e_msg(e)),
        CliError::Config(ConfigError::Validation(_)) => (3, "validation", e_msg(e)),
        CliError::Core(CoreError::ConditionViolated) => (4, "existence", e_msg(e)),
        CliError::Core(CoreError::Domain(_)) => (3, "validation", e_msg(e)),
        CliError::Core(CoreError::StepSize { .. }) => (5, "step-size", e_msg(e)),
        CliError::Core(CoreError::BlowUp { .. }) => (6, "blow-up", e_msg(e)),
        CliError::Core(CoreError::Bracket(_)) => (7, "bracket", e_msg(e)),
        CliError::Io(_) => (8, "io", e_msg(e)),
    }
}

fn e_msg(e: &CliError) -> String {
    match e {
        CliError::Config(c) => c.to_string(),
        CliError::Core(c) => c.to_string(),
        CliError::Io(c) => c.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (code, kind, msg) = exit_code_and_kind(&e);
            eprintln!("error: code={code} kind={kind} msg={msg:?}");
            ExitCode::from(code)
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut text = String::new();
    if let Some(name) = &cli.preset {
        text.push_str(&format!("preset = {name}\n"));
    }
    if let Some(path) = &cli.config {
        text.push_str(&fs::read_to_string(path)?);
    }
    let mut overrides = Vec::new();
    for s in &cli.set {
        let parsed = s.split_once('=').and_then(|(k, v)| {
            k.split_once('.')
                .map(|(sec, key)| (sec.trim().into(), key.trim().into(), v.trim().into()))
        });
        let Some(triple) = parsed else {
            return Err(ConfigError::Validation(format!(
                "--set expects SECTION.KEY=VALUE, got `{s}`"
            ))
            .into());
        };
        overrides.push(triple);
    }
    Ok(config::parse_config_with(&text, &overrides)?)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = load_config(cli)?;
    match &cli.cmd {
        Cmd::Equilibrium => equilibrium(&cfg),
        Cmd::Ode { u0, t_end, dt } => ode(&cfg, u0, *t_end, *dt),
        Cmd::Dispersion { over } => dispersion(&cfg, *over),
        Cmd::Threshold { domain } => threshold(&cfg, *domain),
        Cmd::Simulate => simulate_cmd(&cfg),
        Cmd::Sweep => sweep_cmd(&cfg),
    }
}

fn ensure_out_dir(cfg: &RunConfig) -> Result<(), CliError> {
    fs::create_dir_all(&cfg.output.dir)?;
    Ok(())
}

fn equilibrium(cfg: &RunConfig) -> Result<(), CliError> {
    let p = &cfg.model;
    let lhs = p.a * p.b * p.c;
    let rhs = (p.e * (p.b - p.a)).max(p.d * (p.a - p.b));
    println!(
        "existence condition: a*b*c = {lhs:.11e} > max{{e(b-a), d(a-b)}} = {rhs:.11e}: {}",
        if p.check_existence() { "holds" } else { "violated" }
    );
    let ubar = p.positive_equilibrium()?;
    println!("u1 = {:.11e}", ubar.u1);
    println!("u2 = {:.11e}", ubar.u2);
    println!("u3 = {:.11e}", ubar.u3);
    Ok(())
}

fn ode(cfg: &RunConfig, u0: &str, t_end: f64, dt: f64) -> Result<(), CliError> {
    let parts: Vec<f64> = u0
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| ConfigError::Validation(format!("--u0 expects `u1,u2,u3`, got `{u0}`")))?;
    if parts.len() != 3 {
        return Err(
            ConfigError::Validation(format!("--u0 expects exactly 3 components, got `{u0}`"))
                .into(),
        );
    }
    let start = SpeciesState::new(parts[0], parts[1], parts[2]);
    let traj = integrate_ode(&cfg.model, &start, t_end, dt)?;
    ensure_out_dir(cfg)?;
    let path = cfg.output.dir.join("trajectory.csv");
    let mut buf = Vec::new();
    artifacts::write_trajectory_csv(&mut buf, &traj)?;
    fs::write(&path, buf)?;
    let report = verify_lyapunov_descent(&traj)?;
    let end = traj.final_state();
    println!("wrote {}", path.display());
    println!("final state: ({:.11e}, {:.11e}, {:.11e})", end.u1, end.u2, end.u3);
    println!(
        "lyapunov descent: monotone = {}, max_increase = {:e}, clipped = {}",
        report.monotone, report.max_increase, traj.clips
    );
    Ok(())
}

fn lattice(cfg: &RunConfig) -> Result<Vec<f64>, CoreError> {
    let s = &cfg.sweep;
    admissible_wavenumbers(s.lx, s.ly, s.m_max, s.n_max)
}

fn dispersion(cfg: &RunConfig, over: Over) -> Result<(), CliError> {
    let mus = lattice(cfg)?;
    let curve = match over {
        Over::Parameter => {
            if cfg.sweep.values.is_empty() {
                return Err(ConfigError::Validation(
                    "[sweep] values is required for a parameter dispersion sweep".into(),
                )
                .into());
            }
            dispersion_vs_parameter(&cfg.model, cfg.sweep.param, &cfg.sweep.values, &mus)?
        }
        Over::Wavenumber => dispersion_vs_wavenumber(&cfg.model, &mus)?,
    };
    ensure_out_dir(cfg)?;
    let path = cfg.output.dir.join("dispersion.csv");
    let mut buf = Vec::new();
    artifacts::write_dispersion_csv(&mut buf, &curve)?;
    fs::write(&path, buf)?;
    println!("wrote {} ({} points)", path.display(), curve.points.len());
    Ok(())
}

fn threshold(cfg: &RunConfig, domain: DomainKind) -> Result<(), CliError> {
    let s = &cfg.sweep;
    let mu_domain = match domain {
        DomainKind::Continuous => MuDomain::Continuous,
        DomainKind::Lattice => MuDomain::Lattice(lattice(cfg)?),
    };
    let delta = turing_threshold(&cfg.model, s.param, s.lo, s.hi, s.tol, &mu_domain)?;
    let domain_name = match domain {
        DomainKind::Continuous => "continuous".to_string(),
        DomainKind::Lattice => format!(
            "lattice {}x{} (m <= {}, n <= {})",
            s.lx, s.ly, s.m_max, s.n_max
        ),
    };
    println!(
        "delta_{} = {:.11e} (bracket [{}, {}], tol {:e}, mu domain: {})",
        s.param, delta, s.lo, s.hi, s.tol, domain_name
    );
    // determinant-cubic diagnostics on both sides of the onset
    for v in [s.lo, delta, s.hi] {
        let cubic = det_cubic(&cfg.model.with_cross(s.param, v)?)?;
        println!("{} = {v}: {cubic}", s.param);
    }
    Ok(())
}

fn write_snapshot(cfg: &RunConfig, step_index: usize, fields: &[Field; 3]) -> Result<(), CliError> {
    for (s, f) in fields.iter().enumerate() {
        let stem = format!("u{}_{:06}", s + 1, step_index);
        if matches!(cfg.output.pgm, PgmVariant::P2 | PgmVariant::Both) {
            let mut buf = Vec::new();
            artifacts::write_pgm_p2(&mut buf, f)?;
            fs::write(cfg.output.dir.join(format!("{stem}.ascii.pgm")), buf)?;
        }
        if matches!(cfg.output.pgm, PgmVariant::P5 | PgmVariant::Both) {
            let mut buf = Vec::new();
            artifacts::write_pgm_p5(&mut buf, f)?;
            fs::write(cfg.output.dir.join(format!("{stem}.pgm")), buf)?;
        }
        let mut side = Vec::new();
        artifacts::write_pgm_sidecar(&mut side, f)?;
        fs::write(cfg.output.dir.join(format!("{stem}.minmax.txt")), side)?;
        if cfg.output.dump {
            let mut dump = Vec::new();
            artifacts::write_field_dump(&mut dump, f)?;
            fs::write(cfg.output.dir.join(format!("{stem}.dat")), dump)?;
        }
    }
    Ok(())
}

fn simulate_cmd(cfg: &RunConfig) -> Result<(), CliError> {
    ensure_out_dir(cfg)?;
    if cfg.sim.perturb_amplitude == 0.0 {
        println!("note: amplitude is 0, so the run stays at the uniform equilibrium");
    }
    let sim = &cfg.sim;
    let mut fields = initial_condition(&cfg.model, cfg.grid, sim.seed, sim.perturb_amplitude)?;
    let mut diagnostics = SimDiagnostics::default();
    for n in 1..=sim.steps {
        let (next, diag) = step(&fields, &cfg.model, sim, n)?;
        fields = next;
        diagnostics.clamps += diag.clamps;
        diagnostics.picard_failures += diag.picard_failed as usize;
        if n % sim.snapshot_every == 0 || n == sim.steps {
            eprintln!("step {n}/{}", sim.steps);
            write_snapshot(cfg, n, &fields)?;
        }
    }
    fs::write(
        cfg.output.dir.join("manifest.txt"),
        config::write_manifest(cfg),
    )?;
    let metrics = pattern_metrics(&fields[0], DEFAULT_REL_THRESHOLD);
    println!(
        "final u1: amplitude = {:e}, mean = {:.6}, spots = {}, classification = {}",
        metrics.amplitude, metrics.mean, metrics.spot_count, metrics.classification
    );
    println!(
        "diagnostics: clamps = {}, picard_failures = {}",
        diagnostics.clamps, diagnostics.picard_failures
    );
    println!("wrote snapshots and manifest to {}", cfg.output.dir.display());
    Ok(())
}

fn sweep_cmd(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.sweep.values.is_empty() {
        return Err(
            ConfigError::Validation("[sweep] values is required for a sweep".into()).into(),
        );
    }
    let records = bifurcation_sweep(
        &cfg.model,
        cfg.grid,
        &cfg.sim,
        cfg.sweep.param,
        &cfg.sweep.values,
        DEFAULT_REL_THRESHOLD,
    )?;
    ensure_out_dir(cfg)?;
    let path = cfg.output.dir.join("sweep.csv");
    let mut buf = Vec::new();
    artifacts::write_sweep_csv(&mut buf, &records)?;
    fs::write(&path, buf)?;
    // final-state (not time-) extrema of u1; one full run per value
    let mut out = std::io::stdout().lock();
    for r in &records {
        writeln!(
            out,
            "{} = {}: u1 in [{:.6}, {:.6}], {}",
            cfg.sweep.param, r.param_value, r.u1_min, r.u1_max, r.metrics.classification
        )?;
    }
    println!("wrote {}", path.display());
    Ok(())
}
