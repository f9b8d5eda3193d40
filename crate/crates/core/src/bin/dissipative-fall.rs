#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dissipative_fall::commands::{
    cmd_simulate, cmd_spectrum, cmd_sweep, cmd_thermo, resolve_ensemble, CommandOutput, EnsembleFlags, OutputFile,
    OutputFormat, SimulateConfig, SimulateFlags, SpectrumConfig, SpectrumFlags, SweepConfig, ThermoConfig, CONFIG_KEYS,
};
use dissipative_fall::config::ConfigFile;
use dissipative_fall::output::Table;
use dissipative_fall::verify;

/// Free fall with quadratic drag: trajectories, bouncer spectra and
/// canonical thermodynamics of two Hamiltonian formulations.
#[derive(Parser)]
#[command(name = "dissipative-fall", version)]
struct Cli {
    /// Directory for output files (created if missing).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Table format.
    #[arg(long, global = true)]
    format: Option<OutputFormat>,
    /// Flat key = value file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the equation of motion and report K1/K2 drift.
    Simulate(SimulateArgs),
    /// Bouncer levels with first-order shifts of both formulations.
    Spectrum(SpectrumArgs),
    /// ln Z, U and C_V of both formulations at one inverse temperature.
    Thermo(ThermoArgs),
    /// Heat-capacity sweep over inverse temperature with crossover search.
    Sweep(SweepArgs),
    /// Run every closed-form vs oracle check and write a JSON report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    m: Option<f64>,
    #[arg(long)]
    g: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    v0: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    /// Integrator tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    drift_threshold: Option<f64>,
    /// Fail unless the log constant K1 is defined for the whole run.
    #[arg(long)]
    log_diagnostics: bool,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    m: Option<f64>,
    #[arg(long)]
    g: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    hbar: Option<f64>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    oracle_tolerance: Option<f64>,
}

#[derive(Args)]
struct EnsembleArgs {
    #[arg(long)]
    n1: Option<u32>,
    #[arg(long)]
    n2: Option<u32>,
    #[arg(long)]
    m1: Option<f64>,
    #[arg(long)]
    m2: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    g: Option<f64>,
    /// Transverse box side.
    #[arg(long)]
    l: Option<f64>,
    /// Box height.
    #[arg(long)]
    height: Option<f64>,
    #[arg(long)]
    k_b: Option<f64>,
    #[arg(long)]
    h_planck: Option<f64>,
    /// Skip the phase-space quadrature of ln Z.
    #[arg(long)]
    no_quadrature: bool,
}

impl EnsembleArgs {
    fn flags(&self, beta: Option<f64>) -> EnsembleFlags {
        EnsembleFlags {
            n1: self.n1,
            n2: self.n2,
            m1: self.m1,
            m2: self.m2,
            alpha: self.alpha,
            g: self.g,
            l: self.l,
            height: self.height,
            beta,
            k_b: self.k_b,
            h_planck: self.h_planck,
        }
    }

    fn quadrature(&self) -> Option<bool> {
        self.no_quadrature.then_some(false)
    }
}

#[derive(Args)]
struct ThermoArgs {
    #[command(flatten)]
    ensemble: EnsembleArgs,
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    ensemble: EnsembleArgs,
    #[arg(long)]
    beta_min: Option<f64>,
    #[arg(long)]
    beta_max: Option<f64>,
    /// Number of log-spaced grid points.
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Seed for the randomized state samples.
    #[arg(long)]
    seed: Option<u64>,
}

enum Failure {
    Usage(String),
    Run(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Run(e.to_string())
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn verify_output(seed: u64, format: OutputFormat) -> CommandOutput {
    let report = verify::run(seed);
    let mut messages: Vec<String> = report
        .checks
        .iter()
        .map(|c| {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            format!("[{mark}] {:<36} observed {:.3e}  tolerance {:.1e}  {}", c.name, c.observed, c.tolerance, c.detail)
        })
        .collect();
    for a in &report.adjudications {
        messages.push(format!(
            "[INFO] {:<36} printed {:.6e}  validated {:.6e}  {}",
            a.name, a.printed, a.validated, a.note
        ));
    }
    for c in &report.criteria {
        messages.push(format!("criterion {}: {}", c.criterion, if c.passed { "pass" } else { "FAIL" }));
    }
    messages.push(format!(
        "verify finished in {:.2} s: {}",
        report.elapsed_seconds,
        if report.passed { "all checks pass" } else { "failures" }
    ));
    let mut json = serde_json::to_string_pretty(&report).expect("report serialises");
    json.push('\n');
    let mut files = vec![OutputFile { name: "verify_report.json".into(), contents: json }];
    if format == OutputFormat::Csv {
        let mut t = Table::new(&["criterion", "name", "tolerance", "observed", "passed"]);
        for c in &report.checks {
            t.push(vec![
                (c.criterion as usize).into(),
                c.name.as_str().into(),
                c.tolerance.into(),
                c.observed.into(),
                c.passed.into(),
            ]);
        }
        files.push(OutputFile { name: "verify_checks.csv".into(), contents: t.to_csv() });
    }
    CommandOutput { files, messages, success: report.passed }
}

fn write_all(dir: &Path, files: &[OutputFile]) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Run(format!("cannot create {}: {e}", dir.display())))?;
    for f in files {
        let path = dir.join(&f.name);
        fs::write(&path, &f.contents).map_err(|e| Failure::Run(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            ConfigFile::parse(&text).map_err(usage)?
        }
        None => ConfigFile::default(),
    };
    cfg.check_keys(CONFIG_KEYS).map_err(usage)?;
    let format = cfg.resolve(cli.format, "format", OutputFormat::Csv).map_err(usage)?;
    let out_dir = cfg.resolve(cli.out_dir, "out_dir", PathBuf::from("out")).map_err(usage)?;

    let output = match cli.command {
        Command::Simulate(a) => {
            let flags = SimulateFlags {
                m: a.m,
                g: a.g,
                alpha: a.alpha,
                x0: a.x0,
                v0: a.v0,
                t_end: a.t_end,
                tol: a.tol,
                drift_threshold: a.drift_threshold,
                log_diagnostics: a.log_diagnostics.then_some(true),
            };
            cmd_simulate(&SimulateConfig::resolve(&flags, &cfg).map_err(usage)?, format)?
        }
        Command::Spectrum(a) => {
            let flags = SpectrumFlags {
                m: a.m,
                g: a.g,
                alpha: a.alpha,
                hbar: a.hbar,
                n_max: a.n_max,
                oracle_tolerance: a.oracle_tolerance,
            };
            cmd_spectrum(&SpectrumConfig::resolve(&flags, &cfg).map_err(usage)?, format)?
        }
        Command::Thermo(a) => {
            let d = ThermoConfig::default();
            let beta = Some(cfg.resolve(a.beta, "beta", d.ensemble.beta).map_err(usage)?);
            let mut tolerances = d.tolerances;
            tolerances.quadrature = cfg.resolve(a.ensemble.quadrature(), "quadrature", true).map_err(usage)?;
            let ensemble = resolve_ensemble(&a.ensemble.flags(beta), &cfg).map_err(usage)?;
            cmd_thermo(&ThermoConfig { ensemble, tolerances }, format)?
        }
        Command::Sweep(a) => {
            let d = SweepConfig::default();
            let mut tolerances = d.tolerances;
            tolerances.quadrature = cfg.resolve(a.ensemble.quadrature(), "quadrature", true).map_err(usage)?;
            let sweep = SweepConfig {
                template: resolve_ensemble(&a.ensemble.flags(None), &cfg).map_err(usage)?,
                beta_min: cfg.resolve(a.beta_min, "beta_min", d.beta_min).map_err(usage)?,
                beta_max: cfg.resolve(a.beta_max, "beta_max", d.beta_max).map_err(usage)?,
                points: cfg.resolve(a.points, "points", d.points).map_err(usage)?,
                tolerances,
            };
            cmd_sweep(&sweep, format)?
        }
        Command::Verify(a) => verify_output(a.seed.unwrap_or(verify::DEFAULT_SEED), format),
    };

    write_all(&out_dir, &output.files)?;
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let mut out = std::io::stdout().lock();
    for line in &output.messages {
        let _ = writeln!(out, "{line}");
    }
    for f in &output.files {
        let _ = writeln!(out, "wrote {}", out_dir.join(&f.name).display());
    }
    Ok(output.success)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
