//! `xychain`: configuration-driven sweeps over the XY chain.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical fault recorded,
//! 3 I/O failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use xychain::sweep::{
    self, detect_critical_points, emit_figure, fit_entanglement_length, g2_series, run_oracle, run_sweep,
    write_critical_csv, write_fit_csv, Measure, Preset, SweepConfig, SweepOutcome,
};
use xychain::{Error, ModelParams, StateKind};

#[derive(Parser)]
#[command(name = "xychain", version, about = "Ground-state correlators and entanglement of the XY chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the configured grid and write `table.csv`.
    Sweep { config: PathBuf },
    /// Run a figure preset and write its plot data.
    Figure { preset: String, config: PathBuf },
    /// Locate the critical points for each γ of the config.
    Critical { config: PathBuf },
    /// Compare against exact diagonalization of a finite chain.
    Oracle { config: PathBuf },
    /// Fit entanglement and correlation lengths.
    Fitlen { config: PathBuf },
}

enum Failure {
    Config(String),
    Numerical(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Numerical(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::ParameterDomain(_) | Error::InvalidInput(_) => Failure::Config(e.to_string()),
            Error::Io(_) | Error::Csv(_) => Failure::Io(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep { config } => cmd_sweep(&config),
        Command::Figure { preset, config } => cmd_figure(&preset, &config),
        Command::Critical { config } => cmd_critical(&config),
        Command::Oracle { config } => cmd_oracle(&config),
        Command::Fitlen { config } => cmd_fitlen(&config),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Config(m) | Failure::Numerical(m) | Failure::Io(m)) = &f;
            eprintln!("error: {m}");
            ExitCode::from(f.code())
        }
    }
}

fn load(path: &Path) -> Result<SweepConfig, Failure> {
    Ok(SweepConfig::load(path)?)
}

fn report(out: &SweepOutcome) -> Outcome {
    println!(
        "{}: {} rows ({} points computed, {} resumed)",
        out.table_path.display(),
        out.rows.len(),
        out.computed_points,
        out.resumed_points
    );
    let faults = out.faults();
    if faults > 0 {
        for r in out.rows.iter().filter(|r| r.fault.is_some()) {
            eprintln!(
                "fault at gamma={} lambda={} n={} {}: {}",
                r.gamma,
                r.lambda,
                r.n,
                r.state,
                r.fault.as_deref().unwrap_or_default()
            );
        }
        return Err(Failure::Numerical(format!("{faults} rows recorded numerical faults")));
    }
    Ok(())
}

fn cmd_sweep(path: &Path) -> Outcome {
    let cfg = load(path)?.resolved()?;
    let out = run_sweep(&cfg)?;
    report(&out)
}

fn cmd_figure(preset: &str, path: &Path) -> Outcome {
    let preset: Preset = preset.parse()?;
    let mut cfg = load(path)?.with_preset(preset)?;
    cfg.output = cfg.output.join(preset.to_string());
    let out = run_sweep(&cfg)?;
    let fig = emit_figure(preset, &out.rows, &cfg.output)?;
    for w in &fig.warnings {
        eprintln!("warning: {w}");
    }
    println!("{preset}: {} files in {}", fig.files.len(), cfg.output.display());
    report(&out)
}

fn cmd_critical(path: &Path) -> Outcome {
    let mut cfg = load(path)?.resolved()?;
    cfg.ns = vec![1];
    cfg.states = vec![StateKind::Symmetric, StateKind::Broken];
    cfg.measures = vec![Measure::Concurrence, Measure::G1];
    cfg.output = cfg.output.join("critical");
    let out = run_sweep(&cfg)?;
    let points = detect_critical_points(&out.rows);
    let fmt = |e: Option<sweep::CriticalEstimate>| match e {
        Some(e) => format!("{:.4} ± {:.4}", e.value, e.uncertainty),
        None => "none".to_string(),
    };
    for p in &points {
        println!("gamma {}: lambda1 {}, lambda2 {}", p.gamma, fmt(p.lambda1), fmt(p.lambda2));
        for f in &p.flags {
            println!("  flag: {f}");
        }
    }
    write_critical_csv(&cfg.output.join("critical.csv"), &points)?;
    report(&out)
}

fn cmd_oracle(path: &Path) -> Outcome {
    let cfg = load(path)?;
    let report = run_oracle(&cfg)?;
    std::fs::create_dir_all(&cfg.output).map_err(|e| Failure::Io(e.to_string()))?;
    let csv = cfg.output.join("oracle.csv");
    report.write_csv(&csv)?;
    let failures: Vec<_> = report.failures().collect();
    println!("{}: {} checks, {} outside tolerance", csv.display(), report.checks.len(), failures.len());
    for c in &failures {
        eprintln!(
            "gamma={} lambda={} n={} {} {}: ed {} vs [{}, {}]",
            c.gamma, c.lambda, c.n, c.state, c.quantity, c.ed, c.reference.lo, c.reference.hi
        );
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("{} oracle checks outside tolerance", failures.len())))
    }
}

fn cmd_fitlen(path: &Path) -> Outcome {
    let cfg = load(path)?;
    let f = &cfg.fit;
    let mut fits = Vec::new();
    for &g in &f.gammas {
        for &l in &f.lambdas {
            let params = ModelParams::new(g, l)?;
            let series = g2_series(&params, f.state, f.n_min, f.n_max)?;
            let fit = fit_entanglement_length(&series, &params)?;
            match &fit.rejection {
                None => println!(
                    "gamma {g} lambda {l}: xi_E {:.4}, xi_C {:.4}, ratio {:.3}",
                    fit.xi_e, fit.xi_c, fit.ratio
                ),
                Some(why) => println!("gamma {g} lambda {l}: exponential fit rejected ({why})"),
            }
            fits.push((g, l, fit));
        }
    }
    std::fs::create_dir_all(&cfg.output).map_err(|e| Failure::Io(e.to_string()))?;
    write_fit_csv(&cfg.output.join("fitlen.csv"), &fits)?;
    Ok(())
}
