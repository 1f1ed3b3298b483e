//! Scenario-driven laboratory harness for the oscillator-invariant crate.
//!
//! Exit codes: 0 — every gated check passed; 1 — a gated check failed or a
//! valid scenario failed at runtime; 2 — configuration error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tdho_core::phase::{phase_operator, PhaseNormalization};
use tdho_core::report::CheckStatus;
use tdho_harness::output::{output_dir, write_atomic};
use tdho_harness::runner::run_scenario;
use tdho_harness::scenario::parse_scenario;
use tdho_harness::sweep::{run_sweep, SweepFailure};

#[derive(Debug, Parser)]
#[command(name = "tdho-lab")]
#[command(about = "invariant checks for the time-dependent harmonic oscillator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scenario, writing the JSON report and the CSV time series.
    Run { scenario: PathBuf },
    /// Run a scenario without emitting CSV artifacts.
    Check { scenario: PathBuf },
    /// Run a scenario template over a parameter grid.
    Sweep {
        scenario: PathBuf,
        /// Grid specification `path.to.field=v1,v2,...`; repeatable.
        #[arg(long = "grid")]
        grid: Vec<String>,
    },
    /// Dump the coherent-state phase operator as CSV (row, col, re, im).
    PhaseMatrix {
        /// Fock dimension (at least 4).
        #[arg(long)]
        dim: usize,
        /// Normalization convention.
        #[arg(long, value_enum, default_value_t = NormArg::Pi)]
        norm: NormArg,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NormArg {
    /// Include the 1/π that unit-normalizes the coherent-state resolution.
    Pi,
    /// Bare integral, π times larger.
    None,
}

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { scenario } => run_command(&scenario, true),
        Command::Check { scenario } => run_command(&scenario, false),
        Command::Sweep { scenario, grid } => sweep_command(&scenario, &grid),
        Command::PhaseMatrix { dim, norm, out } => phase_matrix_command(dim, norm, &out),
    }
}

fn read_scenario_file(path: &Path) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("config error: cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_CONFIG)
    })
}

fn run_command(path: &Path, emit_csv: bool) -> ExitCode {
    let text = match read_scenario_file(path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let scenario = match parse_scenario(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let mut outcome = match run_scenario(&scenario) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_FAIL);
        }
    };

    let dir = output_dir().join(&scenario.name);
    if emit_csv {
        let csv_path = dir.join("series.csv");
        if let Err(e) = write_atomic(&csv_path, &outcome.series_csv) {
            eprintln!("run failed: cannot write {}: {e}", csv_path.display());
            return ExitCode::from(EXIT_FAIL);
        }
        outcome.report.series_csv = Some(csv_path.to_string_lossy().into_owned());
    }
    let json =
        serde_json::to_string_pretty(&outcome.report).expect("report serialization cannot fail");
    let report_path = dir.join("report.json");
    if let Err(e) = write_atomic(&report_path, &json) {
        eprintln!("run failed: cannot write {}: {e}", report_path.display());
        return ExitCode::from(EXIT_FAIL);
    }

    for check in &outcome.report.checks {
        let verdict = match check.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Documented => "INFO",
        };
        let block = check
            .block
            .map(|b| format!(" block={b}"))
            .unwrap_or_default();
        let tolerance = check
            .tolerance
            .map(|t| format!(" tol={t:.3e}"))
            .unwrap_or_default();
        println!(
            "[{verdict}] {name}{block} value={value:.6e}{tolerance}",
            name = check.name,
            value = check.value,
        );
    }
    println!(
        "scenario {}: {} ({})",
        outcome.report.scenario,
        outcome.report.status.to_uppercase(),
        report_path.display()
    );
    if outcome.report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn sweep_command(path: &Path, grid: &[String]) -> ExitCode {
    let text = match read_scenario_file(path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sweep".to_string());
    let report = match run_sweep(&name, &text, grid) {
        Ok(r) => r,
        Err(SweepFailure::Config(e)) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_CONFIG);
        }
        Err(SweepFailure::Run(e)) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_FAIL);
        }
    };

    for run in &report.runs {
        let worst = run
            .worst_gated
            .as_ref()
            .map(|c| {
                format!(
                    " worst={} value={:.6e} tol={:.3e}",
                    c.name,
                    c.value,
                    c.tolerance.unwrap_or(f64::NAN)
                )
            })
            .unwrap_or_default();
        println!("[{}] {}{}", run.status.to_uppercase(), run.overrides, worst);
    }
    let json = serde_json::to_string_pretty(&report).expect("sweep serialization cannot fail");
    let report_path = output_dir().join(format!("{name}-sweep.json"));
    if let Err(e) = write_atomic(&report_path, &json) {
        eprintln!("run failed: cannot write {}: {e}", report_path.display());
        return ExitCode::from(EXIT_FAIL);
    }
    println!(
        "sweep {}: {} ({})",
        name,
        if report.all_pass { "PASS" } else { "FAIL" },
        report_path.display()
    );
    if report.all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn phase_matrix_command(dim: usize, norm: NormArg, out: &Path) -> ExitCode {
    let normalization = match norm {
        NormArg::Pi => PhaseNormalization::InversePi,
        NormArg::None => PhaseNormalization::Bare,
    };
    let phi = match phase_operator(dim, normalization) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let mut csv = String::with_capacity(dim * dim * 48 + 16);
    csv.push_str("row,col,re,im\n");
    for row in 0..dim {
        for col in 0..dim {
            let v = phi.matrix[(row, col)];
            csv.push_str(&format!("{row},{col},{:.16e},{:.16e}\n", v.re, v.im));
        }
    }
    if let Err(e) = write_atomic(out, &csv) {
        eprintln!("run failed: cannot write {}: {e}", out.display());
        return ExitCode::from(EXIT_FAIL);
    }
    println!("wrote {} ({dim}x{dim} phase operator)", out.display());
    ExitCode::SUCCESS
}
