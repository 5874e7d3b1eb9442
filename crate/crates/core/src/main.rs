use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use semiorbit::bench::{self, certificate_json, summary_line, write_run, CertifyOptions, Mode, Scenario, Verdict};
use semiorbit::interp::{omega_scan, omega_scan_csv};
use semiorbit::phi::{uniform_grid, validate_phi, ComparisonFunction};
use semiorbit::Error;

/// Certify orbital-decay hypotheses and the norm inequalities they imply.
///
/// Exit codes: 0 certified, 1 hypothesis failed, 2 violation, 3 input error.
#[derive(Parser)]
#[command(name = "semiorbit", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Orbit horizon ends where phi(omega t) drops below this.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tail_tol: f64,
    /// Relative slack on inequality margins.
    #[arg(long, global = true, default_value_t = 1e-9)]
    ineq_tol: f64,
    /// Overrides the seed of randomized generators.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Geometric points in the orbit time grid.
    #[arg(long, global = true, default_value_t = 512)]
    grid_points: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Certify a scenario file.
    Certify {
        file: PathBuf,
        #[arg(long)]
        mode: Option<Mode>,
        /// Write the certificate and sidecar CSVs here instead of printing JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify a built-in scenario (see `list`).
    Demo {
        name: String,
        #[arg(long)]
        mode: Option<Mode>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the direct and interpolated bounds over a list of omegas.
    ScanOmega {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        omegas: Vec<f64>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check admissibility of a comparison function.
    PhiCheck {
        /// exp, quad or custom:PATH
        phi: String,
        #[arg(long, default_value_t = 100.0)]
        tmax: f64,
        #[arg(long, default_value_t = 1000)]
        points: usize,
    },
    /// Print the scenario catalog.
    List,
}

fn options(g: &GlobalOpts) -> CertifyOptions {
    let mut opts = CertifyOptions::default();
    opts.time_grid.tail_tol = g.tail_tol;
    opts.time_grid.points = g.grid_points;
    opts.ineq_tol = g.ineq_tol;
    opts
}

fn input_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(Verdict::InputError.exit_code() as u8)
}

fn certify(scenario: Scenario, mode: Option<Mode>, out: Option<&Path>, g: &GlobalOpts) -> ExitCode {
    let scenario = match g.seed {
        Some(seed) => match scenario.reseeded(seed) {
            Ok(s) => s,
            Err(e) => return input_error(e),
        },
        None => scenario,
    };
    let mode = mode.unwrap_or_else(|| Mode::default_for(scenario.norm));
    let cert = bench::run_certify(&scenario, mode, &options(g));
    match out {
        Some(dir) => {
            if let Err(e) = write_run(dir, &cert) {
                return input_error(e);
            }
            println!("{}", summary_line(&cert));
        }
        None => print!("{}", certificate_json(&cert)),
    }
    ExitCode::from(cert.exit_code as u8)
}

fn run(cli: Cli) -> ExitCode {
    let g = &cli.global;
    match cli.command {
        Command::Certify { file, mode, out } => match bench::parse_scenario(&file) {
            Ok(s) => certify(s, mode, out.as_deref(), g),
            Err(e) => input_error(e),
        },
        Command::Demo { name, mode, out } => match bench::find(&name) {
            Some(s) => certify(s, mode, out.as_deref(), g),
            None => input_error(format!("no catalog scenario named `{name}`; try `semiorbit list`")),
        },
        Command::ScanOmega { file, omegas, out } => {
            let s = match bench::parse_scenario(&file) {
                Ok(s) => s,
                Err(e) => return input_error(e),
            };
            let rows = match omega_scan(&s.generator, &s.f, s.norm, &omegas, &options(g).solver) {
                Ok(r) => r,
                Err(e) => return input_error(e),
            };
            let csv = omega_scan_csv(&rows);
            match out {
                Some(p) => {
                    if let Err(e) = std::fs::write(&p, csv) {
                        return input_error(Error::Io { path: p, source: e });
                    }
                }
                None => print!("{csv}"),
            }
            ExitCode::SUCCESS
        }
        Command::PhiCheck { phi, tmax, points } => {
            let phi = match ComparisonFunction::from_name(&phi, None) {
                Ok(p) => p,
                Err(e) => return input_error(e),
            };
            let grid = uniform_grid(tmax, points);
            match validate_phi(&phi, &grid) {
                Ok(report) => {
                    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
                    if report.pass {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(Verdict::HypothesisFailed.exit_code() as u8)
                    }
                }
                Err(e) => input_error(e),
            }
        }
        Command::List => {
            for e in bench::catalog_entries() {
                let s = &e.scenario;
                println!(
                    "{:<12} ({:>3}) n={} phi={} expected={:?}  {}",
                    s.name,
                    e.label,
                    s.generator.dim(),
                    s.phi_name,
                    s.expected,
                    e.description
                );
            }
            ExitCode::SUCCESS
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                Verdict::InputError.exit_code()
            } else {
                0
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    run(cli)
}
