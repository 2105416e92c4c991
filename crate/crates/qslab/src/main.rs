use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qslab::complementarity::{run_complementarity, ComplementarityConfig};
use qslab::figure1::{run_figure1, Figure1Config};
use qslab::thermo::run_thermo;
use qslab::verify::{light_optimizer, run_verify, VerifyConfig};
use qslab_core::dynamics::GeneratorProtocol;
use qslab_core::qstate::{observable_from_json, state_from_json};
use qslab_core::quantify::{bound_report, BasisOptimizerConfig};

/// Speed limits for observables: evaluate the bound chain, run the
/// random-ensemble minimal-time study, sweep complementarity sums, and
/// track entropy flow against thermal references.
#[derive(Parser)]
#[command(name = "qslab", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every speed bound for a state, observable, and generator.
    Bounds {
        /// State JSON: {"bloch": [x,y,z]} or {"kind":"state","dim":..,"entries":[[re,im],..]}.
        #[arg(long)]
        state: PathBuf,
        /// Observable JSON: {"axis": [x,y,z]} or the full matrix form.
        #[arg(long)]
        observable: PathBuf,
        /// Generator JSON, same forms as the observable; normalized internally.
        #[arg(long)]
        generator: PathBuf,
        /// Emit the report as JSON instead of text.
        #[arg(long)]
        json: bool,
        /// Seed for the basis-optimizer candidate streams.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random-ensemble comparison of achieved times against the
    /// coherence minimal time; writes a CSV and optionally an SVG.
    Figure1 {
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Fraction of trials driven by the bound-saturating protocol.
        #[arg(long, default_value_t = 0.15)]
        optimal_fraction: f64,
        /// CSV output path.
        #[arg(long)]
        out: PathBuf,
        /// Also write a scatter plot to this SVG path.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Coherence and speed sum rules over the three mutually unbiased
    /// qubit bases.
    Complementarity {
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Drive a state against a thermal reference and check the entropy
    /// flow cap at every step.
    Thermo {
        /// State JSON.
        #[arg(long)]
        state: PathBuf,
        /// Bath Hamiltonian JSON (observable forms).
        #[arg(long)]
        hb: PathBuf,
        /// Inverse temperature.
        #[arg(long)]
        beta: f64,
        /// Protocol JSON: {"tau":..,"dt":..,"segments":[{"axis":[..],"duration":..},..]}.
        #[arg(long)]
        protocol: PathBuf,
    },
    /// Randomized stress sweep of the whole bound chain.
    Verify {
        /// Random instances per dimension.
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Dimensions to sweep.
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 4])]
        dims: Vec<usize>,
    },
}

fn configure_threads() {
    if let Ok(raw) = std::env::var("QSLAB_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => eprintln!("warning: ignoring QSLAB_THREADS={raw} (want a positive integer)"),
        }
    }
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn write(path: &PathBuf, content: &str) -> Result<(), String> {
    std::fs::write(path, content).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Bounds {
            state,
            observable,
            generator,
            json,
            seed,
        } => {
            let rho = state_from_json(&read(&state)?).map_err(|e| e.to_string())?;
            let k = observable_from_json(&read(&observable)?).map_err(|e| e.to_string())?;
            let h = observable_from_json(&read(&generator)?).map_err(|e| e.to_string())?;
            let cfg = BasisOptimizerConfig {
                seed,
                ..Default::default()
            };
            let report = bound_report(&rho, &k, &h, &cfg).map_err(|e| e.to_string())?;
            if json {
                println!("{}", report.to_json());
            } else {
                let sat = |s: bool| if s { "  (saturated)" } else { "" };
                println!("dim {}  |K| = {:.6}  |H| = {:.6}", rho.dim(), report.k_norm, report.h_norm);
                println!("  speed v_K                      {:.9}", report.v_k);
                println!("  asymmetry ||[rho,K]||_1 / 2    {:.9}", report.asym);
                println!("  weak-value route               {:.9}", report.weakval_bound);
                println!("  sqrt(QFI) / 2                  {:.9}", report.qfi.sqrt() / 2.0);
                println!("  stddev K                       {:.9}", report.stddev_k);
                println!("  stddev H                       {:.9}", report.stddev_h);
                println!("  KD nonreality (K eigenbasis)   {:.9}", report.c_kd_nre);
                println!("  l1 coherence (K eigenbasis)    {:.9}", report.c_l1);
                println!("slacks:");
                println!("  variance product - speed       {:.3e}{}", report.slacks.eq2, sat(report.saturated.eq2));
                println!("  asymmetry - speed              {:.3e}{}", report.slacks.eq5, sat(report.saturated.eq5));
                println!("  Fisher route - asymmetry       {:.3e}{}", report.slacks.eq10, sat(report.saturated.eq10));
                println!("  stddev K - asymmetry           {:.3e}{}", report.slacks.eq12, sat(report.saturated.eq12));
                println!("  KD nonreality - asym / |K|     {:.3e}{}", report.slacks.eq15, sat(report.saturated.eq15));
                println!("  l1 - KD nonreality             {:.3e}{}", report.slacks.eq16, sat(report.saturated.eq16));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Figure1 {
            trials,
            seed,
            tau,
            dt,
            optimal_fraction,
            out,
            plot,
        } => {
            let cfg = Figure1Config {
                trials,
                seed,
                tau,
                dt,
                optimal_fraction,
            };
            let run = run_figure1(&cfg).map_err(|e| e.to_string())?;
            write(&out, &run.to_csv())?;
            println!(
                "{} trials ({} adaptive), worst slack {:.3e}",
                run.records.len(),
                run.optimal_count(),
                run.worst_slack()
            );
            if let Some(r) = run.min_optimal_ratio() {
                println!("worst adaptive tau_min / tau = {r:.6}");
            }
            println!("wrote {}", out.display());
            if let Some(path) = plot {
                write(&path, &run.to_svg())?;
                println!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Complementarity { samples, seed } => {
            let summary = run_complementarity(&ComplementarityConfig { samples, seed })
                .map_err(|e| e.to_string())?;
            print!("{}", summary.report());
            Ok(if summary.identities_ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Thermo {
            state,
            hb,
            beta,
            protocol,
        } => {
            let rho0 = state_from_json(&read(&state)?).map_err(|e| e.to_string())?;
            let bath = observable_from_json(&read(&hb)?).map_err(|e| e.to_string())?;
            let (proto, dt) =
                GeneratorProtocol::from_json(&read(&protocol)?).map_err(|e| e.to_string())?;
            let summary =
                run_thermo(&rho0, &bath, beta, &proto, dt).map_err(|e| e.to_string())?;
            print!("{}", summary.report());
            Ok(if summary.bound_ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Verify { cases, seed, dims } => {
            let cfg = VerifyConfig {
                cases,
                seed,
                dims,
                optimizer: light_optimizer(seed),
            };
            let summary = run_verify(&cfg).map_err(|e| e.to_string())?;
            print!("{}", summary.report());
            Ok(if summary.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
