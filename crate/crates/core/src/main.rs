use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dgflux::convergence::convergence_study;
use dgflux::scenario::{builtin, builtin_names, Scenario};
use dgflux::waves::{analyze_waves, WaveThresholds};
use dgflux::{Error, ProfileSnapshot};

/// Discontinuous Galerkin solver for 1-D conservation laws with
/// discontinuous flux parameters.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario (TOML file or `builtin:<name>`) and write snapshots.
    Run {
        config: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Observed convergence order on a mesh sequence.
    Convergence {
        config: String,
        #[arg(long, value_delimiter = ',', required = true)]
        meshes: Vec<usize>,
        /// Reference mesh; four times the finest by default.
        #[arg(long)]
        reference: Option<usize>,
    },
    /// Count the waves in a traffic snapshot.
    Analyze {
        snapshot: PathBuf,
        /// Position of the parameter jump.
        #[arg(long)]
        x0: f64,
        #[arg(long, default_value_t = WaveThresholds::default().plateau_tol)]
        plateau_tol: f64,
        #[arg(long, default_value_t = WaveThresholds::default().fan_width)]
        fan_width: usize,
    },
    /// List the built-in scenarios, optionally writing them as TOML files.
    ListBuiltin {
        #[arg(long)]
        write: Option<PathBuf>,
    },
}

fn load(config: &str) -> Result<Scenario, Error> {
    match config.strip_prefix("builtin:") {
        Some(name) => builtin(name).ok_or_else(|| {
            Error::Config(format!(
                "unknown built-in scenario '{name}' (known: {})",
                builtin_names().join(", ")
            ))
        }),
        None => Scenario::load(Path::new(config)),
    }
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::Run { config, out } => {
            let scenario = load(&config)?;
            let outcome = dgflux::run(&scenario, &out)?;
            let r = &outcome.report;
            println!(
                "{}: {} steps to t = {} in {:.2} s, conservation drift {:.3e}",
                scenario.name, r.steps, r.final_time, r.wall_time_s, r.conservation_drift
            );
            if r.edge_cells_changed {
                println!("note: waves reached a domain end");
            }
            for f in &r.snapshot_files {
                println!("{}", out.join(f).display());
            }
        }
        Command::Convergence {
            config,
            meshes,
            reference,
        } => {
            let scenario = load(&config)?;
            let table = convergence_study(&scenario, &meshes, reference)?;
            println!("reference cells: {}", table.reference_cells);
            println!("{:>8} {:>14} {:>8}", "cells", "L1 error", "order");
            for row in &table.rows {
                let order = row.order.map_or("-".into(), |p| format!("{p:.3}"));
                println!("{:>8} {:>14.6e} {:>8}", row.cells, row.l1_error, order);
            }
        }
        Command::Analyze {
            snapshot,
            x0,
            plateau_tol,
            fan_width,
        } => {
            let snap = ProfileSnapshot::read_csv(&snapshot)?;
            let thresholds = WaveThresholds {
                plateau_tol,
                fan_width,
                ..WaveThresholds::default()
            };
            let report = analyze_waves(&snap, x0, &thresholds);
            if report.inconclusive {
                println!("inconclusive: too few plateau cells");
            } else {
                println!("{} waves", report.count());
                for w in &report.waves {
                    let kind = match w.kind {
                        dgflux::waves::WaveKind::ShockLike => "shock-like",
                        dgflux::waves::WaveKind::FanLike => "fan-like",
                        dgflux::waves::WaveKind::ContactAtX0 => "contact-at-x0",
                    };
                    println!("{:>14.6} {:>14.6} {kind}", w.left, w.right);
                }
            }
        }
        Command::ListBuiltin { write } => {
            if let Some(dir) = &write {
                std::fs::create_dir_all(dir).map_err(|e| Error::Io {
                    path: dir.clone(),
                    source: e,
                })?;
            }
            for name in builtin_names() {
                println!("{name}");
                if let Some(dir) = &write {
                    let s = builtin(&name).expect("listed name");
                    let path = dir.join(format!("{name}.toml"));
                    std::fs::write(&path, s.to_toml_string())
                        .map_err(|e| Error::Io { path, source: e })?;
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
