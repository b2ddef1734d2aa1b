//! Drives a velocity pulse into an alternating two-material layered bar and
//! writes strain and stress profiles at the output times.
//!
//! `cargo run --release --example elastic_layered [t_end] [out_dir]`

use std::path::PathBuf;

use dgflux::scenario::{elastic_layered, DEFAULT_CELLS_PER_LAYER};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut scenario = elastic_layered(DEFAULT_CELLS_PER_LAYER)?;
    if let Some(t) = args.first() {
        scenario.t_end = t.parse()?;
        scenario.snapshots.retain(|&s| s <= scenario.t_end);
    }
    let out_dir = PathBuf::from(args.get(1).map_or("out/elastic", String::as_str));
    let outcome = dgflux::run(&scenario, &out_dir)?;
    println!(
        "{} steps in {:.1} s, conservation drift {:.2e}",
        outcome.report.steps, outcome.report.wall_time_s, outcome.report.conservation_drift
    );
    for name in &outcome.report.snapshot_files {
        println!("  wrote {}", out_dir.join(name).display());
    }
    Ok(())
}
