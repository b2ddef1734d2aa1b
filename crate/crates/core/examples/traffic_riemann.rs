//! Runs the three-class Riemann problems on a road whose lane count and class
//! speeds jump at `x0`, writes the t = 400 s profiles and counts the waves.
//!
//! `cargo run --release --example traffic_riemann [4a|4b|5a|5b] [out_dir]`

use std::path::PathBuf;

use dgflux::scenario::{traffic_riemann, RiemannCase};
use dgflux::waves::{analyze_waves, WaveThresholds};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cases: Vec<RiemannCase> = match args.first() {
        Some(label) => vec![RiemannCase::parse(label).ok_or("case must be 4a, 4b, 5a or 5b")?],
        None => RiemannCase::ALL.to_vec(),
    };
    let out_dir = PathBuf::from(args.get(1).map_or("out/traffic", String::as_str));

    for case in cases {
        let scenario = traffic_riemann(case);
        let outcome = dgflux::run(&scenario, &out_dir)?;
        let snap = outcome.snapshots.last().expect("final snapshot");
        let report = analyze_waves(snap, case.x0(), &WaveThresholds::default());
        println!(
            "case {}: {} steps in {:.1} s, {} waves (expected {})",
            case.label(),
            outcome.report.steps,
            outcome.report.wall_time_s,
            report.count(),
            case.expected_waves()
        );
        for w in &report.waves {
            println!("  {:>10.1} .. {:>10.1}  {:?}", w.left, w.right, w.kind);
        }
    }
    Ok(())
}
