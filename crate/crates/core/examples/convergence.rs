//! Self-convergence of the scheme on a smooth single-class traffic wave, for
//! polynomial degrees 0, 1 and 2.
//!
//! `cargo run --release --example convergence`

use dgflux::convergence::convergence_study;
use dgflux::scenario::traffic_smooth;
use dgflux::CourantConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for degree in 0..=2 {
        let mut base = traffic_smooth();
        base.degree = degree;
        base.courant = Some(CourantConfig::for_degree(degree));
        let table = convergence_study(&base, &[100, 200, 400], None)?;
        println!("degree {degree} (reference {} cells)", table.reference_cells);
        for row in &table.rows {
            let order = row.order.map_or("-".to_string(), |p| format!("{p:.3}"));
            println!("  N = {:>4}  L1 = {:.3e}  order {order}", row.cells, row.l1_error);
        }
    }
    Ok(())
}
