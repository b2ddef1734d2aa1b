//! A steady free-flow state across a lane drop, held with and without the
//! interface mapping.
//!
//! `cargo run --release --example well_balanced`

use dgflux::{
    project_initial, BoundarySpec, CourantConfig, FluxConfig, Mesh, Side, Solver, TrafficModel,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = TrafficModel::new(3, 40.0, 1.0)?;
    let (left, right) = (vec![2.0, 0.5, 0.75, 1.0], vec![1.0, 0.25, 0.375, 0.5]);
    let ul: Vec<f64> = [0.02, 0.03, 0.01].iter().map(|r| left[0] * r).collect();
    let mut ur = vec![0.0; 3];
    let gamma = model.delta_map_traffic(&ul, &left, &right, Side::Demand, &mut ur)?;
    println!("mapped state {ur:.5?} with γ = {gamma}");

    let mesh = Mesh::from_fn(100.0, 100, 4, |x| {
        if x < 50.0 { left.clone() } else { right.clone() }
    })?;
    let bc = BoundarySpec::outflow();
    for mapping in [true, false] {
        let flux = FluxConfig { delta_mapping: mapping, ..FluxConfig::default() };
        let mut solver = Solver::new(&mesh, &model, flux, &bc, CourantConfig::new(0.3, 1)?, 1)?;
        let initial = project_initial(
            |x| if x < 50.0 { ul.clone() } else { ur.clone() },
            &mesh,
            1,
        )?;
        let start = solver.initialize(initial)?;
        let mut state = start.clone();
        for _ in 0..1000 {
            let dt = solver.stable_dt(&state)?;
            state = solver.step(&state, dt)?;
        }
        let drift = start
            .coeffs()
            .iter()
            .zip(state.coeffs())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        println!("mapping {mapping:<5}: max change after 1000 steps {drift:.3e}");
    }
    Ok(())
}
