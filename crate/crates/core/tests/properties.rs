//! Invariants of the mapping, fluxes, limiter and time stepping on random
//! inputs.

mod common;

use dgflux::flux::{delta_map, interface_flux};
use dgflux::limiter::limit;
use dgflux::model::Sign;
use dgflux::state::DGState;
use dgflux::{
    project_initial, BoundarySpec, CourantConfig, ElasticModel, FluxConfig, Mesh, Side, Solver,
    SystemModel, TrafficModel,
};
use proptest::prelude::*;

use common::LinearAdvection;

const V_FREE: f64 = 40.0;

fn side() -> impl Strategy<Value = Side> {
    prop_oneof![Just(Side::Demand), Just(Side::Supply)]
}

/// `(a, b_1 < … < b_m)` with `m` classes.
fn traffic_theta(m: usize) -> impl Strategy<Value = Vec<f64>> {
    (1.0..4.0f64, prop::collection::vec(0.1..1.0f64, m)).prop_map(|(a, mut b)| {
        b.sort_by(f64::total_cmp);
        let mut theta = vec![a];
        theta.extend(b);
        theta
    })
}

/// Class densities per lane with total in `[0, 1)`.
fn class_densities(m: usize) -> impl Strategy<Value = Vec<f64>> {
    (0.0..0.999f64, prop::collection::vec(0.01..1.0f64, m)).prop_map(|(total, mut r)| {
        let norm: f64 = r.iter().sum();
        r.iter_mut().for_each(|x| *x *= total / norm);
        r
    })
}

fn traffic_case() -> impl Strategy<Value = (usize, Vec<f64>, Vec<f64>, Vec<f64>, Side)> {
    (1usize..=4).prop_flat_map(|m| {
        (
            Just(m),
            class_densities(m),
            traffic_theta(m),
            traffic_theta(m),
            side(),
        )
    })
}

fn flux_of(model: &dyn SystemModel, u: &[f64], theta: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; u.len()];
    model.flux(u, theta, &mut out).unwrap();
    out
}

fn total_variation(state: &DGState) -> f64 {
    let n = state.n_cells();
    (0..n)
        .map(|j| (state.average((j + 1) % n)[0] - state.average(j)[0]).abs())
        .sum()
}

proptest! {
    #[test]
    fn elastic_mapping_keeps_the_flux(
        beta in 0.0..0.5f64,
        strain in -0.3..1.0f64,
        momentum in -2.0..2.0f64,
        from in (0.5..4.0f64, 0.5..4.0f64),
        to in (0.5..4.0f64, 0.5..4.0f64),
        side in side(),
    ) {
        let model = ElasticModel::new(beta).unwrap();
        let (from, to) = ([from.0, from.1], [to.0, to.1]);
        let u = [strain, momentum];
        prop_assume!(model.check_admissible(&u, &from).is_ok());
        let mapped = delta_map(&model, &u, &from, &to, side).unwrap();
        prop_assert_eq!(mapped.gamma, 1.0);
        let f_from = flux_of(&model, &u, &from);
        let f_to = flux_of(&model, &mapped.state, &to);
        for i in 0..2 {
            prop_assert!((f_to[i] - f_from[i]).abs() <= 1e-12 * f_from[i].abs().max(1.0));
        }
        // the mapped state stays hyperbolic, so λ1 < 0 < λ2 on both sides
        prop_assert!(model.check_admissible(&mapped.state, &to).is_ok());
    }

    #[test]
    fn traffic_mapping_invariants((m, rho, from, to, side) in traffic_case()) {
        let model = TrafficModel::new(m, V_FREE, 1.0).unwrap();
        let u: Vec<f64> = rho.iter().map(|r| from[0] * r).collect();
        let mapped = delta_map(&model, &u, &from, &to, side).unwrap();
        let gamma = mapped.gamma;
        prop_assert!((0.0..=1.0).contains(&gamma));

        // f(δu, θ_to) = γ f(u, θ_from); near jam the flux amplifies rounding in
        // the mapped density by ρ/(1 − ρ), so the bound is absolute
        let f_from = flux_of(&model, &u, &from);
        let f_to = flux_of(&model, &mapped.state, &to);
        for l in 0..m {
            prop_assert!((f_to[l] - gamma * f_from[l]).abs() <= 1e-10,
                "class {}: {} vs {}", l, f_to[l], gamma * f_from[l]);
        }

        // the mapped flow never exceeds the capacity
        let p = model.params();
        let mapped_total = model.total_density(&mapped.state, &to);
        prop_assert!(p.flow(mapped_total) <= p.capacity() * (1.0 + 1e-12));
        prop_assert!((0.0..=1.0 + 1e-12).contains(&mapped_total));

        // λ1 keeps its sign; a capacity-limited state lands on ρ* itself
        let before = model.lambda1_sign(&u, &from);
        let after = model.lambda1_sign(&mapped.state, &to);
        let near_critical = (mapped_total - p.critical_density()).abs() <= 1e-7;
        match before {
            Sign::Positive => prop_assert!(after == Sign::Positive || near_critical),
            Sign::Negative => prop_assert!(after == Sign::Negative || near_critical),
            Sign::Zero => prop_assert!(near_critical),
        }
        if gamma < 1.0 {
            prop_assert!(near_critical);
        }

        // class fractions follow the α-weights
        let alpha: Vec<f64> = (0..m).map(|l| from[1 + l] * from[0] / (to[1 + l] * to[0])).collect();
        let weighted: f64 = (0..m).map(|l| alpha[l] * rho[l]).sum();
        if weighted > 1e-12 && mapped_total > 1e-12 {
            for l in 0..m {
                let fraction = mapped.state[l] / to[0] / mapped_total;
                prop_assert!((fraction - alpha[l] * rho[l] / weighted).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn interface_flux_is_consistent((m, rho, theta, _other, _side) in traffic_case(),
                                    strain in -0.3..1.0f64, momentum in -2.0..2.0f64) {
        let traffic = TrafficModel::new(m, V_FREE, 1.0).unwrap();
        let u: Vec<f64> = rho.iter().map(|r| theta[0] * r).collect();
        let elastic = ElasticModel::new(0.3).unwrap();
        let e = [strain, momentum];
        let e_theta = [2.0, 3.0];
        for cfg in [FluxConfig::default(), FluxConfig { delta_mapping: false, ..FluxConfig::default() }] {
            let f = interface_flux(&traffic, &u, &theta, &u, &theta, &cfg).unwrap();
            let exact = flux_of(&traffic, &u, &theta);
            for l in 0..m {
                prop_assert!((f[l] - exact[l]).abs() <= 1e-14 * exact[l].abs().max(1.0));
            }
            let f = interface_flux(&elastic, &e, &e_theta, &e, &e_theta, &cfg).unwrap();
            let exact = flux_of(&elastic, &e, &e_theta);
            for i in 0..2 {
                prop_assert!((f[i] - exact[i]).abs() <= 1e-14 * exact[i].abs().max(1.0));
            }
        }
    }

    #[test]
    fn limiter_keeps_averages_and_is_idempotent(
        degree in 1usize..=2,
        coeffs in prop::collection::vec(-0.2..0.2f64, 3 * 2 * 24),
        periodic in any::<bool>(),
    ) {
        let model = ElasticModel::new(0.3).unwrap();
        let mesh = Mesh::from_fn(24.0, 24, 2, |x| {
            if (x as usize / 3).is_multiple_of(2) { vec![1.0, 1.0] } else { vec![3.0, 3.0] }
        }).unwrap();
        let bc = if periodic { BoundarySpec::periodic() } else { BoundarySpec::outflow() };
        let cfg = FluxConfig::default();
        let nb = degree + 1;
        let state = DGState::from_coeffs(degree, 2, 24, coeffs[..nb * 2 * 24].to_vec()).unwrap();
        let once = limit(&state, &mesh, &model, &cfg, &bc).unwrap();
        for j in 0..24 {
            prop_assert_eq!(once.average(j), state.average(j));
        }
        let twice = limit(&once, &mesh, &model, &cfg, &bc).unwrap();
        for (a, b) in once.coeffs().iter().zip(twice.coeffs()) {
            prop_assert!((a - b).abs() <= 1e-14);
        }
    }

    #[test]
    fn traffic_mass_balance_across_a_widening(
        upstream in prop::collection::vec(0.0..0.4f64, 15),
        downstream in prop::collection::vec(0.0..0.05f64, 15),
        split in prop::collection::vec(0.1..0.9f64, 30),
    ) {
        // free flow from one lane onto two faster lanes; downstream densities
        // stay low enough that their averages mapped upstream are below
        // capacity, so no trace reaches the critical density
        let rho: Vec<f64> = upstream.iter().chain(&downstream).copied().collect();
        let model = TrafficModel::new(2, V_FREE, 1.0).unwrap();
        let mesh = Mesh::from_fn(30.0, 30, 3, |x| {
            if x < 15.0 { vec![1.0, 0.25, 0.5] } else { vec![2.0, 0.5, 1.0] }
        }).unwrap();
        let bc = BoundarySpec::outflow();
        let mut solver = Solver::new(&mesh, &model, FluxConfig::default(), &bc,
                                     CourantConfig::for_degree(1), 1).unwrap();
        let initial = project_initial(|x| {
            let j = (x as usize).min(29);
            let a = mesh.theta(j)[0];
            vec![a * rho[j] * split[j], a * rho[j] * (1.0 - split[j])]
        }, &mesh, 1).unwrap();
        let mut state = solver.initialize(initial).unwrap();
        let before = state.total(mesh.dx());
        for _ in 0..20 {
            let dt = solver.stable_dt(&state).unwrap();
            state = solver.step(&state, dt).unwrap();
            for j in 0..30 {
                prop_assert!(model.check_admissible(state.average(j), mesh.theta(j)).is_ok());
            }
        }
        let after = state.total(mesh.dx());
        let inflow = solver.net_boundary_inflow();
        for i in 0..2 {
            let defect = after[i] - before[i] - inflow[i];
            prop_assert!(defect.abs() <= 1e-12 * before[i].abs().max(1.0), "defect {}", defect);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn minmod_rk2_is_total_variation_diminishing(
        values in prop::collection::vec(-1.0..1.0f64, 40),
        slopes in prop::collection::vec(-1.0..1.0f64, 40),
        speed in 0.2..3.0f64,
    ) {
        let model = LinearAdvection;
        let mesh = Mesh::uniform(1.0, 40, &[speed]).unwrap();
        let bc = BoundarySpec::periodic();
        let mut solver = Solver::new(&mesh, &model, FluxConfig::default(), &bc,
                                     CourantConfig::new(1.0 / 3.0, 1).unwrap(), 1).unwrap();
        let mut coeffs = Vec::with_capacity(80);
        for j in 0..40 {
            coeffs.extend([values[j], slopes[j]]);
        }
        let raw = DGState::from_coeffs(1, 1, 40, coeffs).unwrap();
        let mut state = solver.initialize(raw).unwrap();
        let mut tv = total_variation(&state);
        for _ in 0..30 {
            let dt = solver.stable_dt(&state).unwrap();
            state = solver.step(&state, dt).unwrap();
            let next = total_variation(&state);
            prop_assert!(next <= tv + 1e-12, "TV grew from {} to {}", tv, next);
            tv = next;
        }
    }
}
