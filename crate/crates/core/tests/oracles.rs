//! The solver against computations written independently of it.

mod common;

use dgflux::flux::{interface_flux, llf_flux};
use dgflux::limiter::limit;
use dgflux::operator::semidiscrete_rhs;
use dgflux::state::DGState;
use dgflux::{
    project_initial, BoundarySpec, CourantConfig, ElasticModel, FluxConfig, Mesh, Solver,
    SystemModel, TrafficModel,
};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};

use common::{elastic_llf, LinearAdvection};

const BETA: f64 = 0.3;

fn elastic_wave(x: f64) -> Vec<f64> {
    let tau = std::f64::consts::TAU;
    vec![0.05 * (tau * x).sin(), 2.0 * 0.1 * (tau * x).cos()]
}

#[test]
fn degree_zero_step_is_the_finite_volume_update() {
    let (rho, k) = (2.0, 3.0);
    let model = ElasticModel::new(BETA).unwrap();
    let mesh = Mesh::uniform(1.0, 40, &[rho, k]).unwrap();
    let bc = BoundarySpec::periodic();
    let mut solver = Solver::new(
        &mesh,
        &model,
        FluxConfig::default(),
        &bc,
        CourantConfig::for_degree(0),
        0,
    )
    .unwrap();
    let mut state = solver
        .initialize(project_initial(elastic_wave, &mesh, 0).unwrap())
        .unwrap();
    let n = mesh.n_cells();
    let dx = mesh.dx();
    for _ in 0..25 {
        let dt = solver.stable_dt(&state).unwrap();
        let next = solver.step(&state, dt).unwrap();
        let avg = |j: usize| {
            let a = state.average(j % n);
            [a[0], a[1]]
        };
        for j in 0..n {
            let right = elastic_llf(avg(j), avg(j + 1), rho, k, BETA);
            let left = elastic_llf(avg(j + n - 1), avg(j), rho, k, BETA);
            for i in 0..2 {
                let fv = avg(j)[i] - dt / dx * (right[i] - left[i]);
                let dg = next.average(j)[i];
                assert!((fv - dg).abs() <= 1e-14, "cell {j} component {i}: {fv} vs {dg}");
            }
        }
        state = next;
    }
}

#[test]
fn projection_reproduces_polynomials_of_the_degree() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let model = LinearAdvection;
    let mesh = Mesh::uniform(3.0, 7, &[1.0]).unwrap();
    assert_eq!(model.n_components(), 1);
    for degree in 0..=2 {
        for _ in 0..20 {
            let c: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let p = |x: f64| c.iter().rev().fold(0.0, |acc, a| acc * x + a);
            let state = project_initial(|x| vec![p(x)], &mesh, degree).unwrap();
            let mut out = [0.0];
            for j in 0..mesh.n_cells() {
                for _ in 0..5 {
                    let s: f64 = rng.gen_range(-1.0..=1.0);
                    state.eval_into(j, s, &mut out);
                    let x = mesh.center(j) + 0.5 * mesh.dx() * s;
                    assert!((out[0] - p(x)).abs() <= 1e-13, "degree {degree}");
                }
            }
        }
    }
}

#[test]
fn elastic_mapping_matches_bisection() {
    let (de, dq) = common::elastic_mapping_errors(2000, 11);
    assert!(de <= 1e-10, "strain error {de}");
    assert!(dq <= 1e-14, "momentum error {dq}");
}

#[test]
fn traffic_mapping_matches_grid_search() {
    let (dg, dr) = common::traffic_mapping_errors(50, 1_000_000, 5);
    assert!(dg <= 1e-6, "γ error {dg}");
    assert!(dr <= 1e-12, "root outside its grid bracket by {dr}");
}

#[test]
fn traffic_jacobian_spectrum_interlaces() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(3);
    for _ in 0..500 {
        let m = rng.gen_range(1..=4);
        let model = TrafficModel::new(m, 40.0, 1.0).unwrap();
        let mut b: Vec<f64> = (0..m).map(|_| rng.gen_range(0.1..1.0)).collect();
        b.sort_by(f64::total_cmp);
        b.dedup();
        if b.len() < m {
            continue;
        }
        let a = rng.gen_range(1.0..4.0);
        let mut theta = vec![a];
        theta.extend(&b);
        let total = rng.gen_range(0.01..0.99);
        let mut rho: Vec<f64> = (0..m).map(|_| rng.gen_range(0.05..1.0)).collect();
        let norm: f64 = rho.iter().sum();
        rho.iter_mut().for_each(|r| *r *= total / norm);
        let u: Vec<f64> = rho.iter().map(|r| a * r).collect();

        let jac = DMatrix::from_row_slice(m, m, &model.jacobian(&u, &theta));
        let eig = jac.complex_eigenvalues();
        let scale = jac.norm().max(1.0);
        let mut lambda: Vec<f64> = eig
            .iter()
            .map(|z| {
                assert!(z.im.abs() <= 1e-9 * scale, "complex eigenvalue {z}");
                z.re
            })
            .collect();
        lambda.sort_by(f64::total_cmp);

        let v = 40.0 * (1.0 - total);
        let (lo, hi) = model.eigen_bounds(&u, &theta).unwrap();
        let tol = 1e-10 * scale;
        assert!(lambda[0] >= lo - tol && lambda[m - 1] <= hi + tol);
        for l in 0..m {
            // λ_l lies strictly below b_l v and, for l > 0, above b_{l-1} v
            assert!(lambda[l] < b[l] * v - 1e-13, "λ{l} = {} vs {}", lambda[l], b[l] * v);
            if l > 0 {
                assert!(lambda[l] > b[l - 1] * v + 1e-13);
                assert!(lambda[l] - lambda[l - 1] > 0.0);
            }
        }
    }
}

#[test]
fn ssp_rk2_is_heun_with_limiting() {
    let model = LinearAdvection;
    let mesh = Mesh::uniform(1.0, 50, &[1.0]).unwrap();
    let bc = BoundarySpec::periodic();
    let cfg = FluxConfig::default();
    let courant = CourantConfig::for_degree(1);
    let mut solver = Solver::new(&mesh, &model, cfg, &bc, courant, 1).unwrap();
    let square = |x: f64| vec![if (0.3..0.6).contains(&x) { 1.0 } else { 0.2 * x }];
    let mut state = solver
        .initialize(project_initial(square, &mesh, 1).unwrap())
        .unwrap();
    for _ in 0..10 {
        let dt = solver.stable_dt(&state).unwrap();
        let stepped = solver.step(&state, dt).unwrap();

        // u1 = Λ(u + Δt L(u)), u2 = Λ(½ u + ½ (u1 + Δt L(u1)))
        let limited = |coeffs: Vec<f64>| {
            let raw = DGState::from_coeffs(1, 1, mesh.n_cells(), coeffs).unwrap();
            limit(&raw, &mesh, &model, &cfg, &bc).unwrap()
        };
        let rhs = |u: &DGState| semidiscrete_rhs(u, &mesh, &model, &cfg, &bc, u.time).unwrap();
        let r0 = rhs(&state);
        let u1 = limited(state.coeffs().iter().zip(&r0).map(|(a, b)| a + dt * b).collect());
        let r1 = rhs(&u1);
        let u2 = limited(
            (0..r1.len())
                .map(|k| 0.5 * state.coeffs()[k] + 0.5 * (u1.coeffs()[k] + dt * r1[k]))
                .collect(),
        );
        for (k, (&c, &heun)) in stepped.coeffs().iter().zip(u2.coeffs()).enumerate() {
            assert!((c - heun).abs() <= 1e-14, "coefficient {k}: {c} vs {heun}");
        }
        state = stepped;
    }
}

#[test]
fn llf_dissipation_is_the_sound_speed() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(1);
    for beta in [0.0, BETA] {
        let model = ElasticModel::new(beta).unwrap();
        for _ in 0..1000 {
            let (rho, k) = (rng.gen_range(0.5..4.0), rng.gen_range(0.5..4.0));
            let ul = [rng.gen_range(-0.2..0.2), rng.gen_range(-1.0..1.0)];
            let ur = [rng.gen_range(-0.2..0.2), rng.gen_range(-1.0..1.0)];
            let got = llf_flux(&model, &ul, &ur, &[rho, k]).unwrap();
            let want = elastic_llf(ul, ur, rho, k, beta);
            for i in 0..2 {
                assert!((got[i] - want[i]).abs() <= 1e-14 * want[i].abs().max(1.0));
            }
        }
    }
    // linear regime: the dissipation coefficient is exactly sqrt(K / ρ)
    let model = ElasticModel::new(0.0).unwrap();
    let (rho, k) = (3.0, 3.0);
    let f = llf_flux(&model, &[0.0, 0.0], &[1.0, 0.0], &[rho, k]).unwrap();
    let c = (k / rho).sqrt();
    assert!((f[0] - (-0.5 * c)).abs() <= 1e-15);
}

#[test]
fn stationary_elastic_pair_has_matching_fluxes() {
    let model = ElasticModel::new(BETA).unwrap();
    let (a, b) = ([1.0, 1.0], [3.0, 3.0]);
    let strain_a = 0.12;
    let sigma = dgflux::elastic::stress(strain_a, a[1], BETA);
    let strain_b = common::elastic_strain_by_bisection(sigma, b[1], BETA);
    let f = interface_flux(
        &model,
        &[strain_a, 0.0],
        &a,
        &[strain_b, 0.0],
        &b,
        &FluxConfig::default(),
    )
    .unwrap();
    assert!(f[0].abs() <= 1e-15);
    assert!((f[1] + sigma).abs() <= 1e-14);
}
