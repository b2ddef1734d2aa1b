//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use dgflux::error::ModelError;
use dgflux::model::{Side, SystemModel};

/// Solves `K e + β K² e² = sigma` for the root on the branch with
/// `dσ/de > 0` by bisection.
pub fn elastic_strain_by_bisection(sigma: f64, k: f64, beta: f64) -> f64 {
    let f = |e: f64| k * e + beta * k * k * e * e - sigma;
    let mut lo = if beta > 0.0 {
        -1.0 / (2.0 * beta * k)
    } else {
        -1e6
    };
    let mut hi = lo.abs().max(1.0);
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi.abs().max(lo.abs()) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Result of the grid search for the traffic mapping.
#[derive(Debug, Clone, Copy)]
pub struct BruteForceMap {
    pub gamma: f64,
    /// Neighboring grid densities on the allowed branch between which
    /// `q(δρ) − γ S` changes sign.
    pub bracket: (f64, f64),
}

/// Maximizes `γ ≤ 1` with `q(δρ) = γ S` over `δρ` on a uniform grid of
/// `points + 1` values in `[0, ρ_jam]`, keeping only densities on the side of
/// `ρ*` allowed by the sign of `λ_1` (the critical density itself is allowed
/// on both sides). The root is bracketed by the first pair of neighboring
/// allowed grid points where `q − γ S` changes sign.
pub fn traffic_map_brute_force(
    u: &[f64],
    theta_from: &[f64],
    theta_to: &[f64],
    side: Side,
    v_free: f64,
    rho_jam: f64,
    points: usize,
) -> BruteForceMap {
    let m = u.len();
    let a_from = theta_from[0];
    let rho: f64 = u.iter().sum::<f64>() / a_from;
    let v = v_free * (1.0 - rho / rho_jam);
    let demand: f64 = (0..m)
        .map(|l| {
            let alpha = theta_from[1 + l] * a_from / (theta_to[1 + l] * theta_to[0]);
            alpha * u[l] / a_from
        })
        .sum::<f64>()
        * v;
    let critical = 0.5 * rho_jam;
    let lambda1 = critical - rho;
    let free_side = lambda1 > 0.0 || (lambda1 == 0.0 && side == Side::Demand);
    let q = |r: f64| r * v_free * (1.0 - r / rho_jam);
    // grid points within rounding of ρ* count as ρ* itself
    let slack = 1e-12 * rho_jam;
    let allowed = |r: f64| {
        if free_side {
            r <= critical + slack
        } else {
            r >= critical - slack
        }
    };

    let grid = |i: usize| rho_jam * i as f64 / points as f64;
    let mut best_flow: f64 = 0.0;
    for i in 0..=points {
        let r = grid(i);
        if allowed(r) {
            best_flow = best_flow.max(q(r));
        }
    }
    let gamma = if demand > 0.0 {
        (best_flow / demand).min(1.0)
    } else {
        1.0
    };
    let target = if gamma < 1.0 { best_flow } else { demand };
    let mut bracket = (f64::NAN, f64::NAN);
    for i in 0..points {
        let (r0, r1) = (grid(i), grid(i + 1));
        if allowed(r0) && allowed(r1) && (q(r0) - target) * (q(r1) - target) <= 0.0 {
            bracket = (r0, r1);
            break;
        }
    }
    BruteForceMap { gamma, bracket }
}

/// `ρ(x, t)` for `ρ_t + (ρ(1 − ρ))_x = 0` with smooth periodic data `rho0`
/// before shocks form, following the characteristic through `x` back to
/// its foot `ξ` with `x = ξ + (1 − 2 ρ0(ξ)) t` (Newton's method).
pub fn lwr_characteristic_solution(
    rho0: &dyn Fn(f64) -> (f64, f64),
    x: f64,
    t: f64,
) -> f64 {
    let (r, _) = rho0(x);
    let mut xi = x - (1.0 - 2.0 * r) * t;
    for _ in 0..100 {
        let (r, dr) = rho0(xi);
        let g = xi + (1.0 - 2.0 * r) * t - x;
        let dg = 1.0 - 2.0 * dr * t;
        let step = g / dg;
        xi -= step;
        if step.abs() < 1e-16 {
            break;
        }
    }
    rho0(xi).0
}

/// Mean of `f` over `[a, b]` with the 5-point Gauss rule on `parts` equal
/// sub-intervals.
pub fn gauss_mean(f: &dyn Fn(f64) -> f64, a: f64, b: f64, parts: usize) -> f64 {
    let s = (245.0_f64 - 14.0 * (70.0_f64).sqrt()).sqrt() / 21.0;
    let t = (245.0_f64 + 14.0 * (70.0_f64).sqrt()).sqrt() / 21.0;
    let ws = (322.0 + 13.0 * (70.0_f64).sqrt()) / 900.0;
    let wt = (322.0 - 13.0 * (70.0_f64).sqrt()) / 900.0;
    let nodes = [(-t, wt), (-s, ws), (0.0, 128.0 / 225.0), (s, ws), (t, wt)];
    let h = (b - a) / parts as f64;
    let mut sum = 0.0;
    for p in 0..parts {
        let c = a + (p as f64 + 0.5) * h;
        for (z, w) in nodes {
            sum += w * f(c + 0.5 * h * z);
        }
    }
    sum / (2.0 * parts as f64)
}

/// `u_t + c u_x = 0` with `θ = (c)`; mapping between speeds of equal sign
/// scales the state so the flux is kept.
#[derive(Debug, Clone, Copy)]
pub struct LinearAdvection;

impl SystemModel for LinearAdvection {
    fn name(&self) -> &'static str {
        "advection"
    }
    fn n_components(&self) -> usize {
        1
    }
    fn n_theta(&self) -> usize {
        1
    }
    fn validate_theta(&self, theta: &[f64]) -> Result<(), ModelError> {
        if theta[0] > 0.0 {
            Ok(())
        } else {
            Err(ModelError::InvalidTheta {
                theta: theta.to_vec(),
                reason: "speed must be positive".into(),
            })
        }
    }
    fn check_admissible(&self, u: &[f64], _theta: &[f64]) -> Result<(), ModelError> {
        if u[0].is_finite() {
            Ok(())
        } else {
            Err(ModelError::Inadmissible {
                state: u.to_vec(),
                reason: "non-finite".into(),
            })
        }
    }
    fn flux(&self, u: &[f64], theta: &[f64], out: &mut [f64]) -> Result<(), ModelError> {
        out[0] = theta[0] * u[0];
        Ok(())
    }
    fn eigen_bounds(&self, _u: &[f64], theta: &[f64]) -> Result<(f64, f64), ModelError> {
        Ok((theta[0], theta[0]))
    }
    fn delta_map(
        &self,
        u: &[f64],
        theta_from: &[f64],
        theta_to: &[f64],
        _side: Side,
        out: &mut [f64],
    ) -> Result<f64, ModelError> {
        out[0] = u[0] * theta_from[0] / theta_to[0];
        Ok(1.0)
    }
    fn from_primitive(&self, prim: &[f64], _theta: &[f64], out: &mut [f64]) {
        out.copy_from_slice(prim);
    }
    fn to_primitive(&self, u: &[f64], _theta: &[f64], out: &mut [f64]) {
        out.copy_from_slice(u);
    }
    fn observable_names(&self) -> Vec<String> {
        vec!["u".into()]
    }
    fn observables(&self, u: &[f64], _theta: &[f64]) -> Vec<f64> {
        u.to_vec()
    }
}

/// Elastic LLF flux written out from the model equations, for `(ρ, K)` and
/// `β`.
pub fn elastic_llf(ul: [f64; 2], ur: [f64; 2], rho: f64, k: f64, beta: f64) -> [f64; 2] {
    let sigma = |e: f64| k * e + beta * k * k * e * e;
    let c = |e: f64| ((k + 2.0 * beta * k * k * e) / rho).sqrt();
    let fl = [-ul[1] / rho, -sigma(ul[0])];
    let fr = [-ur[1] / rho, -sigma(ur[0])];
    let alpha = c(ul[0]).max(c(ur[0]));
    [
        0.5 * (fl[0] + fr[0]) - 0.5 * alpha * (ur[0] - ul[0]),
        0.5 * (fl[1] + fr[1]) - 0.5 * alpha * (ur[1] - ul[1]),
    ]
}

/// Largest disagreement between the closed-form elastic mapping and the
/// bisection root over `samples` random states and parameter pairs:
/// `(strain error, momentum error)`, both relative to `max(1, |value|)`.
pub fn elastic_mapping_errors(samples: usize, seed: u64) -> (f64, f64) {
    use dgflux::elastic::{delta_map_elastic, stress};
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let (mut de, mut dq) = (0.0_f64, 0.0_f64);
    for _ in 0..samples {
        let beta = rng.gen_range(0.0..0.5);
        let from = [rng.gen_range(0.5..4.0), rng.gen_range(0.5..4.0)];
        let to = [rng.gen_range(0.5..4.0), rng.gen_range(0.5..4.0)];
        // keep dσ/dε > 0 at the sample
        let floor: f64 = if beta > 0.0 { -0.45 / (beta * from[1]) } else { -1.0 };
        let strain = rng.gen_range(floor.max(-1.0)..1.0);
        let momentum = rng.gen_range(-2.0..2.0);
        let (mapped, gamma) = delta_map_elastic([strain, momentum], from, to, beta).unwrap();
        assert_eq!(gamma, 1.0);
        let sigma = stress(strain, from[1], beta);
        let e_ref = elastic_strain_by_bisection(sigma, to[1], beta);
        let q_ref = momentum / from[0] * to[0];
        de = de.max((mapped[0] - e_ref).abs() / e_ref.abs().max(1.0));
        dq = dq.max((mapped[1] - q_ref).abs() / q_ref.abs().max(1.0));
    }
    (de, dq)
}

/// Largest disagreement between the traffic mapping and the grid search over
/// `samples` random states: `(γ error, distance of the mapped total density
/// outside the grid bracket of the root)`. The second value is zero when the
/// root lies in the bracket, which is `ρ_jam / grid_points` wide.
pub fn traffic_mapping_errors(samples: usize, grid_points: usize, seed: u64) -> (f64, f64) {
    use dgflux::TrafficModel;
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let (mut dg, mut dr) = (0.0_f64, 0.0_f64);
    for _ in 0..samples {
        let m = rng.gen_range(1..=4);
        let (v_free, rho_jam) = (rng.gen_range(1.0..50.0), rng.gen_range(0.5..2.0));
        let model = TrafficModel::new(m, v_free, rho_jam).unwrap();
        let random_theta = |rng: &mut rand::rngs::StdRng| {
            let mut b: Vec<f64> = (0..m).map(|_| rng.gen_range(0.2..1.0)).collect();
            b.sort_by(f64::total_cmp);
            let mut theta = vec![rng.gen_range(1.0..4.0)];
            theta.extend(b);
            theta
        };
        let from = random_theta(&mut rng);
        let to = random_theta(&mut rng);
        let total = rng.gen_range(0.0..rho_jam);
        let mut fractions: Vec<f64> = (0..m).map(|_| rng.gen_range(0.05..1.0)).collect();
        let norm: f64 = fractions.iter().sum();
        fractions.iter_mut().for_each(|f| *f *= total / norm);
        let u: Vec<f64> = fractions.iter().map(|r| r * from[0]).collect();
        let side = if rng.gen_bool(0.5) { Side::Demand } else { Side::Supply };

        let mut out = vec![0.0; m];
        let gamma = model.delta_map_traffic(&u, &from, &to, side, &mut out).unwrap();
        let bf = traffic_map_brute_force(&u, &from, &to, side, v_free, rho_jam, grid_points);
        dg = dg.max((gamma - bf.gamma).abs());
        let mapped_total = out.iter().sum::<f64>() / to[0];
        let (lo, hi) = bf.bracket;
        assert!(lo.is_finite(), "no root bracket for {u:?} {from:?} -> {to:?}");
        let outside = (lo - mapped_total).max(mapped_total - hi).max(0.0);
        dr = dr.max(outside / rho_jam);
    }
    (dg, dr)
}
