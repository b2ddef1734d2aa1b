//! Multi-class LWR traffic flow on an inhomogeneous road.
//!
//! State `u_l = a ρ_l` (lane-aggregated density of class `l`), parameters
//! `θ = (a, b_1, …, b_m)` with `a` the number of lanes and `b_l` the scaled
//! free-flow speed of class `l`. The flux is
//!
//! ```text
//! f_l(u, θ) = b_l u_l v(ρ),   ρ = Σ_l u_l / a,   v(ρ) = v_f (1 − ρ/ρ_jam)
//! ```
//!
//! With `b_1 < … < b_m` the eigenvalues interlace with the class speeds,
//! `v_1 + v'(ρ) Σ b_l ρ_l < λ_1 < v_1 < λ_2 < … < λ_m < v_m`, so only `λ_1` can
//! change sign; it does so at the critical density `ρ* = ρ_jam / 2`.

use crate::error::ModelError;
use crate::model::{Side, Sign, SystemModel};

/// Relative slack allowed on the boundary of the admissible set.
const ADMISSIBLE_SLACK: f64 = 1e-9;

/// Road and driver parameters shared by every cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrafficParams {
    /// Reference free-flow speed.
    pub v_free: f64,
    /// Jam density per lane.
    pub rho_jam: f64,
}

impl TrafficParams {
    /// Per-lane density maximizing `q(ρ) = ρ v(ρ)`.
    pub fn critical_density(&self) -> f64 {
        0.5 * self.rho_jam
    }

    /// Per-lane capacity `q(ρ*) = v_f ρ_jam / 4`.
    pub fn capacity(&self) -> f64 {
        0.25 * self.v_free * self.rho_jam
    }

    #[inline]
    fn speed(&self, rho: f64) -> f64 {
        self.v_free * (1.0 - rho / self.rho_jam)
    }

    /// `v(ρ) = v_f (1 − ρ/ρ_jam)` for `ρ ∈ [0, ρ_jam]`.
    pub fn velocity(&self, rho: f64) -> Result<f64, ModelError> {
        if !(0.0..=self.rho_jam).contains(&rho) {
            return Err(ModelError::Inadmissible {
                state: vec![rho],
                reason: format!("total density outside [0, {}]", self.rho_jam),
            });
        }
        Ok(self.speed(rho))
    }

    /// Per-lane flow `q(ρ) = ρ v(ρ)`.
    pub fn flow(&self, rho: f64) -> f64 {
        rho * self.speed(rho)
    }

    /// `dv/dρ`.
    pub fn velocity_slope(&self) -> f64 {
        -self.v_free / self.rho_jam
    }
}

/// `m`-class traffic system.
#[derive(Debug, Clone, PartialEq)]
pub struct TrafficModel {
    n_classes: usize,
    params: TrafficParams,
}

impl TrafficModel {
    pub fn new(n_classes: usize, v_free: f64, rho_jam: f64) -> Result<Self, ModelError> {
        if n_classes == 0 || !(v_free > 0.0 && rho_jam > 0.0) {
            return Err(ModelError::InvalidTheta {
                theta: vec![n_classes as f64, v_free, rho_jam],
                reason: "need at least one class and positive v_f, ρ_jam".into(),
            });
        }
        Ok(Self {
            n_classes,
            params: TrafficParams { v_free, rho_jam },
        })
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn params(&self) -> &TrafficParams {
        &self.params
    }

    /// Total per-lane density `ρ = Σ u_l / a`.
    #[inline]
    pub fn total_density(&self, u: &[f64], theta: &[f64]) -> f64 {
        u.iter().sum::<f64>() / theta[0]
    }

    /// Sign of `λ_1`, which equals the sign of `ρ* − ρ` for this velocity law.
    pub fn lambda1_sign(&self, u: &[f64], theta: &[f64]) -> Sign {
        Sign::of(self.params.critical_density() - self.total_density(u, theta))
    }

    /// Dense Jacobian `∂f/∂u`, row-major; used by tests and diagnostics.
    pub fn jacobian(&self, u: &[f64], theta: &[f64]) -> Vec<f64> {
        let m = self.n_classes;
        let a = theta[0];
        let rho = self.total_density(u, theta);
        let v = self.params.speed(rho);
        let dv = self.params.velocity_slope();
        let mut jac = vec![0.0; m * m];
        for l in 0..m {
            let b = theta[1 + l];
            for k in 0..m {
                let diag = if l == k { v } else { 0.0 };
                jac[l * m + k] = b * (diag + u[l] / a * dv);
            }
        }
        jac
    }

    fn inadmissible(&self, u: &[f64], reason: impl Into<String>) -> ModelError {
        ModelError::Inadmissible {
            state: u.to_vec(),
            reason: reason.into(),
        }
    }

    /// γ_max mapping of `u` from `theta_from` onto `theta_to`.
    ///
    /// With `α_l = b_l^from a^from / (b_l^to a^to)` and `S = v(ρ) Σ α_l ρ_l`, the
    /// mapped per-lane flow is `γ S` with `γ = min(1, q(ρ*) / S)`. The mapped
    /// total density is the root of `q(δρ) = γ S` on the branch that keeps the
    /// sign of `λ_1`; a zero `λ_1` goes to the free branch on the demand side and
    /// to the congested branch on the supply side. Class densities follow
    /// `δρ_l = γ α_l ρ_l v(ρ) / v(δρ)`.
    pub fn delta_map_traffic(
        &self,
        u: &[f64],
        theta_from: &[f64],
        theta_to: &[f64],
        side: Side,
        out: &mut [f64],
    ) -> Result<f64, ModelError> {
        let m = self.n_classes;
        let p = &self.params;
        let (a_from, a_to) = (theta_from[0], theta_to[0]);
        let rho = self.total_density(u, theta_from);
        let v = p.speed(rho);

        let mut weighted = 0.0;
        for l in 0..m {
            let alpha = theta_from[1 + l] * a_from / (theta_to[1 + l] * a_to);
            weighted += alpha * u[l] / a_from;
        }
        let demand = v * weighted;

        if demand <= 0.0 {
            if weighted <= 0.0 {
                // empty road maps to empty road
                out[..m].fill(0.0);
                return Ok(1.0);
            }
            // jammed: zero flow, keep the α-weighted class fractions
            for l in 0..m {
                let alpha = theta_from[1 + l] * a_from / (theta_to[1 + l] * a_to);
                out[l] = a_to * p.rho_jam * alpha * (u[l] / a_from) / weighted;
            }
            return Ok(1.0);
        }

        let gamma = (p.capacity() / demand).min(1.0);
        let target = gamma * demand;
        let disc = (1.0 - target / p.capacity()).max(0.0).sqrt();
        let free = 2.0 * target / (p.v_free * (1.0 + disc));
        let congested = p.critical_density() * (1.0 + disc);
        let mapped_rho = match (Sign::of(p.critical_density() - rho), side) {
            (Sign::Positive, _) | (Sign::Zero, Side::Demand) => free,
            (Sign::Negative, _) | (Sign::Zero, Side::Supply) => congested,
        };
        let scale = gamma * v / p.speed(mapped_rho);
        for l in 0..m {
            let alpha = theta_from[1 + l] * a_from / (theta_to[1 + l] * a_to);
            out[l] = a_to * scale * alpha * (u[l] / a_from);
        }
        Ok(gamma)
    }
}

impl SystemModel for TrafficModel {
    fn name(&self) -> &'static str {
        "traffic"
    }

    fn n_components(&self) -> usize {
        self.n_classes
    }

    fn n_theta(&self) -> usize {
        self.n_classes + 1
    }

    fn validate_theta(&self, theta: &[f64]) -> Result<(), ModelError> {
        let bad = |reason: &str| ModelError::InvalidTheta {
            theta: theta.to_vec(),
            reason: reason.into(),
        };
        if theta.len() != self.n_classes + 1 {
            return Err(bad("expected (a, b_1, …, b_m)"));
        }
        if !(theta[0].is_finite() && theta[0] > 0.0) {
            return Err(bad("lane count must be positive"));
        }
        let b = &theta[1..];
        if !(b[0] > 0.0 && b[b.len() - 1] <= 1.0) {
            return Err(bad("scaled free-flow speeds must lie in (0, 1]"));
        }
        if b.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("scaled free-flow speeds must be strictly increasing"));
        }
        Ok(())
    }

    fn check_admissible(&self, u: &[f64], theta: &[f64]) -> Result<(), ModelError> {
        let slack = ADMISSIBLE_SLACK * self.params.rho_jam;
        let a = theta[0];
        if u.iter().any(|x| !x.is_finite() || x / a < -slack) {
            return Err(self.inadmissible(u, "negative or non-finite class density"));
        }
        if self.total_density(u, theta) > self.params.rho_jam + slack {
            return Err(self.inadmissible(u, "total density above jam density"));
        }
        Ok(())
    }

    #[inline]
    fn flux(&self, u: &[f64], theta: &[f64], out: &mut [f64]) -> Result<(), ModelError> {
        self.check_admissible(u, theta)?;
        let v = self.params.speed(self.total_density(u, theta));
        for l in 0..self.n_classes {
            out[l] = theta[1 + l] * u[l] * v;
        }
        Ok(())
    }

    fn eigen_bounds(&self, u: &[f64], theta: &[f64]) -> Result<(f64, f64), ModelError> {
        self.check_admissible(u, theta)?;
        let a = theta[0];
        let v = self.params.speed(self.total_density(u, theta));
        let weighted: f64 = (0..self.n_classes).map(|l| theta[1 + l] * u[l] / a).sum();
        let lower = theta[1] * v + self.params.velocity_slope() * weighted;
        let upper = theta[self.n_classes] * v;
        Ok((lower, upper))
    }

    fn delta_map(
        &self,
        u: &[f64],
        theta_from: &[f64],
        theta_to: &[f64],
        side: Side,
        out: &mut [f64],
    ) -> Result<f64, ModelError> {
        self.check_admissible(u, theta_from)?;
        self.delta_map_traffic(u, theta_from, theta_to, side, out)
    }

    fn scalar_extremum(&self, theta: &[f64]) -> Option<f64> {
        (self.n_classes == 1).then(|| theta[0] * self.params.critical_density())
    }

    /// Primitive variables are the per-lane class densities `ρ_l`.
    fn from_primitive(&self, prim: &[f64], theta: &[f64], out: &mut [f64]) {
        for (o, p) in out.iter_mut().zip(prim) {
            *o = theta[0] * p;
        }
    }

    fn to_primitive(&self, u: &[f64], theta: &[f64], out: &mut [f64]) {
        for (o, x) in out.iter_mut().zip(u) {
            *o = x / theta[0];
        }
    }

    fn observable_names(&self) -> Vec<String> {
        (1..=self.n_classes).map(|l| format!("rho_{l}")).collect()
    }

    fn observables(&self, u: &[f64], theta: &[f64]) -> Vec<f64> {
        u.iter().map(|x| x / theta[0]).collect()
    }
}
