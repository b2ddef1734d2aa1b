//! Nonlinear elastic waves in a heterogeneous medium.
//!
//! ```text
//! ε_t − v_x = 0
//! (ρ v)_t − σ(ε, K)_x = 0,      σ(ε, K) = K ε + β K² ε²
//! ```
//!
//! Conserved state `u = (ε, q)` with `q = ρ v`; parameters `θ = (ρ, K)`.
//! The flux is `f(u, θ) = (−q/ρ, −σ(ε, K))` and the characteristic speeds are
//! `∓c` with `c = sqrt(σ_ε / ρ)`, so one family always moves left and the other
//! right. Flow can therefore always be matched across a parameter jump and the
//! interface mapping has `γ = 1`.

use crate::error::ModelError;
use crate::model::{Side, SystemModel};

/// Stress-strain law `σ(ε, K) = K ε + β K² ε²`.
#[inline]
pub fn stress(strain: f64, modulus: f64, beta: f64) -> f64 {
    modulus * strain + beta * modulus * modulus * strain * strain
}

/// `∂σ/∂ε = K + 2 β K² ε`.
#[inline]
pub fn stress_derivative(strain: f64, modulus: f64, beta: f64) -> f64 {
    modulus + 2.0 * beta * modulus * modulus * strain
}

/// Strain at modulus `modulus` carrying stress `sigma` on the hyperbolic
/// branch (`σ_ε > 0`).
///
/// This is the positive root `(sqrt(1 + 4βσ) − 1) / (2βK)`, written in the
/// rationalized form `2σ / (K (1 + sqrt(1 + 4βσ)))`, which has no cancellation
/// for small `σ` and reduces to `σ/K` when `β = 0`.
pub fn strain_for_stress(sigma: f64, modulus: f64, beta: f64) -> Result<f64, ModelError> {
    let disc = 1.0 + 4.0 * beta * sigma;
    if disc < 0.0 {
        return Err(ModelError::MappingInfeasible(format!(
            "stress {sigma} below the minimum -1/(4β) of the stress law (β = {beta})"
        )));
    }
    Ok(2.0 * sigma / (modulus * (1.0 + disc.sqrt())))
}

/// Closed-form interface mapping from `(ρ_from, K_from)` to `(ρ_to, K_to)`:
/// `δq = ρ_to q / ρ_from`, `δε` solving `σ(δε, K_to) = σ(ε, K_from)`.
/// The flow is matched exactly, so `γ = 1`.
pub fn delta_map_elastic(
    u: [f64; 2],
    theta_from: [f64; 2],
    theta_to: [f64; 2],
    beta: f64,
) -> Result<([f64; 2], f64), ModelError> {
    let [strain, momentum] = u;
    let [rho_from, k_from] = theta_from;
    let [rho_to, k_to] = theta_to;
    let sigma = stress(strain, k_from, beta);
    let mapped_strain = strain_for_stress(sigma, k_to, beta)?;
    Ok(([mapped_strain, rho_to * momentum / rho_from], 1.0))
}

/// Elastic system with stress nonlinearity `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticModel {
    beta: f64,
}

impl ElasticModel {
    pub fn new(beta: f64) -> Result<Self, ModelError> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(ModelError::InvalidTheta {
                theta: vec![beta],
                reason: "β must be finite and non-negative".into(),
            });
        }
        Ok(Self { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Sound speed `c = sqrt(σ_ε / ρ)`.
    pub fn sound_speed(&self, u: &[f64], theta: &[f64]) -> Result<f64, ModelError> {
        let c2 = stress_derivative(u[0], theta[1], self.beta) / theta[0];
        if c2 > 0.0 && c2.is_finite() {
            Ok(c2.sqrt())
        } else {
            Err(ModelError::NotHyperbolic {
                state: u.to_vec(),
                speed_sq: c2,
            })
        }
    }

    /// Eigenvalues `(−c, c)`.
    pub fn eigenvalues(&self, u: &[f64], theta: &[f64]) -> Result<(f64, f64), ModelError> {
        let c = self.sound_speed(u, theta)?;
        Ok((-c, c))
    }
}

impl SystemModel for ElasticModel {
    fn name(&self) -> &'static str {
        "elastic"
    }

    fn n_components(&self) -> usize {
        2
    }

    fn n_theta(&self) -> usize {
        2
    }

    fn validate_theta(&self, theta: &[f64]) -> Result<(), ModelError> {
        if theta.len() != 2 || !theta.iter().all(|t| t.is_finite() && *t > 0.0) {
            return Err(ModelError::InvalidTheta {
                theta: theta.to_vec(),
                reason: "elastic parameters (ρ, K) must both be positive".into(),
            });
        }
        Ok(())
    }

    fn check_admissible(&self, u: &[f64], theta: &[f64]) -> Result<(), ModelError> {
        if !u.iter().all(|x| x.is_finite()) {
            return Err(ModelError::Inadmissible {
                state: u.to_vec(),
                reason: "non-finite value".into(),
            });
        }
        self.sound_speed(u, theta).map(|_| ())
    }

    #[inline]
    fn flux(&self, u: &[f64], theta: &[f64], out: &mut [f64]) -> Result<(), ModelError> {
        out[0] = -u[1] / theta[0];
        out[1] = -stress(u[0], theta[1], self.beta);
        Ok(())
    }

    fn eigen_bounds(&self, u: &[f64], theta: &[f64]) -> Result<(f64, f64), ModelError> {
        self.eigenvalues(u, theta)
    }

    fn max_wave_speed(&self, u: &[f64], theta: &[f64]) -> Result<f64, ModelError> {
        self.sound_speed(u, theta)
    }

    fn delta_map(
        &self,
        u: &[f64],
        theta_from: &[f64],
        theta_to: &[f64],
        _side: Side,
        out: &mut [f64],
    ) -> Result<f64, ModelError> {
        // λ1 < 0 < λ2 on both sides, so the sign constraints hold for any side
        let (mapped, gamma) = delta_map_elastic(
            [u[0], u[1]],
            [theta_from[0], theta_from[1]],
            [theta_to[0], theta_to[1]],
            self.beta,
        )?;
        out[..2].copy_from_slice(&mapped);
        Ok(gamma)
    }

    /// Primitive variables are `(ε, v)`.
    fn from_primitive(&self, prim: &[f64], theta: &[f64], out: &mut [f64]) {
        out[0] = prim[0];
        out[1] = theta[0] * prim[1];
    }

    fn to_primitive(&self, u: &[f64], theta: &[f64], out: &mut [f64]) {
        out[0] = u[0];
        out[1] = u[1] / theta[0];
    }

    fn observable_names(&self) -> Vec<String> {
        vec!["strain".into(), "stress".into()]
    }

    fn observables(&self, u: &[f64], theta: &[f64]) -> Vec<f64> {
        vec![u[0], stress(u[0], theta[1], self.beta)]
    }
}
