//! The contract a physical system implements to be solved by the scheme.

use std::fmt;

use crate::error::ModelError;

/// Which side of an interface a trace comes from.
///
/// The upstream trace offers flow (demand), the downstream trace accepts it
/// (supply). The side decides how zero characteristic speeds are resolved
/// when a state is mapped onto another parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Demand,
    Supply,
}

/// Sign of a characteristic speed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(x: f64) -> Self {
        if x > 0.0 {
            Sign::Positive
        } else if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
}

/// A conservation law `u_t + f(u, θ(x))_x = 0` with a spatially varying
/// parameter vector `θ`.
///
/// States and parameter vectors are passed as slices of length
/// [`n_components`](Self::n_components) and [`n_theta`](Self::n_theta).
/// Output buffers are caller-provided so the hot loops never allocate.
pub trait SystemModel: fmt::Debug + Send + Sync {
    /// Short identifier (`"elastic"`, `"traffic"`).
    fn name(&self) -> &'static str;

    fn n_components(&self) -> usize;

    fn n_theta(&self) -> usize;

    fn validate_theta(&self, theta: &[f64]) -> Result<(), ModelError>;

    fn check_admissible(&self, u: &[f64], theta: &[f64]) -> Result<(), ModelError>;

    fn flux(&self, u: &[f64], theta: &[f64], out: &mut [f64]) -> Result<(), ModelError>;

    /// Lower and upper bounds of the spectrum of `∂f/∂u` at fixed `θ`.
    fn eigen_bounds(&self, u: &[f64], theta: &[f64]) -> Result<(f64, f64), ModelError>;

    /// Spectral radius bound used by the CFL rule and the Lax-Friedrichs flux.
    fn max_wave_speed(&self, u: &[f64], theta: &[f64]) -> Result<f64, ModelError> {
        let (lo, hi) = self.eigen_bounds(u, theta)?;
        Ok(lo.abs().max(hi.abs()))
    }

    /// Maps `u`, given at `theta_from`, onto `theta_to` so that
    /// `f(out, theta_to) = γ f(u, theta_from)` with `γ <= 1` maximal and the
    /// characteristic signs preserved. Returns `γ`.
    fn delta_map(
        &self,
        u: &[f64],
        theta_from: &[f64],
        theta_to: &[f64],
        side: Side,
        out: &mut [f64],
    ) -> Result<f64, ModelError>;

    /// For scalar laws: the state where `f(·, θ)` attains its single interior
    /// extremum, if any. Needed by the scalar Godunov flux.
    fn scalar_extremum(&self, _theta: &[f64]) -> Option<f64> {
        None
    }

    /// Converts model-specific primitive variables into conserved variables.
    fn from_primitive(&self, prim: &[f64], theta: &[f64], out: &mut [f64]);

    /// Inverse of [`from_primitive`](Self::from_primitive).
    fn to_primitive(&self, u: &[f64], theta: &[f64], out: &mut [f64]);

    /// Column names of [`observables`](Self::observables).
    fn observable_names(&self) -> Vec<String>;

    /// Derived quantities written to profile snapshots.
    fn observables(&self, u: &[f64], theta: &[f64]) -> Vec<f64>;
}
