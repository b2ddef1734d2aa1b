//! Interface numerical fluxes for discontinuous parameter fields.
//!
//! At an interface between cells with parameters `θ_L` and `θ_R`, both traces
//! are first mapped onto an intermediate parameter `θ̄(θ_L, θ_R)` so that they
//! carry (as much as possible of) the same flow they carried on their own side.
//! A classical two-point solver is then applied at the frozen `θ̄`. This makes
//! the flux consistent with steady states and stationary shocks of
//! `u_t + f(u, θ(x))_x = 0`, which a solver applied to the raw traces is not.

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, SolverError};
use crate::model::{Side, SystemModel};

/// Classical two-point flux applied at the frozen intermediate parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassicalSolver {
    /// Local Lax-Friedrichs (Rusanov).
    #[default]
    #[serde(alias = "llf")]
    LocalLaxFriedrichs,
    /// Exact Godunov flux for scalar laws with at most one interior flux extremum.
    GodunovScalar,
}

/// Rule for the intermediate parameter `θ̄(θ_L, θ_R)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThetaBarRule {
    Left,
    #[default]
    Right,
    ArithmeticMean,
}

/// Interface flux configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluxConfig {
    #[serde(default)]
    pub solver: ClassicalSolver,
    #[serde(default)]
    pub theta_bar: ThetaBarRule,
    /// When false, the classical solver sees the raw traces at `θ̄`. This is
    /// only useful to demonstrate the loss of steady-state consistency.
    #[serde(default = "default_true")]
    pub delta_mapping: bool,
}

fn default_true() -> bool {
    true
}

impl Default for FluxConfig {
    fn default() -> Self {
        Self {
            solver: ClassicalSolver::LocalLaxFriedrichs,
            theta_bar: ThetaBarRule::Right,
            delta_mapping: true,
        }
    }
}

impl FluxConfig {
    pub fn with_theta_bar(theta_bar: ThetaBarRule) -> Self {
        Self {
            theta_bar,
            ..Self::default()
        }
    }

    pub fn validate(&self, model: &dyn SystemModel) -> Result<(), SolverError> {
        if self.solver == ClassicalSolver::GodunovScalar && model.n_components() != 1 {
            return Err(SolverError::Config(format!(
                "the scalar Godunov flux needs a scalar law, model '{}' has {} components",
                model.name(),
                model.n_components()
            )));
        }
        Ok(())
    }
}

/// Intermediate parameter `θ̄`, written into `out`. Always `θ̄(θ, θ) = θ`.
pub fn theta_intermediate_into(rule: ThetaBarRule, left: &[f64], right: &[f64], out: &mut [f64]) {
    match rule {
        ThetaBarRule::Left => out.copy_from_slice(left),
        ThetaBarRule::Right => out.copy_from_slice(right),
        ThetaBarRule::ArithmeticMean => {
            for ((o, &l), &r) in out.iter_mut().zip(left).zip(right) {
                *o = 0.5 * (l + r);
            }
        }
    }
}

pub fn theta_intermediate(rule: ThetaBarRule, left: &[f64], right: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; left.len()];
    theta_intermediate_into(rule, left, right, &mut out);
    out
}

/// A trace mapped onto the intermediate parameter, with its flow fraction γ.
#[derive(Debug, Clone, PartialEq)]
pub struct MappedState {
    pub state: Vec<f64>,
    pub gamma: f64,
}

/// Mapping into a caller buffer; the identity when the parameters agree.
#[inline]
pub fn delta_map_into(
    model: &dyn SystemModel,
    u: &[f64],
    theta_from: &[f64],
    theta_to: &[f64],
    side: Side,
    out: &mut [f64],
) -> Result<f64, ModelError> {
    if theta_from == theta_to {
        out.copy_from_slice(u);
        return Ok(1.0);
    }
    let gamma = model.delta_map(u, theta_from, theta_to, side, out)?;
    if !(0.0..=1.0).contains(&gamma) {
        return Err(ModelError::MappingInfeasible(format!(
            "flow fraction {gamma} outside [0, 1]"
        )));
    }
    Ok(gamma)
}

/// Maps `u` from `theta_from` onto `theta_to` with maximal flow fraction `γ`.
pub fn delta_map(
    model: &dyn SystemModel,
    u: &[f64],
    theta_from: &[f64],
    theta_to: &[f64],
    side: Side,
) -> Result<MappedState, ModelError> {
    model.check_admissible(u, theta_from)?;
    let mut state = vec![0.0; u.len()];
    let gamma = delta_map_into(model, u, theta_from, theta_to, side, &mut state)?;
    Ok(MappedState { state, gamma })
}

/// Scratch buffers for interface flux evaluation.
#[derive(Debug, Clone)]
pub struct FluxWorkspace {
    theta_mid: Vec<f64>,
    mapped_left: Vec<f64>,
    mapped_right: Vec<f64>,
    f_left: Vec<f64>,
    f_right: Vec<f64>,
}

impl FluxWorkspace {
    pub fn new(n_components: usize, n_theta: usize) -> Self {
        Self {
            theta_mid: vec![0.0; n_theta],
            mapped_left: vec![0.0; n_components],
            mapped_right: vec![0.0; n_components],
            f_left: vec![0.0; n_components],
            f_right: vec![0.0; n_components],
        }
    }

    pub fn for_model(model: &dyn SystemModel) -> Self {
        Self::new(model.n_components(), model.n_theta())
    }
}

/// Local Lax-Friedrichs flux
/// `½ (f(u_L) + f(u_R)) − ½ α (u_R − u_L)`, `α = max(|λ|)` over both states.
pub fn llf_flux_into(
    model: &dyn SystemModel,
    u_left: &[f64],
    u_right: &[f64],
    theta: &[f64],
    f_left: &mut [f64],
    f_right: &mut [f64],
    out: &mut [f64],
) -> Result<(), ModelError> {
    model.flux(u_left, theta, f_left)?;
    model.flux(u_right, theta, f_right)?;
    let alpha = model
        .max_wave_speed(u_left, theta)?
        .max(model.max_wave_speed(u_right, theta)?);
    for i in 0..out.len() {
        out[i] = 0.5 * (f_left[i] + f_right[i]) - 0.5 * alpha * (u_right[i] - u_left[i]);
    }
    Ok(())
}

pub fn llf_flux(
    model: &dyn SystemModel,
    u_left: &[f64],
    u_right: &[f64],
    theta: &[f64],
) -> Result<Vec<f64>, ModelError> {
    let m = u_left.len();
    let (mut fl, mut fr, mut out) = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
    llf_flux_into(model, u_left, u_right, theta, &mut fl, &mut fr, &mut out)?;
    Ok(out)
}

/// Godunov flux for a scalar law: `min f` over `[u_L, u_R]` if `u_L <= u_R`,
/// `max f` over `[u_R, u_L]` otherwise.
pub fn godunov_scalar_flux(
    model: &dyn SystemModel,
    u_left: f64,
    u_right: f64,
    theta: &[f64],
) -> Result<f64, ModelError> {
    let eval = |u: f64| -> Result<f64, ModelError> {
        let mut f = [0.0];
        model.flux(&[u], theta, &mut f)?;
        Ok(f[0])
    };
    let (fl, fr) = (eval(u_left)?, eval(u_right)?);
    let (lo, hi) = if u_left <= u_right {
        (u_left, u_right)
    } else {
        (u_right, u_left)
    };
    let interior = match model.scalar_extremum(theta) {
        Some(x) if x > lo && x < hi => Some(eval(x)?),
        _ => None,
    };
    let candidates = [Some(fl), Some(fr), interior];
    let values = candidates.iter().flatten().copied();
    Ok(if u_left <= u_right {
        values.fold(f64::INFINITY, f64::min)
    } else {
        values.fold(f64::NEG_INFINITY, f64::max)
    })
}

fn classical_into(
    model: &dyn SystemModel,
    solver: ClassicalSolver,
    u_left: &[f64],
    u_right: &[f64],
    theta: &[f64],
    f_left: &mut [f64],
    f_right: &mut [f64],
    out: &mut [f64],
) -> Result<(), ModelError> {
    match solver {
        ClassicalSolver::LocalLaxFriedrichs => {
            llf_flux_into(model, u_left, u_right, theta, f_left, f_right, out)
        }
        ClassicalSolver::GodunovScalar => {
            out[0] = godunov_scalar_flux(model, u_left[0], u_right[0], theta)?;
            Ok(())
        }
    }
}

/// Numerical flux `f̂(u⁻, θ_L; u⁺, θ_R)` at one interface, written into `out`.
///
/// The left trace is mapped as the demand side, the right trace as the supply
/// side. Returns the pair of flow fractions `(γ⁻, γ⁺)`.
#[allow(clippy::too_many_arguments)]
pub fn interface_flux_into(
    model: &dyn SystemModel,
    u_minus: &[f64],
    theta_left: &[f64],
    u_plus: &[f64],
    theta_right: &[f64],
    config: &FluxConfig,
    ws: &mut FluxWorkspace,
    out: &mut [f64],
) -> Result<(f64, f64), ModelError> {
    let FluxWorkspace {
        theta_mid,
        mapped_left,
        mapped_right,
        f_left,
        f_right,
    } = ws;
    theta_intermediate_into(config.theta_bar, theta_left, theta_right, theta_mid);
    if !config.delta_mapping {
        classical_into(
            model, config.solver, u_minus, u_plus, theta_mid, f_left, f_right, out,
        )?;
        return Ok((1.0, 1.0));
    }
    let g_minus = delta_map_into(model, u_minus, theta_left, theta_mid, Side::Demand, mapped_left)?;
    let g_plus = delta_map_into(model, u_plus, theta_right, theta_mid, Side::Supply, mapped_right)?;
    classical_into(
        model,
        config.solver,
        mapped_left,
        mapped_right,
        theta_mid,
        f_left,
        f_right,
        out,
    )?;
    Ok((g_minus, g_plus))
}

/// Allocating convenience wrapper around [`interface_flux_into`].
pub fn interface_flux(
    model: &dyn SystemModel,
    u_minus: &[f64],
    theta_left: &[f64],
    u_plus: &[f64],
    theta_right: &[f64],
    config: &FluxConfig,
) -> Result<Vec<f64>, ModelError> {
    let mut ws = FluxWorkspace::for_model(model);
    let mut out = vec![0.0; model.n_components()];
    interface_flux_into(
        model,
        u_minus,
        theta_left,
        u_plus,
        theta_right,
        config,
        &mut ws,
        &mut out,
    )?;
    Ok(out)
}
