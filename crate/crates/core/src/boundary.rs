//! Boundary conditions, applied through exterior ("ghost") traces.

use serde::{Deserialize, Serialize};

use crate::error::SolverError;
use crate::model::SystemModel;

/// Scalar time signal driving a prescribed boundary value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Signal {
    Constant {
        value: f64,
    },
    /// `amplitude · (1 + cos(π (t − center) / half_width))` for
    /// `|t − center| <= half_width`, zero otherwise.
    CosinePulse {
        amplitude: f64,
        center: f64,
        half_width: f64,
    },
}

impl Signal {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Signal::Constant { value } => value,
            Signal::CosinePulse {
                amplitude,
                center,
                half_width,
            } => {
                if (t - center).abs() <= half_width {
                    amplitude * (1.0 + (std::f64::consts::PI * (t - center) / half_width).cos())
                } else {
                    0.0
                }
            }
        }
    }
}

/// Condition on one end of the domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BoundaryCondition {
    Periodic,
    /// Zero-gradient: the exterior trace copies the interior one.
    Outflow,
    /// Exterior trace equal to the interior one in primitive variables except
    /// for `component`, which follows `signal`.
    Prescribed { component: usize, signal: Signal },
    /// Exterior trace fixed in primitive variables.
    FixedState { primitive: Vec<f64> },
}

/// Boundary conditions on both ends. After `periodic_after` (if set) both
/// ends become periodic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpec {
    pub left: BoundaryCondition,
    pub right: BoundaryCondition,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periodic_after: Option<f64>,
}

impl BoundarySpec {
    pub fn periodic() -> Self {
        Self {
            left: BoundaryCondition::Periodic,
            right: BoundaryCondition::Periodic,
            periodic_after: None,
        }
    }

    pub fn outflow() -> Self {
        Self {
            left: BoundaryCondition::Outflow,
            right: BoundaryCondition::Outflow,
            periodic_after: None,
        }
    }

    pub fn validate(&self, model: &dyn SystemModel) -> Result<(), SolverError> {
        let left_p = self.left == BoundaryCondition::Periodic;
        let right_p = self.right == BoundaryCondition::Periodic;
        if left_p != right_p {
            return Err(SolverError::Config(
                "periodic boundaries must be set on both ends".into(),
            ));
        }
        for bc in [&self.left, &self.right] {
            match bc {
                BoundaryCondition::Prescribed { component, .. }
                    if *component >= model.n_components() =>
                {
                    return Err(SolverError::Config(format!(
                        "prescribed component {component} out of range for model '{}'",
                        model.name()
                    )));
                }
                BoundaryCondition::FixedState { primitive }
                    if primitive.len() != model.n_components() =>
                {
                    return Err(SolverError::Config(format!(
                        "fixed boundary state needs {} values",
                        model.n_components()
                    )));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Whether the domain wraps around at time `t`.
    pub fn is_periodic_at(&self, t: f64) -> bool {
        self.left == BoundaryCondition::Periodic || self.periodic_after.is_some_and(|s| t >= s)
    }

    /// Exterior trace for a non-periodic end. `interior` is the trace (or
    /// average) of the adjacent cell and `theta` its parameter vector, which
    /// the exterior shares.
    pub fn ghost_into(
        &self,
        right_end: bool,
        model: &dyn SystemModel,
        interior: &[f64],
        theta: &[f64],
        t: f64,
        out: &mut [f64],
    ) {
        let bc = if right_end { &self.right } else { &self.left };
        match bc {
            BoundaryCondition::Periodic | BoundaryCondition::Outflow => {
                out.copy_from_slice(interior)
            }
            BoundaryCondition::Prescribed { component, signal } => {
                let mut prim = vec![0.0; interior.len()];
                model.to_primitive(interior, theta, &mut prim);
                prim[*component] = signal.value(t);
                model.from_primitive(&prim, theta, out);
            }
            BoundaryCondition::FixedState { primitive } => {
                model.from_primitive(primitive, theta, out)
            }
        }
    }
}
