//! Uniform 1-D mesh with a piecewise-constant parameter field.

use crate::error::SolverError;
use crate::model::SystemModel;

/// Uniform partition of `[0, L]` into `N` cells, each carrying a parameter
/// vector `θ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    length: f64,
    n_cells: usize,
    dx: f64,
    n_theta: usize,
    theta: Vec<f64>,
}

impl Mesh {
    /// Builds a mesh from a flat per-cell parameter array of length `n_cells * n_theta`.
    pub fn new(
        length: f64,
        n_cells: usize,
        n_theta: usize,
        theta: Vec<f64>,
    ) -> Result<Self, SolverError> {
        if !(length.is_finite() && length > 0.0) {
            return Err(SolverError::Config(format!(
                "domain length must be positive, got {length}"
            )));
        }
        if n_cells == 0 {
            return Err(SolverError::Config("mesh needs at least one cell".into()));
        }
        if n_theta == 0 || theta.len() != n_cells * n_theta {
            return Err(SolverError::Config(format!(
                "expected {} parameter entries ({} cells x {}), got {}",
                n_cells * n_theta,
                n_cells,
                n_theta,
                theta.len()
            )));
        }
        Ok(Self {
            length,
            n_cells,
            dx: length / n_cells as f64,
            n_theta,
            theta,
        })
    }

    /// Samples `theta_at(x_j)` at every cell center.
    pub fn from_fn(
        length: f64,
        n_cells: usize,
        n_theta: usize,
        theta_at: impl Fn(f64) -> Vec<f64>,
    ) -> Result<Self, SolverError> {
        let dx = length / n_cells as f64;
        let mut theta = Vec::with_capacity(n_cells * n_theta);
        for j in 0..n_cells {
            let t = theta_at((j as f64 + 0.5) * dx);
            if t.len() != n_theta {
                return Err(SolverError::Config(format!(
                    "parameter function returned {} entries, expected {n_theta}",
                    t.len()
                )));
            }
            theta.extend(t);
        }
        Self::new(length, n_cells, n_theta, theta)
    }

    /// Mesh with the same `θ` in every cell.
    pub fn uniform(length: f64, n_cells: usize, theta: &[f64]) -> Result<Self, SolverError> {
        Self::from_fn(length, n_cells, theta.len(), |_| theta.to_vec())
    }

    /// Checks every cell's parameters against the model.
    pub fn validate(&self, model: &dyn SystemModel) -> Result<(), SolverError> {
        if model.n_theta() != self.n_theta {
            return Err(SolverError::Config(format!(
                "model '{}' expects {} parameters per cell, mesh has {}",
                model.name(),
                model.n_theta(),
                self.n_theta
            )));
        }
        for j in 0..self.n_cells {
            model
                .validate_theta(self.theta(j))
                .map_err(|source| SolverError::Cell { cell: j, source })?;
        }
        Ok(())
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    #[inline]
    pub fn theta(&self, j: usize) -> &[f64] {
        &self.theta[j * self.n_theta..(j + 1) * self.n_theta]
    }

    /// Cell center `x_j`.
    #[inline]
    pub fn center(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dx
    }

    /// Interface `x_{i-1/2}` for `i` in `0..=N`.
    #[inline]
    pub fn interface(&self, i: usize) -> f64 {
        i as f64 * self.dx
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|j| self.center(j)).collect()
    }

    /// Index of the cell containing `x` (clamped to the domain).
    pub fn locate(&self, x: f64) -> usize {
        let j = (x / self.dx).floor();
        if j < 0.0 {
            0
        } else {
            (j as usize).min(self.n_cells - 1)
        }
    }
}
