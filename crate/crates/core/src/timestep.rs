//! SSP Runge-Kutta time stepping with a limiter after every stage, and the
//! CFL time-step rule.

use serde::{Deserialize, Serialize};

use crate::boundary::BoundarySpec;
use crate::error::SolverError;
use crate::limiter::{mapped_neighbor_averages, NeighborWorkspace};
use crate::mesh::Mesh;
use crate::model::SystemModel;
use crate::state::DGState;

/// Shu-Osher form `u^(i) = Σ_{l<i} α_il u^(l) + β_il Δt L(u^(l))`.
#[derive(Debug, Clone, PartialEq)]
pub struct RKScheme {
    /// `alpha[i][l]` for stage `i + 1`, `l <= i`.
    pub alpha: Vec<Vec<f64>>,
    pub beta: Vec<Vec<f64>>,
}

impl RKScheme {
    pub fn forward_euler() -> Self {
        Self {
            alpha: vec![vec![1.0]],
            beta: vec![vec![1.0]],
        }
    }

    pub fn ssp_rk2() -> Self {
        Self {
            alpha: vec![vec![1.0], vec![0.5, 0.5]],
            beta: vec![vec![1.0], vec![0.0, 0.5]],
        }
    }

    pub fn ssp_rk3() -> Self {
        Self {
            alpha: vec![vec![1.0], vec![0.75, 0.25], vec![1.0 / 3.0, 0.0, 2.0 / 3.0]],
            beta: vec![vec![1.0], vec![0.0, 0.25], vec![0.0, 0.0, 2.0 / 3.0]],
        }
    }

    /// The `(k + 1)`-stage, order `k + 1` scheme paired with degree `k`.
    pub fn for_degree(k: usize) -> Result<Self, SolverError> {
        match k {
            0 => Ok(Self::forward_euler()),
            1 => Ok(Self::ssp_rk2()),
            2 => Ok(Self::ssp_rk3()),
            _ => Err(SolverError::UnsupportedDegree(k)),
        }
    }

    pub fn stages(&self) -> usize {
        self.alpha.len()
    }

    /// Every stage is a convex combination of forward-Euler steps.
    pub fn is_convex(&self) -> bool {
        self.alpha.iter().zip(&self.beta).all(|(a, b)| {
            a.iter().all(|&x| x >= 0.0)
                && b.iter().all(|&x| x >= 0.0)
                && (a.iter().sum::<f64>() - 1.0).abs() < 1e-14
        })
    }

    /// Butcher coefficients: stage `i` equals `u + Δt Σ_l A[i][l] L(u^(l))`.
    /// Row `stages()` holds the final weights.
    pub fn butcher(&self) -> Vec<Vec<f64>> {
        let s = self.stages();
        let mut rows: Vec<Vec<f64>> = vec![vec![0.0; s]];
        for i in 0..s {
            let mut row = vec![0.0; s];
            for (l, (&a, &b)) in self.alpha[i].iter().zip(&self.beta[i]).enumerate() {
                for (r, &p) in row.iter_mut().zip(&rows[l]) {
                    *r += a * p;
                }
                row[l] += b;
            }
            rows.push(row);
        }
        rows
    }

    /// Stage times as fractions of `Δt`.
    pub fn stage_offsets(&self) -> Vec<f64> {
        self.butcher()[..self.stages()]
            .iter()
            .map(|r| r.iter().sum())
            .collect()
    }

    /// Final-update weights `b_l`.
    pub fn weights(&self) -> Vec<f64> {
        self.butcher().pop().expect("at least one stage")
    }
}

/// Courant number for the CFL rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CourantConfig {
    pub number: f64,
    /// Upper bound on any step; also used when every speed vanishes.
    #[serde(default = "default_dt_max", skip_serializing_if = "is_unbounded")]
    pub dt_max: f64,
}

fn default_dt_max() -> f64 {
    f64::INFINITY
}

fn is_unbounded(dt: &f64) -> bool {
    dt.is_infinite()
}

impl CourantConfig {
    /// The default `C = 1/(2k + 1)`.
    pub fn for_degree(k: usize) -> Self {
        Self {
            number: 1.0 / (2 * k + 1) as f64,
            dt_max: f64::INFINITY,
        }
    }

    pub fn new(number: f64, degree: usize) -> Result<Self, SolverError> {
        let c = Self {
            number,
            dt_max: f64::INFINITY,
        };
        c.validate(degree)?;
        Ok(c)
    }

    pub fn with_number(mut self, number: f64) -> Self {
        self.number = number;
        self
    }

    pub fn with_dt_max(mut self, dt_max: f64) -> Self {
        self.dt_max = dt_max;
        self
    }

    pub fn validate(&self, degree: usize) -> Result<(), SolverError> {
        let bound = 1.0 / (2 * degree + 1) as f64;
        if !(self.number > 0.0 && self.number <= bound * (1.0 + 1e-12)) {
            return Err(SolverError::Config(format!(
                "Courant number {} must lie in (0, {bound}] for degree {degree}",
                self.number
            )));
        }
        if !(self.dt_max > 0.0) {
            return Err(SolverError::Config("dt_max must be positive".into()));
        }
        Ok(())
    }
}

/// Largest characteristic speed over cell averages and the neighbor averages
/// mapped onto each cell's parameters.
pub fn max_speed(
    state: &DGState,
    mesh: &Mesh,
    model: &dyn SystemModel,
    bc: &BoundarySpec,
) -> Result<f64, SolverError> {
    let mut ws = NeighborWorkspace::new(state.n_components());
    let mut alpha: f64 = 0.0;
    for j in 0..state.n_cells() {
        let theta = mesh.theta(j);
        mapped_neighbor_averages(state, mesh, model, bc, true, j, &mut ws)?;
        for u in [state.average(j), &ws.left[..], &ws.right[..]] {
            let speed = model
                .max_wave_speed(u, theta)
                .map_err(|source| SolverError::Cell { cell: j, source })?;
            alpha = alpha.max(speed);
        }
    }
    Ok(alpha)
}

/// `Δt = C Δ / α`, capped by `dt_max`.
pub fn compute_dt(
    state: &DGState,
    mesh: &Mesh,
    model: &dyn SystemModel,
    courant: &CourantConfig,
    bc: &BoundarySpec,
) -> Result<f64, SolverError> {
    let alpha = max_speed(state, mesh, model, bc)?;
    if alpha <= 0.0 {
        return Ok(courant.dt_max);
    }
    Ok((courant.number * mesh.dx() / alpha).min(courant.dt_max))
}

/// One SSP-RK step. `rhs` evaluates `L(u)` at `u.time`; `limit` is applied to
/// every stage result.
pub fn ssp_rk_step<R, L>(
    state: &DGState,
    dt: f64,
    scheme: &RKScheme,
    mut rhs: R,
    mut limit: L,
) -> Result<DGState, SolverError>
where
    R: FnMut(&DGState) -> Result<Vec<f64>, SolverError>,
    L: FnMut(&mut DGState) -> Result<(), SolverError>,
{
    let offsets = scheme.stage_offsets();
    let t0 = state.time;
    let mut stages: Vec<DGState> = Vec::with_capacity(scheme.stages() + 1);
    let mut derivs: Vec<Option<Vec<f64>>> = vec![None; scheme.stages()];
    stages.push(state.clone());
    for i in 0..scheme.stages() {
        let mut next = state.clone();
        next.coeffs_mut().fill(0.0);
        for (l, (&a, &b)) in scheme.alpha[i].iter().zip(&scheme.beta[i]).enumerate() {
            if a != 0.0 {
                next.axpy(a, stages[l].coeffs());
            }
            if b != 0.0 {
                if derivs[l].is_none() {
                    derivs[l] = Some(rhs(&stages[l])?);
                }
                next.axpy(b * dt, derivs[l].as_ref().expect("just computed"));
            }
        }
        next.time = if i + 1 == scheme.stages() {
            t0 + dt
        } else {
            t0 + offsets[i + 1] * dt
        };
        limit(&mut next)?;
        if !next.is_finite() {
            return Err(SolverError::NonFinite { stage: i + 1 });
        }
        stages.push(next);
    }
    Ok(stages.pop().expect("final stage"))
}
