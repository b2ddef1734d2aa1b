//! Time integration driver: limiter, CFL step and SSP-RK update.

use crate::boundary::BoundarySpec;
use crate::error::SolverError;
use crate::flux::FluxConfig;
use crate::limiter::limit_in_place;
use crate::mesh::Mesh;
use crate::model::SystemModel;
use crate::operator::{BoundaryFluxes, SpatialOperator};
use crate::state::DGState;
use crate::timestep::{compute_dt, ssp_rk_step, CourantConfig, RKScheme};

/// Advances a [`DGState`] in time and keeps a ledger of the flux that left or
/// entered through the domain ends.
#[derive(Debug)]
pub struct Solver<'a> {
    mesh: &'a Mesh,
    model: &'a dyn SystemModel,
    bc: &'a BoundarySpec,
    config: FluxConfig,
    op: SpatialOperator<'a>,
    scheme: RKScheme,
    weights: Vec<f64>,
    courant: CourantConfig,
    inflow: Vec<f64>,
    steps: usize,
}

impl<'a> Solver<'a> {
    pub fn new(
        mesh: &'a Mesh,
        model: &'a dyn SystemModel,
        config: FluxConfig,
        bc: &'a BoundarySpec,
        courant: CourantConfig,
        degree: usize,
    ) -> Result<Self, SolverError> {
        courant.validate(degree)?;
        let scheme = RKScheme::for_degree(degree)?;
        let weights = scheme.weights();
        Ok(Self {
            mesh,
            model,
            bc,
            config,
            op: SpatialOperator::new(mesh, model, config, bc, degree)?,
            scheme,
            weights,
            courant,
            inflow: vec![0.0; model.n_components()],
            steps: 0,
        })
    }

    pub fn mesh(&self) -> &Mesh {
        self.mesh
    }

    pub fn model(&self) -> &dyn SystemModel {
        self.model
    }

    /// Steps taken so far.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// `∫ (f̂(x=0) − f̂(x=L)) dt` accumulated over all steps, per component.
    pub fn net_boundary_inflow(&self) -> &[f64] {
        &self.inflow
    }

    pub fn limit(&self, state: &mut DGState) -> Result<(), SolverError> {
        limit_in_place(state, self.mesh, self.model, &self.config, self.bc)
    }

    /// Limits the projected initial data and checks admissibility of every
    /// cell average.
    pub fn initialize(&self, mut state: DGState) -> Result<DGState, SolverError> {
        self.limit(&mut state)?;
        for j in 0..state.n_cells() {
            self.model
                .check_admissible(state.average(j), self.mesh.theta(j))
                .map_err(|source| SolverError::Cell { cell: j, source })?;
        }
        Ok(state)
    }

    pub fn stable_dt(&self, state: &DGState) -> Result<f64, SolverError> {
        compute_dt(state, self.mesh, self.model, &self.courant, self.bc)
    }

    /// One SSP-RK step of size `dt`.
    pub fn step(&mut self, state: &DGState, dt: f64) -> Result<DGState, SolverError> {
        let mut boundary: Vec<BoundaryFluxes> = Vec::with_capacity(self.scheme.stages());
        let (mesh, model, bc, config) = (self.mesh, self.model, self.bc, self.config);
        let op = &mut self.op;
        let next = ssp_rk_step(
            state,
            dt,
            &self.scheme,
            |u| {
                let mut out = vec![0.0; u.coeffs().len()];
                boundary.push(op.apply(u, &mut out)?);
                Ok(out)
            },
            |u| limit_in_place(u, mesh, model, &config, bc),
        )?;
        for (w, b) in self.weights.iter().zip(&boundary) {
            for (acc, (l, r)) in self.inflow.iter_mut().zip(b.left.iter().zip(&b.right)) {
                *acc += w * dt * (l - r);
            }
        }
        self.steps += 1;
        Ok(next)
    }

    /// Steps until `t_end`; the last step is shortened (never lengthened) so
    /// the final time is hit exactly. On failure `state` keeps the last valid
    /// step.
    pub fn advance_to(&mut self, state: &mut DGState, t_end: f64) -> Result<(), SolverError> {
        while state.time < t_end {
            let mut dt = self.stable_dt(state)?;
            let last = state.time + dt >= t_end;
            if last {
                dt = t_end - state.time;
            }
            let mut next = self.step(state, dt)?;
            if last {
                next.time = t_end;
            }
            *state = next;
        }
        Ok(())
    }
}
