//! Semidiscrete DG operator
//!
//! ```text
//! d/dt u_j^l = (2l+1)/Δ ( ∫_{I_j} f(u_h, θ_j) ∂_x φ_j^l dx − f̂_{j+1/2} + (−1)^l f̂_{j−1/2} )
//! ```
//!
//! with the volume integral evaluated by `(k+1)`-point Gauss quadrature and the
//! interface fluxes from [`crate::flux`].

use crate::basis::BasisTable;
use crate::boundary::BoundarySpec;
use crate::error::SolverError;
use crate::flux::{interface_flux_into, FluxConfig, FluxWorkspace};
use crate::mesh::Mesh;
use crate::model::SystemModel;
use crate::state::{CellSide, DGState};

/// Numerical fluxes through the two ends of the domain, `f̂` at `x = 0` and
/// `x = L`. Their difference is the rate of change of `Σ_j Δ ū_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFluxes {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

/// Evaluates the right-hand side repeatedly without reallocating.
#[derive(Debug)]
pub struct SpatialOperator<'a> {
    mesh: &'a Mesh,
    model: &'a dyn SystemModel,
    config: FluxConfig,
    bc: &'a BoundarySpec,
    table: BasisTable,
    left_traces: Vec<f64>,
    right_traces: Vec<f64>,
    fluxes: Vec<f64>,
    ws: FluxWorkspace,
    point: Vec<f64>,
    point_flux: Vec<f64>,
    ghost: Vec<f64>,
}

impl<'a> SpatialOperator<'a> {
    pub fn new(
        mesh: &'a Mesh,
        model: &'a dyn SystemModel,
        config: FluxConfig,
        bc: &'a BoundarySpec,
        degree: usize,
    ) -> Result<Self, SolverError> {
        mesh.validate(model)?;
        bc.validate(model)?;
        config.validate(model)?;
        let m = model.n_components();
        let n = mesh.n_cells();
        Ok(Self {
            mesh,
            model,
            config,
            bc,
            table: BasisTable::new(degree),
            left_traces: vec![0.0; n * m],
            right_traces: vec![0.0; n * m],
            fluxes: vec![0.0; (n + 1) * m],
            ws: FluxWorkspace::for_model(model),
            point: vec![0.0; m],
            point_flux: vec![0.0; m],
            ghost: vec![0.0; m],
        })
    }

    pub fn mesh(&self) -> &Mesh {
        self.mesh
    }

    pub fn model(&self) -> &dyn SystemModel {
        self.model
    }

    pub fn flux_config(&self) -> &FluxConfig {
        &self.config
    }

    pub fn boundary(&self) -> &BoundarySpec {
        self.bc
    }

    /// Interface fluxes `f̂_{i−1/2}`, `i = 0..=N`, from the last evaluation.
    pub fn interface_fluxes(&self) -> &[f64] {
        &self.fluxes
    }

    fn compute_interface_fluxes(&mut self, state: &DGState) -> Result<(), SolverError> {
        let n = self.mesh.n_cells();
        let m = self.model.n_components();
        let t = state.time;
        for j in 0..n {
            state.trace_into(j, CellSide::Left, &mut self.left_traces[j * m..(j + 1) * m]);
            state.trace_into(j, CellSide::Right, &mut self.right_traces[j * m..(j + 1) * m]);
        }

        for i in 1..n {
            interface_flux_into(
                self.model,
                &self.right_traces[(i - 1) * m..i * m],
                self.mesh.theta(i - 1),
                &self.left_traces[i * m..(i + 1) * m],
                self.mesh.theta(i),
                &self.config,
                &mut self.ws,
                &mut self.fluxes[i * m..(i + 1) * m],
            )
            .map_err(|source| SolverError::Interface { interface: i, source })?;
        }

        if self.bc.is_periodic_at(t) {
            interface_flux_into(
                self.model,
                &self.right_traces[(n - 1) * m..n * m],
                self.mesh.theta(n - 1),
                &self.left_traces[..m],
                self.mesh.theta(0),
                &self.config,
                &mut self.ws,
                &mut self.fluxes[..m],
            )
            .map_err(|source| SolverError::Interface { interface: 0, source })?;
            let (first, rest) = self.fluxes.split_at_mut(m);
            rest[(n - 1) * m..n * m].copy_from_slice(first);
        } else {
            let theta0 = self.mesh.theta(0);
            self.bc.ghost_into(false, self.model, &self.left_traces[..m], theta0, t, &mut self.ghost);
            interface_flux_into(
                self.model,
                &self.ghost,
                theta0,
                &self.left_traces[..m],
                theta0,
                &self.config,
                &mut self.ws,
                &mut self.fluxes[..m],
            )
            .map_err(|source| SolverError::Interface { interface: 0, source })?;

            let theta_n = self.mesh.theta(n - 1);
            let interior = &self.right_traces[(n - 1) * m..n * m];
            self.bc.ghost_into(true, self.model, interior, theta_n, t, &mut self.ghost);
            interface_flux_into(
                self.model,
                interior,
                theta_n,
                &self.ghost,
                theta_n,
                &self.config,
                &mut self.ws,
                &mut self.fluxes[n * m..(n + 1) * m],
            )
            .map_err(|source| SolverError::Interface { interface: n, source })?;
        }
        Ok(())
    }

    /// Writes `dU/dt` (same layout as the coefficients) into `out` and returns
    /// the boundary fluxes used.
    pub fn apply(&mut self, state: &DGState, out: &mut [f64]) -> Result<BoundaryFluxes, SolverError> {
        if state.degree() != self.table.degree {
            self.table = BasisTable::new(state.degree());
        }
        self.compute_interface_fluxes(state)?;

        let n = self.mesh.n_cells();
        let m = self.model.n_components();
        let nb = state.n_basis();
        let inv_dx = 1.0 / self.mesh.dx();
        out.fill(0.0);

        for j in 0..n {
            let theta = self.mesh.theta(j);
            let cell_out = &mut out[j * nb * m..(j + 1) * nb * m];
            if nb > 1 {
                // volume term Σ_g w_g f(u_h(s_g)) L_l'(s_g)
                for (g, &w) in self.table.rule.weights.iter().enumerate() {
                    self.point.fill(0.0);
                    for l in 0..nb {
                        let phi = self.table.values[g * nb + l];
                        for (p, &c) in self.point.iter_mut().zip(state.mode(j, l)) {
                            *p += c * phi;
                        }
                    }
                    self.model
                        .flux(&self.point, theta, &mut self.point_flux)
                        .map_err(|source| SolverError::Cell { cell: j, source })?;
                    for l in 1..nb {
                        let dphi = w * self.table.derivs[g * nb + l];
                        for i in 0..m {
                            cell_out[l * m + i] += dphi * self.point_flux[i];
                        }
                    }
                }
            }
            let f_left = &self.fluxes[j * m..(j + 1) * m];
            let f_right = &self.fluxes[(j + 1) * m..(j + 2) * m];
            for l in 0..nb {
                let scale = (2 * l + 1) as f64 * inv_dx;
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                for i in 0..m {
                    let v = &mut cell_out[l * m + i];
                    *v = scale * (*v - f_right[i] + sign * f_left[i]);
                }
            }
        }

        Ok(BoundaryFluxes {
            left: self.fluxes[..m].to_vec(),
            right: self.fluxes[n * m..(n + 1) * m].to_vec(),
        })
    }
}

/// One-shot evaluation of the semidiscrete right-hand side at time `t`.
pub fn semidiscrete_rhs(
    state: &DGState,
    mesh: &Mesh,
    model: &dyn SystemModel,
    config: &FluxConfig,
    bc: &BoundarySpec,
    t: f64,
) -> Result<Vec<f64>, SolverError> {
    let mut op = SpatialOperator::new(mesh, model, *config, bc, state.degree())?;
    let mut timed = state.clone();
    timed.time = t;
    let mut out = vec![0.0; state.coeffs().len()];
    op.apply(&timed, &mut out)?;
    Ok(out)
}
