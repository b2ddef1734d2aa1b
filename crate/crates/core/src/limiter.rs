//! Minmod slope limiter with mapped neighbor averages.
//!
//! The limiter of cell `j` compares the cell's slope against the differences
//! of averages with its neighbors. Neighbor averages are first mapped onto
//! `θ_j` (left neighbor as demand side, right neighbor as supply side), so a
//! steady state that is nonconstant only because `θ` jumps looks flat to the
//! limiter and is left untouched.

use crate::boundary::BoundarySpec;
use crate::error::SolverError;
use crate::flux::{delta_map_into, FluxConfig};
use crate::mesh::Mesh;
use crate::model::{Side, SystemModel};
use crate::state::DGState;

/// `s · min |a_n|` when all three arguments share the sign `s`, else zero.
#[inline]
pub fn minmod(a1: f64, a2: f64, a3: f64) -> f64 {
    if a1 > 0.0 && a2 > 0.0 && a3 > 0.0 {
        a1.min(a2).min(a3)
    } else if a1 < 0.0 && a2 < 0.0 && a3 < 0.0 {
        a1.max(a2).max(a3)
    } else {
        0.0
    }
}

/// Reusable buffers for neighbor lookups.
#[derive(Debug, Clone)]
pub(crate) struct NeighborWorkspace {
    raw: Vec<f64>,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

impl NeighborWorkspace {
    pub fn new(n_components: usize) -> Self {
        Self {
            raw: vec![0.0; n_components],
            left: vec![0.0; n_components],
            right: vec![0.0; n_components],
        }
    }
}

/// Fills `ws.left` / `ws.right` with the neighbor averages of cell `j`, mapped
/// onto `θ_j` when `map` is set.
pub(crate) fn mapped_neighbor_averages(
    state: &DGState,
    mesh: &Mesh,
    model: &dyn SystemModel,
    bc: &BoundarySpec,
    map: bool,
    j: usize,
    ws: &mut NeighborWorkspace,
) -> Result<(), SolverError> {
    let n = state.n_cells();
    let periodic = bc.is_periodic_at(state.time);
    let theta_j = mesh.theta(j);
    let cell_err = |source| SolverError::Cell { cell: j, source };

    for (side, slot) in [(Side::Demand, 0), (Side::Supply, 1)] {
        let neighbor = match side {
            Side::Demand if j > 0 => Some(j - 1),
            Side::Supply if j + 1 < n => Some(j + 1),
            _ if periodic => Some(if side == Side::Demand { n - 1 } else { 0 }),
            _ => None,
        };
        let out = if slot == 0 { &mut ws.left } else { &mut ws.right };
        match neighbor {
            Some(i) => {
                if map {
                    delta_map_into(model, state.average(i), mesh.theta(i), theta_j, side, out)
                        .map_err(cell_err)?;
                } else {
                    out.copy_from_slice(state.average(i));
                }
            }
            None => {
                // exterior cell shares θ_j, so no mapping is needed
                ws.raw.copy_from_slice(state.average(j));
                bc.ghost_into(side == Side::Supply, model, &ws.raw, theta_j, state.time, out);
            }
        }
    }
    Ok(())
}

fn limit_cell(state: &mut DGState, j: usize, left: &[f64], right: &[f64]) {
    let k = state.degree();
    for i in 0..state.n_components() {
        let mean = state.coeff(j, 0, i);
        let forward = right[i] - mean;
        let backward = mean - left[i];
        let c1 = state.coeff(j, 1, i);
        match k {
            1 => state.set_coeff(j, 1, i, minmod(c1, forward, backward)),
            2 => {
                let c2 = state.coeff(j, 2, i);
                // right and left trace deviations from the mean
                let up = c1 + c2;
                let down = c1 - c2;
                if minmod(up, forward, backward) != up || minmod(down, forward, backward) != down {
                    state.set_coeff(j, 1, i, minmod(c1, forward, backward));
                    state.set_coeff(j, 2, i, 0.0);
                }
            }
            _ => {}
        }
    }
}

/// Applies the limiter to every cell in place. Cell averages are untouched.
pub fn limit_in_place(
    state: &mut DGState,
    mesh: &Mesh,
    model: &dyn SystemModel,
    config: &FluxConfig,
    bc: &BoundarySpec,
) -> Result<(), SolverError> {
    if state.degree() == 0 {
        return Ok(());
    }
    let mut ws = NeighborWorkspace::new(state.n_components());
    // averages are read-only below, so neighbors see the same values whether
    // or not they were already limited
    for j in 0..state.n_cells() {
        mapped_neighbor_averages(state, mesh, model, bc, config.delta_mapping, j, &mut ws)?;
        limit_cell(state, j, &ws.left, &ws.right);
    }
    Ok(())
}

/// Limited copy of `state`.
pub fn limit(
    state: &DGState,
    mesh: &Mesh,
    model: &dyn SystemModel,
    config: &FluxConfig,
    bc: &BoundarySpec,
) -> Result<DGState, SolverError> {
    let mut out = state.clone();
    limit_in_place(&mut out, mesh, model, config, bc)?;
    Ok(out)
}

/// Limited cell-boundary values of cell `j` from its unlimited traces:
///
/// ```text
/// u⁻_{j+1/2} = ū_j + m(u⁻_{j+1/2} − ū_j, δ_j ū_{j+1} − ū_j, ū_j − δ_j ū_{j−1})
/// u⁺_{j−1/2} = ū_j − m(ū_j − u⁺_{j−1/2}, δ_j ū_{j+1} − ū_j, ū_j − δ_j ū_{j−1})
/// ```
///
/// Returns `(u⁻_{j+1/2}, u⁺_{j−1/2})`. For degree 1 these equal the traces of
/// the limited polynomial.
pub fn boundary_traces_limited(
    state: &DGState,
    j: usize,
    mesh: &Mesh,
    model: &dyn SystemModel,
    config: &FluxConfig,
    bc: &BoundarySpec,
) -> Result<(Vec<f64>, Vec<f64>), SolverError> {
    let m = state.n_components();
    let mut ws = NeighborWorkspace::new(m);
    mapped_neighbor_averages(state, mesh, model, bc, config.delta_mapping, j, &mut ws)?;
    let mut right_trace = vec![0.0; m];
    let mut left_trace = vec![0.0; m];
    state.trace_into(j, crate::state::CellSide::Right, &mut right_trace);
    state.trace_into(j, crate::state::CellSide::Left, &mut left_trace);
    let mean = state.average(j);
    let mut minus = vec![0.0; m];
    let mut plus = vec![0.0; m];
    for i in 0..m {
        let forward = ws.right[i] - mean[i];
        let backward = mean[i] - ws.left[i];
        minus[i] = mean[i] + minmod(right_trace[i] - mean[i], forward, backward);
        plus[i] = mean[i] - minmod(mean[i] - left_trace[i], forward, backward);
    }
    Ok((minus, plus))
}
