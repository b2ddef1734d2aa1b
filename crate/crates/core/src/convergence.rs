//! Self-convergence study on a sequence of meshes.

use serde::Serialize;

use crate::error::Error;
use crate::runner::simulate;
use crate::scenario::Scenario;
use crate::state::DGState;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub cells: usize,
    /// `Σ_j Δ Σ_i |ū_{j,i} − ū^ref_{j,i}|` at the final time.
    pub l1_error: f64,
    /// Observed order against the previous (coarser) row.
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub reference_cells: usize,
    pub rows: Vec<ConvergenceRow>,
}

fn final_state(scenario: &Scenario) -> Result<DGState, Error> {
    let mut s = scenario.clone();
    s.snapshots = vec![s.t_end];
    let mut outcome = simulate(&s)?;
    if let Some((err, _)) = outcome.failure.take() {
        return Err(err);
    }
    Ok(outcome.states.pop().expect("final state"))
}

/// What the coarse solutions are compared against.
pub enum Reference<'a> {
    /// The same scenario on a finer mesh (default: four times the finest),
    /// aggregated onto each coarse mesh.
    Refined(Option<usize>),
    /// Exact cell averages of the conserved variables: `(a, b, t)` gives the
    /// mean over `[a, b]` at time `t`.
    Exact(&'a dyn Fn(f64, f64, f64) -> Vec<f64>),
}

/// Runs `base` on every mesh in `meshes` and compares final cell averages
/// with a reference on a mesh four times finer than the finest (or
/// `reference_cells`). The base scenario must have smooth initial data and a
/// uniform parameter field.
pub fn convergence_study(
    base: &Scenario,
    meshes: &[usize],
    reference_cells: Option<usize>,
) -> Result<ConvergenceTable, Error> {
    convergence_study_against(base, meshes, Reference::Refined(reference_cells))
}

/// [`convergence_study`] with an explicit reference. `reference_cells` of
/// the result is zero for an exact reference.
pub fn convergence_study_against(
    base: &Scenario,
    meshes: &[usize],
    reference: Reference<'_>,
) -> Result<ConvergenceTable, Error> {
    if !base.initial.is_smooth() || !base.theta.is_uniform() {
        return Err(Error::Config(format!(
            "scenario '{}' has discontinuous data or parameters, so a convergence order is meaningless",
            base.name
        )));
    }
    let mut meshes = meshes.to_vec();
    meshes.sort_unstable();
    meshes.dedup();
    let finest = *meshes
        .last()
        .ok_or_else(|| Error::Config("no meshes given".into()))?;
    if meshes[0] == 0 {
        return Err(Error::Config("meshes need at least one cell".into()));
    }

    let length = base.mesh.length;
    let (reference_cells, refined) = match reference {
        Reference::Refined(cells) => {
            let cells = cells.unwrap_or(4 * finest);
            if let Some(&n) = meshes.iter().find(|&&n| cells % n != 0 || n >= cells) {
                return Err(Error::Config(format!(
                    "mesh {n} must be a proper divisor of the reference mesh {cells}"
                )));
            }
            (cells, Some(final_state(&base.with_cells(cells))?))
        }
        Reference::Exact(_) => (0, None),
    };

    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &n in &meshes {
        let coarse = final_state(&base.with_cells(n))?;
        let m = coarse.n_components();
        let dx = length / n as f64;
        let mut error = 0.0;
        for j in 0..n {
            let exact = match (&reference, &refined) {
                (_, Some(fine)) => {
                    let ratio = reference_cells / n;
                    let mut mean = vec![0.0; m];
                    for r in 0..ratio {
                        for (acc, v) in mean.iter_mut().zip(fine.average(j * ratio + r)) {
                            *acc += v;
                        }
                    }
                    mean.iter_mut().for_each(|v| *v /= ratio as f64);
                    mean
                }
                (Reference::Exact(f), None) => f(j as f64 * dx, (j + 1) as f64 * dx, coarse.time),
                _ => unreachable!("refined reference is always computed"),
            };
            for (u, e) in coarse.average(j).iter().zip(&exact) {
                error += dx * (u - e).abs();
            }
        }
        let order = rows.last().and_then(|prev| {
            (prev.l1_error > 0.0 && error > 0.0)
                .then(|| (prev.l1_error / error).ln() / (n as f64 / prev.cells as f64).ln())
        });
        rows.push(ConvergenceRow {
            cells: n,
            l1_error: error,
            order,
        });
    }
    Ok(ConvergenceTable {
        reference_cells,
        rows,
    })
}
