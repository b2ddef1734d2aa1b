//! Scenario execution: time loop, snapshot files and run manifest.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::error::Error;
use crate::scenario::{Scenario, Setup};
use crate::snapshot::ProfileSnapshot;
use crate::solver::Solver;
use crate::state::DGState;

/// Bookkeeping of a finished (or aborted) run, written as `manifest.toml`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub steps: usize,
    pub wall_time_s: f64,
    pub final_time: f64,
    /// `Σ_j Δ ū_j` per component at `t = 0` and at the final time.
    pub initial_totals: Vec<f64>,
    pub final_totals: Vec<f64>,
    /// Time-integrated flux entering through `x = 0` minus the flux leaving
    /// through `x = L`, per component.
    pub boundary_inflow: Vec<f64>,
    /// `max_i |ΔM_i − inflow_i| / scale_i` with `scale_i` the larger of
    /// `|M_i(0)|` and `Σ_j Δ |ū_{j,i}|` at the final time.
    pub conservation_drift: f64,
    /// Whether the first or last cell average changed during a run with
    /// non-periodic ends.
    pub edge_cells_changed: bool,
    pub snapshot_files: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// In-memory result of [`simulate`].
#[derive(Debug)]
pub struct RunOutcome {
    pub setup: Setup,
    /// States at the output times reached, starting with `t = 0`.
    pub states: Vec<DGState>,
    pub snapshots: Vec<ProfileSnapshot>,
    pub report: RunReport,
    /// Solver failure and the last valid state before it.
    pub failure: Option<(Error, DGState)>,
}

fn totals(state: &DGState, dx: f64) -> (Vec<f64>, Vec<f64>) {
    let m = state.n_components();
    let mut sum = vec![0.0; m];
    let mut abs = vec![0.0; m];
    for j in 0..state.n_cells() {
        for (i, &u) in state.average(j).iter().enumerate() {
            sum[i] += dx * u;
            abs[i] += dx * u.abs();
        }
    }
    (sum, abs)
}

/// Runs a scenario without touching the file system. Configuration problems
/// are returned as errors; solver failures are recorded in the outcome.
pub fn simulate(scenario: &Scenario) -> Result<RunOutcome, Error> {
    scenario.validate()?;
    let start = Instant::now();
    let setup = scenario.setup().map_err(|e| Error::Config(e.to_string()))?;
    let (states, failure, steps, inflow) = {
        let model = setup.model.as_ref();
        let mut solver = Solver::new(
            &setup.mesh,
            model,
            scenario.flux,
            &scenario.boundary,
            scenario.courant(),
            scenario.degree,
        )
        .map_err(|e| Error::Config(e.to_string()))?;
        let mut state = solver
            .initialize(setup.initial.clone())
            .map_err(|e| Error::Config(format!("initial data: {e}")))?;
        let mut states = Vec::new();
        let mut failure = None;
        for t in scenario.output_times() {
            if let Err(source) = solver.advance_to(&mut state, t) {
                failure = Some((
                    Error::Solver {
                        time: state.time,
                        source,
                    },
                    state.clone(),
                ));
                break;
            }
            states.push(state.clone());
        }
        (
            states,
            failure,
            solver.steps(),
            solver.net_boundary_inflow().to_vec(),
        )
    };

    let dx = setup.mesh.dx();
    let first = &states[0];
    let last = failure.as_ref().map_or_else(|| states.last().expect("t = 0"), |(_, s)| s);
    let (initial_totals, _) = totals(first, dx);
    let (final_totals, final_abs) = totals(last, dx);
    let conservation_drift = (0..initial_totals.len())
        .map(|i| {
            let defect = (final_totals[i] - initial_totals[i] - inflow[i]).abs();
            let scale = initial_totals[i].abs().max(final_abs[i]);
            if scale > 0.0 {
                defect / scale
            } else {
                defect
            }
        })
        .fold(0.0, f64::max);
    let n = first.n_cells();
    let edge_cells_changed = !scenario.boundary.is_periodic_at(last.time)
        && (first.average(0) != last.average(0) || first.average(n - 1) != last.average(n - 1));

    let model = setup.model.as_ref();
    let snapshots = states
        .iter()
        .map(|s| ProfileSnapshot::from_state(s, &setup.mesh, model))
        .collect();
    let report = RunReport {
        steps,
        wall_time_s: start.elapsed().as_secs_f64(),
        final_time: last.time,
        initial_totals,
        final_totals,
        boundary_inflow: inflow,
        conservation_drift,
        edge_cells_changed,
        snapshot_files: Vec::new(),
        error: failure.as_ref().map(|(e, _)| e.to_string()),
    };
    Ok(RunOutcome {
        setup,
        states,
        snapshots,
        report,
        failure,
    })
}

/// File name of the snapshot at time `t`.
pub fn snapshot_file_name(name: &str, t: f64) -> String {
    format!("{name}_t{t}.csv")
}

#[derive(Serialize)]
struct Manifest<'a> {
    run: &'a RunReport,
    scenario: &'a Scenario,
}

/// Runs a scenario and writes one CSV per output time plus `manifest.toml`
/// into `out_dir`. After a solver failure the last valid state is written as
/// `<name>_failed_t<time>.csv` before the error is returned.
pub fn run(scenario: &Scenario, out_dir: &Path) -> Result<RunOutcome, Error> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut outcome = simulate(scenario)?;
    let mut files: Vec<PathBuf> = Vec::new();
    for snap in &outcome.snapshots {
        let path = out_dir.join(snapshot_file_name(&scenario.name, snap.time));
        snap.write_csv(&path)?;
        files.push(path);
    }
    if let Some((_, last)) = &outcome.failure {
        let snap = ProfileSnapshot::from_state(last, &outcome.setup.mesh, outcome.setup.model.as_ref());
        let path = out_dir.join(format!("{}_failed_t{}.csv", scenario.name, last.time));
        snap.write_csv(&path)?;
        files.push(path);
    }
    outcome.report.snapshot_files = files
        .iter()
        .filter_map(|p| p.file_name().map(|f| f.to_string_lossy().into_owned()))
        .collect();

    let manifest = Manifest {
        run: &outcome.report,
        scenario,
    };
    let text = toml::to_string(&manifest).map_err(|e| Error::Config(e.to_string()))?;
    let path = out_dir.join("manifest.toml");
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;

    match outcome.failure.take() {
        Some((err, _)) => Err(err),
        None => Ok(outcome),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::traffic_smooth;

    #[test]
    fn zero_end_time_writes_only_the_projection() {
        let mut s = traffic_smooth();
        s.t_end = 0.0;
        s.snapshots.clear();
        let dir = tempfile::tempdir().unwrap();
        let out = run(&s, dir.path()).unwrap();
        assert_eq!(out.report.steps, 0);
        assert_eq!(out.report.snapshot_files, vec!["traffic-smooth_t0.csv"]);
        assert!(dir.path().join("manifest.toml").exists());
    }

    #[test]
    fn snapshot_times_are_hit_exactly() {
        let mut s = traffic_smooth();
        s.snapshots = vec![0.0123, 0.05, 0.1];
        let out = simulate(&s).unwrap();
        let times: Vec<f64> = out.snapshots.iter().map(|p| p.time).collect();
        assert_eq!(times, vec![0.0, 0.0123, 0.05, 0.1]);
        assert!(out.report.conservation_drift < 1e-13);
    }
}
