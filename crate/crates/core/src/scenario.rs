//! Scenario configuration: everything needed to reproduce a run, stored as
//! TOML. Unknown keys are rejected.
//!
//! ```toml
//! name = "traffic-4a"
//! degree = 1
//! t_end = 400.0
//! snapshots = [400.0]
//!
//! [model]
//! kind = "traffic"          # or "elastic" with `beta`
//! classes = 3
//! v_free = 40.0
//! rho_jam = 1.0
//!
//! [mesh]
//! length = 10000.0
//! cells = 800
//!
//! [theta]                   # uniform | layered | two-piece | explicit
//! kind = "two-piece"
//! x0 = 3000.0
//! left = [2.0, 0.5, 0.75, 1.0]
//! right = [1.0, 0.25, 0.375, 0.5]
//!
//! [initial]                 # primitive variables; constant | riemann | sine | gaussian
//! kind = "riemann"
//! x0 = 3000.0
//! left = [0.02, 0.03, 0.01]
//! right = [0.2, 0.08, 0.15]
//!
//! [boundary]
//! left = { kind = "outflow" }
//! right = { kind = "outflow" }
//!
//! [flux]                    # optional
//! theta_bar = "right"
//!
//! [courant]                 # optional, defaults to 1/(2k+1)
//! number = 0.3
//! ```

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryCondition, BoundarySpec, Signal};
use crate::elastic::ElasticModel;
use crate::error::{Error, SolverError};
use crate::flux::{FluxConfig, ThetaBarRule};
use crate::mesh::Mesh;
use crate::model::SystemModel;
use crate::state::{project_initial, DGState};
use crate::timestep::CourantConfig;
use crate::traffic::TrafficModel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    Elastic {
        beta: f64,
    },
    Traffic {
        classes: usize,
        v_free: f64,
        rho_jam: f64,
    },
}

impl ModelSpec {
    pub fn build(&self) -> Result<Box<dyn SystemModel>, SolverError> {
        Ok(match *self {
            ModelSpec::Elastic { beta } => Box::new(ElasticModel::new(beta)?),
            ModelSpec::Traffic {
                classes,
                v_free,
                rho_jam,
            } => Box::new(TrafficModel::new(classes, v_free, rho_jam)?),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSpec {
    pub length: f64,
    pub cells: usize,
}

/// Per-cell parameter field, sampled at cell centers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ThetaSpec {
    Uniform {
        theta: Vec<f64>,
    },
    /// Layers of equal `width` alternating between `first` (starting at
    /// `x = 0`) and `second`.
    Layered {
        width: f64,
        first: Vec<f64>,
        second: Vec<f64>,
    },
    TwoPiece {
        x0: f64,
        left: Vec<f64>,
        right: Vec<f64>,
    },
    Explicit {
        cells: Vec<Vec<f64>>,
    },
}

impl ThetaSpec {
    pub fn build(&self, mesh: MeshSpec) -> Result<Mesh, SolverError> {
        let MeshSpec { length, cells } = mesh;
        match self {
            ThetaSpec::Uniform { theta } => Mesh::uniform(length, cells, theta),
            ThetaSpec::Layered {
                width,
                first,
                second,
            } => {
                if !(*width > 0.0) || first.len() != second.len() {
                    return Err(SolverError::Config(
                        "layered parameters need a positive width and equal-length vectors".into(),
                    ));
                }
                Mesh::from_fn(length, cells, first.len(), |x| {
                    if (x / width).floor() as i64 % 2 == 0 {
                        first.clone()
                    } else {
                        second.clone()
                    }
                })
            }
            ThetaSpec::TwoPiece { x0, left, right } => {
                if left.len() != right.len() {
                    return Err(SolverError::Config(
                        "two-piece parameters must have equal length".into(),
                    ));
                }
                Mesh::from_fn(length, cells, left.len(), |x| {
                    if x < *x0 {
                        left.clone()
                    } else {
                        right.clone()
                    }
                })
            }
            ThetaSpec::Explicit { cells: per_cell } => {
                if per_cell.len() != cells {
                    return Err(SolverError::Config(format!(
                        "explicit parameter field has {} cells, mesh has {cells}",
                        per_cell.len()
                    )));
                }
                let n_theta = per_cell.first().map_or(0, Vec::len);
                if per_cell.iter().any(|t| t.len() != n_theta) {
                    return Err(SolverError::Config(
                        "explicit parameter vectors differ in length".into(),
                    ));
                }
                Mesh::new(length, cells, n_theta, per_cell.concat())
            }
        }
    }

    /// Whether every cell gets the same parameters.
    pub fn is_uniform(&self) -> bool {
        match self {
            ThetaSpec::Uniform { .. } => true,
            ThetaSpec::Layered { first, second, .. } => first == second,
            ThetaSpec::TwoPiece { left, right, .. } => left == right,
            ThetaSpec::Explicit { cells } => cells.windows(2).all(|w| w[0] == w[1]),
        }
    }
}

/// Initial data in primitive variables (elastic: strain and velocity;
/// traffic: per-lane class densities).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialSpec {
    Constant {
        value: Vec<f64>,
    },
    Riemann {
        x0: f64,
        left: Vec<f64>,
        right: Vec<f64>,
    },
    /// `mean + amplitude · sin(2π periods x / L)`.
    Sine {
        mean: Vec<f64>,
        amplitude: Vec<f64>,
        #[serde(default = "one_f64")]
        periods: f64,
    },
    /// `base + amplitude · exp(−((x − center)/width)²)`.
    Gaussian {
        base: Vec<f64>,
        amplitude: Vec<f64>,
        center: f64,
        width: f64,
    },
}

fn one_f64() -> f64 {
    1.0
}

impl InitialSpec {
    fn len(&self) -> usize {
        match self {
            InitialSpec::Constant { value } => value.len(),
            InitialSpec::Riemann { left, .. } => left.len(),
            InitialSpec::Sine { mean, .. } => mean.len(),
            InitialSpec::Gaussian { base, .. } => base.len(),
        }
    }

    fn check(&self, n: usize) -> Result<(), SolverError> {
        let ok = match self {
            InitialSpec::Constant { value } => value.len() == n,
            InitialSpec::Riemann { left, right, .. } => left.len() == n && right.len() == n,
            InitialSpec::Sine {
                mean, amplitude, ..
            } => mean.len() == n && amplitude.len() == n,
            InitialSpec::Gaussian {
                base,
                amplitude,
                width,
                ..
            } => base.len() == n && amplitude.len() == n && *width > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(SolverError::Config(format!(
                "initial data must have {n} components per vector (got {})",
                self.len()
            )))
        }
    }

    /// Primitive state at `x` on a domain of length `length`.
    pub fn primitive_at(&self, x: f64, length: f64) -> Vec<f64> {
        match self {
            InitialSpec::Constant { value } => value.clone(),
            InitialSpec::Riemann { x0, left, right } => {
                if x < *x0 {
                    left.clone()
                } else {
                    right.clone()
                }
            }
            InitialSpec::Sine {
                mean,
                amplitude,
                periods,
            } => {
                let s = (2.0 * PI * periods * x / length).sin();
                mean.iter().zip(amplitude).map(|(m, a)| m + a * s).collect()
            }
            InitialSpec::Gaussian {
                base,
                amplitude,
                center,
                width,
            } => {
                let g = (-((x - center) / width).powi(2)).exp();
                base.iter().zip(amplitude).map(|(b, a)| b + a * g).collect()
            }
        }
    }

    /// Whether the data are smooth (needed for a meaningful convergence order).
    pub fn is_smooth(&self) -> bool {
        !matches!(self, InitialSpec::Riemann { left, right, .. } if left != right)
    }
}

fn default_degree() -> usize {
    1
}

/// A complete run description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default = "default_degree")]
    pub degree: usize,
    pub t_end: f64,
    #[serde(default)]
    pub snapshots: Vec<f64>,
    pub model: ModelSpec,
    pub mesh: MeshSpec,
    pub theta: ThetaSpec,
    pub initial: InitialSpec,
    pub boundary: BoundarySpec,
    #[serde(default)]
    pub flux: FluxConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub courant: Option<CourantConfig>,
}

/// Model, mesh and projected initial data of a scenario.
#[derive(Debug)]
pub struct Setup {
    pub model: Box<dyn SystemModel>,
    pub mesh: Mesh,
    pub initial: DGState,
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Self, Error> {
        let s: Scenario = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario is always representable as TOML")
    }

    pub fn courant(&self) -> CourantConfig {
        self.courant
            .unwrap_or_else(|| CourantConfig::for_degree(self.degree))
    }

    /// Snapshot times in increasing order, always including `t = 0` and
    /// `t_end`.
    pub fn output_times(&self) -> Vec<f64> {
        let mut times = vec![0.0, self.t_end];
        times.extend(self.snapshots.iter().copied().filter(|&t| t > 0.0));
        times.sort_by(f64::total_cmp);
        times.dedup();
        times
    }

    /// Copy with a different number of cells.
    pub fn with_cells(&self, cells: usize) -> Self {
        let mut s = self.clone();
        s.mesh.cells = cells;
        s
    }

    pub fn validate(&self) -> Result<(), Error> {
        let config = |m: String| Error::Config(format!("scenario '{}': {m}", self.name));
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(config(format!("t_end must be finite and >= 0, got {}", self.t_end)));
        }
        if let Some(t) = self
            .snapshots
            .iter()
            .find(|&&t| !(t >= 0.0 && t <= self.t_end))
        {
            return Err(config(format!("snapshot time {t} outside [0, {}]", self.t_end)));
        }
        self.setup()
            .and_then(|setup| {
                self.courant().validate(self.degree)?;
                setup.mesh.validate(setup.model.as_ref())?;
                self.boundary.validate(setup.model.as_ref())?;
                self.flux.validate(setup.model.as_ref())
            })
            .map_err(|e| config(e.to_string()))
    }

    /// Builds the model and mesh and projects the initial data. The projection
    /// is not yet limited.
    pub fn setup(&self) -> Result<Setup, SolverError> {
        let model = self.model.build()?;
        let mesh = self.theta.build(self.mesh)?;
        mesh.validate(model.as_ref())?;
        let m = model.n_components();
        self.initial.check(m)?;
        let length = mesh.length();
        let initial = project_initial(
            |x| {
                let prim = self.initial.primitive_at(x, length);
                let mut u = vec![0.0; m];
                model.from_primitive(&prim, mesh.theta(mesh.locate(x)), &mut u);
                u
            },
            &mesh,
            self.degree,
        )?;
        Ok(Setup {
            model,
            mesh,
            initial,
        })
    }
}

/// Cells per unit layer used by the built-in layered elastic scenario.
pub const DEFAULT_CELLS_PER_LAYER: usize = 8;

/// Alternating unit layers `(ρ, K) = (1, 1)` and `(3, 3)` on `[0, 300]`,
/// initially at rest, driven from the left by a velocity pulse that then
/// circulates once the boundaries become periodic at `t = 70`.
pub fn elastic_layered(cells_per_unit: usize) -> Result<Scenario, Error> {
    if cells_per_unit < 2 {
        return Err(Error::Config(format!(
            "layered scenario needs at least 2 cells per layer, got {cells_per_unit}"
        )));
    }
    Ok(Scenario {
        name: "elastic-layered".into(),
        degree: 1,
        t_end: 2850.0,
        snapshots: vec![120.0, 240.0, 840.0, 1500.0, 2850.0],
        model: ModelSpec::Elastic { beta: 0.3 },
        mesh: MeshSpec {
            length: 300.0,
            cells: 300 * cells_per_unit,
        },
        theta: ThetaSpec::Layered {
            width: 1.0,
            first: vec![1.0, 1.0],
            second: vec![3.0, 3.0],
        },
        initial: InitialSpec::Constant {
            value: vec![0.0, 0.0],
        },
        boundary: BoundarySpec {
            left: BoundaryCondition::Prescribed {
                component: 1,
                signal: Signal::CosinePulse {
                    amplitude: -0.2,
                    center: 30.0,
                    half_width: 30.0,
                },
            },
            right: BoundaryCondition::Outflow,
            periodic_after: Some(70.0),
        },
        flux: FluxConfig::default(),
        courant: None,
    })
}

/// The four three-class Riemann problems on a 10 km road.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiemannCase {
    Fig4a,
    Fig4b,
    Fig5a,
    Fig5b,
}

impl RiemannCase {
    pub const ALL: [RiemannCase; 4] = [Self::Fig4a, Self::Fig4b, Self::Fig5a, Self::Fig5b];

    pub fn label(self) -> &'static str {
        match self {
            Self::Fig4a => "4a",
            Self::Fig4b => "4b",
            Self::Fig5a => "5a",
            Self::Fig5b => "5b",
        }
    }

    pub fn parse(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.label() == label)
    }

    /// `(x0 / L, a^L / a^R, ρ^L, ρ^R, θ̄ rule)`.
    pub fn data(self) -> (f64, f64, [f64; 3], [f64; 3], ThetaBarRule) {
        match self {
            Self::Fig4a => (0.3, 2.0, [0.02, 0.03, 0.01], [0.2, 0.08, 0.15], ThetaBarRule::Right),
            Self::Fig4b => (0.5, 3.0, [0.15, 0.05, 0.02], [0.2, 0.15, 0.35], ThetaBarRule::Left),
            Self::Fig5a => (0.4, 3.0, [0.1, 0.15, 0.05], [0.15, 0.1, 0.2], ThetaBarRule::Left),
            Self::Fig5b => (0.45, 0.4, [0.1, 0.2, 0.3], [0.1, 0.25, 0.2], ThetaBarRule::Left),
        }
    }

    /// Number of waves the solution is expected to show: `m + 1` for the
    /// first pair, `m + 2` for the second.
    pub fn expected_waves(self) -> usize {
        match self {
            Self::Fig4a | Self::Fig4b => 4,
            Self::Fig5a | Self::Fig5b => 5,
        }
    }

    pub fn x0(self) -> f64 {
        self.data().0 * ROAD_LENGTH
    }
}

const ROAD_LENGTH: f64 = 10_000.0;

/// Three-class Riemann problem with lane count jumping by `a^L / a^R` and
/// class speed factors halving across `x0`.
pub fn traffic_riemann(case: RiemannCase) -> Scenario {
    let (frac, ratio, left, right, theta_bar) = case.data();
    let x0 = frac * ROAD_LENGTH;
    Scenario {
        name: format!("traffic-{}", case.label()),
        degree: 1,
        t_end: 400.0,
        snapshots: vec![400.0],
        model: ModelSpec::Traffic {
            classes: 3,
            v_free: 40.0,
            rho_jam: 1.0,
        },
        mesh: MeshSpec {
            length: ROAD_LENGTH,
            cells: 800,
        },
        theta: ThetaSpec::TwoPiece {
            x0,
            left: vec![ratio, 0.5, 0.75, 1.0],
            right: vec![1.0, 0.25, 0.375, 0.5],
        },
        initial: InitialSpec::Riemann {
            x0,
            left: left.to_vec(),
            right: right.to_vec(),
        },
        boundary: BoundarySpec::outflow(),
        flux: FluxConfig::with_theta_bar(theta_bar),
        courant: Some(CourantConfig::for_degree(1).with_number(0.3)),
    }
}

/// Single-class traffic on a periodic unit road with a smooth density wave,
/// stopped well before shocks form. Used as the convergence-study base.
pub fn traffic_smooth() -> Scenario {
    Scenario {
        name: "traffic-smooth".into(),
        degree: 1,
        t_end: 0.1,
        snapshots: vec![0.1],
        model: ModelSpec::Traffic {
            classes: 1,
            v_free: 1.0,
            rho_jam: 1.0,
        },
        mesh: MeshSpec {
            length: 1.0,
            cells: 100,
        },
        theta: ThetaSpec::Uniform {
            theta: vec![1.0, 1.0],
        },
        initial: InitialSpec::Sine {
            mean: vec![0.4],
            amplitude: vec![0.2],
            periods: 1.0,
        },
        boundary: BoundarySpec::periodic(),
        flux: FluxConfig::default(),
        courant: None,
    }
}

/// Names accepted by [`builtin`].
pub fn builtin_names() -> Vec<String> {
    let mut names = vec!["elastic-layered".to_string()];
    names.extend(RiemannCase::ALL.iter().map(|c| format!("traffic-{}", c.label())));
    names.push("traffic-smooth".into());
    names
}

pub fn builtin(name: &str) -> Option<Scenario> {
    match name {
        "elastic-layered" => elastic_layered(DEFAULT_CELLS_PER_LAYER).ok(),
        "traffic-smooth" => Some(traffic_smooth()),
        _ => name
            .strip_prefix("traffic-")
            .and_then(RiemannCase::parse)
            .map(traffic_riemann),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_round_trip_through_toml() {
        for name in builtin_names() {
            let s = builtin(&name).unwrap();
            s.validate().unwrap();
            let back = Scenario::from_toml_str(&s.to_toml_string()).unwrap();
            assert_eq!(back, s, "{name}");
        }
        assert!(builtin("traffic-6c").is_none());
    }

    #[test]
    fn layered_parameters() {
        let setup = elastic_layered(8).unwrap().setup().unwrap();
        let mesh = &setup.mesh;
        assert_eq!(mesh.n_cells(), 2400);
        assert_eq!(mesh.theta(mesh.locate(0.5)), &[1.0, 1.0]);
        assert_eq!(mesh.theta(mesh.locate(1.5)), &[3.0, 3.0]);
        assert_eq!(mesh.theta(mesh.locate(299.5)), &[3.0, 3.0]);
        assert!(elastic_layered(1).is_err());
    }

    #[test]
    fn riemann_case_layout() {
        let s = traffic_riemann(RiemannCase::Fig4a);
        let setup = s.setup().unwrap();
        let mesh = &setup.mesh;
        // the jump sits on a cell boundary
        let j = mesh.locate(3000.0);
        assert_eq!(mesh.interface(j), 3000.0);
        assert_eq!(mesh.theta(j - 1)[0], 2.0);
        assert_eq!(mesh.theta(j)[0], 1.0);
        // u = a ρ on the wide part of the road
        assert!((setup.initial.average(j - 1)[1] - 0.06).abs() < 1e-15);
        assert_eq!(s.flux.theta_bar, ThetaBarRule::Right);
    }

    #[test]
    fn unknown_keys_and_bad_snapshots_are_config_errors() {
        let mut text = traffic_smooth().to_toml_string();
        text.push_str("\nbogus = 3\n");
        assert!(matches!(Scenario::from_toml_str(&text), Err(Error::Config(_))));
        let mut s = traffic_smooth();
        s.snapshots = vec![0.5];
        assert!(matches!(s.validate(), Err(Error::Config(_))));
        let mut s = traffic_smooth();
        s.initial = InitialSpec::Constant { value: vec![0.1, 0.2] };
        assert!(s.validate().is_err());
    }

    #[test]
    fn output_times_start_at_zero() {
        let mut s = traffic_smooth();
        s.snapshots = vec![0.1, 0.05, 0.1, 0.0];
        assert_eq!(s.output_times(), vec![0.0, 0.05, 0.1]);
        s.snapshots.clear();
        assert_eq!(s.output_times(), vec![0.0, 0.1]);
    }
}
