//! Runge-Kutta discontinuous Galerkin solver for one-dimensional conservation
//! laws `u_t + f(u, θ(x))_x = 0` whose flux depends on a piecewise-constant
//! parameter field `θ(x)`. Interface fluxes map the traces on both sides of a
//! parameter jump onto a common parameter vector before a classical Riemann
//! solver is applied, which keeps stationary interface states steady.

pub mod basis;
pub mod boundary;
pub mod convergence;
pub mod elastic;
pub mod error;
pub mod flux;
pub mod limiter;
pub mod mesh;
pub mod model;
pub mod operator;
pub mod runner;
pub mod scenario;
pub mod snapshot;
pub mod solver;
pub mod state;
pub mod timestep;
pub mod traffic;
pub mod waves;

pub use boundary::{BoundaryCondition, BoundarySpec, Signal};
pub use elastic::ElasticModel;
pub use error::{Error, ModelError, SolverError};
pub use flux::{ClassicalSolver, FluxConfig, ThetaBarRule};
pub use mesh::Mesh;
pub use model::{Side, SystemModel};
pub use scenario::{builtin, builtin_names, RiemannCase, Scenario};
pub use runner::{run, simulate, RunOutcome, RunReport};
pub use snapshot::ProfileSnapshot;
pub use solver::Solver;
pub use state::{project_initial, DGState};
pub use timestep::{CourantConfig, RKScheme};
pub use traffic::{TrafficModel, TrafficParams};
