//! Numerical engine for the discrete-time two-species Kolmogorov competition map
//!
//! ```text
//! x' = x · r1 · (1 − c1·x − c2·y)
//! y' = y · r2 · (1 − c3·x − c4·y)
//! ```
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] holds the parameters, the state, the map itself and its Jacobian.
//! * [`equilibria`] enumerates and classifies fixed points.
//! * [`orbit`] iterates the map, discards transients and detects periodicity.
//! * [`lyapunov`] computes the two-exponent spectrum by re-orthonormalised
//!   tangent dynamics.
//! * [`sweep`] runs bifurcation sweeps and coupling-plane chaos grids, in
//!   parallel when the `parallel` feature is enabled.

pub mod equilibria;
pub mod error;
pub mod exec;
pub mod lyapunov;
pub mod model;
pub mod orbit;
pub mod sweep;

pub use equilibria::{
    fixed_points, stability_report, Classification, Family, FixedPoint, FixedPointSet,
    StabilityReport,
};
pub use error::{Error, Result};
pub use exec::Workers;
pub use lyapunov::{lambda_series, lyapunov_spectrum, LyapunovResult, SeriesPoint};
pub use model::{eigenvalues_2x2, jacobian, step, Jacobian2, ModelParams, Param, State};
pub use orbit::{detect_period, iterate, OrbitRecord, Outcome};
pub use sweep::{
    bifurcation_sweep, chaos_grid, Budget, ChaosGridSpec, GridAxis, SweepResult, SweepSpec,
};
