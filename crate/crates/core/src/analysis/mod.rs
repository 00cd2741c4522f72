//! Evidence tools: shock stability matrices, saw-tooth perturbation
//! evolution, flux dissipation, exact Riemann reference solutions and
//! monotonicity and scaling measures.

pub mod dissipation;
pub mod eigen;
pub mod exact_riemann;
pub mod monotonicity;
pub mod perturbation;
pub mod scaling;
pub mod stability;

pub use dissipation::{dissipation_split, DissipationSplit};
pub use eigen::{eigenvalues, max_real_eigenvalue, DenseMatrix};
pub use exact_riemann::{exact_riemann_solution, ExactRiemann};
pub use monotonicity::{monotonicity_check, MonotonicityMetrics};
pub use perturbation::{perturbation_experiment, perturbation_table, Amplitudes, PerturbationRun, PerturbationSetup};
pub use scaling::loglog_slope;
pub use stability::{
    build_stability_matrix, rankine_hugoniot_factors, shock_stability, steady_shock_state, Difference, ShockStability, SteadyShockSetup,
    TransverseBoundary, NEUTRAL_TOLERANCE,
};
