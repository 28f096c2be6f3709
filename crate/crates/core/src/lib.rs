//! One-dimensional equilibrium correspondence between potentials and
//! probability densities.
//!
//! A density `f` and a potential `U` are in equilibrium when the stochastic
//! intensity `E^s = −f'/f` cancels the causal intensity `E^c = −U'`. The
//! solution is the Boltzmann form `f = k e^{−U}`, and `Ũ = −ln f` is the
//! potential's normalized representative.
//!
//! - [`transform`]: normalization and the potential / density / intensity maps
//! - [`catalog`]: closed-form families and the Pearson generator
//! - [`maxent`]: the single-constraint maximum entropy fit
//! - [`diagnostics`]: entropy, Fisher information, decomposition of samples
//! - [`sim`]: overdamped Langevin check that `k e^{−U}` is stationary

pub mod catalog;
pub mod diagnostics;
mod error;
pub mod grid;
pub mod maxent;
pub mod numeric;
pub mod potential;
pub mod sim;
pub mod transform;

pub use catalog::{
    catalog_density, catalog_intensity, catalog_normalized_potential, pearson_density,
    pearson_intensity, pearson_intensity_table, CatalogFamily, PearsonParams, PearsonSign,
};
pub use diagnostics::{
    decompose_samples, entropy_terms, fisher_information_number, shannon_entropy,
    DecompositionReport, EntropyTerms, Estimator, LinearFit, MIN_SAMPLES,
};
pub use error::{Error, Result};
pub use grid::{Grid, GridKind};
pub use maxent::{
    log_partition, sample_u_moment, solve_maxent, u_moment, MaxEntProblem, MaxEntSolution,
};
pub use potential::{eval_potential, Polynomial, PotentialSpec, TabulatedPotential};
pub use sim::{simulate, tv_distance, SimConfig, SimResult};
pub use transform::{
    causal_intensity, density_from_intensity, equilibrium_residual, normalize, normalize_values,
    normalized_potential, potential_of_density, stochastic_intensity, EquilibriumDensity,
    IntensityKind, IntensityTable, NormalizedPotentialTable, Residual,
};
