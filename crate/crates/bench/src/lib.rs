//! Fixtures shared by the benchmarks.

use equipoise::{CatalogFamily, Grid, MaxEntProblem, PotentialSpec, SimConfig};

pub fn harmonic() -> PotentialSpec {
    PotentialSpec::polynomial(vec![0.0, 0.0, 0.5]).unwrap()
}

pub fn normal_grid(n_points: usize) -> Grid {
    Grid::continuous(-8.0, 8.0, n_points).unwrap()
}

pub fn gamma() -> (PotentialSpec, Grid) {
    let fam = CatalogFamily::Gamma {
        alpha: 2.0,
        beta: 1.0,
    };
    (PotentialSpec::Analytic(fam), fam.default_grid().unwrap())
}

/// `E[x²] = 1` on `[−8, 8]`.
pub fn square_moment_problem() -> MaxEntProblem {
    let u = PotentialSpec::polynomial(vec![0.0, 0.0, 1.0]).unwrap();
    MaxEntProblem::new(u, normal_grid(4001), 1.0)
}

/// Harmonic run on `[−6, 6]` with a reduced step budget.
pub fn short_simulation(n_steps: u64) -> SimConfig {
    let mut config = SimConfig::new(harmonic(), Grid::continuous(-6.0, 6.0, 241).unwrap(), 42);
    config.n_steps = n_steps;
    config.burn_in = n_steps / 10;
    config
}

/// Exponential quantiles at the midpoints of `n` equal-probability cells.
pub fn exponential_quantiles(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| -(1.0 - (i as f64 + 0.5) / n as f64).ln())
        .collect()
}
