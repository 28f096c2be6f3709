//! Overdamped Langevin dynamics in a potential, used to check empirically
//! that `k e^{−U}` is the stationary density.
//!
//! Each chain iterates `x ← x + E^c(x) dt + √(2 dt) z` with reflection at
//! the grid bounds. Chains run in parallel; chain `i` uses a ChaCha8 stream
//! `i` under the configured seed, and integer counts are merged before
//! normalization, so results are bit-identical across runs and thread counts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::potential::PotentialSpec;
use crate::transform::{causal_intensity, normalize, EquilibriumDensity};

/// Name of the generator recorded in [`SimResult`].
pub const RNG_NAME: &str = "ChaCha8Rng";
/// Upper bound on `dt · max|E^c|`.
pub const STABILITY_LIMIT: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub potential: PotentialSpec,
    /// Histogram grid; its bounds reflect the dynamics.
    pub grid: Grid,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_n_steps")]
    pub n_steps: u64,
    #[serde(default = "default_burn_in")]
    pub burn_in: u64,
    #[serde(default = "default_n_chains")]
    pub n_chains: u32,
    pub seed: u64,
}

fn default_dt() -> f64 {
    1e-3
}

fn default_n_steps() -> u64 {
    200_000
}

fn default_burn_in() -> u64 {
    20_000
}

fn default_n_chains() -> u32 {
    8
}

impl SimConfig {
    /// A configuration with the default budget: `dt = 1e-3`, 200 000 steps,
    /// 20 000 burn-in steps and 8 chains.
    pub fn new(potential: PotentialSpec, grid: Grid, seed: u64) -> Self {
        SimConfig {
            potential,
            grid,
            dt: default_dt(),
            n_steps: default_n_steps(),
            burn_in: default_burn_in(),
            n_chains: default_n_chains(),
            seed,
        }
    }

    /// Checks the budget and returns `max|E^c|` over the grid.
    fn validate(&self) -> Result<f64> {
        if self.grid.is_lattice() {
            return Err(Error::InvalidGrid(
                "simulation needs a continuous grid".into(),
            ));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if self.n_steps == 0 {
            return Err(Error::InvalidParameter("n_steps must be positive".into()));
        }
        if self.burn_in >= self.n_steps {
            return Err(Error::InvalidParameter(format!(
                "burn_in ({}) must be less than n_steps ({})",
                self.burn_in, self.n_steps
            )));
        }
        if self.n_chains == 0 {
            return Err(Error::InvalidParameter("n_chains must be positive".into()));
        }
        self.potential.eval(&self.grid)?;
        let force = causal_intensity(&self.potential, &self.grid)?;
        if let Some(i) = force.mask().iter().position(|&m| m) {
            return Err(Error::InvalidInput(format!(
                "causal intensity is not finite at x = {}",
                self.grid.point(i)
            )));
        }
        let max_force = force.values().iter().fold(0.0f64, |m, e| m.max(e.abs()));
        let product = self.dt * max_force;
        if product >= STABILITY_LIMIT {
            return Err(Error::Stability { product });
        }
        Ok(max_force)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimResult {
    /// Normalized empirical density on the configured grid.
    pub histogram: EquilibriumDensity,
    /// Post-burn-in positions counted over all chains.
    pub n_samples_used: u64,
    /// Total variation distance to the quadrature density of the potential.
    pub tv_distance: f64,
    pub seed: u64,
    pub rng: String,
}

/// Runs the chains and compares their pooled histogram with `normalize(U)`.
pub fn simulate(config: &SimConfig) -> Result<SimResult> {
    config.validate()?;
    let target = normalize(&config.potential, &config.grid)?;
    let force = ForceField::new(config)?;
    let start = mode(&target);

    let counts = (0..config.n_chains)
        .into_par_iter()
        .map(|chain| run_chain(config, &force, start, chain))
        .reduce(
            || vec![0u64; config.grid.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let histogram = histogram_density(&config.grid, &counts)?;
    let tv = tv_distance(&histogram, &target)?;
    Ok(SimResult {
        histogram,
        n_samples_used: counts.iter().sum(),
        tv_distance: tv,
        seed: config.seed,
        rng: RNG_NAME.to_string(),
    })
}

/// `½ ∫ |p − q|` on a shared grid.
pub fn tv_distance(p: &EquilibriumDensity, q: &EquilibriumDensity) -> Result<f64> {
    p.grid().ensure_same(q.grid())?;
    let diff: Vec<f64> = p
        .values()
        .iter()
        .zip(q.values())
        .map(|(a, b)| (a - b).abs())
        .collect();
    Ok(0.5 * p.grid().integrate(&diff))
}

enum ForceField<'a> {
    ClosedForm(&'a PotentialSpec),
    Table { grid: &'a Grid, values: Vec<f64> },
}

impl<'a> ForceField<'a> {
    fn new(config: &'a SimConfig) -> Result<Self> {
        Ok(match &config.potential {
            PotentialSpec::Tabulated(_) => ForceField::Table {
                grid: &config.grid,
                values: causal_intensity(&config.potential, &config.grid)?
                    .values()
                    .to_vec(),
            },
            other => ForceField::ClosedForm(other),
        })
    }

    fn at(&self, x: f64) -> f64 {
        match self {
            ForceField::ClosedForm(u) => match u.closed_form_force(x) {
                Some(Ok(e)) => e,
                _ => 0.0,
            },
            ForceField::Table { grid, values } => grid.interpolate(values, x).unwrap_or(0.0),
        }
    }
}

fn mode(f: &EquilibriumDensity) -> f64 {
    let (i, _) = f
        .values()
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| {
            if v > bv {
                (i, v)
            } else {
                (bi, bv)
            }
        });
    f.grid().point(i)
}

fn run_chain(config: &SimConfig, force: &ForceField, start: f64, chain: u32) -> Vec<u64> {
    let grid = &config.grid;
    let (lo, hi) = (grid.lower(), grid.upper());
    let h = grid.spacing();
    let last = grid.len() - 1;
    let noise = (2.0 * config.dt).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(u64::from(chain));

    let mut counts = vec![0u64; grid.len()];
    let mut x = start;
    for step in 0..config.n_steps {
        let z: f64 = StandardNormal.sample(&mut rng);
        x = reflect(x + force.at(x) * config.dt + noise * z, lo, hi);
        if step >= config.burn_in {
            let i = (((x - lo) / h).round() as usize).min(last);
            counts[i] += 1;
        }
    }
    counts
}

fn reflect(mut x: f64, lo: f64, hi: f64) -> f64 {
    loop {
        if x < lo {
            x = 2.0 * lo - x;
        } else if x > hi {
            x = 2.0 * hi - x;
        } else {
            return x;
        }
    }
}

// Counts fall in the cell nearest each grid point; the end cells are half
// width, so counts are divided by cell width before normalizing.
fn histogram_density(grid: &Grid, counts: &[u64]) -> Result<EquilibriumDensity> {
    let h = grid.spacing();
    let last = counts.len() - 1;
    let weights = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let width = if i == 0 || i == last { 0.5 * h } else { h };
            c as f64 / width
        })
        .collect();
    EquilibriumDensity::from_weights(grid.clone(), weights)
}
