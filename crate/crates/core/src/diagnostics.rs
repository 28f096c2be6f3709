//! Entropy, Fisher information and the empirical split of sampled data into
//! a density and its revealed intensity.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::maxent::tilted_moments;
use crate::potential::PotentialSpec;
use crate::transform::{
    potential_of_density, stochastic_intensity, EquilibriumDensity, IntensityTable,
    NormalizedPotentialTable,
};

/// Minimum number of samples accepted by [`decompose_samples`].
pub const MIN_SAMPLES: usize = 100;

/// The two routes to Shannon entropy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyTerms {
    /// `−∫ f ln f`.
    pub direct: f64,
    /// `∫ f Ũ` with `Ũ = −ln f`.
    pub mean_normalized_potential: f64,
}

/// Computes entropy both directly and as the mean normalized potential.
/// Points under the density floor contribute zero.
pub fn entropy_terms(f: &EquilibriumDensity) -> EntropyTerms {
    let u_tilde = potential_of_density(f);
    let direct: Vec<f64> = f
        .values()
        .iter()
        .zip(u_tilde.mask())
        .map(|(&v, &m)| if m { 0.0 } else { -v * v.ln() })
        .collect();
    let mean_potential: Vec<f64> = f
        .values()
        .iter()
        .zip(u_tilde.values())
        .zip(u_tilde.mask())
        .map(|((&v, &u), &m)| if m { 0.0 } else { v * u })
        .collect();
    EntropyTerms {
        direct: f.grid().integrate(&direct),
        mean_normalized_potential: f.grid().integrate(&mean_potential),
    }
}

/// Shannon entropy: differential on continuous grids, discrete on lattices.
pub fn shannon_entropy(f: &EquilibriumDensity) -> f64 {
    let terms = entropy_terms(f);
    debug_assert!(
        (terms.direct - terms.mean_normalized_potential).abs() <= 1e-9,
        "entropy routes disagree: {terms:?}"
    );
    terms.direct
}

/// `Var[u(X)]` under `f_λ = k(λ) e^{−λu}`; equals `d² ln Ω / dλ²`.
pub fn fisher_information_number(u: &PotentialSpec, lambda: f64, grid: &Grid) -> Result<f64> {
    if !lambda.is_finite() {
        return Err(Error::InvalidParameter("lambda must be finite".into()));
    }
    let values = u.eval(grid)?;
    let moments = tilted_moments(&grid.weights(), &values, lambda);
    if !moments.log_omega.is_finite() {
        return Err(Error::NotNormalizable(format!(
            "statistical sum of {lambda} * u is outside the floating-point range"
        )));
    }
    Ok(moments.variance)
}

/// How the density is estimated from samples.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    /// Equal-width bins over the grid, interpolated linearly between bin
    /// centers. On a lattice grid, counts at each integer.
    Histogram { bins: usize },
    /// Gaussian kernel; `None` selects Silverman's rule.
    Kernel { bandwidth: Option<f64> },
}

/// Least-squares line through intensity values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub lower: f64,
    pub upper: f64,
    pub n_points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionReport {
    #[serde(skip)]
    pub density_estimate: EquilibriumDensity,
    #[serde(skip)]
    pub normalized_potential: NormalizedPotentialTable,
    #[serde(skip)]
    pub stochastic_intensity: IntensityTable,
    /// The estimator as applied (kernel bandwidth resolved).
    pub estimator: Estimator,
    /// Points excluded by the density floor or the derivative stencil.
    #[serde(skip)]
    pub mask: Vec<bool>,
    pub n_samples: usize,
    pub out_of_range: usize,
    /// Interval holding the central 80% of the in-range samples.
    pub central_region: (f64, f64),
}

impl DecompositionReport {
    /// Fits `E^s(x) ≈ slope·x + intercept` over unmasked points in `[lower, upper]`.
    pub fn fit_intensity(&self, lower: f64, upper: f64) -> Result<LinearFit> {
        let (xs, ys) = self.points_in(lower, upper);
        let n = xs.len();
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "fewer than two unmasked points in [{lower}, {upper}]"
            )));
        }
        let mx = xs.iter().sum::<f64>() / n as f64;
        let my = ys.iter().sum::<f64>() / n as f64;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let slope = sxy / sxx;
        Ok(LinearFit {
            slope,
            intercept: my - slope * mx,
            lower,
            upper,
            n_points: n,
        })
    }

    /// [`Self::fit_intensity`] over [`Self::central_region`].
    pub fn trimmed_fit(&self) -> Result<LinearFit> {
        self.fit_intensity(self.central_region.0, self.central_region.1)
    }

    /// Mean of the unmasked `E^s` values in `[lower, upper]`.
    pub fn mean_intensity(&self, lower: f64, upper: f64) -> Result<f64> {
        let (_, ys) = self.points_in(lower, upper);
        if ys.is_empty() {
            return Err(Error::InvalidInput(format!(
                "no unmasked points in [{lower}, {upper}]"
            )));
        }
        Ok(ys.iter().sum::<f64>() / ys.len() as f64)
    }

    fn points_in(&self, lower: f64, upper: f64) -> (Vec<f64>, Vec<f64>) {
        let grid = self.stochastic_intensity.grid();
        grid.points()
            .into_iter()
            .zip(self.stochastic_intensity.values())
            .zip(&self.mask)
            .filter(|((x, _), &m)| !m && *x >= lower && *x <= upper)
            .map(|((x, e), _)| (x, *e))
            .unzip()
    }
}

/// Silverman's rule of thumb, `0.9 min(sd, IQR/1.34) n^{-1/5}`.
pub fn silverman_bandwidth(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let sd = (samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    0.9 * spread * n.powf(-0.2)
}

// Linear interpolation between order statistics.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

/// Estimates the density of `samples` on `grid` and derives its normalized
/// potential and stochastic intensity. At equilibrium the revealed causal
/// intensity is `E^c = −E^s`.
///
/// Samples outside the grid are counted in `out_of_range` and excluded.
pub fn decompose_samples(
    samples: &[f64],
    grid: &Grid,
    estimator: Estimator,
) -> Result<DecompositionReport> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            got: samples.len(),
            need: MIN_SAMPLES,
        });
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("samples must be finite".into()));
    }
    let mut inside: Vec<f64> = samples
        .iter()
        .copied()
        .filter(|&x| grid.contains(x))
        .collect();
    let out_of_range = samples.len() - inside.len();
    if inside.is_empty() {
        return Err(Error::AllOutOfRange(samples.len()));
    }
    inside.sort_by(f64::total_cmp);
    let central_region = (quantile(&inside, 0.1), quantile(&inside, 0.9));

    let (weights, estimator) = match estimator {
        Estimator::Histogram { bins } => {
            if bins == 0 {
                return Err(Error::InvalidParameter("bins must be positive".into()));
            }
            (histogram_weights(&inside, grid, bins), estimator)
        }
        Estimator::Kernel { bandwidth } => {
            if grid.is_lattice() {
                return Err(Error::InvalidInput(
                    "kernel estimates need a continuous grid; use a histogram on lattices".into(),
                ));
            }
            let bw = match bandwidth {
                Some(bw) => bw,
                None => silverman_bandwidth(&inside),
            };
            if !(bw > 0.0 && bw.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "bandwidth must be positive, got {bw}"
                )));
            }
            (
                kernel_weights(&inside, grid, bw),
                Estimator::Kernel {
                    bandwidth: Some(bw),
                },
            )
        }
    };
    let density = EquilibriumDensity::from_weights(grid.clone(), weights)?;
    let normalized_potential = potential_of_density(&density);
    let intensity = stochastic_intensity(&density);
    let mask = normalized_potential
        .mask()
        .iter()
        .zip(intensity.mask())
        .map(|(a, b)| *a || *b)
        .collect();
    Ok(DecompositionReport {
        density_estimate: density,
        normalized_potential,
        stochastic_intensity: intensity,
        estimator,
        mask,
        n_samples: samples.len(),
        out_of_range,
        central_region,
    })
}

fn histogram_weights(samples: &[f64], grid: &Grid, bins: usize) -> Vec<f64> {
    let n = grid.len();
    if grid.is_lattice() {
        let mut counts = vec![0.0; n];
        for &x in samples {
            let i = ((x - grid.lower()).round() as usize).min(n - 1);
            counts[i] += 1.0;
        }
        return counts;
    }
    let width = (grid.upper() - grid.lower()) / bins as f64;
    let mut counts = vec![0.0; bins];
    for &x in samples {
        let b = (((x - grid.lower()) / width) as usize).min(bins - 1);
        counts[b] += 1.0;
    }
    let heights: Vec<f64> = counts
        .iter()
        .map(|c| c / (samples.len() as f64 * width))
        .collect();
    let center = |b: usize| grid.lower() + (b as f64 + 0.5) * width;
    grid.points()
        .into_iter()
        .map(|x| {
            let t = (x - grid.lower()) / width - 0.5;
            if t <= 0.0 {
                heights[0]
            } else if t >= (bins - 1) as f64 {
                heights[bins - 1]
            } else {
                let b = t.floor() as usize;
                let frac = (x - center(b)) / width;
                heights[b] + frac * (heights[b + 1] - heights[b])
            }
        })
        .collect()
}

// Gaussian KDE on linearly binned counts; the kernel is cut at 8 bandwidths.
fn kernel_weights(samples: &[f64], grid: &Grid, bandwidth: f64) -> Vec<f64> {
    let n = grid.len();
    let h = grid.spacing();
    let mut binned = vec![0.0; n];
    for &x in samples {
        let t = (x - grid.lower()) / h;
        let i = (t.floor() as usize).min(n - 2);
        let frac = t - i as f64;
        binned[i] += 1.0 - frac;
        binned[i + 1] += frac;
    }
    let reach = ((8.0 * bandwidth / h).ceil() as usize).min(n - 1);
    let kernel: Vec<f64> = (0..=reach)
        .map(|d| {
            let z = d as f64 * h / bandwidth;
            (-0.5 * z * z).exp()
        })
        .collect();
    (0..n)
        .map(|j| {
            let lo = j.saturating_sub(reach);
            let hi = (j + reach).min(n - 1);
            (lo..=hi).map(|i| binned[i] * kernel[i.abs_diff(j)]).sum()
        })
        .collect()
}
