//! Single-constraint maximum entropy fitting.
//!
//! Among densities on a grid with a prescribed mean of `u`, the entropy
//! maximizer is `f_λ(x) = k(λ) e^{−λ u(x)}`. Its normalized potential is
//! `λ u(x) − ln k`, so the fit is the equilibrium density of the scaled
//! potential `λ u`. The multiplier is found from `E_λ[u] = m`; the map
//! `λ ↦ E_λ[u]` is strictly decreasing with derivative `−Var_λ[u]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::potential::PotentialSpec;
use crate::transform::{normalize_values, EquilibriumDensity, NormalizedPotentialTable};

fn default_tol() -> f64 {
    1e-10
}

fn default_max_iter() -> usize {
    100
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaxEntProblem {
    pub u: PotentialSpec,
    pub grid: Grid,
    /// The sample u-moment `m(u)` the fit must reproduce.
    pub target_moment: f64,
    #[serde(default)]
    pub lambda_init: f64,
    /// Tolerance on `|E_λ[u] − m|`.
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
}

impl MaxEntProblem {
    pub fn new(u: PotentialSpec, grid: Grid, target_moment: f64) -> Self {
        MaxEntProblem {
            u,
            grid,
            target_moment,
            lambda_init: 0.0,
            tol: default_tol(),
            max_iter: default_max_iter(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaxEntSolution {
    pub lambda: f64,
    pub k: f64,
    #[serde(skip)]
    pub density: EquilibriumDensity,
    #[serde(skip)]
    pub normalized_potential: NormalizedPotentialTable,
    pub iterations: usize,
    /// Final `E_λ[u] − m`.
    pub residual: f64,
    pub converged: bool,
}

/// Mean, variance and log statistical sum of `u` under `k e^{−λu}`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct TiltedMoments {
    pub mean: f64,
    pub variance: f64,
    pub log_omega: f64,
}

pub(crate) fn tilted_moments(weights: &[f64], u: &[f64], lambda: f64) -> TiltedMoments {
    let exponent_max = u
        .iter()
        .map(|v| -lambda * v)
        .fold(f64::NEG_INFINITY, f64::max);
    let p: Vec<f64> = weights
        .iter()
        .zip(u)
        .map(|(w, v)| w * (-lambda * v - exponent_max).exp())
        .collect();
    let z: f64 = p.iter().sum();
    let mean = p.iter().zip(u).map(|(p, v)| p * v).sum::<f64>() / z;
    let variance = p
        .iter()
        .zip(u)
        .map(|(p, v)| p * (v - mean) * (v - mean))
        .sum::<f64>()
        / z;
    TiltedMoments {
        mean,
        variance,
        log_omega: z.ln() + exponent_max,
    }
}

/// `ln Ω(λ) = ln ∫ e^{−λ u}` on the grid.
pub fn log_partition(u: &PotentialSpec, lambda: f64, grid: &Grid) -> Result<f64> {
    let values = u.eval(grid)?;
    Ok(tilted_moments(&grid.weights(), &values, lambda).log_omega)
}

/// `μ(u) = ∫ u f`.
pub fn u_moment(f: &EquilibriumDensity, u: &PotentialSpec) -> Result<f64> {
    let values = u.eval(f.grid())?;
    Ok(f.expectation(&values))
}

/// Sample u-moment `m(u)`: the mean of `u` over the samples.
pub fn sample_u_moment(samples: &[f64], u: &PotentialSpec) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("empty sample set".into()));
    }
    let mut total = 0.0;
    for &x in samples {
        total += u.value_at(x)?;
    }
    Ok(total / samples.len() as f64)
}

/// Solves `E_λ[u] = m` for the multiplier λ.
///
/// Damped Newton steps (`Δλ = g / Var_λ[u]`, halved until `|g|` drops),
/// falling back to bisection on a bracket grown by doubling from
/// `lambda_init` when no damped step makes progress. If `max_iter` runs out
/// the best iterate is returned with `converged = false`.
pub fn solve_maxent(p: &MaxEntProblem) -> Result<MaxEntSolution> {
    if p.tol.is_nan() || p.tol <= 0.0 {
        return Err(Error::InvalidParameter("tol must be positive".into()));
    }
    if p.max_iter == 0 {
        return Err(Error::InvalidParameter(
            "max_iter must be at least 1".into(),
        ));
    }
    if !p.target_moment.is_finite() || !p.lambda_init.is_finite() {
        return Err(Error::InvalidParameter(
            "target moment and initial multiplier must be finite".into(),
        ));
    }
    let u = p.u.eval(&p.grid)?;
    let weights = p.grid.weights();
    let u_min = u.iter().copied().fold(f64::INFINITY, f64::min);
    let u_max = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let margin = 1e-9 * (u_max - u_min).max(1.0);
    if !(p.target_moment > u_min + margin && p.target_moment < u_max - margin) {
        return Err(Error::Unattainable {
            target: p.target_moment,
            min: u_min,
            max: u_max,
        });
    }

    let g = |lambda: f64| {
        let m = tilted_moments(&weights, &u, lambda);
        (m.mean - p.target_moment, m.variance)
    };

    let mut lambda = p.lambda_init;
    let (mut residual, mut variance) = g(lambda);
    let mut iterations = 0;
    let mut best = (lambda, residual);
    let mut stalled = false;

    while residual.abs() > p.tol && iterations < p.max_iter {
        iterations += 1;
        let step = residual / variance;
        let mut accepted = None;
        if step.is_finite() {
            let mut t = 1.0;
            for _ in 0..40 {
                let candidate = lambda + t * step;
                let (r, v) = g(candidate);
                if r.abs() < residual.abs() {
                    accepted = Some((candidate, r, v));
                    break;
                }
                t *= 0.5;
            }
        }
        match accepted {
            Some((l, r, v)) => {
                lambda = l;
                residual = r;
                variance = v;
                if r.abs() < best.1.abs() {
                    best = (l, r);
                }
            }
            None => {
                stalled = true;
                break;
            }
        }
    }

    if stalled {
        // g is decreasing: g(lo) > 0 > g(hi).
        let start = best.0;
        let (mut lo, mut hi) = (start, start);
        let mut width = 1.0;
        let mut bracketed = false;
        for _ in 0..200 {
            if best.1 > 0.0 {
                hi = start + width;
                if g(hi).0 < 0.0 {
                    bracketed = true;
                    break;
                }
                lo = hi;
            } else {
                lo = start - width;
                if g(lo).0 > 0.0 {
                    bracketed = true;
                    break;
                }
                hi = lo;
            }
            width *= 2.0;
        }
        if !bracketed {
            return Err(Error::Unattainable {
                target: p.target_moment,
                min: u_min,
                max: u_max,
            });
        }
        while iterations < p.max_iter {
            iterations += 1;
            let mid = 0.5 * (lo + hi);
            let r = g(mid).0;
            if r.abs() < best.1.abs() {
                best = (mid, r);
            }
            if r.abs() <= p.tol || mid == lo || mid == hi {
                break;
            }
            if r > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lambda = best.0;
        residual = best.1;
    }

    let scaled: Vec<f64> = u.iter().map(|v| lambda * v).collect();
    let density = normalize_values(&p.grid, &scaled)?;
    let log_omega = density.log_omega();
    let normalized_potential =
        crate::transform::potential_table(&p.grid, scaled.iter().map(|v| v + log_omega).collect());
    Ok(MaxEntSolution {
        lambda,
        k: density.k(),
        density,
        normalized_potential,
        iterations,
        residual,
        converged: residual.abs() <= p.tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::normalize;

    fn poly(c: &[f64]) -> PotentialSpec {
        PotentialSpec::polynomial(c.to_vec()).unwrap()
    }

    #[test]
    fn u_moment_examples() {
        let grid = Grid::lattice(1, 4).unwrap();
        let f = normalize(&poly(&[0.0]), &grid).unwrap();
        assert!((u_moment(&f, &poly(&[0.0, 1.0])).unwrap() - 2.5).abs() < 1e-15);

        let grid = Grid::continuous(-8.0, 8.0, 4001).unwrap();
        let f = normalize(&poly(&[0.0, 0.0, 0.5]), &grid).unwrap();
        assert!((u_moment(&f, &poly(&[0.0, 0.0, 1.0])).unwrap() - 1.0).abs() < 1e-8);

        let grid = Grid::continuous(0.0, 20.0, 4001).unwrap();
        let f = normalize(&poly(&[0.0, 2.0]), &grid).unwrap();
        assert!((u_moment(&f, &poly(&[0.0, 1.0])).unwrap() - 0.5).abs() < 1e-8);
    }

    #[test]
    fn u_moment_grid_mismatch() {
        let g1 = Grid::continuous(0.0, 1.0, 11).unwrap();
        let g2 = Grid::continuous(0.0, 2.0, 11).unwrap();
        let f = normalize(&poly(&[0.0]), &g1).unwrap();
        let u = PotentialSpec::tabulated(g2, vec![0.0; 11]).unwrap();
        assert_eq!(u_moment(&f, &u), Err(Error::GridMismatch));
    }

    #[test]
    fn sample_moment_examples() {
        assert_eq!(
            sample_u_moment(&[1.0, 3.0], &poly(&[0.0, 1.0])).unwrap(),
            2.0
        );
        assert_eq!(
            sample_u_moment(&[0.0, 0.0, 3.0], &poly(&[0.0, 0.0, 1.0])).unwrap(),
            3.0
        );
        assert!(sample_u_moment(&[], &poly(&[0.0, 1.0])).is_err());
        let gamma = PotentialSpec::Analytic(crate::catalog::CatalogFamily::Exponential { a: 1.0 });
        assert!(matches!(
            sample_u_moment(&[1.0, -2.0], &gamma),
            Err(Error::OutOfSupport { .. })
        ));
    }

    #[test]
    fn recovers_exponential_rate() {
        let grid = Grid::continuous(0.0, 40.0, 4001).unwrap();
        let sol = solve_maxent(&MaxEntProblem::new(poly(&[0.0, 1.0]), grid, 0.5)).unwrap();
        assert!(sol.converged);
        assert!((sol.lambda - 2.0).abs() < 1e-6, "{}", sol.lambda);
        assert!(sol.iterations <= 20, "{} iterations", sol.iterations);
    }

    #[test]
    fn recovers_gaussian_precision() {
        let grid = Grid::continuous(-8.0, 8.0, 4001).unwrap();
        let sol = solve_maxent(&MaxEntProblem::new(poly(&[0.0, 0.0, 1.0]), grid, 1.0)).unwrap();
        assert!(sol.converged);
        assert!((sol.lambda - 0.5).abs() < 1e-6, "{}", sol.lambda);
    }

    #[test]
    fn symmetric_two_point_lattice() {
        let grid = Grid::lattice(0, 2).unwrap();
        // {0, 1, 2} with mean 1 is the uniform pmf.
        let sol = solve_maxent(&MaxEntProblem::new(poly(&[0.0, 1.0]), grid, 1.0)).unwrap();
        assert_eq!(sol.lambda, 0.0);
        assert_eq!(sol.iterations, 0);
    }

    #[test]
    fn negative_multiplier_for_large_mean() {
        let grid = Grid::continuous(0.0, 10.0, 1001).unwrap();
        let sol = solve_maxent(&MaxEntProblem::new(poly(&[0.0, 1.0]), grid, 8.0)).unwrap();
        assert!(sol.converged && sol.lambda < 0.0);
        let m = u_moment(&sol.density, &poly(&[0.0, 1.0])).unwrap();
        assert!((m - 8.0).abs() < 1e-9);
    }

    #[test]
    fn unattainable_targets() {
        let grid = Grid::continuous(0.0, 10.0, 101).unwrap();
        for m in [100.0, 10.0, 0.0, -1.0] {
            assert!(matches!(
                solve_maxent(&MaxEntProblem::new(poly(&[0.0, 1.0]), grid.clone(), m)),
                Err(Error::Unattainable { .. })
            ));
        }
    }

    #[test]
    fn exhausted_iterations_report_best_iterate() {
        let grid = Grid::continuous(0.0, 40.0, 4001).unwrap();
        let mut p = MaxEntProblem::new(poly(&[0.0, 1.0]), grid, 0.5);
        p.max_iter = 2;
        let sol = solve_maxent(&p).unwrap();
        assert!(!sol.converged);
        assert_eq!(sol.iterations, 2);
        assert!(sol.residual.abs() > p.tol);
    }

    #[test]
    fn bisection_fallback_converges() {
        // A far-off start where Newton steps overflow the exponent.
        let grid = Grid::continuous(0.0, 40.0, 4001).unwrap();
        let mut p = MaxEntProblem::new(poly(&[0.0, 1.0]), grid, 0.5);
        p.lambda_init = -1e6;
        let sol = solve_maxent(&p).unwrap();
        assert!(sol.converged);
        assert!((sol.lambda - 2.0).abs() < 1e-6);
    }

    #[test]
    fn normalized_potential_has_exponential_form() {
        let grid = Grid::continuous(-8.0, 8.0, 801).unwrap();
        let u = poly(&[0.0, 0.0, 1.0]);
        let sol = solve_maxent(&MaxEntProblem::new(u.clone(), grid.clone(), 0.7)).unwrap();
        let uv = u.eval(&grid).unwrap();
        for (t, u) in sol.normalized_potential.values().iter().zip(&uv) {
            assert!((t - (sol.lambda * u - sol.k.ln())).abs() < 1e-12);
        }
    }

    #[test]
    fn problem_json_defaults() {
        let json = r#"{"u":{"family":"polynomial","coefficients":[0.0,1.0]},
            "grid":{"support":"continuous","lower":0.0,"upper":40.0,"n_points":401},
            "target_moment":0.5}"#;
        let p: MaxEntProblem = serde_json::from_str(json).unwrap();
        assert_eq!((p.lambda_init, p.tol, p.max_iter), (0.0, 1e-10, 100));
    }
}
