//! Transforms among potential, normalized potential, equilibrium density and
//! the two intensities.
//!
//! With `E^s = −f'/f` and `E^c = −U'`, equilibrium is `E^s + E^c = 0`,
//! solved by `f = k e^{−U}` with `k = 1/Ω`, `Ω = ∫ e^{−U}` (a sum on
//! lattices). The normalized potential `Ũ = U − ln k` then equals `−ln f`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::numeric;
use crate::potential::PotentialSpec;

/// Absolute density floor.
pub const DENSITY_FLOOR_ABS: f64 = 1e-300;
/// Density floor relative to the table maximum.
pub const DENSITY_FLOOR_REL: f64 = 1e-12;

/// A normalized density (continuous grid) or pmf (lattice).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquilibriumDensity {
    grid: Grid,
    values: Vec<f64>,
    omega: f64,
    k: f64,
    #[serde(skip)]
    log_omega: f64,
}

impl EquilibriumDensity {
    /// Normalizes nonnegative weights by the grid's quadrature rule.
    /// `omega` is the quadrature of the raw weights.
    pub fn from_weights(grid: Grid, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "{} density values for a grid of {} points",
                weights.len(),
                grid.len()
            )));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidInput(format!(
                "density value at x = {} is negative or not finite",
                grid.point(i)
            )));
        }
        let total = grid.integrate(&weights);
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::NotNormalizable(format!(
                "total mass {total} on the grid"
            )));
        }
        let values = weights.into_iter().map(|w| w / total).collect();
        Ok(EquilibriumDensity {
            grid,
            values,
            omega: total,
            k: 1.0 / total,
            log_omega: total.ln(),
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Statistical sum `Ω`.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Normalizing constant `k = 1/Ω`.
    pub fn k(&self) -> f64 {
        self.k
    }

    /// `ln Ω`, accurate even when `Ω` itself is near the `f64` limits.
    pub fn log_omega(&self) -> f64 {
        self.log_omega
    }

    /// Values at or below this are treated as zero by log and derivative
    /// transforms.
    pub fn floor(&self) -> f64 {
        let max = self.values.iter().copied().fold(0.0, f64::max);
        DENSITY_FLOOR_ABS.max(DENSITY_FLOOR_REL * max)
    }

    /// `true` where the density is at or below [`Self::floor`].
    pub fn mask(&self) -> Vec<bool> {
        let floor = self.floor();
        self.values.iter().map(|&v| v <= floor).collect()
    }

    /// Mean of a tabulated function under this density.
    pub fn expectation(&self, g: &[f64]) -> f64 {
        let weighted: Vec<f64> = self.values.iter().zip(g).map(|(f, g)| f * g).collect();
        self.grid.integrate(&weighted)
    }
}

/// `Ũ = −ln f` on a grid; masked points hold NaN.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalizedPotentialTable {
    grid: Grid,
    values: Vec<f64>,
    mask: Vec<bool>,
}

impl NormalizedPotentialTable {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntensityKind {
    Stochastic,
    Causal,
}

/// Signed intensity values on a grid; masked points hold NaN.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntensityTable {
    grid: Grid,
    values: Vec<f64>,
    mask: Vec<bool>,
    kind: IntensityKind,
}

impl IntensityTable {
    /// Builds a table, masking every non-finite value.
    pub fn new(grid: Grid, mut values: Vec<f64>, kind: IntensityKind) -> Self {
        assert_eq!(values.len(), grid.len(), "intensity table length");
        let mask: Vec<bool> = values.iter().map(|v| !v.is_finite()).collect();
        for (v, &m) in values.iter_mut().zip(&mask) {
            if m {
                *v = f64::NAN;
            }
        }
        IntensityTable {
            grid,
            values,
            mask,
            kind,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn kind(&self) -> IntensityKind {
        self.kind
    }
}

/// Pointwise `E^s + E^c`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub values: Vec<f64>,
    pub mask: Vec<bool>,
    /// Largest |residual| over unmasked points; 0 if all are masked.
    pub max_abs: f64,
    /// As `max_abs`, excluding the two grid end points.
    pub max_abs_interior: f64,
}

impl Residual {
    pub fn is_equilibrium(&self, tol: f64) -> bool {
        self.max_abs <= tol
    }
}

/// Normalizes `e^{−U}` for a potential tabulated on `grid`.
///
/// The minimum of `U` is subtracted before exponentiating and folded back
/// into `Ω`; the density is unchanged by constant shifts of `U`.
pub fn normalize_values(grid: &Grid, u: &[f64]) -> Result<EquilibriumDensity> {
    if u.len() != grid.len() {
        return Err(Error::InvalidInput(format!(
            "{} potential values for a grid of {} points",
            u.len(),
            grid.len()
        )));
    }
    if let Some(i) = u.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinitePotential { x: grid.point(i) });
    }
    let u_min = u.iter().copied().fold(f64::INFINITY, f64::min);
    let boltzmann: Vec<f64> = u.iter().map(|v| (u_min - v).exp()).collect();
    let shifted_sum = grid.integrate(&boltzmann);
    let log_omega = shifted_sum.ln() - u_min;
    let omega = log_omega.exp();
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::NotNormalizable(format!(
            "statistical sum exp({log_omega}) is outside the floating-point range"
        )));
    }
    let values = boltzmann.into_iter().map(|b| b / shifted_sum).collect();
    Ok(EquilibriumDensity {
        grid: grid.clone(),
        values,
        omega,
        k: 1.0 / omega,
        log_omega,
    })
}

/// Equilibrium density `k e^{−U}` of a potential.
pub fn normalize(u: &PotentialSpec, grid: &Grid) -> Result<EquilibriumDensity> {
    normalize_values(grid, &u.eval(grid)?)
}

/// `Ũ = U − ln k` with `k` from [`normalize`] on the same grid.
pub fn normalized_potential(u: &PotentialSpec, grid: &Grid) -> Result<NormalizedPotentialTable> {
    let values = u.eval(grid)?;
    let f = normalize_values(grid, &values)?;
    let log_omega = f.log_omega();
    let values = values.into_iter().map(|v| v + log_omega).collect();
    Ok(NormalizedPotentialTable {
        grid: grid.clone(),
        values,
        mask: vec![false; grid.len()],
    })
}

pub(crate) fn potential_table(grid: &Grid, values: Vec<f64>) -> NormalizedPotentialTable {
    NormalizedPotentialTable {
        grid: grid.clone(),
        mask: values.iter().map(|v| !v.is_finite()).collect(),
        values,
    }
}

/// `Ũ = −ln f`, masking points at or below the density floor.
pub fn potential_of_density(f: &EquilibriumDensity) -> NormalizedPotentialTable {
    let mask = f.mask();
    let values = f
        .values()
        .iter()
        .zip(&mask)
        .map(|(&v, &m)| if m { f64::NAN } else { -v.ln() })
        .collect();
    NormalizedPotentialTable {
        grid: f.grid().clone(),
        values,
        mask,
    }
}

/// Stochastic intensity `E^s = −f'/f`.
///
/// Continuous grids differentiate `f` with the five-point stencils of
/// [`numeric::derivative`]; a point is masked if any stencil value is at or
/// below the density floor. Lattices use the forward log-difference
/// `−(ln f(x+1) − ln f(x))`, so the last point is always masked.
pub fn stochastic_intensity(f: &EquilibriumDensity) -> IntensityTable {
    let grid = f.grid();
    let v = f.values();
    let floor = f.floor();
    let n = v.len();
    let values: Vec<f64> = if grid.is_lattice() {
        (0..n)
            .map(|i| {
                if i + 1 < n && v[i] > floor && v[i + 1] > floor {
                    -(v[i + 1].ln() - v[i].ln())
                } else {
                    f64::NAN
                }
            })
            .collect()
    } else {
        let h = grid.spacing();
        (0..n)
            .map(|i| {
                if v[numeric::derivative_stencil(i, n)]
                    .iter()
                    .all(|&x| x > floor)
                {
                    -numeric::derivative_at(v, i, h) / v[i]
                } else {
                    f64::NAN
                }
            })
            .collect()
    };
    IntensityTable::new(grid.clone(), values, IntensityKind::Stochastic)
}

/// Causal intensity `E^c = −U'`.
///
/// Closed forms for analytic, Pearson and polynomial potentials; finite
/// differences for tabulated ones (forward differences on lattices).
/// Points where the derivative is not finite are masked.
pub fn causal_intensity(u: &PotentialSpec, grid: &Grid) -> Result<IntensityTable> {
    let values = match u {
        PotentialSpec::Tabulated(t) => {
            grid.ensure_same(t.grid())?;
            let v = t.values();
            if grid.is_lattice() {
                let n = v.len();
                (0..n)
                    .map(|i| {
                        if i + 1 < n {
                            -(v[i + 1] - v[i])
                        } else {
                            f64::NAN
                        }
                    })
                    .collect()
            } else {
                numeric::derivative(v, grid.spacing())
                    .into_iter()
                    .map(|d| -d)
                    .collect()
            }
        }
        other => {
            if let PotentialSpec::Pearson(p) = other {
                p.check_grid(grid)?;
            }
            let mut out = Vec::with_capacity(grid.len());
            for x in grid.points() {
                let force = other
                    .closed_form_force(x)
                    .expect("closed form exists for non-tabulated potentials");
                match force {
                    Ok(e) => out.push(e),
                    Err(Error::OutOfSupport { .. }) if x == 0.0 => out.push(f64::NAN),
                    Err(e) => return Err(e),
                }
            }
            out
        }
    };
    Ok(IntensityTable::new(
        grid.clone(),
        values,
        IntensityKind::Causal,
    ))
}

/// Equilibrium density generated by an intensity: `f ∝ exp(∫ E^c)`.
///
/// Stochastic tables are read as `E^c = −E^s`. Continuous grids integrate
/// with [`numeric::cumulative_integral`] from the lower bound; lattices sum
/// `E^c` as log-pmf increments (the last lattice value is unused).
pub fn density_from_intensity(e: &IntensityTable) -> Result<EquilibriumDensity> {
    let grid = e.grid();
    let sign = match e.kind() {
        IntensityKind::Causal => 1.0,
        IntensityKind::Stochastic => -1.0,
    };
    let n = grid.len();
    let used = if grid.is_lattice() { n - 1 } else { n };
    if let Some(i) = e.values()[..used].iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "intensity is masked or not finite at x = {}",
            grid.point(i)
        )));
    }
    let causal: Vec<f64> = e.values().iter().map(|v| sign * v).collect();
    let integral = if grid.is_lattice() {
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(n);
        out.push(0.0);
        for c in &causal[..n - 1] {
            acc += c;
            out.push(acc);
        }
        out
    } else {
        numeric::cumulative_integral(&causal, grid.spacing())
    };
    let potential: Vec<f64> = integral.into_iter().map(|i| -i).collect();
    normalize_values(grid, &potential)
}

/// `E^s(f) + E^c(U)` on `f`'s grid, excluding points masked in either.
pub fn equilibrium_residual(f: &EquilibriumDensity, u: &PotentialSpec) -> Result<Residual> {
    let es = stochastic_intensity(f);
    let ec = causal_intensity(u, f.grid())?;
    let n = f.grid().len();
    let mut values = Vec::with_capacity(n);
    let mut mask = Vec::with_capacity(n);
    let (mut max_abs, mut max_abs_interior) = (0.0f64, 0.0f64);
    for i in 0..n {
        let masked = es.mask()[i] || ec.mask()[i];
        mask.push(masked);
        if masked {
            values.push(f64::NAN);
            continue;
        }
        let r = es.values()[i] + ec.values()[i];
        values.push(r);
        max_abs = max_abs.max(r.abs());
        if i > 0 && i + 1 < n {
            max_abs_interior = max_abs_interior.max(r.abs());
        }
    }
    Ok(Residual {
        values,
        mask,
        max_abs,
        max_abs_interior,
    })
}
