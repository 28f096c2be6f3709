//! One-dimensional supports: uniform continuous grids and integer lattices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric;

/// Whether grid values are densities on a continuum or masses on integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    Continuous,
    Lattice,
}

/// A discretized support `lower = x_0 < x_1 < ... < x_{n-1} = upper`.
///
/// Continuous grids are uniform with `spacing = (upper - lower) / (n - 1)`.
/// Lattice grids hold the consecutive integers `lower..=upper` and have unit
/// spacing. Integration uses fourth-order end-corrected trapezoid weights on
/// continuous grids and plain summation on lattices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridDef", into = "GridDef")]
pub struct Grid {
    kind: GridKind,
    lower: f64,
    upper: f64,
    n_points: usize,
    spacing: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridDef {
    support: GridKind,
    lower: f64,
    upper: f64,
    n_points: usize,
}

impl TryFrom<GridDef> for Grid {
    type Error = Error;

    fn try_from(def: GridDef) -> Result<Self> {
        Grid::new(def.support, def.lower, def.upper, def.n_points)
    }
}

impl From<Grid> for GridDef {
    fn from(g: Grid) -> Self {
        GridDef {
            support: g.kind,
            lower: g.lower,
            upper: g.upper,
            n_points: g.n_points,
        }
    }
}

impl Grid {
    pub fn new(kind: GridKind, lower: f64, upper: f64, n_points: usize) -> Result<Self> {
        if !lower.is_finite() || !upper.is_finite() {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        if lower >= upper {
            return Err(Error::InvalidGrid(format!(
                "reversed bounds: lower {lower} must be below upper {upper}"
            )));
        }
        if n_points < 3 {
            return Err(Error::InvalidGrid(format!(
                "need at least 3 points, got {n_points}"
            )));
        }
        let spacing = match kind {
            GridKind::Continuous => (upper - lower) / (n_points - 1) as f64,
            GridKind::Lattice => {
                if lower.fract() != 0.0 || upper.fract() != 0.0 {
                    return Err(Error::InvalidGrid(format!(
                        "lattice bounds must be integers, got [{lower}, {upper}]"
                    )));
                }
                let expected = upper - lower + 1.0;
                if expected != n_points as f64 {
                    return Err(Error::InvalidGrid(format!(
                        "lattice [{lower}, {upper}] has {expected} points, not {n_points}"
                    )));
                }
                1.0
            }
        };
        if spacing <= 0.0 || !spacing.is_finite() {
            return Err(Error::InvalidGrid("degenerate spacing".into()));
        }
        Ok(Grid {
            kind,
            lower,
            upper,
            n_points,
            spacing,
        })
    }

    pub fn continuous(lower: f64, upper: f64, n_points: usize) -> Result<Self> {
        Self::new(GridKind::Continuous, lower, upper, n_points)
    }

    pub fn lattice(lower: i64, upper: i64) -> Result<Self> {
        if upper <= lower {
            return Err(Error::InvalidGrid(format!(
                "reversed bounds: lower {lower} must be below upper {upper}"
            )));
        }
        let n = (upper - lower + 1) as usize;
        Self::new(GridKind::Lattice, lower as f64, upper as f64, n)
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn is_lattice(&self) -> bool {
        self.kind == GridKind::Lattice
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    /// Always false; grids hold at least three points.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// The `i`-th grid point. The last point is `upper` exactly.
    pub fn point(&self, i: usize) -> f64 {
        debug_assert!(i < self.n_points);
        if i + 1 == self.n_points {
            self.upper
        } else {
            self.lower + i as f64 * self.spacing
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    /// Quadrature weights; `integrate(v) == sum(w_i * v_i)`.
    pub fn weights(&self) -> Vec<f64> {
        match self.kind {
            GridKind::Lattice => vec![1.0; self.n_points],
            GridKind::Continuous => numeric::quadrature_weights(self.n_points, self.spacing),
        }
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.n_points);
        self.weights().iter().zip(values).map(|(w, v)| w * v).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lower && x <= self.upper
    }

    /// Errors with [`Error::GridMismatch`] unless `other` is the same grid.
    pub fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Linear interpolation of a table on this grid. `None` outside the grid.
    pub fn interpolate(&self, values: &[f64], x: f64) -> Option<f64> {
        if !self.contains(x) {
            return None;
        }
        let t = (x - self.lower) / self.spacing;
        let i = (t.floor() as usize).min(self.n_points - 2);
        let frac = t - i as f64;
        Some(values[i] + (values[i + 1] - values[i]) * frac)
    }
}
