//! Potential functions `U(x)` and their pointwise evaluation.

use serde::{Deserialize, Serialize};

use crate::catalog::{CatalogFamily, PearsonParams, PearsonSign};
use crate::error::{Error, Result};
use crate::grid::Grid;

/// A real polynomial `c_0 + c_1 x + c_2 x² + ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coefficients: Vec<f64>,
}

impl Polynomial {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidParameter(
                "polynomial needs at least one coefficient".into(),
            ));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(
                "polynomial coefficients must be finite".into(),
            ));
        }
        Ok(Polynomial { coefficients })
    }

    /// `x^power`, e.g. `monomial(2)` is `x²`.
    pub fn monomial(power: usize) -> Self {
        let mut coefficients = vec![0.0; power + 1];
        coefficients[power] = 1.0;
        Polynomial { coefficients }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn value(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (p, c)| acc * x + p as f64 * c)
    }
}

/// Values of `U` tabulated on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedPotential {
    grid: Grid,
    values: Vec<f64>,
}

impl TabulatedPotential {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinitePotential { x: grid.point(i) });
        }
        Ok(TabulatedPotential { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// The external potential `U(x)`; `E^c = -dU/dx` is its causal intensity.
///
/// Catalog families use their unnormalized shape (`Exp(a)` is `a x`, not
/// `a x - ln a`); normalization constants live in the equilibrium density.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PotentialDoc", into = "PotentialDoc")]
pub enum PotentialSpec {
    Analytic(CatalogFamily),
    Pearson(PearsonParams),
    Polynomial(Polynomial),
    Tabulated(TabulatedPotential),
}

impl PotentialSpec {
    pub fn polynomial(coefficients: Vec<f64>) -> Result<Self> {
        Polynomial::new(coefficients).map(PotentialSpec::Polynomial)
    }

    pub fn tabulated(grid: Grid, values: Vec<f64>) -> Result<Self> {
        TabulatedPotential::new(grid, values).map(PotentialSpec::Tabulated)
    }

    /// `U(x)`. Tabulated potentials interpolate linearly inside their grid.
    pub fn value_at(&self, x: f64) -> Result<f64> {
        let v = match self {
            PotentialSpec::Analytic(family) => family.potential(x)?,
            PotentialSpec::Pearson(p) => p.potential(x)?,
            PotentialSpec::Polynomial(p) => p.value(x),
            PotentialSpec::Tabulated(t) => {
                t.grid
                    .interpolate(&t.values, x)
                    .ok_or_else(|| Error::OutOfSupport {
                        x,
                        support: format!("[{}, {}]", t.grid.lower(), t.grid.upper()),
                    })?
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinitePotential { x })
        }
    }

    /// Closed-form causal intensity `-U'(x)`. `None` for tabulated
    /// potentials, which are differentiated on their grid instead.
    pub fn closed_form_force(&self, x: f64) -> Option<Result<f64>> {
        match self {
            PotentialSpec::Analytic(family) => Some(family.intensity(x)),
            PotentialSpec::Pearson(p) => Some(p.intensity(x)),
            PotentialSpec::Polynomial(p) => Some(Ok(-p.derivative(x))),
            PotentialSpec::Tabulated(_) => None,
        }
    }

    /// `U` at every grid point; fails on the first non-finite value.
    pub fn eval(&self, grid: &Grid) -> Result<Vec<f64>> {
        match self {
            PotentialSpec::Tabulated(t) => {
                grid.ensure_same(&t.grid)?;
                Ok(t.values.clone())
            }
            PotentialSpec::Pearson(p) => {
                p.check_grid(grid)?;
                grid.points()
                    .into_iter()
                    .map(|x| self.value_at(x))
                    .collect()
            }
            _ => grid
                .points()
                .into_iter()
                .map(|x| self.value_at(x))
                .collect(),
        }
    }

    /// Adds a constant to the potential; used to check gauge invariance.
    pub fn shifted(&self, grid: &Grid, c: f64) -> Result<PotentialSpec> {
        let values = self.eval(grid)?.into_iter().map(|u| u + c).collect();
        PotentialSpec::tabulated(grid.clone(), values)
    }
}

/// `U` on `grid`. See [`PotentialSpec::eval`].
pub fn eval_potential(u: &PotentialSpec, grid: &Grid) -> Result<Vec<f64>> {
    u.eval(grid)
}

/// JSON form of a potential, tagged by `family`.
#[derive(Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
enum PotentialDoc {
    Uniform {
        n: u32,
    },
    Exponential {
        a: f64,
    },
    Normal {
        mu: f64,
        sigma: f64,
    },
    LinearConstant {
        a: f64,
        b: f64,
    },
    Poisson {
        lambda: f64,
    },
    Gamma {
        alpha: f64,
        beta: f64,
    },
    Pearson {
        a: f64,
        b0: f64,
        b1: f64,
        b2: f64,
        #[serde(default)]
        sign: PearsonSign,
    },
    Polynomial {
        coefficients: Vec<f64>,
    },
    Tabulated {
        grid: Grid,
        values: Vec<f64>,
    },
}

impl TryFrom<PotentialDoc> for PotentialSpec {
    type Error = Error;

    fn try_from(doc: PotentialDoc) -> Result<Self> {
        let family = match doc {
            PotentialDoc::Uniform { n } => CatalogFamily::UniformLattice { n },
            PotentialDoc::Exponential { a } => CatalogFamily::Exponential { a },
            PotentialDoc::Normal { mu, sigma } => CatalogFamily::Normal { mu, sigma },
            PotentialDoc::LinearConstant { a, b } => CatalogFamily::LinearConstant { a, b },
            PotentialDoc::Poisson { lambda } => CatalogFamily::Poisson { lambda },
            PotentialDoc::Gamma { alpha, beta } => CatalogFamily::Gamma { alpha, beta },
            PotentialDoc::Pearson {
                a,
                b0,
                b1,
                b2,
                sign,
            } => return PearsonParams::new(a, b0, b1, b2, sign).map(PotentialSpec::Pearson),
            PotentialDoc::Polynomial { coefficients } => {
                return PotentialSpec::polynomial(coefficients)
            }
            PotentialDoc::Tabulated { grid, values } => {
                return PotentialSpec::tabulated(grid, values)
            }
        };
        family.validate()?;
        Ok(PotentialSpec::Analytic(family))
    }
}

impl From<PotentialSpec> for PotentialDoc {
    fn from(spec: PotentialSpec) -> Self {
        match spec {
            PotentialSpec::Analytic(f) => match f {
                CatalogFamily::UniformLattice { n } => PotentialDoc::Uniform { n },
                CatalogFamily::Exponential { a } => PotentialDoc::Exponential { a },
                CatalogFamily::Normal { mu, sigma } => PotentialDoc::Normal { mu, sigma },
                CatalogFamily::LinearConstant { a, b } => PotentialDoc::LinearConstant { a, b },
                CatalogFamily::Poisson { lambda } => PotentialDoc::Poisson { lambda },
                CatalogFamily::Gamma { alpha, beta } => PotentialDoc::Gamma { alpha, beta },
            },
            PotentialSpec::Pearson(p) => PotentialDoc::Pearson {
                a: p.a,
                b0: p.b0,
                b1: p.b1,
                b2: p.b2,
                sign: p.sign,
            },
            PotentialSpec::Polynomial(p) => PotentialDoc::Polynomial {
                coefficients: p.coefficients,
            },
            PotentialSpec::Tabulated(t) => PotentialDoc::Tabulated {
                grid: t.grid,
                values: t.values,
            },
        }
    }
}
