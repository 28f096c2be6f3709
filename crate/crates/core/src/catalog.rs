//! Closed-form intensity / potential / density triples and the Pearson
//! generator.
//!
//! | family            | causal intensity `E^c(x)`   | normalized potential `Ũ(x)`            |
//! |-------------------|-----------------------------|----------------------------------------|
//! | uniform on 1..=N  | 0                           | ln N                                   |
//! | Exp(a)            | −a                          | a x − ln a                             |
//! | n(μ, σ)           | −(x − μ)/σ²                 | (x − μ)²/(2σ²) + ½ ln(2πσ²)            |
//! | linear + constant | −a − b x                    | a x + b x²/2 + ½ ln(2π/b) + a²/(2b)    |
//! | Poi(λ)            | −ψ(x + 1) + ln λ            | λ − x ln λ + ln Γ(x + 1)               |
//! | Γ(α, β)           | −(1 − α)/x − 1/β            | (1 − α) ln x + x/β + ln(Γ(α) β^α)      |

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::transform::{density_from_intensity, EquilibriumDensity, IntensityKind, IntensityTable};
use statrs::function::gamma::{digamma, ln_gamma};

/// Number of points on the default continuous grids.
pub const DEFAULT_POINTS: usize = 4001;

// Probability mass allowed outside a default grid, per tail.
const TAIL_MASS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CatalogFamily {
    /// Uniform on the integers `1..=n`.
    UniformLattice {
        n: u32,
    },
    Exponential {
        a: f64,
    },
    Normal {
        mu: f64,
        sigma: f64,
    },
    /// `f ∝ exp(−a x − b x²/2)`, a normal with mean `−a/b`, variance `1/b`.
    LinearConstant {
        a: f64,
        b: f64,
    },
    Poisson {
        lambda: f64,
    },
    /// Shape `alpha`, scale `beta`.
    Gamma {
        alpha: f64,
        beta: f64,
    },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive")))
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite")))
    }
}

impl CatalogFamily {
    /// `n(0, √(1/b))`, the density generated by `E^c = −b x`.
    pub fn normal_from_precision(b: f64) -> Result<Self> {
        positive("b", b)?;
        Ok(CatalogFamily::Normal {
            mu: 0.0,
            sigma: (1.0 / b).sqrt(),
        })
    }

    /// `Γ(1 − a, 1/b)`, the density generated by `E^c = −a/x − b`.
    pub fn gamma_from_intensity(a: f64, b: f64) -> Result<Self> {
        finite("a", a)?;
        if a >= 1.0 {
            return Err(Error::InvalidParameter(
                "a must be below 1 for a valid gamma shape 1 - a".into(),
            ));
        }
        positive("b", b)?;
        Ok(CatalogFamily::Gamma {
            alpha: 1.0 - a,
            beta: 1.0 / b,
        })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            CatalogFamily::UniformLattice { n } => {
                if n == 0 {
                    return Err(Error::InvalidParameter("n must be positive".into()));
                }
                Ok(())
            }
            CatalogFamily::Exponential { a } => positive("a", a),
            CatalogFamily::Normal { mu, sigma } => {
                finite("mu", mu)?;
                positive("sigma", sigma)
            }
            CatalogFamily::LinearConstant { a, b } => {
                finite("a", a)?;
                positive("b", b)
            }
            CatalogFamily::Poisson { lambda } => positive("lambda", lambda),
            CatalogFamily::Gamma { alpha, beta } => {
                positive("alpha", alpha)?;
                positive("beta", beta)
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CatalogFamily::UniformLattice { .. } => "uniform",
            CatalogFamily::Exponential { .. } => "exponential",
            CatalogFamily::Normal { .. } => "normal",
            CatalogFamily::LinearConstant { .. } => "linear_constant",
            CatalogFamily::Poisson { .. } => "poisson",
            CatalogFamily::Gamma { .. } => "gamma",
        }
    }

    /// Families whose natural support is a set of integers.
    pub fn is_lattice(&self) -> bool {
        matches!(
            self,
            CatalogFamily::UniformLattice { .. } | CatalogFamily::Poisson { .. }
        )
    }

    fn check_support(&self, x: f64) -> Result<()> {
        let (ok, support) = match *self {
            CatalogFamily::UniformLattice { n } => (x >= 1.0 && x <= n as f64, format!("[1, {n}]")),
            CatalogFamily::Exponential { .. } | CatalogFamily::Poisson { .. } => {
                (x >= 0.0, "[0, inf)".to_string())
            }
            CatalogFamily::Gamma { .. } => (x >= 0.0, "(0, inf)".to_string()),
            CatalogFamily::Normal { .. } | CatalogFamily::LinearConstant { .. } => {
                (x.is_finite(), "(-inf, inf)".to_string())
            }
        };
        if ok && !x.is_nan() {
            Ok(())
        } else {
            Err(Error::OutOfSupport { x, support })
        }
    }

    /// The potential without its normalizing constant.
    pub fn potential(&self, x: f64) -> Result<f64> {
        self.check_support(x)?;
        let u = match *self {
            CatalogFamily::UniformLattice { .. } => 0.0,
            CatalogFamily::Exponential { a } => a * x,
            CatalogFamily::Normal { mu, sigma } => (x - mu).powi(2) / (2.0 * sigma * sigma),
            CatalogFamily::LinearConstant { a, b } => a * x + 0.5 * b * x * x,
            CatalogFamily::Poisson { lambda } => ln_gamma(x + 1.0) - x * lambda.ln(),
            CatalogFamily::Gamma { alpha, beta } => {
                let log_term = if alpha == 1.0 {
                    0.0
                } else {
                    (1.0 - alpha) * x.ln()
                };
                log_term + x / beta
            }
        };
        if u.is_finite() {
            Ok(u)
        } else {
            Err(Error::NonFinitePotential { x })
        }
    }

    /// `ln Ω` for [`Self::potential`] over the family's full support.
    pub fn log_partition(&self) -> f64 {
        match *self {
            CatalogFamily::UniformLattice { n } => (n as f64).ln(),
            CatalogFamily::Exponential { a } => -a.ln(),
            CatalogFamily::Normal { sigma, .. } => 0.5 * (2.0 * PI * sigma * sigma).ln(),
            CatalogFamily::LinearConstant { a, b } => 0.5 * (2.0 * PI / b).ln() + a * a / (2.0 * b),
            CatalogFamily::Poisson { lambda } => lambda,
            CatalogFamily::Gamma { alpha, beta } => ln_gamma(alpha) + alpha * beta.ln(),
        }
    }

    /// Causal intensity `E^c(x) = −U'(x)`.
    pub fn intensity(&self, x: f64) -> Result<f64> {
        self.check_support(x)?;
        let e = match *self {
            CatalogFamily::UniformLattice { .. } => 0.0,
            CatalogFamily::Exponential { a } => -a,
            CatalogFamily::Normal { mu, sigma } => -(x - mu) / (sigma * sigma),
            CatalogFamily::LinearConstant { a, b } => -a - b * x,
            CatalogFamily::Poisson { lambda } => -digamma(x + 1.0) + lambda.ln(),
            CatalogFamily::Gamma { alpha, beta } => {
                if x <= 0.0 {
                    return Err(Error::OutOfSupport {
                        x,
                        support: "(0, inf)".into(),
                    });
                }
                -(1.0 - alpha) / x - 1.0 / beta
            }
        };
        Ok(e)
    }

    /// `Ũ(x) = −ln f(x)`.
    pub fn normalized_potential(&self, x: f64) -> Result<f64> {
        Ok(self.potential(x)? + self.log_partition())
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        if let CatalogFamily::UniformLattice { n } = self {
            self.check_support(x)?;
            return Ok(1.0 / f64::from(*n));
        }
        Ok((-self.normalized_potential(x)?).exp())
    }

    /// Grid covering all but a negligible tail of the family:
    /// `1..=N` for the uniform lattice, `0..=m` for Poisson, and
    /// [`DEFAULT_POINTS`] points for the continuous families.
    pub fn default_grid(&self) -> Result<Grid> {
        self.default_grid_with(DEFAULT_POINTS)
    }

    /// As [`Self::default_grid`] with a chosen point count for continuous
    /// families. Lattice families ignore `n_points`.
    pub fn default_grid_with(&self, n_points: usize) -> Result<Grid> {
        self.validate()?;
        let (lo, hi) = self.default_bounds(n_points);
        match self {
            CatalogFamily::UniformLattice { n } => Grid::lattice(1, *n as i64),
            CatalogFamily::Poisson { .. } => Grid::lattice(0, hi as i64),
            _ => Grid::continuous(lo, hi, n_points),
        }
    }

    fn default_bounds(&self, n_points: usize) -> (f64, f64) {
        match *self {
            CatalogFamily::UniformLattice { n } => (1.0, n as f64),
            CatalogFamily::Exponential { a } => (0.0, 40.0 / a),
            CatalogFamily::Normal { mu, sigma } => (mu - 8.0 * sigma, mu + 8.0 * sigma),
            CatalogFamily::LinearConstant { a, b } => {
                let (m, s) = (-a / b, 1.0 / b.sqrt());
                (m - 8.0 * s, m + 8.0 * s)
            }
            CatalogFamily::Poisson { lambda } => {
                // pmf(x+1)/pmf(x) = λ/(x+1); past the mode the tail beyond x is
                // at most pmf(x) / (1 - λ/(x+1)).
                let mut x = 0.0;
                let mut ln_pmf = -lambda;
                loop {
                    let ratio = lambda / (x + 1.0);
                    if ratio < 0.5 && ln_pmf.exp() / (1.0 - ratio) < 1e-17 {
                        break (0.0, x.max(2.0));
                    }
                    ln_pmf += ratio.ln();
                    x += 1.0;
                }
            }
            CatalogFamily::Gamma { alpha, beta } => {
                let ln_norm = ln_gamma(alpha) + alpha * beta.ln();
                let density = |t: f64| ((alpha - 1.0) * t.ln() - t / beta - ln_norm).exp();
                // Upper tail: ∫_t^∞ x^{α−1} e^{−x/β} ≤ f(t) β / (1 − (α−1)β/t).
                let mut hi = 2.0 * beta * alpha.max(1.0);
                loop {
                    let shrink = if alpha > 1.0 {
                        1.0 - (alpha - 1.0) * beta / hi
                    } else {
                        1.0
                    };
                    if shrink > 0.5 && density(hi) * beta / shrink < TAIL_MASS {
                        break;
                    }
                    hi *= 2.0;
                }
                let lo = if alpha < 1.0 {
                    0.5 * hi / (n_points - 1) as f64
                } else if alpha == 1.0 {
                    0.0
                } else {
                    // Head: ∫_0^ε x^{α−1} e^{−x/β} / (Γ(α)β^α) ≤ ε^α / (α Γ(α) β^α).
                    ((TAIL_MASS * alpha).ln() + ln_norm).exp().powf(1.0 / alpha)
                };
                (lo, hi)
            }
        }
    }
}

/// `E^c(x)` of a catalog family.
pub fn catalog_intensity(family: &CatalogFamily, x: f64) -> Result<f64> {
    family.validate()?;
    family.intensity(x)
}

/// `Ũ(x)` of a catalog family.
pub fn catalog_normalized_potential(family: &CatalogFamily, x: f64) -> Result<f64> {
    family.validate()?;
    family.normalized_potential(x)
}

/// Closed-form density (or pmf) `e^{−Ũ(x)}`.
pub fn catalog_density(family: &CatalogFamily, x: f64) -> Result<f64> {
    family.validate()?;
    family.density(x)
}

/// Which sign of the Pearson right-hand side is read as the causal intensity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PearsonSign {
    /// `E^c = (x − a)/(b0 + b1 x + b2 x²)`, the literal right-hand side.
    Paper,
    /// `E^c = −(x − a)/(b0 + b1 x + b2 x²)`, the conventional form.
    #[default]
    Standard,
}

/// Parameters of the Pearson equation `f'/f = ±(x − a)/(b0 + b1 x + b2 x²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PearsonParams {
    pub a: f64,
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub sign: PearsonSign,
}

impl PearsonParams {
    pub fn new(a: f64, b0: f64, b1: f64, b2: f64, sign: PearsonSign) -> Result<Self> {
        for (name, v) in [("a", a), ("b0", b0), ("b1", b1), ("b2", b2)] {
            finite(name, v)?;
        }
        if b0 == 0.0 && b1 == 0.0 && b2 == 0.0 {
            return Err(Error::InvalidParameter(
                "denominator b0 + b1 x + b2 x^2 is identically zero".into(),
            ));
        }
        Ok(PearsonParams {
            a,
            b0,
            b1,
            b2,
            sign,
        })
    }

    /// `(μ, σ)` normal as a Pearson member: `a = μ`, `b0 = σ²`.
    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        positive("sigma", sigma)?;
        Self::new(mu, sigma * sigma, 0.0, 0.0, PearsonSign::Standard)
    }

    pub fn denominator(&self, x: f64) -> f64 {
        self.b0 + x * (self.b1 + x * self.b2)
    }

    fn sign_factor(&self) -> f64 {
        match self.sign {
            PearsonSign::Paper => 1.0,
            PearsonSign::Standard => -1.0,
        }
    }

    pub fn intensity(&self, x: f64) -> Result<f64> {
        let q = self.denominator(x);
        let e = self.sign_factor() * (x - self.a) / q;
        if q == 0.0 || !e.is_finite() {
            return Err(Error::PearsonPole { x });
        }
        Ok(e)
    }

    /// Real roots of the denominator, ascending.
    pub fn denominator_roots(&self) -> Vec<f64> {
        let (b0, b1, b2) = (self.b0, self.b1, self.b2);
        if b2 != 0.0 {
            let disc = b1 * b1 - 4.0 * b2 * b0;
            if disc < 0.0 {
                return vec![];
            }
            let s = disc.sqrt();
            let mut r = vec![(-b1 - s) / (2.0 * b2), (-b1 + s) / (2.0 * b2)];
            r.sort_by(f64::total_cmp);
            r.dedup();
            r
        } else if b1 != 0.0 {
            vec![-b0 / b1]
        } else {
            vec![]
        }
    }

    /// `A(x) = ∫ (x − a)/(b0 + b1 x + b2 x²) dx`, up to a constant.
    pub fn antiderivative(&self, x: f64) -> f64 {
        let (a, b0, b1, b2) = (self.a, self.b0, self.b1, self.b2);
        if b2 != 0.0 {
            let q = self.denominator(x);
            let y = 2.0 * b2 * x + b1;
            let disc = b1 * b1 - 4.0 * b2 * b0;
            let inv_q_integral = if disc < 0.0 {
                let r = (-disc).sqrt();
                2.0 / r * (y / r).atan()
            } else if disc > 0.0 {
                let s = disc.sqrt();
                ((y - s) / (y + s)).abs().ln() / s
            } else {
                -2.0 / y
            };
            q.abs().ln() / (2.0 * b2) - (a + b1 / (2.0 * b2)) * inv_q_integral
        } else if b1 != 0.0 {
            x / b1 - (a + b0 / b1) / b1 * (b1 * x + b0).abs().ln()
        } else {
            (x - a).powi(2) / (2.0 * b0)
        }
    }

    /// `U(x) = −∫ E^c`, pointwise in closed form.
    pub fn potential(&self, x: f64) -> Result<f64> {
        if self.denominator(x) == 0.0 {
            return Err(Error::PearsonPole { x });
        }
        Ok(-self.sign_factor() * self.antiderivative(x))
    }

    /// Rejects grids on which the denominator vanishes or changes sign.
    pub fn check_grid(&self, grid: &Grid) -> Result<()> {
        let mut prev: Option<(f64, f64)> = None;
        for x in grid.points() {
            let q = self.denominator(x);
            if q == 0.0 || !q.is_finite() {
                return Err(Error::PearsonPole { x });
            }
            if let Some((_, pq)) = prev {
                if (pq < 0.0) != (q < 0.0) {
                    return Err(Error::PearsonPole { x });
                }
            }
            prev = Some((x, q));
        }
        Ok(())
    }
}

/// The causal intensity generated by Pearson's equation, as a function.
pub fn pearson_intensity(p: &PearsonParams) -> impl Fn(f64) -> Result<f64> + '_ {
    move |x| p.intensity(x)
}

/// Pearson intensity tabulated on `grid`.
pub fn pearson_intensity_table(p: &PearsonParams, grid: &Grid) -> Result<IntensityTable> {
    p.check_grid(grid)?;
    let values = grid
        .points()
        .into_iter()
        .map(|x| p.intensity(x))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntensityTable::new(
        grid.clone(),
        values,
        IntensityKind::Causal,
    ))
}

/// Integrates the Pearson intensity into a normalized density on `grid`.
///
/// A grid end that truncates an infinite tail (no denominator root within
/// one spacing beyond it) must have the intensity pointing back into the
/// grid; otherwise the density grows into the cut and is reported as not
/// normalizable.
pub fn pearson_density(p: &PearsonParams, grid: &Grid) -> Result<EquilibriumDensity> {
    let table = pearson_intensity_table(p, grid)?;
    let roots = p.denominator_roots();
    let h = grid.spacing();
    let (lo, hi) = (grid.lower(), grid.upper());
    let lower_natural = roots.iter().any(|&r| r <= lo && lo - r <= h);
    let upper_natural = roots.iter().any(|&r| r >= hi && r - hi <= h);
    let e = table.values();
    if !lower_natural && e[0] < 0.0 {
        return Err(Error::NotNormalizable(format!(
            "density grows toward the lower cut at x = {lo}"
        )));
    }
    if !upper_natural && e[e.len() - 1] > 0.0 {
        return Err(Error::NotNormalizable(format!(
            "density grows toward the upper cut at x = {hi}"
        )));
    }
    density_from_intensity(&table)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    fn poisson_pmf(lambda: f64, k: u32) -> f64 {
        (1..=k).fold((-lambda).exp(), |acc, i| acc * lambda / i as f64)
    }

    fn normal_pdf(mu: f64, sigma: f64, x: f64) -> f64 {
        (-(x - mu).powi(2) / (2.0 * sigma * sigma)).exp() / (sigma * (2.0 * PI).sqrt())
    }

    #[test]
    fn intensity_examples() {
        let normal = CatalogFamily::normal_from_precision(1.0).unwrap();
        assert_eq!(catalog_intensity(&normal, 2.5).unwrap(), -2.5);
        let uniform = CatalogFamily::UniformLattice { n: 10 };
        assert_eq!(catalog_intensity(&uniform, 3.0).unwrap(), 0.0);
        let poisson = CatalogFamily::Poisson { lambda: 1.0 };
        assert!((catalog_intensity(&poisson, 0.0).unwrap() - EULER_GAMMA).abs() < 1e-13);
        let gamma = CatalogFamily::gamma_from_intensity(0.25, 2.0).unwrap();
        assert_eq!(
            gamma,
            CatalogFamily::Gamma {
                alpha: 0.75,
                beta: 0.5
            }
        );
        assert!((catalog_intensity(&gamma, 0.5).unwrap() - (-0.25 / 0.5 - 2.0)).abs() < 1e-14);
    }

    #[test]
    fn normalized_potential_examples() {
        let exp2 = CatalogFamily::Exponential { a: 2.0 };
        assert!((catalog_normalized_potential(&exp2, 0.0).unwrap() + 2f64.ln()).abs() < 1e-15);
        let poisson = CatalogFamily::Poisson { lambda: 1.0 };
        let u0 = catalog_normalized_potential(&poisson, 0.0).unwrap();
        assert!((u0 - 1.0).abs() < 1e-15);
        assert!(((-u0).exp() - poisson_pmf(1.0, 0)).abs() < 1e-15);
        let gamma = CatalogFamily::Gamma {
            alpha: 1.0,
            beta: 1.0,
        };
        assert!((catalog_normalized_potential(&gamma, 3.0).unwrap() - 3.0).abs() < 1e-15);
        let uniform = CatalogFamily::UniformLattice { n: 8 };
        assert_eq!(
            catalog_normalized_potential(&uniform, 2.0).unwrap(),
            8f64.ln()
        );
    }

    #[test]
    fn density_examples() {
        let normal = CatalogFamily::normal_from_precision(1.0).unwrap();
        assert!((catalog_density(&normal, 0.0).unwrap() - 0.398_942_280_401_432_7).abs() < 1e-15);
        let uniform = CatalogFamily::UniformLattice { n: 4 };
        assert!((catalog_density(&uniform, 3.0).unwrap() - 0.25).abs() < 1e-16);
        let poisson = CatalogFamily::Poisson { lambda: 2.0 };
        let expected = (-2f64).exp() * 8.0 / 6.0;
        assert!((catalog_density(&poisson, 3.0).unwrap() - expected).abs() < 1e-14);
        assert!((expected - 0.180_447).abs() < 1e-6);
    }

    #[test]
    fn poisson_matches_pmf_oracle() {
        for &lambda in &[0.3, 1.0, 4.0, 17.5] {
            let fam = CatalogFamily::Poisson { lambda };
            for k in 0..60u32 {
                let got = fam.density(k as f64).unwrap();
                let want = poisson_pmf(lambda, k);
                assert!((got - want).abs() <= 1e-12 * want.max(1e-300) + 1e-300);
            }
        }
    }

    #[test]
    fn normal_matches_closed_form() {
        let fam = CatalogFamily::Normal {
            mu: 2.0,
            sigma: 0.5,
        };
        for i in 0..41 {
            let x = i as f64 * 0.1;
            assert!((fam.density(x).unwrap() - normal_pdf(2.0, 0.5, x)).abs() < 1e-14);
        }
    }

    #[test]
    fn support_violations() {
        let gamma = CatalogFamily::Gamma {
            alpha: 2.0,
            beta: 1.0,
        };
        assert!(matches!(
            catalog_intensity(&gamma, -1.0),
            Err(Error::OutOfSupport { .. })
        ));
        assert!(catalog_density(&CatalogFamily::Exponential { a: 1.0 }, -0.5).is_err());
        assert!(catalog_density(&CatalogFamily::UniformLattice { n: 4 }, 5.0).is_err());
        assert!(catalog_intensity(&CatalogFamily::Poisson { lambda: 1.0 }, -1.0).is_err());
    }

    #[test]
    fn invalid_parameters() {
        let err = catalog_density(
            &CatalogFamily::Gamma {
                alpha: -1.0,
                beta: 1.0,
            },
            1.0,
        );
        assert_eq!(
            err,
            Err(Error::InvalidParameter("alpha must be positive".into()))
        );
        assert!(CatalogFamily::gamma_from_intensity(1.0, 1.0).is_err());
        assert!(CatalogFamily::normal_from_precision(0.0).is_err());
        assert!(CatalogFamily::Poisson { lambda: f64::NAN }
            .validate()
            .is_err());
    }

    #[test]
    fn gamma_one_is_exponential() {
        for &beta in &[0.5, 1.0, 3.0] {
            let g = CatalogFamily::Gamma { alpha: 1.0, beta };
            let e = CatalogFamily::Exponential { a: 1.0 / beta };
            for i in 0..200 {
                let x = i as f64 * 0.05;
                let (dg, de) = (g.density(x).unwrap(), e.density(x).unwrap());
                assert!((dg - de).abs() <= 1e-12, "beta={beta} x={x}");
            }
        }
    }

    #[test]
    fn linear_constant_completes_the_square() {
        for &(a, b) in &[(2.0, 1.0), (-1.0, 4.0), (0.5, 0.25)] {
            let lc = CatalogFamily::LinearConstant { a, b };
            let n = CatalogFamily::Normal {
                mu: -a / b,
                sigma: 1.0 / f64::sqrt(b),
            };
            for i in -50..50 {
                let x = -a / b + i as f64 * 0.1 / b.sqrt();
                let (d1, d2) = (lc.density(x).unwrap(), n.density(x).unwrap());
                assert!((d1 - d2).abs() <= 1e-12, "a={a} b={b} x={x}");
            }
        }
    }

    #[test]
    fn default_grids_have_negligible_tails() {
        let g = CatalogFamily::Poisson { lambda: 4.0 }
            .default_grid()
            .unwrap();
        assert!(g.is_lattice() && g.lower() == 0.0);
        let tail: f64 = (g.upper() as u32 + 1..g.upper() as u32 + 200)
            .map(|k| poisson_pmf(4.0, k))
            .sum();
        assert!(tail < 1e-15, "tail {tail}");

        let g = CatalogFamily::Gamma {
            alpha: 2.0,
            beta: 1.0,
        }
        .default_grid()
        .unwrap();
        // Γ(2, 1): P(X > t) = (1 + t) e^{−t}, P(X < ε) ≈ ε²/2.
        assert!((1.0 + g.upper()) * (-g.upper()).exp() < 1e-12);
        assert!(g.lower() > 0.0 && g.lower().powi(2) / 2.0 <= 1.01e-12);

        let g = CatalogFamily::Gamma {
            alpha: 0.5,
            beta: 1.0,
        }
        .default_grid()
        .unwrap();
        assert!((g.lower() - g.spacing() / 2.0).abs() < 1e-3 * g.spacing());

        let g = CatalogFamily::UniformLattice { n: 8 }
            .default_grid()
            .unwrap();
        assert_eq!((g.lower(), g.upper(), g.len()), (1.0, 8.0, 8));
    }

    #[test]
    fn pearson_intensity_signs() {
        let std = PearsonParams::new(0.0, 1.0, 0.0, 0.0, PearsonSign::Standard).unwrap();
        assert_eq!(pearson_intensity(&std)(2.0).unwrap(), -2.0);
        let literal = PearsonParams {
            sign: PearsonSign::Paper,
            ..std
        };
        assert_eq!(pearson_intensity(&literal)(2.0).unwrap(), 2.0);
    }

    #[test]
    fn pearson_pole_on_grid_is_rejected() {
        let p = PearsonParams::new(0.0, -1.0, 0.0, 1.0, PearsonSign::Standard).unwrap();
        assert_eq!(p.denominator_roots(), vec![-1.0, 1.0]);
        let grid = Grid::continuous(0.0, 2.0, 21).unwrap();
        assert!(matches!(
            pearson_intensity_table(&p, &grid),
            Err(Error::PearsonPole { .. })
        ));
        // A root strictly between grid points is caught by the sign change.
        let grid = Grid::continuous(0.05, 2.05, 21).unwrap();
        assert!(matches!(
            p.check_grid(&grid),
            Err(Error::PearsonPole { .. })
        ));
    }

    #[test]
    fn pearson_antiderivative_matches_intensity() {
        let cases = [
            (0.3, 1.0, 0.0, 0.0),
            (1.0, 2.0, 0.5, 0.0),
            (0.0, 2.0, 0.2, 0.3),
            (0.5, -1.0, 0.0, 1.0),
            (0.1, 1.0, 2.0, 1.0),
            (-0.4, 3.0, 1.0, -0.5),
        ];
        for (a, b0, b1, b2) in cases {
            let p = PearsonParams::new(a, b0, b1, b2, PearsonSign::Standard).unwrap();
            for &x in &[1.5, 2.25, 3.0] {
                if p.denominator(x).abs() < 0.1 {
                    continue;
                }
                let h = 1e-5;
                let du = (p.potential(x + h).unwrap() - p.potential(x - h).unwrap()) / (2.0 * h);
                let e = p.intensity(x).unwrap();
                assert!(
                    (du + e).abs() < 1e-7,
                    "{a} {b0} {b1} {b2} at {x}: {du} vs {e}"
                );
            }
        }
    }

    #[test]
    fn pearson_density_recovers_normal() {
        let p = PearsonParams::normal(0.0, 1.0).unwrap();
        let grid = Grid::continuous(-8.0, 8.0, 4001).unwrap();
        let f = pearson_density(&p, &grid).unwrap();
        for (x, v) in grid.points().iter().zip(f.values()) {
            assert!((v - normal_pdf(0.0, 1.0, *x)).abs() < 1e-6);
        }
    }

    #[test]
    fn pearson_literal_sign_is_not_normalizable() {
        let p = PearsonParams::new(0.0, 1.0, 0.0, 0.0, PearsonSign::Paper).unwrap();
        let grid = Grid::continuous(-8.0, 8.0, 4001).unwrap();
        assert!(matches!(
            pearson_density(&p, &grid),
            Err(Error::NotNormalizable(_))
        ));
    }

    #[test]
    fn pearson_type_three_with_natural_lower_end() {
        // f'/f = −(x − a)/(b1 x): gamma-shaped with shape 1 + a/b1, scale b1.
        let p = PearsonParams::new(1.0, 0.0, 1.0, 0.0, PearsonSign::Standard).unwrap();
        let lo = 0.05;
        let grid = Grid::continuous(lo, 40.0, 4001).unwrap();
        let f = pearson_density(&p, &grid).unwrap();
        let gamma = CatalogFamily::Gamma {
            alpha: 2.0,
            beta: 1.0,
        };
        // Gamma(2, 1) conditioned on x ≥ lo.
        let kept = (-lo).exp() * (1.0 + lo);
        for (x, v) in grid.points().iter().zip(f.values()) {
            assert!(
                (v - gamma.density(*x).unwrap() / kept).abs() < 1e-5,
                "x={x}"
            );
        }
    }
}
