use equipoise::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

const N: usize = 100_000;

fn normal_samples(seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..N).map(|_| StandardNormal.sample(&mut rng)).collect()
}

fn exp_samples(seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..N).map(|_| Exp1.sample(&mut rng)).collect()
}

// Inverse-CDF samples at the midpoints of N equal-probability cells of a
// tabulated density.
fn quantile_samples(f: &EquilibriumDensity) -> Vec<f64> {
    let grid = f.grid();
    let cdf = numeric::cumulative_integral(f.values(), grid.spacing());
    let total = cdf[cdf.len() - 1];
    let mut j = 0;
    (0..N)
        .map(|i| {
            let p = (i as f64 + 0.5) / N as f64 * total;
            while cdf[j + 1] < p {
                j += 1;
            }
            let frac = (p - cdf[j]) / (cdf[j + 1] - cdf[j]);
            grid.point(j) + frac * grid.spacing()
        })
        .collect()
}

#[test]
fn normal_samples_reveal_linear_intensity() {
    let grid = Grid::continuous(-6.0, 6.0, 1201).unwrap();
    let report = decompose_samples(
        &normal_samples(42),
        &grid,
        Estimator::Kernel {
            bandwidth: Some(0.2),
        },
    )
    .unwrap();
    let fit = report.fit_intensity(-2.0, 2.0).unwrap();
    assert!((0.9..=1.1).contains(&fit.slope), "{fit:?}");
    assert!(fit.intercept.abs() < 0.1, "{fit:?}");
    let trimmed = report.trimmed_fit().unwrap();
    assert!((0.9..=1.1).contains(&trimmed.slope), "{trimmed:?}");
}

#[test]
fn exponential_samples_reveal_constant_intensity() {
    let grid = Grid::continuous(0.0, 10.0, 1001).unwrap();
    let report =
        decompose_samples(&exp_samples(42), &grid, Estimator::Histogram { bins: 100 }).unwrap();
    let mean = report.mean_intensity(0.5, 3.0).unwrap();
    assert!((0.9..=1.1).contains(&mean), "{mean}");
    assert_eq!(
        report.out_of_range,
        exp_samples(42).iter().filter(|&&x| x > 10.0).count()
    );
}

#[test]
fn default_bandwidth_is_silverman() {
    let grid = Grid::continuous(-6.0, 6.0, 1201).unwrap();
    let samples = normal_samples(3);
    let report = decompose_samples(&samples, &grid, Estimator::Kernel { bandwidth: None }).unwrap();
    match report.estimator {
        Estimator::Kernel {
            bandwidth: Some(bw),
        } => {
            // About 0.9 · 100000^{-1/5} for unit-variance data.
            assert!((bw - 0.9 * (N as f64).powf(-0.2)).abs() < 0.005, "{bw}");
        }
        e => panic!("unexpected estimator {e:?}"),
    }
    let fit = report.trimmed_fit().unwrap();
    assert!((0.9..=1.1).contains(&fit.slope), "{fit:?}");
}

#[test]
fn exact_quantile_samples_recover_catalog_intensities() {
    let normal = CatalogFamily::Normal {
        mu: 0.0,
        sigma: 1.0,
    };
    let fine = normal.default_grid_with(16001).unwrap();
    let samples = quantile_samples(&normalize(&PotentialSpec::Analytic(normal), &fine).unwrap());
    let grid = Grid::continuous(-6.0, 6.0, 1201).unwrap();
    let r = decompose_samples(
        &samples,
        &grid,
        Estimator::Kernel {
            bandwidth: Some(0.2),
        },
    )
    .unwrap();
    let slope = r.fit_intensity(-2.0, 2.0).unwrap().slope;
    assert!((0.9..=1.1).contains(&slope), "{slope}");

    let exp = CatalogFamily::Exponential { a: 1.0 };
    let fine = exp.default_grid_with(40001).unwrap();
    let samples = quantile_samples(&normalize(&PotentialSpec::Analytic(exp), &fine).unwrap());
    let grid = Grid::continuous(0.0, 10.0, 1001).unwrap();
    let r = decompose_samples(&samples, &grid, Estimator::Histogram { bins: 100 }).unwrap();
    let mean = r.mean_intensity(0.5, 3.0).unwrap();
    assert!((0.9..=1.1).contains(&mean), "{mean}");
}

#[test]
fn lattice_samples_use_empirical_pmf() {
    let grid = Grid::lattice(0, 3).unwrap();
    let samples: Vec<f64> = (0..400).map(|i| (i % 4) as f64).collect();
    let r = decompose_samples(&samples, &grid, Estimator::Histogram { bins: 4 }).unwrap();
    for v in r.density_estimate.values() {
        assert!((v - 0.25).abs() < 1e-15);
    }
    for (i, u) in r.normalized_potential.values().iter().enumerate() {
        assert!((u - 4f64.ln()).abs() < 1e-12, "{i}");
    }
    assert!(decompose_samples(&samples, &grid, Estimator::Kernel { bandwidth: None }).is_err());
}
