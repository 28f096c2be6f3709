use equipoise::*;

const SEED: u64 = 42;

fn harmonic() -> PotentialSpec {
    PotentialSpec::polynomial(vec![0.0, 0.0, 0.5]).unwrap()
}

fn harmonic_grid() -> Grid {
    Grid::continuous(-6.0, 6.0, 241).unwrap()
}

fn mean_of(f: &EquilibriumDensity) -> f64 {
    f.expectation(&f.grid().points())
}

#[test]
fn harmonic_and_uniform_reach_equilibrium() {
    let a = simulate(&SimConfig::new(harmonic(), harmonic_grid(), SEED)).unwrap();
    assert!(a.tv_distance < 0.02, "{}", a.tv_distance);
    assert_eq!(a.n_samples_used, 8 * 180_000);
    assert!((harmonic_grid().integrate(a.histogram.values()) - 1.0).abs() < 1e-12);

    let flat = PotentialSpec::polynomial(vec![0.0]).unwrap();
    let b = simulate(&SimConfig::new(
        flat,
        Grid::continuous(0.0, 1.0, 21).unwrap(),
        SEED,
    ))
    .unwrap();
    assert!(b.tv_distance < 0.02, "{}", b.tv_distance);
}

#[test]
fn identical_configs_give_identical_results() {
    let config = SimConfig::new(harmonic(), harmonic_grid(), SEED);
    let a = simulate(&config).unwrap();
    let b = simulate(&config).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let config = SimConfig::new(harmonic(), harmonic_grid(), SEED);
    let pooled = simulate(&config).unwrap();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| simulate(&config).unwrap());
    assert_eq!(pooled, single);
}

#[test]
fn tv_distance_shrinks_with_budget() {
    // Mean and spread over seeds at each budget; later budgets may not be
    // worse than earlier ones by more than twice the spread.
    let budgets = [10_000u64, 40_000, 160_000];
    let stats: Vec<(f64, f64)> = budgets
        .iter()
        .map(|&n_steps| {
            let tvs: Vec<f64> = (0..8)
                .map(|seed| {
                    let mut c = SimConfig::new(harmonic(), harmonic_grid(), seed);
                    c.n_steps = n_steps;
                    c.burn_in = n_steps / 10;
                    simulate(&c).unwrap().tv_distance
                })
                .collect();
            let mean = tvs.iter().sum::<f64>() / tvs.len() as f64;
            let var = tvs.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (tvs.len() - 1) as f64;
            (mean, var.sqrt())
        })
        .collect();
    for w in stats.windows(2) {
        assert!(w[1].0 <= w[0].0 + 2.0 * w[1].1.max(w[0].1), "{stats:?}");
    }
    assert!(stats[2].0 < stats[0].0, "{stats:?}");
}

#[test]
fn even_potential_gives_centered_histogram() {
    let means: Vec<f64> = (0..8)
        .map(|seed| {
            let mut c = SimConfig::new(harmonic(), harmonic_grid(), 1000 + seed);
            c.n_chains = 16;
            c.n_steps = 50_000;
            c.burn_in = 5_000;
            mean_of(&simulate(&c).unwrap().histogram)
        })
        .collect();
    let n = means.len() as f64;
    let mean = means.iter().sum::<f64>() / n;
    let se = (means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt();
    assert!(mean.abs() <= 3.0 * se, "mean {mean}, se {se}");
}

#[test]
fn smooth_catalog_potentials_reach_boltzmann_density() {
    // The gamma drift has a pole at 0, so its grid starts at 0.01 to keep
    // dt·max|E^c| under the stability limit.
    let cases = [
        (CatalogFamily::Exponential { a: 1.0 }, None),
        (CatalogFamily::Exponential { a: 2.0 }, None),
        (
            CatalogFamily::Normal {
                mu: 0.0,
                sigma: 1.0,
            },
            None,
        ),
        (
            CatalogFamily::Normal {
                mu: 2.0,
                sigma: 0.5,
            },
            None,
        ),
        (CatalogFamily::LinearConstant { a: 2.0, b: 1.0 }, None),
        (
            CatalogFamily::Gamma {
                alpha: 2.0,
                beta: 1.0,
            },
            Some((0.01, 32.0)),
        ),
        (
            CatalogFamily::Gamma {
                alpha: 3.0,
                beta: 0.5,
            },
            Some((0.01, 24.0)),
        ),
    ];
    for (fam, bounds) in cases {
        let default = fam.default_grid().unwrap();
        let (lo, hi) = bounds.unwrap_or((default.lower(), default.upper()));
        let grid = Grid::continuous(lo, hi, 401).unwrap();
        let r = simulate(&SimConfig::new(PotentialSpec::Analytic(fam), grid, SEED)).unwrap();
        assert!(r.tv_distance < 0.05, "{fam:?}: {}", r.tv_distance);
    }
}

#[test]
fn tabulated_potentials_use_interpolated_forces() {
    let grid = harmonic_grid();
    let values = grid.points().iter().map(|x| 0.5 * x * x).collect();
    let u = PotentialSpec::tabulated(grid.clone(), values).unwrap();
    let r = simulate(&SimConfig::new(u, grid, SEED)).unwrap();
    assert!(r.tv_distance < 0.03, "{}", r.tv_distance);
}
