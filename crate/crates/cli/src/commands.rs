use std::path::Path;

use equipoise::{
    catalog_density, catalog_intensity, catalog_normalized_potential, causal_intensity,
    decompose_samples, density_from_intensity, normalize, normalized_potential, pearson_density,
    pearson_intensity_table, potential_of_density, sample_u_moment, simulate as run_simulation,
    solve_maxent, stochastic_intensity, CatalogFamily, EquilibriumDensity, Estimator, Grid,
    IntensityKind, IntensityTable, LinearFit, MaxEntProblem, PearsonParams, PearsonSign,
    PotentialSpec,
};
use serde::Serialize;

use crate::expr::parse_polynomial;
use crate::input::{unexpected_kind, InputFile};
use crate::table::{render, write_output, Column, Support, Table};
use crate::{
    CatalogArgs, CliError, DecomposeArgs, EstimatorArg, FamilyArg, GridArgs, MaxentArgs, SignArg,
    SimulateArgs, Target, TransformArgs,
};

const DEFAULT_POINTS: usize = 4001;

type Result<T> = std::result::Result<T, CliError>;

/// Grid from flags; `default` applies when no bounds are given.
fn resolve_grid(args: &GridArgs, default: Option<Grid>, lattice: bool) -> Result<Grid> {
    if let Some(path) = &args.grid_file {
        let grid = match InputFile::read(path)? {
            InputFile::Grid { grid } => grid,
            other => return Err(unexpected_kind(&other, "grid")),
        };
        if lattice && !grid.is_lattice() {
            return Err(CliError::Input("this input needs a lattice grid".into()));
        }
        return Ok(grid);
    }
    let support = match (args.support, lattice) {
        (Some(Support::Continuous), true) => {
            return Err(CliError::Input("this input needs a lattice grid".into()))
        }
        (_, true) => Support::Lattice,
        (Some(s), false) => s,
        (None, false) => Support::Continuous,
    };
    let (lower, upper) = match (args.lower, args.upper, default) {
        (None, None, Some(grid)) if args.points.is_none() => return Ok(grid),
        (None, None, Some(grid)) => (grid.lower(), grid.upper()),
        (Some(l), Some(u), _) => (l, u),
        (None, None, None) => {
            return Err(CliError::Input(
                "grid bounds are required: --lower and --upper".into(),
            ))
        }
        _ => {
            return Err(CliError::Input(
                "give both --lower and --upper, or neither".into(),
            ))
        }
    };
    let grid = match support {
        Support::Lattice => {
            if lower.fract() != 0.0 || upper.fract() != 0.0 {
                return Err(CliError::Input("lattice bounds must be integers".into()));
            }
            Grid::lattice(lower as i64, upper as i64)?
        }
        _ => Grid::continuous(lower, upper, args.points.unwrap_or(DEFAULT_POINTS))?,
    };
    Ok(grid)
}

fn require(value: Option<f64>, flag: &str, family: &str) -> Result<f64> {
    value.ok_or_else(|| CliError::Input(format!("--{flag} is required for family {family}")))
}

fn catalog_family(args: &CatalogArgs) -> Result<CatalogFamily> {
    let family = match args.family {
        FamilyArg::Uniform => CatalogFamily::UniformLattice {
            n: args
                .n
                .ok_or_else(|| CliError::Input("--n is required for family uniform".into()))?,
        },
        FamilyArg::Exponential => CatalogFamily::Exponential {
            a: require(args.a, "a", "exponential")?,
        },
        FamilyArg::Normal => CatalogFamily::Normal {
            mu: require(args.mu, "mu", "normal")?,
            sigma: require(args.sigma, "sigma", "normal")?,
        },
        FamilyArg::LinearConstant => CatalogFamily::LinearConstant {
            a: require(args.a, "a", "linear-constant")?,
            b: require(args.b, "b", "linear-constant")?,
        },
        FamilyArg::Poisson => CatalogFamily::Poisson {
            lambda: require(args.lambda, "lambda", "poisson")?,
        },
        FamilyArg::Gamma => CatalogFamily::Gamma {
            alpha: require(args.alpha, "alpha", "gamma")?,
            beta: require(args.beta, "beta", "gamma")?,
        },
        FamilyArg::Pearson => unreachable!("handled separately"),
    };
    family.validate()?;
    Ok(family)
}

fn finite_or_nan(values: &mut [f64], mask: &mut [bool]) {
    for (v, m) in values.iter_mut().zip(mask.iter_mut()) {
        if !v.is_finite() {
            *v = f64::NAN;
            *m = true;
        }
    }
}

pub fn catalog(args: &CatalogArgs) -> Result<()> {
    let (grid, f, u_tilde, e_c, mut mask) = if args.family == FamilyArg::Pearson {
        let sign = match args.sign {
            SignArg::Paper => PearsonSign::Paper,
            SignArg::Standard => PearsonSign::Standard,
        };
        let p = PearsonParams::new(
            require(args.a, "a", "pearson")?,
            require(args.b0, "b0", "pearson")?,
            args.b1.unwrap_or(0.0),
            args.b2.unwrap_or(0.0),
            sign,
        )?;
        let grid = resolve_grid(&args.grid, None, false)?;
        let f = pearson_density(&p, &grid)?;
        let u_tilde = potential_of_density(&f);
        let e_c = pearson_intensity_table(&p, &grid)?;
        let mask: Vec<bool> = u_tilde
            .mask()
            .iter()
            .zip(e_c.mask())
            .map(|(a, b)| *a || *b)
            .collect();
        (
            grid,
            f.values().to_vec(),
            u_tilde.values().to_vec(),
            e_c.values().to_vec(),
            mask,
        )
    } else {
        let family = catalog_family(args)?;
        let grid = resolve_grid(
            &args.grid,
            Some(family.default_grid()?),
            family.is_lattice(),
        )?;
        let points = grid.points();
        let eval = |g: fn(&CatalogFamily, f64) -> equipoise::Result<f64>| -> Result<Vec<f64>> {
            points
                .iter()
                .map(|&x| g(&family, x).map_err(CliError::from))
                .collect()
        };
        let f = eval(catalog_density)?;
        let u_tilde = eval(catalog_normalized_potential)?;
        let e_c = eval(catalog_intensity)?;
        (grid, f, u_tilde, e_c, vec![false; points.len()])
    };
    let (mut u_tilde, mut e_c) = (u_tilde, e_c);
    finite_or_nan(&mut u_tilde, &mut mask);
    finite_or_nan(&mut e_c, &mut mask);
    let x = grid.points();
    let text = render(&[
        Column::Real("x", &x),
        Column::Real("f", &f),
        Column::Real("U_tilde", &u_tilde),
        Column::Real("E_c", &e_c),
        Column::Mask(&mask),
    ]);
    write_output(args.out.as_deref(), &text)
}

enum Source {
    Potential(PotentialSpec, Grid),
    Density(EquilibriumDensity),
    Intensity(IntensityTable),
}

fn is_json(path: &Path) -> Result<bool> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(text.trim_start().starts_with('{'))
}

fn default_grid_of(u: &PotentialSpec) -> Option<Grid> {
    match u {
        PotentialSpec::Analytic(family) => family.default_grid().ok(),
        PotentialSpec::Tabulated(t) => Some(t.grid().clone()),
        _ => None,
    }
}

fn load_source(args: &TransformArgs) -> Result<Source> {
    if is_json(&args.input)? {
        return match InputFile::read(&args.input)? {
            InputFile::Potential { potential, grid } => {
                let lattice = matches!(&potential, PotentialSpec::Analytic(f) if f.is_lattice());
                let grid = match grid {
                    Some(g) => g,
                    None => resolve_grid(&args.grid, default_grid_of(&potential), lattice)?,
                };
                Ok(Source::Potential(potential, grid))
            }
            other => Err(unexpected_kind(&other, "potential")),
        };
    }
    let table = Table::read(&args.input)?;
    table.check_known_columns()?;
    let grid = table.grid(args.grid.support.unwrap_or(Support::Auto))?;
    if let Some(f) = table.column("f") {
        if let Some(i) = f.iter().position(|v| !v.is_finite()) {
            return Err(CliError::Input(format!(
                "column 'f' is not finite in data row {}",
                i + 1
            )));
        }
        return Ok(Source::Density(EquilibriumDensity::from_weights(
            grid,
            f.to_vec(),
        )?));
    }
    for name in ["U", "U_tilde"] {
        if table.column(name).is_some() {
            let values = table.finite_column(name)?.to_vec();
            return Ok(Source::Potential(
                PotentialSpec::tabulated(grid.clone(), values)?,
                grid,
            ));
        }
    }
    for (name, kind) in [
        ("E_c", IntensityKind::Causal),
        ("E_s", IntensityKind::Stochastic),
    ] {
        if let Some(values) = table.column(name) {
            return Ok(Source::Intensity(IntensityTable::new(
                grid,
                values.to_vec(),
                kind,
            )));
        }
    }
    Err(CliError::Input(format!(
        "{}: no f, U, U_tilde, E_c or E_s column",
        args.input.display()
    )))
}

fn density_columns(f: &EquilibriumDensity) -> String {
    let t = potential_of_density(f);
    let x = f.grid().points();
    render(&[
        Column::Real("x", &x),
        Column::Real("f", f.values()),
        Column::Real("U_tilde", t.values()),
        Column::Mask(t.mask()),
    ])
}

fn potential_columns(f: &EquilibriumDensity) -> String {
    let t = potential_of_density(f);
    let x = f.grid().points();
    render(&[
        Column::Real("x", &x),
        Column::Real("U_tilde", t.values()),
        Column::Mask(t.mask()),
    ])
}

fn intensity_columns(e: &IntensityTable) -> String {
    let x = e.grid().points();
    let name = match e.kind() {
        IntensityKind::Causal => "E_c",
        IntensityKind::Stochastic => "E_s",
    };
    render(&[
        Column::Real("x", &x),
        Column::Real(name, e.values()),
        Column::Mask(e.mask()),
    ])
}

pub fn transform(args: &TransformArgs) -> Result<()> {
    let text = match (load_source(args)?, args.to) {
        (Source::Potential(u, grid), Target::Density) => {
            let f = normalize(&u, &grid)?;
            let t = normalized_potential(&u, &grid)?;
            let x = grid.points();
            render(&[
                Column::Real("x", &x),
                Column::Real("f", f.values()),
                Column::Real("U_tilde", t.values()),
                Column::Mask(&f.mask()),
            ])
        }
        (Source::Potential(u, grid), Target::Potential) => {
            let t = normalized_potential(&u, &grid)?;
            let x = grid.points();
            render(&[
                Column::Real("x", &x),
                Column::Real("U_tilde", t.values()),
                Column::Mask(t.mask()),
            ])
        }
        (Source::Potential(u, grid), Target::Intensity) => {
            intensity_columns(&causal_intensity(&u, &grid)?)
        }
        (Source::Density(f), Target::Density) => density_columns(&f),
        (Source::Density(f), Target::Potential) => potential_columns(&f),
        (Source::Density(f), Target::Intensity) => intensity_columns(&stochastic_intensity(&f)),
        (Source::Intensity(e), Target::Density) => density_columns(&density_from_intensity(&e)?),
        (Source::Intensity(e), Target::Potential) => {
            potential_columns(&density_from_intensity(&e)?)
        }
        (Source::Intensity(e), Target::Intensity) => {
            let flipped: Vec<f64> = e.values().iter().map(|v| -v).collect();
            let x = e.grid().points();
            let (es, ec) = match e.kind() {
                IntensityKind::Stochastic => (e.values(), flipped.as_slice()),
                IntensityKind::Causal => (flipped.as_slice(), e.values()),
            };
            render(&[
                Column::Real("x", &x),
                Column::Real("E_s", es),
                Column::Real("E_c", ec),
                Column::Mask(e.mask()),
            ])
        }
    };
    write_output(args.out.as_deref(), &text)
}

fn read_samples(path: &Path) -> Result<Vec<f64>> {
    let table = Table::read(path)?;
    let values = table.column("x").unwrap_or(table.first_column());
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(CliError::Input(format!(
            "{}: sample in data row {} is not finite",
            path.display(),
            i + 1
        )));
    }
    Ok(values.to_vec())
}

fn load_u(arg: &str) -> Result<PotentialSpec> {
    let path = Path::new(arg);
    if arg.ends_with(".json") && path.is_file() {
        return match InputFile::read(path)? {
            InputFile::Potential { potential, .. } => Ok(potential),
            other => Err(unexpected_kind(&other, "potential")),
        };
    }
    let poly = parse_polynomial(arg).map_err(|e| CliError::Input(format!("--u: {e}")))?;
    Ok(PotentialSpec::Polynomial(poly))
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Input(format!("cannot serialize output: {e}")))?;
    text.push('\n');
    write_output(path, &text)
}

pub fn maxent(args: &MaxentArgs) -> Result<()> {
    let mut problem = if let Some(path) = &args.problem {
        match InputFile::read(path)? {
            InputFile::MaxentProblem { problem } => problem,
            other => return Err(unexpected_kind(&other, "maxent_problem")),
        }
    } else {
        let u = load_u(
            args.u
                .as_deref()
                .expect("clap requires --u without --problem"),
        )?;
        let lattice = args.grid.support == Some(Support::Lattice);
        let grid = resolve_grid(&args.grid, None, lattice)?;
        let moment = match (args.moment, &args.samples) {
            (Some(m), _) => m,
            (None, Some(path)) => sample_u_moment(&read_samples(path)?, &u)?,
            (None, None) => {
                return Err(CliError::Input("give --moment or --samples".into()));
            }
        };
        MaxEntProblem::new(u, grid, moment)
    };
    if let Some(v) = args.lambda_init {
        problem.lambda_init = v;
    }
    if let Some(v) = args.tol {
        problem.tol = v;
    }
    if let Some(v) = args.max_iter {
        problem.max_iter = v;
    }
    let solution = solve_maxent(&problem)?;
    if !solution.converged {
        eprintln!(
            "warning: not converged after {} iterations (residual {:e})",
            solution.iterations, solution.residual
        );
    }
    if let Some(out) = &args.out {
        let x = problem.grid.points();
        let text = render(&[
            Column::Real("x", &x),
            Column::Real("f", solution.density.values()),
            Column::Real("U_tilde", solution.normalized_potential.values()),
            Column::Mask(&solution.density.mask()),
        ]);
        write_output(Some(out), &text)?;
    }
    #[derive(Serialize)]
    struct Output<'a> {
        target_moment: f64,
        #[serde(flatten)]
        solution: &'a equipoise::MaxEntSolution,
    }
    write_json(
        args.json.as_deref(),
        &Output {
            target_moment: problem.target_moment,
            solution: &solution,
        },
    )
}

pub fn simulate(args: &SimulateArgs) -> Result<()> {
    let mut config = match InputFile::read(&args.config)? {
        InputFile::SimConfig { config } => config,
        other => return Err(unexpected_kind(&other, "sim_config")),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let result = run_simulation(&config)?;
    if let Some(out) = &args.out {
        let x = config.grid.points();
        let text = render(&[
            Column::Real("x", &x),
            Column::Real("f", result.histogram.values()),
        ]);
        write_output(Some(out), &text)?;
    }
    #[derive(Serialize)]
    struct Output<'a> {
        tv_distance: f64,
        n_samples_used: u64,
        seed: u64,
        rng: &'a str,
        dt: f64,
        n_steps: u64,
        burn_in: u64,
        n_chains: u32,
    }
    write_json(
        args.json.as_deref(),
        &Output {
            tv_distance: result.tv_distance,
            n_samples_used: result.n_samples_used,
            seed: result.seed,
            rng: &result.rng,
            dt: config.dt,
            n_steps: config.n_steps,
            burn_in: config.burn_in,
            n_chains: config.n_chains,
        },
    )
}

pub fn decompose(args: &DecomposeArgs) -> Result<()> {
    let samples = read_samples(&args.samples)?;
    if samples.len() < equipoise::MIN_SAMPLES {
        return Err(equipoise::Error::TooFewSamples {
            got: samples.len(),
            need: equipoise::MIN_SAMPLES,
        }
        .into());
    }
    let lattice = args.grid.support == Some(Support::Lattice);
    let default = if args.grid.lower.is_none() && args.grid.upper.is_none() && !samples.is_empty() {
        let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if lattice {
            Some(Grid::lattice(lo.floor() as i64, hi.ceil() as i64)?)
        } else {
            Some(Grid::continuous(lo, hi, args.grid.points.unwrap_or(1001))?)
        }
    } else {
        None
    };
    let grid = resolve_grid(&args.grid, default, lattice)?;
    let estimator = match args.estimator {
        EstimatorArg::Histogram => Estimator::Histogram { bins: args.bins },
        EstimatorArg::Kernel => Estimator::Kernel {
            bandwidth: args.bandwidth,
        },
    };
    let report = decompose_samples(&samples, &grid, estimator)?;
    if let Some(out) = &args.out {
        let x = grid.points();
        let text = render(&[
            Column::Real("x", &x),
            Column::Real("f", report.density_estimate.values()),
            Column::Real("U_tilde", report.normalized_potential.values()),
            Column::Real("E_s", report.stochastic_intensity.values()),
            Column::Mask(&report.mask),
        ]);
        write_output(Some(out), &text)?;
    }
    let (lo, hi) = report.central_region;
    #[derive(Serialize)]
    struct Output<'a> {
        #[serde(flatten)]
        report: &'a equipoise::DecompositionReport,
        trimmed_fit: Option<LinearFit>,
        trimmed_mean_intensity: Option<f64>,
    }
    write_json(
        args.json.as_deref(),
        &Output {
            report: &report,
            trimmed_fit: report.trimmed_fit().ok(),
            trimmed_mean_intensity: report.mean_intensity(lo, hi).ok(),
        },
    )
}
