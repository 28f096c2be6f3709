//! JSON input files, tagged by `kind`.
//!
//! ```json
//! {"kind": "potential", "potential": {"family": "normal", "mu": 0, "sigma": 1},
//!  "grid": {"support": "continuous", "lower": -8, "upper": 8, "n_points": 4001}}
//! ```
//!
//! A potential may also be `{"family": "tabulated", "csv": "u.csv"}`; the
//! file's `x` column gives the grid and its `U` (or `U_tilde`) column the
//! values. Relative paths resolve against the input file's directory.

use std::path::{Path, PathBuf};

use equipoise::{Grid, MaxEntProblem, PotentialSpec, SimConfig};
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::table::{Support, Table};
use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InputFile {
    Grid {
        grid: Grid,
    },
    Potential {
        potential: PotentialSpec,
        #[serde(default)]
        grid: Option<Grid>,
    },
    MaxentProblem {
        problem: MaxEntProblem,
    },
    SimConfig {
        config: SimConfig,
    },
}

impl InputFile {
    pub fn read(path: &Path) -> Result<InputFile, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        InputFile::parse(&text, &base)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str, base: &Path) -> Result<InputFile, String> {
        let mut value: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        resolve_tabulated(&mut value, base)?;
        serde_json::from_value(value).map_err(|e| e.to_string())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            InputFile::Grid { .. } => "grid",
            InputFile::Potential { .. } => "potential",
            InputFile::MaxentProblem { .. } => "maxent_problem",
            InputFile::SimConfig { .. } => "sim_config",
        }
    }
}

pub fn unexpected_kind(file: &InputFile, expected: &str) -> CliError {
    CliError::Input(format!(
        "expected a input file of kind '{expected}', found '{}'",
        file.kind()
    ))
}

// Replaces every `{"family": "tabulated", "csv": path}` object with its
// inline `{"family": "tabulated", "grid": …, "values": […]}` form.
fn resolve_tabulated(value: &mut Value, base: &Path) -> Result<(), String> {
    match value {
        Value::Object(map) => {
            let is_csv = map.get("family").and_then(Value::as_str) == Some("tabulated")
                && map.contains_key("csv");
            if is_csv {
                *value = Value::Object(inline_tabulated(map, base)?);
                return Ok(());
            }
            for v in map.values_mut() {
                resolve_tabulated(v, base)?;
            }
            Ok(())
        }
        Value::Array(items) => items
            .iter_mut()
            .try_for_each(|v| resolve_tabulated(v, base)),
        _ => Ok(()),
    }
}

fn inline_tabulated(map: &Map<String, Value>, base: &Path) -> Result<Map<String, Value>, String> {
    if let Some(extra) = map
        .keys()
        .find(|k| !matches!(k.as_str(), "family" | "csv" | "support"))
    {
        return Err(format!("unknown field '{extra}' in tabulated potential"));
    }
    let csv = map["csv"].as_str().ok_or("'csv' must be a path string")?;
    let support = match map.get("support").map(|s| s.as_str()) {
        None => Support::Auto,
        Some(Some("continuous")) => Support::Continuous,
        Some(Some("lattice")) => Support::Lattice,
        Some(_) => return Err("'support' must be \"continuous\" or \"lattice\"".into()),
    };
    let path = resolve_path(base, csv);
    let (grid, values) = read_potential_csv(&path, support).map_err(|e| e.to_string())?;
    let mut out = Map::new();
    out.insert("family".into(), "tabulated".into());
    out.insert(
        "grid".into(),
        serde_json::to_value(&grid).map_err(|e| e.to_string())?,
    );
    out.insert("values".into(), values.into());
    Ok(out)
}

fn resolve_path(base: &Path, p: &str) -> PathBuf {
    let p = Path::new(p);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

/// Grid and values of a tabulated potential CSV (`x` plus `U` or `U_tilde`).
pub fn read_potential_csv(path: &Path, support: Support) -> Result<(Grid, Vec<f64>), CliError> {
    let table = Table::read(path)?;
    table.check_known_columns()?;
    let grid = table.grid(support)?;
    let name = ["U", "U_tilde"]
        .into_iter()
        .find(|n| table.column(n).is_some())
        .ok_or_else(|| {
            CliError::Input(format!(
                "{}: needs a 'U' or 'U_tilde' column",
                path.display()
            ))
        })?;
    Ok((grid, table.finite_column(name)?.to_vec()))
}
