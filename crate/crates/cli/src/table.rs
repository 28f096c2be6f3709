//! CSV tables: comma separated, header row, LF line endings, values printed
//! with 17 significant digits so they read back bit-exactly.

use std::io::Write;
use std::path::Path;

use equipoise::Grid;

use crate::CliError;

pub const COLUMNS: [&str; 8] = ["x", "f", "U", "U_tilde", "E_s", "E_c", "residual", "mask"];

/// A column of a table to write.
pub enum Column<'a> {
    Real(&'static str, &'a [f64]),
    Mask(&'a [bool]),
}

pub fn format_real(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        // Adding zero turns −0 into +0.
        format!("{:.16e}", v + 0.0)
    }
}

/// Renders the table; every column must have `rows` entries.
pub fn render(columns: &[Column]) -> String {
    let rows = match &columns[0] {
        Column::Real(_, v) => v.len(),
        Column::Mask(m) => m.len(),
    };
    let mut out = String::new();
    let header: Vec<&str> = columns
        .iter()
        .map(|c| match c {
            Column::Real(name, _) => *name,
            Column::Mask(_) => "mask",
        })
        .collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for i in 0..rows {
        let cells: Vec<String> = columns
            .iter()
            .map(|c| match c {
                Column::Real(_, v) => format_real(v[i]),
                Column::Mask(m) => if m[i] { "1" } else { "0" }.to_string(),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => match std::io::stdout().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                Err(CliError::Input(format!("cannot write to stdout: {e}")))
            }
            _ => Ok(()),
        },
    }
}

/// A parsed table with named real columns.
#[derive(Debug)]
pub struct Table {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn read(path: &Path) -> Result<Table, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Table::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Table, String> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let names: Vec<String> = reader
            .headers()
            .map_err(|e| format!("bad header: {e}"))?
            .iter()
            .map(|h| h.trim().to_string())
            .collect();
        if names.iter().all(|n| n.is_empty()) {
            return Err("missing header row".into());
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(format!("duplicate column '{n}'"));
            }
        }
        let mut columns = vec![Vec::new(); names.len()];
        for (row, record) in reader.records().enumerate() {
            let record = record.map_err(|e| format!("row {}: {e}", row + 2))?;
            for (j, cell) in record.iter().enumerate() {
                let v: f64 = cell
                    .trim()
                    .parse()
                    .map_err(|_| format!("row {}: '{cell}' is not a number", row + 2))?;
                columns[j].push(v);
            }
        }
        if columns[0].is_empty() {
            return Err("no data rows".into());
        }
        Ok(Table { names, columns })
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
    }

    pub fn first_column(&self) -> &[f64] {
        &self.columns[0]
    }

    /// Rejects headers outside [`COLUMNS`].
    pub fn check_known_columns(&self) -> Result<(), CliError> {
        match self.names.iter().find(|n| !COLUMNS.contains(&n.as_str())) {
            Some(n) => Err(CliError::Input(format!(
                "unknown column '{n}'; expected some of {}",
                COLUMNS.join(", ")
            ))),
            None => Ok(()),
        }
    }

    /// Finite values of a column, or an error naming it.
    pub fn finite_column(&self, name: &str) -> Result<&[f64], CliError> {
        let values = self
            .column(name)
            .ok_or_else(|| CliError::Input(format!("missing column '{name}'")))?;
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(CliError::Input(format!(
                "column '{name}' is not finite in data row {}",
                i + 1
            )));
        }
        Ok(values)
    }

    /// The grid spanned by the `x` column, which must be strictly increasing
    /// and uniformly spaced.
    pub fn grid(&self, support: Support) -> Result<Grid, CliError> {
        let x = self.finite_column("x")?;
        grid_from_points(x, support)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Support {
    /// Lattice when `x` holds consecutive integers, continuous otherwise.
    Auto,
    Continuous,
    Lattice,
}

pub fn grid_from_points(x: &[f64], support: Support) -> Result<Grid, CliError> {
    if x.len() < 2 {
        return Err(CliError::Input("a grid needs at least two x values".into()));
    }
    if let Some(i) = x.windows(2).position(|w| w[1] <= w[0]) {
        return Err(CliError::Input(format!(
            "x column is not strictly increasing at data row {}",
            i + 2
        )));
    }
    let n = x.len();
    let (lower, upper) = (x[0], x[n - 1]);
    let h = (upper - lower) / (n - 1) as f64;
    let scale = lower.abs().max(upper.abs()).max(h);
    if let Some(i) = (0..n).position(|i| (x[i] - (lower + i as f64 * h)).abs() > 1e-9 * scale) {
        return Err(CliError::Input(format!(
            "x column is not uniformly spaced at data row {}",
            i + 1
        )));
    }
    let integral = x.iter().all(|v| v.fract() == 0.0) && (h - 1.0).abs() < 1e-12;
    let lattice = match support {
        Support::Auto => integral,
        Support::Lattice if !integral => {
            return Err(CliError::Input(
                "a lattice x column must hold consecutive integers".into(),
            ))
        }
        Support::Lattice => true,
        Support::Continuous => false,
    };
    let grid = if lattice {
        Grid::lattice(lower as i64, upper as i64)
    } else {
        Grid::continuous(lower, upper, n)
    };
    grid.map_err(CliError::from)
}
