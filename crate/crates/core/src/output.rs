//! Self-describing CSV output.
//!
//! Every file starts with `# key=value` metadata lines (always including the
//! crate version), then one header row, then data rows. Floats are written in
//! Rust's shortest round-trip form so values re-parse exactly.

use std::fmt::Display;
use std::io::{self, Write};

use num_complex::Complex64;

use crate::avm::AvmFunctionals;
use crate::consistency::BranchPoint;
use crate::meanfield::{Diagnostics, SpectralState};
use crate::particles::{EmpiricalDensity, EnsembleDiagnostics};

pub const BRANCH_COLUMNS: &[&str] = &["r", "k", "mu", "c", "residual"];
pub const PDE_COLUMNS: &[&str] = &["t", "r0", "psi", "speed_est"];
pub const PARTICLE_COLUMNS: &[&str] = &["t", "R", "Psi"];
pub const HISTOGRAM_COLUMNS: &[&str] = &["bin_center", "density"];
pub const FUNCTIONAL_COLUMNS: &[&str] = &["k", "r", "c0", "c1", "s1", "cal_c1", "cal_s1", "cal_t1", "cal_r1"];
pub const COEFFICIENT_COLUMNS: &[&str] = &["n", "re", "im"];

/// Ordered `key=value` pairs for the header block.
#[derive(Debug, Clone, PartialEq)]
pub struct Metadata(Vec<(String, String)>);

impl Default for Metadata {
    fn default() -> Self {
        Self(vec![(
            "version".into(),
            format!("sakaguchi {}", env!("CARGO_PKG_VERSION")),
        )])
    }
}

impl Metadata {
    pub fn new(kind: &str) -> Self {
        let mut m = Self::default();
        m.push("kind", kind);
        m
    }

    pub fn push(&mut self, key: &str, value: impl Display) -> &mut Self {
        let value = value.to_string().replace('\n', " ");
        self.0.push((key.to_owned(), value));
        self
    }

    pub fn with(mut self, key: &str, value: impl Display) -> Self {
        self.push(key, value);
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.0
    }

    pub fn write<W: Write>(&self, w: &mut W) -> io::Result<()> {
        for (k, v) in &self.0 {
            writeln!(w, "# {k}={v}")?;
        }
        Ok(())
    }
}

/// Metadata block, header and rows of plain numbers.
pub fn write_table<W, R>(w: &mut W, meta: &Metadata, columns: &[&str], rows: R) -> io::Result<()>
where
    W: Write,
    R: IntoIterator,
    R::Item: AsRef<[f64]>,
{
    meta.write(w)?;
    writeln!(w, "{}", columns.join(","))?;
    for row in rows {
        let row = row.as_ref();
        debug_assert_eq!(row.len(), columns.len());
        let cells: Vec<String> = row.iter().map(f64::to_string).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn write_branch<W: Write>(w: &mut W, meta: &Metadata, points: &[BranchPoint]) -> io::Result<()> {
    write_table(
        w,
        meta,
        BRANCH_COLUMNS,
        points.iter().map(|p| [p.r, p.k, p.mu, p.c, p.residual]),
    )
}

pub fn write_pde<W: Write>(w: &mut W, meta: &Metadata, diag: &Diagnostics) -> io::Result<()> {
    write_table(
        w,
        meta,
        PDE_COLUMNS,
        diag.records.iter().map(|r| [r.t, r.r0, r.psi, r.speed_est]),
    )
}

pub fn write_particles<W: Write>(w: &mut W, meta: &Metadata, diag: &EnsembleDiagnostics) -> io::Result<()> {
    write_table(
        w,
        meta,
        PARTICLE_COLUMNS,
        diag.records.iter().map(|r| [r.t, r.r, r.psi]),
    )
}

pub fn write_histogram<W: Write>(w: &mut W, meta: &Metadata, emp: &EmpiricalDensity) -> io::Result<()> {
    write_table(
        w,
        meta,
        HISTOGRAM_COLUMNS,
        emp.centers.iter().zip(&emp.density).map(|(&c, &d)| [c, d]),
    )
}

pub fn functional_row(k: f64, r: f64, f: &AvmFunctionals) -> [f64; 9] {
    [k, r, f.c0, f.c1, f.s1, f.cal_c1, f.cal_s1, f.cal_t1, f.cal_r1]
}

pub fn write_functionals<W: Write>(w: &mut W, meta: &Metadata, rows: &[[f64; 9]]) -> io::Result<()> {
    write_table(w, meta, FUNCTIONAL_COLUMNS, rows)
}

/// Coefficient table `n, re, im` for `n = 0..=N`.
pub fn write_coefficients<W: Write>(w: &mut W, meta: &Metadata, state: &SpectralState) -> io::Result<()> {
    write_table(
        w,
        meta,
        COEFFICIENT_COLUMNS,
        state
            .coefficients()
            .iter()
            .enumerate()
            .map(|(n, c): (usize, &Complex64)| [n as f64, c.re, c.im]),
    )
}

/// Parsed CSV: metadata pairs, column names and numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// Read back a file written by [`write_table`].
pub fn parse_table(text: &str) -> Result<Table, String> {
    let mut metadata = Vec::new();
    let mut lines = text.lines().peekable();
    while let Some(line) = lines.peek() {
        let Some(rest) = line.strip_prefix("# ") else { break };
        let (k, v) = rest
            .split_once('=')
            .ok_or_else(|| format!("bad metadata line {line:?}"))?;
        metadata.push((k.to_owned(), v.to_owned()));
        lines.next();
    }
    let header = lines.next().ok_or("missing header row")?;
    let columns: Vec<String> = header.split(',').map(str::to_owned).collect();
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split(',')
                .map(|c| c.parse::<f64>().map_err(|e| format!("{c:?}: {e}")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(bad) = rows.iter().find(|r| r.len() != columns.len()) {
        return Err(format!("row has {} cells, header has {}", bad.len(), columns.len()));
    }
    Ok(Table {
        metadata,
        columns,
        rows,
    })
}
