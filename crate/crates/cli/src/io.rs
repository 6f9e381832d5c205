//! Plain-text CSV serialization of states, fields and reports.
//!
//! Every file opens with `#`-prefixed `key=value` lines (`kind`, `label`,
//! `M`, `L`, `hbar`, `sign_ledger`), followed by a column-title line and data
//! rows. Numbers use 17 significant digits, so a write-then-read cycle
//! reproduces every `f64` exactly.

use std::fmt::Write as _;
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64 as C64;
use phasewig_core::conventions::SIGN_LEDGER;
use phasewig_core::{FieldLabel, GridSpec, PhaseSpaceField, WaveFunction};

use crate::error::{CliError, CliResult};

pub const KIND_STATE: &str = "STATE";
pub const KIND_FIELD: &str = "FIELD";
pub const KIND_POTENTIAL: &str = "POTENTIAL";

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Header block shared by every output file.
pub fn header(kind: &str, label: &str, grid: &GridSpec) -> String {
    format!(
        "# kind={kind}\n# label={label}\n# M={}\n# L={}\n# hbar={}\n# sign_ledger={SIGN_LEDGER}\n",
        grid.len(),
        num(grid.half_width()),
        num(grid.hbar())
    )
}

pub fn write_state(psi: &WaveFunction, label: &str) -> String {
    let grid = psi.grid();
    let mut out = header(KIND_STATE, label, grid);
    out.push_str("x,re,im\n");
    for (j, c) in psi.samples().iter().enumerate() {
        let _ = writeln!(out, "{},{},{}", num(grid.x(j)), num(c.re), num(c.im));
    }
    out
}

/// Row `j` is `x_j`; columns hold `Re, Im` of `W(x_j, p_k)` for each `k`.
pub fn write_field(field: &PhaseSpaceField) -> String {
    let grid = field.grid();
    let m = grid.len();
    let mut out = header(KIND_FIELD, field.label().as_str(), grid);
    out.push('x');
    for k in 0..m {
        let _ = write!(out, ",re_{k},im_{k}");
    }
    out.push('\n');
    for (j, row) in field.values().outer_iter().enumerate() {
        out.push_str(&num(grid.x(j)));
        for c in row {
            let _ = write!(out, ",{},{}", num(c.re), num(c.im));
        }
        out.push('\n');
    }
    out
}

/// Parsed header and data rows of a file.
#[derive(Debug, Clone)]
pub struct Document {
    pub kind: String,
    pub label: String,
    pub grid: GridSpec,
    pub rows: Vec<Vec<f64>>,
}

fn bad(source: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{source}: {msg}"))
}

pub fn parse_document(text: &str, source: &str) -> CliResult<Document> {
    let mut keys = std::collections::BTreeMap::new();
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()).peekable();
    while let Some((_, line)) = lines.peek() {
        let Some(rest) = line.strip_prefix('#') else { break };
        if let Some((k, v)) = rest.trim().split_once('=') {
            keys.insert(k.trim().to_string(), v.trim().to_string());
        }
        lines.next();
    }
    let get = |k: &str| keys.get(k).ok_or_else(|| bad(source, format!("missing header key `{k}`")));
    let m: usize = get("M")?.parse().map_err(|e| bad(source, format!("header M: {e}")))?;
    let l: f64 = get("L")?.parse().map_err(|e| bad(source, format!("header L: {e}")))?;
    let hbar: f64 = get("hbar")?.parse().map_err(|e| bad(source, format!("header hbar: {e}")))?;
    let grid = GridSpec::new(m, l, hbar).map_err(|e| bad(source, e))?;
    let kind = get("kind")?.clone();
    let label = keys.get("label").cloned().unwrap_or_default();
    // Column titles.
    lines.next();
    let rows = lines
        .map(|(n, line)| {
            line.split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|e| bad(source, format!("line {}: {e}", n + 1))))
                .collect::<CliResult<Vec<f64>>>()
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Document { kind, label, grid, rows })
}

fn check_shape(doc: &Document, kind: &str, width: usize, source: &str) -> CliResult<()> {
    if doc.kind != kind {
        return Err(bad(source, format!("expected kind {kind}, found {}", doc.kind)));
    }
    let m = doc.grid.len();
    if doc.rows.len() != m {
        return Err(bad(source, format!("expected {m} data rows, found {}", doc.rows.len())));
    }
    let tol = 1e-9 * doc.grid.dx();
    for (j, row) in doc.rows.iter().enumerate() {
        if row.len() != width {
            return Err(bad(source, format!("row {j}: expected {width} columns, found {}", row.len())));
        }
        if (row[0] - doc.grid.x(j)).abs() > tol {
            return Err(bad(source, format!("row {j}: x = {} is not grid node {}", row[0], doc.grid.x(j))));
        }
    }
    Ok(())
}

pub fn parse_state(text: &str, source: &str) -> CliResult<WaveFunction> {
    let doc = parse_document(text, source)?;
    check_shape(&doc, KIND_STATE, 3, source)?;
    let samples = doc.rows.iter().map(|r| C64::new(r[1], r[2])).collect();
    WaveFunction::new(doc.grid, samples).map_err(|e| CliError::from_validation(source, e))
}

pub fn parse_field(text: &str, source: &str) -> CliResult<PhaseSpaceField> {
    let doc = parse_document(text, source)?;
    let m = doc.grid.len();
    check_shape(&doc, KIND_FIELD, 1 + 2 * m, source)?;
    let label = FieldLabel::parse(&doc.label).ok_or_else(|| bad(source, format!("unknown field label `{}`", doc.label)))?;
    let values = Array2::from_shape_fn((m, m), |(j, k)| C64::new(doc.rows[j][1 + 2 * k], doc.rows[j][2 + 2 * k]));
    PhaseSpaceField::new(doc.grid, values, label).map_err(|e| CliError::from_validation(source, e))
}

/// Real potential samples, rows `x,v`.
pub fn parse_potential(text: &str, source: &str) -> CliResult<(GridSpec, Vec<f64>)> {
    let doc = parse_document(text, source)?;
    check_shape(&doc, KIND_POTENTIAL, 2, source)?;
    Ok((doc.grid, doc.rows.iter().map(|r| r[1]).collect()))
}

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn read_state(path: &Path) -> CliResult<WaveFunction> {
    parse_state(&read_text(path)?, &path.display().to_string())
}

pub fn read_field(path: &Path) -> CliResult<PhaseSpaceField> {
    parse_field(&read_text(path)?, &path.display().to_string())
}

pub fn read_potential(path: &Path) -> CliResult<(GridSpec, Vec<f64>)> {
    parse_potential(&read_text(path)?, &path.display().to_string())
}

/// Files produced by a run, written only after everything succeeded.
#[derive(Debug, Default)]
pub struct Outputs {
    pub files: Vec<(String, String)>,
}

impl Outputs {
    pub fn add(&mut self, name: impl Into<String>, contents: String) {
        self.files.push((name.into(), contents));
    }

    pub fn write_all(&self, dir: &Path) -> CliResult<()> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        for (name, contents) in &self.files {
            let path = dir.join(name);
            std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use phasewig_core::states::gaussian_coherent;
    use phasewig_core::xwigner::cross_wigner;
    use phasewig_core::PhaseSpacePoint;

    fn grid() -> GridSpec {
        GridSpec::new(32, 6.0, 0.7).unwrap()
    }

    #[test]
    fn number_format_round_trips() {
        for x in [0.1, -1.0 / 3.0, std::f64::consts::PI, 1e-300, 5e-324, -0.0, 1.7976931348623157e308] {
            assert_eq!(num(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn state_round_trip_is_exact() {
        let psi = gaussian_coherent(PhaseSpacePoint::new(0.3, -0.4), grid()).unwrap();
        let back = parse_state(&write_state(&psi, "psi"), "mem").unwrap();
        assert_eq!(back.grid(), psi.grid());
        assert!(back.samples().iter().zip(psi.samples()).all(|(a, b)| a == b));
    }

    #[test]
    fn field_round_trip_is_exact() {
        let g = grid();
        let a = gaussian_coherent(PhaseSpacePoint::new(0.3, -0.4), g).unwrap();
        let b = gaussian_coherent(PhaseSpacePoint::new(-0.5, 0.2), g).unwrap();
        let w = cross_wigner(&a, &b).unwrap();
        let back = parse_field(&write_field(&w), "mem").unwrap();
        assert_eq!(back.label(), w.label());
        assert_eq!(back.values(), w.values());
    }

    #[test]
    fn header_carries_grid_and_ledger() {
        let text = write_state(&WaveFunction::zeros(grid()), "zero");
        assert!(text.contains("# M=32\n"));
        assert!(text.contains("# sign_ledger="));
        let doc = parse_document(&text, "mem").unwrap();
        assert_eq!(doc.grid, grid());
        assert_eq!(doc.label, "zero");
    }

    #[test]
    fn malformed_files_are_config_errors() {
        let psi = gaussian_coherent(PhaseSpacePoint::ORIGIN, grid()).unwrap();
        let text = write_state(&psi, "psi");
        let truncated: String = text.lines().take(20).map(|l| format!("{l}\n")).collect();
        assert!(matches!(parse_state(&truncated, "mem"), Err(CliError::Config(_))));
        let wrong_kind = text.replace("kind=STATE", "kind=FIELD");
        assert!(matches!(parse_state(&wrong_kind, "mem"), Err(CliError::Config(_))));
        let garbage = format!("{text}1.0,abc,2.0\n");
        assert!(parse_state(&garbage, "mem").is_err());
    }
}
