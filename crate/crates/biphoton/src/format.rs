//! CSV and JSON text formats for spectra, scan tables and amplitude maps.
//!
//! Numbers are written with 17 significant digits so every `f64` survives a
//! round trip through text. CSV output is comma-separated with LF line
//! endings and a header row.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use biphoton_core::{BiphotonSpectrum, FrequencyGrid};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::scans::{ScanResult, ScanRow};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("line {line}, column {col}: {reason}")]
    Cell {
        line: usize,
        col: usize,
        reason: String,
    },
    #[error("invalid spectrum: {0}")]
    Spectrum(#[from] biphoton_core::Error),
}

fn cell(line: usize, col: usize, reason: impl Into<String>) -> FormatError {
    FormatError::Cell {
        line,
        col,
        reason: reason.into(),
    }
}

/// `x` with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// `re+imj` literal.
pub fn fmt_complex(z: Complex64) -> String {
    format!("{:.16e}{:+.16e}j", z.re, z.im)
}

/// Parses `re+imj`, `re-imj`, a bare real or a bare `imj`.
pub fn parse_complex(text: &str) -> Option<Complex64> {
    let s = text.trim();
    let Some(body) = s.strip_suffix(['j', 'J']) else {
        return s.parse().ok().map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re: f64 = body[..k].parse().ok()?;
            let im: f64 = body[k..].parse().ok()?;
            Some(Complex64::new(re, im))
        }
        None => body.parse().ok().map(|im| Complex64::new(0.0, im)),
    }
}

const SPECTRUM_CORNER: &str = "omega";

/// Writes the amplitude matrix with a header row and a header column of ω.
pub fn write_spectrum_csv<W: Write>(s: &BiphotonSpectrum, mut out: W) -> io::Result<()> {
    let g = s.grid();
    let mut line = String::from(SPECTRUM_CORNER);
    for w in g.omegas() {
        line.push(',');
        line.push_str(&fmt_f64(w));
    }
    writeln!(out, "{line}")?;
    for i in 0..g.len() {
        line.clear();
        line.push_str(&fmt_f64(g.omega(i)));
        for j in 0..g.len() {
            line.push(',');
            line.push_str(&fmt_complex(s.get(i, j)));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Rebuilds the grid from header values; they must be odd in number and uniform.
fn grid_from_axis(axis: &[f64]) -> Result<FrequencyGrid, FormatError> {
    let n = axis.len();
    if n < 3 || n.is_multiple_of(2) {
        return Err(cell(
            1,
            2,
            format!("odd point count required (at least 3), got {n}"),
        ));
    }
    let grid = FrequencyGrid::new(axis[(n - 1) / 2], 0.5 * (axis[n - 1] - axis[0]), n)
        .map_err(|e| cell(1, 2, e.to_string()))?;
    let tol = 1e-6 * grid.spacing();
    for (k, &w) in axis.iter().enumerate() {
        if (w - grid.omega(k)).abs() > tol {
            return Err(cell(
                1,
                k + 2,
                format!("frequency axis is not uniform at {w}"),
            ));
        }
    }
    Ok(grid)
}

/// Parses a spectrum CSV; errors carry the 1-based line and column of the
/// first offending cell.
pub fn parse_spectrum_csv(text: &str) -> Result<BiphotonSpectrum, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let Some((_, header)) = lines.next() else {
        return Err(cell(1, 1, "empty file"));
    };
    let mut fields = header.split(',');
    fields.next();
    let axis = fields
        .enumerate()
        .map(|(k, f)| {
            f.trim()
                .parse::<f64>()
                .map_err(|_| cell(1, k + 2, format!("bad frequency {f:?}")))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    let grid = grid_from_axis(&axis)?;
    let n = grid.len();
    let mut amps = Vec::with_capacity(n * n);
    let mut rows = 0;
    for (idx, line) in lines {
        let lineno = idx + 1;
        if rows == n {
            return Err(cell(lineno, 1, format!("more than {n} data rows")));
        }
        let mut fields = line.split(',');
        let label = fields.next().unwrap_or_default();
        let w: f64 = label
            .trim()
            .parse()
            .map_err(|_| cell(lineno, 1, format!("bad frequency {label:?}")))?;
        if (w - axis[rows]).abs() > 1e-6 * grid.spacing() {
            return Err(cell(
                lineno,
                1,
                format!(
                    "row frequency {w} does not match column header {}",
                    axis[rows]
                ),
            ));
        }
        let mut count = 0;
        for (k, f) in fields.enumerate() {
            if k == n {
                return Err(cell(lineno, k + 2, format!("more than {n} cells")));
            }
            let z = parse_complex(f)
                .ok_or_else(|| cell(lineno, k + 2, format!("bad complex literal {f:?}")))?;
            if !z.is_finite() {
                return Err(cell(lineno, k + 2, "non-finite amplitude"));
            }
            amps.push(z);
            count += 1;
        }
        if count != n {
            return Err(cell(
                lineno,
                count + 2,
                format!("expected {n} cells, found {count}"),
            ));
        }
        rows += 1;
    }
    if rows != n {
        return Err(cell(
            rows + 2,
            1,
            format!("expected {n} data rows, found {rows}"),
        ));
    }
    Ok(BiphotonSpectrum::from_amplitudes(grid, amps)?)
}

pub fn read_spectrum_file(path: &Path) -> Result<BiphotonSpectrum, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_spectrum_csv(&text)
}

/// A named table column drawn from scan rows.
pub struct Column {
    pub name: &'static str,
    pub get: fn(&ScanRow) -> Option<f64>,
}

pub const DIP_COLUMNS: [Column; 4] = [
    Column {
        name: "param",
        get: |r| Some(r.param),
    },
    Column {
        name: "P_numeric",
        get: |r| r.p_numeric,
    },
    Column {
        name: "P_closed",
        get: |r| r.p_closed,
    },
    Column {
        name: "w_antisym",
        get: |r| r.w_antisym,
    },
];

pub const SHIH_COLUMNS: [Column; 4] = [
    Column {
        name: "param",
        get: |r| Some(r.param),
    },
    Column {
        name: "P_numeric",
        get: |r| r.p_numeric,
    },
    Column {
        name: "P_exact",
        get: |r| r.p_closed,
    },
    Column {
        name: "P_reduced",
        get: |r| r.p_reduced,
    },
];

/// Scan table as CSV; absent values are empty fields.
pub fn scan_csv(r: &ScanResult, columns: &[Column]) -> String {
    let mut out = String::new();
    let names: Vec<&str> = columns.iter().map(|c| c.name).collect();
    out.push_str(&names.join(","));
    out.push('\n');
    for row in &r.rows {
        let fields: Vec<String> = columns
            .iter()
            .map(|c| (c.get)(row).map(fmt_f64).unwrap_or_default())
            .collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// `{spec, rows, metadata}` with one object per row.
pub fn scan_json(r: &ScanResult, columns: &[Column]) -> Value {
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = columns
                .iter()
                .map(|c| (c.name.to_string(), json!((c.get)(row))))
                .collect();
            Value::Object(obj)
        })
        .collect();
    json!({
        "spec": r.spec,
        "rows": rows,
        "metadata": r.metadata,
    })
}

/// Real matrix with an axis header row and header column, as CSV.
pub fn matrix_csv(corner: &str, axis: &[f64], values: &[f64]) -> String {
    let n = axis.len();
    let mut out = String::from(corner);
    for a in axis {
        let _ = write!(out, ",{}", fmt_f64(*a));
    }
    out.push('\n');
    for (i, a) in axis.iter().enumerate() {
        out.push_str(&fmt_f64(*a));
        for v in &values[i * n..(i + 1) * n] {
            let _ = write!(out, ",{}", fmt_f64(*v));
        }
        out.push('\n');
    }
    out
}

/// Grid data object for JSON output.
#[derive(Debug, Serialize)]
pub struct MatrixData<'a> {
    pub axis_label: &'a str,
    pub axis: &'a [f64],
    pub rows: Vec<&'a [f64]>,
}

impl<'a> MatrixData<'a> {
    pub fn new(axis_label: &'a str, axis: &'a [f64], values: &'a [f64]) -> Self {
        let n = axis.len();
        Self {
            axis_label,
            axis,
            rows: values.chunks(n).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> BiphotonSpectrum {
        let g = FrequencyGrid::new(2.5, 1.5, 5).unwrap();
        BiphotonSpectrum::from_function(g, |a, b| Complex64::new(a - b, a * b - 0.3)).unwrap()
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1.5+2j"), Some(Complex64::new(1.5, 2.0)));
        assert_eq!(
            parse_complex("-1.5e-3-2.0E+01j"),
            Some(Complex64::new(-1.5e-3, -20.0))
        );
        assert_eq!(parse_complex(" 3 "), Some(Complex64::new(3.0, 0.0)));
        assert_eq!(parse_complex("-4j"), Some(Complex64::new(0.0, -4.0)));
        assert_eq!(parse_complex("1+2i"), None);
        assert_eq!(parse_complex("abc"), None);
        assert_eq!(
            parse_complex(&fmt_complex(Complex64::new(-0.1, 3e-300))),
            Some(Complex64::new(-0.1, 3e-300))
        );
    }

    #[test]
    fn spectrum_round_trip() {
        let s = sample();
        let mut buf = Vec::new();
        write_spectrum_csv(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("omega,1.0000000000000000e0,"));
        assert!(!text.contains('\r'));
        let back = parse_spectrum_csv(&text).unwrap();
        assert_eq!(back.grid().len(), 5);
        for (a, b) in back.amplitudes().iter().zip(s.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn bad_cell_is_located() {
        let mut buf = Vec::new();
        write_spectrum_csv(&sample(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        let mut cells: Vec<String> = lines[3].split(',').map(String::from).collect();
        cells[4] = "oops".into();
        lines[3] = cells.join(",");
        match parse_spectrum_csv(&lines.join("\n")) {
            Err(FormatError::Cell { line, col, .. }) => assert_eq!((line, col), (4, 5)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            parse_spectrum_csv(""),
            Err(FormatError::Cell { line: 1, .. })
        ));
        // even axis
        let err = parse_spectrum_csv("omega,0,1\n0,1,1\n1,1,1\n").unwrap_err();
        assert!(err.to_string().contains("odd point count"));
        // missing row
        let err = parse_spectrum_csv("omega,0,1,2\n0,1,1,1\n1,1,1,1\n").unwrap_err();
        assert!(err.to_string().contains("expected 3 data rows"), "{err}");
        // short row
        let err = parse_spectrum_csv("omega,0,1,2\n0,1,1,1\n1,1,1\n2,1,1,1\n").unwrap_err();
        assert!(
            matches!(
                err,
                FormatError::Cell {
                    line: 3,
                    col: 4,
                    ..
                }
            ),
            "{err}"
        );
        // non-uniform axis
        let err = parse_spectrum_csv("omega,0,1,3\n0,1,1,1\n1,1,1,1\n3,1,1,1\n").unwrap_err();
        assert!(err.to_string().contains("not uniform"));
        // all zero
        let err = parse_spectrum_csv("omega,0,1,2\n0,0,0,0\n1,0,0,0\n2,0,0,0\n").unwrap_err();
        assert!(matches!(
            err,
            FormatError::Spectrum(biphoton_core::Error::DegenerateSpectrum)
        ));
    }

    proptest! {
        #[test]
        fn seventeen_digits_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }
}
