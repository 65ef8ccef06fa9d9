//! Matrix file formats.
//!
//! JSON: `{"rows": n, "cols": n, "entries": [[re, im], ...]}` row-major.
//! CSV: one line `i,j,re,im` per entry, 0-based indices, no header; every
//! cell must appear exactly once.

use num_complex::Complex64;
use serde::Deserialize;

use super::Mat;
use crate::{Error, Result};

#[derive(Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

pub fn matrix_from_json(text: &str) -> Result<Mat> {
    let parsed: MatrixJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
    let entries: Vec<Complex64> = parsed
        .entries
        .iter()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    Mat::from_entries(parsed.rows, parsed.cols, &entries)
}

pub fn matrix_to_json(m: &Mat) -> String {
    let entries: Vec<[f64; 2]> = m.entries().iter().map(|z| [z.re, z.im]).collect();
    serde_json::json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": entries,
    })
    .to_string()
}

pub fn matrix_from_csv(text: &str) -> Result<Mat> {
    let mut cells: Vec<(usize, usize, Complex64)> = Vec::new();
    let mut max_row = 0usize;
    let mut max_col = 0usize;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(Error::Parse(format!(
                "line {}: expected `i,j,re,im`, got {} fields",
                lineno + 1,
                fields.len()
            )));
        }
        let parse_idx = |s: &str, what: &str| -> Result<usize> {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(format!("line {}: bad {} index `{}`", lineno + 1, what, s)))
        };
        let parse_val = |s: &str, what: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::Parse(format!("line {}: bad {} value `{}`", lineno + 1, what, s)))
        };
        let i = parse_idx(fields[0], "row")?;
        let j = parse_idx(fields[1], "col")?;
        let re = parse_val(fields[2], "re")?;
        let im = parse_val(fields[3], "im")?;
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::Parse(format!(
                "line {}: non-finite entry at cell ({i},{j})",
                lineno + 1
            )));
        }
        max_row = max_row.max(i);
        max_col = max_col.max(j);
        cells.push((i, j, Complex64::new(re, im)));
    }
    if cells.is_empty() {
        return Err(Error::Parse("empty CSV matrix".into()));
    }
    let rows = max_row + 1;
    let cols = max_col + 1;
    if cells.len() != rows * cols {
        return Err(Error::Parse(format!(
            "expected {} cells for a {}x{} matrix, got {}",
            rows * cols,
            rows,
            cols,
            cells.len()
        )));
    }
    let mut seen = vec![false; rows * cols];
    let mut m = Mat::zeros(rows, cols);
    for (i, j, z) in cells {
        if seen[i * cols + j] {
            return Err(Error::Parse(format!("duplicate cell ({i},{j})")));
        }
        seen[i * cols + j] = true;
        m[(i, j)] = z;
    }
    Ok(m)
}

pub fn matrix_to_csv(m: &Mat) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let z = m[(i, j)];
            out.push_str(&format!("{},{},{},{}\n", i, j, z.re, z.im));
        }
    }
    out
}
