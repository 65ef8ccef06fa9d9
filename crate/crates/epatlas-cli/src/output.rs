//! Report sinks and JSON helpers.
//!
//! Floats are rendered with Rust's shortest round-trip formatting, which
//! parses back to the identical IEEE-754 double in any language — the
//! full-precision requirement without 17-digit noise.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use num_complex::Complex64;

use epatlas_core::linalg::Mat;
use epatlas_core::Error;

/// Writes the report to stdout or to `--out`.
pub struct Sink {
    out: Box<dyn Write>,
}

impl Sink {
    pub fn new(path: Option<PathBuf>) -> epatlas_core::Result<Sink> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(&p).map_err(|e| {
                Error::Parse(format!("cannot create {}: {e}", p.display()))
            })?)),
            None => Box::new(std::io::stdout()),
        };
        Ok(Sink { out })
    }

    pub fn line(&mut self, text: &str) -> epatlas_core::Result<()> {
        writeln!(self.out, "{text}").map_err(|e| Error::Parse(format!("write failed: {e}")))
    }

    pub fn json(&mut self, value: &serde_json::Value) -> epatlas_core::Result<()> {
        let text = serde_json::to_string_pretty(value)
            .map_err(|e| Error::Parse(format!("serialization failed: {e}")))?;
        self.line(&text)
    }

    pub fn finish(mut self) -> epatlas_core::Result<()> {
        self.out
            .flush()
            .map_err(|e| Error::Parse(format!("flush failed: {e}")))
    }
}

pub fn complex_pair(z: &Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Shortest exact decimal for CSV cells: positional in the human range,
/// scientific outside it (Rust's positional Display would spell 1e-300 out
/// with three hundred zeros). Either form parses back to the same double.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs();
    if (1e-4..1e15).contains(&mag) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn matrix_json(m: &Mat) -> serde_json::Value {
    serde_json::json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": m.entries().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
    })
}
