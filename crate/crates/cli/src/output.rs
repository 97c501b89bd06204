//! Row-oriented output shared by every command.

use std::io::Write;
use std::path::Path;

use anyhow::Result;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One CSV row. Column order is fixed; `phi_closed` is present only for
/// examples with a closed form.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct OutputRecord {
    pub x: String,
    pub phi: Option<f64>,
    pub fd: Option<f64>,
    pub ratio: Option<f64>,
    pub bound_lhs: Option<f64>,
    pub bound_rhs: Option<f64>,
    pub margin: Option<f64>,
}

pub fn fmt_x(x: &[f64]) -> String {
    x.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(";")
}

pub fn write_csv<W: Write>(w: W, rows: &[OutputRecord], closed: Option<&[f64]>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["x", "phi", "fd", "ratio", "bound_lhs", "bound_rhs", "margin"];
    if closed.is_some() {
        header.push("phi_closed");
    }
    out.write_record(&header)?;
    let cell = |v: Option<f64>| v.map(|v| format!("{v:e}")).unwrap_or_default();
    for (i, r) in rows.iter().enumerate() {
        let mut rec = vec![r.x.clone(), cell(r.phi), cell(r.fd), cell(r.ratio), cell(r.bound_lhs), cell(r.bound_rhs), cell(r.margin)];
        if let Some(c) = closed {
            rec.push(cell(c.get(i).copied()));
        }
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_json<W: Write, T: Serialize>(mut w: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

/// Runs `f` against `--out` or stdout.
pub fn with_sink(out: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(p) => {
            let mut file = std::io::BufWriter::new(std::fs::File::create(p)?);
            f(&mut file)?;
            file.flush()?;
            Ok(())
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)
        }
    }
}
