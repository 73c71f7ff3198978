use std::io::Write;
use std::path::{Path, PathBuf};

use crate::CliError;

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<PathBuf, CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    tmp.write_all(bytes).map_err(|e| CliError::Io(e.to_string()))?;
    tmp.persist(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path.to_path_buf())
}

/// CSV with a mandatory header row.
pub fn csv_bytes(header: &[String], rows: &[Vec<f64>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
    for r in rows {
        w.write_record(r.iter().map(|x| x.to_string())).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

/// Scatter plot of columns `(cx, cy)`, y axis up.
pub fn svg_scatter(rows: &[Vec<f64>], cx: usize, cy: usize, title: &str) -> String {
    const SIZE: f64 = 600.0;
    const PAD: f64 = 20.0;
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for r in rows {
        x0 = x0.min(r[cx]);
        x1 = x1.max(r[cx]);
        y0 = y0.min(r[cy]);
        y1 = y1.max(r[cy]);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let scale = (SIZE - 2.0 * PAD) / span;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n<title>{title}</title>\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
    for r in rows {
        let px = PAD + (r[cx] - x0) * scale;
        let py = SIZE - PAD - (r[cy] - y0) * scale;
        out.push_str(&format!("<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"0.8\" fill=\"black\"/>\n"));
    }
    out.push_str("</svg>\n");
    out
}
