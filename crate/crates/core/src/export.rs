//! Plain-text output helpers shared by every CSV writer in the crate.
//!
//! Numbers are written with 12 significant digits in scientific notation,
//! `.` as decimal separator and LF line endings, so repeated runs produce
//! byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::Result;

/// Format with 12 significant digits. Negative zero prints as zero so that
/// round-off in the sign bit cannot break byte reproducibility.
pub fn format_number(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// Render a CSV document from a header and numeric rows. `extra` appends a
/// constant trailing column (`name`, `value`) to every row.
pub fn csv_string(header: &[&str], rows: &[Vec<f64>], extra: Option<(&str, &str)>) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    if let Some((name, _)) = extra {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for row in rows {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format_number(*v));
        }
        if let Some((_, value)) = extra {
            let _ = write!(out, ",{value}");
        }
        out.push('\n');
    }
    out
}

pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, contents)?;
    Ok(())
}
