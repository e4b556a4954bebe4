use std::fs;
use std::io::{self, Write};
use std::path::Path;

use num_rational::Ratio;
use serde::Serialize;

use crate::args::{Format, OutputArgs};
use crate::CliError;

/// Writes `bytes` to `--out` via a sibling temp file and rename, or to stdout.
pub fn emit(output: &OutputArgs, bytes: &[u8]) -> Result<(), CliError> {
    match &output.out {
        Some(path) => write_atomic(path, bytes),
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let file_name = path
        .file_name()
        .ok_or_else(|| CliError::Usage(format!("{} is not a file path", path.display())))?;
    let mut tmp_name = file_name.to_os_string();
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let io_err = |e: io::Error| CliError::Io(format!("{}: {e}", path.display()));
    fs::write(&tmp, bytes).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_err(e)
    })
}

/// Serializes rows as CSV (header from field names) or a JSON array.
pub fn render_rows<T: Serialize>(rows: &[T], format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            for row in rows {
                w.serialize(row).map_err(|e| CliError::Io(e.to_string()))?;
            }
            w.into_inner().map_err(|e| CliError::Io(e.to_string()))
        }
        Format::Json => render_json(&rows),
    }
}

pub fn render_json<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut out = serde_json::to_vec_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

/// `"num/den"`, or just `"num"` for integers.
pub fn ratio_string(x: Ratio<i64>) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Decimal value rounded to 12 significant digits.
pub fn ratio_decimal(x: Ratio<i64>) -> f64 {
    let v = *x.numer() as f64 / *x.denom() as f64;
    format!("{v:.11e}").parse().unwrap_or(v)
}
