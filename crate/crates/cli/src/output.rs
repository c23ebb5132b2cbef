//! CSV artifacts: UTF-8, LF line endings, a header row, and floats with 17
//! significant digits so every value round-trips.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};

pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<R>(dir: &Path, name: &str, header: &[&str], rows: R) -> CliResult<PathBuf>
where
    R: IntoIterator<Item = Vec<String>>,
{
    let io = |e: &dyn std::fmt::Display| CliError::Io(format!("{}: {e}", dir.join(name).display()));
    fs::create_dir_all(dir).map_err(|e| io(&e))?;
    let path = dir.join(name);
    let mut writer =
        csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(&path).map_err(|e| io(&e))?;
    writer.write_record(header).map_err(|e| io(&e))?;
    for row in rows {
        writer.write_record(&row).map_err(|e| io(&e))?;
    }
    writer.flush().map_err(|e| io(&e))?;
    Ok(path)
}
