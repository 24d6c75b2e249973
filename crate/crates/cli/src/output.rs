//! Deterministic CSV emission: fixed scientific formatting at 17 significant
//! digits, '#'-prefixed metadata lines, atomic write via temp-file + rename.

use crate::error::{CliError, Result};
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

/// Fixed float formatting shared by every emitted value.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Resolve an output path: relative paths land under $QANNEAL_OUT_DIR when
/// that is set.
pub fn resolve_out_path(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os("QANNEAL_OUT_DIR") {
        Some(dir) => PathBuf::from(dir).join(path),
        None => path.to_path_buf(),
    }
}

/// CSV writer that becomes visible only on successful [`CsvFile::finish`];
/// dropping it earlier removes the temporary file, so aborted runs leave no
/// partial output behind.
pub struct CsvFile {
    tmp: PathBuf,
    target: PathBuf,
    writer: Option<BufWriter<File>>,
}

impl CsvFile {
    pub fn create(target: &Path) -> Result<Self> {
        let target = resolve_out_path(target);
        if let Some(parent) = target.parent() {
            if !parent.as_os_str().is_empty() {
                fs::create_dir_all(parent).map_err(CliError::io(parent))?;
            }
        }
        let mut tmp = target.clone();
        let mut name = tmp
            .file_name()
            .map(|n| n.to_os_string())
            .unwrap_or_default();
        name.push(".tmp");
        tmp.set_file_name(name);
        let file = File::create(&tmp).map_err(CliError::io(&tmp))?;
        Ok(Self {
            tmp,
            target,
            writer: Some(BufWriter::new(file)),
        })
    }

    fn w(&mut self) -> &mut BufWriter<File> {
        self.writer.as_mut().expect("writer live until finish")
    }

    pub fn comment(&mut self, line: &str) -> Result<()> {
        let tmp = self.tmp.clone();
        writeln!(self.w(), "# {line}").map_err(CliError::io(tmp))
    }

    pub fn header(&mut self, columns: &[&str]) -> Result<()> {
        let tmp = self.tmp.clone();
        writeln!(self.w(), "{}", columns.join(",")).map_err(CliError::io(tmp))
    }

    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        let tmp = self.tmp.clone();
        writeln!(self.w(), "{}", fields.join(",")).map_err(CliError::io(tmp))
    }

    pub fn float_row(&mut self, values: &[f64]) -> Result<()> {
        let fields: Vec<String> = values.iter().map(|&v| fmt_float(v)).collect();
        self.row(&fields)
    }

    /// Flush and atomically move into place; returns the final path.
    pub fn finish(mut self) -> Result<PathBuf> {
        let mut writer = self.writer.take().expect("finish called once");
        writer.flush().map_err(CliError::io(&self.tmp))?;
        drop(writer);
        fs::rename(&self.tmp, &self.target).map_err(CliError::io(&self.target))?;
        Ok(self.target.clone())
    }
}

impl Drop for CsvFile {
    fn drop(&mut self) {
        if self.writer.is_some() {
            let _ = fs::remove_file(&self.tmp);
        }
    }
}

/// Write a JSON value atomically next to the CSV outputs.
pub fn write_json(target: &Path, value: &serde_json::Value) -> Result<PathBuf> {
    let target = resolve_out_path(target);
    if let Some(parent) = target.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(CliError::io(parent))?;
        }
    }
    let mut tmp = target.clone();
    let mut name = tmp
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".tmp");
    tmp.set_file_name(name);
    let text = serde_json::to_string_pretty(value).expect("json value serializes");
    fs::write(&tmp, text + "\n").map_err(CliError::io(&tmp))?;
    fs::rename(&tmp, &target).map_err(CliError::io(&target))?;
    Ok(target)
}
