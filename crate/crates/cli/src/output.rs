use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::CliError;

/// Shortest text that parses back to the same f64.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

pub fn open(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Indices of the requested columns in header order; all when `spec` is None.
pub fn select(header: &[&str], spec: Option<&str>) -> Result<Vec<usize>, CliError> {
    let Some(spec) = spec else { return Ok((0..header.len()).collect()) };
    let wanted: Vec<&str> = spec.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if wanted.is_empty() {
        return Err(CliError::Usage("--columns is empty".into()));
    }
    if let Some(bad) = wanted.iter().find(|w| !header.contains(w)) {
        return Err(CliError::Usage(format!("unknown column `{bad}`; available: {}", header.join(","))));
    }
    Ok((0..header.len()).filter(|&i| wanted.contains(&header[i])).collect())
}

pub struct Csv {
    out: Box<dyn Write>,
    cols: Vec<usize>,
}

impl Csv {
    pub fn new(path: Option<&Path>, header: &[&str], columns: Option<&str>) -> Result<Self, CliError> {
        let cols = select(header, columns)?;
        let mut csv = Csv { out: open(path)?, cols };
        let names: Vec<String> = csv.cols.iter().map(|&i| header[i].to_string()).collect();
        csv.line(&names)?;
        Ok(csv)
    }

    pub fn row(&mut self, fields: &[String]) -> Result<(), CliError> {
        let picked: Vec<String> = self.cols.iter().map(|&i| fields[i].clone()).collect();
        self.line(&picked)
    }

    fn line(&mut self, fields: &[String]) -> Result<(), CliError> {
        writeln!(self.out, "{}", fields.join(",")).map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.out.flush().map_err(|e| CliError::Io(e.to_string()))
    }
}

pub fn write_json<T: serde::Serialize>(value: &T, path: Option<&Path>, to_stderr: bool) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    let mut out: Box<dyn Write> = match (path, to_stderr) {
        (None, true) => Box::new(io::stderr().lock()),
        _ => open(path)?,
    };
    writeln!(out, "{text}").and_then(|_| out.flush()).map_err(|e| CliError::Io(e.to_string()))
}
