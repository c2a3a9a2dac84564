use std::fs;
use std::path::{Path, PathBuf};

use gridevo::MetricValue;

use crate::config::RunConfig;
use crate::CliError;

pub(crate) struct Table {
    path: PathBuf,
    writer: csv::Writer<fs::File>,
}

impl Table {
    pub(crate) fn create(dir: &Path, name: &str, header: &[&str]) -> Result<Self, CliError> {
        let path = dir.join(name);
        let writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(&path)
            .map_err(|source| CliError::Csv {
                path: path.clone(),
                source,
            })?;
        let mut t = Self { path, writer };
        t.row(header.iter().copied())?;
        Ok(t)
    }

    pub(crate) fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer
            .write_record(fields)
            .map_err(|source| CliError::Csv {
                path: self.path.clone(),
                source,
            })
    }

    pub(crate) fn finish(mut self) -> Result<PathBuf, CliError> {
        self.writer.flush().map_err(|source| CliError::Io {
            path: self.path.clone(),
            source,
        })?;
        Ok(self.path)
    }
}

pub(crate) fn float(x: f64) -> String {
    format!("{x}")
}

pub(crate) fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// `(value, reason)` cells for a possibly undefined metric.
pub(crate) fn metric_cells(v: MetricValue) -> (String, String) {
    match v {
        Ok(x) => (float(x), String::new()),
        Err(e) => (String::new(), e.code().to_string()),
    }
}

pub(crate) fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

pub(crate) fn manifest_name(command: &str) -> String {
    format!("manifest_{command}.conf")
}

/// Writes the effective configuration; it parses back as a config file.
pub(crate) fn write_manifest(
    config: &RunConfig,
    command: &str,
    outputs: &[PathBuf],
) -> Result<PathBuf, CliError> {
    let path = config.out.join(manifest_name(command));
    let mut text = format!(
        "# gridevo run manifest\n# toolkit_version = {}\n# command = {command}\n",
        gridevo::VERSION
    );
    for o in outputs {
        if let Some(name) = o.file_name() {
            text.push_str(&format!("# output = {}\n", name.to_string_lossy()));
        }
    }
    text.push_str(&config.render());
    fs::write(&path, text).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}
