use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;
use crate::Format;

/// Writes artifacts into one directory and remembers what it wrote.
pub struct Sink {
    dir: PathBuf,
    format: Format,
    written: Vec<PathBuf>,
}

impl Sink {
    pub fn new(dir: Option<&Path>, format: Format) -> Result<Self, CliError> {
        let dir = dir.map_or_else(|| PathBuf::from("."), Path::to_path_buf);
        fs::create_dir_all(&dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
        Ok(Self {
            dir,
            format,
            written: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
        self.written.push(path);
        Ok(())
    }

    pub fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        self.write(name, &to_json(value))
    }

    /// A data table as `<stem>.csv` or `<stem>.json`, by the selected format.
    pub fn table<T: Serialize + ?Sized>(&mut self, stem: &str, csv: String, value: &T) -> Result<(), CliError> {
        match self.format {
            Format::Csv => self.write(&format!("{stem}.csv"), &csv),
            Format::Json => self.json(&format!("{stem}.json"), value),
        }
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}
