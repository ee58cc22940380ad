use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

pub const RECORD: &str = "run.json";

/// An output directory that has been checked for an existing run record.
pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn prepare(root: &Path, force: bool) -> Result<Self, CliError> {
        if root.join(RECORD).exists() && !force {
            return Err(CliError::Usage(format!(
                "{} already holds a run record; pass --force to overwrite",
                root.display()
            )));
        }
        fs::create_dir_all(root)
            .map_err(|e| CliError::Runtime(format!("{}: {e}", root.display())))?;
        Ok(Self {
            root: root.to_path_buf(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn create(&self, name: &str) -> Result<BufWriter<File>, CliError> {
        let path = self.path(name);
        let file = File::create(&path)
            .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
        Ok(BufWriter::new(file))
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<(), CliError> {
        let mut w = self.create(name)?;
        serde_json::to_writer_pretty(&mut w, value)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(())
    }

    /// Runs `f` on a buffered writer for `name` and flushes it.
    pub fn write_with<F>(&self, name: &str, f: F) -> Result<(), CliError>
    where
        F: FnOnce(&mut BufWriter<File>) -> glasd::Result<()>,
    {
        let mut w = self.create(name)?;
        f(&mut w)?;
        w.flush()?;
        Ok(())
    }
}

/// Four significant digits, for console summaries.
pub fn short(v: f64) -> String {
    format!("{v:.3e}")
}
