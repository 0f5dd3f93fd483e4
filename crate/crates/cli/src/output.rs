use std::path::{Path, PathBuf};

use serde_json::Value;
use skinlab::export::write_atomic;

use crate::failure::Failure;

/// Everything a subcommand produces, held in memory until the run succeeds.
#[derive(Debug, Default)]
pub struct Outcome {
    /// `(suffix, csv)`; the table with no suffix is the primary one.
    pub tables: Vec<(Option<&'static str>, String)>,
    /// Extra JSON documents, keyed by suffix.
    pub documents: Vec<(&'static str, Value)>,
    /// Scalar results echoed in the manifest.
    pub summary: Value,
}

/// Files written so far in one run; removed again unless the run commits.
pub struct OutputSet {
    dir: PathBuf,
    stem: String,
    written: Vec<PathBuf>,
    committed: bool,
}

impl OutputSet {
    pub fn new(dir: &Path, subcommand: &str, hash: &str) -> Result<Self, Failure> {
        std::fs::create_dir_all(dir).map_err(|e| Failure::resource(format!("{}: {e}", dir.display())))?;
        Ok(Self { dir: dir.to_path_buf(), stem: format!("{subcommand}_{hash}"), written: Vec::new(), committed: false })
    }

    pub fn name(&self, suffix: Option<&str>, ext: &str) -> String {
        match suffix {
            Some(s) => format!("{}_{s}.{ext}", self.stem),
            None => format!("{}.{ext}", self.stem),
        }
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), Failure> {
        let path = self.dir.join(name);
        write_atomic(&path, contents).map_err(|e| Failure::resource(format!("{}: {e}", path.display())))?;
        self.written.push(path);
        Ok(())
    }

    pub fn commit(mut self) -> Vec<PathBuf> {
        self.committed = true;
        std::mem::take(&mut self.written)
    }
}

impl Drop for OutputSet {
    fn drop(&mut self) {
        if !self.committed {
            for p in &self.written {
                let _ = std::fs::remove_file(p);
            }
        }
    }
}
