//! CSV files with a `#`-prefixed metadata header.

use crate::error::{CliError, CliResult};
use palab_core::rng::{derive_seed, RNG_ALGORITHM, SEED_MIXING};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Floats with 17 significant digits.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

/// Everything needed to reproduce an output file.
#[derive(Debug, Clone)]
pub struct Metadata {
    pub command: String,
    pub config: Vec<(String, String)>,
    pub master_seed: Option<u64>,
    /// Number of replicate streams derived from the master seed.
    pub replicates: usize,
}

impl Metadata {
    pub fn write_header<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "# palab {VERSION}")?;
        writeln!(out, "# command: {}", self.command)?;
        for (k, v) in &self.config {
            writeln!(out, "# config: {k}={v}")?;
        }
        if let Some(seed) = self.master_seed {
            writeln!(out, "# master_seed: {seed}")?;
            writeln!(out, "# rng: {RNG_ALGORITHM}")?;
            writeln!(out, "# seed_mixing: {SEED_MIXING}")?;
            for r in 0..self.replicates as u64 {
                writeln!(out, "# seed[{r}]: {}", derive_seed(seed, r))?;
            }
        }
        Ok(())
    }
}

/// A CSV file being written under the output directory.
pub struct CsvFile {
    path: PathBuf,
    out: BufWriter<File>,
}

impl CsvFile {
    /// Writes the header and, unless `columns` is empty, the column line.
    pub fn create(dir: &Path, name: &str, meta: &Metadata, columns: &[&str]) -> CliResult<Self> {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
        let path = dir.join(name);
        let file = File::create(&path).map_err(|source| CliError::Io { path: path.clone(), source })?;
        let mut f = Self { path, out: BufWriter::new(file) };
        let p = f.path.clone();
        let wrap = |source| CliError::Io { path: p.clone(), source };
        meta.write_header(&mut f.out).map_err(wrap)?;
        if !columns.is_empty() {
            writeln!(f.out, "{}", columns.join(",")).map_err(wrap)?;
        }
        Ok(f)
    }

    pub fn row(&mut self, fields: &[String]) -> CliResult<()> {
        writeln!(self.out, "{}", fields.join(",")).map_err(|source| CliError::Io { path: self.path.clone(), source })
    }

    /// Gives raw access for bulk writers that produce their own rows.
    pub fn writer(&mut self) -> &mut BufWriter<File> {
        &mut self.out
    }

    pub fn finish(mut self) -> CliResult<PathBuf> {
        self.out.flush().map_err(|source| CliError::Io { path: self.path.clone(), source })?;
        Ok(self.path)
    }
}
