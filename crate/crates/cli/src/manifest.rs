//! Run manifests: every output directory records the subcommand, flags,
//! seeds, input digests, tool version and wall time of the run that
//! produced it.

use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

pub struct Manifest {
    subcommand: &'static str,
    flags: BTreeMap<String, String>,
    notes: BTreeMap<String, String>,
    rng_seeds: Vec<u64>,
    input_digests: BTreeMap<String, String>,
    started: Instant,
}

impl Manifest {
    pub fn new(subcommand: &'static str) -> Manifest {
        Manifest {
            subcommand,
            flags: BTreeMap::new(),
            notes: BTreeMap::new(),
            rng_seeds: Vec::new(),
            input_digests: BTreeMap::new(),
            started: Instant::now(),
        }
    }

    pub fn flag(&mut self, name: &str, value: impl ToString) {
        self.flags.insert(name.to_owned(), value.to_string());
    }

    pub fn note(&mut self, name: &str, value: impl ToString) {
        self.notes.insert(name.to_owned(), value.to_string());
    }

    pub fn rng_seed(&mut self, seed: u64) {
        self.rng_seeds.push(seed);
    }

    /// Records an input file along with its content digest.
    pub fn input(&mut self, name: &str, path: &Path) -> std::io::Result<()> {
        let bytes = std::fs::read(path)?;
        let digest = Sha256::digest(&bytes);
        self.input_digests.insert(
            format!("{name}:{}", path.display()),
            format!("{digest:x}"),
        );
        Ok(())
    }

    /// Writes `manifest.json` into the output directory.
    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        let doc = serde_json::json!({
            "tool": "trisig",
            "version": env!("CARGO_PKG_VERSION"),
            "subcommand": self.subcommand,
            "flags": self.flags,
            "notes": self.notes,
            "rng_seeds": self.rng_seeds,
            "input_digests": self.input_digests,
            "wall_time_ms": self.started.elapsed().as_millis() as u64,
        });
        std::fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&doc)?)
    }
}
