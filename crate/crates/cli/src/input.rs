use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::Failure;

/// Records every input file and parameter that shaped a report.
#[derive(Default)]
pub struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    pub fn new(command: &str) -> Self {
        let mut inputs = Inputs::default();
        inputs.absorb("command", command.as_bytes());
        inputs
    }

    fn absorb(&mut self, label: &str, bytes: &[u8]) {
        self.hasher.update((label.len() as u64).to_le_bytes());
        self.hasher.update(label.as_bytes());
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    pub fn param(&mut self, label: &str, value: impl ToString) {
        self.absorb(label, value.to_string().as_bytes());
    }

    fn raw(&mut self, label: &str, path: &Path) -> Result<Value, Failure> {
        let bytes = fs::read(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        self.absorb(label, &bytes);
        serde_json::from_slice(&bytes).map_err(|e| Failure::Format(format!("{}: {e}", path.display())))
    }

    pub fn load<T: DeserializeOwned>(&mut self, label: &str, path: &Path) -> Result<T, Failure> {
        let value = self.raw(label, path)?;
        serde_json::from_value(value).map_err(|e| Failure::Format(format!("{}: {e}", path.display())))
    }

    pub fn combined(&mut self, path: &Path) -> Result<Combined, Failure> {
        let value = self.raw("combined", path)?;
        Ok(Combined { value, path: path.to_path_buf() })
    }

    pub fn finish(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}

/// A parsed file holding several named inputs.
pub struct Combined {
    value: Value,
    path: PathBuf,
}

impl Combined {
    pub fn field<T: DeserializeOwned>(&self, name: &str) -> Result<T, Failure> {
        let part = self
            .value
            .get(name)
            .cloned()
            .ok_or_else(|| Failure::Format(format!("{}: missing field `{name}`", self.path.display())))?;
        serde_json::from_value(part).map_err(|e| Failure::Format(format!("{}: field `{name}`: {e}", self.path.display())))
    }
}
