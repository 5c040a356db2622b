//! Dataset manifest: `{"entries": [{"id", "path", "split"}]}` with paths
//! relative to the manifest file.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub id: String,
    pub path: PathBuf,
    pub split: Split,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub entries: Vec<Entry>,
}

impl DatasetManifest {
    /// Reads and validates a manifest, resolving entry paths against its directory.
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let mut manifest: DatasetManifest = serde_json::from_str(&text)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for e in &mut manifest.entries {
            e.path = base.join(&e.path);
        }
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn validate(&self) -> CliResult<()> {
        let mut seen = HashSet::new();
        for e in &self.entries {
            if !valid_id(&e.id) {
                return Err(CliError::input(format!(
                    "manifest id {:?} must be non-empty and use only letters, digits, '.', '_' or '-'",
                    e.id
                )));
            }
            if !seen.insert(e.id.as_str()) {
                return Err(CliError::input(format!("duplicate manifest id {:?}", e.id)));
            }
            if !e.path.is_file() {
                return Err(CliError::input(format!(
                    "manifest entry {:?}: {} does not exist",
                    e.id,
                    e.path.display()
                )));
            }
        }
        Ok(())
    }

    pub fn count(&self, split: Split) -> usize {
        self.entries.iter().filter(|e| e.split == split).count()
    }
}

/// Ids become file names, so they are kept to a portable character set.
fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && !id.starts_with('.')
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-'))
}
