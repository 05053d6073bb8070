use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ast::Language;
use crate::tokens::StopList;

/// Files above this size are skipped unless configured otherwise.
pub const DEFAULT_MAX_FILE_SIZE: u64 = 10 * 1024 * 1024;

/// Cyclomatic-complexity variant recorded in output metadata.
pub const CC_VARIANT: &str = "extended";

/// Bumped whenever measurement semantics change, so stale cache entries
/// stop matching.
pub const MEASUREMENT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MergePolicy {
    /// Walk the first-parent chain; merges are diffed against their first parent.
    #[default]
    FirstParent,
    /// Walk every non-merge ancestor in topological order.
    Skip,
}

/// Settings that shape a history analysis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisConfig {
    /// Extensions of measured files, with leading dot.
    pub extensions: Vec<String>,
    /// Grammar per extension, for extensions the built-in table does not map.
    pub language_overrides: BTreeMap<String, Language>,
    pub stoplist: StopList,
    /// Tokenize comment text along with code.
    pub include_comments: bool,
    pub merge_policy: MergePolicy,
    pub max_file_size: u64,
    /// Blob cache directory; `None` disables caching.
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            extensions: vec![".java".to_string()],
            language_overrides: BTreeMap::new(),
            stoplist: StopList::java(),
            include_comments: true,
            merge_policy: MergePolicy::FirstParent,
            max_file_size: DEFAULT_MAX_FILE_SIZE,
            cache_dir: None,
        }
    }
}

impl AnalysisConfig {
    pub fn with_cache(mut self, dir: impl Into<PathBuf>) -> Self {
        self.cache_dir = Some(dir.into());
        self
    }

    /// Whether `path` passes the extension filter.
    pub fn matches(&self, path: &Path) -> bool {
        let name = path.to_string_lossy();
        self.extensions.iter().any(|ext| {
            name.len() > ext.len()
                && name
                    .to_ascii_lowercase()
                    .ends_with(&ext.to_ascii_lowercase())
        })
    }

    /// Grammar for a matching path, if one is known.
    pub fn language_for(&self, path: &Path) -> Option<Language> {
        let ext = path.extension()?.to_str()?;
        let dotted = format!(".{ext}");
        self.language_overrides
            .get(&dotted)
            .copied()
            .or_else(|| Language::from_extension(ext))
    }

    /// Stable digest of every field that affects measurement.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("v{MEASUREMENT_VERSION};cc={CC_VARIANT};").as_bytes());
        let mut exts: Vec<String> = self
            .extensions
            .iter()
            .map(|e| e.to_ascii_lowercase())
            .collect();
        exts.sort();
        exts.dedup();
        hasher.update(format!("ext={};", exts.join(",")).as_bytes());
        for (ext, lang) in &self.language_overrides {
            hasher.update(format!("lang:{ext}={lang};").as_bytes());
        }
        hasher.update(b"stop=");
        for word in self.stoplist.iter() {
            hasher.update(word.as_bytes());
            hasher.update(b"\n");
        }
        hasher.update(
            format!(
                ";comments={};merges={:?};max={}",
                self.include_comments, self.merge_policy, self.max_file_size
            )
            .as_bytes(),
        );
        hex::encode(&hasher.finalize()[..16])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extension_filter() {
        let config = AnalysisConfig::default();
        assert!(config.matches(Path::new("src/A.java")));
        assert!(config.matches(Path::new("B.JAVA")));
        assert!(!config.matches(Path::new("README.md")));
        assert!(!config.matches(Path::new(".java")));
        assert_eq!(
            config.language_for(Path::new("x/A.java")),
            Some(Language::Java)
        );
        assert_eq!(config.language_for(Path::new("x/A.jav")), None);
    }

    #[test]
    fn override_maps_new_extension() {
        let mut config = AnalysisConfig::default();
        config.extensions.push(".jav".into());
        config
            .language_overrides
            .insert(".jav".into(), Language::Java);
        assert_eq!(
            config.language_for(Path::new("x/A.jav")),
            Some(Language::Java)
        );
    }

    #[test]
    fn fingerprint_tracks_measurement_settings() {
        let base = AnalysisConfig::default();
        assert_eq!(base.fingerprint(), AnalysisConfig::default().fingerprint());
        assert_eq!(base.fingerprint().len(), 32);
        // the cache location does not affect measurement
        assert_eq!(
            base.fingerprint(),
            base.clone().with_cache("/tmp/x").fingerprint()
        );

        let mut other = base.clone();
        other.include_comments = false;
        assert_ne!(base.fingerprint(), other.fingerprint());

        let mut other = base.clone();
        other.stoplist = StopList::parse_text("public");
        assert_ne!(base.fingerprint(), other.fingerprint());
    }
}
