//! On-disk cache of per-blob measurables.
//!
//! One file per entry, named `<content_hash>-<config_fingerprint>`. The file
//! starts with a format header line followed by the JSON-encoded
//! [`Measurables`]. Unreadable or malformed entries are reported as misses.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::snapshot::Measurables;

const HEADER: &str = "codentropy-blob-cache";
pub const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlobCacheEntry {
    pub content_hash: String,
    pub config_fingerprint: String,
    pub measures: Measurables,
}

#[derive(Debug, Clone)]
pub struct BlobCache {
    dir: PathBuf,
}

impl BlobCache {
    /// Opens (creating if needed) a cache rooted at `dir`.
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn entry_path(&self, content_hash: &str, fingerprint: &str) -> PathBuf {
        self.dir.join(format!("{content_hash}-{fingerprint}"))
    }

    pub fn get(&self, content_hash: &str, fingerprint: &str) -> Option<BlobCacheEntry> {
        let path = self.entry_path(content_hash, fingerprint);
        let bytes = fs::read(&path).ok()?;
        match decode(&bytes) {
            Some(entry)
                if entry.content_hash == content_hash
                    && entry.config_fingerprint == fingerprint =>
            {
                Some(entry)
            }
            _ => {
                log::debug!("ignoring corrupt cache entry {}", path.display());
                None
            }
        }
    }

    /// Writes an entry atomically; concurrent writers of the same key race
    /// benignly because both write identical content.
    pub fn put(&self, entry: &BlobCacheEntry) -> io::Result<()> {
        let path = self.entry_path(&entry.content_hash, &entry.config_fingerprint);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(&encode(entry)?)?;
        tmp.persist(&path).map_err(|e| e.error)?;
        Ok(())
    }
}

fn encode(entry: &BlobCacheEntry) -> io::Result<Vec<u8>> {
    let mut out = format!("{HEADER} {CACHE_FORMAT_VERSION}\n").into_bytes();
    serde_json::to_writer(&mut out, entry)?;
    Ok(out)
}

fn decode(bytes: &[u8]) -> Option<BlobCacheEntry> {
    let newline = bytes.iter().position(|&b| b == b'\n')?;
    let header = std::str::from_utf8(&bytes[..newline]).ok()?;
    let (name, version) = header.split_once(' ')?;
    if name != HEADER || version.parse::<u32>().ok()? != CACHE_FORMAT_VERSION {
        return None;
    }
    serde_json::from_slice(&bytes[newline + 1..]).ok()
}
