//! Commit-history replay.
//!
//! [`walk_history`] visits the commits of a repository oldest first, diffs
//! each against its first parent, measures the touched files, and keeps a
//! table of live files so that every [`CommitRecord`] carries both the
//! commit's net change and the running project totals.

mod cache;
mod snapshot;

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use git2::{Delta, DiffFindOptions, DiffOptions, ErrorCode, Oid, Patch, Repository, Sort};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use cache::{BlobCache, BlobCacheEntry, CACHE_FORMAT_VERSION};
pub use snapshot::{
    commit_delta, measure_file, CommitDelta, FileChange, FileSnapshot, Measurables,
};

use crate::config::{AnalysisConfig, MergePolicy};
use crate::error::MineError;
use crate::metrics::MetricValues;

/// Per-commit deltas, running totals, and classic metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommitRecord {
    pub sequence_index: usize,
    pub commit_hash: String,
    /// Commit time, UTC seconds.
    pub timestamp: i64,
    /// Matching files touched by the commit.
    pub files_changed: u32,
    /// Touched files that failed to parse after the commit.
    pub parse_failures: u32,
    pub live_files: u32,
    pub delta: MetricValues,
    pub cumulative: MetricValues,
    pub modified_lines: u64,
    pub modified_tokens: u64,
    pub cc_after_sum: u64,
    pub cc_delta: i64,
    /// Touched files over the size limit, left unmeasured.
    #[serde(default)]
    pub skipped_files: u32,
    #[serde(default)]
    pub failed_paths: Vec<String>,
}

/// Chronologically ordered records for one repository.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSeries {
    pub repo_id: String,
    pub config_fingerprint: String,
    pub records: Vec<CommitRecord>,
}

impl AnalysisSeries {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&CommitRecord> {
        self.records.last()
    }

    pub fn parse_failures(&self) -> u64 {
        self.records
            .iter()
            .map(|r| u64::from(r.parse_failures))
            .sum()
    }
}

fn open_repo(path: &Path) -> Result<Repository, MineError> {
    Repository::open(path).map_err(|source| MineError::Unreadable {
        path: path.to_path_buf(),
        source,
    })
}

fn head_commit<'r>(repo: &'r Repository, path: &Path) -> Result<git2::Commit<'r>, MineError> {
    match repo.head() {
        Ok(head) => Ok(head.peel_to_commit()?),
        Err(e) if matches!(e.code(), ErrorCode::UnbornBranch | ErrorCode::NotFound) => {
            Err(MineError::EmptyRepository(path.to_path_buf()))
        }
        Err(e) => Err(e.into()),
    }
}

/// Commits to visit, oldest first.
fn commit_order(
    repo: &Repository,
    head: &git2::Commit<'_>,
    policy: MergePolicy,
) -> Result<Vec<Oid>, MineError> {
    match policy {
        MergePolicy::FirstParent => {
            let mut chain = vec![head.id()];
            let mut current = head.clone();
            while let Ok(parent) = current.parent(0) {
                chain.push(parent.id());
                current = parent;
            }
            chain.reverse();
            Ok(chain)
        }
        MergePolicy::Skip => {
            let mut walk = repo.revwalk()?;
            walk.push(head.id())?;
            walk.set_sorting(Sort::TOPOLOGICAL | Sort::TIME | Sort::REVERSE)?;
            let mut out = Vec::new();
            for oid in walk {
                let oid = oid?;
                if repo.find_commit(oid)?.parent_count() <= 1 {
                    out.push(oid);
                }
            }
            Ok(out)
        }
    }
}

fn repo_id(repo: &Repository, path: &Path) -> String {
    let root = repo.workdir().unwrap_or_else(|| repo.path());
    std::fs::canonicalize(root)
        .ok()
        .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .unwrap_or_else(|| path.display().to_string())
}

/// Blob content waiting to be measured.
struct Job {
    oid: Oid,
    path: String,
    content: Option<String>,
}

struct Measurer<'a> {
    config: &'a AnalysisConfig,
    fingerprint: String,
    cache: Option<BlobCache>,
}

impl Measurer<'_> {
    fn read(&self, repo: &Repository, oid: Oid, path: &str) -> Result<Job, MineError> {
        let blob = repo.find_blob(oid)?;
        let content = (blob.size() as u64 <= self.config.max_file_size)
            .then(|| String::from_utf8_lossy(blob.content()).into_owned());
        Ok(Job {
            oid,
            path: path.to_string(),
            content,
        })
    }

    fn measure(&self, job: &Job) -> Arc<Measurables> {
        let Some(content) = &job.content else {
            return Arc::new(Measurables::skipped());
        };
        let hash = job.oid.to_string();
        if let Some(cache) = &self.cache {
            if let Some(entry) = cache.get(&hash, &self.fingerprint) {
                return Arc::new(entry.measures);
            }
        }
        let language = self.config.language_for(Path::new(&job.path));
        let measures = measure_file(content, language, self.config);
        if let Some(cache) = &self.cache {
            let entry = BlobCacheEntry {
                content_hash: hash,
                config_fingerprint: self.fingerprint.clone(),
                measures,
            };
            if let Err(e) = cache.put(&entry) {
                log::warn!("cache write failed for {}: {e}", job.path);
            }
            return Arc::new(entry.measures);
        }
        Arc::new(measures)
    }
}

/// A touched file as reported by the tree diff, before measurement.
struct PendingChange {
    before: Option<(String, Oid)>,
    after: Option<(String, Oid)>,
    added_lines: u64,
    deleted_lines: u64,
}

fn path_of(file: &git2::DiffFile<'_>) -> Option<String> {
    file.path().map(|p| p.to_string_lossy().replace('\\', "/"))
}

fn pending_changes(
    repo: &Repository,
    commit: &git2::Commit<'_>,
    config: &AnalysisConfig,
) -> Result<Vec<PendingChange>, MineError> {
    let tree = commit.tree()?;
    let parent_tree = match commit.parent(0) {
        Ok(parent) => Some(parent.tree()?),
        Err(_) => None,
    };
    let mut opts = DiffOptions::new();
    opts.context_lines(0);
    let mut diff = repo.diff_tree_to_tree(parent_tree.as_ref(), Some(&tree), Some(&mut opts))?;
    diff.find_similar(Some(DiffFindOptions::new().renames(true)))?;

    let mut out = Vec::new();
    for (idx, delta) in diff.deltas().enumerate() {
        let side = |file: git2::DiffFile<'_>, present: bool| {
            if !present {
                return None;
            }
            let path = path_of(&file)?;
            config
                .matches(Path::new(&path))
                .then_some((path, file.id()))
        };
        let before = side(
            delta.old_file(),
            !matches!(delta.status(), Delta::Added | Delta::Untracked),
        );
        let after = side(delta.new_file(), delta.status() != Delta::Deleted);
        if before.is_none() && after.is_none() {
            continue;
        }
        let too_big = |f: git2::DiffFile<'_>| f.size() > config.max_file_size;
        let (added_lines, deleted_lines) = if too_big(delta.old_file()) || too_big(delta.new_file())
        {
            (0, 0)
        } else {
            match Patch::from_diff(&diff, idx)? {
                Some(patch) => {
                    let (_, adds, dels) = patch.line_stats()?;
                    (adds as u64, dels as u64)
                }
                None => (0, 0),
            }
        };
        out.push(PendingChange {
            before,
            after,
            added_lines,
            deleted_lines,
        });
    }
    Ok(out)
}

/// Replays the history of the repository at `repo_path`.
///
/// Per-file parse problems are recorded in the records and never abort the
/// walk; only repository-level failures are errors.
pub fn walk_history(
    repo_path: &Path,
    config: &AnalysisConfig,
) -> Result<AnalysisSeries, MineError> {
    let repo = open_repo(repo_path)?;
    let head = head_commit(&repo, repo_path)?;
    let order = commit_order(&repo, &head, config.merge_policy)?;
    let measurer = Measurer {
        config,
        fingerprint: config.fingerprint(),
        cache: config.cache_dir.as_ref().map(BlobCache::open).transpose()?,
    };

    let mut live: HashMap<String, FileSnapshot> = HashMap::new();
    let mut cumulative = MetricValues::ZERO;
    let mut records = Vec::with_capacity(order.len());

    for (sequence_index, oid) in order.into_iter().enumerate() {
        let commit = repo.find_commit(oid)?;
        let pending = pending_changes(&repo, &commit, config)?;

        // Before-snapshots normally come from the live table. They are
        // re-measured only when the walk skipped the commit that produced
        // them (merge skipping).
        let mut jobs = Vec::new();
        for change in &pending {
            if let Some((path, oid)) = &change.after {
                jobs.push(measurer.read(&repo, *oid, path)?);
            }
            if let Some((path, oid)) = &change.before {
                let known = live
                    .get(path)
                    .is_some_and(|s| s.content_hash == oid.to_string());
                if !known {
                    jobs.push(measurer.read(&repo, *oid, path)?);
                }
            }
        }
        let measured: HashMap<Oid, Arc<Measurables>> = jobs
            .par_iter()
            .map(|job| (job.oid, measurer.measure(job)))
            .collect();

        let snapshot = |path: &str, oid: Oid| {
            FileSnapshot::new(path, oid.to_string(), Arc::clone(&measured[&oid]))
        };
        let changes: Vec<FileChange> = pending
            .iter()
            .map(|change| FileChange {
                before: change
                    .before
                    .as_ref()
                    .map(|(path, oid)| match live.get(path) {
                        Some(s) if s.content_hash == oid.to_string() => s.clone(),
                        _ => snapshot(path, *oid),
                    }),
                after: change
                    .after
                    .as_ref()
                    .map(|(path, oid)| snapshot(path, *oid)),
                added_lines: change.added_lines,
                deleted_lines: change.deleted_lines,
            })
            .collect();

        let delta = commit_delta(&changes);
        for change in &changes {
            if let Some(before) = &change.before {
                live.remove(&before.path);
            }
        }
        let mut parse_failures = 0;
        let mut skipped_files = 0;
        let mut failed_paths = Vec::new();
        for change in changes {
            if let Some(after) = change.after {
                if after.measures.skipped {
                    skipped_files += 1;
                } else if !after.measures.parse_ok {
                    parse_failures += 1;
                    failed_paths.push(after.path.clone());
                }
                live.insert(after.path.clone(), after);
            }
        }

        cumulative += delta.delta;
        records.push(CommitRecord {
            sequence_index,
            commit_hash: oid.to_string(),
            timestamp: commit.time().seconds(),
            files_changed: pending.len() as u32,
            parse_failures,
            live_files: live.len() as u32,
            delta: delta.delta,
            cumulative,
            modified_lines: delta.modified_lines,
            modified_tokens: delta.modified_tokens,
            cc_after_sum: delta.cc_after_sum,
            cc_delta: delta.cc_delta,
            skipped_files,
            failed_paths,
        });
    }

    Ok(AnalysisSeries {
        repo_id: repo_id(&repo, repo_path),
        config_fingerprint: measurer.fingerprint,
        records,
    })
}

/// Totals of the per-file metrics over every matching file in the tree of
/// `rev` (default `HEAD`), measured from scratch without the cache.
pub fn tree_totals(
    repo_path: &Path,
    rev: Option<&str>,
    config: &AnalysisConfig,
) -> Result<(MetricValues, usize), MineError> {
    let repo = open_repo(repo_path)?;
    let commit = match rev {
        Some(rev) => repo.revparse_single(rev)?.peel_to_commit()?,
        None => head_commit(&repo, repo_path)?,
    };
    let tree = commit.tree()?;
    let mut files: Vec<(PathBuf, Oid)> = Vec::new();
    tree.walk(git2::TreeWalkMode::PreOrder, |dir, entry| {
        if entry.kind() == Some(git2::ObjectType::Blob) {
            let path = PathBuf::from(format!("{dir}{}", entry.name().unwrap_or_default()));
            if config.matches(&path) {
                files.push((path, entry.id()));
            }
        }
        git2::TreeWalkResult::Ok
    })?;
    let mut total = MetricValues::ZERO;
    for (path, oid) in &files {
        let blob = repo.find_blob(*oid)?;
        if blob.size() as u64 > config.max_file_size {
            continue;
        }
        let content = String::from_utf8_lossy(blob.content());
        total += measure_file(&content, config.language_for(path), config).metrics();
    }
    Ok((total, files.len()))
}
