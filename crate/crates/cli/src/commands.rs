use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context as _};
use codentropy::analytics::{
    calibrate as calibrate_series, classic_correlation_matrix, classic_correlation_matrix_signed,
    delta_outliers, entropy_correlation_matrix, Expectation, METADATA,
};
use codentropy::fixture::{generate_calculator, generate_synthetic, SyntheticSpec};
use codentropy::report::{
    heatmap_svg, history_svg, per_file_svg, read_labels_csv, read_series_csv, write_labels_csv,
    write_matrix_csv, write_outliers_csv, write_series_csv, Summary,
};
use codentropy::{
    walk_history, AnalysisConfig, AnalysisSeries, MergePolicy, Metric, MineError, StopList,
};

use crate::failure::{Failure, WithStatus, INVALID_REPO, IO, MALFORMED, UNKNOWN_KIND};
use crate::AnalysisArgs;

fn default_cache_root() -> Option<PathBuf> {
    std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .filter(|p| p.is_absolute())
        .or_else(|| std::env::var_os("HOME").map(|home| PathBuf::from(home).join(".cache")))
        .map(|root| root.join("codentropy"))
}

fn build_config(args: &AnalysisArgs) -> Result<AnalysisConfig, Failure> {
    let stoplist = match &args.stoplist {
        Some(path) => StopList::from_file(path)
            .with_context(|| format!("reading stoplist {}", path.display()))
            .status(IO)?,
        None => StopList::java(),
    };
    let extensions = args
        .extensions
        .iter()
        .map(|e| {
            if e.starts_with('.') {
                e.clone()
            } else {
                format!(".{e}")
            }
        })
        .collect();
    let cache_dir = match args.cache.as_deref() {
        Some("off") => None,
        Some(dir) => Some(PathBuf::from(dir)),
        None => default_cache_root(),
    };
    Ok(AnalysisConfig {
        extensions,
        stoplist,
        include_comments: !args.exclude_comments,
        merge_policy: if args.skip_merges {
            MergePolicy::Skip
        } else {
            MergePolicy::FirstParent
        },
        max_file_size: args.max_file_size,
        cache_dir,
        ..AnalysisConfig::default()
    })
}

fn mine(repo: &Path, config: &AnalysisConfig) -> Result<AnalysisSeries, Failure> {
    walk_history(repo, config).map_err(|e| {
        let status = match e {
            MineError::Unreadable { .. } | MineError::EmptyRepository(_) => INVALID_REPO,
            _ => IO,
        };
        Failure::new(status, e)
    })
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .with_context(|| format!("writing {}", path.display()))
        .status(IO)
}

fn create_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir)
        .with_context(|| format!("creating {}", dir.display()))
        .status(IO)
}

fn load_series(path: &Path) -> Result<AnalysisSeries, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .status(IO)?;
    read_series_csv(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .status(MALFORMED)
}

pub fn analyze(repo: &Path, out: &Path, args: &AnalysisArgs) -> Result<(), Failure> {
    let config = build_config(args)?;
    let started = Instant::now();
    let series = mine(repo, &config)?;
    let runtime = started.elapsed().as_secs_f64();

    let mut echo = serde_json::to_value(&config).status(IO)?;
    echo["cache"] = config
        .cache_dir
        .as_ref()
        .map_or(serde_json::Value::Null, |d| d.display().to_string().into());
    let summary = Summary::new(&series, runtime, echo);

    create_dir(out)?;
    write(&out.join("series.csv"), &write_series_csv(&series))?;
    write(&out.join("summary.json"), &summary.to_json().status(IO)?)?;
    println!(
        "{}: {} commits, {} parse failures, {:.2}s -> {}",
        series.repo_id,
        series.len(),
        summary.parse_failures,
        runtime,
        out.display()
    );
    Ok(())
}

pub fn correlate(series_path: &Path, out: &Path) -> Result<(), Failure> {
    let series = load_series(series_path)?;
    let entropy = entropy_correlation_matrix(&series).status(MALFORMED)?;
    let classic = classic_correlation_matrix(&series).status(MALFORMED)?;
    let signed = classic_correlation_matrix_signed(&series).status(MALFORMED)?;
    create_dir(out)?;
    write(
        &out.join("entropy_correlation.csv"),
        &write_matrix_csv(&entropy),
    )?;
    write(
        &out.join("classic_correlation.csv"),
        &write_matrix_csv(&classic),
    )?;
    write(
        &out.join("classic_correlation_signed.csv"),
        &write_matrix_csv(&signed),
    )?;
    let metadata: serde_json::Map<String, serde_json::Value> = METADATA
        .iter()
        .map(|&(k, v)| (k.to_string(), v.into()))
        .collect();
    let metadata = serde_json::to_string_pretty(&metadata).status(IO)? + "\n";
    write(&out.join("correlation_metadata.json"), &metadata)?;
    println!(
        "wrote correlation matrices for {} commits to {}",
        series.len(),
        out.display()
    );
    Ok(())
}

pub fn outliers(series_path: &Path, factors: &[f64], out: Option<&Path>) -> Result<(), Failure> {
    let series = load_series(series_path)?;
    let mut reports = Vec::new();
    for &metric in &Metric::ALL {
        for &factor in factors {
            reports.push(delta_outliers(&series, metric, factor).status(MALFORMED)?);
        }
    }
    let table = write_outliers_csv(&series, &reports);
    match out {
        Some(path) => write(path, &table),
        None => {
            print!("{table}");
            Ok(())
        }
    }
}

pub fn plot(series_path: &Path, kind: &str, matrix: &str, out: &Path) -> Result<(), Failure> {
    if !matches!(kind, "history" | "per-file" | "heatmap") {
        return Err(Failure::new(
            UNKNOWN_KIND,
            anyhow!("unknown plot kind {kind:?} (expected history, per-file or heatmap)"),
        ));
    }
    if kind == "heatmap" && !matches!(matrix, "entropy" | "classic") {
        return Err(Failure::new(
            UNKNOWN_KIND,
            anyhow!("unknown matrix {matrix:?} (expected entropy or classic)"),
        ));
    }
    let series = load_series(series_path)?;
    if series.is_empty() {
        return Err(Failure::new(
            MALFORMED,
            anyhow!("{}: series has no rows", series_path.display()),
        ));
    }
    let svg = match kind {
        "history" => history_svg(&series),
        "per-file" => per_file_svg(&series),
        _ if matrix == "entropy" => heatmap_svg(
            &entropy_correlation_matrix(&series).status(MALFORMED)?,
            "Spearman correlation of cumulative entropy curves",
        ),
        _ => heatmap_svg(
            &classic_correlation_matrix(&series).status(MALFORMED)?,
            "Spearman correlation of |entropy delta| with classic metrics",
        ),
    };
    write(out, &svg)
}

pub fn calibrate(repo: &Path, labels_path: &Path, args: &AnalysisArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(labels_path)
        .with_context(|| format!("reading {}", labels_path.display()))
        .status(IO)?;
    let labels = read_labels_csv(&text).status(MALFORMED)?;
    let config = build_config(args)?;
    let series = mine(repo, &config)?;

    let by_commit: HashMap<&str, Expectation> =
        labels.iter().map(|(c, l)| (c.as_str(), *l)).collect();
    if labels.len() != series.len() || by_commit.len() != labels.len() {
        return Err(Failure::new(
            MALFORMED,
            anyhow!("{} labels for {} commits", labels.len(), series.len()),
        ));
    }
    let ordered = series
        .records
        .iter()
        .map(|r| {
            by_commit
                .get(r.commit_hash.as_str())
                .copied()
                .ok_or_else(|| anyhow!("commit {} has no label", r.commit_hash))
        })
        .collect::<anyhow::Result<Vec<_>>>()
        .status(MALFORMED)?;

    let results = calibrate_series(&series, &ordered).status(MALFORMED)?;
    println!("{:<18} {:>10} {:>10}", "metric", "rho", "mismatches");
    for r in results {
        let rho = r
            .rho
            .map_or_else(|| "n/a".to_string(), |v| format!("{v:.4}"));
        println!(
            "{:<18} {rho:>10} {:>10}",
            r.metric.name(),
            r.sign_mismatches
        );
    }
    Ok(())
}

pub fn fixture(
    out: &Path,
    kind: &str,
    commits: usize,
    files: usize,
    seed: u64,
) -> Result<(), Failure> {
    let repo = out.join("repo");
    match kind {
        "calculator" => {
            let labels = generate_calculator(&repo).status(IO)?;
            write(&out.join("labels.csv"), &write_labels_csv(&labels))?;
            println!(
                "calculator repository with {} commits at {}",
                labels.len(),
                repo.display()
            );
        }
        "synthetic" => {
            generate_synthetic(
                &repo,
                SyntheticSpec {
                    commits,
                    files,
                    seed,
                },
            )
            .status(IO)?;
            println!(
                "synthetic repository with {commits} commits at {}",
                repo.display()
            );
        }
        other => {
            return Err(Failure::new(
                UNKNOWN_KIND,
                anyhow!("unknown fixture kind {other:?} (expected calculator or synthetic)"),
            ))
        }
    }
    Ok(())
}
