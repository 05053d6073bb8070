//! Frozen outputs for the calculator fixture. Set `CODENTROPY_BLESS=1` to
//! rewrite the files after an intentional measurement change.

use std::fmt::Write as _;
use std::path::PathBuf;

use codentropy::analytics::{
    classic_correlation_matrix, delta_outliers, entropy_correlation_matrix, per_file_series,
};
use codentropy::fixture::generate_calculator;
use codentropy::report::{format_sig9, write_matrix_csv, write_outliers_csv, write_series_csv};
use codentropy::{walk_history, AnalysisConfig, AnalysisSeries, Metric};

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn check(name: &str, actual: &str) {
    let path = golden_dir().join(name);
    if std::env::var_os("CODENTROPY_BLESS").is_some() {
        std::fs::create_dir_all(golden_dir()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected =
        std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    if expected != actual {
        let line = expected
            .lines()
            .zip(actual.lines())
            .position(|(a, b)| a != b)
            .map_or_else(|| "line count".to_string(), |i| format!("line {}", i + 1));
        panic!("{name} differs from the golden file at {line}");
    }
}

fn fixture_series() -> AnalysisSeries {
    let dir = tempfile::tempdir().unwrap();
    generate_calculator(dir.path()).unwrap();
    walk_history(dir.path(), &AnalysisConfig::default()).unwrap()
}

#[test]
fn calculator_outputs_match_goldens() {
    let series = fixture_series();
    check("calculator_series.csv", &write_series_csv(&series));
    check(
        "calculator_entropy_matrix.csv",
        &write_matrix_csv(&entropy_correlation_matrix(&series).unwrap()),
    );
    check(
        "calculator_classic_matrix.csv",
        &write_matrix_csv(&classic_correlation_matrix(&series).unwrap()),
    );

    let reports: Vec<_> = Metric::ALL
        .iter()
        .flat_map(|&m| [1.5, 3.0].map(|f| delta_outliers(&series, m, f).unwrap()))
        .collect();
    check(
        "calculator_outliers.csv",
        &write_outliers_csv(&series, &reports),
    );

    let mut per_file = String::from("seq,struct_per_file\n");
    for (i, v) in per_file_series(&series).values.iter().enumerate() {
        writeln!(per_file, "{i},{}", format_sig9(*v)).unwrap();
    }
    check("calculator_per_file.csv", &per_file);
}

#[test]
fn series_is_reproducible_across_runs() {
    assert_eq!(
        write_series_csv(&fixture_series()),
        write_series_csv(&fixture_series())
    );
}
