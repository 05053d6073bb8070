//! `series.csv`: one row per commit, fixed column order.

use std::fmt::Write as _;

use crate::error::ReportError;
use crate::history::{AnalysisSeries, CommitRecord};
use crate::metrics::{Metric, MetricValues};

use super::number::format_sig9;

pub const SERIES_HEADER: &str = "seq,commit,timestamp,files_changed,parse_failures,live_files,\
d_struct,d_tok_full,d_tok_nokw,d_tok_nokwnum,d_struct_norm,d_tok_full_norm,d_tok_nokw_norm,d_tok_nokwnum_norm,\
c_struct,c_tok_full,c_tok_nokw,c_tok_nokwnum,c_struct_norm,c_tok_full_norm,c_tok_nokw_norm,c_tok_nokwnum_norm,\
mod_lines,mod_tokens,cc_after,cc_delta";

const COLUMNS: usize = 26;

pub fn write_series_csv(series: &AnalysisSeries) -> String {
    let mut out = String::with_capacity(64 + series.len() * 256);
    out.push_str(SERIES_HEADER);
    out.push('\n');
    for r in &series.records {
        let _ = write!(
            out,
            "{},{},{},{},{},{}",
            r.sequence_index,
            r.commit_hash,
            r.timestamp,
            r.files_changed,
            r.parse_failures,
            r.live_files
        );
        for values in [&r.delta, &r.cumulative] {
            for m in Metric::ALL {
                out.push(',');
                out.push_str(&format_sig9(values[m]));
            }
        }
        let _ = writeln!(
            out,
            ",{},{},{},{}",
            r.modified_lines, r.modified_tokens, r.cc_after_sum, r.cc_delta
        );
    }
    out
}

/// Parses `series.csv`. Repository id and fingerprint are not part of the
/// file and come back empty.
pub fn read_series_csv(text: &str) -> Result<AnalysisSeries, ReportError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end_matches('\r') == SERIES_HEADER => {}
        Some(_) => {
            return Err(malformed(1, "header does not match the series schema"));
        }
        None => return Err(malformed(1, "empty file")),
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != COLUMNS {
            return Err(malformed(
                line_no,
                &format!("expected {COLUMNS} fields, found {}", fields.len()),
            ));
        }
        let mut delta = MetricValues::ZERO;
        let mut cumulative = MetricValues::ZERO;
        for (i, m) in Metric::ALL.into_iter().enumerate() {
            delta[m] = field(&fields, 6 + i, line_no)?;
            cumulative[m] = field(&fields, 14 + i, line_no)?;
        }
        let record = CommitRecord {
            sequence_index: field(&fields, 0, line_no)?,
            commit_hash: fields[1].to_string(),
            timestamp: field(&fields, 2, line_no)?,
            files_changed: field(&fields, 3, line_no)?,
            parse_failures: field(&fields, 4, line_no)?,
            live_files: field(&fields, 5, line_no)?,
            delta,
            cumulative,
            modified_lines: field(&fields, 22, line_no)?,
            modified_tokens: field(&fields, 23, line_no)?,
            cc_after_sum: field(&fields, 24, line_no)?,
            cc_delta: field(&fields, 25, line_no)?,
            skipped_files: 0,
            failed_paths: Vec::new(),
        };
        if record.sequence_index != records.len() {
            return Err(malformed(line_no, "sequence indices must be dense from 0"));
        }
        records.push(record);
    }
    Ok(AnalysisSeries {
        repo_id: String::new(),
        config_fingerprint: String::new(),
        records,
    })
}

fn field<T: std::str::FromStr>(fields: &[&str], idx: usize, line: usize) -> Result<T, ReportError> {
    let name = SERIES_HEADER.split(',').nth(idx).unwrap_or("?");
    fields[idx].parse().map_err(|_| {
        malformed(
            line,
            &format!("bad value {:?} in column {name}", fields[idx]),
        )
    })
}

fn malformed(line: usize, message: &str) -> ReportError {
    ReportError::MalformedSeries {
        line,
        message: message.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn record(i: usize, d: f64) -> CommitRecord {
        CommitRecord {
            sequence_index: i,
            commit_hash: format!("{:040x}", i + 1),
            timestamp: 1_700_000_000 + i as i64,
            files_changed: 2,
            parse_failures: 0,
            live_files: 3,
            delta: MetricValues([d, -d, 0.0, 1.0 / 3.0, 0.5, 1e-7, 12345.6789, -0.0]),
            cumulative: MetricValues([d * 2.0; 8]),
            modified_lines: 4,
            modified_tokens: 9,
            cc_after_sum: 5,
            cc_delta: -1,
            skipped_files: 0,
            failed_paths: Vec::new(),
        }
    }

    fn series(n: usize) -> AnalysisSeries {
        AnalysisSeries {
            repo_id: String::new(),
            config_fingerprint: String::new(),
            records: (0..n).map(|i| record(i, 1.25 * i as f64 + 0.1)).collect(),
        }
    }

    #[test]
    fn header_has_all_columns() {
        assert_eq!(SERIES_HEADER.split(',').count(), COLUMNS);
        for m in Metric::ALL {
            assert!(SERIES_HEADER.contains(&format!("d_{},", m.name())));
            assert!(SERIES_HEADER.contains(&format!("c_{},", m.name())));
        }
    }

    #[test]
    fn row_format() {
        let text = write_series_csv(&series(1));
        let row = text.lines().nth(1).unwrap();
        assert_eq!(
            row,
            "0,0000000000000000000000000000000000000001,1700000000,2,0,3,\
0.1,-0.1,0,0.333333333,0.5,1e-07,12345.6789,0,\
0.2,0.2,0.2,0.2,0.2,0.2,0.2,0.2,4,9,5,-1"
        );
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(
            read_series_csv(""),
            Err(ReportError::MalformedSeries { line: 1, .. })
        ));
        assert!(read_series_csv("a,b\n1,2\n").is_err());
        let mut text = write_series_csv(&series(2));
        text.push_str("2,abc,1\n");
        assert!(matches!(
            read_series_csv(&text),
            Err(ReportError::MalformedSeries { line: 4, .. })
        ));
        let bad = write_series_csv(&series(1)).replace(",4,9,5,-1", ",x,9,5,-1");
        assert!(read_series_csv(&bad).is_err());
    }

    proptest! {
        #[test]
        fn text_round_trip_is_byte_exact(ds in prop::collection::vec(-1e6f64..1e6, 0..20)) {
            let s = AnalysisSeries {
                repo_id: String::new(),
                config_fingerprint: String::new(),
                records: ds.iter().enumerate().map(|(i, &d)| record(i, d)).collect(),
            };
            let text = write_series_csv(&s);
            let back = read_series_csv(&text).unwrap();
            prop_assert_eq!(back.len(), s.len());
            prop_assert_eq!(write_series_csv(&back), text);
        }
    }
}
