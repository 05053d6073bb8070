//! Persistent output formats.

mod number;
mod series_csv;
mod svg;
mod tables;

pub use number::{format_sig9, round_sig9};
pub use series_csv::{read_series_csv, write_series_csv, SERIES_HEADER};
pub use svg::{heatmap_svg, history_svg, per_file_svg, ramp_color, RAMP_HIGH, RAMP_LOW};
pub use tables::{
    read_labels_csv, write_labels_csv, write_matrix_csv, write_outliers_csv, Summary,
    MATRIX_HEADER, OUTLIER_HEADER,
};
