//! Static SVG charts: history curves, per-file entropy, correlation heatmap.

use std::fmt::Write as _;

use crate::analytics::{per_file_series, CorrelationMatrix};
use crate::history::AnalysisSeries;
use crate::metrics::Metric;

use super::number::format_sig9;

const WIDTH: f64 = 900.0;
const PANEL_HEIGHT: f64 = 320.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 190.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;

const PALETTE: [&str; 4] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a"];

/// Lightest and darkest colors of the heatmap ramp.
pub const RAMP_LOW: (u8, u8, u8) = (255, 255, 255);
pub const RAMP_HIGH: (u8, u8, u8) = (0, 68, 27);

/// Color for `t` in `[0, 1]` on the white-to-dark-green ramp.
pub fn ramp_color(t: f64) -> String {
    let t = if t.is_nan() { 0.0 } else { t.clamp(0.0, 1.0) };
    let mix = |a: u8, b: u8| (f64::from(a) + (f64::from(b) - f64::from(a)) * t).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        mix(RAMP_LOW.0, RAMP_HIGH.0),
        mix(RAMP_LOW.1, RAMP_HIGH.1),
        mix(RAMP_LOW.2, RAMP_HIGH.2)
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

struct Panel<'a> {
    top: f64,
    title: &'a str,
    y_label: &'a str,
    curves: Vec<(&'a str, &'a str, Vec<f64>)>,
}

fn document(height: f64, body: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{height}\" viewBox=\"0 0 {WIDTH} {height}\" font-family=\"sans-serif\" font-size=\"12\">\n\
<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

fn draw_panel(out: &mut String, panel: &Panel<'_>) {
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = panel.top + PANEL_HEIGHT - MARGIN_BOTTOM;
    let y1 = panel.top + MARGIN_TOP;
    let n = panel.curves.iter().map(|c| c.2.len()).max().unwrap_or(0);
    let (mut lo, mut hi) = panel
        .curves
        .iter()
        .flat_map(|c| c.2.iter().copied())
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if !lo.is_finite() {
        (lo, hi) = (0.0, 1.0);
    }
    lo = lo.min(0.0);
    if hi <= lo {
        hi = lo + 1.0;
    }
    let sx = |i: usize| {
        x0 + (x1 - x0)
            * if n > 1 {
                i as f64 / (n - 1) as f64
            } else {
                0.5
            }
    };
    let sy = |v: f64| y0 - (y0 - y1) * (v - lo) / (hi - lo);

    let _ = writeln!(
        out,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"14\">{}</text>",
        (x0 + x1) / 2.0,
        panel.top + 22.0,
        escape(panel.title)
    );
    let _ = writeln!(
        out,
        "<g stroke=\"#333\" stroke-width=\"1\"><line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y0:.2}\"/><line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x0:.2}\" y2=\"{y1:.2}\"/></g>"
    );
    for k in 0..=4 {
        let v = lo + (hi - lo) * k as f64 / 4.0;
        let y = sy(v);
        let _ = writeln!(
            out,
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{x0:.2}\" y2=\"{y:.2}\" stroke=\"#333\"/><text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
            x0 - 4.0,
            x0 - 6.0,
            y + 4.0,
            format_sig9((v * 1000.0).round() / 1000.0)
        );
    }
    if n > 0 {
        for k in 0..=4.min(n - 1) {
            let i = if n > 1 { k * (n - 1) / 4.min(n - 1) } else { 0 };
            let x = sx(i);
            let _ = writeln!(
                out,
                "<line x1=\"{x:.2}\" y1=\"{y0:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"#333\"/><text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
                y0 + 4.0,
                y0 + 18.0,
                i + 1
            );
        }
    }
    let _ = writeln!(
        out,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">commit count</text>",
        (x0 + x1) / 2.0,
        y0 + 38.0
    );
    let _ = writeln!(
        out,
        "<text transform=\"translate({:.2},{:.2}) rotate(-90)\" text-anchor=\"middle\">{}</text>",
        x0 - 55.0,
        (y0 + y1) / 2.0,
        escape(panel.y_label)
    );
    for (k, (name, color, values)) in panel.curves.iter().enumerate() {
        let points: Vec<String> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                format!(
                    "{:.2},{:.2}",
                    sx(i),
                    sy(if v.is_finite() { v } else { 0.0 })
                )
            })
            .collect();
        let _ = writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
            points.join(" ")
        );
        let ly = y1 + 16.0 * k as f64;
        let _ = writeln!(
            out,
            "<line x1=\"{:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"2\"/><text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
            x1 + 12.0,
            x1 + 32.0,
            x1 + 38.0,
            ly + 4.0,
            escape(name)
        );
    }
}

/// Eight cumulative curves: raw metrics (bits) on top, normalized below.
pub fn history_svg(series: &AnalysisSeries) -> String {
    let curves = |metrics: &[Metric]| -> Vec<(&'static str, &'static str, Vec<f64>)> {
        metrics
            .iter()
            .zip(PALETTE)
            .map(|(&m, color)| {
                (
                    m.name(),
                    color,
                    series.records.iter().map(|r| r.cumulative[m]).collect(),
                )
            })
            .collect()
    };
    let mut body = String::new();
    draw_panel(
        &mut body,
        &Panel {
            top: 0.0,
            title: "Cumulative entropy",
            y_label: "bits",
            curves: curves(&Metric::RAW),
        },
    );
    draw_panel(
        &mut body,
        &Panel {
            top: PANEL_HEIGHT,
            title: "Cumulative normalized entropy",
            y_label: "normalized entropy (sum over files)",
            curves: curves(&[
                Metric::StructNorm,
                Metric::TokFullNorm,
                Metric::TokNoKwNorm,
                Metric::TokNoKwNumNorm,
            ]),
        },
    );
    document(2.0 * PANEL_HEIGHT, &body)
}

/// Cumulative structural entropy per live file.
pub fn per_file_svg(series: &AnalysisSeries) -> String {
    let mut body = String::new();
    draw_panel(
        &mut body,
        &Panel {
            top: 0.0,
            title: "Structural entropy per file",
            y_label: "bits",
            curves: vec![("struct / files", PALETTE[0], per_file_series(series).values)],
        },
    );
    document(PANEL_HEIGHT, &body)
}

/// Heatmap of a correlation matrix. Cell darkness tracks rho on `[0, 1]`;
/// negative coefficients render white and undefined cells grey.
pub fn heatmap_svg(matrix: &CorrelationMatrix, title: &str) -> String {
    let cell = 56.0;
    let left = 150.0;
    let top = 130.0;
    let width = left + cell * matrix.col_labels.len() as f64 + 40.0;
    let height = top + cell * matrix.row_labels.len() as f64 + 40.0;
    let mut body = String::new();
    let _ = writeln!(
        body,
        "<text x=\"{:.2}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>",
        width / 2.0,
        escape(title)
    );
    for (c, label) in matrix.col_labels.iter().enumerate() {
        let x = left + cell * (c as f64 + 0.5);
        let _ = writeln!(
            body,
            "<text transform=\"translate({x:.2},{:.2}) rotate(-45)\">{}</text>",
            top - 8.0,
            escape(label)
        );
    }
    for (r, label) in matrix.row_labels.iter().enumerate() {
        let y = top + cell * r as f64;
        let _ = writeln!(
            body,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
            left - 8.0,
            y + cell / 2.0 + 4.0,
            escape(label)
        );
        for c in 0..matrix.col_labels.len() {
            let x = left + cell * c as f64;
            let (fill, text, text_color) = match matrix.get(r, c) {
                Some(v) => (
                    ramp_color(v),
                    format!("{:.2}", v),
                    if v > 0.55 { "white" } else { "black" },
                ),
                None => ("#bdbdbd".to_string(), "n/a".to_string(), "black"),
            };
            let _ = writeln!(
                body,
                "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{cell:.2}\" height=\"{cell:.2}\" fill=\"{fill}\" stroke=\"#999\"/><text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" fill=\"{text_color}\">{text}</text>",
                x + cell / 2.0,
                y + cell / 2.0 + 4.0
            );
        }
    }
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\" font-size=\"12\">\n\
<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::CorrelationMethod;

    #[test]
    fn ramp_endpoints() {
        assert_eq!(ramp_color(0.0), "#ffffff");
        assert_eq!(ramp_color(1.0), "#00441b");
        assert_eq!(ramp_color(-0.5), "#ffffff");
        assert_eq!(ramp_color(f64::NAN), "#ffffff");
    }

    #[test]
    fn heatmap_uses_darkest_color_for_unit_rho() {
        let m = CorrelationMatrix {
            row_labels: vec!["a".into(), "b".into()],
            col_labels: vec!["a".into(), "b".into()],
            rho: vec![vec![Some(1.0), None], vec![None, Some(1.0)]],
            method: CorrelationMethod::Spearman,
        };
        let svg = heatmap_svg(&m, "t");
        assert_eq!(svg.matches("fill=\"#00441b\"").count(), 2);
        assert!(svg.contains("n/a"));
        assert!(svg.starts_with("<?xml"));
    }
}
