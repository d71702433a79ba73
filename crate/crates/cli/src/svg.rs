//! Minimal deterministic SVG line plots.
//!
//! Every figure the binary emits is a static scatter/line chart; rendering
//! is pure string assembly from the numeric data, so the same data always
//! produces byte-identical files (no timestamps, no randomness).

use std::fs;
use std::path::Path;

use crate::CliResult;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 56.0;
const TICK_COUNT: usize = 5;

/// Fixed palette cycled over series in declaration order.
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// One plotted curve.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Dashed stroke, used for analytic reference curves.
    pub dashed: bool,
    /// Draw point markers in addition to the line.
    pub markers: bool,
}

impl Series {
    pub fn line(label: &str, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.to_string(),
            points,
            dashed: false,
            markers: true,
        }
    }

    pub fn reference(label: &str, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.to_string(),
            points,
            dashed: true,
            markers: false,
        }
    }
}

/// A complete figure: labelled axes plus one or more series.
#[derive(Debug, Clone)]
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

fn coordinate(value: f64) -> String {
    format!("{value:.2}")
}

fn tick_label(value: f64) -> String {
    let text = format!("{value:.3}");
    let trimmed = text.trim_end_matches('0').trim_end_matches('.');
    if trimmed == "-0" {
        "0".to_string()
    } else {
        trimmed.to_string()
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Inclusive data range over all series, padded so flat lines stay visible.
fn axis_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        if v.is_finite() {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if (hi - lo).abs() < 1e-12 {
        let pad = if lo.abs() < 1e-12 { 1.0 } else { lo.abs() * 0.5 };
        return (lo - pad, hi + pad);
    }
    let pad = (hi - lo) * 0.05;
    (lo - pad, hi + pad)
}

impl LinePlot {
    pub fn render(&self) -> String {
        let (x_min, x_max) = axis_range(
            self.series
                .iter()
                .flat_map(|s| s.points.iter().map(|&(x, _)| x)),
        );
        let (y_min, y_max) = axis_range(
            self.series
                .iter()
                .flat_map(|s| s.points.iter().map(|&(_, y)| y)),
        );

        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let to_px = |x: f64, y: f64| -> (f64, f64) {
            let px = MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
            let py = MARGIN_TOP + (y_max - y) / (y_max - y_min) * plot_h;
            (px, py)
        };

        let mut svg = String::new();
        svg.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
             viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
        ));
        svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" \
             text-anchor=\"middle\">{}</text>\n",
            coordinate(WIDTH / 2.0),
            escape(&self.title)
        ));

        // Frame.
        svg.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" \
             stroke=\"#333333\" stroke-width=\"1\"/>\n",
            coordinate(MARGIN_LEFT),
            coordinate(MARGIN_TOP),
            coordinate(plot_w),
            coordinate(plot_h)
        ));

        // Ticks, grid lines, and tick labels.
        for i in 0..=TICK_COUNT {
            let f = i as f64 / TICK_COUNT as f64;
            let xv = x_min + f * (x_max - x_min);
            let yv = y_min + f * (y_max - y_min);
            let (px, _) = to_px(xv, y_min);
            let (_, py) = to_px(x_min, yv);
            svg.push_str(&format!(
                "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#dddddd\" \
                 stroke-width=\"1\"/>\n",
                coordinate(px),
                coordinate(MARGIN_TOP),
                coordinate(MARGIN_TOP + plot_h)
            ));
            svg.push_str(&format!(
                "<line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"#dddddd\" \
                 stroke-width=\"1\"/>\n",
                coordinate(MARGIN_LEFT),
                coordinate(MARGIN_LEFT + plot_w),
                coordinate(py)
            ));
            svg.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" \
                 text-anchor=\"middle\">{}</text>\n",
                coordinate(px),
                coordinate(MARGIN_TOP + plot_h + 16.0),
                tick_label(xv)
            ));
            svg.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" \
                 text-anchor=\"end\">{}</text>\n",
                coordinate(MARGIN_LEFT - 6.0),
                coordinate(py + 4.0),
                tick_label(yv)
            ));
        }

        // Axis labels.
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" \
             text-anchor=\"middle\">{}</text>\n",
            coordinate(MARGIN_LEFT + plot_w / 2.0),
            coordinate(HEIGHT - 12.0),
            escape(&self.x_label)
        ));
        svg.push_str(&format!(
            "<text x=\"18\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" \
             text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">{}</text>\n",
            coordinate(MARGIN_TOP + plot_h / 2.0),
            coordinate(MARGIN_TOP + plot_h / 2.0),
            escape(&self.y_label)
        ));

        // Curves.
        for (index, series) in self.series.iter().enumerate() {
            let color = PALETTE[index % PALETTE.len()];
            let dash = if series.dashed {
                " stroke-dasharray=\"6 4\""
            } else {
                ""
            };
            let path: Vec<String> = series
                .points
                .iter()
                .map(|&(x, y)| {
                    let (px, py) = to_px(x, y);
                    format!("{},{}", coordinate(px), coordinate(py))
                })
                .collect();
            svg.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{}/>\n",
                path.join(" "),
                color,
                dash
            ));
            if series.markers {
                for &(x, y) in &series.points {
                    let (px, py) = to_px(x, y);
                    svg.push_str(&format!(
                        "<circle cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"{}\"/>\n",
                        coordinate(px),
                        coordinate(py),
                        color
                    ));
                }
            }
        }

        // Legend, top-right inside the frame.
        for (index, series) in self.series.iter().enumerate() {
            let color = PALETTE[index % PALETTE.len()];
            let ly = MARGIN_TOP + 16.0 + index as f64 * 18.0;
            let lx = MARGIN_LEFT + plot_w - 170.0;
            let dash = if series.dashed {
                " stroke-dasharray=\"6 4\""
            } else {
                ""
            };
            svg.push_str(&format!(
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" \
                 stroke-width=\"1.5\"{}/>\n",
                coordinate(lx),
                coordinate(ly),
                coordinate(lx + 26.0),
                coordinate(ly),
                color,
                dash
            ));
            svg.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
                coordinate(lx + 32.0),
                coordinate(ly + 4.0),
                escape(&series.label)
            ));
        }

        svg.push_str("</svg>\n");
        svg
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                fs::create_dir_all(parent)?;
            }
        }
        fs::write(path, self.render())?;
        Ok(())
    }
}
