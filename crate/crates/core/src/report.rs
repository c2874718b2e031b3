//! Emission of solver output: long-format surface CSV, multi-profile CSV and
//! self-contained SVG line plots. All writers produce byte-identical output
//! for identical input.

use std::fmt::Write as _;
use std::io::Write;

use thiserror::Error;

use crate::model::SolutionSurface;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("failed to write to sink: {0}")]
    SinkWriteFailure(#[from] std::io::Error),
    #[error("need at least one series with two or more points")]
    EmptySeries,
    #[error("profile abscissae must be strictly increasing")]
    NonIncreasingAbscissae,
    #[error("profiles in one file must share their abscissae")]
    MismatchedAbscissae,
}

/// A labelled 2-D profile, e.g. concentration over x at a fixed time.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSeries {
    label: String,
    points: Vec<(f64, f64)>,
}

impl ProfileSeries {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Result<Self, ReportError> {
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(ReportError::NonIncreasingAbscissae);
        }
        Ok(ProfileSeries { label: label.into(), points })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }
}

/// Renders `v` with 9 significant digits and no trailing zeros, in plain
/// decimal notation (`0.4`, `1`, `0.918808786`).
pub fn format_value(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exponent = v.abs().log10().floor() as i32;
    let decimals = (8 - exponent).clamp(0, 30) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

/// Writes a surface as long-format CSV with header `x,t,C`, one row per node
/// in time-outer order. Returns the number of bytes written.
pub fn write_surface_csv<W: Write>(
    surface: &SolutionSurface,
    sink: &mut W,
) -> Result<usize, ReportError> {
    let grid = surface.grid();
    let mut out = String::from("x,t,C\n");
    for n in 0..=grid.time_steps() {
        let t = format_value(grid.t(n));
        for m in 0..=grid.space_steps() {
            let _ = writeln!(
                out,
                "{},{},{}",
                format_value(grid.x(m)),
                t,
                format_value(surface.value(m, n))
            );
        }
    }
    sink.write_all(out.as_bytes())?;
    Ok(out.len())
}

/// Writes aligned profiles as CSV with header `x,<label>,<label>,...`.
/// Every series must share the same abscissae.
pub fn write_profiles_csv<W: Write>(
    series: &[ProfileSeries],
    sink: &mut W,
) -> Result<usize, ReportError> {
    if series.is_empty() || series.iter().any(|s| s.points.len() < 2) {
        return Err(ReportError::EmptySeries);
    }
    let xs: Vec<f64> = series[0].points.iter().map(|p| p.0).collect();
    for s in &series[1..] {
        if s.points.len() != xs.len()
            || s.points.iter().zip(&xs).any(|(p, x)| p.0 != *x)
        {
            return Err(ReportError::MismatchedAbscissae);
        }
    }
    let mut out = String::from("x");
    for s in series {
        let _ = write!(out, ",{}", s.label);
    }
    out.push('\n');
    for (i, x) in xs.iter().enumerate() {
        let _ = write!(out, "{}", format_value(*x));
        for s in series {
            let _ = write!(out, ",{}", format_value(s.points[i].1));
        }
        out.push('\n');
    }
    sink.write_all(out.as_bytes())?;
    Ok(out.len())
}

const SVG_WIDTH: f64 = 720.0;
const SVG_HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 24.0;
const MARGIN_BOTTOM: f64 = 56.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const TICKS: usize = 5;

fn px(v: f64) -> String {
    format!("{v:.2}")
}

/// Writes a standalone SVG 1.1 document with one polyline per series,
/// linearly scaled axes with tick labels and a legend. No external
/// resources. Returns the number of bytes written.
pub fn write_profile_svg<W: Write>(
    series: &[ProfileSeries],
    x_label: &str,
    y_label: &str,
    sink: &mut W,
) -> Result<usize, ReportError> {
    if series.is_empty() || series.iter().any(|s| s.points.len() < 2) {
        return Err(ReportError::EmptySeries);
    }

    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in &s.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if x_max == x_min {
        x_max = x_min + 1.0;
    }
    if y_max == y_min {
        y_max = y_min + 1.0;
    }
    let plot_w = SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| MARGIN_TOP + plot_h - (y - y_min) / (y_max - y_min) * plot_h;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{SVG_WIDTH}\" height=\"{SVG_HEIGHT}\" \
         viewBox=\"0 0 {SVG_WIDTH} {SVG_HEIGHT}\">"
    );
    let _ = writeln!(out, "<rect width=\"{SVG_WIDTH}\" height=\"{SVG_HEIGHT}\" fill=\"white\"/>");

    // axes
    let x0 = px(MARGIN_LEFT);
    let y0 = px(MARGIN_TOP + plot_h);
    let x1 = px(MARGIN_LEFT + plot_w);
    let y1 = px(MARGIN_TOP);
    let _ = writeln!(
        out,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>"
    );
    let _ = writeln!(
        out,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>"
    );

    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let xv = x_min + f * (x_max - x_min);
        let yv = y_min + f * (y_max - y_min);
        let tx = px(sx(xv));
        let ty = px(sy(yv));
        let _ = writeln!(
            out,
            "<line x1=\"{tx}\" y1=\"{y0}\" x2=\"{tx}\" y2=\"{}\" stroke=\"black\"/>",
            px(MARGIN_TOP + plot_h + 5.0)
        );
        let _ = writeln!(
            out,
            "<text x=\"{tx}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{}</text>",
            px(MARGIN_TOP + plot_h + 18.0),
            format_value((xv * 1e6).round() / 1e6)
        );
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{ty}\" x2=\"{x0}\" y2=\"{ty}\" stroke=\"black\"/>",
            px(MARGIN_LEFT - 5.0)
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{}</text>",
            px(MARGIN_LEFT - 8.0),
            px(sy(yv) + 4.0),
            format_value((yv * 1e6).round() / 1e6)
        );
    }

    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">{}</text>",
        px(MARGIN_LEFT + plot_w / 2.0),
        px(SVG_HEIGHT - 12.0),
        xml_escape(x_label)
    );
    let _ = writeln!(
        out,
        "<text x=\"16\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\" \
         transform=\"rotate(-90 16 {})\">{}</text>",
        px(MARGIN_TOP + plot_h / 2.0),
        px(MARGIN_TOP + plot_h / 2.0),
        xml_escape(y_label)
    );

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut coords = String::new();
        for &(x, y) in &s.points {
            let _ = write!(coords, "{},{} ", px(sx(x)), px(sy(y)));
        }
        let _ = writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
            coords.trim_end()
        );
        // legend entry
        let ly = MARGIN_TOP + 16.0 + 18.0 * i as f64;
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            px(MARGIN_LEFT + plot_w - 140.0),
            px(ly),
            px(MARGIN_LEFT + plot_w - 116.0),
            px(ly)
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>",
            px(MARGIN_LEFT + plot_w - 110.0),
            px(ly + 4.0),
            xml_escape(&s.label)
        );
    }

    out.push_str("</svg>\n");
    sink.write_all(out.as_bytes())?;
    Ok(out.len())
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
