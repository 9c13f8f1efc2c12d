//! Self-contained SVG scatter plots of log fractions against size.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::stats::{predict_log, FitModel, FitResult, FractionPoint};

pub const WIDTH: f64 = 640.0;
pub const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("no points with a positive fraction to plot")]
    NoPlottablePoints,
    #[error("a fit line needs at least 2 plotted points")]
    FitNeedsTwoPoints,
    #[error("only exponential fraction fits can be drawn on a log-fraction plot")]
    UnsupportedModel,
    #[error("writing plot: {0}")]
    Io(#[from] std::io::Error),
}

/// Maps data coordinates `(n, ln p)` to SVG pixels.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn around(xs: &[f64], ys: &[f64]) -> Self {
        let fold = |v: &[f64]| {
            v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            })
        };
        let (mut x_min, mut x_max) = fold(xs);
        let (mut y_min, mut y_max) = fold(ys);
        if x_max - x_min < 1e-9 {
            x_min -= 1.0;
            x_max += 1.0;
        } else {
            x_min -= 0.5;
            x_max += 0.5;
        }
        if y_max - y_min < 1e-9 {
            y_min -= 1.0;
            y_max += 1.0;
        } else {
            let pad = 0.05 * (y_max - y_min);
            y_min -= pad;
            y_max += pad;
        }
        Frame {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    pub fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - LEFT - RIGHT)
    }

    pub fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - TOP - BOTTOM)
    }
}

/// Renders the plot. Zero fractions are omitted because their logarithm is undefined.
pub fn render_svg(points: &[FractionPoint], fit: Option<&FitResult>, title: &str) -> Result<String, PlotError> {
    let kept: Vec<&FractionPoint> = points.iter().filter(|p| p.fraction > 0.0).collect();
    if kept.is_empty() {
        return Err(PlotError::NoPlottablePoints);
    }
    if let Some(fit) = fit {
        if fit.model != FitModel::ExponentialFraction {
            return Err(PlotError::UnsupportedModel);
        }
        if kept.len() < 2 {
            return Err(PlotError::FitNeedsTwoPoints);
        }
    }
    let xs: Vec<f64> = kept.iter().map(|p| f64::from(p.size)).collect();
    let ys: Vec<f64> = kept.iter().map(|p| p.fraction.ln()).collect();
    let mut all_y = ys.clone();
    if let Some(fit) = fit {
        let (lo, hi) = (
            xs.iter().cloned().fold(f64::INFINITY, f64::min),
            xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        );
        all_y.push(predict_log(fit, lo));
        all_y.push(predict_log(fit, hi));
    }
    let frame = Frame::around(&xs, &all_y);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    // Axes.
    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (y0, y1) = (HEIGHT - BOTTOM, TOP);
    let _ = writeln!(svg, r#"<g class="axes" stroke="black" stroke-width="1">"#);
    let _ = writeln!(svg, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/>"#);
    let _ = writeln!(svg, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/>"#);
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r#"<g class="ticks" font-family="sans-serif" font-size="11">"#);
    let first = frame.x_min.ceil() as i64;
    let last = frame.x_max.floor() as i64;
    let step = ((last - first) / 12).max(1);
    let mut n = first;
    while n <= last {
        let x = frame.px(n as f64);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.3}" y1="{y0}" x2="{x:.3}" y2="{:.1}" stroke="black"/><text x="{x:.3}" y="{:.1}" text-anchor="middle">{n}</text>"#,
            y0 + 5.0,
            y0 + 18.0
        );
        n += step;
    }
    for k in 0..=5 {
        let v = frame.y_min + (frame.y_max - frame.y_min) * f64::from(k) / 5.0;
        let y = frame.py(v);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.1}" y1="{y:.3}" x2="{x0}" y2="{y:.3}" stroke="black"/><text x="{:.1}" y="{:.3}" text-anchor="end">{v:.2}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(
        svg,
        r#"<text class="xlabel" x="{:.1}" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="13">size n</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 16.0
    );
    let _ = writeln!(
        svg,
        r#"<text class="ylabel" x="20" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 20 {:.1})">ln(fraction)</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    if let Some(fit) = fit {
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let _ = writeln!(
            svg,
            r#"<line class="fit" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="crimson" stroke-width="1.5"/>"#,
            frame.px(lo),
            frame.py(predict_log(fit, lo)),
            frame.px(hi),
            frame.py(predict_log(fit, hi))
        );
    }
    let _ = writeln!(svg, r#"<g class="points" fill="steelblue">"#);
    for (x, y) in xs.iter().zip(&ys) {
        let _ = writeln!(
            svg,
            r#"<circle class="point" cx="{:.3}" cy="{:.3}" r="4"/>"#,
            frame.px(*x),
            frame.py(*y)
        );
    }
    let _ = writeln!(svg, "</g>");
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Writes the SVG for `points` (and optional fit line) to `path`.
pub fn emit_plot(
    points: &[FractionPoint],
    fit: Option<&FitResult>,
    path: impl AsRef<Path>,
    title: &str,
) -> Result<(), PlotError> {
    let svg = render_svg(points, fit, title)?;
    std::fs::write(path, svg)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::fit_exponential;

    fn attr(tag: &str, name: &str) -> f64 {
        let key = format!(" {name}=\"");
        let start = tag.find(&key).unwrap() + key.len();
        let end = start + tag[start..].find('"').unwrap();
        tag[start..end].parse().unwrap()
    }

    fn markers(svg: &str) -> Vec<(f64, f64)> {
        svg.lines()
            .filter(|l| l.contains("class=\"point\""))
            .map(|l| (attr(l, "cx"), attr(l, "cy")))
            .collect()
    }

    #[test]
    fn single_point() {
        let pts = [FractionPoint { size: 5, fraction: 0.3 }];
        let svg = render_svg(&pts, None, "one").unwrap();
        assert_eq!(markers(&svg).len(), 1);
        assert!(!svg.contains("class=\"fit\""));
        let fit = FitResult {
            model: FitModel::ExponentialFraction,
            scale: 1.0,
            ratio: 0.5,
            residual_sum_squares: 0.0,
            points_used: 2,
            excluded: vec![],
        };
        assert!(matches!(
            render_svg(&pts, Some(&fit), "one"),
            Err(PlotError::FitNeedsTwoPoints)
        ));
    }

    #[test]
    fn zero_points_are_omitted() {
        let pts = [
            FractionPoint { size: 3, fraction: 0.0 },
            FractionPoint { size: 4, fraction: 0.1 },
        ];
        assert_eq!(markers(&render_svg(&pts, None, "t").unwrap()).len(), 1);
        assert!(matches!(
            render_svg(&pts[..1], None, "t"),
            Err(PlotError::NoPlottablePoints)
        ));
    }

    #[test]
    fn fit_line_passes_through_exact_data() {
        let pts: Vec<_> = (3..=14)
            .map(|n| FractionPoint {
                size: n,
                fraction: 0.5 * 0.9f64.powi(n as i32),
            })
            .collect();
        let fit = fit_exponential(&pts).unwrap();
        let svg = render_svg(&pts, Some(&fit), "<exact> & fit").unwrap();
        assert!(svg.contains("&lt;exact&gt; &amp; fit"));
        let line = svg.lines().find(|l| l.contains("class=\"fit\"")).unwrap();
        let (x1, y1, x2, y2) = (attr(line, "x1"), attr(line, "y1"), attr(line, "x2"), attr(line, "y2"));
        let ms = markers(&svg);
        assert_eq!(ms.len(), 12);
        for (cx, cy) in ms {
            let dist = ((y2 - y1) * cx - (x2 - x1) * cy + x2 * y1 - y2 * x1).abs()
                / ((y2 - y1).powi(2) + (x2 - x1).powi(2)).sqrt();
            assert!(dist < 1.0, "marker ({cx}, {cy}) is {dist}px from the fit line");
        }
    }
}
