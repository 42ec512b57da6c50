use std::fmt::Write as _;

use super::{PlotSeries, ShapeReport};

/// Layout and overlay switches for [`render_svg`].
#[derive(Debug, Clone, PartialEq)]
pub struct SvgOptions {
    pub width: u32,
    pub height: u32,
    pub title: Option<String>,
    pub alpha_line: bool,
    /// Draw the single-line fit (needs a report).
    pub single_fit: bool,
    /// Draw both segments of the two-segment fit (needs a report).
    pub two_segment_fit: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            width: 640,
            height: 480,
            title: None,
            alpha_line: true,
            single_fit: true,
            two_segment_fit: true,
        }
    }
}

const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 52.0;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    k: f64,
}

impl Frame {
    fn x(&self, rank: f64) -> f64 {
        // Ranks span [0.5, k + 0.5] so end markers sit inside the frame.
        self.x0 + (rank - 0.5) / self.k * (self.x1 - self.x0)
    }

    fn y(&self, p: f64) -> f64 {
        self.y1 - p * (self.y1 - self.y0)
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn rank_tick_step(k: usize) -> usize {
    let raw = (k as f64 / 10.0).ceil().max(1.0);
    let magnitude = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * magnitude)
        .find(|&s| s >= raw)
        .unwrap_or(raw);
    step as usize
}

/// Renders the p-value plot as a standalone SVG 1.1 document.
///
/// Each point is a `<circle class="point">` carrying `data-rank` and
/// `data-p`. Fitted lines are drawn only when `report` is given. Output is
/// a pure function of the inputs.
pub fn render_svg(s: &PlotSeries, report: Option<&ShapeReport>, options: &SvgOptions) -> String {
    let (w, h) = (f64::from(options.width), f64::from(options.height));
    let f = Frame {
        x0: MARGIN_LEFT,
        x1: (w - MARGIN_RIGHT).max(MARGIN_LEFT + 1.0),
        y0: MARGIN_TOP,
        y1: (h - MARGIN_BOTTOM).max(MARGIN_TOP + 1.0),
        k: s.k.max(1) as f64,
    };
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        options.width, options.height, options.width, options.height
    );
    let _ = writeln!(
        out,
        r#"<defs><clipPath id="plot-area"><rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}"/></clipPath></defs>"#,
        f.x0,
        f.y0,
        f.x1 - f.x0,
        f.y1 - f.y0
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let title = options
        .title
        .clone()
        .unwrap_or_else(|| "P-value plot".into());
    let title = match report {
        Some(r) => format!("{title} ({})", r.classification.as_str()),
        None => title,
    };
    let _ = writeln!(
        out,
        r#"<text class="title" x="{:.2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        w / 2.0,
        escape(&title)
    );

    // Axes.
    let _ = writeln!(out, r#"<g class="axes" stroke="black" stroke-width="1">"#);
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
        f.x0, f.y1, f.x1, f.y1
    );
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
        f.x0, f.y0, f.x0, f.y1
    );
    let _ = writeln!(out, "</g>");

    let _ = writeln!(
        out,
        r#"<g class="ticks" font-family="sans-serif" font-size="11">"#
    );
    let step = rank_tick_step(s.k);
    let mut ticks = vec![1];
    ticks.extend((step..=s.k).step_by(step).filter(|&r| r != 1));
    for rank in ticks {
        let x = f.x(rank as f64);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{rank}</text>"#,
            f.y1,
            f.y1 + 5.0,
            f.y1 + 18.0
        );
    }
    for i in 0..=5 {
        let p = f64::from(i) / 5.0;
        let y = f.y(p);
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{p:.1}</text>"#,
            f.x0 - 5.0,
            f.x0,
            f.x0 - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(
        out,
        r#"<text class="x-label" x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13">Rank</text>"#,
        (f.x0 + f.x1) / 2.0,
        h - 12.0
    );
    let _ = writeln!(
        out,
        r#"<text class="y-label" transform="translate(18 {:.2}) rotate(-90)" text-anchor="middle" font-family="sans-serif" font-size="13">p-value</text>"#,
        (f.y0 + f.y1) / 2.0
    );

    if options.alpha_line {
        let y = f.y(s.alpha);
        let _ = writeln!(
            out,
            r#"<line class="alpha-line" data-alpha="{}" x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="red" stroke-dasharray="6 4"/>"#,
            s.alpha, f.x0, f.x1
        );
        let _ = writeln!(
            out,
            r#"<text class="alpha-label" x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11" fill="red">alpha = {}</text>"#,
            f.x1 - 4.0,
            y - 4.0,
            s.alpha
        );
    }

    if let Some(r) = report {
        let _ = writeln!(out, r#"<g class="fits" clip-path="url(#plot-area)">"#);
        let line = |out: &mut String,
                    class: &str,
                    color: &str,
                    from: f64,
                    to: f64,
                    fit: &super::LineFit| {
            let _ = writeln!(
                out,
                r#"<line class="{class}" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="1.5"/>"#,
                f.x(from),
                f.y(fit.intercept + fit.slope * from),
                f.x(to),
                f.y(fit.intercept + fit.slope * to)
            );
        };
        if options.single_fit {
            line(&mut out, "fit-single", "gray", 1.0, s.k as f64, &r.single);
        }
        if options.two_segment_fit {
            let b = r.two_segment.breakpoint as f64;
            line(
                &mut out,
                "fit-segment",
                "steelblue",
                1.0,
                b,
                &r.two_segment.left,
            );
            line(
                &mut out,
                "fit-segment",
                "steelblue",
                b + 1.0,
                s.k as f64,
                &r.two_segment.right,
            );
        }
        let _ = writeln!(out, "</g>");
    }

    let _ = writeln!(out, r#"<g class="points" fill="black">"#);
    for &(rank, p) in &s.points {
        let _ = writeln!(
            out,
            r#"<circle class="point" data-rank="{rank}" data-p="{p:e}" cx="{:.2}" cy="{:.2}" r="3"/>"#,
            f.x(rank as f64),
            f.y(p)
        );
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}
