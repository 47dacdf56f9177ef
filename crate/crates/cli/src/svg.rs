//! Deterministic SVG rendering of a persistence diagram with uncertainty
//! glyphs: a translucent band of half-width `2*eps` above the diagonal
//! marks where pairs may be spurious, and certain pairs carry a bounding
//! square of side `2*eps` locating their exact counterpart.

use std::fmt::Write as _;

use anyhow::{Context, Result};
use persifold::{PairType, PersistenceDiagram};

const CANVAS: f64 = 560.0;
const MARGIN: f64 = 40.0;

struct Plot {
    lo: f64,
    scale: f64,
}

impl Plot {
    fn new(range: (f64, f64)) -> Plot {
        let span = (range.1 - range.0).max(f64::MIN_POSITIVE);
        let pad = span * 0.04;
        let lo = range.0 - pad;
        let span = span + 2.0 * pad;
        Plot {
            lo,
            scale: (CANVAS - 2.0 * MARGIN) / span,
        }
    }

    fn x(&self, v: f64) -> f64 {
        MARGIN + (v - self.lo) * self.scale
    }

    fn y(&self, v: f64) -> f64 {
        CANVAS - MARGIN - (v - self.lo) * self.scale
    }
}

fn pair_color(t: PairType) -> &'static str {
    match t {
        PairType::MinSaddle => "#1f77b4",
        PairType::SaddleMax => "#2ca02c",
        PairType::Global => "#9467bd",
    }
}

pub fn render_svg_string(diagram: &PersistenceDiagram) -> String {
    let plot = Plot::new(diagram.field_range);
    let eps = diagram.epsilon_abs;
    let hi = diagram.field_range.1 + (diagram.field_range.1 - diagram.field_range.0).max(1.0);
    let lo = diagram.field_range.0 - (diagram.field_range.1 - diagram.field_range.0).max(1.0);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{CANVAS}\" height=\"{CANVAS}\" viewBox=\"0 0 {CANVAS} {CANVAS}\">"
    );
    let _ = writeln!(
        svg,
        "  <defs><clipPath id=\"plot\"><rect x=\"{m:.4}\" y=\"{m:.4}\" width=\"{w:.4}\" height=\"{w:.4}\"/></clipPath></defs>",
        m = MARGIN,
        w = CANVAS - 2.0 * MARGIN
    );
    let _ = writeln!(
        svg,
        "  <rect x=\"0\" y=\"0\" width=\"{CANVAS}\" height=\"{CANVAS}\" fill=\"#ffffff\"/>"
    );
    let _ = writeln!(
        svg,
        "  <rect x=\"{m:.4}\" y=\"{m:.4}\" width=\"{w:.4}\" height=\"{w:.4}\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\"/>",
        m = MARGIN,
        w = CANVAS - 2.0 * MARGIN
    );

    // uncertainty band: death - birth <= 2 eps, above the diagonal
    if eps > 0.0 {
        let band = format!(
            "{:.4},{:.4} {:.4},{:.4} {:.4},{:.4} {:.4},{:.4}",
            plot.x(lo),
            plot.y(lo),
            plot.x(hi),
            plot.y(hi),
            plot.x(hi),
            plot.y(hi + 2.0 * eps),
            plot.x(lo),
            plot.y(lo + 2.0 * eps),
        );
        let _ = writeln!(
            svg,
            "  <polygon points=\"{band}\" fill=\"#d73027\" fill-opacity=\"0.25\" clip-path=\"url(#plot)\"/>"
        );
    }

    let _ = writeln!(
        svg,
        "  <line x1=\"{:.4}\" y1=\"{:.4}\" x2=\"{:.4}\" y2=\"{:.4}\" stroke=\"#555555\" stroke-width=\"1\" clip-path=\"url(#plot)\"/>",
        plot.x(lo),
        plot.y(lo),
        plot.x(hi),
        plot.y(hi)
    );

    for p in &diagram.pairs {
        let color = pair_color(p.pair_type);
        let x = plot.x(p.birth);
        let _ = writeln!(
            svg,
            "  <line x1=\"{x:.4}\" y1=\"{:.4}\" x2=\"{x:.4}\" y2=\"{:.4}\" stroke=\"{color}\" stroke-width=\"1.5\" clip-path=\"url(#plot)\"/>",
            plot.y(p.birth),
            plot.y(p.death)
        );
        if p.certain && eps > 0.0 {
            let side = 2.0 * eps * plot.scale;
            let _ = writeln!(
                svg,
                "  <rect x=\"{:.4}\" y=\"{:.4}\" width=\"{side:.4}\" height=\"{side:.4}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1\" clip-path=\"url(#plot)\"/>",
                x - eps * plot.scale,
                plot.y(p.death) - eps * plot.scale,
            );
        }
        let _ = writeln!(
            svg,
            "  <circle cx=\"{x:.4}\" cy=\"{:.4}\" r=\"3\" fill=\"{color}\"/>",
            plot.y(p.death)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn render_svg(diagram: &PersistenceDiagram, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, render_svg_string(diagram))
        .with_context(|| format!("writing svg {}", path.display()))
}
