//! Minimal self-contained SVG line chart for trade-off curves.

use std::fmt::Write;

use super::{weights_label, PrivacyScoring, TradeoffPoint};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

struct Series {
    name: String,
    points: Vec<(usize, f64, f64)>,
}

fn series_name(p: &TradeoffPoint) -> String {
    if p.privacy_weights.iter().any(|&w| w != 0.0) {
        format!("{} (rho_p={})", p.method_name(), weights_label(&p.privacy_weights))
    } else {
        p.method_name().to_owned()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Utility accuracy (y) against `1 − privacy accuracy` (x), one polyline per
/// method/weight setting ordered by `k`, and a dashed line at the
/// full-dimensional utility accuracy.
pub fn tradeoff_svg(points: &[TradeoffPoint], scoring: PrivacyScoring) -> String {
    let mut series: Vec<Series> = Vec::new();
    let mut baseline = None;
    for p in points.iter().filter(|p| p.status.is_ok()) {
        let x = 1.0 - p.scored_privacy(scoring);
        let y = p.acc_u_mean;
        if p.method.is_none() {
            baseline = Some(y);
            continue;
        }
        let name = series_name(p);
        match series.iter_mut().find(|s| s.name == name) {
            Some(s) => s.points.push((p.k, x, y)),
            None => series.push(Series {
                name,
                points: vec![(p.k, x, y)],
            }),
        }
    }
    for s in &mut series {
        s.points.sort_by_key(|&(k, _, _)| k);
    }

    let xs = series.iter().flat_map(|s| s.points.iter().map(|p| p.1));
    let ys = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.2))
        .chain(baseline);
    let (x0, x1) = padded_range(xs);
    let (y0, y1) = padded_range(ys);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
    let sy = |y: f64| TOP + (1.0 - (y - y0) / (y1 - y0)) * plot_h;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for i in 0..=5 {
        let t = i as f64 / 5.0;
        let xv = x0 + t * (x1 - x0);
        let yv = y0 + t * (y1 - y0);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{xv:.3}</text>"#,
            sx(xv),
            TOP + plot_h + 18.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{yv:.3}</text>"#,
            LEFT - 6.0,
            sy(yv) + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">1 - mean privacy accuracy</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">mean utility accuracy</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    if let Some(b) = baseline {
        let _ = writeln!(
            out,
            r#"<line class="baseline" x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="gray" stroke-dasharray="6,4"/>"#,
            LEFT + plot_w,
            y = sy(b)
        );
    }
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(_, x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            pts.join(" ")
        );
        for &(k, x, y) in &s.points {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{color}"><title>K={k}</title></circle>"#,
                sx(x),
                sy(y)
            );
        }
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = WIDTH - RIGHT + 12.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text class="legend" x="{}" y="{}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(&s.name)
        );
    }
    if baseline.is_some() {
        let ly = TOP + 10.0 + 18.0 * series.len() as f64;
        let lx = WIDTH - RIGHT + 12.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="gray" stroke-dasharray="6,4"/><text class="legend" x="{}" y="{}">full-dimensional</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values.filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = ((hi - lo) * 0.05).max(0.01);
    (lo - pad, hi + pad)
}
