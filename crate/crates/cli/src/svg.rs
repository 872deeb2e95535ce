//! Static line chart of a tradeoff curve.

use std::fmt::Write;

use oil_core::bench::{format_g6, TradeoffCurve};

const W: f64 = 640.0;
const H: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;

/// Plots `utility_kl` and `mi_output` against the weight.
pub fn tradeoff_chart(curve: &TradeoffCurve) -> String {
    let pts = curve.points();
    let xs: Vec<f64> = pts.iter().map(|p| p.beta).collect();
    let series = [
        ("utility_kl", "#1f77b4", pts.iter().map(|p| p.utility_kl).collect::<Vec<_>>()),
        ("mi_output", "#d62728", pts.iter().map(|p| p.mi_output).collect::<Vec<_>>()),
    ];
    let (x0, x1) = span(xs.iter().copied());
    let (y0, y1) = span(series.iter().flat_map(|s| s.2.iter().copied()).chain([0.0]));
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * (W - LEFT - RIGHT);
    let py = |y: f64| H - BOTTOM - (y - y0) / (y1 - y0) * (H - TOP - BOTTOM);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let (ax, ay) = (px(x0), py(y0));
    let _ = writeln!(s, r#"<path d="M{ax:.1},{:.1} V{ay:.1} H{:.1}" stroke="black" fill="none"/>"#, py(y1), px(x1));
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, px(xv), ay + 18.0, format_g6(xv));
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, ax - 6.0, py(yv) + 4.0, format_g6(yv));
    }
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">beta</text>"#, px((x0 + x1) / 2.0), H - 10.0);
    for (k, (name, color, ys)) in series.iter().enumerate() {
        let path: Vec<String> = xs.iter().zip(ys).map(|(&x, &y)| format!("{:.1},{:.1}", px(x), py(y))).collect();
        let _ = writeln!(s, r#"<polyline points="{}" stroke="{color}" stroke-width="2" fill="none"/>"#, path.join(" "));
        for (&x, &y) in xs.iter().zip(ys) {
            let _ = writeln!(s, r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{color}"/>"#, px(x), py(y));
        }
        let ly = TOP + 20.0 * k as f64;
        let lx = W - RIGHT + 20.0;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 20.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{name}</text>"#, lx + 26.0, ly + 4.0);
    }
    s.push_str("</svg>\n");
    s
}

fn span(v: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = v.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}
