//! Minimal SVG line chart for a volatility path.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 48.0;

pub fn line_chart(values: &[f64], title: &str) -> String {
    let n = values.len().max(2);
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min).min(0.0);
    let mut hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        hi = lo + 1.0;
    }
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let x_of = |i: usize| MARGIN + plot_w * i as f64 / (n - 1) as f64;
    let y_of = |v: f64| HEIGHT - MARGIN - plot_h * (v - lo) / (hi - lo);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (x0, y0, x1, y1) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, MARGIN);
    let _ = writeln!(
        out,
        r#"<path d="M{x0},{y1} L{x0},{y0} L{x1},{y0}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    for (v, anchor_y) in [(lo, y0), (hi, y1)] {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{:.3}</text>"#,
            x0 - 6.0,
            anchor_y + 4.0,
            v
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{x1}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">t = {}</text>"#,
        y0 + 18.0,
        values.len()
    );

    let points: Vec<String> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| format!("{:.2},{:.2}", x_of(i), y_of(v)))
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#,
        points.join(" ")
    );
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
