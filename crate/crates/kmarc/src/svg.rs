//! Bar chart of an intersection histogram.

use std::collections::BTreeMap;
use std::fmt::Write;

const WIDTH: u32 = 480;
const HEIGHT: u32 = 320;
const MARGIN: u32 = 40;

/// Renders `size → number of lines` as a standalone SVG document. Bar
/// heights are linear in the count.
pub fn histogram_svg(title: &str, histogram: &BTreeMap<u32, u32>) -> String {
    let max = histogram.values().copied().max().unwrap_or(1).max(1);
    let bars = histogram.len().max(1) as u32;
    let slot = (WIDTH - 2 * MARGIN) / bars;
    let plot_h = HEIGHT - 2 * MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#,
        WIDTH / 2,
        escape(title)
    );
    let _ = writeln!(
        out,
        r#"<line x1="{MARGIN}" y1="{y}" x2="{x2}" y2="{y}" stroke="black"/>"#,
        y = HEIGHT - MARGIN,
        x2 = WIDTH - MARGIN
    );
    for (k, (&size, &count)) in histogram.iter().enumerate() {
        let h = (count as u64 * plot_h as u64 / max as u64) as u32;
        let x = MARGIN + k as u32 * slot + slot / 8;
        let w = slot * 3 / 4;
        let y = HEIGHT - MARGIN - h;
        let _ = writeln!(
            out,
            r##"<rect x="{x}" y="{y}" width="{w}" height="{h}" fill="#4a7ab5"/>"##
        );
        let cx = x + w / 2;
        let _ = writeln!(
            out,
            r#"<text x="{cx}" y="{}" text-anchor="middle">{count}</text>"#,
            y.saturating_sub(4)
        );
        let _ = writeln!(
            out,
            r#"<text x="{cx}" y="{}" text-anchor="middle">{size}</text>"#,
            HEIGHT - MARGIN + 16
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
