//! Trajectory overlays as standalone SVG.
//!
//! Coordinates are image pixels with y growing downward. The reference
//! trace is drawn in red, the comparison trace in blue, each as polyline
//! segments (broken where a position is missing) with a dot per frame.

use std::fmt::Write as _;

/// Output pixels per image pixel.
const SCALE: f64 = 4.0;
const MARGIN: f64 = 24.0;

fn series(out: &mut String, points: &[Option<(f64, f64)>], color: &str, label: &str) {
    let _ = writeln!(out, "  <g class=\"{label}\" stroke=\"{color}\" fill=\"{color}\">");
    let mut segment: Vec<(f64, f64)> = Vec::new();
    let flush = |segment: &mut Vec<(f64, f64)>, out: &mut String| {
        if segment.len() > 1 {
            let pts: Vec<String> = segment
                .iter()
                .map(|(x, y)| format!("{:.2},{:.2}", x * SCALE, y * SCALE))
                .collect();
            let _ = writeln!(
                out,
                "    <polyline fill=\"none\" stroke-width=\"1\" points=\"{}\"/>",
                pts.join(" ")
            );
        }
        segment.clear();
    };
    for p in points {
        match p {
            Some(p) => segment.push(*p),
            None => flush(&mut segment, out),
        }
    }
    flush(&mut segment, out);
    for (x, y) in points.iter().flatten() {
        let _ = writeln!(
            out,
            "    <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2\" stroke=\"none\"/>",
            x * SCALE,
            y * SCALE
        );
    }
    out.push_str("  </g>\n");
}

/// Overlay of two position sequences on a `width x height` frame.
pub fn overlay_svg(
    width: usize,
    height: usize,
    reference: &[Option<(f64, f64)>],
    comparison: &[Option<(f64, f64)>],
    title: &str,
) -> String {
    let (w, h) = (width as f64 * SCALE, height as f64 * SCALE);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"{:.0} {:.0} {:.0} {:.0}\">",
        w + 2.0 * MARGIN,
        h + 2.0 * MARGIN,
        -MARGIN,
        -MARGIN,
        w + 2.0 * MARGIN,
        h + 2.0 * MARGIN
    );
    let _ = writeln!(out, "  <title>{}</title>", escape(title));
    let _ = writeln!(
        out,
        "  <rect x=\"0\" y=\"0\" width=\"{w:.0}\" height=\"{h:.0}\" fill=\"white\" stroke=\"black\"/>"
    );
    let _ = writeln!(
        out,
        "  <text x=\"0\" y=\"-8\" font-size=\"12\" font-family=\"sans-serif\">{}</text>",
        escape(title)
    );
    series(&mut out, reference, "red", "reference");
    series(&mut out, comparison, "blue", "comparison");
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_series_with_break() {
        let a = vec![
            Some((1.0, 1.0)),
            Some((2.0, 2.0)),
            None,
            Some((4.0, 4.0)),
            Some((5.0, 5.0)),
        ];
        let b = vec![Some((1.0, 2.0)); 5];
        let svg = overlay_svg(10, 8, &a, &b, "p5 & more");
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert_eq!(svg.matches("<circle").count(), 9);
        assert!(svg.contains("stroke=\"red\"") && svg.contains("stroke=\"blue\""));
        assert!(svg.contains("p5 &amp; more"));
    }
}
