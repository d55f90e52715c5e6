//! Deterministic text output: numbers, CSV tables and SVG line plots.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::CliError;

/// Rounds to 15 significant digits, then prints the shortest decimal that
/// reads back to the rounded value. `-0` prints as `0`.
pub fn fmt_num(x: f64) -> String {
    let rounded: f64 = format!("{x:.14e}").parse().expect("valid float");
    if rounded == 0.0 {
        return "0".to_string();
    }
    format!("{rounded}")
}

pub fn render_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// A minimal static line plot.
pub fn render_svg_line(title: &str, xs: &[f64], ys: &[f64], x_label: &str, y_label: &str) -> String {
    const W: f64 = 800.0;
    const H: f64 = 400.0;
    const PAD: f64 = 50.0;
    let (x_min, x_max) = bounds(xs);
    let (y_min, y_max) = bounds(ys);
    let y_min = y_min.min(0.0);
    let sx = |x: f64| PAD + (x - x_min) / span(x_min, x_max) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y_min) / span(y_min, y_max) * (H - 2.0 * PAD);

    let mut points = String::new();
    for (x, y) in xs.iter().zip(ys) {
        let _ = write!(points, "{:.2},{:.2} ", sx(*x), sy(*y));
    }
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<line x1="{PAD}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/>"#,
        b = H - PAD,
        r = W - PAD
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{b}" stroke="black"/>"#,
        b = H - PAD
    );
    let _ = writeln!(
        svg,
        r#"<polyline fill="none" stroke="steelblue" stroke-width="1" points="{}"/>"#,
        points.trim_end()
    );
    let text = |svg: &mut String, x: f64, y: f64, anchor: &str, s: &str| {
        let _ = writeln!(
            svg,
            r#"<text x="{x}" y="{y}" font-family="sans-serif" font-size="12" text-anchor="{anchor}">{}</text>"#,
            escape(s)
        );
    };
    text(&mut svg, W / 2.0, 20.0, "middle", title);
    text(&mut svg, W / 2.0, H - 10.0, "middle", x_label);
    text(&mut svg, 10.0, H / 2.0, "start", y_label);
    text(&mut svg, PAD, H - PAD + 15.0, "middle", &fmt_num(x_min));
    text(&mut svg, W - PAD, H - PAD + 15.0, "middle", &fmt_num(x_max));
    text(&mut svg, PAD - 5.0, H - PAD, "end", &fmt_num(y_min));
    text(&mut svg, PAD - 5.0, PAD, "end", &fmt_num(y_max));
    svg.push_str("</svg>\n");
    svg
}

fn bounds(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(*x), hi.max(*x)))
}

fn span(lo: f64, hi: f64) -> f64 {
    if hi > lo {
        hi - lo
    } else {
        1.0
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(fmt_num(0.125), "0.125");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(0.1 + 0.2), "0.3");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt_num(-2.5e-7), "-0.00000025");
        assert_eq!(fmt_num(4209.0), "4209");
    }

    #[test]
    fn csv_layout() {
        let text = render_csv(&["N", "value"], vec![vec!["1".into(), "0.5".into()]]);
        assert_eq!(text, "N,value\n1,0.5\n");
    }

    #[test]
    fn svg_is_well_formed() {
        let svg = render_svg_line("a<b", &[0.0, 1.0], &[0.0, 2.0], "x", "y");
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("a&lt;b"));
    }
}
