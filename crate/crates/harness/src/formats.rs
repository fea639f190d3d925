//! CSV and SVG writers.

use std::fmt::Write as _;
use std::io::Write;

/// 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes a header row and one row per index; columns must share a length.
/// Decimal point `.`, LF line endings.
pub fn write_csv<W: Write>(
    out: &mut W,
    headers: &[&str],
    columns: &[&[f64]],
) -> std::io::Result<()> {
    write_rows(out, None, headers, columns)
}

/// Like [`write_csv`] with a leading integer column `start, start + 1, ...`.
pub fn write_indexed_csv<W: Write>(
    out: &mut W,
    index: (&str, usize),
    headers: &[&str],
    columns: &[&[f64]],
) -> std::io::Result<()> {
    write_rows(out, Some(index), headers, columns)
}

fn write_rows<W: Write>(
    out: &mut W,
    index: Option<(&str, usize)>,
    headers: &[&str],
    columns: &[&[f64]],
) -> std::io::Result<()> {
    assert_eq!(headers.len(), columns.len(), "one header per column");
    let rows = columns.first().map_or(0, |c| c.len());
    assert!(columns.iter().all(|c| c.len() == rows), "ragged columns");
    let mut buf = String::new();
    if let Some((name, _)) = index {
        buf.push_str(name);
        buf.push(',');
    }
    buf.push_str(&headers.join(","));
    buf.push('\n');
    for i in 0..rows {
        if let Some((_, start)) = index {
            let _ = write!(buf, "{},", start + i);
        }
        let row: Vec<String> = columns.iter().map(|c| fmt_f64(c[i])).collect();
        buf.push_str(&row.join(","));
        buf.push('\n');
    }
    out.write_all(buf.as_bytes())
}

pub struct Series<'a> {
    pub label: &'a str,
    pub xs: &'a [f64],
    pub ys: &'a [f64],
    pub color: &'a str,
    /// crosses instead of a polyline
    pub markers: bool,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 50.0;

/// Minimal line plot on a fixed 800x500 view box.
pub fn svg_plot(title: &str, series: &[Series<'_>]) -> String {
    let all_x = series.iter().flat_map(|s| s.xs.iter().copied());
    let all_y = series.iter().flat_map(|s| s.ys.iter().copied());
    let (x0, x1) = bounds(all_x);
    let (y0, y1) = bounds(all_y);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="30" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    for (i, ser) in series.iter().enumerate() {
        if ser.markers {
            let _ = writeln!(s, r#"<g stroke="{}" stroke-width="1">"#, ser.color);
            for (x, y) in ser.xs.iter().zip(ser.ys) {
                let (cx, cy) = (sx(*x), sy(*y));
                let _ = writeln!(
                    s,
                    r#"<path d="M{:.2} {:.2}L{:.2} {:.2}M{:.2} {:.2}L{:.2} {:.2}"/>"#,
                    cx - 3.0,
                    cy - 3.0,
                    cx + 3.0,
                    cy + 3.0,
                    cx - 3.0,
                    cy + 3.0,
                    cx + 3.0,
                    cy - 3.0
                );
            }
            let _ = writeln!(s, "</g>");
        } else {
            let pts: Vec<String> = ser
                .xs
                .iter()
                .zip(ser.ys)
                .map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y)))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
                ser.color,
                pts.join(" ")
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" fill="{}">{}</text>"#,
            MARGIN + 10.0,
            MARGIN + 18.0 * (i as f64 + 1.0),
            ser.color,
            escape(ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
