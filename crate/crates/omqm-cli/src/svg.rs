//! Minimal hand-emitted SVG documents: a histogram with a model overlay, a
//! scatter plot, a grayscale heat map, and a phase-portrait polyline. No
//! plotting dependency; coordinates are formatted with fixed precision so a
//! given input always yields identical bytes.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 50.0;

fn document(title: &str, body: String) -> String {
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" ",
            "viewBox=\"0 0 {w} {h}\">\n",
            "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
            "<text x=\"{mx}\" y=\"24\" font-family=\"monospace\" font-size=\"14\">{title}</text>\n",
            "{body}</svg>\n"
        ),
        w = WIDTH,
        h = HEIGHT,
        mx = MARGIN,
        title = title,
        body = body,
    )
}

fn frame() -> String {
    format!(
        "<rect x=\"{x}\" y=\"{y}\" width=\"{w}\" height=\"{h}\" fill=\"none\" stroke=\"black\"/>\n",
        x = MARGIN,
        y = MARGIN,
        w = WIDTH - 2.0 * MARGIN,
        h = HEIGHT - 2.0 * MARGIN,
    )
}

/// Map a value in [lo, hi] to the horizontal plot range.
fn x_pos(value: f64, lo: f64, hi: f64) -> f64 {
    let span = if hi > lo { hi - lo } else { 1.0 };
    MARGIN + (value - lo) / span * (WIDTH - 2.0 * MARGIN)
}

/// Map a value in [lo, hi] to the vertical plot range (flipped).
fn y_pos(value: f64, lo: f64, hi: f64) -> f64 {
    let span = if hi > lo { hi - lo } else { 1.0 };
    HEIGHT - MARGIN - (value - lo) / span * (HEIGHT - 2.0 * MARGIN)
}

/// Histogram of empirical probabilities with the model law overlaid as a
/// polyline with circle markers.
pub fn histogram_with_overlay(title: &str, empirical: &[f64], model: &[f64]) -> String {
    let n = empirical.len().max(1);
    let top = empirical
        .iter()
        .chain(model.iter())
        .fold(0.0f64, |a, &b| a.max(b))
        .max(1e-12)
        * 1.1;
    let slot = (WIDTH - 2.0 * MARGIN) / n as f64;
    let mut body = frame();
    for (k, &p) in empirical.iter().enumerate() {
        let x = MARGIN + k as f64 * slot + 0.15 * slot;
        let y = y_pos(p, 0.0, top);
        let h = HEIGHT - MARGIN - y;
        let _ = writeln!(
            body,
            "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"#7799cc\"/>",
            w = 0.7 * slot,
        );
    }
    let mut points = String::new();
    for (k, &p) in model.iter().enumerate() {
        let x = MARGIN + (k as f64 + 0.5) * slot;
        let y = y_pos(p, 0.0, top);
        let _ = write!(points, "{x:.2},{y:.2} ");
        let _ = writeln!(
            body,
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"black\"/>"
        );
    }
    let _ = writeln!(
        body,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"black\"/>",
        points.trim_end()
    );
    document(title, body)
}

/// Scatter plot of (index, ordinate) pairs.
pub fn scatter(title: &str, values: &[f64]) -> String {
    let hi = values.iter().fold(0.0f64, |a, &b| a.max(b)).max(1.0);
    let n = values.len().max(1) as f64;
    let mut body = frame();
    for (j, &v) in values.iter().enumerate() {
        let x = x_pos((j + 1) as f64, 0.0, n + 1.0);
        let y = y_pos(v, 0.0, hi * 1.05);
        let _ = writeln!(
            body,
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"#333333\"/>"
        );
    }
    document(title, body)
}

/// Grayscale heat map of a rectangular grid (row-major, rows top to bottom);
/// values are compressed with ln(1 + v) before normalisation.
pub fn heatmap(title: &str, rows: &[Vec<f64>]) -> String {
    let n_rows = rows.len().max(1);
    let n_cols = rows.first().map_or(1, |r| r.len()).max(1);
    let compressed: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| (1.0 + v.max(0.0)).ln()).collect())
        .collect();
    let hi = compressed
        .iter()
        .flatten()
        .fold(0.0f64, |a, &b| a.max(b))
        .max(1e-12);
    let cell_w = (WIDTH - 2.0 * MARGIN) / n_cols as f64;
    let cell_h = (HEIGHT - 2.0 * MARGIN) / n_rows as f64;
    let mut body = String::new();
    for (i, row) in compressed.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let shade = (255.0 * (1.0 - v / hi)).round().clamp(0.0, 255.0) as u8;
            let x = MARGIN + j as f64 * cell_w;
            let y = MARGIN + i as f64 * cell_h;
            let _ = writeln!(
                body,
                "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" \
                 fill=\"rgb({shade},{shade},{shade})\"/>",
                w = cell_w + 0.5,
                h = cell_h + 0.5,
            );
        }
    }
    body.push_str(&frame());
    document(title, body)
}

/// Phase portrait: a polyline through (x, y) samples, auto-scaled.
pub fn phase_portrait(title: &str, points: &[(f64, f64)]) -> String {
    if points.is_empty() {
        return document(title, frame());
    }
    let (mut x_lo, mut x_hi, mut y_lo, mut y_hi) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in points {
        x_lo = x_lo.min(x);
        x_hi = x_hi.max(x);
        y_lo = y_lo.min(y);
        y_hi = y_hi.max(y);
    }
    let mut path = String::new();
    for &(x, y) in points {
        let _ = write!(
            path,
            "{:.2},{:.2} ",
            x_pos(x, x_lo, x_hi),
            y_pos(y, y_lo, y_hi)
        );
    }
    let mut body = frame();
    let _ = writeln!(
        body,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#225588\" stroke-width=\"0.6\"/>",
        path.trim_end()
    );
    document(title, body)
}
