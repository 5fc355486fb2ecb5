//! SVG and CSV output of polylines.

use std::io::Write;

use crate::error::{Error, Result};
use crate::geometry::convex_hull_2d;
use crate::similarity::Point;

fn planar(points: &[Point]) -> Result<Vec<[f64; 2]>> {
    points
        .iter()
        .map(|p| match p.dim() {
            1 => Ok([p[0], 0.0]),
            2 => Ok([p[0], p[1]]),
            d => Err(Error::UnsupportedDimension { what: "SVG output", required: 2, found: d }),
        })
        .collect()
}

/// One `<polyline>` through `points` with the y axis pointing up. The view
/// box is the bounding box of the vertex hull plus 5% of its larger side on
/// every edge.
pub fn write_svg(points: &[Point], out: &mut impl Write) -> Result<()> {
    let pts = planar(points)?;
    if pts.is_empty() {
        return Err(Error::NonFinite("empty polyline"));
    }
    // SVG y grows downwards.
    let flipped: Vec<[f64; 2]> = pts.iter().map(|&[x, y]| [x, -y]).collect();
    let hull = convex_hull_2d(flipped.clone());
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &[x, y] in &hull {
        (x0, y0, x1, y1) = (x0.min(x), y0.min(y), x1.max(x), y1.max(y));
    }
    let side = (x1 - x0).max(y1 - y0);
    let margin = if side > 0.0 { 0.05 * side } else { 1.0 };
    let (vx, vy, w, h) = (x0 - margin, y0 - margin, x1 - x0 + 2.0 * margin, y1 - y0 + 2.0 * margin);
    let stroke = side.max(f64::MIN_POSITIVE) / 500.0;

    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{vx} {vy} {w} {h}">"#)?;
    write!(out, r#"<polyline fill="none" stroke="black" stroke-width="{stroke}" points=""#)?;
    for (i, [x, y]) in flipped.iter().enumerate() {
        if i > 0 {
            out.write_all(b" ")?;
        }
        write!(out, "{x},{y}")?;
    }
    writeln!(out, r#""/>"#)?;
    writeln!(out, "</svg>")?;
    Ok(())
}

/// One point per row; floats in shortest round-trip form.
pub fn write_csv(points: &[Point], out: impl Write) -> Result<()> {
    let dim = points.first().map_or(0, Point::dim);
    let mut w = csv::Writer::from_writer(out);
    let header: Vec<String> = match dim {
        1 => vec!["x".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        n => (1..=n).map(|k| format!("x{k}")).collect(),
    };
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(&header).map_err(csv_err)?;
    for p in points {
        w.write_record(p.coords().iter().map(f64::to_string)).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
