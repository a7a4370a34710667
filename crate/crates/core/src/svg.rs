//! Static SVG pictures of covers of the flat torus `T^2`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::covering::{CubeCover, Verdict};

const SIZE: f64 = 400.0;
const PAD: f64 = 10.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SvgError {
    #[error("only covers of the 2-torus can be drawn, got dimension {0}")]
    DimensionUnsupported(usize),
}

/// Splits the arc `[start, start + len)` of `R/Z` into pieces inside `[0, 1]`.
fn wrap(start: f64, len: f64) -> Vec<(f64, f64)> {
    let len = len.min(1.0);
    let end = start + len;
    if end <= 1.0 {
        vec![(start, len)]
    } else {
        vec![(start, 1.0 - start), (0.0, end - 1.0)]
    }
}

fn px(v: f64) -> String {
    format!("{:.3}", PAD + v * SIZE)
}

/// `y` grows upwards, as in the usual picture of the unit square.
fn py(v: f64) -> String {
    format!("{:.3}", PAD + (1.0 - v) * SIZE)
}

/// Renders `cover`: the unit square, each cube as up to four wrapped
/// rectangles in its own hue at 40% opacity, base points as dots, and the
/// uncovered witness of an attached certificate as a cross.
pub fn emit_svg(cover: &CubeCover) -> Result<String, SvgError> {
    if cover.dimension() != 2 {
        return Err(SvgError::DimensionUnsupported(cover.dimension()));
    }
    let side = cover.side().to_f64();
    let total = SIZE + 2.0 * PAD;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" viewBox="0 0 {total} {total}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="{PAD}" y="{PAD}" width="{SIZE}" height="{SIZE}" fill="white" stroke="black" stroke-width="1"/>"#
    );
    let count = cover.len().max(1);
    for (i, base) in cover.bases().iter().enumerate() {
        let p = base.to_f64();
        let hue = (i * 360) / count;
        let _ = writeln!(
            out,
            r#"<g class="cube" fill="hsl({hue},70%,50%)" fill-opacity="0.4">"#
        );
        for (x0, w) in wrap(p[0], side) {
            for (y0, h) in wrap(p[1], side) {
                let _ = writeln!(
                    out,
                    r#"<rect x="{}" y="{}" width="{:.3}" height="{:.3}"/>"#,
                    px(x0),
                    py(y0 + h),
                    w * SIZE,
                    h * SIZE
                );
            }
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(
            out,
            r#"<circle class="base" cx="{}" cy="{}" r="2.5" fill="black"/>"#,
            px(p[0]),
            py(p[1])
        );
    }
    if let Some(Verdict::Uncovered(w)) = cover.certificate.as_ref().map(|c| &c.verdict) {
        let (cx, cy) = (PAD + w.approx[0] * SIZE, PAD + (1.0 - w.approx[1]) * SIZE);
        let _ = writeln!(
            out,
            r#"<path class="witness" d="M {:.3} {:.3} L {:.3} {:.3} M {:.3} {:.3} L {:.3} {:.3}" stroke="red" stroke-width="2"/>"#,
            cx - 6.0,
            cy - 6.0,
            cx + 6.0,
            cy + 6.0,
            cx - 6.0,
            cy + 6.0,
            cx + 6.0,
            cy - 6.0
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
