//! Static SVG panels for orientation fields.
//!
//! One glyph per sample, placed on a circle at the sample's azimuth. The
//! `arrows` style draws each vector in a fixed axonometric view along
//! `(1, 1, 1)/sqrt 3` and colors it by the third component; `ellipses` draws the
//! polarization ellipse of the Stokes vector. Output depends only on the
//! document, so identical inputs give identical bytes.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt::Write;

use crate::error::Result;
use crate::format::FieldDocument;
use crate::orientation::{stokes_to_ellipse, Handedness};
use crate::sphere::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlyphStyle {
    Arrows,
    Ellipses,
}

const SIZE: f64 = 400.0;
const CENTRE: f64 = SIZE / 2.0;
const RING: f64 = 150.0;

/// Screen-right and screen-up for the view direction `(1, 1, 1)/sqrt 3`.
fn screen_axes() -> (Vec3, Vec3) {
    let right = Vec3::new(-FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0);
    let k = 1.0 / 6f64.sqrt();
    let up = Vec3::new(-k, -k, 2.0 * k);
    (right, up)
}

/// Diverging blue-grey-red ramp over `[-1, 1]`.
fn ramp(v: f64) -> String {
    let v = v.clamp(-1.0, 1.0);
    let grey = 160.0;
    let (r, g, b) = if v >= 0.0 {
        (
            grey + (215.0 - grey) * v,
            grey * (1.0 - v) + 40.0 * v,
            grey * (1.0 - v) + 40.0 * v,
        )
    } else {
        let w = -v;
        (
            grey * (1.0 - w) + 40.0 * w,
            grey * (1.0 - w) + 80.0 * w,
            grey + (215.0 - grey) * w,
        )
    };
    format!(
        "#{:02x}{:02x}{:02x}",
        r.round() as u8,
        g.round() as u8,
        b.round() as u8
    )
}

fn glyph_length(n: usize) -> f64 {
    let spacing = 2.0 * PI * RING / n as f64;
    (0.9 * spacing).clamp(6.0, 36.0)
}

fn arrow(out: &mut String, x: f64, y: f64, s: Vec3, len: f64) {
    let (right, up) = screen_axes();
    let dx = s.dot(right) * len;
    let dy = -s.dot(up) * len;
    let colour = ramp(s.z);
    let shown = dx.hypot(dy);
    if shown < 1e-6 * len {
        // Pointing along the view direction: draw a dot.
        let r = 0.08 * len;
        let _ = writeln!(
            out,
            r#"  <circle class="glyph" cx="{x:.3}" cy="{y:.3}" r="{r:.3}" fill="{colour}"/>"#
        );
        return;
    }
    let (x0, y0) = (x - 0.5 * dx, y - 0.5 * dy);
    let (x1, y1) = (x + 0.5 * dx, y + 0.5 * dy);
    let (ux, uy) = (dx / shown, dy / shown);
    let head = 0.25 * len;
    let (hx, hy) = (x1 - head * ux, y1 - head * uy);
    let (px, py) = (-uy * 0.5 * head, ux * 0.5 * head);
    let _ = writeln!(
        out,
        r#"  <path class="glyph" d="M{x0:.3} {y0:.3}L{x1:.3} {y1:.3}M{:.3} {:.3}L{x1:.3} {y1:.3}L{:.3} {:.3}" stroke="{colour}" stroke-width="1.5" fill="none"/>"#,
        hx + px,
        hy + py,
        hx - px,
        hy - py
    );
}

fn ellipse(out: &mut String, x: f64, y: f64, s: Vec3, len: f64) {
    let e = stokes_to_ellipse(s);
    let rx = 0.5 * len;
    let ry = (rx * e.ellipticity.tan().abs()).max(0.6);
    let colour = match e.handedness {
        Handedness::Right => "#d7282f",
        Handedness::Left => "#2850d7",
        Handedness::Linear => "#303030",
    };
    let deg = -e.orientation.to_degrees();
    let _ = writeln!(
        out,
        r#"  <ellipse class="glyph" cx="0" cy="0" rx="{rx:.3}" ry="{ry:.3}" transform="translate({x:.3} {y:.3}) rotate({deg:.3})" stroke="{colour}" stroke-width="1.2" fill="none"/>"#
    );
}

/// Renders a validated field document.
pub fn render_svg(doc: &FieldDocument, style: GlyphStyle) -> Result<String> {
    doc.validate()?;
    let len = glyph_length(doc.rows.len());
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let title = match doc.state {
        Some(s) => format!(
            "sphere {} (l, m) = ({}, {}), {} samples",
            s.sphere,
            s.l,
            s.m,
            doc.rows.len()
        ),
        None => format!("{} samples", doc.rows.len()),
    };
    let _ = writeln!(out, "  <title>{title}</title>");
    let _ = writeln!(
        out,
        r##"  <rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#ffffff"/>"##
    );
    let _ = writeln!(
        out,
        r##"  <circle class="ring" cx="{CENTRE}" cy="{CENTRE}" r="{RING}" stroke="#c8c8c8" stroke-dasharray="4 4" fill="none"/>"##
    );
    for (phi, s) in doc.vectors() {
        let x = CENTRE + RING * phi.cos();
        let y = CENTRE - RING * phi.sin();
        match style {
            GlyphStyle::Arrows => arrow(&mut out, x, y, s, len),
            GlyphStyle::Ellipses => ellipse(&mut out, x, y, s, len),
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
