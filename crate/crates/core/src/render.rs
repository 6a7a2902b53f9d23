//! Deterministic SVG drawings of plane tropical curves and of skeleta.
//!
//! Coordinates stay rational until the final conversion to pixels, which
//! uses a fixed scale and two decimals.

use std::fmt::Write;

use crate::complex::TropicalComplex;
use crate::error::{Error, Result};
use crate::exactnum::Rat;
use crate::lattice::add_scaled;
use crate::skeleton::Skeleton;

const CANVAS: f64 = 480.0;
const MARGIN: f64 = 40.0;

fn header(width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.2}\" height=\"{h:.2}\" viewBox=\"0 0 {w:.2} {h:.2}\">\n",
        w = width,
        h = height
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn label(out: &mut String, x: f64, y: f64, text: &str) {
    let _ = writeln!(out, "  <text x=\"{x:.2}\" y=\"{y:.2}\" font-size=\"12\" fill=\"#333\">{}</text>", escape(text));
}

fn line(out: &mut String, a: (f64, f64), b: (f64, f64), width: u64, class: &str) {
    let _ = writeln!(
        out,
        "  <line class=\"{class}\" x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"{}\"/>",
        a.0,
        a.1,
        b.0,
        b.1,
        width.min(4)
    );
}

fn dot(out: &mut String, p: (f64, f64)) {
    let _ = writeln!(out, "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"black\"/>", p.0, p.1);
}

fn mult_suffix(m: u64) -> String {
    if m > 1 {
        format!("\u{00d7}{m}")
    } else {
        String::new()
    }
}

/// Draws a curve in `Q^2`. Bounded edges are labelled with their lattice
/// length, and every cell of multiplicity `m > 1` with `×m`. Rays are cut
/// off after one primitive step.
pub fn render_complex_svg(tc: &TropicalComplex) -> Result<String> {
    if tc.dim != 2 {
        return Err(Error::UnsupportedDimension(tc.dim));
    }
    if tc.vertices.is_empty() {
        let mut out = header(CANVAS, CANVAS);
        out.push_str("</svg>\n");
        return Ok(out);
    }
    let ray_ends: Vec<Vec<Rat>> = tc.rays.iter().map(|r| add_scaled(&tc.vertices[r.base], &r.dir, &Rat::one())).collect();
    let all: Vec<&Vec<Rat>> = tc.vertices.iter().chain(&ray_ends).collect();
    let min = |k: usize| all.iter().map(|p| p[k].clone()).min().unwrap();
    let max = |k: usize| all.iter().map(|p| p[k].clone()).max().unwrap();
    let (x0, y0) = (min(0), min(1));
    let span = std::cmp::max(max(0) - &x0, max(1) - &y0);
    let span = if span.is_zero() { Rat::one() } else { span };
    let scale = (CANVAS - 2.0 * MARGIN) / span.to_f64();
    // The y axis points up in the plane and down on the page.
    let px = |p: &[Rat]| {
        (MARGIN + (&p[0] - &x0).to_f64() * scale, CANVAS - MARGIN - (&p[1] - &y0).to_f64() * scale)
    };
    let mut out = header(CANVAS, CANVAS);
    for (i, s) in tc.segments.iter().enumerate() {
        let (a, b) = (px(&tc.vertices[s.u]), px(&tc.vertices[s.v]));
        line(&mut out, a, b, s.mult, "segment");
        let text = format!("{}{}", short(&tc.segment_length(i)), mult_suffix(s.mult));
        label(&mut out, (a.0 + b.0) / 2.0 + 4.0, (a.1 + b.1) / 2.0 - 4.0, &text);
    }
    for (r, end) in tc.rays.iter().zip(&ray_ends) {
        let (a, b) = (px(&tc.vertices[r.base]), px(end));
        line(&mut out, a, b, r.mult, "ray");
        if r.mult > 1 {
            label(&mut out, b.0 + 4.0, b.1 - 4.0, &mult_suffix(r.mult));
        }
    }
    for v in &tc.vertices {
        dot(&mut out, px(v));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Layer of each vertex (hop distance from the base vertex) and which
/// edges belong to the BFS tree.
fn layers(sk: &Skeleton) -> (Vec<usize>, Vec<bool>) {
    let mut depth = vec![0usize; sk.vertices.len()];
    let mut tree = vec![false; sk.edges.len()];
    if sk.vertices.is_empty() {
        return (depth, tree);
    }
    for (v, via) in sk.bfs_tree() {
        if let Some((e, parent)) = via {
            depth[v] = depth[parent] + 1;
            tree[e] = true;
        }
    }
    (depth, tree)
}

fn short(r: &Rat) -> String {
    let s = r.to_fraction_string();
    s.strip_suffix("/1").map(str::to_string).unwrap_or(s)
}

/// Draws a skeleton in layers by hop distance from the base vertex. Edges
/// carry their lengths; rays are short stubs labelled by their puncture.
pub fn render_skeleton_svg(sk: &Skeleton) -> String {
    const STEP_X: f64 = 140.0;
    const STEP_Y: f64 = 90.0;
    const STUB: f64 = 36.0;
    let (depth, tree) = layers(sk);
    let mut slot = vec![0usize; sk.vertices.len()];
    let mut per_layer: Vec<usize> = Vec::new();
    for (v, &d) in depth.iter().enumerate() {
        if per_layer.len() <= d {
            per_layer.resize(d + 1, 0);
        }
        slot[v] = per_layer[d];
        per_layer[d] += 1;
    }
    let rays_at = |v: usize| sk.rays.iter().filter(|r| r.base == v).count();
    let tallest = per_layer.iter().copied().max().unwrap_or(0).max(1);
    let max_rays = (0..sk.vertices.len()).map(rays_at).max().unwrap_or(0);
    let width = 2.0 * MARGIN + STEP_X * per_layer.len().saturating_sub(1) as f64 + STUB + 60.0;
    let height = 2.0 * MARGIN + STEP_Y * (tallest - 1) as f64 + 14.0 * max_rays as f64 + STUB;
    let pos: Vec<(f64, f64)> = (0..sk.vertices.len())
        .map(|v| {
            (MARGIN + STEP_X * depth[v] as f64, MARGIN + STEP_Y * slot[v] as f64)
        })
        .collect();
    let mut out = header(width, height);
    for (i, e) in sk.edges.iter().enumerate() {
        let (a, b) = (pos[e.u], pos[e.v]);
        let text = short(&e.length);
        if e.u == e.v {
            let _ = writeln!(
                out,
                "  <circle class=\"loop\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"{:.2}\" fill=\"none\" stroke=\"black\"/>",
                a.0,
                a.1 + STUB / 2.0,
                STUB / 2.0
            );
            label(&mut out, a.0 + STUB / 2.0 + 4.0, a.1 + STUB / 2.0, &text);
        } else if !tree[i] {
            // Closing edge of a cycle: bend it below both ends.
            let mid = ((a.0 + b.0) / 2.0, a.1.max(b.1) + STEP_Y / 2.0);
            let _ = writeln!(
                out,
                "  <path class=\"edge\" d=\"M {:.2} {:.2} Q {:.2} {:.2} {:.2} {:.2}\" fill=\"none\" stroke=\"black\"/>",
                a.0,
                a.1,
                mid.0,
                mid.1,
                b.0,
                b.1
            );
            label(&mut out, mid.0, (a.1.max(b.1) + mid.1) / 2.0 + 12.0, &text);
        } else {
            line(&mut out, a, b, 1, "edge");
            label(&mut out, (a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0 - 6.0, &text);
        }
    }
    let mut seen = vec![0usize; sk.vertices.len()];
    for r in &sk.rays {
        let a = pos[r.base];
        let k = seen[r.base];
        seen[r.base] += 1;
        let b = (a.0 + STUB, a.1 + 14.0 * k as f64 + 10.0);
        let _ = writeln!(
            out,
            "  <line class=\"ray\" x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"gray\" stroke-dasharray=\"4 2\"/>",
            a.0, a.1, b.0, b.1
        );
        label(&mut out, b.0 + 3.0, b.1 + 4.0, &r.puncture);
    }
    for (v, p) in pos.iter().enumerate() {
        dot(&mut out, *p);
        label(&mut out, p.0 - 10.0, p.1 - 8.0, &sk.vertices[v].label);
    }
    out.push_str("</svg>\n");
    out
}
