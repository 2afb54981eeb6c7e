use std::collections::BTreeMap;

use super::ExtractionResult;
use crate::geometry::{Point, Quad};
use crate::imaging::{BinaryImage, GrayImage};

/// Gray level of trapezoid outlines.
pub const TRAPEZOID_LEVEL: u8 = 160;
/// Gray level of cluster circles.
pub const CIRCLE_LEVEL: u8 = 96;

/// What an overlay draws: trapezoids densest first, plus the circle of every
/// cluster id they reference.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OverlayShapes {
    pub trapezoids: Vec<(Quad, (usize, usize))>,
    pub circles: BTreeMap<usize, (Point, f64)>,
}

impl From<&ExtractionResult> for OverlayShapes {
    fn from(r: &ExtractionResult) -> Self {
        Self {
            trapezoids: r
                .trapezoids
                .iter()
                .map(|s| (s.trap.vertices, s.trap.src))
                .collect(),
            circles: r
                .circles
                .iter()
                .map(|c| (c.id, (c.centroid, c.radius)))
                .collect(),
        }
    }
}

impl OverlayShapes {
    /// Draws the top `n` trapezoids (clipped to what is available) over a
    /// grayscale copy of `img`.
    pub fn draw(&self, img: &BinaryImage, n: usize) -> GrayImage {
        let mut out = img.to_gray();
        let top = &self.trapezoids[..n.min(self.trapezoids.len())];
        for (_, (i, j)) in top {
            for id in [i, j] {
                if let Some(&(c, r)) = self.circles.get(id) {
                    draw_circle(&mut out, c, r, CIRCLE_LEVEL);
                }
            }
        }
        for (quad, _) in top {
            for k in 0..4 {
                draw_segment(&mut out, quad[k], quad[(k + 1) % 4], TRAPEZOID_LEVEL);
            }
        }
        out
    }
}

/// Overlay of the `n` densest trapezoids and their circles; the input is
/// left untouched.
pub fn render_overlay(img: &BinaryImage, result: &ExtractionResult, n: usize) -> GrayImage {
    OverlayShapes::from(result).draw(img, n)
}

fn plot(img: &mut GrayImage, p: Point, level: u8) {
    let (r, c) = (p.row.round(), p.col.round());
    if r >= 0.0 && c >= 0.0 && (r as usize) < img.height() && (c as usize) < img.width() {
        img.set(r as usize, c as usize, level);
    }
}

// Samples the exact segment at half-pixel steps and rounds each sample, so
// every lit pixel is within √2/2 of the segment.
fn draw_segment(img: &mut GrayImage, a: Point, b: Point, level: u8) {
    let d = b - a;
    let steps = (2.0 * d.row.abs().max(d.col.abs())).ceil().max(1.0) as usize;
    for s in 0..=steps {
        plot(img, a + d * (s as f64 / steps as f64), level);
    }
}

fn draw_circle(img: &mut GrayImage, c: Point, r: f64, level: u8) {
    let steps = (std::f64::consts::TAU * r * 2.0).ceil().max(8.0) as usize;
    for s in 0..steps {
        let a = s as f64 * std::f64::consts::TAU / steps as f64;
        plot(img, c + Point::new(a.sin(), a.cos()) * r, level);
    }
}
