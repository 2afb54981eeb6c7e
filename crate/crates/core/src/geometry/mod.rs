//! Stroke trapezoids, vertex canonicalization, areas and the affine group.
//!
//! Orientation is measured in the image frame (row axis down, column axis
//! right). With [`signed_area`] defined as `½ Σ pₖ × pₖ₊₁`, a traversal that
//! looks clockwise on screen has negative signed area.

mod affine;
mod point;
pub mod raster;

pub use affine::AffineTransform;
pub use point::Point;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Quad = [Point; 4];

/// Quadrilateral joining two cluster circles.
///
/// `vertices[0..2]` is the chord through cluster `src.0`'s centroid,
/// `vertices[2..4]` the chord through cluster `src.1`'s centroid, and the
/// cycle is clockwise on screen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trapezoid {
    pub vertices: Quad,
    pub src: (usize, usize),
}

impl Trapezoid {
    /// Builds the trapezoid between circle `(c_i, r_i)` of cluster `src.0`
    /// and circle `(c_j, r_j)` of cluster `src.1`.
    pub fn connect(
        src: (usize, usize),
        c_i: Point,
        r_i: f64,
        c_j: Point,
        r_j: f64,
    ) -> Result<Self> {
        if src.0 == src.1 {
            return Err(Error::DegenerateGeometry(format!(
                "trapezoid source pair ({}, {}) repeats a cluster",
                src.0, src.1
            )));
        }
        Ok(Self {
            vertices: construct_trapezoid(c_i, r_i, c_j, r_j)?,
            src,
        })
    }

    pub fn area(&self) -> f64 {
        polygon_area(&self.vertices)
    }

    /// Midpoint of the `src.0` chord, i.e. that cluster's centroid.
    pub fn head(&self) -> Point {
        (self.vertices[0] + self.vertices[1]) * 0.5
    }

    /// Midpoint of the `src.1` chord.
    pub fn tail(&self) -> Point {
        (self.vertices[2] + self.vertices[3]) * 0.5
    }

    /// Orientation-preserving similarity taking the reference segment
    /// `(0,0) -> (0,1)` onto `head -> tail`.
    pub fn pose(&self) -> AffineTransform {
        let (h, d) = (self.head(), self.tail() - self.head());
        AffineTransform::new([[d.col, d.row], [-d.row, d.col]], [h.row, h.col])
            .expect("connected centroids are distinct")
    }

    /// Nine-component feature: four vertices in order, then `density`.
    pub fn feature(&self, density: f64) -> [f64; 9] {
        let v = &self.vertices;
        [
            v[0].row, v[0].col, v[1].row, v[1].col, v[2].row, v[2].col, v[3].row, v[3].col, density,
        ]
    }
}

/// Closed-form trapezoid between two circles.
///
/// Each parallel side is the diameter of its circle perpendicular to the
/// centroid line, so `|P1P2| = 2 r_i` and `|P3P4| = 2 r_j`. The result is
/// canonicalized by [`canonicalize_clockwise`].
pub fn construct_trapezoid(c_i: Point, r_i: f64, c_j: Point, r_j: f64) -> Result<Quad> {
    if !(r_i > 0.0 && r_j > 0.0 && r_i.is_finite() && r_j.is_finite()) {
        return Err(Error::invalid(format!(
            "trapezoid radii must be positive and finite, got {r_i} and {r_j}"
        )));
    }
    if !c_i.is_finite() || !c_j.is_finite() {
        return Err(Error::invalid("trapezoid centroids must be finite"));
    }
    let axis = c_j - c_i;
    let len = axis.norm();
    if len <= 1e-12 {
        return Err(Error::DegenerateGeometry(format!(
            "coincident centroids at {c_i:?}"
        )));
    }
    let normal = Point::new(-axis.col / len, axis.row / len);
    let raw = [
        c_i + normal * r_i,
        c_i - normal * r_i,
        c_j - normal * r_j,
        c_j + normal * r_j,
    ];
    canonicalize_clockwise(&raw)
}

pub fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    (0..n).map(|k| v[k].cross(v[(k + 1) % n])).sum::<f64>() * 0.5
}

/// Absolute shoelace area; zero for degenerate input.
pub fn polygon_area(v: &[Point]) -> f64 {
    signed_area(v).abs()
}

pub fn circle_area(radius: f64) -> f64 {
    std::f64::consts::PI * radius * radius
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    orient(a, b, c) * orient(a, b, d) < 0.0 && orient(c, d, a) * orient(c, d, b) < 0.0
}

/// Relabels a quadrilateral so its cycle is clockwise on screen.
///
/// `v[0]` and `v[1]` are taken as the head side. The output starts at the
/// head vertex whose clockwise successor is the other head vertex, so the
/// head chord stays `P1P2` and the tail chord `P3P4`. The output is a
/// rotation or reflection of the input cycle.
pub fn canonicalize_clockwise(v: &Quad) -> Result<Quad> {
    if v.iter().any(|p| !p.is_finite()) {
        return Err(Error::invalid("quadrilateral has non-finite vertices"));
    }
    if segments_cross(v[0], v[1], v[2], v[3]) || segments_cross(v[1], v[2], v[3], v[0]) {
        return Err(Error::DegenerateGeometry(
            "quadrilateral is self-intersecting".into(),
        ));
    }
    let area = signed_area(v);
    let scale = v.iter().map(|p| p.distance(v[0])).fold(0.0_f64, f64::max);
    if area.abs() <= 1e-12 * scale * scale.max(1.0) || scale == 0.0 {
        return Err(Error::DegenerateGeometry(
            "quadrilateral has zero area".into(),
        ));
    }
    Ok(if area < 0.0 {
        *v
    } else {
        // reversed cycle v0 v3 v2 v1; rotate so v1 -> v0 leads
        [v[1], v[0], v[3], v[2]]
    })
}
