//! Scanline coverage of convex polygons and disks over a pixel grid.
//!
//! A pixel is covered when its center `(row, col)` lies inside the shape or
//! on its boundary. Coverage is clipped to the raster.

use super::Point;

/// Boundary slack absorbing round-off in edge intersections.
pub const BOUNDARY_EPS: f64 = 1e-9;

/// Covered pixels `col_start..col_end` of one raster row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub row: usize,
    pub col_start: usize,
    pub col_end: usize,
}

impl Span {
    pub fn len(&self) -> usize {
        self.col_end - self.col_start
    }

    pub fn is_empty(&self) -> bool {
        self.col_end == self.col_start
    }
}

fn clip_span(row: i64, lo: f64, hi: f64, width: usize) -> Option<Span> {
    let start = (lo - BOUNDARY_EPS).ceil().max(0.0);
    let end = (hi + BOUNDARY_EPS).floor().min(width as f64 - 1.0);
    (start <= end).then(|| Span {
        row: row as usize,
        col_start: start as usize,
        col_end: end as usize + 1,
    })
}

fn row_range(min: f64, max: f64, height: usize) -> std::ops::RangeInclusive<i64> {
    let first = (min - BOUNDARY_EPS).ceil().max(0.0) as i64;
    let last = (max + BOUNDARY_EPS).floor().min(height as f64 - 1.0) as i64;
    first..=last
}

/// Row spans covered by a convex polygon (either orientation).
pub fn convex_spans(poly: &[Point], width: usize, height: usize) -> Vec<Span> {
    if poly.is_empty() || width == 0 || height == 0 {
        return Vec::new();
    }
    let (min_row, max_row) = poly
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.row), hi.max(p.row))
        });
    let n = poly.len();
    let mut spans = Vec::new();
    for row in row_range(min_row, max_row, height) {
        let y = row as f64;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..n {
            let (a, b) = (poly[k], poly[(k + 1) % n]);
            let (da, db) = (a.row - y, b.row - y);
            if da.abs() <= BOUNDARY_EPS && db.abs() <= BOUNDARY_EPS {
                lo = lo.min(a.col.min(b.col));
                hi = hi.max(a.col.max(b.col));
            } else if da.abs() <= BOUNDARY_EPS {
                lo = lo.min(a.col);
                hi = hi.max(a.col);
            } else if db.abs() <= BOUNDARY_EPS {
                lo = lo.min(b.col);
                hi = hi.max(b.col);
            } else if (da < 0.0) != (db < 0.0) {
                let t = da / (da - db);
                let col = a.col + t * (b.col - a.col);
                lo = lo.min(col);
                hi = hi.max(col);
            }
        }
        if lo <= hi {
            spans.extend(clip_span(row, lo, hi, width));
        }
    }
    spans
}

/// Row spans covered by the closed disk of `radius` about `center`.
pub fn disk_spans(center: Point, radius: f64, width: usize, height: usize) -> Vec<Span> {
    if radius.is_nan() || radius < 0.0 || width == 0 || height == 0 {
        return Vec::new();
    }
    let mut spans = Vec::new();
    for row in row_range(center.row - radius, center.row + radius, height) {
        let dy = row as f64 - center.row;
        let h2 = radius * radius - dy * dy;
        if h2 < -BOUNDARY_EPS {
            continue;
        }
        let half = h2.max(0.0).sqrt();
        spans.extend(clip_span(row, center.col - half, center.col + half, width));
    }
    spans
}
