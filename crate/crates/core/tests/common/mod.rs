//! Fixtures and brute-force oracles shared by the integration suites.
#![allow(dead_code)]

use rand::Rng;
use stroketrap::geometry::Point;
use stroketrap::imaging::{BinaryImage, Coord};
use stroketrap::synthesis::{Node, StrokeGraph};

/// Exhaustive point-in-convex-polygon test over every pixel center, using
/// only edge half-plane signs. Row-major.
pub fn brute_force_mask(width: usize, height: usize, poly: &[Point]) -> Vec<bool> {
    let n = poly.len();
    let mut out = Vec::with_capacity(width * height);
    for row in 0..height {
        for col in 0..width {
            let p = Point::new(row as f64, col as f64);
            let mut neg = true;
            let mut pos = true;
            for k in 0..n {
                let (a, b) = (poly[k], poly[(k + 1) % n]);
                let e = b - a;
                let side = (e.row * (p.col - a.col) - e.col * (p.row - a.row)) / e.norm();
                neg &= side <= 1e-9;
                pos &= side >= -1e-9;
            }
            out.push(neg || pos);
        }
    }
    out
}

pub fn brute_force_count(img: &BinaryImage, poly: &[Point]) -> usize {
    brute_force_mask(img.width(), img.height(), poly)
        .iter()
        .zip(img.pixels())
        .filter(|(m, &p)| **m && p == 1)
        .count()
}

/// Exhaustive disk membership over pixel centers.
pub fn brute_force_disk(width: usize, height: usize, c: Point, r: f64) -> Vec<bool> {
    let mut out = Vec::with_capacity(width * height);
    for row in 0..height {
        for col in 0..width {
            out.push((row as f64 - c.row).hypot(col as f64 - c.col) <= r + 1e-9);
        }
    }
    out
}

/// 8-connected components of the ink, each sorted row-major, ordered by
/// their first pixel.
pub fn connected_components(img: &BinaryImage) -> Vec<Vec<Coord>> {
    let (w, h) = (img.width(), img.height());
    let mut seen = vec![false; w * h];
    let mut comps = Vec::new();
    for start in 0..w * h {
        if seen[start] || img.pixels()[start] == 0 {
            continue;
        }
        let mut stack = vec![start];
        seen[start] = true;
        let mut comp = Vec::new();
        while let Some(idx) = stack.pop() {
            let (r, c) = (idx / w, idx % w);
            comp.push(Coord::new(r, c));
            for dr in -1i64..=1 {
                for dc in -1i64..=1 {
                    let (nr, nc) = (r as i64 + dr, c as i64 + dc);
                    if nr < 0 || nc < 0 || nr >= h as i64 || nc >= w as i64 {
                        continue;
                    }
                    let n = nr as usize * w + nc as usize;
                    if !seen[n] && img.pixels()[n] == 1 {
                        seen[n] = true;
                        stack.push(n);
                    }
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

fn min_gap(a: &[Coord], b: &[Coord]) -> f64 {
    let mut best = f64::INFINITY;
    for p in a {
        for q in b {
            let d = (p.row as f64 - q.row as f64).hypot(p.col as f64 - q.col as f64);
            best = best.min(d);
        }
    }
    best
}

/// Random multi-blob scene: `count` solid disks or rectangles whose pixel
/// sets are pairwise at least `min_separation` apart.
pub fn blob_scene(
    rng: &mut impl Rng,
    count: usize,
    size: usize,
    min_separation: f64,
) -> BinaryImage {
    'retry: loop {
        let mut blobs: Vec<Vec<Coord>> = Vec::new();
        let mut attempts = 0;
        while blobs.len() < count {
            attempts += 1;
            if attempts > 500 {
                continue 'retry;
            }
            let r0 = rng.gen_range(2..size - 16);
            let c0 = rng.gen_range(2..size - 16);
            let pts: Vec<Coord> = if rng.gen_bool(0.5) {
                let radius = rng.gen_range(2.5..6.5);
                let (cr, cc) = (r0 as f64 + 7.0, c0 as f64 + 7.0);
                (r0..r0 + 15)
                    .flat_map(|r| (c0..c0 + 15).map(move |c| Coord::new(r, c)))
                    .filter(|p| (p.row as f64 - cr).hypot(p.col as f64 - cc) <= radius)
                    .collect()
            } else {
                let (h, w) = (rng.gen_range(3..13), rng.gen_range(3..13));
                (r0..r0 + h)
                    .flat_map(|r| (c0..c0 + w).map(move |c| Coord::new(r, c)))
                    .collect()
            };
            if blobs.iter().all(|b| min_gap(b, &pts) >= min_separation) {
                blobs.push(pts);
            }
        }
        let mut img = BinaryImage::zeros(size, size).unwrap();
        for p in blobs.iter().flatten() {
            img.set(p.row, p.col, true);
        }
        return img;
    }
}

/// Random edge-free stroke graph: radii in `[4, 8)`, centers at least six
/// times the larger radius apart, every disk inside the canvas.
pub fn spaced_graph(rng: &mut impl Rng, nodes: usize, size: usize) -> StrokeGraph {
    let mut placed: Vec<Node> = Vec::new();
    while placed.len() < nodes {
        let radius = rng.gen_range(4.0..8.0);
        let lo = radius + 2.0;
        let hi = size as f64 - radius - 3.0;
        let c = Point::new(rng.gen_range(lo..hi), rng.gen_range(lo..hi));
        if placed
            .iter()
            .all(|n| n.centroid.distance(c) >= 6.0 * n.radius.max(radius))
        {
            placed.push(Node {
                centroid: c,
                radius,
            });
        }
    }
    StrokeGraph::new(placed, Vec::new(), size, size).unwrap()
}
