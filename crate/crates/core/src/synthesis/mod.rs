//! The inverse map: stroke graphs rendered back into binary images, and
//! paired original/synthetic datasets built from them.

mod pairdb;

pub use pairdb::{build_pair_db, ErrorEntry, Manifest, PairDbConfig, PairEntry, MANIFEST_VERSION};

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::ExtractionResult;
use crate::geometry::raster::{convex_spans, disk_spans};
use crate::geometry::{construct_trapezoid, AffineTransform, Point, Quad};
use crate::imaging::BinaryImage;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub centroid: Point,
    pub radius: f64,
}

/// Trapezoid between nodes `i < j` with its observed ink density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub density: f64,
}

/// Circles joined by trapezoids on a fixed canvas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrokeGraph {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    width: usize,
    height: usize,
}

// Continuous canvas extent in the pixel-center frame.
fn canvas_bounds(width: usize, height: usize) -> (Point, Point) {
    (
        Point::new(-0.5, -0.5),
        Point::new(height as f64 - 0.5, width as f64 - 0.5),
    )
}

fn disk_meets_canvas(c: Point, r: f64, width: usize, height: usize) -> bool {
    let (lo, hi) = canvas_bounds(width, height);
    let nearest = Point::new(c.row.clamp(lo.row, hi.row), c.col.clamp(lo.col, hi.col));
    nearest.distance(c) <= r
}

// Separating-axis test between a convex quad and the canvas rectangle.
fn quad_meets_canvas(q: &Quad, width: usize, height: usize) -> bool {
    let (lo, hi) = canvas_bounds(width, height);
    let rect = [
        lo,
        Point::new(lo.row, hi.col),
        hi,
        Point::new(hi.row, lo.col),
    ];
    let mut axes = vec![Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
    for k in 0..4 {
        let e = q[(k + 1) % 4] - q[k];
        axes.push(Point::new(-e.col, e.row));
    }
    axes.iter().all(|&ax| {
        let proj = |pts: &[Point]| {
            pts.iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
                    let d = p.dot(ax);
                    (a.min(d), b.max(d))
                })
        };
        let (a0, a1) = proj(q);
        let (b0, b1) = proj(&rect);
        a0 <= b1 && b0 <= a1
    })
}

impl StrokeGraph {
    pub fn new(nodes: Vec<Node>, edges: Vec<Edge>, width: usize, height: usize) -> Result<Self> {
        let g = Self {
            nodes,
            edges,
            width,
            height,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn empty(width: usize, height: usize) -> Result<Self> {
        Self::new(Vec::new(), Vec::new(), width, height)
    }

    fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::invalid("stroke graph canvas must be non-empty"));
        }
        for (k, n) in self.nodes.iter().enumerate() {
            if !(n.radius > 0.0 && n.radius.is_finite()) || !n.centroid.is_finite() {
                return Err(Error::invalid(format!(
                    "node {k} has invalid geometry {n:?}"
                )));
            }
            if !disk_meets_canvas(n.centroid, n.radius, self.width, self.height) {
                return Err(Error::invalid(format!(
                    "node {k} lies entirely off the canvas"
                )));
            }
        }
        for e in &self.edges {
            if e.i >= e.j || e.j >= self.nodes.len() {
                return Err(Error::invalid(format!(
                    "edge ({}, {}) must satisfy i < j < {}",
                    e.i,
                    e.j,
                    self.nodes.len()
                )));
            }
            if !(e.density >= 0.0 && e.density.is_finite()) {
                return Err(Error::invalid(format!(
                    "edge ({}, {}) has density {}",
                    e.i, e.j, e.density
                )));
            }
            let q = self.edge_quad(e)?;
            if !quad_meets_canvas(&q, self.width, self.height) {
                return Err(Error::invalid(format!(
                    "edge ({}, {}) lies entirely off the canvas",
                    e.i, e.j
                )));
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Trapezoid reconstructed from an edge's endpoint nodes.
    pub fn edge_quad(&self, e: &Edge) -> Result<Quad> {
        let (a, b) = (&self.nodes[e.i], &self.nodes[e.j]);
        construct_trapezoid(a.centroid, a.radius, b.centroid, b.radius)
    }
}

/// How covered pixels are inked by [`render_synthetic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FillMode {
    Solid,
    /// Edge pixels are inked with probability `min(1, density)`; disks
    /// stay solid.
    Stochastic {
        seed: u64,
    },
}

impl fmt::Display for FillMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FillMode::Solid => f.write_str("solid"),
            FillMode::Stochastic { seed } => write!(f, "stochastic:{seed}"),
        }
    }
}

/// `solid`, `stochastic` (seed 0) or `stochastic:<seed>`.
impl FromStr for FillMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().split_once(':') {
            None if s.trim() == "solid" => Ok(FillMode::Solid),
            None if s.trim() == "stochastic" => Ok(FillMode::Stochastic { seed: 0 }),
            Some(("stochastic", seed)) => seed
                .trim()
                .parse()
                .map(|seed| FillMode::Stochastic { seed })
                .map_err(|_| Error::invalid(format!("bad stochastic seed {seed:?}"))),
            _ => Err(Error::invalid(format!(
                "fill mode must be `solid` or `stochastic[:seed]`, got {s:?}"
            ))),
        }
    }
}

/// Stroke graph of an extraction: one node per cluster, one edge per kept
/// trapezoid.
pub fn graph_from_result(result: &ExtractionResult) -> StrokeGraph {
    let nodes = result
        .clustering
        .clusters
        .iter()
        .map(|c| Node {
            centroid: c.centroid,
            radius: c.radius,
        })
        .collect();
    let edges = result
        .trapezoids
        .iter()
        .map(|s| Edge {
            i: s.trap.src.0,
            j: s.trap.src.1,
            density: s.density,
        })
        .collect();
    StrokeGraph {
        nodes,
        edges,
        width: result.width,
        height: result.height,
    }
}

/// Rasterizes the graph: filled disks for nodes, filled trapezoids for
/// edges.
pub fn render_synthetic(graph: &StrokeGraph, mode: FillMode) -> Result<BinaryImage> {
    graph.validate()?;
    let (w, h) = (graph.width, graph.height);
    let mut img = BinaryImage::zeros(w, h)?;
    let mut rng = match mode {
        FillMode::Solid => None,
        FillMode::Stochastic { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    for e in &graph.edges {
        let quad = graph.edge_quad(e)?;
        let p = e.density.min(1.0);
        for span in convex_spans(&quad, w, h) {
            for col in span.col_start..span.col_end {
                let ink = match rng.as_mut() {
                    None => true,
                    Some(r) => r.gen::<f64>() < p,
                };
                if ink {
                    img.set(span.row, col, true);
                }
            }
        }
    }
    for n in &graph.nodes {
        for span in disk_spans(n.centroid, n.radius, w, h) {
            for col in span.col_start..span.col_end {
                img.set(span.row, col, true);
            }
        }
    }
    Ok(img)
}

/// Moves the graph by a similarity transform; radii scale by its factor.
///
/// Anisotropic scaling and shear have no circle-preserving image and are
/// rejected.
pub fn apply_placement(graph: &StrokeGraph, xf: &AffineTransform) -> Result<StrokeGraph> {
    let scale = xf.similarity_scale(1e-9).ok_or_else(|| {
        Error::UnsupportedTransform(format!(
            "placement must be a similarity, got matrix {:?}",
            xf.matrix()
        ))
    })?;
    let nodes = graph
        .nodes
        .iter()
        .map(|n| Node {
            centroid: xf.apply(n.centroid),
            radius: n.radius * scale,
        })
        .collect();
    StrokeGraph::new(nodes, graph.edges.clone(), graph.width, graph.height)
}
