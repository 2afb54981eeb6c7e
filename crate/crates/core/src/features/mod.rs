//! Brightness-density scoring of stroke trapezoids and the end-to-end
//! extraction pipeline.

mod overlay;
pub mod report;

pub use overlay::{render_overlay, OverlayShapes, CIRCLE_LEVEL, TRAPEZOID_LEVEL};

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::{cluster_optics, sample_coords, Clustering, OpticsParams, SampleConfig};
use crate::error::{Error, Result};
use crate::geometry::raster::{convex_spans, disk_spans, Span};
use crate::geometry::{circle_area, Point, Quad, Trapezoid};
use crate::imaging::{foreground_coords, BinaryImage};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoredTrapezoid {
    pub trap: Trapezoid,
    pub fg_count: usize,
    pub area: f64,
    pub density: f64,
}

/// `(P1.row, P1.col, …, P4.row, P4.col, density)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(pub [f64; 9]);

impl FeatureVector {
    pub fn density(&self) -> f64 {
        self.0[8]
    }
}

impl From<&ScoredTrapezoid> for FeatureVector {
    fn from(s: &ScoredTrapezoid) -> Self {
        FeatureVector(s.trap.feature(s.density))
    }
}

/// Circle density of one cluster.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleScore {
    pub id: usize,
    pub centroid: Point,
    pub radius: f64,
    pub fg_count: usize,
    pub density: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineParams {
    pub sample: SampleConfig,
    pub optics: OpticsParams,
    pub min_area: f64,
    pub min_density: f64,
    /// Number of trapezoids kept for plotting, `N_T`.
    pub max_trapezoids: usize,
}

impl Default for PipelineParams {
    fn default() -> Self {
        Self {
            sample: SampleConfig::default(),
            optics: OpticsParams::default(),
            min_area: 4.0,
            min_density: 0.15,
            max_trapezoids: 50,
        }
    }
}

impl PipelineParams {
    pub fn validate(&self) -> Result<()> {
        self.optics.validate()?;
        if !(self.min_area >= 0.0 && self.min_area.is_finite()) {
            return Err(Error::invalid(format!(
                "min_area must be >= 0, got {}",
                self.min_area
            )));
        }
        if !(0.0..=1.0).contains(&self.min_density) {
            return Err(Error::invalid(format!(
                "min_density must lie in [0, 1], got {}",
                self.min_density
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionResult {
    pub width: usize,
    pub height: usize,
    pub clustering: Clustering,
    pub circles: Vec<CircleScore>,
    /// Post-filter trapezoids, densest first.
    pub trapezoids: Vec<ScoredTrapezoid>,
    /// `features[k]` describes `trapezoids[k]`.
    pub features: Vec<FeatureVector>,
    pub max_trapezoids: usize,
}

impl ExtractionResult {
    fn empty(img: &BinaryImage, clustering: Clustering, max_trapezoids: usize) -> Self {
        Self {
            width: img.width(),
            height: img.height(),
            clustering,
            circles: Vec::new(),
            trapezoids: Vec::new(),
            features: Vec::new(),
            max_trapezoids,
        }
    }

    /// The `N_T` densest trapezoids selected for plotting.
    pub fn plotted(&self) -> &[ScoredTrapezoid] {
        &self.trapezoids[..self.max_trapezoids.min(self.trapezoids.len())]
    }

    pub fn plotted_features(&self) -> &[FeatureVector] {
        &self.features[..self.max_trapezoids.min(self.features.len())]
    }
}

fn count_spans(img: &BinaryImage, spans: &[Span]) -> usize {
    let px = img.pixels();
    spans
        .iter()
        .map(|s| {
            let base = s.row * img.width();
            px[base + s.col_start..base + s.col_end]
                .iter()
                .filter(|&&p| p == 1)
                .count()
        })
        .sum()
}

/// Ink pixels whose centers lie inside or on the (convex) quadrilateral.
pub fn count_foreground_pixels(img: &BinaryImage, quad: &Quad) -> usize {
    count_spans(img, &convex_spans(quad, img.width(), img.height()))
}

/// Ink pixels within `radius` of `center` and their share of `π r²`.
pub fn circle_density(img: &BinaryImage, center: Point, radius: f64) -> (usize, f64) {
    let count = count_spans(img, &disk_spans(center, radius, img.width(), img.height()));
    let area = circle_area(radius);
    let density = if area > 0.0 { count as f64 / area } else { 0.0 };
    (count, density)
}

/// Scores one trapezoid per unordered cluster pair `i < j`.
///
/// Pairs with coincident centroids have no trapezoid and are skipped.
pub fn score_all_pairs(img: &BinaryImage, clustering: &Clustering) -> Vec<ScoredTrapezoid> {
    let cs = &clustering.clusters;
    let pairs: Vec<(usize, usize)> = (0..cs.len())
        .flat_map(|i| (i + 1..cs.len()).map(move |j| (i, j)))
        .collect();
    pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let (a, b) = (&cs[i], &cs[j]);
            let trap = Trapezoid::connect((a.id, b.id), a.centroid, a.radius, b.centroid, b.radius)
                .ok()?;
            let fg_count = count_foreground_pixels(img, &trap.vertices);
            let area = trap.area();
            Some(ScoredTrapezoid {
                trap,
                fg_count,
                area,
                density: fg_count as f64 / area,
            })
        })
        .collect()
}

/// Keeps entries with `area >= min_area` and `density >= min_density`,
/// preserving order.
pub fn filter_noise(
    scored: Vec<ScoredTrapezoid>,
    min_area: f64,
    min_density: f64,
) -> Vec<ScoredTrapezoid> {
    scored
        .into_iter()
        .filter(|s| s.area >= min_area && s.density >= min_density)
        .collect()
}

fn density_order(a: &ScoredTrapezoid, b: &ScoredTrapezoid) -> Ordering {
    b.density
        .total_cmp(&a.density)
        .then_with(|| a.trap.src.cmp(&b.trap.src))
}

/// Densest first; equal densities by ascending source pair.
pub fn sort_by_density(scored: &mut [ScoredTrapezoid]) {
    scored.sort_by(density_order);
}

/// Runs the full extraction on a binary image.
///
/// tokenize → sample → OPTICS → circles → pair trapezoids → noise filter →
/// density sort. The sorted list is kept whole; [`ExtractionResult::plotted`]
/// gives the top `max_trapezoids`.
pub fn extract(img: &BinaryImage, params: &PipelineParams) -> Result<ExtractionResult> {
    params.validate()?;
    let coords = foreground_coords(img);
    let sample = sample_coords(&coords, &params.sample);
    let clustering = cluster_optics(&sample, &params.optics)?;
    if clustering.clusters.is_empty() {
        return Ok(ExtractionResult::empty(
            img,
            clustering,
            params.max_trapezoids,
        ));
    }

    let circles = clustering
        .clusters
        .iter()
        .map(|c| {
            let (fg_count, density) = circle_density(img, c.centroid, c.radius);
            CircleScore {
                id: c.id,
                centroid: c.centroid,
                radius: c.radius,
                fg_count,
                density,
            }
        })
        .collect();

    let scored = score_all_pairs(img, &clustering);
    let mut kept = filter_noise(scored, params.min_area, params.min_density);
    sort_by_density(&mut kept);
    let features = kept.iter().map(FeatureVector::from).collect();

    Ok(ExtractionResult {
        width: img.width(),
        height: img.height(),
        clustering,
        circles,
        trapezoids: kept,
        features,
        max_trapezoids: params.max_trapezoids,
    })
}
