//! Foreground sampling and OPTICS grouping of ink pixels into stroke
//! clusters, each summarized by a centroid circle.

pub mod optics;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::imaging::{Coord, CoordSet};

pub use optics::{extract_clusters, finite_quantile, optics_ordering, Ordering};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    fraction: f64,
    pub seed: u64,
}

impl SampleConfig {
    pub fn new(fraction: f64, seed: u64) -> Result<Self> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::invalid(format!(
                "sample fraction must lie in (0, 1], got {fraction}"
            )));
        }
        Ok(Self { fraction, seed })
    }

    pub fn fraction(&self) -> f64 {
        self.fraction
    }
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            fraction: 1.0,
            seed: 0,
        }
    }
}

/// Keeps `⌈fraction · n⌉` coordinates drawn uniformly without replacement.
///
/// The survivors keep their input order. `fraction == 1` returns the input.
pub fn sample_coords(coords: &CoordSet, cfg: &SampleConfig) -> CoordSet {
    let n = coords.len();
    // subtract a hair so 0.1 * 30 stays 3 rather than rounding up to 4
    let k = ((cfg.fraction * n as f64 - 1e-9).ceil().max(0.0) as usize).clamp(n.min(1), n);
    if k == n {
        return coords.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut picked = rand::seq::index::sample(&mut rng, n, k).into_vec();
    picked.sort_unstable();
    let src = coords.as_slice();
    CoordSet::from_unique(picked.into_iter().map(|i| src[i]).collect())
}

/// Per-axis mean of the points.
pub fn centroid_of(points: &CoordSet) -> Result<Point> {
    if points.is_empty() {
        return Err(Error::invalid("centroid of an empty point set"));
    }
    let (sr, sc) = points
        .iter()
        .fold((0.0, 0.0), |(r, c), p| (r + p.row as f64, c + p.col as f64));
    let n = points.len() as f64;
    Ok(Point::new(sr / n, sc / n))
}

/// Mode of the centroid-to-point distances after quantizing them into
/// bins of `bin_width`. Returns the center of the most populated bin; ties
/// go to the smaller radius.
pub fn radius_of(points: &CoordSet, centroid: Point, bin_width: f64) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::invalid("radius of an empty point set"));
    }
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(Error::invalid(format!(
            "radius bin width must be positive, got {bin_width}"
        )));
    }
    let distances = points
        .iter()
        .map(|p| Point::new(p.row as f64, p.col as f64).distance(centroid));
    Ok(distance_mode(distances, bin_width))
}

pub(crate) fn distance_mode(distances: impl Iterator<Item = f64>, bin_width: f64) -> f64 {
    let mut counts: Vec<usize> = Vec::new();
    for d in distances {
        let bin = (d / bin_width + 1e-9).floor() as usize;
        if bin >= counts.len() {
            counts.resize(bin + 1, 0);
        }
        counts[bin] += 1;
    }
    let mut best = 0;
    for (bin, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = bin;
        }
    }
    (best as f64 + 0.5) * bin_width
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpticsParams {
    pub min_pts: usize,
    /// Neighborhood radius; `f64::INFINITY` considers every pair.
    pub eps: f64,
    /// Quantile of the finite reachability distances used as the base of
    /// the extraction threshold.
    pub reach_quantile: f64,
    /// Multiplier applied to that quantile.
    pub reach_factor: f64,
    /// Histogram bin width for the radius mode, in pixels.
    pub bin_width: f64,
}

impl Default for OpticsParams {
    fn default() -> Self {
        Self {
            min_pts: 5,
            eps: f64::INFINITY,
            reach_quantile: 0.75,
            reach_factor: 3.0,
            bin_width: 1.0,
        }
    }
}

impl OpticsParams {
    pub fn validate(&self) -> Result<()> {
        if self.min_pts < 2 {
            return Err(Error::invalid(format!(
                "min_pts must be >= 2, got {}",
                self.min_pts
            )));
        }
        if self.eps.is_nan() || self.eps <= 0.0 {
            return Err(Error::invalid(format!(
                "eps must be positive, got {}",
                self.eps
            )));
        }
        if !(0.0..=1.0).contains(&self.reach_quantile) {
            return Err(Error::invalid(format!(
                "reach quantile must lie in [0, 1], got {}",
                self.reach_quantile
            )));
        }
        if !(self.reach_factor > 0.0 && self.reach_factor.is_finite()) {
            return Err(Error::invalid(format!(
                "reach factor must be positive, got {}",
                self.reach_factor
            )));
        }
        if !(self.bin_width > 0.0 && self.bin_width.is_finite()) {
            return Err(Error::invalid(format!(
                "bin width must be positive, got {}",
                self.bin_width
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub id: usize,
    pub points: Vec<Coord>,
    pub centroid: Point,
    pub radius: f64,
}

impl Cluster {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Partition of a sample into clusters plus noise.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub clusters: Vec<Cluster>,
    pub noise: Vec<Coord>,
}

impl Clustering {
    /// Builds clusters from explicit point groups, computing centroid and
    /// radius for each group.
    pub fn from_groups(groups: Vec<Vec<Coord>>, noise: Vec<Coord>, bin_width: f64) -> Result<Self> {
        let clusters = groups
            .into_iter()
            .enumerate()
            .map(|(id, mut points)| {
                points.sort_unstable();
                let set = CoordSet::new(points)?;
                let centroid = centroid_of(&set)?;
                let radius = radius_of(&set, centroid, bin_width)?;
                Ok(Cluster {
                    id,
                    points: set.into_vec(),
                    centroid,
                    radius,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { clusters, noise })
    }

    /// Number of clusters, `N_C`.
    pub fn count(&self) -> usize {
        self.clusters.len()
    }
}

/// Groups coordinates with OPTICS and a reachability-threshold cut.
///
/// The cut sits at `reach_factor` times the `reach_quantile` quantile of the
/// finite reachability distances. Clusters are numbered by their smallest
/// member in row-major order; members and noise are sorted row-major.
pub fn cluster_optics(coords: &CoordSet, params: &OpticsParams) -> Result<Clustering> {
    params.validate()?;
    let points = coords.as_slice();
    if points.len() < params.min_pts {
        let mut noise = points.to_vec();
        noise.sort_unstable();
        return Ok(Clustering {
            clusters: Vec::new(),
            noise,
        });
    }

    let ordering = optics_ordering(points, params.min_pts, params.eps);
    let threshold = finite_quantile(&ordering.reachability, params.reach_quantile)
        .map_or(f64::INFINITY, |q| q * params.reach_factor);
    let labels = extract_clusters(&ordering, threshold, params.min_pts);

    let n_labels = labels.iter().flatten().map(|l| l + 1).max().unwrap_or(0);
    let mut groups: Vec<Vec<Coord>> = vec![Vec::new(); n_labels];
    let mut noise = Vec::new();
    for (p, label) in points.iter().zip(&labels) {
        match label {
            Some(l) => groups[*l].push(*p),
            None => noise.push(*p),
        }
    }
    for g in &mut groups {
        g.sort_unstable();
    }
    groups.sort_by_key(|g| g[0]);
    noise.sort_unstable();
    Clustering::from_groups(groups, noise, params.bin_width)
}
