//! JSON rendering of extraction results.
//!
//! Layout, in field order:
//!
//! ```text
//! { image:      { width, height, source, sha256 },
//!   params:     { sample_fraction, seed, min_pts, eps, reach_quantile,
//!                 reach_factor, bin_width, min_area, min_density,
//!                 max_trapezoids, preprocess },
//!   clusters:   [ { id, centroid: [r, c], radius, density, count, points } ],
//!   noise_points,
//!   trapezoids: [ { src: [i, j], vertices: [[r, c] x4], fg_count, area, density } ],
//!   features:   [ [9 reals] ] }
//! ```
//!
//! Reals are printed with exactly six decimals; an infinite `eps` is `null`.

use std::fmt;

use serde::de::Deserializer;
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use sha2::{Digest, Sha256};

use super::{ExtractionResult, OverlayShapes, PipelineParams};
use crate::clustering::{OpticsParams, SampleConfig};
use crate::error::Result;
use crate::geometry::Point;
use crate::imaging::{MorphConfig, Preprocess};

/// Real number rendered with six decimals; non-finite values become `null`
/// and read back as `+inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6}", self.0)
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(self.to_string()).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Real(
            Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY),
        ))
    }
}

fn pt(p: Point) -> [Real; 2] {
    [Real(p.row), Real(p.col)]
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageInfo {
    pub width: usize,
    pub height: usize,
    pub source: Option<String>,
    pub sha256: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreprocessRecord {
    pub threshold: String,
    pub polarity: String,
    pub morph: String,
}

impl From<&Preprocess> for PreprocessRecord {
    fn from(p: &Preprocess) -> Self {
        Self {
            threshold: p.binarize.method.to_string(),
            polarity: p.binarize.polarity.to_string(),
            morph: p.morph.to_string(),
        }
    }
}

impl PreprocessRecord {
    pub fn to_preprocess(&self) -> Result<Preprocess> {
        Ok(Preprocess {
            binarize: crate::imaging::BinarizeConfig {
                method: self.threshold.parse()?,
                polarity: self.polarity.parse()?,
            },
            morph: self.morph.parse::<MorphConfig>()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub sample_fraction: Real,
    pub seed: u64,
    pub min_pts: usize,
    pub eps: Real,
    pub reach_quantile: Real,
    pub reach_factor: Real,
    pub bin_width: Real,
    pub min_area: Real,
    pub min_density: Real,
    pub max_trapezoids: usize,
    pub preprocess: Option<PreprocessRecord>,
}

impl ParamsRecord {
    pub fn new(p: &PipelineParams, preprocess: Option<&Preprocess>) -> Self {
        Self {
            sample_fraction: Real(p.sample.fraction()),
            seed: p.sample.seed,
            min_pts: p.optics.min_pts,
            eps: Real(p.optics.eps),
            reach_quantile: Real(p.optics.reach_quantile),
            reach_factor: Real(p.optics.reach_factor),
            bin_width: Real(p.optics.bin_width),
            min_area: Real(p.min_area),
            min_density: Real(p.min_density),
            max_trapezoids: p.max_trapezoids,
            preprocess: preprocess.map(PreprocessRecord::from),
        }
    }

    pub fn to_params(&self) -> Result<PipelineParams> {
        let p = PipelineParams {
            sample: SampleConfig::new(self.sample_fraction.0, self.seed)?,
            optics: OpticsParams {
                min_pts: self.min_pts,
                eps: self.eps.0,
                reach_quantile: self.reach_quantile.0,
                reach_factor: self.reach_factor.0,
                bin_width: self.bin_width.0,
            },
            min_area: self.min_area.0,
            min_density: self.min_density.0,
            max_trapezoids: self.max_trapezoids,
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterRecord {
    pub id: usize,
    pub centroid: [Real; 2],
    pub radius: Real,
    pub density: Real,
    /// Ink pixels inside the circle.
    pub count: usize,
    /// Sampled coordinates assigned to the cluster.
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrapezoidRecord {
    pub src: [usize; 2],
    pub vertices: [[Real; 2]; 4],
    pub fg_count: usize,
    pub area: Real,
    pub density: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub image: ImageInfo,
    pub params: ParamsRecord,
    pub clusters: Vec<ClusterRecord>,
    pub noise_points: usize,
    pub trapezoids: Vec<TrapezoidRecord>,
    pub features: Vec<[Real; 9]>,
}

impl ResultDocument {
    pub fn new(
        result: &ExtractionResult,
        params: &PipelineParams,
        preprocess: Option<&Preprocess>,
        source: Option<String>,
        sha256: Option<String>,
    ) -> Self {
        let clusters = result
            .circles
            .iter()
            .zip(&result.clustering.clusters)
            .map(|(c, cl)| ClusterRecord {
                id: c.id,
                centroid: pt(c.centroid),
                radius: Real(c.radius),
                density: Real(c.density),
                count: c.fg_count,
                points: cl.len(),
            })
            .collect();
        let trapezoids = result
            .trapezoids
            .iter()
            .map(|s| TrapezoidRecord {
                src: [s.trap.src.0, s.trap.src.1],
                vertices: s.trap.vertices.map(pt),
                fg_count: s.fg_count,
                area: Real(s.area),
                density: Real(s.density),
            })
            .collect();
        let features = result.features.iter().map(|f| f.0.map(Real)).collect();
        Self {
            image: ImageInfo {
                width: result.width,
                height: result.height,
                source,
                sha256,
            },
            params: ParamsRecord::new(params, preprocess),
            clusters,
            noise_points: result.clustering.noise.len(),
            trapezoids,
            features,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Shapes for [`OverlayShapes::draw`], as stored (rounded to six
    /// decimals).
    pub fn overlay_shapes(&self) -> OverlayShapes {
        let to_point = |v: &[Real; 2]| Point::new(v[0].0, v[1].0);
        OverlayShapes {
            trapezoids: self
                .trapezoids
                .iter()
                .map(|t| {
                    let v = &t.vertices;
                    (
                        [
                            to_point(&v[0]),
                            to_point(&v[1]),
                            to_point(&v[2]),
                            to_point(&v[3]),
                        ],
                        (t.src[0], t.src[1]),
                    )
                })
                .collect(),
            circles: self
                .clusters
                .iter()
                .map(|c| (c.id, (to_point(&c.centroid), c.radius.0)))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_use_six_decimals() {
        assert_eq!(serde_json::to_string(&Real(1.5)).unwrap(), "1.500000");
        assert_eq!(
            serde_json::to_string(&Real(-2.0 / 3.0)).unwrap(),
            "-0.666667"
        );
        assert_eq!(serde_json::to_string(&Real(f64::INFINITY)).unwrap(), "null");
        let back: Real = serde_json::from_str("null").unwrap();
        assert!(back.0.is_infinite());
        let back: [Real; 2] = serde_json::from_str("[1.250000, 3]").unwrap();
        assert_eq!(back, [Real(1.25), Real(3.0)]);
    }

    #[test]
    fn params_round_trip() {
        let p = PipelineParams::default();
        let pre = Preprocess::default();
        let rec = ParamsRecord::new(&p, Some(&pre));
        let json = serde_json::to_string(&rec).unwrap();
        assert!(json.contains("\"eps\":null"));
        let back: ParamsRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_params().unwrap(), p);
        assert_eq!(back.preprocess.unwrap().to_preprocess().unwrap(), pre);
    }

    #[test]
    fn digest_is_hex_sha256() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
