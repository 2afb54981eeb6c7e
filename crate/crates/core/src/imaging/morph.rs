use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::BinaryImage;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MorphOp {
    Open,
    Close,
}

/// One morphological operation applied with `repeat` erosion/dilation
/// iterations; `repeat == 0` is a no-op.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphStep {
    pub op: MorphOp,
    pub repeat: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphConfig {
    pub steps: Vec<MorphStep>,
}

impl MorphConfig {
    pub fn new(steps: Vec<MorphStep>) -> Self {
        Self { steps }
    }
}

impl fmt::Display for MorphConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return f.write_str("none");
        }
        let parts: Vec<String> = self
            .steps
            .iter()
            .map(|s| {
                let name = match s.op {
                    MorphOp::Open => "open",
                    MorphOp::Close => "close",
                };
                format!("{name}:{}", s.repeat)
            })
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// Parses `open,close:2` style sequences; an empty string or `none` is the
/// empty sequence.
impl FromStr for MorphConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s.eq_ignore_ascii_case("none") {
            return Ok(Self::default());
        }
        let mut steps = Vec::new();
        for part in s.split(',') {
            let (name, repeat) = match part.trim().split_once(':') {
                Some((n, r)) => (
                    n.trim(),
                    r.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::invalid(format!("bad morph repeat in {part:?}")))?,
                ),
                None => (part.trim(), 1),
            };
            let op = match name {
                "open" => MorphOp::Open,
                "close" => MorphOp::Close,
                other => return Err(Error::invalid(format!("unknown morph op {other:?}"))),
            };
            steps.push(MorphStep { op, repeat });
        }
        Ok(Self { steps })
    }
}

const CROSS: [(i64, i64); 5] = [(0, 0), (-1, 0), (1, 0), (0, -1), (0, 1)];

fn erode(img: &BinaryImage) -> BinaryImage {
    let mut out = img.clone();
    for row in 0..img.height() {
        for col in 0..img.width() {
            let keep = CROSS
                .iter()
                .all(|(dr, dc)| img.get_signed(row as i64 + dr, col as i64 + dc));
            out.set(row, col, keep);
        }
    }
    out
}

fn dilate(img: &BinaryImage) -> BinaryImage {
    let mut out = img.clone();
    for row in 0..img.height() {
        for col in 0..img.width() {
            let hit = CROSS
                .iter()
                .any(|(dr, dc)| img.get_signed(row as i64 + dr, col as i64 + dc));
            out.set(row, col, hit);
        }
    }
    out
}

fn pad(img: &BinaryImage, margin: usize) -> BinaryImage {
    BinaryImage::from_fn(
        img.width() + 2 * margin,
        img.height() + 2 * margin,
        |r, c| img.get_signed(r as i64 - margin as i64, c as i64 - margin as i64),
    )
    .expect("padded dimensions are positive")
}

fn crop(img: &BinaryImage, margin: usize, width: usize, height: usize) -> BinaryImage {
    BinaryImage::from_fn(width, height, |r, c| img.get(r + margin, c + margin))
        .expect("crop dimensions are positive")
}

type Pass = fn(&BinaryImage) -> BinaryImage;

/// Applies the configured open/close sequence with a 3x3 cross element.
///
/// Each step runs on a background-padded copy so the result equals the
/// operation on the unbounded plane, cropped back to the raster.
pub fn morph_clean(img: &BinaryImage, cfg: &MorphConfig) -> BinaryImage {
    let mut cur = img.clone();
    for step in cfg.steps.iter().filter(|s| s.repeat > 0) {
        let (first, second): (Pass, Pass) = match step.op {
            MorphOp::Open => (erode, dilate),
            MorphOp::Close => (dilate, erode),
        };
        let margin = step.repeat + 1;
        let mut work = pad(&cur, margin);
        for _ in 0..step.repeat {
            work = first(&work);
        }
        for _ in 0..step.repeat {
            work = second(&work);
        }
        cur = crop(&work, margin, img.width(), img.height());
    }
    cur
}
