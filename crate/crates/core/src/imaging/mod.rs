//! Raster carriers, binarization, morphological cleanup and foreground
//! tokenization.
//!
//! Every module in the crate uses the same frame: pixel `(row, col)` is
//! 0-based, row-major, and its center sits at the real point `(row, col)`.

mod morph;
pub mod pnm;
mod threshold;

pub use morph::{morph_clean, MorphConfig, MorphOp, MorphStep};
pub use threshold::{binarize, otsu_threshold, BinarizeConfig, Polarity, ThresholdMethod};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 8-bit grayscale raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        check_dims(width, height, pixels.len())?;
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.pixels[row * self.width + col] = value;
    }
}

/// 0/1 raster; 1 marks ink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        check_dims(width, height, pixels.len())?;
        if let Some(bad) = pixels.iter().find(|&&p| p > 1) {
            return Err(Error::invalid(format!(
                "binary pixel value {bad} is not 0 or 1"
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![0; width * height])
    }

    /// Builds an image by evaluating `ink(row, col)` at every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut ink: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self> {
        check_dims(width, height, width * height)?;
        let mut pixels = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                pixels.push(u8::from(ink(row, col)));
            }
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Single side length used where a square `d_x` is expected.
    pub fn side_length(&self) -> usize {
        self.width.max(self.height)
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.pixels[row * self.width + col] == 1
    }

    /// Like [`BinaryImage::get`] but false outside the raster.
    pub fn get_signed(&self, row: i64, col: i64) -> bool {
        if row < 0 || col < 0 || row >= self.height as i64 || col >= self.width as i64 {
            return false;
        }
        self.get(row as usize, col as usize)
    }

    pub fn set(&mut self, row: usize, col: usize, ink: bool) {
        self.pixels[row * self.width + col] = u8::from(ink);
    }

    pub fn count_ones(&self) -> usize {
        self.pixels.iter().filter(|&&p| p == 1).count()
    }

    /// Document-style rendering: ink is black (0), background white (255).
    pub fn to_gray(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            pixels: self
                .pixels
                .iter()
                .map(|&p| if p == 1 { 0 } else { 255 })
                .collect(),
        }
    }
}

fn check_dims(width: usize, height: usize, len: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::invalid(format!(
            "image dimensions must be positive, got {width}x{height}"
        )));
    }
    if len != width * height {
        return Err(Error::invalid(format!(
            "pixel buffer has {len} entries, expected {}",
            width * height
        )));
    }
    Ok(())
}

/// Binarization followed by morphological cleanup.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preprocess {
    pub binarize: BinarizeConfig,
    pub morph: MorphConfig,
}

impl Preprocess {
    pub fn apply(&self, img: &GrayImage) -> Result<BinaryImage> {
        let bin = binarize(img, &self.binarize)?;
        Ok(morph_clean(&bin, &self.morph))
    }
}

/// A foreground pixel index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Coord {
    pub row: usize,
    pub col: usize,
}

impl Coord {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

impl From<(usize, usize)> for Coord {
    fn from((row, col): (usize, usize)) -> Self {
        Self { row, col }
    }
}

/// Ordered, duplicate-free list of pixel indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoordSet {
    coords: Vec<Coord>,
}

impl CoordSet {
    pub fn new(coords: Vec<Coord>) -> Result<Self> {
        let mut sorted = coords.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("coordinate set contains duplicates"));
        }
        Ok(Self { coords })
    }

    pub(crate) fn from_unique(coords: Vec<Coord>) -> Self {
        debug_assert!({
            let mut s = coords.clone();
            s.sort_unstable();
            s.windows(2).all(|w| w[0] != w[1])
        });
        Self { coords }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn as_slice(&self) -> &[Coord] {
        &self.coords
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Coord> {
        self.coords.iter()
    }

    pub fn into_vec(self) -> Vec<Coord> {
        self.coords
    }

    /// True if every coordinate lies inside a `width` x `height` raster.
    pub fn fits(&self, width: usize, height: usize) -> bool {
        self.coords.iter().all(|c| c.row < height && c.col < width)
    }
}

impl<'a> IntoIterator for &'a CoordSet {
    type Item = &'a Coord;
    type IntoIter = std::slice::Iter<'a, Coord>;

    fn into_iter(self) -> Self::IntoIter {
        self.coords.iter()
    }
}

/// Tokenizes an image into the row-major list of its ink pixel indices.
pub fn foreground_coords(img: &BinaryImage) -> CoordSet {
    let coords = img
        .pixels
        .iter()
        .enumerate()
        .filter(|(_, &p)| p == 1)
        .map(|(idx, _)| Coord::new(idx / img.width, idx % img.width))
        .collect();
    CoordSet::from_unique(coords)
}
