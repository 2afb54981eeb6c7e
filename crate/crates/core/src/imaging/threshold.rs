use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{BinaryImage, GrayImage};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMethod {
    Otsu,
    /// Boundary level: dark ink is `value < t`, light ink is `value >= t`.
    Fixed(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    /// Dark ink on a light ground.
    DarkInk,
    /// Light ink on a dark ground.
    LightInk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinarizeConfig {
    pub method: ThresholdMethod,
    pub polarity: Polarity,
}

impl Default for BinarizeConfig {
    fn default() -> Self {
        Self {
            method: ThresholdMethod::Otsu,
            polarity: Polarity::DarkInk,
        }
    }
}

impl fmt::Display for ThresholdMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdMethod::Otsu => f.write_str("otsu"),
            ThresholdMethod::Fixed(t) => write!(f, "{t}"),
        }
    }
}

/// `otsu` or a level in `0..=255`.
impl FromStr for ThresholdMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("otsu") {
            return Ok(ThresholdMethod::Otsu);
        }
        s.parse::<u8>()
            .map(ThresholdMethod::Fixed)
            .map_err(|_| Error::invalid(format!("threshold must be `otsu` or 0..=255, got {s:?}")))
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::DarkInk => "dark",
            Polarity::LightInk => "light",
        })
    }
}

impl FromStr for Polarity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "dark" => Ok(Polarity::DarkInk),
            "light" => Ok(Polarity::LightInk),
            other => Err(Error::invalid(format!(
                "polarity must be `dark` or `light`, got {other:?}"
            ))),
        }
    }
}

/// Otsu's threshold over the 256-bin histogram.
///
/// Returns the first level `t` of the bright class, so the classes are
/// `[0, t)` and `[t, 255]`. `None` when the image holds a single intensity
/// and no split exists. Ties keep the smallest `t`.
pub fn otsu_threshold(img: &GrayImage) -> Option<u8> {
    let mut hist = [0u64; 256];
    for &p in img.pixels() {
        hist[p as usize] += 1;
    }
    let total = img.pixels().len() as f64;
    let sum_all: f64 = hist
        .iter()
        .enumerate()
        .map(|(v, &n)| v as f64 * n as f64)
        .sum();

    let mut best: Option<(u8, f64)> = None;
    let mut count_low = 0.0;
    let mut sum_low = 0.0;
    for t in 1..256usize {
        count_low += hist[t - 1] as f64;
        sum_low += (t - 1) as f64 * hist[t - 1] as f64;
        let count_high = total - count_low;
        if count_low == 0.0 || count_high == 0.0 {
            continue;
        }
        let mean_low = sum_low / count_low;
        let mean_high = (sum_all - sum_low) / count_high;
        let between = count_low * count_high * (mean_low - mean_high).powi(2);
        if best.is_none_or(|(_, b)| between > b + 1e-9 * b.max(1.0)) {
            best = Some((t as u8, between));
        }
    }
    best.map(|(t, _)| t)
}

/// Converts a grayscale image into ink/background.
///
/// An Otsu run on a single-level image yields an all-background result.
pub fn binarize(img: &GrayImage, cfg: &BinarizeConfig) -> Result<BinaryImage> {
    let threshold = match cfg.method {
        ThresholdMethod::Fixed(t) => t,
        ThresholdMethod::Otsu => match otsu_threshold(img) {
            Some(t) => t,
            None => return BinaryImage::zeros(img.width(), img.height()),
        },
    };
    let pixels = img
        .pixels()
        .iter()
        .map(|&v| {
            let ink = match cfg.polarity {
                Polarity::DarkInk => v < threshold,
                Polarity::LightInk => v >= threshold,
            };
            u8::from(ink)
        })
        .collect();
    BinaryImage::new(img.width(), img.height(), pixels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exhaustive oracle: minimize the weighted within-class variance
    /// computed directly from pixel values at every candidate split.
    fn brute_force_otsu(pixels: &[u8]) -> Option<u8> {
        let mut best: Option<(u8, f64)> = None;
        for t in 1..=255u16 {
            let (low, high): (Vec<f64>, Vec<f64>) = {
                let low = pixels
                    .iter()
                    .filter(|&&p| (p as u16) < t)
                    .map(|&p| p as f64);
                let high = pixels
                    .iter()
                    .filter(|&&p| (p as u16) >= t)
                    .map(|&p| p as f64);
                (low.collect(), high.collect())
            };
            if low.is_empty() || high.is_empty() {
                continue;
            }
            let var = |v: &[f64]| {
                let m = v.iter().sum::<f64>() / v.len() as f64;
                v.iter().map(|x| (x - m).powi(2)).sum::<f64>()
            };
            let within = var(&low) + var(&high);
            if best.is_none_or(|(_, b)| within < b - 1e-9 * b.max(1.0)) {
                best = Some((t as u8, within));
            }
        }
        best.map(|(t, _)| t)
    }

    #[test]
    fn white_image_has_no_ink() {
        let img = GrayImage::filled(8, 6, 255).unwrap();
        let bin = binarize(&img, &BinarizeConfig::default()).unwrap();
        assert_eq!(bin.count_ones(), 0);
    }

    #[test]
    fn black_image_fixed_threshold_is_all_ink() {
        let img = GrayImage::filled(8, 6, 0).unwrap();
        let cfg = BinarizeConfig {
            method: ThresholdMethod::Fixed(128),
            polarity: Polarity::DarkInk,
        };
        assert_eq!(binarize(&img, &cfg).unwrap().count_ones(), 48);
    }

    #[test]
    fn bimodal_split_marks_dark_mode() {
        let pixels: Vec<u8> = (0..64).map(|i| if i % 2 == 0 { 10 } else { 245 }).collect();
        let img = GrayImage::new(8, 8, pixels.clone()).unwrap();
        let t = otsu_threshold(&img).unwrap();
        assert_eq!(Some(t), brute_force_otsu(&pixels));
        assert!(t > 10 && t <= 245);
        let bin = binarize(&img, &BinarizeConfig::default()).unwrap();
        for (b, p) in bin.pixels().iter().zip(&pixels) {
            assert_eq!(*b == 1, *p == 10);
        }
    }

    #[test]
    fn light_ink_inverts() {
        let img = GrayImage::new(2, 1, vec![10, 245]).unwrap();
        let cfg = BinarizeConfig {
            method: ThresholdMethod::Otsu,
            polarity: Polarity::LightInk,
        };
        assert_eq!(binarize(&img, &cfg).unwrap().pixels(), &[0, 1]);
    }

    proptest! {
        #[test]
        fn otsu_matches_within_class_oracle(pixels in prop::collection::vec(any::<u8>(), 1..80)) {
            let img = GrayImage::new(pixels.len(), 1, pixels.clone()).unwrap();
            prop_assert_eq!(otsu_threshold(&img), brute_force_otsu(&pixels));
        }

        #[test]
        fn binarize_ignores_pixel_order(mut pixels in prop::collection::vec(any::<u8>(), 4..64), seed in any::<u64>()) {
            let n = pixels.len();
            let img = GrayImage::new(n, 1, pixels.clone()).unwrap();
            let bin = binarize(&img, &BinarizeConfig::default()).unwrap();
            // same multiset of intensities, different order
            let k = (seed as usize) % n;
            pixels.rotate_left(k);
            let rotated = GrayImage::new(n, 1, pixels.clone()).unwrap();
            let bin_rot = binarize(&rotated, &BinarizeConfig::default()).unwrap();
            let mut expect = bin.pixels().to_vec();
            expect.rotate_left(k);
            prop_assert_eq!(bin_rot.pixels(), &expect[..]);
        }
    }
}
