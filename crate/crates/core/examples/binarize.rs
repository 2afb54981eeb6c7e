//! Otsu binarization, morphological cleanup and tokenization of a noisy
//! grayscale glyph.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stroketrap::imaging::{
    foreground_coords, otsu_threshold, BinarizeConfig, GrayImage, MorphConfig, Preprocess,
};

fn main() -> stroketrap::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (w, h) = (48, 32);
    let mut img = GrayImage::filled(w, h, 230)?;
    for row in 0..h {
        for col in 0..w {
            let on_stroke = (12..18).contains(&row) && (6..42).contains(&col)
                || (4..28).contains(&row) && (20..26).contains(&col);
            let base: i32 = if on_stroke { 40 } else { 220 };
            let v = base + rng.gen_range(-25..=25);
            img.set(row, col, v.clamp(0, 255) as u8);
        }
    }
    // salt specks that opening removes
    for _ in 0..6 {
        img.set(rng.gen_range(0..h), rng.gen_range(0..4), 10);
    }

    println!("otsu threshold: {:?}", otsu_threshold(&img));
    let raw = Preprocess {
        binarize: BinarizeConfig::default(),
        morph: MorphConfig::default(),
    };
    let cleaned = Preprocess {
        morph: "open,close".parse()?,
        ..raw.clone()
    };
    let a = raw.apply(&img)?;
    let b = cleaned.apply(&img)?;
    println!(
        "ink pixels: raw {}, after open+close {}",
        a.count_ones(),
        b.count_ones()
    );

    let tokens = foreground_coords(&b);
    let first: Vec<_> = tokens.iter().take(4).map(|c| (c.row, c.col)).collect();
    println!("{} tokens, first {first:?}", tokens.len());
    Ok(())
}
