//! Builds an original/synthetic pair database from a few generated glyph
//! images and prints the manifest.
//!
//! `cargo run --example synthesize_pairs [out_dir]`

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stroketrap::imaging::{pnm, BinaryImage};
use stroketrap::synthesis::{build_pair_db, FillMode, PairDbConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("stroketrap-pairs"));
    let src = out.join("sources");
    std::fs::create_dir_all(&src)?;

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut inputs = Vec::new();
    for k in 0..3 {
        let dots: Vec<(f64, f64, f64)> = (0..4)
            .map(|d| {
                (
                    12.0 + 14.0 * d as f64,
                    rng.gen_range(10.0..54.0),
                    rng.gen_range(3.0..5.0),
                )
            })
            .collect();
        let img = BinaryImage::from_fn(64, 64, |r, c| {
            dots.iter()
                .any(|&(dr, dc, rad)| (r as f64 - dr).hypot(c as f64 - dc) <= rad)
        })?;
        let path = src.join(format!("glyph{k}.pgm"));
        pnm::write_gray(&path, &img.to_gray())?;
        inputs.push(path);
    }

    let cfg = PairDbConfig {
        fill: FillMode::Stochastic { seed: 11 },
        ..PairDbConfig::default()
    };
    let manifest = build_pair_db(&inputs, &cfg, &out)?;
    for p in &manifest.pairs {
        println!("{} -> {} + {}", p.source, p.original, p.synthetic);
    }
    println!("manifest: {}", out.join("manifest.json").display());
    Ok(())
}
