//! Draws the densest trapezoids and their circles over the source image.
//!
//! `cargo run --example overlay [out.png]`

use std::path::PathBuf;

use stroketrap::features::{extract, render_overlay, PipelineParams};
use stroketrap::geometry::Point;
use stroketrap::imaging::{pnm, BinaryImage};

fn main() -> stroketrap::Result<()> {
    let marks = [
        (12.0, 12.0, 5.0),
        (14.0, 32.0, 4.0),
        (12.0, 52.0, 5.0),
        (40.0, 20.0, 5.0),
        (44.0, 46.0, 4.5),
    ];
    let img = BinaryImage::from_fn(64, 64, |r, c| {
        let p = Point::new(r as f64, c as f64);
        marks
            .iter()
            .any(|&(mr, mc, rad)| p.distance(Point::new(mr, mc)) <= rad)
    })?;

    let result = extract(&img, &PipelineParams::default())?;
    let n = 3;
    let drawn = render_overlay(&img, &result, n);
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("stroketrap-overlay.png"));
    pnm::write_gray(&out, &drawn)?;
    println!(
        "{} clusters, drew {} of {} trapezoids to {}",
        result.clustering.count(),
        result.plotted().len().min(n),
        result.trapezoids.len(),
        out.display()
    );
    Ok(())
}
