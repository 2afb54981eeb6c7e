//! OPTICS clustering of ink coordinates into stroke segments, with centroid
//! and mode radius per cluster.

use stroketrap::clustering::{
    cluster_optics, optics_ordering, sample_coords, OpticsParams, SampleConfig,
};
use stroketrap::imaging::{foreground_coords, BinaryImage};

fn main() -> stroketrap::Result<()> {
    let spots = [(12.0, 12.0, 4.0), (12.0, 44.0, 6.0), (40.0, 28.0, 5.0)];
    let img = BinaryImage::from_fn(60, 56, |r, c| {
        spots
            .iter()
            .any(|&(cr, cc, rad)| (r as f64 - cr).hypot(c as f64 - cc) <= rad)
    })?;

    let coords = foreground_coords(&img);
    let sample = sample_coords(&coords, &SampleConfig::new(0.6, 1)?);
    println!("{} ink pixels, {} sampled", coords.len(), sample.len());

    let params = OpticsParams::default();
    let ordering = optics_ordering(sample.as_slice(), params.min_pts, params.eps);
    let jumps = ordering.plot().iter().filter(|r| **r > 5.0).count();
    println!(
        "reachability plot: {} entries, {jumps} jumps above 5 px",
        ordering.order.len()
    );

    let clustering = cluster_optics(&sample, &params)?;
    for c in &clustering.clusters {
        println!(
            "cluster {}: {} points, centroid ({:.2}, {:.2}), radius {:.1}",
            c.id,
            c.len(),
            c.centroid.row,
            c.centroid.col,
            c.radius
        );
    }
    println!("noise: {}", clustering.noise.len());
    Ok(())
}
