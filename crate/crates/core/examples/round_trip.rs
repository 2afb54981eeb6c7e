//! Renders a stroke graph, extracts it again and compares the recovered
//! circles; then moves the graph by a similarity and back.

use stroketrap::features::{extract, PipelineParams};
use stroketrap::geometry::{AffineTransform, Point};
use stroketrap::synthesis::{apply_placement, render_synthetic, FillMode, Node, StrokeGraph};

fn main() -> stroketrap::Result<()> {
    let nodes = vec![
        Node {
            centroid: Point::new(30.0, 30.0),
            radius: 5.0,
        },
        Node {
            centroid: Point::new(40.0, 90.0),
            radius: 7.0,
        },
        Node {
            centroid: Point::new(95.0, 55.0),
            radius: 4.5,
        },
    ];
    let graph = StrokeGraph::new(nodes, Vec::new(), 128, 128)?;
    let img = render_synthetic(&graph, FillMode::Solid)?;
    let result = extract(&img, &PipelineParams::default())?;

    for (n, c) in graph.nodes().iter().zip(&result.clustering.clusters) {
        println!(
            "node r {:.1} at ({:.1}, {:.1}) -> cluster r {:.1} at ({:.2}, {:.2})",
            n.radius, n.centroid.row, n.centroid.col, c.radius, c.centroid.row, c.centroid.col
        );
    }

    let xf = AffineTransform::similarity(0.8, 0.5, Point::new(64.0, 64.0), Point::new(4.0, -6.0))?;
    let moved = apply_placement(&graph, &xf)?;
    let back = apply_placement(&moved, &xf.inverse())?;
    let drift = graph
        .nodes()
        .iter()
        .zip(back.nodes())
        .map(|(a, b)| a.centroid.distance(b.centroid))
        .fold(0.0, f64::max);
    println!("placement and inverse drift: {drift:.1e} px");
    Ok(())
}
