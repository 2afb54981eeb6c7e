//! Full extraction on a broken-stroke glyph: clusters, scored trapezoids
//! densest first, and the JSON result document.
//!
//! `cargo run --example extract_features [out.json]`

use stroketrap::features::report::ResultDocument;
use stroketrap::features::{extract, PipelineParams};
use stroketrap::geometry::Point;
use stroketrap::imaging::BinaryImage;
use stroketrap::synthesis::{render_synthetic, Edge, FillMode, Node, StrokeGraph};

// Four separate strokes, each two disks joined by a bar.
fn glyph() -> stroketrap::Result<BinaryImage> {
    let ends = [
        ((10.0, 14.0), (30.0, 10.0)),
        ((10.0, 50.0), (30.0, 54.0)),
        ((44.0, 12.0), (44.0, 30.0)),
        ((44.0, 40.0), (56.0, 54.0)),
    ];
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for (a, b) in ends {
        let i = nodes.len();
        nodes.push(Node {
            centroid: Point::new(a.0, a.1),
            radius: 3.0,
        });
        nodes.push(Node {
            centroid: Point::new(b.0, b.1),
            radius: 3.0,
        });
        edges.push(Edge {
            i,
            j: i + 1,
            density: 1.0,
        });
    }
    render_synthetic(&StrokeGraph::new(nodes, edges, 64, 64)?, FillMode::Solid)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let img = glyph()?;
    let params = PipelineParams {
        max_trapezoids: 5,
        ..PipelineParams::default()
    };
    let result = extract(&img, &params)?;

    println!(
        "{} clusters, {} trapezoids kept",
        result.clustering.count(),
        result.trapezoids.len()
    );
    for c in &result.circles {
        println!(
            "circle {}: r {:.1}, density {:.3}",
            c.id, c.radius, c.density
        );
    }
    for s in result.plotted() {
        println!(
            "trapezoid {:?}: fg {} / area {:.1} = density {:.3}",
            s.trap.src, s.fg_count, s.area, s.density
        );
    }

    let json = ResultDocument::new(&result, &params, None, None, None).to_json()?;
    match std::env::args().nth(1) {
        Some(path) => {
            std::fs::write(&path, &json)?;
            println!("wrote {path}");
        }
        None => print!("{json}"),
    }
    Ok(())
}
