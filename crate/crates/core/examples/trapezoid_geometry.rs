//! Trapezoid construction between two circles, clockwise labeling, area and
//! the similarity pose of the stroke.

use stroketrap::geometry::{canonicalize_clockwise, polygon_area, signed_area, Point, Trapezoid};

fn main() -> stroketrap::Result<()> {
    let (ci, ri) = (Point::new(10.0, 10.0), 3.0);
    let (cj, rj) = (Point::new(22.0, 30.0), 5.0);
    let t = Trapezoid::connect((0, 1), ci, ri, cj, rj)?;

    for (k, v) in t.vertices.iter().enumerate() {
        println!("P{}: ({:.3}, {:.3})", k + 1, v.row, v.col);
    }
    println!(
        "signed area {:.3} (negative = clockwise on screen)",
        signed_area(&t.vertices)
    );
    println!(
        "area {:.3}, closed form (r_i + r_j)|c_i - c_j| = {:.3}",
        polygon_area(&t.vertices),
        (ri + rj) * ci.distance(cj)
    );

    let v = t.vertices;
    let relabeled = canonicalize_clockwise(&[v[1], v[0], v[3], v[2]])?;
    println!(
        "counter-clockwise input relabels to the same cycle: {}",
        relabeled == v
    );

    let pose = t.pose();
    println!(
        "pose scale {:?}, maps (0, 1) to {:?}",
        pose.similarity_scale(1e-9),
        pose.apply(Point::new(0.0, 1.0))
    );
    println!("feature vector {:?}", t.feature(0.42));
    Ok(())
}
