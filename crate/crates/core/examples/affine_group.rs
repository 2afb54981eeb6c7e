//! The four group axioms of invertible affine maps, checked numerically.

use stroketrap::geometry::{AffineTransform, Point};

fn main() -> stroketrap::Result<()> {
    let a = AffineTransform::similarity(1.5, 0.4, Point::new(20.0, 20.0), Point::new(3.0, -2.0))?;
    let b = AffineTransform::new([[1.0, 0.3], [0.0, 0.8]], [5.0, 1.0])?;
    let c = AffineTransform::translation(-7.0, 4.0);
    let id = AffineTransform::identity();
    let p = Point::new(12.5, -3.25);

    let ab = a.compose(&b);
    println!(
        "closure: det(ab) = {:.6} = det(a) det(b) = {:.6}",
        ab.det(),
        a.det() * b.det()
    );
    let lhs = ab.compose(&c).apply(p);
    let rhs = a.compose(&b.compose(&c)).apply(p);
    println!(
        "associativity: |(ab)c p - a(bc) p| = {:.1e}",
        lhs.distance(rhs)
    );
    println!(
        "identity: |a id p - a p| = {:.1e}",
        a.compose(&id).apply(p).distance(a.apply(p))
    );
    println!(
        "inverse: |a^-1 a p - p| = {:.1e}",
        a.inverse().compose(&a).apply(p).distance(p)
    );

    println!(
        "a is a similarity with scale {:?}",
        a.similarity_scale(1e-9)
    );
    println!("b is a similarity: {}", b.similarity_scale(1e-9).is_some());
    match AffineTransform::new([[1.0, 2.0], [2.0, 4.0]], [0.0, 0.0]) {
        Ok(_) => println!("singular matrix accepted"),
        Err(e) => println!("singular matrix rejected: {e}"),
    }
    Ok(())
}
