use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A real-valued position in the pixel frame, `(row, col)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub row: f64,
    pub col: f64,
}

impl Point {
    pub const fn new(row: f64, col: f64) -> Self {
        Self { row, col }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.row * other.row + self.col * other.col
    }

    /// `row * other.col - col * other.row`; negative when `other` is
    /// clockwise of `self` on screen.
    pub fn cross(self, other: Point) -> f64 {
        self.row * other.col - self.col * other.row
    }

    pub fn norm(self) -> f64 {
        self.row.hypot(self.col)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.row.is_finite() && self.col.is_finite()
    }
}

impl From<(f64, f64)> for Point {
    fn from((row, col): (f64, f64)) -> Self {
        Self { row, col }
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.row + o.row, self.col + o.col)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.row - o.row, self.col - o.col)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.row * k, self.col * k)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.row, -self.col)
    }
}
