use serde::{Deserialize, Serialize};

use super::Point;
use crate::error::{Error, Result};

const SINGULAR_EPS: f64 = 1e-12;

/// Invertible planar affine map `p -> m * p + t` acting on `(row, col)`.
///
/// Invertible transforms form a group under [`AffineTransform::compose`]:
/// the product of two is again invertible, composition is associative,
/// [`AffineTransform::identity`] is neutral and [`AffineTransform::inverse`]
/// undoes a transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineTransform {
    m: [[f64; 2]; 2],
    t: [f64; 2],
}

impl AffineTransform {
    pub fn new(m: [[f64; 2]; 2], t: [f64; 2]) -> Result<Self> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if !det.is_finite() || det.abs() < SINGULAR_EPS || !t.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidTransform(format!(
                "matrix {m:?} is singular or non-finite (det = {det})"
            )));
        }
        Ok(Self { m, t })
    }

    pub const fn identity() -> Self {
        Self {
            m: [[1.0, 0.0], [0.0, 1.0]],
            t: [0.0, 0.0],
        }
    }

    pub const fn translation(d_row: f64, d_col: f64) -> Self {
        Self {
            m: [[1.0, 0.0], [0.0, 1.0]],
            t: [d_row, d_col],
        }
    }

    /// Uniform scale `s` about `center` followed by a rotation by `angle`
    /// radians, then a shift by `offset`.
    pub fn similarity(scale: f64, angle: f64, center: Point, offset: Point) -> Result<Self> {
        let (sin, cos) = angle.sin_cos();
        let m = [[scale * cos, -scale * sin], [scale * sin, scale * cos]];
        let lin = Self::new(m, [0.0, 0.0])?;
        let moved = lin.apply(center);
        Self::new(
            m,
            [
                center.row - moved.row + offset.row,
                center.col - moved.col + offset.col,
            ],
        )
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        self.m
    }

    pub fn offset(&self) -> [f64; 2] {
        self.t
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn apply(&self, p: Point) -> Point {
        Point::new(
            self.m[0][0] * p.row + self.m[0][1] * p.col + self.t[0],
            self.m[1][0] * p.row + self.m[1][1] * p.col + self.t[1],
        )
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &AffineTransform) -> AffineTransform {
        let a = &self.m;
        let b = &other.m;
        let m = [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ];
        let shifted = self.apply(Point::new(other.t[0], other.t[1]));
        AffineTransform {
            m,
            t: [shifted.row, shifted.col],
        }
    }

    pub fn inverse(&self) -> AffineTransform {
        let d = self.det();
        let m = [
            [self.m[1][1] / d, -self.m[0][1] / d],
            [-self.m[1][0] / d, self.m[0][0] / d],
        ];
        let t = [
            -(m[0][0] * self.t[0] + m[0][1] * self.t[1]),
            -(m[1][0] * self.t[0] + m[1][1] * self.t[1]),
        ];
        AffineTransform { m, t }
    }

    /// Uniform scale factor when the linear part is a scaled rotation or
    /// reflection (`mᵀm = s²I` within `tol`, relative to `s²`).
    pub fn similarity_scale(&self, tol: f64) -> Option<f64> {
        let [[a, b], [c, d]] = self.m;
        let s2 = self.det().abs();
        let g00 = a * a + c * c;
        let g11 = b * b + d * d;
        let g01 = a * b + c * d;
        let close = |x: f64, y: f64| (x - y).abs() <= tol * s2.max(1e-300);
        (close(g00, s2) && close(g11, s2) && close(g01, 0.0)).then(|| s2.sqrt())
    }
}

impl Default for AffineTransform {
    fn default() -> Self {
        Self::identity()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_neutral() {
        let p = AffineTransform::identity().apply(Point::new(3.0, 4.0));
        assert_eq!(p, Point::new(3.0, 4.0));
    }

    #[test]
    fn translation_inverse() {
        let a = AffineTransform::translation(1.0, 2.0);
        let back = a.inverse().compose(&a).apply(Point::new(7.0, 7.0));
        assert!((back.row - 7.0).abs() < 1e-12 && (back.col - 7.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_singular() {
        assert!(AffineTransform::new([[1.0, 2.0], [2.0, 4.0]], [0.0, 0.0]).is_err());
        assert!(AffineTransform::new([[f64::NAN, 0.0], [0.0, 1.0]], [0.0, 0.0]).is_err());
    }

    #[test]
    fn similarity_detection() {
        let s =
            AffineTransform::similarity(2.5, 0.7, Point::new(1.0, 1.0), Point::default()).unwrap();
        assert!((s.similarity_scale(1e-9).unwrap() - 2.5).abs() < 1e-12);
        assert_eq!(s.apply(Point::new(1.0, 1.0)), Point::new(1.0, 1.0));
        let shear = AffineTransform::new([[1.0, 0.5], [0.0, 1.0]], [0.0, 0.0]).unwrap();
        assert!(shear.similarity_scale(1e-9).is_none());
        let aniso = AffineTransform::new([[2.0, 0.0], [0.0, 1.0]], [0.0, 0.0]).unwrap();
        assert!(aniso.similarity_scale(1e-9).is_none());
        let mirror = AffineTransform::new([[0.0, 3.0], [3.0, 0.0]], [0.0, 0.0]).unwrap();
        assert_eq!(mirror.similarity_scale(1e-9), Some(3.0));
    }
}
