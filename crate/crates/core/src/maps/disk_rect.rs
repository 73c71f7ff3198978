use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ShapeDescriptor;

/// Area-preserving triangular map from the open disk `B²(R)` onto the open
/// rectangle `(-A/2, A/2) × (-H/2, H/2)` with `AH = πR²` and `A/H = aspect`.
///
/// `u` depends on x alone and matches the disk area to the left of x; `v`
/// rescales each vertical chord linearly onto the full height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskRectangleMap {
    radius: f64,
    aspect: f64,
}

/// Points closer than this to the disk boundary are flagged as degraded.
pub const BOUNDARY_GUARD: f64 = 1e-6;

impl DiskRectangleMap {
    pub fn new(radius: f64, aspect: f64) -> Result<Self> {
        if !(radius > 0.0 && aspect > 0.0 && radius.is_finite() && aspect.is_finite()) {
            return Err(Error::hypothesis(format!("invalid disk/rectangle parameters R = {radius}, aspect = {aspect}")));
        }
        Ok(Self { radius, aspect })
    }

    pub fn square(radius: f64) -> Result<Self> {
        Self::new(radius, 1.0)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Rectangle sides `(A, H)`.
    pub fn sides(&self) -> (f64, f64) {
        let area = PI * self.radius * self.radius;
        let h = (area / self.aspect).sqrt();
        (area / h, h)
    }

    pub fn disk(&self) -> ShapeDescriptor {
        ShapeDescriptor::disk(self.radius).expect("positive radius")
    }

    pub fn rectangle(&self) -> ShapeDescriptor {
        let (a, h) = self.sides();
        ShapeDescriptor::rectangle_at(&[a, h], &[-a / 2.0, -h / 2.0]).expect("positive sides")
    }

    /// Disk area left of the vertical line at x.
    fn marginal(&self, x: f64) -> f64 {
        let r = self.radius;
        let t = (x / r).clamp(-1.0, 1.0);
        r * r * (t.asin() + t * (1.0 - t * t).sqrt()) + PI * r * r / 2.0
    }

    fn half_chord(&self, x: f64) -> f64 {
        (self.radius * self.radius - x * x).max(0.0).sqrt()
    }

    pub fn is_degraded(&self, p: [f64; 2]) -> bool {
        self.radius - p[0].hypot(p[1]) < BOUNDARY_GUARD
    }

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        let (a, h) = self.sides();
        let s = self.half_chord(p[0]).max(f64::MIN_POSITIVE);
        [-a / 2.0 + self.marginal(p[0]) / h, p[1] * h / (2.0 * s)]
    }

    /// Evaluation together with the near-boundary flag.
    pub fn apply_checked(&self, p: [f64; 2]) -> ([f64; 2], bool) {
        (self.apply(p), self.is_degraded(p))
    }

    pub fn jacobian(&self, p: [f64; 2]) -> [[f64; 2]; 2] {
        let (_, h) = self.sides();
        let s = self.half_chord(p[0]).max(f64::MIN_POSITIVE);
        [[2.0 * s / h, 0.0], [p[1] * h * p[0] / (2.0 * s * s * s), h / (2.0 * s)]]
    }

    pub fn inverse(&self, q: [f64; 2]) -> [f64; 2] {
        let (a, h) = self.sides();
        let target = (q[0] + a / 2.0) * h;
        let r = self.radius;
        let (mut lo, mut hi) = (-r, r);
        let mut x = 0.0;
        for _ in 0..200 {
            let f = self.marginal(x) - target;
            if f > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let slope = 2.0 * self.half_chord(x);
            let newton = x - f / slope;
            let next = if slope > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if (next - x).abs() <= 1e-16 * r {
                x = next;
                break;
            }
            x = next;
        }
        [x, q[1] * 2.0 * self.half_chord(x) / h]
    }
}

pub fn disk_rectangle_map(radius: f64) -> Result<DiskRectangleMap> {
    DiskRectangleMap::square(radius)
}

/// Radius of the disk whose area is `2^{-1/2} L`, the fiber-box bookkeeping of
/// the cotangent-bundle picture.
pub fn cotangent_box_radius(length: f64) -> f64 {
    (length / (2f64.sqrt() * PI)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn center_and_area() {
        let m = disk_rectangle_map(2.0).unwrap();
        let c = m.apply([0.0, 0.0]);
        assert!(c[0].abs() < 1e-12 && c[1].abs() < 1e-12);
        let (a, h) = m.sides();
        assert!((a * h - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn unit_determinant_and_inverse() {
        let m = DiskRectangleMap::new(1.5, 3.0).unwrap();
        for &p in &[[0.3, -0.2], [-1.2, 0.5], [1.0, 1.0], [0.0, 1.49]] {
            let j = m.jacobian(p);
            assert!((j[0][0] * j[1][1] - j[0][1] * j[1][0] - 1.0).abs() < 1e-12);
            let back = m.inverse(m.apply(p));
            assert!((back[0] - p[0]).abs() < 1e-10 && (back[1] - p[1]).abs() < 1e-10);
            assert!(m.rectangle().contains(&m.apply(p)).unwrap());
        }
    }

    #[test]
    fn boundary_flag() {
        let m = disk_rectangle_map(1.0).unwrap();
        assert!(m.apply_checked([1.0 - 1e-8, 0.0]).1);
        assert!(!m.apply_checked([0.5, 0.0]).1);
    }

    #[test]
    fn box_radius_bookkeeping() {
        let r = cotangent_box_radius(3.0);
        assert!((PI * r * r - 3.0 / 2f64.sqrt()).abs() < 1e-12);
    }
}
