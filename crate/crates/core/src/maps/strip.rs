use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Factor, ShapeDescriptor};

/// C¹ even bump: 1 on `[-1/6, 1/6]`, 0 outside `(-1/3, 1/3)`, `|β'| ≤ 7`.
///
/// `-β'` on `[1/6, 1/3]` is a trapezoid of height 7 with ramps of width 1/42,
/// which integrates to exactly 1, so β is piecewise quadratic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BumpFunction;

const PLATEAU: f64 = 1.0 / 6.0;
const SUPPORT: f64 = 1.0 / 3.0;
const SLOPE: f64 = 7.0;
const RAMP: f64 = 1.0 / 42.0;

impl BumpFunction {
    pub const PLATEAU: f64 = PLATEAU;
    pub const SUPPORT: f64 = SUPPORT;
    pub const SLOPE_BOUND: f64 = SLOPE;

    pub fn value(&self, x: f64) -> f64 {
        let t = x.abs() - PLATEAU;
        let width = SUPPORT - PLATEAU;
        if t <= 0.0 {
            1.0
        } else if t >= width {
            0.0
        } else if t < RAMP {
            1.0 - SLOPE * t * t / (2.0 * RAMP)
        } else if t <= width - RAMP {
            1.0 - SLOPE * RAMP / 2.0 - SLOPE * (t - RAMP)
        } else {
            let r = width - t;
            SLOPE * r * r / (2.0 * RAMP)
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let t = x.abs() - PLATEAU;
        let width = SUPPORT - PLATEAU;
        let mag = if t <= 0.0 || t >= width {
            0.0
        } else {
            SLOPE * (t / RAMP).min(1.0).min((width - t) / RAMP)
        };
        -mag.copysign(x)
    }

    /// Piecewise constant; the one-sided value from the right at breakpoints.
    pub fn second_deriv(&self, x: f64) -> f64 {
        let t = x.abs() - PLATEAU;
        let width = SUPPORT - PLATEAU;
        let k = if t < 0.0 || t >= width {
            0.0
        } else if t < RAMP {
            -SLOPE / RAMP
        } else if t < width - RAMP {
            0.0
        } else {
            SLOPE / RAMP
        };
        k
    }
}

/// Time-`t` flow of the Hamiltonian `-β(x₁) x₂`: x₁, x₂ are fixed,
/// `y₁ += t β'(x₁) x₂`, `y₂ += t β(x₁)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripLift {
    pub w: f64,
    pub t: f64,
}

impl StripLift {
    pub fn new(w: f64, t: f64) -> Result<Self> {
        if !(w > 0.0 && w <= 0.1) {
            return Err(Error::hypothesis(format!("strip half-width w = {w} must lie in (0, 1/10]")));
        }
        if !(0.0..=2.0 * w).contains(&t) {
            return Err(Error::hypothesis(format!("flow time t = {t} must lie in [0, 2w]")));
        }
        Ok(Self { w, t })
    }

    /// Any real time; used for the flow group law.
    pub fn with_time(&self, t: f64) -> Self {
        Self { w: self.w, t }
    }

    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        let b = BumpFunction;
        let (x1, x2) = (p[0], p[1]);
        vec![x1, x2, p[2] + self.t * b.deriv(x1) * x2, p[3] + self.t * b.value(x1)]
    }

    /// Row-major 4×4 Jacobian in (x₁, x₂, y₁, y₂) order.
    pub fn jacobian(&self, p: &[f64]) -> [[f64; 4]; 4] {
        let b = BumpFunction;
        let (x1, x2) = (p[0], p[1]);
        let d = self.t * b.deriv(x1);
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [self.t * b.second_deriv(x1) * x2, d, 1.0, 0.0],
            [d, 0.0, 0.0, 1.0],
        ]
    }

    /// The strip `S × B²(w)`, with S = [-1/2,1/2]×[-w,w] in the (x₁,y₁) plane.
    pub fn domain(&self) -> ShapeDescriptor {
        ShapeDescriptor::new(vec![
            Factor::Rectangle { sides: vec![1.0, 2.0 * self.w], origin: vec![-0.5, -self.w] },
            Factor::Disk2 { radius: self.w },
        ])
        .expect("valid strip domain")
    }
}

pub fn strip_lift(w: f64, t: f64) -> Result<StripLift> {
    StripLift::new(w, t)
}

/// `B²(1) × B²((0, w), 2w)`, which contains the time-2w lift of the strip.
pub fn strip_separation_region(w: f64) -> Result<ShapeDescriptor> {
    if !(w > 0.0 && w <= 0.1) {
        return Err(Error::hypothesis(format!("strip half-width w = {w} must lie in (0, 1/10]")));
    }
    ShapeDescriptor::new(vec![
        Factor::Disk2 { radius: 1.0 },
        Factor::TranslatedDisk2 { center: [0.0, w], radius: 2.0 * w },
    ])
}

/// Planar model of the immersed punctured torus inside the open unit square:
/// a horizontal strip `[-1/2,1/2]×[-w,w]` and a vertical strip
/// `[-w,w]×[-1/2,1/2]`. Points of the overlap square have two preimages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripImmersionModel {
    pub w: f64,
    /// When false the vertical strip skips the overlap, so no double points remain.
    pub overlapping: bool,
}

impl StripImmersionModel {
    pub fn new(w: f64) -> Result<Self> {
        if !(w > 0.0 && w < 0.5) {
            return Err(Error::hypothesis(format!("strip half-width w = {w} must lie in (0, 1/2)")));
        }
        Ok(Self { w, overlapping: true })
    }

    pub fn without_overlap(w: f64) -> Result<Self> {
        Ok(Self { overlapping: false, ..Self::new(w)? })
    }

    pub fn in_horizontal(&self, x: f64, y: f64) -> bool {
        x.abs() <= 0.5 && y.abs() <= self.w
    }

    pub fn in_vertical(&self, x: f64, y: f64) -> bool {
        x.abs() <= self.w && y.abs() <= 0.5 && (self.overlapping || y.abs() > self.w)
    }

    /// Number of preimages of a point of the unit square.
    pub fn preimage_count(&self, x: f64, y: f64) -> u8 {
        self.in_horizontal(x, y) as u8 + self.in_vertical(x, y) as u8
    }

    /// Connector membership: in B²(1) and outside the open unit square.
    pub fn in_connector(&self, x: f64, y: f64) -> bool {
        x.hypot(y) < 1.0 && (x.abs() >= 0.5 || y.abs() >= 0.5)
    }

    /// Exact area of the double-point set.
    pub fn double_point_area(&self) -> f64 {
        if self.overlapping {
            4.0 * self.w * self.w
        } else {
            0.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_shape() {
        let b = BumpFunction;
        assert_eq!(b.value(0.0), 1.0);
        assert_eq!(b.value(1.0 / 6.0), 1.0);
        assert_eq!(b.value(-0.1), 1.0);
        assert_eq!(b.value(1.0 / 3.0), 0.0);
        assert_eq!(b.value(0.4), 0.0);
        // Continuity at the interior breakpoints.
        for x in [PLATEAU + RAMP, SUPPORT - RAMP] {
            assert!((b.value(x - 1e-13) - b.value(x + 1e-13)).abs() < 1e-11);
        }
        let mut max_slope: f64 = 0.0;
        for i in 0..=100_000 {
            let x = -0.5 + i as f64 * 1e-5;
            assert!((0.0..=1.0).contains(&b.value(x)));
            max_slope = max_slope.max(b.deriv(x).abs());
        }
        assert!(max_slope <= 7.0 && max_slope > 6.99);
    }

    #[test]
    fn bump_derivative_is_derivative() {
        let b = BumpFunction;
        for x in [-0.3, -0.2, -0.17, 0.175, 0.25, 0.31] {
            let h = 1e-7;
            let fd = (b.value(x + h) - b.value(x - h)) / (2.0 * h);
            assert!((fd - b.deriv(x)).abs() < 1e-6, "x = {x}");
        }
    }

    #[test]
    fn lift_examples() {
        let f = strip_lift(0.1, 0.2).unwrap();
        let q = f.apply(&[0.0, 0.0, 0.1, 0.0]);
        assert_eq!(q, vec![0.0, 0.0, 0.1, 0.2]);
        assert_eq!(f.apply(&[0.4, 0.05, 0.02, -0.03]), vec![0.4, 0.05, 0.02, -0.03]);
        assert!(strip_lift(0.2, 0.1).is_err());
        assert!(strip_lift(0.1, 0.3).is_err());
    }

    #[test]
    fn flow_group_law() {
        let f = strip_lift(0.1, 0.2).unwrap();
        let p = [0.21, -0.07, 0.03, 0.04];
        let two_step = f.with_time(0.05).apply(&f.with_time(0.15).apply(&p));
        let one_step = f.apply(&p);
        for (a, b) in two_step.iter().zip(&one_step) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn model_overlap() {
        let m = StripImmersionModel::new(0.05).unwrap();
        assert_eq!(m.preimage_count(0.0, 0.0), 2);
        assert_eq!(m.preimage_count(0.3, 0.0), 1);
        assert_eq!(m.preimage_count(0.3, 0.3), 0);
        assert!((m.double_point_area() - 0.01).abs() < 1e-15);
        let d = StripImmersionModel::without_overlap(0.05).unwrap();
        assert_eq!(d.preimage_count(0.0, 0.0), 1);
        assert!(m.in_connector(0.6, 0.0) && !m.in_connector(0.2, 0.2));
        let region = strip_separation_region(0.1).unwrap();
        assert_eq!(region.to_string(), "disk(1) * tdisk(0, 0.1, 0.2)");
    }
}
