use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// ∫_{-1}^{1} (1-u²)³ du.
const KAPPA: f64 = 32.0 / 35.0;

fn spike(u: f64) -> f64 {
    let s = 1.0 - u * u;
    s * s * s
}

fn spike_slope(u: f64) -> f64 {
    let s = 1.0 - u * u;
    -6.0 * u * s * s
}

/// Antiderivative of the spike with `G(0) = 0`, `G(±1) = ±16/35`.
fn spike_integral(u: f64) -> f64 {
    let u = u.clamp(-1.0, 1.0);
    let u2 = u * u;
    u * (1.0 + u2 * (-1.0 + u2 * (3.0 / 5.0 - u2 / 7.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct PhiParams {
    rho: f64,
    half_width: f64,
    height: f64,
}

/// Increasing diffeomorphism Φ of ℝ commuting with `x ↦ x + 1` and fixing ℤ.
///
/// `dΦ = b + (H - b)(1 - u²)³` with `u = (x - m)/δ` inside `|x - m| < δ` around
/// each integer `m`, and `dΦ = b` elsewhere. `b` is fixed by `∫₀¹ dΦ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PhiParams", into = "PhiParams")]
pub struct PeriodicDiffeo1D {
    rho: f64,
    half_width: f64,
    height: f64,
    base: f64,
}

impl PeriodicDiffeo1D {
    /// The profile used for the disk of radius `rho`: spike height `100ρ`,
    /// half-width `min(1e-6/ρ, 1e-3)`.
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho >= 1.0) || !rho.is_finite() {
            return Err(Error::hypothesis(format!("ρ = {rho} must be at least 1")));
        }
        Self::with_profile(rho, (1e-6 / rho).min(1e-3), 100.0 * rho)
    }

    /// Arbitrary spike height and half-width; `height = 1` gives the identity.
    pub fn with_profile(rho: f64, half_width: f64, height: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width < 0.5 && height > 0.0 && rho > 0.0) {
            return Err(Error::hypothesis(format!(
                "invalid profile: ρ = {rho}, half-width {half_width}, height {height}"
            )));
        }
        let base = (1.0 - height * half_width * KAPPA) / (1.0 - half_width * KAPPA);
        if !(base > 0.0) {
            return Err(Error::hypothesis(format!("spike too large: flat level {base}")));
        }
        Ok(Self { rho, half_width, height, base })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    /// The flat level of dΦ away from the integers.
    pub fn base(&self) -> f64 {
        self.base
    }

    /// Largest |Φ(x) - x|, attained at distance δ from an integer.
    pub fn max_displacement(&self) -> f64 {
        let d = self.half_width;
        ((self.base - 1.0) * d + (self.height - self.base) * d * (16.0 / 35.0)).abs()
    }

    fn split(x: f64) -> (f64, f64) {
        let m = (x + 0.5).floor();
        (m, x - m)
    }

    fn local(&self, f: f64) -> f64 {
        self.base * f + (self.height - self.base) * self.half_width * spike_integral(f / self.half_width)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (m, f) = Self::split(x);
        m + self.local(f)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let (_, f) = Self::split(x);
        let u = f / self.half_width;
        if u.abs() < 1.0 {
            self.base + (self.height - self.base) * spike(u)
        } else {
            self.base
        }
    }

    pub fn second_deriv(&self, x: f64) -> f64 {
        let (_, f) = Self::split(x);
        let u = f / self.half_width;
        if u.abs() < 1.0 {
            (self.height - self.base) * spike_slope(u) / self.half_width
        } else {
            0.0
        }
    }

    /// Safeguarded Newton on one period; Φ maps `[m - 1/2, m + 1/2]` onto itself.
    pub fn inverse(&self, t: f64) -> f64 {
        let (m, g) = Self::split(t);
        let (mut lo, mut hi) = (-0.5, 0.5);
        let mut f = g.clamp(-self.half_width, self.half_width);
        if g.abs() >= self.local(self.half_width) {
            f = self.half_width.copysign(g) + (g - self.local(self.half_width).copysign(g)) / self.base;
        }
        for _ in 0..200 {
            let r = self.local(f) - g;
            if r == 0.0 {
                break;
            }
            if r > 0.0 {
                hi = f;
            } else {
                lo = f;
            }
            let step = f - r / self.deriv(f);
            let next = if step > lo && step < hi { step } else { 0.5 * (lo + hi) };
            if (next - f).abs() <= 1e-17 * (1.0 + m.abs()) {
                f = next;
                break;
            }
            f = next;
        }
        m + f
    }
}

impl TryFrom<PhiParams> for PeriodicDiffeo1D {
    type Error = Error;

    fn try_from(p: PhiParams) -> Result<Self> {
        Self::with_profile(p.rho, p.half_width, p.height)
    }
}

impl From<PeriodicDiffeo1D> for PhiParams {
    fn from(p: PeriodicDiffeo1D) -> Self {
        Self {
            rho: p.rho,
            half_width: p.half_width,
            height: p.height,
        }
    }
}

pub fn phi_eval(phi: &PeriodicDiffeo1D, x: f64) -> f64 {
    phi.eval(x)
}

pub fn phi_deriv(phi: &PeriodicDiffeo1D, x: f64) -> f64 {
    phi.deriv(x)
}

pub fn phi_inverse(phi: &PeriodicDiffeo1D, t: f64) -> f64 {
    phi.inverse(t)
}

/// The shear `Ψ(x, y) = (Φ(x), 1/2 + y / Φ'(x))`.
pub fn psi_eval(phi: &PeriodicDiffeo1D, p: [f64; 2]) -> [f64; 2] {
    [phi.eval(p[0]), 0.5 + p[1] / phi.deriv(p[0])]
}

/// Row-major Jacobian of Ψ; its determinant is identically 1.
pub fn psi_jacobian(phi: &PeriodicDiffeo1D, p: [f64; 2]) -> [[f64; 2]; 2] {
    let d = phi.deriv(p[0]);
    let dd = phi.second_deriv(p[0]);
    [[d, 0.0], [-p[1] * dd / (d * d), 1.0 / d]]
}

pub fn psi_inverse(phi: &PeriodicDiffeo1D, q: [f64; 2]) -> [f64; 2] {
    let x = phi.inverse(q[0]);
    [x, (q[1] - 0.5) * phi.deriv(x)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixes_integers_and_spikes() {
        let phi = PeriodicDiffeo1D::new(5.0).unwrap();
        for m in -3..=3 {
            assert_eq!(phi.eval(m as f64), m as f64);
        }
        assert!((phi.deriv(0.0) - 500.0).abs() < 1e-9);
        assert!((phi.eval(0.5) - 0.5).abs() <= 1e-4);
        assert!(phi.base() >= 0.9);
    }

    #[test]
    fn antiderivative_matches_quadrature() {
        // Simpson on the spike against the closed form.
        let n = 2000;
        let h = 1.0 / n as f64;
        let mut acc = spike(0.0) + spike(1.0);
        for i in 1..n {
            acc += if i % 2 == 1 { 4.0 } else { 2.0 } * spike(i as f64 * h);
        }
        assert!((acc * h / 3.0 - spike_integral(1.0)).abs() < 1e-12);
        assert!((2.0 * spike_integral(1.0) - KAPPA).abs() < 1e-15);
    }

    #[test]
    fn displacement_within_bound_for_all_rho() {
        for rho in [1.0, 3.0, 10.0, 100.0, 1e4] {
            let phi = PeriodicDiffeo1D::new(rho).unwrap();
            assert!(phi.max_displacement() <= 1e-4, "ρ = {rho}");
            let x = phi.half_width();
            assert!(((phi.eval(x) - x).abs() - phi.max_displacement()).abs() < 1e-15);
        }
    }

    #[test]
    fn inverse_roundtrip_near_spike() {
        let phi = PeriodicDiffeo1D::new(10.0).unwrap();
        for x in [-2.3, -1e-7, 0.0, 3e-8, 1e-7 + 1e-12, 0.25, 0.4999999, 0.5, 7.0 - 1e-8] {
            assert!((phi.inverse(phi.eval(x)) - x).abs() <= 1e-10, "x = {x}");
        }
    }

    #[test]
    fn second_derivative_matches_difference() {
        let phi = PeriodicDiffeo1D::new(1.0).unwrap();
        let d = phi.half_width();
        for f in [-0.7, -0.2, 0.3, 0.9] {
            let x = f * d;
            let h = d * 1e-5;
            let fd = (phi.deriv(x + h) - phi.deriv(x - h)) / (2.0 * h);
            assert!((fd - phi.second_deriv(x)).abs() <= 1e-5 * phi.second_deriv(x).abs().max(1.0));
        }
    }

    #[test]
    fn psi_formula() {
        let phi = PeriodicDiffeo1D::new(5.0).unwrap();
        assert_eq!(psi_eval(&phi, [0.0, 0.0]), [0.0, 0.5]);
        let q = psi_eval(&phi, [0.0, 2.0]);
        assert!((q[1] - (0.5 + 2.0 / 500.0)).abs() < 1e-12);
        let j = psi_jacobian(&phi, [0.3e-6, 1.5]);
        assert!((j[0][0] * j[1][1] - j[0][1] * j[1][0] - 1.0).abs() < 1e-12);
        let back = psi_inverse(&phi, psi_eval(&phi, [0.123, -4.0]));
        assert!((back[0] - 0.123).abs() < 1e-12 && (back[1] + 4.0).abs() < 1e-9);
    }

    #[test]
    fn identity_profile() {
        let phi = PeriodicDiffeo1D::with_profile(3.0, 1e-3, 1.0).unwrap();
        assert!((phi.eval(0.37) - 0.37).abs() < 1e-15);
        assert_eq!(phi.deriv(0.0), 1.0);
    }
}
