use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ShapeDescriptor;

/// The necessary conditions `R₁ ≤ R′₁` and `∏Rᵢ ≤ ∏R′ᵢ` for `P ↪ P′`, plus the
/// intermediate partial products `R₁⋯R_k` against `R′₁⋯R′_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstructionVerdict {
    pub nonsqueeze_ok: bool,
    pub volume_ok: bool,
    /// `(k, R₁⋯R_k, R′₁⋯R′_k)` for k = 1..n; infinite radii give infinite products.
    pub partial_products: Vec<(usize, f64, f64)>,
}

impl ObstructionVerdict {
    pub fn ok(&self) -> bool {
        self.nonsqueeze_ok && self.volume_ok
    }

    pub fn nonsqueeze_sides(&self) -> (f64, f64) {
        let (_, a, b) = self.partial_products[0];
        (a, b)
    }

    pub fn volume_sides(&self) -> (f64, f64) {
        let (_, a, b) = *self.partial_products.last().expect("n >= 1");
        (a, b)
    }

    /// Source and target products of the k smallest radii.
    pub fn partial(&self, k: usize) -> Option<(f64, f64)> {
        self.partial_products.iter().find(|e| e.0 == k).map(|e| (e.1, e.2))
    }

    /// Human-readable reason for a failed verdict.
    pub fn violation(&self) -> Option<String> {
        if !self.nonsqueeze_ok {
            let (a, b) = self.nonsqueeze_sides();
            Some(format!("non-squeezing: R1 = {a} > R'1 = {b}"))
        } else if !self.volume_ok {
            let (a, b) = self.volume_sides();
            Some(format!("volume: prod R = {a} > prod R' = {b}"))
        } else {
            None
        }
    }
}

const TOL: f64 = 1e-12;

/// Both shapes must be products of disks and planes of equal dimension.
pub fn obstruction_check(p: &ShapeDescriptor, q: &ShapeDescriptor) -> Result<ObstructionVerdict> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), got: q.dim() });
    }
    let radii = |s: &ShapeDescriptor| -> Result<Vec<f64>> {
        let mut r = s
            .polydisk_radii()
            .ok_or_else(|| Error::InvalidShape(format!("{s} is not a product of disks")))?;
        r.sort_by(f64::total_cmp);
        Ok(r)
    };
    let (r, rp) = (radii(p)?, radii(q)?);
    let mut partial = Vec::with_capacity(r.len());
    let (mut a, mut b) = (1.0, 1.0);
    for k in 0..r.len() {
        a *= r[k];
        b *= rp[k];
        partial.push((k + 1, a, b));
    }
    let le = |x: f64, y: f64| x <= y * (1.0 + TOL);
    Ok(ObstructionVerdict {
        nonsqueeze_ok: le(r[0], rp[0]),
        volume_ok: le(a, b),
        partial_products: partial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd(r: &[f64]) -> ShapeDescriptor {
        ShapeDescriptor::polydisk(r).unwrap()
    }

    #[test]
    fn examples() {
        assert!(obstruction_check(&pd(&[1.0, 2.0]), &pd(&[1.0, 2.0])).unwrap().ok());
        let v = obstruction_check(&pd(&[1.0, 1.0]), &crate::geometry::parse_shape("disk(0.5) * plane").unwrap()).unwrap();
        assert!(!v.nonsqueeze_ok && v.volume_ok);
        assert!(v.violation().unwrap().contains("non-squeezing"));
        let v = obstruction_check(&pd(&[1.0, 1.0, 1.0]), &pd(&[2.0, 2.0, 0.1])).unwrap();
        assert!(!v.volume_ok);
        let (a, b) = v.volume_sides();
        assert!((a - 1.0).abs() < 1e-15 && (b - 0.4).abs() < 1e-15);
        assert!(obstruction_check(&pd(&[1.0]), &pd(&[1.0, 1.0])).is_err());
    }
}
