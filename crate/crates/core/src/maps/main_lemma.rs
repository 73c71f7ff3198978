use serde::{Deserialize, Serialize};

use super::{build_polterovich_linear, compose, product_with_identity, MapNode, PeriodicDiffeo1D, PolterovichLinear};
use crate::error::Result;
use crate::geometry::{Factor, ShapeDescriptor};

/// Radius of the disk used for Φ: the block radius rounded up to one decimal,
/// and at least 1.
pub fn rho_for_radius(block_radius: f64) -> f64 {
    ((block_radius * 10.0 - 1e-9).ceil() / 10.0).max(1.0)
}

/// The section of the ball through a point by the affine plane parallel to
/// `V`; L maps it to a round disk of radius `radius / (3R)` in a fixed
/// (x₂, y₂) fiber.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberSection {
    pub center: [f64; 4],
    pub radius: f64,
    /// Orthonormal basis of V.
    pub basis: [[f64; 4]; 2],
}

impl FiberSection {
    pub fn point(&self, alpha: f64, beta: f64) -> [f64; 4] {
        let mut p = self.center;
        for (i, v) in p.iter_mut().enumerate() {
            *v += alpha * self.basis[0][i] + beta * self.basis[1][i];
        }
        p
    }
}

/// `Q ∘ Ψ̃ ∘ L` on `B⁴(R)` with its ingredients.
#[derive(Debug, Clone, PartialEq)]
pub struct MainLemmaMap {
    pub radius: f64,
    pub linear: PolterovichLinear,
    pub phi: PeriodicDiffeo1D,
    pub rho: f64,
    pub node: MapNode,
}

impl MainLemmaMap {
    pub fn fiber_section(&self, p: &[f64]) -> FiberSection {
        let c = self.linear.cos_theta;
        let s = (1.0 - c * c).max(0.0).sqrt();
        let a = [1.0, 0.0, 0.0, 0.0];
        let b = [0.0, s, c, 0.0];
        let dot = |u: &[f64; 4]| (0..4).map(|i| u[i] * p[i]).sum::<f64>();
        let (pa, pb) = (dot(&a), dot(&b));
        let center: [f64; 4] = std::array::from_fn(|i| p[i] - pa * a[i] - pb * b[i]);
        let norm2: f64 = center.iter().map(|v| v * v).sum();
        FiberSection {
            center,
            radius: (self.radius * self.radius - norm2).max(0.0).sqrt(),
            basis: [a, b],
        }
    }

    /// `Ψ̃ ∘ L` as one node.
    pub fn unquotiented(&self) -> Result<MapNode> {
        match &self.node.kind {
            super::MapKind::Composition { children, .. } => compose(children[1..].to_vec()),
            _ => unreachable!("main lemma map is a composition"),
        }
    }
}

/// Ψ on the disk of radius ρ, with a rectangle target.
pub fn psi_node(phi: &PeriodicDiffeo1D) -> Result<MapNode> {
    let rho = phi.rho();
    // Ψ moves x by at most 1e-4 and divides y by dΦ ≥ base.
    let half_y = rho / phi.base() + 1e-3;
    let sheared = ShapeDescriptor::rectangle_at(&[2.0 * rho + 4e-4, 2.0 * half_y], &[-rho - 2e-4, 0.5 - half_y])?;
    MapNode::phi_shear(phi.clone(), ShapeDescriptor::disk(rho)?, sheared)
}

/// Symplectic embedding of `B⁴(R)` into `Σ(1) × B²(10R²)` for `R ≥ 1/3`.
pub fn build_main_lemma_map(radius: f64) -> Result<MainLemmaMap> {
    let linear = build_polterovich_linear(radius)?;
    let rho = rho_for_radius(linear.block_radius);
    let phi = PeriodicDiffeo1D::new(rho)?;
    let s = linear.projection_radius;

    let ball = ShapeDescriptor::ball(4, radius)?;
    let squeezed = ShapeDescriptor::new(vec![Factor::Disk2 { radius: rho }, Factor::Disk2 { radius: s }])?;
    let l_node = MapNode::linear(linear.map.as_linear().clone(), ball, squeezed)?;

    let psi = psi_node(&phi)?;
    let psi_tilde = product_with_identity(psi, &ShapeDescriptor::disk(s)?)?;

    let quotient_target = ShapeDescriptor::new(vec![
        Factor::Surface { area: 1.0 },
        Factor::Disk2 { radius: 10.0 * radius * radius },
    ])?;
    let q = MapNode::torus_quotient(psi_tilde.target.clone(), quotient_target)?;
    let node = compose(vec![q, psi_tilde, l_node])?;
    Ok(MainLemmaMap { radius, linear, phi, rho, node })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::symplectic_residual;

    #[test]
    fn rho_rounding() {
        assert_eq!(rho_for_radius(0.3333), 1.0);
        assert_eq!(rho_for_radius(2.31), 2.4);
        assert_eq!(rho_for_radius(2.4), 2.4);
    }

    #[test]
    fn builds_and_is_symplectic() {
        for r in [1.0 / 3.0, 1.0, 2.0] {
            let m = build_main_lemma_map(r).unwrap();
            assert!(m.node.unverified_links().is_empty(), "R = {r}");
            let p = [0.1 * r, -0.2 * r, 0.3 * r, 0.05 * r];
            assert!(symplectic_residual(&m.node.jacobian(&p).unwrap()) < 1e-10);
            let q = m.node.eval(&p).unwrap();
            assert!(m.node.target.contains(&q).unwrap());
        }
        assert!(build_main_lemma_map(0.2).is_err());
    }

    #[test]
    fn sections_are_flat_fibers() {
        let m = build_main_lemma_map(1.0).unwrap();
        let sec = m.fiber_section(&[0.2, 0.3, -0.1, 0.4]);
        let lift = m.unquotiented().unwrap();
        let l = |p: [f64; 4]| m.linear.map.apply(&p);
        let p0 = l(sec.point(0.0, 0.0));
        let p1 = l(sec.point(0.3, -0.2));
        assert!((p0[1] - p1[1]).abs() < 1e-12 && (p0[3] - p1[3]).abs() < 1e-12);
        let q = lift.eval(&sec.point(0.1, 0.1)).unwrap();
        assert!((q[1] - p0[1]).abs() < 1e-12);
    }
}
