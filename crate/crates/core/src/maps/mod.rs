//! Evaluable maps with declared domain and target shapes.
//!
//! Every node evaluates points in the crate's coordinate order and returns its
//! differential as a `2n × 2n` matrix, analytically where a closed form exists
//! and by central differences otherwise.

mod disk_rect;
mod linear;
mod main_lemma;
mod phi;
mod snake;
mod strip;

pub use disk_rect::{cotangent_box_radius, disk_rectangle_map, DiskRectangleMap, BOUNDARY_GUARD};
pub use linear::{build_polterovich_linear, symplectic_residual, LinearMap, LinearSymplecticMap, PolterovichLinear};
pub use main_lemma::{build_main_lemma_map, psi_node, rho_for_radius, FiberSection, MainLemmaMap};
pub use phi::{phi_deriv, phi_eval, phi_inverse, psi_eval, psi_inverse, psi_jacobian, PeriodicDiffeo1D};
pub use snake::{snake_embedding, SnakeEmbedding};
pub use strip::{strip_lift, strip_separation_region, BumpFunction, StripImmersionModel, StripLift};

use nalgebra::{DMatrix, Matrix2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{includes, Factor, ShapeDescriptor};

/// Absolute step of the central-difference Jacobian.
pub const FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JacobianMode {
    Analytic,
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MapKind {
    Identity,
    /// Identity whose target is a larger shape.
    Inclusion,
    Linear { map: LinearMap },
    /// The planar shear Ψ built from Φ.
    PhiShear { phi: PeriodicDiffeo1D },
    /// `inner` on the leading conjugate pairs, identity on the rest.
    ProductWithIdentity { inner: Box<MapNode> },
    /// Reduces (x₁, y₁) modulo the unit lattice into `[0, 1)²`.
    TorusQuotient,
    StripLift { lift: StripLift },
    Snake { snake: SnakeEmbedding },
    /// `(x, p) ↦ (I(x), dI(x)^{-T} p)` for a planar base map I, with x = (x₁, x₂).
    CotangentLift { base: Box<MapNode> },
    DiskRectangle { map: DiskRectangleMap, inverse: bool },
    /// Children applied right to left: the last child acts first.
    Composition {
        children: Vec<MapNode>,
        /// Links whose shape inclusion could not be decided.
        unverified_links: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapNode {
    pub kind: MapKind,
    pub domain: ShapeDescriptor,
    pub target: ShapeDescriptor,
    pub jacobian_mode: JacobianMode,
}

fn mat2(j: [[f64; 2]; 2]) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[j[0][0], j[0][1], j[1][0], j[1][1]])
}

impl MapNode {
    pub fn new(kind: MapKind, domain: ShapeDescriptor, target: ShapeDescriptor, jacobian_mode: JacobianMode) -> Result<Self> {
        if domain.dim() != target.dim() {
            return Err(Error::DimensionMismatch { expected: domain.dim(), got: target.dim() });
        }
        Ok(Self { kind, domain, target, jacobian_mode })
    }

    pub fn identity(domain: ShapeDescriptor) -> Self {
        Self {
            kind: MapKind::Identity,
            target: domain.clone(),
            domain,
            jacobian_mode: JacobianMode::Analytic,
        }
    }

    pub fn inclusion(domain: ShapeDescriptor, target: ShapeDescriptor) -> Result<Self> {
        if includes(&target, &domain) == Some(false) {
            return Err(Error::ShapeChain { index: 0, reason: format!("{domain} is not inside {target}") });
        }
        Self::new(MapKind::Inclusion, domain, target, JacobianMode::Analytic)
    }

    /// Any matrix; symplecticity is left to the verifier.
    pub fn linear(map: LinearMap, domain: ShapeDescriptor, target: ShapeDescriptor) -> Result<Self> {
        if map.dim() != domain.dim() {
            return Err(Error::DimensionMismatch { expected: domain.dim(), got: map.dim() });
        }
        Self::new(MapKind::Linear { map }, domain, target, JacobianMode::Analytic)
    }

    pub fn phi_shear(phi: PeriodicDiffeo1D, domain: ShapeDescriptor, target: ShapeDescriptor) -> Result<Self> {
        Self::new(MapKind::PhiShear { phi }, domain, target, JacobianMode::Analytic)
    }

    pub fn torus_quotient(domain: ShapeDescriptor, target: ShapeDescriptor) -> Result<Self> {
        Self::new(MapKind::TorusQuotient, domain, target, JacobianMode::Analytic)
    }

    pub fn strip_lift(lift: StripLift) -> Result<Self> {
        let target = strip_separation_region(lift.w)?;
        Self::new(MapKind::StripLift { lift }, lift.domain(), target, JacobianMode::Analytic)
    }

    pub fn snake(snake: SnakeEmbedding) -> Result<Self> {
        Self::new(MapKind::Snake { snake }, snake.domain(), snake.target_box(), JacobianMode::Analytic)
    }

    pub fn disk_rectangle(map: DiskRectangleMap) -> Result<Self> {
        Self::new(MapKind::DiskRectangle { map, inverse: false }, map.disk(), map.rectangle(), JacobianMode::Analytic)
    }

    pub fn rectangle_disk(map: DiskRectangleMap) -> Result<Self> {
        Self::new(MapKind::DiskRectangle { map, inverse: true }, map.rectangle(), map.disk(), JacobianMode::FiniteDifference)
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            MapKind::Identity => "identity",
            MapKind::Inclusion => "inclusion",
            MapKind::Linear { .. } => "linear",
            MapKind::PhiShear { .. } => "phi-shear",
            MapKind::ProductWithIdentity { .. } => "product-with-identity",
            MapKind::TorusQuotient => "torus-quotient",
            MapKind::StripLift { .. } => "strip-lift",
            MapKind::Snake { .. } => "snake",
            MapKind::CotangentLift { .. } => "cotangent-lift",
            MapKind::DiskRectangle { .. } => "disk-rectangle",
            MapKind::Composition { .. } => "composition",
        }
    }

    fn check_len(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: p.len() });
        }
        Ok(())
    }

    pub fn eval(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.check_len(p)?;
        self.eval_unchecked(p)
    }

    fn eval_unchecked(&self, p: &[f64]) -> Result<Vec<f64>> {
        Ok(match &self.kind {
            MapKind::Identity | MapKind::Inclusion => p.to_vec(),
            MapKind::Linear { map } => map.apply(p),
            MapKind::PhiShear { phi } => psi_eval(phi, [p[0], p[1]]).to_vec(),
            MapKind::ProductWithIdentity { inner } => {
                let n = p.len() / 2;
                let k = inner.dim() / 2;
                let local: Vec<f64> = (0..k).map(|i| p[i]).chain((0..k).map(|i| p[n + i])).collect();
                let image = inner.eval(&local)?;
                let mut out = p.to_vec();
                for i in 0..k {
                    out[i] = image[i];
                    out[n + i] = image[k + i];
                }
                out
            }
            MapKind::TorusQuotient => {
                let n = p.len() / 2;
                let mut out = p.to_vec();
                out[0] = p[0].rem_euclid(1.0);
                out[n] = p[n].rem_euclid(1.0);
                // rem_euclid can round up to exactly 1.
                for i in [0, n] {
                    if out[i] >= 1.0 {
                        out[i] = 0.0;
                    }
                }
                out
            }
            MapKind::StripLift { lift } => lift.apply(p),
            MapKind::Snake { snake } => snake.apply([p[0], p[1]]).to_vec(),
            MapKind::CotangentLift { base } => {
                let x = base.eval(&p[..2])?;
                let j = base.jacobian(&p[..2])?;
                let q = Matrix2::new(j[(0, 0)], j[(1, 0)], j[(0, 1)], j[(1, 1)])
                    .lu()
                    .solve(&nalgebra::Vector2::new(p[2], p[3]))
                    .ok_or_else(|| Error::SingularDifferential { point: p.to_vec() })?;
                vec![x[0], x[1], q[0], q[1]]
            }
            MapKind::DiskRectangle { map, inverse } => {
                if *inverse {
                    map.inverse([p[0], p[1]]).to_vec()
                } else {
                    map.apply([p[0], p[1]]).to_vec()
                }
            }
            MapKind::Composition { children, .. } => {
                let mut q = p.to_vec();
                for child in children.iter().rev() {
                    q = child.eval(&q)?;
                }
                q
            }
        })
    }

    /// Differential at p, in the node's Jacobian mode.
    pub fn jacobian(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        self.check_len(p)?;
        match self.jacobian_mode {
            JacobianMode::FiniteDifference => self.jacobian_fd(p, FD_STEP),
            JacobianMode::Analytic => self.jacobian_analytic(p),
        }
    }

    fn jacobian_analytic(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        let d = self.dim();
        Ok(match &self.kind {
            MapKind::Identity | MapKind::Inclusion | MapKind::TorusQuotient => DMatrix::identity(d, d),
            MapKind::Linear { map } => map.matrix(),
            MapKind::PhiShear { phi } => mat2(psi_jacobian(phi, [p[0], p[1]])),
            MapKind::ProductWithIdentity { inner } => {
                let n = d / 2;
                let k = inner.dim() / 2;
                let local: Vec<f64> = (0..k).map(|i| p[i]).chain((0..k).map(|i| p[n + i])).collect();
                let ji = inner.jacobian(&local)?;
                let global = |i: usize| if i < k { i } else { n + i - k };
                let mut out = DMatrix::identity(d, d);
                for r in 0..2 * k {
                    for c in 0..2 * k {
                        out[(global(r), global(c))] = ji[(r, c)];
                    }
                }
                out
            }
            MapKind::StripLift { lift } => {
                let j = lift.jacobian(p);
                DMatrix::from_fn(4, 4, |r, c| j[r][c])
            }
            MapKind::Snake { snake } => mat2(snake.jacobian([p[0], p[1]])),
            MapKind::DiskRectangle { map, inverse } => {
                if *inverse {
                    let jf = mat2(map.jacobian(map.inverse([p[0], p[1]])));
                    jf.try_inverse().ok_or_else(|| Error::SingularDifferential { point: p.to_vec() })?
                } else {
                    mat2(map.jacobian([p[0], p[1]]))
                }
            }
            MapKind::CotangentLift { .. } => self.jacobian_fd(p, FD_STEP)?,
            MapKind::Composition { children, .. } => {
                let mut q = p.to_vec();
                let mut acc = DMatrix::identity(d, d);
                for child in children.iter().rev() {
                    acc = child.jacobian(&q)? * acc;
                    q = child.eval(&q)?;
                }
                acc
            }
        })
    }

    /// Central differences with absolute step `h`.
    pub fn jacobian_fd(&self, p: &[f64], h: f64) -> Result<DMatrix<f64>> {
        self.check_len(p)?;
        let d = self.dim();
        let mut out = DMatrix::zeros(d, d);
        let mut q = p.to_vec();
        for c in 0..d {
            q[c] = p[c] + h;
            let plus = self.eval_unchecked(&q)?;
            q[c] = p[c] - h;
            let minus = self.eval_unchecked(&q)?;
            q[c] = p[c];
            for r in 0..d {
                out[(r, c)] = (plus[r] - minus[r]) / (2.0 * h);
            }
        }
        Ok(out)
    }

    /// Evaluates many points in parallel; output order matches input order.
    pub fn eval_batch<P: AsRef<[f64]> + Sync>(&self, points: &[P]) -> Result<Vec<Vec<f64>>> {
        points.par_iter().map(|p| self.eval(p.as_ref())).collect()
    }

    /// Inverse where a closed form or a monotone solve exists; `None` for
    /// kinds without one (the lattice quotient).
    pub fn inverse_eval(&self, q: &[f64]) -> Option<Result<Vec<f64>>> {
        if q.len() != self.dim() {
            return Some(Err(Error::DimensionMismatch { expected: self.dim(), got: q.len() }));
        }
        let out = match &self.kind {
            MapKind::Identity | MapKind::Inclusion => Ok(q.to_vec()),
            MapKind::Linear { map } => {
                let d = map.dim();
                let rhs = nalgebra::DVector::from_iterator(d, q.iter().zip(map.offset()).map(|(a, b)| a - b));
                map.matrix()
                    .lu()
                    .solve(&rhs)
                    .map(|v| v.iter().copied().collect())
                    .ok_or_else(|| Error::SingularDifferential { point: q.to_vec() })
            }
            MapKind::PhiShear { phi } => Ok(psi_inverse(phi, [q[0], q[1]]).to_vec()),
            MapKind::ProductWithIdentity { inner } => {
                let n = q.len() / 2;
                let k = inner.dim() / 2;
                let local: Vec<f64> = (0..k).map(|i| q[i]).chain((0..k).map(|i| q[n + i])).collect();
                inner.inverse_eval(&local)?.map(|pre| {
                    let mut out = q.to_vec();
                    for i in 0..k {
                        out[i] = pre[i];
                        out[n + i] = pre[k + i];
                    }
                    out
                })
            }
            MapKind::TorusQuotient => return None,
            MapKind::StripLift { lift } => Ok(lift.with_time(-lift.t).apply(q)),
            MapKind::Snake { snake } => snake
                .inverse([q[0], q[1]])
                .map(|p| p.to_vec())
                .ok_or_else(|| Error::InvalidPoint(format!("{q:?} is not in the image"))),
            MapKind::CotangentLift { base } => base.inverse_eval(&q[..2])?.and_then(|x| {
                let j = base.jacobian(&x)?;
                Ok(vec![x[0], x[1], j[(0, 0)] * q[2] + j[(1, 0)] * q[3], j[(0, 1)] * q[2] + j[(1, 1)] * q[3]])
            }),
            MapKind::DiskRectangle { map, inverse } => Ok(if *inverse {
                map.apply([q[0], q[1]]).to_vec()
            } else {
                map.inverse([q[0], q[1]]).to_vec()
            }),
            MapKind::Composition { children, .. } => {
                let mut p = q.to_vec();
                for child in children {
                    match child.inverse_eval(&p)? {
                        Ok(v) => p = v,
                        Err(e) => return Some(Err(e)),
                    }
                }
                Ok(p)
            }
        };
        Some(out)
    }

    /// Links of a composition whose inclusion could not be decided.
    pub fn unverified_links(&self) -> &[usize] {
        match &self.kind {
            MapKind::Composition { unverified_links, .. } => unverified_links,
            _ => &[],
        }
    }

    pub fn to_descriptor(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_descriptor(text: &str) -> Result<Self> {
        let node: Self = serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        if node.domain.dim() != node.target.dim() {
            return Err(Error::Serialization("domain and target dimensions differ".into()));
        }
        Ok(node)
    }
}

/// `nodes[0] ∘ nodes[1] ∘ …`; the last node acts first. Each node's target must
/// fit in the preceding node's domain.
pub fn compose(nodes: Vec<MapNode>) -> Result<MapNode> {
    let first = nodes.first().ok_or_else(|| Error::ShapeChain { index: 0, reason: "empty composition".into() })?;
    let mut unverified = Vec::new();
    for (k, pair) in nodes.windows(2).enumerate() {
        let (outer, inner) = (&pair[0], &pair[1]);
        if outer.dim() != inner.dim() {
            return Err(Error::ShapeChain {
                index: k,
                reason: format!("dimension {} after dimension {}", outer.dim(), inner.dim()),
            });
        }
        match includes(&outer.domain, &inner.target) {
            Some(true) => {}
            Some(false) => {
                return Err(Error::ShapeChain {
                    index: k,
                    reason: format!("{} does not fit in {}", inner.target, outer.domain),
                })
            }
            None => unverified.push(k),
        }
    }
    let mode = if nodes.iter().all(|n| n.jacobian_mode == JacobianMode::Analytic) {
        JacobianMode::Analytic
    } else {
        JacobianMode::FiniteDifference
    };
    let target = first.target.clone();
    let domain = nodes.last().expect("nonempty").domain.clone();
    MapNode::new(MapKind::Composition { children: nodes, unverified_links: unverified }, domain, target, mode)
}

/// `m × id_extra`: m on the leading factors, identity on `extra`.
pub fn product_with_identity(m: MapNode, extra: &ShapeDescriptor) -> Result<MapNode> {
    let domain = m.domain.product(extra);
    let target = m.target.product(extra);
    let mode = m.jacobian_mode;
    MapNode::new(MapKind::ProductWithIdentity { inner: Box::new(m) }, domain, target, mode)
}

/// `(x₁, y₁)` reduced into the fundamental square `[0, 1)²`.
pub fn torus_quotient(p: &[f64]) -> Result<Vec<f64>> {
    if p.len() < 2 || p.len() % 2 != 0 {
        return Err(Error::InvalidPoint(format!("length {} is not a positive even number", p.len())));
    }
    let shape = ShapeDescriptor::new(
        std::iter::repeat_n(Factor::FullPlane, p.len() / 2).collect(),
    )?;
    MapNode::torus_quotient(shape.clone(), shape)?.eval(p)
}

/// Lift `(x, p) ↦ (I(x), dI(x)^{-T} p)` of a planar map to ℝ⁴ with base
/// coordinates (x₁, x₂) and fiber coordinates (y₁, y₂).
///
/// Domain and target use the fiber square of side `2 fiber_radius`, so unit
/// covectors are covered with `fiber_radius = 1`.
pub fn cotangent_lift(base: MapNode, fiber_radius: f64) -> Result<MapNode> {
    if base.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: base.dim() });
    }
    let lift_box = |s: &ShapeDescriptor| -> Result<ShapeDescriptor> {
        let (lo, hi) = s.bounding_box().ok_or_else(|| Error::Unbounded(format!("base shape {s}")))?;
        let r = fiber_radius;
        ShapeDescriptor::rectangle_at(&[hi[0] - lo[0], hi[1] - lo[1], 2.0 * r, 2.0 * r], &[lo[0], lo[1], -r, -r])
    };
    let domain = match base.domain.factors() {
        [Factor::Rectangle { sides, origin }] => ShapeDescriptor::rectangle_at(
            &[sides[0], sides[1], 2.0 * fiber_radius, 2.0 * fiber_radius],
            &[origin[0], origin[1], -fiber_radius, -fiber_radius],
        )?,
        _ => lift_box(&base.domain)?,
    };
    let target = lift_box(&base.target)?;
    MapNode::new(MapKind::CotangentLift { base: Box::new(base) }, domain, target, JacobianMode::FiniteDifference)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk(r: f64) -> ShapeDescriptor {
        ShapeDescriptor::disk(r).unwrap()
    }

    #[test]
    fn identity_compositions() {
        let id = MapNode::identity(disk(1.0));
        let c = compose(vec![id.clone(), id.clone()]).unwrap();
        assert_eq!(c.eval(&[0.3, 0.4]).unwrap(), vec![0.3, 0.4]);
        let pi = product_with_identity(id, &disk(2.0)).unwrap();
        assert_eq!(pi.jacobian(&[0.1, 0.2, 0.3, 0.4]).unwrap(), DMatrix::identity(4, 4));
    }

    #[test]
    fn mismatched_chain_rejected() {
        let small = MapNode::identity(disk(1.0));
        let big = MapNode::identity(disk(2.0));
        assert!(matches!(compose(vec![small, big]), Err(Error::ShapeChain { index: 0, .. })));
    }

    #[test]
    fn quotient_examples() {
        assert_eq!(torus_quotient(&[1.25, -0.5]).unwrap(), vec![0.25, 0.5]);
        assert_eq!(torus_quotient(&[0.3, 7.0, 0.7, 2.0]).unwrap(), vec![0.3, 7.0, 0.7, 2.0]);
        assert_eq!(torus_quotient(&[-3.0, 2.0]).unwrap(), vec![0.0, 0.0]);
        assert_ne!(torus_quotient(&[1e-9, 2.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(torus_quotient(&[-1e-17, 0.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn psi_tilde_leaves_second_pair() {
        let phi = PeriodicDiffeo1D::new(2.0).unwrap();
        let rect = ShapeDescriptor::rectangle_at(&[6.0, 6.0], &[-3.0, -3.0]).unwrap();
        let psi = MapNode::phi_shear(phi, disk(2.0), rect).unwrap();
        let tilde = product_with_identity(psi, &disk(3.0)).unwrap();
        let q = tilde.eval(&[0.2, 1.1, -0.4, 2.2]).unwrap();
        assert_eq!((q[1], q[3]), (1.1, 2.2));
        assert!((tilde.jacobian(&[0.2, 1.1, -0.4, 2.2]).unwrap().determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cotangent_lift_of_scaling() {
        let s = LinearMap::scaling(2, 2.0);
        let base = MapNode::linear(s, ShapeDescriptor::rectangle(&[1.0, 1.0]).unwrap(), ShapeDescriptor::rectangle(&[2.0, 2.0]).unwrap()).unwrap();
        let lift = cotangent_lift(base, 1.0).unwrap();
        let q = lift.eval(&[0.5, 0.5, 0.6, -0.8]).unwrap();
        assert_eq!(q, vec![1.0, 1.0, 0.3, -0.4]);
        assert!(symplectic_residual(&lift.jacobian(&[0.5, 0.5, 0.6, -0.8]).unwrap()) < 1e-8);
    }

    #[test]
    fn inverses_roundtrip() {
        let phi = PeriodicDiffeo1D::new(2.0).unwrap();
        let psi = MapNode::phi_shear(phi, disk(2.0), ShapeDescriptor::rectangle_at(&[5.0, 5.0], &[-2.5, -2.0]).unwrap()).unwrap();
        let tilde = product_with_identity(psi, &disk(3.0)).unwrap();
        let lift = MapNode::strip_lift(StripLift::new(0.1, 0.2).unwrap()).unwrap();
        let dr = MapNode::disk_rectangle(DiskRectangleMap::square(1.0).unwrap()).unwrap();
        let snake = cotangent_lift(MapNode::snake(snake_embedding([1.0, 40.0], [2.0, 20.0]).unwrap()).unwrap(), 1.0).unwrap();
        let cases: Vec<(MapNode, Vec<f64>)> = vec![
            (tilde, vec![0.2, 1.1, -0.4, 2.2]),
            (lift, vec![0.2, 0.05, 0.01, -0.03]),
            (dr, vec![0.3, -0.6]),
            (snake, vec![0.4, 17.0, 0.3, -0.6]),
        ];
        for (m, p) in cases {
            let back = m.inverse_eval(&m.eval(&p).unwrap()).unwrap().unwrap();
            for (a, b) in back.iter().zip(&p) {
                assert!((a - b).abs() < 1e-9, "{}: {back:?} vs {p:?}", m.kind_name());
            }
        }
    }

    #[test]
    fn descriptor_roundtrip() {
        let phi = PeriodicDiffeo1D::new(3.0).unwrap();
        let node = product_with_identity(MapNode::phi_shear(phi, disk(3.0), disk(5.0)).unwrap(), &disk(1.0)).unwrap();
        let text = node.to_descriptor().unwrap();
        let back = MapNode::from_descriptor(&text).unwrap();
        assert_eq!(back, node);
        let p = [0.123456789, 0.3, -1.7, 0.2];
        assert_eq!(back.eval(&p).unwrap(), node.eval(&p).unwrap());
    }
}
