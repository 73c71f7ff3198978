use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One factor of a product shape.
///
/// A factor of dimension `2k` occupies `k` consecutive conjugate pairs. Its
/// local coordinates are `(x_p, .., x_{p+k-1}, y_p, .., y_{p+k-1})`, which is
/// also the order of rectangle sides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "factor", rename_all = "snake_case")]
pub enum Factor {
    Disk2 { radius: f64 },
    Ball { dim: usize, radius: f64 },
    Rectangle { sides: Vec<f64>, origin: Vec<f64> },
    /// Genus-one surface with one boundary component, carrying only its area.
    /// Membership uses the lattice chart: the square `[0, sqrt(a))^2` with the
    /// corner class removed.
    Surface { area: f64 },
    FullPlane,
    TranslatedDisk2 { center: [f64; 2], radius: f64 },
}

impl Factor {
    pub fn dim(&self) -> usize {
        match self {
            Factor::Ball { dim, .. } => *dim,
            Factor::Rectangle { sides, .. } => sides.len(),
            _ => 2,
        }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, Factor::FullPlane)
    }

    fn validate(&self) -> Result<()> {
        let positive = |v: f64, what: &str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidShape(format!("{what} must be positive, got {v}")))
            }
        };
        match self {
            Factor::Disk2 { radius } => positive(*radius, "disk radius"),
            Factor::Ball { dim, radius } => {
                if *dim < 2 || dim % 2 != 0 {
                    return Err(Error::InvalidShape(format!("ball dimension must be even, got {dim}")));
                }
                positive(*radius, "ball radius")
            }
            Factor::Rectangle { sides, origin } => {
                if sides.is_empty() || sides.len() % 2 != 0 || origin.len() != sides.len() {
                    return Err(Error::InvalidShape(format!(
                        "rectangle needs an even number of sides and a matching origin, got {} and {}",
                        sides.len(),
                        origin.len()
                    )));
                }
                sides.iter().try_for_each(|&s| positive(s, "rectangle side"))?;
                if origin.iter().any(|o| !o.is_finite()) {
                    return Err(Error::InvalidShape("rectangle origin must be finite".into()));
                }
                Ok(())
            }
            Factor::Surface { area } => positive(*area, "surface area"),
            Factor::FullPlane => Ok(()),
            Factor::TranslatedDisk2 { center, radius } => {
                if !(center[0].is_finite() && center[1].is_finite()) {
                    return Err(Error::InvalidShape("disk center must be finite".into()));
                }
                positive(*radius, "disk radius")
            }
        }
    }

    /// Membership of a point given in local coordinates. Open sets: boundary
    /// points are outside.
    pub fn contains_local(&self, c: &[f64]) -> bool {
        match self {
            Factor::Disk2 { radius } => c[0] * c[0] + c[1] * c[1] < radius * radius,
            Factor::Ball { radius, .. } => c.iter().map(|v| v * v).sum::<f64>() < radius * radius,
            Factor::Rectangle { sides, origin } => c
                .iter()
                .zip(sides.iter().zip(origin))
                .all(|(&v, (&s, &o))| v > o && v < o + s),
            Factor::Surface { area } => {
                let s = area.sqrt();
                let inside = (0.0..s).contains(&c[0]) && (0.0..s).contains(&c[1]);
                inside && !(c[0] == 0.0 && c[1] == 0.0)
            }
            Factor::FullPlane => c[0].is_finite() && c[1].is_finite(),
            Factor::TranslatedDisk2 { center, radius } => {
                let dx = c[0] - center[0];
                let dy = c[1] - center[1];
                dx * dx + dy * dy < radius * radius
            }
        }
    }

    pub fn volume(&self) -> Result<f64> {
        Ok(match self {
            Factor::Disk2 { radius } | Factor::TranslatedDisk2 { radius, .. } => PI * radius * radius,
            Factor::Ball { dim, radius } => {
                let k = dim / 2;
                let fact: f64 = (1..=k).map(|i| i as f64).product();
                PI.powi(k as i32) * radius.powi(*dim as i32) / fact
            }
            Factor::Rectangle { sides, .. } => sides.iter().product(),
            Factor::Surface { area } => *area,
            Factor::FullPlane => return Err(Error::Unbounded("full plane factor".into())),
        })
    }

    pub fn scaled(&self, c: f64) -> Factor {
        match self {
            Factor::Disk2 { radius } => Factor::Disk2 { radius: radius * c },
            Factor::Ball { dim, radius } => Factor::Ball {
                dim: *dim,
                radius: radius * c,
            },
            Factor::Rectangle { sides, origin } => Factor::Rectangle {
                sides: sides.iter().map(|s| s * c).collect(),
                origin: origin.iter().map(|o| o * c).collect(),
            },
            Factor::Surface { area } => Factor::Surface { area: area * c * c },
            Factor::FullPlane => Factor::FullPlane,
            Factor::TranslatedDisk2 { center, radius } => Factor::TranslatedDisk2 {
                center: [center[0] * c, center[1] * c],
                radius: radius * c,
            },
        }
    }

    /// Axis-aligned bounding box in local coordinates.
    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match self {
            Factor::Disk2 { radius } => Some((vec![-radius; 2], vec![*radius; 2])),
            Factor::Ball { dim, radius } => Some((vec![-radius; *dim], vec![*radius; *dim])),
            Factor::Rectangle { sides, origin } => Some((
                origin.clone(),
                origin.iter().zip(sides).map(|(o, s)| o + s).collect(),
            )),
            Factor::Surface { area } => Some((vec![0.0; 2], vec![area.sqrt(); 2])),
            Factor::FullPlane => None,
            Factor::TranslatedDisk2 { center, radius } => Some((
                vec![center[0] - radius, center[1] - radius],
                vec![center[0] + radius, center[1] + radius],
            )),
        }
    }

    pub fn approx_eq(&self, other: &Factor, tol: f64) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300);
        let close_all = |a: &[f64], b: &[f64]| {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| close(*x, *y) || (x - y).abs() <= tol)
        };
        match (self, other) {
            (Factor::Disk2 { radius: a }, Factor::Disk2 { radius: b }) => close(*a, *b),
            (Factor::Ball { dim: d1, radius: a }, Factor::Ball { dim: d2, radius: b }) => {
                d1 == d2 && close(*a, *b)
            }
            (
                Factor::Rectangle { sides: s1, origin: o1 },
                Factor::Rectangle { sides: s2, origin: o2 },
            ) => close_all(s1, s2) && close_all(o1, o2),
            (Factor::Surface { area: a }, Factor::Surface { area: b }) => close(*a, *b),
            (Factor::FullPlane, Factor::FullPlane) => true,
            (
                Factor::TranslatedDisk2 { center: c1, radius: a },
                Factor::TranslatedDisk2 { center: c2, radius: b },
            ) => close_all(c1, c2) && close(*a, *b),
            _ => false,
        }
    }
}

/// An ordered product of factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeDescriptor {
    factors: Vec<Factor>,
}

impl ShapeDescriptor {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidShape("a shape needs at least one factor".into()));
        }
        factors.iter().try_for_each(Factor::validate)?;
        Ok(Self { factors })
    }

    /// `B^2(R_1) x .. x B^2(R_n)` with radii sorted ascending.
    pub fn polydisk(radii: &[f64]) -> Result<Self> {
        let mut sorted = radii.to_vec();
        if sorted.iter().any(|r| r.is_nan()) {
            return Err(Error::InvalidShape("polydisk radius is NaN".into()));
        }
        sorted.sort_by(f64::total_cmp);
        Self::new(sorted.into_iter().map(|radius| Factor::Disk2 { radius }).collect())
    }

    pub fn disk(radius: f64) -> Result<Self> {
        Self::new(vec![Factor::Disk2 { radius }])
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        Self::new(vec![Factor::Ball { dim, radius }])
    }

    /// Planar or phase-space box `[0, L_1] x .. x [0, L_d]`.
    pub fn rectangle(sides: &[f64]) -> Result<Self> {
        Self::rectangle_at(sides, &vec![0.0; sides.len()])
    }

    pub fn rectangle_at(sides: &[f64], origin: &[f64]) -> Result<Self> {
        Self::new(vec![Factor::Rectangle {
            sides: sides.to_vec(),
            origin: origin.to_vec(),
        }])
    }

    pub fn surface(area: f64) -> Result<Self> {
        Self::new(vec![Factor::Surface { area }])
    }

    /// `B^2(R) x R^2`.
    pub fn cylinder(radius: f64) -> Result<Self> {
        Self::new(vec![Factor::Disk2 { radius }, Factor::FullPlane])
    }

    pub fn product(&self, other: &ShapeDescriptor) -> ShapeDescriptor {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        ShapeDescriptor { factors }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(Factor::dim).sum()
    }

    /// Number of conjugate pairs.
    pub fn n(&self) -> usize {
        self.dim() / 2
    }

    pub fn is_bounded(&self) -> bool {
        self.factors.iter().all(Factor::is_bounded)
    }

    /// Radii if every factor is a disk or a full plane (radius infinity).
    pub fn polydisk_radii(&self) -> Option<Vec<f64>> {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::Disk2 { radius } => Some(*radius),
                Factor::FullPlane => Some(f64::INFINITY),
                _ => None,
            })
            .collect()
    }

    /// Global coordinate indices of every factor, in local order.
    pub fn factor_indices(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut pair = 0;
        self.factors
            .iter()
            .map(|f| {
                let k = f.dim() / 2;
                let idx = (pair..pair + k).chain(n + pair..n + pair + k).collect();
                pair += k;
                idx
            })
            .collect()
    }

    pub fn contains(&self, p: &[f64]) -> Result<bool> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: p.len(),
            });
        }
        let mut local = Vec::with_capacity(4);
        for (f, idx) in self.factors.iter().zip(self.factor_indices()) {
            local.clear();
            local.extend(idx.iter().map(|&i| p[i]));
            if !f.contains_local(&local) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn volume(&self) -> Result<f64> {
        self.factors.iter().map(Factor::volume).product()
    }

    pub fn scaled(&self, c: f64) -> ShapeDescriptor {
        ShapeDescriptor {
            factors: self.factors.iter().map(|f| f.scaled(c)).collect(),
        }
    }

    /// Global bounding box; `None` if any factor is unbounded.
    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let dim = self.dim();
        let (mut lo, mut hi) = (vec![0.0; dim], vec![0.0; dim]);
        for (f, idx) in self.factors.iter().zip(self.factor_indices()) {
            let (flo, fhi) = f.bounding_box()?;
            for (k, &i) in idx.iter().enumerate() {
                lo[i] = flo[k];
                hi[i] = fhi[k];
            }
        }
        Some((lo, hi))
    }

    /// Diameter of the bounding box (used to scale numerical steps).
    pub fn diameter(&self) -> Option<f64> {
        let (lo, hi) = self.bounding_box()?;
        Some(lo.iter().zip(&hi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt())
    }

    /// Factor-wise comparison with relative tolerance.
    pub fn approx_eq(&self, other: &ShapeDescriptor, tol: f64) -> bool {
        self.factors.len() == other.factors.len()
            && self
                .factors
                .iter()
                .zip(&other.factors)
                .all(|(a, b)| a.approx_eq(b, tol))
    }
}

pub fn volume(shape: &ShapeDescriptor) -> Result<f64> {
    shape.volume()
}

pub fn contains(shape: &ShapeDescriptor, p: &[f64]) -> Result<bool> {
    shape.contains(p)
}

/// `C * shape`: radii, sides and centers times `c`, surface areas times `c^2`.
pub fn scale_shape(shape: &ShapeDescriptor, c: f64) -> Result<ShapeDescriptor> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidShape(format!("scale factor must be positive, got {c}")));
    }
    Ok(shape.scaled(c))
}

const INCLUSION_TOL: f64 = 1e-12;

fn factor_includes(outer: &Factor, inner: &Factor) -> Option<bool> {
    let le = |a: f64, b: f64| a <= b * (1.0 + INCLUSION_TOL);
    if outer.dim() != inner.dim() {
        return Some(false);
    }
    match (outer, inner) {
        (Factor::FullPlane, _) => Some(true),
        (_, Factor::FullPlane) => Some(false),
        (Factor::Disk2 { radius: r }, Factor::Disk2 { radius: s }) => Some(le(*s, *r)),
        (Factor::Ball { radius: r, .. }, Factor::Ball { radius: s, .. }) => Some(le(*s, *r)),
        (Factor::TranslatedDisk2 { center, radius }, Factor::Disk2 { radius: s }) => {
            Some(le(center[0].hypot(center[1]) + s, *radius))
        }
        (Factor::Disk2 { radius }, Factor::TranslatedDisk2 { center, radius: s }) => {
            Some(le(center[0].hypot(center[1]) + s, *radius))
        }
        (
            Factor::TranslatedDisk2 { center: c1, radius: r },
            Factor::TranslatedDisk2 { center: c2, radius: s },
        ) => Some(le((c1[0] - c2[0]).hypot(c1[1] - c2[1]) + s, *r)),
        (Factor::Rectangle { sides: so, origin: oo }, Factor::Rectangle { sides: si, origin: oi }) => {
            Some((0..so.len()).all(|k| oi[k] >= oo[k] - INCLUSION_TOL && le(oi[k] + si[k], oo[k] + so[k])))
        }
        (Factor::Disk2 { radius }, Factor::Rectangle { sides, origin }) => {
            let far = (0..2)
                .map(|k| {
                    let m = origin[k].abs().max((origin[k] + sides[k]).abs());
                    m * m
                })
                .sum::<f64>()
                .sqrt();
            if le(far, *radius) {
                Some(true)
            } else {
                None
            }
        }
        (Factor::Surface { area: a }, Factor::Surface { area: b }) if (a - b).abs() <= INCLUSION_TOL * a => {
            Some(true)
        }
        _ => None,
    }
}

/// Decides `inner ⊆ outer` for the shape pairs the toolkit needs.
///
/// Returns `Some(true)` when provable with the rules below, `Some(false)`
/// when provably not, and `None` when undecided.
pub fn includes(outer: &ShapeDescriptor, inner: &ShapeDescriptor) -> Option<bool> {
    if outer.dim() != inner.dim() {
        return Some(false);
    }
    if outer.approx_eq(inner, INCLUSION_TOL) {
        return Some(true);
    }
    // Align factors by their pair ranges; a factor of one side may cover
    // several factors of the other.
    let mut i = 0;
    let mut j = 0;
    let (of, inf) = (outer.factors(), inner.factors());
    let mut verdict = Some(true);
    while i < of.len() && j < inf.len() {
        let (od, id) = (of[i].dim(), inf[j].dim());
        let step = if od == id {
            let r = factor_includes(&of[i], &inf[j]);
            i += 1;
            j += 1;
            r
        } else if od > id {
            // A ball (or plane) collecting several inner factors.
            let mut dims = 0;
            let start = j;
            while j < inf.len() && dims < od {
                dims += inf[j].dim();
                j += 1;
            }
            if dims != od {
                return None;
            }
            let r = group_in_factor(&of[i], &inf[start..j]);
            i += 1;
            r
        } else {
            // One inner factor spread over several outer factors.
            let mut dims = 0;
            let start = i;
            while i < of.len() && dims < id {
                dims += of[i].dim();
                i += 1;
            }
            if dims != id {
                return None;
            }
            let r = factor_in_group(&of[start..i], &inf[j]);
            j += 1;
            r
        };
        verdict = match (verdict, step) {
            (_, Some(false)) => return Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        };
    }
    verdict
}

/// Several inner factors inside one outer factor.
fn group_in_factor(outer: &Factor, inner: &[Factor]) -> Option<bool> {
    match outer {
        Factor::Ball { radius, .. } => {
            // prod of disks/balls inside a ball: sum of squared radii.
            let mut sum = 0.0;
            for f in inner {
                match f {
                    Factor::Disk2 { radius } | Factor::Ball { radius, .. } => sum += radius * radius,
                    _ => return None,
                }
            }
            if sum <= radius * radius * (1.0 + INCLUSION_TOL) {
                Some(true)
            } else {
                None
            }
        }
        _ => None,
    }
}

/// One inner factor inside a product of outer factors.
fn factor_in_group(outer: &[Factor], inner: &Factor) -> Option<bool> {
    match inner {
        Factor::Ball { radius, .. } => {
            let mut verdict = Some(true);
            for f in outer {
                let r = match f {
                    Factor::FullPlane => Some(true),
                    Factor::Disk2 { radius: r } | Factor::Ball { radius: r, .. } => {
                        Some(*radius <= r * (1.0 + INCLUSION_TOL))
                    }
                    _ => None,
                };
                verdict = match (verdict, r) {
                    (_, Some(false)) => return Some(false),
                    (Some(true), Some(true)) => Some(true),
                    _ => None,
                };
            }
            verdict
        }
        _ => None,
    }
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Disk2 { radius } => write!(f, "disk({radius})"),
            Factor::Ball { dim, radius } => write!(f, "ball{dim}({radius})"),
            Factor::Rectangle { sides, origin } => {
                if origin.iter().all(|&o| o == 0.0) {
                    write!(f, "rect({})", fmt_list(sides))
                } else {
                    write!(f, "rect({}; {})", fmt_list(sides), fmt_list(origin))
                }
            }
            Factor::Surface { area } => write!(f, "sigma({area})"),
            Factor::FullPlane => write!(f, "plane"),
            Factor::TranslatedDisk2 { center, radius } => {
                write!(f, "tdisk({}, {}, {radius})", center[0], center[1])
            }
        }
    }
}

impl fmt::Display for ShapeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(radii) = self.polydisk_radii() {
            let sorted = radii.windows(2).all(|w| w[0] <= w[1]);
            if radii.len() > 1 && sorted && radii.iter().all(|r| r.is_finite()) {
                return write!(f, "polydisk({})", fmt_list(&radii));
            }
        }
        let parts: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(" * "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_volumes() {
        let b = ShapeDescriptor::ball(4, 1.0).unwrap();
        assert!((b.volume().unwrap() - PI * PI / 2.0).abs() < 1e-14);
        assert!((ShapeDescriptor::disk(1.0).unwrap().volume().unwrap() - PI).abs() < 1e-15);
        let p = ShapeDescriptor::polydisk(&[3.0, 1.0, 2.0]).unwrap();
        assert!((p.volume().unwrap() - PI.powi(3) * 36.0).abs() < 1e-9);
        let b6 = ShapeDescriptor::ball(6, 2.0).unwrap();
        assert!((b6.volume().unwrap() - PI.powi(3) * 64.0 / 6.0).abs() < 1e-9);
        assert_eq!(ShapeDescriptor::surface(0.3).unwrap().volume().unwrap(), 0.3);
        assert!(matches!(
            ShapeDescriptor::cylinder(1.0).unwrap().volume(),
            Err(Error::Unbounded(_))
        ));
    }

    #[test]
    fn polydisk_sorted() {
        let p = ShapeDescriptor::polydisk(&[2.0, 1.0]).unwrap();
        assert_eq!(p.polydisk_radii().unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn strict_membership() {
        let p = ShapeDescriptor::polydisk(&[1.0, 1.0]).unwrap();
        assert!(p.contains(&[0.0; 4]).unwrap());
        assert!(!p.contains(&[1.0, 0.0, 0.0, 0.0]).unwrap());
        let b = ShapeDescriptor::ball(4, 1.0).unwrap();
        assert!(!b.contains(&[0.8, 0.0, 0.8, 0.0]).unwrap());
        assert!(matches!(p.contains(&[0.0; 2]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn pair_layout_of_factors() {
        // disk(1) on (x1, y1), disk(10) on (x2, y2)
        let s = ShapeDescriptor::polydisk(&[1.0, 10.0]).unwrap();
        assert!(s.contains(&[0.5, 5.0, 0.5, 5.0]).unwrap());
        assert!(!s.contains(&[5.0, 0.5, 5.0, 0.5]).unwrap());
    }

    #[test]
    fn scaling() {
        let p = ShapeDescriptor::polydisk(&[1.0, 2.0]).unwrap();
        let q = scale_shape(&p, 3.0).unwrap();
        assert_eq!(q.polydisk_radii().unwrap(), vec![3.0, 6.0]);
        assert_eq!(scale_shape(&p, 1.0).unwrap(), p);
        let eps = 0.2;
        match scale_shape(&ShapeDescriptor::surface(1.0).unwrap(), eps).unwrap().factors()[0] {
            Factor::Surface { area } => assert!((area - eps * eps).abs() < 1e-15),
            _ => unreachable!(),
        }
        assert!(scale_shape(&p, 0.0).is_err());
    }

    #[test]
    fn scaled_volume_law() {
        let shapes = [
            ShapeDescriptor::polydisk(&[0.5, 1.0, 2.0]).unwrap(),
            ShapeDescriptor::ball(4, 1.3).unwrap(),
            ShapeDescriptor::rectangle(&[1.0, 40.0]).unwrap(),
            ShapeDescriptor::surface(1.0)
                .unwrap()
                .product(&ShapeDescriptor::disk(10.0).unwrap()),
        ];
        for s in &shapes {
            for &c in &[0.5, 1.0, 2.0] {
                let lhs = s.scaled(c).volume().unwrap();
                let rhs = c.powi(s.dim() as i32) * s.volume().unwrap();
                assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0), "{s} {c}");
            }
        }
    }

    #[test]
    fn inclusion_rules() {
        let d = |r| ShapeDescriptor::disk(r).unwrap();
        assert_eq!(includes(&d(2.0), &d(1.0)), Some(true));
        assert_eq!(includes(&d(1.0), &d(2.0)), Some(false));
        let pd = ShapeDescriptor::polydisk(&[1.0, 1.0]).unwrap();
        let ball = ShapeDescriptor::ball(4, 2f64.sqrt()).unwrap();
        assert_eq!(includes(&ball, &pd), Some(true));
        assert_eq!(includes(&pd, &ShapeDescriptor::ball(4, 1.0).unwrap()), Some(true));
        let tdisk = ShapeDescriptor::new(vec![Factor::TranslatedDisk2 {
            center: [0.0, 0.1],
            radius: 0.2,
        }])
        .unwrap();
        assert_eq!(includes(&d(0.3), &tdisk), Some(true));
        assert_eq!(includes(&ShapeDescriptor::cylinder(1.0).unwrap(), &pd), Some(true));
    }

    #[test]
    fn surface_chart_excludes_corner() {
        let s = ShapeDescriptor::surface(1.0).unwrap();
        assert!(!s.contains(&[0.0, 0.0]).unwrap());
        assert!(s.contains(&[0.0, 0.5]).unwrap());
        assert!(!s.contains(&[1.0, 0.5]).unwrap());
    }
}
