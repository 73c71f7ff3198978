use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `R^{2n}` in `(x_1..x_n, y_1..y_n)` order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhasePoint(Vec<f64>);

impl PhasePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 || coords.len() % 2 != 0 {
            return Err(Error::InvalidPoint(format!(
                "phase points need an even number (>= 2) of coordinates, got {}",
                coords.len()
            )));
        }
        Ok(Self(coords))
    }

    /// Builds a point from conjugate pairs `(x_i, y_i)`.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let n = pairs.len();
        let mut coords = vec![0.0; 2 * n];
        for (i, &(x, y)) in pairs.iter().enumerate() {
            coords[i] = x;
            coords[n + i] = y;
        }
        Self::new(coords)
    }

    /// Number of conjugate pairs.
    pub fn n(&self) -> usize {
        self.0.len() / 2
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// The `i`-th conjugate pair `(x_i, y_i)`.
    pub fn pair(&self, i: usize) -> (f64, f64) {
        (self.0[i], self.0[self.n() + i])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for PhasePoint {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// The standard form `sum dx_i ^ dy_i` on `R^{2n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymplecticForm {
    pub n: usize,
}

impl SymplecticForm {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPoint("symplectic form needs n >= 1".into()));
        }
        Ok(Self { n })
    }

    pub fn eval(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        if u.len() != 2 * self.n {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.n,
                got: u.len(),
            });
        }
        form_eval(u, v)
    }

    /// The matrix `J` with `omega(u, v) = u^T J v`.
    pub fn matrix(&self) -> DMatrix<f64> {
        standard_j(self.n)
    }
}

/// `omega(u, v) = sum_i (u_{x_i} v_{y_i} - u_{y_i} v_{x_i})`.
pub fn form_eval(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    if u.is_empty() || u.len() % 2 != 0 {
        return Err(Error::InvalidPoint(format!(
            "tangent vectors need even length, got {}",
            u.len()
        )));
    }
    let n = u.len() / 2;
    Ok((0..n).map(|i| u[i] * v[n + i] - u[n + i] * v[i]).sum())
}

/// `J = [[0, I], [-I, 0]]` of size `2n`.
pub fn standard_j(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;
    use proptest::prelude::*;

    fn basis(dim: usize, k: usize) -> Vec<f64> {
        let mut e = vec![0.0; dim];
        e[k] = 1.0;
        e
    }

    #[test]
    fn defining_pair() {
        // e_{x1}, e_{y1} in R^4
        assert_eq!(form_eval(&basis(4, 0), &basis(4, 2)).unwrap(), 1.0);
        assert_eq!(form_eval(&basis(4, 2), &basis(4, 0)).unwrap(), -1.0);
    }

    #[test]
    fn tilted_plane_area_factor() {
        // omega(e_x1, cos t e_y1 + sin t e_x2) = cos t
        for &t in &[0.0f64, 0.3, 1.0, 1.4] {
            let v = vec![0.0, t.sin(), t.cos(), 0.0];
            let w = form_eval(&basis(4, 0), &v).unwrap();
            assert!((w - f64::cos(t)).abs() < 1e-15);
        }
    }

    #[test]
    fn mismatched_lengths_rejected() {
        assert!(matches!(
            form_eval(&[1.0, 0.0], &[1.0, 0.0, 0.0, 0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(form_eval(&[1.0], &[1.0]).is_err());
        assert!(PhasePoint::new(vec![1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn pairs_layout() {
        let p = PhasePoint::from_pairs(&[(1.0, 2.0), (3.0, 4.0)]).unwrap();
        assert_eq!(p.coords(), &[1.0, 3.0, 2.0, 4.0]);
        assert_eq!(p.pair(1), (3.0, 4.0));
    }

    proptest! {
        #[test]
        fn bilinear_antisymmetric_matches_matrix(
            u in prop::collection::vec(-10.0f64..10.0, 6),
            v in prop::collection::vec(-10.0f64..10.0, 6),
            w in prop::collection::vec(-10.0f64..10.0, 6),
            a in -3.0f64..3.0,
        ) {
            let uv = form_eval(&u, &v).unwrap();
            prop_assert!((uv + form_eval(&v, &u).unwrap()).abs() < 1e-9);
            prop_assert_eq!(form_eval(&u, &u).unwrap(), 0.0);
            let lin: Vec<f64> = u.iter().zip(&w).map(|(x, y)| a * x + y).collect();
            let lhs = form_eval(&lin, &v).unwrap();
            let rhs = a * uv + form_eval(&w, &v).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-9);
            let j = standard_j(3);
            let m = (DVector::from_vec(u.clone()).transpose() * j * DVector::from_vec(v.clone()))[(0, 0)];
            prop_assert!((m - uv).abs() < 1e-9);
        }

        #[test]
        fn nondegenerate(u in prop::collection::vec(-10.0f64..10.0, 4)) {
            prop_assume!(u.iter().any(|c| c.abs() > 1e-6));
            let hit = (0..4).any(|k| form_eval(&u, &basis(4, k)).unwrap() != 0.0);
            prop_assert!(hit);
        }
    }
}
