use nalgebra::{DMatrix, DVector, Matrix2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::standard_j;

/// Affine map `p ↦ M p + offset` on ℝ^dim, matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearMap {
    dim: usize,
    matrix: Vec<f64>,
    offset: Vec<f64>,
}

impl LinearMap {
    pub fn new(matrix: &DMatrix<f64>, offset: Option<Vec<f64>>) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim || dim == 0 {
            return Err(Error::InvalidShape(format!(
                "linear map needs a square matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let offset = offset.unwrap_or_else(|| vec![0.0; dim]);
        if offset.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: offset.len() });
        }
        let matrix = (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).map(|(i, j)| matrix[(i, j)]).collect();
        Ok(Self { dim, matrix, offset })
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(&DMatrix::identity(dim, dim), None).expect("square")
    }

    pub fn scaling(dim: usize, factor: f64) -> Self {
        Self::new(&(DMatrix::identity(dim, dim) * factor), None).expect("square")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.matrix)
    }

    pub fn offset(&self) -> &[f64] {
        &self.offset
    }

    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        let d = self.dim;
        (0..d)
            .map(|i| self.offset[i] + (0..d).map(|j| self.matrix[i * d + j] * p[j]).sum::<f64>())
            .collect()
    }

    /// `‖MᵀJM − J‖∞` (max entry); zero for symplectic matrices.
    pub fn symplectic_residual(&self) -> f64 {
        symplectic_residual(&self.matrix())
    }
}

pub fn symplectic_residual(d: &DMatrix<f64>) -> f64 {
    let j = standard_j(d.nrows() / 2);
    (d.transpose() * &j * d - j).amax()
}

/// A linear map whose matrix satisfies `MᵀJM = J` to 1e-12 entrywise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LinearMap", into = "LinearMap")]
pub struct LinearSymplecticMap(LinearMap);

impl LinearSymplecticMap {
    pub const TOLERANCE: f64 = 1e-12;

    pub fn new(matrix: &DMatrix<f64>, offset: Option<Vec<f64>>) -> Result<Self> {
        LinearMap::new(matrix, offset)?.try_into()
    }

    pub fn as_linear(&self) -> &LinearMap {
        &self.0
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        self.0.matrix()
    }

    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        self.0.apply(p)
    }
}

impl TryFrom<LinearMap> for LinearSymplecticMap {
    type Error = Error;

    fn try_from(m: LinearMap) -> Result<Self> {
        if m.dim % 2 != 0 {
            return Err(Error::InvalidShape(format!("odd dimension {}", m.dim)));
        }
        let r = m.symplectic_residual();
        if r > Self::TOLERANCE {
            return Err(Error::hypothesis(format!("matrix is not symplectic (residual {r:e})")));
        }
        Ok(Self(m))
    }
}

impl From<LinearSymplecticMap> for LinearMap {
    fn from(m: LinearSymplecticMap) -> Self {
        m.0
    }
}

/// The squeezing map of a 4-ball together with the quantities the rest of the
/// construction needs.
#[derive(Debug, Clone, PartialEq)]
pub struct PolterovichLinear {
    pub map: LinearSymplecticMap,
    pub radius: f64,
    /// `cos θ = 1/(9R²)` for the plane `V = span{e_x1, cos θ e_y1 + sin θ e_x2}`.
    pub cos_theta: f64,
    /// Radius of the round projection of `L(B⁴(R))` to the (x₂,y₂) plane.
    pub projection_radius: f64,
    /// Radius of the disk containing the (x₁,y₁) projection: operator norm of that block times R.
    pub block_radius: f64,
}

// 4D index layout: (x1, x2, y1, y2).
const X1: usize = 0;
const X2: usize = 1;
const Y1: usize = 2;
const Y2: usize = 3;

fn omega4(u: &DVector<f64>, v: &DVector<f64>) -> f64 {
    u[X1] * v[Y1] + u[X2] * v[Y2] - u[Y1] * v[X1] - u[Y2] * v[X2]
}

fn unit(i: usize) -> DVector<f64> {
    let mut e = DVector::zeros(4);
    e[i] = 1.0;
    e
}

/// Linear symplectomorphism `L` of ℝ⁴ such that every section of `L(B⁴(R))`
/// parallel to the (x₁,y₁) plane is a round disk of radius at most 1/3 and the
/// projection to the (x₂,y₂) plane is a round disk.
pub fn build_polterovich_linear(radius: f64) -> Result<PolterovichLinear> {
    if !(radius >= 1.0 / 3.0) || !radius.is_finite() {
        return Err(Error::hypothesis(format!("R = {radius} is below 1/3")));
    }
    let c = (1.0 / (9.0 * radius * radius)).min(1.0);
    let s = (1.0 - c * c).max(0.0).sqrt();
    let a = unit(X1);
    let b = unit(Y1) * c + unit(X2) * s;
    let u1 = &a * (3.0 * radius);
    let v1 = &b * (3.0 * radius);

    // Symplectic Gram-Schmidt on the ω-complement of V.
    let project = |w: &DVector<f64>| -> DVector<f64> { w - &v1 * omega4(&u1, w) + &u1 * omega4(&v1, w) };
    let seeds = [(X2, Y2), (X1, Y1), (X1, Y2), (X2, Y1)];
    let (u2, v2) = seeds
        .iter()
        .find_map(|&(i, j)| {
            let u = project(&unit(i));
            let w = project(&unit(j));
            let pairing = omega4(&u, &w);
            (pairing.abs() > 1e-9).then(|| (u, w / pairing))
        })
        .ok_or_else(|| Error::hypothesis("symplectic complement degenerate"))?;

    let mut basis = DMatrix::zeros(4, 4);
    basis.set_column(X1, &u1);
    basis.set_column(X2, &u2);
    basis.set_column(Y1, &v1);
    basis.set_column(Y2, &v2);
    let j = standard_j(2);
    // Inverse of a symplectic matrix.
    let l0 = -&j * basis.transpose() * &j;

    let proj = DMatrix::from_fn(2, 4, |r, k| l0[(if r == 0 { X2 } else { Y2 }, k)]);
    let m = &proj * proj.transpose();
    let m2 = Matrix2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let det = m2.determinant();
    let eig = m2.symmetric_eigen();
    let inv_sqrt = eig.eigenvectors
        * Matrix2::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()))
        * eig.eigenvectors.transpose();
    let g = inv_sqrt * det.powf(0.25);

    let mut round = DMatrix::identity(4, 4);
    round[(X2, X2)] = g[(0, 0)];
    round[(X2, Y2)] = g[(0, 1)];
    round[(Y2, X2)] = g[(1, 0)];
    round[(Y2, Y2)] = g[(1, 1)];
    let l = round * l0;

    let block = DMatrix::from_fn(2, 4, |r, k| l[(if r == 0 { X1 } else { Y1 }, k)]);
    let block_norm = (&block * block.transpose()).symmetric_eigenvalues().max().sqrt();

    Ok(PolterovichLinear {
        map: LinearSymplecticMap::new(&l, None)?,
        radius,
        cos_theta: c,
        projection_radius: radius * det.powf(0.25),
        block_radius: block_norm * radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_radius() {
        assert!(matches!(build_polterovich_linear(0.2), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn third_gives_identity() {
        let p = build_polterovich_linear(1.0 / 3.0).unwrap();
        assert!((p.map.matrix() - DMatrix::<f64>::identity(4, 4)).amax() < 1e-12);
        assert!((p.projection_radius - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn symplectic_and_projection_bound() {
        for r in [1.0 / 3.0, 0.5, 1.0, 2.0, 7.5] {
            let p = build_polterovich_linear(r).unwrap();
            assert!(p.map.as_linear().symplectic_residual() <= 1e-12);
            assert!(p.projection_radius <= 72f64.sqrt() * r * r + 1e-9, "R={r}");
        }
    }

    #[test]
    fn plane_maps_conformally() {
        // Points of the radius-R disk in V land on the radius-1/3 disk of the (x1,y1) plane.
        let r = 1.7;
        let p = build_polterovich_linear(r).unwrap();
        let c = p.cos_theta;
        let s = (1.0 - c * c).sqrt();
        for t in [0.0f64, 0.4, 2.0, 4.5] {
            let v = [r * t.cos(), r * t.sin() * s, r * t.sin() * c, 0.0];
            let w = p.map.apply(&v);
            assert!((w[X1].hypot(w[Y1]) - 1.0 / 3.0).abs() < 1e-12);
            assert!(w[X2].abs() < 1e-12 && w[Y2].abs() < 1e-12);
        }
    }

    #[test]
    fn non_symplectic_rejected() {
        let m = DMatrix::identity(4, 4) * 2.0;
        assert!(LinearSymplecticMap::new(&m, None).is_err());
        let lm = LinearMap::scaling(4, 2.0);
        assert!((lm.symplectic_residual() - 3.0).abs() < 1e-12);
    }
}
