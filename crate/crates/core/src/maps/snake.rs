use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ShapeDescriptor;

/// Expanding embedding of the rectangle `[0,L₁]×[0,L₂]` into `[0,5L′₁]×[0,5L′₂]`.
///
/// The rectangle is read as a strip of width L₁ (coordinate u) and length L₂
/// (coordinate v). It runs along horizontal rows of length `5L′₁ - 4L₁` with
/// pitch `3L₁`, joined by half-annulus turns of inner radius `a = L₁`.
/// Rows are isometries; turns stretch the v direction by `r/a ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SnakeParams", into = "SnakeParams")]
pub struct SnakeEmbedding {
    source: [f64; 2],
    target: [f64; 2],
    row_length: f64,
    rows: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct SnakeParams {
    source: [f64; 2],
    target: [f64; 2],
}

enum Segment {
    Row { k: usize, s: f64 },
    Turn { k: usize, phi: f64 },
}

impl SnakeEmbedding {
    pub fn new(source: [f64; 2], target: [f64; 2]) -> Result<Self> {
        let [l1, l2] = source;
        let [m1, m2] = target;
        if !(l1 > 0.0 && l2 > 0.0 && m1 > 0.0 && m2 > 0.0) {
            return Err(Error::hypothesis("rectangle sides must be positive"));
        }
        let checks = [
            (l1 <= l2, format!("L1 <= L2 fails: {l1} > {l2}")),
            (m1 <= m2, format!("L'1 <= L'2 fails: {m1} > {m2}")),
            (l1 <= m1, format!("L1 <= L'1 fails: {l1} > {m1}")),
            (l1 * l2 <= m1 * m2, format!("L1*L2 <= L'1*L'2 fails: {} > {}", l1 * l2, m1 * m2)),
        ];
        if let Some((_, why)) = checks.into_iter().find(|(ok, _)| !ok) {
            return Err(Error::hypothesis(why));
        }
        let row_length = 5.0 * m1 - 4.0 * l1;
        let turn = PI * l1;
        // Rows k = 0..K-1 sit at heights 3kL₁ and must fit below 5L′₂.
        let max_rows = ((5.0 * m2 - l1) / (3.0 * l1)).floor() as usize + 1;
        let mut rows = 1;
        while (rows as f64) * row_length + (rows as f64 - 1.0) * turn < l2 {
            rows += 1;
        }
        if rows > max_rows {
            return Err(Error::hypothesis(format!(
                "capacity check fails: {max_rows} rows of length {row_length} cannot absorb length {l2}"
            )));
        }
        Ok(Self { source, target, row_length, rows })
    }

    pub fn source(&self) -> [f64; 2] {
        self.source
    }

    pub fn target(&self) -> [f64; 2] {
        self.target
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn row_length(&self) -> f64 {
        self.row_length
    }

    pub fn domain(&self) -> ShapeDescriptor {
        ShapeDescriptor::rectangle(&self.source).expect("positive sides")
    }

    pub fn target_box(&self) -> ShapeDescriptor {
        ShapeDescriptor::rectangle(&[5.0 * self.target[0], 5.0 * self.target[1]]).expect("positive sides")
    }

    fn width(&self) -> f64 {
        self.source[0]
    }

    fn row_base(&self, k: usize) -> f64 {
        3.0 * self.width() * k as f64
    }

    fn segment(&self, v: f64) -> Segment {
        let a = self.width();
        let period = self.row_length + PI * a;
        let k = ((v / period).floor().max(0.0) as usize).min(self.rows - 1);
        let s = v - k as f64 * period;
        if s <= self.row_length || k + 1 == self.rows {
            Segment::Row { k, s }
        } else {
            Segment::Turn { k, phi: (s - self.row_length) / a }
        }
    }

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        let [u, v] = p;
        let a = self.width();
        let x_left = 2.0 * a;
        let x_right = x_left + self.row_length;
        match self.segment(v) {
            Segment::Row { k, s } if k % 2 == 0 => [x_left + s, self.row_base(k) + a - u],
            Segment::Row { k, s } => [x_right - s, self.row_base(k) + u],
            Segment::Turn { k, phi } => {
                let cy = self.row_base(k) + 2.0 * a;
                if k % 2 == 0 {
                    let r = a + u;
                    [x_right + r * phi.sin(), cy - r * phi.cos()]
                } else {
                    let r = 2.0 * a - u;
                    [x_left - r * phi.sin(), cy - r * phi.cos()]
                }
            }
        }
    }

    /// Preimage of q, if q is in the image of the closed strip.
    pub fn inverse(&self, q: [f64; 2]) -> Option<[f64; 2]> {
        let [x, y] = q;
        let a = self.width();
        let x_left = 2.0 * a;
        let x_right = x_left + self.row_length;
        let period = self.row_length + PI * a;
        let (k, u, s) = if x >= x_left && x <= x_right {
            let k = (y / (3.0 * a)).floor();
            if k < 0.0 {
                return None;
            }
            let k = k as usize;
            let local = y - self.row_base(k);
            if local > a {
                return None;
            }
            if k % 2 == 0 {
                (k, a - local, x - x_left)
            } else {
                (k, local, x_right - x)
            }
        } else {
            let (k, cx) = if x > x_right {
                (2.0 * (y / (6.0 * a)).floor(), x_right)
            } else {
                (2.0 * ((y - 3.0 * a) / (6.0 * a)).floor() + 1.0, x_left)
            };
            if k < 0.0 || k as usize + 1 >= self.rows {
                return None;
            }
            let k = k as usize;
            let cy = self.row_base(k) + 2.0 * a;
            let r = (x - cx).hypot(y - cy);
            let phi = (x - cx).abs().atan2(cy - y);
            let u = if k % 2 == 0 { r - a } else { 2.0 * a - r };
            (k, u, self.row_length + a * phi)
        };
        let v = k as f64 * period + s;
        (u >= 0.0 && u <= a && v >= 0.0 && v <= self.source[1]).then_some([u, v])
    }

    /// Row-major Jacobian `∂(x, y)/∂(u, v)`.
    pub fn jacobian(&self, p: [f64; 2]) -> [[f64; 2]; 2] {
        let [u, v] = p;
        let a = self.width();
        match self.segment(v) {
            Segment::Row { k, .. } if k % 2 == 0 => [[0.0, 1.0], [-1.0, 0.0]],
            Segment::Row { .. } => [[0.0, -1.0], [1.0, 0.0]],
            Segment::Turn { k, phi } => {
                let (s, c) = phi.sin_cos();
                if k % 2 == 0 {
                    let g = (a + u) / a;
                    [[s, g * c], [-c, g * s]]
                } else {
                    let g = (2.0 * a - u) / a;
                    [[s, -g * c], [c, g * s]]
                }
            }
        }
    }
}

impl TryFrom<SnakeParams> for SnakeEmbedding {
    type Error = Error;

    fn try_from(p: SnakeParams) -> Result<Self> {
        Self::new(p.source, p.target)
    }
}

impl From<SnakeEmbedding> for SnakeParams {
    fn from(s: SnakeEmbedding) -> Self {
        Self { source: s.source, target: s.target }
    }
}

pub fn snake_embedding(source: [f64; 2], target: [f64; 2]) -> Result<SnakeEmbedding> {
    SnakeEmbedding::new(source, target)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det(j: [[f64; 2]; 2]) -> f64 {
        j[0][0] * j[1][1] - j[0][1] * j[1][0]
    }

    #[test]
    fn preconditions() {
        assert!(snake_embedding([2.0, 2.0], [1.0, 4.0]).unwrap_err().to_string().contains("L1 <= L'1"));
        assert!(snake_embedding([1.0, 100.0], [1.0, 10.0]).unwrap_err().to_string().contains("L1*L2"));
        assert!(snake_embedding([3.0, 1.0], [4.0, 4.0]).is_err());
    }

    #[test]
    fn single_row_for_unit_square() {
        let s = snake_embedding([1.0, 1.0], [1.0, 1.0]).unwrap();
        assert_eq!(s.rows(), 1);
        assert_eq!(s.apply([0.5, 0.5]), [2.5, 0.5]);
    }

    #[test]
    fn continuous_across_seams() {
        let s = snake_embedding([1.0, 40.0], [2.0, 20.0]).unwrap();
        assert!(s.rows() > 1);
        let period = s.row_length() + PI;
        for k in 0..s.rows() - 1 {
            for seam in [k as f64 * period + s.row_length(), (k + 1) as f64 * period] {
                for u in [0.0, 0.3, 1.0] {
                    let a = s.apply([u, seam - 1e-12]);
                    let b = s.apply([u, seam + 1e-12]);
                    assert!((a[0] - b[0]).hypot(a[1] - b[1]) < 1e-9, "k={k} seam={seam}");
                }
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        for (src, dst) in [([1.0, 40.0], [2.0, 20.0]), ([1.0, 100.0], [10.0, 10.0]), ([0.5, 3.0], [0.5, 6.0])] {
            let s = snake_embedding(src, dst).unwrap();
            for i in 0..400 {
                let p = [src[0] * ((i * 37 % 100) as f64 + 0.5) / 100.0, src[1] * (i as f64 + 0.5) / 400.0];
                let back = s.inverse(s.apply(p)).unwrap();
                assert!((back[0] - p[0]).abs() < 1e-9 && (back[1] - p[1]).abs() < 1e-9, "{p:?}");
            }
            assert!(s.inverse([0.5 * src[0], 5.0 * dst[1] - 1e-9]).is_none() || s.rows() > 1);
        }
    }

    #[test]
    fn orientation_and_jacobian() {
        let s = snake_embedding([1.0, 40.0], [2.0, 20.0]).unwrap();
        for &(u, v) in &[(0.2, 3.0), (0.7, 7.5), (0.1, 9.0), (0.9, 12.2), (0.5, 39.0)] {
            let j = s.jacobian([u, v]);
            assert!(det(j) >= 1.0 - 1e-12);
            let h = 1e-7;
            let pu = s.apply([u + h, v]);
            let mu = s.apply([u - h, v]);
            let pv = s.apply([u, v + h]);
            let mv = s.apply([u, v - h]);
            for r in 0..2 {
                assert!(((pu[r] - mu[r]) / (2.0 * h) - j[r][0]).abs() < 1e-6);
                assert!(((pv[r] - mv[r]) / (2.0 * h) - j[r][1]).abs() < 1e-6);
            }
        }
    }
}
