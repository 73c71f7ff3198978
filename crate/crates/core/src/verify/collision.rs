use std::collections::HashMap;

const MAX_DIM: usize = 8;

type Key = [i64; MAX_DIM];

/// Spatial hash of points with cubic cells of side `h`. Any two stored points
/// within distance `h` lie in the same or adjacent cells, so `neighbors` never
/// misses a pair closer than `h`.
#[derive(Debug, Clone)]
pub struct CollisionIndex {
    h: f64,
    dim: usize,
    cells: HashMap<Key, Vec<(usize, usize)>>,
    points: Vec<Vec<f64>>,
    tags: Vec<usize>,
}

impl CollisionIndex {
    pub fn new(cell_size: f64, dim: usize) -> Self {
        assert!(cell_size > 0.0 && cell_size.is_finite(), "cell size must be positive");
        assert!((1..=MAX_DIM).contains(&dim), "dimension out of range");
        Self { h: cell_size, dim, cells: HashMap::new(), points: Vec::new(), tags: Vec::new() }
    }

    pub fn cell_size(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn key(&self, p: &[f64]) -> Key {
        let mut k = [0i64; MAX_DIM];
        for (slot, v) in k.iter_mut().zip(p) {
            *slot = (v / self.h).floor() as i64;
        }
        k
    }

    /// Stores `p` under `id` with a caller-defined `tag` (e.g. a ghost offset).
    pub fn insert(&mut self, id: usize, tag: usize, p: Vec<f64>) {
        debug_assert_eq!(p.len(), self.dim);
        let slot = self.points.len();
        self.cells.entry(self.key(&p)).or_default().push((slot, id));
        self.points.push(p);
        self.tags.push(tag);
    }

    /// Stored entries within distance `radius ≤ h` of `q`, as `(id, tag, distance)`.
    pub fn neighbors(&self, q: &[f64], radius: f64) -> Vec<(usize, usize, f64)> {
        debug_assert!(radius <= self.h);
        let base = self.key(q);
        let mut out = Vec::new();
        let total = 3usize.pow(self.dim as u32);
        for code in 0..total {
            let mut k = base;
            let mut c = code;
            for slot in k.iter_mut().take(self.dim) {
                *slot += (c % 3) as i64 - 1;
                c /= 3;
            }
            if let Some(bucket) = self.cells.get(&k) {
                for &(slot, id) in bucket {
                    let d = self.points[slot].iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                    if d <= radius {
                        out.push((id, self.tags[slot], d));
                    }
                }
            }
        }
        out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn planted_duplicate_always_found(
            x in -50.0f64..50.0, y in -50.0f64..50.0, z in -50.0f64..50.0, h in 1e-4f64..1.0
        ) {
            let mut idx = CollisionIndex::new(h, 3);
            idx.insert(0, 0, vec![x, y, z]);
            idx.insert(1, 0, vec![x + 10.0 * h, y, z]);
            idx.insert(2, 0, vec![x, y, z]);
            let found = idx.neighbors(&[x, y, z], 0.0);
            prop_assert_eq!(found.iter().map(|f| f.0).collect::<Vec<_>>(), vec![0, 2]);
        }

        #[test]
        fn pairs_within_cell_size_found(
            x in -5.0f64..5.0, y in -5.0f64..5.0, dx in -1.0f64..1.0, dy in -1.0f64..1.0
        ) {
            let h = 0.3;
            let norm = dx.hypot(dy).max(1e-12);
            let q = [x + dx / norm * h * 0.999, y + dy / norm * h * 0.999];
            let mut idx = CollisionIndex::new(h, 2);
            idx.insert(7, 3, q.to_vec());
            let found = idx.neighbors(&[x, y], h);
            prop_assert_eq!(found.len(), 1);
            prop_assert_eq!((found[0].0, found[0].1), (7, 3));
        }
    }
}
