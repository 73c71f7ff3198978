use std::f64::consts::TAU;

use rand::{Rng, RngCore};
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::point::PhasePoint;
use super::shape::{Factor, ShapeDescriptor};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleMode {
    Grid,
    Uniform,
    BoundaryBiased,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub count: usize,
    pub seed: u64,
    pub mode: SampleMode,
    /// Radius of the disk standing in for full-plane factors.
    pub plane_bound: Option<f64>,
}

impl SampleSpec {
    pub fn uniform(count: usize, seed: u64) -> Self {
        Self {
            count,
            seed,
            mode: SampleMode::Uniform,
            plane_bound: None,
        }
    }

    pub fn grid(count: usize) -> Self {
        Self {
            count,
            seed: 0,
            mode: SampleMode::Grid,
            plane_bound: None,
        }
    }

    pub fn boundary_biased(count: usize, seed: u64) -> Self {
        Self {
            mode: SampleMode::BoundaryBiased,
            ..Self::uniform(count, seed)
        }
    }

    pub fn with_plane_bound(mut self, radius: f64) -> Self {
        self.plane_bound = Some(radius);
        self
    }
}

/// Counter-based generator: the stream for sample `index` depends only on
/// `(seed, index)`, so any partition of the index range over workers yields
/// the serial sequence.
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl CounterRng {
    pub fn new(seed: u64, index: u64) -> Self {
        Self {
            key: splitmix(splitmix(seed) ^ index.wrapping_mul(GOLDEN)),
            counter: 0,
        }
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

impl RngCore for CounterRng {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        splitmix(self.key ^ self.counter.wrapping_mul(0xD6E8_FEB8_6659_FD93))
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let v = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&v[..chunk.len()]);
        }
    }
}

// Radial fraction in (0, 1); boundary-biased draws land in [1 - 1e-3, 1 - 1e-9].
fn radial_fraction(rng: &mut CounterRng, exponent: f64, biased: bool) -> f64 {
    if biased && rng.random::<bool>() {
        1.0 - (1e-9 + 1e-3 * rng.unit())
    } else {
        rng.unit().powf(exponent)
    }
}

fn edge_coordinate(rng: &mut CounterRng, lo: f64, side: f64, biased: bool) -> f64 {
    if biased && rng.random::<bool>() {
        let off = side * (1e-9 + 1e-3 * rng.unit());
        if rng.random::<bool>() {
            lo + off
        } else {
            lo + side - off
        }
    } else {
        lo + side * rng.unit()
    }
}

fn draw_factor(f: &Factor, rng: &mut CounterRng, biased: bool, plane: Option<f64>, out: &mut Vec<f64>) -> Result<()> {
    out.clear();
    let disk = |rng: &mut CounterRng, r: f64, out: &mut Vec<f64>| {
        let rad = r * radial_fraction(rng, 0.5, biased);
        let th = TAU * rng.unit();
        out.push(rad * th.cos());
        out.push(rad * th.sin());
    };
    match f {
        Factor::Disk2 { radius } => disk(rng, *radius, out),
        Factor::TranslatedDisk2 { center, radius } => {
            disk(rng, *radius, out);
            out[0] += center[0];
            out[1] += center[1];
        }
        Factor::FullPlane => {
            let r = plane.ok_or_else(|| Error::Unbounded("full-plane factor needs a bounding radius".into()))?;
            disk(rng, r, out);
        }
        Factor::Ball { dim, radius } => {
            let g: Vec<f64> = (0..*dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
            let rad = radius * radial_fraction(rng, 1.0 / *dim as f64, biased);
            out.extend(g.iter().map(|v| v / norm * rad));
        }
        Factor::Rectangle { sides, origin } => {
            for (s, o) in sides.iter().zip(origin) {
                out.push(edge_coordinate(rng, *o, *s, biased));
            }
        }
        Factor::Surface { area } => {
            let s = area.sqrt();
            out.push(edge_coordinate(rng, 0.0, s, biased));
            out.push(edge_coordinate(rng, 0.0, s, biased));
        }
    }
    Ok(())
}

/// The `index`-th random sample of `shape` (uniform or boundary-biased modes).
pub fn sample_point(shape: &ShapeDescriptor, spec: &SampleSpec, index: u64) -> Result<PhasePoint> {
    let biased = spec.mode == SampleMode::BoundaryBiased;
    let mut rng = CounterRng::new(spec.seed, index);
    let indices = shape.factor_indices();
    let mut p = vec![0.0; shape.dim()];
    let mut local = Vec::with_capacity(6);
    for (f, idx) in shape.factors().iter().zip(&indices) {
        // Rounding can push a draw onto the open boundary; redraw from the same stream.
        let mut tries = 0;
        loop {
            draw_factor(f, &mut rng, biased, spec.plane_bound, &mut local)?;
            let inside = match f {
                Factor::FullPlane => true,
                _ => f.contains_local(&local),
            };
            if inside {
                break;
            }
            tries += 1;
            if tries > 1000 {
                return Err(Error::InvalidShape(format!("cannot sample interior of {f}")));
            }
        }
        for (k, &i) in idx.iter().enumerate() {
            p[i] = local[k];
        }
    }
    PhasePoint::new(p)
}

fn grid_points(shape: &ShapeDescriptor, spec: &SampleSpec) -> Result<Vec<PhasePoint>> {
    let mut bounded = shape.clone();
    if !shape.is_bounded() {
        let r = spec
            .plane_bound
            .ok_or_else(|| Error::Unbounded("full-plane factor needs a bounding radius".into()))?;
        let factors = shape
            .factors()
            .iter()
            .map(|f| match f {
                Factor::FullPlane => Factor::Disk2 { radius: r },
                other => other.clone(),
            })
            .collect();
        bounded = ShapeDescriptor::new(factors)?;
    }
    let (lo, hi) = bounded.bounding_box().expect("bounded shape");
    let d = lo.len();
    let mut m = ((spec.count as f64).powf(1.0 / d as f64).ceil() as usize).max(1);
    loop {
        let total = m.checked_pow(d as u32).filter(|t| *t <= 200_000_000).ok_or_else(|| {
            Error::InvalidShape("grid too fine for this shape; use uniform sampling".into())
        })?;
        let inside: Vec<Vec<f64>> = (0..total)
            .into_par_iter()
            .filter_map(|flat| {
                let mut rem = flat;
                let p: Vec<f64> = (0..d)
                    .map(|k| {
                        let j = rem % m;
                        rem /= m;
                        lo[k] + (hi[k] - lo[k]) * (j as f64 + 0.5) / m as f64
                    })
                    .collect();
                bounded.contains(&p).unwrap_or(false).then_some(p)
            })
            .collect();
        if inside.len() >= spec.count {
            let step = inside.len() as f64 / spec.count as f64;
            return (0..spec.count)
                .map(|j| PhasePoint::new(inside[(j as f64 * step) as usize].clone()))
                .collect();
        }
        m += 1.max(m / 8);
    }
}

/// `spec.count` points of `shape`, all strictly inside, deterministic in the spec.
pub fn sample(shape: &ShapeDescriptor, spec: &SampleSpec) -> Result<Vec<PhasePoint>> {
    if spec.count == 0 {
        return Err(Error::InvalidShape("sample count must be at least 1".into()));
    }
    if !shape.is_bounded() && spec.plane_bound.is_none() {
        return Err(Error::Unbounded(format!("cannot sample {shape} without a plane bound")));
    }
    match spec.mode {
        SampleMode::Grid => grid_points(shape, spec),
        _ => (0..spec.count as u64)
            .into_par_iter()
            .map(|i| sample_point(shape, spec, i))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::parse_shape;

    #[test]
    fn single_grid_point_is_center() {
        let pts = sample(&ShapeDescriptor::disk(1.0).unwrap(), &SampleSpec::grid(1)).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].coords(), &[0.0, 0.0]);
    }

    #[test]
    fn all_modes_stay_inside() {
        for lit in ["ball4(1)", "polydisk(0.1, 1, 1)", "rect(1, 40)", "sigma(2) * disk(3)", "tdisk(0, 0.1, 0.2)"] {
            let s = parse_shape(lit).unwrap();
            for spec in [SampleSpec::uniform(2000, 7), SampleSpec::boundary_biased(2000, 7), SampleSpec::grid(500)] {
                let pts = sample(&s, &spec).unwrap();
                assert_eq!(pts.len(), spec.count);
                assert!(pts.iter().all(|p| s.contains(p.coords()).unwrap()), "{lit} {:?}", spec.mode);
            }
        }
    }

    #[test]
    fn deterministic_and_partition_independent() {
        let s = ShapeDescriptor::ball(4, 1.0).unwrap();
        let spec = SampleSpec::uniform(100, 42);
        let a = sample(&s, &spec).unwrap();
        let b = sample(&s, &spec).unwrap();
        assert_eq!(a, b);
        // Serial evaluation of a single index reproduces the batch.
        assert_eq!(sample_point(&s, &spec, 57).unwrap(), a[57]);
        let c = sample(&s, &SampleSpec::uniform(100, 43)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn unbounded_needs_override() {
        let cyl = ShapeDescriptor::cylinder(1.0).unwrap();
        assert!(matches!(sample(&cyl, &SampleSpec::uniform(10, 1)), Err(Error::Unbounded(_))));
        let pts = sample(&cyl, &SampleSpec::uniform(10, 1).with_plane_bound(5.0)).unwrap();
        assert!(pts.iter().all(|p| p.coords()[1].hypot(p.coords()[3]) < 5.0));
    }

    #[test]
    fn boundary_biased_reaches_near_boundary() {
        let pts = sample(&ShapeDescriptor::disk(1.0).unwrap(), &SampleSpec::boundary_biased(1000, 3)).unwrap();
        let max_r = pts.iter().map(|p| p.coords()[0].hypot(p.coords()[1])).fold(0.0, f64::max);
        assert!(max_r > 0.999 && max_r < 1.0);
    }

    #[test]
    fn empty_count_rejected() {
        assert!(sample(&ShapeDescriptor::disk(1.0).unwrap(), &SampleSpec::uniform(0, 1)).is_err());
    }
}
