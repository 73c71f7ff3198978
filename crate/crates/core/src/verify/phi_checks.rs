use std::time::Instant;

use rayon::prelude::*;

use super::report::{VerificationReport, Witness};
use crate::geometry::{sample, sample_point, CounterRng, Factor, SampleSpec, ShapeDescriptor};
use crate::maps::{psi_eval, MainLemmaMap, PeriodicDiffeo1D, StripImmersionModel};

/// Sample sizes for [`check_phi_properties`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhiCheckConfig {
    /// Grid points over one period for monotonicity, periodicity and displacement.
    pub grid: usize,
    /// Samples of the radius-ρ disk for the lattice-avoidance property.
    pub disk_samples: usize,
    /// Random disks of radius 1/3 for the aperiodicity property.
    pub disks: usize,
    /// Sampled pairs per disk.
    pub pairs_per_disk: usize,
    pub seed: u64,
}

impl Default for PhiCheckConfig {
    fn default() -> Self {
        Self { grid: 1_000_000, disk_samples: 1_000_000, disks: 1000, pairs_per_disk: 1000, seed: 0 }
    }
}

/// Distance from Δ to the nearest nonzero point of ℤ².
pub fn nonzero_lattice_distance(dx: f64, dy: f64) -> f64 {
    let (rx, ry) = (dx.round(), dy.round());
    let mut best = f64::INFINITY;
    for kx in [rx - 1.0, rx, rx + 1.0] {
        for ky in [ry - 1.0, ry, ry + 1.0] {
            if kx != 0.0 || ky != 0.0 {
                best = best.min((dx - kx).hypot(dy - ky));
            }
        }
    }
    best
}

fn timed(mut r: VerificationReport, start: Instant) -> VerificationReport {
    r.wall_time = start.elapsed();
    r
}

/// Grid of one period, refined inside the spike around 0.
fn period_grid(phi: &PeriodicDiffeo1D, n: usize) -> Vec<f64> {
    let d = phi.half_width();
    let spike = (0..=1000).map(|i| -d + 2.0 * d * i as f64 / 1000.0);
    (0..n).map(|i| -0.5 + (i as f64 + 0.5) / n as f64).chain(spike).collect()
}

fn phi_invariants(phi: &PeriodicDiffeo1D, cfg: &PhiCheckConfig) -> Vec<VerificationReport> {
    let start = Instant::now();
    let grid = period_grid(phi, cfg.grid);
    let bound = phi.rho().ceil() as i64 + 1;

    let mut fixed = VerificationReport::new("phi_fixes_integers", "max_error", 1e-12);
    for m in -bound..=bound {
        let e = (phi.eval(m as f64) - m as f64).abs();
        fixed.margin = fixed.margin.max(e);
        if e > 1e-12 {
            fixed.fail(Witness::new(vec![vec![m as f64]], format!("Φ({m}) off by {e:e}")));
        }
        fixed.samples += 1;
    }

    let stats: Vec<(f64, f64, f64)> = grid
        .par_iter()
        .map(|&x| ((phi.eval(x + 1.0) - phi.eval(x) - 1.0).abs(), phi.deriv(x), (phi.eval(x) - x).abs()))
        .collect();
    let mut periodic = VerificationReport::new("phi_periodic", "max_error", 1e-12);
    let mut monotone = VerificationReport::new("phi_monotone", "min_derivative", 0.9);
    let mut displacement = VerificationReport::new("phi_displacement", "max_displacement", 1e-4);
    monotone.margin = f64::INFINITY;
    let (mut wp, mut wm, mut wd) = (0, 0, 0);
    for (i, &(p, d, disp)) in stats.iter().enumerate() {
        if p > periodic.margin {
            periodic.margin = p;
            wp = i;
        }
        if d < monotone.margin {
            monotone.margin = d;
            wm = i;
        }
        if disp > displacement.margin {
            displacement.margin = disp;
            wd = i;
        }
    }
    for r in [&mut periodic, &mut monotone, &mut displacement] {
        r.samples = grid.len();
    }
    if periodic.margin > 1e-12 {
        periodic.fail(Witness::new(vec![vec![grid[wp]]], "Φ(x+1) − Φ(x) ≠ 1"));
    }
    if monotone.margin < 0.9 {
        monotone.fail(Witness::new(vec![vec![grid[wm]]], "dΦ below 9/10"));
    }
    if displacement.margin > 1e-4 {
        displacement.fail(Witness::new(vec![vec![grid[wd]]], "|Φ(x) − x| above 1e-4"));
    }

    let mut spike = VerificationReport::new("phi_spike_height", "relative_error", 1e-12);
    let want = 100.0 * phi.rho();
    spike.samples = (2 * bound + 1) as usize;
    for m in -bound..=bound {
        let e = (phi.deriv(m as f64) - want).abs() / want;
        spike.margin = spike.margin.max(e);
        if e > 1e-12 && spike.witnesses.len() < 3 {
            spike.fail(Witness::new(vec![vec![m as f64]], format!("dΦ({m}) = {} instead of {want}", phi.deriv(m as f64))));
        }
    }
    let mut out = vec![fixed, periodic, monotone, displacement, spike];
    for r in &mut out {
        r.wall_time = start.elapsed() / 5;
    }
    out
}

/// Ψ sends the disk of radius ρ into the complement of ℤ², and integer
/// fibers into the band `1/2 ± 1/100`.
pub fn check_lattice_avoidance(phi: &PeriodicDiffeo1D, samples: usize, seed: u64) -> VerificationReport {
    let start = Instant::now();
    let rho = phi.rho();
    let mut r = VerificationReport::new("property1", "min_lattice_distance", 1e-12);
    let disk = ShapeDescriptor::disk(rho).expect("ρ > 0");
    let pts = match sample(&disk, &SampleSpec::uniform(samples, seed)) {
        Ok(p) => p,
        Err(e) => {
            r.note(format!("sampling failed: {e}"));
            r.verdict = super::Verdict::Inconclusive;
            return timed(r, start);
        }
    };
    r.samples = pts.len();
    let dists: Vec<f64> = pts
        .par_iter()
        .map(|p| {
            let q = psi_eval(phi, [p.coords()[0], p.coords()[1]]);
            (q[0] - q[0].round()).hypot(q[1] - q[1].round())
        })
        .collect();
    let (mut best, mut at) = (f64::INFINITY, 0);
    for (i, d) in dists.iter().enumerate() {
        if *d < best {
            best = *d;
            at = i;
        }
    }
    r.margin = best;
    if best <= 1e-12 {
        r.fail(Witness::new(vec![pts[at].coords().to_vec()], "Ψ hits the lattice"));
    }

    // Integer fibers: Ψ(m, y) = (m, 1/2 + y/dΦ(m)) with |y| < sqrt(ρ² − m²).
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let top = rho.floor() as i64;
    for m in -top..=top {
        let chord = (rho * rho - (m * m) as f64).max(0.0).sqrt();
        if chord == 0.0 {
            continue;
        }
        let slope = phi.deriv(m as f64);
        let reach = chord / slope;
        lo = lo.min(0.5 - reach);
        hi = hi.max(0.5 + reach);
        // Lattice points (m, k) are hit at y = (k − 1/2) dΦ(m).
        let kmax = (0.5 + reach).ceil() as i64;
        for k in (1 - kmax)..=kmax {
            let y = (k as f64 - 0.5) * slope;
            if y.abs() < chord && r.witnesses.len() < 5 {
                r.fail(Witness::new(vec![vec![m as f64, y]], format!("Ψ({m}, {y}) = ({m}, {k})")));
            }
        }
    }
    r.detail("integer_fiber_y_min", lo);
    r.detail("integer_fiber_y_max", hi);
    // The disk is open, so the band's supremum may touch 1/2 ± 1/100.
    if lo.is_finite() && (lo < 0.49 - 1e-12 || hi > 0.51 + 1e-12) {
        r.fail(Witness::new(vec![], format!("integer fibers reach y in ({lo}, {hi}), outside (0.49, 0.51)")));
    }
    timed(r, start)
}

/// Differences Ψ(p) − Ψ(q) for pairs in random radius-1/3 disks stay away
/// from nonzero lattice vectors.
pub fn check_disk_aperiodicity(phi: &PeriodicDiffeo1D, disks: usize, pairs: usize, seed: u64) -> VerificationReport {
    let start = Instant::now();
    let rho = phi.rho();
    let third = 1.0 / 3.0;
    let mut r = VerificationReport::new("property2", "min_nonzero_lattice_distance", 1e-3);
    r.samples = disks * pairs;
    // Per disk: (min distance, its pair, max |Δx|, max same-x |Δy|).
    type DiskStat = (f64, [f64; 4], f64, f64);
    let stats: Vec<DiskStat> = (0..disks as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = CounterRng::new(seed, k);
            let rc = (rho - third) * rng.unit().sqrt();
            let th = std::f64::consts::TAU * rng.unit();
            let (cx, cy) = (rc * th.cos(), rc * th.sin());
            let disk_point = |rng: &mut CounterRng| {
                let r = third * rng.unit().sqrt();
                let t = std::f64::consts::TAU * rng.unit();
                (cx + r * t.cos(), cy + r * t.sin())
            };
            let mut st: DiskStat = (f64::INFINITY, [0.0; 4], 0.0, 0.0);
            for j in 0..pairs {
                let (p, q) = if j % 2 == 0 {
                    (disk_point(&mut rng), disk_point(&mut rng))
                } else {
                    let u = third * (2.0 * rng.unit() - 1.0);
                    let c = (third * third - u * u).sqrt();
                    let x = cx + u;
                    ((x, cy + c * (2.0 * rng.unit() - 1.0)), (x, cy + c * (2.0 * rng.unit() - 1.0)))
                };
                let a = psi_eval(phi, [p.0, p.1]);
                let b = psi_eval(phi, [q.0, q.1]);
                let (dx, dy) = (a[0] - b[0], a[1] - b[1]);
                let d = nonzero_lattice_distance(dx, dy);
                if d < st.0 {
                    st.0 = d;
                    st.1 = [p.0, p.1, q.0, q.1];
                }
                st.2 = st.2.max(dx.abs());
                if j % 2 == 1 {
                    st.3 = st.3.max(dy.abs());
                }
            }
            st
        })
        .collect();
    let mut best: DiskStat = (f64::INFINITY, [0.0; 4], 0.0, 0.0);
    for s in &stats {
        if s.0 < best.0 {
            best.0 = s.0;
            best.1 = s.1;
        }
        best.2 = best.2.max(s.2);
        best.3 = best.3.max(s.3);
    }
    r.margin = best.0;
    r.detail("max_abs_dx", best.2);
    r.detail("max_abs_dy_same_x", best.3);
    let w = best.1;
    if best.0 <= 1e-3 {
        r.fail(Witness::new(vec![vec![w[0], w[1]], vec![w[2], w[3]]], "difference near a nonzero lattice vector"));
    }
    if best.2 > 2.0 / 3.0 + 2e-4 {
        r.fail(Witness::new(vec![], format!("|Δx| reaches {}", best.2)));
    }
    if best.3 > 20.0 / 27.0 + 1e-6 {
        r.fail(Witness::new(vec![], format!("same-x |Δy| reaches {}", best.3)));
    }
    timed(r, start)
}

/// The invariants of Φ plus both properties of Ψ.
pub fn check_phi_properties(phi: &PeriodicDiffeo1D, cfg: &PhiCheckConfig) -> VerificationReport {
    let mut children = phi_invariants(phi, cfg);
    children.push(check_lattice_avoidance(phi, cfg.disk_samples, cfg.seed));
    children.push(check_disk_aperiodicity(phi, cfg.disks, cfg.pairs_per_disk, cfg.seed ^ 0xA5A5));
    VerificationReport::bundle("phi_properties", children)
}

/// Same-fiber pairs of the ball under `Ψ̃ ∘ L`: their (x₁, y₁) differences stay
/// at least `threshold` away from every nonzero lattice vector.
pub fn check_aperiodicity(ml: &MainLemmaMap, fibers: usize, pairs: usize, seed: u64, threshold: f64) -> VerificationReport {
    let start = Instant::now();
    let mut r = VerificationReport::new("aperiodicity", "min_nonzero_lattice_distance", threshold);
    r.samples = fibers * pairs;
    let lift = match ml.unquotiented() {
        Ok(l) => l,
        Err(e) => {
            r.verdict = super::Verdict::Inconclusive;
            r.note(format!("cannot form Ψ̃∘L: {e}"));
            return timed(r, start);
        }
    };
    let ball = ShapeDescriptor::ball(4, ml.radius).expect("positive radius");
    let spec = SampleSpec::uniform(fibers, seed);
    type FiberStat = (f64, Vec<Vec<f64>>, f64, f64, f64);
    let stats: Vec<FiberStat> = (0..fibers as u64)
        .into_par_iter()
        .map(|k| {
            let mut st: FiberStat = (f64::INFINITY, vec![], 0.0, 0.0, 0.0);
            let Ok(p) = sample_point(&ball, &spec, k) else { return st };
            let sec = ml.fiber_section(p.coords());
            let mut rng = CounterRng::new(seed ^ 0xF1BE, k);
            let point = |rng: &mut CounterRng| {
                let rad = sec.radius * (1.0 - 1e-12) * rng.unit().sqrt();
                let t = std::f64::consts::TAU * rng.unit();
                sec.point(rad * t.cos(), rad * t.sin())
            };
            for _ in 0..pairs {
                let (a, b) = (point(&mut rng), point(&mut rng));
                let (Ok(fa), Ok(fb)) = (lift.eval(&a), lift.eval(&b)) else { continue };
                let (dx, dy) = (fa[0] - fb[0], fa[2] - fb[2]);
                st.4 = st.4.max((fa[1] - fb[1]).abs().max((fa[3] - fb[3]).abs()));
                let d = nonzero_lattice_distance(dx, dy);
                if d < st.0 {
                    st.0 = d;
                    st.1 = vec![a.to_vec(), b.to_vec()];
                }
                st.2 = st.2.max(dx.abs());
                st.3 = st.3.max(dy.abs());
            }
            st
        })
        .collect();
    let mut best: FiberStat = (f64::INFINITY, vec![], 0.0, 0.0, 0.0);
    for s in stats {
        best.2 = best.2.max(s.2);
        best.3 = best.3.max(s.3);
        best.4 = best.4.max(s.4);
        if s.0 < best.0 {
            best.0 = s.0;
            best.1 = s.1;
        }
    }
    r.margin = best.0;
    r.detail("max_abs_dx", best.2);
    r.detail("max_abs_dy", best.3);
    r.detail("max_fiber_drift", best.4);
    if best.0 < threshold {
        r.fail(Witness::new(best.1, format!("same-fiber difference {} from a nonzero lattice vector", best.0)));
    }
    timed(r, start)
}

/// Monte-Carlo measure of the two-preimage set of the strip immersion times
/// `fiber`, against the exact `overlap area × vol(fiber)`; optionally against a
/// budget ε that the exact value must stay below.
pub fn estimate_double_point_volume(
    model: &StripImmersionModel,
    fiber: &ShapeDescriptor,
    spec: &SampleSpec,
    epsilon: Option<f64>,
) -> VerificationReport {
    let start = Instant::now();
    let mut r = VerificationReport::new("double_points", "measure_estimate", 0.0);
    let square = ShapeDescriptor::new(vec![Factor::Rectangle { sides: vec![1.0, 1.0], origin: vec![-0.5, -0.5] }])
        .expect("unit square");
    let domain = square.product(fiber);
    let (vol, pts) = match (domain.volume(), sample(&domain, spec)) {
        (Ok(v), Ok(p)) => (v, p),
        (Err(e), _) | (_, Err(e)) => {
            r.verdict = super::Verdict::Inconclusive;
            r.note(format!("cannot sample {domain}: {e}"));
            return timed(r, start);
        }
    };
    let n = domain.n();
    let hits = pts.par_iter().filter(|p| model.preimage_count(p.coords()[0], p.coords()[n]) == 2).count();
    let frac = hits as f64 / pts.len() as f64;
    let est = vol * frac;
    let se = vol * (frac * (1.0 - frac) / pts.len() as f64).sqrt();
    let exact = model.double_point_area() * fiber.volume().unwrap_or(f64::NAN);
    r.samples = pts.len();
    r.margin = est;
    r.tolerance = 3.0 * se;
    r.detail("exact", exact);
    r.detail("standard_error", se);
    if (est - exact).abs() > 3.0 * se.max(f64::MIN_POSITIVE) && est != exact {
        r.fail(Witness::new(vec![], format!("estimate {est} ± {se} disagrees with exact {exact}")));
    }
    if let Some(eps) = epsilon {
        r.detail("budget", eps);
        if !(exact < eps) {
            r.fail(Witness::new(vec![], format!("double-point volume {exact} is not below {eps}")));
        }
    }
    timed(r, start)
}
