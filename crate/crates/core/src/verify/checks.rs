use std::time::Instant;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::collision::CollisionIndex;
use super::report::{Verdict, VerificationReport, Witness};
use crate::geometry::{sample, CounterRng, Factor, SampleSpec, ShapeDescriptor};
use crate::maps::{compose, symplectic_residual, JacobianMode, MapKind, MapNode};

/// Symplectic residual tolerance for analytic Jacobians.
pub const ANALYTIC_TOL: f64 = 1e-10;
/// Symplectic residual tolerance for central-difference Jacobians.
pub const FD_TOL: f64 = 1e-6;
/// Slack on the smallest singular value of an expanding map.
pub const EXPANDING_TOL: f64 = 1e-9;

const MAX_WITNESSES: usize = 5;

/// Samples `dom`, or marks the report inconclusive.
fn draw(dom: &ShapeDescriptor, spec: &SampleSpec, report: &mut VerificationReport) -> Option<Vec<Vec<f64>>> {
    match sample(dom, spec) {
        Ok(pts) => {
            report.samples = pts.len();
            Some(pts.into_iter().map(|p| p.into_coords()).collect())
        }
        Err(e) => {
            report.verdict = Verdict::Inconclusive;
            report.note(format!("sampling failed: {e}"));
            None
        }
    }
}

fn finish(mut report: VerificationReport, start: Instant) -> VerificationReport {
    report.wall_time = start.elapsed();
    report
}

pub fn check_symplectic(m: &MapNode, dom: &ShapeDescriptor, spec: &SampleSpec) -> VerificationReport {
    let tol = match m.jacobian_mode {
        JacobianMode::Analytic => ANALYTIC_TOL,
        JacobianMode::FiniteDifference => FD_TOL,
    };
    check_symplectic_with(m, dom, spec, tol)
}

/// Max over samples of `‖DᵀJD − J‖∞`.
pub fn check_symplectic_with(m: &MapNode, dom: &ShapeDescriptor, spec: &SampleSpec, tol: f64) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("symplectic", "max_residual", tol);
    let Some(points) = draw(dom, spec, &mut report) else { return finish(report, start) };
    let residuals: Vec<_> = points.par_iter().map(|p| m.jacobian(p).map(|d| symplectic_residual(&d))).collect();
    let mut worst = (0.0f64, 0usize);
    for (i, r) in residuals.iter().enumerate() {
        match r {
            Ok(r) if *r > worst.0 || r.is_nan() => worst = (if r.is_nan() { f64::INFINITY } else { *r }, i),
            Ok(_) => {}
            Err(e) => {
                if report.witnesses.len() < MAX_WITNESSES {
                    report.inconclusive(Witness::new(vec![points[i].clone()], format!("jacobian failed: {e}")));
                }
            }
        }
    }
    report.margin = worst.0;
    if worst.0 > tol {
        report.fail(Witness::new(vec![points[worst.1].clone()], format!("residual {:e}", worst.0)));
    }
    finish(report, start)
}

/// Identification of `(x_pair, y_pair)` modulo the unit lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeQuotient {
    pub pair: usize,
}

impl LatticeQuotient {
    pub fn first_pair() -> Self {
        Self { pair: 0 }
    }
}

/// The map with a leading lattice quotient removed, so lattice offsets between
/// image points can be read off.
fn unquotiented(m: &MapNode) -> MapNode {
    match &m.kind {
        MapKind::TorusQuotient => MapNode::identity(m.domain.clone()),
        MapKind::Composition { children, .. } if matches!(children[0].kind, MapKind::TorusQuotient) => {
            if children.len() == 2 {
                children[1].clone()
            } else {
                compose(children[1..].to_vec()).expect("sub-chain of a valid chain")
            }
        }
        _ => m.clone(),
    }
}

fn expected_spacing(dom: &ShapeDescriptor, n: usize) -> f64 {
    let d = dom.dim() as f64;
    let vol = dom.volume().ok().or_else(|| {
        dom.bounding_box().map(|(lo, hi)| lo.iter().zip(&hi).map(|(a, b)| b - a).product())
    });
    (vol.unwrap_or(1.0) / n as f64).powf(1.0 / d)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn check_injective(m: &MapNode, dom: &ShapeDescriptor, spec: &SampleSpec, lattice: Option<LatticeQuotient>) -> VerificationReport {
    check_injective_with(m, dom, spec, lattice, None)
}

/// Falsification test for injectivity on samples.
///
/// Without a lattice: fails when two distinct preimages have images that
/// coincide to `1e-9` relative resolution. With a lattice: images are
/// compared modulo the lattice and any pair within the cell size `h` whose
/// nearest lattice offset is nonzero fails. `h` defaults to a quarter of the
/// expected sample spacing of the domain.
pub fn check_injective_with(
    m: &MapNode,
    dom: &ShapeDescriptor,
    spec: &SampleSpec,
    lattice: Option<LatticeQuotient>,
    cell_size: Option<f64>,
) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("injective", "min_separation", 0.0);
    report.note("sampling can refute injectivity but never proves it");
    let Some(points) = draw(dom, spec, &mut report) else { return finish(report, start) };
    let map = if lattice.is_some() { unquotiented(m) } else { m.clone() };
    let images = match map.eval_batch(&points) {
        Ok(v) => v,
        Err(e) => {
            report.verdict = Verdict::Inconclusive;
            report.note(format!("evaluation failed: {e}"));
            return finish(report, start);
        }
    };
    let d = map.dim();
    let h = cell_size.unwrap_or_else(|| expected_spacing(dom, points.len()) / 4.0);
    report.tolerance = h;
    report.detail("cell_size", h);
    let mut index = CollisionIndex::new(h, d);

    match lattice {
        None => {
            let scale = images.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
            let resolution = 1e-9 * (1.0 + scale);
            let dom_res = 1e-6 * dom.diameter().unwrap_or(1.0);
            for (i, q) in images.iter().enumerate() {
                index.insert(i, 0, q.clone());
            }
            let found: Vec<Vec<(usize, usize, f64)>> = (0..images.len())
                .into_par_iter()
                .map(|j| {
                    index
                        .neighbors(&images[j], h)
                        .into_iter()
                        .filter(|&(i, _, _)| i > j && dist(&points[i], &points[j]) > dom_res)
                        .map(|(i, _, dq)| (i, j, dq))
                        .collect()
                })
                .collect();
            let mut min_sep = h;
            for (i, j, dq) in found.into_iter().flatten() {
                min_sep = min_sep.min(dq);
                if dq <= resolution && report.witnesses.len() < MAX_WITNESSES {
                    report.fail(Witness::new(
                        vec![points[i].clone(), points[j].clone()],
                        format!("images coincide to {dq:e}"),
                    ));
                }
            }
            report.margin = min_sep;
        }
        Some(LatticeQuotient { pair }) => {
            let n = d / 2;
            let (cx, cy) = (pair, n + pair);
            let mut reduced = Vec::with_capacity(images.len());
            let mut floors = Vec::with_capacity(images.len());
            for (i, q) in images.iter().enumerate() {
                let f = [q[cx].floor(), q[cy].floor()];
                let mut r = q.clone();
                r[cx] -= f[0];
                r[cy] -= f[1];
                for gx in -1i64..=1 {
                    for gy in -1i64..=1 {
                        let near = |g: i64, v: f64| g == 0 || (g == 1 && v < h) || (g == -1 && v > 1.0 - h);
                        if near(gx, r[cx]) && near(gy, r[cy]) {
                            let mut ghost = r.clone();
                            ghost[cx] += gx as f64;
                            ghost[cy] += gy as f64;
                            index.insert(i, ((gx + 1) * 3 + gy + 1) as usize, ghost);
                        }
                    }
                }
                reduced.push(r);
                floors.push(f);
            }
            let found: Vec<Vec<(usize, usize, [f64; 2], f64)>> = (0..images.len())
                .into_par_iter()
                .map(|j| {
                    index
                        .neighbors(&reduced[j], h)
                        .into_iter()
                        .filter(|&(i, _, _)| i != j)
                        .filter_map(|(i, tag, dq)| {
                            let g = [(tag / 3) as f64 - 1.0, (tag % 3) as f64 - 1.0];
                            let k = [floors[i][0] - floors[j][0] - g[0], floors[i][1] - floors[j][1] - g[1]];
                            (k != [0.0, 0.0]).then_some((i, j, k, dq))
                        })
                        .collect()
                })
                .collect();
            let mut min_sep = h;
            for (i, j, k, dq) in found.into_iter().flatten() {
                min_sep = min_sep.min(dq);
                if report.witnesses.len() < MAX_WITNESSES {
                    report.fail(Witness::new(
                        vec![points[i].clone(), points[j].clone()],
                        format!("images differ by lattice vector ({}, {}) up to {dq:e}", k[0], k[1]),
                    ));
                }
            }
            report.margin = min_sep;
            if report.passed() {
                report.note("no pair within the cell size differs by a nonzero lattice vector; margin is a lower bound");
            }
        }
    }
    finish(report, start)
}

/// Distance from `(x, y)` to the nearest point of `sqrt(a) ℤ²`.
fn lattice_distance(x: f64, y: f64, area: f64) -> f64 {
    let s = area.sqrt();
    let fx = (x / s - (x / s).round()).abs() * s;
    let fy = (y / s - (y / s).round()).abs() * s;
    fx.hypot(fy)
}

/// Every sampled image lies in `target`. Also records, per factor, the worst
/// radius ratio of disk factors and the lattice distance of surface factors.
pub fn check_containment(m: &MapNode, dom: &ShapeDescriptor, target: &ShapeDescriptor, spec: &SampleSpec) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("containment", "outside_count", 0.0);
    if target.dim() != m.dim() {
        report.verdict = Verdict::Inconclusive;
        report.note(format!("target dimension {} differs from map dimension {}", target.dim(), m.dim()));
        return finish(report, start);
    }
    let Some(points) = draw(dom, spec, &mut report) else { return finish(report, start) };
    let images = match m.eval_batch(&points) {
        Ok(v) => v,
        Err(e) => {
            report.verdict = Verdict::Inconclusive;
            report.note(format!("evaluation failed: {e}"));
            return finish(report, start);
        }
    };
    let inside: Vec<bool> = images.par_iter().map(|q| target.contains(q).unwrap_or(false)).collect();
    let mut outside = 0usize;
    for (i, ok) in inside.iter().enumerate() {
        if !ok {
            outside += 1;
            if report.witnesses.len() < MAX_WITNESSES {
                report.fail(Witness::new(vec![points[i].clone(), images[i].clone()], "image outside target"));
            }
        }
    }
    report.margin = outside as f64;
    for (k, (f, idx)) in target.factors().iter().zip(target.factor_indices()).enumerate() {
        let local = |q: &Vec<f64>| -> Vec<f64> { idx.iter().map(|&i| q[i]).collect() };
        match f {
            Factor::Disk2 { radius } => {
                let r = images.iter().map(|q| { let c = local(q); c[0].hypot(c[1]) }).fold(0.0, f64::max);
                report.detail(&format!("factor{k}_max_radius_ratio"), r / radius);
            }
            Factor::TranslatedDisk2 { center, radius } => {
                let r = images
                    .iter()
                    .map(|q| { let c = local(q); (c[0] - center[0]).hypot(c[1] - center[1]) })
                    .fold(0.0, f64::max);
                report.detail(&format!("factor{k}_max_radius_ratio"), r / radius);
            }
            Factor::Surface { area } => {
                let d = images.iter().map(|q| { let c = local(q); lattice_distance(c[0], c[1], *area) }).fold(f64::INFINITY, f64::min);
                report.detail(&format!("factor{k}_min_lattice_distance"), d);
            }
            _ => {}
        }
    }
    finish(report, start)
}

/// Image volume against the domain volume, two ways: the change of variables
/// `∫ |det D|`, and hit-or-miss sampling of the image's bounding box using the
/// map's inverse for membership. Each must agree within three standard errors.
pub fn check_volume_preserved(m: &MapNode, dom: &ShapeDescriptor, spec: &SampleSpec) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("volume", "relative_error", 0.0);
    let vol = match dom.volume() {
        Ok(v) => v,
        Err(e) => {
            report.verdict = Verdict::Inconclusive;
            report.note(format!("domain volume unavailable: {e}"));
            return finish(report, start);
        }
    };
    let Some(points) = draw(dom, spec, &mut report) else { return finish(report, start) };
    let n = points.len() as f64;
    let evaluated: Vec<_> = points
        .par_iter()
        .map(|p| Ok::<_, crate::Error>((m.eval(p)?, m.jacobian(p)?.determinant().abs())))
        .collect();
    let mut images = Vec::with_capacity(points.len());
    let mut dets = Vec::with_capacity(points.len());
    for r in evaluated {
        match r {
            Ok((q, det)) => {
                images.push(q);
                dets.push(det);
            }
            Err(e) => {
                report.verdict = Verdict::Inconclusive;
                report.note(format!("evaluation failed: {e}"));
                return finish(report, start);
            }
        }
    }
    let mean = dets.iter().sum::<f64>() / n;
    let var = dets.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1.0).max(1.0);
    let cov_est = vol * mean;
    let cov_se = vol * (var / n).sqrt();
    report.detail("domain_volume", vol);
    report.detail("jacobian_estimate", cov_est);
    report.detail("jacobian_se", cov_se);
    report.margin = (cov_est - vol).abs() / vol;
    if (cov_est - vol).abs() > 3.0 * cov_se + 1e-9 * vol {
        report.fail(Witness::new(vec![], format!("change of variables gives {cov_est} against {vol}")));
    }

    let d = m.dim();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for q in &images {
        for k in 0..d {
            lo[k] = lo[k].min(q[k]);
            hi[k] = hi[k].max(q[k]);
        }
    }
    for k in 0..d {
        let pad = 0.01 * (hi[k] - lo[k]).max(1e-9);
        lo[k] -= pad;
        hi[k] += pad;
    }
    let box_vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    if !box_vol.is_finite() {
        report.verdict = report.verdict.worst(Verdict::Inconclusive);
        report.note("image is unbounded");
        return finish(report, start);
    }
    let scale = lo.iter().chain(&hi).fold(0.0f64, |a, v| a.max(v.abs()));
    let hits: Vec<Option<bool>> = (0..points.len() as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = CounterRng::new(spec.seed ^ 0x5EED_B0C5, i);
            let q: Vec<f64> = (0..d).map(|k| lo[k] + (hi[k] - lo[k]) * rng.unit()).collect();
            let pre = match m.inverse_eval(&q)? {
                Ok(p) => p,
                Err(_) => return Some(false),
            };
            let inside = dom.contains(&pre).unwrap_or(false)
                && m.eval(&pre).map(|back| dist(&back, &q) <= 1e-7 * (1.0 + scale)).unwrap_or(false);
            Some(inside)
        })
        .collect();
    if hits.iter().any(Option::is_none) {
        report.verdict = report.verdict.worst(Verdict::Inconclusive);
        report.note("no inverse available; hit-or-miss cross-check skipped");
        return finish(report, start);
    }
    let frac = hits.iter().filter(|h| **h == Some(true)).count() as f64 / n;
    let hm_est = box_vol * frac;
    let hm_se = box_vol * (frac * (1.0 - frac) / n).sqrt();
    report.detail("hit_or_miss_estimate", hm_est);
    report.detail("hit_or_miss_se", hm_se);
    report.tolerance = 3.0 * hm_se / vol;
    report.margin = report.margin.max((hm_est - vol).abs() / vol);
    if (hm_est - vol).abs() > 3.0 * hm_se.max(1e-12) {
        report.fail(Witness::new(vec![], format!("hit-or-miss gives {hm_est} ± {hm_se} against {vol}")));
    }
    finish(report, start)
}

/// Smallest singular value of a 2×2 matrix.
pub fn min_singular_value_2x2(j: &DMatrix<f64>) -> f64 {
    let (a, b, c, d) = (j[(0, 0)], j[(0, 1)], j[(1, 0)], j[(1, 1)]);
    let s = (a + d).hypot(c - b);
    let t = (a - d).hypot(b + c);
    (s - t).abs() / 2.0
}

/// Minimum over samples of the smallest singular value of a planar map's
/// differential; passes when it is at least `1 − 1e-9`.
pub fn check_expanding(m: &MapNode, dom: &ShapeDescriptor, spec: &SampleSpec) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("expanding", "min_singular_value", EXPANDING_TOL);
    if m.dim() != 2 {
        report.verdict = Verdict::Inconclusive;
        report.note("expansion is checked for planar maps only");
        return finish(report, start);
    }
    let Some(points) = draw(dom, spec, &mut report) else { return finish(report, start) };
    let sv: Vec<_> = points.par_iter().map(|p| m.jacobian(p).map(|j| min_singular_value_2x2(&j))).collect();
    let mut worst = (f64::INFINITY, 0usize);
    for (i, s) in sv.iter().enumerate() {
        match s {
            Ok(s) if *s < worst.0 => worst = (*s, i),
            Ok(_) => {}
            Err(e) => report.inconclusive(Witness::new(vec![points[i].clone()], format!("jacobian failed: {e}"))),
        }
    }
    report.margin = worst.0;
    if worst.0 < 1.0 - EXPANDING_TOL {
        report.fail(Witness::new(vec![points[worst.1].clone()], format!("singular value {}", worst.0)));
    }
    finish(report, start)
}
