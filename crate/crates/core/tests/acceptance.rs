//! Acceptance run: one line per criterion, nonzero exit if any fails.

mod common;

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, Matrix2};
use polyembed::certify::{
    catalyst_chain, corollary1_budget, corollary2_deduce, obstruction_check, plan_theorem1, theorem1_constant,
    validate_chain, Corollary2Outcome,
};
use polyembed::geometry::{sample, standard_j, CounterRng, SampleSpec, ShapeDescriptor};
use polyembed::maps::{
    build_main_lemma_map, build_polterovich_linear, cotangent_lift, psi_eval, psi_jacobian, snake_embedding,
    strip_lift, strip_separation_region, MapNode, PeriodicDiffeo1D,
};
use polyembed::verify::{
    check_aperiodicity, check_containment, check_disk_aperiodicity, check_expanding, check_injective,
    check_lattice_avoidance, check_symplectic, check_symplectic_with, estimate_double_point_volume, LatticeQuotient,
};
use rand::Rng;

type Outcome = (bool, String);

fn disk_points(rho: f64, n: usize, seed: u64) -> Vec<[f64; 2]> {
    let d = ShapeDescriptor::disk(rho).unwrap();
    sample(&d, &SampleSpec::uniform(n, seed))
        .unwrap()
        .iter()
        .map(|p| [p.coords()[0], p.coords()[1]])
        .collect()
}

fn criterion1() -> Outcome {
    const H: f64 = 1e-6;
    let (mut det_err, mut fd_err) = (0.0f64, 0.0f64);
    for rho in [1.0, 10.0, 100.0] {
        let phi = PeriodicDiffeo1D::new(rho).unwrap();
        for p in disk_points(rho, 10_000, 1) {
            let j = psi_jacobian(&phi, p);
            det_err = det_err.max((j[0][0] * j[1][1] - j[0][1] * j[1][0] - 1.0).abs());
            for c in 0..2 {
                let (mut a, mut b) = (p, p);
                a[c] += H;
                b[c] -= H;
                let (fa, fb) = (psi_eval(&phi, a), psi_eval(&phi, b));
                for r in 0..2 {
                    let fd = (fa[r] - fb[r]) / (2.0 * H);
                    fd_err = fd_err.max((fd - j[r][c]).abs() / j[r][c].abs().max(1.0));
                }
            }
        }
    }
    (det_err <= 1e-10 && fd_err <= 1e-6, format!("max |det-1| = {det_err:.1e}, max FD gap = {fd_err:.1e}"))
}

fn criterion2() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for rho in [1.0, 10.0] {
        let r = check_lattice_avoidance(&PeriodicDiffeo1D::new(rho).unwrap(), 1_000_000, 2);
        ok &= r.passed();
        parts.push(format!(
            "rho={rho}: min lattice dist {:.2e}, integer-fiber y in [{:.5}, {:.5}]",
            r.margin, r.details["integer_fiber_y_min"], r.details["integer_fiber_y_max"]
        ));
    }
    (ok, parts.join("; "))
}

fn criterion3() -> Outcome {
    let r = check_disk_aperiodicity(&PeriodicDiffeo1D::new(1.0).unwrap(), 1000, 1000, 3);
    let (dx, dy) = (r.details["max_abs_dx"], r.details["max_abs_dy_same_x"]);
    let ok = r.margin > 1e-3 && dx <= 2.0 / 3.0 + 2e-4 && dy <= 20.0 / 27.0 + 1e-6;
    (ok, format!("min nonzero-lattice dist {:.3}, max |dx| {dx:.6}, max same-x |dy| {dy:.6}", r.margin))
}

/// Section radius of `L(B⁴(R))` over the fiber through `z`, from `L⁻¹` alone:
/// the slice `{u : |A u + B w| < R}` is an ellipse with `M = AᵀA`.
fn section_oracle(linv: &DMatrix<f64>, radius: f64, z: &[f64]) -> (f64, f64, f64) {
    let col = |k: usize| linv.column(k).into_owned();
    let (a0, a1, b0, b1) = (col(0), col(2), col(1), col(3));
    let m = Matrix2::new(a0.dot(&a0), a0.dot(&a1), a1.dot(&a0), a1.dot(&a1));
    let bw = &b0 * z[1] + &b1 * z[3];
    let atb = nalgebra::Vector2::new(a0.dot(&bw), a1.dot(&bw));
    let minv = m.try_inverse().unwrap();
    let center = -(minv * atb);
    let d2 = bw.dot(&bw) + atb.dot(&center);
    let eig = m.symmetric_eigenvalues();
    let (lo, hi) = (eig.min(), eig.max());
    let sec = ((radius * radius - d2).max(0.0) / lo).sqrt();
    let u = nalgebra::Vector2::new(z[0], z[2]) - center;
    // Distance to the center in the metric M, scaled to the round radius.
    let rel = (u.dot(&(m * u)) / lo).sqrt();
    (sec, rel, hi / lo - 1.0)
}

fn criterion4() -> Outcome {
    let j = standard_j(2);
    let mut ok = true;
    let mut parts = Vec::new();
    for radius in [1.0 / 3.0, 1.0, 2.0] {
        let pl = build_polterovich_linear(radius).unwrap();
        let m = pl.map.matrix();
        let residual = (m.transpose() * &j * &m - &j).amax();
        let linv = m.clone().try_inverse().unwrap();
        let ball = ShapeDescriptor::ball(4, radius).unwrap();
        let (mut sec_max, mut proj_max, mut round, mut outside) = (0.0f64, 0.0f64, 0.0f64, 0usize);
        for p in sample(&ball, &SampleSpec::boundary_biased(10_000, 4)).unwrap() {
            let z = pl.map.apply(p.coords());
            let (sec, rel, ecc) = section_oracle(&linv, radius, &z);
            sec_max = sec_max.max(sec);
            round = round.max(ecc);
            outside += (rel > sec * (1.0 + 1e-9) + 1e-12) as usize;
            proj_max = proj_max.max(z[1].hypot(z[3]));
        }
        let s = pl.projection_radius;
        let r2 = radius * radius;
        let good = residual <= 1e-12
            && sec_max <= 1.0 / 3.0 + 1e-6
            && outside == 0
            && round < 1e-9
            && s < 10.0 * r2
            && s <= 72f64.sqrt() * r2 + 1e-6
            && proj_max <= s * (1.0 + 1e-12);
        ok &= good;
        parts.push(format!(
            "R={radius:.3}: residual {residual:.1e}, section {sec_max:.9}, S/R^2 {:.6}, sampled |(x2,y2)|/S {:.6}",
            s / r2,
            proj_max / s
        ));
    }
    (ok, parts.join("; "))
}

fn criterion5() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for radius in [1.0 / 3.0, 1.0, 2.0] {
        let ml = build_main_lemma_map(radius).unwrap();
        let ball = ShapeDescriptor::ball(4, radius).unwrap();
        let spec = SampleSpec::uniform(100_000, 5);
        let sym = check_symplectic_with(&ml.node, &ball, &spec, 1e-10);
        let cont = check_containment(&ml.node, &ball, &ml.node.target, &spec);
        let inj = check_injective(&ml.node, &ball, &spec, Some(LatticeQuotient::first_pair()));
        let ap = check_aperiodicity(&ml, 300, 300, 6, 0.2);
        let lattice = cont.details["factor0_min_lattice_distance"];
        let fiber = cont.details["factor1_max_radius_ratio"];
        let good = sym.passed() && cont.passed() && lattice > 0.0 && fiber < 1.0 && inj.passed() && ap.passed();
        ok &= good;
        parts.push(format!(
            "R={radius:.3}: residual {:.1e}, lattice dist {lattice:.2e}, |(x2,y2)|/10R^2 {fiber:.4}, collisions {}, margin {:.3}",
            sym.margin,
            if inj.passed() { 0 } else { inj.witnesses.len() },
            ap.margin
        ));
    }
    (ok, parts.join("; "))
}

fn criterion6() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for w in [0.05, 0.1] {
        let lift = strip_lift(w, 2.0 * w).unwrap();
        let node = MapNode::strip_lift(lift).unwrap();
        let dom = lift.domain();
        let sym = check_symplectic_with(&node, &dom, &SampleSpec::uniform(10_000, 7), 1e-12);
        let spec = SampleSpec::boundary_biased(100_000, 7);
        let cont = check_containment(&node, &dom, &strip_separation_region(w).unwrap(), &spec);
        let (mut y1, mut y2_min) = (0.0f64, f64::INFINITY);
        for p in sample(&dom, &spec).unwrap() {
            let q = lift.apply(p.coords());
            y1 = y1.max(q[2].abs());
            if p.coords()[0].abs() <= 1.0 / 6.0 {
                y2_min = y2_min.min(q[3]);
            }
        }
        let bound = w + 14.0 * w * w;
        let good = sym.passed() && cont.passed() && y1 <= bound && bound < 0.5 && y2_min > w;
        ok &= good;
        parts.push(format!(
            "w={w}: residual {:.1e}, max |y1| {y1:.5} <= {bound:.5}, min y2 on |x1|<=1/6 {y2_min:.5}, outside {}",
            sym.margin, cont.margin
        ));
    }
    (ok, parts.join("; "))
}

fn criterion7() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (l1, l2, m1, m2) in [(1.0, 1.0, 1.0, 1.0), (1.0, 40.0, 2.0, 20.0), (1.0, 100.0, 10.0, 10.0)] {
        let snake = snake_embedding([l1, l2], [m1, m2]).unwrap();
        let node = MapNode::snake(snake).unwrap();
        let dom = snake.domain();
        let grid = SampleSpec::grid(100_000);
        let exp = check_expanding(&node, &dom, &grid);
        let cont = check_containment(&node, &dom, &snake.target_box(), &grid);
        let inj = check_injective(&node, &dom, &grid, None);
        let lift = cotangent_lift(node, 1.0).unwrap();
        let ldom = lift.domain.clone();
        let lspec = SampleSpec::uniform(5_000, 8);
        let sym = check_symplectic(&lift, &ldom, &lspec);
        let mut norm_ratio = 0.0f64;
        for p in sample(&ldom, &lspec).unwrap() {
            let q = lift.eval(p.coords()).unwrap();
            let (a, b) = (p.coords()[2].hypot(p.coords()[3]), q[2].hypot(q[3]));
            if a > 0.0 {
                norm_ratio = norm_ratio.max(b / a);
            }
        }
        let good = exp.passed() && cont.passed() && inj.passed() && sym.passed() && norm_ratio <= 1.0 + 1e-9;
        ok &= good;
        parts.push(format!(
            "({l1},{l2},{m1},{m2}): min sv {:.6}, outside {}, collisions {}, lift residual {:.1e}, fiber ratio {norm_ratio:.6}",
            exp.margin,
            cont.margin,
            if inj.passed() { 0 } else { inj.witnesses.len() },
            sym.margin
        ));
    }
    (ok, parts.join("; "))
}

fn pd(r: &[f64]) -> ShapeDescriptor {
    ShapeDescriptor::polydisk(r).unwrap()
}

fn criterion8() -> Outcome {
    let mut bad = Vec::new();
    let mut constants = Vec::new();
    for n in 2..=5 {
        let mut seen: Option<f64> = None;
        for seed in 0..200 {
            let (p, q) = common::feasible(1000 + seed, n);
            match plan_theorem1(&pd(&p), &pd(&q)) {
                Ok(plan) => {
                    if !validate_chain(std::slice::from_ref(&plan.claim)).passed() {
                        bad.push(format!("n={n} seed={seed}: chain invalid"));
                    }
                    let c = plan.claim.constant();
                    if seen.is_some_and(|s| s != c) || c != plan.constant {
                        bad.push(format!("n={n} seed={seed}: constant {c}"));
                    }
                    seen = Some(c);
                }
                Err(e) => bad.push(format!("n={n} seed={seed}: rejected feasible instance: {e}")),
            }
            let (p, q, nonsqueeze) = common::infeasible(2000 + seed, n);
            let want = if nonsqueeze { "non-squeezing" } else { "volume" };
            match plan_theorem1(&pd(&p), &pd(&q)) {
                Err(e) if e.to_string().contains(want) => {}
                other => bad.push(format!("n={n} seed={seed}: expected a {want} rejection, got {other:?}")),
            }
        }
        constants.push(format!("C({n})={}", seen.unwrap_or(f64::NAN)));
        debug_assert_eq!(seen, Some(theorem1_constant(n)));
    }
    let detail = if bad.is_empty() {
        format!("1600 instances, {}", constants.join(", "))
    } else {
        format!("{} problems, first: {}", bad.len(), bad[0])
    };
    (bad.is_empty(), detail)
}

fn criterion9() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for delta in [0.05, 0.01] {
        let chain = catalyst_chain(delta).unwrap();
        let valid = validate_chain(std::slice::from_ref(&chain)).passed();
        let v = obstruction_check(&chain.source, &chain.target).unwrap();
        let (a, b) = v.partial(2).unwrap();
        let exceeds = a > b;
        ok &= valid && exceeds;
        parts.push(format!("delta={delta}: chain valid {valid}, R1R2 = {a} vs R'1R'2 = {b}, exceeds {exceeds}"));
    }
    (ok, parts.join("; "))
}

fn criterion10() -> Outcome {
    let grid: Vec<f64> = (0..20).map(|k| 0.1 + 0.1 * k as f64).collect();
    let mut mismatches = 0;
    for eps in [1.0, 0.1, 0.01] {
        for &w in &grid {
            for &r in &grid {
                let v = corollary2_deduce(eps, w, r).unwrap();
                let contradiction = v.outcome == Corollary2Outcome::Contradiction;
                mismatches += (contradiction != (w > r) || v.report().passed() == contradiction) as usize;
            }
        }
    }
    let mut budget_ok = true;
    let mut parts = Vec::new();
    let mut rng = CounterRng::new(10, 0);
    for eps in [0.5, 0.05, 0.005] {
        let fiber = ShapeDescriptor::disk(rng.random_range(0.5..3.0)).unwrap();
        let model = corollary1_budget(eps, fiber.volume().unwrap()).unwrap();
        let r = estimate_double_point_volume(&model, &fiber, &SampleSpec::uniform(400_000, 11), Some(eps));
        budget_ok &= r.passed();
        parts.push(format!("eps={eps}: exact {:.3e} est {:.3e} se {:.1e}", r.details["exact"], r.margin, r.details["standard_error"]));
    }
    (mismatches == 0 && budget_ok, format!("{mismatches}/1200 corollary-2 mismatches; {}", parts.join(", ")))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 10] = [
        ("psi symplecticity", 5, criterion1),
        ("property 1", 10, criterion2),
        ("property 2", 20, criterion3),
        ("polterovich linear map", 10, criterion4),
        ("main lemma end-to-end", 30, criterion5),
        ("strip lift", 10, criterion6),
        ("snake and cotangent lift", 30, criterion7),
        ("polydisk chain planner", 20, criterion8),
        ("catalyst certificate", 5, criterion9),
        ("corollaries", 10, criterion10),
    ];
    let mut failed = Vec::new();
    for (k, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = run();
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(*budget);
        let pass = ok && in_time;
        println!(
            "criterion {:>2} {name}: {} ({detail}; {:.2}s of {budget}s)",
            k + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        if !pass {
            failed.push(k + 1);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
