#![allow(dead_code)]

use polyembed::geometry::CounterRng;
use rand::Rng;

/// Log-uniform radii in `[e^-2, e^2]`, sorted.
pub fn radii(rng: &mut CounterRng, n: usize) -> Vec<f64> {
    let mut r: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0f64).exp()).collect();
    r.sort_by(f64::total_cmp);
    r
}

/// `(P, P′)` with `R_1 <= R′_1` and `∏R <= ∏R′`; every fourth instance is tight.
pub fn feasible(seed: u64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut rng = CounterRng::new(seed, n as u64);
    let p = radii(&mut rng, n);
    let mut q = radii(&mut rng, n);
    let vol = (p.iter().product::<f64>() / q.iter().product::<f64>()).powf(1.0 / n as f64);
    let k = 1f64.max(p[0] / q[0]).max(vol);
    let slack = if seed % 4 == 0 { 1.0 } else { rng.random_range(0.0..0.5f64).exp() };
    q.iter_mut().for_each(|x| *x *= k * slack);
    if seed % 8 == 0 {
        q = p.clone();
    }
    (p, q)
}

/// Violates exactly one condition; the flag says which (`true` = non-squeezing).
pub fn infeasible(seed: u64, n: usize) -> (Vec<f64>, Vec<f64>, bool) {
    let mut rng = CounterRng::new(seed ^ 0xdead_beef, n as u64);
    let p = radii(&mut rng, n);
    let shrink = rng.random_range(0.05..0.9f64);
    if seed % 2 == 0 {
        // R′_1 < R_1 with a large volume.
        let mut q: Vec<f64> = p.iter().map(|x| x * 10.0).collect();
        q[0] = p[0] * shrink;
        q.sort_by(f64::total_cmp);
        (p, q, true)
    } else {
        // R′_1 = R_1 but the largest radius shrinks.
        let mut q = p.clone();
        q[n - 1] = (p[n - 1] * shrink).max(p[0]);
        (p, q, false)
    }
}
