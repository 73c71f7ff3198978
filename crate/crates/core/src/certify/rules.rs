//! Constructors for the individual embedding rules.

use crate::error::{Error, Result};
use crate::geometry::{includes, Factor, ShapeDescriptor};

use super::claim::{CitedTag, ConstantLedger, EmbeddingClaim, Justification};

/// Relative slack for radius and constant comparisons.
pub const RULE_TOL: f64 = 1e-12;

/// Prop1 multiplies every radius by this.
pub const PROP1_CONSTANT: f64 = 3.0;
/// Prop2 multiplies every radius by this.
pub const PROP2_CONSTANT: f64 = 180.0;
/// Fiber-radius factor of the main lemma.
pub const MAIN_LEMMA_CONSTANT: f64 = 10.0;
/// Lemma 3.1 needs `W / sqrt(area) <= 1/10`.
pub const LEMMA31_MAX_RATIO: f64 = 0.1;

pub(crate) fn le(a: f64, b: f64) -> bool {
    a <= b * (1.0 + RULE_TOL)
}

pub(crate) fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= RULE_TOL * a.abs().max(b.abs()) || a == b
}

fn disk(r: f64) -> Factor {
    Factor::Disk2 { radius: r }
}

pub(crate) fn radii(shape: &ShapeDescriptor) -> Result<Vec<f64>> {
    shape
        .polydisk_radii()
        .ok_or_else(|| Error::InvalidShape(format!("{shape} is not a polydisk")))
}

pub(crate) fn sorted(mut r: Vec<f64>) -> Vec<f64> {
    r.sort_by(f64::total_cmp);
    r
}

fn heap_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    out.push(p.clone());
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            out.push(p.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// `inner ⊆ outer` after some permutation of the factors of `inner`.
///
/// Permuting conjugate pairs is a linear symplectomorphism, so this is a valid
/// inclusion rule for claims. At most 6 factors are permuted exhaustively.
pub fn includes_up_to_permutation(outer: &ShapeDescriptor, inner: &ShapeDescriptor) -> Option<bool> {
    if outer.dim() != inner.dim() {
        return Some(false);
    }
    if let (Some(a), Some(b)) = (outer.polydisk_radii(), inner.polydisk_radii()) {
        let (a, b) = (sorted(a), sorted(b));
        return Some(a.iter().zip(&b).all(|(o, i)| le(*i, *o)));
    }
    let direct = includes(outer, inner);
    if direct == Some(true) || inner.factors().len() > 6 {
        return direct;
    }
    let mut all_false = true;
    for perm in heap_permutations(inner.factors().len()) {
        let factors = perm.iter().map(|&k| inner.factors()[k].clone()).collect();
        let candidate = ShapeDescriptor::new(factors).ok()?;
        match includes(outer, &candidate) {
            Some(true) => return Some(true),
            Some(false) => {}
            None => all_false = false,
        }
    }
    if all_false {
        Some(false)
    } else {
        None
    }
}

pub fn inclusion_claim(source: ShapeDescriptor, target: ShapeDescriptor) -> Result<EmbeddingClaim> {
    match includes_up_to_permutation(&target, &source) {
        Some(true) => Ok(EmbeddingClaim::inclusion(source, target)),
        other => Err(Error::Claim(format!(
            "inclusion {source} in {target} is {}",
            if other.is_none() { "undecided" } else { "false" }
        ))),
    }
}

/// Prop1 on the radii `r_small <= r_large` of a polydisk:
/// `(.., a, .., b, ..) ↪ 3 · (.., λa, .., b/λ, ..)` for `1 <= λ <= sqrt(b/a)`.
pub fn prop1_step(p: &ShapeDescriptor, i: usize, j: usize, lambda: f64) -> Result<EmbeddingClaim> {
    let r = radii(p)?;
    if i == j || i >= r.len() || j >= r.len() {
        return Err(Error::hypothesis(format!("prop1 needs two distinct factors, got {i} and {j}")));
    }
    let (a, b) = (r[i], r[j]);
    if a > b {
        return Err(Error::hypothesis(format!("prop1 needs R_{i} <= R_{j}, got {a} > {b}")));
    }
    if !(1.0 - RULE_TOL..).contains(&lambda) || !le(lambda, (b / a).sqrt()) {
        return Err(Error::hypothesis(format!(
            "prop1 needs 1 <= lambda <= sqrt(R_j/R_i) = {}, got {lambda}",
            (b / a).sqrt()
        )));
    }
    let mut next = r.clone();
    next[i] = a * lambda;
    next[j] = b / lambda;
    let target = ShapeDescriptor::polydisk(&next)?.scaled(PROP1_CONSTANT);
    Ok(EmbeddingClaim::cited(
        p.clone(),
        target,
        CitedTag::TraynorProp1,
        &[("r_small", a), ("r_large", b), ("lambda", lambda)],
        ConstantLedger::single("Prop1", PROP1_CONSTANT),
    ))
}

/// Main lemma: the 4-ball factor at `index` of `source` becomes `Σ(s²) × B²(f)` with
/// `f = 10 max(r, s/3)² / s`. Other factors are carried along.
pub fn main_lemma_claim(source: &ShapeDescriptor, index: usize, s: f64) -> Result<EmbeddingClaim> {
    let Some(Factor::Ball { dim: 4, radius }) = source.factors().get(index) else {
        return Err(Error::hypothesis(format!("factor {index} of {source} is not a 4-ball")));
    };
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::hypothesis(format!("main lemma needs s > 0, got {s}")));
    }
    let r = *radius;
    let fiber = main_lemma_fiber(r, s);
    let mut factors = source.factors().to_vec();
    factors.splice(index..=index, [Factor::Surface { area: s * s }, disk(fiber)]);
    Ok(EmbeddingClaim::cited(
        source.clone(),
        ShapeDescriptor::new(factors)?,
        CitedTag::MainLemma,
        &[("r", r), ("s", s)],
        ConstantLedger::single("MainLemma", MAIN_LEMMA_CONSTANT),
    ))
}

/// Fiber radius of the main lemma after rescaling the surface area to `s²`.
pub fn main_lemma_fiber(r: f64, s: f64) -> f64 {
    let r_eff = r.max(s / 3.0);
    MAIN_LEMMA_CONSTANT * r_eff * r_eff / s
}

/// Both realizations of the surface of area `a` are identified.
pub fn moser_claim(shape: &ShapeDescriptor, area: f64) -> Result<EmbeddingClaim> {
    if !shape.factors().iter().any(|f| matches!(f, Factor::Surface { area: b } if close(area, *b))) {
        return Err(Error::hypothesis(format!("{shape} has no surface of area {area}")));
    }
    Ok(EmbeddingClaim::new(
        shape.clone(),
        shape.clone(),
        Justification::MoserEquivalence {
            areas: [area, area],
            realizations: ["lattice-quotient".into(), "strip-immersion".into()],
        },
        ConstantLedger::new(),
    ))
}

/// Lemma 3.1: `B²(w) × Σ(a) ↪ B²(2w) × B²(sqrt(a))` when `w / sqrt(a) <= 1/10`.
/// `disk_index` and `surface_index` locate the two factors in `source`.
pub fn lemma31_claim(source: &ShapeDescriptor, disk_index: usize, surface_index: usize) -> Result<EmbeddingClaim> {
    let f = source.factors();
    let (Some(Factor::Disk2 { radius: w }), Some(Factor::Surface { area })) = (f.get(disk_index), f.get(surface_index))
    else {
        return Err(Error::hypothesis(format!(
            "lemma 3.1 needs a disk at {disk_index} and a surface at {surface_index} in {source}"
        )));
    };
    let s = area.sqrt();
    if !le(w / s, LEMMA31_MAX_RATIO) {
        return Err(Error::hypothesis(format!(
            "lemma 3.1 needs W/sqrt(area) <= 1/10, got {}",
            w / s
        )));
    }
    let mut factors = f.to_vec();
    factors[disk_index] = disk(2.0 * w);
    factors[surface_index] = disk(s);
    Ok(EmbeddingClaim::cited(
        source.clone(),
        ShapeDescriptor::new(factors)?,
        CitedTag::Lemma31,
        &[("w", *w), ("area", *area)],
        ConstantLedger::single("Lemma3.1", 1.0),
    ))
}

/// Prop2 on the sorted polydisk `p`: with `R_1` the smallest radius,
/// `(R_1, .., R_i, .., R_j, ..) ↪ 180 · (R_1, .., R_i/λ, .., R_j λ, ..)`
/// for `R_i <= R_j` and `1 <= λ <= R_i / R_1`.
///
/// The justification is the local chain: equalize `R_i, R_j` with Prop1, include the
/// pair in a 4-ball, apply the main lemma, identify the surface, then Lemma 3.1.
pub fn prop2_step(p: &ShapeDescriptor, i: usize, j: usize, lambda: f64) -> Result<EmbeddingClaim> {
    let r = sorted(radii(p)?);
    let n = r.len();
    if n < 3 || i == 0 || j == 0 || i == j || i >= n || j >= n {
        return Err(Error::hypothesis(format!(
            "prop2 needs three distinct factors with i, j != 1, got i={i}, j={j}, n={n}"
        )));
    }
    let (r1, ri, rj) = (r[0], r[i], r[j]);
    if ri > rj {
        return Err(Error::hypothesis(format!("prop2 needs R_i <= R_j, got {ri} > {rj}")));
    }
    if !(1.0 - RULE_TOL..).contains(&lambda) || !le(lambda, ri / r1) {
        return Err(Error::hypothesis(format!(
            "prop2 needs 1 <= lambda <= R_i/R_1 = {}, got {lambda}",
            ri / r1
        )));
    }
    let others: Vec<f64> = (1..n).filter(|&k| k != i && k != j).map(|k| r[k]).collect();
    let c = PROP1_CONSTANT;
    let g = (ri * rj).sqrt();
    let carried = |scale: f64| others.iter().map(move |&o| disk(scale * o));

    // Equalize the pair; the order is (thin, pair, others).
    let mut a = vec![disk(c * r1), disk(c * g), disk(c * g)];
    a.extend(carried(c));
    let a = ShapeDescriptor::new(a)?;
    let step_a = EmbeddingClaim::cited(
        p.clone(),
        a.clone(),
        CitedTag::TraynorProp1,
        &[("r_small", ri), ("r_large", rj), ("lambda", g / ri)],
        ConstantLedger::single("Prop1", c),
    );

    let ball_r = c * std::f64::consts::SQRT_2 * g;
    let mut b = vec![disk(c * r1), Factor::Ball { dim: 4, radius: ball_r }];
    b.extend(carried(c));
    let b = ShapeDescriptor::new(b)?;
    let mut step_b = inclusion_claim(a, b.clone())?;
    // Both Prop1's 3 and the ball's sqrt(2) enter the fiber radius squared.
    step_b.ledger.push("Prop1 radius enters squared", c);
    step_b.ledger.push("ball inclusion enters squared", 2.0);

    let s = (ri / lambda).max(30.0 * r1);
    let step_c = main_lemma_claim(&b, 1, s)?;
    let step_d = moser_claim(&step_c.target, s * s)?;
    let step_e = lemma31_claim(&step_d.target, 0, 1)?;

    let mut next = r.clone();
    next[i] = ri / lambda;
    next[j] = rj * lambda;
    let target = ShapeDescriptor::polydisk(&next)?.scaled(PROP2_CONSTANT);
    let step_f = inclusion_claim(step_e.target.clone(), target)?;

    Ok(EmbeddingClaim::composition(vec![step_a, step_b, step_c, step_d, step_e, step_f]))
}
