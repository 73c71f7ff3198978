//! Chains `P ↪ C(n) · P′` for polydisks satisfying the two necessary conditions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Factor, ShapeDescriptor};

use super::claim::EmbeddingClaim;
use super::obstruction::obstruction_check;
use super::rules::{inclusion_claim, prop1_step, prop2_step, radii, sorted, PROP1_CONSTANT, PROP2_CONSTANT, RULE_TOL};

/// `C(n) = 3^(n-2) · 3^(n-1) · 180^(n-2)`: the product of the three phases.
pub fn theorem1_constant(n: usize) -> f64 {
    assert!(n >= 2, "the constant is defined for n >= 2");
    PROP1_CONSTANT.powi(2 * n as i32 - 3) * PROP2_CONSTANT.powi(n as i32 - 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    /// Equalize `R_2, .., R_n` with Prop1.
    Equalize,
    /// Grow `R_1` toward `R′_1` with Prop1.
    Grow,
    /// Redistribute `R_2, .., R_n` toward `P′` with Prop2.
    Redistribute,
    /// Final inclusion into `C(n) · P′`.
    Include,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanStep {
    pub phase: Phase,
    /// Scaled claim as it sits in the chain.
    pub claim: EmbeddingClaim,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremPlan {
    pub source: ShapeDescriptor,
    pub target: ShapeDescriptor,
    pub constant: f64,
    pub steps: Vec<PlanStep>,
    /// The whole chain as a single composed claim.
    pub claim: EmbeddingClaim,
}

impl TheoremPlan {
    pub fn phase_len(&self, phase: Phase) -> usize {
        self.steps.iter().filter(|s| s.phase == phase).count()
    }
}

struct Chain {
    steps: Vec<PlanStep>,
    scale: f64,
    current: ShapeDescriptor,
}

impl Chain {
    fn push(&mut self, phase: Phase, claim: EmbeddingClaim, lambda: f64) -> Result<()> {
        let factor = claim.constant();
        let claim = EmbeddingClaim::scaled(claim, self.scale);
        self.scale *= factor;
        self.current = ShapeDescriptor::polydisk(&radii(&claim.target)?)?.scaled(1.0 / self.scale);
        self.steps.push(PlanStep { phase, claim, lambda });
        Ok(())
    }

    fn radii(&self) -> Vec<f64> {
        sorted(radii(&self.current).expect("chain shapes are polydisks"))
    }
}

/// Index of `value` in the sorted radii, skipping `avoid`.
fn index_of(r: &[f64], value: f64, avoid: &[usize]) -> usize {
    (0..r.len())
        .filter(|k| !avoid.contains(k))
        .min_by(|&a, &b| (r[a] - value).abs().total_cmp(&(r[b] - value).abs()))
        .expect("nonempty radii")
}

/// Plans `P ↪ C(n) · P′` in three phases of Prop1/Prop1/Prop2 steps.
///
/// Rejects exactly when `R_1 > R′_1` or `∏R_i > ∏R′_i`, naming the failed condition.
pub fn plan_theorem1(p: &ShapeDescriptor, q: &ShapeDescriptor) -> Result<TheoremPlan> {
    let r = sorted(radii(p)?);
    let rq = sorted(radii(q)?);
    let n = r.len();
    if n < 2 {
        return Err(Error::hypothesis("the planner needs n >= 2"));
    }
    if r.iter().any(|x| !x.is_finite() || *x <= 0.0) {
        return Err(Error::hypothesis(format!("source {p} must be a bounded polydisk")));
    }
    let verdict = obstruction_check(p, q)?;
    if let Some(reason) = verdict.violation() {
        return Err(Error::hypothesis(reason));
    }
    let source = ShapeDescriptor::polydisk(&r)?;
    let mut chain = Chain { steps: Vec::new(), scale: 1.0, current: source.clone() };

    // Phase (i): n-2 steps, each pins at least one of R_2..R_n to their geometric mean.
    let g = (r[1..].iter().map(|x| x.ln()).sum::<f64>() / (n - 1) as f64).exp();
    for _ in 0..n - 2 {
        let cur = chain.radii();
        let (i, j) = (1, n - 1);
        let cap = (cur[j] / cur[i]).sqrt();
        let lambda = (g / cur[i]).min(cur[j] / g).clamp(1.0, cap.max(1.0));
        let claim = prop1_step(&chain.current, i, j, lambda)?;
        chain.push(Phase::Equalize, claim, lambda)?;
    }

    // Phase (ii): n-1 steps growing R_1 by mu^(1/(n-1)) against each other factor.
    let total: f64 = r.iter().map(|x| x.ln()).sum();
    let t1 = rq[0].min((total / n as f64).exp()).max(r[0]);
    let lambda = (t1 / r[0]).powf(1.0 / (n - 1) as f64);
    for _ in 0..n - 1 {
        let cur = chain.radii();
        let claim = prop1_step(&chain.current, 0, n - 1, lambda.min((cur[n - 1] / cur[0]).sqrt()))?;
        chain.push(Phase::Grow, claim, lambda)?;
    }

    // Phase (iii): targets s_k = t1^(1-θ) R′_k^θ with the product of R_2..R_n preserved.
    let cur = chain.radii();
    let thin = cur[0];
    let keep: f64 = cur[1..].iter().map(|x| x.ln()).sum();
    let cap = (keep - (n as f64 - 2.0) * thin.ln()).exp();
    let goal: Vec<f64> = rq[1..].iter().map(|x| x.min(cap)).collect();
    let log_prod = |theta: f64| -> f64 {
        goal.iter().map(|x| (1.0 - theta) * thin.ln() + theta * x.ln()).sum()
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if log_prod(mid) < keep {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = hi;
    let s: Vec<f64> = goal.iter().map(|x| (thin.ln() * (1.0 - theta) + x.ln() * theta).exp()).collect();
    let mut v = cur[1..].to_vec();
    for _ in 0..n.saturating_sub(2) {
        let shrink = (0..v.len())
            .filter(|&k| v[k] > s[k] * (1.0 + RULE_TOL))
            .max_by(|&a, &b| (v[a] / s[a]).total_cmp(&(v[b] / s[b])));
        let grow = (0..v.len())
            .filter(|&k| v[k] < s[k] * (1.0 - RULE_TOL))
            .min_by(|&a, &b| (v[a] / s[a]).total_cmp(&(v[b] / s[b])));
        let (a, b, lambda) = match (shrink, grow) {
            (Some(a), Some(b)) => (a, b, (v[a] / s[a]).min(s[b] / v[b])),
            _ => (0, v.len() - 1, 1.0),
        };
        let (a, b) = if v[a] <= v[b] { (a, b) } else { (b, a) };
        let cur = chain.radii();
        let i = index_of(&cur, v[a], &[0]);
        let j = index_of(&cur, v[b], &[0, i]);
        let claim = prop2_step(&chain.current, i, j, lambda)?;
        v[a] /= lambda;
        v[b] *= lambda;
        chain.push(Phase::Redistribute, claim, lambda)?;
    }

    let constant = theorem1_constant(n);
    let target = ShapeDescriptor::new(
        rq.iter()
            .map(|&r| if r.is_finite() { Factor::Disk2 { radius: r } } else { Factor::FullPlane })
            .collect(),
    )?
    .scaled(constant);
    let last = chain.current.scaled(chain.scale);
    chain.steps.push(PlanStep {
        phase: Phase::Include,
        claim: inclusion_claim(last, target.clone())?,
        lambda: 1.0,
    });
    let mut claim = EmbeddingClaim::composition(chain.steps.iter().map(|s| s.claim.clone()).collect());
    claim.source = source.clone();
    debug_assert!((claim.constant() / constant - 1.0).abs() < 1e-9);
    Ok(TheoremPlan { source, target, constant, steps: chain.steps, claim })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        assert_eq!(theorem1_constant(2), 3.0);
        assert_eq!(theorem1_constant(3), 27.0 * 180.0);
    }

    #[test]
    fn trivial_plan() {
        let p = ShapeDescriptor::polydisk(&[1.0, 2.0]).unwrap();
        let plan = plan_theorem1(&p, &p).unwrap();
        assert_eq!(plan.constant, 3.0);
        assert_eq!(plan.phase_len(Phase::Grow), 1);
        assert!((plan.steps[0].lambda - 1.0).abs() < 1e-15);
    }
}
