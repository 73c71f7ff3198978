use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Factor, ShapeDescriptor};
use crate::maps::StripImmersionModel;
use crate::verify::VerificationReport;

use super::claim::{CitedTag, ConstantLedger, EmbeddingClaim, Justification};
use super::validate::validate_chain;
use super::rules::{inclusion_claim, lemma31_claim, main_lemma_claim, moser_claim};

/// `B²(δ) × B²(1) × B²(1) ↪ B²(2δ) × B²(10δ) × R²` for `0 < δ <= 1/10`.
pub fn catalyst_chain(delta: f64) -> Result<EmbeddingClaim> {
    if !(delta > 0.0 && delta <= 0.1) {
        return Err(Error::hypothesis(format!("catalyst needs 0 < delta <= 1/10, got {delta}")));
    }
    let source = ShapeDescriptor::polydisk(&[delta, 1.0, 1.0])?;
    let ball = ShapeDescriptor::new(vec![
        Factor::Disk2 { radius: delta },
        Factor::Ball { dim: 4, radius: std::f64::consts::SQRT_2 },
    ])?;
    let include = inclusion_claim(source, ball.clone())?;
    let lemma = main_lemma_claim(&ball, 1, 10.0 * delta)?;
    let moser = moser_claim(&lemma.target, 100.0 * delta * delta)?;
    let split = lemma31_claim(&moser.target, 0, 1)?;
    let target = ShapeDescriptor::new(vec![
        Factor::Disk2 { radius: 2.0 * delta },
        Factor::Disk2 { radius: 10.0 * delta },
        Factor::FullPlane,
    ])?;
    let forget = inclusion_claim(split.target.clone(), target)?;
    Ok(EmbeddingClaim::composition(vec![include, lemma, moser, split, forget]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Corollary2Outcome {
    Contradiction,
    Consistent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corollary2Verdict {
    pub outcome: Corollary2Outcome,
    /// `B⁶(W) ↪ B²(R) × R⁴`, through the hypothesis.
    pub chain: EmbeddingClaim,
    /// Non-squeezing applied to the chain's endpoints.
    pub axiom: EmbeddingClaim,
    /// Radius of a known embedding of the hypothesis source, `sqrt(2) W`.
    pub known_upper_radius: f64,
}

impl Corollary2Verdict {
    /// Validates the chain and the axiom separately; the bundle fails exactly on contradiction.
    pub fn report(&self) -> VerificationReport {
        let mut chain = validate_chain(std::slice::from_ref(&self.chain));
        chain.check = "corollary2_chain".into();
        let mut axiom = validate_chain(std::slice::from_ref(&self.axiom));
        axiom.check = "corollary2_axiom".into();
        VerificationReport::bundle("corollary2", vec![chain, axiom])
    }
}

/// Refutes `Σ(ε) × B²(W) ↪ B²(R) × R²` whenever `W > R`, for every `ε > 0`.
pub fn corollary2_deduce(epsilon: f64, w: f64, cylinder_radius: f64) -> Result<Corollary2Verdict> {
    if !(epsilon > 0.0 && w > 0.0 && cylinder_radius > 0.0) {
        return Err(Error::hypothesis("corollary 2 needs epsilon, W and R positive"));
    }
    let disk = |r: f64| Factor::Disk2 { radius: r };
    let ball6 = ShapeDescriptor::ball(6, w)?;
    let split = ShapeDescriptor::new(vec![disk(w), Factor::Ball { dim: 4, radius: w }])?;
    let include = inclusion_claim(ball6.clone(), split.clone())?;
    let lemma = main_lemma_claim(&split, 1, epsilon.sqrt())?;
    let hyp_source = ShapeDescriptor::new(vec![Factor::Surface { area: epsilon }, disk(w), Factor::FullPlane])?;
    let forget = inclusion_claim(lemma.target.clone(), hyp_source.clone())?;
    let hyp_target = ShapeDescriptor::new(vec![disk(cylinder_radius), Factor::FullPlane, Factor::FullPlane])?;
    let hypothesis = EmbeddingClaim::new(hyp_source, hyp_target, Justification::Hypothesis, ConstantLedger::new());
    let chain = EmbeddingClaim::composition(vec![include, lemma, forget, hypothesis]);
    let axiom = EmbeddingClaim::cited(
        chain.source.clone(),
        chain.target.clone(),
        CitedTag::NonSqueezingAxiom,
        &[("source_radius", w), ("cylinder_radius", cylinder_radius)],
        ConstantLedger::new(),
    );
    let outcome = if w > cylinder_radius {
        Corollary2Outcome::Contradiction
    } else {
        Corollary2Outcome::Consistent
    };
    Ok(Corollary2Verdict { outcome, chain, axiom, known_upper_radius: std::f64::consts::SQRT_2 * w })
}

/// Strip immersion for a double-point budget `ε` over a fiber of volume `fiber_volume`.
///
/// Double points have volume `4w² · fiber_volume`; `w` is chosen so this is `ε/2`.
pub fn corollary1_budget(epsilon: f64, fiber_volume: f64) -> Result<StripImmersionModel> {
    if !(epsilon > 0.0 && fiber_volume > 0.0 && fiber_volume.is_finite()) {
        return Err(Error::hypothesis("corollary 1 needs epsilon > 0 and a bounded fiber"));
    }
    let w = (0.5 * (epsilon / (2.0 * fiber_volume)).sqrt()).min(0.1);
    StripImmersionModel::new(w)
}
