//! Embedding claims, the rules that justify them, and chain validation.

mod claim;
mod corollary;
mod document;
mod obstruction;
mod planner;
mod rules;
mod validate;

pub use claim::{CitedTag, ConstantLedger, EmbeddingClaim, Justification};
pub use corollary::{catalyst_chain, corollary1_budget, corollary2_deduce, Corollary2Outcome, Corollary2Verdict};
pub use document::{parse_certificate, write_certificate, CERTIFICATE_HEADER};
pub use obstruction::{obstruction_check, ObstructionVerdict};
pub use planner::{plan_theorem1, theorem1_constant, Phase, PlanStep, TheoremPlan};
pub use rules::{
    includes_up_to_permutation, inclusion_claim, lemma31_claim, main_lemma_claim, main_lemma_fiber, moser_claim,
    prop1_step, prop2_step, LEMMA31_MAX_RATIO, MAIN_LEMMA_CONSTANT, PROP1_CONSTANT, PROP2_CONSTANT, RULE_TOL,
};
pub use validate::{validate_chain, EXPLICIT_MAP_SAMPLES};
