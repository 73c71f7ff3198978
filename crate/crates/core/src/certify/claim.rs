use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::ShapeDescriptor;

/// Ordered multiplicative constants of a claim chain.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConstantLedger {
    pub entries: Vec<(String, f64)>,
}

impl ConstantLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(label: &str, constant: f64) -> Self {
        Self { entries: vec![(label.to_string(), constant)] }
    }

    pub fn push(&mut self, label: &str, constant: f64) {
        self.entries.push((label.to_string(), constant));
    }

    pub fn extend(&mut self, other: &ConstantLedger) {
        self.entries.extend(other.entries.iter().cloned());
    }

    pub fn product(&self) -> f64 {
        self.entries.iter().map(|(_, c)| c).product()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CitedTag {
    TraynorProp1,
    MainLemma,
    Lemma31,
    NonSqueezingAxiom,
}

impl CitedTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CitedTag::TraynorProp1 => "Traynor-Prop1",
            CitedTag::MainLemma => "MainLemma",
            CitedTag::Lemma31 => "Lemma3.1",
            CitedTag::NonSqueezingAxiom => "NonSqueezingAxiom",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::TraynorProp1, Self::MainLemma, Self::Lemma31, Self::NonSqueezingAxiom]
            .into_iter()
            .find(|t| t.as_str() == s)
    }
}

impl fmt::Display for CitedTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Justification {
    /// A map descriptor whose domain is the source and whose image lies in the target.
    ExplicitMap { descriptor: String },
    /// Source is a subset of target, possibly after permuting factors.
    Inclusion,
    /// `factor · base.source ↪ factor · base.target`.
    Scaling { factor: f64, base: Box<EmbeddingClaim> },
    /// Steps applied in order; each target is the next source.
    Composition { steps: Vec<EmbeddingClaim> },
    /// Two realizations of a surface of the same area are symplectomorphic.
    MoserEquivalence { areas: [f64; 2], realizations: [String; 2] },
    CitedResult { tag: CitedTag, params: BTreeMap<String, f64> },
    /// Assumed for the sake of contradiction.
    Hypothesis,
}

impl Justification {
    pub fn rule_name(&self) -> &'static str {
        match self {
            Justification::ExplicitMap { .. } => "explicit-map",
            Justification::Inclusion => "inclusion",
            Justification::Scaling { .. } => "scaling",
            Justification::Composition { .. } => "composition",
            Justification::MoserEquivalence { .. } => "moser",
            Justification::CitedResult { .. } => "cited",
            Justification::Hypothesis => "hypothesis",
        }
    }
}

/// "`source` symplectically embeds in `target`", with its reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingClaim {
    pub source: ShapeDescriptor,
    pub target: ShapeDescriptor,
    pub justification: Justification,
    pub ledger: ConstantLedger,
    /// Explicit maps backing a cited result, as map descriptors.
    #[serde(default)]
    pub evidence: Vec<String>,
}

impl EmbeddingClaim {
    pub fn new(source: ShapeDescriptor, target: ShapeDescriptor, justification: Justification, ledger: ConstantLedger) -> Self {
        Self { source, target, justification, ledger, evidence: Vec::new() }
    }

    pub fn inclusion(source: ShapeDescriptor, target: ShapeDescriptor) -> Self {
        Self::new(source, target, Justification::Inclusion, ConstantLedger::new())
    }

    pub fn cited(
        source: ShapeDescriptor,
        target: ShapeDescriptor,
        tag: CitedTag,
        params: &[(&str, f64)],
        ledger: ConstantLedger,
    ) -> Self {
        let params = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        Self::new(source, target, Justification::CitedResult { tag, params }, ledger)
    }

    /// Composition of `steps`; the ledger concatenates the step ledgers.
    pub fn composition(steps: Vec<EmbeddingClaim>) -> Self {
        let mut ledger = ConstantLedger::new();
        for s in &steps {
            ledger.extend(&s.ledger);
        }
        let source = steps.first().expect("nonempty composition").source.clone();
        let target = steps.last().expect("nonempty composition").target.clone();
        Self::new(source, target, Justification::Composition { steps }, ledger)
    }

    pub fn scaled(base: EmbeddingClaim, factor: f64) -> Self {
        let ledger = base.ledger.clone();
        Self::new(
            base.source.scaled(factor),
            base.target.scaled(factor),
            Justification::Scaling { factor, base: Box::new(base) },
            ledger,
        )
    }

    pub fn constant(&self) -> f64 {
        self.ledger.product()
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        match &self.justification {
            Justification::CitedResult { params, .. } => params.get(key).copied(),
            _ => None,
        }
    }
}
