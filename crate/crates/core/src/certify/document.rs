//! Line-oriented certificate text for claim chains.
//!
//! ```text
//! polydisk-certificate 1
//! begin claim
//! source polydisk(1, 2)
//! target polydisk(3, 6)
//! rule cited
//! tag Traynor-Prop1
//! param lambda 1
//! ledger 3 Prop1
//! end
//! ```
//!
//! Nested `begin claim` blocks are the base of a scaling or the steps of a
//! composition. Floats use shortest round-trip formatting.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::parse_shape;

use super::claim::{CitedTag, ConstantLedger, EmbeddingClaim, Justification};

pub const CERTIFICATE_HEADER: &str = "polydisk-certificate 1";

fn write_claim(out: &mut String, c: &EmbeddingClaim, depth: usize) {
    let pad = "  ".repeat(depth);
    let mut line = |s: String| {
        let _ = writeln!(out, "{pad}{s}");
    };
    line("begin claim".into());
    line(format!("source {}", c.source));
    line(format!("target {}", c.target));
    line(format!("rule {}", c.justification.rule_name()));
    let quoted = |s: &str| serde_json::to_string(s).expect("strings serialize");
    match &c.justification {
        Justification::Scaling { factor, .. } => line(format!("factor {factor}")),
        Justification::CitedResult { tag, params } => {
            line(format!("tag {tag}"));
            for (k, v) in params {
                line(format!("param {k} {v}"));
            }
        }
        Justification::MoserEquivalence { areas, realizations } => {
            line(format!("areas {} {}", areas[0], areas[1]));
            line(format!("realizations {} {}", realizations[0], realizations[1]));
        }
        Justification::ExplicitMap { descriptor } => line(format!("map {}", quoted(descriptor))),
        _ => {}
    }
    for e in &c.evidence {
        line(format!("evidence {}", quoted(e)));
    }
    for (label, v) in &c.ledger.entries {
        line(format!("ledger {v} {label}"));
    }
    match &c.justification {
        Justification::Scaling { base, .. } => write_claim(out, base, depth + 1),
        Justification::Composition { steps } => steps.iter().for_each(|s| write_claim(out, s, depth + 1)),
        _ => {}
    }
    let pad = "  ".repeat(depth);
    let _ = writeln!(out, "{pad}end");
}

pub fn write_certificate(claims: &[EmbeddingClaim]) -> String {
    let mut out = format!("{CERTIFICATE_HEADER}\n");
    for c in claims {
        write_claim(&mut out, c, 0);
    }
    out
}

struct Lines<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Option<(usize, &'a str)> {
        let item = self.items.get(self.pos).copied();
        self.pos += 1;
        item
    }

    fn peek(&self) -> Option<&'a str> {
        self.items.get(self.pos).map(|x| x.1)
    }
}

fn num(line: usize, tok: &str) -> Result<f64> {
    tok.parse()
        .map_err(|_| Error::parse(tok, format!("line {line}: expected a number")))
}

fn parse_claim(lines: &mut Lines) -> Result<EmbeddingClaim> {
    let (mut source, mut target, mut rule) = (None, None, None);
    let (mut factor, mut tag, mut areas, mut realizations, mut map) = (None, None, None, None, None);
    let mut params = BTreeMap::new();
    let mut ledger = ConstantLedger::new();
    let mut evidence = Vec::new();
    let mut children = Vec::new();
    loop {
        let Some((no, text)) = lines.next() else {
            return Err(Error::parse("", "unterminated claim"));
        };
        let (key, rest) = text.split_once(' ').unwrap_or((text, ""));
        let unquote = |s: &str| -> Result<String> {
            serde_json::from_str(s).map_err(|e| Error::parse(s, format!("line {no}: {e}")))
        };
        match key {
            "end" => break,
            "begin" if rest == "claim" => children.push(parse_claim(lines)?),
            "source" => source = Some(parse_shape(rest)?),
            "target" => target = Some(parse_shape(rest)?),
            "rule" => rule = Some(rest.to_string()),
            "factor" => factor = Some(num(no, rest)?),
            "tag" => tag = Some(CitedTag::parse(rest).ok_or_else(|| Error::parse(rest, format!("line {no}: unknown tag")))?),
            "param" => {
                let (k, v) = rest.split_once(' ').ok_or_else(|| Error::parse(rest, format!("line {no}: param needs a value")))?;
                params.insert(k.to_string(), num(no, v)?);
            }
            "areas" | "realizations" => {
                let (a, b) = rest.split_once(' ').ok_or_else(|| Error::parse(rest, format!("line {no}: needs two values")))?;
                if key == "areas" {
                    areas = Some([num(no, a)?, num(no, b)?]);
                } else {
                    realizations = Some([a.to_string(), b.to_string()]);
                }
            }
            "map" => map = Some(unquote(rest)?),
            "evidence" => evidence.push(unquote(rest)?),
            "ledger" => {
                let (v, label) = rest.split_once(' ').unwrap_or((rest, ""));
                ledger.push(label, num(no, v)?);
            }
            _ => return Err(Error::parse(text, format!("line {no}: unknown key"))),
        }
    }
    let missing = |what: &str| Error::parse(what, "claim is missing this field");
    let rule = rule.ok_or_else(|| missing("rule"))?;
    let justification = match rule.as_str() {
        "inclusion" => Justification::Inclusion,
        "hypothesis" => Justification::Hypothesis,
        "explicit-map" => Justification::ExplicitMap { descriptor: map.ok_or_else(|| missing("map"))? },
        "scaling" => {
            let base = children.pop().filter(|_| children.is_empty()).ok_or_else(|| missing("base claim"))?;
            Justification::Scaling { factor: factor.ok_or_else(|| missing("factor"))?, base: Box::new(base) }
        }
        "composition" => Justification::Composition { steps: std::mem::take(&mut children) },
        "moser" => Justification::MoserEquivalence {
            areas: areas.ok_or_else(|| missing("areas"))?,
            realizations: realizations.ok_or_else(|| missing("realizations"))?,
        },
        "cited" => Justification::CitedResult { tag: tag.ok_or_else(|| missing("tag"))?, params },
        other => return Err(Error::parse(other, "unknown rule")),
    };
    if !children.is_empty() {
        return Err(Error::parse(&rule, "only scaling and composition claims nest"));
    }
    let mut claim = EmbeddingClaim::new(
        source.ok_or_else(|| missing("source"))?,
        target.ok_or_else(|| missing("target"))?,
        justification,
        ledger,
    );
    claim.evidence = evidence;
    Ok(claim)
}

pub fn parse_certificate(text: &str) -> Result<Vec<EmbeddingClaim>> {
    let items: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let mut lines = Lines { items, pos: 0 };
    match lines.next() {
        Some((_, CERTIFICATE_HEADER)) => {}
        other => {
            return Err(Error::parse(other.map_or("", |x| x.1), "expected the certificate header"));
        }
    }
    let mut claims = Vec::new();
    while let Some(text) = lines.peek() {
        if text != "begin claim" {
            return Err(Error::parse(text, "expected `begin claim`"));
        }
        lines.next();
        claims.push(parse_claim(&mut lines)?);
    }
    Ok(claims)
}
