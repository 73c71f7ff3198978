use crate::geometry::{includes, Factor, SampleSpec, ShapeDescriptor};
use crate::maps::MapNode;
use crate::verify::{check_containment, check_symplectic, VerificationReport, Witness};

use super::claim::{CitedTag, EmbeddingClaim, Justification};
use super::obstruction::obstruction_check;
use super::rules::{close, includes_up_to_permutation, le, main_lemma_fiber, radii, sorted, LEMMA31_MAX_RATIO};

/// Sample count for numerical checks of explicit maps.
pub const EXPLICIT_MAP_SAMPLES: usize = 2000;

const SHAPE_TOL: f64 = 1e-12;

struct Walker {
    errors: Vec<String>,
    rules: usize,
    hypotheses: usize,
    explicit: Vec<VerificationReport>,
}

fn depends_on_hypothesis(c: &EmbeddingClaim) -> bool {
    match &c.justification {
        Justification::Hypothesis => true,
        Justification::Scaling { base, .. } => depends_on_hypothesis(base),
        Justification::Composition { steps } => steps.iter().any(depends_on_hypothesis),
        _ => false,
    }
}

/// Smallest radius of a product of disks, balls and planes.
fn min_radius(s: &ShapeDescriptor) -> Option<f64> {
    s.factors()
        .iter()
        .map(|f| match f {
            Factor::Disk2 { radius } | Factor::Ball { radius, .. } => Some(*radius),
            Factor::FullPlane => Some(f64::INFINITY),
            _ => None,
        })
        .try_fold(f64::INFINITY, |m, r| r.map(|r| m.min(r)))
}

/// Source and target agree except at `at` in the source and `span` factors in the target.
fn others_match(src: &ShapeDescriptor, tgt: &ShapeDescriptor, at: usize, span: usize) -> bool {
    let (a, b) = (src.factors(), tgt.factors());
    if b.len() != a.len() + span - 1 {
        return false;
    }
    let pre = a[..at].iter().zip(&b[..at]);
    let post = a[at + 1..].iter().zip(&b[at + span..]);
    pre.chain(post).all(|(x, y)| x.approx_eq(y, SHAPE_TOL))
}

impl Walker {
    fn err(&mut self, path: &str, msg: String) {
        self.errors.push(format!("{path}: {msg}"));
    }

    fn explicit_map(&mut self, path: &str, descriptor: &str, claim: Option<&EmbeddingClaim>) {
        let node = match MapNode::from_descriptor(descriptor) {
            Ok(n) => n,
            Err(e) => return self.err(path, format!("bad map descriptor: {e}")),
        };
        if let Some(c) = claim {
            if includes(&node.domain, &c.source) != Some(true) {
                self.err(path, format!("map domain {} does not cover {}", node.domain, c.source));
            }
            if includes_up_to_permutation(&c.target, &node.target) != Some(true) {
                self.err(path, format!("map target {} is not inside {}", node.target, c.target));
            }
        }
        let spec = SampleSpec::uniform(EXPLICIT_MAP_SAMPLES, 0);
        let checks = vec![
            check_symplectic(&node, &node.domain, &spec),
            check_containment(&node, &node.domain, &node.target, &spec),
        ];
        let report = VerificationReport::bundle(format!("{path}/{}", node.kind_name()), checks);
        if !report.passed() {
            self.err(path, format!("explicit map {} failed numerical checks", node.kind_name()));
        }
        self.explicit.push(report);
    }

    fn claim(&mut self, path: &str, c: &EmbeddingClaim) {
        self.rules += 1;
        if c.source.dim() != c.target.dim() {
            return self.err(path, format!("dimension {} vs {}", c.source.dim(), c.target.dim()));
        }
        if !depends_on_hypothesis(c) && c.source.polydisk_radii().is_some() && c.target.polydisk_radii().is_some() {
            if let Ok(v) = obstruction_check(&c.source, &c.target) {
                if let Some(reason) = v.violation() {
                    self.err(path, format!("claim violates {reason}"));
                }
            }
        }
        for (k, e) in c.evidence.iter().enumerate() {
            self.explicit_map(&format!("{path}/evidence{k}"), e, None);
        }
        match &c.justification {
            Justification::Inclusion => {
                if includes_up_to_permutation(&c.target, &c.source) != Some(true) {
                    self.err(path, format!("{} is not provably inside {}", c.source, c.target));
                }
            }
            Justification::Hypothesis => self.hypotheses += 1,
            Justification::ExplicitMap { descriptor } => self.explicit_map(path, descriptor, Some(c)),
            Justification::Scaling { factor, base } => {
                self.claim(&format!("{path}/base"), base);
                if !(c.source.approx_eq(&base.source.scaled(*factor), SHAPE_TOL)
                    && c.target.approx_eq(&base.target.scaled(*factor), SHAPE_TOL))
                {
                    self.err(path, format!("endpoints are not the base scaled by {factor}"));
                }
                if !close(c.constant(), base.constant()) {
                    self.err(path, "scaling changed the ledger constant".into());
                }
            }
            Justification::Composition { steps } => {
                let (Some(first), Some(last)) = (steps.first(), steps.last()) else {
                    return self.err(path, "empty composition".into());
                };
                if !c.source.approx_eq(&first.source, SHAPE_TOL) || !c.target.approx_eq(&last.target, SHAPE_TOL) {
                    self.err(path, "composition endpoints differ from its steps".into());
                }
                for (k, w) in steps.windows(2).enumerate() {
                    if !w[0].target.approx_eq(&w[1].source, SHAPE_TOL) {
                        self.err(path, format!("step {k} ends at {} but step {} starts at {}", w[0].target, k + 1, w[1].source));
                    }
                }
                let product: f64 = steps.iter().map(EmbeddingClaim::constant).product();
                if !close(product, c.constant()) {
                    self.err(path, format!("ledger product {} differs from steps' {product}", c.constant()));
                }
                for (k, s) in steps.iter().enumerate() {
                    self.claim(&format!("{path}/{k}"), s);
                }
            }
            Justification::MoserEquivalence { areas, .. } => {
                let has = c.source.factors().iter().any(|f| matches!(f, Factor::Surface { area } if close(*area, areas[0])));
                if !close(areas[0], areas[1]) || !has || !c.source.approx_eq(&c.target, SHAPE_TOL) {
                    self.err(path, format!("surfaces of areas {} and {} are not identified", areas[0], areas[1]));
                }
            }
            Justification::CitedResult { tag, params } => {
                let p = |k: &str| params.get(k).copied().unwrap_or(f64::NAN);
                if let Err(msg) = self.cited(*tag, &p, c) {
                    self.err(path, format!("{tag}: {msg}"));
                }
            }
        }
    }

    fn cited(&mut self, tag: CitedTag, p: &dyn Fn(&str) -> f64, c: &EmbeddingClaim) -> Result<(), String> {
        match tag {
            CitedTag::TraynorProp1 => {
                let (a, b, l) = (p("r_small"), p("r_large"), p("lambda"));
                if !(a <= b && l >= 1.0 - 1e-12 && le(l * l, b / a)) {
                    return Err(format!("lambda = {l} outside [1, sqrt({b}/{a})]"));
                }
                let mut r = sorted(radii(&c.source).map_err(|e| e.to_string())?);
                let i = r.iter().position(|x| close(*x, a)).ok_or("r_small is not a source radius")?;
                let j = (0..r.len()).find(|&k| k != i && close(r[k], b)).ok_or("r_large is not a source radius")?;
                r[i] = a * l;
                r[j] = b / l;
                let want: Vec<f64> = sorted(r).iter().map(|x| x * c.constant()).collect();
                let got = sorted(radii(&c.target).map_err(|e| e.to_string())?);
                if !want.iter().zip(&got).all(|(x, y)| close(*x, *y)) {
                    return Err(format!("target {} is not {} times the moved polydisk", c.target, c.constant()));
                }
            }
            CitedTag::MainLemma => {
                let k = c
                    .source
                    .factors()
                    .iter()
                    .position(|f| matches!(f, Factor::Ball { dim: 4, .. }))
                    .ok_or("no 4-ball in source")?;
                let Factor::Ball { radius, .. } = c.source.factors()[k] else { unreachable!() };
                let (r, s) = (p("r"), p("s"));
                let t = c.target.factors();
                let ok = le(radius, r)
                    && matches!(t.get(k), Some(Factor::Surface { area }) if close(*area, s * s))
                    && matches!(t.get(k + 1), Some(Factor::Disk2 { radius: f }) if le(main_lemma_fiber(r, s), *f))
                    && others_match(&c.source, &c.target, k, 2);
                if !ok {
                    return Err(format!("{} is not sigma({}) x disk(>= {})", c.target, s * s, main_lemma_fiber(r, s)));
                }
            }
            CitedTag::Lemma31 => {
                let (w, area) = (p("w"), p("area"));
                if !le(w / area.sqrt(), LEMMA31_MAX_RATIO) {
                    return Err(format!("W/sqrt(area) = {} > 1/10", w / area.sqrt()));
                }
                let (sf, tf) = (c.source.factors(), c.target.factors());
                let d = sf.iter().position(|f| matches!(f, Factor::Disk2 { radius } if close(*radius, w)));
                let s = sf.iter().position(|f| matches!(f, Factor::Surface { area: a } if close(*a, area)));
                let (Some(d), Some(s)) = (d, s) else {
                    return Err("source lacks disk(W) x sigma(area)".into());
                };
                let ok = sf.len() == tf.len()
                    && matches!(tf[d], Factor::Disk2 { radius } if le(2.0 * w, radius))
                    && matches!(tf[s], Factor::Disk2 { radius } if le(area.sqrt(), radius))
                    && (0..sf.len()).filter(|k| *k != d && *k != s).all(|k| sf[k].approx_eq(&tf[k], SHAPE_TOL));
                if !ok {
                    return Err(format!("{} is not disk(2W) x disk(sqrt(area))", c.target));
                }
            }
            CitedTag::NonSqueezingAxiom => {
                let (a, b) = (min_radius(&c.source), min_radius(&c.target));
                match (a, b) {
                    (Some(a), Some(b)) if a <= b => {}
                    (Some(a), Some(b)) => return Err(format!("violated: source radius {a} > cylinder radius {b}")),
                    _ => return Err("shapes are not balls, disks or planes".into()),
                }
            }
        }
        Ok(())
    }
}

/// Structural validation of a claim sequence; consecutive claims must chain.
///
/// Explicit maps are also checked numerically; their reports are attached as children.
pub fn validate_chain(claims: &[EmbeddingClaim]) -> VerificationReport {
    let mut w = Walker { errors: Vec::new(), rules: 0, hypotheses: 0, explicit: Vec::new() };
    for (k, c) in claims.iter().enumerate() {
        w.claim(&format!("claim{k}"), c);
    }
    for (k, pair) in claims.windows(2).enumerate() {
        if !pair[0].target.approx_eq(&pair[1].source, SHAPE_TOL) {
            w.err(&format!("claim{k}"), format!("target {} is not the next source {}", pair[0].target, pair[1].source));
        }
    }
    let mut report = VerificationReport::new("claim_chain", "invalid_rules", 0.0);
    report.samples = w.rules;
    report.margin = w.errors.len() as f64;
    report.detail("claims", claims.len() as f64);
    report.detail("rules_checked", w.rules as f64);
    report.detail("hypotheses", w.hypotheses as f64);
    for e in w.errors {
        report.fail(Witness::new(Vec::new(), e));
    }
    if w.hypotheses > 0 {
        report.note(format!("{} step(s) rest on an assumed hypothesis", w.hypotheses));
    }
    let verdict = w.explicit.iter().fold(report.verdict, |v, c| v.worst(c.verdict));
    report.verdict = verdict;
    report.children = w.explicit;
    report
}
