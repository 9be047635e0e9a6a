//! Reasoner verdicts compared against the model-enumeration oracle.

use armordb::model::Axiom;
use armordb::reasoner::Inference;

use super::oracle::{enumerate, Verdict};

fn reasoner_verdict(axioms: &[Axiom]) -> (bool, Verdict) {
    let inf = Inference::from_axioms(0, axioms);
    let consistent = inf.is_consistent();
    let subsumptions = inf.subsumptions().subsumptions.clone();
    let types = inf.realization().types.clone();
    (
        consistent,
        Verdict {
            consistent,
            subsumptions,
            types,
            models_checked: 0,
        },
    )
}

fn show(axioms: &[Axiom]) -> String {
    axioms.iter().map(|a| format!("  {a}\n")).collect()
}

/// Compares one ontology; returns a description of the first difference.
///
/// Any model the oracle finds is a genuine counter-model, so whatever the
/// reasoner entails beyond the oracle is a soundness failure. The converse
/// can be an artifact of a too small domain, so such differences are
/// re-checked once on a domain one element larger.
pub fn compare(axioms: &[Axiom], domain: usize) -> Option<String> {
    match check(axioms, domain) {
        Agreement::Mismatch(m) => Some(m),
        _ => None,
    }
}

#[derive(Debug, PartialEq, Eq)]
pub enum Agreement {
    Exact,
    /// Agreed only once the oracle searched one element further.
    Escalated,
    Mismatch(String),
}

pub fn check(axioms: &[Axiom], domain: usize) -> Agreement {
    match compare_at(axioms, domain) {
        None => Agreement::Exact,
        Some(Diff::OracleStronger(_)) => match compare_at(axioms, domain + 1) {
            None => Agreement::Escalated,
            Some(d) => Agreement::Mismatch(d.describe(axioms)),
        },
        Some(d) => Agreement::Mismatch(d.describe(axioms)),
    }
}

enum Diff {
    ReasonerStronger(String),
    OracleStronger(String),
}

impl Diff {
    fn describe(&self, axioms: &[Axiom]) -> String {
        match self {
            Diff::ReasonerStronger(s) => format!("unsound: {s}\n{}", show(axioms)),
            Diff::OracleStronger(s) => format!("incomplete: {s}\n{}", show(axioms)),
        }
    }
}

fn compare_at(axioms: &[Axiom], domain: usize) -> Option<Diff> {
    let oracle = enumerate(axioms, domain);
    let (consistent, ours) = reasoner_verdict(axioms);
    if consistent != oracle.consistent {
        let msg = format!(
            "consistency: reasoner {consistent}, oracle {}",
            oracle.consistent
        );
        return Some(if consistent {
            Diff::OracleStronger(msg)
        } else {
            Diff::ReasonerStronger(msg)
        });
    }
    if !consistent {
        return None;
    }
    let only_ours: Vec<_> = ours.subsumptions.difference(&oracle.subsumptions).collect();
    if !only_ours.is_empty() {
        return Some(Diff::ReasonerStronger(format!(
            "subsumptions only entailed by the reasoner: {only_ours:?}"
        )));
    }
    for (ind, types) in &ours.types {
        let extra: Vec<_> = types.difference(&oracle.types[ind]).collect();
        if !extra.is_empty() {
            return Some(Diff::ReasonerStronger(format!(
                "types of {ind} only entailed by the reasoner: {extra:?}"
            )));
        }
    }
    let only_oracle: Vec<_> = oracle.subsumptions.difference(&ours.subsumptions).collect();
    if !only_oracle.is_empty() {
        return Some(Diff::OracleStronger(format!(
            "subsumptions only entailed by the oracle: {only_oracle:?}"
        )));
    }
    if ours.types != oracle.types {
        return Some(Diff::OracleStronger(format!(
            "types: reasoner {:?}, oracle {:?}",
            ours.types, oracle.types
        )));
    }
    None
}
