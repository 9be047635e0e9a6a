//! The built-in EL reasoner.
//!
//! Axioms are normalized, individuals are turned into singleton concepts,
//! and the completion rules are run to a fixpoint. An [`Inference`] bundles
//! the result for one store revision and answers the entailment queries.

mod classify;
mod normalize;
mod saturate;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

pub use classify::{classify, Hierarchy};
pub use normalize::{normalize, Atom, Concept, NormalizedTBox, Role, BOTTOM, TOP};
pub use saturate::{saturate, Realization, Saturation, SubsumptionSet};

use crate::error::{Error, Result};
use crate::model::{Axiom, AxiomStore, ClassExpression, EntityName};

/// Identifier of the only reasoner this service ships.
pub const BUILTIN_REASONER: &str = "builtin-el";

/// Which neighbours of a class a hierarchy query asks for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Sub,
    Sup,
    Equiv,
}

/// Saturated state of one store revision.
pub struct Inference {
    revision: u64,
    base: NormalizedTBox,
    saturation: Saturation,
    subsumptions: OnceLock<SubsumptionSet>,
    role_subsumptions: BTreeSet<(EntityName, EntityName)>,
    realization: Realization,
    hierarchy: Hierarchy,
    assertions: BTreeMap<EntityName, BTreeSet<(EntityName, EntityName)>>,
}

impl std::fmt::Debug for Inference {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Inference")
            .field("revision", &self.revision)
            .field("consistent", &self.realization.consistent)
            .finish_non_exhaustive()
    }
}

pub(crate) fn class_name(c: &ClassExpression) -> EntityName {
    match c {
        ClassExpression::Named(n) => n.clone(),
        ClassExpression::Top => EntityName::thing(),
        ClassExpression::Bottom => EntityName::nothing(),
        other => unreachable!("not an atomic class: {other}"),
    }
}

impl Inference {
    pub fn compute(store: &AxiomStore) -> Inference {
        Inference::from_axioms(store.revision(), store.iter())
    }

    pub fn from_axioms<'a>(
        revision: u64,
        axioms: impl IntoIterator<Item = &'a Axiom>,
    ) -> Inference {
        let mut base = NormalizedTBox::default();
        let mut assertions: BTreeMap<EntityName, BTreeSet<(EntityName, EntityName)>> =
            BTreeMap::new();
        for ax in axioms {
            base.add_axiom(ax);
            if let Axiom::ObjectPropertyAssertion {
                role,
                subject,
                object,
            } = ax
            {
                assertions
                    .entry(subject.clone())
                    .or_default()
                    .insert((role.clone(), object.clone()));
            }
        }
        let saturation = Saturation::run(base.clone());
        let role_subsumptions = saturation.role_subsumptions();
        let realization = saturation.realization();
        let hierarchy = saturation.hierarchy();
        Inference {
            revision,
            base,
            saturation,
            subsumptions: OnceLock::new(),
            role_subsumptions,
            realization,
            hierarchy,
            assertions,
        }
    }

    /// Store revision this inference was computed at.
    pub fn revision(&self) -> u64 {
        self.revision
    }

    pub fn is_consistent(&self) -> bool {
        self.realization.consistent
    }

    /// Every entailed subsumption between named classes, built on first use.
    pub fn subsumptions(&self) -> &SubsumptionSet {
        self.subsumptions
            .get_or_init(|| self.saturation.subsumption_set())
    }

    pub fn realization(&self) -> &Realization {
        &self.realization
    }

    pub fn hierarchy(&self) -> &Hierarchy {
        &self.hierarchy
    }

    pub fn individuals(&self) -> &BTreeSet<EntityName> {
        &self.base.signature().individuals
    }

    fn require_consistent(&self) -> Result<()> {
        if self.is_consistent() {
            Ok(())
        } else {
            Err(Error::InconsistentOntology(format!(
                "revision {}",
                self.revision
            )))
        }
    }

    fn class_atom(&self, c: &ClassExpression) -> Option<Atom> {
        match c {
            ClassExpression::Top => Some(TOP),
            ClassExpression::Bottom => Some(BOTTOM),
            ClassExpression::Named(n) => self.base.class_atom(n),
            _ => None,
        }
    }

    /// Named classes the individual provably belongs to, sorted by name.
    /// `owl:Thing` is left out unless `include_top` is set.
    pub fn types_of(
        &self,
        individual: &EntityName,
        direct: bool,
        include_top: bool,
    ) -> Result<Vec<EntityName>> {
        let atom = self
            .base
            .individual_atom(individual)
            .ok_or_else(|| Error::UnknownEntity(individual.to_string()))?;
        self.require_consistent()?;
        let sat = &self.saturation;
        let types = sat.named_subsumers(atom);
        let atoms: Vec<(ClassExpression, Atom)> = types
            .iter()
            .map(|t| {
                (
                    t.clone(),
                    self.class_atom(t).expect("named class of the signature"),
                )
            })
            .collect();
        let mut out: Vec<EntityName> = atoms
            .iter()
            .filter(|(t, _)| include_top || *t != ClassExpression::Top)
            .filter(|(_, a)| {
                !direct
                    || !atoms
                        .iter()
                        .any(|(_, b)| b != a && sat.entails(*b, *a) && !sat.entails(*a, *b))
            })
            .map(|(t, _)| class_name(t))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Individuals that provably belong to `expr`. Complex expressions are
    /// answered by saturating once more with a fresh name for `expr`.
    pub fn instances_of(&self, expr: &ClassExpression, direct: bool) -> Result<Vec<EntityName>> {
        self.require_consistent()?;
        if let ClassExpression::Named(n) = expr {
            if self.base.class_atom(n).is_none() {
                return Ok(Vec::new());
            }
        }
        let scratch;
        let (sat, target) = match self.class_atom(expr) {
            Some(a) => (&self.saturation, a),
            None => {
                let mut tbox = self.base.clone();
                let q = tbox.internalize(expr);
                scratch = Saturation::run(tbox);
                (&scratch, q)
            }
        };
        let classes: Vec<Atom> = self
            .base
            .signature()
            .classes
            .iter()
            .filter_map(|c| self.base.class_atom(c))
            .collect();
        let mut out = Vec::new();
        for ind in self.individuals() {
            let a = self.base.individual_atom(ind).expect("interned");
            if !sat.entails(a, target) {
                continue;
            }
            if direct
                && classes.iter().any(|&d| {
                    d != target
                        && sat.entails(a, d)
                        && sat.entails(d, target)
                        && !sat.entails(target, d)
                })
            {
                continue;
            }
            out.push(ind.clone());
        }
        Ok(out)
    }

    /// Direct sub- or superclasses, or equivalents, of a named class.
    pub fn neighbors(
        &self,
        class: &ClassExpression,
        relation: Relation,
    ) -> Result<Vec<EntityName>> {
        if !class.is_atomic() {
            return Err(Error::unsupported(format!(
                "hierarchy query on complex expression {class}"
            )));
        }
        if !self.hierarchy.contains(class) {
            return Err(Error::UnknownEntity(class_name(class).to_string()));
        }
        self.require_consistent()?;
        let classes = match relation {
            Relation::Sub => self.hierarchy.direct_subs(class),
            Relation::Sup => self.hierarchy.direct_supers(class),
            Relation::Equiv => self.hierarchy.equivalents(class),
        };
        let mut out: Vec<EntityName> = classes.iter().map(class_name).collect();
        out.sort();
        Ok(out)
    }

    /// Asserted objects of `subject` under `role` or any of its sub-roles.
    pub fn property_values(
        &self,
        subject: &EntityName,
        role: &EntityName,
    ) -> Result<Vec<EntityName>> {
        if !self.individuals().contains(subject) {
            return Err(Error::UnknownEntity(subject.to_string()));
        }
        if !self.base.signature().roles.contains(role) {
            return Err(Error::UnknownEntity(role.to_string()));
        }
        let roles = &self.role_subsumptions;
        let values: BTreeSet<EntityName> = self
            .assertions
            .get(subject)
            .into_iter()
            .flatten()
            .filter(|(r, _)| roles.contains(&(r.clone(), role.clone())))
            .map(|(_, o)| o.clone())
            .collect();
        Ok(values.into_iter().collect())
    }

    /// Asserted `(role, object)` pairs of an individual.
    pub fn asserted_properties(&self, subject: &EntityName) -> Vec<(EntityName, EntityName)> {
        self.assertions
            .get(subject)
            .map(|s| s.iter().cloned().collect())
            .unwrap_or_default()
    }
}
