//! Rewriting of axioms into the five EL normal forms.
//!
//! Complex sub-expressions are replaced by fresh auxiliary atoms so that
//! every inclusion ends up as one of
//! `A ⊑ B`, `A1 ⊓ A2 ⊑ B`, `A ⊑ ∃r.B`, `∃r.A ⊑ B` or `r ⊑ s`.
//! Range restrictions are kept aside and applied by the saturation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::model::{Axiom, ClassExpression, EntityName, Signature};

pub type Atom = u32;
pub type Role = u32;

pub const TOP: Atom = 0;
pub const BOTTOM: Atom = 1;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Concept {
    Top,
    Bottom,
    Class(EntityName),
    /// The singleton concept standing in for one individual.
    Individual(EntityName),
    Aux(u32),
}

#[derive(Clone, Debug)]
pub struct NormalizedTBox {
    pub(crate) concepts: Vec<Concept>,
    concept_ids: HashMap<Concept, Atom>,
    pub(crate) roles: Vec<EntityName>,
    role_ids: HashMap<EntityName, Role>,
    aux_count: u32,

    pub(crate) subsumptions: BTreeSet<(Atom, Atom)>,
    pub(crate) conjunctions: BTreeSet<(Atom, Atom, Atom)>,
    pub(crate) exists_right: BTreeSet<(Atom, Role, Atom)>,
    pub(crate) exists_left: BTreeSet<(Role, Atom, Atom)>,
    pub(crate) role_inclusions: BTreeSet<(Role, Role)>,
    pub(crate) ranges: BTreeSet<(Role, Atom)>,
    /// Asserted role edges between individual singletons.
    pub(crate) links: BTreeSet<(Atom, Role, Atom)>,

    signature: Signature,
}

impl Default for NormalizedTBox {
    fn default() -> Self {
        let mut n = NormalizedTBox {
            concepts: Vec::new(),
            concept_ids: HashMap::new(),
            roles: Vec::new(),
            role_ids: HashMap::new(),
            aux_count: 0,
            subsumptions: BTreeSet::new(),
            conjunctions: BTreeSet::new(),
            exists_right: BTreeSet::new(),
            exists_left: BTreeSet::new(),
            role_inclusions: BTreeSet::new(),
            ranges: BTreeSet::new(),
            links: BTreeSet::new(),
            signature: Signature::default(),
        };
        assert_eq!(n.intern(Concept::Top), TOP);
        assert_eq!(n.intern(Concept::Bottom), BOTTOM);
        n
    }
}

/// Normalizes the terminological axioms of `axioms`; assertional axioms are
/// skipped (see [`NormalizedTBox::add_axiom`]).
pub fn normalize<'a>(axioms: impl IntoIterator<Item = &'a Axiom>) -> NormalizedTBox {
    let mut n = NormalizedTBox::default();
    for ax in axioms {
        if !ax.is_assertional() {
            n.add_axiom(ax);
        }
    }
    n
}

impl NormalizedTBox {
    pub fn concept_count(&self) -> usize {
        self.concepts.len()
    }

    pub fn concept(&self, atom: Atom) -> &Concept {
        &self.concepts[atom as usize]
    }

    pub fn role_name(&self, role: Role) -> &EntityName {
        &self.roles[role as usize]
    }

    /// Names of the input, by position.
    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn aux_count(&self) -> u32 {
        self.aux_count
    }

    pub fn class_atom(&self, name: &EntityName) -> Option<Atom> {
        self.concept_ids.get(&Concept::Class(name.clone())).copied()
    }

    pub fn individual_atom(&self, name: &EntityName) -> Option<Atom> {
        self.concept_ids
            .get(&Concept::Individual(name.clone()))
            .copied()
    }

    pub fn role_id(&self, name: &EntityName) -> Option<Role> {
        self.role_ids.get(name).copied()
    }

    /// Total number of normal-form statements.
    pub fn len(&self) -> usize {
        self.subsumptions.len()
            + self.conjunctions.len()
            + self.exists_right.len()
            + self.exists_left.len()
            + self.role_inclusions.len()
            + self.ranges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn intern(&mut self, c: Concept) -> Atom {
        if let Some(&id) = self.concept_ids.get(&c) {
            return id;
        }
        let id = self.concepts.len() as Atom;
        self.concepts.push(c.clone());
        self.concept_ids.insert(c, id);
        id
    }

    pub(crate) fn fresh(&mut self) -> Atom {
        let c = Concept::Aux(self.aux_count);
        self.aux_count += 1;
        self.intern(c)
    }

    fn class(&mut self, name: &EntityName) -> Atom {
        self.signature.classes.insert(name.clone());
        self.intern(Concept::Class(name.clone()))
    }

    pub(crate) fn individual(&mut self, name: &EntityName) -> Atom {
        self.signature.individuals.insert(name.clone());
        self.intern(Concept::Individual(name.clone()))
    }

    pub(crate) fn role(&mut self, name: &EntityName) -> Role {
        if let Some(&id) = self.role_ids.get(name) {
            return id;
        }
        self.signature.roles.insert(name.clone());
        let id = self.roles.len() as Role;
        self.roles.push(name.clone());
        self.role_ids.insert(name.clone(), id);
        id
    }

    fn atomic(&mut self, e: &ClassExpression) -> Option<Atom> {
        match e {
            ClassExpression::Named(n) => Some(self.class(n)),
            ClassExpression::Top => Some(TOP),
            ClassExpression::Bottom => Some(BOTTOM),
            _ => None,
        }
    }

    /// An atom `X` with `e ⊑ X` encoded.
    fn lhs_atom(&mut self, e: &ClassExpression) -> Atom {
        if let Some(a) = self.atomic(e) {
            return a;
        }
        let x = self.fresh();
        self.include_into(e, x);
        x
    }

    /// An atom `X` with `X ⊑ e` encoded.
    fn rhs_atom(&mut self, e: &ClassExpression) -> Atom {
        if let Some(a) = self.atomic(e) {
            return a;
        }
        let x = self.fresh();
        self.include_atom(x, e);
        x
    }

    /// `a ⊑ rhs`
    pub(crate) fn include_atom(&mut self, a: Atom, rhs: &ClassExpression) {
        match rhs {
            ClassExpression::Top => {}
            ClassExpression::Named(_) | ClassExpression::Bottom => {
                let b = self.atomic(rhs).expect("atomic");
                self.subsumptions.insert((a, b));
            }
            ClassExpression::Intersection(ops) => {
                for op in ops {
                    self.include_atom(a, op);
                }
            }
            ClassExpression::Existential(r, filler) => {
                let r = self.role(r);
                let b = self.rhs_atom(filler);
                self.exists_right.insert((a, r, b));
            }
        }
    }

    /// `lhs ⊑ b`
    fn include_into(&mut self, lhs: &ClassExpression, b: Atom) {
        match lhs {
            ClassExpression::Bottom => {}
            ClassExpression::Named(_) | ClassExpression::Top => {
                let a = self.atomic(lhs).expect("atomic");
                self.subsumptions.insert((a, b));
            }
            ClassExpression::Intersection(ops) => {
                let atoms: Vec<Atom> = ops.iter().map(|op| self.lhs_atom(op)).collect();
                let mut acc = atoms[0];
                for &next in &atoms[1..atoms.len() - 1] {
                    let x = self.fresh();
                    self.conjunctions.insert((acc, next, x));
                    acc = x;
                }
                self.conjunctions.insert((acc, atoms[atoms.len() - 1], b));
            }
            ClassExpression::Existential(r, filler) => {
                let r = self.role(r);
                let a = self.lhs_atom(filler);
                self.exists_left.insert((r, a, b));
            }
        }
    }

    /// `lhs ⊑ rhs`
    fn include(&mut self, lhs: &ClassExpression, rhs: &ClassExpression) {
        if matches!(lhs, ClassExpression::Bottom) || matches!(rhs, ClassExpression::Top) {
            return;
        }
        if let Some(a) = self.atomic(lhs) {
            return self.include_atom(a, rhs);
        }
        match rhs {
            ClassExpression::Named(_) | ClassExpression::Bottom => {
                let b = self.atomic(rhs).expect("atomic");
                self.include_into(lhs, b);
            }
            _ => {
                let x = self.lhs_atom(lhs);
                self.include_atom(x, rhs);
            }
        }
    }

    /// Adds any supported axiom; individuals become singleton concepts.
    pub fn add_axiom(&mut self, ax: &Axiom) {
        let sig = ax.signature();
        for c in &sig.classes {
            self.class(c);
        }
        for r in &sig.roles {
            self.role(r);
        }
        for i in &sig.individuals {
            self.individual(i);
        }
        match ax {
            Axiom::SubClassOf { sub, sup } => self.include(sub, sup),
            Axiom::EquivalentClasses(ops) => {
                let members = ops.as_slice();
                for pair in members.windows(2) {
                    self.include(&pair[0], &pair[1]);
                    self.include(&pair[1], &pair[0]);
                }
            }
            Axiom::DisjointClasses(ops) => {
                let atoms: Vec<Atom> = ops.iter().map(|op| self.lhs_atom(op)).collect();
                for i in 0..atoms.len() {
                    for j in i + 1..atoms.len() {
                        self.conjunctions.insert((atoms[i], atoms[j], BOTTOM));
                    }
                }
            }
            Axiom::SubObjectPropertyOf { sub, sup } => {
                let (r, s) = (self.role(sub), self.role(sup));
                self.role_inclusions.insert((r, s));
            }
            Axiom::ObjectPropertyDomain { role, domain } => {
                let some = ClassExpression::some(role.clone(), ClassExpression::Top);
                self.include(&some, domain);
            }
            Axiom::ObjectPropertyRange { role, range } => {
                let r = self.role(role);
                if *range != ClassExpression::Top {
                    let b = self.rhs_atom(range);
                    self.ranges.insert((r, b));
                }
            }
            Axiom::Declaration { .. } => {}
            Axiom::ClassAssertion { class, individual } => {
                let a = self.individual(individual);
                self.include_atom(a, class);
            }
            Axiom::ObjectPropertyAssertion {
                role,
                subject,
                object,
            } => {
                let r = self.role(role);
                let (s, o) = (self.individual(subject), self.individual(object));
                self.links.insert((s, r, o));
            }
        }
    }

    /// Encodes `e ⊑ Q` for a fresh atom `Q` and returns it.
    pub fn internalize(&mut self, e: &ClassExpression) -> Atom {
        let q = self.fresh();
        self.include_into_any(e, q);
        q
    }

    fn include_into_any(&mut self, e: &ClassExpression, q: Atom) {
        match e {
            ClassExpression::Named(_) | ClassExpression::Top => {
                let a = self.atomic(e).expect("atomic");
                self.subsumptions.insert((a, q));
            }
            _ => self.include_into(e, q),
        }
    }

    /// Reflexive-transitive closure of the role hierarchy: `supers[r]`
    /// lists every `s` with `r ⊑* s`.
    pub fn role_closure(&self) -> Vec<Vec<Role>> {
        let n = self.roles.len();
        let mut direct: Vec<Vec<Role>> = vec![Vec::new(); n];
        for &(r, s) in &self.role_inclusions {
            direct[r as usize].push(s);
        }
        (0..n)
            .map(|start| {
                let mut seen = BTreeSet::from([start as Role]);
                let mut stack = vec![start as Role];
                while let Some(r) = stack.pop() {
                    for &s in &direct[r as usize] {
                        if seen.insert(s) {
                            stack.push(s);
                        }
                    }
                }
                seen.into_iter().collect()
            })
            .collect()
    }

    /// Gives every existential filler of a role with a range restriction
    /// its own auxiliary atom, so that the range rule only ever narrows
    /// concepts that stand for successors of that role.
    pub(crate) fn privatize_range_fillers(&mut self, supers: &[Vec<Role>]) {
        let ranged: BTreeSet<Role> = self.ranges.iter().map(|&(r, _)| r).collect();
        if ranged.is_empty() {
            return;
        }
        let needs = |r: Role| supers[r as usize].iter().any(|s| ranged.contains(s));
        let existing = std::mem::take(&mut self.exists_right);
        let mut private: BTreeMap<(Role, Atom), Atom> = BTreeMap::new();
        for (a, r, b) in existing {
            if needs(r) {
                let x = match private.get(&(r, b)) {
                    Some(&x) => x,
                    None => {
                        let x = self.fresh();
                        self.subsumptions.insert((x, b));
                        private.insert((r, b), x);
                        x
                    }
                };
                self.exists_right.insert((a, r, x));
            } else {
                self.exists_right.insert((a, r, b));
            }
        }
    }

    /// Renders the normal forms back into axioms; auxiliary atoms and
    /// singleton concepts become `gen:` classes.
    pub fn to_axioms(&self) -> Vec<Axiom> {
        let cls = |a: Atom| -> ClassExpression {
            match &self.concepts[a as usize] {
                Concept::Top => ClassExpression::Top,
                Concept::Bottom => ClassExpression::Bottom,
                Concept::Class(n) => ClassExpression::Named(n.clone()),
                Concept::Individual(_) | Concept::Aux(_) => {
                    ClassExpression::Named(EntityName::new("gen", &format!("a{a}")).expect("valid"))
                }
            }
        };
        let role = |r: Role| self.roles[r as usize].clone();
        let mut out = Vec::new();
        for &(a, b) in &self.subsumptions {
            out.push(Axiom::sub_class(cls(a), cls(b)));
        }
        for &(a1, a2, b) in &self.conjunctions {
            let lhs = ClassExpression::intersection(vec![cls(a1), cls(a2)]).expect("two operands");
            out.push(Axiom::sub_class(lhs, cls(b)));
        }
        for &(a, r, b) in &self.exists_right {
            out.push(Axiom::sub_class(
                cls(a),
                ClassExpression::some(role(r), cls(b)),
            ));
        }
        for &(r, a, b) in &self.exists_left {
            out.push(Axiom::sub_class(
                ClassExpression::some(role(r), cls(a)),
                cls(b),
            ));
        }
        for &(r, s) in &self.role_inclusions {
            out.push(Axiom::SubObjectPropertyOf {
                sub: role(r),
                sup: role(s),
            });
        }
        for &(r, b) in &self.ranges {
            out.push(Axiom::ObjectPropertyRange {
                role: role(r),
                range: cls(b),
            });
        }
        out
    }
}
