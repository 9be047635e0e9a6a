//! Completion-rule saturation.
//!
//! Every atom `x` gets a subsumer set `S(x)` and a set of role edges
//! `x -r-> y` meaning `x ⊑ ∃r.y`. The rules are applied from a work queue
//! until nothing new is derived:
//!
//! - `A ∈ S(x)`, `A ⊑ B` gives `B ∈ S(x)`
//! - `A1, A2 ∈ S(x)`, `A1 ⊓ A2 ⊑ B` gives `B ∈ S(x)`
//! - `A ∈ S(x)`, `A ⊑ ∃r.B` gives `x -r-> B`
//! - `x -r-> y`, `r ⊑* s` gives `x -s-> y`
//! - `x -r-> y`, `A ∈ S(y)`, `∃r.A ⊑ B` gives `B ∈ S(x)`
//! - `x -r-> y`, `⊥ ∈ S(y)` gives `⊥ ∈ S(x)`
//! - `x -r-> y`, `range(r) = C` gives `C ∈ S(y)`

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use crate::model::{Axiom, ClassExpression, EntityName};
use crate::reasoner::classify::Hierarchy;
use crate::reasoner::normalize::{Atom, Concept, NormalizedTBox, Role, BOTTOM, TOP};

enum Item {
    Sub(Atom, Atom),
    Link(Atom, Role, Atom),
}

/// The fixpoint over one normalized ontology.
pub struct Saturation {
    tbox: NormalizedTBox,
    subsumers: Vec<HashSet<Atom>>,
    role_supers: Vec<Vec<Role>>,
}

impl Saturation {
    /// Saturates `tbox`, which may already contain assertions.
    pub fn run(mut tbox: NormalizedTBox) -> Saturation {
        let role_supers = tbox.role_closure();
        tbox.privatize_range_fillers(&role_supers);

        let n = tbox.concept_count();
        let mut told: Vec<Vec<Atom>> = vec![Vec::new(); n];
        for &(a, b) in &tbox.subsumptions {
            told[a as usize].push(b);
        }
        let mut conj: Vec<Vec<(Atom, Atom)>> = vec![Vec::new(); n];
        for &(a1, a2, b) in &tbox.conjunctions {
            conj[a1 as usize].push((a2, b));
            if a1 != a2 {
                conj[a2 as usize].push((a1, b));
            }
        }
        let mut ex_right: Vec<Vec<(Role, Atom)>> = vec![Vec::new(); n];
        for &(a, r, b) in &tbox.exists_right {
            ex_right[a as usize].push((r, b));
        }
        let mut ex_left: HashMap<(Role, Atom), Vec<Atom>> = HashMap::new();
        for &(r, a, b) in &tbox.exists_left {
            ex_left.entry((r, a)).or_default().push(b);
        }
        let mut range_of: Vec<Vec<Atom>> = vec![Vec::new(); tbox.roles.len()];
        for &(r, c) in &tbox.ranges {
            range_of[r as usize].push(c);
        }

        let mut subsumers: Vec<HashSet<Atom>> = vec![HashSet::new(); n];
        let mut links_out: Vec<HashSet<(Role, Atom)>> = vec![HashSet::new(); n];
        let mut links_in: Vec<Vec<(Atom, Role)>> = vec![Vec::new(); n];
        let mut queue: VecDeque<Item> = VecDeque::new();

        for x in 0..n as Atom {
            queue.push_back(Item::Sub(x, x));
            queue.push_back(Item::Sub(x, TOP));
        }
        for &(x, r, y) in &tbox.links {
            queue.push_back(Item::Link(x, r, y));
        }

        while let Some(item) = queue.pop_front() {
            match item {
                Item::Sub(x, a) => {
                    if !subsumers[x as usize].insert(a) {
                        continue;
                    }
                    for &b in &told[a as usize] {
                        queue.push_back(Item::Sub(x, b));
                    }
                    for &(other, b) in &conj[a as usize] {
                        if subsumers[x as usize].contains(&other) {
                            queue.push_back(Item::Sub(x, b));
                        }
                    }
                    for &(r, b) in &ex_right[a as usize] {
                        queue.push_back(Item::Link(x, r, b));
                    }
                    for &(w, s) in &links_in[x as usize] {
                        if let Some(bs) = ex_left.get(&(s, a)) {
                            for &b in bs {
                                queue.push_back(Item::Sub(w, b));
                            }
                        }
                        if a == BOTTOM {
                            queue.push_back(Item::Sub(w, BOTTOM));
                        }
                    }
                }
                Item::Link(x, r, y) => {
                    for &s in &role_supers[r as usize] {
                        if !links_out[x as usize].insert((s, y)) {
                            continue;
                        }
                        links_in[y as usize].push((x, s));
                        for a in subsumers[y as usize].iter() {
                            if let Some(bs) = ex_left.get(&(s, *a)) {
                                for &b in bs {
                                    queue.push_back(Item::Sub(x, b));
                                }
                            }
                        }
                        if subsumers[y as usize].contains(&BOTTOM) {
                            queue.push_back(Item::Sub(x, BOTTOM));
                        }
                        for &c in &range_of[s as usize] {
                            queue.push_back(Item::Sub(y, c));
                        }
                    }
                }
            }
        }

        Saturation {
            tbox,
            subsumers,
            role_supers,
        }
    }

    pub fn tbox(&self) -> &NormalizedTBox {
        &self.tbox
    }

    pub fn is_unsatisfiable(&self, a: Atom) -> bool {
        self.subsumers[a as usize].contains(&BOTTOM)
    }

    /// `a ⊑ b` is entailed.
    pub fn entails(&self, a: Atom, b: Atom) -> bool {
        b == TOP || self.is_unsatisfiable(a) || self.subsumers[a as usize].contains(&b)
    }

    /// No individual is forced into `⊥`, and `owl:Thing` itself is
    /// satisfiable (interpretation domains are never empty).
    pub fn is_consistent(&self) -> bool {
        if self.is_unsatisfiable(TOP) {
            return false;
        }
        self.tbox
            .signature()
            .individuals
            .iter()
            .filter_map(|i| self.tbox.individual_atom(i))
            .all(|a| !self.is_unsatisfiable(a))
    }

    /// Named classes (plus `Top`) the atom is subsumed by.
    pub fn named_subsumers(&self, a: Atom) -> BTreeSet<ClassExpression> {
        let classes = &self.tbox.signature().classes;
        if self.is_unsatisfiable(a) {
            let mut all: BTreeSet<ClassExpression> = classes
                .iter()
                .cloned()
                .map(ClassExpression::Named)
                .collect();
            all.insert(ClassExpression::Top);
            all.insert(ClassExpression::Bottom);
            return all;
        }
        self.subsumers[a as usize]
            .iter()
            .filter_map(|&b| atom_class(self.tbox.concept(b)))
            .collect()
    }

    /// `Top`, `Bottom` and the named classes with their atoms, sorted.
    fn class_atoms(&self) -> Vec<(ClassExpression, Atom)> {
        let sig = self.tbox.signature();
        let mut atoms = vec![
            (ClassExpression::Top, TOP),
            (ClassExpression::Bottom, BOTTOM),
        ];
        for c in &sig.classes {
            atoms.push((
                ClassExpression::Named(c.clone()),
                self.tbox.class_atom(c).expect("interned"),
            ));
        }
        atoms.sort();
        atoms
    }

    /// For each entry of `atoms`, the positions of its entailed subsumers.
    fn class_supers(&self, atoms: &[(ClassExpression, Atom)]) -> Vec<Vec<usize>> {
        let pos: HashMap<Atom, usize> = atoms
            .iter()
            .enumerate()
            .map(|(i, (_, a))| (*a, i))
            .collect();
        let top = pos[&TOP];
        atoms
            .iter()
            .map(|&(_, a)| {
                if self.is_unsatisfiable(a) {
                    return (0..atoms.len()).collect();
                }
                let mut s: Vec<usize> = self.subsumers[a as usize]
                    .iter()
                    .filter_map(|b| pos.get(b).copied())
                    .collect();
                s.push(top);
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect()
    }

    pub fn hierarchy(&self) -> Hierarchy {
        let atoms = self.class_atoms();
        let supers = self.class_supers(&atoms);
        Hierarchy::from_supers(atoms.into_iter().map(|(c, _)| c).collect(), &supers)
    }

    pub fn role_subsumptions(&self) -> BTreeSet<(EntityName, EntityName)> {
        let mut out = BTreeSet::new();
        for (r, supers) in self.role_supers.iter().enumerate() {
            for &s in supers {
                out.insert((
                    self.tbox.role_name(r as Role).clone(),
                    self.tbox.role_name(s).clone(),
                ));
            }
        }
        out
    }

    pub fn subsumption_set(&self) -> SubsumptionSet {
        let atoms = self.class_atoms();
        let supers = self.class_supers(&atoms);
        let mut subsumptions = BTreeSet::new();
        for (i, s) in supers.iter().enumerate() {
            for &j in s {
                subsumptions.insert((atoms[i].0.clone(), atoms[j].0.clone()));
            }
        }
        SubsumptionSet {
            subsumptions,
            role_subsumptions: self.role_subsumptions(),
        }
    }

    pub fn realization(&self) -> Realization {
        let consistent = self.is_consistent();
        let types = self
            .tbox
            .signature()
            .individuals
            .iter()
            .map(|i| {
                let a = self.tbox.individual_atom(i).expect("interned");
                (i.clone(), self.named_subsumers(a))
            })
            .collect();
        Realization { types, consistent }
    }
}

fn atom_class(c: &Concept) -> Option<ClassExpression> {
    match c {
        Concept::Top => Some(ClassExpression::Top),
        Concept::Bottom => Some(ClassExpression::Bottom),
        Concept::Class(n) => Some(ClassExpression::Named(n.clone())),
        Concept::Individual(_) | Concept::Aux(_) => None,
    }
}

/// Entailed subsumptions between the named classes of the input (plus
/// `owl:Thing`/`owl:Nothing`), and the role hierarchy closure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubsumptionSet {
    pub subsumptions: BTreeSet<(ClassExpression, ClassExpression)>,
    pub role_subsumptions: BTreeSet<(EntityName, EntityName)>,
}

impl SubsumptionSet {
    pub fn contains(&self, sub: &ClassExpression, sup: &ClassExpression) -> bool {
        self.subsumptions.contains(&(sub.clone(), sup.clone()))
    }
}

/// Named types of every individual.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Realization {
    pub types: BTreeMap<EntityName, BTreeSet<ClassExpression>>,
    pub consistent: bool,
}

/// Saturates a normalized TBox together with assertional axioms.
pub fn saturate<'a>(
    ntbox: &NormalizedTBox,
    abox: impl IntoIterator<Item = &'a Axiom>,
) -> (SubsumptionSet, Realization) {
    let mut full = ntbox.clone();
    for ax in abox {
        full.add_axiom(ax);
    }
    let sat = Saturation::run(full);
    (sat.subsumption_set(), sat.realization())
}
