//! Exhaustive model enumeration for tiny ontologies.
//!
//! Interpretations are enumerated over a fixed domain of `n` elements
//! (bitmask extensions, so `n <= 8`). A model of any smaller size embeds
//! into one of size `n` by duplicating an element, which preserves every
//! supported axiom, so only the largest size needs to be visited.

use std::collections::{BTreeMap, BTreeSet};

use armordb::model::{Axiom, ClassExpression, EntityName, Signature};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub consistent: bool,
    /// Entailed `(sub, sup)` over Top, Bottom and the signature classes.
    pub subsumptions: BTreeSet<(ClassExpression, ClassExpression)>,
    pub types: BTreeMap<EntityName, BTreeSet<ClassExpression>>,
    pub models_checked: u64,
}

enum E {
    Class(usize),
    Top,
    Bottom,
    And(Vec<E>),
    Some(usize, Box<E>),
}

enum C {
    Sub(E, E),
    Equiv(Vec<E>),
    Disjoint(Vec<E>),
    SubRole(usize, usize),
    Domain(usize, E),
    Range(usize, E),
    Inst(E, usize),
    Link(usize, usize, usize),
}

struct Model {
    n: usize,
    full: u8,
    class: Vec<u8>,
    succ: Vec<Vec<u8>>,
    ind: Vec<usize>,
}

impl Model {
    fn eval(&self, e: &E) -> u8 {
        match e {
            E::Class(i) => self.class[*i],
            E::Top => self.full,
            E::Bottom => 0,
            E::And(ops) => ops.iter().fold(self.full, |acc, op| acc & self.eval(op)),
            E::Some(r, filler) => {
                let f = self.eval(filler);
                let mut out = 0;
                for x in 0..self.n {
                    if self.succ[*r][x] & f != 0 {
                        out |= 1 << x;
                    }
                }
                out
            }
        }
    }

    fn holds(&self, c: &C) -> bool {
        match c {
            C::Sub(a, b) => self.eval(a) & !self.eval(b) == 0,
            C::Equiv(ops) => {
                let first = self.eval(&ops[0]);
                ops[1..].iter().all(|op| self.eval(op) == first)
            }
            C::Disjoint(ops) => {
                let ms: Vec<u8> = ops.iter().map(|op| self.eval(op)).collect();
                (0..ms.len()).all(|i| (i + 1..ms.len()).all(|j| ms[i] & ms[j] == 0))
            }
            C::SubRole(r, s) => (0..self.n).all(|x| self.succ[*r][x] & !self.succ[*s][x] == 0),
            C::Domain(r, d) => {
                let d = self.eval(d);
                (0..self.n).all(|x| self.succ[*r][x] == 0 || d & (1 << x) != 0)
            }
            C::Range(r, rg) => {
                let rg = self.eval(rg);
                (0..self.n).all(|x| self.succ[*r][x] & !rg == 0)
            }
            C::Inst(e, i) => self.eval(e) & (1 << self.ind[*i]) != 0,
            C::Link(r, a, b) => self.succ[*r][self.ind[*a]] & (1 << self.ind[*b]) != 0,
        }
    }

    fn mentions_classes(c: &C) -> bool {
        !matches!(c, C::SubRole(..) | C::Link(..))
    }
}

struct Compiler<'a> {
    classes: Vec<&'a EntityName>,
    roles: Vec<&'a EntityName>,
    inds: Vec<&'a EntityName>,
}

impl Compiler<'_> {
    fn pos(list: &[&EntityName], n: &EntityName) -> usize {
        list.iter()
            .position(|x| *x == n)
            .expect("name in signature")
    }

    fn expr(&self, e: &ClassExpression) -> E {
        match e {
            ClassExpression::Named(n) => E::Class(Self::pos(&self.classes, n)),
            ClassExpression::Top => E::Top,
            ClassExpression::Bottom => E::Bottom,
            ClassExpression::Intersection(ops) => {
                E::And(ops.iter().map(|o| self.expr(o)).collect())
            }
            ClassExpression::Existential(r, f) => {
                E::Some(Self::pos(&self.roles, r), Box::new(self.expr(f)))
            }
        }
    }

    fn axiom(&self, ax: &Axiom) -> Option<C> {
        Some(match ax {
            Axiom::SubClassOf { sub, sup } => C::Sub(self.expr(sub), self.expr(sup)),
            Axiom::EquivalentClasses(ops) => C::Equiv(ops.iter().map(|o| self.expr(o)).collect()),
            Axiom::DisjointClasses(ops) => C::Disjoint(ops.iter().map(|o| self.expr(o)).collect()),
            Axiom::SubObjectPropertyOf { sub, sup } => {
                C::SubRole(Self::pos(&self.roles, sub), Self::pos(&self.roles, sup))
            }
            Axiom::ObjectPropertyDomain { role, domain } => {
                C::Domain(Self::pos(&self.roles, role), self.expr(domain))
            }
            Axiom::ObjectPropertyRange { role, range } => {
                C::Range(Self::pos(&self.roles, role), self.expr(range))
            }
            Axiom::Declaration { .. } => return None,
            Axiom::ClassAssertion { class, individual } => {
                C::Inst(self.expr(class), Self::pos(&self.inds, individual))
            }
            Axiom::ObjectPropertyAssertion {
                role,
                subject,
                object,
            } => C::Link(
                Self::pos(&self.roles, role),
                Self::pos(&self.inds, subject),
                Self::pos(&self.inds, object),
            ),
        })
    }
}

fn signature(axioms: &[Axiom]) -> Signature {
    let mut sig = Signature::default();
    for ax in axioms {
        sig.extend(ax.signature());
    }
    sig
}

/// Advances a mixed-radix counter; false once it wraps around.
fn step(digits: &mut [u32], radix: u32) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// Individual placements up to renaming of elements: each individual sits
/// on an element already used or on the next unused one.
pub fn placements(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, n: usize, cur: &mut Vec<usize>, used: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for e in 0..(used + 1).min(n) {
            cur.push(e);
            go(k, n, cur, used.max(e + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, n, &mut Vec::new(), 0, &mut out);
    out
}

/// Enumerates every interpretation over `n` elements.
pub fn enumerate(axioms: &[Axiom], n: usize) -> Verdict {
    assert!((1..=8).contains(&n));
    let sig = signature(axioms);
    let comp = Compiler {
        classes: sig.classes.iter().collect(),
        roles: sig.roles.iter().collect(),
        inds: sig.individuals.iter().collect(),
    };
    let constraints: Vec<C> = axioms.iter().filter_map(|a| comp.axiom(a)).collect();
    let (class_cs, role_cs): (Vec<&C>, Vec<&C>) =
        constraints.iter().partition(|c| Model::mentions_classes(c));

    let nodes: Vec<ClassExpression> = [ClassExpression::Top, ClassExpression::Bottom]
        .into_iter()
        .chain(sig.classes.iter().cloned().map(ClassExpression::Named))
        .collect();
    let node_exprs: Vec<E> = nodes.iter().map(|c| comp.expr(c)).collect();
    let k = comp.classes.len();
    let full: u8 = if n == 8 { 0xff } else { (1u8 << n) - 1 };
    let radix = 1u32 << n;

    let mut violated = vec![vec![false; nodes.len()]; nodes.len()];
    let mut not_type = vec![vec![false; nodes.len()]; comp.inds.len()];
    let mut any_model = false;
    let mut models_checked = 0u64;

    let mut role_digits = vec![0u32; comp.roles.len() * n];
    loop {
        let succ: Vec<Vec<u8>> = role_digits
            .chunks(n.max(1))
            .map(|c| c.iter().map(|&d| d as u8).collect())
            .collect();
        let succ = if comp.roles.is_empty() {
            Vec::new()
        } else {
            succ
        };
        for ind in placements(comp.inds.len(), n) {
            let mut m = Model {
                n,
                full,
                class: vec![0; k],
                succ: succ.clone(),
                ind,
            };
            if !role_cs.iter().all(|c| m.holds(c)) {
                continue;
            }
            let mut class_digits = vec![0u32; k];
            loop {
                for (i, &d) in class_digits.iter().enumerate() {
                    m.class[i] = d as u8;
                }
                models_checked += 1;
                if class_cs.iter().all(|c| m.holds(c)) {
                    any_model = true;
                    let ext: Vec<u8> = node_exprs.iter().map(|e| m.eval(e)).collect();
                    for i in 0..nodes.len() {
                        for j in 0..nodes.len() {
                            if ext[i] & !ext[j] != 0 {
                                violated[i][j] = true;
                            }
                        }
                    }
                    for (a, &el) in m.ind.iter().enumerate() {
                        for j in 0..nodes.len() {
                            if ext[j] & (1 << el) == 0 {
                                not_type[a][j] = true;
                            }
                        }
                    }
                }
                if !step(&mut class_digits, radix) {
                    break;
                }
            }
        }
        if !step(&mut role_digits, radix) {
            break;
        }
    }

    let mut subsumptions = BTreeSet::new();
    for i in 0..nodes.len() {
        for j in 0..nodes.len() {
            if !any_model || !violated[i][j] {
                subsumptions.insert((nodes[i].clone(), nodes[j].clone()));
            }
        }
    }
    let types = comp
        .inds
        .iter()
        .enumerate()
        .map(|(a, &name)| {
            let ts = (0..nodes.len())
                .filter(|&j| !any_model || !not_type[a][j])
                .map(|j| nodes[j].clone())
                .collect();
            (name.clone(), ts)
        })
        .collect();
    Verdict {
        consistent: any_model,
        subsumptions,
        types,
        models_checked,
    }
}
