//! Random generators for small ontologies.

use armordb::model::{Axiom, ClassExpression, EntityKind, EntityName};
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub classes: usize,
    pub roles: usize,
    pub individuals: usize,
    pub max_axioms: usize,
    pub depth: u32,
}

impl Shape {
    /// At most 3 classes, one role, 6 axioms.
    pub const SMALL: Shape = Shape {
        classes: 3,
        roles: 1,
        individuals: 2,
        max_axioms: 6,
        depth: 2,
    };

    /// Every name pool in full, including a second prefix.
    pub const WIDE: Shape = Shape {
        classes: CLASSES.len(),
        roles: ROLES.len(),
        individuals: INDIVIDUALS.len(),
        max_axioms: 14,
        depth: 3,
    };
}

pub fn name(s: &str) -> EntityName {
    s.parse().unwrap()
}

const CLASSES: [&str; 6] = ["ex:A", "ex:B", "ex:C", "ex:D", "k:Cup", "k:Table-top"];
const ROLES: [&str; 3] = ["ex:r", "ex:s", "k:isOn"];
const INDIVIDUALS: [&str; 4] = ["ex:a", "ex:b", "ex:c", "k:cup_1"];

pub struct Gen<'a, R: Rng> {
    pub rng: &'a mut R,
    pub shape: Shape,
}

impl<R: Rng> Gen<'_, R> {
    fn class_name(&mut self) -> EntityName {
        name(CLASSES[self.rng.gen_range(0..self.shape.classes)])
    }

    fn role(&mut self) -> EntityName {
        name(ROLES[self.rng.gen_range(0..self.shape.roles)])
    }

    fn individual(&mut self) -> EntityName {
        name(INDIVIDUALS[self.rng.gen_range(0..self.shape.individuals)])
    }

    pub fn expr(&mut self, depth: u32) -> ClassExpression {
        let roll = self.rng.gen_range(0..100);
        if depth == 0 || roll < 55 {
            return match self.rng.gen_range(0..100) {
                0..=5 => ClassExpression::Top,
                6..=8 => ClassExpression::Bottom,
                _ => ClassExpression::Named(self.class_name()),
            };
        }
        if roll < 77 || self.shape.roles == 0 {
            let n = if self.rng.gen_bool(0.85) { 2 } else { 3 };
            let ops = (0..n).map(|_| self.expr(depth - 1)).collect();
            ClassExpression::intersection(ops).unwrap()
        } else {
            let r = self.role();
            ClassExpression::some(r, self.expr(depth - 1))
        }
    }

    pub fn axiom(&mut self) -> Axiom {
        let d = self.shape.depth;
        let has_roles = self.shape.roles > 0;
        let has_inds = self.shape.individuals > 0;
        loop {
            let ax = match self.rng.gen_range(0..100) {
                0..=39 => Axiom::sub_class(self.expr(d), self.expr(d)),
                40..=49 => Axiom::equivalent(vec![self.expr(d), self.expr(d)]).unwrap(),
                50..=59 => Axiom::disjoint(vec![self.expr(d), self.expr(d)]).unwrap(),
                60..=66 if has_roles => Axiom::ObjectPropertyDomain {
                    role: self.role(),
                    domain: self.expr(d),
                },
                67..=74 if has_roles => Axiom::ObjectPropertyRange {
                    role: self.role(),
                    range: self.expr(d),
                },
                75..=84 if has_inds => Axiom::class_assertion(self.expr(d), self.individual()),
                85..=92 if has_roles && has_inds => {
                    Axiom::property_assertion(self.role(), self.individual(), self.individual())
                }
                93..=96 if self.shape.roles > 1 => {
                    let (r, s) = (self.role(), self.role());
                    Axiom::SubObjectPropertyOf { sub: r, sup: s }
                }
                97..=99 => {
                    let kind = *[EntityKind::Class, EntityKind::Role, EntityKind::Individual]
                        .choose(self.rng)
                        .unwrap();
                    match kind {
                        EntityKind::Class => Axiom::declare(kind, self.class_name()),
                        EntityKind::Role if has_roles => Axiom::declare(kind, self.role()),
                        EntityKind::Individual if has_inds => {
                            Axiom::declare(kind, self.individual())
                        }
                        _ => continue,
                    }
                }
                _ => continue,
            };
            return ax;
        }
    }

    pub fn ontology(&mut self) -> Vec<Axiom> {
        let n = self.rng.gen_range(1..=self.shape.max_axioms);
        (0..n).map(|_| self.axiom()).collect()
    }
}
