use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::model::expr::check_role;
use crate::model::{ClassExpression, EntityName, Operands};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityKind {
    Class,
    Role,
    Individual,
}

impl EntityKind {
    pub fn keyword(self) -> &'static str {
        match self {
            EntityKind::Class => "Class",
            EntityKind::Role => "ObjectProperty",
            EntityKind::Individual => "NamedIndividual",
        }
    }
}

/// One terminological or assertional statement.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    SubClassOf {
        sub: ClassExpression,
        sup: ClassExpression,
    },
    EquivalentClasses(Operands),
    DisjointClasses(Operands),
    SubObjectPropertyOf {
        sub: EntityName,
        sup: EntityName,
    },
    ObjectPropertyDomain {
        role: EntityName,
        domain: ClassExpression,
    },
    ObjectPropertyRange {
        role: EntityName,
        range: ClassExpression,
    },
    Declaration {
        kind: EntityKind,
        name: EntityName,
    },
    ClassAssertion {
        class: ClassExpression,
        individual: EntityName,
    },
    ObjectPropertyAssertion {
        role: EntityName,
        subject: EntityName,
        object: EntityName,
    },
}

/// Names an axiom mentions, split by the position they occur in.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Signature {
    pub classes: BTreeSet<EntityName>,
    pub roles: BTreeSet<EntityName>,
    pub individuals: BTreeSet<EntityName>,
}

impl Signature {
    pub fn all(&self) -> BTreeSet<EntityName> {
        self.classes
            .iter()
            .chain(&self.roles)
            .chain(&self.individuals)
            .cloned()
            .collect()
    }

    pub fn extend(&mut self, other: Signature) {
        self.classes.extend(other.classes);
        self.roles.extend(other.roles);
        self.individuals.extend(other.individuals);
    }
}

impl Axiom {
    pub fn declare(kind: EntityKind, name: EntityName) -> Self {
        Axiom::Declaration { kind, name }
    }

    pub fn sub_class(sub: ClassExpression, sup: ClassExpression) -> Self {
        Axiom::SubClassOf { sub, sup }
    }

    pub fn equivalent(members: Vec<ClassExpression>) -> Result<Self> {
        Operands::new(members).map(Axiom::EquivalentClasses)
    }

    pub fn disjoint(members: Vec<ClassExpression>) -> Result<Self> {
        Operands::new(members).map(Axiom::DisjointClasses)
    }

    pub fn class_assertion(class: ClassExpression, individual: EntityName) -> Self {
        Axiom::ClassAssertion { class, individual }
    }

    pub fn property_assertion(role: EntityName, subject: EntityName, object: EntityName) -> Self {
        Axiom::ObjectPropertyAssertion {
            role,
            subject,
            object,
        }
    }

    /// True for statements about individuals.
    pub fn is_assertional(&self) -> bool {
        matches!(
            self,
            Axiom::ClassAssertion { .. }
                | Axiom::ObjectPropertyAssertion { .. }
                | Axiom::Declaration {
                    kind: EntityKind::Individual,
                    ..
                }
        )
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        let Signature {
            classes,
            roles,
            individuals,
        } = &mut sig;
        match self {
            Axiom::SubClassOf { sub, sup } => {
                sub.collect_signature(classes, roles);
                sup.collect_signature(classes, roles);
            }
            Axiom::EquivalentClasses(ops) | Axiom::DisjointClasses(ops) => {
                for op in ops {
                    op.collect_signature(classes, roles);
                }
            }
            Axiom::SubObjectPropertyOf { sub, sup } => {
                roles.insert(sub.clone());
                roles.insert(sup.clone());
            }
            Axiom::ObjectPropertyDomain { role, domain: c }
            | Axiom::ObjectPropertyRange { role, range: c } => {
                roles.insert(role.clone());
                c.collect_signature(classes, roles);
            }
            Axiom::Declaration { kind, name } => {
                match kind {
                    EntityKind::Class => classes,
                    EntityKind::Role => roles,
                    EntityKind::Individual => individuals,
                }
                .insert(name.clone());
            }
            Axiom::ClassAssertion { class, individual } => {
                class.collect_signature(classes, roles);
                individuals.insert(individual.clone());
            }
            Axiom::ObjectPropertyAssertion {
                role,
                subject,
                object,
            } => {
                roles.insert(role.clone());
                individuals.insert(subject.clone());
                individuals.insert(object.clone());
            }
        }
        sig
    }

    /// Checks the reserved-name rules: `owl:Thing`/`owl:Nothing` may only
    /// appear as class expressions, and generated names not at all.
    pub fn validate(&self) -> Result<()> {
        let individual = |n: &EntityName| {
            if n.is_reserved() {
                Err(Error::ReservedName(n.to_string()))
            } else {
                Ok(())
            }
        };
        match self {
            Axiom::SubClassOf { sub, sup } => {
                sub.check_names()?;
                sup.check_names()
            }
            Axiom::EquivalentClasses(ops) | Axiom::DisjointClasses(ops) => {
                ops.iter().try_for_each(|op| op.check_names())
            }
            Axiom::SubObjectPropertyOf { sub, sup } => {
                check_role(sub)?;
                check_role(sup)
            }
            Axiom::ObjectPropertyDomain { role, domain: c }
            | Axiom::ObjectPropertyRange { role, range: c } => {
                check_role(role)?;
                c.check_names()
            }
            Axiom::Declaration { name, .. } => individual(name),
            Axiom::ClassAssertion {
                class,
                individual: ind,
            } => {
                class.check_names()?;
                individual(ind)
            }
            Axiom::ObjectPropertyAssertion {
                role,
                subject,
                object,
            } => {
                check_role(role)?;
                individual(subject)?;
                individual(object)
            }
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &Operands) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::SubClassOf { sub, sup } => write!(f, "SubClassOf({sub} {sup})"),
            Axiom::EquivalentClasses(ops) => {
                f.write_str("EquivalentClasses(")?;
                write_list(f, ops)?;
                f.write_str(")")
            }
            Axiom::DisjointClasses(ops) => {
                f.write_str("DisjointClasses(")?;
                write_list(f, ops)?;
                f.write_str(")")
            }
            Axiom::SubObjectPropertyOf { sub, sup } => {
                write!(f, "SubObjectPropertyOf({sub} {sup})")
            }
            Axiom::ObjectPropertyDomain { role, domain } => {
                write!(f, "ObjectPropertyDomain({role} {domain})")
            }
            Axiom::ObjectPropertyRange { role, range } => {
                write!(f, "ObjectPropertyRange({role} {range})")
            }
            Axiom::Declaration { kind, name } => {
                write!(f, "Declaration({}({name}))", kind.keyword())
            }
            Axiom::ClassAssertion { class, individual } => {
                write!(f, "ClassAssertion({class} {individual})")
            }
            Axiom::ObjectPropertyAssertion {
                role,
                subject,
                object,
            } => {
                write!(f, "ObjectPropertyAssertion({role} {subject} {object})")
            }
        }
    }
}

impl fmt::Debug for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
