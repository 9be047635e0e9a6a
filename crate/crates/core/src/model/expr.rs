use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::model::EntityName;

/// Two or more class expressions compared as a multiset.
///
/// Operands are kept sorted so that derived equality, ordering and the
/// rendered text are all independent of the order they were supplied in.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Operands(Vec<ClassExpression>);

impl Operands {
    pub fn new(mut ops: Vec<ClassExpression>) -> Result<Self> {
        if ops.len() < 2 {
            return Err(Error::BadArity(format!(
                "expected at least 2 class expressions, got {}",
                ops.len()
            )));
        }
        ops.sort();
        Ok(Operands(ops))
    }

    pub fn as_slice(&self) -> &[ClassExpression] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ClassExpression> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl<'a> IntoIterator for &'a Operands {
    type Item = &'a ClassExpression;
    type IntoIter = std::slice::Iter<'a, ClassExpression>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Debug for Operands {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

/// A concept term of the EL-with-bottom fragment.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassExpression {
    Named(EntityName),
    Top,
    Bottom,
    Intersection(Operands),
    Existential(EntityName, Box<ClassExpression>),
}

impl ClassExpression {
    /// Maps `owl:Thing`/`owl:Nothing` onto `Top`/`Bottom`.
    pub fn named(name: EntityName) -> Self {
        if name.is_thing() {
            ClassExpression::Top
        } else if name.is_nothing() {
            ClassExpression::Bottom
        } else {
            ClassExpression::Named(name)
        }
    }

    pub fn intersection(ops: Vec<ClassExpression>) -> Result<Self> {
        Operands::new(ops).map(ClassExpression::Intersection)
    }

    pub fn some(role: EntityName, filler: ClassExpression) -> Self {
        ClassExpression::Existential(role, Box::new(filler))
    }

    pub fn as_named(&self) -> Option<&EntityName> {
        match self {
            ClassExpression::Named(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(
            self,
            ClassExpression::Named(_) | ClassExpression::Top | ClassExpression::Bottom
        )
    }

    /// Class names and role names mentioned in the expression.
    pub fn collect_signature(
        &self,
        classes: &mut BTreeSet<EntityName>,
        roles: &mut BTreeSet<EntityName>,
    ) {
        match self {
            ClassExpression::Named(n) => {
                classes.insert(n.clone());
            }
            ClassExpression::Top | ClassExpression::Bottom => {}
            ClassExpression::Intersection(ops) => {
                for op in ops {
                    op.collect_signature(classes, roles);
                }
            }
            ClassExpression::Existential(r, filler) => {
                roles.insert(r.clone());
                filler.collect_signature(classes, roles);
            }
        }
    }

    pub(crate) fn check_names(&self) -> Result<()> {
        match self {
            ClassExpression::Named(n) if n.is_reserved() => Err(Error::ReservedName(n.to_string())),
            ClassExpression::Named(_) | ClassExpression::Top | ClassExpression::Bottom => Ok(()),
            ClassExpression::Intersection(ops) => ops.iter().try_for_each(|op| op.check_names()),
            ClassExpression::Existential(r, filler) => {
                check_role(r)?;
                filler.check_names()
            }
        }
    }
}

pub(crate) fn check_role(r: &EntityName) -> Result<()> {
    if r.is_reserved() {
        Err(Error::ReservedName(r.to_string()))
    } else {
        Ok(())
    }
}

impl fmt::Display for ClassExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassExpression::Named(n) => write!(f, "{n}"),
            ClassExpression::Top => f.write_str(crate::model::name::OWL_THING),
            ClassExpression::Bottom => f.write_str(crate::model::name::OWL_NOTHING),
            ClassExpression::Intersection(ops) => {
                f.write_str("ObjectIntersectionOf(")?;
                for (i, op) in ops.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{op}")?;
                }
                f.write_str(")")
            }
            ClassExpression::Existential(r, filler) => {
                write!(f, "ObjectSomeValuesFrom({r} {filler})")
            }
        }
    }
}

impl fmt::Debug for ClassExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
