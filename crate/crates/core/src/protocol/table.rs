use std::fmt;
use std::str::FromStr;

/// Command verbs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verb {
    Add,
    Remove,
    Replace,
    Query,
    Load,
    Save,
    Create,
    Drop,
    Mount,
    Unmount,
    Reason,
    Apply,
    Config,
    Proc,
    Dump,
}

impl Verb {
    pub const ALL: [Verb; 15] = [
        Verb::Add,
        Verb::Remove,
        Verb::Replace,
        Verb::Query,
        Verb::Load,
        Verb::Save,
        Verb::Create,
        Verb::Drop,
        Verb::Mount,
        Verb::Unmount,
        Verb::Reason,
        Verb::Apply,
        Verb::Config,
        Verb::Proc,
        Verb::Dump,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Verb::Add => "ADD",
            Verb::Remove => "REMOVE",
            Verb::Replace => "REPLACE",
            Verb::Query => "QUERY",
            Verb::Load => "LOAD",
            Verb::Save => "SAVE",
            Verb::Create => "CREATE",
            Verb::Drop => "DROP",
            Verb::Mount => "MOUNT",
            Verb::Unmount => "UNMOUNT",
            Verb::Reason => "REASON",
            Verb::Apply => "APPLY",
            Verb::Config => "CONFIG",
            Verb::Proc => "PROC",
            Verb::Dump => "DUMP",
        }
    }
}

impl FromStr for Verb {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Verb::ALL.into_iter().find(|v| v.as_str() == s).ok_or(())
    }
}

impl fmt::Display for Verb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Specifier atoms refining a verb.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spec {
    Class,
    Individual,
    ObjectProp,
    Disjoint,
    Equiv,
    Domain,
    Range,
    Ind,
    File,
    Flag,
    Force,
}

impl Spec {
    pub const ALL: [Spec; 11] = [
        Spec::Class,
        Spec::Individual,
        Spec::ObjectProp,
        Spec::Disjoint,
        Spec::Equiv,
        Spec::Domain,
        Spec::Range,
        Spec::Ind,
        Spec::File,
        Spec::Flag,
        Spec::Force,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Spec::Class => "CLASS",
            Spec::Individual => "INDIVIDUAL",
            Spec::ObjectProp => "OBJECTPROP",
            Spec::Disjoint => "DISJOINT",
            Spec::Equiv => "EQUIV",
            Spec::Domain => "DOMAIN",
            Spec::Range => "RANGE",
            Spec::Ind => "IND",
            Spec::File => "FILE",
            Spec::Flag => "FLAG",
            Spec::Force => "FORCE",
        }
    }
}

impl FromStr for Spec {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Spec::ALL.into_iter().find(|v| v.as_str() == s).ok_or(())
    }
}

impl fmt::Display for Spec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arity {
    Exactly(usize),
    AtLeast(usize),
    Between(usize, usize),
}

impl Arity {
    pub fn accepts(self, n: usize) -> bool {
        match self {
            Arity::Exactly(k) => n == k,
            Arity::AtLeast(k) => n >= k,
            Arity::Between(lo, hi) => (lo..=hi).contains(&n),
        }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arity::Exactly(k) => write!(f, "{k}"),
            Arity::AtLeast(k) => write!(f, "{k} or more"),
            Arity::Between(lo, hi) => write!(f, "{lo} to {hi}"),
        }
    }
}

/// One legal `(verb, primary, secondary, arity)` combination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CommandRow {
    pub verb: Verb,
    pub primary: Option<Spec>,
    pub secondary: Option<Spec>,
    pub arity: Arity,
    pub usage: &'static str,
}

const fn row(
    verb: Verb,
    primary: Option<Spec>,
    secondary: Option<Spec>,
    arity: Arity,
    usage: &'static str,
) -> CommandRow {
    CommandRow {
        verb,
        primary,
        secondary,
        arity,
        usage,
    }
}

use Arity::*;
use Spec::*;

macro_rules! manipulation_rows {
    ($verb:expr) => {
        [
            row(
                $verb,
                Some(Class),
                None,
                Exactly(1),
                "class: declare a class",
            ),
            row(
                $verb,
                Some(Individual),
                None,
                Exactly(1),
                "individual: declare an individual",
            ),
            row(
                $verb,
                Some(ObjectProp),
                None,
                Exactly(1),
                "property: declare an object property",
            ),
            row(
                $verb,
                Some(Individual),
                Some(Class),
                Exactly(2),
                "individual class: class assertion",
            ),
            row(
                $verb,
                Some(Class),
                Some(Class),
                Exactly(2),
                "sub super: subclass axiom",
            ),
            row(
                $verb,
                Some(ObjectProp),
                Some(Individual),
                Exactly(3),
                "property subject object: property assertion",
            ),
            row(
                $verb,
                Some(ObjectProp),
                Some(ObjectProp),
                Exactly(2),
                "sub super: sub-property axiom",
            ),
            row(
                $verb,
                Some(Disjoint),
                Some(Class),
                AtLeast(2),
                "class class...: disjoint classes",
            ),
            row(
                $verb,
                Some(Equiv),
                Some(Class),
                Exactly(2),
                "class class: equivalent classes",
            ),
            row(
                $verb,
                Some(Domain),
                Some(ObjectProp),
                Exactly(2),
                "property class: property domain",
            ),
            row(
                $verb,
                Some(Range),
                Some(ObjectProp),
                Exactly(2),
                "property class: property range",
            ),
        ]
    };
}

static ADD_ROWS: [CommandRow; 11] = manipulation_rows!(Verb::Add);
static REMOVE_ROWS: [CommandRow; 11] = manipulation_rows!(Verb::Remove);

static OTHER_ROWS: [CommandRow; 17] = [
    row(
        Verb::Replace,
        Some(ObjectProp),
        Some(Individual),
        Exactly(4),
        "property subject new old: replace a property value",
    ),
    row(
        Verb::Query,
        Some(Ind),
        Some(Class),
        Between(1, 2),
        "class [all|direct]: instances of a class expression",
    ),
    row(
        Verb::Query,
        Some(Class),
        Some(Ind),
        Between(1, 2),
        "individual [all|direct][+top]: types of an individual",
    ),
    row(
        Verb::Query,
        Some(Class),
        Some(Class),
        Exactly(2),
        "class sub|sup|equiv: hierarchy neighbours",
    ),
    row(
        Verb::Query,
        Some(ObjectProp),
        Some(Ind),
        Exactly(2),
        "property subject: property values",
    ),
    row(
        Verb::Load,
        Some(File),
        None,
        Exactly(1),
        "path: load an ontology document",
    ),
    row(
        Verb::Save,
        Some(File),
        None,
        Exactly(1),
        "path: save the ontology document",
    ),
    row(Verb::Create, None, None, Exactly(0), "create the reference"),
    row(Verb::Drop, None, None, Exactly(0), "drop the reference"),
    row(
        Verb::Mount,
        None,
        None,
        Exactly(0),
        "take the manipulation lease",
    ),
    row(
        Verb::Unmount,
        None,
        None,
        Exactly(0),
        "release the manipulation lease",
    ),
    row(
        Verb::Unmount,
        Some(Force),
        None,
        Exactly(0),
        "clear the lease whoever holds it",
    ),
    row(
        Verb::Reason,
        None,
        None,
        Exactly(0),
        "apply buffered changes and re-run the reasoner",
    ),
    row(
        Verb::Apply,
        None,
        None,
        Exactly(0),
        "apply buffered changes",
    ),
    row(
        Verb::Config,
        Some(Flag),
        None,
        Exactly(2),
        "flag true|false: set a reference flag",
    ),
    row(
        Verb::Proc,
        None,
        None,
        AtLeast(1),
        "name args...: run an injected procedure",
    ),
    row(
        Verb::Dump,
        None,
        None,
        Exactly(0),
        "serialize the ontology into the description",
    ),
];

/// The closed set of legal command rows.
pub fn command_table() -> impl Iterator<Item = &'static CommandRow> {
    ADD_ROWS
        .iter()
        .chain(REMOVE_ROWS.iter())
        .chain(OTHER_ROWS.iter())
}

pub fn find_row(
    verb: Verb,
    primary: Option<Spec>,
    secondary: Option<Spec>,
) -> Option<&'static CommandRow> {
    command_table().find(|r| r.verb == verb && r.primary == primary && r.secondary == secondary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_examples_are_rows() {
        let r = find_row(Verb::Add, Some(Class), None).unwrap();
        assert!(r.arity.accepts(1));
        let r = find_row(Verb::Add, Some(ObjectProp), Some(Individual)).unwrap();
        assert!(r.arity.accepts(3));
        assert!(!r.arity.accepts(2));
    }

    #[test]
    fn add_class_individual_is_not_a_row() {
        assert!(find_row(Verb::Add, Some(Class), Some(Individual)).is_none());
    }

    #[test]
    fn rows_are_unique() {
        let rows: Vec<_> = command_table().collect();
        for (i, a) in rows.iter().enumerate() {
            for b in &rows[i + 1..] {
                assert!(
                    !(a.verb == b.verb && a.primary == b.primary && a.secondary == b.secondary),
                    "{a:?}"
                );
            }
        }
        assert_eq!(rows.len(), 39);
    }

    #[test]
    fn every_verb_has_a_row() {
        for v in Verb::ALL {
            assert!(command_table().any(|r| r.verb == v), "{v}");
            assert_eq!(v.as_str().parse::<Verb>(), Ok(v));
        }
    }
}
