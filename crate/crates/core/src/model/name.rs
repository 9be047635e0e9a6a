//! Namespaced entity identifiers.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Prefix used when a bare local name is given on the command line.
pub const DEFAULT_PREFIX: &str = "ex";

/// Prefix reserved for auxiliary names generated by the reasoner.
pub const GENERATED_PREFIX: &str = "gen";

pub const OWL_THING: &str = "owl:Thing";
pub const OWL_NOTHING: &str = "owl:Nothing";

/// A `prefix:local` name for a class, role or individual.
///
/// Equality, ordering and hashing all go through the canonical text form, so
/// sorting a list of names sorts it lexicographically by `prefix:local`.
#[derive(Clone)]
pub struct EntityName {
    text: Arc<str>,
    colon: usize,
}

/// Returns true if `s` matches `[A-Za-z_][A-Za-z0-9_-]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

impl EntityName {
    pub fn new(prefix: &str, local: &str) -> Result<Self> {
        if !is_identifier(prefix) {
            return Err(Error::Malformed(format!("invalid name prefix `{prefix}`")));
        }
        if !is_identifier(local) {
            return Err(Error::Malformed(format!("invalid local name `{local}`")));
        }
        Ok(EntityName {
            text: format!("{prefix}:{local}").into(),
            colon: prefix.len(),
        })
    }

    /// Parses `prefix:local`, or a bare `local` which gets the `ex:` prefix.
    pub fn parse_with_default(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some((p, l)) => EntityName::new(p, l),
            None => EntityName::new(DEFAULT_PREFIX, s),
        }
    }

    pub fn prefix(&self) -> &str {
        &self.text[..self.colon]
    }

    pub fn local(&self) -> &str {
        &self.text[self.colon + 1..]
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn is_thing(&self) -> bool {
        &*self.text == OWL_THING
    }

    pub fn is_nothing(&self) -> bool {
        &*self.text == OWL_NOTHING
    }

    /// `owl:Thing`, `owl:Nothing` and anything under the generated prefix.
    pub fn is_reserved(&self) -> bool {
        self.is_thing() || self.is_nothing() || self.prefix() == GENERATED_PREFIX
    }

    pub(crate) fn thing() -> Self {
        EntityName::new("owl", "Thing").expect("valid")
    }

    pub(crate) fn nothing() -> Self {
        EntityName::new("owl", "Nothing").expect("valid")
    }
}

impl FromStr for EntityName {
    type Err = Error;

    /// Strict form: the prefix is mandatory.
    fn from_str(s: &str) -> Result<Self> {
        let (p, l) = s
            .split_once(':')
            .ok_or_else(|| Error::Malformed(format!("`{s}` is not a prefixed name")))?;
        EntityName::new(p, l)
    }
}

impl PartialEq for EntityName {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for EntityName {}

impl Hash for EntityName {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.text.hash(state)
    }
}

impl PartialOrd for EntityName {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EntityName {
    fn cmp(&self, other: &Self) -> Ordering {
        self.text.cmp(&other.text)
    }
}

impl fmt::Display for EntityName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl fmt::Debug for EntityName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text)
    }
}
