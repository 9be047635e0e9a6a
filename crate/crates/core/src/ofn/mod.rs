//! OWL 2 functional-style syntax for the supported fragment.
//!
//! Only the axiom and class expression forms the reasoner handles are
//! accepted; other recognized OWL constructs are rejected by name.

mod lexer;
mod parser;

use std::collections::{BTreeMap, BTreeSet};

pub use parser::{parse, parse_class_expression, parse_entity_name};

use crate::model::name::{DEFAULT_PREFIX, GENERATED_PREFIX};
use crate::model::Axiom;

pub const EX_IRI: &str = "http://example.org/";
pub const OWL_IRI: &str = "http://www.w3.org/2002/07/owl#";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DocumentModel {
    pub prefixes: BTreeMap<String, String>,
    pub ontology_name: Option<String>,
    pub axioms: BTreeSet<Axiom>,
}

impl Default for DocumentModel {
    fn default() -> Self {
        DocumentModel::new()
    }
}

impl DocumentModel {
    /// An empty document with the predeclared `ex:` and `owl:` prefixes.
    pub fn new() -> Self {
        DocumentModel {
            prefixes: BTreeMap::from([
                (DEFAULT_PREFIX.to_owned(), EX_IRI.to_owned()),
                ("owl".to_owned(), OWL_IRI.to_owned()),
            ]),
            ontology_name: None,
            axioms: BTreeSet::new(),
        }
    }

    /// A document over `axioms`; prefixes used by the axioms but missing from
    /// `prefixes` are given a `urn:armordb:<prefix>#` expansion.
    pub fn from_axioms(
        prefixes: &BTreeMap<String, String>,
        ontology_name: Option<String>,
        axioms: impl IntoIterator<Item = Axiom>,
    ) -> Self {
        let mut doc = DocumentModel::new();
        doc.prefixes
            .extend(prefixes.iter().map(|(k, v)| (k.clone(), v.clone())));
        doc.ontology_name = ontology_name;
        doc.axioms = axioms.into_iter().collect();
        for p in doc.used_prefixes() {
            doc.prefixes
                .entry(p.clone())
                .or_insert_with(|| format!("urn:armordb:{p}#"));
        }
        doc
    }

    pub fn used_prefixes(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for ax in &self.axioms {
            for n in ax.signature().all() {
                out.insert(n.prefix().to_owned());
            }
        }
        out.remove(GENERATED_PREFIX);
        out
    }
}

/// Canonical text: prefixes in name order, then the axioms one per line in
/// the order of their text, LF line endings.
pub fn serialize(doc: &DocumentModel) -> String {
    let mut out = String::new();
    for (p, iri) in &doc.prefixes {
        out.push_str(&format!("Prefix({p}:=<{iri}>)\n"));
    }
    out.push_str("Ontology(");
    if let Some(name) = &doc.ontology_name {
        out.push_str(&format!("<{name}>"));
    }
    out.push('\n');
    let mut lines: Vec<String> = doc.axioms.iter().map(|a| a.to_string()).collect();
    lines.sort();
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out.push_str(")\n");
    out
}
