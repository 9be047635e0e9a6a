use std::collections::BTreeMap;

use super::lexer::{tokenize, Tok, Token};
use super::DocumentModel;
use crate::error::{Error, Position, Result};
use crate::model::name::{is_identifier, DEFAULT_PREFIX};
use crate::model::{Axiom, ClassExpression, EntityKind, EntityName};

/// OWL constructs that are recognized but outside the supported fragment.
const UNSUPPORTED: &[&str] = &[
    "ObjectUnionOf",
    "ObjectComplementOf",
    "ObjectOneOf",
    "ObjectAllValuesFrom",
    "ObjectHasValue",
    "ObjectHasSelf",
    "ObjectMinCardinality",
    "ObjectMaxCardinality",
    "ObjectExactCardinality",
    "ObjectInverseOf",
    "ObjectPropertyChain",
    "DataSomeValuesFrom",
    "DataAllValuesFrom",
    "DataHasValue",
    "DataMinCardinality",
    "DataMaxCardinality",
    "DataExactCardinality",
    "DataIntersectionOf",
    "DataUnionOf",
    "DataComplementOf",
    "DataOneOf",
    "DatatypeRestriction",
    "DisjointUnion",
    "EquivalentObjectProperties",
    "DisjointObjectProperties",
    "InverseObjectProperties",
    "FunctionalObjectProperty",
    "InverseFunctionalObjectProperty",
    "ReflexiveObjectProperty",
    "IrreflexiveObjectProperty",
    "SymmetricObjectProperty",
    "AsymmetricObjectProperty",
    "TransitiveObjectProperty",
    "SubDataPropertyOf",
    "EquivalentDataProperties",
    "DisjointDataProperties",
    "DataPropertyDomain",
    "DataPropertyRange",
    "FunctionalDataProperty",
    "DatatypeDefinition",
    "HasKey",
    "SameIndividual",
    "DifferentIndividuals",
    "NegativeObjectPropertyAssertion",
    "DataPropertyAssertion",
    "NegativeDataPropertyAssertion",
    "AnnotationAssertion",
    "SubAnnotationPropertyOf",
    "AnnotationPropertyDomain",
    "AnnotationPropertyRange",
    "Annotation",
    "Import",
    "DataProperty",
    "AnnotationProperty",
    "Datatype",
];

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Prefixes must be declared; bare words are not names.
    Document,
    /// Any prefix is accepted and bare words get the default prefix.
    Argument,
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
    prefixes: BTreeMap<String, String>,
    mode: Mode,
}

fn parse_err(pos: Position, message: impl Into<String>) -> Error {
    Error::Parse {
        position: pos,
        message: message.into(),
    }
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.i]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].tok
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i < self.toks.len() - 1 {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Position> {
        let t = self.next();
        if t.tok == want {
            Ok(t.pos)
        } else {
            Err(parse_err(
                t.pos,
                format!("expected {}, found {}", want.describe(), t.tok.describe()),
            ))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<Position> {
        let t = self.next();
        match &t.tok {
            Tok::Word(w) if w == kw => Ok(t.pos),
            other => Err(parse_err(
                t.pos,
                format!("expected `{kw}`, found {}", other.describe()),
            )),
        }
    }

    /// A `Word(` pair at the cursor, as the constructor name.
    fn constructor(&self) -> Option<(String, Position)> {
        match (&self.peek().tok, self.peek_at(1)) {
            (Tok::Word(w), Tok::Open) => Some((w.clone(), self.peek().pos)),
            _ => None,
        }
    }

    fn unsupported_or(&self, word: &str, pos: Position, what: &str) -> Error {
        if UNSUPPORTED.contains(&word) {
            Error::Unsupported {
                construct: word.to_owned(),
                position: Some(pos),
            }
        } else {
            parse_err(pos, format!("unknown {what} `{word}`"))
        }
    }

    fn fold_iri(&self, iri: &str, pos: Position) -> Result<EntityName> {
        let best = self
            .prefixes
            .iter()
            .filter(|(_, exp)| !exp.is_empty() && iri.starts_with(exp.as_str()))
            .filter(|(_, exp)| is_identifier(&iri[exp.len()..]))
            .max_by_key(|(_, exp)| exp.len());
        match best {
            Some((p, exp)) => {
                EntityName::new(p, &iri[exp.len()..]).map_err(|e| parse_err(pos, detail(e)))
            }
            None => Err(parse_err(
                pos,
                format!("IRI <{iri}> does not fall under a declared prefix"),
            )),
        }
    }

    fn entity(&mut self) -> Result<EntityName> {
        if let Some((w, pos)) = self.constructor() {
            return Err(self.unsupported_or(&w, pos, "construct"));
        }
        let t = self.next();
        match t.tok {
            Tok::Word(w) => match w.split_once(':') {
                Some((p, l)) => {
                    if self.mode == Mode::Document && !self.prefixes.contains_key(p) {
                        return Err(parse_err(t.pos, format!("undeclared prefix `{p}:`")));
                    }
                    EntityName::new(p, l).map_err(|e| parse_err(t.pos, detail(e)))
                }
                None if self.mode == Mode::Argument => {
                    EntityName::new(DEFAULT_PREFIX, &w).map_err(|e| parse_err(t.pos, detail(e)))
                }
                None => Err(parse_err(
                    t.pos,
                    format!("expected a prefixed name, found `{w}`"),
                )),
            },
            Tok::Iri(iri) => self.fold_iri(&iri, t.pos),
            other => Err(parse_err(
                t.pos,
                format!("expected an entity name, found {}", other.describe()),
            )),
        }
    }

    fn class_expr(&mut self) -> Result<ClassExpression> {
        let Some((word, pos)) = self.constructor() else {
            return Ok(ClassExpression::named(self.entity()?));
        };
        match word.as_str() {
            "ObjectIntersectionOf" => {
                self.next();
                self.next();
                let mut ops = Vec::new();
                while self.peek().tok != Tok::Close {
                    ops.push(self.class_expr()?);
                }
                let close = self.next().pos;
                if ops.len() < 2 {
                    return Err(parse_err(
                        close,
                        "ObjectIntersectionOf needs at least 2 operands",
                    ));
                }
                Ok(ClassExpression::intersection(ops).expect("two operands"))
            }
            "ObjectSomeValuesFrom" => {
                self.next();
                self.next();
                let role = self.entity()?;
                let filler = self.class_expr()?;
                self.expect(Tok::Close)?;
                Ok(ClassExpression::some(role, filler))
            }
            _ => Err(self.unsupported_or(&word, pos, "class expression constructor")),
        }
    }

    fn class_list(&mut self, keyword: &str) -> Result<Vec<ClassExpression>> {
        let mut ops = Vec::new();
        while self.peek().tok != Tok::Close {
            ops.push(self.class_expr()?);
        }
        if ops.len() < 2 {
            return Err(parse_err(
                self.peek().pos,
                format!("{keyword} needs at least 2 class expressions"),
            ));
        }
        Ok(ops)
    }

    /// One axiom; `None` for declarations of the built-in classes.
    fn axiom(&mut self) -> Result<Option<Axiom>> {
        let Some((word, pos)) = self.constructor() else {
            let t = self.peek();
            return Err(parse_err(
                t.pos,
                format!("expected an axiom, found {}", t.tok.describe()),
            ));
        };
        self.next();
        self.next();
        if let Some((inner, ipos)) = self.constructor() {
            if inner == "Annotation" {
                return Err(self.unsupported_or(&inner, ipos, "construct"));
            }
        }
        let ax = match word.as_str() {
            "SubClassOf" => {
                let sub = self.class_expr()?;
                let sup = self.class_expr()?;
                Axiom::sub_class(sub, sup)
            }
            "EquivalentClasses" => {
                Axiom::equivalent(self.class_list(&word)?).expect("two operands")
            }
            "DisjointClasses" => Axiom::disjoint(self.class_list(&word)?).expect("two operands"),
            "SubObjectPropertyOf" => {
                let sub = self.entity()?;
                let sup = self.entity()?;
                Axiom::SubObjectPropertyOf { sub, sup }
            }
            "ObjectPropertyDomain" => {
                let role = self.entity()?;
                let domain = self.class_expr()?;
                Axiom::ObjectPropertyDomain { role, domain }
            }
            "ObjectPropertyRange" => {
                let role = self.entity()?;
                let range = self.class_expr()?;
                Axiom::ObjectPropertyRange { role, range }
            }
            "Declaration" => {
                let Some((kind_word, kpos)) = self.constructor() else {
                    let t = self.peek();
                    return Err(parse_err(
                        t.pos,
                        format!("expected an entity kind, found {}", t.tok.describe()),
                    ));
                };
                let kind = match kind_word.as_str() {
                    "Class" => EntityKind::Class,
                    "ObjectProperty" => EntityKind::Role,
                    "NamedIndividual" => EntityKind::Individual,
                    _ => return Err(self.unsupported_or(&kind_word, kpos, "entity kind")),
                };
                self.next();
                self.next();
                let name = self.entity()?;
                self.expect(Tok::Close)?;
                self.expect(Tok::Close)?;
                if kind == EntityKind::Class && (name.is_thing() || name.is_nothing()) {
                    return Ok(None);
                }
                let ax = Axiom::declare(kind, name);
                return self.checked(ax, pos).map(Some);
            }
            "ClassAssertion" => {
                let class = self.class_expr()?;
                let individual = self.entity()?;
                Axiom::class_assertion(class, individual)
            }
            "ObjectPropertyAssertion" => {
                let role = self.entity()?;
                let subject = self.entity()?;
                let object = self.entity()?;
                Axiom::property_assertion(role, subject, object)
            }
            _ => return Err(self.unsupported_or(&word, pos, "axiom")),
        };
        self.expect(Tok::Close)?;
        self.checked(ax, pos).map(Some)
    }

    fn checked(&self, ax: Axiom, pos: Position) -> Result<Axiom> {
        ax.validate().map_err(|e| parse_err(pos, detail(e)))?;
        Ok(ax)
    }

    fn prefix_decl(&mut self, declared: &mut BTreeMap<String, String>) -> Result<()> {
        self.expect_keyword("Prefix")?;
        self.expect(Tok::Open)?;
        let t = self.next();
        let prefix = match &t.tok {
            Tok::Word(w) if w.ends_with(':') && is_identifier(&w[..w.len() - 1]) => {
                w[..w.len() - 1].to_owned()
            }
            Tok::Word(w) if w == ":" => {
                return Err(parse_err(t.pos, "the empty prefix is not supported"))
            }
            other => {
                return Err(parse_err(
                    t.pos,
                    format!("expected a prefix name, found {}", other.describe()),
                ))
            }
        };
        self.expect(Tok::Equals)?;
        let t = self.next();
        let Tok::Iri(iri) = t.tok else {
            return Err(parse_err(
                t.pos,
                format!("expected an IRI, found {}", t.tok.describe()),
            ));
        };
        self.expect(Tok::Close)?;
        if let Some(prev) = declared.get(&prefix) {
            if *prev != iri {
                return Err(parse_err(
                    t.pos,
                    format!("prefix `{prefix}:` declared twice"),
                ));
            }
        }
        declared.insert(prefix.clone(), iri.clone());
        self.prefixes.insert(prefix, iri);
        Ok(())
    }

    fn document(&mut self) -> Result<DocumentModel> {
        let mut declared = BTreeMap::new();
        while matches!(&self.peek().tok, Tok::Word(w) if w == "Prefix") {
            self.prefix_decl(&mut declared)?;
        }
        self.expect_keyword("Ontology")?;
        self.expect(Tok::Open)?;
        let mut name = None;
        if let Tok::Iri(iri) = &self.peek().tok {
            name = Some(iri.clone());
            self.next();
            if let Tok::Iri(_) = &self.peek().tok {
                return Err(Error::Unsupported {
                    construct: "version IRI".into(),
                    position: Some(self.peek().pos),
                });
            }
        }
        let mut axioms = std::collections::BTreeSet::new();
        while self.peek().tok != Tok::Close {
            if let Some(ax) = self.axiom()? {
                axioms.insert(ax);
            }
        }
        let close = self.next().pos;
        let t = self.peek();
        if t.tok != Tok::Eof {
            return Err(parse_err(
                close,
                format!(
                    "this `)` closes the ontology but {} follows",
                    t.tok.describe()
                ),
            ));
        }
        Ok(DocumentModel {
            prefixes: self.prefixes.clone(),
            ontology_name: name,
            axioms,
        })
    }
}

pub fn parse(text: &str) -> Result<DocumentModel> {
    let mut p = Parser {
        toks: tokenize(text)?,
        i: 0,
        prefixes: DocumentModel::new().prefixes,
        mode: Mode::Document,
    };
    p.document()
}

fn argument_parser(text: &str) -> Result<Parser> {
    let toks = tokenize(text).map_err(as_malformed)?;
    Ok(Parser {
        toks,
        i: 0,
        prefixes: DocumentModel::new().prefixes,
        mode: Mode::Argument,
    })
}

fn detail(e: Error) -> String {
    match e {
        Error::Malformed(m) => m,
        other => other.to_string(),
    }
}

fn as_malformed(e: Error) -> Error {
    match e {
        Error::Parse { position, message } => Error::Malformed(format!(
            "bad argument at column {}: {message}",
            position.column
        )),
        other => other,
    }
}

fn finish<T>(p: &mut Parser, value: Result<T>) -> Result<T> {
    let value = value.map_err(as_malformed)?;
    let t = p.peek();
    if t.tok != Tok::Eof {
        return Err(as_malformed(parse_err(
            t.pos,
            format!("unexpected {}", t.tok.describe()),
        )));
    }
    Ok(value)
}

/// Parses a class expression given as a command argument. Bare names get
/// the `ex:` prefix; `owl:Thing`/`owl:Nothing` become `Top`/`Bottom`.
pub fn parse_class_expression(text: &str) -> Result<ClassExpression> {
    let mut p = argument_parser(text)?;
    let v = p.class_expr();
    finish(&mut p, v)
}

/// Parses an entity name given as a command argument.
pub fn parse_entity_name(text: &str) -> Result<EntityName> {
    let mut p = argument_parser(text)?;
    let v = p.entity();
    finish(&mut p, v)
}
