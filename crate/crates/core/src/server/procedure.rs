//! Injected procedures: named command macros loaded from a file.
//!
//! ```text
//! # comment
//! proc place(obj, room)
//!     ADD INDIVIDUAL CLASS $obj Object
//!     ADD OBJECTPROP INDIVIDUAL isIn $obj $room
//! ```
//!
//! Body lines are indented command lines. Parameters are substituted
//! textually before a step is tokenized, so a value containing spaces
//! splits into several arguments unless the template quotes it.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::name::is_identifier;
use crate::protocol::{find_row, parse_command_line, Spec, Verb};

/// Name of the built-in scene-abstraction procedure.
pub const ABSTRACT_CLASS: &str = "abstract-class";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    pub line: usize,
    pub text: String,
}

fn is_param_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// `$name` references in `text`, in order.
fn references(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut rest = text;
    while let Some(i) = rest.find('$') {
        let tail = &rest[i + 1..];
        let end = tail.find(|c: char| !is_param_char(c)).unwrap_or(tail.len());
        out.push(tail[..end].to_owned());
        rest = &tail[end..];
    }
    out
}

impl Template {
    pub fn instantiate(&self, params: &[String], args: &[String]) -> Result<String> {
        let mut out = String::new();
        let mut rest = self.text.as_str();
        while let Some(i) = rest.find('$') {
            out.push_str(&rest[..i]);
            let tail = &rest[i + 1..];
            let end = tail.find(|c: char| !is_param_char(c)).unwrap_or(tail.len());
            let name = &tail[..end];
            let k = params
                .iter()
                .position(|p| p == name)
                .ok_or_else(|| Error::Internal(format!("undeclared parameter `${name}`")))?;
            out.push_str(&args[k]);
            rest = &tail[end..];
        }
        out.push_str(rest);
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Macro {
    pub name: String,
    pub params: Vec<String>,
    pub body: Vec<Template>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Procedure {
    /// `abstract-class individual NewClass`
    AbstractClass,
    Macro(Macro),
}

impl Procedure {
    pub fn arity(&self) -> usize {
        match self {
            Procedure::AbstractClass => 2,
            Procedure::Macro(m) => m.params.len(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProcedureRegistry {
    macros: BTreeMap<String, Macro>,
}

/// A diagnostic from a procedure file.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ProcedureError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ProcedureError {
    ProcedureError {
        line,
        message: message.into(),
    }
}

fn parse_header(
    line: usize,
    text: &str,
) -> std::result::Result<(String, Vec<String>), ProcedureError> {
    let rest = text
        .strip_prefix("proc")
        .filter(|r| r.starts_with(char::is_whitespace));
    let rest = rest
        .ok_or_else(|| err(line, "expected `proc <name>(<params>)`"))?
        .trim();
    let (name, params) = rest
        .split_once('(')
        .ok_or_else(|| err(line, "expected `(` after the procedure name"))?;
    let name = name.trim();
    let params = params
        .trim_end()
        .strip_suffix(')')
        .ok_or_else(|| err(line, "expected `)` closing the parameter list"))?;
    if !is_identifier(name) {
        return Err(err(line, format!("invalid procedure name `{name}`")));
    }
    let params: Vec<String> = if params.trim().is_empty() {
        Vec::new()
    } else {
        params.split(',').map(|p| p.trim().to_owned()).collect()
    };
    for (i, p) in params.iter().enumerate() {
        if p.is_empty()
            || !p.chars().all(is_param_char)
            || p.starts_with(|c: char| c.is_ascii_digit())
        {
            return Err(err(line, format!("invalid parameter name `{p}`")));
        }
        if params[..i].contains(p) {
            return Err(err(line, format!("parameter `{p}` declared twice")));
        }
    }
    Ok((name.to_owned(), params))
}

fn check_step(
    line: usize,
    text: &str,
    params: &[String],
) -> std::result::Result<(), ProcedureError> {
    for r in references(text) {
        if r.is_empty() {
            return Err(err(line, "`$` without a parameter name"));
        }
        if !params.contains(&r) {
            return Err(err(line, format!("undeclared parameter `${r}`")));
        }
    }
    let cmd = parse_command_line(text).map_err(|e| err(line, e.to_string()))?;
    let verb: Verb = cmd
        .command
        .parse()
        .map_err(|()| err(line, format!("unknown command `{}`", cmd.command)))?;
    if verb == Verb::Proc {
        return Err(err(line, "procedures cannot call procedures"));
    }
    let spec = |s: &str| -> std::result::Result<Option<Spec>, ProcedureError> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse()
                .map(Some)
                .map_err(|()| err(line, format!("unknown specifier `{s}`")))
        }
    };
    let (p, s) = (spec(&cmd.primary_spec)?, spec(&cmd.secondary_spec)?);
    if find_row(verb, p, s).is_none() {
        return Err(err(line, format!("`{text}` is not a command")));
    }
    Ok(())
}

impl ProcedureRegistry {
    pub fn parse(text: &str) -> std::result::Result<Self, ProcedureError> {
        let mut reg = ProcedureRegistry::default();
        let mut current: Option<Macro> = None;
        let finish = |m: Option<Macro>, reg: &mut ProcedureRegistry| {
            if let Some(m) = m {
                reg.macros.insert(m.name.clone(), m);
            }
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if raw.starts_with(char::is_whitespace) {
                let m = current
                    .as_mut()
                    .ok_or_else(|| err(line, "command line outside a procedure"))?;
                check_step(line, trimmed, &m.params)?;
                m.body.push(Template {
                    line,
                    text: trimmed.to_owned(),
                });
                continue;
            }
            let (name, params) = parse_header(line, trimmed)?;
            if name == ABSTRACT_CLASS {
                return Err(err(line, format!("`{name}` is a built-in procedure")));
            }
            if reg.macros.contains_key(&name) || current.as_ref().is_some_and(|m| m.name == name) {
                return Err(err(line, format!("procedure `{name}` defined twice")));
            }
            finish(current.take(), &mut reg);
            current = Some(Macro {
                name,
                params,
                body: Vec::new(),
            });
        }
        finish(current, &mut reg);
        Ok(reg)
    }

    pub fn load(path: &Path) -> std::result::Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn get(&self, name: &str) -> Result<Procedure> {
        if name == ABSTRACT_CLASS {
            return Ok(Procedure::AbstractClass);
        }
        self.macros
            .get(name)
            .cloned()
            .map(Procedure::Macro)
            .ok_or_else(|| Error::UnknownProcedure(name.to_owned()))
    }

    /// User-defined procedure names, sorted.
    pub fn names(&self) -> Vec<&str> {
        self.macros.keys().map(String::as_str).collect()
    }
}
