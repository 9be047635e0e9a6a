//! The human command grammar: `VERB [PRIMARY [SECONDARY]] args...`,
//! tokenized with shell quoting rules.
//!
//! Up to two tokens after the verb are taken as specifiers when they are
//! specifier atoms, so specifier words cannot be used as bare arguments in
//! those positions.

use super::{Spec, WireRequest};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandLine {
    pub command: String,
    pub primary_spec: String,
    pub secondary_spec: String,
    pub args: Vec<String>,
}

impl CommandLine {
    pub fn into_wire(self, client: &str, reference: &str) -> WireRequest {
        WireRequest {
            client_name: client.to_owned(),
            reference_name: reference.to_owned(),
            command: self.command,
            primary_spec: self.primary_spec,
            secondary_spec: self.secondary_spec,
            args: self.args,
        }
    }
}

pub fn parse_command_line(line: &str) -> Result<CommandLine> {
    let tokens = shlex::split(line)
        .ok_or_else(|| Error::Malformed(format!("unbalanced quotes in `{line}`")))?;
    let mut tokens = tokens.into_iter().peekable();
    let command = tokens
        .next()
        .ok_or_else(|| Error::Malformed("empty command".into()))?;
    let mut specs = Vec::new();
    while specs.len() < 2 {
        match tokens.peek() {
            Some(t) if t.parse::<Spec>().is_ok() => specs.push(tokens.next().expect("peeked")),
            _ => break,
        }
    }
    let mut specs = specs.into_iter();
    Ok(CommandLine {
        command,
        primary_spec: specs.next().unwrap_or_default(),
        secondary_spec: specs.next().unwrap_or_default(),
        args: tokens.collect(),
    })
}

/// Inverse of [`parse_command_line`] for display and recording.
pub fn format_command_line(wire: &WireRequest) -> String {
    let mut parts = vec![wire.command.clone()];
    for spec in [&wire.primary_spec, &wire.secondary_spec] {
        if !spec.is_empty() {
            parts.push(spec.clone());
        }
    }
    for arg in &wire.args {
        parts.push(match shlex::try_quote(arg) {
            Ok(q) => q.into_owned(),
            Err(_) => arg.clone(),
        });
    }
    parts.join(" ")
}
