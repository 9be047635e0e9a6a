use serde::{Deserialize, Serialize};

use super::{find_row, ErrorCode, Spec, Verb};
use crate::error::{Error, Result};
use crate::model::name::is_identifier;

/// A request exactly as it travels on the wire, before validation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireRequest {
    pub client_name: String,
    pub reference_name: String,
    pub command: String,
    pub primary_spec: String,
    pub secondary_spec: String,
    pub args: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireResponse {
    pub success: bool,
    pub consistent: bool,
    pub error_code: u16,
    pub error_description: String,
    pub queried_names: Vec<String>,
    pub applied: bool,
    pub revision: u64,
}

/// A validated request: its command triple is a row of the command table
/// and the argument count matches the row's arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandRequest {
    pub client_name: String,
    pub reference_name: String,
    pub command: Verb,
    pub primary_spec: Option<Spec>,
    pub secondary_spec: Option<Spec>,
    pub args: Vec<String>,
}

impl CommandRequest {
    pub fn new(
        client: &str,
        reference: &str,
        command: Verb,
        primary: Option<Spec>,
        secondary: Option<Spec>,
        args: Vec<String>,
    ) -> Result<Self> {
        CommandRequest::try_from(WireRequest {
            client_name: client.to_owned(),
            reference_name: reference.to_owned(),
            command: command.as_str().to_owned(),
            primary_spec: primary.map(|s| s.as_str().to_owned()).unwrap_or_default(),
            secondary_spec: secondary.map(|s| s.as_str().to_owned()).unwrap_or_default(),
            args,
        })
    }

    pub fn to_wire(&self) -> WireRequest {
        WireRequest {
            client_name: self.client_name.clone(),
            reference_name: self.reference_name.clone(),
            command: self.command.as_str().to_owned(),
            primary_spec: self
                .primary_spec
                .map(|s| s.as_str().to_owned())
                .unwrap_or_default(),
            secondary_spec: self
                .secondary_spec
                .map(|s| s.as_str().to_owned())
                .unwrap_or_default(),
            args: self.args.clone(),
        }
    }
}

fn spec_token(token: &str, wire: &WireRequest) -> Result<Option<Spec>> {
    if token.is_empty() {
        return Ok(None);
    }
    token.parse().map(Some).map_err(|()| {
        Error::UnknownCommand(format!("unknown specifier `{token}` in {}", describe(wire)))
    })
}

fn describe(wire: &WireRequest) -> String {
    let mut s = wire.command.clone();
    for spec in [&wire.primary_spec, &wire.secondary_spec] {
        s.push(' ');
        s.push_str(if spec.is_empty() { "-" } else { spec });
    }
    s
}

impl TryFrom<WireRequest> for CommandRequest {
    type Error = Error;

    fn try_from(wire: WireRequest) -> Result<Self> {
        if !is_identifier(&wire.client_name) {
            return Err(Error::Malformed(format!(
                "invalid client_name `{}`",
                wire.client_name
            )));
        }
        if !is_identifier(&wire.reference_name) {
            return Err(Error::Malformed(format!(
                "invalid reference_name `{}`",
                wire.reference_name
            )));
        }
        let command: Verb = wire
            .command
            .parse()
            .map_err(|()| Error::UnknownCommand(format!("unknown command `{}`", wire.command)))?;
        let primary = spec_token(&wire.primary_spec, &wire)?;
        let secondary = spec_token(&wire.secondary_spec, &wire)?;
        let row = find_row(command, primary, secondary).ok_or_else(|| {
            Error::UnknownCommand(format!("`{}` is not a command", describe(&wire)))
        })?;
        if !row.arity.accepts(wire.args.len()) {
            return Err(Error::BadArity(format!(
                "{} takes {} argument(s), got {}",
                describe(&wire),
                row.arity,
                wire.args.len()
            )));
        }
        Ok(CommandRequest {
            client_name: wire.client_name,
            reference_name: wire.reference_name,
            command,
            primary_spec: primary,
            secondary_spec: secondary,
            args: wire.args,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResponse {
    pub success: bool,
    pub consistent: bool,
    pub error_code: ErrorCode,
    pub error_description: String,
    pub queried_names: Vec<String>,
    pub applied: bool,
    pub revision: u64,
}

impl CommandResponse {
    pub fn ok(consistent: bool, revision: u64) -> Self {
        CommandResponse {
            success: true,
            consistent,
            error_code: ErrorCode::Ok,
            error_description: String::new(),
            queried_names: Vec::new(),
            applied: false,
            revision,
        }
    }

    /// An error response; `consistent` and `revision` describe the last known
    /// state of the target reference (false/0 when there is none).
    pub fn error(err: &Error, consistent: bool, revision: u64) -> Self {
        CommandResponse {
            success: false,
            consistent,
            error_code: err.code(),
            error_description: err.to_string(),
            queried_names: Vec::new(),
            applied: false,
            revision,
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        self.queried_names = names;
        self
    }

    pub fn with_applied(mut self, applied: bool) -> Self {
        self.applied = applied;
        self
    }

    pub fn to_wire(&self) -> WireResponse {
        WireResponse {
            success: self.success,
            consistent: self.consistent,
            error_code: self.error_code.code(),
            error_description: self.error_description.clone(),
            queried_names: self.queried_names.clone(),
            applied: self.applied,
            revision: self.revision,
        }
    }
}

impl TryFrom<WireResponse> for CommandResponse {
    type Error = Error;

    fn try_from(wire: WireResponse) -> Result<Self> {
        let code = ErrorCode::from_code(wire.error_code)
            .ok_or_else(|| Error::Malformed(format!("unknown error code {}", wire.error_code)))?;
        if wire.success != (code == ErrorCode::Ok) {
            return Err(Error::Malformed(format!(
                "success={} with error code {}",
                wire.success, wire.error_code
            )));
        }
        if code != ErrorCode::Ok && wire.error_description.is_empty() {
            return Err(Error::Malformed(format!(
                "error code {} without description",
                wire.error_code
            )));
        }
        Ok(CommandResponse {
            success: wire.success,
            consistent: wire.consistent,
            error_code: code,
            error_description: wire.error_description,
            queried_names: wire.queried_names,
            applied: wire.applied,
            revision: wire.revision,
        })
    }
}

fn to_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("wire structs always serialize")
}

fn from_line<'a, T: Deserialize<'a>>(line: &'a [u8]) -> Result<T> {
    let line = line.strip_suffix(b"\n").unwrap_or(line);
    let line = line.strip_suffix(b"\r").unwrap_or(line);
    let text = std::str::from_utf8(line)
        .map_err(|e| Error::Malformed(format!("line is not UTF-8: {e}")))?;
    serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
}

/// One line of JSON, without the trailing newline.
pub fn encode_request(req: &CommandRequest) -> String {
    to_line(&req.to_wire())
}

pub fn encode_response(resp: &CommandResponse) -> String {
    to_line(&resp.to_wire())
}

/// Decodes and validates one request line; a trailing newline is ignored.
pub fn decode_request(line: &[u8]) -> Result<CommandRequest> {
    CommandRequest::try_from(from_line::<WireRequest>(line)?)
}

pub fn decode_response(line: &[u8]) -> Result<CommandResponse> {
    CommandResponse::try_from(from_line::<WireResponse>(line)?)
}

impl WireRequest {
    pub fn encode(&self) -> String {
        to_line(self)
    }
}
