//! Request/response messages, the command table and the wire codec.

mod codec;
mod table;
mod text;

use std::collections::BTreeMap;
use std::fmt;

pub use codec::{
    decode_request, decode_response, encode_request, encode_response, CommandRequest,
    CommandResponse, WireRequest, WireResponse,
};
pub use table::{command_table, find_row, Arity, CommandRow, Spec, Verb};
pub use text::{format_command_line, parse_command_line, CommandLine};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ErrorCode {
    Ok = 0,
    MalformedRequest = 100,
    UnknownCommand = 101,
    BadArity = 102,
    ReservedName = 103,
    UnknownReference = 200,
    ReferenceBusy = 201,
    NotLeaseHolder = 202,
    DuplicateReference = 203,
    UnknownEntity = 204,
    InconsistentOntology = 205,
    OntologyParseError = 300,
    FileIoError = 301,
    UnsupportedExpression = 302,
    UnknownProcedure = 400,
    ProcedureFailed = 401,
    InternalError = 500,
}

impl ErrorCode {
    pub const ALL: [ErrorCode; 17] = [
        ErrorCode::Ok,
        ErrorCode::MalformedRequest,
        ErrorCode::UnknownCommand,
        ErrorCode::BadArity,
        ErrorCode::ReservedName,
        ErrorCode::UnknownReference,
        ErrorCode::ReferenceBusy,
        ErrorCode::NotLeaseHolder,
        ErrorCode::DuplicateReference,
        ErrorCode::UnknownEntity,
        ErrorCode::InconsistentOntology,
        ErrorCode::OntologyParseError,
        ErrorCode::FileIoError,
        ErrorCode::UnsupportedExpression,
        ErrorCode::UnknownProcedure,
        ErrorCode::ProcedureFailed,
        ErrorCode::InternalError,
    ];

    pub fn code(self) -> u16 {
        self as u16
    }

    pub fn from_code(code: u16) -> Option<ErrorCode> {
        ErrorCode::ALL.into_iter().find(|c| c.code() == code)
    }

    pub fn name(self) -> &'static str {
        match self {
            ErrorCode::Ok => "OK",
            ErrorCode::MalformedRequest => "MalformedRequest",
            ErrorCode::UnknownCommand => "UnknownCommand",
            ErrorCode::BadArity => "BadArity",
            ErrorCode::ReservedName => "ReservedName",
            ErrorCode::UnknownReference => "UnknownReference",
            ErrorCode::ReferenceBusy => "ReferenceBusy",
            ErrorCode::NotLeaseHolder => "NotLeaseHolder",
            ErrorCode::DuplicateReference => "DuplicateReference",
            ErrorCode::UnknownEntity => "UnknownEntity",
            ErrorCode::InconsistentOntology => "InconsistentOntology",
            ErrorCode::OntologyParseError => "OntologyParseError",
            ErrorCode::FileIoError => "FileIOError",
            ErrorCode::UnsupportedExpression => "UnsupportedExpression",
            ErrorCode::UnknownProcedure => "UnknownProcedure",
            ErrorCode::ProcedureFailed => "ProcedureFailed",
            ErrorCode::InternalError => "InternalError",
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.code(), self.name())
    }
}

/// Every error code with its name.
pub fn error_registry() -> BTreeMap<u16, &'static str> {
    ErrorCode::ALL
        .into_iter()
        .map(|c| (c.code(), c.name()))
        .collect()
}
