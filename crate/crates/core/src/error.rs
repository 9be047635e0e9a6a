use thiserror::Error;

use crate::protocol::ErrorCode;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Line/column of a diagnostic inside an ontology document (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed request: {0}")]
    Malformed(String),
    #[error("unknown command: {0}")]
    UnknownCommand(String),
    #[error("bad arity: {0}")]
    BadArity(String),
    #[error("reserved name `{0}` cannot be used here")]
    ReservedName(String),
    #[error("unknown reference `{0}`")]
    UnknownReference(String),
    #[error("reference `{reference}` is busy: {reason}")]
    ReferenceBusy { reference: String, reason: String },
    #[error("client `{client}` does not hold the mount on `{reference}`")]
    NotLeaseHolder { reference: String, client: String },
    #[error("reference `{0}` already exists")]
    DuplicateReference(String),
    #[error("unknown entity `{0}`")]
    UnknownEntity(String),
    #[error("ontology `{0}` is inconsistent")]
    InconsistentOntology(String),
    #[error("parse error at {position}: {message}")]
    Parse { position: Position, message: String },
    #[error("file error: {0}")]
    FileIo(String),
    #[error("unsupported construct `{construct}`{}", .position.map(|p| format!(" at {p}")).unwrap_or_default())]
    Unsupported {
        construct: String,
        position: Option<Position>,
    },
    #[error("unknown procedure `{0}`")]
    UnknownProcedure(String),
    #[error("procedure failed at step {step}: {reason}")]
    ProcedureFailed { step: usize, reason: String },
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn code(&self) -> ErrorCode {
        match self {
            Error::Malformed(_) => ErrorCode::MalformedRequest,
            Error::UnknownCommand(_) => ErrorCode::UnknownCommand,
            Error::BadArity(_) => ErrorCode::BadArity,
            Error::ReservedName(_) => ErrorCode::ReservedName,
            Error::UnknownReference(_) => ErrorCode::UnknownReference,
            Error::ReferenceBusy { .. } => ErrorCode::ReferenceBusy,
            Error::NotLeaseHolder { .. } => ErrorCode::NotLeaseHolder,
            Error::DuplicateReference(_) => ErrorCode::DuplicateReference,
            Error::UnknownEntity(_) => ErrorCode::UnknownEntity,
            Error::InconsistentOntology(_) => ErrorCode::InconsistentOntology,
            Error::Parse { .. } => ErrorCode::OntologyParseError,
            Error::FileIo(_) => ErrorCode::FileIoError,
            Error::Unsupported { .. } => ErrorCode::UnsupportedExpression,
            Error::UnknownProcedure(_) => ErrorCode::UnknownProcedure,
            Error::ProcedureFailed { .. } => ErrorCode::ProcedureFailed,
            Error::Internal(_) => ErrorCode::InternalError,
        }
    }

    pub(crate) fn unsupported(construct: impl Into<String>) -> Self {
        Error::Unsupported {
            construct: construct.into(),
            position: None,
        }
    }
}
