//! Entity names, class expressions, axioms and the axiom store.

mod axiom;
mod expr;
pub mod name;
mod store;

pub use axiom::{Axiom, EntityKind, Signature};
pub use expr::{ClassExpression, Operands};
pub use name::EntityName;
pub use store::{buffer_or_apply, flush, AxiomStore, BatchError, Change, ChangeBuffer, ChangeOp};
