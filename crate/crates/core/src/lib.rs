//! A multi-ontology knowledge service.
//!
//! Named ontology references are manipulated and queried through a
//! line-oriented command protocol. Each reference carries an axiom store,
//! an optional manipulation lease, buffering flags and the result of the
//! built-in EL reasoner.

pub mod client;
pub mod error;
pub mod model;
pub mod ofn;
pub mod protocol;
pub mod reasoner;
pub mod registry;
pub mod server;

pub use error::{Error, Position, Result};
