#![allow(dead_code)]

pub mod check;
pub mod gen;
pub mod oracle;
pub mod wire;
