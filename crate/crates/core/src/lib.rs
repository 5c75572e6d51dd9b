//! A small computer-algebra kernel that keeps syntax and semantics apart.
//!
//! Expressions are syntax trees ([`syntax::SynTerm`]); their meaning is
//! obtained only through explicit evaluation at a type. On top of that sit
//! four algorithms that work on syntax: integer factoring, normalization of
//! rational expressions, quasinormalization of rational functions, and
//! symbolic differentiation. Each comes with an executable contract in
//! [`harness`].

pub mod cli;
pub mod diff;
pub mod error;
pub mod exact_arith;
pub mod factor;
pub mod harness;
pub mod poly;
pub mod ratnorm;
pub mod syntax;
pub mod text;

pub use error::{KernelError, Result};
pub use syntax::{quote, SemType, SynTerm, Value};
