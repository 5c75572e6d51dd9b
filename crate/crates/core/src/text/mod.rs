//! Concrete syntax: a parser for the four input languages and printers for
//! the three output formats.

mod json;
mod parser;
mod printer;

use std::fmt;
use std::str::FromStr;

pub use json::{term_from_json, term_to_json, term_to_json_value};
pub use parser::parse;
pub use printer::{infix, sexpr};

use crate::error::KernelError;
use crate::syntax::SynTerm;

/// Input languages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lang {
    /// Integer arithmetic: literals, `+`, `-`, `*`, `^`.
    Int,
    /// Rational expressions in `x : q`.
    RatExpr,
    /// `fun x -> E` with `E` a rational expression.
    RatFun,
    /// Real expressions in `x : r` with `sin`, `cos`, `tan`, `exp`, `ln`.
    DiffExpr,
}

impl FromStr for Lang {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Lang, KernelError> {
        match s {
            "int" => Ok(Lang::Int),
            "ratexpr" => Ok(Lang::RatExpr),
            "ratfun" => Ok(Lang::RatFun),
            "diffexpr" => Ok(Lang::DiffExpr),
            _ => Err(KernelError::PredicateViolation(format!("unknown language {s:?}"))),
        }
    }
}

/// Output formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Infix,
    Sexpr,
    Json,
}

impl FromStr for Format {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Format, KernelError> {
        match s {
            "infix" => Ok(Format::Infix),
            "sexpr" => Ok(Format::Sexpr),
            "json" => Ok(Format::Json),
            _ => Err(KernelError::PredicateViolation(format!("unknown format {s:?}"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Infix => "infix",
            Format::Sexpr => "sexpr",
            Format::Json => "json",
        })
    }
}

pub fn print(t: &SynTerm, format: Format) -> String {
    match format {
        Format::Infix => infix(t),
        Format::Sexpr => sexpr(t),
        Format::Json => term_to_json(t),
    }
}
