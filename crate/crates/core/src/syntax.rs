//! Syntax trees, quotation and typed evaluation.
//!
//! [`SynTerm`] is the type of syntax values. It can hold any tree, including
//! ill-typed ones such as `(x x)`; whether a tree is a well-typed expression
//! of some type is decided separately by [`is_expr_of`]. Constants are keyed
//! by `(symbol, type)`, so `+ : q -> q -> q` and `+ : f -> f -> f` are
//! different constants that happen to share a symbol.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{KernelError, Result};
use crate::exact_arith::{Int, Rat};
use crate::ratnorm::{self, CanonicalFraction};

/// Semantic types.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SemType {
    /// Integers.
    I,
    /// Rationals.
    Q,
    /// The field of fractions Q(x).
    F,
    /// Reals.
    R,
    /// Booleans.
    O,
    /// Syntax values.
    Eps,
    Arrow(Box<SemType>, Box<SemType>),
}

impl SemType {
    pub fn arrow(from: SemType, to: SemType) -> SemType {
        SemType::Arrow(Box::new(from), Box::new(to))
    }

    /// `t -> t -> t`
    pub fn binary(t: SemType) -> SemType {
        SemType::arrow(t.clone(), SemType::arrow(t.clone(), t))
    }

    /// `t -> t`
    pub fn unary(t: SemType) -> SemType {
        SemType::arrow(t.clone(), t)
    }

    fn is_base(&self) -> bool {
        !matches!(self, SemType::Arrow(..))
    }
}

impl fmt::Display for SemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemType::I => f.write_str("i"),
            SemType::Q => f.write_str("q"),
            SemType::F => f.write_str("f"),
            SemType::R => f.write_str("r"),
            SemType::O => f.write_str("o"),
            SemType::Eps => f.write_str("eps"),
            SemType::Arrow(a, b) => {
                if a.is_base() {
                    write!(f, "{a} -> {b}")
                } else {
                    write!(f, "({a}) -> {b}")
                }
            }
        }
    }
}

impl std::str::FromStr for SemType {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<SemType> {
        fn parse(s: &str) -> Option<SemType> {
            let s = s.trim();
            // split at the first top-level arrow; arrows associate to the right
            let bytes = s.as_bytes();
            let mut depth = 0i32;
            for i in 0..bytes.len() {
                match bytes[i] {
                    b'(' => depth += 1,
                    b')' => depth -= 1,
                    b'-' if depth == 0 && bytes.get(i + 1) == Some(&b'>') => {
                        return Some(SemType::arrow(parse(&s[..i])?, parse(&s[i + 2..])?));
                    }
                    _ => {}
                }
            }
            if s.starts_with('(') && s.ends_with(')') {
                return parse(&s[1..s.len() - 1]);
            }
            match s {
                "i" => Some(SemType::I),
                "q" => Some(SemType::Q),
                "f" => Some(SemType::F),
                "r" => Some(SemType::R),
                "o" => Some(SemType::O),
                "eps" => Some(SemType::Eps),
                _ => None,
            }
        }
        parse(s).ok_or_else(|| KernelError::Json(format!("bad type {s:?}")))
    }
}

/// A syntax value.
///
/// `IntLit` has type `i`, `RatLit` type `q` and `RealLit` type `r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SynTerm {
    IntLit(Int),
    RatLit(Rat),
    RealLit(Rat),
    Var { name: String, ty: SemType },
    Const { symbol: String, ty: SemType },
    App(Box<SynTerm>, Box<SynTerm>),
    Lambda { var: String, var_ty: SemType, body: Box<SynTerm> },
    Quote(Box<SynTerm>),
}

/// Symbols of the registered constants.
pub mod sym {
    pub const ADD: &str = "+";
    pub const MUL: &str = "*";
    pub const NEG: &str = "-";
    pub const INV: &str = "inv";
    pub const POW: &str = "^";
    pub const EXP: &str = "exp";
    pub const LN: &str = "ln";
    pub const SIN: &str = "sin";
    pub const COS: &str = "cos";
    pub const TAN: &str = "tan";
    pub const ZERO: &str = "0";
    pub const ONE: &str = "1";
    pub const INDET: &str = "X";
}

/// Unary function symbols of the differentiable language.
pub const ELEMENTARY: [&str; 5] = [sym::EXP, sym::LN, sym::SIN, sym::COS, sym::TAN];

/// Whether `(symbol, ty)` is a constant of the signature.
pub fn is_registered_constant(symbol: &str, ty: &SemType) -> bool {
    use SemType::*;
    let bin = |t: SemType| *ty == SemType::binary(t);
    let un = |t: SemType| *ty == SemType::unary(t);
    match symbol {
        sym::ADD | sym::MUL => bin(I) || bin(Q) || bin(F) || bin(R),
        sym::NEG => un(I) || un(Q) || un(F) || un(R),
        sym::INV => un(Q) || un(F) || un(R),
        sym::POW => bin(I) || bin(R),
        s if ELEMENTARY.contains(&s) => un(R),
        sym::ZERO | sym::ONE | sym::INDET => *ty == F,
        _ => false,
    }
}

impl SynTerm {
    pub fn int(n: impl Into<Int>) -> SynTerm {
        SynTerm::IntLit(n.into())
    }

    pub fn rat(r: Rat) -> SynTerm {
        SynTerm::RatLit(r)
    }

    pub fn real(r: Rat) -> SynTerm {
        SynTerm::RealLit(r)
    }

    pub fn var(name: &str, ty: SemType) -> SynTerm {
        SynTerm::Var { name: name.to_string(), ty }
    }

    pub fn constant(symbol: &str, ty: SemType) -> SynTerm {
        SynTerm::Const { symbol: symbol.to_string(), ty }
    }

    pub fn app(f: SynTerm, a: SynTerm) -> SynTerm {
        SynTerm::App(Box::new(f), Box::new(a))
    }

    pub fn lambda(var: &str, var_ty: SemType, body: SynTerm) -> SynTerm {
        SynTerm::Lambda { var: var.to_string(), var_ty, body: Box::new(body) }
    }

    /// `symbol a b` with `symbol : t -> t -> t`.
    pub fn binop(symbol: &str, t: SemType, a: SynTerm, b: SynTerm) -> SynTerm {
        let c = SynTerm::constant(symbol, SemType::binary(t));
        SynTerm::app(SynTerm::app(c, a), b)
    }

    /// `symbol a` with `symbol : t -> t`.
    pub fn unop(symbol: &str, t: SemType, a: SynTerm) -> SynTerm {
        SynTerm::app(SynTerm::constant(symbol, SemType::unary(t)), a)
    }

    /// Matches `symbol a b` where `symbol : t -> t -> t`; yields `(symbol, t, a, b)`.
    pub fn as_binop(&self) -> Option<(&str, &SemType, &SynTerm, &SynTerm)> {
        let SynTerm::App(f, b) = self else { return None };
        let SynTerm::App(c, a) = f.as_ref() else { return None };
        let SynTerm::Const { symbol, ty } = c.as_ref() else { return None };
        let SemType::Arrow(t, rest) = ty else { return None };
        let SemType::Arrow(t2, t3) = rest.as_ref() else { return None };
        (t == t2 && t2 == t3).then_some((symbol.as_str(), t.as_ref(), a.as_ref(), b.as_ref()))
    }

    /// Matches `symbol a` where `symbol : t -> t`; yields `(symbol, t, a)`.
    pub fn as_unop(&self) -> Option<(&str, &SemType, &SynTerm)> {
        let SynTerm::App(c, a) = self else { return None };
        let SynTerm::Const { symbol, ty } = c.as_ref() else { return None };
        let SemType::Arrow(t, t2) = ty else { return None };
        (t == t2).then_some((symbol.as_str(), t.as_ref(), a.as_ref()))
    }

    pub fn is_var(&self, name: &str, ty: &SemType) -> bool {
        matches!(self, SynTerm::Var { name: n, ty: t } if n == name && t == ty)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            SynTerm::App(f, a) => 1 + f.size() + a.size(),
            SynTerm::Lambda { body, .. } => 1 + body.size(),
            SynTerm::Quote(t) => 1 + t.size(),
            _ => 1,
        }
    }

    /// Strips one quotation.
    pub fn unquote(&self) -> Option<&SynTerm> {
        match self {
            SynTerm::Quote(t) => Some(t),
            _ => None,
        }
    }
}

/// Wraps a tree in a quotation. Injective: `quote(a) == quote(b)` iff `a == b`.
pub fn quote(t: SynTerm) -> SynTerm {
    SynTerm::Quote(Box::new(t))
}

/// Infers the type of a closed-or-annotated term, `None` when ill-typed.
///
/// Variables carry their own type annotation; a lambda-bound variable is
/// checked against its binder.
pub fn type_of(t: &SynTerm) -> Option<SemType> {
    fn go(t: &SynTerm, scope: &mut Vec<(String, SemType)>) -> Option<SemType> {
        match t {
            SynTerm::IntLit(_) => Some(SemType::I),
            SynTerm::RatLit(_) => Some(SemType::Q),
            SynTerm::RealLit(_) => Some(SemType::R),
            SynTerm::Var { name, ty } => {
                if name.is_empty() {
                    return None;
                }
                match scope.iter().rev().find(|(n, _)| n == name) {
                    Some((_, bound)) if bound != ty => None,
                    _ => Some(ty.clone()),
                }
            }
            SynTerm::Const { symbol, ty } => is_registered_constant(symbol, ty).then(|| ty.clone()),
            SynTerm::App(f, a) => match go(f, scope)? {
                SemType::Arrow(from, to) if go(a, scope)? == *from => Some(*to),
                _ => None,
            },
            SynTerm::Lambda { var, var_ty, body } => {
                if var.is_empty() {
                    return None;
                }
                scope.push((var.clone(), var_ty.clone()));
                let b = go(body, scope);
                scope.pop();
                Some(SemType::arrow(var_ty.clone(), b?))
            }
            SynTerm::Quote(_) => Some(SemType::Eps),
        }
    }
    go(t, &mut Vec::new())
}

/// True iff `t` is a well-typed expression of type `ty`.
pub fn is_expr_of(t: &SynTerm, ty: &SemType) -> bool {
    type_of(t).as_ref() == Some(ty)
}

/// Denotations produced by [`eval_as`].
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    IntV(Int),
    RatV(Rat),
    FracV(CanonicalFraction),
    /// A rational function `λx:q. body`, applied pointwise by
    /// [`ratnorm::apply_rat_fun`].
    FnQQ(SynTerm),
    /// Closed real-valued expressions.
    RealV(f64),
    TermV(SynTerm),
}

/// Evaluates a quotation at a type.
///
/// `Ok(None)` means the quoted expression is undefined at `ty`, which
/// includes every type mismatch. At type `f` the quoted term may be either
/// a rational expression in `x : q` (read as an element of Q(x)) or an
/// `f`-typed term.
pub fn eval_as(t: &SynTerm, ty: &SemType) -> Result<Option<Value>> {
    let body = t.unquote().ok_or(KernelError::NotAQuotation)?;
    let v = match ty {
        SemType::I if is_expr_of(body, ty) => eval_int(body, &mut Vec::new()).map(Value::IntV),
        SemType::Q if is_expr_of(body, ty) => eval_rat(body, &mut Vec::new()).map(Value::RatV),
        SemType::F if ratnorm::is_rat_expr(body) => ratnorm::val_in_f(body)?.map(Value::FracV),
        SemType::F if is_expr_of(body, ty) => ratnorm::eval_f(body).map(Value::FracV),
        SemType::R if is_expr_of(body, ty) && crate::diff::is_closed_diff_expr(body) => {
            crate::diff::eval_real(body, 0.0).value().map(Value::RealV)
        }
        SemType::Arrow(a, b) if **a == SemType::Q && **b == SemType::Q && ratnorm::is_rat_fun(body) => {
            Some(Value::FnQQ(body.clone()))
        }
        SemType::Eps => body.unquote().map(|inner| Value::TermV(inner.clone())),
        _ => None,
    };
    Ok(v)
}

type Env<T> = Vec<(String, T)>;

fn lookup<T: Clone>(env: &Env<T>, name: &str) -> Option<T> {
    env.iter().rev().find(|(n, _)| n == name).map(|(_, v)| v.clone())
}

/// Strict evaluation of a well-typed `i` expression. Free variables and
/// negative exponents are undefined.
pub(crate) fn eval_int(t: &SynTerm, env: &mut Env<Int>) -> Option<Int> {
    if let Some((s, _, a, b)) = t.as_binop() {
        let (a, b) = (eval_int(a, env)?, eval_int(b, env)?);
        return match s {
            sym::ADD => Some(a + b),
            sym::MUL => Some(a * b),
            sym::POW => crate::exact_arith::int_pow(&a, &b).ok(),
            _ => None,
        };
    }
    if let Some((s, _, a)) = t.as_unop() {
        let a = eval_int(a, env)?;
        return (s == sym::NEG).then(|| -a);
    }
    match t {
        SynTerm::IntLit(n) => Some(n.clone()),
        SynTerm::Var { name, .. } => lookup(env, name),
        SynTerm::App(f, a) => {
            let SynTerm::Lambda { var, body, .. } = f.as_ref() else { return None };
            let v = eval_int(a, env)?;
            env.push((var.clone(), v));
            let r = eval_int(body, env);
            env.pop();
            r
        }
        _ => None,
    }
}

/// Strict evaluation of a well-typed `q` expression; `inv 0` is undefined.
pub(crate) fn eval_rat(t: &SynTerm, env: &mut Env<Rat>) -> Option<Rat> {
    if let Some((s, _, a, b)) = t.as_binop() {
        let (a, b) = (eval_rat(a, env)?, eval_rat(b, env)?);
        return match s {
            sym::ADD => Some(a + b),
            sym::MUL => Some(a * b),
            _ => None,
        };
    }
    if let Some((s, _, a)) = t.as_unop() {
        let a = eval_rat(a, env)?;
        return match s {
            sym::NEG => Some(-a),
            sym::INV if !a.is_zero() => Some(a.recip()),
            _ => None,
        };
    }
    match t {
        SynTerm::RatLit(r) => Some(r.clone()),
        SynTerm::Var { name, .. } => lookup(env, name),
        SynTerm::App(f, a) => {
            let SynTerm::Lambda { var, body, .. } = f.as_ref() else { return None };
            let v = eval_rat(a, env)?;
            env.push((var.clone(), v));
            let r = eval_rat(body, env);
            env.pop();
            r
        }
        _ => None,
    }
}

/// Evaluates a rational-valued term with `x := a` bound.
pub(crate) fn eval_rat_with(t: &SynTerm, var: &str, a: &Rat) -> Option<Rat> {
    eval_rat(t, &mut vec![(var.to_string(), a.clone())])
}

pub(crate) fn int_is_numeral(n: &Int) -> bool {
    !n.is_negative()
}
