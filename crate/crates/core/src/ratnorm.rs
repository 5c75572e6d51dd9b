//! Rational expressions, rational functions, and their normal forms.
//!
//! The same tree `x/x` is read two ways here. As a rational *expression* it
//! denotes an element of Q(x), where it equals 1. As the body of a rational
//! *function* `λx. x/x` it is evaluated pointwise over Q and is undefined at
//! 0. [`norm_rat_expr`] normalizes in the first reading; [`norm_rat_fun`]
//! quasinormalizes and keeps every rational singularity.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{KernelError, Result};
use crate::exact_arith::Rat;
use crate::poly::Poly;
use crate::syntax::{eval_rat_with, sym, SemType, SynTerm};

/// Builders for `q`-typed rational expressions in `x`.
pub mod qterm {
    use super::*;

    pub fn x() -> SynTerm {
        SynTerm::var("x", SemType::Q)
    }

    pub fn lit(c: Rat) -> SynTerm {
        SynTerm::RatLit(c)
    }

    pub fn int(n: i64) -> SynTerm {
        SynTerm::RatLit(Rat::from_integer(n.into()))
    }

    pub fn add(a: SynTerm, b: SynTerm) -> SynTerm {
        SynTerm::binop(sym::ADD, SemType::Q, a, b)
    }

    pub fn mul(a: SynTerm, b: SynTerm) -> SynTerm {
        SynTerm::binop(sym::MUL, SemType::Q, a, b)
    }

    pub fn neg(a: SynTerm) -> SynTerm {
        SynTerm::unop(sym::NEG, SemType::Q, a)
    }

    pub fn inv(a: SynTerm) -> SynTerm {
        SynTerm::unop(sym::INV, SemType::Q, a)
    }

    /// `a + (-b)`
    pub fn sub(a: SynTerm, b: SynTerm) -> SynTerm {
        add(a, neg(b))
    }

    /// `a * b⁻¹`
    pub fn div(a: SynTerm, b: SynTerm) -> SynTerm {
        mul(a, inv(b))
    }

    /// Left-associated product of `n` copies of `a`; `a^0` is the literal 1.
    pub fn pow(a: SynTerm, n: u32) -> SynTerm {
        if n == 0 {
            return int(1);
        }
        (1..n).fold(a.clone(), |acc, _| mul(acc, a.clone()))
    }

    /// `λx:q. body`
    pub fn fun(body: SynTerm) -> SynTerm {
        SynTerm::lambda("x", SemType::Q, body)
    }
}

/// An element of Q(x): `num/den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalFraction {
    num: Poly,
    den: Poly,
}

impl CanonicalFraction {
    pub fn new(num: Poly, den: Poly) -> Result<CanonicalFraction> {
        if den.is_zero() {
            return Err(KernelError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(CanonicalFraction::zero());
        }
        let g = num.gcd(&den)?;
        let (n, d) = (num.exact_div(&g)?, den.exact_div(&g)?);
        let lc = d.leading().unwrap().recip();
        Ok(CanonicalFraction { num: n.scale(&lc), den: d.scale(&lc) })
    }

    pub fn from_poly(p: Poly) -> CanonicalFraction {
        CanonicalFraction { num: p, den: Poly::one() }
    }

    pub fn constant(c: Rat) -> CanonicalFraction {
        CanonicalFraction::from_poly(Poly::constant(c))
    }

    pub fn zero() -> CanonicalFraction {
        CanonicalFraction::from_poly(Poly::zero())
    }

    pub fn one() -> CanonicalFraction {
        CanonicalFraction::from_poly(Poly::one())
    }

    pub fn indeterminate() -> CanonicalFraction {
        CanonicalFraction::from_poly(Poly::x())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &CanonicalFraction) -> CanonicalFraction {
        let num = &(&self.num * &o.den) + &(&o.num * &self.den);
        CanonicalFraction::new(num, &self.den * &o.den).expect("nonzero denominator")
    }

    pub fn mul(&self, o: &CanonicalFraction) -> CanonicalFraction {
        CanonicalFraction::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero denominator")
    }

    pub fn neg(&self) -> CanonicalFraction {
        CanonicalFraction { num: -&self.num, den: self.den.clone() }
    }

    /// `None` for the zero fraction.
    pub fn inv(&self) -> Option<CanonicalFraction> {
        CanonicalFraction::new(self.den.clone(), self.num.clone()).ok()
    }
}

impl fmt::Display for CanonicalFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

/// Built only from `x : q`, rational literals and the `q` field operations.
pub fn is_rat_expr(t: &SynTerm) -> bool {
    if let Some((s, ty, a, b)) = t.as_binop() {
        return *ty == SemType::Q && matches!(s, sym::ADD | sym::MUL) && is_rat_expr(a) && is_rat_expr(b);
    }
    if let Some((s, ty, a)) = t.as_unop() {
        return *ty == SemType::Q && matches!(s, sym::NEG | sym::INV) && is_rat_expr(a);
    }
    matches!(t, SynTerm::RatLit(_)) || t.is_var("x", &SemType::Q)
}

/// `λx:q. B` with `B` a rational expression.
pub fn is_rat_fun(t: &SynTerm) -> bool {
    matches!(t, SynTerm::Lambda { var, var_ty: SemType::Q, body } if var == "x" && is_rat_expr(body))
}

/// The body of a lambda; undefined elsewhere.
pub fn body(t: &SynTerm) -> Option<SynTerm> {
    match t {
        SynTerm::Lambda { body, .. } => Some((**body).clone()),
        _ => None,
    }
}

fn val_in_f_rec(t: &SynTerm) -> Option<CanonicalFraction> {
    if let Some((s, _, a, b)) = t.as_binop() {
        let (a, b) = (val_in_f_rec(a)?, val_in_f_rec(b)?);
        return Some(if s == sym::ADD { a.add(&b) } else { a.mul(&b) });
    }
    if let Some((s, _, a)) = t.as_unop() {
        let a = val_in_f_rec(a)?;
        return if s == sym::NEG { Some(a.neg()) } else { a.inv() };
    }
    match t {
        SynTerm::RatLit(c) => Some(CanonicalFraction::constant(c.clone())),
        _ => Some(CanonicalFraction::indeterminate()),
    }
}

/// The denotation of a rational expression in Q(x); `Ok(None)` when some
/// subexpression inverts the zero fraction.
pub fn val_in_f(t: &SynTerm) -> Result<Option<CanonicalFraction>> {
    if !is_rat_expr(t) {
        return Err(KernelError::NotARationalExpression);
    }
    Ok(val_in_f_rec(t))
}

/// Evaluates a well-typed `f` term built from `0`, `1`, `X` and the `f`
/// field operations.
pub(crate) fn eval_f(t: &SynTerm) -> Option<CanonicalFraction> {
    if let Some((s, _, a, b)) = t.as_binop() {
        let (a, b) = (eval_f(a)?, eval_f(b)?);
        return match s {
            sym::ADD => Some(a.add(&b)),
            sym::MUL => Some(a.mul(&b)),
            _ => None,
        };
    }
    if let Some((s, _, a)) = t.as_unop() {
        let a = eval_f(a)?;
        return match s {
            sym::NEG => Some(a.neg()),
            sym::INV => a.inv(),
            _ => None,
        };
    }
    match t {
        SynTerm::Const { symbol, .. } => match symbol.as_str() {
            sym::ZERO => Some(CanonicalFraction::zero()),
            sym::ONE => Some(CanonicalFraction::one()),
            sym::INDET => Some(CanonicalFraction::indeterminate()),
            _ => None,
        },
        _ => None,
    }
}

/// `x * x * ... * x`, left-associated.
fn x_power(k: usize) -> SynTerm {
    qterm::pow(qterm::x(), k as u32)
}

fn monomial_term(c: &Rat, k: usize) -> SynTerm {
    match k {
        0 => qterm::lit(c.clone()),
        _ if c.is_one() => x_power(k),
        _ => qterm::mul(qterm::lit(c.clone()), x_power(k)),
    }
}

/// Polynomial normal form: a left-associated sum of monomials in
/// descending degree. Later negative terms are written as subtractions.
pub fn poly_to_term(p: &Poly) -> SynTerm {
    let mut terms = p.coeffs().iter().enumerate().rev().filter(|(_, c)| !c.is_zero());
    let Some((k, c)) = terms.next() else { return qterm::int(0) };
    let first = if k > 0 && (-c).is_one() { qterm::neg(x_power(k)) } else { monomial_term(c, k) };
    terms.fold(first, |acc, (k, c)| {
        if c.is_negative() {
            qterm::sub(acc, monomial_term(&-c, k))
        } else {
            qterm::add(acc, monomial_term(c, k))
        }
    })
}

/// `p` when `q = 1`, otherwise `p * q⁻¹`, both in polynomial normal form.
pub fn render_fraction(p: &Poly, q: &Poly) -> SynTerm {
    if q.is_one() {
        poly_to_term(p)
    } else {
        qterm::div(poly_to_term(p), poly_to_term(q))
    }
}

pub fn frac_to_term(c: &CanonicalFraction) -> SynTerm {
    render_fraction(&c.num, &c.den)
}

/// The unique normal form of expressions undefined in Q(x): `1 * 0⁻¹`.
pub fn undefined_normal_form() -> SynTerm {
    qterm::div(qterm::int(1), qterm::int(0))
}

pub fn is_norm(t: &SynTerm) -> bool {
    if !is_rat_expr(t) {
        return false;
    }
    if *t == undefined_normal_form() {
        return true;
    }
    matches!(val_in_f_rec(t), Some(c) if frac_to_term(&c) == *t)
}

/// The polynomial a term renders, if the term is exactly its polynomial
/// normal form.
fn canonical_poly(t: &SynTerm) -> Option<Poly> {
    let (p, q) = flatten_unreduced(t)?;
    (q.is_one() && poly_to_term(&p) == *t).then_some(p)
}

/// `p/q` in polynomial normal form, `q` monic, and no irreducible factor of
/// degree >= 2 shared by `p` and `q`. The undefined form `1/0` counts.
pub fn is_quasinorm(t: &SynTerm) -> bool {
    if !is_rat_expr(t) {
        return false;
    }
    if *t == undefined_normal_form() || canonical_poly(t).is_some() {
        return true;
    }
    let Some((sym::MUL, SemType::Q, pt, inv_q)) = t.as_binop() else { return false };
    let Some((sym::INV, SemType::Q, qt)) = inv_q.as_unop() else { return false };
    let (Some(p), Some(q)) = (canonical_poly(pt), canonical_poly(qt)) else { return false };
    if !q.is_monic() || q.is_one() {
        return false;
    }
    let g = p.gcd(&q).expect("q is nonzero");
    g.linear_part().is_ok_and(|lp| lp == g)
}

/// Fraction arithmetic on the tree with no cancellation: `x ↦ x/1`,
/// `c ↦ c/1`, sums and products cross-multiply, `a⁻¹` swaps. `None` when
/// some inverted numerator is the zero polynomial.
///
/// Wherever the term is defined at a rational point `r`, the denominator
/// is nonzero at `r` and `P(r)/Q(r)` is the term's value there.
pub fn flatten_unreduced(t: &SynTerm) -> Option<(Poly, Poly)> {
    if let Some((s, _, a, b)) = t.as_binop() {
        let ((pa, qa), (pb, qb)) = (flatten_unreduced(a)?, flatten_unreduced(b)?);
        return Some(match s {
            sym::ADD => (&(&pa * &qb) + &(&pb * &qa), &qa * &qb),
            _ => (&pa * &pb, &qa * &qb),
        });
    }
    if let Some((s, _, a)) = t.as_unop() {
        let (pa, qa) = flatten_unreduced(a)?;
        return match s {
            sym::NEG => Some((-pa, qa)),
            _ if pa.is_zero() => None,
            _ => Some((qa, pa)),
        };
    }
    match t {
        SynTerm::RatLit(c) => Some((Poly::constant(c.clone()), Poly::one())),
        _ => Some((Poly::x(), Poly::one())),
    }
}

/// Arguments of every `⁻¹` node, outermost first.
pub fn inverted_subterms(t: &SynTerm) -> Vec<&SynTerm> {
    let mut out = Vec::new();
    let mut stack = vec![t];
    while let Some(t) = stack.pop() {
        if let Some((sym::INV, _, a)) = t.as_unop() {
            out.push(a);
        }
        match t {
            SynTerm::App(f, a) => {
                stack.push(a);
                stack.push(f);
            }
            SynTerm::Lambda { body, .. } => stack.push(body),
            _ => {}
        }
    }
    out
}

/// Normal form in Q(x), or `1/0` for expressions undefined there. Undefined
/// on anything that is not a rational expression.
pub fn norm_rat_expr(t: &SynTerm) -> Option<SynTerm> {
    if !is_rat_expr(t) {
        return None;
    }
    Some(match val_in_f_rec(t) {
        Some(c) => frac_to_term(&c),
        None => undefined_normal_form(),
    })
}

/// Quasinormal form of a rational expression.
///
/// The tree is flattened to `P/Q` without cancellation; only the part of
/// `gcd(P, Q)` without rational roots is cancelled. Rational zeros of
/// nested denominators that do not survive in the final denominator (as in
/// `1/(1/x)`) are restored as a common factor `(x - a)` on both sides, so
/// the result is undefined at exactly the rational points where `t` is.
pub fn quasinorm_rat_expr(t: &SynTerm) -> Result<SynTerm> {
    if !is_rat_expr(t) {
        return Err(KernelError::NotARationalExpression);
    }
    let Some((p, q)) = flatten_unreduced(t) else { return Ok(undefined_normal_form()) };
    let g = p.gcd(&q)?;
    let h = g.exact_div(&g.linear_part()?)?;
    let (mut p, mut q) = (p.exact_div(&h)?, q.exact_div(&h)?);
    for sub in inverted_subterms(t) {
        let (pa, _) = flatten_unreduced(sub).expect("subterms of a defined term are defined");
        for (r, _) in pa.rational_roots()? {
            if !q.eval_at(&r).is_zero() {
                let lin = Poly::linear(&r);
                p = &p * &lin;
                q = &q * &lin;
            }
        }
    }
    let lc = q.leading().unwrap().recip();
    Ok(render_fraction(&p.scale(&lc), &q.scale(&lc)))
}

/// `λx. quasinorm(body)`; undefined on anything that is not a rational
/// function.
pub fn norm_rat_fun(t: &SynTerm) -> Option<SynTerm> {
    if !is_rat_fun(t) {
        return None;
    }
    let b = body(t)?;
    Some(qterm::fun(quasinorm_rat_expr(&b).ok()?))
}

/// Strict pointwise evaluation of a rational expression at `x = a`.
pub fn eval_rat_expr_at(t: &SynTerm, a: &Rat) -> Option<Rat> {
    eval_rat_with(t, "x", a)
}

/// Applies a rational function to a rational; `None` where it is undefined.
pub fn apply_rat_fun(f: &SynTerm, a: &Rat) -> Option<Rat> {
    match f {
        SynTerm::Lambda { var, body, .. } => eval_rat_with(body, var, a),
        _ => None,
    }
}

/// Quasi-equality of two rational functions at one point: both undefined,
/// or both defined and equal.
pub fn fn_quasi_equal_at(f: &SynTerm, g: &SynTerm, a: &Rat) -> bool {
    apply_rat_fun(f, a) == apply_rat_fun(g, a)
}
