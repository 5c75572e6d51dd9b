//! Symbolic differentiation of real expressions in `x`, and the numeric
//! machinery used to check it.
//!
//! The language: `x : r`, rational literals, `+`, `*`, negation, `⁻¹`,
//! powers with a rational literal exponent, `exp`, `ln`, `sin`, `cos`,
//! `tan`. Evaluation is strict: a term is undefined at a point as soon as
//! any subterm is.
//!
//! Differentiation rules do not track domains, so `diff(t)` can be defined
//! where `t` is not; `ln(x^2 - 1)` is the standard example. The sampling
//! helpers in this module make that visible instead of hiding it.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{KernelError, Result};
use crate::exact_arith::{rat_to_f64, Rat};
use crate::poly::Poly;
use crate::syntax::{sym, SemType, SynTerm, ELEMENTARY};

/// Builders for `r`-typed terms.
pub mod rterm {
    use super::*;

    pub fn x() -> SynTerm {
        SynTerm::var("x", SemType::R)
    }

    pub fn lit(c: Rat) -> SynTerm {
        SynTerm::RealLit(c)
    }

    pub fn int(n: i64) -> SynTerm {
        SynTerm::RealLit(Rat::from_integer(n.into()))
    }

    pub fn add(a: SynTerm, b: SynTerm) -> SynTerm {
        SynTerm::binop(sym::ADD, SemType::R, a, b)
    }

    pub fn mul(a: SynTerm, b: SynTerm) -> SynTerm {
        SynTerm::binop(sym::MUL, SemType::R, a, b)
    }

    pub fn neg(a: SynTerm) -> SynTerm {
        SynTerm::unop(sym::NEG, SemType::R, a)
    }

    pub fn inv(a: SynTerm) -> SynTerm {
        SynTerm::unop(sym::INV, SemType::R, a)
    }

    pub fn sub(a: SynTerm, b: SynTerm) -> SynTerm {
        add(a, neg(b))
    }

    pub fn div(a: SynTerm, b: SynTerm) -> SynTerm {
        mul(a, inv(b))
    }

    pub fn pow(a: SynTerm, c: Rat) -> SynTerm {
        SynTerm::binop(sym::POW, SemType::R, a, lit(c))
    }

    pub fn powi(a: SynTerm, n: i64) -> SynTerm {
        pow(a, Rat::from_integer(n.into()))
    }

    /// One of `exp`, `ln`, `sin`, `cos`, `tan`.
    pub fn call(name: &str, a: SynTerm) -> SynTerm {
        SynTerm::unop(name, SemType::R, a)
    }
}

/// Membership in the differentiable language.
pub fn is_diff_expr(t: &SynTerm) -> bool {
    if let Some((s, ty, a, b)) = t.as_binop() {
        if *ty != SemType::R {
            return false;
        }
        return match s {
            sym::ADD | sym::MUL => is_diff_expr(a) && is_diff_expr(b),
            sym::POW => is_diff_expr(a) && matches!(b, SynTerm::RealLit(_)),
            _ => false,
        };
    }
    if let Some((s, ty, a)) = t.as_unop() {
        return *ty == SemType::R
            && (s == sym::NEG || s == sym::INV || ELEMENTARY.contains(&s))
            && is_diff_expr(a);
    }
    matches!(t, SynTerm::RealLit(_)) || t.is_var("x", &SemType::R)
}

fn mentions_x(t: &SynTerm) -> bool {
    match t {
        SynTerm::Var { .. } => true,
        SynTerm::App(f, a) => mentions_x(f) || mentions_x(a),
        _ => false,
    }
}

pub(crate) fn is_closed_diff_expr(t: &SynTerm) -> bool {
    is_diff_expr(t) && !mentions_x(t)
}

fn as_lit(t: &SynTerm) -> Option<&Rat> {
    match t {
        SynTerm::RealLit(c) => Some(c),
        _ => None,
    }
}

fn is_lit(t: &SynTerm, v: i64) -> bool {
    as_lit(t).is_some_and(|c| *c == Rat::from_integer(v.into()))
}

/// Defined at every real point.
fn is_total(t: &SynTerm) -> bool {
    if let Some((s, _, a, b)) = t.as_binop() {
        return match s {
            sym::POW => is_total(a) && as_lit(b).is_some_and(|c| c.is_integer() && !c.is_negative()),
            _ => is_total(a) && is_total(b),
        };
    }
    if let Some((s, _, a)) = t.as_unop() {
        return matches!(s, sym::NEG | sym::EXP | sym::SIN | sym::COS) && is_total(a);
    }
    true
}

// Rule-level constructors: they drop the literal zeros and ones that the
// differentiation rules introduce. A product with a literal zero factor
// collapses here even when the other factor is partial; that only widens
// the domain of the derivative.

fn d_add(a: SynTerm, b: SynTerm) -> SynTerm {
    if is_lit(&a, 0) {
        b
    } else if is_lit(&b, 0) {
        a
    } else {
        rterm::add(a, b)
    }
}

fn d_mul(a: SynTerm, b: SynTerm) -> SynTerm {
    if is_lit(&a, 0) || is_lit(&b, 0) {
        rterm::int(0)
    } else if is_lit(&a, 1) {
        b
    } else if is_lit(&b, 1) {
        a
    } else {
        rterm::mul(a, b)
    }
}

fn d_neg(a: SynTerm) -> SynTerm {
    match a {
        SynTerm::RealLit(c) => rterm::lit(-c),
        a => rterm::neg(a),
    }
}

fn derive(t: &SynTerm) -> SynTerm {
    if let Some((s, _, u, v)) = t.as_binop() {
        return match s {
            sym::ADD => d_add(derive(u), derive(v)),
            sym::MUL => d_add(d_mul(derive(u), v.clone()), d_mul(u.clone(), derive(v))),
            _ => {
                let c = as_lit(v).expect("power exponents are literals");
                if c.is_zero() {
                    rterm::int(0)
                } else if c.is_one() {
                    derive(u)
                } else {
                    let lowered = c - Rat::one();
                    let base = if lowered.is_one() { u.clone() } else { rterm::pow(u.clone(), lowered) };
                    d_mul(d_mul(rterm::lit(c.clone()), base), derive(u))
                }
            }
        };
    }
    if let Some((s, _, u)) = t.as_unop() {
        let du = derive(u);
        let u = u.clone();
        return match s {
            sym::NEG => d_neg(du),
            sym::INV => d_neg(d_mul(du, rterm::powi(u, -2))),
            sym::EXP => d_mul(du, rterm::call(sym::EXP, u)),
            sym::LN => d_mul(du, rterm::inv(u)),
            sym::SIN => d_mul(du, rterm::call(sym::COS, u)),
            sym::COS => d_neg(d_mul(du, rterm::call(sym::SIN, u))),
            _ => d_mul(du, rterm::powi(rterm::call(sym::COS, u), -2)),
        };
    }
    if matches!(t, SynTerm::RealLit(_)) {
        rterm::int(0)
    } else {
        rterm::int(1)
    }
}

/// Symbolic derivative with respect to `x`; undefined outside the
/// differentiable language.
///
/// Rules: sum, product, `(u⁻¹)' = -u'·u^-2`, `(u^c)' = c·u^(c-1)·u'`,
/// `exp' = exp`, `(ln u)' = u'·u⁻¹`, `sin' = cos`, `cos' = -sin`,
/// `(tan u)' = u'·cos(u)^-2`, with the chain rule at every unary node.
pub fn diff(t: &SynTerm) -> Option<SynTerm> {
    is_diff_expr(t).then(|| simplify(&derive(t)))
}

/// Local clean-up that never changes a value where the input is defined:
/// exact constant folding, `u + 0`, `u * 1`, `u^1`, double negation, and
/// `u * 0` when `u` is defined everywhere.
pub fn simplify(t: &SynTerm) -> SynTerm {
    if let Some((s, ty, a, b)) = t.as_binop() {
        let (a, b) = (simplify(a), simplify(b));
        let rebuilt = || SynTerm::binop(s, ty.clone(), a.clone(), b.clone());
        return match (s, as_lit(&a), as_lit(&b)) {
            (sym::ADD, Some(x), Some(y)) => rterm::lit(x + y),
            (sym::ADD, Some(x), _) if x.is_zero() => b,
            (sym::ADD, _, Some(y)) if y.is_zero() => a,
            (sym::MUL, Some(x), Some(y)) => rterm::lit(x * y),
            (sym::MUL, Some(x), _) if x.is_one() => b,
            (sym::MUL, _, Some(y)) if y.is_one() => a,
            (sym::MUL, Some(x), _) if x.is_zero() && is_total(&b) => rterm::int(0),
            (sym::MUL, _, Some(y)) if y.is_zero() && is_total(&a) => rterm::int(0),
            (sym::POW, _, Some(c)) if c.is_one() => a,
            (sym::POW, Some(base), Some(c)) => fold_pow(base, c).map(rterm::lit).unwrap_or_else(rebuilt),
            _ => rebuilt(),
        };
    }
    if let Some((s, ty, a)) = t.as_unop() {
        let a = simplify(a);
        if s == sym::NEG {
            if let Some((sym::NEG, _, inner)) = a.as_unop() {
                return inner.clone();
            }
        }
        if let Some(c) = as_lit(&a) {
            let folded = match s {
                sym::NEG => Some(-c),
                sym::INV if !c.is_zero() => Some(c.recip()),
                sym::EXP | sym::COS if c.is_zero() => Some(Rat::one()),
                sym::SIN | sym::TAN if c.is_zero() => Some(Rat::zero()),
                sym::LN if c.is_one() => Some(Rat::zero()),
                _ => None,
            };
            if let Some(v) = folded {
                return rterm::lit(v);
            }
        }
        return SynTerm::unop(s, ty.clone(), a);
    }
    t.clone()
}

/// `base^c` when it is rational and small enough to be worth folding.
fn fold_pow(base: &Rat, c: &Rat) -> Option<Rat> {
    let e = c.to_integer().to_i64().filter(|_| c.is_integer())?;
    if e.abs() > 64 || (base.is_zero() && e <= 0) {
        return None;
    }
    crate::exact_arith::rat_pow_int(base, e).ok()
}

/// Outcome of a real evaluation; never holds NaN or an infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RealResult {
    Defined(f64),
    Undefined,
}

impl RealResult {
    fn from_value(v: Option<f64>) -> RealResult {
        match v {
            Some(v) if v.is_finite() => RealResult::Defined(v),
            _ => RealResult::Undefined,
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            RealResult::Defined(v) => Some(v),
            RealResult::Undefined => None,
        }
    }

    pub fn is_defined(self) -> bool {
        matches!(self, RealResult::Defined(_))
    }
}

/// Below this magnitude `cos u` counts as zero and `tan u` is undefined.
pub const TAN_POLE_TOLERANCE: f64 = 1e-12;

/// `u^c` over the reals: defined for `u > 0`; for `u = 0` when `c > 0`;
/// for `u < 0` when `c = p/q` in lowest terms has odd `q`.
pub fn real_pow(u: f64, c: &Rat) -> Option<f64> {
    let cf = rat_to_f64(c);
    if u > 0.0 {
        return Some(if c.is_integer() { int_pow_f64(u, c) } else { u.powf(cf) });
    }
    if u == 0.0 {
        return c.is_positive().then_some(0.0);
    }
    if c.denom().is_even() {
        return None;
    }
    if c.is_integer() {
        return Some(int_pow_f64(u, c));
    }
    let mag = (-u).powf(cf);
    Some(if c.numer().is_odd() { -mag } else { mag })
}

fn int_pow_f64(u: f64, c: &Rat) -> f64 {
    match c.numer().to_i32() {
        Some(n) => u.powi(n),
        None => u.powf(rat_to_f64(c)),
    }
}

fn eval_rec(t: &SynTerm, a: f64) -> Option<f64> {
    let v = if let Some((s, _, u, w)) = t.as_binop() {
        match s {
            sym::ADD => eval_rec(u, a)? + eval_rec(w, a)?,
            sym::MUL => eval_rec(u, a)? * eval_rec(w, a)?,
            _ => real_pow(eval_rec(u, a)?, as_lit(w)?)?,
        }
    } else if let Some((s, _, u)) = t.as_unop() {
        let u = eval_rec(u, a)?;
        match s {
            sym::NEG => -u,
            sym::INV if u == 0.0 => return None,
            sym::INV => 1.0 / u,
            sym::EXP => u.exp(),
            sym::LN if u <= 0.0 => return None,
            sym::LN => u.ln(),
            sym::SIN => u.sin(),
            sym::COS => u.cos(),
            _ if u.cos().abs() <= TAN_POLE_TOLERANCE => return None,
            _ => u.tan(),
        }
    } else {
        match t {
            SynTerm::RealLit(c) => rat_to_f64(c),
            _ => a,
        }
    };
    v.is_finite().then_some(v)
}

/// Strict evaluation at `x = a`. The term must be in the differentiable
/// language; anything else evaluates as undefined.
pub fn eval_real(t: &SynTerm, a: f64) -> RealResult {
    if !is_diff_expr(t) {
        return RealResult::Undefined;
    }
    RealResult::from_value(eval_rec(t, a))
}

/// Step sizes of the central differences in [`deriv_numeric`].
pub const FD_STEPS: [f64; 3] = [1e-3, 1e-4, 1e-5];
/// Relative agreement required between successive central differences.
pub const FD_CONVERGENCE: f64 = 1e-3;

/// Numeric derivative at `a`, or undefined when the function is not
/// evaluable around `a` or its central differences fail to settle.
///
/// Successive quotients must agree within `FD_CONVERGENCE` relative to
/// `max(1, |D|)`. The returned value is the Richardson extrapolation of the
/// two larger steps, `(100·D(1e-4) - D(1e-3)) / 99`.
pub fn deriv_numeric(t: &SynTerm, a: f64) -> RealResult {
    if !eval_real(t, a).is_defined() {
        return RealResult::Undefined;
    }
    let mut quotients = [0.0f64; 3];
    for (slot, h) in quotients.iter_mut().zip(FD_STEPS) {
        let (Some(hi), Some(lo)) = (eval_rec(t, a + h), eval_rec(t, a - h)) else {
            return RealResult::Undefined;
        };
        *slot = (hi - lo) / (2.0 * h);
    }
    let settled = quotients.windows(2).all(|w| (w[0] - w[1]).abs() <= FD_CONVERGENCE * w[1].abs().max(1.0));
    if !settled {
        return RealResult::Undefined;
    }
    RealResult::from_value(Some((100.0 * quotients[1] - quotients[0]) / 99.0))
}

/// Absolute and relative tolerance of the derivative contract.
pub const DIFF_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct DiffViolation {
    pub point: f64,
    pub numeric: f64,
    pub symbolic: RealResult,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiffCheck {
    /// Points where the numeric derivative was defined and compared.
    pub compared: usize,
    /// Points where the numeric derivative was undefined.
    pub vacuous: usize,
    pub violations: Vec<DiffViolation>,
}

impl DiffCheck {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares `diff(t)` against [`deriv_numeric`] at each sample point.
pub fn check_spec_diff(t: &SynTerm, sample_points: &[f64]) -> Result<DiffCheck> {
    let d =
        diff(t).ok_or_else(|| KernelError::PredicateViolation("not a differentiable expression".into()))?;
    let mut report = DiffCheck::default();
    for &a in sample_points {
        let RealResult::Defined(numeric) = deriv_numeric(t, a) else {
            report.vacuous += 1;
            continue;
        };
        report.compared += 1;
        let symbolic = eval_real(&d, a);
        let ok = match symbolic {
            RealResult::Defined(s) => {
                (numeric - s).abs() <= DIFF_TOLERANCE.max(DIFF_TOLERANCE * numeric.abs())
            }
            RealResult::Undefined => false,
        };
        if !ok {
            report.violations.push(DiffViolation { point: a, numeric, symbolic });
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definedness {
    Defined,
    Undefined,
}

/// Definedness of a term on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainReport {
    pub points: Vec<(f64, Definedness)>,
}

impl DomainReport {
    pub fn defined_points(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().filter(|(_, d)| *d == Definedness::Defined).map(|(p, _)| *p)
    }
}

/// Evaluates `t` on `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn domain_sample(t: &SynTerm, lo: f64, hi: f64, n: usize) -> Result<DomainReport> {
    if !is_diff_expr(t) {
        return Err(KernelError::PredicateViolation("not a differentiable expression".into()));
    }
    if lo.is_nan() || hi.is_nan() || lo >= hi || n < 2 {
        return Err(KernelError::PredicateViolation("need lo < hi and n >= 2".into()));
    }
    let step = (hi - lo) / (n - 1) as f64;
    let points = (0..n)
        .map(|i| {
            let p = if i == n - 1 { hi } else { lo + step * i as f64 };
            let d = if eval_real(t, p).is_defined() { Definedness::Defined } else { Definedness::Undefined };
            (p, d)
        })
        .collect();
    Ok(DomainReport { points })
}

/// The polynomial a term denotes, when it uses only `x`, literals, `+`,
/// `*`, negation and nonnegative integer powers.
pub fn as_polynomial(t: &SynTerm) -> Option<Poly> {
    if let Some((s, _, a, b)) = t.as_binop() {
        let pa = as_polynomial(a)?;
        return match s {
            sym::ADD => Some(&pa + &as_polynomial(b)?),
            sym::MUL => Some(&pa * &as_polynomial(b)?),
            _ => {
                let c = as_lit(b)?;
                let n = c.to_integer().to_u32().filter(|_| c.is_integer())?;
                Some(pa.pow(n))
            }
        };
    }
    if let Some((s, _, a)) = t.as_unop() {
        return (s == sym::NEG).then(|| as_polynomial(a).map(|p| -p))?;
    }
    match t {
        SynTerm::RealLit(c) => Some(Poly::constant(c.clone())),
        _ => t.is_var("x", &SemType::R).then(Poly::x),
    }
}
