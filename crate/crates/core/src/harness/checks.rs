//! The contract suites.
//!
//! Each check follows the branch structure of its contract: what must hold
//! on in-language inputs, what must hold on inputs that are undefined, and
//! that out-of-language inputs give no result. Each branch is counted
//! separately so an unexercised branch fails the report.

use num_traits::{ToPrimitive, Zero};

use super::gen::Gen;
use super::report::Report;
use super::GenConfig;
use crate::diff::{self, rterm, RealResult};
use crate::exact_arith::{fmt_rat, Int, Rat};
use crate::factor::{factor, factor_int, is_prime_decomp};
use crate::poly::Poly;
use crate::ratnorm::{
    self, apply_rat_fun, flatten_unreduced, inverted_subterms, is_norm, is_quasinorm, is_rat_fun,
    norm_rat_expr, norm_rat_fun, qterm, undefined_normal_form,
};
use crate::syntax::{eval_as, quote, sym, SemType, SynTerm, Value};
use crate::text::infix;

// independent generator streams per check
const STREAM_FACTOR: u64 = 1;
const STREAM_NORM_EXPR: u64 = 2;
const STREAM_NORM_FUN: u64 = 3;
const STREAM_DIFF: u64 = 4;
const STREAM_DISQUOTE: u64 = 5;

/// Sample points per term in the derivative check.
pub const DIFF_POINTS_PER_TERM: usize = 25;
/// Derivative sample points are drawn uniformly from this interval.
pub const DIFF_SAMPLE_RANGE: (f64, f64) = (-2.5, 2.5);
/// Random rationals per function in the rational-function check.
pub const RANDOM_POINTS_PER_FUN: usize = 50;
/// Factorizations below this bound are compared against trial division.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000_000;

/// Share of negative cases, relative to `cases`.
fn negative_cases(cfg: &GenConfig) -> usize {
    (cfg.cases * 2 / 5).max(1)
}

pub mod branch {
    pub const NUMERAL_DECOMP: &str = "numeral: output is a prime decomposition";
    pub const NUMERAL_VALUE: &str = "numeral: output denotes the input";
    pub const NUMERAL_ORACLE: &str = "numeral: agrees with trial division";
    pub const NON_NUMERAL: &str = "non-numeral: undefined";

    pub const EXPR_NORM: &str = "defined: output is in normal form";
    pub const EXPR_VALUE: &str = "defined: output has the same value in Q(x)";
    pub const EXPR_IDEMPOTENT: &str = "normalization is idempotent";
    pub const EXPR_CANONICAL: &str = "equal values iff identical normal forms";
    pub const EXPR_UNDEFINED: &str = "undefined in Q(x): output is 1/0";
    pub const NON_RAT_EXPR: &str = "non-rational-expression: undefined";

    pub const FUN_SHAPE: &str = "output is a rational function";
    pub const FUN_QUASINORM: &str = "output body is quasinormal";
    pub const FUN_POINTWISE: &str = "same value or both undefined at every sample point";
    pub const FUN_KNOWN: &str = "known quasinormal forms";
    pub const NON_RAT_FUN: &str = "non-rational-function: undefined";

    pub const DIFF_CLOSURE: &str = "output is differentiable-language";
    pub const DIFF_VALUE: &str = "output matches the numeric derivative";
    pub const DIFF_KNOWN: &str = "known derivatives";
    pub const NON_DIFF_EXPR: &str = "non-differentiable-language: undefined";

    pub const QUOTE_I: &str = "type i";
    pub const QUOTE_Q: &str = "type q";
    pub const QUOTE_F: &str = "type f";
    pub const QUOTE_QQ: &str = "type q -> q";
    pub const QUOTE_MISMATCH: &str = "type mismatch: undefined";
}

use branch::*;

/// Prime factorization by trial division.
pub fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn factor_case(r: &mut Report, t: &SynTerm) {
    let SynTerm::IntLit(n) = t else { unreachable!("numerals are literals") };
    let show = || infix(t);
    let Some(d) = factor(t) else {
        r.record(NUMERAL_DECOMP, false, || format!("factor({}) undefined", show()));
        return;
    };
    r.record(NUMERAL_DECOMP, is_prime_decomp(&d), || format!("{} -> {}", show(), infix(&d)));
    let lhs = eval_as(&quote(d.clone()), &SemType::I);
    let rhs = eval_as(&quote(t.clone()), &SemType::I);
    let ok = lhs == rhs && rhs == Ok(Some(Value::IntV(n.clone())));
    r.record(NUMERAL_VALUE, ok, || format!("{} -> {} evaluates to {lhs:?}", show(), infix(&d)));
    if let Some(small) = n.to_u64().filter(|&v| v > 0 && v < TRIAL_DIVISION_LIMIT) {
        let got: Vec<(u64, u32)> =
            factor_int(n).factors.iter().map(|(p, e)| (p.to_u64().unwrap(), *e)).collect();
        let want = trial_division(small);
        r.record(NUMERAL_ORACLE, got == want, || format!("{small}: {got:?} vs {want:?}"));
    }
}

/// Factoring contract over `cases` numerals (plus 12) and `2/5 cases`
/// non-numerals.
pub fn check_spec_factor(cfg: &GenConfig) -> Report {
    let mut r = Report::new("factor", &[NUMERAL_DECOMP, NUMERAL_VALUE, NUMERAL_ORACLE, NON_NUMERAL]);
    let mut g = Gen::new(cfg, STREAM_FACTOR);
    factor_case(&mut r, &SynTerm::int(12));
    for _ in 0..cfg.cases {
        factor_case(&mut r, &g.numeral());
    }
    for _ in 0..negative_cases(cfg) {
        let t = g.non_numeral();
        r.record(NON_NUMERAL, factor(&t).is_none(), || format!("factor({}) defined", infix(&t)));
    }
    r
}

fn cross_equal((p0, q0): &(Poly, Poly), (p1, q1): &(Poly, Poly)) -> bool {
    p0 * q1 == p1 * q0
}

/// A structurally different expression with the same value in Q(x).
fn equal_value_variant(g: &mut Gen, t: &SynTerm) -> SynTerm {
    let defined_nonzero = |u: &SynTerm| flatten_unreduced(u).is_some_and(|(p, _)| !p.is_zero());
    match g.small_int(2) {
        -1 => {
            let c = g.rational(12, 3);
            let k = qterm::lit(Rat::from_integer(3.into()));
            let lin = qterm::mul(k, qterm::sub(qterm::x(), qterm::lit(c)));
            qterm::mul(t.clone(), qterm::div(lin.clone(), lin))
        }
        0 => {
            let u = g.rat_expr();
            if flatten_unreduced(&u).is_some() {
                qterm::add(qterm::sub(u.clone(), u), t.clone())
            } else {
                qterm::neg(qterm::neg(t.clone()))
            }
        }
        _ => {
            let u = g.rat_expr();
            if defined_nonzero(&u) {
                qterm::div(qterm::mul(u.clone(), t.clone()), u)
            } else {
                qterm::mul(qterm::int(1), t.clone())
            }
        }
    }
}

fn norm_expr_case(
    r: &mut Report,
    g: &mut Gen,
    t: &SynTerm,
    previous: &mut Option<((Poly, Poly), SynTerm, SynTerm)>,
) {
    let show = || infix(t);
    let Some(out) = norm_rat_expr(t) else {
        r.record(EXPR_NORM, false, || format!("norm({}) undefined", show()));
        return;
    };
    let again = norm_rat_expr(&out);
    r.record(EXPR_IDEMPOTENT, again.as_ref() == Some(&out), || {
        format!("{} -> {} -> {:?}", show(), infix(&out), again.as_ref().map(infix))
    });
    let Some(flat) = flatten_unreduced(t) else {
        r.record(EXPR_UNDEFINED, out == undefined_normal_form(), || format!("{} -> {}", show(), infix(&out)));
        return;
    };
    r.record(EXPR_NORM, is_norm(&out), || format!("{} -> {}", show(), infix(&out)));
    let preserved = flatten_unreduced(&out).is_some_and(|o| cross_equal(&flat, &o));
    r.record(EXPR_VALUE, preserved, || format!("{} -> {}", show(), infix(&out)));

    let variant = equal_value_variant(g, t);
    let vout = norm_rat_expr(&variant);
    r.record(EXPR_CANONICAL, vout.as_ref() == Some(&out), || {
        format!("{} and {} normalize differently", show(), infix(&variant))
    });
    if let Some((pflat, pterm, pout)) = previous.take() {
        let same_value = cross_equal(&flat, &pflat);
        r.record(EXPR_CANONICAL, same_value == (pout == out), || {
            format!("{} vs {}: oracle says equal={same_value}", show(), infix(&pterm))
        });
    }
    *previous = Some((flat, t.clone(), out));
}

fn known_rat_exprs() -> Vec<SynTerm> {
    use qterm::*;
    vec![
        div(sub(pow(x(), 4), int(1)), sub(pow(x(), 2), int(1))),
        div(x(), x()),
        sub(div(int(1), x()), div(int(1), x())),
        div(int(1), sub(x(), x())),
        div(int(1), div(int(1), x())),
    ]
}

/// Normalization contract over `cases` rational expressions and `2/5 cases`
/// other terms.
pub fn check_spec_norm_rat_expr(cfg: &GenConfig) -> Report {
    let mut r = Report::new(
        "norm-expr",
        &[EXPR_NORM, EXPR_VALUE, EXPR_IDEMPOTENT, EXPR_CANONICAL, EXPR_UNDEFINED, NON_RAT_EXPR],
    );
    let mut g = Gen::new(cfg, STREAM_NORM_EXPR);
    let mut previous = None;
    for t in known_rat_exprs() {
        norm_expr_case(&mut r, &mut g, &t, &mut previous);
    }
    for _ in 0..cfg.cases {
        let t = g.rat_expr();
        norm_expr_case(&mut r, &mut g, &t, &mut previous);
    }
    for _ in 0..negative_cases(cfg) {
        let t = g.non_rat_expr();
        r.record(NON_RAT_EXPR, norm_rat_expr(&t).is_none(), || format!("norm({}) defined", infix(&t)));
    }
    r
}

/// Rational zeros of the denominators inside `body`, which is where a
/// rational function can be undefined.
pub fn singular_candidates(body: &SynTerm) -> Vec<Rat> {
    let mut pts: Vec<Rat> = Vec::new();
    for sub in inverted_subterms(body) {
        if let Some((p, _)) = flatten_unreduced(sub) {
            if !p.is_zero() {
                pts.extend(p.rational_roots().unwrap_or_default().into_iter().map(|(r, _)| r));
            }
        }
    }
    pts.sort();
    pts.dedup();
    pts
}

fn norm_fun_case(r: &mut Report, g: &mut Gen, f: &SynTerm) -> Option<SynTerm> {
    let show = || infix(f);
    let Some(out) = norm_rat_fun(f) else {
        r.record(FUN_SHAPE, false, || format!("norm({}) undefined", show()));
        return None;
    };
    r.record(FUN_SHAPE, is_rat_fun(&out), || format!("{} -> {}", show(), infix(&out)));
    let body = ratnorm::body(&out)?;
    r.record(FUN_QUASINORM, is_quasinorm(&body), || format!("{} -> {}", show(), infix(&out)));
    let mut points = singular_candidates(&ratnorm::body(f)?);
    points.extend(singular_candidates(&body));
    points.extend((0..RANDOM_POINTS_PER_FUN).map(|_| g.rational(50, 20)));
    let bad = points.iter().find(|a| apply_rat_fun(f, a) != apply_rat_fun(&out, a));
    r.record(FUN_POINTWISE, bad.is_none(), || {
        let a = bad.unwrap();
        format!(
            "{} -> {} at {}: {:?} vs {:?}",
            show(),
            infix(&out),
            fmt_rat(a),
            apply_rat_fun(f, a).map(|v| fmt_rat(&v)),
            apply_rat_fun(&out, a).map(|v| fmt_rat(&v)),
        )
    });
    Some(out)
}

/// Quasinormalization contract over `cases` rational functions and
/// `2/5 cases` other terms.
pub fn check_spec_norm_rat_fun(cfg: &GenConfig) -> Report {
    use qterm::*;
    let mut r = Report::new("norm-fun", &[FUN_SHAPE, FUN_QUASINORM, FUN_POINTWISE, FUN_KNOWN, NON_RAT_FUN]);
    let mut g = Gen::new(cfg, STREAM_NORM_FUN);

    let x_over_x = fun(div(x(), x()));
    let out = norm_fun_case(&mut r, &mut g, &x_over_x);
    let zero = Rat::zero();
    let keeps = out.as_ref().is_some_and(|o| {
        apply_rat_fun(o, &zero).is_none()
            && apply_rat_fun(o, &Rat::from_integer(5.into())) == Some(Rat::from_integer(1.into()))
    });
    r.record(FUN_KNOWN, keeps, || format!("fun x -> x/x became {:?}", out.as_ref().map(infix)));

    let sq = add(pow(x(), 2), int(1));
    let out = norm_fun_case(&mut r, &mut g, &fun(div(sq.clone(), sq)));
    r.record(FUN_KNOWN, out == Some(fun(int(1))), || {
        format!("fun x -> (x^2+1)/(x^2+1) became {:?}", out.as_ref().map(infix))
    });

    for _ in 0..cfg.cases {
        let f = g.rat_fun();
        norm_fun_case(&mut r, &mut g, &f);
    }
    for _ in 0..negative_cases(cfg) {
        let t = g.non_rat_fun();
        r.record(NON_RAT_FUN, norm_rat_fun(&t).is_none(), || format!("norm({}) defined", infix(&t)));
    }
    r
}

fn diff_case(r: &mut Report, g: &mut Gen, t: &SynTerm) -> Option<SynTerm> {
    let show = || infix(t);
    let Some(d) = diff::diff(t) else {
        r.record(DIFF_CLOSURE, false, || format!("diff({}) undefined", show()));
        return None;
    };
    r.record(DIFF_CLOSURE, diff::is_diff_expr(&d), || format!("{} -> {}", show(), infix(&d)));
    let (lo, hi) = DIFF_SAMPLE_RANGE;
    let points: Vec<f64> = (0..DIFF_POINTS_PER_TERM).map(|_| g.real_point(lo, hi)).collect();
    let report = diff::check_spec_diff(t, &points).expect("input is in the language");
    for _ in 0..report.compared - report.violations.len() {
        r.record(DIFF_VALUE, true, String::new);
    }
    for v in &report.violations {
        r.record(DIFF_VALUE, false, || {
            format!("{} -> {} at {}: numeric {} vs {:?}", show(), infix(&d), v.point, v.numeric, v.symbolic)
        });
    }
    Some(d)
}

/// `|a - b| <= 1e-12 * max(1, |a|)`, or both undefined.
fn close(a: RealResult, b: RealResult) -> bool {
    match (a, b) {
        (RealResult::Defined(a), RealResult::Defined(b)) => (a - b).abs() <= 1e-12 * a.abs().max(1.0),
        (RealResult::Undefined, RealResult::Undefined) => true,
        _ => false,
    }
}

/// Derivative contract over `cases` terms at 25 points each, plus
/// `2/5 cases` out-of-language terms.
pub fn check_spec_diff(cfg: &GenConfig) -> Report {
    use rterm::*;
    let mut r = Report::new("diff", &[DIFF_CLOSURE, DIFF_VALUE, DIFF_KNOWN, NON_DIFF_EXPR]);
    let mut g = Gen::new(cfg, STREAM_DIFF);

    let x2px = add(powi(x(), 2), x());
    let x2m1 = sub(powi(x(), 2), int(1));
    let known = [
        (call(sym::SIN, x2px.clone()), mul(add(mul(int(2), x()), int(1)), call(sym::COS, x2px))),
        (call(sym::LN, x2m1.clone()), div(mul(int(2), x()), x2m1)),
    ];
    for (t, expected) in known {
        let d = diff_case(&mut r, &mut g, &t);
        let expected = diff::simplify(&expected);
        let pointwise = d.as_ref().is_some_and(|d| {
            (-20..=20)
                .map(|i| i as f64 * 0.15 + 0.01)
                .all(|a| close(diff::eval_real(d, a), diff::eval_real(&expected, a)))
        });
        r.record(DIFF_KNOWN, d.as_ref() == Some(&expected) && pointwise, || {
            format!("diff({}) = {:?}, expected {}", infix(&t), d.as_ref().map(infix), infix(&expected))
        });
    }
    for _ in 0..cfg.cases {
        let t = g.diff_expr();
        diff_case(&mut r, &mut g, &t);
    }
    for _ in 0..negative_cases(cfg) {
        let t = g.non_diff_expr();
        r.record(NON_DIFF_EXPR, diff::diff(&t).is_none(), || format!("diff({}) defined", infix(&t)));
    }
    r
}

fn mismatch_case(g: &mut Gen) -> (SynTerm, SemType) {
    let qq = SemType::unary(SemType::Q);
    match g.small_int(3) {
        -3 => (g.int_term().0, SemType::Q),
        -2 => (g.int_term().0, SemType::F),
        -1 => (g.rat_term().0, SemType::I),
        0 => (g.rat_term().0, SemType::R),
        1 => (g.rat_fun(), SemType::Q),
        2 => (g.f_term().0, SemType::Q),
        _ => (g.numeral(), qq),
    }
}

/// Disquotation over `cases` terms of each of `i`, `q`, `f`, `q -> q` and
/// `cases / 5` type-mismatched evaluations.
pub fn check_disquotation(cfg: &GenConfig) -> Report {
    let mut r = Report::new("disquote", &[QUOTE_I, QUOTE_Q, QUOTE_F, QUOTE_QQ, QUOTE_MISMATCH]);
    let mut g = Gen::new(cfg, STREAM_DISQUOTE);
    for k in 0..cfg.cases {
        let (t, v) = if k % 2 == 0 {
            g.int_term()
        } else {
            let t = g.numeral();
            let SynTerm::IntLit(n) = &t else { unreachable!() };
            let n: Int = n.clone();
            (t, n)
        };
        let got = eval_as(&quote(t.clone()), &SemType::I);
        r.record(QUOTE_I, got == Ok(Some(Value::IntV(v.clone()))), || {
            format!("{}: {got:?} vs {v}", infix(&t))
        });
    }
    for _ in 0..cfg.cases {
        let (t, v) = g.rat_term();
        let got = eval_as(&quote(t.clone()), &SemType::Q);
        r.record(QUOTE_Q, got == Ok(Some(Value::RatV(v.clone()))), || {
            format!("{}: {got:?} vs {}", infix(&t), fmt_rat(&v))
        });
    }
    let mut f_cases = 0;
    while f_cases < cfg.cases {
        let (t, pair) = if f_cases % 2 == 0 {
            let t = g.rat_expr();
            let Some(pair) = flatten_unreduced(&t) else { continue };
            (t, pair)
        } else {
            g.f_term()
        };
        f_cases += 1;
        let got = eval_as(&quote(t.clone()), &SemType::F);
        let ok = match &got {
            Ok(Some(Value::FracV(c))) => cross_equal(&pair, &(c.num().clone(), c.den().clone())),
            _ => false,
        };
        r.record(QUOTE_F, ok, || format!("{}: {got:?}", infix(&t)));
    }
    let qq = SemType::unary(SemType::Q);
    for _ in 0..cfg.cases {
        let f = g.rat_fun();
        let got = eval_as(&quote(f.clone()), &qq);
        let body = ratnorm::body(&f).unwrap();
        let ok = match &got {
            Ok(Some(Value::FnQQ(h))) => (0..10).all(|_| {
                let a = g.rational(20, 10);
                apply_rat_fun(h, &a) == ratnorm::eval_rat_expr_at(&body, &a)
            }),
            _ => false,
        };
        r.record(QUOTE_QQ, ok, || format!("{}: {got:?}", infix(&f)));
    }
    for _ in 0..(cfg.cases / 5).max(1) {
        let (t, ty) = mismatch_case(&mut g);
        let got = eval_as(&quote(t.clone()), &ty);
        r.record(QUOTE_MISMATCH, got == Ok(None), || format!("{} at {ty}: {got:?}", infix(&t)));
    }
    r
}

/// All five checks, in a fixed order.
pub fn check_all(cfg: &GenConfig) -> Vec<Report> {
    vec![
        check_spec_factor(cfg),
        check_spec_norm_rat_expr(cfg),
        check_spec_norm_rat_fun(cfg),
        check_spec_diff(cfg),
        check_disquotation(cfg),
    ]
}
