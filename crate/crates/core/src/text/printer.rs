//! Infix and s-expression printers.
//!
//! The infix printer is the inverse of [`super::parse`] on every term the
//! parser can produce. Terms outside the four languages still print, but
//! their subterms that have no infix form fall back to s-expressions.

use num_traits::Signed;

use crate::exact_arith::{fmt_rat, Rat};
use crate::syntax::{sym, SemType, SynTerm, ELEMENTARY};

// Binding strength of a printed form; an operand printed below the level
// its position requires gets parentheses.
const LAMBDA: u8 = 0;
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const POWER: u8 = 4;
const ATOM: u8 = 5;

fn literal(t: &SynTerm) -> Option<Rat> {
    match t {
        SynTerm::IntLit(n) => Some(Rat::from_integer(n.clone())),
        SynTerm::RatLit(c) | SynTerm::RealLit(c) => Some(c.clone()),
        _ => None,
    }
}

fn is_int_literal(t: &SynTerm) -> bool {
    literal(t).is_some_and(|c| c.is_integer())
}

fn is_positive_int_literal(t: &SynTerm) -> bool {
    literal(t).is_some_and(|c| c.is_integer() && c.is_positive())
}

/// Products and inverses of `q` (and `f`) terms print with power sugar.
fn has_power_sugar(ty: &SemType) -> bool {
    matches!(ty, SemType::Q | SemType::F)
}

/// `t = b * b * ... * b` (left-associated, `n ≥ 2` factors).
fn power_spine(t: &SynTerm) -> Option<(&SynTerm, usize)> {
    let (sym::MUL, ty, mut cur, base) = t.as_binop()? else { return None };
    if !has_power_sugar(ty) {
        return None;
    }
    let mut n = 1;
    loop {
        if cur == base {
            return Some((base, n + 1));
        }
        match cur.as_binop() {
            Some((sym::MUL, t2, l, r)) if t2 == ty && r == base => {
                n += 1;
                cur = l;
            }
            _ => return None,
        }
    }
}

fn wrap(t: &SynTerm, min: u8) -> String {
    let (s, p) = render(t);
    if p < min {
        format!("({s})")
    } else {
        s
    }
}

fn exponent_text(c: &Rat) -> String {
    if c.is_integer() && !c.is_negative() {
        fmt_rat(c)
    } else {
        format!("({})", fmt_rat(c))
    }
}

fn render(t: &SynTerm) -> (String, u8) {
    if let Some((base, n)) = power_spine(t) {
        return (format!("{}^{n}", wrap(base, ATOM)), POWER);
    }
    if let Some((s, ty, a, b)) = t.as_binop() {
        match s {
            sym::ADD => {
                let left = wrap(a, SUM);
                if let Some((sym::NEG, t2, c)) = b.as_unop() {
                    if t2 == ty {
                        return (format!("{left} - {}", wrap(c, PRODUCT)), SUM);
                    }
                }
                return (format!("{left} + {}", wrap(b, PRODUCT)), SUM);
            }
            sym::MUL => {
                let left = wrap(a, PRODUCT);
                if let Some((sym::INV, t2, c)) = b.as_unop() {
                    if t2 == ty {
                        // keep `a / b` from reading back as a rational literal
                        let right = if is_int_literal(a) && is_positive_int_literal(c) {
                            format!("({})", render(c).0)
                        } else {
                            wrap(c, UNARY)
                        };
                        return (format!("{left} / {right}"), PRODUCT);
                    }
                }
                return (format!("{left} * {}", wrap(b, UNARY)), PRODUCT);
            }
            sym::POW => {
                let e = match literal(b) {
                    Some(c) => exponent_text(&c),
                    None => wrap(b, ATOM),
                };
                return (format!("{}^{e}", wrap(a, ATOM)), POWER);
            }
            _ => {}
        }
    }
    if let Some((s, ty, a)) = t.as_unop() {
        match s {
            sym::NEG if literal(a).is_some() => return (format!("-({})", render(a).0), UNARY),
            sym::NEG => return (format!("-{}", wrap(a, UNARY)), UNARY),
            sym::INV if has_power_sugar(ty) => {
                return match power_spine(a) {
                    Some((base, n)) => (format!("{}^(-{n})", wrap(base, ATOM)), POWER),
                    None => (format!("{}^(-1)", wrap(a, ATOM)), POWER),
                };
            }
            s if s == sym::INV || ELEMENTARY.contains(&s) => {
                return (format!("{s}({})", render(a).0), ATOM);
            }
            _ => {}
        }
    }
    match t {
        SynTerm::IntLit(_) | SynTerm::RatLit(_) | SynTerm::RealLit(_) => {
            let c = literal(t).unwrap();
            let prec = if !c.is_integer() {
                PRODUCT
            } else if c.is_negative() {
                UNARY
            } else {
                ATOM
            };
            (fmt_rat(&c), prec)
        }
        SynTerm::Var { name, .. } => (name.clone(), ATOM),
        SynTerm::Lambda { var, body, .. } => (format!("fun {var} -> {}", render(body).0), LAMBDA),
        SynTerm::Quote(inner) => (format!("quote({})", render(inner).0), ATOM),
        _ => (sexpr(t), ATOM),
    }
}

/// Conventional infix notation.
pub fn infix(t: &SynTerm) -> String {
    render(t).0
}

/// Fully parenthesized prefix notation, e.g. `(* 1 (* (^ 2 2) (^ 3 1)))`.
pub fn sexpr(t: &SynTerm) -> String {
    match t {
        SynTerm::IntLit(n) => n.to_string(),
        SynTerm::RatLit(c) | SynTerm::RealLit(c) => fmt_rat(c),
        SynTerm::Var { name, .. } => name.clone(),
        SynTerm::Const { symbol, .. } => symbol.clone(),
        SynTerm::App(..) => {
            let mut args = Vec::new();
            let mut head = t;
            while let SynTerm::App(f, a) = head {
                args.push(a.as_ref());
                head = f;
            }
            let parts: Vec<String> = std::iter::once(head).chain(args.into_iter().rev()).map(sexpr).collect();
            format!("({})", parts.join(" "))
        }
        SynTerm::Lambda { var, body, .. } => format!("(lambda {var} {})", sexpr(body)),
        SynTerm::Quote(inner) => format!("(quote {})", sexpr(inner)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::rterm;
    use crate::exact_arith::rat;
    use crate::factor;
    use crate::ratnorm::qterm::*;
    use crate::text::{parse, Lang};

    #[test]
    fn infix_examples() {
        assert_eq!(infix(&add(pow(x(), 2), int(1))), "x^2 + 1");
        assert_eq!(infix(&sub(div(int(1), x()), div(int(1), x()))), "1 / x - 1 / x");
        assert_eq!(infix(&div(int(1), int(0))), "1 / 0");
        assert_eq!(infix(&div(int(1), int(2))), "1 / (2)");
        assert_eq!(infix(&lit(rat(-1, 2))), "-1/2");
        assert_eq!(infix(&mul(x(), lit(rat(1, 2)))), "x * (1/2)");
        assert_eq!(infix(&neg(int(3))), "-(3)");
        assert_eq!(infix(&inv(add(x(), int(1)))), "(x + 1)^(-1)");
        assert_eq!(infix(&inv(pow(x(), 3))), "x^(-3)");
        assert_eq!(infix(&mul(int(-3), int(-3))), "(-3)^2");
        assert_eq!(infix(&fun(div(x(), x()))), "fun x -> x / x");
        let d = rterm::div(
            rterm::mul(rterm::int(2), rterm::x()),
            rterm::sub(rterm::powi(rterm::x(), 2), rterm::int(1)),
        );
        assert_eq!(infix(&d), "2 * x / (x^2 - 1)");
        assert_eq!(infix(&rterm::pow(rterm::x(), rat(-1, 2))), "x^(-1/2)");
        assert_eq!(infix(&rterm::inv(rterm::x())), "inv(x)");
    }

    #[test]
    fn sexpr_of_factorization() {
        let t = factor::factor(&SynTerm::int(12)).unwrap();
        assert_eq!(sexpr(&t), "(* 1 (* (^ 2 2) (^ 3 1)))");
        assert_eq!(infix(&t), "1 * (2^2 * 3^1)");
        assert_eq!(parse(&infix(&t), Lang::Int).unwrap(), t);
        assert_eq!(sexpr(&fun(x())), "(lambda x x)");
    }

    #[test]
    fn tricky_round_trips() {
        let cases = [
            div(int(1), int(2)),
            div(int(-1), int(2)),
            div(lit(rat(1, 2)), int(3)),
            mul(lit(rat(1, 2)), int(3)),
            add(x(), int(-3)),
            sub(x(), int(-3)),
            sub(x(), neg(x())),
            neg(neg(int(3))),
            neg(mul(int(3), int(3))),
            neg(mul(int(3), x())),
            mul(neg(x()), x()),
            mul(inv(x()), inv(x())),
            mul(mul(x(), x()), mul(x(), x())),
            mul(x(), mul(x(), x())),
            mul(mul(mul(int(2), x()), x()), x()),
            div(x(), mul(x(), x())),
            div(x(), div(x(), x())),
            inv(inv(x())),
            add(int(1), add(x(), int(2))),
            div(int(2), lit(rat(1, 3))),
            mul(int(2), inv(int(-3))),
            mul(lit(rat(2, 3)), inv(int(3))),
            inv(lit(rat(2, 3))),
            inv(int(-2)),
        ];
        for t in cases {
            let s = infix(&t);
            assert_eq!(parse(&s, Lang::RatExpr).unwrap(), t, "{s}");
        }
    }
}
