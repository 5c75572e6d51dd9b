//! Recursive-descent parser.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := atom ('^' exponent)?
//! exponent := ['-'] integer | '(' ['-'] integer ['/' integer] ')'
//! atom     := integer | 'x' | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Binary minus is `a + (-b)` and division is `a * b⁻¹`. Two literal
//! conventions keep printing invertible: a `-` directly before an integer
//! (and not before a power) makes a negative literal, and `a / b` with both
//! sides bare integers makes a rational literal.

use num_traits::{ToPrimitive, Zero};

use super::Lang;
use crate::error::{KernelError, Result};
use crate::exact_arith::{Int, Rat};
use crate::syntax::{is_expr_of, sym, SemType, SynTerm, ELEMENTARY};
use crate::{diff, ratnorm};

/// Largest exponent expanded into a product in rational expressions.
const MAX_EXPANDED_EXPONENT: i64 = 4096;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Int),
    Ident(String),
    Sym(char),
    Arrow,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(n) => format!("number {n}"),
        Tok::Ident(s) => format!("identifier {s:?}"),
        Tok::Sym(c) => format!("'{c}'"),
        Tok::Arrow => "'->'".into(),
        Tok::Eof => "end of input".into(),
    }
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let start = i;
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            Tok::Num(text.parse().expect("digits"))
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            i += 2;
            Tok::Arrow
        } else if "+-*/^()".contains(c) {
            i += 1;
            Tok::Sym(c)
        } else {
            return Err(KernelError::Syntax { line, col, msg: format!("unexpected character {c:?}") });
        };
        col += i - start;
        out.push(Token { tok, line: l0, col: c0 });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    ty: SemType,
}

/// A parsed unary together with whether it came from a lone integer token.
type Operand = (SynTerm, bool);

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(KernelError::Syntax { line: t.line, col: t.col, msg: msg.into() })
    }

    fn violation<T>(&self, msg: &str) -> Result<T> {
        Err(KernelError::PredicateViolation(msg.to_string()))
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", describe(&want), describe(self.peek())))
        }
    }

    fn lit(&self, c: Rat) -> SynTerm {
        match self.ty {
            SemType::I => SynTerm::IntLit(c.to_integer()),
            SemType::Q => SynTerm::RatLit(c),
            _ => SynTerm::RealLit(c),
        }
    }

    fn binop(&self, s: &str, a: SynTerm, b: SynTerm) -> SynTerm {
        SynTerm::binop(s, self.ty.clone(), a, b)
    }

    fn unop(&self, s: &str, a: SynTerm) -> SynTerm {
        SynTerm::unop(s, self.ty.clone(), a)
    }

    /// An integer token that is not the base of a power.
    fn bare_int_ahead(&self, k: usize) -> Option<Int> {
        match (self.peek_at(k), self.peek_at(k + 1)) {
            (Tok::Num(n), next) if *next != Tok::Sym('^') => Some(n.clone()),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<SynTerm> {
        let mut t = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    let r = self.term()?;
                    t = self.binop(sym::ADD, t, r);
                }
                Tok::Sym('-') => {
                    self.bump();
                    let r = self.term()?;
                    let r = self.unop(sym::NEG, r);
                    t = self.binop(sym::ADD, t, r);
                }
                _ => return Ok(t),
            }
        }
    }

    fn term(&mut self) -> Result<SynTerm> {
        let (mut t, mut bare) = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    let (r, _) = self.unary()?;
                    t = self.binop(sym::MUL, t, r);
                }
                Tok::Sym('/') => {
                    if self.ty == SemType::I {
                        return self.violation("division is not part of integer arithmetic");
                    }
                    self.bump();
                    match (&t, bare, self.bare_int_ahead(0)) {
                        (SynTerm::RatLit(a) | SynTerm::RealLit(a), true, Some(d)) if !d.is_zero() => {
                            self.bump();
                            t = self.lit(a / Rat::from_integer(d));
                        }
                        _ => {
                            let (r, _) = self.unary()?;
                            let r = self.unop(sym::INV, r);
                            t = self.binop(sym::MUL, t, r);
                        }
                    }
                }
                _ => return Ok(t),
            }
            bare = false;
        }
    }

    fn unary(&mut self) -> Result<Operand> {
        if *self.peek() != Tok::Sym('-') {
            return self.power();
        }
        self.bump();
        if let Some(n) = self.bare_int_ahead(0) {
            self.bump();
            return Ok((self.lit(Rat::from_integer(-n)), true));
        }
        let (u, _) = self.unary()?;
        Ok((self.unop(sym::NEG, u), false))
    }

    fn power(&mut self) -> Result<Operand> {
        let (base, bare) = self.atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok((base, bare));
        }
        self.bump();
        let c = self.exponent()?;
        let t = match self.ty {
            SemType::Q => {
                if !c.is_integer() {
                    return self.violation("rational exponents belong to real expressions");
                }
                let n = c.to_integer().to_i64().filter(|n| n.abs() <= MAX_EXPANDED_EXPONENT);
                let Some(n) = n else { return self.error("exponent too large") };
                let chain = ratnorm::qterm::pow(base, n.unsigned_abs() as u32);
                if n < 0 {
                    self.unop(sym::INV, chain)
                } else {
                    chain
                }
            }
            SemType::I => {
                if !c.is_integer() {
                    return self.violation("rational exponents belong to real expressions");
                }
                self.binop(sym::POW, base, SynTerm::IntLit(c.to_integer()))
            }
            _ => self.binop(sym::POW, base, SynTerm::RealLit(c)),
        };
        Ok((t, false))
    }

    fn integer(&mut self) -> Result<Int> {
        match self.bump() {
            Tok::Num(n) => Ok(n),
            t => {
                self.pos -= 1;
                self.error(format!("expected an integer, found {}", describe(&t)))
            }
        }
    }

    fn exponent(&mut self) -> Result<Rat> {
        let paren = *self.peek() == Tok::Sym('(');
        if paren {
            self.bump();
        }
        let negative = *self.peek() == Tok::Sym('-');
        if negative {
            self.bump();
        }
        let mut c = Rat::from_integer(self.integer()?);
        if paren && *self.peek() == Tok::Sym('/') {
            self.bump();
            let d = self.integer()?;
            if d.is_zero() {
                return self.error("zero denominator in exponent");
            }
            c /= Rat::from_integer(d);
        }
        if paren {
            self.expect(Tok::Sym(')'))?;
        }
        Ok(if negative { -c } else { c })
    }

    fn atom(&mut self) -> Result<Operand> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok((self.lit(Rat::from_integer(n)), true))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::Sym(')'))?;
                Ok((e, false))
            }
            Tok::Ident(name) if name == "x" => {
                if self.ty == SemType::I {
                    return self.violation("integer arithmetic has no variables");
                }
                self.bump();
                Ok((SynTerm::var("x", self.ty.clone()), false))
            }
            Tok::Ident(name) if name == sym::INV || ELEMENTARY.contains(&name.as_str()) => {
                let allowed = match self.ty {
                    SemType::R => true,
                    SemType::Q => name == sym::INV,
                    _ => false,
                };
                if !allowed {
                    return self.violation(&format!("{name} is not available in this language"));
                }
                self.bump();
                self.expect(Tok::Sym('('))?;
                let e = self.expr()?;
                self.expect(Tok::Sym(')'))?;
                Ok((self.unop(&name, e), false))
            }
            Tok::Ident(name) if name == "fun" => self.violation("lambda is only allowed in ratfun"),
            Tok::Ident(name) => self.error(format!("unknown identifier {name:?}")),
            t => self.error(format!("expected an expression, found {}", describe(&t))),
        }
    }
}

/// Parses `src` in language `lang`. The result satisfies the language's
/// predicate (`is_expr_of(_, i)`, `is_rat_expr`, `is_rat_fun` or
/// `is_diff_expr`).
pub fn parse(src: &str, lang: Lang) -> Result<SynTerm> {
    let ty = match lang {
        Lang::Int => SemType::I,
        Lang::RatExpr | Lang::RatFun => SemType::Q,
        Lang::DiffExpr => SemType::R,
    };
    let mut p = Parser { toks: lex(src)?, pos: 0, ty };
    let t = if lang == Lang::RatFun {
        if *p.peek() != Tok::Ident("fun".into()) {
            return p.error("expected 'fun x -> ...'");
        }
        p.bump();
        if *p.peek() != Tok::Ident("x".into()) {
            return p.violation("a rational function binds x");
        }
        p.bump();
        p.expect(Tok::Arrow)?;
        ratnorm::qterm::fun(p.expr()?)
    } else {
        p.expr()?
    };
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {}", describe(p.peek())));
    }
    let ok = match lang {
        Lang::Int => is_expr_of(&t, &SemType::I),
        Lang::RatExpr => ratnorm::is_rat_expr(&t),
        Lang::RatFun => ratnorm::is_rat_fun(&t),
        Lang::DiffExpr => diff::is_diff_expr(&t),
    };
    if !ok {
        return p.violation("parsed term is outside the language");
    }
    Ok(t)
}
