//! Univariate polynomials over exact rationals.
//!
//! A [`Poly`] is stored as its ascending coefficient list with no trailing
//! zeros, so two polynomials are equal exactly when their lists are.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{KernelError, Result};
use crate::exact_arith::{fmt_rat, Int, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Poly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Rat::one())
    }

    pub fn x() -> Poly {
        Poly::new(vec![Rat::zero(), Rat::one()])
    }

    pub fn constant(c: Rat) -> Poly {
        Poly::new(vec![c])
    }

    /// `x - r`
    pub fn linear(r: &Rat) -> Poly {
        Poly::new(vec![-r.clone(), Rat::one()])
    }

    /// `x^n`
    pub fn monomial(c: Rat, n: usize) -> Poly {
        let mut coeffs = vec![Rat::zero(); n];
        coeffs.push(c);
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` stands for the degree of the zero polynomial (minus infinity).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides by the leading coefficient; the zero polynomial stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(lc) => self.scale(&lc.recip()),
            None => Poly::zero(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Horner evaluation.
    pub fn eval_at(&self, a: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * a + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(Int::from(i)))
                .collect(),
        )
    }

    /// `self = q*d + r` with `deg r < deg d`.
    pub fn divmod(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(KernelError::DivisionByZero)?;
        let lc = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(n) = self.degree().filter(|&n| n >= dd) else {
            return Ok((Poly::zero(), self.clone()));
        };
        let mut quot = vec![Rat::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let c = &rem[k + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dj;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Quotient of a division known to be exact.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.divmod(d)?;
        debug_assert!(r.is_zero(), "inexact division {self} / {d}");
        Ok(q)
    }

    pub fn divides(&self, p: &Poly) -> bool {
        p.divmod(self).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    /// Monic greatest common divisor; `gcd(p, 0) = monic(p)`.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        if self.is_zero() && other.is_zero() {
            return Err(KernelError::ZeroPolynomial);
        }
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let (_, r) = a.divmod(&b)?;
            a = b;
            b = r.monic();
        }
        Ok(a)
    }

    /// `self / gcd(self, self')`, monic.
    pub fn squarefree_part(&self) -> Result<Poly> {
        if self.is_zero() {
            return Err(KernelError::ZeroPolynomial);
        }
        let g = self.gcd(&self.derivative())?;
        Ok(self.exact_div(&g)?.monic())
    }

    /// Positive rational multiple with coprime integer coefficients.
    pub fn integer_primitive(&self) -> Vec<Int> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = self.coeffs.iter().fold(Int::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<Int> =
            self.coeffs.iter().map(|c| (c * Rat::from_integer(lcm.clone())).to_integer()).collect();
        let content = ints.iter().fold(Int::zero(), |acc, c| acc.gcd(c));
        ints.into_iter().map(|c| c / &content).collect()
    }

    /// All rational roots with multiplicities, ascending.
    ///
    /// Real roots of the square-free part are isolated with a Sturm chain and
    /// each isolating interval is shrunk below `1/L^2`, where `L` is the
    /// leading coefficient of the integer-primitive square-free part. A
    /// rational root `a/b` has `b | L`, so it must be the simplest rational
    /// inside such an interval.
    pub fn rational_roots(&self) -> Result<Vec<(Rat, u32)>> {
        if self.is_zero() {
            return Err(KernelError::ZeroPolynomial);
        }
        let mut roots: Vec<Rat> = Vec::new();
        if self.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let mut sqf = self.squarefree_part()?;
        if sqf.coeff(0).is_zero() {
            roots.push(Rat::zero());
            sqf = sqf.exact_div(&Poly::x())?;
        }
        match sqf.degree() {
            Some(0) => {}
            Some(1) => roots.push(-sqf.coeff(0) / sqf.coeff(1)),
            _ => roots.extend(isolate_rational_roots(&sqf)),
        }
        roots.sort();
        let mut out = Vec::with_capacity(roots.len());
        for r in roots {
            let lin = Poly::linear(&r);
            let mut rest = self.clone();
            let mut m = 0u32;
            loop {
                let (q, rem) = rest.divmod(&lin)?;
                if !rem.is_zero() {
                    break;
                }
                rest = q;
                m += 1;
            }
            debug_assert!(m >= 1);
            out.push((r, m));
        }
        Ok(out)
    }

    /// The monic product of `(x - r)^m` over the rational roots.
    pub fn linear_part(&self) -> Result<Poly> {
        Ok(self.rational_roots()?.iter().fold(Poly::one(), |acc, (r, m)| &acc * &Poly::linear(r).pow(*m)))
    }
}

/// Positive multiple with integer coefficients, for keeping Sturm chains small.
fn normalize_positive(p: &Poly) -> Poly {
    Poly::new(p.integer_primitive().into_iter().map(Rat::from_integer).collect())
}

fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![normalize_positive(p), normalize_positive(&p.derivative())];
    loop {
        let n = chain.len();
        let (_, r) = chain[n - 2].divmod(&chain[n - 1]).expect("nonzero divisor");
        if r.is_zero() {
            break;
        }
        chain.push(normalize_positive(&-r));
    }
    chain
}

fn sign_changes(chain: &[Poly], at: &Rat) -> usize {
    let signs: Vec<bool> =
        chain.iter().map(|p| p.eval_at(at)).filter(|v| !v.is_zero()).map(|v| v.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn isolate_rational_roots(sqf: &Poly) -> Vec<Rat> {
    let ints = sqf.integer_primitive();
    let lead = ints.last().unwrap().abs();
    let width_bound = Rat::new(Int::one(), &lead * &lead);
    let lc = sqf.leading().unwrap().abs();
    // Cauchy bound: every root lies strictly inside (-bound, bound)
    let bound = sqf.coeffs[..sqf.coeffs.len() - 1].iter().map(|c| c.abs() / &lc).fold(Rat::zero(), |m, c| {
        if c > m {
            c
        } else {
            m
        }
    }) + Rat::one();
    let chain = sturm_chain(sqf);
    let mut found: Vec<Rat> = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((a, b)) = stack.pop() {
        let known = found.iter().filter(|r| **r > a && **r < b).count();
        let count = (sign_changes(&chain, &a) - sign_changes(&chain, &b)).saturating_sub(known);
        if count == 0 {
            continue;
        }
        if count == 1 && known == 0 {
            if let Some(r) = refine_single_root(sqf, a, b, &width_bound) {
                found.push(r);
            }
            continue;
        }
        let mut m = (&a + &b) / Rat::from_integer(2.into());
        if sqf.eval_at(&m).is_zero() {
            if !found.contains(&m) {
                found.push(m.clone());
            }
            let step = (&b - &m) / Rat::from_integer(3.into());
            while sqf.eval_at(&m).is_zero() {
                m += &step;
            }
        }
        stack.push((a, m.clone()));
        stack.push((m, b));
    }
    found
}

/// Shrinks `(a, b)`, which holds exactly one simple root and has nonzero
/// endpoint values, until it is narrower than `width`, then tests the
/// simplest rational inside.
fn refine_single_root(p: &Poly, mut a: Rat, mut b: Rat, width: &Rat) -> Option<Rat> {
    let sa = p.eval_at(&a).is_positive();
    let two = Rat::from_integer(2.into());
    while &b - &a >= *width {
        let m = (&a + &b) / &two;
        let v = p.eval_at(&m);
        if v.is_zero() {
            return Some(m);
        }
        if v.is_positive() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    let r = simplest_between(&a, &b);
    p.eval_at(&r).is_zero().then_some(r)
}

/// The rational with the smallest denominator strictly between `lo < hi`.
pub(crate) fn simplest_between(lo: &Rat, hi: &Rat) -> Rat {
    let k = lo.floor();
    if k.clone() + Rat::one() < *hi {
        return k + Rat::one();
    }
    let frac_hi = hi - &k;
    if *lo == k {
        let y = frac_hi.recip().floor() + Rat::one();
        return k + y.recip();
    }
    let y = simplest_between(&frac_hi.recip(), &(lo - &k).recip());
    k + y.recip()
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            match (mag.is_one(), i) {
                (_, 0) => f.write_str(&fmt_rat(&mag))?,
                (true, _) => f.write_str(&mono)?,
                (false, _) => write!(f, "{}*{mono}", fmt_rat(&mag))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rat;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&p(&[1, 1]) * &p(&[-1, 1]), p(&[-1, 0, 1]));
        assert_eq!(&p(&[-1, 0, 1]) + &p(&[1]), p(&[0, 0, 1]));
        assert_eq!(p(&[0, 1, 1]).scale(&rat(1, 2)), Poly::new(vec![rat(0, 1), rat(1, 2), rat(1, 2)]));
        assert_eq!(p(&[1, 1]).pow(0), Poly::one());
        assert_eq!(p(&[1, 1]).pow(2), p(&[1, 2, 1]));
        assert_eq!((&p(&[1, 1]) - &p(&[1, 1])).degree(), None);
    }

    #[test]
    fn divmod_examples() {
        let (q, r) = p(&[-1, 0, 0, 0, 1]).divmod(&p(&[-1, 0, 1])).unwrap();
        assert_eq!((q, r), (p(&[1, 0, 1]), Poly::zero()));
        // hand long division: x^2 = (x - 1)(x + 1) + 1
        let (q, r) = p(&[0, 0, 1]).divmod(&p(&[1, 1])).unwrap();
        assert_eq!((q, r), (p(&[-1, 1]), p(&[1])));
        let (q, r) = Poly::zero().divmod(&p(&[3, 1])).unwrap();
        assert_eq!((q, r), (Poly::zero(), Poly::zero()));
        assert_eq!(p(&[1]).divmod(&Poly::zero()), Err(KernelError::DivisionByZero));
    }

    #[test]
    fn gcd_examples() {
        // Euclid by hand: x^4-1 = (x^2+1)(x^2-1) + 0
        assert_eq!(p(&[-1, 0, 0, 0, 1]).gcd(&p(&[-1, 0, 1])).unwrap(), p(&[-1, 0, 1]));
        // x^2+1 = (x-1)(x+1) + 2, so the gcd is a unit
        assert_eq!(p(&[1, 0, 1]).gcd(&p(&[1, 1])).unwrap(), Poly::one());
        let q = p(&[2, 0, 4]);
        assert_eq!(q.gcd(&q).unwrap(), q.monic());
        assert_eq!(q.gcd(&Poly::zero()).unwrap(), q.monic());
        assert_eq!(Poly::zero().gcd(&Poly::zero()), Err(KernelError::ZeroPolynomial));
    }

    #[test]
    fn eval_and_derivative() {
        assert_eq!(p(&[-1, 0, 1]).eval_at(&rat(1, 1)), rat(0, 1));
        assert_eq!(p(&[1, 0, 1]).eval_at(&rat(2, 1)), rat(5, 1));
        assert_eq!(Poly::zero().eval_at(&rat(7, 3)), rat(0, 1));
        assert_eq!(p(&[0, 1, 1]).derivative(), p(&[1, 2]));
        assert_eq!(p(&[5]).derivative(), Poly::zero());
        assert_eq!(p(&[0, 0, 0, 1]).derivative(), p(&[0, 0, 3]));
    }

    #[test]
    fn rational_root_examples() {
        assert_eq!(p(&[-1, 0, 1]).rational_roots().unwrap(), vec![(rat(-1, 1), 1), (rat(1, 1), 1)]);
        assert!(p(&[1, 0, 1]).rational_roots().unwrap().is_empty());
        // (x-1)^2 (x^2+1) = x^4 - 2x^3 + 2x^2 - 2x + 1
        assert_eq!(p(&[1, -2, 2, -2, 1]).rational_roots().unwrap(), vec![(rat(1, 1), 2)]);
        assert_eq!(Poly::zero().rational_roots(), Err(KernelError::ZeroPolynomial));
        // 6x^2 - x - 2 = (2x + 1)(3x - 2)
        assert_eq!(p(&[-2, -1, 6]).rational_roots().unwrap(), vec![(rat(-1, 2), 1), (rat(2, 3), 1)]);
        // x^2 - 2 has only irrational roots
        assert!(p(&[-2, 0, 1]).rational_roots().unwrap().is_empty());
        assert_eq!(p(&[0, 0, 0, 5]).rational_roots().unwrap(), vec![(rat(0, 1), 3)]);
    }

    #[test]
    fn close_rational_roots_are_separated() {
        // (x - 1/97)(x - 1/98)(x^2 - 3)
        let f = &(&Poly::linear(&rat(1, 97)) * &Poly::linear(&rat(1, 98))) * &p(&[-3, 0, 1]);
        assert_eq!(f.rational_roots().unwrap(), vec![(rat(1, 98), 1), (rat(1, 97), 1)]);
    }

    #[test]
    fn linear_part_examples() {
        assert_eq!(p(&[-1, 0, 1]).linear_part().unwrap(), p(&[-1, 0, 1]));
        assert_eq!(p(&[1, 0, 1]).linear_part().unwrap(), Poly::one());
        let f = &p(&[-1, 1]) * &p(&[1, 0, 1]);
        let lin = f.linear_part().unwrap();
        assert_eq!(lin, p(&[-1, 1]));
        assert!(lin.divides(&f));
    }

    #[test]
    fn simplest_rational() {
        assert_eq!(simplest_between(&rat(1, 3), &rat(2, 3)), rat(1, 2));
        assert_eq!(simplest_between(&rat(-7, 3), &rat(-2, 1)), rat(-9, 4));
        assert_eq!(simplest_between(&rat(2, 1), &rat(21, 10)), rat(23, 11));
        assert_eq!(simplest_between(&rat(-1, 2), &rat(1, 2)), rat(0, 1));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, 0, 1]).to_string(), "x^2 + 1");
        assert_eq!(
            Poly::new(vec![rat(-3, 1), rat(1, 2), rat(0, 1), rat(-1, 1)]).to_string(),
            "-x^3 + 1/2*x - 3"
        );
    }

    /// Rational-root-theorem candidates, tested one by one.
    fn candidate_roots(f: &Poly) -> Vec<Rat> {
        let ints = f.integer_primitive();
        let divisors = |n: &Int| -> Vec<i64> {
            let n: i64 = i64::try_from(n.abs()).unwrap();
            (1..=n).filter(|d| n % d == 0).collect()
        };
        let mut out = Vec::new();
        let mut g = f.clone();
        if ints[0].is_zero() {
            out.push(rat(0, 1));
            while g.coeff(0).is_zero() {
                g = g.exact_div(&Poly::x()).unwrap();
            }
        }
        let gi = g.integer_primitive();
        if gi.len() > 1 {
            for a in divisors(&gi[0]) {
                for b in divisors(gi.last().unwrap()) {
                    for s in [-1, 1] {
                        let r = rat(s * a, b);
                        if g.eval_at(&r).is_zero() && !out.contains(&r) {
                            out.push(r);
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    fn linear_factor() -> impl Strategy<Value = Poly> {
        (-6i64..=6, 1i64..=4).prop_map(|(a, b)| Poly::linear(&rat(a, b)))
    }

    fn irreducible_quadratic() -> impl Strategy<Value = Poly> {
        // x^2 + bx + c with negative discriminant
        (-3i64..=3, 1i64..=5)
            .prop_filter("negative discriminant", |(b, c)| b * b < 4 * c)
            .prop_map(|(b, c)| p(&[c, b, 1]))
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(-5i64..=5, 0..5).prop_map(|c| p(&c))
    }

    proptest! {
        #[test]
        fn divmod_round_trip(a in small_poly(), d in small_poly()) {
            prop_assume!(!d.is_zero());
            let (q, r) = a.divmod(&d).unwrap();
            prop_assert_eq!(&(&q * &d) + &r, a);
            prop_assert!(r.degree() < d.degree());
        }

        #[test]
        fn gcd_divides_and_is_greatest(
            common in prop::collection::vec(linear_factor(), 0..2),
            a in small_poly(), b in small_poly(),
        ) {
            let c = common.iter().fold(Poly::one(), |acc, f| &acc * f);
            let (pa, pb) = (&c * &a, &c * &b);
            prop_assume!(!(pa.is_zero() && pb.is_zero()));
            let g = pa.gcd(&pb).unwrap();
            prop_assert!(g.is_monic());
            prop_assert!(g.divides(&pa) && g.divides(&pb));
            prop_assert!(c.divides(&g));
            // brute force: no common divisor of degree <= 2 escapes the gcd
            for c0 in -3i64..=3 {
                for c1 in -2i64..=2 {
                    for lead in [0i64, 1] {
                        let cand = p(&[c0, c1, lead]);
                        if cand.degree().unwrap_or(0) >= 1 && cand.divides(&pa) && cand.divides(&pb) {
                            prop_assert!(cand.divides(&g));
                        }
                    }
                }
            }
        }

        #[test]
        fn roots_match_candidate_oracle(
            lin in prop::collection::vec(linear_factor(), 0..4),
            quad in prop::collection::vec(irreducible_quadratic(), 0..2),
            scale in 1i64..=7,
        ) {
            let f = lin.iter().chain(quad.iter())
                .fold(Poly::constant(rat(scale, 3)), |acc, g| &acc * g);
            let roots = f.rational_roots().unwrap();
            let distinct: Vec<Rat> = roots.iter().map(|(r, _)| r.clone()).collect();
            prop_assert_eq!(distinct, candidate_roots(&f));
            let total: u32 = roots.iter().map(|(_, m)| m).sum();
            prop_assert_eq!(total as usize, lin.len());
            let lp = f.linear_part().unwrap();
            let cofactor = f.exact_div(&lp).unwrap();
            prop_assert_eq!(&lp * &cofactor, f);
            prop_assert!(cofactor.rational_roots().unwrap().is_empty());
        }
    }
}
