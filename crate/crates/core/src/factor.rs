//! Integer factoring as a syntax-to-syntax algorithm.
//!
//! [`factor`] maps a numeral to a signed prime decomposition term
//! `s * (p0^e0 * (p1^e1 * ...))` and is undefined on every other tree.
//! [`factor_int`] does the arithmetic; [`remult`] is its semantic inverse.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{KernelError, Result};
use crate::exact_arith::Int;
use crate::syntax::{int_is_numeral, sym, SemType, SynTerm};

/// `sign * prod(p^e)`; the empty product is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimeFactorization {
    /// One of -1, 0, 1.
    pub sign: i8,
    /// Strictly increasing primes with exponents >= 1.
    pub factors: Vec<(Int, u32)>,
}

impl PrimeFactorization {
    pub fn new(sign: i8, factors: Vec<(Int, u32)>) -> Result<PrimeFactorization> {
        let pf = PrimeFactorization { sign, factors };
        pf.validate()?;
        Ok(pf)
    }

    pub fn zero() -> PrimeFactorization {
        PrimeFactorization { sign: 0, factors: Vec::new() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(KernelError::InvalidFactorization(m.to_string()));
        if !matches!(self.sign, -1..=1) {
            return bad("sign must be -1, 0 or 1");
        }
        if self.sign == 0 && !self.factors.is_empty() {
            return bad("zero has no prime factors");
        }
        for w in self.factors.windows(2) {
            if w[0].0 >= w[1].0 {
                return bad("primes must be strictly increasing");
            }
        }
        for (p, e) in &self.factors {
            if *e == 0 {
                return bad("exponents must be positive");
            }
            if !is_prime(p) {
                return bad(&format!("{p} is not prime"));
            }
        }
        Ok(())
    }
}

const TRIAL_LIMIT: u64 = 1 << 16;
const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Miller–Rabin with the first thirteen prime bases, which is deterministic
/// below 3.3 * 10^24.
pub fn is_prime(n: &Int) -> bool {
    if *n < Int::from(2) {
        return false;
    }
    for b in MR_BASES {
        let b = Int::from(b);
        if *n == b {
            return true;
        }
        if n.is_multiple_of(&b) {
            return false;
        }
    }
    let n_minus_1: Int = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in MR_BASES {
        let mut x = Int::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Canonical signed prime factorization. Total and deterministic.
pub fn factor_int(n: &Int) -> PrimeFactorization {
    if n.is_zero() {
        return PrimeFactorization::zero();
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.abs();
    let mut primes: Vec<Int> = Vec::new();

    let mut divide_out = |m: &mut Int, p: u64| {
        let p = Int::from(p);
        while m.is_multiple_of(&p) {
            *m /= &p;
            primes.push(p.clone());
        }
    };
    divide_out(&mut m, 2);
    divide_out(&mut m, 3);
    let mut k = 5u64;
    while k <= TRIAL_LIMIT && Int::from(k * k) <= m {
        divide_out(&mut m, k);
        divide_out(&mut m, k + 2);
        k += 6;
    }
    if !m.is_one() {
        split_cofactor(m, &mut primes);
    }

    primes.sort();
    let mut factors: Vec<(Int, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    PrimeFactorization { sign, factors }
}

/// `m` has no prime factor below the trial limit.
fn split_cofactor(m: Int, out: &mut Vec<Int>) {
    if m.is_one() {
        return;
    }
    if m.to_u64().is_some_and(|v| v < TRIAL_LIMIT * TRIAL_LIMIT) || is_prime(&m) {
        out.push(m);
        return;
    }
    let d = pollard_brent(&m);
    let rest = &m / &d;
    split_cofactor(d, out);
    split_cofactor(rest, out);
}

/// Brent's variant of Pollard rho with a fixed start; returns a nontrivial
/// factor of the composite `n`.
fn pollard_brent(n: &Int) -> Int {
    let step = |y: &Int, c: &Int| (y * y + c) % n;
    for c in 1u32.. {
        let c = Int::from(c);
        let (mut y, mut r, mut q, mut g) = (Int::from(2), 1u64, Int::one(), Int::one());
        let mut x = y.clone();
        let mut ys = y.clone();
        const BATCH: u64 = 64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = step(&y, &c);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = step(&y, &c);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = step(&ys, &c);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
    }
    unreachable!("rho exhausted its parameters")
}

/// `sign * prod(p^e)`.
pub fn remult(pf: &PrimeFactorization) -> Result<Int> {
    pf.validate()?;
    let prod =
        pf.factors.iter().fold(Int::one(), |acc, (p, e)| acc * num_traits::pow(p.clone(), *e as usize));
    Ok(prod * Int::from(pf.sign))
}

/// Numerals are the literals 0, 1, 2, ... of type `i`.
pub fn is_numeral(t: &SynTerm) -> bool {
    matches!(t, SynTerm::IntLit(n) if int_is_numeral(n))
}

fn imul(a: SynTerm, b: SynTerm) -> SynTerm {
    SynTerm::binop(sym::MUL, SemType::I, a, b)
}

fn ineg(a: SynTerm) -> SynTerm {
    SynTerm::unop(sym::NEG, SemType::I, a)
}

fn ipow(a: SynTerm, b: SynTerm) -> SynTerm {
    SynTerm::binop(sym::POW, SemType::I, a, b)
}

fn is_sign_term(t: &SynTerm) -> bool {
    match t {
        SynTerm::IntLit(n) => n.is_one(),
        _ => matches!(t.as_unop(), Some((sym::NEG, SemType::I, SynTerm::IntLit(n))) if n.is_one()),
    }
}

/// Accepts `0`, `1`, `-1`, and `s * (p0^e0 * (... * pk^ek))` with `s` one
/// of `1`, `-1`, the `pi` strictly increasing prime numerals and the `ei`
/// positive numerals. These are exactly the outputs of [`decomp_to_term`].
pub fn is_prime_decomp(t: &SynTerm) -> bool {
    if let SynTerm::IntLit(n) = t {
        return n.is_zero() || n.is_one();
    }
    if is_sign_term(t) {
        return true;
    }
    let Some((sym::MUL, SemType::I, s, mut rest)) = t.as_binop() else { return false };
    if !is_sign_term(s) {
        return false;
    }
    let mut prev: Option<&Int> = None;
    loop {
        let (head, tail) = match rest.as_binop() {
            Some((sym::MUL, SemType::I, h, tl)) => (h, Some(tl)),
            _ => (rest, None),
        };
        let Some((sym::POW, SemType::I, SynTerm::IntLit(p), SynTerm::IntLit(e))) = head.as_binop() else {
            return false;
        };
        if !e.is_positive() || !is_prime(p) || prev.is_some_and(|q| q >= p) {
            return false;
        }
        prev = Some(p);
        match tail {
            Some(tl) => rest = tl,
            None => return true,
        }
    }
}

/// Right-associated product term, sign outermost, every exponent explicit.
pub fn decomp_to_term(pf: &PrimeFactorization) -> SynTerm {
    if pf.sign == 0 {
        return SynTerm::int(0);
    }
    let sign = if pf.sign < 0 { ineg(SynTerm::int(1)) } else { SynTerm::int(1) };
    let powers = pf
        .factors
        .iter()
        .rev()
        .map(|(p, e)| ipow(SynTerm::IntLit(p.clone()), SynTerm::int(*e)))
        .reduce(|tail, head| imul(head, tail));
    match powers {
        None => sign,
        Some(chain) => imul(sign, chain),
    }
}

/// Defined exactly on numerals.
pub fn factor(t: &SynTerm) -> Option<SynTerm> {
    match t {
        SynTerm::IntLit(n) if is_numeral(t) => Some(decomp_to_term(&factor_int(n))),
        _ => None,
    }
}

/// Maple `ifactors` layout: `[s, [[p0, e0], ..., [pk, ek]]]`.
pub fn to_maple_list(pf: &PrimeFactorization) -> Result<String> {
    pf.validate()?;
    if pf.sign == 0 {
        return Err(KernelError::ZeroSign);
    }
    let pairs: Vec<String> = pf.factors.iter().map(|(p, e)| format!("[{p}, {e}]")).collect();
    Ok(format!("[{}, [{}]]", pf.sign, pairs.join(", ")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::int;
    use crate::syntax::{eval_as, quote, Value};

    fn pf(sign: i8, f: &[(i64, u32)]) -> PrimeFactorization {
        PrimeFactorization::new(sign, f.iter().map(|&(p, e)| (int(p), e)).collect()).unwrap()
    }

    /// Trial division up to sqrt(|n|).
    fn oracle(n: i64) -> (i8, Vec<(i64, u32)>) {
        if n == 0 {
            return (0, vec![]);
        }
        let mut m = n.unsigned_abs();
        let mut out: Vec<(i64, u32)> = Vec::new();
        let mut d = 2u64;
        while d * d <= m {
            while m.is_multiple_of(d) {
                match out.last_mut() {
                    Some((p, e)) if *p == d as i64 => *e += 1,
                    _ => out.push((d as i64, 1)),
                }
                m /= d;
            }
            d += 1;
        }
        if m > 1 {
            out.push((m as i64, 1));
        }
        (n.signum() as i8, out)
    }

    #[test]
    fn factor_int_examples() {
        assert_eq!(factor_int(&int(12)), pf(1, &[(2, 2), (3, 1)]));
        assert_eq!(factor_int(&int(0)), PrimeFactorization::zero());
        let (s, f) = oracle(-12);
        assert_eq!(factor_int(&int(-12)), pf(s, &f));
        assert_eq!(factor_int(&int(1)), pf(1, &[]));
        assert_eq!(factor_int(&int(-1)), pf(-1, &[]));
    }

    #[test]
    fn agrees_with_trial_division() {
        for n in -3000i64..=3000 {
            let (s, f) = oracle(n);
            assert_eq!(factor_int(&int(n)), pf(s, &f), "n = {n}");
        }
    }

    #[test]
    fn large_inputs_use_rho() {
        // two primes just above the trial-division limit
        let (p, q) = (65537i64, 65539i64);
        assert_eq!(factor_int(&int(p * q)), pf(1, &[(p, 1), (q, 1)]));
        assert_eq!(factor_int(&int(p * p)), pf(1, &[(p, 2)]));
        let big = Int::from(1_000_000_007u64) * Int::from(998_244_353u64) * Int::from(12u32);
        let got = factor_int(&big);
        assert_eq!(got, pf(1, &[(2, 2), (3, 1), (998_244_353, 1), (1_000_000_007, 1)]));
        assert_eq!(remult(&got).unwrap(), big);
        // 2^61 - 1 is prime
        let m61 = (Int::one() << 61u32) - 1u32;
        assert!(is_prime(&m61));
        assert_eq!(factor_int(&m61).factors, vec![(m61, 1)]);
    }

    #[test]
    fn primality() {
        let small: Vec<i64> = (0..60).filter(|&n| is_prime(&int(n))).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        // strong pseudoprime to bases 2, 3, 5, 7
        assert!(!is_prime(&int(3_215_031_751)));
        assert!(!is_prime(&int(561)));
    }

    #[test]
    fn remult_examples() {
        assert_eq!(remult(&pf(1, &[(2, 2), (3, 1)])).unwrap(), int(12));
        assert_eq!(remult(&PrimeFactorization::zero()).unwrap(), int(0));
        assert_eq!(remult(&pf(-1, &[(5, 1)])).unwrap(), int(-5));
        let broken = PrimeFactorization { sign: 1, factors: vec![(int(4), 1)] };
        assert!(matches!(remult(&broken), Err(KernelError::InvalidFactorization(_))));
        let unordered = PrimeFactorization { sign: 1, factors: vec![(int(3), 1), (int(2), 1)] };
        assert!(remult(&unordered).is_err());
        let zero_exp = PrimeFactorization { sign: 1, factors: vec![(int(2), 0)] };
        assert!(remult(&zero_exp).is_err());
        let zero_with_factors = PrimeFactorization { sign: 0, factors: vec![(int(2), 1)] };
        assert!(remult(&zero_with_factors).is_err());
    }

    #[test]
    fn numerals() {
        assert!(is_numeral(&SynTerm::int(12)));
        assert!(is_numeral(&SynTerm::int(0)));
        // numerals are 0, 1, 2, ... only
        assert!(!is_numeral(&SynTerm::int(-3)));
        assert!(!is_numeral(&SynTerm::var("x", SemType::I)));
        assert!(!is_numeral(&SynTerm::rat(crate::exact_arith::rat(2, 1))));
    }

    #[test]
    fn decomp_terms() {
        let t12 = decomp_to_term(&pf(1, &[(2, 2), (3, 1)]));
        let expected = imul(
            SynTerm::int(1),
            imul(ipow(SynTerm::int(2), SynTerm::int(2)), ipow(SynTerm::int(3), SynTerm::int(1))),
        );
        assert_eq!(t12, expected);
        assert!(is_prime_decomp(&t12));
        assert_eq!(decomp_to_term(&PrimeFactorization::zero()), SynTerm::int(0));
        let neg2 = decomp_to_term(&pf(-1, &[(2, 1)]));
        assert_eq!(neg2, imul(ineg(SynTerm::int(1)), ipow(SynTerm::int(2), SynTerm::int(1))));
        assert!(is_prime_decomp(&neg2));
        assert!(is_prime_decomp(&SynTerm::int(0)));
        assert!(is_prime_decomp(&decomp_to_term(&pf(1, &[]))));
        assert!(is_prime_decomp(&decomp_to_term(&pf(-1, &[]))));
    }

    #[test]
    fn prime_decomp_rejects_malformed() {
        let p = |a, b| ipow(SynTerm::int(a), SynTerm::int(b));
        let wrong_order = imul(SynTerm::int(1), imul(p(3, 1), p(2, 2)));
        assert!(!is_prime_decomp(&wrong_order));
        let composite = imul(SynTerm::int(1), p(4, 1));
        assert!(!is_prime_decomp(&composite));
        let zero_exp = imul(SynTerm::int(1), p(2, 0));
        assert!(!is_prime_decomp(&zero_exp));
        let repeated = imul(SynTerm::int(1), imul(p(2, 1), p(2, 1)));
        assert!(!is_prime_decomp(&repeated));
        let left_assoc = imul(imul(SynTerm::int(1), p(2, 2)), p(3, 1));
        assert!(!is_prime_decomp(&left_assoc));
        let bad_sign = imul(SynTerm::int(2), p(3, 1));
        assert!(!is_prime_decomp(&bad_sign));
        assert!(!is_prime_decomp(&SynTerm::int(2)));
        assert!(!is_prime_decomp(&SynTerm::int(-1)));
        let q_typed = SynTerm::binop(sym::MUL, SemType::Q, SynTerm::int(1), p(2, 1));
        assert!(!is_prime_decomp(&q_typed));
    }

    #[test]
    fn factor_is_partial() {
        let t = factor(&SynTerm::int(12)).unwrap();
        assert_eq!(t, decomp_to_term(&pf(1, &[(2, 2), (3, 1)])));
        assert_eq!(factor(&SynTerm::int(0)), Some(SynTerm::int(0)));
        assert_eq!(factor(&SynTerm::var("x", SemType::I)), None);
        assert_eq!(factor(&SynTerm::int(-12)), None);
        let v = eval_as(&quote(t), &SemType::I).unwrap();
        assert_eq!(v, Some(Value::IntV(int(12))));
    }

    #[test]
    fn maple_format() {
        assert_eq!(to_maple_list(&pf(1, &[(2, 2), (3, 1)])).unwrap(), "[1, [[2, 2], [3, 1]]]");
        assert_eq!(to_maple_list(&pf(-1, &[(5, 1)])).unwrap(), "[-1, [[5, 1]]]");
        assert_eq!(to_maple_list(&pf(1, &[])).unwrap(), "[1, []]");
        assert_eq!(to_maple_list(&PrimeFactorization::zero()), Err(KernelError::ZeroSign));
    }
}
