//! Arbitrary-precision integers and exact rationals.
//!
//! Backed by `num-bigint` / `num-rational`; both keep the canonical forms this
//! crate relies on (no negative zero, positive reduced denominators). The
//! helpers here add the checked variants the rest of the kernel wants, where
//! division by zero is an error instead of a panic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{KernelError, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(n: impl Into<Int>) -> Rat {
    Rat::from_integer(n.into())
}

/// Euclidean division: `a = q*d + r` with `0 <= r < |d|`.
pub fn int_divmod(a: &Int, d: &Int) -> Result<(Int, Int)> {
    if d.is_zero() {
        return Err(KernelError::DivisionByZero);
    }
    let (mut q, mut r) = a.div_rem(d);
    if r.is_negative() {
        if d.is_positive() {
            q -= 1;
            r += d;
        } else {
            q += 1;
            r -= d;
        }
    }
    Ok((q, r))
}

pub fn int_gcd(a: &Int, b: &Int) -> Int {
    a.gcd(b)
}

pub fn int_pow(base: &Int, exp: &Int) -> Result<Int> {
    if exp.is_negative() {
        return Err(KernelError::NegativeExponent(exp.to_string()));
    }
    let e = u32::try_from(exp).map_err(|_| KernelError::NegativeExponent(exp.to_string()))?;
    Ok(num_traits::pow(base.clone(), e as usize))
}

pub fn rat_inv(a: &Rat) -> Result<Rat> {
    if a.is_zero() {
        Err(KernelError::DivisionByZero)
    } else {
        Ok(a.recip())
    }
}

pub fn rat_pow_int(base: &Rat, exp: i64) -> Result<Rat> {
    if exp >= 0 {
        Ok(num_traits::pow(base.clone(), exp as usize))
    } else {
        let inv = rat_inv(base)?;
        Ok(num_traits::pow(inv, exp.unsigned_abs() as usize))
    }
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Parses `"-12"` or `"3/2"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || KernelError::InvalidNumber(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Int = n.trim().parse().map_err(|_| bad())?;
            let d: Int = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(KernelError::DivisionByZero);
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn parse_int(s: &str) -> Result<Int> {
    s.trim().parse().map_err(|_| KernelError::InvalidNumber(s.to_string()))
}

/// `"3/2"`, or `"5"` when the denominator is one.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn integer_examples() {
        assert_eq!(int_gcd(&int(12), &int(18)), int(6));
        assert_eq!(int_divmod(&int(7), &int(3)).unwrap(), (int(2), int(1)));
        assert_eq!(int_divmod(&int(-7), &int(3)).unwrap(), (int(-3), int(2)));
        assert_eq!(int_divmod(&int(-7), &int(-3)).unwrap(), (int(3), int(2)));
        assert_eq!(int_pow(&int(2), &int(10)).unwrap(), int(1024));
        assert_eq!(int_divmod(&int(1), &int(0)), Err(KernelError::DivisionByZero));
        assert!(int_pow(&int(2), &int(-1)).is_err());
        assert!(!int_gcd(&int(-4), &int(6)).is_negative());
    }

    #[test]
    fn rational_examples() {
        assert_eq!(rat(1, 2) + rat(1, 3), rat(5, 6));
        assert_eq!(rat_inv(&rat(2, 3)).unwrap(), rat(3, 2));
        assert_eq!(rat_pow_int(&rat(2, 1), -2).unwrap(), rat(1, 4));
        assert_eq!(rat_inv(&rat(0, 1)), Err(KernelError::DivisionByZero));
        assert_eq!(rat(0, -5), rat(0, 1));
        assert!(rat(3, -6).denom().is_positive());
    }

    #[test]
    fn text_round_trip() {
        assert_eq!(parse_rat("-12").unwrap(), rat(-12, 1));
        assert_eq!(parse_rat("3/2").unwrap(), rat(3, 2));
        assert_eq!(parse_rat("6/-4").unwrap(), rat(-3, 2));
        assert_eq!(fmt_rat(&rat(-3, 2)), "-3/2");
        assert_eq!(fmt_rat(&rat(4, 2)), "2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
    }

    fn small_rat() -> impl Strategy<Value = Rat> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn field_axioms(a in small_rat(), b in small_rat(), c in small_rat()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            if !a.is_zero() {
                prop_assert_eq!(&a * rat_inv(&a).unwrap(), Rat::one());
            }
        }

        #[test]
        fn canonical_form_is_stable(n in -1000i64..1000, d in 1i64..1000) {
            let r = rat(n, d);
            let again = Rat::new(r.numer().clone(), r.denom().clone());
            prop_assert_eq!(&again, &r);
            prop_assert!(r.denom().is_positive());
            prop_assert!(int_gcd(r.numer(), r.denom()).is_one());
            prop_assert_eq!(parse_rat(&fmt_rat(&r)).unwrap(), r);
        }
    }
}
