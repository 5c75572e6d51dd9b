//! Seeded random term generators.
//!
//! Every generator output satisfies its language predicate by construction.
//! Generation is a pure function of the seed and the stream number.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GenConfig, DIFF_SAMPLE_RANGE};
use crate::diff::{eval_real, rterm};
use crate::exact_arith::{Int, Rat};
use crate::poly::Poly;
use crate::ratnorm::qterm;
use crate::syntax::{quote, sym, SemType, SynTerm};

/// Probability that a denominator is built to have a rational root.
pub const ROOTED_DENOMINATOR_RATE: f64 = 0.3;

/// Largest magnitude any subterm of a generated differentiable expression
/// may reach on the sample range. Finite differences lose about
/// `|f| * 1e-11` to rounding, so larger intermediates would swamp the
/// numeric derivative.
pub const MAX_SUBTERM_MAGNITUDE: f64 = 1e4;

const SCALE_PROBES: usize = 41;

/// No subterm exceeds [`MAX_SUBTERM_MAGNITUDE`] at the probe points.
pub fn well_scaled(t: &SynTerm) -> bool {
    let (lo, hi) = DIFF_SAMPLE_RANGE;
    let probes: Vec<f64> =
        (0..SCALE_PROBES).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / SCALE_PROBES as f64).collect();
    let mut stack = vec![t];
    while let Some(u) = stack.pop() {
        if let SynTerm::App(f, a) = u {
            stack.push(f);
            stack.push(a);
        }
        let too_big = |p: &f64| eval_real(u, *p).value().is_some_and(|v| v.abs() > MAX_SUBTERM_MAGNITUDE);
        if probes.iter().any(too_big) {
            return false;
        }
    }
    true
}

/// A generator stream.
pub struct Gen {
    cfg: GenConfig,
    rng: ChaCha8Rng,
}

fn int_op(s: &str, a: SynTerm, b: SynTerm) -> SynTerm {
    SynTerm::binop(s, SemType::I, a, b)
}

fn f_op(s: &str, a: SynTerm, b: SynTerm) -> SynTerm {
    SynTerm::binop(s, SemType::F, a, b)
}

fn f_unop(s: &str, a: SynTerm) -> SynTerm {
    SynTerm::unop(s, SemType::F, a)
}

fn f_const(s: &str) -> SynTerm {
    SynTerm::constant(s, SemType::F)
}

type Fraction = (Poly, Poly);

fn frac_add((pa, qa): &Fraction, (pb, qb): &Fraction) -> Fraction {
    (&(pa * qb) + &(pb * qa), qa * qb)
}

fn frac_mul((pa, qa): &Fraction, (pb, qb): &Fraction) -> Fraction {
    (pa * pb, qa * qb)
}

fn prime_at_or_above(start: u64) -> Int {
    let mut n = Int::from(start | 1);
    while !crate::factor::is_prime(&n) {
        n += 2;
    }
    n
}

impl Gen {
    pub fn new(cfg: &GenConfig, stream: u64) -> Gen {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(stream);
        Gen { cfg: cfg.clone(), rng }
    }

    pub fn config(&self) -> &GenConfig {
        &self.cfg
    }

    fn leaf_probability(&self, depth: u32) -> f64 {
        if depth + 1 >= self.cfg.max_depth {
            1.0
        } else {
            (0.2 + 0.12 * depth as f64).min(1.0)
        }
    }

    fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn pick(&mut self, n: u32) -> u32 {
        self.rng.gen_range(0..n)
    }

    /// Integer in `[-bound, bound]`.
    pub fn small_int(&mut self, bound: i64) -> i64 {
        self.rng.gen_range(-bound..=bound)
    }

    /// `a/b` with `|a| <= num_bound` and `1 <= b <= den_bound`.
    pub fn rational(&mut self, num_bound: i64, den_bound: i64) -> Rat {
        let a = self.small_int(num_bound);
        let b = self.rng.gen_range(1..=den_bound.max(1));
        Rat::new(a.into(), b.into())
    }

    /// A coefficient within the configured bound, integral 70% of the time.
    fn coefficient(&mut self) -> Rat {
        let bound = self.cfg.coeff_bound;
        if self.coin(0.7) {
            Rat::from_integer(self.small_int(bound).into())
        } else {
            self.rational(bound, bound)
        }
    }

    pub fn real_point(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    // numerals

    /// A numeral: mostly small, some large, some products of two large primes.
    pub fn numeral(&mut self) -> SynTerm {
        let n: Int = match self.pick(20) {
            0..=7 => self.rng.gen_range(0u64..=10_000).into(),
            8..=13 => self.rng.gen_range(0u64..=1_000_000).into(),
            14..=17 => self.rng.gen_range(0u64..=1_000_000_000_000).into(),
            18 => Int::from(self.rng.gen_range(2u64..=1u64 << 20)).pow(3),
            _ => {
                let (a, b) =
                    (self.rng.gen_range(1u64 << 24..1u64 << 32), self.rng.gen_range(1u64 << 24..1u64 << 32));
                let (p, q) = (prime_at_or_above(a), prime_at_or_above(b));
                p * q
            }
        };
        SynTerm::IntLit(n)
    }

    /// Anything but a numeral.
    pub fn non_numeral(&mut self) -> SynTerm {
        let k = self.small_int(1_000).abs() + 1;
        match self.pick(9) {
            0 => SynTerm::int(-k),
            1 => SynTerm::RatLit(Rat::from_integer(k.into())),
            2 => SynTerm::RealLit(Rat::from_integer(k.into())),
            3 => int_op(sym::ADD, SynTerm::int(k), SynTerm::int(1)),
            4 => SynTerm::unop(sym::NEG, SemType::I, SynTerm::int(k)),
            5 => SynTerm::var("n", SemType::I),
            6 => quote(SynTerm::int(k)),
            7 => int_op(sym::POW, SynTerm::int(k), SynTerm::int(2)),
            _ => SynTerm::constant(sym::ADD, SemType::binary(SemType::I)),
        }
    }

    // rational expressions

    fn rat_leaf(&mut self) -> SynTerm {
        if self.coin(0.55) {
            qterm::x()
        } else {
            qterm::lit(self.coefficient())
        }
    }

    fn rat_node(&mut self, depth: u32) -> SynTerm {
        if self.coin(self.leaf_probability(depth)) {
            return self.rat_leaf();
        }
        let d = depth + 1;
        match self.pick(10) {
            0 | 1 => qterm::add(self.rat_node(d), self.rat_node(d)),
            2 => qterm::sub(self.rat_node(d), self.rat_node(d)),
            3 | 4 => qterm::mul(self.rat_node(d), self.rat_node(d)),
            5 | 6 => qterm::div(self.rat_node(d), self.denominator(d)),
            7 => qterm::neg(self.rat_node(d)),
            8 => qterm::inv(self.denominator(d)),
            _ => {
                let n = self.rng.gen_range(2..=3);
                qterm::pow(self.rat_node(d), n)
            }
        }
    }

    fn denominator(&mut self, depth: u32) -> SynTerm {
        if !self.coin(ROOTED_DENOMINATOR_RATE) {
            return self.rat_node(depth);
        }
        let r = self.rational(self.cfg.coeff_bound, 3);
        let linear = qterm::sub(qterm::x(), qterm::lit(r.clone()));
        match self.pick(4) {
            0 => linear,
            1 => qterm::mul(linear, self.rat_node(depth + 1)),
            2 => qterm::sub(qterm::pow(qterm::x(), 2), qterm::lit(&r * &r)),
            _ => {
                let a = Rat::from_integer(self.rng.gen_range(1..=self.cfg.coeff_bound).into());
                qterm::add(qterm::mul(qterm::lit(a.clone()), qterm::x()), qterm::lit(-(a * r)))
            }
        }
    }

    /// A rational expression in `x : q`.
    pub fn rat_expr(&mut self) -> SynTerm {
        self.rat_node(0)
    }

    /// `λx:q. E` with `E` a rational expression.
    pub fn rat_fun(&mut self) -> SynTerm {
        qterm::fun(self.rat_expr())
    }

    /// Terms that are not rational expressions, including near misses.
    pub fn non_rat_expr(&mut self) -> SynTerm {
        let e = self.rat_expr();
        match self.pick(9) {
            0 => SynTerm::var("y", SemType::Q),
            1 => rterm::x(),
            2 => SynTerm::RealLit(self.coefficient()),
            3 => SynTerm::int(self.small_int(12)),
            4 => rterm::call(sym::SIN, rterm::x()),
            5 => qterm::add(e, SynTerm::var("y", SemType::Q)),
            6 => qterm::fun(e),
            7 => quote(e),
            _ => f_op(sym::ADD, f_const(sym::INDET), f_const(sym::ONE)),
        }
    }

    /// Terms that are not rational functions, including near misses.
    pub fn non_rat_fun(&mut self) -> SynTerm {
        let e = self.rat_expr();
        match self.pick(7) {
            0 => e,
            1 => SynTerm::lambda("y", SemType::Q, SynTerm::var("y", SemType::Q)),
            2 => SynTerm::lambda("x", SemType::R, rterm::x()),
            3 => qterm::fun(qterm::add(e, SynTerm::var("z", SemType::Q))),
            4 => qterm::fun(rterm::call(sym::SIN, rterm::x())),
            5 => quote(qterm::fun(e)),
            _ => SynTerm::app(qterm::fun(e), qterm::int(1)),
        }
    }

    // differentiable expressions

    fn diff_leaf(&mut self) -> SynTerm {
        if self.coin(0.6) {
            rterm::x()
        } else {
            rterm::lit(self.coefficient())
        }
    }

    /// `u^2 + k` with `k` in 1..=3; positive everywhere `u` is defined.
    fn positive(&mut self, depth: u32) -> SynTerm {
        let k = self.rng.gen_range(1..=3);
        rterm::add(rterm::powi(self.diff_node(depth), 2), rterm::int(k))
    }

    fn diff_node(&mut self, depth: u32) -> SynTerm {
        if self.coin(self.leaf_probability(depth)) {
            return self.diff_leaf();
        }
        let d = depth + 1;
        match self.pick(14) {
            0 | 1 => rterm::add(self.diff_node(d), self.diff_node(d)),
            2 => rterm::sub(self.diff_node(d), self.diff_node(d)),
            3 | 4 => rterm::mul(self.diff_node(d), self.diff_node(d)),
            5 => rterm::div(self.diff_node(d), self.diff_node(d)),
            6 => rterm::neg(self.diff_node(d)),
            7 => {
                let n = self.rng.gen_range(2..=3);
                rterm::powi(self.diff_node(d), n)
            }
            8 => {
                let exps = [(1, 2), (3, 2), (-1, 2), (1, 3), (2, 3), (-2, 1)];
                let &(p, q) = exps.choose(&mut self.rng).unwrap();
                rterm::pow(self.positive(d), Rat::new(p.into(), q.into()))
            }
            // keep exponentials of moderate size
            9 => rterm::call(sym::EXP, self.diff_node(d.max(self.cfg.max_depth.saturating_sub(3)))),
            10 => rterm::call(sym::LN, self.diff_node(d)),
            11 => rterm::call(sym::SIN, self.diff_node(d)),
            12 => rterm::call(sym::COS, self.diff_node(d)),
            _ => rterm::call(sym::TAN, self.diff_node(d)),
        }
    }

    /// A well-scaled term of the differentiable language.
    pub fn diff_expr(&mut self) -> SynTerm {
        loop {
            let t = self.diff_node(0);
            if well_scaled(&t) {
                return t;
            }
        }
    }

    /// Terms outside the differentiable language.
    pub fn non_diff_expr(&mut self) -> SynTerm {
        match self.pick(6) {
            0 => self.rat_expr(),
            1 => SynTerm::lambda("x", SemType::R, rterm::x()),
            2 => SynTerm::binop(sym::POW, SemType::R, rterm::x(), rterm::x()),
            3 => SynTerm::var("y", SemType::R),
            4 => rterm::add(self.diff_expr(), SynTerm::int(1)),
            _ => quote(self.diff_expr()),
        }
    }

    // closed terms with independently computed values

    /// A closed `i` term and its value.
    pub fn int_term(&mut self) -> (SynTerm, Int) {
        self.int_node(0)
    }

    fn int_node(&mut self, depth: u32) -> (SynTerm, Int) {
        if self.coin(self.leaf_probability(depth)) {
            let n = self.small_int(self.cfg.coeff_bound * 10);
            return (SynTerm::int(n), n.into());
        }
        let d = depth + 1;
        match self.pick(5) {
            0 => {
                let ((a, va), (b, vb)) = (self.int_node(d), self.int_node(d));
                (int_op(sym::ADD, a, b), va + vb)
            }
            1 => {
                let ((a, va), (b, vb)) = (self.int_node(d), self.int_node(d));
                (int_op(sym::MUL, a, b), va * vb)
            }
            2 => {
                let (a, va) = self.int_node(d);
                (SynTerm::unop(sym::NEG, SemType::I, a), -va)
            }
            3 => {
                let ((a, va), (b, vb)) = (self.int_node(d), self.int_node(d));
                let nb = SynTerm::unop(sym::NEG, SemType::I, b);
                (int_op(sym::ADD, a, nb), va - vb)
            }
            _ => {
                let (a, va) = self.int_node(d);
                let e = self.rng.gen_range(0u32..=3);
                (int_op(sym::POW, a, SynTerm::int(e)), num_traits::pow(va, e as usize))
            }
        }
    }

    /// A closed, defined `q` term and its value.
    pub fn rat_term(&mut self) -> (SynTerm, Rat) {
        self.rat_value_node(0)
    }

    fn rat_value_node(&mut self, depth: u32) -> (SynTerm, Rat) {
        if self.coin(self.leaf_probability(depth)) {
            let c = self.coefficient();
            return (qterm::lit(c.clone()), c);
        }
        let d = depth + 1;
        match self.pick(5) {
            0 => {
                let ((a, va), (b, vb)) = (self.rat_value_node(d), self.rat_value_node(d));
                (qterm::add(a, b), va + vb)
            }
            1 => {
                let ((a, va), (b, vb)) = (self.rat_value_node(d), self.rat_value_node(d));
                (qterm::mul(a, b), va * vb)
            }
            2 => {
                let (a, va) = self.rat_value_node(d);
                (qterm::neg(a), -va)
            }
            3 => {
                let ((a, va), (b, vb)) = (self.rat_value_node(d), self.rat_value_node(d));
                (qterm::sub(a, b), va - vb)
            }
            _ => {
                let ((a, va), (b, vb)) = (self.rat_value_node(d), self.rat_value_node(d));
                if vb.is_zero() {
                    (qterm::mul(a, b), va * vb)
                } else {
                    (qterm::div(a, b), va / vb)
                }
            }
        }
    }

    /// A defined `f` term over `0`, `1`, `X` and its value as an unreduced
    /// fraction.
    pub fn f_term(&mut self) -> (SynTerm, Fraction) {
        self.f_node(0)
    }

    fn f_node(&mut self, depth: u32) -> (SynTerm, Fraction) {
        if self.coin(self.leaf_probability(depth)) {
            return match self.pick(4) {
                0 => (f_const(sym::ZERO), (Poly::zero(), Poly::one())),
                1 => (f_const(sym::ONE), (Poly::one(), Poly::one())),
                _ => (f_const(sym::INDET), (Poly::x(), Poly::one())),
            };
        }
        let d = depth + 1;
        match self.pick(4) {
            0 => {
                let ((a, va), (b, vb)) = (self.f_node(d), self.f_node(d));
                (f_op(sym::ADD, a, b), frac_add(&va, &vb))
            }
            1 => {
                let ((a, va), (b, vb)) = (self.f_node(d), self.f_node(d));
                (f_op(sym::MUL, a, b), frac_mul(&va, &vb))
            }
            2 => {
                let (a, (p, q)) = self.f_node(d);
                (f_unop(sym::NEG, a), (-p, q))
            }
            _ => {
                let (a, (p, q)) = self.f_node(d);
                if p.is_zero() {
                    (f_unop(sym::NEG, a), (p, q))
                } else {
                    (f_unop(sym::INV, a), (q, p))
                }
            }
        }
    }
}

/// A numeral from stream 0 of `cfg`.
pub fn gen_numeral(cfg: &GenConfig) -> SynTerm {
    Gen::new(cfg, 0).numeral()
}

/// A rational expression from stream 0 of `cfg`.
pub fn gen_rat_expr(cfg: &GenConfig) -> SynTerm {
    Gen::new(cfg, 0).rat_expr()
}

/// A rational function from stream 0 of `cfg`.
pub fn gen_rat_fun(cfg: &GenConfig) -> SynTerm {
    Gen::new(cfg, 0).rat_fun()
}

/// A differentiable expression from stream 0 of `cfg`.
pub fn gen_diff_expr(cfg: &GenConfig) -> SynTerm {
    Gen::new(cfg, 0).diff_expr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::is_diff_expr;
    use crate::factor::is_numeral;
    use crate::ratnorm::{flatten_unreduced, is_rat_expr, is_rat_fun};
    use crate::syntax::{eval_as, is_expr_of, Value};

    fn cfg(seed: u64) -> GenConfig {
        GenConfig { seed, ..GenConfig::default() }
    }

    #[test]
    fn outputs_satisfy_predicates() {
        let mut g = Gen::new(&cfg(1), 7);
        for _ in 0..300 {
            assert!(is_numeral(&g.numeral()));
            assert!(!is_numeral(&g.non_numeral()));
            assert!(is_rat_expr(&g.rat_expr()));
            assert!(!is_rat_expr(&g.non_rat_expr()));
            assert!(is_rat_fun(&g.rat_fun()));
            assert!(!is_rat_fun(&g.non_rat_fun()));
            assert!(is_diff_expr(&g.diff_expr()));
            assert!(!is_diff_expr(&g.non_diff_expr()));
            assert!(is_expr_of(&g.int_term().0, &SemType::I));
            assert!(is_expr_of(&g.rat_term().0, &SemType::Q));
            assert!(is_expr_of(&g.f_term().0, &SemType::F));
        }
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(gen_numeral(&cfg(1)), gen_numeral(&cfg(1)));
        assert_eq!(gen_rat_expr(&cfg(1)), gen_rat_expr(&cfg(1)));
        assert_eq!(gen_diff_expr(&cfg(9)), gen_diff_expr(&cfg(9)));
        let a: Vec<_> = (0..20).map(|_| Gen::new(&cfg(3), 1).rat_fun()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let mut g = Gen::new(&cfg(3), 1);
        let distinct: std::collections::HashSet<_> = (0..50).map(|_| g.rat_expr()).collect();
        assert!(distinct.len() > 25);
    }

    #[test]
    fn depth_is_bounded() {
        fn depth(t: &SynTerm) -> u32 {
            if let Some((_, _, a, b)) = t.as_binop() {
                return 1 + depth(a).max(depth(b));
            }
            if let Some((_, _, a)) = t.as_unop() {
                return 1 + depth(a);
            }
            0
        }
        let mut g = Gen::new(&cfg(5), 0);
        // powers and rooted denominators add a few levels of sugar
        assert!((0..200).all(|_| depth(&g.rat_expr()) <= 6 + 4));
    }

    #[test]
    fn closed_terms_carry_their_values() {
        let mut g = Gen::new(&cfg(11), 0);
        for _ in 0..100 {
            let (t, v) = g.int_term();
            assert_eq!(eval_as(&quote(t), &SemType::I).unwrap(), Some(Value::IntV(v)));
            let (t, v) = g.rat_term();
            assert_eq!(eval_as(&quote(t), &SemType::Q).unwrap(), Some(Value::RatV(v)));
        }
    }

    #[test]
    fn some_denominators_have_rational_roots() {
        let mut g = Gen::new(&cfg(2), 0);
        let mut with_roots = 0;
        let mut total = 0;
        for _ in 0..200 {
            let t = g.rat_expr();
            for sub in crate::ratnorm::inverted_subterms(&t) {
                total += 1;
                if let Some((p, _)) = flatten_unreduced(sub) {
                    if !p.is_zero() && !p.rational_roots().unwrap().is_empty() {
                        with_roots += 1;
                    }
                }
            }
        }
        assert!(total > 50);
        assert!(with_roots * 5 >= total, "{with_roots}/{total}");
    }

    #[test]
    fn scale_filter() {
        use crate::text::{parse, Lang};
        let ok = |s: &str| well_scaled(&parse(s, Lang::DiffExpr).unwrap());
        assert!(ok("x^3 + exp(x) - 1/x"));
        assert!(!ok("x^2 - exp(7^2)"));
        assert!(!ok("(x / x * exp(6))^3"));
        let mut g = Gen::new(&cfg(3), 4);
        assert!((0..50).all(|_| well_scaled(&g.diff_expr())));
    }

    #[test]
    fn positive_bases_are_positive() {
        let mut g = Gen::new(&cfg(4), 0);
        for _ in 0..50 {
            let t = g.positive(3);
            for a in [-2.0, -0.5, 0.0, 1.5] {
                if let Some(v) = crate::diff::eval_real(&t, a).value() {
                    assert!(v >= 1.0);
                }
            }
        }
    }
}
