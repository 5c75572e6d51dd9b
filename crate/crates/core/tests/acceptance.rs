//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test --test acceptance`.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quotecas::cli;
use quotecas::diff::{self, Definedness};
use quotecas::factor::{factor_int, remult};
use quotecas::harness::{
    branch, check_disquotation, check_spec_diff, check_spec_factor, check_spec_norm_rat_expr,
    check_spec_norm_rat_fun, trial_division, Gen, GenConfig, Report,
};
use quotecas::ratnorm::norm_rat_expr;
use quotecas::text::{infix, parse, term_from_json, term_to_json, Lang};
use quotecas::SynTerm;

const FACTOR_EXHAUSTIVE: i64 = 10_000;
const FACTOR_RANDOM_CASES: usize = 10_000;
const FACTOR_RANDOM_BOUND: i64 = 1_000_000;
const SEED: u64 = 1;
const NORM_FUN_CASES: usize = 300;
const DIFF_CASES: usize = 300;
const ROUND_TRIP_CASES: usize = 1000;
const DOMAIN_POINTS: usize = 401;

type Outcome = Result<(), String>;

/// Name, check and runtime limit in seconds.
type Criterion = (&'static str, fn() -> Outcome, Option<u64>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn factor_matches_oracle(n: i64) -> Outcome {
    let pf = factor_int(&BigInt::from(n));
    let back = remult(&pf).map_err(|e| format!("remult({n}): {e}"))?;
    ensure(back == BigInt::from(n), || format!("remult(factor_int({n})) = {back}"))?;
    let got: Vec<(u64, u32)> = pf.factors.iter().map(|(p, e)| (p.to_u64().unwrap(), *e)).collect();
    let want = if n == 0 { Vec::new() } else { trial_division(n.unsigned_abs()) };
    ensure(got == want, || format!("factor_int({n}) = {got:?}, trial division {want:?}"))?;
    let sign = n.signum() as i8;
    ensure(pf.sign == sign, || format!("factor_int({n}) has sign {}", pf.sign))
}

fn ac1() -> Outcome {
    for n in -FACTOR_EXHAUSTIVE..=FACTOR_EXHAUSTIVE {
        factor_matches_oracle(n)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..FACTOR_RANDOM_CASES {
        factor_matches_oracle(rng.gen_range(-FACTOR_RANDOM_BOUND..=FACTOR_RANDOM_BOUND))?;
    }
    let out = cli::run(["quotecas", "factor", "12", "--maple"]);
    ensure(out.code == 0 && out.stdout == "[1, [[2, 2], [3, 1]]]\n", || format!("factor 12 --maple: {out:?}"))
}

fn report_ok(r: &Report, min_hits: &[(&str, usize)]) -> Outcome {
    ensure(r.passed(), || r.to_string())?;
    for (b, n) in min_hits {
        let hits = r.branch(b).map_or(0, |s| s.hits);
        ensure(hits >= *n, || format!("branch {b:?} hit {hits} times, need {n}"))?;
    }
    Ok(())
}

fn ac2() -> Outcome {
    let r = check_spec_factor(&GenConfig::default());
    report_ok(&r, &[(branch::NUMERAL_DECOMP, 500), (branch::NUMERAL_VALUE, 500), (branch::NON_NUMERAL, 200)])
}

fn ac3() -> Outcome {
    let cases =
        [("(x^4 - 1)/(x^2 - 1)", "x^2 + 1"), ("x/x", "1"), ("1/x - 1/x", "0"), ("1/(x - x)", "1 / 0")];
    for (input, expected) in cases {
        let t = parse(input, Lang::RatExpr).map_err(|e| e.to_string())?;
        let want = parse(expected, Lang::RatExpr).map_err(|e| e.to_string())?;
        let got = norm_rat_expr(&t).ok_or_else(|| format!("norm({input}) undefined"))?;
        ensure(got == want && infix(&got) == expected, || {
            format!("norm({input}) = {}, expected {expected}", infix(&got))
        })?;
    }
    Ok(())
}

fn ac4() -> Outcome {
    let r = check_spec_norm_rat_expr(&GenConfig::default());
    report_ok(&r, &[(branch::EXPR_VALUE, 450), (branch::EXPR_CANONICAL, 500), (branch::EXPR_IDEMPOTENT, 500)])
}

fn ac5() -> Outcome {
    let r = check_spec_norm_rat_fun(&GenConfig { cases: NORM_FUN_CASES, ..GenConfig::default() });
    report_ok(&r, &[(branch::FUN_POINTWISE, NORM_FUN_CASES), (branch::FUN_KNOWN, 2)])
}

fn ac6() -> Outcome {
    let r = check_spec_diff(&GenConfig { cases: DIFF_CASES, ..GenConfig::default() });
    report_ok(&r, &[(branch::DIFF_CLOSURE, DIFF_CASES), (branch::DIFF_KNOWN, 2)])
}

fn ac7() -> Outcome {
    let f = parse("ln(x^2 - 1)", Lang::DiffExpr).map_err(|e| e.to_string())?;
    let g = diff::diff(&f).ok_or("diff undefined")?;
    let df = diff::domain_sample(&f, -2.0, 2.0, DOMAIN_POINTS).map_err(|e| e.to_string())?;
    let dg = diff::domain_sample(&g, -2.0, 2.0, DOMAIN_POINTS).map_err(|e| e.to_string())?;
    let mut extra = 0;
    for ((p, a), (_, b)) in df.points.iter().zip(&dg.points) {
        let (a, b) = (*a == Definedness::Defined, *b == Definedness::Defined);
        ensure(!a || b, || format!("f defined but f' undefined at {p}"))?;
        if p.abs() < 1.0 {
            ensure(!a && b, || format!("at {p}: f defined {a}, f' defined {b}"))?;
        } else if p.abs() > 1.0 {
            ensure(a && b, || format!("at {p}: f defined {a}, f' defined {b}"))?;
        } else {
            ensure(!a && !b, || format!("at {p}: f defined {a}, f' defined {b}"))?;
        }
        extra += usize::from(b && !a);
    }
    ensure(extra > 0, || "domains coincide".into())
}

fn ac8() -> Outcome {
    let r = check_disquotation(&GenConfig::default());
    report_ok(
        &r,
        &[
            (branch::QUOTE_I, 500),
            (branch::QUOTE_Q, 500),
            (branch::QUOTE_F, 500),
            (branch::QUOTE_QQ, 500),
            (branch::QUOTE_MISMATCH, 100),
        ],
    )
}

fn round_trip(t: &SynTerm, lang: Lang) -> Outcome {
    let text = infix(t);
    let back = parse(&text, lang).map_err(|e| format!("{text}: {e}"))?;
    ensure(&back == t, || format!("{text} reparsed as {}", infix(&back)))?;
    let json = term_to_json(t);
    let back = term_from_json(&json).map_err(|e| format!("{json}: {e}"))?;
    ensure(&back == t, || format!("json round trip changed {text}"))
}

fn ac9() -> Outcome {
    let mut g = Gen::new(&GenConfig::default(), 9);
    let per_kind = ROUND_TRIP_CASES / 5;
    for _ in 0..per_kind {
        round_trip(&g.numeral(), Lang::Int)?;
        round_trip(&g.int_term().0, Lang::Int)?;
        round_trip(&g.rat_expr(), Lang::RatExpr)?;
        round_trip(&g.rat_fun(), Lang::RatFun)?;
        round_trip(&g.diff_expr(), Lang::DiffExpr)?;
    }
    let before = cli::run(["quotecas", "eval", "(x^4 - 1)/(x^2 - 1)", "--at", "1"]);
    ensure(before.code == 3 && before.stdout == "undefined\n", || format!("before: {before:?}"))?;
    let norm = cli::run(["quotecas", "norm-expr", "(x^4 - 1)/(x^2 - 1)"]);
    let after = cli::run(["quotecas", "eval", norm.stdout.trim(), "--at", "1"]);
    ensure(after.code == 0 && after.stdout == "2\n", || format!("after: {after:?}"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("AC1 factoring identity", ac1, Some(10)),
        ("AC2 factor contract", ac2, Some(5)),
        ("AC3 normal-form cases", ac3, None),
        ("AC4 rational-expression contract", ac4, Some(60)),
        ("AC5 rational-function contract", ac5, Some(60)),
        ("AC6 derivative contract", ac6, Some(60)),
        ("AC7 domain discrepancy", ac7, None),
        ("AC8 disquotation", ac8, None),
        ("AC9 round trip and eval demo", ac9, None),
    ];
    let mut failed = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let mut result = check();
        let elapsed = start.elapsed();
        if let Some(secs) = limit {
            if result.is_ok() && elapsed > Duration::from_secs(secs) {
                result = Err(format!("took {elapsed:.2?}, limit {secs} s"));
            }
        }
        match result {
            Ok(()) => println!("PASS {name} ({elapsed:.2?})"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {name} ({elapsed:.2?})\n  {}", msg.replace('\n', "\n  "));
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
