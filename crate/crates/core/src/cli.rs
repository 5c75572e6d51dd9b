//! Command-line front end.
//!
//! [`run`] does all the work and returns the exit code with the text for
//! each stream, so the binary stays a two-line shim and the whole surface
//! is testable in-process.
//!
//! Exit codes: 0 success, 2 parse error, 3 undefined result (stdout is
//! `undefined`), 4 contract counterexample.

use clap::{Parser, Subcommand};
use num_traits::Zero;

use crate::diff::{self, Definedness};
use crate::error::KernelError;
use crate::exact_arith::{int, parse_int, parse_rat, rat_to_f64, Rat};
use crate::factor::{decomp_to_term, factor_int, to_maple_list};
use crate::harness::{run_suite, GenConfig, Suite};
use crate::ratnorm::{self, apply_rat_fun, norm_rat_expr, norm_rat_fun};
use crate::syntax::SynTerm;
use crate::text::{parse, print, Format, Lang};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_UNDEFINED: i32 = 3;
pub const EXIT_COUNTEREXAMPLE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "quotecas", version, about = "Syntax-based computer algebra with executable contracts")]
struct Cli {
    /// Output format for terms.
    #[arg(long, global = true, default_value = "infix", value_parser = parse_format)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: KernelError| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Signed prime decomposition of an integer.
    Factor {
        #[arg(allow_hyphen_values = true)]
        n: String,
        /// Print `[sign, [[p, e], ...]]` instead of a term.
        #[arg(long)]
        maple: bool,
    },
    /// Normal form of a rational expression in x.
    NormExpr {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Quasinormal form of `fun x -> E`.
    NormFun {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Symbolic derivative with respect to x.
    Diff {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Strict evaluation at x = A.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Definedness on an evenly spaced grid.
    Domain {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, allow_hyphen_values = true)]
        hi: f64,
        #[arg(long)]
        n: usize,
    },
    /// Run contract suites.
    Check {
        /// factor, norm-expr, norm-fun, diff, disquote or all.
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        cases: usize,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: KernelError| e.to_string())
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { code: EXIT_OK, stdout: line(stdout), stderr: String::new() }
    }

    fn undefined() -> Outcome {
        Outcome { code: EXIT_UNDEFINED, stdout: "undefined\n".into(), stderr: String::new() }
    }

    fn error(code: i32, msg: String) -> Outcome {
        Outcome { code, stdout: String::new(), stderr: line(msg) }
    }
}

fn line(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn input_error(e: KernelError) -> Outcome {
    Outcome::error(EXIT_PARSE, format!("error: {e}"))
}

/// Exact rational from `"3"`, `"-3/2"` or a decimal such as `"0.25"`.
pub fn parse_point(s: &str) -> Result<Rat, KernelError> {
    if let Ok(r) = parse_rat(s) {
        return Ok(r);
    }
    let bad = || KernelError::InvalidNumber(s.to_string());
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (whole, frac) = body.split_once('.').ok_or_else(bad)?;
    let digits_ok = |d: &str| d.chars().all(|c| c.is_ascii_digit());
    if whole.is_empty() && frac.is_empty() || !digits_ok(whole) || !digits_ok(frac) {
        return Err(bad());
    }
    let num = parse_int(&format!("{whole}{frac}"))?;
    let den = num_traits::pow(int(10), frac.len());
    let r = Rat::new(num, den);
    Ok(if neg { -r } else { r })
}

fn render_real(v: f64, format: Format) -> String {
    match format {
        Format::Json => serde_json::json!({"kind": "float", "value": v.to_string()}).to_string(),
        _ => v.to_string(),
    }
}

fn eval_command(expr: &str, at: &str, format: Format) -> Outcome {
    let a = match parse_point(at) {
        Ok(a) => a,
        Err(e) => return input_error(e),
    };
    let value = |v: Option<Rat>| match v {
        Some(v) => Outcome::ok(print(&SynTerm::RatLit(v), format)),
        None => Outcome::undefined(),
    };
    if expr.trim_start().starts_with("fun") {
        return match parse(expr, Lang::RatFun) {
            Ok(f) => value(apply_rat_fun(&f, &a)),
            Err(e) => input_error(e),
        };
    }
    if let Ok(t) = parse(expr, Lang::RatExpr) {
        return value(ratnorm::eval_rat_expr_at(&t, &a));
    }
    match parse(expr, Lang::DiffExpr) {
        Ok(t) => match diff::eval_real(&t, rat_to_f64(&a)).value() {
            Some(v) => Outcome::ok(render_real(v, format)),
            None => Outcome::undefined(),
        },
        Err(e) => input_error(e),
    }
}

fn domain_command(expr: &str, lo: f64, hi: f64, n: usize, format: Format) -> Outcome {
    let t = match parse(expr, Lang::DiffExpr) {
        Ok(t) => t,
        Err(e) => return input_error(e),
    };
    let report = match diff::domain_sample(&t, lo, hi, n) {
        Ok(r) => r,
        Err(e) => return input_error(e),
    };
    let text = match format {
        Format::Json => {
            let pts: Vec<_> = report
                .points
                .iter()
                .map(|(p, d)| serde_json::json!({"point": p, "defined": *d == Definedness::Defined}))
                .collect();
            serde_json::Value::Array(pts).to_string()
        }
        _ => report
            .points
            .iter()
            .map(|(p, d)| {
                let status = if *d == Definedness::Defined { "defined" } else { "undefined" };
                format!("{p}\t{status}")
            })
            .collect::<Vec<_>>()
            .join("\n"),
    };
    Outcome::ok(text)
}

fn factor_command(n: &str, maple: bool, format: Format) -> Outcome {
    let n = match parse_int(n.trim()) {
        Ok(n) => n,
        Err(e) => return input_error(e),
    };
    let pf = factor_int(&n);
    if maple {
        return match to_maple_list(&pf) {
            Ok(s) => Outcome::ok(s),
            Err(_) if n.is_zero() => Outcome::undefined(),
            Err(e) => Outcome::error(1, format!("error: {e}")),
        };
    }
    Outcome::ok(print(&decomp_to_term(&pf), format))
}

fn term_command(expr: &str, lang: Lang, f: fn(&SynTerm) -> Option<SynTerm>, format: Format) -> Outcome {
    match parse(expr, lang) {
        Ok(t) => match f(&t) {
            Some(out) => Outcome::ok(print(&out, format)),
            None => Outcome::undefined(),
        },
        Err(e) => input_error(e),
    }
}

fn check_command(suite: Suite, seed: u64, cases: usize, format: Format) -> Outcome {
    let cfg = GenConfig { seed, cases, ..GenConfig::default() };
    if let Err(e) = cfg.validate() {
        return input_error(e);
    }
    let reports = run_suite(suite, &cfg);
    let passed = reports.iter().all(|r| r.passed());
    let text = match format {
        Format::Json => serde_json::Value::Array(reports.iter().map(|r| r.to_json()).collect()).to_string(),
        _ => reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n"),
    };
    Outcome {
        code: if passed { EXIT_OK } else { EXIT_COUNTEREXAMPLE },
        stdout: line(text),
        stderr: String::new(),
    }
}

/// Runs one command line (`args[0]` is the program name).
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() { Outcome::error(EXIT_PARSE, text) } else { Outcome::ok(text) };
        }
    };
    let fmt = cli.format;
    match cli.command {
        Command::Factor { n, maple } => factor_command(&n, maple, fmt),
        Command::NormExpr { expr } => term_command(&expr, Lang::RatExpr, norm_rat_expr, fmt),
        Command::NormFun { expr } => term_command(&expr, Lang::RatFun, norm_rat_fun, fmt),
        Command::Diff { expr } => term_command(&expr, Lang::DiffExpr, diff::diff, fmt),
        Command::Eval { expr, at } => eval_command(&expr, &at, fmt),
        Command::Domain { expr, lo, hi, n } => domain_command(&expr, lo, hi, n, fmt),
        Command::Check { suite, seed, cases } => check_command(suite, seed, cases, fmt),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_line(args: &[&str]) -> Outcome {
        run(std::iter::once("quotecas").chain(args.iter().copied()))
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("3").unwrap(), Rat::from_integer(3.into()));
        assert_eq!(parse_point("-3/2").unwrap(), Rat::new((-3).into(), 2.into()));
        assert_eq!(parse_point("0.25").unwrap(), Rat::new(1.into(), 4.into()));
        assert_eq!(parse_point("-1.5").unwrap(), Rat::new((-3).into(), 2.into()));
        assert_eq!(parse_point("0.0").unwrap(), Rat::zero());
        assert_eq!(parse_point(".5").unwrap(), Rat::new(1.into(), 2.into()));
        assert!(parse_point("1.2.3").is_err());
        assert!(parse_point(".").is_err());
        assert!(parse_point("abc").is_err());
    }

    #[test]
    fn factor_twelve() {
        let o = run_line(&["factor", "12", "--maple"]);
        assert_eq!((o.code, o.stdout.as_str()), (0, "[1, [[2, 2], [3, 1]]]\n"));
        let o = run_line(&["--format", "sexpr", "factor", "12"]);
        assert_eq!(o.stdout, "(* 1 (* (^ 2 2) (^ 3 1)))\n");
        let o = run_line(&["factor", "0", "--maple"]);
        assert_eq!((o.code, o.stdout.as_str()), (3, "undefined\n"));
        let o = run_line(&["factor", "-12", "--maple"]);
        assert_eq!(o.stdout, "[-1, [[2, 2], [3, 1]]]\n");
        assert_eq!(run_line(&["factor", "twelve"]).code, 2);
    }

    #[test]
    fn evaluation_before_and_after_normalization() {
        let o = run_line(&["eval", "(x^4-1)/(x^2-1)", "--at", "1"]);
        assert_eq!((o.code, o.stdout.as_str()), (3, "undefined\n"));
        let n = run_line(&["norm-expr", "(x^4-1)/(x^2-1)"]);
        assert_eq!(n.stdout, "x^2 + 1\n");
        let o = run_line(&["eval", n.stdout.trim(), "--at", "1"]);
        assert_eq!((o.code, o.stdout.as_str()), (0, "2\n"));
    }

    #[test]
    fn parse_errors_exit_2() {
        let o = run_line(&["norm-expr", "x +"]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("1:4"), "{}", o.stderr);
        assert_eq!(run_line(&["norm-expr", "sin(x)"]).code, 2);
        assert_eq!(run_line(&["bogus"]).code, 2);
        assert_eq!(run_line(&["--format", "xml", "diff", "x"]).code, 2);
    }
}
