//! Normal forms of rational expressions in the indeterminate x.
use quotecas::ratnorm::norm_rat_expr;
use quotecas::text::{infix, parse, Lang};

fn main() {
    let inputs =
        ["(x^4 - 1)/(x^2 - 1)", "x/x", "1/x - 1/x", "1/(x - x)", "(2*x + 2)/(4*x^2 - 4)", "1/(1 + 1/x)"];
    for src in inputs {
        let t = parse(src, Lang::RatExpr).unwrap();
        println!("{src:<24} => {}", infix(&norm_rat_expr(&t).unwrap()));
    }
}
