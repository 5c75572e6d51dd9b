//! Symbolic derivatives checked against central differences.
use quotecas::diff::{check_spec_diff, deriv_numeric, diff, eval_real};
use quotecas::text::{infix, parse, Lang};

fn main() {
    let inputs =
        ["sin(x^2 + x)", "ln(x^2 - 1)", "x^3 - 2*x", "exp(x) * cos(x)", "(x^2 + 1)^(1/2)", "tan(x) / x"];
    let points = [-1.7, -0.4, 0.3, 1.9];
    for src in inputs {
        let t = parse(src, Lang::DiffExpr).unwrap();
        let d = diff(&t).unwrap();
        println!("d/dx {src} = {}", infix(&d));
        for a in points {
            println!("    x = {a:>4}: symbolic {:?}, numeric {:?}", eval_real(&d, a), deriv_numeric(&t, a));
        }
        let check = check_spec_diff(&t, &points).unwrap();
        println!("    compared {} points, {} violations", check.compared, check.violations.len());
    }
}
