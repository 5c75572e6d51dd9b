//! Normalizing and then evaluating is not the same as evaluating.
use quotecas::exact_arith::rat_int;
use quotecas::ratnorm::{eval_rat_expr_at, norm_rat_expr, norm_rat_fun};
use quotecas::text::{infix, parse, Lang};

fn main() {
    let e = parse("(x^4 - 1)/(x^2 - 1)", Lang::RatExpr).unwrap();
    let n = norm_rat_expr(&e).unwrap();
    let one = rat_int(1);
    println!("{} at x = 1: {:?}", infix(&e), eval_rat_expr_at(&e, &one));
    println!("{} at x = 1: {:?}", infix(&n), eval_rat_expr_at(&n, &one));

    // the function reading keeps the singularity
    let f = parse("fun x -> (x^4 - 1)/(x^2 - 1)", Lang::RatFun).unwrap();
    println!("quasinormal: {}", infix(&norm_rat_fun(&f).unwrap()));
}
