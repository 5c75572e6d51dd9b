//! Quasinormal forms keep every rational singularity of a function.
use quotecas::exact_arith::rat_int;
use quotecas::ratnorm::{apply_rat_fun, norm_rat_fun};
use quotecas::text::{infix, parse, Lang};

fn main() {
    let inputs = [
        "fun x -> x/x",
        "fun x -> (x^2 + 1)/(x^2 + 1)",
        "fun x -> (x^2 - 1)/(x - 1)",
        "fun x -> (x^3 + x)/(x^2 + 1)",
        "fun x -> 1/(1/x)",
    ];
    for src in inputs {
        let f = parse(src, Lang::RatFun).unwrap();
        let g = norm_rat_fun(&f).unwrap();
        let at = |h, a: i64| apply_rat_fun(h, &rat_int(a)).map_or("undefined".to_string(), |v| v.to_string());
        println!("{src:<30} => {:<28} f(0) = {}, f(1) = {}", infix(&g), at(&g, 0), at(&g, 1));
    }
}
