//! Differentiation can enlarge the domain: ln(x^2 - 1) is undefined on
//! [-1, 1] while its derivative is defined there except at +-1.
use quotecas::diff::{diff, domain_sample, Definedness};
use quotecas::text::{infix, parse, Lang};

fn main() {
    let f = parse("ln(x^2 - 1)", Lang::DiffExpr).unwrap();
    let g = diff(&f).unwrap();
    println!("f  = {}\nf' = {}\n", infix(&f), infix(&g));

    let df = domain_sample(&f, -2.0, 2.0, 17).unwrap();
    let dg = domain_sample(&g, -2.0, 2.0, 17).unwrap();
    let mark = |d: &Definedness| if *d == Definedness::Defined { "defined" } else { "-" };
    println!("{:>6}  {:>8}  {:>8}", "x", "f", "f'");
    for ((x, a), (_, b)) in df.points.iter().zip(&dg.points) {
        println!("{x:>6}  {:>8}  {:>8}", mark(a), mark(b));
    }
    let extra: Vec<f64> = dg.defined_points().filter(|p| !df.defined_points().any(|q| q == *p)).collect();
    println!("\nf' defined but f not: {extra:?}");
}
