//! One term in each output format, and parsing back.
use quotecas::ratnorm::norm_rat_fun;
use quotecas::text::{parse, print, term_from_json, Format, Lang};

fn main() {
    let f = parse("fun x -> (x^2 - 1)/(x - 1) + 1/2", Lang::RatFun).unwrap();
    let g = norm_rat_fun(&f).unwrap();
    for format in [Format::Infix, Format::Sexpr, Format::Json] {
        println!("{format}:\n{}\n", print(&g, format));
    }
    assert_eq!(parse(&print(&g, Format::Infix), Lang::RatFun).unwrap(), g);
    assert_eq!(term_from_json(&print(&g, Format::Json)).unwrap(), g);
}
