//! Prime decompositions as terms and as Maple-style lists.
use quotecas::factor::{decomp_to_term, factor, factor_int, remult, to_maple_list};
use quotecas::text::infix;
use quotecas::SynTerm;

fn main() {
    for n in [12i64, -360, 1, 97, 600851475143] {
        let pf = factor_int(&n.into());
        println!("{n:>14}  {}  {}", to_maple_list(&pf).unwrap(), infix(&decomp_to_term(&pf)));
        assert_eq!(remult(&pf).unwrap(), n.into());
    }

    // factor is only defined on numerals
    let sum = SynTerm::binop("+", quotecas::SemType::I, SynTerm::int(3), SynTerm::int(4));
    println!("factor(3 + 4) = {:?}", factor(&sum).map(|t| infix(&t)));
    println!("factor(7)     = {:?}", factor(&SynTerm::int(7)).map(|t| infix(&t)));
}
