//! Evaluating a quotation recovers the denotation of the quoted term.
use quotecas::harness::{Gen, GenConfig};
use quotecas::syntax::eval_as;
use quotecas::text::infix;
use quotecas::{quote, SemType};

fn main() {
    let mut g = Gen::new(&GenConfig::default(), 7);
    for _ in 0..4 {
        let (t, value) = g.int_term();
        let back = eval_as(&quote(t.clone()), &SemType::I).unwrap();
        println!("i: {} = {value}; eval(quote) = {back:?}", infix(&t));
    }
    for _ in 0..4 {
        let (t, value) = g.rat_term();
        let back = eval_as(&quote(t.clone()), &SemType::Q).unwrap();
        println!("q: {} = {value}; eval(quote) = {back:?}", infix(&t));
    }

    // a quoted rational expression has no integer value
    let (t, _) = g.rat_term();
    println!("eval_as(quote({}), i) = {:?}", infix(&t), eval_as(&quote(t), &SemType::I).unwrap());
}
