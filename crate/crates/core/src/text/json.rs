//! Stable JSON encoding of syntax trees.
//!
//! Every node is an object with a `kind` field. Literal values are decimal
//! strings so big integers survive any JSON reader. Keys are emitted in
//! sorted order.

use serde_json::{json, Map, Value};

use crate::error::{KernelError, Result};
use crate::exact_arith::{fmt_rat, parse_int, parse_rat};
use crate::syntax::{SemType, SynTerm};

pub fn term_to_json_value(t: &SynTerm) -> Value {
    match t {
        SynTerm::IntLit(n) => json!({"kind": "int", "value": n.to_string()}),
        SynTerm::RatLit(c) => json!({"kind": "rat", "value": fmt_rat(c)}),
        SynTerm::RealLit(c) => json!({"kind": "real", "value": fmt_rat(c)}),
        SynTerm::Var { name, ty } => json!({"kind": "var", "name": name, "type": ty.to_string()}),
        SynTerm::Const { symbol, ty } => {
            json!({"kind": "const", "symbol": symbol, "type": ty.to_string()})
        }
        SynTerm::App(f, a) => {
            json!({"kind": "app", "children": [term_to_json_value(f), term_to_json_value(a)]})
        }
        SynTerm::Lambda { var, var_ty, body } => json!({
            "kind": "lambda",
            "var": var,
            "type": var_ty.to_string(),
            "children": [term_to_json_value(body)],
        }),
        SynTerm::Quote(inner) => json!({"kind": "quote", "children": [term_to_json_value(inner)]}),
    }
}

/// Compact single-line JSON.
pub fn term_to_json(t: &SynTerm) -> String {
    term_to_json_value(t).to_string()
}

fn bad(msg: impl Into<String>) -> KernelError {
    KernelError::Json(msg.into())
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a str> {
    obj.get(key).and_then(Value::as_str).ok_or_else(|| bad(format!("missing string field {key:?}")))
}

fn children(obj: &Map<String, Value>, n: usize) -> Result<Vec<SynTerm>> {
    let arr = obj.get("children").and_then(Value::as_array).ok_or_else(|| bad("missing children"))?;
    if arr.len() != n {
        return Err(bad(format!("expected {n} children, found {}", arr.len())));
    }
    arr.iter().map(from_value).collect()
}

fn from_value(v: &Value) -> Result<SynTerm> {
    let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
    let ty = |key: &str| field(obj, key)?.parse::<SemType>();
    Ok(match field(obj, "kind")? {
        "int" => SynTerm::IntLit(parse_int(field(obj, "value")?)?),
        "rat" => SynTerm::RatLit(parse_rat(field(obj, "value")?)?),
        "real" => SynTerm::RealLit(parse_rat(field(obj, "value")?)?),
        "var" => SynTerm::var(field(obj, "name")?, ty("type")?),
        "const" => SynTerm::constant(field(obj, "symbol")?, ty("type")?),
        "app" => {
            let mut c = children(obj, 2)?;
            let a = c.pop().unwrap();
            SynTerm::app(c.pop().unwrap(), a)
        }
        "lambda" => {
            let body = children(obj, 1)?.pop().unwrap();
            SynTerm::lambda(field(obj, "var")?, ty("type")?, body)
        }
        "quote" => SynTerm::Quote(Box::new(children(obj, 1)?.pop().unwrap())),
        k => return Err(bad(format!("unknown kind {k:?}"))),
    })
}

/// Inverse of [`term_to_json`].
pub fn term_from_json(src: &str) -> Result<SynTerm> {
    let v: Value = serde_json::from_str(src).map_err(|e| bad(e.to_string()))?;
    from_value(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{int, rat};
    use crate::ratnorm::qterm;
    use crate::syntax::quote;

    #[test]
    fn integer_literal() {
        assert_eq!(term_to_json(&SynTerm::IntLit(int(12))), r#"{"kind":"int","value":"12"}"#);
    }

    #[test]
    fn nodes() {
        let t = qterm::fun(qterm::x());
        assert_eq!(
            term_to_json(&t),
            r#"{"children":[{"kind":"var","name":"x","type":"q"}],"kind":"lambda","type":"q","var":"x"}"#
        );
        let t = qterm::neg(qterm::lit(rat(-1, 2)));
        assert_eq!(
            term_to_json(&t),
            r#"{"children":[{"kind":"const","symbol":"-","type":"q -> q"},{"kind":"rat","value":"-1/2"}],"kind":"app"}"#
        );
    }

    #[test]
    fn round_trip() {
        let big = "123456789012345678901234567890".parse().unwrap();
        let terms = [
            quote(qterm::div(qterm::add(qterm::x(), qterm::int(1)), qterm::x())),
            SynTerm::IntLit(big),
            SynTerm::RealLit(rat(7, 3)),
            SynTerm::lambda("f", SemType::arrow(SemType::unary(SemType::Q), SemType::Q), SynTerm::int(1)),
            SynTerm::app(SynTerm::var("x", SemType::Q), SynTerm::var("x", SemType::Q)),
        ];
        for t in terms {
            assert_eq!(term_from_json(&term_to_json(&t)).unwrap(), t);
        }
    }

    #[test]
    fn malformed_input() {
        assert!(term_from_json("[]").is_err());
        assert!(term_from_json(r#"{"kind":"int","value":"1.5"}"#).is_err());
        assert!(term_from_json(r#"{"kind":"app","children":[]}"#).is_err());
        assert!(term_from_json(r#"{"kind":"var","name":"x","type":"z"}"#).is_err());
        assert!(term_from_json("{").is_err());
    }
}
