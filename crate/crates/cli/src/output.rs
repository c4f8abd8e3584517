//! JSON rendering helpers shared by the subcommands. Every JSON document
//! carries the seed it was produced with.

use serde_json::{json, Map, Value};
use symquad_core::{Coeff, MultiPoly, Rational, ReducedODE, Scalar};

pub fn scalar_value(s: &Scalar) -> Value {
    serde_json::to_value(s).expect("scalar serializes")
}

pub fn rational_value(r: &Rational) -> Value {
    Value::String(r.to_string())
}

/// A polynomial as {"terms": [{"exponents": [...], "coeff": scalar}],
/// "display": "..."}.
pub fn poly_value<C: Coeff>(p: &MultiPoly<C>) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| {
            json!({
                "exponents": m.0,
                "coeff": scalar_value(&c.to_scalar()),
            })
        })
        .collect();
    json!({ "terms": terms, "display": p.to_string() })
}

pub fn ode_value<C: Coeff>(ode: &ReducedODE<C>) -> Value {
    serde_json::to_value(ode).expect("ode serializes")
}

/// Wrap a document with the reproducibility seed.
pub fn with_seed(seed: u64, mut body: Map<String, Value>) -> Value {
    body.insert("seed".into(), json!(seed));
    Value::Object(body)
}
