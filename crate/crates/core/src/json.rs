//! JSON encodings of exact values.

use serde_json::{json, Value};

use crate::means::MeanValue;
use crate::rational::{self, Rational};

/// `{"num": "...", "den": "..."}` with decimal-string integers.
pub fn rational(x: &Rational) -> Value {
    json!({"num": x.numer().to_string(), "den": x.denom().to_string()})
}

pub fn mean_value(v: &MeanValue) -> Value {
    match v {
        MeanValue::Exact(x) => json!({
            "kind": "exact",
            "exact": rational(x),
            "decimal": rational::to_decimal(x, 12),
        }),
        MeanValue::Preimage { func, image } => json!({
            "kind": "preimage",
            "func": func.to_string(),
            "image": rational(image),
            "decimal": rational::to_decimal(&v.enclosure().mid(), 12),
        }),
        MeanValue::Approx(e) => json!({
            "kind": "approx",
            "lo": rational::to_decimal(&e.lo, 15),
            "hi": rational::to_decimal(&e.hi, 15),
            "decimal": rational::to_decimal(&e.mid(), 12),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encodes_rationals_as_strings() {
        assert_eq!(
            rational(&rational::rat(-6, 4)),
            json!({"num": "-3", "den": "2"})
        );
        let v = mean_value(&MeanValue::Exact(rational::int(2)));
        assert_eq!(v["decimal"], "2");
    }
}
