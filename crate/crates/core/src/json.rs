//! JSON encodings shared by the library and the command line.
//!
//! * HN data: `[[r1,d1],[r2,d2],...]`, blocks in decreasing-slope order.
//! * Rational: the string `"p/q"` (or `"n"`), or a JSON integer on input.
//! * Class level: an integer, or `null` for the zero class.
//! * Extension result: `{"exact": [[r,d],...]}` or
//!   `{"indeterminate": {"strict_upper": "p/q", "lower": "p/q" | null}}`.
//!
//! Integers are arbitrary precision in both directions.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Number, Value};
use thiserror::Error;

use crate::extension::{ClassLevel, ExtensionResult};
use crate::hn::{validate_hn, HnData, HnError};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Syntax(String),
    #[error("unexpected JSON shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Hn(#[from] HnError),
}

fn shape(msg: impl Into<String>) -> JsonError {
    JsonError::Shape(msg.into())
}

pub fn parse(text: &str) -> Result<Value, JsonError> {
    serde_json::from_str(text).map_err(|e| JsonError::Syntax(e.to_string()))
}

pub fn bigint_to_json(n: &BigInt) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("decimal integer is a JSON number"))
}

pub fn bigint_from_json(value: &Value) -> Result<BigInt, JsonError> {
    match value {
        Value::Number(n) => n
            .to_string()
            .parse()
            .map_err(|_| shape(format!("expected an integer, got {n}"))),
        other => Err(shape(format!("expected an integer, got {other}"))),
    }
}

pub fn rational_to_json(q: &Rational) -> Value {
    Value::String(q.to_string())
}

pub fn rational_from_json(value: &Value) -> Result<Rational, JsonError> {
    match value {
        Value::String(s) => s.parse().map_err(|e| shape(format!("{e}"))),
        Value::Number(_) => bigint_from_json(value).map(Rational::integer),
        other => Err(shape(format!(
            "expected a rational string or integer, got {other}"
        ))),
    }
}

pub fn rationals_from_json(value: &Value) -> Result<Vec<Rational>, JsonError> {
    value
        .as_array()
        .ok_or_else(|| shape("expected an array of rationals"))?
        .iter()
        .map(rational_from_json)
        .collect()
}

pub fn hn_to_json(hn: &HnData) -> Value {
    Value::Array(
        hn.blocks()
            .iter()
            .map(|b| json!([bigint_to_json(b.rank()), bigint_to_json(b.degree())]))
            .collect(),
    )
}

/// Decodes and validates HN data.
pub fn hn_from_json(value: &Value) -> Result<HnData, JsonError> {
    let blocks = value
        .as_array()
        .ok_or_else(|| shape("HN data must be an array of [rank, degree] pairs"))?;
    let pairs = blocks
        .iter()
        .map(|block| match block.as_array().map(Vec::as_slice) {
            Some([r, d]) => Ok((bigint_from_json(r)?, bigint_from_json(d)?)),
            _ => Err(shape(format!(
                "expected a [rank, degree] pair, got {block}"
            ))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(validate_hn(pairs)?)
}

pub fn class_level_to_json(level: ClassLevel) -> Value {
    match level.level() {
        Some(n) => json!(n),
        None => Value::Null,
    }
}

/// Accepts an integer `n ≥ 1` or `null`. Range against a particular
/// filtration is checked by the extension operations.
pub fn class_level_from_json(value: &Value) -> Result<ClassLevel, JsonError> {
    match value {
        Value::Null => Ok(ClassLevel::ZERO_CLASS),
        Value::Number(n) => n
            .as_u64()
            .and_then(|n| usize::try_from(n).ok())
            .and_then(|n| ClassLevel::at(n).ok())
            .ok_or_else(|| shape(format!("class level must be a positive integer, got {n}"))),
        other => Err(shape(format!(
            "class level must be an integer or null, got {other}"
        ))),
    }
}

pub fn extension_result_to_json(result: &ExtensionResult) -> Value {
    match result {
        ExtensionResult::Exact(hn) => json!({ "exact": hn_to_json(hn) }),
        ExtensionResult::Indeterminate {
            strict_upper,
            lower,
        } => json!({
            "indeterminate": {
                "strict_upper": rational_to_json(strict_upper),
                "lower": lower.as_ref().map_or(Value::Null, rational_to_json),
            }
        }),
    }
}

pub fn extension_result_from_json(value: &Value) -> Result<ExtensionResult, JsonError> {
    let obj = value
        .as_object()
        .filter(|o| o.len() == 1)
        .ok_or_else(|| shape("extension result must be an object with one key"))?;
    if let Some(hn) = obj.get("exact") {
        return Ok(ExtensionResult::Exact(hn_from_json(hn)?));
    }
    let inner = obj
        .get("indeterminate")
        .and_then(Value::as_object)
        .ok_or_else(|| shape("expected \"exact\" or \"indeterminate\""))?;
    let strict_upper = rational_from_json(
        inner
            .get("strict_upper")
            .ok_or_else(|| shape("missing strict_upper"))?,
    )?;
    let lower = match inner.get("lower") {
        None | Some(Value::Null) => None,
        Some(v) => Some(rational_from_json(v)?),
    };
    Ok(ExtensionResult::Indeterminate {
        strict_upper,
        lower,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::extension_hn;
    use crate::strategies::arb_hn;
    use proptest::prelude::*;

    #[test]
    fn hn_encoding_is_compact() {
        let hn = validate_hn([(1, 2), (3, -3)]).unwrap();
        assert_eq!(hn_to_json(&hn).to_string(), "[[1,2],[3,-3]]");
        assert_eq!(hn_from_json(&parse("[[1,2],[3,-3]]").unwrap()).unwrap(), hn);
    }

    #[test]
    fn hn_decoding_errors() {
        assert!(matches!(
            hn_from_json(&parse("[[1,0],[2,0]]").unwrap()),
            Err(JsonError::Hn(_))
        ));
        assert!(matches!(
            hn_from_json(&parse("[[1,0,3]]").unwrap()),
            Err(JsonError::Shape(_))
        ));
        assert!(matches!(
            hn_from_json(&parse("[[1.5,0]]").unwrap()),
            Err(JsonError::Shape(_))
        ));
        assert!(matches!(
            hn_from_json(&parse("{}").unwrap()),
            Err(JsonError::Shape(_))
        ));
        assert!(matches!(
            hn_from_json(&parse("[]").unwrap()),
            Err(JsonError::Hn(HnError::Empty))
        ));
        assert!(matches!(parse("[[1,0]"), Err(JsonError::Syntax(_))));
    }

    #[test]
    fn big_integers_survive() {
        let text = "[[1,123456789012345678901234567890]]";
        let hn = hn_from_json(&parse(text).unwrap()).unwrap();
        assert_eq!(hn_to_json(&hn).to_string(), text);
        assert_eq!(
            rational_to_json(&hn.mu_hk()),
            Value::String("15241578753238836750495351562536198787501905199875019052100".into())
        );
    }

    #[test]
    fn rational_encoding() {
        assert_eq!(rational_to_json(&Rational::new(9, 2)), json!("9/2"));
        assert_eq!(
            rational_from_json(&json!("9/2")).unwrap(),
            Rational::new(9, 2)
        );
        assert_eq!(
            rational_from_json(&parse("7").unwrap()).unwrap(),
            Rational::integer(7)
        );
        assert!(rational_from_json(&parse("0.5").unwrap()).is_err());
        assert!(rational_from_json(&json!(true)).is_err());
    }

    #[test]
    fn class_level_encoding() {
        assert_eq!(
            class_level_from_json(&Value::Null).unwrap(),
            ClassLevel::ZERO_CLASS
        );
        assert_eq!(
            class_level_from_json(&parse("2").unwrap()).unwrap().level(),
            Some(2)
        );
        assert!(class_level_from_json(&parse("0").unwrap()).is_err());
        assert!(class_level_from_json(&parse("-1").unwrap()).is_err());
        assert_eq!(
            class_level_to_json(ClassLevel::at(3).unwrap()).to_string(),
            "3"
        );
        assert_eq!(class_level_to_json(ClassLevel::ZERO_CLASS), Value::Null);
    }

    #[test]
    fn extension_result_encoding() {
        let s = validate_hn([(1, -3)]).unwrap();
        let r = extension_hn(&s, ClassLevel::at(1).unwrap()).unwrap();
        assert_eq!(
            extension_result_to_json(&r).to_string(),
            r#"{"indeterminate":{"strict_upper":"9","lower":"9/2"}}"#
        );
        let s = validate_hn([(1, 2), (1, -3)]).unwrap();
        let r = extension_hn(&s, ClassLevel::at(2).unwrap()).unwrap();
        assert_eq!(
            extension_result_to_json(&r).to_string(),
            r#"{"indeterminate":{"strict_upper":"13","lower":null}}"#
        );
        let r = extension_hn(&s, ClassLevel::at(1).unwrap()).unwrap();
        assert_eq!(
            extension_result_to_json(&r).to_string(),
            r#"{"exact":[[1,2],[1,0],[1,-3]]}"#
        );
        assert!(extension_result_from_json(&json!({"exact": [], "x": 1})).is_err());
    }

    proptest! {
        #[test]
        fn hn_and_extension_round_trip(s in arb_hn(), n in 0usize..6) {
            prop_assert_eq!(hn_from_json(&hn_to_json(&s)).unwrap(), s.clone());
            let level = if n == 0 { ClassLevel::ZERO_CLASS } else { ClassLevel::at(n).unwrap() };
            if let Ok(r) = extension_hn(&s, level) {
                let text = extension_result_to_json(&r).to_string();
                prop_assert_eq!(extension_result_from_json(&parse(&text).unwrap()).unwrap(), r);
            }
        }
    }
}
