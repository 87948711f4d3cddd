//! Canonical JSON conventions: integers travel as decimal strings, keys keep
//! declaration order, and nothing is floating point.

use serde::Serialize;

/// Serializes `value` as pretty-printed canonical JSON followed by a newline.
pub fn to_canonical<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("canonical JSON serialization");
    out.push('\n');
    out
}

/// Decimal-string codec for `i64` fields.
pub mod dec {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &i64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<i64, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(de::Error::custom)
    }

    pub fn parse(text: &str) -> Result<i64, String> {
        text.parse::<i64>()
            .map_err(|e| format!("invalid decimal integer {text:?}: {e}"))
    }

    pub mod option {
        use serde::{Serialize, Serializer};

        pub fn serialize<S: Serializer>(value: &Option<i64>, s: S) -> Result<S::Ok, S::Error> {
            value.map(|v| v.to_string()).serialize(s)
        }
    }

    /// Exact rationals as `"p/q"`, or `"p"` when the denominator is 1.
    pub mod ratio {
        use num_rational::Ratio;
        use serde::Serializer;

        pub fn serialize<S: Serializer>(value: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
            s.collect_str(value)
        }
    }
}
