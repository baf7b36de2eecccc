//! JSON has no infinities; `Option<f64>` fields that may hold one go
//! through here and appear as the strings `"inf"` / `"-inf"`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr {
    Num(f64),
    Text(String),
}

pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        None => s.serialize_none(),
        Some(x) if x.is_finite() => s.serialize_f64(*x),
        Some(x) if *x > 0.0 => s.serialize_str("inf"),
        Some(x) if *x < 0.0 => s.serialize_str("-inf"),
        Some(_) => s.serialize_str("nan"),
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    match Option::<Repr>::deserialize(d)? {
        None => Ok(None),
        Some(Repr::Num(x)) => Ok(Some(x)),
        Some(Repr::Text(t)) => match t.as_str() {
            "inf" => Ok(Some(f64::INFINITY)),
            "-inf" => Ok(Some(f64::NEG_INFINITY)),
            "nan" => Ok(Some(f64::NAN)),
            other => Err(serde::de::Error::custom(format!("expected number or \"inf\", got {other:?}"))),
        },
    }
}
