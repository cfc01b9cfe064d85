//! Serde helpers that encode complex numbers as two-element `[re, im]` arrays.

use num_complex::Complex64 as C64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

fn check(pair: [f64; 2]) -> Option<C64> {
    (pair[0].is_finite() && pair[1].is_finite()).then(|| C64::new(pair[0], pair[1]))
}

/// `#[serde(with = "cjson::scalar")]` for a single complex value.
pub mod scalar {
    use super::*;

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let pair = <[f64; 2]>::deserialize(d)?;
        check(pair).ok_or_else(|| D::Error::custom("non-finite complex entry"))
    }
}

/// `#[serde(with = "cjson::vec")]` for a list of complex values.
pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        pairs
            .into_iter()
            .map(|p| check(p).ok_or_else(|| D::Error::custom("non-finite complex entry")))
            .collect()
    }
}

/// `#[serde(with = "cjson::nested")]` for a list of complex lists.
pub mod nested {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<C64>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = v
            .iter()
            .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<C64>>, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        rows.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|p| check(p).ok_or_else(|| D::Error::custom("non-finite complex entry")))
                    .collect()
            })
            .collect()
    }
}
