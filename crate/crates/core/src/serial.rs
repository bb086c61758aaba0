//! Serde helpers: every integer is written as a decimal string and read from
//! either a string or a JSON integer.

use std::fmt::{self, Display};
use std::marker::PhantomData;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

/// An arbitrary-size integer carried as a decimal string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Dec(pub BigInt);

impl From<BigInt> for Dec {
    fn from(v: BigInt) -> Self {
        Dec(v)
    }
}

impl From<i64> for Dec {
    fn from(v: i64) -> Self {
        Dec(BigInt::from(v))
    }
}

impl Display for Dec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for Dec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Dec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(DecVisitor::<BigInt>(PhantomData)).map(Dec)
    }
}

struct DecVisitor<T>(PhantomData<T>);

impl<'de, T> Visitor<'de> for DecVisitor<T>
where
    T: FromStr,
    T::Err: Display,
{
    type Value = T;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a decimal integer as a string or number")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<T, E> {
        v.trim().parse::<T>().map_err(|e| E::custom(format!("`{v}`: {e}")))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<T, E> {
        self.visit_str(&v.to_string())
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<T, E> {
        self.visit_str(&v.to_string())
    }

    fn visit_i128<E: de::Error>(self, v: i128) -> Result<T, E> {
        self.visit_str(&v.to_string())
    }

    fn visit_u128<E: de::Error>(self, v: u128) -> Result<T, E> {
        self.visit_str(&v.to_string())
    }
}

/// `#[serde(with = "dec")]` for any `Display + FromStr` integer field.
pub mod dec {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        d.deserialize_any(DecVisitor::<T>(PhantomData))
    }
}

/// `#[serde(with = "dec_opt")]` for `Option` integer fields.
pub mod dec_opt {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.collect_str(x),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<Option<T>, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            S(String),
            I(i128),
        }
        match Option::<Raw>::deserialize(d)? {
            None => Ok(None),
            Some(Raw::S(s)) => s.trim().parse().map(Some).map_err(de::Error::custom),
            Some(Raw::I(i)) => i.to_string().parse().map(Some).map_err(de::Error::custom),
        }
    }
}

/// `#[serde(with = "dec_vec")]` for `Vec` integer fields.
pub mod dec_vec {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<Vec<T>, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        struct V<T>(PhantomData<T>);
        impl<'de, T> Visitor<'de> for V<T>
        where
            T: FromStr,
            T::Err: Display,
        {
            type Value = Vec<T>;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a list of decimal integers")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Vec<T>, A::Error> {
                let mut out = Vec::new();
                while let Some(Dec(x)) = seq.next_element::<Dec>()? {
                    out.push(x.to_string().parse().map_err(de::Error::custom)?);
                }
                Ok(out)
            }
        }
        d.deserialize_seq(V(PhantomData))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, PartialEq, Serialize, Deserialize)]
    struct Sample {
        #[serde(with = "dec")]
        a: i128,
        #[serde(with = "dec_opt")]
        b: Option<u32>,
        #[serde(with = "dec_vec")]
        c: Vec<u64>,
        d: Dec,
    }

    #[test]
    fn integers_are_strings() {
        let s = Sample { a: -7, b: Some(3), c: vec![1, 2], d: Dec::from(123456789012345678i64) };
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"a":"-7","b":"3","c":["1","2"],"d":"123456789012345678"}"#);
        assert_eq!(serde_json::from_str::<Sample>(&text).unwrap(), s);
    }

    #[test]
    fn plain_numbers_are_accepted() {
        let s: Sample = serde_json::from_str(r#"{"a":5,"b":null,"c":[4,"5"],"d":9}"#).unwrap();
        assert_eq!(s, Sample { a: 5, b: None, c: vec![4, 5], d: Dec::from(9) });
    }
}
