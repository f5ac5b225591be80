//! JSON building blocks shared by all reports.
//!
//! Exact values serialize as `{"num": <int>, "den": <int>}` with arbitrary
//! size integers; floats carry 17 significant digits.

use std::fmt;

use num_rational::BigRational;
use serde::{Serialize, Serializer};

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, PartialEq, Eq)]
pub struct Exact(pub BigRational);

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<BigRational> for Exact {
    fn from(r: BigRational) -> Self {
        Exact(r)
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("num", &big_number(&self.0.numer().to_string()))?;
        m.serialize_entry("den", &big_number(&self.0.denom().to_string()))?;
        m.end()
    }
}

fn big_number(digits: &str) -> serde_json::Number {
    digits.parse().expect("integer literal")
}

#[derive(Clone, Copy, PartialEq)]
pub struct Float(pub f64);

impl fmt::Debug for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Float {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let n: serde_json::Number = format!("{:.16e}", self.0).parse().expect("float literal");
            n.serialize(s)
        } else {
            s.serialize_none()
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> crate::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        let r = Exact(BigRational::new(21.into(), 64.into()));
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"num":21,"den":64}"#);
        assert_eq!(
            serde_json::to_string(&Float(0.328125)).unwrap(),
            "3.2812500000000000e-1"
        );
    }
}
