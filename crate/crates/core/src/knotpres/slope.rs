use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::KnotError;

/// A slope `m/n` on the boundary torus, stored primitive with `n >= 0`.
/// `1/0` is the meridian slope, written `inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Slope {
    m: i64,
    n: i64,
}

impl Slope {
    pub const INFINITY: Slope = Slope { m: 1, n: 0 };

    /// `(m, n)` and `(-m, -n)` name the same slope; a common factor is an error.
    pub fn new(m: i64, n: i64) -> Result<Self, KnotError> {
        let (m, n) = if n < 0 {
            (m.checked_neg().ok_or(KnotError::Overflow)?, n.checked_neg().ok_or(KnotError::Overflow)?)
        } else {
            (m, n)
        };
        if m == 0 && n == 0 {
            return Err(KnotError::ZeroSlope);
        }
        if m.gcd(&n) != 1 {
            return Err(KnotError::NonPrimitiveSlope { m, n });
        }
        Ok(if n == 0 { Self::INFINITY } else { Slope { m, n } })
    }

    pub fn integer(m: i64) -> Self {
        Slope { m, n: 1 }
    }

    pub fn m(self) -> i64 {
        self.m
    }

    pub fn n(self) -> i64 {
        self.n
    }

    pub fn is_infinity(self) -> bool {
        self.n == 0
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            f.write_str("inf")
        } else {
            write!(f, "{}/{}", self.m, self.n)
        }
    }
}

/// Accepts `m/n`, a bare integer, or `inf`.
impl FromStr for Slope {
    type Err = KnotError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Ok(Self::INFINITY);
        }
        let bad = || KnotError::Parse(format!("bad slope {s:?}"));
        let (m, n) = match t.split_once('/') {
            Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None => (t.parse().map_err(|_| bad())?, 1),
        };
        Slope::new(m, n)
    }
}

impl From<Slope> for String {
    fn from(s: Slope) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for Slope {
    type Error = KnotError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!("9/1".parse::<Slope>().unwrap(), Slope::integer(9));
        assert_eq!("9".parse::<Slope>().unwrap(), Slope::integer(9));
        assert_eq!("inf".parse::<Slope>().unwrap(), Slope::INFINITY);
        assert_eq!("1/0".parse::<Slope>().unwrap(), Slope::INFINITY);
        assert_eq!("-1/0".parse::<Slope>().unwrap(), Slope::INFINITY);
        assert_eq!("3/-2".parse::<Slope>().unwrap(), Slope::new(-3, 2).unwrap());
        assert_eq!("0".parse::<Slope>().unwrap().to_string(), "0/1");
    }

    #[test]
    fn rejects_non_primitive_and_junk() {
        assert_eq!(Slope::new(18, 2), Err(KnotError::NonPrimitiveSlope { m: 18, n: 2 }));
        assert_eq!(Slope::new(0, 3), Err(KnotError::NonPrimitiveSlope { m: 0, n: 3 }));
        assert_eq!(Slope::new(2, 0), Err(KnotError::NonPrimitiveSlope { m: 2, n: 0 }));
        assert_eq!(Slope::new(0, 0), Err(KnotError::ZeroSlope));
        assert!("9/x".parse::<Slope>().is_err());
        assert!("".parse::<Slope>().is_err());
    }

    #[test]
    fn serde_as_text() {
        let s = Slope::new(49, 8).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), "\"49/8\"");
        assert_eq!(serde_json::from_str::<Slope>("\"49/8\"").unwrap(), s);
        assert!(serde_json::from_str::<Slope>("\"4/8\"").is_err());
    }
}
