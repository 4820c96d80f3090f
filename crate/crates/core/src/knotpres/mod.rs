//! Marked knot groups (presentation plus meridian and longitude), slopes,
//! and Dehn-filling quotients.

mod pretzel;
mod slope;
mod torus;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fpgroup::{abelianization, FpError, Presentation, Word};

pub use pretzel::{pretzel_knot, SUPPORTED_PRETZELS};
pub use slope::Slope;
pub use torus::{fiber_word, meridian_exponents, torus_knot};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KnotError {
    #[error("slope {m}/{n} is not primitive")]
    NonPrimitiveSlope { m: i64, n: i64 },
    #[error("0/0 is not a slope")]
    ZeroSlope,
    #[error("T({p},{q}) needs |p| > |q| >= 2 and gcd(p, q) = 1")]
    BadTorusKnot { p: i64, q: i64 },
    #[error("unsupported pretzel knot P({0}, {1}, {2})")]
    UnsupportedPretzel(i64, i64, i64),
    #[error("invalid marking: {0}")]
    InvalidMarking(String),
    #[error("integer overflow")]
    Overflow,
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Fp(#[from] FpError),
}

/// Which family a marked group came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum KnotKind {
    Torus { p: i64, q: i64 },
    Pretzel([i64; 3]),
}

impl KnotKind {
    pub fn build(self) -> Result<MarkedKnotGroup, KnotError> {
        match self {
            KnotKind::Torus { p, q } => torus_knot(p, q),
            KnotKind::Pretzel(t) => pretzel_knot(t),
        }
    }
}

impl fmt::Display for KnotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnotKind::Torus { p, q } => write!(f, "torus:{p},{q}"),
            KnotKind::Pretzel([a, b, c]) => write!(f, "pretzel:{a},{b},{c}"),
        }
    }
}

/// `torus:p,q` or `pretzel:a,b,c`. Only syntax is checked here; `build`
/// validates the parameters.
impl FromStr for KnotKind {
    type Err = KnotError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || KnotError::Parse(format!("bad knot {s:?}, expected torus:p,q or pretzel:a,b,c"));
        let (family, params) = s.trim().split_once(':').ok_or_else(bad)?;
        let nums: Vec<i64> = params
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        match (family.trim(), nums.as_slice()) {
            ("torus", &[p, q]) => Ok(KnotKind::Torus { p, q }),
            ("pretzel", &[a, b, c]) => Ok(KnotKind::Pretzel([a, b, c])),
            _ => Err(bad()),
        }
    }
}

impl From<KnotKind> for String {
    fn from(k: KnotKind) -> String {
        k.to_string()
    }
}

impl TryFrom<String> for KnotKind {
    type Error = KnotError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Parses a knot specifier and builds its marked group.
pub fn parse_knot(s: &str) -> Result<MarkedKnotGroup, KnotError> {
    s.parse::<KnotKind>()?.build()
}

/// A knot group with its meridian and preferred longitude. `weights[g]` is
/// the image of generator `g` under the abelianization onto `Z` that sends
/// the meridian to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedKnotGroup {
    presentation: Presentation,
    meridian: Word,
    longitude: Word,
    weights: Vec<i64>,
    kind: KnotKind,
}

impl MarkedKnotGroup {
    /// Checks that the abelianization is `Z`, that `weights` kills every
    /// relator, and that the meridian maps to 1 and the longitude to 0.
    pub fn new(
        presentation: Presentation,
        meridian: Word,
        longitude: Word,
        weights: Vec<i64>,
        kind: KnotKind,
    ) -> Result<Self, KnotError> {
        presentation.check_word(&meridian)?;
        presentation.check_word(&longitude)?;
        if weights.len() != presentation.ngens() {
            return Err(KnotError::InvalidMarking("one weight per generator".into()));
        }
        if !abelianization(&presentation).is_cyclic_of_order(0) {
            return Err(KnotError::InvalidMarking("abelianization is not Z".into()));
        }
        if let Some(r) = presentation.relators().iter().find(|r| r.weighted_sum(&weights) != 0) {
            return Err(KnotError::InvalidMarking(format!(
                "relator {} has nonzero weight",
                presentation.display_word(r)
            )));
        }
        if meridian.weighted_sum(&weights) != 1 {
            return Err(KnotError::InvalidMarking("meridian does not map to 1".into()));
        }
        if longitude.weighted_sum(&weights) != 0 {
            return Err(KnotError::InvalidMarking("longitude does not map to 0".into()));
        }
        Ok(Self { presentation, meridian, longitude, weights, kind })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn meridian(&self) -> &Word {
        &self.meridian
    }

    pub fn longitude(&self) -> &Word {
        &self.longitude
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn kind(&self) -> KnotKind {
        self.kind
    }

    /// `(p, q)` for torus knots.
    pub fn torus_params(&self) -> Option<(i64, i64)> {
        match self.kind {
            KnotKind::Torus { p, q } => Some((p, q)),
            KnotKind::Pretzel(_) => None,
        }
    }

    pub fn label(&self) -> String {
        self.kind.to_string()
    }
}

/// `mu^m lambda^n`, reduced.
pub fn slope_element(k: &MarkedKnotGroup, r: Slope) -> Word {
    k.meridian.pow(r.m()).mul(&k.longitude.pow(r.n()))
}

/// The knot group with the slope element of `r` added as a relator.
pub fn dehn_fill(k: &MarkedKnotGroup, r: Slope) -> Presentation {
    k.presentation
        .with_relator(slope_element(k, r))
        .expect("slope element uses the knot group's generators")
}

/// A presentation of `pi1(K(r))` on the same generators as [`dehn_fill`],
/// so words and coset tables can be shared between the two. For torus knots
/// `a^p` is central, which turns `mu^m (a^p mu^-pq)^n` into the much shorter
/// `mu^(m - pqn) a^(pn)`; other knots get [`dehn_fill`] itself.
pub fn filling_presentation(k: &MarkedKnotGroup, r: Slope) -> Presentation {
    let Some((p, q)) = k.torus_params() else {
        return dehn_fill(k, r);
    };
    let short = p
        .checked_mul(q)
        .and_then(|pq| pq.checked_mul(r.n()))
        .and_then(|x| r.m().checked_sub(x))
        .zip(p.checked_mul(r.n()));
    match short {
        Some((e, t)) => k
            .presentation
            .with_relator(k.meridian.pow(e).mul(&Word::power_of(torus::A, t)))
            .expect("a and b are generators"),
        None => dehn_fill(k, r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroup::{group_order, is_identity_in_finite, Order, Truth};

    fn trefoil() -> MarkedKnotGroup {
        torus_knot(3, 2).unwrap()
    }

    #[test]
    fn short_filling_presents_the_same_group() {
        // finite fillings only, so both enumerations can finish
        let cases: [((i64, i64), &[(i64, i64)]); 3] = [
            ((3, 2), &[(1, 0), (5, 1), (7, 1), (8, 1), (9, 2), (13, 2)]),
            ((-3, 2), &[(-5, 1), (-7, 1), (-9, 1)]),
            ((5, 3), &[(13, 1), (14, 1), (16, 1), (31, 2)]),
        ];
        for ((p, q), slopes) in cases {
            let k = torus_knot(p, q).unwrap();
            for &(m, n) in slopes {
                let r = Slope::new(m, n).unwrap();
                let long = dehn_fill(&k, r);
                let short = filling_presentation(&k, r);
                assert_eq!(short.generators(), long.generators());
                let t = crate::fpgroup::regular_table(&short, 200_000).unwrap().expect("short form enumerates");
                // each slope relator is trivial in the other group
                assert!(t.is_identity(long.relators().last().unwrap()), "T({p},{q}) at {r}");
                if let Some(u) = crate::fpgroup::regular_table(&long, 20_000).unwrap() {
                    assert_eq!(t.rows(), u.rows());
                    assert!(u.is_identity(short.relators().last().unwrap()));
                }
            }
        }
        let k = pretzel_knot([-2, 3, 7]).unwrap();
        assert_eq!(filling_presentation(&k, Slope::integer(18)), dehn_fill(&k, Slope::integer(18)));
    }

    #[test]
    fn slope_elements() {
        let k = trefoil();
        assert_eq!(slope_element(&k, Slope::INFINITY), *k.meridian());
        assert_eq!(slope_element(&k, Slope::integer(0)), *k.longitude());
        let w = k.meridian().pow(9).mul(k.longitude());
        assert_eq!(slope_element(&k, Slope::integer(9)), w);
    }

    #[test]
    fn filling_at_infinity_is_trivial() {
        let k = trefoil();
        assert_eq!(group_order(&dehn_fill(&k, Slope::INFINITY), 100).unwrap(), Order::Finite(1));
    }

    #[test]
    fn trefoil_small_fillings() {
        let k = trefoil();
        let five = dehn_fill(&k, Slope::integer(5));
        assert_eq!(group_order(&five, 1000).unwrap(), Order::Finite(5));
        assert!(abelianization(&five).is_cyclic_of_order(5));
        // +1 surgery on the right-handed trefoil is the Poincare sphere.
        let one = dehn_fill(&k, Slope::integer(1));
        assert_eq!(group_order(&one, 10_000).unwrap(), Order::Finite(120));
    }

    #[test]
    fn slope_element_dies_in_its_filling() {
        let k = trefoil();
        for s in ["5", "7", "9", "9/2", "11/2", "1/1"] {
            let r: Slope = s.parse().unwrap();
            let p = dehn_fill(&k, r);
            assert_eq!(is_identity_in_finite(&p, &slope_element(&k, r), 100_000).unwrap(), Truth::True);
        }
    }

    #[test]
    fn knot_specifiers() {
        assert_eq!("torus:3,2".parse::<KnotKind>().unwrap(), KnotKind::Torus { p: 3, q: 2 });
        assert_eq!(
            " pretzel:-2, 3, 7 ".parse::<KnotKind>().unwrap(),
            KnotKind::Pretzel([-2, 3, 7])
        );
        assert_eq!(KnotKind::Pretzel([-2, 3, 9]).to_string(), "pretzel:-2,3,9");
        for bad in ["torus:3", "torus:3,x", "knot:3,2", "pretzel:1,2", "torus"] {
            assert!(bad.parse::<KnotKind>().is_err(), "{bad}");
        }
        assert!(parse_knot("torus:4,2").is_err());
        assert!(parse_knot("pretzel:-2,3,5").is_err());
    }

    #[test]
    fn marking_validation() {
        let k = trefoil();
        let p = k.presentation().clone();
        let bad = MarkedKnotGroup::new(p.clone(), Word::generator(0), k.longitude().clone(), vec![2, 3], k.kind());
        assert!(matches!(bad, Err(KnotError::InvalidMarking(_))));
        let bad = MarkedKnotGroup::new(p.clone(), k.meridian().clone(), Word::generator(0), vec![2, 3], k.kind());
        assert!(matches!(bad, Err(KnotError::InvalidMarking(_))));
        let bad = MarkedKnotGroup::new(p, k.meridian().clone(), k.longitude().clone(), vec![1, 1], k.kind());
        assert!(matches!(bad, Err(KnotError::InvalidMarking(_))));
    }
}
