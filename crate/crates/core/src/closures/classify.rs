use std::fmt;

use serde::{Deserialize, Serialize};

use super::{slope_defect, ClosureError};
use crate::knotpres::{torus_knot, Slope};

/// What the `r` filling of a torus knot is, read off `d = pq*n - m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum SurgeryClass {
    /// `r = inf`, the 3-sphere.
    Trivial,
    /// `r = pq`, a connected sum of lens spaces.
    Reducible,
    /// `|d| = 1`, a lens space.
    CyclicFinite,
    /// Spherical base orbifold with multiplicities `triple`, ascending.
    FiniteNonCyclic { triple: [i64; 3] },
    InfiniteSfs,
}

impl SurgeryClass {
    pub fn is_finite(self) -> bool {
        matches!(self, SurgeryClass::Trivial | SurgeryClass::CyclicFinite | SurgeryClass::FiniteNonCyclic { .. })
    }
}

impl fmt::Display for SurgeryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurgeryClass::Trivial => f.write_str("Trivial"),
            SurgeryClass::Reducible => f.write_str("Reducible"),
            SurgeryClass::CyclicFinite => f.write_str("CyclicFinite"),
            SurgeryClass::FiniteNonCyclic { triple: [a, b, c] } => write!(f, "FiniteNonCyclic{{{a},{b},{c}}}"),
            SurgeryClass::InfiniteSfs => f.write_str("InfiniteSFS"),
        }
    }
}

pub fn classify_torus_surgery(p: i64, q: i64, r: Slope) -> Result<SurgeryClass, ClosureError> {
    torus_knot(p, q)?;
    if r.is_infinity() {
        return Ok(SurgeryClass::Trivial);
    }
    let d = slope_defect(p, q, r)?.unsigned_abs() as i64;
    Ok(match d {
        0 => SurgeryClass::Reducible,
        1 => SurgeryClass::CyclicFinite,
        _ => {
            let mut triple = [p.abs(), q.abs(), d];
            triple.sort_unstable();
            match triple {
                [2, 2, _] | [2, 3, 3] | [2, 3, 4] | [2, 3, 5] => SurgeryClass::FiniteNonCyclic { triple },
                _ => SurgeryClass::InfiniteSfs,
            }
        }
    })
}

/// Whether `<<r>>` is finitely generated: finite slopes and the cabling slope.
pub fn closure_finitely_generated(p: i64, q: i64, r: Slope) -> Result<bool, ClosureError> {
    Ok(!matches!(classify_torus_surgery(p, q, r)?, SurgeryClass::InfiniteSfs))
}
