use serde::{Deserialize, Serialize};

use super::{ClosureError, Limits};
use crate::fpgroup::{regular_table, Order};
use crate::knotpres::{filling_presentation, fiber_word, slope_element, torus_knot, MarkedKnotGroup, Slope};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Undecided,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "Holds",
            Verdict::Fails => "Fails",
            Verdict::Undecided => "Undecided",
        })
    }
}

/// Which test settled the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    Reflexive,
    HomologyObstruction,
    FiniteQuotient,
    LimitExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateInputs {
    pub knot: String,
    pub r: Slope,
    pub r_prime: Slope,
}

/// `m | m'` is necessary for `<<r'>> <= <<r>>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyCheck {
    pub m: i64,
    pub m_prime: i64,
    pub divides: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillingStats {
    pub order: u64,
    pub cosets_defined: usize,
    pub max_live: usize,
}

/// `mu^(n m' - m n')` lies in `<<r>>` whenever `<<r'>>` does.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeridianPower {
    pub exponent: i64,
    pub trivial_in_filling: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub reason: Reason,
    pub homology: Option<HomologyCheck>,
    pub filling: Option<FillingStats>,
    /// Whether the `r'` slope element acts as the identity on the filling.
    pub r_prime_trivial: Option<bool>,
    /// Its order in the filling, recorded when it is not trivial.
    pub r_prime_order: Option<u64>,
    pub meridian_power: Option<MeridianPower>,
}

/// Serializes as `{verdict, evidence, limits, inputs}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub evidence: Evidence,
    pub limits: Limits,
    pub inputs: CertificateInputs,
}

/// Decides `<<r'>> <= <<r>>` in `G(K)` where that can be certified.
pub fn inclusion_certificate(
    k: &MarkedKnotGroup,
    r: Slope,
    r_prime: Slope,
    limits: Limits,
) -> Result<Certificate, ClosureError> {
    let inputs = CertificateInputs { knot: k.label(), r, r_prime };
    let mut evidence = Evidence {
        reason: Reason::Reflexive,
        homology: None,
        filling: None,
        r_prime_trivial: None,
        r_prime_order: None,
        meridian_power: None,
    };
    let done = |verdict, evidence| Ok(Certificate { verdict, evidence, limits, inputs: inputs.clone() });
    if r == r_prime {
        return done(Verdict::Holds, evidence);
    }

    let (m, m_prime) = (r.m(), r_prime.m());
    let divides = if m == 0 { m_prime == 0 } else { m_prime % m == 0 };
    evidence.homology = Some(HomologyCheck { m, m_prime, divides });
    if !divides {
        evidence.reason = Reason::HomologyObstruction;
        return done(Verdict::Fails, evidence);
    }

    let Some(table) = regular_table(&filling_presentation(k, r), limits.max_cosets)? else {
        evidence.reason = Reason::LimitExhausted;
        return done(Verdict::Undecided, evidence);
    };
    let stats = table.stats();
    evidence.filling = Some(FillingStats {
        order: table.rows() as u64,
        cosets_defined: stats.total_defined,
        max_live: stats.max_live,
    });
    let element = slope_element(k, r_prime);
    let trivial = table.is_identity(&element);
    evidence.reason = Reason::FiniteQuotient;
    evidence.r_prime_trivial = Some(trivial);
    if !trivial {
        evidence.r_prime_order = Some(table.permutation_order(&element));
    }
    let exponent = r
        .n()
        .checked_mul(m_prime)
        .zip(m.checked_mul(r_prime.n()))
        .and_then(|(x, y)| x.checked_sub(y))
        .ok_or(ClosureError::Overflow)?;
    evidence.meridian_power = Some(MeridianPower {
        exponent,
        trivial_in_filling: table.is_identity(&k.meridian().pow(exponent)),
    });
    done(if trivial { Verdict::Holds } else { Verdict::Fails }, evidence)
}

/// Order of the meridian in `pi1(K(r))`.
pub fn meridian_order_in_filling(k: &MarkedKnotGroup, r: Slope, limits: Limits) -> Result<Order, ClosureError> {
    Ok(match regular_table(&filling_presentation(k, r), limits.max_cosets)? {
        Some(t) => Order::Finite(t.permutation_order(k.meridian())),
        None => Order::Unknown,
    })
}

/// Order of the central element `t = a^p` in `pi1(T(p,q)(r))`.
pub fn fiber_order_in_filling(p: i64, q: i64, r: Slope, limits: Limits) -> Result<Order, ClosureError> {
    let k = torus_knot(p, q)?;
    if !r.is_infinity() && super::slope_defect(p, q, r)? == 0 {
        // r = pq/1 and the filling relator is mu^0 t^1: t = 1 in an infinite group
        return Ok(Order::Finite(1));
    }
    Ok(match regular_table(&filling_presentation(&k, r), limits.max_cosets)? {
        Some(t) => Order::Finite(t.permutation_order(&fiber_word(p))),
        None => Order::Unknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knotpres::pretzel_knot;

    fn s(m: i64, n: i64) -> Slope {
        Slope::new(m, n).unwrap()
    }

    fn trefoil() -> MarkedKnotGroup {
        torus_knot(3, 2).unwrap()
    }

    #[test]
    fn magnus_pair_fails_both_ways() {
        let k = trefoil();
        for (r, rp) in [(s(9, 1), s(9, 2)), (s(9, 2), s(9, 1))] {
            let c = inclusion_certificate(&k, r, rp, Limits::default()).unwrap();
            assert_eq!(c.verdict, Verdict::Fails);
            assert_eq!(c.evidence.reason, Reason::FiniteQuotient);
            assert_eq!(c.evidence.r_prime_trivial, Some(false));
            assert!(c.evidence.r_prime_order.unwrap() > 1);
        }
    }

    #[test]
    fn cyclic_chain_step_holds() {
        let c = inclusion_certificate(&trefoil(), s(7, 1), s(49, 8), Limits::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Holds);
        assert_eq!(c.evidence.filling.unwrap().order, 7);
        let mp = c.evidence.meridian_power.unwrap();
        assert_eq!(mp.exponent, 49 - 7 * 8);
        assert!(mp.trivial_in_filling);
    }

    #[test]
    fn reflexive_and_homology() {
        let k = trefoil();
        let c = inclusion_certificate(&k, s(5, 2), s(5, 2), Limits::default()).unwrap();
        assert_eq!((c.verdict, c.evidence.reason), (Verdict::Holds, Reason::Reflexive));
        let c = inclusion_certificate(&k, s(7, 1), s(9, 1), Limits::default()).unwrap();
        assert_eq!((c.verdict, c.evidence.reason), (Verdict::Fails, Reason::HomologyObstruction));
        let c = inclusion_certificate(&k, s(0, 1), s(1, 1), Limits::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Fails);
        // every slope element dies in the trivial group
        let c = inclusion_certificate(&k, Slope::INFINITY, s(3, 7), Limits::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Holds);
    }

    #[test]
    fn undecided_on_exhaustion() {
        let c = inclusion_certificate(&trefoil(), s(1, 2), s(3, 4), Limits::new(2000)).unwrap();
        assert_eq!((c.verdict, c.evidence.reason), (Verdict::Undecided, Reason::LimitExhausted));
        assert_eq!(c.limits.max_cosets, 2000);
    }

    #[test]
    fn stable_json_layout() {
        let c = inclusion_certificate(&trefoil(), s(7, 1), s(49, 8), Limits::default()).unwrap();
        let a = serde_json::to_string(&c).unwrap();
        assert!(a.starts_with(r#"{"verdict":"holds","evidence":{"reason":"finite_quotient","#));
        assert!(a.ends_with(r#""limits":{"max_cosets":1000000},"inputs":{"knot":"torus:3,2","r":"7/1","r_prime":"49/8"}}"#));
        let back: Certificate = serde_json::from_str(&a).unwrap();
        assert_eq!(back, c);
        let again = inclusion_certificate(&trefoil(), s(7, 1), s(49, 8), Limits::default()).unwrap();
        assert_eq!(serde_json::to_string(&again).unwrap(), a);
    }

    #[test]
    fn meridian_orders() {
        let k = trefoil();
        assert_eq!(meridian_order_in_filling(&k, Slope::INFINITY, Limits::default()).unwrap(), Order::Finite(1));
        let p = pretzel_knot([-2, 3, 7]).unwrap();
        assert_eq!(meridian_order_in_filling(&p, s(17, 1), Limits::new(100_000)).unwrap(), Order::Finite(170));
        assert_eq!(meridian_order_in_filling(&p, s(1, 1), Limits::new(5000)).unwrap(), Order::Unknown);
    }

    #[test]
    fn fiber_orders() {
        let l = Limits::default();
        assert_eq!(fiber_order_in_filling(3, 2, s(6, 1), l).unwrap(), Order::Finite(1));
        // pi1 has order 72 = 24 * 3 and t has order 2 * 3
        assert_eq!(fiber_order_in_filling(3, 2, s(9, 1), l).unwrap(), Order::Finite(6));
        // t = a^3 maps to 3 * (weight of a = 2) = 6 = 1 in Z/5
        assert_eq!(fiber_order_in_filling(3, 2, s(5, 1), l).unwrap(), Order::Finite(5));
        assert_eq!(fiber_order_in_filling(3, 2, s(1, 2), Limits::new(3000)).unwrap(), Order::Unknown);
    }
}
