use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{classify_torus_surgery, ClosureError, Limits, SurgeryClass};
use crate::fpgroup::{abelianization, regular_table, Order, Word};
use crate::knotpres::{filling_presentation, torus_knot, Slope};

fn overflow<T>(x: Option<T>) -> Result<T, ClosureError> {
    x.ok_or(ClosureError::Overflow)
}

/// `pq + 1/n_i` for `n_0` and `n_(i+1) = (pq+1) n_i + 1`, `depth + 1` slopes.
/// Each has `|pq n_i - m_i| = 1`.
pub fn cyclic_chain(p: i64, q: i64, n0: i64, depth: usize) -> Result<Vec<Slope>, ClosureError> {
    torus_knot(p, q)?;
    if n0 == 0 {
        return Err(ClosureError::Precondition("n0 must be nonzero".into()));
    }
    let pq = p * q;
    let mut n = n0;
    let mut out = Vec::with_capacity(depth + 1);
    for i in 0..=depth {
        if i > 0 {
            n = overflow(pq.checked_add(1).and_then(|x| x.checked_mul(n)).and_then(|x| x.checked_add(1)))?;
        }
        let m = overflow(pq.checked_mul(n).and_then(|x| x.checked_add(1)))?;
        out.push(Slope::new(m, n)?);
    }
    Ok(out)
}

/// `(m(f+1) + df) / (n(f+1))` with `d = pqn - m`, which keeps `pq n_1 - m_1 = d`.
pub fn finite_chain_step(p: i64, q: i64, r: Slope, f: u64) -> Result<Slope, ClosureError> {
    if !matches!(classify_torus_surgery(p, q, r)?, SurgeryClass::FiniteNonCyclic { .. }) {
        return Err(ClosureError::Precondition(format!("{r} is not a non-cyclic finite slope of T({p},{q})")));
    }
    if f == 0 {
        return Err(ClosureError::Precondition("meridian order must be at least 1".into()));
    }
    let f = overflow(i64::try_from(f).ok())?;
    let d = super::slope_defect(p, q, r)?;
    let m1 = overflow(
        r.m().checked_mul(f + 1).zip(d.checked_mul(f)).and_then(|(x, y)| x.checked_add(y)),
    )?;
    let n1 = overflow(r.n().checked_mul(f + 1))?;
    // Slope::new reports a common factor as NonPrimitiveSlope
    Ok(Slope::new(m1, n1)?)
}

/// `m/(kn)`. Needs `k != 0`, `gcd(k, m) = 1` and, unless `r` is a cyclic
/// slope, `k = 1 mod f`.
pub fn finite_finite_family(r: Slope, f: u64, k: i64, cyclic: bool) -> Result<Slope, ClosureError> {
    if r.is_infinity() {
        return Err(ClosureError::Precondition("r must be finite".into()));
    }
    if k == 0 {
        return Err(ClosureError::Precondition("k must be nonzero".into()));
    }
    if k.gcd(&r.m()) != 1 {
        return Err(ClosureError::Precondition(format!("gcd({k}, {}) != 1", r.m())));
    }
    if !cyclic {
        if f == 0 {
            return Err(ClosureError::Precondition("meridian order must be at least 1".into()));
        }
        let f = i128::from(f);
        if i128::from(k).rem_euclid(f) != 1 % f {
            return Err(ClosureError::Precondition(format!("{k} is not 1 mod {f}")));
        }
    }
    Ok(Slope::new(r.m(), overflow(k.checked_mul(r.n()))?)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainQuotient {
    pub slope: Slope,
    /// `|pq n - m|`.
    pub defect: i64,
    pub abelianization: String,
    pub cyclic: bool,
    pub order: Order,
}

/// `mu^k h` for a commutator `h`, and its image in each `Z/m_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleCheck {
    pub word: String,
    pub k: i64,
    pub images: Vec<i64>,
    /// Whether `g` acts nontrivially on the enumerated quotient, if any.
    pub nontrivial_in_quotient: Vec<Option<bool>>,
    /// Image nonzero wherever `m_j > |k|`, and the enumerated action agrees.
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutatorReport {
    pub knot: String,
    pub quotients: Vec<ChainQuotient>,
    pub strictly_growing: bool,
    pub commutators_vanish: bool,
    pub samples: Vec<SampleCheck>,
    pub passed: bool,
}

/// Checks the first `depth` members of the cyclic chain from `n_0 = 1`:
/// cyclic quotients of growing order, and sample words outside `[G, G]`
/// escaping `N_j` once `m_j > |k|`.
pub fn commutator_intersection_check(
    p: i64,
    q: i64,
    depth: usize,
    limits: Limits,
) -> Result<CommutatorReport, ClosureError> {
    if depth == 0 {
        return Err(ClosureError::Precondition("depth must be at least 1".into()));
    }
    let knot = torus_knot(p, q)?;
    let slopes = cyclic_chain(p, q, 1, depth - 1)?;
    let mut quotients = Vec::new();
    let mut tables = Vec::new();
    for &r in &slopes {
        let filled = filling_presentation(&knot, r);
        let ab = abelianization(&filled);
        let table = regular_table(&filled, limits.max_cosets)?;
        quotients.push(ChainQuotient {
            slope: r,
            defect: super::slope_defect(p, q, r)?.abs(),
            abelianization: ab.to_string(),
            cyclic: u64::try_from(r.m().abs()).is_ok_and(|m| ab.is_cyclic_of_order(m)),
            order: table.as_ref().map_or(Order::Unknown, |t| Order::Finite(t.rows() as u64)),
        });
        tables.push(table);
    }
    let ms: Vec<i64> = slopes.iter().map(|r| r.m().abs()).collect();
    let strictly_growing = ms.windows(2).all(|w| w[0] < w[1]);

    let (a, b) = (Word::generator(0), Word::generator(1));
    let mu = knot.meridian().clone();
    let commutators = [
        Word::commutator(&a, &b),
        Word::commutator(&a.pow(2), &b.inverse()),
        Word::commutator(&mu, &a.mul(&b).mul(&a)),
    ];
    let weights = knot.weights();
    let commutators_vanish = commutators.iter().all(|h| {
        h.weighted_sum(weights) == 0 && tables.iter().flatten().all(|t| t.is_identity(h))
    });
    let names = knot.presentation().generators();
    let mut samples = Vec::new();
    for (i, k) in [1i64, -1, 2, 3, 6, 10, 50].into_iter().enumerate() {
        let g = mu.pow(k).mul(&commutators[i % commutators.len()]);
        let w = g.weighted_sum(weights);
        let images: Vec<i64> = ms.iter().map(|&m| w.rem_euclid(m)).collect();
        let nontrivial: Vec<Option<bool>> = tables.iter().map(|t| t.as_ref().map(|t| !t.is_identity(&g))).collect();
        let consistent = ms.iter().zip(&images).zip(&nontrivial).all(|((&m, &img), nt)| {
            (m <= k.abs() || img != 0) && nt.is_none_or(|nt| nt == (img != 0))
        });
        samples.push(SampleCheck { word: g.display_with(names).to_string(), k, images, nontrivial_in_quotient: nontrivial, consistent });
    }
    let passed = strictly_growing
        && commutators_vanish
        && quotients.iter().all(|c| c.cyclic && c.defect == 1 && c.order.finite().is_none_or(|o| o as i64 == c.slope.m().abs()))
        && samples.iter().all(|s| s.consistent);
    Ok(CommutatorReport { knot: knot.label(), quotients, strictly_growing, commutators_vanish, samples, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closures::{inclusion_certificate, meridian_order_in_filling, Verdict};
    use proptest::prelude::*;

    fn s(m: i64, n: i64) -> Slope {
        Slope::new(m, n).unwrap()
    }

    #[test]
    fn trefoil_cyclic_chain() {
        assert_eq!(cyclic_chain(3, 2, 1, 2).unwrap(), vec![s(7, 1), s(49, 8), s(343, 57)]);
        assert_eq!(cyclic_chain(3, 2, 1, 0).unwrap(), vec![s(7, 1)]);
        assert_eq!(cyclic_chain(3, 2, -1, 1).unwrap(), vec![s(5, 1), s(35, 6)]);
        assert!(cyclic_chain(3, 2, 0, 1).is_err());
        assert_eq!(cyclic_chain(3, 2, 1, 40), Err(ClosureError::Overflow));
    }

    #[test]
    fn finite_chain_from_nine() {
        let k = torus_knot(3, 2).unwrap();
        let r = s(9, 1);
        let f = meridian_order_in_filling(&k, r, Limits::default()).unwrap().finite().unwrap();
        let r1 = finite_chain_step(3, 2, r, f).unwrap();
        assert_eq!(6 * r1.n() - r1.m(), -3);
        assert_eq!(inclusion_certificate(&k, r, r1, Limits::default()).unwrap().verdict, Verdict::Holds);
    }

    #[test]
    fn finite_chain_preconditions() {
        assert!(finite_chain_step(3, 2, s(9, 1), 0).is_err());
        assert!(finite_chain_step(3, 2, s(7, 1), 3).is_err());
        // d = -3, f = 2: (27 - 6)/3 is not primitive
        assert!(matches!(
            finite_chain_step(3, 2, s(9, 1), 2),
            Err(ClosureError::Knot(crate::knotpres::KnotError::NonPrimitiveSlope { .. }))
        ));
    }

    #[test]
    fn family() {
        assert_eq!(finite_finite_family(s(18, 1), 18, 5, true).unwrap(), s(18, 5));
        assert_eq!(finite_finite_family(s(17, 1), 170, 171, false).unwrap(), s(17, 171));
        assert_eq!(finite_finite_family(s(17, 1), 170, 1, false).unwrap(), s(17, 1));
        assert!(finite_finite_family(s(17, 1), 170, 3, false).is_err());
        assert!(finite_finite_family(s(18, 1), 18, 3, true).is_err());
        assert!(finite_finite_family(s(18, 1), 18, 0, true).is_err());
    }

    #[test]
    fn commutator_report() {
        let rep = commutator_intersection_check(3, 2, 3, Limits::default()).unwrap();
        let orders: Vec<_> = rep.quotients.iter().map(|c| c.order).collect();
        assert_eq!(orders, [Order::Finite(7), Order::Finite(49), Order::Finite(343)]);
        assert!(rep.passed, "{rep:?}");
        assert_eq!(rep.samples[0].images[0], 1);
        assert!(commutator_intersection_check(3, 2, 0, Limits::default()).is_err());
    }

    proptest! {
        #[test]
        fn chain_step_keeps_defect(m in -200i64..200, n in 1i64..20, f in 1u64..500) {
            for (p, q) in [(3i64, 2i64), (5, 2), (4, 3), (5, 3)] {
                let Ok(r) = Slope::new(m, n) else { continue };
                match finite_chain_step(p, q, r, f) {
                    Ok(r1) => prop_assert_eq!(p * q * r1.n() - r1.m(), p * q * r.n() - r.m()),
                    Err(ClosureError::Precondition(_)) | Err(ClosureError::Knot(_)) => {}
                    Err(e) => prop_assert!(false, "{e}"),
                }
            }
        }

        #[test]
        fn cyclic_chain_defect_one(n0 in -30i64..30, depth in 0usize..4) {
            prop_assume!(n0 != 0);
            for r in cyclic_chain(5, 2, n0, depth).unwrap() {
                prop_assert_eq!((10 * r.n() - r.m()).abs(), 1);
            }
        }
    }
}
