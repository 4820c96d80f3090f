//! Seifert invariants over the 2-sphere, their fundamental groups, and the
//! Seifert fibrations of surgeries on torus knots.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fpgroup::{Presentation, Word};
use crate::knotpres::{meridian_exponents, KnotError, Slope};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeifertError {
    #[error("fiber {beta}/{alpha}: need alpha >= 1 and gcd(alpha, beta) = 1")]
    BadFiber { alpha: i64, beta: i64 },
    #[error("slope {0} has no Seifert fibration of this form")]
    NotSeifert(Slope),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("integer overflow")]
    Overflow,
    #[error(transparent)]
    Knot(#[from] KnotError),
}

/// An exceptional fiber `beta/alpha`. Fibers with `alpha = 1` are allowed
/// before normalization and only shift the Euler part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fiber {
    pub alpha: i64,
    pub beta: i64,
}

impl Fiber {
    pub fn new(alpha: i64, beta: i64) -> Result<Self, SeifertError> {
        if alpha < 1 || alpha.gcd(&beta) != 1 {
            return Err(SeifertError::BadFiber { alpha, beta });
        }
        Ok(Self { alpha, beta })
    }
}

/// `S2(e; b1/a1, ..., bk/ak)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeifertInvariant {
    e: i64,
    fibers: Vec<Fiber>,
}

impl SeifertInvariant {
    pub fn new(e: i64, fibers: impl IntoIterator<Item = (i64, i64)>) -> Result<Self, SeifertError> {
        let fibers = fibers
            .into_iter()
            .map(|(a, b)| Fiber::new(a, b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { e, fibers })
    }

    pub fn e(&self) -> i64 {
        self.e
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    /// `e + sum beta_i / alpha_i`, exactly.
    pub fn euler_number(&self) -> BigRational {
        self.fibers.iter().fold(BigRational::from_integer(self.e.into()), |acc, f| {
            acc + BigRational::new(f.beta.into(), f.alpha.into())
        })
    }

    /// Multiplicities of the exceptional fibers (`alpha >= 2`), ascending.
    pub fn multiplicities(&self) -> Vec<i64> {
        let mut a: Vec<i64> = self.fibers.iter().map(|f| f.alpha).filter(|&a| a >= 2).collect();
        a.sort_unstable();
        a
    }

    /// Moves every `beta` into `(0, alpha)`, folding the integer parts and
    /// any `alpha = 1` fibers into `e`, and sorts the fibers.
    pub fn normalize(&self) -> Result<Self, SeifertError> {
        let mut e = self.e;
        let mut fibers = Vec::with_capacity(self.fibers.len());
        for f in &self.fibers {
            let (k, b) = f.beta.div_mod_floor(&f.alpha);
            e = e.checked_add(k).ok_or(SeifertError::Overflow)?;
            if f.alpha >= 2 {
                fibers.push(Fiber { alpha: f.alpha, beta: b });
            }
        }
        fibers.sort_unstable();
        Ok(Self { e, fibers })
    }

    pub fn orientation_reverse(&self) -> Self {
        Self {
            e: -self.e,
            fibers: self.fibers.iter().map(|f| Fiber { alpha: f.alpha, beta: -f.beta }).collect(),
        }
    }

    /// Same normalized form, possibly after reversing one orientation.
    pub fn equivalent(&self, other: &Self) -> Result<bool, SeifertError> {
        let a = self.normalize()?;
        Ok(a == other.normalize()? || a == other.orientation_reverse().normalize()?)
    }
}

impl fmt::Display for SeifertInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S2({}", self.e)?;
        for (i, x) in self.fibers.iter().enumerate() {
            f.write_str(if i == 0 { "; " } else { ", " })?;
            write!(f, "{}/{}", x.beta, x.alpha)?;
        }
        f.write_str(")")
    }
}

/// Parses `S2(e; b1/a1, b2/a2)`; `S2(e)` has no fibers.
impl FromStr for SeifertInvariant {
    type Err = SeifertError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SeifertError::Parse(format!("expected S2(e; b1/a1, ...), got {s:?}"));
        let body = s
            .trim()
            .strip_prefix("S2(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (e, rest) = body.split_once(';').unwrap_or((body, ""));
        let e: i64 = e.trim().parse().map_err(|_| bad())?;
        let mut fibers = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (b, a) = item.split_once('/').ok_or_else(bad)?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            fibers.push((a, b));
        }
        SeifertInvariant::new(e, fibers)
    }
}

/// `<c1, ..., ck, h | [c_i, h], c_i^alpha_i h^beta_i, c1...ck h^-e>`.
pub fn sfs_pi1(s: &SeifertInvariant) -> Presentation {
    let k = s.fibers.len();
    let h = k;
    let mut names: Vec<String> = (1..=k).map(|i| format!("c{i}")).collect();
    names.push("h".into());
    let hw = Word::generator(h);
    let mut relators: Vec<Word> = (0..k).map(|i| Word::commutator(&Word::generator(i), &hw)).collect();
    relators.extend(
        s.fibers
            .iter()
            .enumerate()
            .map(|(i, f)| Word::from_syllables([(i, f.alpha), (h, f.beta)])),
    );
    relators.push(Word::from_syllables((0..k).map(|i| (i, 1)).chain([(h, -s.e)])));
    Presentation::new(names, relators).expect("generators are well formed")
}

/// Seifert invariant of the `r` surgery on `T(p, q)`, in the generators
/// `c1 = a^u`, `c2 = b^v`, `c3 = mu^-1`, `h = t^-1` where `t = a^p` and
/// `mu = a^u b^v`. With `d = pqn - m` the fibers are `(|p|, sgn(p) u)`,
/// `(|q|, sgn(q) v)` and `(|d|, -sgn(d) n)`, and `e = 0`.
pub fn torus_surgery_invariant(p: i64, q: i64, r: Slope) -> Result<SeifertInvariant, SeifertError> {
    crate::knotpres::torus_knot(p, q)?;
    if r.is_infinity() {
        return Err(SeifertError::NotSeifert(r));
    }
    let d = p
        .checked_mul(q)
        .and_then(|pq| pq.checked_mul(r.n()))
        .and_then(|x| x.checked_sub(r.m()))
        .ok_or(SeifertError::Overflow)?;
    if d == 0 {
        return Err(SeifertError::NotSeifert(r));
    }
    let (u, v) = meridian_exponents(p, q);
    SeifertInvariant::new(
        0,
        [(p.abs(), p.signum() * u), (q.abs(), q.signum() * v), (d.abs(), -d.signum() * r.n())],
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriangleOrder {
    Finite(u64),
    Infinite,
}

/// Order of `<c1, c2, c3 | c1^a1, c2^a2, c3^a3, c1 c2 c3>`.
pub fn triangle_group_order(a1: i64, a2: i64, a3: i64) -> TriangleOrder {
    let mut a = [a1, a2, a3];
    assert!(a.iter().all(|&x| x >= 1), "multiplicities must be positive");
    a.sort_unstable();
    if a[0] == 1 {
        // c1 = 1 and c3 = c2^-1: cyclic of order gcd(a2, a3)
        return TriangleOrder::Finite(a[1].gcd(&a[2]) as u64);
    }
    let one = BigRational::from_integer(BigInt::from(1));
    let chi = a.iter().fold(-one.clone(), |acc, &x| acc + BigRational::new(one.numer().clone(), x.into()));
    if chi <= BigRational::from_integer(BigInt::from(0)) {
        return TriangleOrder::Infinite;
    }
    let order = BigRational::from_integer(BigInt::from(2)) / chi;
    debug_assert!(order.is_integer());
    TriangleOrder::Finite(u64::try_from(order.to_integer()).expect("spherical triangle groups are small"))
}
