use num_integer::Integer;

use super::{KnotError, KnotKind, MarkedKnotGroup};
use crate::fpgroup::{Presentation, Word};

pub const A: usize = 0;
pub const B: usize = 1;

/// Meridian exponents `(u, v)` with `q*u + p*v = 1`, `u` the least
/// nonnegative residue of `q^-1 mod p`.
pub fn meridian_exponents(p: i64, q: i64) -> (i64, i64) {
    let modulus = p.abs();
    let e = q.extended_gcd(&modulus);
    debug_assert_eq!(e.gcd, 1);
    let u = e.x.rem_euclid(modulus);
    let v = (1 - q * u) / p;
    (u, v)
}

/// `<a, b | a^p = b^q>` marked by `mu = a^u b^v` and `lambda = a^p mu^(-pq)`.
/// Requires `|p| > |q| >= 2` and `gcd(p, q) = 1`.
pub fn torus_knot(p: i64, q: i64) -> Result<MarkedKnotGroup, KnotError> {
    if q.unsigned_abs() < 2 || p.unsigned_abs() <= q.unsigned_abs() || p.gcd(&q) != 1 {
        return Err(KnotError::BadTorusKnot { p, q });
    }
    p.checked_mul(q).ok_or(KnotError::Overflow)?;
    let (u, v) = meridian_exponents(p, q);
    let presentation = Presentation::new(["a", "b"], [Word::from_syllables([(A, p), (B, -q)])])?;
    let meridian = Word::from_syllables([(A, u), (B, v)]);
    let longitude = Word::power_of(A, p).mul(&meridian.pow(-p * q));
    MarkedKnotGroup::new(
        presentation,
        meridian,
        longitude,
        vec![q, p],
        KnotKind::Torus { p, q },
    )
}

/// The central element `t = a^p`.
pub fn fiber_word(p: i64) -> Word {
    Word::power_of(A, p)
}
