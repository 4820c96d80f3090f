use std::fmt;

use serde::{Deserialize, Serialize};

/// A letter of the free group: generator `g` is `2g`, its inverse `2g + 1`.
pub type Letter = u32;

#[inline]
pub fn letter(generator: usize, positive: bool) -> Letter {
    (generator as u32) << 1 | u32::from(!positive)
}

#[inline]
pub fn inverse_letter(x: Letter) -> Letter {
    x ^ 1
}

/// A free-group element stored as a freely reduced sequence of syllables
/// `(generator, exponent)`. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    syllables: Vec<(usize, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(g: usize) -> Self {
        Self { syllables: vec![(g, 1)] }
    }

    pub fn power_of(g: usize, exp: i64) -> Self {
        Self::from_syllables([(g, exp)])
    }

    /// Builds a word from arbitrary syllables; zero exponents are dropped and
    /// the result is freely reduced.
    pub fn from_syllables<I: IntoIterator<Item = (usize, i64)>>(syllables: I) -> Self {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for (g, e) in syllables {
            push_syllable(&mut out, g, e);
        }
        Self { syllables: out }
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        Self::from_syllables(
            letters
                .iter()
                .map(|&x| ((x >> 1) as usize, if x & 1 == 0 { 1 } else { -1 })),
        )
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.syllables.iter().map(|&(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.syllables.iter().map(|&(g, _)| g).max()
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.len());
        for &(g, e) in &self.syllables {
            let x = letter(g, e > 0);
            out.extend(std::iter::repeat_n(x, e.unsigned_abs() as usize));
        }
        out
    }

    pub fn inverse(&self) -> Self {
        Self {
            syllables: self.syllables.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    pub fn mul(&self, other: &Word) -> Self {
        let mut out = self.syllables.clone();
        for &(g, e) in &other.syllables {
            push_syllable(&mut out, g, e);
        }
        Self { syllables: out }
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::new();
        for _ in 0..k.unsigned_abs() {
            for &(g, e) in &base.syllables {
                push_syllable(&mut out, g, e);
            }
        }
        Self { syllables: out }
    }

    /// `x^-1 y^-1 x y` would be the other convention; this is `x y x^-1 y^-1`.
    pub fn commutator(x: &Word, y: &Word) -> Self {
        x.mul(y).mul(&x.inverse()).mul(&y.inverse())
    }

    /// `c w c^-1`
    pub fn conjugate_by(&self, c: &Word) -> Self {
        c.mul(self).mul(&c.inverse())
    }

    /// Sum of exponents of each generator, for `ngens` generators.
    pub fn exponent_sums(&self, ngens: usize) -> Vec<i64> {
        let mut sums = vec![0; ngens];
        for &(g, e) in &self.syllables {
            sums[g] += e;
        }
        sums
    }

    /// Image under the homomorphism to `Z` sending generator `g` to `weights[g]`.
    pub fn weighted_sum(&self, weights: &[i64]) -> i64 {
        self.syllables.iter().map(|&(g, e)| weights[g] * e).sum()
    }

    /// Substitutes a word for every generator.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Word::identity();
        for &(g, e) in &self.syllables {
            out = out.mul(&images[g].pow(e));
        }
        out
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

/// Free reduction of an arbitrary syllable sequence. Idempotent on reduced words.
pub fn reduce(w: &Word) -> Word {
    Word::from_syllables(w.syllables.iter().copied())
}

fn push_syllable(out: &mut Vec<(usize, i64)>, g: usize, e: i64) {
    if e == 0 {
        return;
    }
    match out.last_mut() {
        Some(last) if last.0 == g => {
            last.1 += e;
            if last.1 == 0 {
                out.pop();
            }
        }
        _ => out.push((g, e)),
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_identity() {
            return f.write_str("1");
        }
        for (i, &(g, e)) in self.word.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            f.write_str(&self.names[g])?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: usize = 0;
    const B: usize = 1;

    #[test]
    fn free_cancellation() {
        let w = Word::generator(A).mul(&Word::power_of(A, -1));
        assert!(w.is_identity());
    }

    #[test]
    fn exponent_merge() {
        let w = Word::power_of(A, 2).mul(&Word::power_of(A, 3));
        assert_eq!(w.syllables(), &[(A, 5)]);
    }

    #[test]
    fn nested_cancellation() {
        let w = Word::from_syllables([(A, 2), (B, -1), (B, 1), (A, -2)]);
        assert!(w.is_identity());
    }

    #[test]
    fn letters_roundtrip() {
        let w = Word::from_syllables([(A, 2), (B, -3), (A, 1)]);
        assert_eq!(w.len(), 6);
        assert_eq!(Word::from_letters(&w.letters()), w);
    }

    #[test]
    fn commutator_has_zero_exponent_sums() {
        let x = Word::from_syllables([(A, 3), (B, -1)]);
        let y = Word::from_syllables([(B, 2), (A, 1)]);
        let c = Word::commutator(&x, &y);
        assert_eq!(c.exponent_sums(2), vec![0, 0]);
        assert!(!c.is_identity());
    }

    #[test]
    fn pow_and_inverse() {
        let x = Word::from_syllables([(A, 1), (B, 1)]);
        assert!(x.pow(3).mul(&x.pow(-3)).is_identity());
        assert!(x.pow(0).is_identity());
        assert_eq!(x.inverse().syllables(), &[(B, -1), (A, -1)]);
    }

    #[test]
    fn display() {
        let names = vec!["a".to_string(), "b".to_string()];
        let w = Word::from_syllables([(A, 2), (B, -1), (A, 1)]);
        assert_eq!(w.display_with(&names).to_string(), "a^2*b^-1*a");
        assert_eq!(Word::identity().display_with(&names).to_string(), "1");
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn raw() -> impl Strategy<Value = Vec<(usize, i64)>> {
            prop::collection::vec((0usize..3, -3i64..=3), 0..12)
        }

        proptest! {
            #[test]
            fn reduce_is_idempotent(s in raw()) {
                let w = Word::from_syllables(s);
                prop_assert_eq!(reduce(&w), w.clone());
                for pair in w.syllables().windows(2) {
                    prop_assert_ne!(pair[0].0, pair[1].0);
                }
                prop_assert!(w.syllables().iter().all(|&(_, e)| e != 0));
            }

            #[test]
            fn concatenation_is_associative(x in raw(), y in raw(), z in raw()) {
                let (x, y, z) = (Word::from_syllables(x), Word::from_syllables(y), Word::from_syllables(z));
                prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            }

            #[test]
            fn inverse_cancels(x in raw()) {
                let x = Word::from_syllables(x);
                prop_assert!(x.mul(&x.inverse()).is_identity());
            }
        }
    }
}
