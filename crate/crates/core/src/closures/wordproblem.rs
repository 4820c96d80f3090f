use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::ClosureError;
use crate::fpgroup::Word;
use crate::knotpres::torus_knot;

/// `t^central` times an alternating product of `a^e` (`0 < e < |p|`) and
/// `b^e` (`0 < e < |q|`), where `t = a^p = b^q` is central.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NormalForm {
    pub central: i64,
    pub syllables: Vec<(usize, i64)>,
}

impl NormalForm {
    pub fn is_identity(&self) -> bool {
        self.central == 0 && self.syllables.is_empty()
    }

    /// The element as a word in `a`, `b`, with `t` written as `a^p`.
    pub fn to_word(&self, p: i64) -> Word {
        Word::power_of(0, p * self.central).mul(&Word::from_syllables(self.syllables.iter().copied()))
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("1");
        }
        let mut parts = Vec::new();
        match self.central {
            0 => {}
            1 => parts.push("t".to_string()),
            c => parts.push(format!("t^{c}")),
        }
        for &(g, e) in &self.syllables {
            let name = if g == 0 { "a" } else { "b" };
            parts.push(if e == 1 { name.to_string() } else { format!("{name}^{e}") });
        }
        f.write_str(&parts.join("*"))
    }
}

/// Normal form of `w` in `<a, b | a^p = b^q>`.
pub fn torus_word_problem(p: i64, q: i64, w: &Word) -> Result<NormalForm, ClosureError> {
    torus_knot(p, q)?;
    if w.max_generator().is_some_and(|g| g > 1) {
        return Err(ClosureError::Precondition("word must use only a and b".into()));
    }
    let orders = [p, q];
    let mut central: i64 = 0;
    let mut stack: Vec<(usize, i64)> = Vec::new();
    // a^e = t^(sgn(p) * (e div |p|)) a^(e mod |p|)
    let mut split = |g: usize, e: i64| -> Result<i64, ClosureError> {
        let (k, r) = e.div_mod_floor(&orders[g].abs());
        central = k
            .checked_mul(orders[g].signum())
            .and_then(|x| central.checked_add(x))
            .ok_or(ClosureError::Overflow)?;
        Ok(r)
    };
    for &(g, e) in w.syllables() {
        let e = match stack.last() {
            Some(&(top, te)) if top == g => {
                stack.pop();
                te.checked_add(e).ok_or(ClosureError::Overflow)?
            }
            _ => e,
        };
        let r = split(g, e)?;
        if r != 0 {
            stack.push((g, r));
        }
    }
    Ok(NormalForm { central, syllables: stack })
}
