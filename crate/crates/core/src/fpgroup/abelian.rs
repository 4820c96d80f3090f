//! Smith normal form over exact integers and abelian invariants of a
//! presentation.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::presentation::Presentation;

/// Diagonal of the Smith normal form: the nonzero invariant factors
/// `d1 | d2 | ... | dk` (all positive) and the rank `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub factors: Vec<BigInt>,
    pub rank: usize,
}

/// Smith normal form of an integer matrix given as rows. Ragged input is
/// padded with zeros. Empty matrices are allowed.
pub fn smith_normal_form(rows: &[Vec<i64>]) -> SmithForm {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| (0..ncols).map(|j| BigInt::from(r.get(j).copied().unwrap_or(0))).collect())
        .collect();
    smith_normal_form_big(m)
}

pub fn smith_normal_form_big(mut m: Vec<Vec<BigInt>>) -> SmithForm {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut t = 0;
    while t < nrows.min(ncols) {
        let Some((pi, pj)) = smallest_nonzero(&m, t) else {
            break;
        };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            // Clear column t and row t; a nonzero remainder becomes the new
            // pivot, which strictly decreases |pivot|.
            let mut dirty = false;
            for i in t + 1..nrows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                sub_row(&mut m, i, t, &q);
                if !m[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..ncols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                sub_col(&mut m, j, t, &q);
                if !m[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let (pi, pj) = smallest_in_cross(&m, t);
                m.swap(t, pi);
                for row in m.iter_mut() {
                    row.swap(t, pj);
                }
                continue;
            }
            // Pivot must divide the rest of the block; otherwise fold the
            // offending row into row t and go again.
            let offending = (t + 1..nrows)
                .find(|&i| (t + 1..ncols).any(|j| !(&m[i][j] % &m[t][t]).is_zero()));
            match offending {
                Some(i) => {
                    for j in t..ncols {
                        let v = m[i][j].clone();
                        m[t][j] += v;
                    }
                }
                None => break,
            }
        }
        t += 1;
    }
    let factors: Vec<BigInt> = (0..t).map(|i| m[i][i].abs()).collect();
    SmithForm { rank: factors.len(), factors }
}

fn smallest_nonzero(m: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in m.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| v.abs() < m[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn smallest_in_cross(m: &[Vec<BigInt>], t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut best_abs: Option<BigInt> = None;
    let candidates = (t..m.len())
        .map(|i| (i, t))
        .chain((t + 1..m[t].len()).map(|j| (t, j)));
    for (i, j) in candidates {
        let v = m[i][j].abs();
        if v.is_zero() {
            continue;
        }
        if best_abs.as_ref().is_none_or(|b| v < *b) {
            best = (i, j);
            best_abs = Some(v);
        }
    }
    best
}

fn sub_row(m: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    let src = m[source].clone();
    for (x, s) in m[target].iter_mut().zip(src.iter()) {
        *x -= q * s;
    }
}

fn sub_col(m: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let s = row[source].clone();
        row[target] -= q * s;
    }
}

/// `Z^free_rank + Z/t1 + ... + Z/tk` with `t1 | t2 | ... | tk`, all `ti >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigUint>,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        Self { free_rank: 0, torsion: Vec::new() }
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigUint> {
        (self.free_rank == 0).then(|| self.torsion_product())
    }

    pub fn torsion_product(&self) -> BigUint {
        self.torsion.iter().fold(BigUint::one(), |acc, t| acc * t)
    }

    pub fn is_cyclic_of_order(&self, n: u64) -> bool {
        match n {
            0 => self.free_rank == 1 && self.torsion.is_empty(),
            1 => self.free_rank == 0 && self.torsion.is_empty(),
            _ => self.free_rank == 0 && self.torsion == [BigUint::from(n)],
        }
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".into() } else { format!("Z^{}", self.free_rank) });
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Exponent-sum matrix of the relators, one row per relator.
pub fn relation_matrix(p: &Presentation) -> Vec<Vec<i64>> {
    p.relators().iter().map(|r| r.exponent_sums(p.ngens())).collect()
}

pub fn abelianization(p: &Presentation) -> AbelianInvariants {
    let snf = smith_normal_form(&relation_matrix(p));
    let torsion = snf
        .factors
        .iter()
        .filter(|d| !d.is_one())
        .map(|d| d.magnitude().clone())
        .collect();
    AbelianInvariants { free_rank: p.ngens() - snf.rank, torsion }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn factors(rows: &[Vec<i64>]) -> (Vec<i64>, usize) {
        let s = smith_normal_form(rows);
        (s.factors.iter().map(|d| d.to_i64().unwrap()).collect(), s.rank)
    }

    #[test]
    fn diagonal_two_three() {
        assert_eq!(factors(&[vec![2, 0], vec![0, 3]]), (vec![1, 6], 2));
    }

    #[test]
    fn zero_and_empty_matrices() {
        assert_eq!(factors(&[vec![0, 0, 0], vec![0, 0, 0]]), (vec![], 0));
        assert_eq!(factors(&[]), (vec![], 0));
        assert_eq!(factors(&[vec![]]), (vec![], 0));
    }

    #[test]
    fn divisibility_fixup() {
        assert_eq!(factors(&[vec![4, 0], vec![0, 6]]), (vec![2, 12], 2));
        assert_eq!(factors(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), (vec![2, 6, 12], 3));
    }

    #[test]
    fn torus_knot_group_is_z() {
        let p: Presentation = "< a, b | a^3 = b^2 >".parse().unwrap();
        let ab = abelianization(&p);
        assert_eq!(ab, AbelianInvariants { free_rank: 1, torsion: vec![] });
        assert_eq!(ab.to_string(), "Z");
        assert_eq!(ab.order(), None);
    }

    #[test]
    fn trivial_presentation() {
        let p: Presentation = "< | >".parse().unwrap();
        assert_eq!(abelianization(&p), AbelianInvariants::trivial());
        let q: Presentation = "< a | a >".parse().unwrap();
        assert_eq!(abelianization(&q), AbelianInvariants::trivial());
    }

    #[test]
    fn mixed_invariants_display() {
        let p: Presentation = "< a, b, c | a^4, b^6 >".parse().unwrap();
        let ab = abelianization(&p);
        assert_eq!(ab.free_rank, 1);
        assert_eq!(ab.to_string(), "Z + Z/2 + Z/12");
    }

    #[test]
    fn huge_entries_stay_exact() {
        let big = i64::MAX;
        let s = smith_normal_form(&[vec![big, 0], vec![0, big - 1]]);
        assert_eq!(s.rank, 2);
        assert_eq!(s.factors[0], BigInt::one());
        assert_eq!(s.factors[1], BigInt::from(big) * BigInt::from(big - 1));
    }
}
