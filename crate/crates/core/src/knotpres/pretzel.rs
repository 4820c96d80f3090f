//! Wirtinger presentations of three-strand pretzel knots, read off the
//! standard diagram: three vertical twist regions side by side, joined
//! pairwise along the top and bottom.

use super::{KnotError, KnotKind, MarkedKnotGroup};
use crate::fpgroup::{Presentation, Word};

pub const SUPPORTED_PRETZELS: [[i64; 3]; 2] = [[-2, 3, 7], [-2, 3, 9]];

pub fn pretzel_knot(tangles: [i64; 3]) -> Result<MarkedKnotGroup, KnotError> {
    if !SUPPORTED_PRETZELS.contains(&tangles) {
        let [a, b, c] = tangles;
        return Err(KnotError::UnsupportedPretzel(a, b, c));
    }
    wirtinger(tangles)
}

#[derive(Clone, Copy, Debug)]
struct Visit {
    crossing: usize,
    over: bool,
    /// Direction of travel, y pointing up.
    dir: (i64, i64),
}

/// Walks the diagram once, starting at the top-left end of the first
/// tangle heading down. Returns `None` if the diagram is a link.
fn traverse(tangles: [i64; 3]) -> Option<Vec<Visit>> {
    let counts: Vec<usize> = tangles.iter().map(|t| t.unsigned_abs() as usize).collect();
    let offsets = [0, counts[0], counts[0] + counts[1]];
    let total: usize = counts.iter().sum();
    let mut visits = Vec::with_capacity(2 * total);
    // (tangle, column, heading down)
    let start = (0usize, 0usize, true);
    let (mut i, mut col, mut down) = start;
    loop {
        let positive = tangles[i] > 0;
        let levels: Vec<usize> = if down { (0..counts[i]).collect() } else { (0..counts[i]).rev().collect() };
        for l in levels {
            // The strand running from top-right to bottom-left is over in a
            // positive twist.
            let backslash = (col == 0) == down;
            let dx = if col == 0 { 1 } else { -1 };
            let dy = if down { -1 } else { 1 };
            visits.push(Visit { crossing: offsets[i] + l, over: backslash != positive, dir: (dx, dy) });
            col = 1 - col;
        }
        // Leave through the far end; the outer arcs join the right end of
        // tangle i to the left end of tangle i + 1, cyclically.
        let (j, c) = if col == 1 { ((i + 1) % 3, 0) } else { ((i + 2) % 3, 1) };
        (i, col, down) = (j, c, !down);
        if (i, col, down) == start {
            break;
        }
        if visits.len() > 2 * total {
            return None;
        }
    }
    (visits.len() == 2 * total).then_some(visits)
}

/// Wirtinger presentation with one generator per arc. At a crossing of sign
/// `e` with over arc `x`, the under arc `y` continues as `x^-e y x^e`. The
/// meridian is arc 0; the longitude is the product of `x^e` over the
/// under-passages in order, corrected by `mu^-writhe`.
fn wirtinger(tangles: [i64; 3]) -> Result<MarkedKnotGroup, KnotError> {
    let [a, b, c] = tangles;
    let unsupported = || KnotError::UnsupportedPretzel(a, b, c);
    let visits = traverse(tangles).ok_or_else(unsupported)?;
    let ncross = visits.len() / 2;
    if ncross == 0 {
        return Err(unsupported());
    }
    // Arc k runs from under-passage k - 1 to under-passage k.
    let mut over_arc = vec![0usize; ncross];
    let mut over_dir = vec![(0i64, 0i64); ncross];
    let mut arc = 0;
    for v in &visits {
        if v.over {
            over_arc[v.crossing] = arc % ncross;
            over_dir[v.crossing] = v.dir;
        } else {
            arc += 1;
        }
    }
    let mut relators = Vec::with_capacity(ncross);
    let mut longitude = Word::identity();
    let mut writhe = 0;
    for (arc, v) in visits.iter().filter(|v| !v.over).enumerate() {
        let (o, u) = (over_dir[v.crossing], v.dir);
        let sign = (o.0 * u.1 - o.1 * u.0).signum();
        let x = Word::power_of(over_arc[v.crossing], sign);
        let incoming = Word::generator(arc);
        let outgoing = Word::generator((arc + 1) % ncross);
        relators.push(x.inverse().mul(&incoming).mul(&x).mul(&outgoing.inverse()));
        longitude = longitude.mul(&x);
        writhe += sign;
    }
    let meridian = Word::generator(0);
    let longitude = longitude.mul(&meridian.pow(-writhe));
    // Any one Wirtinger relator follows from the others.
    relators.pop();
    let mut tracked = [meridian, longitude];
    let weights = simplify(ncross, &mut relators, &mut tracked);
    let names: Vec<String> = (0..weights.len()).map(|k| format!("x{k}")).collect();
    let presentation = Presentation::new(names, relators)?;
    let [meridian, longitude] = tracked;
    // Conjugating the peripheral pair keeps it a peripheral pair.
    let (core, c) = peel_conjugator(&meridian);
    let longitude = longitude.conjugate_by(&c.inverse());
    MarkedKnotGroup::new(presentation, core, longitude, weights, KnotKind::Pretzel(tangles))
}

/// Alternates Tietze elimination with greedy Nielsen moves until neither
/// shortens the presentation. All generators start with weight 1; returns
/// the weights of the final generators.
fn simplify(ngens: usize, relators: &mut Vec<Word>, tracked: &mut [Word]) -> Vec<i64> {
    let mut weights = vec![1; ngens];
    loop {
        let kept = eliminate(weights.len(), relators, tracked);
        let shrank = kept.len() < weights.len();
        weights = kept.iter().map(|&k| weights[k]).collect();
        let moved = nielsen_reduce(relators, tracked, &mut weights);
        if !shrank && !moved {
            return weights;
        }
    }
}

/// Repeatedly applies the substitution `x_i -> x_i x_j^e` or
/// `x_i -> x_j^e x_i` that most shortens the cyclically reduced relators.
/// Returns whether anything changed.
fn nielsen_reduce(relators: &mut Vec<Word>, tracked: &mut [Word], weights: &mut [i64]) -> bool {
    let n = weights.len();
    let total = |rels: &[Word]| rels.iter().map(Word::len).sum::<usize>();
    let mut changed = false;
    loop {
        let mut best: Option<(usize, Vec<Word>, Vec<Word>, usize, usize, i64)> = None;
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                for (e, right) in [(1, true), (-1, true), (1, false), (-1, false)] {
                    let xj = Word::power_of(j, e);
                    let image = if right { Word::generator(i).mul(&xj) } else { xj.mul(&Word::generator(i)) };
                    let images: Vec<Word> =
                        (0..n).map(|k| if k == i { image.clone() } else { Word::generator(k) }).collect();
                    let new: Vec<Word> = relators.iter().map(|w| cyclic_reduction(&w.substitute(&images))).collect();
                    let t = total(&new) + tracked.iter().map(|w| w.substitute(&images).len()).sum::<usize>();
                    if t < best.as_ref().map_or(total(relators) + tracked.iter().map(Word::len).sum::<usize>(), |b| b.0) {
                        best = Some((t, new, images, i, j, e));
                    }
                }
            }
        }
        let Some((_, new, images, i, j, e)) = best else { return changed };
        *relators = new;
        for w in tracked.iter_mut() {
            *w = w.substitute(&images);
        }
        weights[i] -= e * weights[j];
        changed = true;
    }
}

/// Tietze elimination: while some relator contains a generator exactly
/// once, solve for it and substitute everywhere, picking the elimination
/// that adds the fewest letters. Returns the surviving generator indices;
/// `relators` and `tracked` are rewritten over them.
fn eliminate(ngens: usize, relators: &mut Vec<Word>, tracked: &mut [Word]) -> Vec<usize> {
    let mut alive = vec![true; ngens];
    loop {
        let mut occurrences = vec![0usize; ngens];
        for r in relators.iter() {
            for &(g, e) in r.syllables() {
                occurrences[g] += e.unsigned_abs() as usize;
            }
        }
        // (growth, relator, generator)
        let mut best: Option<(usize, usize, usize)> = None;
        for (ri, r) in relators.iter().enumerate() {
            for g in 0..ngens {
                let hits: Vec<i64> = r.syllables().iter().filter(|s| s.0 == g).map(|s| s.1).collect();
                if hits.len() != 1 || hits[0].abs() != 1 {
                    continue;
                }
                let others = occurrences[g] - 1;
                let growth = (others * (r.len() - 1)).saturating_sub(others) + r.len();
                if best.is_none_or(|b| (growth, r.len()) < (b.0, relators[b.1].len())) {
                    best = Some((growth, ri, g));
                }
            }
        }
        let Some((_, ri, g)) = best else { break };
        let r = relators.remove(ri);
        let pos = r.syllables().iter().position(|s| s.0 == g).unwrap();
        let u = Word::from_syllables(r.syllables()[..pos].iter().copied());
        let v = Word::from_syllables(r.syllables()[pos + 1..].iter().copied());
        // u g v = 1 gives g = u^-1 v^-1; u g^-1 v = 1 gives g = v u.
        let value = if r.syllables()[pos].1 == 1 { u.inverse().mul(&v.inverse()) } else { v.mul(&u) };
        let images: Vec<Word> =
            (0..ngens).map(|k| if k == g { value.clone() } else { Word::generator(k) }).collect();
        for w in relators.iter_mut() {
            *w = cyclic_reduction(&w.substitute(&images));
        }
        for w in tracked.iter_mut() {
            *w = w.substitute(&images);
        }
        relators.retain(|w| !w.is_identity());
        alive[g] = false;
    }
    let kept: Vec<usize> = (0..ngens).filter(|&k| alive[k]).collect();
    let mut index = vec![usize::MAX; ngens];
    for (new, &old) in kept.iter().enumerate() {
        index[old] = new;
    }
    for w in relators.iter_mut().chain(tracked.iter_mut()) {
        *w = Word::from_syllables(w.syllables().iter().map(|&(g, e)| (index[g], e)));
    }
    kept
}

/// Writes `w = c core c^-1` with `core` cyclically reduced.
fn peel_conjugator(w: &Word) -> (Word, Word) {
    let mut core = w.clone();
    let mut c = Word::identity();
    loop {
        let s = core.syllables();
        if s.len() < 2 || s[0].0 != s[s.len() - 1].0 {
            return (core, c);
        }
        let (g, e) = s[0];
        let (_, f) = s[s.len() - 1];
        // Peel the shorter of the two matching end powers.
        let k = if e.signum() != f.signum() { e.abs().min(f.abs()) * e.signum() } else { return (core, c) };
        let x = Word::power_of(g, k);
        c = c.mul(&x);
        core = x.inverse().mul(&core).mul(&x);
    }
}

/// Strips a conjugating prefix: `x w x^-1` becomes `w`.
fn cyclic_reduction(w: &Word) -> Word {
    let mut s = w.syllables().to_vec();
    while s.len() >= 2 && s[0].0 == s[s.len() - 1].0 {
        let (g, e) = s.pop().unwrap();
        s[0].1 += e;
        if s[0].1 != 0 {
            break;
        }
        s.remove(0);
        let _ = g;
    }
    Word::from_syllables(s)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::fpgroup::{enumerate_cosets_with, Strategy};
    use crate::knotpres::{dehn_fill, Slope};

    /// Laurent polynomial in t, exponent -> coefficient.
    type Poly = BTreeMap<i64, i64>;

    fn add_term(p: &mut Poly, e: i64, c: i64) {
        let v = p.entry(e).or_insert(0);
        *v += c;
        if *v == 0 {
            p.remove(&e);
        }
    }

    fn mul(a: &Poly, b: &Poly) -> Poly {
        let mut out = Poly::new();
        for (&ea, &ca) in a {
            for (&eb, &cb) in b {
                add_term(&mut out, ea + eb, ca * cb);
            }
        }
        out
    }

    fn sub(a: &Poly, b: &Poly) -> Poly {
        let mut out = a.clone();
        for (&e, &c) in b {
            add_term(&mut out, e, -c);
        }
        out
    }

    /// Exact division by a polynomial with unit leading coefficient.
    fn div(a: &Poly, b: &Poly) -> Poly {
        let (&db, &lb) = b.iter().next_back().unwrap();
        assert!(lb.abs() == 1);
        let mut rem = a.clone();
        let mut q = Poly::new();
        while let Some((&da, &la)) = rem.iter().next_back() {
            let lo = *b.keys().next().unwrap();
            if da - db < *rem.keys().next().unwrap() - lo {
                break;
            }
            let term = Poly::from([(da - db, la * lb)]);
            add_term(&mut q, da - db, la * lb);
            rem = sub(&rem, &mul(&term, b));
        }
        assert!(rem.is_empty(), "inexact division");
        q
    }

    /// Shifts to lowest degree 0 with positive constant term.
    fn normalize(p: &Poly) -> Vec<i64> {
        let lo = *p.keys().next().unwrap();
        let hi = *p.keys().next_back().unwrap();
        let sign = p[&lo].signum();
        (lo..=hi).map(|e| sign * p.get(&e).copied().unwrap_or(0)).collect()
    }

    fn fox(r: &Word, g: usize, weights: &[i64]) -> Poly {
        let mut out = Poly::new();
        let mut prefix = 0;
        for x in r.letters() {
            let (h, positive) = ((x >> 1) as usize, x & 1 == 0);
            if positive {
                if h == g {
                    add_term(&mut out, prefix, 1);
                }
                prefix += weights[h];
            } else {
                prefix -= weights[h];
                if h == g {
                    add_term(&mut out, prefix, -1);
                }
            }
        }
        out
    }

    fn det(m: &[Vec<Poly>]) -> Poly {
        if m.is_empty() {
            return Poly::from([(0, 1)]);
        }
        let mut out = Poly::new();
        for j in 0..m.len() {
            let minor: Vec<Vec<Poly>> =
                m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p.clone()).collect()).collect();
            let term = mul(&m[0][j], &det(&minor));
            out = if j % 2 == 0 { sub(&out, &sub(&Poly::new(), &term)) } else { sub(&out, &term) };
        }
        out
    }

    /// Alexander polynomial from a deficiency-one presentation via Fox
    /// calculus, independent of the coset machinery.
    fn alexander(k: &MarkedKnotGroup) -> Vec<i64> {
        let p = k.presentation();
        let w = k.weights();
        assert_eq!(p.relators().len() + 1, p.ngens());
        let j = (0..p.ngens()).max_by_key(|&j| std::cmp::Reverse(w[j].abs())).unwrap();
        let m: Vec<Vec<Poly>> = p
            .relators()
            .iter()
            .map(|r| (0..p.ngens()).filter(|&g| g != j).map(|g| fox(r, g, w)).collect())
            .collect();
        // The minor is the Alexander polynomial times (t^w_j - 1)/(t - 1).
        let wj = w[j].abs();
        let cyclotomic: Poly = (0..wj).map(|e| (e, 1)).collect();
        normalize(&div(&det(&m), &cyclotomic))
    }

    fn order_and_meridian(k: &MarkedKnotGroup, m: i64) -> (usize, u64) {
        let p = dehn_fill(k, Slope::integer(m));
        let t = enumerate_cosets_with(&p, &[], 100_000, Strategy::HltRotations).unwrap().into_table().unwrap();
        assert!(t.verify(&p, &[]));
        assert!(t.is_identity(&Word::commutator(k.meridian(), k.longitude())));
        (t.rows(), t.permutation_order(k.meridian()))
    }

    #[test]
    fn diagrams_are_knots() {
        for t in [[-2, 3, 7], [-2, 3, 9], [-2, 3, 1], [1, 1, 1], [-2, 3, 3]] {
            assert_eq!(traverse(t).unwrap().len(), 2 * t.iter().map(|x| x.unsigned_abs() as usize).sum::<usize>());
        }
        assert!(traverse([2, 2, 2]).is_none());
    }

    #[test]
    fn alexander_polynomials() {
        // Lehmer's polynomial
        assert_eq!(alexander(&wirtinger([-2, 3, 7]).unwrap()), [1, -1, 0, 1, -1, 1, -1, 1, 0, -1, 1]);
        // P(-2,3,1) is T(5,2), P(-2,3,3) is T(4,3), P(1,1,1) is the trefoil
        assert_eq!(alexander(&wirtinger([-2, 3, 1]).unwrap()), [1, -1, 1, -1, 1]);
        assert_eq!(alexander(&wirtinger([-2, 3, 3]).unwrap()), [1, -1, 0, 1, 0, -1, 1]);
        assert_eq!(alexander(&wirtinger([1, 1, 1]).unwrap()), [1, -1, 1]);
        let d = alexander(&wirtinger([-2, 3, 9]).unwrap());
        assert_eq!(d.len(), 13);
        assert_eq!(d.iter().sum::<i64>(), 1);
    }

    #[test]
    fn small_pretzels_fill_like_torus_knots() {
        // P(-2,3,1) is T(5,2): lens spaces at 9 and 11, and 7 has d = 3,
        // so 120 * 7
        let k = wirtinger([-2, 3, 1]).unwrap();
        assert_eq!(order_and_meridian(&k, 9), (9, 9));
        assert_eq!(order_and_meridian(&k, 11), (11, 11));
        assert_eq!(order_and_meridian(&k, 7).0, 840);
        // P(1,1,1) is the left-handed trefoil
        let k = wirtinger([1, 1, 1]).unwrap();
        assert_eq!(order_and_meridian(&k, -5), (5, 5));
        let right = crate::knotpres::torus_knot(3, 2).unwrap();
        let f = dehn_fill(&right, Slope::integer(1));
        let mu = crate::fpgroup::element_order(&f, right.meridian(), 1000).unwrap().finite().unwrap();
        assert_eq!(order_and_meridian(&k, -1), (120, mu));
    }

    #[test]
    fn finite_fillings() {
        let k = pretzel_knot([-2, 3, 7]).unwrap();
        assert_eq!(order_and_meridian(&k, 17), (2040, 170));
        assert_eq!(order_and_meridian(&k, 18), (18, 18));
        assert_eq!(order_and_meridian(&k, 19), (19, 19));
        let k = pretzel_knot([-2, 3, 9]).unwrap();
        assert_eq!(order_and_meridian(&k, 22), (528, 44));
        assert_eq!(order_and_meridian(&k, 23), (2760, 138));
    }

    #[test]
    fn unsupported_tangles() {
        assert!(matches!(pretzel_knot([-2, 3, 5]), Err(KnotError::UnsupportedPretzel(-2, 3, 5))));
        assert_eq!(pretzel_knot([-2, 3, 7]).unwrap().label(), "pretzel:-2,3,7");
    }
}
