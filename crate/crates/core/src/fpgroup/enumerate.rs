//! Todd–Coxeter coset enumeration (HLT relator scanning with coincidence
//! processing) and the permutation action read off a completed table.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::presentation::Presentation;
use super::word::{inverse_letter, Letter, Word};
use super::FpError;

pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

const NONE: u32 = u32::MAX;

/// A complete coset table. Row 0 is the coset of the subgroup; rows are
/// numbered in the order the cosets were first defined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    ngens: usize,
    rows: usize,
    // rows * 2 * ngens entries, column `2g` for generator g, `2g+1` for its inverse
    entries: Vec<u32>,
    stats: EnumerationStats,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationStats {
    /// Cosets ever defined, dead ones included.
    pub total_defined: usize,
    /// Largest number of live cosets at any one time.
    pub max_live: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Enumeration {
    Complete(CosetTable),
    /// The coset limit was reached; nothing is claimed about the index.
    Exhausted { limit: usize },
}

impl Enumeration {
    pub fn table(&self) -> Option<&CosetTable> {
        match self {
            Enumeration::Complete(t) => Some(t),
            Enumeration::Exhausted { .. } => None,
        }
    }

    pub fn into_table(self) -> Option<CosetTable> {
        match self {
            Enumeration::Complete(t) => Some(t),
            Enumeration::Exhausted { .. } => None,
        }
    }
}

/// How new cosets are defined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Scan every relator at every coset in turn, filling gaps with new
    /// cosets (Haselgrove, Leech, Trotter), with a lookahead pass whenever
    /// the table is about to overflow.
    Hlt,
    /// HLT over every cyclic rotation of every relator and its inverse.
    /// Far fewer cosets on knot-group style presentations; quadratic in
    /// relator length per coset.
    HltRotations,
    /// Define cosets row by row and close each definition under all
    /// relator rotations before the next one (Felsch).
    Felsch,
}

/// Above this many relator letters scanning every rotation costs more than
/// it saves.
const ROTATION_MAX_RELATOR_LETTERS: usize = 1000;

impl Strategy {
    /// HLT over rotations for presentations made of short relators, plain
    /// HLT otherwise.
    pub fn for_presentation(p: &Presentation) -> Strategy {
        let letters: usize = p.relators().iter().map(Word::len).sum();
        if letters <= ROTATION_MAX_RELATOR_LETTERS {
            Strategy::HltRotations
        } else {
            Strategy::Hlt
        }
    }
}

/// Enumerates the cosets of the subgroup generated (not normally) by
/// `subgroup` in the group presented by `p`, with at most `limit` cosets
/// alive at once. The strategy is picked by [`Strategy::for_presentation`].
pub fn enumerate_cosets(
    p: &Presentation,
    subgroup: &[Word],
    limit: usize,
) -> Result<Enumeration, FpError> {
    enumerate_cosets_with(p, subgroup, limit, Strategy::for_presentation(p))
}

pub fn enumerate_cosets_with(
    p: &Presentation,
    subgroup: &[Word],
    limit: usize,
    strategy: Strategy,
) -> Result<Enumeration, FpError> {
    if limit == 0 {
        return Err(FpError::ZeroLimit);
    }
    for w in subgroup {
        p.check_word(w)?;
    }
    let mut relators: Vec<Vec<Letter>> =
        p.relators().iter().map(|r| cyclically_reduced(r.letters())).collect();
    relators.retain(|r| !r.is_empty());
    // Short relators first closes small cycles early.
    relators.sort_by_key(Vec::len);
    let subgroup: Vec<Vec<Letter>> = subgroup.iter().map(Word::letters).collect();

    let mut e = Enumerator::new(2 * p.ngens(), limit);
    let outcome = match strategy {
        Strategy::Hlt => e.run_hlt(&relators, &subgroup),
        Strategy::HltRotations => e.run_hlt(&all_rotations(&relators), &subgroup),
        Strategy::Felsch => e.run_felsch(&relators, &subgroup),
    };
    Ok(match outcome {
        Ok(()) => Enumeration::Complete(e.finish(p.ngens())),
        Err(Exhausted) => Enumeration::Exhausted { limit },
    })
}

fn cyclically_reduced(mut w: Vec<Letter>) -> Vec<Letter> {
    let mut lo = 0;
    let mut hi = w.len();
    while hi - lo >= 2 && w[lo] == inverse_letter(w[hi - 1]) {
        lo += 1;
        hi -= 1;
    }
    w.truncate(hi);
    w.drain(..lo);
    w
}

/// Every distinct cyclic rotation of each relator and of its inverse,
/// shortest first, in a fixed order.
fn all_rotations(relators: &[Vec<Letter>]) -> Vec<Vec<Letter>> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for r in relators {
        let inv: Vec<Letter> = r.iter().rev().map(|&x| inverse_letter(x)).collect();
        for w in [r, &inv] {
            for k in 0..w.len() {
                let mut v = w[k..].to_vec();
                v.extend_from_slice(&w[..k]);
                if seen.insert(v.clone()) {
                    out.push(v);
                }
            }
        }
    }
    out.sort_by_key(Vec::len);
    out
}

/// A rotation of a relator or of its inverse, read without copying.
#[derive(Clone, Copy)]
struct Rotation {
    relator: u32,
    start: u32,
    inverse: bool,
}

/// Rotations of every relator and its inverse, grouped by first letter.
/// Rotations of a proper power are listed once per period.
fn rotations(relators: &[Vec<Letter>], ncols: usize) -> Vec<Vec<Rotation>> {
    let mut out = vec![Vec::new(); ncols];
    for (ri, r) in relators.iter().enumerate() {
        let n = r.len();
        let period = (1..=n).find(|&d| n % d == 0 && (0..n).all(|i| r[i] == r[(i + d) % n])).unwrap_or(n);
        for start in 0..period {
            out[r[start] as usize].push(Rotation { relator: ri as u32, start: start as u32, inverse: false });
            out[inverse_letter(r[start]) as usize].push(Rotation {
                relator: ri as u32,
                start: start as u32,
                inverse: true,
            });
        }
    }
    out
}

impl Rotation {
    #[inline]
    fn at(self, r: &[Letter], i: usize) -> Letter {
        let n = r.len();
        let s = self.start as usize;
        if self.inverse {
            inverse_letter(r[(s + n - i % n) % n])
        } else {
            r[(s + i) % n]
        }
    }
}

struct Exhausted;

struct Enumerator {
    ncols: usize,
    limit: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    queue: Vec<u32>,
    total_defined: usize,
    live: usize,
    max_live: usize,
    /// Felsch only: table entries set since their rotations were last scanned.
    deductions: Vec<(u32, Letter)>,
    felsch: bool,
}

impl Enumerator {
    fn new(ncols: usize, limit: usize) -> Self {
        let mut e = Self {
            ncols,
            limit,
            table: Vec::new(),
            parent: Vec::new(),
            queue: Vec::new(),
            total_defined: 1,
            live: 1,
            max_live: 1,
            deductions: Vec::new(),
            felsch: false,
        };
        e.table.resize(ncols, NONE);
        e.parent.push(0);
        e
    }

    #[inline]
    fn rows(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    fn get(&self, c: u32, x: Letter) -> u32 {
        self.table[c as usize * self.ncols + x as usize]
    }

    #[inline]
    fn set(&mut self, c: u32, x: Letter, v: u32) {
        self.table[c as usize * self.ncols + x as usize] = v;
    }

    #[inline]
    fn alive(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn define(&mut self, c: u32, x: Letter) -> Result<u32, Exhausted> {
        if self.live >= self.limit {
            return Err(Exhausted);
        }
        let d = self.rows() as u32;
        self.parent.push(d);
        self.table.extend(std::iter::repeat_n(NONE, self.ncols));
        self.total_defined += 1;
        self.live += 1;
        self.max_live = self.max_live.max(self.live);
        self.set(c, x, d);
        self.set(d, inverse_letter(x), c);
        self.deduce(c, x);
        Ok(d)
    }

    #[inline]
    fn deduce(&mut self, c: u32, x: Letter) {
        if self.felsch {
            self.deductions.push((c, x));
        }
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut k = c;
        while self.parent[k as usize] != r {
            let next = self.parent[k as usize];
            self.parent[k as usize] = r;
            k = next;
        }
        r
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
            self.queue.push(hi);
            self.live -= 1;
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let dead = self.queue[i];
            i += 1;
            for x in 0..self.ncols as Letter {
                let d = self.get(dead, x);
                if d == NONE {
                    continue;
                }
                let xi = inverse_letter(x);
                self.set(d, xi, NONE);
                let mu = self.rep(dead);
                let nu = self.rep(d);
                let mx = self.get(mu, x);
                if mx != NONE {
                    self.merge(nu, mx);
                } else {
                    let nxi = self.get(nu, xi);
                    if nxi != NONE {
                        self.merge(mu, nxi);
                    } else {
                        self.set(mu, x, nu);
                        self.set(nu, xi, mu);
                        self.deduce(mu, x);
                    }
                }
            }
        }
    }

    /// Traces `w` from `c` in both directions, defining new cosets to close
    /// the gap; ends with a deduction or a coincidence.
    fn scan_and_fill(&mut self, c: u32, w: &[Letter]) -> Result<(), Exhausted> {
        if w.is_empty() {
            return Ok(());
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = w.len() - 1;
        loop {
            while i <= j {
                let n = self.get(f, w[i]);
                if n == NONE {
                    break;
                }
                f = n;
                i += 1;
            }
            if i > j {
                // f and b both sit at position j + 1
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i {
                let n = self.get(b, inverse_letter(w[j]));
                if n == NONE {
                    break;
                }
                b = n;
                if j == 0 {
                    // i == 0 here, the whole word traced backwards
                    self.coincidence(f, b);
                    return Ok(());
                }
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                self.set(f, w[i], b);
                self.set(b, inverse_letter(w[i]), f);
                self.deduce(f, w[i]);
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    /// Traces a rotation from `c` in both directions without defining
    /// anything; a single gap becomes a deduction, a closed trace that ends
    /// elsewhere a coincidence.
    fn scan(&mut self, c: u32, r: &[Letter], rot: Rotation) {
        let n = r.len();
        let mut f = c;
        let mut i = 0usize;
        while i < n {
            let next = self.get(f, rot.at(r, i));
            if next == NONE {
                break;
            }
            f = next;
            i += 1;
        }
        if i == n {
            if f != c {
                self.coincidence(f, c);
            }
            return;
        }
        let mut b = c;
        let mut j = n - 1;
        while j > i {
            let next = self.get(b, inverse_letter(rot.at(r, j)));
            if next == NONE {
                break;
            }
            b = next;
            j -= 1;
        }
        if j == i {
            let x = rot.at(r, i);
            match self.get(b, inverse_letter(x)) {
                NONE => {
                    self.set(f, x, b);
                    self.set(b, inverse_letter(x), f);
                    self.deduce(f, x);
                }
                g if g != f => self.coincidence(f, g),
                _ => {}
            }
        }
    }

    fn process_deductions(&mut self, relators: &[Vec<Letter>], rots: &[Vec<Rotation>]) {
        while let Some((c, x)) = self.deductions.pop() {
            if !self.alive(c) {
                continue;
            }
            for &rot in &rots[x as usize] {
                if !self.alive(c) {
                    break;
                }
                self.scan(c, &relators[rot.relator as usize], rot);
            }
            if !self.alive(c) {
                continue;
            }
            let d = self.get(c, x);
            if d == NONE {
                continue;
            }
            for &rot in &rots[inverse_letter(x) as usize] {
                if !self.alive(d) {
                    break;
                }
                self.scan(d, &relators[rot.relator as usize], rot);
            }
        }
    }

    fn run_felsch(&mut self, relators: &[Vec<Letter>], subgroup: &[Vec<Letter>]) -> Result<(), Exhausted> {
        self.felsch = true;
        let rots = rotations(relators, self.ncols);
        for w in subgroup {
            if self.alive(0) {
                self.scan_and_fill(0, w)?;
                self.process_deductions(relators, &rots);
            }
        }
        let mut c: u32 = 0;
        while (c as usize) < self.rows() {
            if self.rows() > 4096 && self.rows() > 2 * self.live {
                c = self.compact(c);
                if c as usize >= self.rows() {
                    break;
                }
            }
            for x in 0..self.ncols as Letter {
                if !self.alive(c) {
                    break;
                }
                if self.get(c, x) == NONE {
                    self.define(c, x)?;
                    self.process_deductions(relators, &rots);
                }
            }
            c += 1;
        }
        Ok(())
    }

    fn run_hlt(&mut self, relators: &[Vec<Letter>], subgroup: &[Vec<Letter>]) -> Result<(), Exhausted> {
        for w in subgroup {
            self.scan_and_fill(0, w)?;
        }
        // Most cosets one row of scanning can define.
        let headroom = relators.iter().map(Vec::len).sum::<usize>() + self.ncols;
        let mut c: u32 = 0;
        while (c as usize) < self.rows() {
            if self.live + headroom > self.limit {
                c = self.lookahead(c, relators);
                // A lookahead that frees little only postpones exhaustion.
                if self.live + headroom + self.limit / 16 > self.limit {
                    return Err(Exhausted);
                }
            } else if self.rows() > 4096 && self.rows() > 2 * self.live {
                c = self.compact(c);
            }
            if c as usize >= self.rows() {
                break;
            }
            for r in relators {
                if !self.alive(c) {
                    break;
                }
                self.scan_and_fill(c, r)?;
            }
            if self.alive(c) {
                for x in 0..self.ncols as Letter {
                    if self.get(c, x) == NONE {
                        self.define(c, x)?;
                    }
                }
            }
            c += 1;
        }
        Ok(())
    }

    /// Scans every relator at every live coset without defining anything,
    /// then compacts. Returns the new number of the first live row at or
    /// after `c`.
    fn lookahead(&mut self, c: u32, relators: &[Vec<Letter>]) -> u32 {
        for d in 0..self.rows() as u32 {
            for (ri, r) in relators.iter().enumerate() {
                if !self.alive(d) {
                    break;
                }
                self.scan(d, r, Rotation { relator: ri as u32, start: 0, inverse: false });
            }
        }
        self.compact(c)
    }

    /// New numbers for the live rows, order preserved.
    fn renumbering(&self) -> (Vec<u32>, u32) {
        let mut renumber = vec![NONE; self.rows()];
        let mut live = 0u32;
        for c in 0..self.rows() {
            if self.parent[c] == c as u32 {
                renumber[c] = live;
                live += 1;
            }
        }
        (renumber, live)
    }

    fn remapped_rows(&self, renumber: &[u32], live: u32) -> Vec<u32> {
        let mut entries = Vec::with_capacity(live as usize * self.ncols);
        for c in 0..self.rows() {
            if renumber[c] != NONE {
                let row = &self.table[c * self.ncols..(c + 1) * self.ncols];
                entries.extend(row.iter().map(|&d| if d == NONE { NONE } else { renumber[d as usize] }));
            }
        }
        entries
    }

    /// Drops dead rows between coincidence passes. Returns the new number
    /// of the first live row at or after `c`.
    fn compact(&mut self, c: u32) -> u32 {
        let (renumber, live) = self.renumbering();
        self.table = self.remapped_rows(&renumber, live);
        self.parent = (0..live).collect();
        renumber[c as usize..].iter().copied().find(|&r| r != NONE).unwrap_or(live)
    }

    fn finish(self, ngens: usize) -> CosetTable {
        let (renumber, live) = self.renumbering();
        let entries = self.remapped_rows(&renumber, live);
        CosetTable {
            ngens,
            rows: live as usize,
            entries,
            stats: EnumerationStats { total_defined: self.total_defined, max_live: self.max_live },
        }
    }
}

impl CosetTable {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn stats(&self) -> EnumerationStats {
        self.stats
    }

    #[inline]
    pub fn act(&self, coset: usize, x: Letter) -> usize {
        self.entries[coset * 2 * self.ngens + x as usize] as usize
    }

    /// Image of `coset` under right multiplication by `w`.
    pub fn apply(&self, coset: usize, w: &Word) -> usize {
        let mut c = coset;
        for &(g, e) in w.syllables() {
            let x = super::word::letter(g, e > 0);
            for _ in 0..e.unsigned_abs() {
                c = self.act(c, x);
            }
        }
        c
    }

    /// The permutation of all cosets induced by `w`.
    pub fn permutation(&self, w: &Word) -> Vec<u32> {
        // Compose generator powers syllable by syllable; each syllable power
        // is evaluated by cycling, so long powers stay cheap.
        let mut perm: Vec<u32> = (0..self.rows as u32).collect();
        for &(g, e) in w.syllables() {
            let x = super::word::letter(g, e > 0);
            let k = e.unsigned_abs();
            let col: Vec<u32> = (0..self.rows).map(|c| self.act(c, x) as u32).collect();
            let step = power_of_permutation(&col, k);
            for p in perm.iter_mut() {
                *p = step[*p as usize];
            }
        }
        perm
    }

    pub fn is_identity(&self, w: &Word) -> bool {
        self.permutation(w).iter().enumerate().all(|(i, &p)| p as usize == i)
    }

    /// Order of the permutation induced by `w`: the lcm of its cycle lengths.
    pub fn permutation_order(&self, w: &Word) -> u64 {
        permutation_order(&self.permutation(w))
    }

    /// Exhaustive check of the table invariants: every column is a
    /// permutation inverse to its partner column, every relator closes at
    /// every coset, every subgroup generator fixes coset 0.
    pub fn verify(&self, p: &Presentation, subgroup: &[Word]) -> bool {
        if p.ngens() != self.ngens {
            return false;
        }
        for c in 0..self.rows {
            for x in 0..2 * self.ngens as Letter {
                let d = self.act(c, x);
                if d >= self.rows || self.act(d, inverse_letter(x)) != c {
                    return false;
                }
            }
        }
        for r in p.relators() {
            if !self.is_identity(r) {
                return false;
            }
        }
        subgroup.iter().all(|w| self.apply(0, w) == 0)
    }
}

fn power_of_permutation(perm: &[u32], k: u64) -> Vec<u32> {
    let n = perm.len();
    let mut out = vec![0u32; n];
    let mut seen = vec![false; n];
    let mut cycle = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        cycle.clear();
        let mut c = start;
        while !seen[c] {
            seen[c] = true;
            cycle.push(c as u32);
            c = perm[c] as usize;
        }
        let len = cycle.len() as u64;
        let shift = (k % len) as usize;
        for (i, &c) in cycle.iter().enumerate() {
            out[c as usize] = cycle[(i + shift) % cycle.len()];
        }
    }
    out
}

pub fn permutation_order(perm: &[u32]) -> u64 {
    let mut seen = vec![false; perm.len()];
    let mut order = 1u64;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut c = start;
        while !seen[c] {
            seen[c] = true;
            len += 1;
            c = perm[c] as usize;
        }
        order = order.lcm(&len);
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(s: &str) -> Presentation {
        s.parse().unwrap()
    }

    fn complete(p: &Presentation, h: &[Word]) -> CosetTable {
        let t = enumerate_cosets(p, h, 100_000).unwrap().into_table().expect("complete");
        assert!(t.verify(p, h));
        t
    }

    #[test]
    fn cyclic_of_order_five() {
        assert_eq!(complete(&pres("< a | a^5 >"), &[]).rows(), 5);
    }

    #[test]
    fn subgroup_is_everything() {
        let p = pres("< a, b | a^3 = b^2 >");
        let h = [Word::generator(0), Word::generator(1)];
        assert_eq!(complete(&p, &h).rows(), 1);
    }

    #[test]
    fn tetrahedral_triangle_group() {
        let p = pres("< c1, c2, c3 | c1^3, c2^3, c3^2, c1*c2*c3 >");
        assert_eq!(complete(&p, &[]).rows(), 12);
    }

    #[test]
    fn symmetric_group_index() {
        // S3 over the subgroup <a> of order 2
        let p = pres("< a, b | a^2, b^3, a*b*a*b >");
        assert_eq!(complete(&p, &[]).rows(), 6);
        assert_eq!(complete(&p, &[Word::generator(0)]).rows(), 3);
    }

    #[test]
    fn free_group_exhausts() {
        let p = pres("< a, b | >");
        assert_eq!(enumerate_cosets(&p, &[], 500).unwrap(), Enumeration::Exhausted { limit: 500 });
    }

    #[test]
    fn rejects_bad_subgroup_words_and_zero_limit() {
        let p = pres("< a | a^2 >");
        assert!(enumerate_cosets(&p, &[Word::generator(3)], 10).is_err());
        assert!(matches!(enumerate_cosets(&p, &[], 0), Err(FpError::ZeroLimit)));
    }

    #[test]
    fn element_orders_in_s3() {
        let p = pres("< a, b | a^2, b^3, a*b*a*b >");
        let t = complete(&p, &[]);
        assert_eq!(t.permutation_order(&Word::generator(0)), 2);
        assert_eq!(t.permutation_order(&Word::generator(1)), 3);
        assert_eq!(t.permutation_order(&Word::from_syllables([(0, 1), (1, 1)])), 2);
        assert_eq!(t.permutation_order(&Word::identity()), 1);
    }

    #[test]
    fn long_powers_are_cycled() {
        let p = pres("< a | a^7 >");
        let t = complete(&p, &[]);
        assert!(t.is_identity(&Word::power_of(0, 7_000_000)));
        assert!(!t.is_identity(&Word::power_of(0, 7_000_001)));
    }

    #[test]
    fn numbering_is_deterministic() {
        let p = pres("< a, b | a^2, b^3, a*b*a*b >");
        let t1 = complete(&p, &[]);
        let t2 = complete(&p, &[]);
        assert_eq!(t1, t2);
    }
}
