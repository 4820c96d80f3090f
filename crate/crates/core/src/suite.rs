//! The acceptance battery: finite pretzel fillings, the trefoil Magnus
//! pairs, a finite-surgery sweep over small torus knots, chains,
//! word-problem agreement, intersection witnesses, Seifert cross-checks and
//! Smith normal form invariance.

use std::time::{Duration, Instant};

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::closures::{
    classify_torus_surgery, cyclic_chain, finite_chain_step, finite_finite_family, inclusion_certificate,
    intersection_witness, magnus_displayed_invariants, magnus_pair_report, magnus_slopes, meridian_order_in_filling, torus_word_problem,
    CheckStatus, ClosureError, Limits, SurgeryClass, Verdict,
};
use crate::fpgroup::{abelianization, regular_table, smith_normal_form, CosetTable, Order, Truth, Word};
use crate::knotpres::{filling_presentation, pretzel_knot, torus_knot, Slope};
use crate::seifert::{sfs_pi1, torus_surgery_invariant};

/// Coset bound for each pretzel enumeration.
pub const PRETZEL_MAX_COSETS: usize = 100_000;
pub const PRETZEL_MAX_TIME: Duration = Duration::from_secs(10);
pub const MAGNUS_MAX_TIME: Duration = Duration::from_secs(30);
pub const WITNESS_MAX_TIME: Duration = Duration::from_secs(60);
pub const WITNESS_BUDGET: usize = 6;
pub const WORDS_PER_KNOT: usize = 1000;
pub const MAX_WORD_LENGTH: usize = 30;
pub const SNF_MATRICES: usize = 500;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub limits: Limits,
    pub seed: u64,
}

/// One row of the pass/fail table. `elapsed` is left out of the JSON so
/// reruns produce identical output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub details: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

fn finish(id: u8, name: &str, start: Instant, details: Vec<String>, passed: bool) -> CriterionResult {
    CriterionResult { id, name: name.into(), passed, details, elapsed: start.elapsed() }
}

fn table_order(t: &Option<CosetTable>) -> Order {
    t.as_ref().map_or(Order::Unknown, |t| Order::Finite(t.rows() as u64))
}

/// Group order and meridian order of the five finite pretzel fillings.
pub fn pretzel_fillings() -> Result<CriterionResult, ClosureError> {
    let start = Instant::now();
    // (tangles, slope, group order, meridian order)
    let cases: [([i64; 3], i64, u64, u64); 5] = [
        ([-2, 3, 7], 17, 2040, 170),
        ([-2, 3, 7], 18, 18, 18),
        ([-2, 3, 7], 19, 19, 19),
        ([-2, 3, 9], 22, 528, 44),
        ([-2, 3, 9], 23, 2760, 138),
    ];
    let mut details = Vec::new();
    let mut passed = true;
    for (t, m, order, meridian) in cases {
        let k = pretzel_knot(t)?;
        let r = Slope::integer(m);
        let t0 = Instant::now();
        let table = regular_table(&filling_presentation(&k, r), PRETZEL_MAX_COSETS)?;
        let took = t0.elapsed();
        let got = table_order(&table);
        let mer = table.as_ref().map_or(Order::Unknown, |t| Order::Finite(t.permutation_order(k.meridian())));
        // the cyclic fillings must also abelianize to Z/m
        let cyclic_ok = order != m as u64 || abelianization(&filling_presentation(&k, r)).is_cyclic_of_order(order);
        let ok = got == Order::Finite(order) && mer == Order::Finite(meridian) && cyclic_ok && took <= PRETZEL_MAX_TIME;
        passed &= ok;
        let live = table.as_ref().map_or(0, |t| t.stats().max_live);
        details.push(format!(
            "P({},{},{})({m}): order {got} (want {order}), meridian {mer} (want {meridian}), max live cosets {live}",
            t[0], t[1], t[2]
        ));
    }
    Ok(finish(1, "pretzel finite surgeries", start, details, passed))
}

pub fn magnus_family(limits: Limits) -> Result<CriterionResult, ClosureError> {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut passed = true;
    for k in 0..=2 {
        let rep = magnus_pair_report(k, limits)?;
        let orders: Vec<String> = rep.sides.iter().map(|s| s.seifert_order.to_string()).collect();
        let h: Vec<String> = rep.sides.iter().map(|s| s.h_order.to_string()).collect();
        let bad: Vec<&str> =
            rep.checks.iter().filter(|c| c.status != CheckStatus::Pass).map(|c| c.name.as_str()).collect();
        passed &= bad.is_empty();
        details.push(format!(
            "k={k} {} vs {}: orders {}, h orders {}, {}",
            rep.sides[0].slope,
            rep.sides[1].slope,
            orders.join("/"),
            h.join("/"),
            if bad.is_empty() { "all checks pass".to_string() } else { format!("not passing: {}", bad.join(", ")) }
        ));
    }
    let elapsed = start.elapsed();
    if elapsed > MAGNUS_MAX_TIME {
        passed = false;
        details.push("time limit exceeded".into());
    }
    Ok(finish(2, "trefoil Magnus family", start, details, passed))
}

/// Torus knots `T(p, q)` and mirrors with `p > q >= 2`, `pq <= 35`.
pub fn small_torus_knots() -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for q in 2i64..=5 {
        for p in (q + 1)..=35 {
            if p * q <= 35 && p.gcd(&q) == 1 {
                out.push((p, q));
                out.push((-p, q));
            }
        }
    }
    out
}

/// Slopes with `1 <= n <= 3` and `|pqn - m| <= 5`, excluding `pq`.
pub fn near_cabling_slopes(p: i64, q: i64) -> Vec<Slope> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for d in -5..=5 {
            let m = p * q * n - d;
            if d != 0 && m.gcd(&n) == 1 {
                out.push(Slope::new(m, n).expect("primitive"));
            }
        }
    }
    out
}

pub fn moser_sweep(limits: Limits) -> Result<CriterionResult, ClosureError> {
    let start = Instant::now();
    let (mut finite, mut cyclic, mut infinite) = (0, 0, 0);
    let mut failures = Vec::new();
    for (p, q) in small_torus_knots() {
        let k = torus_knot(p, q)?;
        for r in near_cabling_slopes(p, q) {
            let class = classify_torus_surgery(p, q, r)?;
            if !class.is_finite() {
                infinite += 1;
                continue;
            }
            finite += 1;
            let fill = filling_presentation(&k, r);
            let order = table_order(&regular_table(&fill, limits.max_cosets)?);
            let m = r.m().unsigned_abs();
            let ok = match (class, order) {
                (_, Order::Unknown) => false,
                (SurgeryClass::CyclicFinite, Order::Finite(o)) => {
                    cyclic += 1;
                    o == m && abelianization(&fill).is_cyclic_of_order(m)
                }
                (_, Order::Finite(o)) => o % m == 0,
            };
            if !ok {
                failures.push(format!("T({p},{q}) at {r}: {class}, order {order}"));
            }
        }
    }
    let mut details = vec![format!(
        "{} knots, {finite} finite slopes enumerated ({cyclic} cyclic), {infinite} classified infinite and skipped",
        small_torus_knots().len()
    )];
    let passed = failures.is_empty();
    details.extend(failures);
    Ok(finish(3, "finite surgery sweep", start, details, passed))
}

pub fn chain_certification(limits: Limits) -> Result<CriterionResult, ClosureError> {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut passed = true;
    let trefoil = torus_knot(3, 2)?;

    let chain = cyclic_chain(3, 2, 1, 4)?;
    let verdicts: Vec<Verdict> = chain
        .windows(2)
        .map(|w| inclusion_certificate(&trefoil, w[0], w[1], limits).map(|c| c.verdict))
        .collect::<Result<_, _>>()?;
    let ok = chain.len() == 5 && verdicts.iter().all(|&v| v == Verdict::Holds);
    passed &= ok;
    details.push(format!(
        "cyclic chain {}: {}",
        chain.iter().map(Slope::to_string).collect::<Vec<_>>().join(" > "),
        verdicts.iter().map(Verdict::to_string).collect::<Vec<_>>().join(", ")
    ));

    let mut r = Slope::integer(9);
    let mut steps = Vec::new();
    for _ in 0..2 {
        let f = match meridian_order_in_filling(&trefoil, r, limits)? {
            Order::Finite(f) => f,
            Order::Unknown => {
                passed = false;
                steps.push(format!("{r}: meridian order unknown"));
                break;
            }
        };
        match finite_chain_step(3, 2, r, f) {
            Ok(next) => {
                let v = inclusion_certificate(&trefoil, r, next, limits)?.verdict;
                passed &= v == Verdict::Holds;
                steps.push(format!("{r} (f={f}) > {next}: {v}"));
                r = next;
            }
            Err(e) => {
                passed = false;
                steps.push(format!("{r} (f={f}): {e}"));
                break;
            }
        }
    }
    details.push(format!("finite chain {}", steps.join("; ")));

    let pretzel = pretzel_knot([-2, 3, 7])?;
    let base = Slope::integer(18);
    let mut family = Vec::new();
    for k in [5, 7, 11] {
        let target = finite_finite_family(base, 18, k, true)?;
        let v = inclusion_certificate(&pretzel, base, target, limits)?.verdict;
        passed &= v == Verdict::Holds;
        family.push(format!("{target}: {v}"));
    }
    details.push(format!("P(-2,3,7) from 18: {}", family.join(", ")));
    Ok(finish(4, "chain certification", start, details, passed))
}

/// Finite fillings used as quotients when testing the word problem.
fn word_problem_quotients(p: i64, q: i64) -> Vec<Slope> {
    let pq = p * q;
    // two cyclic slopes and two non-cyclic finite ones where available
    [pq - 1, pq + 1, pq - 2, pq + 2, pq - 3, pq + 3]
        .into_iter()
        .map(Slope::integer)
        .filter(|&r| classify_torus_surgery(p, q, r).is_ok_and(SurgeryClass::is_finite))
        .take(4)
        .collect()
}

fn random_word(rng: &mut ChaCha8Rng, p: i64, q: i64) -> Word {
    let len = rng.gen_range(0..=MAX_WORD_LENGTH);
    let letters: Vec<u32> = (0..len).map(|_| rng.gen_range(0..4)).collect();
    if rng.gen_bool(0.5) {
        return Word::from_letters(&letters);
    }
    // a conjugate of a relator power, which is trivial
    let rel = Word::from_syllables([(0, p), (1, -q)]);
    let room = MAX_WORD_LENGTH.saturating_sub(rel.len()) / 2;
    let u = Word::from_letters(&letters[..letters.len().min(room)]);
    rel.pow(if rng.gen_bool(0.5) { 1 } else { -1 }).conjugate_by(&u)
}

pub fn word_problem_agreement(limits: Limits, seed: u64) -> Result<CriterionResult, ClosureError> {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut passed = true;
    for (p, q) in [(3, 2), (5, 2), (5, 3)] {
        let k = torus_knot(p, q)?;
        let slopes = word_problem_quotients(p, q);
        let mut tables = Vec::new();
        for &r in &slopes {
            if let Some(t) = regular_table(&filling_presentation(&k, r), limits.max_cosets)? {
                tables.push(t);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((p as u64) << 8 | q as u64));
        let (mut identities, mut discrepancies) = (0, 0);
        for _ in 0..WORDS_PER_KNOT {
            let w = random_word(&mut rng, p, q);
            let nf = torus_word_problem(p, q, &w)?;
            let syllables: i64 = nf.syllables.iter().map(|&(g, e)| e * if g == 0 { q } else { p }).sum();
            let bookkeeping = w.weighted_sum(&[q, p]) == nf.central * p * q + syllables;
            let sound = !nf.is_identity() || tables.iter().all(|t| t.is_identity(&w));
            identities += usize::from(nf.is_identity());
            discrepancies += usize::from(!bookkeeping || !sound);
        }
        passed &= discrepancies == 0 && tables.len() == slopes.len();
        details.push(format!(
            "T({p},{q}): {WORDS_PER_KNOT} words, {identities} identities, quotients {}, {discrepancies} discrepancies",
            slopes.iter().map(Slope::to_string).collect::<Vec<_>>().join(" ")
        ));
    }
    Ok(finish(5, "word problem agreement", start, details, passed))
}

pub fn intersection_witnesses(limits: Limits) -> Result<CriterionResult, ClosureError> {
    let start = Instant::now();
    let k = torus_knot(3, 2)?;
    let s = Slope::integer;
    let sets: [&[Slope]; 3] = [&[s(1)], &[s(1), s(5)], &[s(1), s(5), s(7)]];
    let mut details = Vec::new();
    let mut passed = true;
    for set in sets {
        let names: Vec<String> = set.iter().map(Slope::to_string).collect();
        match intersection_witness(&k, set, WITNESS_BUDGET, limits) {
            Ok(w) => {
                let nontrivial = w.normal_form.as_ref().is_some_and(|nf| !nf.is_identity());
                let trivial_in_fillings = w.fillings.iter().all(|f| f.witness_trivial == Truth::True);
                let ok = nontrivial && w.exponent_sum == 0 && trivial_in_fillings && w.verify_structure(&k);
                passed &= ok;
                let conj: Vec<&str> = w.steps.iter().map(|s| s.conjugator_text.as_str()).collect();
                details.push(format!(
                    "{{{}}}: length {}, conjugators {}, exponent sum {}, trivial in every filling: {}",
                    names.join(", "),
                    w.length,
                    conj.join(" "),
                    w.exponent_sum,
                    trivial_in_fillings
                ));
            }
            Err(e) => {
                passed = false;
                details.push(format!("{{{}}}: {e}", names.join(", ")));
            }
        }
    }
    if start.elapsed() > WITNESS_MAX_TIME {
        passed = false;
        details.push("time limit exceeded".into());
    }
    Ok(finish(6, "intersection witnesses", start, details, passed))
}

pub fn seifert_cross_validation(limits: Limits) -> Result<CriterionResult, ClosureError> {
    let start = Instant::now();
    let k = torus_knot(3, 2)?;
    let mut details = Vec::new();
    let mut passed = true;
    for e in 0..=2 {
        let slopes = magnus_slopes(e)?;
        let shown = magnus_displayed_invariants(e)?;
        for (r, shown) in slopes.into_iter().zip(shown) {
            let inv = torus_surgery_invariant(3, 2, r)?;
            let same = inv.equivalent(&shown)?;
            let sfs = table_order(&regular_table(&sfs_pi1(&inv), limits.max_cosets)?);
            let knot = table_order(&regular_table(&filling_presentation(&k, r), limits.max_cosets)?);
            let ok = same && sfs != Order::Unknown && sfs == knot;
            passed &= ok;
            details.push(format!("{r}: {} ~ {shown}: {same}, orders {sfs} / {knot}", inv.normalize()?));
        }
    }
    Ok(finish(7, "Seifert cross-validation", start, details, passed))
}

fn random_matrix(rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let rows = rng.gen_range(1..=5);
    let cols = rng.gen_range(1..=5);
    (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-12..=12)).collect()).collect()
}

/// Smith form is unchanged by permuting rows and columns and flipping signs.
pub fn snf_metamorphic(seed: u64) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..SNF_MATRICES {
        let m = random_matrix(&mut rng);
        let mut rows: Vec<usize> = (0..m.len()).collect();
        let mut cols: Vec<usize> = (0..m[0].len()).collect();
        rows.shuffle(&mut rng);
        cols.shuffle(&mut rng);
        let row_sign: Vec<i64> = rows.iter().map(|_| if rng.gen_bool(0.5) { -1 } else { 1 }).collect();
        let col_sign: Vec<i64> = cols.iter().map(|_| if rng.gen_bool(0.5) { -1 } else { 1 }).collect();
        let moved: Vec<Vec<i64>> = rows
            .iter()
            .enumerate()
            .map(|(i, &r)| cols.iter().enumerate().map(|(j, &c)| m[r][c] * row_sign[i] * col_sign[j]).collect())
            .collect();
        if smith_normal_form(&m) != smith_normal_form(&moved) {
            failures += 1;
        }
    }
    (SNF_MATRICES, failures)
}

/// Runs criteria 1 to 7, then the Smith form check, which also requires
/// every earlier criterion to have passed.
pub fn run_all(config: SuiteConfig) -> Result<Vec<CriterionResult>, ClosureError> {
    let limits = config.limits;
    let mut out = vec![
        pretzel_fillings()?,
        magnus_family(limits)?,
        moser_sweep(limits)?,
        chain_certification(limits)?,
        word_problem_agreement(limits, config.seed)?,
        intersection_witnesses(limits)?,
        seifert_cross_validation(limits)?,
    ];
    let start = Instant::now();
    let (n, failures) = snf_metamorphic(config.seed);
    let earlier: Vec<String> = out.iter().filter(|c| !c.passed).map(|c| c.id.to_string()).collect();
    let mut details = vec![format!("Smith form: {n} seeded matrices, {failures} failures")];
    if !earlier.is_empty() {
        details.push(format!("criteria not passing: {}", earlier.join(", ")));
    }
    out.push(finish(8, "headless property suites", start, details, failures == 0 && earlier.is_empty()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_inputs() {
        let knots = small_torus_knots();
        assert_eq!(knots.len(), 36);
        assert!(knots.contains(&(17, 2)) && knots.contains(&(-7, 5)) && !knots.contains(&(9, 4)));
        let slopes = near_cabling_slopes(3, 2);
        assert!(slopes.contains(&Slope::integer(1)) && slopes.contains(&Slope::new(13, 2).unwrap()));
        assert!(!slopes.contains(&Slope::integer(6)));
    }

    #[test]
    fn snf_invariance() {
        assert_eq!(snf_metamorphic(7), (SNF_MATRICES, 0));
    }

    #[test]
    fn quotient_choice() {
        assert_eq!(word_problem_quotients(3, 2), [5, 7, 4, 8].map(Slope::integer));
        assert_eq!(word_problem_quotients(5, 3).len(), 4);
    }

    #[test]
    fn results_serialize_without_timing() {
        let r = finish(3, "x", Instant::now(), vec!["a".into()], true);
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"id":3,"name":"x","passed":true,"details":["a"]}"#);
    }
}
