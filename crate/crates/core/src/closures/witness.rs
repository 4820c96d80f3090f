use serde::{Deserialize, Serialize};

use super::{torus_word_problem, ClosureError, Limits, NormalForm};
use crate::fpgroup::{inverse_letter, regular_table, CosetTable, Letter, Order, Truth, Word};
use crate::knotpres::{filling_presentation, slope_element, KnotKind, MarkedKnotGroup, Slope};

/// Finite non-abelian fillings used to see that a pretzel word is nontrivial.
const PRETZEL_PROBES: [([i64; 3], i64); 3] = [([-2, 3, 7], 17), ([-2, 3, 9], 22), ([-2, 3, 9], 23)];

/// `g_m = [r_m, y_m]` with `y_m = a_m g_(m-1) a_m^-1` and `y_1 = a_1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessStep {
    pub slope: Slope,
    pub conjugator: Word,
    pub conjugator_text: String,
    /// Conjugators rejected before this one.
    pub rejected: usize,
    pub element_length: usize,
}

/// What the filling at one of the input slopes does to the witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillingCheck {
    pub slope: Slope,
    pub order: Order,
    pub witness_trivial: Truth,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub knot: String,
    pub slopes: Vec<Slope>,
    pub budget: usize,
    pub word: Word,
    pub length: usize,
    pub exponent_sum: i64,
    pub steps: Vec<WitnessStep>,
    /// Torus knots: the normal form, which is not the identity.
    pub normal_form: Option<NormalForm>,
    /// Other knots: a finite filling on which the witness acts nontrivially.
    pub probe: Option<Slope>,
    /// For each `i`, why `g_n` lies in `<<r_i>>`.
    pub memberships: Vec<String>,
    pub fillings: Vec<FillingCheck>,
}

impl Witness {
    /// Rebuilds `g_n` from the recorded conjugators.
    pub fn verify_structure(&self, k: &MarkedKnotGroup) -> bool {
        self.steps.len() == self.slopes.len() && build(k, &self.steps) == self.word
    }
}

fn build(k: &MarkedKnotGroup, steps: &[WitnessStep]) -> Word {
    let mut g: Option<Word> = None;
    for s in steps {
        g = Some(step(k, s.slope, &s.conjugator, g.as_ref()));
    }
    g.unwrap_or_default()
}

fn step(k: &MarkedKnotGroup, r: Slope, a: &Word, prev: Option<&Word>) -> Word {
    let y = match prev {
        None => a.clone(),
        Some(g) => g.conjugate_by(a),
    };
    Word::commutator(&slope_element(k, r), &y)
}

/// Nonempty freely reduced words over `ngens` generators of length `len`,
/// in lexicographic order of letters `x0, x0^-1, x1, x1^-1, ...`.
fn reduced_words(ngens: usize, len: usize, mut visit: impl FnMut(&[Letter]) -> bool) -> bool {
    fn go(ngens: usize, len: usize, cur: &mut Vec<Letter>, visit: &mut dyn FnMut(&[Letter]) -> bool) -> bool {
        if cur.len() == len {
            return visit(cur);
        }
        for x in 0..(2 * ngens) as Letter {
            if cur.last().is_some_and(|&l| inverse_letter(l) == x) {
                continue;
            }
            cur.push(x);
            if go(ngens, len, cur, visit) {
                return true;
            }
            cur.pop();
        }
        false
    }
    go(ngens, len, &mut Vec::with_capacity(len), &mut visit)
}

enum Checker {
    Torus(i64, i64),
    Probes(Vec<(Slope, CosetTable)>),
}

impl Checker {
    /// `Some(probe)` when `g` is seen to be nontrivial.
    fn nontrivial(&self, g: &Word) -> Result<Option<Option<Slope>>, ClosureError> {
        Ok(match self {
            Checker::Torus(p, q) => (!torus_word_problem(*p, *q, g)?.is_identity()).then_some(None),
            Checker::Probes(tables) => tables.iter().find(|(_, t)| !t.is_identity(g)).map(|(s, _)| Some(*s)),
        })
    }
}

/// Builds `g_n`, a nontrivial element of every `<<r_i>>`, searching
/// conjugators by length then lexicographically up to `budget` letters.
pub fn intersection_witness(
    k: &MarkedKnotGroup,
    slopes: &[Slope],
    budget: usize,
    limits: Limits,
) -> Result<Witness, ClosureError> {
    if slopes.is_empty() {
        return Err(ClosureError::Precondition("slope list is empty".into()));
    }
    let checker = match k.kind() {
        KnotKind::Torus { p, q } => {
            if slopes.contains(&Slope::integer(p * q)) {
                return Err(ClosureError::Precondition(format!("the cabling slope {} is excluded", p * q)));
            }
            Checker::Torus(p, q)
        }
        KnotKind::Pretzel(t) => {
            let mut tables = Vec::new();
            for (_, m) in PRETZEL_PROBES.iter().filter(|(pt, m)| *pt == t && !slopes.contains(&Slope::integer(*m))) {
                let r = Slope::integer(*m);
                if let Some(table) = regular_table(&filling_presentation(k, r), limits.max_cosets)? {
                    tables.push((r, table));
                }
            }
            if tables.is_empty() {
                return Err(ClosureError::Precondition(format!("no finite probe filling for {}", k.label())));
            }
            Checker::Probes(tables)
        }
    };

    let names = k.presentation().generators();
    let ngens = k.presentation().ngens();
    let mut steps: Vec<WitnessStep> = Vec::new();
    let mut g: Option<Word> = None;
    let mut probe = None;
    for &r in slopes {
        let mut found: Option<(Word, Word, usize)> = None;
        let mut rejected = 0usize;
        let mut failure: Option<ClosureError> = None;
        for len in 1..=budget {
            let hit = reduced_words(ngens, len, |letters| {
                let a = Word::from_letters(letters);
                let candidate = step(k, r, &a, g.as_ref());
                match checker.nontrivial(&candidate) {
                    Ok(Some(pr)) => {
                        probe = pr;
                        found = Some((a, candidate, rejected));
                        true
                    }
                    Ok(None) => {
                        rejected += 1;
                        false
                    }
                    Err(e) => {
                        failure = Some(e);
                        true
                    }
                }
            });
            if let Some(e) = failure {
                return Err(e);
            }
            if hit {
                break;
            }
        }
        let Some((a, next, rejected)) = found else {
            return Err(ClosureError::BudgetExhausted { budget });
        };
        steps.push(WitnessStep {
            slope: r,
            conjugator_text: a.display_with(names).to_string(),
            conjugator: a,
            rejected,
            element_length: next.len(),
        });
        g = Some(next);
    }
    let word = g.expect("slopes is nonempty");

    let n = steps.len();
    let memberships = steps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let i = i + 1;
            let mut text = format!("g_{i} = r_{i} * (y_{i} r_{i}^-1 y_{i}^-1) lies in <<{}>>", s.slope);
            if i < n {
                text.push_str(&format!(
                    "; g_{n} = (r_j y_j r_j^-1) * y_j^-1 for j > {i} is a product of conjugates of g_(j-1)^+-1"
                ));
            }
            text
        })
        .collect();

    let mut fillings = Vec::new();
    for &r in slopes {
        let table = regular_table(&filling_presentation(k, r), limits.max_cosets)?;
        fillings.push(FillingCheck {
            slope: r,
            order: table.as_ref().map_or(Order::Unknown, |t| Order::Finite(t.rows() as u64)),
            witness_trivial: match &table {
                Some(t) if t.is_identity(&word) => Truth::True,
                Some(_) => Truth::False,
                None => Truth::Unknown,
            },
        });
    }

    let normal_form = match checker {
        Checker::Torus(p, q) => Some(torus_word_problem(p, q, &word)?),
        Checker::Probes(_) => None,
    };
    Ok(Witness {
        knot: k.label(),
        slopes: slopes.to_vec(),
        budget,
        length: word.len(),
        exponent_sum: word.weighted_sum(k.weights()),
        word,
        steps,
        normal_form,
        probe,
        memberships,
        fillings,
    })
}
