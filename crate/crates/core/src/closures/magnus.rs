use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{inclusion_certificate, Certificate, ClosureError, Limits, Verdict};
use crate::fpgroup::{regular_table, CosetTable, Order, Truth, Word};
use crate::knotpres::{filling_presentation, fiber_word, torus_knot, Slope};
use crate::seifert::{sfs_pi1, torus_surgery_invariant, SeifertInvariant};

/// `(18k+9)/(3k+1)` and `(18k+9)/(3k+2)`.
pub fn magnus_slopes(k: i64) -> Result<[Slope; 2], ClosureError> {
    let m = k.checked_mul(18).and_then(|x| x.checked_add(9)).ok_or(ClosureError::Overflow)?;
    let n = k.checked_mul(3).ok_or(ClosureError::Overflow)?;
    Ok([Slope::new(m, n + 1)?, Slope::new(m, n + 2)?])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Undecided,
}

impl CheckStatus {
    fn of(x: Option<bool>) -> Self {
        match x {
            Some(true) => CheckStatus::Pass,
            Some(false) => CheckStatus::Fail,
            None => CheckStatus::Undecided,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MagnusCheck {
    pub name: String,
    pub status: CheckStatus,
}

/// One of the two fillings, seen from its Seifert presentation and from the
/// knot group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MagnusSide {
    pub slope: Slope,
    /// The presentation that is enumerated.
    pub presentation: String,
    /// `S2(+-k; 1/3, -1/3, +-1/2)`.
    pub invariant: String,
    /// The presentation, this invariant and the one computed from the slope
    /// all describe the same space up to orientation.
    pub matches_surgery_invariant: bool,
    pub seifert_order: Order,
    pub knot_order: Order,
    pub quotient_by_h_order: Order,
    pub h_order: Order,
    /// Order of `t = a^3` in the filled knot group.
    pub fiber_order: Order,
    pub h_power_trivial: Truth,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MagnusReport {
    pub k: i64,
    pub h_power: i64,
    pub sides: [MagnusSide; 2],
    /// `<<r2>> <= <<r1>>` and `<<r1>> <= <<r2>>`.
    pub inclusions: [Certificate; 2],
    pub checks: Vec<MagnusCheck>,
}

impl MagnusReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    pub fn check(&self, name: &str) -> Option<CheckStatus> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.status)
    }
}

/// The two fillings as Seifert presentations on `c1, c2, c3, c4, h`:
/// `[c_i, h]`, `c1^3 h^(3k+1)` (resp. `c1^3 h^(-3k-2)`), `c2^3 h^-1`,
/// `c3^2 h^-1`, `c4 h` and `c1 c2 c3 c4`.
pub fn magnus_invariants(k: i64) -> Result<[SeifertInvariant; 2], ClosureError> {
    let b = k.checked_mul(3).ok_or(ClosureError::Overflow)?;
    Ok([
        SeifertInvariant::new(0, [(3, b + 1), (3, -1), (2, -1), (1, 1)])?,
        SeifertInvariant::new(0, [(3, -b - 2), (3, -1), (2, -1), (1, 1)])?,
    ])
}

/// `S2(k; 1/3, -1/3, 1/2)` and `S2(-k; 1/3, -1/3, -1/2)`.
pub fn magnus_displayed_invariants(k: i64) -> Result<[SeifertInvariant; 2], ClosureError> {
    Ok([
        SeifertInvariant::new(k, [(3, 1), (3, -1), (2, 1)])?,
        SeifertInvariant::new(k.checked_neg().ok_or(ClosureError::Overflow)?, [(3, 1), (3, -1), (2, -1)])?,
    ])
}

fn side(
    slope: Slope,
    inv: &SeifertInvariant,
    displayed: &SeifertInvariant,
    h_power: i64,
    limits: Limits,
) -> Result<MagnusSide, ClosureError> {
    let matches_surgery_invariant =
        torus_surgery_invariant(3, 2, slope)?.equivalent(displayed)? && inv.equivalent(displayed)?;
    let sfs = sfs_pi1(inv);
    let h = Word::generator(inv.fibers().len());
    let table = regular_table(&sfs, limits.max_cosets)?;
    let order_of = |t: &Option<CosetTable>| t.as_ref().map_or(Order::Unknown, |t| Order::Finite(t.rows() as u64));
    let seifert_order = order_of(&table);
    let h_order = table.as_ref().map_or(Order::Unknown, |t| Order::Finite(t.permutation_order(&h)));
    let h_power_trivial = match &table {
        Some(t) if t.is_identity(&h.pow(h_power)) => Truth::True,
        Some(_) => Truth::False,
        None => Truth::Unknown,
    };
    let quotient = regular_table(&sfs.with_relator(h)?, limits.max_cosets)?;
    let knot = torus_knot(3, 2)?;
    let filled = regular_table(&filling_presentation(&knot, slope), limits.max_cosets)?;
    Ok(MagnusSide {
        slope,
        presentation: sfs.to_string(),
        invariant: displayed.to_string(),
        matches_surgery_invariant,
        seifert_order,
        knot_order: order_of(&filled),
        quotient_by_h_order: order_of(&quotient),
        h_order,
        fiber_order: filled.as_ref().map_or(Order::Unknown, |t| Order::Finite(t.permutation_order(&fiber_word(3)))),
        h_power_trivial,
    })
}

/// Compares the two trefoil fillings at `(18k+9)/(3k+1)` and `(18k+9)/(3k+2)`.
pub fn magnus_pair_report(k: i64, limits: Limits) -> Result<MagnusReport, ClosureError> {
    if k < 0 {
        return Err(ClosureError::Precondition("k must be nonnegative".into()));
    }
    let slopes = magnus_slopes(k)?;
    // magnus_slopes already checked 18k + 9, so this fits
    let h_power = 6 * k + 3;
    let invs = magnus_invariants(k)?;
    let shown = magnus_displayed_invariants(k)?;
    let sides = [
        side(slopes[0], &invs[0], &shown[0], h_power, limits)?,
        side(slopes[1], &invs[1], &shown[1], h_power, limits)?,
    ];
    let knot = torus_knot(3, 2)?;
    let inclusions = [
        inclusion_certificate(&knot, slopes[0], slopes[1], limits)?,
        inclusion_certificate(&knot, slopes[1], slopes[0], limits)?,
    ];

    let orders: Option<Vec<u64>> = sides.iter().map(|s| s.seifert_order.finite()).collect();
    let both = |f: &dyn Fn(&MagnusSide) -> Option<bool>| -> Option<bool> {
        let a = f(&sides[0])?;
        let b = f(&sides[1])?;
        Some(a && b)
    };
    let m = orders.as_ref().map(|o| o[0] / 24);
    let mut checks = Vec::new();
    let mut push = |name: &str, value: Option<bool>| checks.push(MagnusCheck { name: name.into(), status: CheckStatus::of(value) });
    push("invariants_match_surgery", Some(sides.iter().all(|s| s.matches_surgery_invariant)));
    push("orders_equal", orders.as_ref().map(|o| o[0] == o[1]));
    push("order_divisible_by_24", orders.as_ref().map(|o| o.iter().all(|x| x % 24 == 0)));
    push("order_over_24_coprime_to_6", m.map(|m| m.gcd(&6) == 1));
    push("quotient_by_h_is_12", both(&|s| s.quotient_by_h_order.finite().map(|o| o == 12)));
    push(
        "h_order_is_twice_order_over_24",
        both(&|s| Some(s.h_order.finite()? == 2 * s.seifert_order.finite()? / 24)),
    );
    push(
        "h_power_nontrivial",
        both(&|s| match s.h_power_trivial {
            Truth::True => Some(false),
            Truth::False => Some(true),
            Truth::Unknown => None,
        }),
    );
    push("knot_orders_match", both(&|s| Some(s.knot_order.finite()? == s.seifert_order.finite()?)));
    push("fiber_order_matches_h_order", both(&|s| Some(s.fiber_order.finite()? == s.h_order.finite()?)));
    let verdicts: Vec<Verdict> = inclusions.iter().map(|c| c.verdict).collect();
    push(
        "inclusions_fail_both_ways",
        if verdicts.contains(&Verdict::Undecided) { None } else { Some(verdicts.iter().all(|&v| v == Verdict::Fails)) },
    );
    Ok(MagnusReport { k, h_power, sides, inclusions, checks })
}
