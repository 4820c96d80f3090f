//! Runs the acceptance battery through the binary and checks the enumerated
//! orders against closed-form values computed here.
//!
//! Criterion 2 asks for order/24 coprime to 6, but the orders are 72, 216 and
//! 360, so order/24 = 6k + 3 is always divisible by 3. Criterion 8 requires
//! every other criterion to pass. Both are reported as failures and expected
//! to stay that way; an unexpected pass is an error too.

use std::process::{Command, ExitCode};

use knotfill::closures::{magnus_pair_report, Limits};
use knotfill::fpgroup::{group_order, Order};
use knotfill::knotpres::{filling_presentation, torus_knot, Slope};
use knotfill::suite::{near_cabling_slopes, small_torus_knots};
use num_integer::Integer;
use serde_json::Value;

const EXPECTED_FAILURES: [u64; 2] = [2, 8];

struct Tally {
    unexpected: usize,
}

impl Tally {
    fn line(&mut self, label: &str, name: &str, passed: bool, expect_pass: bool, note: &str) {
        let status = if passed { "PASS" } else { "FAIL" };
        let tag = match (passed, expect_pass) {
            (true, true) => "",
            (false, false) => " (expected)",
            _ => {
                self.unexpected += 1;
                " (UNEXPECTED)"
            }
        };
        if note.is_empty() {
            println!("{label:<12} {status}{tag}  {name}");
        } else {
            println!("{label:<12} {status}{tag}  {name}: {note}");
        }
    }
}

/// `4 |m| P / N^2` where `chi = N / P` is the orbifold Euler characteristic of
/// `S2(|p|, |q|, d)`; `None` unless the base is spherical.
fn spherical_order(p: i64, q: i64, m: i64, d: i64) -> Option<u64> {
    let (p, q) = (p.abs(), q.abs());
    let big_p = p * q * d;
    let n = q * d + p * d + p * q - big_p;
    if n <= 0 {
        return None;
    }
    let num = 4 * m.abs() * big_p;
    assert_eq!(num % (n * n), 0, "T({p},{q}) d={d}: non-integral order");
    Some((num / (n * n)) as u64)
}

fn main() -> ExitCode {
    let mut tally = Tally { unexpected: 0 };

    let out = Command::new(env!("CARGO_BIN_EXE_knotfill"))
        .args(["--json", "paper-suite"])
        .env_remove("KNOTFILL_MAX_COSETS")
        .env_remove("KNOTFILL_SEED")
        .output()
        .expect("run knotfill");
    let doc: Value = serde_json::from_slice(&out.stdout).expect("paper-suite json");
    let criteria = doc["result"]["criteria"].as_array().expect("criteria");
    let all_passed = doc["result"]["all_passed"].as_bool().expect("all_passed");
    for c in criteria {
        let id = c["id"].as_u64().unwrap();
        let name = c["name"].as_str().unwrap();
        let passed = c["passed"].as_bool().unwrap();
        let note = if passed {
            String::new()
        } else {
            c["details"].as_array().unwrap().iter().filter_map(Value::as_str).collect::<Vec<_>>().join("; ")
        };
        tally.line(&format!("criterion {id}"), name, passed, !EXPECTED_FAILURES.contains(&id), &note);
    }
    if criteria.len() != 8 {
        println!("expected 8 criteria, got {}", criteria.len());
        tally.unexpected += 1;
    }
    let code = out.status.code();
    let exit_ok = code == Some(if all_passed { 0 } else { 1 });
    tally.line("exit status", "paper-suite exit status tracks its table", exit_ok, true, &format!("{code:?}"));
    tally.line("exit status", "paper-suite exits 0", code == Some(0), false, &format!("{code:?}"));

    // spherical fillings of small torus knots: enumeration against 4|e|/chi^2
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for (p, q) in small_torus_knots() {
        let k = torus_knot(p, q).unwrap();
        for r in near_cabling_slopes(p, q) {
            let d = (p * q * r.n() - r.m()).abs();
            let want = match d {
                1 => Some(r.m().unsigned_abs()),
                _ => spherical_order(p, q, r.m(), d),
            };
            let Some(want) = want else { continue };
            checked += 1;
            let got = group_order(&filling_presentation(&k, r), 1_000_000).unwrap();
            if got != Order::Finite(want) {
                mismatches.push(format!("T({p},{q})({r}) {got} vs {want}"));
            }
        }
    }
    tally.line(
        "oracle",
        "finite filling orders match 4|e|/chi^2",
        mismatches.is_empty() && checked > 300,
        true,
        &format!("{checked} slopes, mismatches {mismatches:?}"),
    );

    // S2(k; 1/3, -1/3, 1/2): |e| = k + 1/2, chi = 1/6, so the order is 144k + 72
    let mut magnus = Vec::new();
    let mut magnus_ok = true;
    for k in 0..=2i64 {
        let want = (144 * k + 72) as u64;
        let rep = magnus_pair_report(k, Limits::default()).unwrap();
        let orders: Vec<u64> = rep.sides.iter().map(|s| s.seifert_order.finite().unwrap_or(0)).collect();
        let h1 = 18 * k + 9;
        magnus_ok &= orders == [want, want] && rep.sides.iter().all(|s| s.slope.m() == h1);
        magnus.push(format!("k={k}: {orders:?} want {want}, order/24 = {} with gcd(.,6) = {}", want / 24, (want / 24).gcd(&6)));
    }
    tally.line("oracle", "trefoil family orders are 144k + 72", magnus_ok, true, &magnus.join("; "));

    let lens = Slope::new(7, 1).unwrap();
    let seven = group_order(&filling_presentation(&torus_knot(3, 2).unwrap(), lens), 1000).unwrap();
    tally.line("oracle", "T(3,2)(7) is cyclic of order 7", seven == Order::Finite(7), true, "");

    if tally.unexpected == 0 {
        println!("acceptance: all results as expected");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} unexpected result(s)", tally.unexpected);
        ExitCode::FAILURE
    }
}
