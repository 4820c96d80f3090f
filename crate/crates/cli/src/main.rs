use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use clap::builder::FalseyValueParser;
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand};
use knotfill::closures::{
    classify_torus_surgery, closure_finitely_generated, cyclic_chain, fiber_order_in_filling, finite_chain_step,
    finite_finite_family, inclusion_certificate, intersection_witness, magnus_pair_report,
    meridian_order_in_filling, CheckStatus, ClosureError, Limits, Verdict,
};
use knotfill::fpgroup::{abelianization, group_order, Order, Truth};
use knotfill::knotpres::{filling_presentation, parse_knot, MarkedKnotGroup, Slope};
use knotfill::seifert::{sfs_pi1, torus_surgery_invariant};
use knotfill::suite::{self, SuiteConfig};
use serde::Serialize;
use serde_json::{json, Value};

const SCHEMA: &str = "knotfill/1";

#[derive(Parser)]
#[command(name = "knotfill", version, about = "Dehn fillings of knot groups and normal closures of slopes")]
struct Cli {
    /// Most live cosets any single enumeration may hold.
    #[arg(long, global = true, env = "KNOTFILL_MAX_COSETS", default_value_t = 1_000_000,
          value_parser = clap::value_parser!(u64).range(1..))]
    max_cosets: u64,
    /// Print one JSON document instead of text.
    #[arg(long, global = true, env = "KNOTFILL_JSON", value_parser = FalseyValueParser::new())]
    json: bool,
    /// Seed for the randomized checks in paper-suite.
    #[arg(long, global = true, env = "KNOTFILL_SEED", default_value_t = 0)]
    seed: u64,
    /// Longest conjugator the witness search tries.
    #[arg(long, global = true, env = "KNOTFILL_BUDGET", default_value_t = 6)]
    budget: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the filling of a torus knot.
    Classify { knot: Knot, #[arg(allow_hyphen_values = true)] slope: Slope },
    /// Order of the filled group.
    Order { knot: Knot, #[arg(allow_hyphen_values = true)] slope: Slope },
    /// Order of the meridian in the filled group.
    MeridianOrder { knot: Knot, #[arg(allow_hyphen_values = true)] slope: Slope },
    /// Order of the central element t = a^p in a filled torus knot group.
    FiberOrder { knot: Knot, #[arg(allow_hyphen_values = true)] slope: Slope },
    /// Certificate for <<r'>> contained in <<r>>.
    Include {
        knot: Knot,
        #[arg(allow_hyphen_values = true)]
        r: Slope,
        #[arg(allow_hyphen_values = true)]
        r_prime: Slope,
    },
    /// Descending chains of normal closures.
    #[command(subcommand)]
    Chain(ChainCommand),
    /// The trefoil fillings (18k+9)/(3k+1) and (18k+9)/(3k+2).
    MagnusPair { k: i64 },
    /// A nontrivial element lying in every <<r_i>>.
    Witness {
        knot: Knot,
        #[arg(required = true, allow_hyphen_values = true)]
        slopes: Vec<Slope>,
    },
    /// Abelian invariants of the filled group.
    Abelianize { knot: Knot, #[arg(allow_hyphen_values = true)] slope: Slope },
    /// Seifert invariant of a filled torus knot.
    Seifert { knot: Knot, #[arg(allow_hyphen_values = true)] slope: Slope },
    /// Run every acceptance check and print a pass/fail table.
    PaperSuite,
}

#[derive(Subcommand)]
enum ChainCommand {
    /// pq + 1/n_i with n_(i+1) = (pq+1) n_i + 1.
    Cyclic {
        knot: Knot,
        #[arg(allow_hyphen_values = true)]
        n0: i64,
        depth: usize,
    },
    /// Steps (m(f+1) + df) / (n(f+1)) from a non-cyclic finite slope.
    Finite {
        knot: Knot,
        #[arg(allow_hyphen_values = true)]
        slope: Slope,
        steps: usize,
    },
    /// m/(kn) for each k, certified against m/n.
    Family {
        knot: Knot,
        #[arg(allow_hyphen_values = true)]
        slope: Slope,
        #[arg(required = true, allow_hyphen_values = true)]
        k: Vec<i64>,
    },
}

/// A parsed and built knot, keeping the text it came from.
#[derive(Clone, Debug)]
struct Knot(MarkedKnotGroup);

impl std::str::FromStr for Knot {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        parse_knot(s).map(Knot).map_err(|e| e.to_string())
    }
}

impl Knot {
    fn label(&self) -> String {
        self.0.label()
    }

    fn torus(&self) -> Result<(i64, i64), Failure> {
        self.0.torus_params().ok_or_else(|| {
            Failure::Usage(format!("invalid value '{}' for '<KNOT>': needs a torus knot", self.label()))
        })
    }
}

enum Failure {
    Usage(String),
    Closure(ClosureError),
}

impl From<ClosureError> for Failure {
    fn from(e: ClosureError) -> Self {
        Failure::Closure(e)
    }
}

impl From<knotfill::seifert::SeifertError> for Failure {
    fn from(e: knotfill::seifert::SeifertError) -> Self {
        Failure::Closure(e.into())
    }
}

impl From<knotfill::fpgroup::FpError> for Failure {
    fn from(e: knotfill::fpgroup::FpError) -> Self {
        Failure::Closure(e.into())
    }
}

/// What a command computed: JSON inputs and result, the text form, and
/// whether anything was left undecided.
struct Outcome {
    command: &'static str,
    inputs: Value,
    result: Value,
    text: String,
    undecided: bool,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

fn knot_slope(knot: &Knot, slope: Slope) -> Value {
    json!({ "knot": knot.label(), "slope": slope })
}

fn order_outcome(command: &'static str, inputs: Value, order: Order) -> Outcome {
    Outcome { command, inputs, result: to_value(&order), text: order.to_string(), undecided: order == Order::Unknown }
}

fn certificate_text(c: &knotfill::closures::Certificate) -> String {
    let mut s = c.verdict.to_string();
    let e = &c.evidence;
    let _ = write!(s, "\n  reason: {:?}", e.reason);
    if let Some(h) = e.homology {
        let _ = write!(s, "\n  homology: {} divides {}: {}", h.m, h.m_prime, h.divides);
    }
    if let Some(f) = e.filling {
        let _ = write!(s, "\n  filling order {} ({} cosets defined, peak {})", f.order, f.cosets_defined, f.max_live);
    }
    if let Some(t) = e.r_prime_trivial {
        let _ = write!(s, "\n  slope element of {} trivial in filling: {t}", c.inputs.r_prime);
    }
    if let Some(o) = e.r_prime_order {
        let _ = write!(s, "\n  its order: {o}");
    }
    if let Some(mp) = e.meridian_power {
        let _ = write!(s, "\n  mu^{} trivial in filling: {}", mp.exponent, mp.trivial_in_filling);
    }
    s
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let limits = Limits::new(usize::try_from(cli.max_cosets).unwrap_or(usize::MAX));
    let max = limits.max_cosets;
    Ok(match &cli.command {
        Command::Classify { knot, slope } => {
            let (p, q) = knot.torus()?;
            let class = classify_torus_surgery(p, q, *slope)?;
            let fg = closure_finitely_generated(p, q, *slope)?;
            Outcome {
                command: "classify",
                inputs: knot_slope(knot, *slope),
                result: json!({ "class": class, "closure_finitely_generated": fg }),
                text: class.to_string(),
                undecided: false,
            }
        }
        Command::Order { knot, slope } => {
            order_outcome("order", knot_slope(knot, *slope), group_order(&filling_presentation(&knot.0, *slope), max)?)
        }
        Command::MeridianOrder { knot, slope } => {
            order_outcome("meridian-order", knot_slope(knot, *slope), meridian_order_in_filling(&knot.0, *slope, limits)?)
        }
        Command::FiberOrder { knot, slope } => {
            let (p, q) = knot.torus()?;
            order_outcome("fiber-order", knot_slope(knot, *slope), fiber_order_in_filling(p, q, *slope, limits)?)
        }
        Command::Include { knot, r, r_prime } => {
            let c = inclusion_certificate(&knot.0, *r, *r_prime, limits)?;
            Outcome {
                command: "include",
                inputs: json!({ "knot": knot.label(), "r": r, "r_prime": r_prime }),
                result: to_value(&c),
                text: certificate_text(&c),
                undecided: c.verdict == Verdict::Undecided,
            }
        }
        Command::Chain(ChainCommand::Cyclic { knot, n0, depth }) => {
            let (p, q) = knot.torus()?;
            let slopes = cyclic_chain(p, q, *n0, *depth)?;
            let mut links = Vec::new();
            let mut text = slopes.iter().map(Slope::to_string).collect::<Vec<_>>().join(" > ");
            for w in slopes.windows(2) {
                let c = inclusion_certificate(&knot.0, w[0], w[1], limits)?;
                let _ = write!(text, "\n  {} > {}: {}", w[0], w[1], c.verdict);
                links.push(c);
            }
            Outcome {
                command: "chain cyclic",
                undecided: links.iter().any(|c| c.verdict == Verdict::Undecided),
                inputs: json!({ "knot": knot.label(), "n0": n0, "depth": depth }),
                result: json!({ "slopes": slopes, "certificates": links }),
                text,
            }
        }
        Command::Chain(ChainCommand::Finite { knot, slope, steps }) => {
            let (p, q) = knot.torus()?;
            let mut r = *slope;
            let mut slopes = vec![r];
            let mut orders = Vec::new();
            let mut links = Vec::new();
            let mut text = String::new();
            let mut undecided = false;
            for _ in 0..*steps {
                let Order::Finite(f) = meridian_order_in_filling(&knot.0, r, limits)? else {
                    undecided = true;
                    let _ = writeln!(text, "{r}: meridian order unknown");
                    break;
                };
                let next = finite_chain_step(p, q, r, f)?;
                let c = inclusion_certificate(&knot.0, r, next, limits)?;
                let _ = writeln!(text, "{r} (f={f}) > {next}: {}", c.verdict);
                undecided |= c.verdict == Verdict::Undecided;
                orders.push(f);
                links.push(c);
                slopes.push(next);
                r = next;
            }
            Outcome {
                command: "chain finite",
                inputs: json!({ "knot": knot.label(), "slope": slope, "steps": steps }),
                result: json!({ "slopes": slopes, "meridian_orders": orders, "certificates": links }),
                text: text.trim_end().to_string(),
                undecided,
            }
        }
        Command::Chain(ChainCommand::Family { knot, slope, k }) => {
            let fill = filling_presentation(&knot.0, *slope);
            let table = knotfill::fpgroup::regular_table(&fill, max)?;
            let Some(table) = table else {
                return Ok(Outcome {
                    command: "chain family",
                    inputs: json!({ "knot": knot.label(), "slope": slope, "k": k }),
                    result: json!({ "filling_order": Order::Unknown }),
                    text: format!("{slope}: filling did not enumerate"),
                    undecided: true,
                });
            };
            let f = table.permutation_order(knot.0.meridian());
            // H1 of the filling is Z/|m|, so the group is cyclic iff it has that order
            let cyclic = table.rows() as u64 == slope.m().unsigned_abs();
            let mut text = format!("{slope}: order {}, meridian order {f}, cyclic {cyclic}", table.rows());
            let mut members = Vec::new();
            for &k in k {
                let target = finite_finite_family(*slope, f, k, cyclic)?;
                let c = inclusion_certificate(&knot.0, *slope, target, limits)?;
                let _ = write!(text, "\n  {target}: {}", c.verdict);
                members.push(c);
            }
            Outcome {
                command: "chain family",
                undecided: members.iter().any(|c| c.verdict == Verdict::Undecided),
                inputs: json!({ "knot": knot.label(), "slope": slope, "k": k }),
                result: json!({ "filling_order": table.rows(), "meridian_order": f, "cyclic": cyclic, "certificates": members }),
                text,
            }
        }
        Command::MagnusPair { k } => {
            let rep = magnus_pair_report(*k, limits)?;
            let mut text = String::new();
            for s in &rep.sides {
                let _ = writeln!(
                    text,
                    "{}: {} order {} (knot {}), order mod <h> {}, h order {}, h^{} trivial: {:?}",
                    s.slope, s.invariant, s.seifert_order, s.knot_order, s.quotient_by_h_order, s.h_order,
                    rep.h_power, s.h_power_trivial
                );
            }
            for c in &rep.inclusions {
                let _ = writeln!(text, "<<{}>> in <<{}>>: {}", c.inputs.r_prime, c.inputs.r, c.verdict);
            }
            for c in &rep.checks {
                let _ = writeln!(text, "  {:<32} {:?}", c.name, c.status);
            }
            Outcome {
                command: "magnus-pair",
                inputs: json!({ "k": k }),
                undecided: rep.checks.iter().any(|c| c.status == CheckStatus::Undecided),
                result: to_value(&rep),
                text: text.trim_end().to_string(),
            }
        }
        Command::Witness { knot, slopes } => {
            let w = intersection_witness(&knot.0, slopes, cli.budget, limits)?;
            let names = knot.0.presentation().generators();
            let mut text = format!("{}\n  length {}, exponent sum {}", w.word.display_with(names), w.length, w.exponent_sum);
            for s in &w.steps {
                let _ = write!(text, "\n  step {}: conjugator {} ({} rejected)", s.slope, s.conjugator_text, s.rejected);
            }
            if let Some(nf) = &w.normal_form {
                let _ = write!(text, "\n  normal form {nf}");
            }
            if let Some(p) = w.probe {
                let _ = write!(text, "\n  nontrivial in the {p} filling");
            }
            for m in &w.memberships {
                let _ = write!(text, "\n  {m}");
            }
            for f in &w.fillings {
                let _ = write!(text, "\n  filling {} (order {}): witness trivial {:?}", f.slope, f.order, f.witness_trivial);
            }
            Outcome {
                command: "witness",
                inputs: json!({ "knot": knot.label(), "slopes": slopes, "budget": cli.budget }),
                undecided: w.fillings.iter().any(|f| f.witness_trivial == Truth::Unknown),
                result: to_value(&w),
                text,
            }
        }
        Command::Abelianize { knot, slope } => {
            let ab = abelianization(&filling_presentation(&knot.0, *slope));
            Outcome {
                command: "abelianize",
                inputs: knot_slope(knot, *slope),
                result: json!({
                    "free_rank": ab.free_rank,
                    "torsion": ab.torsion.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "text": ab.to_string(),
                }),
                text: ab.to_string(),
                undecided: false,
            }
        }
        Command::Seifert { knot, slope } => {
            let (p, q) = knot.torus()?;
            let inv = torus_surgery_invariant(p, q, *slope)?;
            let normal = inv.normalize()?;
            let pres = sfs_pi1(&inv);
            Outcome {
                command: "seifert",
                inputs: knot_slope(knot, *slope),
                result: json!({
                    "invariant": inv.to_string(),
                    "normalized": normal.to_string(),
                    "multiplicities": inv.multiplicities(),
                    "euler_number": inv.euler_number().to_string(),
                    "presentation": pres.to_string(),
                }),
                text: format!(
                    "{inv}\n  normalized {normal}\n  multiplicities {:?}\n  euler number {}\n  {pres}",
                    inv.multiplicities(),
                    inv.euler_number()
                ),
                undecided: false,
            }
        }
        Command::PaperSuite => {
            let results = suite::run_all(SuiteConfig { limits, seed: cli.seed })?;
            let mut text = String::new();
            for c in &results {
                let _ = writeln!(
                    text,
                    "{:>2}  {}  {} ({:.2} s)",
                    c.id,
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.elapsed.as_secs_f64()
                );
                for d in &c.details {
                    let _ = writeln!(text, "      {d}");
                }
            }
            let all = results.iter().all(|c| c.passed);
            Outcome {
                command: "paper-suite",
                inputs: json!({}),
                result: json!({ "all_passed": all, "criteria": results }),
                text: text.trim_end().to_string(),
                undecided: !all,
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => Cli::command().error(ErrorKind::InvalidValue, msg).exit(),
        Err(Failure::Closure(e @ ClosureError::BudgetExhausted { .. })) => {
            eprintln!("undecided: {e}");
            return ExitCode::from(1);
        }
        Err(Failure::Closure(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = if cli.json {
        let doc = json!({
            "schema": SCHEMA,
            "command": outcome.command,
            "inputs": outcome.inputs,
            "config": { "max_cosets": cli.max_cosets, "seed": cli.seed, "budget": cli.budget },
            "result": outcome.result,
        });
        serde_json::to_string_pretty(&doc).expect("json values serialize")
    } else {
        outcome.text
    };
    // a closed pipe is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    if outcome.undecided {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
