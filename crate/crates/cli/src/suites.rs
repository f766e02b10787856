//! `verify` suites over a runtime-typed machine.

use num_bigint::BigInt;
use rand::Rng;

use selfsim::engine::{decompose, states};
use selfsim::padic::{eta_digits, eta_value};
use selfsim::verification::{
    action_axioms, commutation_check, corefree_check, level_transitivity_check, random_element,
    transversal_checks, trial_rng, CheckOutcome,
};
use selfsim::{Eta, Machine, Padic2, StateStatus};

use crate::dynamic::{AnyElem, AnyMachine, Kind};
use crate::CliError;

pub const SUITES: &[&str] = &[
    "action-axioms",
    "transversal",
    "corefree",
    "level-transitivity",
    "digits-roundtrip",
    "intertwining",
    "states",
    "commutation",
];

pub struct Params {
    pub depth: Option<usize>,
    pub trials: usize,
    pub seed: Option<u64>,
    pub length: usize,
    pub budget: usize,
}

impl Params {
    fn seed(&self, suite: &str) -> Result<u64, CliError> {
        self.seed
            .ok_or_else(|| CliError::Input(format!("suite `{suite}` is randomized and needs --seed")))
    }
}

pub fn run(m: &AnyMachine, suite: &str, p: &Params) -> Result<Vec<CheckOutcome>, CliError> {
    let out = match suite {
        "action-axioms" => action_axioms(m, p.trials, p.depth.unwrap_or(8), p.seed(suite)?)?,
        "transversal" => transversal_checks(m, p.trials, p.seed(suite)?)?,
        "corefree" => vec![corefree_check(m, p.length, p.depth.unwrap_or(10))?],
        "level-transitivity" => {
            let depth = p.depth.unwrap_or(8);
            let ok = level_transitivity_check(m, depth)?;
            let size = (m.degree() as u128)
                .checked_pow(depth as u32)
                .map_or_else(|| "too many".to_string(), |n| n.to_string());
            let detail = format!("depth {depth}, {size} vertices");
            vec![CheckOutcome {
                name: "level-transitivity".into(),
                passed: ok,
                detail: if ok { detail } else { format!("{detail}: not transitive") },
            }]
        }
        "digits-roundtrip" => vec![digits_roundtrip(eta_of(m, suite)?, p, p.seed(suite)?)?],
        "intertwining" => vec![intertwining(m, p.trials, p.seed(suite)?)?],
        "states" => state_closure(m, p.budget)?,
        "commutation" => vec![commutation_check(m, p.trials, p.depth.unwrap_or(8), p.seed(suite)?)?],
        other => {
            return Err(CliError::Input(format!(
                "unknown suite `{other}`; expected one of {}",
                SUITES.join(", ")
            )))
        }
    };
    Ok(out)
}

fn eta_of<'a>(m: &'a AnyMachine, suite: &str) -> Result<&'a Eta, CliError> {
    match m.kind() {
        Kind::Dyadic(d) => Ok(d.eta()),
        Kind::ZOmega(z) => Ok(z.eta()),
        _ => Err(CliError::Input(format!(
            "suite `{suite}` needs a dyadic or zomega machine"
        ))),
    }
}

/// Random rationals with odd denominator survive `digits` then `value`
/// modulo `2^n`.
fn digits_roundtrip(eta: &Eta, p: &Params, seed: u64) -> Result<CheckOutcome, CliError> {
    let n = p.depth.unwrap_or(match eta.precision() {
        Some(prec) => (prec as usize / 2).min(64),
        None => 64,
    });
    let (mut fails, mut first) = (0, None);
    for trial in 0..p.trials {
        let mut rng = trial_rng(seed, trial);
        let num: i64 = rng.gen_range(-1_000_000..=1_000_000);
        let den: i64 = 2 * rng.gen_range(0..50_000) + 1;
        let a = Padic2::rational(BigInt::from(num), BigInt::from(den))?;
        let w = eta_digits(&a, eta, n)?;
        let diff = a.sub(&eta_value(&w, eta));
        let bits = diff.precision().map_or(n as u32, |q| q.min(n as u32));
        if !diff.is_zero_mod_pow2(bits)? {
            fails += 1;
            first.get_or_insert_with(|| format!("{num}/{den} -> {w}"));
        }
    }
    Ok(CheckOutcome::new("digits-roundtrip", fails, p.trials, first))
}

/// `ι(f(h)) = ι(h)/η` on random elements of the domain.
fn intertwining(m: &AnyMachine, trials: usize, seed: u64) -> Result<CheckOutcome, CliError> {
    eta_of(m, "intertwining")?;
    let (mut fails, mut first) = (0, None);
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let mut h = random_element(m, &mut rng, 8);
        if !m.in_h(&h)? {
            h = m.mul(&h, &m.transversal()[1]);
        }
        let fh = m.apply_f(&h)?;
        let (lhs, rhs) = match (m.kind(), &h, &fh) {
            (Kind::ZOmega(z), AnyElem::Vect(h), AnyElem::Vect(fh)) => {
                (z.iota(fh)?, z.iota(h)?.div_eta(z.eta())?)
            }
            (Kind::Dyadic(d), AnyElem::Padic(h), AnyElem::Padic(fh)) => {
                (fh.clone(), h.div_eta(d.eta())?)
            }
            _ => unreachable!("eta_of admits only dyadic and zomega machines"),
        };
        let diff = lhs.sub(&rhs);
        let ok = match diff.precision() {
            None => diff.is_zero(),
            Some(bits) => diff.is_zero_mod_pow2(bits)?,
        };
        if !ok {
            fails += 1;
            first.get_or_insert_with(|| format!("h={h}"));
        }
    }
    Ok(CheckOutcome::new("intertwining", fails, trials, first))
}

/// State sets of the generators; a closed set must contain every
/// restriction of its members.
fn state_closure(m: &AnyMachine, budget: usize) -> Result<Vec<CheckOutcome>, CliError> {
    let mut out = Vec::new();
    for g in m.generators() {
        let s = states(m, &g.elem, budget)?;
        let mut stray = None;
        if s.status == StateStatus::Closed {
            'scan: for e in &s.elements {
                for r in decompose(m, e)?.restrictions {
                    if !s.contains(&r) {
                        stray = Some(format!("{e} restricts to {r}"));
                        break 'scan;
                    }
                }
            }
        }
        out.push(CheckOutcome {
            name: format!("states[{}]", g.name),
            passed: stray.is_none(),
            detail: stray.unwrap_or_else(|| format!("{} states, {}", s.len(), s.status)),
        });
    }
    Ok(out)
}
