//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use selfsim::constructions::{C2Extension, DirectProduct, EconomicalPower, Lamplighter};
use selfsim::engine::{act_vertex, coset_index, states, StateStatus};
use selfsim::padic::{alpha_stream, eta_digits, eta_value, make_eta, DigitWord, Eta, EtaSpec, Padic2};
use selfsim::verification::{
    action_axioms, block_chi_check, check_corefree_desk, derivation_identity_holds,
    level_transitivity_check, random_element, transversal_checks, IntMatrix, IntPoly,
};
use selfsim::{AddingMachine, Machine, Vect, ZOmegaMachine};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SEEDED: &str = "seed:0xC0FFEE:128";

fn eta(s: &str) -> Eta {
    make_eta(&s.parse::<EtaSpec>().unwrap()).unwrap()
}

/// 2-adic valuation by repeated halving; `None` for zero.
fn v2(r: &BigRational) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    let two = BigInt::from(2);
    let (mut n, mut d) = (r.numer().clone(), r.denom().clone());
    let mut v = 0;
    while (&n % &two).is_zero() {
        n /= &two;
        v += 1;
    }
    while (&d % &two).is_zero() {
        d /= &two;
        v -= 1;
    }
    Some(v)
}

fn exact(p: &Padic2) -> &BigRational {
    p.as_exact().expect("exact value")
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num: i64 = rng.gen_range(-1_000_000..=1_000_000);
    let den: i64 = 2 * rng.gen_range(0..50_000) + 1;
    BigRational::new(num.into(), den.into())
}

/// Random `h ∈ H`: indices `0..8`, coefficients in `[-9, 9]`, `h_0` even.
fn random_h(rng: &mut ChaCha8Rng) -> Vect {
    let mut pairs: Vec<(usize, i64)> = vec![(0, 2 * rng.gen_range(-4..=4))];
    for i in 1..8 {
        if rng.gen_bool(0.6) {
            pairs.push((i, rng.gen_range(-9..=9)));
        }
    }
    Vect::from_pairs(pairs)
}

fn binary_increment(v: &[usize]) -> Vec<usize> {
    let n = v.len();
    let value: u64 = v.iter().enumerate().map(|(i, &b)| (b as u64) << i).sum();
    let next = (value + 1) % (1u64 << n);
    (0..n).map(|i| ((next >> i) & 1) as usize).collect()
}

fn c1_odometer() -> Outcome {
    let m = AddingMachine::new();
    for x in 0u64..4096 {
        let v: Vec<usize> = (0..12).map(|i| ((x >> i) & 1) as usize).collect();
        let got = act_vertex(&m, &v, &1).map_err(|e| e.to_string())?;
        if got != binary_increment(&v) {
            return Err(format!("vertex {v:?} maps to {got:?}"));
        }
    }
    Ok("4096 vertices of depth 12 match binary increment".into())
}

fn c2_round_trip() -> Outcome {
    let mut checked = 0;
    for spec in ["int:2", "int:6", "int:-2"] {
        let e = eta(spec);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let a = random_rational(&mut rng);
            let pa = Padic2::from_ratio(a.clone()).unwrap();
            let w = eta_digits(&pa, &e, 64).map_err(|e| e.to_string())?;
            let back = eta_value(&w, &e);
            let diff = a.clone() - exact(&back);
            if v2(&diff).is_some_and(|v| v < 64) {
                return Err(format!("{spec}: {a} -> {w}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} values, v2(difference) >= 64"))
}

fn c3_alpha() -> Outcome {
    for spec in ["int:6", SEEDED] {
        let s = alpha_stream(&eta(spec), 64).map_err(|e| e.to_string())?;
        if s.alpha(1) != Some(1) {
            return Err(format!("{spec}: alpha_1 = {:?}", s.alpha(1)));
        }
        for k in 1..=64 {
            let p = s.value(k).unwrap();
            if p.parity().map_err(|e| e.to_string())? != 0 {
                return Err(format!("{spec}: p_{k}(1/eta) is odd"));
            }
        }
    }
    Ok("p_k(1/eta) even for 1 <= k <= 64, alpha_1 = 1, both etas".into())
}

fn c4_intertwining() -> Outcome {
    for (spec, digits) in [("int:6", None), (SEEDED, Some(96u32))] {
        let e = eta(spec);
        let m = ZOmegaMachine::new(e.clone(), 8).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let h = random_h(&mut rng);
            let lhs = m.iota(&m.apply_f(&h).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let rhs = m.iota(&h).and_then(|x| x.div_eta(&e)).map_err(|e| e.to_string())?;
            let ok = match digits {
                None => lhs == rhs,
                Some(n) => lhs.sub(&rhs).is_zero_mod_pow2(n).map_err(|e| e.to_string())?,
            };
            if !ok {
                return Err(format!("{spec}: h = {h}"));
            }
        }
    }
    Ok("200 elements, zero mismatches (exact / 96 digits)".into())
}

fn c5_boundary() -> Outcome {
    let e = eta("int:6");
    let m = ZOmegaMachine::new(e.clone(), 8).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let g = Vect::from_pairs((0..8).map(|i| (i, rng.gen_range(-9i64..=9))));
        let v: Vec<u8> = (0..32).map(|_| rng.gen_range(0..2)).collect();
        let v = DigitWord::new(v).unwrap();
        let got = act_vertex(&m, &v.to_vertex(), &g).map_err(|e| e.to_string())?;
        let target = eta_value(&v, &e).add(&m.iota(&g).map_err(|e| e.to_string())?);
        let expect = eta_digits(&target, &e, 32).map_err(|e| e.to_string())?;
        if got != expect.to_vertex() {
            return Err(format!("g = {g}, v = {v}"));
        }
    }
    Ok("1000 pairs at depth 32, zero mismatches".into())
}

fn c6_faithfulness() -> Outcome {
    let m = ZOmegaMachine::new(eta(SEEDED), 4).map_err(|e| e.to_string())?;
    let mut count = 0;
    for code in 1..7u32.pow(5) {
        let coeffs: Vec<i64> = (0..5).map(|i| ((code / 7u32.pow(i)) % 7) as i64 - 3).collect();
        let g = Vect::from_dense(&coeffs);
        if g.is_zero() {
            continue;
        }
        count += 1;
        if selfsim::engine::is_trivial_to_depth(&m, &g, 48).map_err(|e| e.to_string())? {
            return Err(format!("{g} is trivial to depth 48"));
        }
    }
    Ok(format!("{count} nonzero vectors on indices 0..=4, none trivial by depth 48"))
}

fn c7_state_growth() -> Outcome {
    let m = ZOmegaMachine::new(eta(SEEDED), 4).map_err(|e| e.to_string())?;
    let s = states(&m, &Vect::basis(0), 200).map_err(|e| e.to_string())?;
    if s.status != StateStatus::BudgetExhausted || s.len() < 50 {
        return Err(format!("e0: {} states, {}", s.len(), s.status));
    }
    let a = states(&AddingMachine::new(), &1, 200).map_err(|e| e.to_string())?;
    if a.elements != vec![1, 0] || !a.is_closed() {
        return Err(format!("adding +1: {:?} {}", a.elements, a.status));
    }
    Ok(format!("e0: {} states, {}; adding +1: {{+1, 0}} closed", s.len(), s.status))
}

fn construction_suite<M: Machine>(name: &str, m: &M) -> Result<(), String> {
    let mut checks = action_axioms(m, 500, 8, 8).map_err(|e| e.to_string())?;
    checks.extend(transversal_checks(m, 500, 8).map_err(|e| e.to_string())?);
    for c in checks {
        if !c.passed {
            return Err(format!("{name}: {c}"));
        }
    }
    let bad = check_corefree_desk(m, 3, 10).map_err(|e| e.to_string())?;
    if let Some(g) = bad.first() {
        return Err(format!("{name}: {g} trivial to depth 10"));
    }
    Ok(())
}

fn c8_constructions() -> Outcome {
    construction_suite(
        "adding x adding",
        &DirectProduct::new(AddingMachine::new(), AddingMachine::new()),
    )?;
    construction_suite(
        "economical(adding, 3)",
        &EconomicalPower::new(AddingMachine::new(), 3).unwrap(),
    )?;
    construction_suite("c2(adding)", &C2Extension::new(AddingMachine::new()))?;
    construction_suite(
        "lamplighter(adding, 2)",
        &Lamplighter::new(AddingMachine::new(), 2).unwrap(),
    )?;
    Ok("4 constructions: axioms, transversal, desk core-freeness".into())
}

fn pairwise_distinct_cosets<M: Machine>(m: &M) -> Result<bool, String> {
    let ts = m.transversal();
    for (i, s) in ts.iter().enumerate() {
        for t in &ts[i + 1..] {
            if m.in_h(&m.mul(s, &m.inv(t))).map_err(|e| e.to_string())? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Moves a random element into the domain: `x · t_j^{-1}` with `j` its coset.
fn random_domain_element<M: Machine>(m: &M, rng: &mut ChaCha8Rng) -> Result<M::Elem, String> {
    let x = random_element(m, rng, 8);
    let j = coset_index(m, &x).map_err(|e| e.to_string())?;
    Ok(m.mul(&x, &m.inv(&m.transversal()[j])))
}

fn c9_wreath() -> Outcome {
    let base = AddingMachine::new();
    let m = Lamplighter::new(AddingMachine::new(), 2).unwrap();
    let a = m.lamp(1);
    let s = states(&m, &a, 100).map_err(|e| e.to_string())?;
    if !s.is_closed() || s.elements != vec![a.clone(), m.identity()] {
        return Err(format!("states of the lamp: {:?}", s.elements));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let g: i64 = rng.gen_range(-1000..=1000);
        let ours = states(&m, &m.embed(g), 500).map_err(|e| e.to_string())?;
        let theirs = states(&base, &g, 500).map_err(|e| e.to_string())?;
        let embedded: Vec<_> = theirs.elements.iter().map(|&x| m.embed(x)).collect();
        if ours.elements != embedded || ours.status != theirs.status {
            return Err(format!("base element {g}: state sets differ"));
        }
    }
    for _ in 0..1000 {
        let h = random_domain_element(&m, &mut rng)?;
        if let Err(e) = m.apply_f(&h) {
            return Err(format!("f({h}): {e}"));
        }
    }
    if m.transversal().len() != 4 || !pairwise_distinct_cosets(&m)? {
        return Err("transversal is not 4 distinct cosets".into());
    }
    Ok("lamp states {a, 1}; 10 base state sets unchanged; 1000 fiber checks; 4 cosets".into())
}

/// The displayed formula on dense coordinates.
fn c2_formula(a: &BTreeMap<usize, i64>) -> BTreeMap<usize, i64> {
    let top = a.keys().max().copied().unwrap_or(0) + 2;
    let get = |i: usize| a.get(&i).copied().unwrap_or(0);
    let mut out = BTreeMap::new();
    out.insert(0, get(0) / 2);
    let mut i = 1;
    while i <= top {
        out.insert(i, get(i + 1));
        out.insert(i + 1, get(i));
        i += 2;
    }
    out.retain(|_, v| *v != 0);
    out
}

fn c10_c2() -> Outcome {
    let m = C2Extension::new(AddingMachine::new());
    let s = m.sigma();
    if m.mul(&s, &s) != m.identity() {
        return Err("sigma^2 != 1".into());
    }
    if m.transversal().len() != 4 || !pairwise_distinct_cosets(&m)? {
        return Err("transversal is not 4 distinct cosets".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        let mut dense: BTreeMap<usize, i64> = BTreeMap::new();
        dense.insert(0, 2 * rng.gen_range(-5..=5));
        for i in 1..7 {
            dense.insert(i, rng.gen_range(-5..=5));
        }
        dense.retain(|_, v| *v != 0);
        let h = m.from_coords(dense.iter().map(|(&i, &v)| (i, v)));
        let got = m.apply_f(&h).map_err(|e| e.to_string())?;
        let expect = m.from_coords(c2_formula(&dense));
        if got != expect {
            return Err(format!("f({h}) = {got}, expected {expect}"));
        }
    }
    Ok("sigma^2 = 1; 4 distinct cosets; formula on 100 domain elements".into())
}

mod dense {
    //! Plain nested-vector matrices, independent of the library's IntMatrix.
    pub type M = Vec<Vec<i64>>;

    pub fn zero(r: usize, c: usize) -> M {
        vec![vec![0; c]; r]
    }

    pub fn id(n: usize) -> M {
        (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
    }

    pub fn mul(a: &M, b: &M, inner: usize, cols: usize) -> M {
        a.iter()
            .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect())
            .collect()
    }

    pub fn add(a: &M, b: &M) -> M {
        a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect()).collect()
    }

    pub fn scale(a: &M, k: i64) -> M {
        a.iter().map(|r| r.iter().map(|x| x * k).collect()).collect()
    }

    pub fn pow(a: &M, n: usize) -> M {
        let d = a.len();
        (0..n).fold(id(d), |acc, _| mul(&acc, a, d, d))
    }

    /// `Σ c_i A^i`, term by term.
    pub fn poly(c: &[i64], a: &M) -> M {
        let d = a.len();
        c.iter()
            .enumerate()
            .fold(zero(d, d), |acc, (i, &ci)| add(&acc, &scale(&pow(a, i), ci)))
    }
}

fn c11_block_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..200 {
        let deg = rng.gen_range(1..=4usize);
        let n1 = rng.gen_range(1..=4usize);
        let n = rng.gen_range(0..=3u32);
        let mut coeffs: Vec<i64> = (0..deg).map(|_| rng.gen_range(-3..=3)).collect();
        coeffs.push(1);
        let g: dense::M = (0..n1).map(|_| (0..deg).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let f1: dense::M = (0..n1).map(|_| (0..n1).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let chi = IntPoly::new(coeffs.clone());
        let gm = IntMatrix::from_rows(&g).unwrap();
        let f1m = IntMatrix::from_rows(&f1).unwrap();
        if !block_chi_check(&chi, &gm, &f1m, n).map_err(|e| e.to_string())? {
            return Err(format!("trial {trial}: block identity fails"));
        }
        if !derivation_identity_holds(&chi, &gm, &f1m).map_err(|e| e.to_string())? {
            return Err(format!("trial {trial}: f1 dchi != chi(f1) g + dchi f0"));
        }
        // oracle: companion matrix, double-sum dχ, χ evaluated term by term
        let mut f0 = dense::zero(deg, deg);
        for i in 0..deg - 1 {
            f0[i][i + 1] = 1;
        }
        for j in 0..deg {
            f0[deg - 1][j] = -coeffs[j];
        }
        let mut dchi = dense::zero(n1, deg);
        for (i, &c) in coeffs.iter().enumerate().skip(1) {
            for j in 0..i {
                let term = dense::mul(
                    &dense::mul(&dense::pow(&f1, j), &g, n1, deg),
                    &dense::pow(&f0, i - 1 - j),
                    deg,
                    deg,
                );
                dchi = dense::add(&dchi, &dense::scale(&term, c));
            }
        }
        let size = deg + n1;
        let mut f = dense::zero(size, size);
        for i in 0..deg {
            f[i][..deg].copy_from_slice(&f0[i]);
        }
        for i in 0..n1 {
            f[deg + i][..deg].copy_from_slice(&g[i]);
            f[deg + i][deg..].copy_from_slice(&f1[i]);
        }
        let lhs = dense::mul(&dense::poly(&coeffs, &f), &dense::pow(&f, n as usize), size, size);
        let f1n = dense::pow(&f1, n as usize);
        let lower_left = dense::mul(&f1n, &dchi, n1, deg);
        let lower_right = dense::mul(&f1n, &dense::poly(&coeffs, &f1), n1, n1);
        let mut rhs = dense::zero(size, size);
        for i in 0..n1 {
            rhs[deg + i][..deg].copy_from_slice(&lower_left[i]);
            rhs[deg + i][deg..].copy_from_slice(&lower_right[i]);
        }
        if lhs != rhs {
            return Err(format!("trial {trial}: direct evaluation disagrees"));
        }
    }
    Ok("200 random instances, block and intermediate identities hold".into())
}

fn c12_transitivity() -> Outcome {
    if !level_transitivity_check(&AddingMachine::new(), 10).map_err(|e| e.to_string())? {
        return Err("adding machine not transitive at depth 10".into());
    }
    let m = ZOmegaMachine::new(eta("int:6"), 4).map_err(|e| e.to_string())?;
    if !level_transitivity_check(&m, 8).map_err(|e| e.to_string())? {
        return Err("Z^(omega), eta = 6, not transitive at depth 8".into());
    }
    Ok("adding depth 10 (1024), Z^(omega) eta=6 depth 8 (256)".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("odometer exactness", c1_odometer),
        ("base-eta round trip", c2_round_trip),
        ("alpha-stream soundness", c3_alpha),
        ("intertwining oracle", c4_intertwining),
        ("boundary translation", c5_boundary),
        ("faithfulness probe", c6_faithfulness),
        ("state growth", c7_state_growth),
        ("construction suites", c8_constructions),
        ("lamplighter specifics", c9_wreath),
        ("C2 extension specifics", c10_c2),
        ("block identity", c11_block_identity),
        ("level transitivity", c12_transitivity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({ms} ms)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({ms} ms)", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
