use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use selfsim::engine::{act_vertex, decompose, states};
use selfsim::padic::make_eta;
use selfsim::{AddingMachine, DyadicMachine, Error, Eta, EtaSpec, Machine, Padic2, StateStatus, Vect, ZOmegaMachine};

const SEEDED: &str = "seed:0xC0FFEE:128";

fn eta(s: &str) -> Eta {
    make_eta(&s.parse::<EtaSpec>().unwrap()).unwrap()
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn is_odd(r: &BigRational) -> bool {
    !(r.numer() % BigInt::from(2)).is_zero()
}

/// Base-η digits of an exact rational by the greedy parity rule, on plain
/// rationals.
fn greedy_digits(mut x: BigRational, e: &BigRational, n: usize) -> Vec<usize> {
    (0..n)
        .map(|_| {
            let d = usize::from(is_odd(&x));
            x = (&x - BigRational::from(BigInt::from(d))) / e;
            d
        })
        .collect()
}

fn word_value(v: &[usize], e: &BigRational) -> BigRational {
    v.iter()
        .rev()
        .fold(BigRational::zero(), |acc, &d| acc * e + BigRational::from(BigInt::from(d)))
}

/// `ι(e_0) = 1`, `ι(e_n) = p_n(1/η)` with `p_0 = 2` and
/// `p_{k+1} = p_k/η - α_{k+1}`, `α` the parity of `p_k/η`.
fn iota_basis(e: &BigRational, n: usize) -> Vec<BigRational> {
    let mut p = BigRational::from(BigInt::from(2));
    let mut out = vec![BigRational::one()];
    for _ in 1..=n {
        let q = &p / e;
        let a = BigRational::from(BigInt::from(u8::from(is_odd(&q))));
        p = q - a;
        out.push(p.clone());
    }
    out
}

#[test]
fn odometer_on_every_vertex() {
    let m = AddingMachine::new();
    for depth in 0..=10 {
        for x in 0u32..(1 << depth) {
            let v: Vec<usize> = (0..depth).map(|i| (x >> i & 1) as usize).collect();
            for c in [-3i64, -1, 0, 1, 2, 5] {
                let y = (x as i64 + c).rem_euclid(1 << depth);
                let expect: Vec<usize> = (0..depth).map(|i| (y >> i & 1) as usize).collect();
                assert_eq!(act_vertex(&m, &v, &c).unwrap(), expect, "{c} on {v:?}");
            }
        }
    }
}

#[test]
fn adding_machine_states() {
    let m = AddingMachine::new();
    for (g, expect) in [(1i64, vec![1, 0]), (-1, vec![-1, 0]), (0, vec![0]), (3, vec![3, 2, 1, 0])] {
        let s = states(&m, &g, 100).unwrap();
        assert_eq!(s.status, StateStatus::Closed);
        let got: BTreeSet<i64> = s.elements.iter().copied().collect();
        assert_eq!(got, expect.into_iter().collect(), "{g}");
    }
    assert_eq!(m.apply_f(&3).unwrap_err(), Error::OddArgument);
}

#[test]
fn dyadic_translation_matches_greedy_digits() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for spec in ["int:2", "int:6", "int:-2", "rat:2/3"] {
        let e = eta(spec);
        let er = e.value().as_exact().unwrap().clone();
        let m = DyadicMachine::new(e);
        for _ in 0..200 {
            let c = rat(rng.gen_range(-500..500), 2 * rng.gen_range(0..40) + 1);
            let v: Vec<usize> = (0..16).map(|_| rng.gen_range(0..2)).collect();
            let g = Padic2::from_ratio(c.clone()).unwrap();
            let expect = greedy_digits(word_value(&v, &er) + c, &er, 16);
            assert_eq!(act_vertex(&m, &v, &g).unwrap(), expect, "{spec}");
        }
    }
}

#[test]
fn dyadic_parity_is_domain() {
    let m = DyadicMachine::new(eta("int:6"));
    for (p, q) in [(0, 1), (2, 1), (-4, 7), (1, 1), (3, 5), (-1, 9)] {
        let x = Padic2::from_ratio(rat(p, q)).unwrap();
        assert_eq!(m.in_h(&x).unwrap(), p % 2 == 0);
    }
    assert_eq!(m.apply_f(&Padic2::from_int(1)).unwrap_err(), Error::OddArgument);
}

#[test]
fn zomega_f_of_e1_found_by_search() {
    // small integer vectors c with ι(c) = ι(e_1)/6, for an independent ι;
    // for η = 6 the kernel contains 2e_0 + 3e_1, so there can be several
    let six = BigRational::from(BigInt::from(6));
    let basis = iota_basis(&six, 4);
    let target = &basis[1] / &six;
    let mut hits = Vec::new();
    let range = -2i64..=2;
    for c0 in range.clone() {
        for c1 in range.clone() {
            for c2 in range.clone() {
                for c3 in range.clone() {
                    let c = [c0, c1, c2, c3];
                    let val = c
                        .iter()
                        .zip(&basis)
                        .map(|(&ci, b)| BigRational::from(BigInt::from(ci)) * b)
                        .fold(BigRational::zero(), |a, b| a + b);
                    if val == target {
                        hits.push(c);
                    }
                }
            }
        }
    }
    assert!(hits.contains(&[1, 0, 1, 0]), "{hits:?}");
    let m = ZOmegaMachine::new(eta("int:6"), 8).unwrap();
    assert_eq!(m.apply_f(&Vect::basis(1)).unwrap(), Vect::from_dense(&[1, 0, 1]));
    assert_eq!(m.alpha(2).unwrap(), 1);
}

#[test]
fn zomega_iota_matches_independent_basis() {
    for spec in ["int:6", "int:-2", "int:10", "rat:2/3"] {
        let e = eta(spec);
        let er = e.value().as_exact().unwrap().clone();
        let m = ZOmegaMachine::new(e, 12).unwrap();
        for (n, b) in iota_basis(&er, 12).iter().enumerate() {
            assert_eq!(m.basis_value(n).unwrap().as_exact(), Some(b), "{spec} e{n}");
        }
    }
}

#[test]
fn zomega_domain_and_odd_argument() {
    let m = ZOmegaMachine::new(eta("int:6"), 4).unwrap();
    assert!(m.in_h(&Vect::from_dense(&[2, 1, -3])).unwrap());
    assert!(!m.in_h(&Vect::from_dense(&[1, 4])).unwrap());
    assert_eq!(m.apply_f(&Vect::basis(0)).unwrap_err(), Error::OddArgument);
    // h' = (1), so f(2e_0) = α_1 e_0 + e_1
    assert_eq!(m.apply_f(&Vect::from_dense(&[2])).unwrap(), Vect::from_dense(&[1, 1]));
}

#[test]
fn zomega_states_exceed_budget() {
    let m = ZOmegaMachine::new(eta(SEEDED), 16).unwrap();
    let s = states(&m, &Vect::basis(0), 50).unwrap();
    assert_eq!(s.status, StateStatus::BudgetExhausted);
    assert_eq!(s.len(), 51);
}

#[test]
fn closed_state_sets_are_restriction_closed() {
    let m = AddingMachine::new();
    for g in -20i64..=20 {
        let s = states(&m, &g, 100).unwrap();
        assert!(s.is_closed());
        for e in &s.elements {
            for r in decompose(&m, e).unwrap().restrictions {
                assert!(s.contains(&r), "{g}: {e} -> {r}");
            }
        }
    }
}

fn small_vect() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-9i64..=9, 1..8)
}

fn vertex(depth: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..2, depth)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vect_and_dyadic_agree(g in small_vect(), v in vertex(16), seeded in any::<bool>()) {
        let e = eta(if seeded { SEEDED } else { "int:6" });
        let z = ZOmegaMachine::new(e.clone(), 8).unwrap();
        let d = DyadicMachine::new(e);
        let g = Vect::from_dense(&g);
        let image = z.iota(&g).unwrap();
        prop_assert_eq!(act_vertex(&z, &v, &g).unwrap(), act_vertex(&d, &v, &image).unwrap());
    }

    #[test]
    fn zomega_parity(g in small_vect()) {
        let m = ZOmegaMachine::new(eta("int:10"), 8).unwrap();
        let g = Vect::from_dense(&g);
        let parity = m.iota(&g).unwrap().parity().unwrap();
        prop_assert_eq!(m.in_h(&g).unwrap(), parity == 0);
        prop_assert_eq!(parity == 0, g.get(0).clone() % 2 == BigInt::zero());
    }

    #[test]
    fn zomega_intertwining(g in small_vect(), seeded in any::<bool>()) {
        let e = eta(if seeded { SEEDED } else { "int:6" });
        let m = ZOmegaMachine::new(e.clone(), 8).unwrap();
        let mut h = Vect::from_dense(&g);
        if !m.in_h(&h).unwrap() {
            h = h.add(&Vect::basis(0));
        }
        let lhs = m.iota(&m.apply_f(&h).unwrap()).unwrap();
        let rhs = m.iota(&h).unwrap().div_eta(&e).unwrap();
        if seeded {
            prop_assert!(lhs.sub(&rhs).is_zero_mod_pow2(96).unwrap());
        } else {
            prop_assert_eq!(lhs, rhs);
        }
    }
}
