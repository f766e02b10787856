//! Concrete presentations: the binary adding machine, translations of Z_2
//! read in base η, and the free abelian group of countable rank acting
//! through the basis `1, p_1(1/η), p_2(1/η), …`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::engine::{Generator, Machine};
use crate::error::{Error, Result};
use crate::padic::{AlphaStream, Eta, Padic2};

/// `G = Z`, `H = 2Z`, `f(2n) = n`, transversal `(0, 1)`.
#[derive(Clone, Debug, Default)]
pub struct AddingMachine {
    transversal: [i64; 2],
}

impl AddingMachine {
    pub fn new() -> Self {
        AddingMachine { transversal: [0, 1] }
    }
}

impl Machine for AddingMachine {
    type Elem = i64;

    fn degree(&self) -> usize {
        2
    }

    fn identity(&self) -> i64 {
        0
    }

    fn mul(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }

    fn inv(&self, a: &i64) -> i64 {
        -a
    }

    fn transversal(&self) -> &[i64] {
        &self.transversal
    }

    fn in_h(&self, g: &i64) -> Result<bool> {
        Ok(g.rem_euclid(2) == 0)
    }

    fn apply_f(&self, h: &i64) -> Result<i64> {
        if h.rem_euclid(2) != 0 {
            return Err(Error::OddArgument);
        }
        Ok(h / 2)
    }

    fn generators(&self) -> Vec<Generator<i64>> {
        vec![Generator::new("a", 1)]
    }

    fn parabolic_trivial(&self) -> bool {
        true
    }
}

/// Translations of `Z_2`, with the boundary read in base η.
#[derive(Clone, Debug)]
pub struct DyadicMachine {
    eta: Eta,
    transversal: [Padic2; 2],
}

impl DyadicMachine {
    pub fn new(eta: Eta) -> Self {
        DyadicMachine {
            eta,
            transversal: [Padic2::zero(), Padic2::from_int(1)],
        }
    }

    pub fn eta(&self) -> &Eta {
        &self.eta
    }
}

impl Machine for DyadicMachine {
    type Elem = Padic2;

    fn degree(&self) -> usize {
        2
    }

    fn identity(&self) -> Padic2 {
        Padic2::zero()
    }

    fn mul(&self, a: &Padic2, b: &Padic2) -> Padic2 {
        a.add(b)
    }

    fn inv(&self, a: &Padic2) -> Padic2 {
        a.neg()
    }

    fn transversal(&self) -> &[Padic2] {
        &self.transversal
    }

    fn in_h(&self, g: &Padic2) -> Result<bool> {
        Ok(g.parity()? == 0)
    }

    fn apply_f(&self, h: &Padic2) -> Result<Padic2> {
        h.div_eta(&self.eta)
    }

    fn generators(&self) -> Vec<Generator<Padic2>> {
        vec![Generator::new("1", Padic2::from_int(1))]
    }

    fn parabolic_trivial(&self) -> bool {
        true
    }
}

/// A finitely supported integer vector; coordinate `n` multiplies the
/// `n`-th basis translation. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vect(BTreeMap<usize, BigInt>);

impl Vect {
    pub fn zero() -> Self {
        Vect(BTreeMap::new())
    }

    /// The basis vector `e_n`.
    pub fn basis(n: usize) -> Self {
        Vect(BTreeMap::from([(n, BigInt::one())]))
    }

    pub fn from_pairs<I, C>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (usize, C)>,
        C: Into<BigInt>,
    {
        let mut v = Vect::zero();
        for (i, c) in pairs {
            v.add_at(i, &c.into());
        }
        v
    }

    /// Dense coefficients `a_0 … a_{k-1}`.
    pub fn from_dense(coeffs: &[i64]) -> Self {
        Vect::from_pairs(coeffs.iter().enumerate().map(|(i, &c)| (i, c)))
    }

    pub fn get(&self, n: usize) -> BigInt {
        self.0.get(&n).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest index with a nonzero coefficient.
    pub fn max_index(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.0.iter().map(|(&i, c)| (i, c))
    }

    fn add_at(&mut self, i: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.0.entry(i).or_default();
        *entry += c;
        if entry.is_zero() {
            self.0.remove(&i);
        }
    }

    pub fn add(&self, other: &Vect) -> Vect {
        let mut out = self.clone();
        for (&i, c) in &other.0 {
            out.add_at(i, c);
        }
        out
    }

    pub fn neg(&self) -> Vect {
        Vect(self.0.iter().map(|(&i, c)| (i, -c)).collect())
    }
}

impl fmt::Display for Vect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (k, (i, c)) in self.0.iter().enumerate() {
            if c.is_negative() {
                f.write_str("-")?;
            } else if k > 0 {
                f.write_str("+")?;
            }
            let a = c.abs();
            if a.is_one() {
                write!(f, "e{i}")?;
            } else {
                write!(f, "{a}e{i}")?;
            }
        }
        Ok(())
    }
}

/// The rank-ω machine: `G = Z^(ω)` in the basis `e_0 = 1`,
/// `e_n = p_n(1/η)`, with `H = {a_0 even}` and
/// `f(h)_0 = Σ_k α_{k+1} h'_k`, `f(h)_{n+1} = h'_n`, where
/// `h' = (h_0/2, h_1, h_2, …)`. This is exactly the map making
/// `ι(f(h)) = ι(h)/η` for the embedding `ι` into `Z_2`.
#[derive(Debug)]
pub struct ZOmegaMachine {
    eta: Eta,
    max_index: usize,
    transversal: [Vect; 2],
    stream: RwLock<AlphaStream>,
}

impl ZOmegaMachine {
    /// Generators are `e_0 … e_{max_index}`.
    pub fn new(eta: Eta, max_index: usize) -> Result<Self> {
        let mut stream = AlphaStream::new(eta.clone());
        stream.extend_to(max_index + 1)?;
        Ok(ZOmegaMachine {
            eta,
            max_index,
            transversal: [Vect::zero(), Vect::basis(0)],
            stream: RwLock::new(stream),
        })
    }

    pub fn eta(&self) -> &Eta {
        &self.eta
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    fn ensure(&self, n: usize) -> Result<()> {
        if self.stream.read().expect("alpha stream lock").len() >= n {
            return Ok(());
        }
        self.stream.write().expect("alpha stream lock").extend_to(n)
    }

    /// `α_k`, extending the stream as needed.
    pub fn alpha(&self, k: usize) -> Result<u8> {
        self.ensure(k)?;
        let s = self.stream.read().expect("alpha stream lock");
        s.alpha(k)
            .ok_or_else(|| Error::MalformedMachine(format!("alpha index {k} out of range")))
    }

    /// `p_k(1/η)`; the zeroth basis vector maps to 1, not to `p_0 = 2`.
    pub fn basis_value(&self, k: usize) -> Result<Padic2> {
        if k == 0 {
            return Ok(Padic2::from_int(1));
        }
        self.ensure(k)?;
        let s = self.stream.read().expect("alpha stream lock");
        Ok(s.value(k).expect("stream extended").clone())
    }

    /// The embedding `ι: Vect → Z_2`, `v ↦ v_0 + Σ_{n≥1} v_n p_n(1/η)`.
    pub fn iota(&self, v: &Vect) -> Result<Padic2> {
        let mut acc = Padic2::zero();
        for (i, c) in v.iter() {
            acc = acc.add(&self.basis_value(i)?.scale(c));
        }
        Ok(acc)
    }
}

impl Machine for ZOmegaMachine {
    type Elem = Vect;

    fn degree(&self) -> usize {
        2
    }

    fn identity(&self) -> Vect {
        Vect::zero()
    }

    fn mul(&self, a: &Vect, b: &Vect) -> Vect {
        a.add(b)
    }

    fn inv(&self, a: &Vect) -> Vect {
        a.neg()
    }

    fn transversal(&self) -> &[Vect] {
        &self.transversal
    }

    fn in_h(&self, g: &Vect) -> Result<bool> {
        Ok(g.get(0).is_even())
    }

    fn apply_f(&self, h: &Vect) -> Result<Vect> {
        let h0 = h.get(0);
        if h0.is_odd() {
            return Err(Error::OddArgument);
        }
        if let Some(top) = h.max_index() {
            self.ensure(top + 1)?;
        }
        let s = self.stream.read().expect("alpha stream lock");
        let mut head = BigInt::zero();
        let mut pairs = Vec::new();
        for (k, c) in h.iter() {
            let c = if k == 0 { c / 2 } else { c.clone() };
            if s.alpha(k + 1).expect("stream extended") == 1 {
                head += &c;
            }
            pairs.push((k + 1, c));
        }
        pairs.push((0, head));
        Ok(Vect::from_pairs(pairs))
    }

    fn generators(&self) -> Vec<Generator<Vect>> {
        (0..=self.max_index)
            .map(|n| Generator::new(format!("e{n}"), Vect::basis(n)))
            .collect()
    }

    /// Only a pseudorandom η stands in for a transcendental one; rational η
    /// give relations among the `p_n(1/η)` and a nontrivial parabolic.
    fn parabolic_trivial(&self) -> bool {
        !self.eta.is_exact()
    }
}
