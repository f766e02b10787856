//! 2-adic integers, base-η expansions and the α / p_n(1/η) selection stream.
//!
//! A [`Padic2`] is either an exact rational with odd denominator or a
//! window: the residue of a 2-adic integer modulo `2^precision`. Exact
//! values never lose precision. Windows shrink by one digit on every
//! division by η. Digit words are least-significant first: index `i`
//! carries `η^i` (or `2^i` for plain binary windows).

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

const LCG_MUL: u64 = 6364136223846793005;
const LCG_ADD: u64 = 1442695040888963407;

fn mask(precision: u32) -> BigUint {
    (BigUint::one() << precision as usize) - BigUint::one()
}

/// Inverse of an odd `u` modulo `2^precision` by Newton lifting.
fn inv_mod_pow2(u: &BigUint, precision: u32) -> BigUint {
    debug_assert!(u.is_odd());
    if precision == 0 {
        return BigUint::zero();
    }
    let m = mask(precision);
    let two = BigUint::from(2u32);
    // u * u == 1 mod 8 for every odd u, so the seed is correct to 3 bits.
    let mut x = u & &m;
    let mut bits = 3u32;
    while bits < precision {
        let ux = (u * &x) & &m;
        // x <- x * (2 - u x) mod 2^precision
        let corr = (&two + &m + BigUint::one() - ux) & &m;
        x = (x * corr) & &m;
        bits *= 2;
    }
    x & m
}

/// 2-adic valuation of a nonzero integer.
fn int_valuation(n: &BigInt) -> Option<u64> {
    n.trailing_zeros()
}

/// 2-adic valuation of a rational; `None` for zero.
pub fn valuation(r: &BigRational) -> Option<i64> {
    let num = int_valuation(r.numer())? as i64;
    let den = int_valuation(r.denom()).unwrap_or(0) as i64;
    Some(num - den)
}

/// Residue of an exact 2-adic rational modulo `2^precision`.
fn residue_of(r: &BigRational, precision: u32) -> BigUint {
    if precision == 0 {
        return BigUint::zero();
    }
    let modulus = BigInt::one() << precision as usize;
    let num = r.numer().mod_floor(&modulus);
    let den = r.denom().mod_floor(&modulus);
    let num = num.to_biguint().expect("mod_floor is non-negative");
    let den = den.to_biguint().expect("mod_floor is non-negative");
    (num * inv_mod_pow2(&den, precision)) & mask(precision)
}

/// A 2-adic integer known modulo `2^precision`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Window {
    residue: BigUint,
    precision: u32,
}

impl Window {
    pub fn new(residue: BigUint, precision: u32) -> Self {
        let residue = residue & mask(precision);
        Window { residue, precision }
    }

    /// Builds a window from base-2 digits, least-significant first.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut residue = BigUint::zero();
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                residue.set_bit(i as u64, true);
            }
        }
        Window {
            residue,
            precision: bits.len() as u32,
        }
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn bit(&self, i: u32) -> Option<u8> {
        (i < self.precision).then(|| self.residue.bit(i as u64) as u8)
    }

    fn truncate(&self, precision: u32) -> Window {
        Window::new(self.residue.clone(), precision.min(self.precision))
    }
}

/// A 2-adic integer: exact rational with odd denominator, or a finite window.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Padic2 {
    Exact(BigRational),
    Windowed(Window),
}

impl Padic2 {
    pub fn zero() -> Self {
        Padic2::Exact(BigRational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Padic2::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    /// Exact rational `num/den`; the denominator must be odd.
    pub fn rational(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::NotTwoAdic("zero denominator".into()));
        }
        let r = BigRational::new(num, den);
        Self::from_ratio(r)
    }

    pub fn from_ratio(r: BigRational) -> Result<Self> {
        if r.denom().is_even() {
            return Err(Error::NotTwoAdic(format!("{r} has even denominator")));
        }
        Ok(Padic2::Exact(r))
    }

    pub fn windowed(residue: BigUint, precision: u32) -> Self {
        Padic2::Windowed(Window::new(residue, precision))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Padic2::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Padic2::Exact(r) => Some(r),
            Padic2::Windowed(_) => None,
        }
    }

    /// Number of valid low-order binary digits; `None` means exact.
    pub fn precision(&self) -> Option<u32> {
        match self {
            Padic2::Exact(_) => None,
            Padic2::Windowed(w) => Some(w.precision),
        }
    }

    pub fn parity(&self) -> Result<u8> {
        match self {
            Padic2::Exact(r) => Ok(r.numer().is_odd() as u8),
            Padic2::Windowed(w) => w.bit(0).ok_or(Error::PrecisionExhausted),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Padic2::Exact(r) => r.is_zero(),
            Padic2::Windowed(w) => w.residue.is_zero(),
        }
    }

    /// The window of this value at `precision`; exact values are reduced.
    pub fn to_window(&self, precision: u32) -> Window {
        match self {
            Padic2::Exact(r) => Window::new(residue_of(r, precision), precision),
            Padic2::Windowed(w) => w.truncate(precision),
        }
    }

    /// Low `n` binary digits, least-significant first.
    pub fn bits(&self, n: u32) -> Result<Vec<u8>> {
        if let Some(p) = self.precision() {
            if p < n {
                return Err(Error::PrecisionExhausted);
            }
        }
        let w = self.to_window(n);
        Ok((0..n).map(|i| w.residue.bit(i as u64) as u8).collect())
    }

    /// True iff `self ≡ 0 (mod 2^n)`.
    pub fn is_zero_mod_pow2(&self, n: u32) -> Result<bool> {
        match self {
            Padic2::Exact(r) => Ok(match valuation(r) {
                None => true,
                Some(v) => v >= n as i64,
            }),
            Padic2::Windowed(w) => {
                if w.precision < n {
                    return Err(Error::PrecisionExhausted);
                }
                Ok((&w.residue & mask(n)).is_zero())
            }
        }
    }

    /// Coerces a pair to a common representation for a binary operation.
    fn align(a: &Padic2, b: &Padic2) -> Aligned {
        match (a, b) {
            (Padic2::Exact(x), Padic2::Exact(y)) => Aligned::Exact(x.clone(), y.clone()),
            _ => {
                let p = match (a.precision(), b.precision()) {
                    (Some(x), Some(y)) => x.min(y),
                    (Some(x), None) | (None, Some(x)) => x,
                    (None, None) => unreachable!(),
                };
                Aligned::Windowed(a.to_window(p), b.to_window(p), p)
            }
        }
    }

    pub fn add(&self, other: &Padic2) -> Padic2 {
        match Self::align(self, other) {
            Aligned::Exact(x, y) => Padic2::Exact(x + y),
            Aligned::Windowed(x, y, p) => Padic2::windowed(x.residue + y.residue, p),
        }
    }

    pub fn mul(&self, other: &Padic2) -> Padic2 {
        match Self::align(self, other) {
            Aligned::Exact(x, y) => Padic2::Exact(x * y),
            Aligned::Windowed(x, y, p) => Padic2::windowed(x.residue * y.residue, p),
        }
    }

    pub fn neg(&self) -> Padic2 {
        match self {
            Padic2::Exact(r) => Padic2::Exact(-r),
            Padic2::Windowed(w) => {
                let m = mask(w.precision);
                Padic2::windowed((&m + BigUint::one() - &w.residue) & &m, w.precision)
            }
        }
    }

    pub fn sub(&self, other: &Padic2) -> Padic2 {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Padic2 {
        self.mul(&Padic2::Exact(BigRational::from_integer(k.clone())))
    }

    /// Division by η, defined on `2Z_2`.
    ///
    /// Exact over exact stays exact. Otherwise the result is known to one
    /// digit fewer than the smaller of the two input windows.
    pub fn div_eta(&self, eta: &Eta) -> Result<Padic2> {
        let ev = eta.value();
        match Self::align(self, &ev) {
            Aligned::Exact(a, e) => {
                if a.numer().is_odd() {
                    return Err(Error::OddArgument);
                }
                Ok(Padic2::Exact(a / e))
            }
            Aligned::Windowed(a, e, p) => {
                if p == 0 {
                    return Err(Error::PrecisionExhausted);
                }
                if a.residue.bit(0) {
                    return Err(Error::OddArgument);
                }
                let q = p - 1;
                let half = &a.residue >> 1usize;
                let unit = &e.residue >> 1usize;
                debug_assert!(q == 0 || unit.is_odd());
                let inv = inv_mod_pow2(&(unit | BigUint::one()), q);
                Ok(Padic2::windowed(half * inv, q))
            }
        }
    }
}

enum Aligned {
    Exact(BigRational, BigRational),
    Windowed(Window, Window, u32),
}

impl fmt::Display for Padic2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Padic2::Exact(r) => write!(f, "{r}"),
            Padic2::Windowed(w) => {
                // binary digits, least-significant first, then the precision
                let bits: String = (0..w.precision)
                    .map(|i| if w.residue.bit(i as u64) { '1' } else { '0' })
                    .collect();
                write!(f, "[{bits}]~{}", w.precision)
            }
        }
    }
}

/// Syntactic description of η before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EtaSpec {
    Integer(BigInt),
    Rational(BigInt, BigInt),
    Seeded { seed: u64, precision: u32 },
}

impl FromStr for EtaSpec {
    type Err = Error;

    /// `int:<v>`, `rat:<p>/<q>` or `seed:<u64>:<precision>`; the seed may be
    /// written in hex with a `0x` prefix.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidEta(format!("cannot parse `{s}`"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "int" => Ok(EtaSpec::Integer(rest.trim().parse().map_err(|_| bad())?)),
            "rat" => {
                let (p, q) = rest.split_once('/').ok_or_else(bad)?;
                Ok(EtaSpec::Rational(
                    p.trim().parse().map_err(|_| bad())?,
                    q.trim().parse().map_err(|_| bad())?,
                ))
            }
            "seed" => {
                let (seed, prec) = rest.split_once(':').ok_or_else(bad)?;
                let seed = seed.trim();
                let seed = match seed.strip_prefix("0x").or_else(|| seed.strip_prefix("0X")) {
                    Some(hex) => u64::from_str_radix(hex, 16),
                    None => seed.parse(),
                }
                .map_err(|_| bad())?;
                Ok(EtaSpec::Seeded {
                    seed,
                    precision: prec.trim().parse().map_err(|_| bad())?,
                })
            }
            _ => Err(bad()),
        }
    }
}

/// The numeration base η ∈ 2Z_2 with `v_2(η) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Eta {
    Integer(BigInt),
    Rational(BigRational),
    /// Pseudorandom digit stream standing in for a transcendental η.
    Seeded {
        seed: u64,
        digits: Window,
    },
}

/// Binary digits of the seeded stream: `0, 1`, then bit 63 of successive
/// LCG states starting from the seed.
pub fn seeded_digits(seed: u64, precision: u32) -> Vec<u8> {
    let mut out = Vec::with_capacity(precision as usize);
    // x holds x_k at the top of iteration k
    let mut x = seed;
    for k in 0..precision {
        out.push(match k {
            0 => 0,
            1 => 1,
            _ => (x >> 63) as u8,
        });
        x = x.wrapping_mul(LCG_MUL).wrapping_add(LCG_ADD);
    }
    out
}

pub fn make_eta(spec: &EtaSpec) -> Result<Eta> {
    match spec {
        EtaSpec::Integer(v) => {
            if v.is_zero() || int_valuation(v) != Some(1) {
                return Err(Error::InvalidEta(format!("{v} is not 2 mod 4")));
            }
            Ok(Eta::Integer(v.clone()))
        }
        EtaSpec::Rational(p, q) => {
            if q.is_zero() {
                return Err(Error::InvalidEta("zero denominator".into()));
            }
            let r = BigRational::new(p.clone(), q.clone());
            if r.denom().is_even() || valuation(&r) != Some(1) {
                return Err(Error::InvalidEta(format!("{p}/{q} does not have 2-adic valuation 1")));
            }
            Ok(Eta::Rational(r))
        }
        EtaSpec::Seeded { seed, precision } => {
            if *precision < 2 {
                return Err(Error::InvalidEta("seeded eta needs at least 2 digits".into()));
            }
            let bits = seeded_digits(*seed, *precision);
            Ok(Eta::Seeded {
                seed: *seed,
                digits: Window::from_bits(&bits),
            })
        }
    }
}

impl Eta {
    pub fn value(&self) -> Padic2 {
        match self {
            Eta::Integer(v) => Padic2::Exact(BigRational::from_integer(v.clone())),
            Eta::Rational(r) => Padic2::Exact(r.clone()),
            Eta::Seeded { digits, .. } => Padic2::Windowed(digits.clone()),
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Eta::Seeded { .. })
    }

    /// Digit budget of a seeded η; `None` for exact η.
    pub fn precision(&self) -> Option<u32> {
        match self {
            Eta::Seeded { digits, .. } => Some(digits.precision),
            _ => None,
        }
    }

    /// η = 2 collapses every `p_n(1/η)` with `n ≥ 1` to zero.
    pub fn is_degenerate(&self) -> bool {
        match self {
            Eta::Integer(v) => *v == BigInt::from(2),
            Eta::Rational(r) => *r == BigRational::from_integer(BigInt::from(2)),
            Eta::Seeded { .. } => false,
        }
    }
}

impl fmt::Display for Eta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eta::Integer(v) => write!(f, "int:{v}"),
            Eta::Rational(r) => write!(f, "rat:{}/{}", r.numer(), r.denom()),
            Eta::Seeded { seed, digits } => write!(f, "seed:{seed:#x}:{}", digits.precision),
        }
    }
}

/// A finite word over `{0, 1}`: a vertex of the binary tree, or a truncated
/// base-η expansion.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DigitWord(Vec<u8>);

impl DigitWord {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        if let Some(d) = digits.iter().find(|&&d| d > 1) {
            return Err(Error::ShapeMismatch(format!("digit {d} outside {{0,1}}")));
        }
        Ok(DigitWord(digits))
    }

    pub fn zeros(n: usize) -> Self {
        DigitWord(vec![0; n])
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_vertex(&self) -> Vec<usize> {
        self.0.iter().map(|&d| d as usize).collect()
    }

    pub fn from_vertex(v: &[usize]) -> Result<Self> {
        Self::new(
            v.iter()
                .map(|&d| u8::try_from(d).unwrap_or(u8::MAX))
                .collect(),
        )
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for DigitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::ShapeMismatch(format!("`{c}` is not a binary digit"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(DigitWord(digits))
    }
}

/// First `n` base-η digits of `a`, least-significant first.
pub fn eta_digits(a: &Padic2, eta: &Eta, n: usize) -> Result<DigitWord> {
    let mut digits = Vec::with_capacity(n);
    let mut rest = a.clone();
    for i in 0..n {
        let x = rest.parity()?;
        digits.push(x);
        if i + 1 < n {
            rest = rest.sub(&Padic2::from_int(x as i64)).div_eta(eta)?;
        }
    }
    Ok(DigitWord(digits))
}

/// `Σ w_i η^i`.
pub fn eta_value(w: &DigitWord, eta: &Eta) -> Padic2 {
    let ev = eta.value();
    let mut acc = Padic2::zero();
    for &d in w.0.iter().rev() {
        acc = acc.mul(&ev).add(&Padic2::from_int(d as i64));
    }
    acc
}

/// The sequence `p_0 = 2`, `α_{k+1} = parity(p_k(1/η)/η)`,
/// `p_{k+1}(1/η) = p_k(1/η)/η − α_{k+1}`, grown on demand.
#[derive(Clone, Debug)]
pub struct AlphaStream {
    eta: Eta,
    alphas: Vec<u8>,
    values: Vec<Padic2>,
}

impl AlphaStream {
    pub fn new(eta: Eta) -> Self {
        AlphaStream {
            eta,
            alphas: Vec::new(),
            values: vec![Padic2::from_int(2)],
        }
    }

    pub fn eta(&self) -> &Eta {
        &self.eta
    }

    /// Number of α's computed so far.
    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// Largest `n` this stream can ever reach; `None` when unbounded.
    pub fn capacity(&self) -> Option<usize> {
        self.eta
            .precision()
            .map(|p| (p as usize).saturating_sub(2))
    }

    pub fn extend_to(&mut self, n: usize) -> Result<()> {
        if let Some(cap) = self.capacity() {
            if n > cap {
                return Err(Error::PrecisionExhausted);
            }
        }
        while self.alphas.len() < n {
            let last = self.values.last().expect("p_0 is always present");
            let q = last.div_eta(&self.eta)?;
            let alpha = q.parity()?;
            let next = q.sub(&Padic2::from_int(alpha as i64));
            self.alphas.push(alpha);
            self.values.push(next);
        }
        Ok(())
    }

    /// `α_k` for `1 ≤ k ≤ len()`.
    pub fn alpha(&self, k: usize) -> Option<u8> {
        k.checked_sub(1).and_then(|i| self.alphas.get(i)).copied()
    }

    /// `p_k(1/η)` for `0 ≤ k ≤ len()`.
    pub fn value(&self, k: usize) -> Option<&Padic2> {
        self.values.get(k)
    }

    /// `α_1 … α_len`.
    pub fn alphas(&self) -> &[u8] {
        &self.alphas
    }

    /// `p_0(1/η) … p_len(1/η)`.
    pub fn values(&self) -> &[Padic2] {
        &self.values
    }
}

/// `α_1 … α_n` together with `p_0(1/η) … p_n(1/η)`.
pub fn alpha_stream(eta: &Eta, n: usize) -> Result<AlphaStream> {
    let mut s = AlphaStream::new(eta.clone());
    s.extend_to(n)?;
    Ok(s)
}
