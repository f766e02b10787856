//! Desk-scale evidence for structural claims: faithfulness probes, level
//! transitivity, state growth, and the block-triangular derivation identity
//! `χ(f) fⁿ = [[0, 0], [f_1ⁿ dχ, f_1ⁿ χ(f_1)]]`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{
    act_vertex, ball, coset_index, decompose, is_trivial_to_depth, portraits_agree, states,
    word_product, Machine, StateStatus,
};
use crate::error::{Error, Result};

/// Non-identity elements of word length `≤ word_length` acting trivially to
/// `depth`. An empty report is evidence that the action is faithful.
pub fn check_corefree_desk<M: Machine>(
    m: &M,
    word_length: usize,
    depth: usize,
) -> Result<Vec<M::Elem>> {
    let id = m.identity();
    let mut out = Vec::new();
    for g in ball(m, word_length) {
        if g != id && is_trivial_to_depth(m, &g, depth)? {
            out.push(g);
        }
    }
    Ok(out)
}

/// Size of the orbit of `0^depth` under the group generated by `m`.
pub fn orbit_size<M: Machine>(m: &M, depth: usize) -> Result<usize> {
    let mut letters = Vec::new();
    for g in m.generators() {
        letters.push(m.inv(&g.elem));
        letters.push(g.elem);
    }
    let start = vec![0usize; depth];
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for l in &letters {
            let w = act_vertex(m, &v, l)?;
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    Ok(seen.len())
}

/// Whether the group acts transitively on the `m^depth` vertices of level
/// `depth`.
pub fn level_transitivity_check<M: Machine>(m: &M, depth: usize) -> Result<bool> {
    let total = (m.degree() as u128).checked_pow(depth as u32);
    Ok(total == Some(orbit_size(m, depth)? as u128))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrowthReport {
    pub count: usize,
    pub status: StateStatus,
}

pub fn state_growth_probe<M: Machine>(m: &M, g: &M::Elem, budget: usize) -> Result<GrowthReport> {
    let s = states(m, g, budget)?;
    Ok(GrowthReport {
        count: s.len(),
        status: s.status,
    })
}

/// Dense integer matrix with checked arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: i64 = 0;
                for k in 0..self.cols {
                    let p = self
                        .get(i, k)
                        .checked_mul(other.get(k, j))
                        .ok_or(Error::Overflow("matrix product"))?;
                    acc = acc.checked_add(p).ok_or(Error::Overflow("matrix product"))?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch("sum of unequal shapes".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("matrix sum")))
            .collect::<Result<_>>()?;
        Ok(IntMatrix { data, ..*self })
    }

    pub fn scale(&self, k: i64) -> Result<IntMatrix> {
        let data = self
            .data
            .iter()
            .map(|a| a.checked_mul(k).ok_or(Error::Overflow("matrix scaling")))
            .collect::<Result<_>>()?;
        Ok(IntMatrix { data, ..*self })
    }

    pub fn pow(&self, n: u32) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("power of a non-square matrix".into()));
        }
        let mut out = Self::identity(self.rows);
        for _ in 0..n {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// `[[a, b], [c, d]]`.
    pub fn block(a: &IntMatrix, b: &IntMatrix, c: &IntMatrix, d: &IntMatrix) -> Result<IntMatrix> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::ShapeMismatch("inconsistent blocks".into()));
        }
        let mut out = Self::zeros(a.rows + c.rows, a.cols + b.cols);
        let place = |out: &mut IntMatrix, m: &IntMatrix, r0: usize, c0: usize| {
            for i in 0..m.rows {
                for j in 0..m.cols {
                    out.set(r0 + i, c0 + j, m.get(i, j));
                }
            }
        };
        place(&mut out, a, 0, 0);
        place(&mut out, b, 0, a.cols);
        place(&mut out, c, a.rows, 0);
        place(&mut out, d, a.rows, a.cols);
        Ok(out)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            f.write_str(&row.join(" "))?;
        }
        f.write_str("]")
    }
}

/// Integer polynomial `c_0 + c_1 t + … + c_deg t^deg`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly(Vec<i64>);

impl IntPoly {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.0.last() == Some(&1)
    }

    /// Companion matrix acting on row vectors: ones above the diagonal and
    /// `−c_0 … −c_{d-1}` in the last row. Its characteristic polynomial is
    /// `self` when monic.
    pub fn companion(&self) -> Result<IntMatrix> {
        let d = match self.degree() {
            Some(d) if d >= 1 && self.is_monic() => d,
            _ => {
                return Err(Error::InvalidParameter(
                    "companion matrix needs a monic polynomial of degree ≥ 1".into(),
                ))
            }
        };
        let mut m = IntMatrix::zeros(d, d);
        for i in 0..d - 1 {
            m.set(i, i + 1, 1);
        }
        for j in 0..d {
            m.set(d - 1, j, -self.0[j]);
        }
        Ok(m)
    }

    /// `χ(A)` by Horner's rule.
    pub fn eval(&self, a: &IntMatrix) -> Result<IntMatrix> {
        if !a.is_square() {
            return Err(Error::ShapeMismatch("polynomial of a non-square matrix".into()));
        }
        let n = a.rows();
        let mut acc = IntMatrix::zeros(n, n);
        for &c in self.0.iter().rev() {
            acc = acc.mul(a)?.add(&IntMatrix::identity(n).scale(c)?)?;
        }
        Ok(acc)
    }
}

/// `dχ` for the derivation `d(1) = 0`, `d(t) = g`,
/// `d(pq) = dp·q(f_0) + p(f_1)·dq`, with `g: rows(f_1) × rows(f_0)`.
pub fn derivation(chi: &IntPoly, f0: &IntMatrix, g: &IntMatrix, f1: &IntMatrix) -> Result<IntMatrix> {
    let (n0, n1) = (f0.rows(), f1.rows());
    if !f0.is_square() || !f1.is_square() || g.rows() != n1 || g.cols() != n0 {
        return Err(Error::ShapeMismatch(format!(
            "g is {}x{}, expected {n1}x{n0}",
            g.rows(),
            g.cols()
        )));
    }
    // running values of t^i at f_0, and d(t^i); t^{i+1} = t·t^i
    let mut power_f0 = IntMatrix::identity(n0);
    let mut d_power = IntMatrix::zeros(n1, n0);
    let mut out = IntMatrix::zeros(n1, n0);
    for (i, &c) in chi.coeffs().iter().enumerate() {
        if i > 0 {
            d_power = g.mul(&power_f0)?.add(&f1.mul(&d_power)?)?;
            power_f0 = f0.mul(&power_f0)?;
        }
        out = out.add(&d_power.scale(c)?)?;
    }
    Ok(out)
}

/// Shared setup: `(f_0, dχ)` after validating the shapes.
fn chi_setup(chi: &IntPoly, g: &IntMatrix, f1: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    let f0 = chi.companion()?;
    if !f1.is_square() {
        return Err(Error::ShapeMismatch("f1 must be square".into()));
    }
    let dchi = derivation(chi, &f0, g, f1)?;
    Ok((f0, dchi))
}

/// `f_1 dχ = χ(f_1) g + dχ f_0`, with `f_0` the companion matrix of `χ`.
pub fn derivation_identity_holds(chi: &IntPoly, g: &IntMatrix, f1: &IntMatrix) -> Result<bool> {
    let (f0, dchi) = chi_setup(chi, g, f1)?;
    let lhs = f1.mul(&dchi)?;
    let rhs = chi.eval(f1)?.mul(g)?.add(&dchi.mul(&f0)?)?;
    Ok(lhs == rhs)
}

/// Checks `χ(f) fⁿ = [[0, 0], [f_1ⁿ dχ, f_1ⁿ χ(f_1)]]` for
/// `f = [[f_0, 0], [g, f_1]]`, `f_0` the companion matrix of monic `χ`.
pub fn block_chi_check(chi: &IntPoly, g: &IntMatrix, f1: &IntMatrix, n: u32) -> Result<bool> {
    let (f0, dchi) = chi_setup(chi, g, f1)?;
    let (n0, n1) = (f0.rows(), f1.rows());
    let f = IntMatrix::block(&f0, &IntMatrix::zeros(n0, n1), g, f1)?;
    let lhs = chi.eval(&f)?.mul(&f.pow(n)?)?;
    let f1n = f1.pow(n)?;
    let rhs = IntMatrix::block(
        &IntMatrix::zeros(n0, n0),
        &IntMatrix::zeros(n0, n1),
        &f1n.mul(&dchi)?,
        &f1n.mul(&chi.eval(f1)?)?,
    )?;
    Ok(lhs == rhs)
}

/// One named check with a pass/fail verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    /// Verdict for `total` trials of which `failures` failed; `first`
    /// describes the first failure.
    pub fn new(name: &str, failures: usize, total: usize, first: Option<String>) -> Self {
        let detail = match first {
            None => format!("{total} checked"),
            Some(f) => format!("{failures}/{total} failed; first: {f}"),
        };
        CheckOutcome {
            name: name.to_string(),
            passed: failures == 0,
            detail,
        }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} {}", self.name, self.detail)
    }
}

/// Product of a uniformly random word of length `≤ max_len` over the
/// generators and their inverses.
pub fn random_element<M: Machine, R: Rng>(m: &M, rng: &mut R, max_len: usize) -> M::Elem {
    let gens = m.generators();
    if gens.is_empty() {
        return m.identity();
    }
    let len = rng.gen_range(0..=max_len);
    let k = gens.len() as isize;
    let word: Vec<isize> = (0..len)
        .map(|_| {
            let x = rng.gen_range(0..2 * k);
            if x < k {
                x
            } else {
                -(x - k) - 1
            }
        })
        .collect();
    word_product(m, &gens, &word)
}

pub fn random_vertex<R: Rng>(rng: &mut R, degree: usize, depth: usize) -> Vec<usize> {
    (0..depth).map(|_| rng.gen_range(0..degree)).collect()
}

/// Per-trial generator: trial `i` of a run seeded with `seed` uses
/// `seed + i`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64))
}

const WORD_LEN: usize = 6;

fn record(failures: &mut usize, first: &mut Option<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok {
        *failures += 1;
        if first.is_none() {
            *first = Some(what());
        }
    }
}

/// Right-action, decomposition-consistency, prefix and associativity
/// checks on random words, at the given depth.
pub fn action_axioms<M: Machine>(
    m: &M,
    trials: usize,
    depth: usize,
    seed: u64,
) -> Result<Vec<CheckOutcome>> {
    let (mut f_act, mut first_act) = (0, None);
    let (mut f_dec, mut first_dec) = (0, None);
    let (mut f_pre, mut first_pre) = (0, None);
    let (mut f_assoc, mut first_assoc) = (0, None);
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let g = random_element(m, &mut rng, WORD_LEN);
        let h = random_element(m, &mut rng, WORD_LEN);
        let k = random_element(m, &mut rng, WORD_LEN);
        let v = random_vertex(&mut rng, m.degree(), depth);

        let lhs = act_vertex(m, &v, &m.mul(&g, &h))?;
        let rhs = act_vertex(m, &act_vertex(m, &v, &g)?, &h)?;
        record(&mut f_act, &mut first_act, lhs == rhs, || format!("v={v:?} g={g} h={h}"));

        if let Some((&x, rest)) = v.split_first() {
            let d = decompose(m, &g)?;
            let mut expect = vec![d.perm[x]];
            expect.extend(act_vertex(m, rest, &d.restrictions[x])?);
            let got = act_vertex(m, &v, &g)?;
            record(&mut f_dec, &mut first_dec, got == expect, || format!("v={v:?} g={g}"));

            let cut = rng.gen_range(0..=v.len());
            let prefix = act_vertex(m, &v[..cut], &g)?;
            record(&mut f_pre, &mut first_pre, got[..cut] == prefix[..], || {
                format!("v={v:?} g={g} cut={cut}")
            });
        }

        let left = m.mul(&m.mul(&g, &h), &k);
        let right = m.mul(&g, &m.mul(&h, &k));
        let same = left == right && portraits_agree(m, &left, &right, depth)?;
        record(&mut f_assoc, &mut first_assoc, same, || format!("g={g} h={h} k={k}"));
    }
    Ok(vec![
        CheckOutcome::new("right-action", f_act, trials, first_act),
        CheckOutcome::new("decomposition-consistency", f_dec, trials, first_dec),
        CheckOutcome::new("prefix-compatibility", f_pre, trials, first_pre),
        CheckOutcome::new("associativity", f_assoc, trials, first_assoc),
    ])
}

/// Transversal elements lie in pairwise distinct cosets, and random
/// elements find exactly one coset.
pub fn transversal_checks<M: Machine>(m: &M, trials: usize, seed: u64) -> Result<Vec<CheckOutcome>> {
    let ts = m.transversal();
    let (mut f_pair, mut first_pair, mut pairs) = (0, None, 0);
    for (i, s) in ts.iter().enumerate() {
        for (j, t) in ts.iter().enumerate().skip(i + 1) {
            pairs += 1;
            let same = m.in_h(&m.mul(s, &m.inv(t)))?;
            record(&mut f_pair, &mut first_pair, !same, || format!("t_{i} ~ t_{j}"));
        }
    }
    let size_ok = ts.len() == m.degree() && m.in_h(&ts[0])?;
    let (mut f_uni, mut first_uni) = (0, None);
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let g = random_element(m, &mut rng, WORD_LEN);
        let ok = coset_index(m, &g).is_ok();
        record(&mut f_uni, &mut first_uni, ok, || format!("g={g}"));
    }
    Ok(vec![
        CheckOutcome::new(
            "transversal-size",
            usize::from(!size_ok),
            1,
            (!size_ok).then(|| format!("{} elements for degree {}", ts.len(), m.degree())),
        ),
        CheckOutcome::new("transversal-distinct-cosets", f_pair, pairs, first_pair),
        CheckOutcome::new("transversal-uniqueness", f_uni, trials, first_uni),
    ])
}

/// `portrait(gh) = portrait(hg)`, for machines over abelian groups.
pub fn commutation_check<M: Machine>(
    m: &M,
    trials: usize,
    depth: usize,
    seed: u64,
) -> Result<CheckOutcome> {
    let (mut fails, mut first) = (0, None);
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let g = random_element(m, &mut rng, WORD_LEN);
        let h = random_element(m, &mut rng, WORD_LEN);
        let ok = portraits_agree(m, &m.mul(&g, &h), &m.mul(&h, &g), depth)?;
        record(&mut fails, &mut first, ok, || format!("g={g} h={h}"));
    }
    Ok(CheckOutcome::new("commutation", fails, trials, first))
}

/// Desk faithfulness as a check outcome.
pub fn corefree_check<M: Machine>(m: &M, word_length: usize, depth: usize) -> Result<CheckOutcome> {
    let bad = check_corefree_desk(m, word_length, depth)?;
    let total = ball(m, word_length).len().saturating_sub(1);
    Ok(CheckOutcome::new(
        "corefree-desk",
        bad.len(),
        total,
        bad.first().map(|g| format!("{g} is trivial to depth {depth}")),
    ))
}
