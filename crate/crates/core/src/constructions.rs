//! Machine combinators: direct products, the economical power `G^d`, the
//! extension `G^(ω) ⋊ C_2`, and lamplighter wreath products `C_k ≀ G`.

use std::collections::BTreeMap;
use std::fmt;

use crate::engine::{act_vertex, ball, Generator, Machine};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair<A, B> {
    pub left: A,
    pub right: B,
}

impl<A, B> Pair<A, B> {
    pub fn new(left: A, right: B) -> Self {
        Pair { left, right }
    }
}

impl<A: fmt::Display, B: fmt::Display> fmt::Display for Pair<A, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.left, self.right)
    }
}

/// `G_1 × G_2` with `H_1 × H_2` and `f = (f_1, f_2)`.
#[derive(Clone, Debug)]
pub struct DirectProduct<A: Machine, B: Machine> {
    left: A,
    right: B,
    transversal: Vec<Pair<A::Elem, B::Elem>>,
}

impl<A: Machine, B: Machine> DirectProduct<A, B> {
    pub fn new(left: A, right: B) -> Self {
        let mut transversal = Vec::with_capacity(left.degree() * right.degree());
        for s in left.transversal() {
            for t in right.transversal() {
                transversal.push(Pair::new(s.clone(), t.clone()));
            }
        }
        DirectProduct {
            left,
            right,
            transversal,
        }
    }

    pub fn left(&self) -> &A {
        &self.left
    }

    pub fn right(&self) -> &B {
        &self.right
    }
}

impl<A: Machine, B: Machine> Machine for DirectProduct<A, B> {
    type Elem = Pair<A::Elem, B::Elem>;

    fn degree(&self) -> usize {
        self.left.degree() * self.right.degree()
    }

    fn identity(&self) -> Self::Elem {
        Pair::new(self.left.identity(), self.right.identity())
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        Pair::new(
            self.left.mul(&a.left, &b.left),
            self.right.mul(&a.right, &b.right),
        )
    }

    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        Pair::new(self.left.inv(&a.left), self.right.inv(&a.right))
    }

    fn transversal(&self) -> &[Self::Elem] {
        &self.transversal
    }

    fn in_h(&self, g: &Self::Elem) -> Result<bool> {
        Ok(self.left.in_h(&g.left)? && self.right.in_h(&g.right)?)
    }

    fn apply_f(&self, h: &Self::Elem) -> Result<Self::Elem> {
        Ok(Pair::new(
            self.left.apply_f(&h.left)?,
            self.right.apply_f(&h.right)?,
        ))
    }

    fn generators(&self) -> Vec<Generator<Self::Elem>> {
        let l = self.left.generators().into_iter().map(|g| {
            Generator::new(format!("L.{}", g.name), Pair::new(g.elem, self.right.identity()))
        });
        let r = self.right.generators().into_iter().map(|g| {
            Generator::new(format!("R.{}", g.name), Pair::new(self.left.identity(), g.elem))
        });
        l.chain(r).collect()
    }

    fn parabolic_trivial(&self) -> bool {
        self.left.parabolic_trivial() && self.right.parabolic_trivial()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tuple<E>(pub Vec<E>);

impl<E: fmt::Display> fmt::Display for Tuple<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// `G^d` on the `[G:H]`-ary tree: `H × G^{d-1}` and
/// `(h_1, g_2, …, g_d) ↦ (g_2, …, g_d, f(h_1))`.
#[derive(Clone, Debug)]
pub struct EconomicalPower<M: Machine> {
    base: M,
    arity: usize,
    transversal: Vec<Tuple<M::Elem>>,
}

impl<M: Machine> EconomicalPower<M> {
    pub fn new(base: M, arity: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidParameter("power must be at least 1".into()));
        }
        let transversal = base
            .transversal()
            .iter()
            .map(|t| {
                let mut v = vec![base.identity(); arity];
                v[0] = t.clone();
                Tuple(v)
            })
            .collect();
        Ok(EconomicalPower {
            base,
            arity,
            transversal,
        })
    }

    pub fn base(&self) -> &M {
        &self.base
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn embed(&self, coordinate: usize, g: M::Elem) -> Tuple<M::Elem> {
        let mut v = vec![self.base.identity(); self.arity];
        v[coordinate] = g;
        Tuple(v)
    }
}

impl<M: Machine> Machine for EconomicalPower<M> {
    type Elem = Tuple<M::Elem>;

    fn degree(&self) -> usize {
        self.base.degree()
    }

    fn identity(&self) -> Self::Elem {
        Tuple(vec![self.base.identity(); self.arity])
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        Tuple(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| self.base.mul(x, y))
                .collect(),
        )
    }

    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        Tuple(a.0.iter().map(|x| self.base.inv(x)).collect())
    }

    fn transversal(&self) -> &[Self::Elem] {
        &self.transversal
    }

    fn in_h(&self, g: &Self::Elem) -> Result<bool> {
        self.base.in_h(&g.0[0])
    }

    fn apply_f(&self, h: &Self::Elem) -> Result<Self::Elem> {
        let mut out: Vec<M::Elem> = h.0[1..].to_vec();
        out.push(self.base.apply_f(&h.0[0])?);
        Ok(Tuple(out))
    }

    fn generators(&self) -> Vec<Generator<Self::Elem>> {
        let mut out = Vec::new();
        for c in 0..self.arity {
            for g in self.base.generators() {
                out.push(Generator::new(format!("{}@{c}", g.name), self.embed(c, g.elem)));
            }
        }
        out
    }

    fn parabolic_trivial(&self) -> bool {
        self.base.parabolic_trivial()
    }
}

/// An element `(g_0, g_1, …) σ^ε` of `G^(N) ⋊ ⟨σ⟩`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct C2Elem<E> {
    pub vec: BTreeMap<usize, E>,
    pub sigma: bool,
}

impl<E: fmt::Display> fmt::Display for C2Elem<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, (i, e)) in self.vec.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{i}:{e}")?;
        }
        f.write_str("]")?;
        if self.sigma {
            f.write_str("σ")?;
        }
        Ok(())
    }
}

/// The pair swap `2n ↔ 2n+1`.
fn swap_index(i: usize) -> usize {
    i ^ 1
}

/// `G^(ω) ⋊ C_2` with `σ` swapping coordinates `2n ↔ 2n+1`,
/// `Ḣ = H × G^(N∖{0})` and
/// `(a_0, a_1, a_2, a_3, …) ↦ (f(a_0), a_2, a_1, a_4, a_3, …)`.
///
/// Multiplication is `(g, ε)(h, δ) = (g · s^ε(h), ε ⊕ δ)`.
#[derive(Clone, Debug)]
pub struct C2Extension<M: Machine> {
    base: M,
    span: usize,
    transversal: Vec<C2Elem<M::Elem>>,
}

impl<M: Machine> C2Extension<M> {
    /// Generators are the base generators in coordinates `0..4` and `σ`.
    pub fn new(base: M) -> Self {
        Self::with_span(base, 4)
    }

    /// Generators are the base generators in coordinates `0..span` and `σ`.
    pub fn with_span(base: M, span: usize) -> Self {
        let mut transversal = Vec::with_capacity(2 * base.degree());
        for sigma in [false, true] {
            for t in base.transversal() {
                let mut vec = BTreeMap::new();
                if *t != base.identity() {
                    vec.insert(0, t.clone());
                }
                transversal.push(C2Elem { vec, sigma });
            }
        }
        C2Extension {
            base,
            span,
            transversal,
        }
    }

    pub fn base(&self) -> &M {
        &self.base
    }

    pub fn sigma(&self) -> C2Elem<M::Elem> {
        C2Elem {
            vec: BTreeMap::new(),
            sigma: true,
        }
    }

    /// Element supported on the given coordinates, with `ε = 0`.
    pub fn from_coords(&self, coords: impl IntoIterator<Item = (usize, M::Elem)>) -> C2Elem<M::Elem> {
        let id = self.base.identity();
        C2Elem {
            vec: coords.into_iter().filter(|(_, e)| *e != id).collect(),
            sigma: false,
        }
    }

    fn coord(&self, g: &C2Elem<M::Elem>, i: usize) -> M::Elem {
        g.vec.get(&i).cloned().unwrap_or_else(|| self.base.identity())
    }
}

impl<M: Machine> Machine for C2Extension<M> {
    type Elem = C2Elem<M::Elem>;

    fn degree(&self) -> usize {
        2 * self.base.degree()
    }

    fn identity(&self) -> Self::Elem {
        C2Elem {
            vec: BTreeMap::new(),
            sigma: false,
        }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let id = self.base.identity();
        let mut vec = a.vec.clone();
        for (&i, h) in &b.vec {
            let j = if a.sigma { swap_index(i) } else { i };
            let cur = vec.remove(&j).unwrap_or_else(|| id.clone());
            let p = self.base.mul(&cur, h);
            if p != id {
                vec.insert(j, p);
            }
        }
        C2Elem {
            vec,
            sigma: a.sigma ^ b.sigma,
        }
    }

    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        let vec = a
            .vec
            .iter()
            .map(|(&i, g)| {
                let j = if a.sigma { swap_index(i) } else { i };
                (j, self.base.inv(g))
            })
            .collect();
        C2Elem {
            vec,
            sigma: a.sigma,
        }
    }

    fn transversal(&self) -> &[Self::Elem] {
        &self.transversal
    }

    fn in_h(&self, g: &Self::Elem) -> Result<bool> {
        Ok(!g.sigma && self.base.in_h(&self.coord(g, 0))?)
    }

    fn apply_f(&self, h: &Self::Elem) -> Result<Self::Elem> {
        if !self.in_h(h)? {
            return Err(Error::NotInDomain(h.to_string()));
        }
        let mut vec = BTreeMap::new();
        let head = self.base.apply_f(&self.coord(h, 0))?;
        if head != self.base.identity() {
            vec.insert(0, head);
        }
        for (&i, g) in h.vec.range(1..) {
            let j = if i % 2 == 1 { i + 1 } else { i - 1 };
            vec.insert(j, g.clone());
        }
        Ok(C2Elem { vec, sigma: false })
    }

    fn generators(&self) -> Vec<Generator<Self::Elem>> {
        let mut out = Vec::new();
        for c in 0..self.span {
            for g in self.base.generators() {
                out.push(Generator::new(
                    format!("{}@{c}", g.name),
                    self.from_coords([(c, g.elem)]),
                ));
            }
        }
        out.push(Generator::new("σ", self.sigma()));
        out
    }
}

/// `(φ, g)`: finitely many lamps with values in `Z/k`, indexed by
/// positions in `G`, and a base element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LampElem<E> {
    pub lamps: BTreeMap<E, u32>,
    pub base: E,
}

impl<E: fmt::Display> fmt::Display for LampElem<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (p, v)) in self.lamps.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}:{v}")?;
        }
        write!(f, "}}·{}", self.base)
    }
}

/// `C_k^(G) ⋊ G` over a base with trivial parabolic subgroup.
///
/// Multiplication is `(φ_1, g_1)(φ_2, g_2) = (φ_1 + g_1·φ_2, g_1 g_2)` with
/// `(g·φ)(p) = φ(p g)`. The domain is `Ḣ = {Σφ = 0, g ∈ H}` and the
/// virtual endomorphism pushes lamps forward along `f`, dropping lamps at
/// positions outside `H`. Transversal element `(a, t_i)` carries a single
/// lamp of value `a` at the position `t_1`, outside `H`; index `a·m + i`.
#[derive(Clone, Debug)]
pub struct Lamplighter<M: Machine> {
    base: M,
    modulus: u32,
    transversal: Vec<LampElem<M::Elem>>,
}

impl<M: Machine> Lamplighter<M> {
    pub fn new(base: M, modulus: u32) -> Result<Self> {
        if !base.parabolic_trivial() {
            return Err(Error::ParabolicRequired);
        }
        if modulus < 2 {
            return Err(Error::InvalidParameter(format!(
                "lamp group order {modulus} must be at least 2"
            )));
        }
        let ts = base.transversal();
        let anchor = ts.get(1).unwrap_or(&ts[0]).clone();
        let mut transversal = Vec::new();
        for a in 0..modulus {
            for t in ts {
                let mut lamps = BTreeMap::new();
                if a != 0 {
                    lamps.insert(anchor.clone(), a);
                }
                transversal.push(LampElem {
                    lamps,
                    base: t.clone(),
                });
            }
        }
        Ok(Lamplighter {
            base,
            modulus,
            transversal,
        })
    }

    pub fn base(&self) -> &M {
        &self.base
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// `ȧ`: one lamp of value `a` at the identity position.
    pub fn lamp(&self, value: u32) -> LampElem<M::Elem> {
        self.lamp_at(self.base.identity(), value)
    }

    pub fn lamp_at(&self, position: M::Elem, value: u32) -> LampElem<M::Elem> {
        let mut lamps = BTreeMap::new();
        if !value.is_multiple_of(self.modulus) {
            lamps.insert(position, value % self.modulus);
        }
        LampElem {
            lamps,
            base: self.base.identity(),
        }
    }

    pub fn embed(&self, g: M::Elem) -> LampElem<M::Elem> {
        LampElem {
            lamps: BTreeMap::new(),
            base: g,
        }
    }

    fn lamp_sum(&self, g: &LampElem<M::Elem>) -> u32 {
        g.lamps
            .values()
            .fold(0u64, |acc, &v| (acc + v as u64) % self.modulus as u64) as u32
    }

    fn accumulate(&self, lamps: &mut BTreeMap<M::Elem, u32>, position: M::Elem, value: u32) {
        let cur = lamps.remove(&position).unwrap_or(0);
        let next = (cur + value) % self.modulus;
        if next != 0 {
            lamps.insert(position, next);
        }
    }
}

impl<M: Machine> Machine for Lamplighter<M> {
    type Elem = LampElem<M::Elem>;

    fn degree(&self) -> usize {
        self.modulus as usize * self.base.degree()
    }

    fn identity(&self) -> Self::Elem {
        self.embed(self.base.identity())
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut lamps = a.lamps.clone();
        let shift = self.base.inv(&a.base);
        for (q, &v) in &b.lamps {
            self.accumulate(&mut lamps, self.base.mul(q, &shift), v);
        }
        LampElem {
            lamps,
            base: self.base.mul(&a.base, &b.base),
        }
    }

    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        let mut lamps = BTreeMap::new();
        for (q, &v) in &a.lamps {
            self.accumulate(&mut lamps, self.base.mul(q, &a.base), self.modulus - v);
        }
        LampElem {
            lamps,
            base: self.base.inv(&a.base),
        }
    }

    fn transversal(&self) -> &[Self::Elem] {
        &self.transversal
    }

    fn in_h(&self, g: &Self::Elem) -> Result<bool> {
        Ok(self.lamp_sum(g) == 0 && self.base.in_h(&g.base)?)
    }

    fn apply_f(&self, h: &Self::Elem) -> Result<Self::Elem> {
        if !self.in_h(h)? {
            return Err(Error::NotInDomain(h.to_string()));
        }
        let mut lamps = BTreeMap::new();
        for (b, &v) in &h.lamps {
            if !self.base.in_h(b)? {
                continue;
            }
            let a = self.base.apply_f(b)?;
            if lamps.contains_key(&a) {
                return Err(Error::FiberViolation(a.to_string()));
            }
            lamps.insert(a, v);
        }
        Ok(LampElem {
            lamps,
            base: self.base.apply_f(&h.base)?,
        })
    }

    fn generators(&self) -> Vec<Generator<Self::Elem>> {
        let mut out = vec![Generator::new("lamp", self.lamp(1))];
        out.extend(
            self.base
                .generators()
                .into_iter()
                .map(|g| Generator::new(g.name, self.embed(g.elem))),
        );
        out
    }
}

/// Non-identity elements of word length `≤ word_length` that fix the
/// vertex `0^depth`. An empty result supports a trivial parabolic subgroup.
pub fn parabolic_trivial_probe<M: Machine>(
    m: &M,
    depth: usize,
    word_length: usize,
) -> Result<Vec<M::Elem>> {
    let ray = vec![0; depth];
    let id = m.identity();
    let mut out = Vec::new();
    for g in ball(m, word_length) {
        if g != id && act_vertex(m, &ray, &g)? == ray {
            out.push(g);
        }
    }
    Ok(out)
}
