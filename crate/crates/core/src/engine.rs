//! Wreath recursion for an arbitrary virtual endomorphism.
//!
//! A [`Machine`] presents `f: G ≥ H → G` together with a right transversal
//! `t_0, …, t_{m-1}` of `H` in `G` (`t_0` represents `H`). Every element `g`
//! then decomposes as a permutation `π` of the transversal indices and a
//! list of restrictions `g_i = f(t_i · g · t_{π(i)}^{-1})`. Iterating the
//! decomposition gives a right action on words over `{0, …, m-1}`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};

/// A virtual-endomorphism presentation of a self-similar group.
pub trait Machine {
    type Elem: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display;

    /// Index `[G:H]`, the arity of the tree.
    fn degree(&self) -> usize;

    fn identity(&self) -> Self::Elem;

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    /// Right coset representatives; entry 0 represents `H` itself.
    fn transversal(&self) -> &[Self::Elem];

    fn in_h(&self, g: &Self::Elem) -> Result<bool>;

    /// The virtual endomorphism; only defined on `H`.
    fn apply_f(&self, h: &Self::Elem) -> Result<Self::Elem>;

    fn generators(&self) -> Vec<Generator<Self::Elem>>;

    /// Whether the machine asserts that the parabolic subgroup (stabilizer
    /// of the ray `000…`) is trivial, so positions in `H_ω\G` are elements.
    fn parabolic_trivial(&self) -> bool {
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator<E> {
    pub name: String,
    pub elem: E,
}

impl<E> Generator<E> {
    pub fn new(name: impl Into<String>, elem: E) -> Self {
        Generator {
            name: name.into(),
            elem,
        }
    }
}

/// One level of the wreath recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition<E> {
    pub perm: Vec<usize>,
    pub restrictions: Vec<E>,
}

impl<E> Decomposition<E> {
    pub fn is_identity_perm(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// Index of the transversal element sharing the coset `H·x`.
pub fn coset_index<M: Machine>(m: &M, x: &M::Elem) -> Result<usize> {
    let mut found = None;
    for (j, t) in m.transversal().iter().enumerate() {
        if m.in_h(&m.mul(x, &m.inv(t)))? {
            if let Some(prev) = found {
                return Err(Error::MalformedMachine(format!(
                    "{x} lies in the cosets of t_{prev} and t_{j}"
                )));
            }
            found = Some(j);
        }
    }
    found.ok_or_else(|| Error::MalformedMachine(format!("{x} lies in no transversal coset")))
}

pub fn decompose<M: Machine>(m: &M, g: &M::Elem) -> Result<Decomposition<M::Elem>> {
    let degree = m.degree();
    let transversal = m.transversal();
    if transversal.len() != degree {
        return Err(Error::MalformedMachine(format!(
            "transversal has {} elements, degree is {degree}",
            transversal.len()
        )));
    }
    let mut perm = Vec::with_capacity(degree);
    let mut restrictions = Vec::with_capacity(degree);
    let mut hit = vec![false; degree];
    for t in transversal {
        let tg = m.mul(t, g);
        let j = coset_index(m, &tg)?;
        if std::mem::replace(&mut hit[j], true) {
            return Err(Error::MalformedMachine(format!(
                "{g} does not permute the transversal cosets"
            )));
        }
        let h = m.mul(&tg, &m.inv(&transversal[j]));
        restrictions.push(m.apply_f(&h)?);
        perm.push(j);
    }
    Ok(Decomposition { perm, restrictions })
}

/// Image of the vertex `v` under `g` (right action, length preserving).
pub fn act_vertex<M: Machine>(m: &M, v: &[usize], g: &M::Elem) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(v.len());
    let mut cur = g.clone();
    for &x in v {
        if x >= m.degree() {
            return Err(Error::ShapeMismatch(format!(
                "letter {x} outside alphabet of size {}",
                m.degree()
            )));
        }
        let mut d = decompose(m, &cur)?;
        out.push(d.perm[x]);
        cur = d.restrictions.swap_remove(x);
    }
    Ok(out)
}

/// The state of `g` at vertex `v`.
pub fn restriction<M: Machine>(m: &M, g: &M::Elem, v: &[usize]) -> Result<M::Elem> {
    let mut cur = g.clone();
    for &x in v {
        if x >= m.degree() {
            return Err(Error::ShapeMismatch(format!("letter {x} outside alphabet")));
        }
        cur = decompose(m, &cur)?.restrictions.swap_remove(x);
    }
    Ok(cur)
}

/// Root permutations of all restrictions above a fixed depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Portrait {
    pub degree: usize,
    pub depth: usize,
    pub labels: BTreeMap<Vec<usize>, Vec<usize>>,
}

impl Portrait {
    pub fn is_trivial(&self) -> bool {
        self.labels
            .values()
            .all(|p| p.iter().enumerate().all(|(i, &j)| i == j))
    }

    /// Vertices in breadth-first order (by depth, then lexicographically).
    pub fn vertices(&self) -> Vec<&Vec<usize>> {
        let mut v: Vec<_> = self.labels.keys().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        v
    }
}

pub fn portrait<M: Machine>(m: &M, g: &M::Elem, depth: usize) -> Result<Portrait> {
    let mut labels = BTreeMap::new();
    let mut cache: HashMap<M::Elem, Decomposition<M::Elem>> = HashMap::new();
    let mut level: Vec<(Vec<usize>, M::Elem)> = vec![(Vec::new(), g.clone())];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * m.degree());
        for (v, e) in level {
            if !cache.contains_key(&e) {
                let d = decompose(m, &e)?;
                cache.insert(e.clone(), d);
            }
            let d = &cache[&e];
            for (x, r) in d.restrictions.iter().enumerate() {
                let mut w = v.clone();
                w.push(x);
                next.push((w, r.clone()));
            }
            labels.insert(v, d.perm.clone());
        }
        level = next;
    }
    Ok(Portrait {
        degree: m.degree(),
        depth,
        labels,
    })
}

/// Whether `g` acts trivially on all vertices of depth `≤ d`.
///
/// Works level by level on the set of distinct restrictions, so the cost
/// is bounded by the number of states rather than `m^d`.
pub fn is_trivial_to_depth<M: Machine>(m: &M, g: &M::Elem, d: usize) -> Result<bool> {
    let id = m.identity();
    let mut level: HashSet<M::Elem> = HashSet::from([g.clone()]);
    for _ in 0..d {
        level.remove(&id);
        if level.is_empty() {
            return Ok(true);
        }
        let mut next = HashSet::new();
        for e in &level {
            let dec = decompose(m, e)?;
            if !dec.is_identity_perm() {
                return Ok(false);
            }
            next.extend(dec.restrictions);
        }
        level = next;
    }
    Ok(true)
}

/// Whether `portrait(a, depth) == portrait(b, depth)`, computed on the set
/// of distinct restriction pairs instead of every vertex.
pub fn portraits_agree<M: Machine>(m: &M, a: &M::Elem, b: &M::Elem, depth: usize) -> Result<bool> {
    let mut level: HashSet<(M::Elem, M::Elem)> = HashSet::from([(a.clone(), b.clone())]);
    for _ in 0..depth {
        level.retain(|(x, y)| x != y);
        if level.is_empty() {
            return Ok(true);
        }
        let mut next = HashSet::new();
        for (x, y) in &level {
            let dx = decompose(m, x)?;
            let dy = decompose(m, y)?;
            if dx.perm != dy.perm {
                return Ok(false);
            }
            next.extend(dx.restrictions.into_iter().zip(dy.restrictions));
        }
        level = next;
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateStatus {
    Closed,
    BudgetExhausted,
}

impl fmt::Display for StateStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StateStatus::Closed => "closed",
            StateStatus::BudgetExhausted => "budget_exhausted",
        })
    }
}

/// States reachable from an element, in breadth-first discovery order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSet<E> {
    pub elements: Vec<E>,
    pub status: StateStatus,
}

impl<E: Eq + Hash> StateSet<E> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.status == StateStatus::Closed
    }

    pub fn contains(&self, e: &E) -> bool {
        self.elements.contains(e)
    }
}

/// Breadth-first closure of `{g}` under restriction. Stops as soon as more
/// than `budget` distinct states have been found.
pub fn states<M: Machine>(m: &M, g: &M::Elem, budget: usize) -> Result<StateSet<M::Elem>> {
    let mut seen: HashSet<M::Elem> = HashSet::from([g.clone()]);
    let mut order = vec![g.clone()];
    let mut queue = VecDeque::from([g.clone()]);
    while let Some(e) = queue.pop_front() {
        for r in decompose(m, &e)?.restrictions {
            if seen.insert(r.clone()) {
                order.push(r.clone());
                if order.len() > budget {
                    return Ok(StateSet {
                        elements: order,
                        status: StateStatus::BudgetExhausted,
                    });
                }
                queue.push_back(r);
            }
        }
    }
    Ok(StateSet {
        elements: order,
        status: StateStatus::Closed,
    })
}

/// `states` for every generator.
pub fn finite_state_report<M: Machine>(
    m: &M,
    budget: usize,
) -> Result<Vec<(String, StateSet<M::Elem>)>> {
    m.generators()
        .into_iter()
        .map(|g| Ok((g.name, states(m, &g.elem, budget)?)))
        .collect()
}

/// Product of a word of generator indices; negative entries `-(i+1)` stand
/// for the inverse of generator `i`.
pub fn word_product<M: Machine>(m: &M, gens: &[Generator<M::Elem>], word: &[isize]) -> M::Elem {
    word.iter().fold(m.identity(), |acc, &letter| {
        let g = if letter >= 0 {
            gens[letter as usize].elem.clone()
        } else {
            m.inv(&gens[(-letter - 1) as usize].elem)
        };
        m.mul(&acc, &g)
    })
}

/// All distinct elements of word length `≤ radius` over the generators and
/// their inverses, in breadth-first order (the identity first).
pub fn ball<M: Machine>(m: &M, radius: usize) -> Vec<M::Elem> {
    let mut letters = Vec::new();
    for g in m.generators() {
        let inv = m.inv(&g.elem);
        if inv != g.elem {
            letters.push(inv);
        }
        letters.push(g.elem);
    }
    let id = m.identity();
    let mut seen: HashSet<M::Elem> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut frontier = vec![id];
    for _ in 0..radius {
        let mut next = Vec::new();
        for e in &frontier {
            for l in &letters {
                let p = m.mul(e, l);
                if seen.insert(p.clone()) {
                    out.push(p.clone());
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    out
}

/// Cycle notation, e.g. `(0 1)(2 3)`; the identity is `()`.
pub fn format_cycles(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut i = perm[start];
        while i != start {
            seen[i] = true;
            cycle.push(i);
            i = perm[i];
        }
        let body: Vec<String> = cycle.iter().map(usize::to_string).collect();
        out.push_str(&format!("({})", body.join(" ")));
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Compact rendering of a vertex: digits run together when the alphabet
/// fits in one decimal digit, comma separated otherwise; `ε` for the root.
pub fn format_vertex(v: &[usize], degree: usize) -> String {
    if v.is_empty() {
        return "ε".to_string();
    }
    let parts: Vec<String> = v.iter().map(usize::to_string).collect();
    if degree <= 10 {
        parts.concat()
    } else {
        parts.join(",")
    }
}

pub fn parse_vertex(s: &str, degree: usize) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() || s == "ε" {
        return Ok(Vec::new());
    }
    let letters: Vec<usize> = if s.contains(',') || degree > 10 {
        s.split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::ShapeMismatch(format!("bad vertex `{s}`")))?
    } else {
        s.chars()
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::ShapeMismatch(format!("bad vertex `{s}`")))?
    };
    if let Some(x) = letters.iter().find(|&&x| x >= degree) {
        return Err(Error::ShapeMismatch(format!(
            "letter {x} outside alphabet of size {degree}"
        )));
    }
    Ok(letters)
}
