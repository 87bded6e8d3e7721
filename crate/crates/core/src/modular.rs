//! The modular law on bicoloured graphs and the algorithms built on it.
//!
//! `V_r^s` is the space of formal rational combinations of bicoloured graphs
//! with `r` down and `s` up vertices, modulo the modular relation
//! `G + G₁₂ ≡ G₁ + G₂`. The probability functionals `F_k` are well defined on
//! it, and the udu (or dud) vertex words form a dual basis.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::listing::{two_level_word_to_graph, BicolouredGraph, LinListing, Part, PartListing};
use crate::poset::CanonicalKey;
use crate::symfunc::{Basis, Partition, Rational, SymFunc};

/// Largest small side accepted by [`functionals`].
pub const MAX_FUNCTIONAL_SIDE: usize = 8;
/// Largest small side accepted by [`matching_reduction`].
pub const MAX_MATCHING_SIDE: usize = 6;

type Edge = (usize, usize);

/// `(G - e1, G - e2, G - e1 - e2)` for two edges of `G` sharing exactly one
/// endpoint.
pub fn modular_triple(
    g: &BicolouredGraph,
    e1: Edge,
    e2: Edge,
) -> Result<(BicolouredGraph, BicolouredGraph, BicolouredGraph)> {
    let present = |(d, u): Edge| {
        d >= 1 && d <= g.down_count() && u >= 1 && u <= g.up_count() && g.has_edge(d, u)
    };
    for e in [e1, e2] {
        if !present(e) {
            return Err(Error::EdgePair(format!(
                "{}-{} is not an edge of {g}",
                e.0, e.1
            )));
        }
    }
    if (e1.0 == e2.0) == (e1.1 == e2.1) {
        return Err(Error::EdgePair(format!(
            "{}-{} and {}-{} must share exactly one endpoint",
            e1.0, e1.1, e2.0, e2.1
        )));
    }
    let without = |edges: &[Edge]| {
        let mut h = g.clone();
        for &(d, u) in edges {
            h.remove_edge(d, u);
        }
        h
    };
    Ok((without(&[e1]), without(&[e2]), without(&[e1, e2])))
}

/// Values `F_0, ..., F_min(r,s)` of the probability functionals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalVector {
    values: Vec<Rational>,
}

impl FunctionalVector {
    pub fn new(values: Vec<Rational>) -> Self {
        FunctionalVector { values }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, k: usize) -> Rational {
        self.values.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> Rational {
        self.values.iter().cloned().sum()
    }

    fn add_scaled(&mut self, c: &Rational, other: &FunctionalVector) {
        if self.values.len() < other.values.len() {
            self.values.resize(other.values.len(), Rational::zero());
        }
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += c * b;
        }
    }
}

impl fmt::Display for FunctionalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// Counts injections of the small side of `g` into the large side, by the
/// number of edges of `g` they use. `counts[k]` is the tally for `k` edges.
fn injection_counts(g: &BicolouredGraph) -> Vec<u128> {
    let (r, s) = (g.down_count(), g.up_count());
    let small = r.min(s);
    let large = r.max(s);
    // Row `l` of the large side, as a bitmask over the small side.
    let rows: Vec<u64> = (1..=large)
        .map(|l| {
            (1..=small).fold(0u64, |acc, m| {
                let hit = if r >= s {
                    g.has_edge(l, m)
                } else {
                    g.has_edge(m, l)
                };
                acc | (hit as u64) << (m - 1)
            })
        })
        .collect();
    let width = small + 1;
    let mut table = vec![0u128; (1usize << small) * width];
    table[0] = 1;
    for &row in &rows {
        let mut next = table.clone();
        for used in 0..1usize << small {
            for k in 0..width {
                let count = table[used * width + k];
                if count == 0 {
                    continue;
                }
                let mut free = !used & ((1 << small) - 1);
                while free != 0 {
                    let m = free.trailing_zeros() as usize;
                    free &= free - 1;
                    let hit = (row >> m & 1) as usize;
                    next[(used | 1 << m) * width + k + hit] += count;
                }
            }
        }
        table = next;
    }
    let full = (1usize << small) - 1;
    table[full * width..].to_vec()
}

/// The probability functionals of `g`: `F_k` is the chance that a uniformly
/// random maximal matching of `K_{r,s}` shares exactly `k` edges with `g`.
pub fn functionals(g: &BicolouredGraph) -> Result<FunctionalVector> {
    let small = g.down_count().min(g.up_count());
    if small > MAX_FUNCTIONAL_SIDE {
        return Err(Error::TooLarge {
            what: "smaller graph side",
            value: small,
            max: MAX_FUNCTIONAL_SIDE,
        });
    }
    let counts = injection_counts(g);
    let total: u128 = counts.iter().sum();
    let total = BigInt::from(total);
    Ok(FunctionalVector::new(
        counts
            .into_iter()
            .map(|c| Rational::new(BigInt::from(c), total.clone()))
            .collect(),
    ))
}

fn vertex_word(runs: &[(u32, usize)]) -> PartListing {
    PartListing::new(
        runs.iter()
            .flat_map(|&(level, count)| std::iter::repeat_n(Part::vertex(level), count))
            .collect(),
    )
}

/// The udu vector `U_k = v2^(s-k) v1^r v2^k`.
pub fn udu(r: usize, s: usize, k: usize) -> Result<PartListing> {
    if k > s {
        return Err(Error::Range(format!("udu index {k} exceeds s = {s}")));
    }
    Ok(vertex_word(&[(2, s - k), (1, r), (2, k)]))
}

/// The dud vector `D_k = v1^k v2^s v1^(r-k)`.
pub fn dud(r: usize, s: usize, k: usize) -> Result<PartListing> {
    if k > r {
        return Err(Error::Range(format!("dud index {k} exceeds r = {r}")));
    }
    Ok(vertex_word(&[(1, k), (2, s), (1, r - k)]))
}

/// `g` as a convex combination of udu words (when `r >= s`) or dud words.
pub fn decompose_dual(g: &BicolouredGraph) -> Result<Vec<(Rational, PartListing)>> {
    let (r, s) = (g.down_count(), g.up_count());
    let f = functionals(g)?;
    let mut out = Vec::new();
    for (k, c) in f.values().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let word = if r >= s { udu(r, s, k)? } else { dud(r, s, k)? };
        out.push((c.clone(), word));
    }
    Ok(out)
}

/// Bicoloured isomorphism class of a graph. Two graphs with the same sides
/// are bicoloured-isomorphic exactly when their two-level posets are
/// isomorphic, so the poset canonical key serves as the invariant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphKey {
    pub r: usize,
    pub s: usize,
    key: CanonicalKey,
}

impl GraphKey {
    pub fn of(g: &BicolouredGraph) -> GraphKey {
        GraphKey {
            r: g.down_count(),
            s: g.up_count(),
            key: g.to_poset().canonical_key(),
        }
    }
}

/// A formal rational combination of graphs in `V_r^s`, merged up to
/// isomorphism. Terms keep first-insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinGraph {
    r: usize,
    s: usize,
    terms: Vec<(Rational, BicolouredGraph)>,
    index: BTreeMap<GraphKey, usize>,
}

impl LinGraph {
    pub fn new(r: usize, s: usize) -> LinGraph {
        LinGraph {
            r,
            s,
            terms: Vec::new(),
            index: BTreeMap::new(),
        }
    }

    pub fn down_count(&self) -> usize {
        self.r
    }

    pub fn up_count(&self) -> usize {
        self.s
    }

    pub fn push(&mut self, coeff: Rational, g: BicolouredGraph) -> Result<()> {
        if (g.down_count(), g.up_count()) != (self.r, self.s) {
            return Err(Error::Range(format!(
                "a {}x{} graph does not belong to V_{}^{}",
                g.down_count(),
                g.up_count(),
                self.r,
                self.s
            )));
        }
        let key = GraphKey::of(&g);
        match self.index.get(&key) {
            Some(&i) => self.terms[i].0 += coeff,
            None => {
                self.index.insert(key, self.terms.len());
                self.terms.push((coeff, g));
            }
        }
        Ok(())
    }

    /// Nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &BicolouredGraph)> {
        self.terms
            .iter()
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, g)| (c, g))
    }

    pub fn len(&self) -> usize {
        self.terms().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn coeff(&self, g: &BicolouredGraph) -> Rational {
        self.index
            .get(&GraphKey::of(g))
            .map_or_else(Rational::zero, |&i| self.terms[i].0.clone())
    }

    /// `Σ c·F(G)` over the terms.
    pub fn functionals(&self) -> Result<FunctionalVector> {
        let mut out = FunctionalVector::new(vec![Rational::zero(); self.r.min(self.s) + 1]);
        for (c, g) in self.terms() {
            out.add_scaled(c, &functionals(g)?);
        }
        Ok(out)
    }
}

impl fmt::Display for LinGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, g)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{c} {g}")?;
        }
        Ok(())
    }
}

/// The first vertex of degree at least two (downs before ups) and its two
/// smallest edges.
fn rewrite_pair(g: &BicolouredGraph) -> Option<(Edge, Edge)> {
    for d in 1..=g.down_count() {
        let ups: Vec<usize> = crate::poset::bits(g.up_neighbours(d)).take(2).collect();
        if ups.len() == 2 {
            return Some(((d, ups[0] + 1), (d, ups[1] + 1)));
        }
    }
    for u in 1..=g.up_count() {
        let downs: Vec<usize> = (1..=g.down_count())
            .filter(|&d| g.has_edge(d, u))
            .take(2)
            .collect();
        if downs.len() == 2 {
            return Some(((downs[0], u), (downs[1], u)));
        }
    }
    None
}

/// Rewrites `g` with the modular relation until only matchings remain, and
/// returns the combination over the standard matchings `M_k` in order of `k`.
pub fn matching_reduction(g: &BicolouredGraph) -> Result<LinGraph> {
    let (r, s) = (g.down_count(), g.up_count());
    if r.min(s) > MAX_MATCHING_SIDE {
        return Err(Error::TooLarge {
            what: "smaller graph side",
            value: r.min(s),
            max: MAX_MATCHING_SIDE,
        });
    }
    // Graphs with more edges are rewritten first, so none is seen twice.
    let mut pending: BTreeMap<(std::cmp::Reverse<usize>, GraphKey), (Rational, BicolouredGraph)> =
        BTreeMap::new();
    let add = |pending: &mut BTreeMap<_, (Rational, BicolouredGraph)>,
               c: Rational,
               h: BicolouredGraph| {
        let slot = pending
            .entry((std::cmp::Reverse(h.edge_count()), GraphKey::of(&h)))
            .or_insert_with(|| (Rational::zero(), h));
        slot.0 += c;
    };
    add(&mut pending, Rational::one(), g.clone());
    let mut by_size = vec![Rational::zero(); r.min(s) + 1];
    while let Some((_, (c, h))) = pending.pop_first() {
        if c.is_zero() {
            continue;
        }
        match rewrite_pair(&h) {
            None => by_size[h.edge_count()] += c,
            Some((e1, e2)) => {
                let (g1, g2, g12) = modular_triple(&h, e1, e2)?;
                add(&mut pending, c.clone(), g1);
                add(&mut pending, c.clone(), g2);
                add(&mut pending, -c, g12);
            }
        }
    }
    let mut out = LinGraph::new(r, s);
    for (k, c) in by_size.into_iter().enumerate() {
        if !c.is_zero() {
            out.push(c, BicolouredGraph::matching(r, s, k))?;
        }
    }
    Ok(out)
}

fn shifted(word: &PartListing, by: u32) -> Vec<Part> {
    word.parts()
        .iter()
        .map(|p| match p {
            Part::Vertex { level } => Part::vertex(level + by),
            Part::Graph { level, graph } => Part::graph(level + by, graph.clone()),
        })
        .collect()
}

/// Replaces graph parts, leftmost first, by their udu/dud decompositions
/// until every listing is vertex-only.
pub fn reduce_listing(input: &LinListing) -> Result<LinListing> {
    let mut stack: Vec<(Rational, PartListing)> = input.terms().iter().rev().cloned().collect();
    let mut out: Vec<(Rational, PartListing)> = Vec::new();
    while let Some((c, l)) = stack.pop() {
        let Some(i) = l
            .parts()
            .iter()
            .position(|p| matches!(p, Part::Graph { .. }))
        else {
            out.push((c, l));
            continue;
        };
        let Part::Graph { level, graph } = &l.parts()[i] else {
            unreachable!("position matched a graph part")
        };
        let words = decompose_dual(graph)?;
        for (w, word) in words.into_iter().rev() {
            let mut parts = l.parts()[..i].to_vec();
            parts.extend(shifted(&word, level - 1));
            parts.extend_from_slice(&l.parts()[i + 1..]);
            stack.push((&c * w, PartListing::new(parts)));
        }
    }
    Ok(LinListing::from_terms(out))
}

/// The graph of `v2^(s-k-1) v1^r v2^k v1`, the udu word `U_k` with its
/// leading up vertex moved to the end as a down vertex.
pub fn circulate_udu(r: usize, s: usize, k: usize) -> Result<BicolouredGraph> {
    if k >= s {
        return Err(Error::Range(format!(
            "circulation needs k < s, got k = {k}, s = {s}"
        )));
    }
    two_level_word_to_graph(vertex_word(&[(2, s - k - 1), (1, r), (2, k), (1, 1)]).parts())
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// The `e`-expansion of the 3-free poset of `g`, built stage by stage: at
/// `V_r^s` the `U_s` share is peeled off as `r!·s!·e_(r,s)` and every other
/// udu word is circulated into `V_(r+1)^(s-1)`.
pub fn three_free_e_expansion(g: &BicolouredGraph) -> Result<SymFunc> {
    let g = if g.down_count() < g.up_count() {
        g.transpose()
    } else {
        g.clone()
    };
    let (mut r, mut s) = (g.down_count(), g.up_count());
    let mut stage = LinGraph::new(r, s);
    stage.push(Rational::one(), g)?;
    let mut out = SymFunc::zero(Basis::E);
    loop {
        let mut next = LinGraph::new(r + 1, s.saturating_sub(1));
        let mut peeled = Rational::zero();
        for (c, h) in stage.terms() {
            let f = functionals(h)?;
            peeled += c * f.get(s);
            for k in 0..s {
                let fk = f.get(k);
                if !fk.is_zero() {
                    next.push(c * fk, circulate_udu(r, s, k)?)?;
                }
            }
        }
        if !peeled.is_zero() {
            let lambda = Partition::new(
                [r as u32, s as u32]
                    .into_iter()
                    .filter(|&x| x > 0)
                    .collect(),
            )?;
            let weight = Rational::from_integer(factorial(r) * factorial(s));
            out.add_term(lambda, peeled * weight);
        }
        if s == 0 || next.is_empty() {
            return Ok(out);
        }
        debug_assert!(next.terms().all(|(c, _)| c.is_positive()));
        stage = next;
        r += 1;
        s -= 1;
    }
}

/// One representative of every bicoloured graph with the given sides, up to
/// isomorphism, ordered by edge count and then by key.
pub fn bicoloured_graphs_up_to_iso(r: usize, s: usize) -> Result<Vec<BicolouredGraph>> {
    if r * s > 20 {
        return Err(Error::TooLarge {
            what: "r*s for exhaustive graph listing",
            value: r * s,
            max: 20,
        });
    }
    // Rows are kept weakly increasing, which loses no isomorphism class.
    let mut rows = vec![0u64; r];
    let mut seen: BTreeMap<(usize, GraphKey), BicolouredGraph> = BTreeMap::new();
    fn go(
        d: usize,
        r: usize,
        s: usize,
        rows: &mut Vec<u64>,
        seen: &mut BTreeMap<(usize, GraphKey), BicolouredGraph>,
    ) {
        if d == r {
            let mut g = BicolouredGraph::empty(r, s);
            for (i, &row) in rows.iter().enumerate() {
                for u in crate::poset::bits(row) {
                    g.add_edge(i + 1, u + 1);
                }
            }
            seen.entry((g.edge_count(), GraphKey::of(&g))).or_insert(g);
            return;
        }
        let start = if d == 0 { 0 } else { rows[d - 1] };
        for row in start..1u64 << s {
            rows[d] = row;
            go(d + 1, r, s, rows, seen);
        }
    }
    go(0, r, s, &mut rows, &mut seen);
    Ok(seen.into_values().collect())
}
