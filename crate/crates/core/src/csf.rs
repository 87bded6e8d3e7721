//! Chromatic symmetric functions.
//!
//! For a poset, a colouring is proper when every colour class is a chain. The
//! coefficient of `m_λ` counts proper colourings whose class sizes are
//! `λ_1, λ_2, ...` in colours `1, 2, ...`; equivalently it is the number of
//! partitions of the vertex set into chains with block sizes `λ`, times
//! `∏_j mult_j(λ)!`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::listing::{BicolouredGraph, LinListing, Part, PartListing};
use crate::poset::{bits, CanonicalKey, Poset};
use crate::symfunc::{Basis, Partition, Rational, SymFunc};

pub const MAX_CSF_VERTICES: usize = 12;

fn check_size(n: usize) -> Result<()> {
    if n > MAX_CSF_VERTICES {
        return Err(Error::TooLarge {
            what: "vertex count",
            value: n,
            max: MAX_CSF_VERTICES,
        });
    }
    Ok(())
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

/// Turns block-size counts into `m`-coefficients.
fn from_block_counts(counts: HashMap<Vec<u32>, u64>) -> SymFunc {
    SymFunc::from_terms(
        Basis::M,
        counts.into_iter().map(|(sizes, count)| {
            let lambda = Partition::new(sizes).expect("block sizes are positive");
            let weight = lambda
                .multiplicities()
                .iter()
                .fold(BigInt::from(count), |acc, &(_, m)| acc * factorial(m));
            (lambda, Rational::from_integer(weight))
        }),
    )
}

/// Counts partitions of `mask` into blocks that are cliques of `compatible`,
/// keyed by the sorted (descending) block sizes.
struct CliquePartitions<'a> {
    compatible: &'a [u64],
    memo: HashMap<u64, Arc<HashMap<Vec<u32>, u64>>>,
}

impl CliquePartitions<'_> {
    fn count(&mut self, mask: u64) -> Arc<HashMap<Vec<u32>, u64>> {
        if mask == 0 {
            return Arc::new(HashMap::from([(Vec::new(), 1)]));
        }
        if let Some(hit) = self.memo.get(&mask) {
            return hit.clone();
        }
        let v = mask.trailing_zeros() as usize;
        let mut blocks = Vec::new();
        self.blocks_with(1 << v, mask & self.compatible[v], &mut blocks);
        let mut out: HashMap<Vec<u32>, u64> = HashMap::new();
        for block in blocks {
            let size = block.count_ones();
            for (sizes, count) in self.count(mask & !block).iter() {
                let mut key = sizes.clone();
                let at = key.partition_point(|&x| x >= size);
                key.insert(at, size);
                *out.entry(key).or_insert(0) += count;
            }
        }
        let out = Arc::new(out);
        self.memo.insert(mask, out.clone());
        out
    }

    /// Every clique containing `block` and drawn from `candidates`.
    fn blocks_with(&self, block: u64, candidates: u64, out: &mut Vec<u64>) {
        out.push(block);
        for w in bits(candidates) {
            let later = candidates & !((2u64 << w) - 1);
            self.blocks_with(block | 1 << w, later & self.compatible[w], out);
        }
    }
}

/// The chromatic symmetric function of a poset, in the `m` basis.
pub fn csf_poset(p: &Poset) -> Result<SymFunc> {
    check_size(p.len())?;
    let compatible: Vec<u64> = (0..p.len()).map(|v| p.comparable(v)).collect();
    let mut counter = CliquePartitions {
        compatible: &compatible,
        memo: HashMap::new(),
    };
    let counts = counter.count(p.all_vertices());
    Ok(from_block_counts((*counts).clone()))
}

/// A finite simple graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<u64>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<SimpleGraph> {
        if n > 64 {
            return Err(Error::TooLarge {
                what: "vertex count",
                value: n,
                max: 64,
            });
        }
        let mut adj = vec![0u64; n];
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            if a != b {
                adj[a] |= 1 << b;
                adj[b] |= 1 << a;
            }
        }
        Ok(SimpleGraph { n, adj })
    }

    /// Vertices joined exactly when they are incomparable in `p`.
    pub fn incomparability(p: &Poset) -> SimpleGraph {
        let n = p.len();
        let adj = (0..n)
            .map(|v| p.all_vertices() & !p.comparable(v) & !(1 << v))
            .collect();
        SimpleGraph { n, adj }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }
}

/// The chromatic symmetric function of a graph (colour classes independent),
/// by walking every set partition of the vertices in restricted-growth order.
pub fn csf_graph(g: &SimpleGraph) -> Result<SymFunc> {
    check_size(g.n)?;
    fn go(g: &SimpleGraph, v: usize, blocks: &mut Vec<u64>, out: &mut HashMap<Vec<u32>, u64>) {
        if v == g.n {
            let mut sizes: Vec<u32> = blocks.iter().map(|b| b.count_ones()).collect();
            sizes.sort_unstable_by(|a, b| b.cmp(a));
            *out.entry(sizes).or_insert(0) += 1;
            return;
        }
        for i in 0..blocks.len() {
            if blocks[i] & g.adj[v] == 0 {
                blocks[i] |= 1 << v;
                go(g, v + 1, blocks, out);
                blocks[i] &= !(1 << v);
            }
        }
        blocks.push(1 << v);
        go(g, v + 1, blocks, out);
        blocks.pop();
    }
    let mut counts = HashMap::new();
    go(g, 0, &mut Vec::new(), &mut counts);
    Ok(from_block_counts(counts))
}

pub fn csf_listing(l: &PartListing) -> Result<SymFunc> {
    check_size(l.vertex_count())?;
    csf_poset(&l.to_poset())
}

/// Linear extension of [`csf_listing`].
pub fn csf_lin(x: &LinListing) -> Result<SymFunc> {
    let mut out = SymFunc::zero(Basis::M);
    for (c, l) in x.terms() {
        out = out.add(&csf_listing(l)?.scale(c));
    }
    Ok(out)
}

/// Checks `csf(P) + csf(P₁₂) = csf(P₁) + csf(P₂)` for the listings
/// `prefix · b_level(G) · suffix` with `G`, `G - e1`, `G - e2`, `G - e1 - e2`.
pub fn verify_modular(
    prefix: &PartListing,
    level: u32,
    graph: &BicolouredGraph,
    suffix: &PartListing,
    e1: (usize, usize),
    e2: (usize, usize),
) -> Result<bool> {
    let (g1, g2, g12) = crate::modular::modular_triple(graph, e1, e2)?;
    let csf_with = |g: &BicolouredGraph| {
        let middle = PartListing::new(vec![Part::graph(level, g.clone())]);
        csf_listing(&prefix.concat(&middle).concat(suffix))
    };
    let lhs = csf_with(graph)?.add(&csf_with(&g12)?);
    let rhs = csf_with(&g1)?.add(&csf_with(&g2)?);
    Ok(lhs == rhs)
}

/// Memo table from canonical poset keys to chromatic symmetric functions.
///
/// Safe to share between threads; the first value stored for a key wins and
/// is never replaced. With a capacity, new keys are no longer stored once the
/// table is full.
#[derive(Debug, Default)]
pub struct CsfCache {
    table: RwLock<HashMap<CanonicalKey, Arc<SymFunc>>>,
    capacity: Option<usize>,
}

impl CsfCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity_limit(capacity: Option<usize>) -> Self {
        CsfCache {
            table: RwLock::default(),
            capacity,
        }
    }

    pub fn len(&self) -> usize {
        self.table.read().expect("csf cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get_or_compute(&self, p: &Poset) -> Result<Arc<SymFunc>> {
        let key = p.canonical_key();
        if let Some(hit) = self.table.read().expect("csf cache poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let value = Arc::new(csf_poset(p)?);
        let mut table = self.table.write().expect("csf cache poisoned");
        if let Some(hit) = table.get(&key) {
            return Ok(hit.clone());
        }
        if self.capacity.is_none_or(|cap| table.len() < cap) {
            table.insert(key, value.clone());
        }
        Ok(value)
    }
}
