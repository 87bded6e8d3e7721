//! Finite strict partial orders on vertices `0..n`.
//!
//! Relations are stored as bitsets (`up[i]` holds every `j` with `i < j`), so
//! posets are limited to [`MAX_VERTICES`] vertices.

mod canon;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symfunc::Partition;

pub use canon::{canonical_form, CanonicalKey};

pub const MAX_VERTICES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    up: Vec<u64>,
    down: Vec<u64>,
}

#[inline]
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

#[inline]
fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl Poset {
    /// Transitive closure of `pairs`, where `(i, j)` means `i < j`.
    pub fn from_relations(n: usize, pairs: &[(usize, usize)]) -> Result<Poset> {
        if n > MAX_VERTICES {
            return Err(Error::TooLarge {
                what: "vertex count",
                value: n,
                max: MAX_VERTICES,
            });
        }
        let mut up = vec![0u64; n];
        for &(i, j) in pairs {
            for v in [i, j] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            up[i] |= 1 << j;
        }
        // Warshall over bitsets.
        for k in 0..n {
            for i in 0..n {
                if up[i] >> k & 1 == 1 {
                    up[i] |= up[k];
                }
            }
        }
        if let Some(i) = (0..n).find(|&i| up[i] >> i & 1 == 1) {
            return Err(Error::Cycle(i));
        }
        Ok(Self::from_up(n, up))
    }

    /// Builds a poset from an already transitive, acyclic up-relation.
    pub(crate) fn from_up(n: usize, up: Vec<u64>) -> Poset {
        let mut down = vec![0u64; n];
        for (i, &row) in up.iter().enumerate() {
            for j in bits(row) {
                down[j] |= 1 << i;
            }
        }
        let p = Poset { n, up, down };
        debug_assert!(p.is_valid());
        p
    }

    fn is_valid(&self) -> bool {
        (0..self.n).all(|i| {
            self.up[i] >> i & 1 == 0
                && self.up[i] & self.down[i] == 0
                && bits(self.up[i]).all(|j| self.up[j] & !self.up[i] == 0)
        })
    }

    pub fn antichain(n: usize) -> Poset {
        Self::from_up(n, vec![0; n])
    }

    pub fn chain(n: usize) -> Poset {
        let up = (0..n).map(|i| full(n) & !full(i + 1)).collect();
        Self::from_up(n, up)
    }

    /// The graded poset with `λ_i` vertices of rank `i`, each rank below all
    /// higher ranks. Ranks are taken in the order of the partition's parts.
    pub fn graded(ranks: &[u32]) -> Poset {
        let n: usize = ranks.iter().map(|&r| r as usize).sum();
        let mut up = Vec::with_capacity(n);
        let mut start = 0;
        for &r in ranks {
            let end = start + r as usize;
            up.extend(std::iter::repeat_n(full(n) & !full(end), r as usize));
            start = end;
        }
        Self::from_up(n, up)
    }

    pub fn graded_partition(lambda: &Partition) -> Poset {
        Self::graded(lambda.parts())
    }

    /// A 3-chain `0 < 1 < 2` plus an isolated vertex `3`.
    pub fn three_plus_one() -> Poset {
        Self::from_relations(4, &[(0, 1), (1, 2)]).expect("valid relations")
    }

    /// Two disjoint 2-chains `0 < 1` and `2 < 3`.
    pub fn two_plus_two() -> Poset {
        Self::from_relations(4, &[(0, 1), (2, 3)]).expect("valid relations")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.up[i] >> j & 1 == 1
    }

    #[inline]
    pub fn above(&self, i: usize) -> u64 {
        self.up[i]
    }

    #[inline]
    pub fn below(&self, i: usize) -> u64 {
        self.down[i]
    }

    #[inline]
    pub fn comparable(&self, i: usize) -> u64 {
        self.up[i] | self.down[i]
    }

    pub fn all_vertices(&self) -> u64 {
        full(self.n)
    }

    /// The full strict relation, sorted.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| bits(self.up[i]).map(move |j| (i, j)))
            .collect()
    }

    pub fn dual(&self) -> Poset {
        Poset {
            n: self.n,
            up: self.down.clone(),
            down: self.up.clone(),
        }
    }

    /// The subposet induced on `vertices`, renumbered in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Poset {
        let m = vertices.len();
        let up = vertices
            .iter()
            .map(|&v| {
                vertices
                    .iter()
                    .enumerate()
                    .filter(|&(_, &w)| self.lt(v, w))
                    .fold(0u64, |acc, (k, _)| acc | 1 << k)
            })
            .collect();
        Self::from_up(m, up)
    }

    /// Renames vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Poset {
        assert_eq!(perm.len(), self.n, "relabelling must cover every vertex");
        let mut up = vec![0u64; self.n];
        for v in 0..self.n {
            up[perm[v]] = bits(self.up[v]).fold(0u64, |acc, w| acc | 1 << perm[w]);
        }
        Self::from_up(self.n, up)
    }

    pub fn minimal_elements(&self) -> u64 {
        (0..self.n)
            .filter(|&i| self.down[i] == 0)
            .fold(0, |acc, i| acc | 1 << i)
    }

    /// Some split `(X, Y)` with both parts nonempty and every `x` below every
    /// `y`. Valid splits are nested, so the one with smallest `X` is unique.
    pub fn ordinal_split(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let all = full(self.n);
        let mut best: Option<u64> = None;
        for v in 0..self.n {
            // Anything not strictly above a member of X must also be in X.
            let mut x = 1u64 << v;
            loop {
                let next = bits(x).fold(x, |acc, w| acc | (all & !self.up[w]));
                if next == x {
                    break;
                }
                x = next;
            }
            if x != all && best.is_none_or(|b| x.count_ones() < b.count_ones()) {
                best = Some(x);
            }
        }
        best.map(|x| (bits(x).collect(), bits(all & !x).collect()))
    }

    /// Whether some vertex subset induces a copy of `pattern`.
    pub fn contains_induced(&self, pattern: &Poset) -> bool {
        fn extend(host: &Poset, pattern: &Poset, image: &mut Vec<usize>, used: u64) -> bool {
            let k = image.len();
            if k == pattern.n {
                return true;
            }
            for v in 0..host.n {
                if used >> v & 1 == 1 {
                    continue;
                }
                let consistent = image.iter().enumerate().all(|(i, &w)| {
                    host.lt(w, v) == pattern.lt(i, k) && host.lt(v, w) == pattern.lt(k, i)
                });
                if consistent {
                    image.push(v);
                    if extend(host, pattern, image, used | 1 << v) {
                        return true;
                    }
                    image.pop();
                }
            }
            false
        }
        if pattern.n > self.n {
            return false;
        }
        extend(self, pattern, &mut Vec::with_capacity(pattern.n), 0)
    }

    /// No 3-chain with a fourth vertex incomparable to all of it.
    pub fn is_3plus1_free(&self) -> bool {
        for y in 0..self.n {
            for x in bits(self.down[y]) {
                for z in bits(self.up[y]) {
                    let seen = self.comparable(x) | self.comparable(y) | self.comparable(z);
                    let others = full(self.n) & !seen & !(1 << x | 1 << y | 1 << z);
                    if others != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// No pair of relations `a < b`, `c < d` with `a ∥ d` and `c ∥ b`.
    pub fn is_2plus2_free(&self) -> bool {
        for a in 0..self.n {
            for b in bits(self.up[a]) {
                for c in 0..self.n {
                    // c must not be below b, and d must avoid up(a).
                    if c == a || self.lt(c, b) {
                        continue;
                    }
                    let ds = self.up[c] & !self.up[a] & !(1 << a);
                    if ds != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Every vertex is minimal or maximal.
    pub fn is_3_free(&self) -> bool {
        (0..self.n).all(|y| self.down[y] == 0 || self.up[y] == 0)
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        canonical_form(self).0
    }

    /// The isomorphic copy numbered in canonical order.
    pub fn canonical(&self) -> Poset {
        let (_, order) = canonical_form(self);
        let mut perm = vec![0; self.n];
        for (pos, &v) in order.iter().enumerate() {
            perm[v] = pos;
        }
        self.relabel(&perm)
    }

    pub fn is_isomorphic(&self, other: &Poset) -> bool {
        self.n == other.n && self.canonical_key() == other.canonical_key()
    }

    /// Every order ideal (down-closed subset) as a bitmask.
    pub fn order_ideals(&self) -> Vec<u64> {
        (0..=full(self.n))
            .filter(|&s| bits(s).all(|v| self.down[v] & !s == 0))
            .collect()
    }

    /// Adds a new maximal vertex `n` whose strict down-set is `ideal`.
    pub fn with_maximal(&self, ideal: u64) -> Poset {
        let n = self.n + 1;
        let mut up = self.up.clone();
        for v in bits(ideal) {
            up[v] |= 1 << self.n;
        }
        up.push(0);
        Self::from_up(n, up)
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            n: self.n,
            lt: self.relations().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }

    pub fn from_json(json: &PosetJson) -> Result<Poset> {
        let pairs: Vec<(usize, usize)> = json.lt.iter().map(|p| (p[0], p[1])).collect();
        Poset::from_relations(json.n, &pairs)
    }
}

impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let json = serde_json::to_string(&self.to_json()).map_err(|_| fmt::Error)?;
        f.write_str(&json)
    }
}

/// `{"n": 4, "lt": [[0,1],[1,2],[0,2]]}`; input may be any generating set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub n: usize,
    pub lt: Vec<[usize; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PosetClass {
    All,
    ThreePlusOneFree,
    /// (3+1)-free and (2+2)-free: the unit interval orders.
    BothFree,
}

impl PosetClass {
    pub fn label(self) -> &'static str {
        match self {
            PosetClass::All => "all",
            PosetClass::ThreePlusOneFree => "3p1free",
            PosetClass::BothFree => "both",
        }
    }

    pub fn contains(self, p: &Poset) -> bool {
        match self {
            PosetClass::All => true,
            PosetClass::ThreePlusOneFree => p.is_3plus1_free(),
            PosetClass::BothFree => p.is_3plus1_free() && p.is_2plus2_free(),
        }
    }

    /// Largest vertex count [`enumerate_posets`] accepts for the class.
    pub fn max_enumeration(self) -> usize {
        match self {
            PosetClass::All => 7,
            PosetClass::ThreePlusOneFree | PosetClass::BothFree => 10,
        }
    }
}

impl fmt::Display for PosetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for PosetClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "all" => Ok(PosetClass::All),
            "3p1free" | "3+1-free" | "three-plus-one-free" => Ok(PosetClass::ThreePlusOneFree),
            "both" | "both-free" | "unit-interval" | "uio" => Ok(PosetClass::BothFree),
            _ => Err(Error::Range(format!(
                "unknown poset class `{s}` (expected all, 3p1free or both)"
            ))),
        }
    }
}

/// One representative per isomorphism class of `class` posets on `n`
/// vertices, each numbered canonically and sorted by canonical key.
///
/// All three classes are closed under deleting a maximal vertex, so every
/// class member on `n` vertices is a class member on `n - 1` vertices with a
/// new maximal vertex placed over one of its order ideals.
pub fn enumerate_posets(n: usize, class: PosetClass) -> Result<Vec<Poset>> {
    let max = class.max_enumeration();
    if n == 0 || n > max {
        return Err(Error::Range(format!(
            "enumeration of class {class} supports 1 <= n <= {max}, got {n}"
        )));
    }
    let mut level: Vec<Poset> = vec![Poset::antichain(1)];
    for _ in 1..n {
        let found: Vec<(CanonicalKey, Poset)> = level
            .par_iter()
            .flat_map_iter(|p| {
                p.order_ideals()
                    .into_iter()
                    .map(|ideal| p.with_maximal(ideal))
                    .filter(|q| class.contains(q))
                    .map(|q| {
                        let c = q.canonical();
                        (c.canonical_key(), c)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        let mut merged: BTreeMap<CanonicalKey, Poset> = BTreeMap::new();
        for (k, p) in found {
            merged.entry(k).or_insert(p);
        }
        level = merged.into_values().collect();
    }
    Ok(level)
}
