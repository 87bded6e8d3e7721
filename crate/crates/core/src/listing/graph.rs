use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::poset::{bits, Poset};

pub const MAX_SIDE: usize = 64;

/// A bipartite graph with `r` down vertices and `s` up vertices. Edges only
/// join a down vertex to an up vertex and are addressed 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BicolouredGraph {
    r: usize,
    s: usize,
    /// `adj[d]` is the bitmask of up vertices joined to down vertex `d + 1`.
    adj: Vec<u64>,
}

impl BicolouredGraph {
    pub fn empty(r: usize, s: usize) -> Self {
        assert!(
            r <= MAX_SIDE && s <= MAX_SIDE,
            "graph sides are limited to {MAX_SIDE}"
        );
        BicolouredGraph {
            r,
            s,
            adj: vec![0; r],
        }
    }

    pub fn complete(r: usize, s: usize) -> Self {
        let mut g = Self::empty(r, s);
        let row = if s == 64 { u64::MAX } else { (1u64 << s) - 1 };
        g.adj.iter_mut().for_each(|a| *a = row);
        g
    }

    /// The matching `{(1,1), ..., (k,k)}`.
    pub fn matching(r: usize, s: usize, k: usize) -> Self {
        assert!(k <= r.min(s));
        let mut g = Self::empty(r, s);
        for i in 1..=k {
            g.add_edge(i, i);
        }
        g
    }

    pub fn from_edges(r: usize, s: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if r > MAX_SIDE || s > MAX_SIDE {
            return Err(Error::TooLarge {
                what: "graph side",
                value: r.max(s),
                max: MAX_SIDE,
            });
        }
        let mut g = Self::empty(r, s);
        for &(d, u) in edges {
            if d == 0 || d > r || u == 0 || u > s {
                return Err(Error::EdgeIndex {
                    offset: 0,
                    down: d,
                    up: u,
                    r,
                    s,
                });
            }
            g.add_edge(d, u);
        }
        Ok(g)
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, r: usize, s: usize, density: f64) -> Self {
        let mut g = Self::empty(r, s);
        for d in 1..=r {
            for u in 1..=s {
                if rng.gen_bool(density) {
                    g.add_edge(d, u);
                }
            }
        }
        g
    }

    pub fn down_count(&self) -> usize {
        self.r
    }

    pub fn up_count(&self) -> usize {
        self.s
    }

    pub fn has_edge(&self, d: usize, u: usize) -> bool {
        self.adj[d - 1] >> (u - 1) & 1 == 1
    }

    pub fn add_edge(&mut self, d: usize, u: usize) {
        assert!(
            d >= 1 && d <= self.r && u >= 1 && u <= self.s,
            "edge {d}-{u} out of range"
        );
        self.adj[d - 1] |= 1 << (u - 1);
    }

    pub fn remove_edge(&mut self, d: usize, u: usize) {
        self.adj[d - 1] &= !(1 << (u - 1));
    }

    /// Up vertices (0-based bitmask) joined to down vertex `d`.
    pub fn up_neighbours(&self, d: usize) -> u64 {
        self.adj[d - 1]
    }

    /// All edges as 1-based `(down, up)` pairs, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(d, &row)| bits(row).map(move |u| (d + 1, u + 1)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum()
    }

    pub fn down_degree(&self, d: usize) -> usize {
        self.adj[d - 1].count_ones() as usize
    }

    pub fn up_degree(&self, u: usize) -> usize {
        self.adj.iter().filter(|&&a| a >> (u - 1) & 1 == 1).count()
    }

    pub fn is_matching(&self) -> bool {
        (1..=self.r).all(|d| self.down_degree(d) <= 1)
            && (1..=self.s).all(|u| self.up_degree(u) <= 1)
    }

    /// Swaps the sides: the graph of the same part turned upside down.
    pub fn transpose(&self) -> Self {
        let mut g = Self::empty(self.s, self.r);
        for (d, u) in self.edges() {
            g.add_edge(u, d);
        }
        g
    }

    /// The 3-free poset of the single part `b_12(G)`: downs are `0..r`, ups
    /// are `r..r+s`.
    pub fn to_poset(&self) -> Poset {
        let n = self.r + self.s;
        let mut up = vec![0u64; n];
        for (d, &row) in self.adj.iter().enumerate() {
            up[d] = row << self.r;
        }
        Poset::from_up(n, up)
    }
}

impl fmt::Display for BicolouredGraph {
    /// `RxS:d-u,d-u,...`, the body of a `b` token.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.r, self.s)?;
        for (i, (d, u)) in self.edges().into_iter().enumerate() {
            let sep = if i == 0 { ':' } else { ',' };
            write!(f, "{sep}{d}-{u}")?;
        }
        Ok(())
    }
}

impl FromStr for BicolouredGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        super::parse::parse_graph_body(s)
    }
}
