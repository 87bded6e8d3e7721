//! Part listings: words of vertex parts `v_i` and bicoloured graph parts
//! `b_{i,i+1}(G)` on integer levels, and the poset each word describes.
//!
//! For vertices `x`, `y` of a listing, `x < y` when `x` is at least two levels
//! below `y`, or exactly one level below and either its part comes strictly
//! earlier or a graph edge joins them inside a shared part.
//!
//! Vertices are numbered part by part; inside a graph part the `r` down
//! vertices come first, then the `s` up vertices. Graph edges are written
//! 1-based as `(down, up)`, matching the text grammar.

mod graph;
mod parse;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{bits, Poset};
use crate::symfunc::Rational;

pub use graph::{BicolouredGraph, MAX_SIDE};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    Vertex {
        level: u32,
    },
    /// Down vertices on `level`, up vertices on `level + 1`.
    Graph {
        level: u32,
        graph: BicolouredGraph,
    },
}

impl Part {
    pub fn vertex(level: u32) -> Part {
        Part::Vertex { level }
    }

    pub fn graph(level: u32, graph: BicolouredGraph) -> Part {
        Part::Graph { level, graph }
    }

    pub fn min_level(&self) -> u32 {
        match self {
            Part::Vertex { level } | Part::Graph { level, .. } => *level,
        }
    }

    pub fn max_level(&self) -> u32 {
        match self {
            Part::Vertex { level } => *level,
            Part::Graph { level, .. } => level + 1,
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            Part::Vertex { .. } => 1,
            Part::Graph { graph, .. } => graph.down_count() + graph.up_count(),
        }
    }

    /// Level of the `k`-th vertex of this part.
    fn vertex_level(&self, k: usize) -> u32 {
        match self {
            Part::Vertex { level } => *level,
            Part::Graph { level, graph } => {
                if k < graph.down_count() {
                    *level
                } else {
                    level + 1
                }
            }
        }
    }

    fn with_level(&self, new: u32) -> Part {
        match self {
            Part::Vertex { .. } => Part::Vertex { level: new },
            Part::Graph { graph, .. } => Part::Graph {
                level: new,
                graph: graph.clone(),
            },
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PartListing {
    parts: Vec<Part>,
}

/// A rewritten listing together with where each vertex went:
/// old vertex `v` is vertex `relabel[v]` of `listing`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rewritten {
    pub listing: PartListing,
    pub relabel: Vec<usize>,
}

/// Parts carried along with the original ids of their vertices.
struct Tracked {
    parts: Vec<Part>,
    ids: Vec<Vec<usize>>,
}

impl Tracked {
    fn new(l: &PartListing) -> Tracked {
        let mut next = 0;
        let ids = l
            .parts
            .iter()
            .map(|p| {
                let k = p.vertex_count();
                next += k;
                (next - k..next).collect()
            })
            .collect();
        Tracked {
            parts: l.parts.clone(),
            ids,
        }
    }

    fn finish(self) -> Rewritten {
        let order: Vec<usize> = self.ids.into_iter().flatten().collect();
        let mut relabel = vec![0; order.len()];
        for (pos, old) in order.into_iter().enumerate() {
            relabel[old] = pos;
        }
        Rewritten {
            listing: PartListing { parts: self.parts },
            relabel,
        }
    }
}

impl PartListing {
    pub fn new(parts: Vec<Part>) -> PartListing {
        PartListing { parts }
    }

    pub fn empty() -> PartListing {
        PartListing::default()
    }

    /// A single graph part on levels 1 and 2.
    pub fn from_graph(graph: BicolouredGraph) -> PartListing {
        PartListing::new(vec![Part::graph(1, graph)])
    }

    /// Vertex parts only, one per entry of `levels`.
    pub fn from_levels(levels: &[u32]) -> PartListing {
        PartListing::new(levels.iter().map(|&l| Part::vertex(l)).collect())
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<Part> {
        self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.parts.iter().map(Part::vertex_count).sum()
    }

    pub fn is_vertex_only(&self) -> bool {
        self.parts.iter().all(|p| matches!(p, Part::Vertex { .. }))
    }

    pub fn min_level(&self) -> Option<u32> {
        self.parts.iter().map(Part::min_level).min()
    }

    /// Shifts every level so the lowest one is 1. Relations only depend on
    /// level differences, so the poset is unchanged.
    pub fn normalized(&self) -> PartListing {
        match self.min_level() {
            Some(m) if m != 1 => PartListing {
                parts: self
                    .parts
                    .iter()
                    .map(|p| p.with_level(p.min_level() - m + 1))
                    .collect(),
            },
            _ => self.clone(),
        }
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &PartListing) -> PartListing {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        PartListing { parts }
    }

    /// `(level, part index, index within part)` for each vertex.
    fn vertex_table(&self) -> Vec<(u32, usize, usize)> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(pi, part)| {
                (0..part.vertex_count()).map(move |k| (part.vertex_level(k), pi, k))
            })
            .collect()
    }

    /// The associated poset.
    pub fn to_poset(&self) -> Poset {
        let table = self.vertex_table();
        let n = table.len();
        assert!(
            n <= crate::poset::MAX_VERTICES,
            "listing has too many vertices"
        );
        let mut up = vec![0u64; n];
        for (x, &(lx, px, kx)) in table.iter().enumerate() {
            for (y, &(ly, py, ky)) in table.iter().enumerate() {
                let related = if ly >= lx + 2 {
                    true
                } else if ly == lx + 1 {
                    match px.cmp(&py) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Greater => false,
                        std::cmp::Ordering::Equal => match &self.parts[px] {
                            Part::Graph { graph, .. } => {
                                graph.has_edge(kx + 1, ky - graph.down_count() + 1)
                            }
                            Part::Vertex { .. } => false,
                        },
                    }
                } else {
                    false
                };
                if related {
                    up[x] |= 1 << y;
                }
            }
        }
        Poset::from_up(n, up)
    }

    /// Swaps parts `i` and `i + 1`, whose levels must be at least two apart.
    pub fn commute(&self, i: usize) -> Result<Rewritten> {
        self.check_index(i + 1)?;
        let (a, b) = (&self.parts[i], &self.parts[i + 1]);
        let apart = a.max_level() + 2 <= b.min_level() || b.max_level() + 2 <= a.min_level();
        if !apart {
            return Err(Error::Adjacent(i, i + 1));
        }
        let mut t = Tracked::new(self);
        t.parts.swap(i, i + 1);
        t.ids.swap(i, i + 1);
        Ok(t.finish())
    }

    /// Lowers the first part by one level and moves it to the end.
    pub fn circulate(&self) -> Result<Rewritten> {
        if self.parts.is_empty() {
            return Err(Error::Range("cannot circulate an empty listing".into()));
        }
        self.circulate_general(1)
    }

    /// `A⁺B ≡ BA`: moves the first `split` parts, each lowered by one level,
    /// to the end. Every moved part must sit on level 2 or above.
    pub fn circulate_general(&self, split: usize) -> Result<Rewritten> {
        if split > self.parts.len() {
            return Err(Error::Range(format!(
                "split index {split} exceeds {} parts",
                self.parts.len()
            )));
        }
        if let Some(i) = (0..split).find(|&i| self.parts[i].min_level() < 2) {
            return Err(Error::Level(i));
        }
        let mut t = Tracked::new(self);
        t.parts.rotate_left(split);
        t.ids.rotate_left(split);
        let len = t.parts.len();
        for p in &mut t.parts[len - split..] {
            *p = p.with_level(p.min_level() - 1);
        }
        Ok(t.finish())
    }

    /// Replaces parts `lo..=hi`, which must lie on two adjacent levels, by a
    /// single graph part carrying their relations.
    pub fn combine(&self, lo: usize, hi: usize) -> Result<Rewritten> {
        if lo > hi {
            return Err(Error::Range(format!("empty range {lo}..={hi}")));
        }
        self.check_index(hi)?;
        let range = &self.parts[lo..=hi];
        let base = range
            .iter()
            .map(Part::min_level)
            .min()
            .expect("range is nonempty");
        if range.iter().any(|p| p.max_level() > base + 1) {
            return Err(Error::Span { lo, hi });
        }
        let mut t = Tracked::new(self);
        let range_ids: Vec<Vec<usize>> = t.ids[lo..=hi].to_vec();
        let (graph, order) = merge_parts(range, base);
        let ids: Vec<usize> = order
            .into_iter()
            .map(|(part, k)| range_ids[part][k])
            .collect();
        t.parts.splice(lo..=hi, [Part::graph(base, graph)]);
        t.ids.splice(lo..=hi, [ids]);
        Ok(t.finish())
    }

    /// Splits single vertices off every graph part while one of the rules
    /// applies (checked in this order, lowest index first):
    ///
    /// 1. a down vertex adjacent to every up vertex moves just before the part;
    /// 2. an isolated up vertex moves just before the part;
    /// 3. an isolated down vertex moves just after the part;
    /// 4. an up vertex adjacent to every down vertex moves just after the part.
    ///
    /// A graph part with no vertices left disappears.
    pub fn peel(&self) -> Rewritten {
        let mut t = Tracked::new(self);
        let mut parts = Vec::new();
        let mut ids = Vec::new();
        for (part, part_ids) in t.parts.drain(..).zip(t.ids.drain(..)) {
            match part {
                Part::Vertex { .. } => {
                    parts.push(part);
                    ids.push(part_ids);
                }
                Part::Graph { level, graph } => {
                    let peeled = peel_graph(level, graph, part_ids);
                    for (p, i) in peeled {
                        parts.push(p);
                        ids.push(i);
                    }
                }
            }
        }
        Tracked { parts, ids }.finish()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.parts.len() {
            return Err(Error::Range(format!(
                "part index {i} out of range for {} parts",
                self.parts.len()
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ListingJson::from(self)).expect("listing JSON is serialisable")
    }

    pub fn from_json(value: serde_json::Value) -> Result<PartListing> {
        let json: ListingJson = serde_json::from_value(value)?;
        json.try_into()
    }
}

/// Merges parts lying on levels `base` and `base + 1` into one graph.
/// Returns the graph and, for each of its vertices (downs then ups), the
/// `(part index, index within part)` it came from.
fn merge_parts(parts: &[Part], base: u32) -> (BicolouredGraph, Vec<(usize, usize)>) {
    let mut downs = Vec::new();
    let mut ups = Vec::new();
    for (pi, part) in parts.iter().enumerate() {
        for k in 0..part.vertex_count() {
            if part.vertex_level(k) == base {
                downs.push((pi, k));
            } else {
                ups.push((pi, k));
            }
        }
    }
    let mut graph = BicolouredGraph::empty(downs.len(), ups.len());
    for (d, &(pd, kd)) in downs.iter().enumerate() {
        for (u, &(pu, ku)) in ups.iter().enumerate() {
            let related = pd < pu
                || (pd == pu
                    && match &parts[pd] {
                        Part::Graph { graph: g, .. } => g.has_edge(kd + 1, ku - g.down_count() + 1),
                        Part::Vertex { .. } => false,
                    });
            if related {
                graph.add_edge(d + 1, u + 1);
            }
        }
    }
    downs.extend(ups);
    (graph, downs)
}

/// The overline of a word on levels 1 and 2: its single equivalent graph.
pub fn two_level_word_to_graph(word: &[Part]) -> Result<BicolouredGraph> {
    let ok = word.iter().all(|p| match p {
        Part::Vertex { level } => *level == 1 || *level == 2,
        Part::Graph { level, .. } => *level == 1,
    });
    if !ok {
        return Err(Error::Span {
            lo: 0,
            hi: word.len().saturating_sub(1),
        });
    }
    Ok(merge_parts(word, 1).0)
}

fn peel_graph(level: u32, graph: BicolouredGraph, ids: Vec<usize>) -> Vec<(Part, Vec<usize>)> {
    let r = graph.down_count();
    let mut downs: Vec<usize> = (0..r).collect();
    let mut ups: Vec<usize> = (0..graph.up_count()).collect();
    let mut before: Vec<(Part, Vec<usize>)> = Vec::new();
    let mut after: Vec<(Part, Vec<usize>)> = Vec::new();
    let edge = |d: usize, u: usize| graph.has_edge(d + 1, u + 1);
    loop {
        if let Some(i) = downs.iter().position(|&d| ups.iter().all(|&u| edge(d, u))) {
            before.push((Part::vertex(level), vec![ids[downs.remove(i)]]));
        } else if let Some(i) = ups.iter().position(|&u| downs.iter().all(|&d| !edge(d, u))) {
            before.push((Part::vertex(level + 1), vec![ids[r + ups.remove(i)]]));
        } else if let Some(i) = downs.iter().position(|&d| ups.iter().all(|&u| !edge(d, u))) {
            after.push((Part::vertex(level), vec![ids[downs.remove(i)]]));
        } else if let Some(i) = ups.iter().position(|&u| downs.iter().all(|&d| edge(d, u))) {
            after.push((Part::vertex(level + 1), vec![ids[r + ups.remove(i)]]));
        } else {
            break;
        }
    }
    let mut out = before;
    if !downs.is_empty() || !ups.is_empty() {
        let mut rest = BicolouredGraph::empty(downs.len(), ups.len());
        for (a, &d) in downs.iter().enumerate() {
            for (b, &u) in ups.iter().enumerate() {
                if edge(d, u) {
                    rest.add_edge(a + 1, b + 1);
                }
            }
        }
        let rest_ids = downs
            .iter()
            .map(|&d| ids[d])
            .chain(ups.iter().map(|&u| ids[r + u]))
            .collect();
        out.push((Part::graph(level, rest), rest_ids));
    }
    out.extend(after.into_iter().rev());
    out
}

/// A part listing whose associated poset is `p`, with `map[v]` the poset
/// vertex that listing vertex `v` stands for.
///
/// Vertices are placed on levels given by their height. Between adjacent
/// levels a related pair must appear in order and an unrelated pair in
/// reverse order; vertices caught in a cycle of these constraints are merged
/// into one graph part, and the parts are laid out in topological order.
/// Levels counted from the top are tried when the heights fail.
pub fn listing_for_poset(p: &Poset) -> Result<(PartListing, Vec<usize>)> {
    if !p.is_3plus1_free() {
        return Err(Error::NoListing("poset contains an induced (3+1)".into()));
    }
    let from_bottom = heights(p);
    if let Some(found) = layout(p, &from_bottom) {
        return Ok(found);
    }
    let dual_heights = heights(&p.dual());
    let top = dual_heights.iter().copied().max().unwrap_or(1);
    let from_top: Vec<u32> = dual_heights.iter().map(|&h| top + 1 - h).collect();
    layout(p, &from_top)
        .ok_or_else(|| Error::NoListing("constraint cycles span more than two levels".into()))
}

fn heights(p: &Poset) -> Vec<u32> {
    let n = p.len();
    let mut h = vec![0u32; n];
    let mut done = 0u64;
    while done != p.all_vertices() {
        for v in 0..n {
            if done >> v & 1 == 0 && p.below(v) & !done == 0 {
                h[v] = bits(p.below(v)).map(|w| h[w]).max().unwrap_or(0) + 1;
                done |= 1 << v;
            }
        }
    }
    h
}

fn layout(p: &Poset, level: &[u32]) -> Option<(PartListing, Vec<usize>)> {
    let n = p.len();
    for x in 0..n {
        for y in 0..n {
            if level[y] >= level[x] + 2 && !p.lt(x, y) {
                return None;
            }
            if p.lt(x, y) && level[y] <= level[x] {
                return None;
            }
        }
    }
    // after[a] holds every vertex that must come after a.
    let mut after = vec![0u64; n];
    for x in 0..n {
        for y in 0..n {
            if level[y] == level[x] + 1 {
                if p.lt(x, y) {
                    after[x] |= 1 << y;
                } else {
                    after[y] |= 1 << x;
                }
            }
        }
    }
    let comps = strongly_connected(&after);
    let mut comp_of = vec![0usize; n];
    for (c, members) in comps.iter().enumerate() {
        for &v in members {
            comp_of[v] = c;
        }
    }
    for members in &comps {
        let lo = members.iter().map(|&v| level[v]).min()?;
        if members.iter().any(|&v| level[v] > lo + 1) {
            return None;
        }
    }
    // Kahn's algorithm on the condensation, smallest member vertex first.
    let k = comps.len();
    let mut indegree = vec![0usize; k];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); k];
    for x in 0..n {
        for y in bits(after[x]) {
            let (a, b) = (comp_of[x], comp_of[y]);
            if a != b && !succ[a].contains(&b) {
                succ[a].push(b);
                indegree[b] += 1;
            }
        }
    }
    let mut ready: std::collections::BTreeSet<(usize, usize)> = (0..k)
        .filter(|&c| indegree[c] == 0)
        .map(|c| (comps[c][0], c))
        .collect();
    let mut parts = Vec::with_capacity(k);
    let mut map = Vec::with_capacity(n);
    while let Some((_, c)) = ready.pop_first() {
        let members = &comps[c];
        if members.len() == 1 {
            parts.push(Part::vertex(level[members[0]]));
            map.push(members[0]);
        } else {
            let lo = members.iter().map(|&v| level[v]).min().expect("nonempty");
            let downs: Vec<usize> = members
                .iter()
                .copied()
                .filter(|&v| level[v] == lo)
                .collect();
            let ups: Vec<usize> = members
                .iter()
                .copied()
                .filter(|&v| level[v] != lo)
                .collect();
            let mut g = BicolouredGraph::empty(downs.len(), ups.len());
            for (a, &d) in downs.iter().enumerate() {
                for (b, &u) in ups.iter().enumerate() {
                    if p.lt(d, u) {
                        g.add_edge(a + 1, b + 1);
                    }
                }
            }
            parts.push(Part::graph(lo, g));
            map.extend(downs);
            map.extend(ups);
        }
        for &b in &succ[c] {
            indegree[b] -= 1;
            if indegree[b] == 0 {
                ready.insert((comps[b][0], b));
            }
        }
    }
    let listing = PartListing::new(parts);
    let realised = listing.to_poset();
    let ok = (0..n).all(|a| (0..n).all(|b| realised.lt(a, b) == p.lt(map[a], map[b])));
    ok.then_some((listing, map))
}

/// Tarjan's algorithm; each component's members are sorted.
fn strongly_connected(succ: &[u64]) -> Vec<Vec<usize>> {
    struct State<'a> {
        succ: &'a [u64],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: u64,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    fn visit(s: &mut State<'_>, v: usize) {
        s.index[v] = Some(s.next);
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on_stack |= 1 << v;
        for w in bits(s.succ[v]) {
            match s.index[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on_stack >> w & 1 == 1 => s.low[v] = s.low[v].min(iw),
                Some(_) => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = s.stack.pop().expect("v is on the stack");
                s.on_stack &= !(1 << w);
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            s.out.push(comp);
        }
    }
    let n = succ.len();
    let mut s = State {
        succ,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: 0,
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if s.index[v].is_none() {
            visit(&mut s, v);
        }
    }
    s.out
}

/// A random listing with `vertices` vertices on levels `1..=max_level`,
/// where each part is a graph part with probability `graph_prob`.
pub fn random_listing<R: Rng + ?Sized>(
    rng: &mut R,
    vertices: usize,
    max_level: u32,
    graph_prob: f64,
) -> PartListing {
    let mut parts = Vec::new();
    let mut left = vertices;
    while left > 0 {
        if left >= 2 && max_level >= 2 && rng.gen_bool(graph_prob) {
            let total = rng.gen_range(2..=left.min(6));
            let r = rng.gen_range(0..=total);
            let graph = BicolouredGraph::random(rng, r, total - r, 0.5);
            parts.push(Part::graph(rng.gen_range(1..max_level), graph));
            left -= total;
        } else {
            parts.push(Part::vertex(rng.gen_range(1..=max_level)));
            left -= 1;
        }
    }
    PartListing::new(parts)
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Part::Vertex { level } => write!(f, "v{level}"),
            Part::Graph { level, graph } => write!(f, "b{level}{{{graph}}}"),
        }
    }
}

impl fmt::Display for PartListing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for PartListing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse::parse_listing(s)
    }
}

#[derive(Serialize, Deserialize)]
struct ListingJson {
    parts: Vec<PartJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PartJson {
    Vertex { v: u32 },
    Graph { b: GraphPartJson },
}

#[derive(Serialize, Deserialize)]
struct GraphPartJson {
    level: u32,
    r: usize,
    s: usize,
    edges: Vec<[usize; 2]>,
}

impl From<&PartListing> for ListingJson {
    fn from(l: &PartListing) -> Self {
        let parts = l
            .parts
            .iter()
            .map(|p| match p {
                Part::Vertex { level } => PartJson::Vertex { v: *level },
                Part::Graph { level, graph } => PartJson::Graph {
                    b: GraphPartJson {
                        level: *level,
                        r: graph.down_count(),
                        s: graph.up_count(),
                        edges: graph.edges().into_iter().map(|(d, u)| [d, u]).collect(),
                    },
                },
            })
            .collect();
        ListingJson { parts }
    }
}

impl TryFrom<ListingJson> for PartListing {
    type Error = Error;

    fn try_from(json: ListingJson) -> Result<Self> {
        let parts = json
            .parts
            .into_iter()
            .map(|p| match p {
                PartJson::Vertex { v } if v >= 1 => Ok(Part::vertex(v)),
                PartJson::Vertex { v } => Err(Error::Json(format!("level {v} must be positive"))),
                PartJson::Graph { b } => {
                    if b.level < 1 {
                        return Err(Error::Json("graph level must be positive".into()));
                    }
                    let edges: Vec<(usize, usize)> = b.edges.iter().map(|e| (e[0], e[1])).collect();
                    Ok(Part::graph(
                        b.level,
                        BicolouredGraph::from_edges(b.r, b.s, &edges)?,
                    ))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PartListing::new(parts))
    }
}

/// A formal rational combination of part listings.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinListing {
    terms: Vec<(Rational, PartListing)>,
}

impl LinListing {
    pub fn single(listing: PartListing) -> LinListing {
        LinListing {
            terms: vec![(Rational::from_integer(1.into()), listing)],
        }
    }

    /// Builds a combination, merging identical listings and dropping zero
    /// coefficients. First occurrences keep their position.
    pub fn from_terms<I>(terms: I) -> LinListing
    where
        I: IntoIterator<Item = (Rational, PartListing)>,
    {
        let mut out = LinListing::default();
        for (c, l) in terms {
            out.push(c, l);
        }
        out
    }

    pub fn push(&mut self, coeff: Rational, listing: PartListing) {
        use num_traits::Zero;
        if let Some(slot) = self.terms.iter_mut().find(|(_, l)| *l == listing) {
            slot.0 += coeff;
        } else {
            self.terms.push((coeff, listing));
        }
        self.terms.retain(|(c, _)| !c.is_zero());
    }

    pub fn terms(&self) -> &[(Rational, PartListing)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient_sum(&self) -> Rational {
        self.terms.iter().map(|(c, _)| c.clone()).sum()
    }
}

impl fmt::Display for LinListing {
    /// One `coeff listing` pair per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, l)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{c} {l}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "v2 v1 v3 v3 v1 b1{2x2:1-1,2-1,2-2}";

    fn listing(s: &str) -> PartListing {
        s.parse().unwrap()
    }

    /// Checks that the rewrite preserves the poset under its relabelling.
    fn assert_same_poset(before: &PartListing, rw: &Rewritten) {
        let p = before.to_poset();
        assert_eq!(
            p.relabel(&rw.relabel),
            rw.listing.to_poset(),
            "{before} vs {}",
            rw.listing
        );
    }

    #[test]
    fn sample_poset() {
        // a b c d e f g h i
        let p = listing(SAMPLE).to_poset();
        let (a, b, c, d, e, f, g, h, i) = (0, 1, 2, 3, 4, 5, 6, 7, 8);
        let mut expected = vec![];
        for x in [b, e, f, g] {
            expected.extend([(x, c), (x, d)]);
        }
        expected.extend([(a, c), (a, d), (b, h), (b, i), (e, h), (e, i)]);
        expected.extend([(f, h), (g, h), (g, i)]);
        let expected = Poset::from_relations(9, &expected).unwrap();
        assert_eq!(p, expected);
        assert!(p.is_3plus1_free());
    }

    #[test]
    fn tiny_listings() {
        assert_eq!(listing("v1 v1").to_poset(), Poset::antichain(2));
        assert_eq!(listing("v1 v2").to_poset(), Poset::chain(2));
        assert_eq!(listing("").to_poset(), Poset::antichain(0));
    }

    #[test]
    fn commutation() {
        let l = listing(SAMPLE);
        let rw = l.commute(1).unwrap();
        assert_eq!(rw.listing.to_string(), "v2 v3 v1 v3 v1 b1{2x2:1-1,2-1,2-2}");
        assert_same_poset(&l, &rw);
        let l = listing("v1 v3");
        let rw = l.commute(0).unwrap();
        assert_eq!(rw.listing.to_string(), "v3 v1");
        assert_eq!(rw.listing.to_poset(), l.to_poset().relabel(&rw.relabel));
        assert_eq!(listing("v1 v2").commute(0), Err(Error::Adjacent(0, 1)));
        assert_eq!(listing("b1{1x1} v3").commute(0), Err(Error::Adjacent(0, 1)));
        assert!(listing("b1{1x1} v4").commute(0).is_ok());
    }

    #[test]
    fn circulation() {
        let l = listing(SAMPLE);
        let rw = l.circulate().unwrap();
        assert_eq!(rw.listing.to_string(), "v1 v3 v3 v1 b1{2x2:1-1,2-1,2-2} v1");
        assert_same_poset(&l, &rw);
        assert_eq!(listing("v2").circulate().unwrap().listing.to_string(), "v1");
        assert_eq!(listing("v1 v2").circulate(), Err(Error::Level(0)));
        let l = listing("v3 b2{1x2:1-2} v1 v2");
        let rw = l.circulate_general(2).unwrap();
        assert_eq!(rw.listing.to_string(), "v1 v2 v2 b1{1x2:1-2}");
        assert_same_poset(&l, &rw);
    }

    #[test]
    fn combination() {
        let l = listing(SAMPLE);
        let rw = l.combine(4, 5).unwrap();
        assert_eq!(
            rw.listing.to_string(),
            "v2 v1 v3 v3 b1{3x2:1-1,1-2,2-1,3-1,3-2}"
        );
        assert_same_poset(&l, &rw);
        let single = listing("b1{2x2:1-1,2-1,2-2}");
        assert_eq!(single.combine(0, 0).unwrap().listing, single);
        let rw = listing("v1 v2").combine(0, 1).unwrap();
        assert_eq!(rw.listing.to_string(), "b1{1x1:1-1}");
        assert_eq!(
            listing("v1 v2 v3").combine(0, 2),
            Err(Error::Span { lo: 0, hi: 2 })
        );
    }

    #[test]
    fn overline_words() {
        let word = |s: &str| listing(s).into_parts();
        assert_eq!(
            two_level_word_to_graph(&word("v1 v1 v1 v2 v2")).unwrap(),
            BicolouredGraph::complete(3, 2)
        );
        assert_eq!(
            two_level_word_to_graph(&word("v2 v2 v1 v1 v1")).unwrap(),
            BicolouredGraph::empty(3, 2)
        );
        let star = two_level_word_to_graph(&word("v1 v1 v1 v1 v2 v1")).unwrap();
        assert_eq!(star, "5x1:1-1,2-1,3-1,4-1".parse().unwrap());
        assert!(two_level_word_to_graph(&word("v1 v3")).is_err());
    }

    #[test]
    fn peeling() {
        let k = PartListing::from_graph(BicolouredGraph::complete(3, 2));
        assert_eq!(k.peel().listing.to_string(), "v1 v1 v1 v2 v2");
        let e = PartListing::from_graph(BicolouredGraph::empty(3, 2));
        assert_eq!(e.peel().listing.to_string(), "v2 v2 v1 v1 v1");
        // Not a tangle: down vertex 2 sees both ups.
        let g = listing("b1{2x2:1-1,2-1,2-2}");
        let rw = g.peel();
        assert_eq!(rw.listing.to_string(), "v1 v2 v1 v2");
        assert_same_poset(&g, &rw);
        let tangle = listing("b1{2x2:1-1,2-2}");
        assert_eq!(tangle.peel().listing, tangle);
        let l = listing(SAMPLE);
        assert_same_poset(&l, &l.peel());
    }

    #[test]
    fn normalisation_shifts_levels() {
        let l = listing("v3 b2{1x1:1-1} v4");
        assert_eq!(l.normalized().to_string(), "v2 b1{1x1:1-1} v3");
        assert_eq!(l.normalized().to_poset(), l.to_poset());
    }

    #[test]
    fn json_form() {
        let l = listing("v2 b1{2x2:1-1,2-1,2-2}");
        let v = l.to_json();
        assert_eq!(
            v,
            serde_json::json!({"parts":[{"v":2},{"b":{"level":1,"r":2,"s":2,"edges":[[1,1],[2,1],[2,2]]}}]})
        );
        assert_eq!(PartListing::from_json(v).unwrap(), l);
        let bad = serde_json::json!({"parts":[{"b":{"level":1,"r":1,"s":1,"edges":[[2,1]]}}]});
        assert!(PartListing::from_json(bad).is_err());
    }

    #[test]
    fn listing_for_sample_poset() {
        let p = listing(SAMPLE).to_poset();
        let (l, map) = listing_for_poset(&p).unwrap();
        let q = l.to_poset();
        for a in 0..9 {
            for b in 0..9 {
                assert_eq!(q.lt(a, b), p.lt(map[a], map[b]));
            }
        }
        assert!(listing_for_poset(&Poset::three_plus_one()).is_err());
    }

    #[test]
    fn lin_listing_merges() {
        let half = Rational::new(1.into(), 2.into());
        let l = listing("v1 v2");
        let lin = LinListing::from_terms([(half.clone(), l.clone()), (half.clone(), l.clone())]);
        assert_eq!(
            lin.terms(),
            &[(Rational::from_integer(1.into()), l.clone())]
        );
        let gone = LinListing::from_terms([(half.clone(), l.clone()), (-half, l)]);
        assert!(gone.is_empty());
    }
}
