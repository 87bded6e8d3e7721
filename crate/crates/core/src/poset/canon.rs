//! Canonical labelling of posets by partition refinement plus exhaustive
//! individualisation.
//!
//! The ordered cell partition is refined until every vertex in a cell sees the
//! same number of lower and upper neighbours in every cell. When a cell is
//! still not a singleton, each of its vertices is individualised in turn
//! (twins, i.e. vertices with identical up- and down-sets, only once) and the
//! search recurses. The key is the lexicographically smallest relation matrix
//! over all leaves.

use std::fmt;

use super::{bits, Poset};

/// Isomorphism-class identifier: `n` followed by the canonical relation
/// matrix packed row-major into bytes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

type Cells = Vec<Vec<usize>>;

fn mask(cell: &[usize]) -> u64 {
    cell.iter().fold(0, |acc, &v| acc | 1 << v)
}

fn refine(p: &Poset, mut cells: Cells) -> Cells {
    loop {
        let masks: Vec<u64> = cells.iter().map(|c| mask(c)).collect();
        let mut next: Cells = Vec::with_capacity(cells.len());
        let mut changed = false;
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> = cell
                .iter()
                .map(|&v| {
                    let sig = masks
                        .iter()
                        .flat_map(|&m| {
                            [(p.below(v) & m).count_ones(), (p.above(v) & m).count_ones()]
                        })
                        .collect();
                    (sig, v)
                })
                .collect();
            keyed.sort();
            let start = next.len();
            for (i, (sig, v)) in keyed.iter().enumerate() {
                if i == 0 || *sig != keyed[i - 1].0 {
                    next.push(Vec::new());
                }
                next.last_mut().expect("just pushed").push(*v);
            }
            changed |= next.len() - start > 1;
        }
        cells = next;
        if !changed {
            return cells;
        }
    }
}

fn encode(p: &Poset, order: &[usize]) -> Vec<u8> {
    let n = order.len();
    let mut out = Vec::with_capacity(1 + (n * n).div_ceil(8));
    out.push(n as u8);
    let mut byte = 0u8;
    let mut filled = 0;
    for &a in order {
        for &b in order {
            byte = byte << 1 | p.lt(a, b) as u8;
            filled += 1;
            if filled == 8 {
                out.push(byte);
                byte = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(byte << (8 - filled));
    }
    out
}

fn search(p: &Poset, cells: Cells, best: &mut Option<(Vec<u8>, Vec<usize>)>) {
    let Some(target) = cells.iter().position(|c| c.len() > 1) else {
        let order: Vec<usize> = cells.into_iter().map(|c| c[0]).collect();
        let code = encode(p, &order);
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            *best = Some((code, order));
        }
        return;
    };
    let cell = &cells[target];
    let mut tried: Vec<usize> = Vec::new();
    for &v in cell {
        if tried
            .iter()
            .any(|&w| p.above(w) == p.above(v) && p.below(w) == p.below(v))
        {
            continue;
        }
        tried.push(v);
        let mut split = cells.clone();
        let rest: Vec<usize> = cell.iter().copied().filter(|&w| w != v).collect();
        split.splice(target..=target, [vec![v], rest]);
        search(p, refine(p, split), best);
    }
}

/// Canonical key together with the canonical vertex order (`order[pos]` is
/// the vertex placed at position `pos`).
pub fn canonical_form(p: &Poset) -> (CanonicalKey, Vec<usize>) {
    let n = p.len();
    if n == 0 {
        return (CanonicalKey(vec![0]), Vec::new());
    }
    let start = vec![bits(p.all_vertices()).collect::<Vec<_>>()];
    let mut best = None;
    search(p, refine(p, start), &mut best);
    let (code, order) = best.expect("search visits at least one leaf");
    (CanonicalKey(code), order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabelling_preserves_key() {
        let p = Poset::from_relations(6, &[(0, 2), (1, 2), (1, 3), (3, 4), (5, 4)]).unwrap();
        let key = p.canonical_key();
        let perm = [3, 5, 0, 1, 4, 2];
        assert_eq!(p.relabel(&perm).canonical_key(), key);
        assert_eq!(p.canonical().canonical_key(), key);
    }

    #[test]
    fn distinguishes_dual_pairs() {
        // A "V" and a "Λ" are not isomorphic.
        let v = Poset::from_relations(3, &[(0, 1), (0, 2)]).unwrap();
        assert_ne!(v.canonical_key(), v.dual().canonical_key());
    }

    #[test]
    fn empty_poset_has_a_key() {
        assert_eq!(Poset::antichain(0).canonical_key().as_bytes(), &[0]);
    }
}
