//! Batch checks over whole poset classes.
//!
//! Every harness returns a [`VerificationReport`]. Work is spread over the
//! rayon pool one item per poset (or graph, or sample) and collected back in
//! input order, so reports do not depend on the number of workers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::csf::{csf_lin, csf_listing, verify_modular, CsfCache};
use crate::error::{Error, Result};
use crate::listing::{listing_for_poset, random_listing, BicolouredGraph, LinListing, PartListing};
use crate::modular::{bicoloured_graphs_up_to_iso, reduce_listing, three_free_e_expansion};
use crate::poset::{enumerate_posets, CanonicalKey, Poset, PosetClass, PosetJson};

/// Optional ways to shrink the set of posets that must be checked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Reductions {
    /// Skip posets that split as an ordinal sum.
    pub split: bool,
    /// Keep one poset of each pair `{p, dual(p)}`.
    pub dual: bool,
    /// Replace each poset by the vertex-only listings its part listing
    /// reduces to, and check those instead.
    pub udu_dud: bool,
}

impl Reductions {
    pub const NONE: Reductions = Reductions {
        split: false,
        dual: false,
        udu_dud: false,
    };
}

impl FromStr for Reductions {
    type Err = Error;

    /// Comma-separated flags: `split`, `dual`, `udu_dud`; `none` or empty for
    /// no reductions.
    fn from_str(s: &str) -> Result<Self> {
        let mut out = Reductions::NONE;
        for flag in s.split(',').map(str::trim).filter(|f| !f.is_empty()) {
            match flag.to_ascii_lowercase().as_str() {
                "split" => out.split = true,
                "dual" => out.dual = true,
                "udu_dud" | "udu-dud" | "uddu" => out.udu_dud = true,
                "none" => {}
                other => {
                    return Err(Error::Range(format!(
                        "unknown reduction `{other}` (expected split, dual or udu_dud)"
                    )))
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Reductions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flags: Vec<&str> = [
            (self.split, "split"),
            (self.dual, "dual"),
            (self.udu_dud, "udu_dud"),
        ]
        .into_iter()
        .filter_map(|(on, name)| on.then_some(name))
        .collect();
        if flags.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&flags.join(","))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub poset: PosetJson,
    pub expansion: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub class: String,
    pub n: usize,
    pub checked: usize,
    pub counterexamples: Vec<Counterexample>,
    pub seconds: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    /// The report as JSON. Wall time is included only on request, so that
    /// output is reproducible by default.
    pub fn to_json(&self, timing: bool) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if !timing {
            v.as_object_mut()
                .expect("report is an object")
                .remove("seconds");
        }
        v
    }
}

fn report(
    class: &str,
    n: usize,
    checked: usize,
    counterexamples: Vec<Counterexample>,
    start: Instant,
) -> VerificationReport {
    VerificationReport {
        class: class.to_string(),
        n,
        checked,
        counterexamples,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Largest `n` accepted by [`check_epositivity`] for a class.
pub fn max_check(class: PosetClass) -> usize {
    match class {
        PosetClass::All => 7,
        PosetClass::ThreePlusOneFree => 8,
        PosetClass::BothFree => 10,
    }
}

/// The distinct vertex-only posets that the listings of `posets` reduce to.
fn reduced_posets(posets: &[Poset]) -> Result<Vec<Poset>> {
    let found: Vec<Vec<(CanonicalKey, Poset)>> = posets
        .par_iter()
        .map(|p| {
            let (listing, _) = listing_for_poset(p)?;
            let reduced = reduce_listing(&LinListing::single(listing))?;
            Ok(reduced
                .terms()
                .iter()
                .map(|(_, l)| {
                    let q = l.to_poset().canonical();
                    (q.canonical_key(), q)
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let merged: BTreeMap<CanonicalKey, Poset> = found.into_iter().flatten().collect();
    Ok(merged.into_values().collect())
}

/// Checks that every poset of `class` on `n` vertices has an e-positive
/// chromatic symmetric function.
pub fn check_epositivity(
    n: usize,
    class: PosetClass,
    reductions: Reductions,
) -> Result<VerificationReport> {
    check_epositivity_with(n, class, reductions, &CsfCache::new())
}

pub fn check_epositivity_with(
    n: usize,
    class: PosetClass,
    reductions: Reductions,
    cache: &CsfCache,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let max = max_check(class);
    if n == 0 || n > max {
        return Err(Error::Range(format!(
            "e-positivity checks of class {class} support 1 <= n <= {max}, got {n}"
        )));
    }
    if reductions.udu_dud && class == PosetClass::All {
        return Err(Error::Range(
            "the udu_dud reduction needs part listings, which exist only for (3+1)-free posets"
                .into(),
        ));
    }
    let mut posets = enumerate_posets(n, class)?;
    if reductions.udu_dud {
        posets = reduced_posets(&posets)?;
    }
    if reductions.split {
        posets.retain(|p| p.ordinal_split().is_none());
    }
    if reductions.dual {
        posets.retain(|p| p.canonical_key() <= p.dual().canonical_key());
    }
    let verdicts: Vec<Option<Counterexample>> = posets
        .par_iter()
        .map(|p| {
            let e = cache.get_or_compute(p)?.to_e();
            Ok((!e.is_e_positive()).then(|| Counterexample {
                poset: p.to_json(),
                expansion: e.to_string(),
                reason: None,
            }))
        })
        .collect::<Result<_>>()?;
    let bad = verdicts.into_iter().flatten().collect();
    Ok(report(class.label(), n, posets.len(), bad, start))
}

/// Number of posets of `class` on `1..=max_n` vertices, up to isomorphism.
pub fn class_counts(class: PosetClass, max_n: usize) -> Result<Vec<usize>> {
    (1..=max_n)
        .map(|n| Ok(enumerate_posets(n, class)?.len()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub class: String,
    pub counts: Vec<usize>,
}

/// The rows all, (3+1)-free and both-free for `1..=max_n` vertices. The row
/// of all posets stops at its enumeration bound.
pub fn count_table(max_n: usize) -> Result<Vec<CountRow>> {
    let top = PosetClass::BothFree.max_enumeration();
    if max_n == 0 || max_n > top {
        return Err(Error::Range(format!(
            "count tables support 1 <= max_n <= {top}, got {max_n}"
        )));
    }
    [
        PosetClass::All,
        PosetClass::ThreePlusOneFree,
        PosetClass::BothFree,
    ]
    .into_iter()
    .map(|class| {
        Ok(CountRow {
            class: class.label().to_string(),
            counts: class_counts(class, max_n.min(class.max_enumeration()))?,
        })
    })
    .collect()
}

/// Reduces `listing` to vertex-only listings and checks the result: a convex
/// combination of (3+1)- and (2+2)-free posets with the same chromatic
/// symmetric function. Returns the first failure found.
pub fn check_reduction(listing: &PartListing, cache: &CsfCache) -> Result<Option<String>> {
    let reduced = reduce_listing(&LinListing::single(listing.clone()))?;
    if reduced.coefficient_sum() != num_rational::BigRational::one() {
        return Ok(Some(format!(
            "coefficients sum to {}",
            reduced.coefficient_sum()
        )));
    }
    for (c, l) in reduced.terms() {
        if !c.is_positive() {
            return Ok(Some(format!("coefficient {c} on {l}")));
        }
        if !l.is_vertex_only() {
            return Ok(Some(format!("graph part left in {l}")));
        }
        let p = l.to_poset();
        if !(p.is_3plus1_free() && p.is_2plus2_free()) {
            return Ok(Some(format!("{l} is not (3+1)- and (2+2)-free")));
        }
    }
    let mut total = crate::symfunc::SymFunc::zero(crate::symfunc::Basis::M);
    for (c, l) in reduced.terms() {
        total = total.add(&cache.get_or_compute(&l.to_poset())?.scale(c));
    }
    if total != csf_listing(listing)? {
        return Ok(Some("chromatic symmetric function changed".into()));
    }
    debug_assert_eq!(total, csf_lin(&reduced)?);
    Ok(None)
}

/// Runs [`check_reduction`] on a part listing of every (3+1)-free poset on
/// `n` vertices.
pub fn sweep_listing_reduction(n: usize) -> Result<VerificationReport> {
    sweep_listing_reduction_with(n, &CsfCache::new())
}

pub fn sweep_listing_reduction_with(n: usize, cache: &CsfCache) -> Result<VerificationReport> {
    let start = Instant::now();
    if n == 0 || n > 8 {
        return Err(Error::Range(format!(
            "listing sweeps support 1 <= n <= 8, got {n}"
        )));
    }
    let posets = enumerate_posets(n, PosetClass::ThreePlusOneFree)?;
    let verdicts: Vec<Option<Counterexample>> = posets
        .par_iter()
        .map(|p| {
            let (listing, _) = listing_for_poset(p)?;
            Ok(
                check_reduction(&listing, cache)?.map(|reason| Counterexample {
                    poset: p.to_json(),
                    expansion: listing.to_string(),
                    reason: Some(reason),
                }),
            )
        })
        .collect::<Result<_>>()?;
    let bad = verdicts.into_iter().flatten().collect();
    Ok(report(
        PosetClass::ThreePlusOneFree.label(),
        n,
        posets.len(),
        bad,
        start,
    ))
}

/// Checks one graph: the staged expansion must be e-positive and agree with
/// the directly computed chromatic symmetric function.
pub fn check_three_free(g: &BicolouredGraph) -> Result<Option<Counterexample>> {
    let e = three_free_e_expansion(g)?;
    let direct = csf_listing(&PartListing::from_graph(g.clone()))?.to_e();
    let reason = if !e.is_e_positive() {
        Some("negative coefficient".to_string())
    } else if e != direct {
        Some(format!("direct expansion is {direct}"))
    } else {
        None
    };
    Ok(reason.map(|reason| Counterexample {
        poset: g.to_poset().to_json(),
        expansion: e.to_string(),
        reason: Some(format!("{g}: {reason}")),
    }))
}

/// Runs [`check_three_free`] on every bicoloured graph with `r + s <= max_rs`,
/// up to isomorphism.
pub fn sweep_three_free(max_rs: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    if max_rs > 8 {
        return Err(Error::Range(format!(
            "graph sweeps support r + s <= 8, got {max_rs}"
        )));
    }
    let mut graphs = Vec::new();
    for total in 0..=max_rs {
        for r in 0..=total {
            graphs.extend(bicoloured_graphs_up_to_iso(r, total - r)?);
        }
    }
    let verdicts: Vec<Option<Counterexample>> = graphs
        .par_iter()
        .map(check_three_free)
        .collect::<Result<_>>()?;
    let bad = verdicts.into_iter().flatten().collect();
    Ok(report("3free", max_rs, graphs.len(), bad, start))
}

/// One random instance of the modular law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularSample {
    pub prefix: PartListing,
    pub level: u32,
    pub graph: BicolouredGraph,
    pub suffix: PartListing,
    pub e1: (usize, usize),
    pub e2: (usize, usize),
}

impl ModularSample {
    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_size: usize) -> ModularSample {
        let total = rng.gen_range(3..=max_size);
        let r = rng.gen_range(1..total);
        let s = total - r;
        let mut graph = BicolouredGraph::random(rng, r, s, 0.5);
        // Two edges meeting at a down vertex or at an up vertex.
        let at_down = s >= 2 && (r < 2 || rng.gen_bool(0.5));
        let (e1, e2) = if at_down {
            let d = rng.gen_range(1..=r);
            let u1 = rng.gen_range(1..=s);
            let u2 = (u1 + rng.gen_range(0..s - 1)) % s + 1;
            ((d, u1), (d, u2))
        } else {
            let u = rng.gen_range(1..=s);
            let d1 = rng.gen_range(1..=r);
            let d2 = (d1 + rng.gen_range(0..r - 1)) % r + 1;
            ((d1, u), (d2, u))
        };
        graph.add_edge(e1.0, e1.1);
        graph.add_edge(e2.0, e2.1);
        let rest = max_size - total;
        let a = rng.gen_range(0..=rest);
        let b = rng.gen_range(0..=rest - a);
        let prefix = random_listing(rng, a, 4, 0.3);
        let suffix = random_listing(rng, b, 4, 0.3);
        let level = rng.gen_range(1..=3);
        ModularSample {
            prefix,
            level,
            graph,
            suffix,
            e1,
            e2,
        }
    }

    pub fn check(&self) -> Result<bool> {
        verify_modular(
            &self.prefix,
            self.level,
            &self.graph,
            &self.suffix,
            self.e1,
            self.e2,
        )
    }
}

/// Checks the modular law on `samples` random instances drawn from a seeded
/// generator, each with at most `max_size` vertices in total.
pub fn verify_modular_samples(
    samples: usize,
    max_size: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let start = Instant::now();
    if !(3..=crate::csf::MAX_CSF_VERTICES).contains(&max_size) {
        return Err(Error::Range(format!(
            "modular samples need 3 <= max_size <= {}, got {max_size}",
            crate::csf::MAX_CSF_VERTICES
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<ModularSample> = (0..samples)
        .map(|_| ModularSample::random(&mut rng, max_size))
        .collect();
    let verdicts: Vec<Option<Counterexample>> = cases
        .par_iter()
        .map(|case| {
            Ok((!case.check()?).then(|| {
                let word = format!(
                    "{} b{}{{{}}} {}",
                    case.prefix, case.level, case.graph, case.suffix
                );
                let middle = PartListing::new(vec![crate::listing::Part::graph(
                    case.level,
                    case.graph.clone(),
                )]);
                Counterexample {
                    poset: case
                        .prefix
                        .concat(&middle)
                        .concat(&case.suffix)
                        .to_poset()
                        .to_json(),
                    expansion: word.trim().to_string(),
                    reason: Some(format!(
                        "edges {}-{} and {}-{}",
                        case.e1.0, case.e1.1, case.e2.0, case.e2.1
                    )),
                }
            }))
        })
        .collect::<Result<_>>()?;
    let bad = verdicts.into_iter().flatten().collect();
    Ok(report("modular", max_size, samples, bad, start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csf::csf_poset;

    #[test]
    fn reduction_flags() {
        let r: Reductions = "split,dual".parse().unwrap();
        assert!(r.split && r.dual && !r.udu_dud);
        assert_eq!(r.to_string(), "split,dual");
        assert_eq!("".parse::<Reductions>().unwrap(), Reductions::NONE);
        assert_eq!(Reductions::NONE.to_string(), "none");
        assert!("bogus".parse::<Reductions>().is_err());
    }

    #[test]
    fn all_posets_on_four_vertices() {
        let rep = check_epositivity(4, PosetClass::All, Reductions::NONE).unwrap();
        assert_eq!(rep.checked, 16);
        assert_eq!(rep.counterexamples.len(), 1);
        let bad = Poset::from_json(&rep.counterexamples[0].poset).unwrap();
        assert!(bad.is_isomorphic(&Poset::three_plus_one()));
    }

    #[test]
    fn trivial_sizes() {
        let rep = check_epositivity(1, PosetClass::All, "split".parse().unwrap()).unwrap();
        assert_eq!((rep.checked, rep.passed()), (1, true));
        assert!(check_epositivity(0, PosetClass::All, Reductions::NONE).is_err());
        assert!(check_epositivity(8, PosetClass::All, Reductions::NONE).is_err());
        assert!(check_epositivity(4, PosetClass::All, "udu_dud".parse().unwrap()).is_err());
        let rep = sweep_listing_reduction(1).unwrap();
        assert_eq!((rep.checked, rep.passed()), (1, true));
    }

    #[test]
    fn three_plus_one_free_up_to_six() {
        for (n, count) in [(4, 15), (5, 49), (6, 173)] {
            let rep = check_epositivity(n, PosetClass::ThreePlusOneFree, Reductions::NONE).unwrap();
            assert_eq!(rep.checked, count);
            assert!(rep.passed());
        }
    }

    #[test]
    fn udu_dud_reduction_yields_unit_interval_orders() {
        let rep =
            check_epositivity(6, PosetClass::ThreePlusOneFree, "udu_dud".parse().unwrap()).unwrap();
        assert!(rep.passed());
        assert!(rep.checked <= 132);
    }

    #[test]
    fn reductions_keep_the_same_counterexamples() {
        for n in 4..=6 {
            let full = check_epositivity(n, PosetClass::All, Reductions::NONE).unwrap();
            let reduced =
                check_epositivity(n, PosetClass::All, "split,dual".parse().unwrap()).unwrap();
            let classes = |rep: &VerificationReport| {
                let mut keys: Vec<CanonicalKey> = rep
                    .counterexamples
                    .iter()
                    .map(|c| Poset::from_json(&c.poset).unwrap())
                    .filter(|p| p.ordinal_split().is_none())
                    .map(|p| p.canonical_key().min(p.dual().canonical_key()))
                    .collect();
                keys.sort();
                keys.dedup();
                keys
            };
            assert_eq!(classes(&full), classes(&reduced));
            // Every split counterexample has a factor that is one.
            for c in &full.counterexamples {
                let p = Poset::from_json(&c.poset).unwrap();
                if let Some((x, y)) = p.ordinal_split() {
                    let bad =
                        |v: &[usize]| !csf_poset(&p.induced(v)).unwrap().to_e().is_e_positive();
                    assert!(bad(&x) || bad(&y));
                }
            }
        }
    }

    #[test]
    fn report_json() {
        let rep = check_epositivity(3, PosetClass::All, Reductions::NONE).unwrap();
        let j = rep.to_json(false);
        assert_eq!(
            j,
            serde_json::json!({"class": "all", "n": 3, "checked": 5, "counterexamples": []})
        );
        assert!(rep.to_json(true).get("seconds").is_some());
    }

    #[test]
    fn counts_rows() {
        let rows = count_table(5).unwrap();
        assert_eq!(rows[0].counts, vec![1, 2, 5, 16, 63]);
        assert_eq!(rows[1].counts, vec![1, 2, 5, 15, 49]);
        assert_eq!(rows[2].counts, vec![1, 2, 5, 14, 42]);
        assert!(count_table(11).is_err());
    }

    #[test]
    fn listing_sweeps() {
        let rep = sweep_listing_reduction(4).unwrap();
        assert_eq!(rep.checked, 15);
        assert!(rep.passed());
        let sample: PartListing = "v2 v1 v3 v3 v1 b1{2x2:1-1,2-1,2-2}".parse().unwrap();
        assert_eq!(check_reduction(&sample, &CsfCache::new()).unwrap(), None);
    }

    #[test]
    fn graph_sweep() {
        let rep = sweep_three_free(4).unwrap();
        assert!(rep.passed());
        assert!(rep.checked > 0);
    }

    #[test]
    fn seeded_modular_samples() {
        let a = verify_modular_samples(40, 8, 42).unwrap();
        assert!(a.passed());
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(
            ModularSample::random(&mut r1, 9),
            ModularSample::random(&mut r2, 9)
        );
    }
}
