//! Acceptance criteria, one PASS/FAIL line each. Every comparison is exact.

use std::process::ExitCode;
use std::time::Instant;

use modcsf::csf::{csf_graph, csf_listing, csf_poset, SimpleGraph};
use modcsf::listing::random_listing;
use modcsf::modular::{bicoloured_graphs_up_to_iso, dud, functionals, three_free_e_expansion, udu};
use modcsf::symfunc::{e_to_m, m_to_e};
use modcsf::verify::{
    check_epositivity, class_counts, sweep_listing_reduction, sweep_three_free,
    verify_modular_samples,
};
use modcsf::{
    partitions_of, Basis, BicolouredGraph, PartListing, Poset, PosetClass, Rational, Reductions,
    SymFunc,
};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn int(n: u64) -> Rational {
    Rational::from_integer(n.into())
}

fn factorial(n: u32) -> Rational {
    (1..=n as u64).map(int).fold(Rational::one(), |a, b| a * b)
}

fn q(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

/// F_k by listing every injection of the small side into the large side.
fn injection_functionals(g: &BicolouredGraph) -> Vec<Rational> {
    let (r, s) = (g.down_count(), g.up_count());
    let (small, large) = (r.min(s), r.max(s));
    let edge = |a: usize, b: usize| {
        if r >= s {
            g.has_edge(b, a)
        } else {
            g.has_edge(a, b)
        }
    };
    let mut counts = vec![0i64; small + 1];
    let mut stack = vec![(1usize, 0u64, 0usize)];
    while let Some((a, used, hits)) = stack.pop() {
        if a > small {
            counts[hits] += 1;
            continue;
        }
        for b in 1..=large {
            if used >> b & 1 == 0 {
                stack.push((a + 1, used | 1 << b, hits + edge(a, b) as usize));
            }
        }
    }
    let total: i64 = counts.iter().sum();
    counts.into_iter().map(|c| q(c, total)).collect()
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for n in 1..=6 {
        for lambda in partitions_of(n) {
            let csf = csf_poset(&Poset::graded_partition(&lambda)).map_err(|e| e.to_string())?;
            let weight = lambda
                .parts()
                .iter()
                .fold(Rational::one(), |acc, &p| acc * factorial(p));
            let expected = SymFunc::term(Basis::E, lambda.clone(), weight);
            ensure(csf.to_e() == expected, || {
                format!("P_{lambda}: got {}, expected {expected}", csf.to_e())
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} partitions"))
}

fn criterion_2() -> Outcome {
    let rows = [
        (PosetClass::All, vec![1, 2, 5, 16, 63, 318, 2045]),
        (
            PosetClass::ThreePlusOneFree,
            vec![1, 2, 5, 15, 49, 173, 639],
        ),
        (
            PosetClass::BothFree,
            vec![1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796],
        ),
    ];
    for (class, expected) in rows {
        let got = class_counts(class, expected.len()).map_err(|e| e.to_string())?;
        ensure(got == expected, || format!("{class}: got {got:?}"))?;
    }
    Ok("all rows match".into())
}

fn criterion_3() -> Outcome {
    let mut total = 0;
    for n in 1..=7 {
        let rep = check_epositivity(n, PosetClass::ThreePlusOneFree, Reductions::NONE)
            .map_err(|e| e.to_string())?;
        ensure(rep.passed(), || {
            format!("n = {n}: {:?}", rep.counterexamples)
        })?;
        total += rep.checked;
    }
    let rep = check_epositivity(4, PosetClass::All, Reductions::NONE).map_err(|e| e.to_string())?;
    ensure(rep.checked == 16, || {
        format!("{} posets at n = 4", rep.checked)
    })?;
    ensure(rep.counterexamples.len() == 1, || {
        format!("{} counterexamples at n = 4", rep.counterexamples.len())
    })?;
    let bad = Poset::from_json(&rep.counterexamples[0].poset).map_err(|e| e.to_string())?;
    ensure(bad.is_isomorphic(&Poset::three_plus_one()), || {
        format!("unexpected counterexample {bad}")
    })?;
    Ok(format!(
        "{total} (3+1)-free posets e-positive; sole failure at n = 4 is 3+1"
    ))
}

fn criterion_4() -> Outcome {
    let rep = verify_modular_samples(500, 10, 20240601).map_err(|e| e.to_string())?;
    ensure(rep.checked == 500 && rep.passed(), || {
        format!("{:?}", rep.counterexamples)
    })?;
    Ok("500 seeded contexts".into())
}

fn criterion_5() -> Outcome {
    let delta = |j: usize, k: usize| {
        if j == k {
            Rational::one()
        } else {
            Rational::zero()
        }
    };
    for r in 0..=5 {
        for s in 0..=r {
            for k in 0..=s {
                for (word, label) in [
                    (udu(r, s, k), format!("U_{k} in V_{r}^{s}")),
                    (dud(s, r, k), format!("D_{k} in V_{s}^{r}")),
                ] {
                    let word = word.map_err(|e| e.to_string())?;
                    let g = modcsf::listing::two_level_word_to_graph(word.parts())
                        .map_err(|e| e.to_string())?;
                    let f = functionals(&g).map_err(|e| e.to_string())?;
                    for j in 0..=s {
                        ensure(f.get(j) == delta(j, k), || {
                            format!("F_{j}({label}) = {}", f.get(j))
                        })?;
                    }
                }
            }
        }
    }
    let mut graphs = 0;
    for total in 0..=7 {
        for r in 0..=total {
            for g in bicoloured_graphs_up_to_iso(r, total - r).map_err(|e| e.to_string())? {
                let f = functionals(&g).map_err(|e| e.to_string())?;
                ensure(f.sum() == Rational::one(), || {
                    format!("{g}: sum {}", f.sum())
                })?;
                ensure(f.values().iter().all(|v| !v.is_negative()), || {
                    format!("{g}: {f}")
                })?;
                ensure(f.values() == injection_functionals(&g).as_slice(), || {
                    format!("{g}: {f} disagrees with injection count")
                })?;
                graphs += 1;
            }
        }
    }
    Ok(format!(
        "orthogonality for r <= 5; {graphs} graphs normalized"
    ))
}

fn criterion_6() -> Outcome {
    let g: BicolouredGraph = "4x2:1-1,2-1,1-2,3-2,4-2"
        .parse()
        .map_err(|e: modcsf::Error| e.to_string())?;
    let f = functionals(&g).map_err(|e| e.to_string())?;
    let expected = [q(2, 12), q(5, 12), q(5, 12)];
    ensure(f.values() == expected, || format!("functionals {f}"))?;
    ensure(injection_functionals(&g) == expected, || {
        "injection count disagrees".into()
    })?;
    let e = three_free_e_expansion(&g).map_err(|e| e.to_string())?;
    let text = "20*e[4,2] + 40*e[5,1] + 180*e[6]";
    ensure(e.to_string() == text, || format!("expansion {e}"))?;
    let direct = csf_listing(&PartListing::from_graph(g)).map_err(|e| e.to_string())?;
    ensure(direct.to_e().to_string() == text, || {
        format!("direct csf {}", direct.to_e())
    })?;
    Ok(format!("F = {f}; {text}"))
}

fn criterion_7() -> Outcome {
    let mut total = 0;
    for n in 1..=6 {
        let rep = sweep_listing_reduction(n).map_err(|e| e.to_string())?;
        ensure(rep.passed(), || {
            format!("n = {n}: {:?}", rep.counterexamples)
        })?;
        total += rep.checked;
    }
    ensure(total == 1 + 2 + 5 + 15 + 49 + 173, || {
        format!("{total} posets")
    })?;
    Ok(format!("{total} listings reduced"))
}

fn criterion_8() -> Outcome {
    let rep = sweep_three_free(7).map_err(|e| e.to_string())?;
    ensure(rep.passed(), || format!("{:?}", rep.counterexamples))?;
    Ok(format!("{} graphs", rep.checked))
}

fn rewrite_invariance(cases: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut done = 0;
    let mut attempts = 0;
    while done < cases {
        attempts += 1;
        ensure(attempts < 100 * cases, || {
            "too few applicable rewrites".into()
        })?;
        let n = rng.gen_range(1..=9);
        let l = random_listing(&mut rng, n, 4, 0.4);
        let rewritten = match rng.gen_range(0..4) {
            0 => l.commute(rng.gen_range(0..l.len().max(1))),
            1 => l.circulate(),
            2 => {
                let lo = rng.gen_range(0..l.len());
                l.combine(lo, rng.gen_range(lo..l.len()))
            }
            _ => Ok(l.peel()),
        };
        let Ok(rw) = rewritten else { continue };
        let before = l.to_poset();
        let after = rw.listing.to_poset();
        ensure(before.relabel(&rw.relabel) == after, || {
            format!("poset of {l} changed")
        })?;
        let a = csf_listing(&l).map_err(|e| e.to_string())?;
        let b = csf_listing(&rw.listing).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("csf of {l} changed"))?;
        done += 1;
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    rewrite_invariance(500)?;
    let mut posets = 0;
    for n in 1..=6 {
        for p in modcsf::poset::enumerate_posets(n, PosetClass::All).map_err(|e| e.to_string())? {
            let f = csf_poset(&p).map_err(|e| e.to_string())?;
            let dual = csf_poset(&p.dual()).map_err(|e| e.to_string())?;
            ensure(f == dual, || format!("duality fails on {p}"))?;
            let g = csf_graph(&SimpleGraph::incomparability(&p)).map_err(|e| e.to_string())?;
            ensure(f == g, || format!("incomparability graph disagrees on {p}"))?;
            if let Some((x, y)) = p.ordinal_split() {
                let fx = csf_poset(&p.induced(&x)).map_err(|e| e.to_string())?;
                let fy = csf_poset(&p.induced(&y)).map_err(|e| e.to_string())?;
                ensure(f == fx.mul(&fy), || {
                    format!("multiplicativity fails on {p}")
                })?;
            }
            posets += 1;
        }
    }
    for n in 0..=8 {
        for lambda in partitions_of(n) {
            let e = SymFunc::term(Basis::E, lambda.clone(), Rational::one());
            let m = SymFunc::term(Basis::M, lambda.clone(), Rational::one());
            let back =
                m_to_e(&e_to_m(&e).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            ensure(back == e, || format!("e -> m -> e fails at {lambda}"))?;
            let back =
                e_to_m(&m_to_e(&m).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            ensure(back == m, || format!("m -> e -> m fails at {lambda}"))?;
        }
    }
    Ok(format!(
        "500 rewrites, {posets} posets, roundtrips through degree 8"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("P_lambda formula", criterion_1),
        ("poset counts", criterion_2),
        ("e-positivity sweep", criterion_3),
        ("modular law", criterion_4),
        ("dual bases", criterion_5),
        ("worked example", criterion_6),
        ("listing reduction sweep", criterion_7),
        ("3-free expansion sweep", criterion_8),
        ("property suites", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail}) [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
