//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Runs without the libtest harness so the lines always
//! print.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use closurestab::closure::{closure_power, np_member, power_certificate};
use closurestab::harness::{
    self, bounds_verdict, check_cover, check_leaf, check_t0, generate_corpus, naive_expansion_probe, Check,
    CorpusSpec, RunOptions,
};
use closurestab::stability::{closure_powers, report, report_from_closures, StabilityOptions};
use closurestab::{
    associated_primes, ass_via_localization, betti_numbers, maximal_in_ass, AssSet, Graph, Monomial, MonomialIdeal,
};
use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed;
/// Largest multiplier tried when certifying `x^(m·a) ∈ I^(m·n)`.
const CERTIFICATE_MULTIPLIER: usize = 8;
const TAYLOR_MAX_GENERATORS: usize = 8;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, || format!("{what} took {} ms, limit {} ms", elapsed.as_millis(), limit.as_millis()))
}

/// Closure powers of one corpus graph, up to one past both bounds.
struct Computed {
    graph: Graph,
    closures: Vec<MonomialIdeal>,
}

fn criterion_three_corpus() -> Vec<Computed> {
    generate_corpus(&CorpusSpec::exhaustive(6))
        .unwrap()
        .into_iter()
        .map(|graph| {
            let upto = graph.phi0().max(graph.phi1()) + 1;
            let closures = closure_powers(&graph, upto, StabilityOptions::default()).unwrap();
            Computed { graph, closures }
        })
        .collect()
}

fn c1_naive_expansion() -> Outcome {
    let start = Instant::now();
    let c3 = Graph::cycle(3);
    let probe = naive_expansion_probe(&c3, &c3, 3).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(!probe.equal && !probe.missing.is_empty(), || format!("closure equals the naive expansion: {probe:?}"))?;
    // each missing generator is certified in closure((I+J)^3) by an
    // integer packing, independently of the LP
    let sum = MonomialIdeal::edge_ideal(&c3.disjoint_union(&c3).unwrap());
    for gap in &probe.missing {
        let m = Monomial::new(gap.clone());
        ensure(power_certificate(&sum, 3, &m, CERTIFICATE_MULTIPLIER).is_some(), || format!("{m} has no certificate"))?;
    }
    within(elapsed, Duration::from_secs(10), "two-triangle comparison")?;
    Ok(format!(
        "{} closure generators vs {} in the expansion; missing {:?}; {} ms",
        probe.closure_generators,
        probe.expansion_generators,
        probe.missing,
        elapsed.as_millis()
    ))
}

fn c2_binomial_expansion() -> Outcome {
    let start = Instant::now();
    let bipartite: Vec<Graph> = graphs_up_to(4, false).into_iter().filter(Graph::is_bipartite).collect();
    let other: Vec<Graph> = graphs_up_to(5, false).into_iter().filter(|g| !g.is_bipartite()).collect();
    let mut checked = 0;
    for a in &bipartite {
        for b in &other {
            for n in 1..=3 {
                let outcome = check_t0(a, b, n).map_err(|e| e.to_string())?;
                ensure(outcome.passed, || format!("{a:?} + {b:?} at n={n}: {:?}", outcome.detail))?;
                checked += 1;
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(300), "expansion checks")?;
    Ok(format!(
        "{} bipartite x {} nonbipartite graphs, {checked} equalities, {} ms",
        bipartite.len(),
        other.len(),
        start.elapsed().as_millis()
    ))
}

fn c3_bounds(corpus: &[Computed]) -> Outcome {
    let options = RunOptions { checks: vec![Check::Bounds], ..RunOptions::default() };
    let start = Instant::now();
    let small = harness::run(&CorpusSpec::exhaustive(5), &options).map_err(|e| e.to_string())?;
    let small_time = start.elapsed();
    let start = Instant::now();
    let full = harness::run(&CorpusSpec::exhaustive(6), &options).map_err(|e| e.to_string())?;
    let full_time = start.elapsed();
    ensure(small.all_passed() && full.all_passed(), || format!("{:?}", full.counterexamples))?;
    within(small_time, Duration::from_secs(120), "5-vertex corpus")?;
    within(full_time, Duration::from_secs(30 * 60), "6-vertex corpus")?;

    let (mut t6, mut t8) = (0, 0);
    for c in corpus {
        let rep = report_from_closures(&c.graph, &c.closures, 1).map_err(|e| e.to_string())?;
        let verdict = bounds_verdict(&rep);
        ensure(verdict.passed(), || format!("{:?}: {verdict:?}", c.graph))?;
        t6 += usize::from(verdict.t6.is_some());
        t8 += usize::from(verdict.t8.is_some());
        let pseudoforest = c.graph.is_pseudoforest();
        ensure(verdict.t6.is_some() == pseudoforest, || format!("{:?}: T6 coverage", c.graph))?;
        ensure(verdict.t8.is_some() == (pseudoforest && !c.graph.has_cycle_of_length(4)), || {
            format!("{:?}: T8 coverage", c.graph)
        })?;
    }
    Ok(format!(
        "{} connected graphs, T6 on {t6} pseudoforests, T8 on {t8} without a 4-cycle; <=5 vertices {} ms, <=6 vertices {} ms",
        full.graphs.len(),
        small_time.as_millis(),
        full_time.as_millis()
    ))
}

fn c4_main_as_one() -> Outcome {
    let start = Instant::now();
    let mut spec = CorpusSpec::exhaustive(7);
    spec.connected_only = false;
    spec.pseudoforest_only = true;
    spec.allow_large = true;
    let graphs: Vec<Graph> =
        generate_corpus(&spec).map_err(|e| e.to_string())?.into_iter().filter(|g| g.n1().is_ok()).collect();
    ensure(!graphs.is_empty(), || "empty corpus".into())?;
    let mut instances = 0;
    for g in &graphs {
        let n1 = g.n1().unwrap();
        let closures = closure_powers(g, g.phi0() + 1, StabilityOptions::default()).map_err(|e| e.to_string())?;
        for (k, c) in closures.iter().enumerate() {
            let n = k + 1;
            ensure(maximal_in_ass(c) == (n >= n1), || format!("{g:?} n={n} n1={n1}"))?;
            instances += 1;
        }
    }
    Ok(format!("{} pseudoforests, {instances} powers, {} ms", graphs.len(), start.elapsed().as_millis()))
}

fn c5_triangle() -> Outcome {
    let g = Graph::cycle(3);
    let inv = (g.n0(), g.n1().map_err(|e| e.to_string())?, g.phi0(), g.phi1());
    ensure(inv == (2, 2, 2, 2), || format!("invariants {inv:?}"))?;
    let rep = report(&g).map_err(|e| e.to_string())?;
    let covers: BTreeSet<Vec<usize>> = [vec![1, 2], vec![1, 3], vec![2, 3]].into();
    let mut with_top = covers.clone();
    with_top.insert(vec![1, 2, 3]);
    let i = MonomialIdeal::edge_ideal(&g);
    let closed: Vec<MonomialIdeal> = (1..=2).map(|n| closure_power(&i, n).unwrap()).collect();
    let oracle_ass: Vec<BTreeSet<Vec<usize>>> = closed.iter().map(brute_ass).collect();
    let oracle_depth: Vec<usize> =
        closed.iter().map(|c| 3 - (taylor_betti(c).keys().next_back().unwrap() + 1)).collect();
    ensure(oracle_ass == vec![covers, with_top], || format!("oracle Ass {oracle_ass:?}"))?;
    ensure(oracle_depth == vec![1, 0], || format!("oracle depth {oracle_depth:?}"))?;
    let reported: Vec<BTreeSet<Vec<usize>>> = rep.ass_sequence.iter().map(|a| support_set(a.primes())).collect();
    ensure(reported == oracle_ass, || format!("reported Ass {reported:?}"))?;
    ensure(rep.depth_sequence == oracle_depth, || format!("reported depth {:?}", rep.depth_sequence))?;
    ensure(rep.astab_bar == 2 && rep.dstab_bar == 2, || format!("indices {} {}", rep.astab_bar, rep.dstab_bar))?;
    Ok("n0=n1=phi0=phi1=2, Ass and depth [1, 0] match the oracles, astab=dstab=2".into())
}

fn c6_oracles(corpus: &[Computed]) -> Outcome {
    // (a) LP membership against integer certificates on the whole box
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut points = 0;
    let mut taylor_pool: Vec<MonomialIdeal> = Vec::new();
    for _ in 0..20 {
        let i = random_ideal(&mut rng, 4, 4, 2);
        for n in 1..=2 {
            let bounds: Vec<u32> = i.max_exponents().iter().map(|&b| b * n as u32).collect();
            for a in box_points(&bounds) {
                let a = Monomial::new(a);
                let lp = np_member(&i, n, &a).map_err(|e| e.to_string())?;
                let cert = power_certificate(&i, n, &a, CERTIFICATE_MULTIPLIER).is_some();
                ensure(lp == cert, || format!("{i} n={n} at {a}: lp {lp}, certificate {cert}"))?;
                points += 1;
            }
        }
        taylor_pool.push(i);
    }
    // (b) decomposition against localization on every criterion 3 closure
    let mut closures = 0;
    for c in corpus {
        for (k, ideal) in c.closures.iter().enumerate() {
            let left = associated_primes(ideal).map_err(|e| e.to_string())?;
            let right = ass_via_localization(ideal).map_err(|e| e.to_string())?;
            ensure(left == right, || format!("{:?} n={}: {left:?} vs {right:?}", c.graph, k + 1))?;
            closures += 1;
        }
        taylor_pool.push(MonomialIdeal::edge_ideal(&c.graph));
        taylor_pool.extend(c.closures.iter().cloned());
    }
    // (c) upper-Koszul Betti numbers against the Taylor resolution
    taylor_pool.retain(|i| i.len() <= TAYLOR_MAX_GENERATORS && i.is_proper());
    taylor_pool.sort_by_key(|i| format!("{i}"));
    taylor_pool.dedup();
    for i in &taylor_pool {
        let table = betti_numbers(i).map_err(|e| e.to_string())?;
        ensure(table.entries == taylor_betti(i), || format!("Betti numbers of {i}"))?;
    }
    Ok(format!(
        "(a) {points} lattice points in 20 ideals; (b) {closures} closures; (c) {} ideals with <= {TAYLOR_MAX_GENERATORS} generators",
        taylor_pool.len()
    ))
}

fn c7_monotone_and_contained(corpus: &[Computed]) -> Outcome {
    ensure(cfg!(debug_assertions), || "test build without debug assertions".into())?;
    let mut powers = 0;
    for c in corpus {
        let covers = minimal_covers(&c.graph);
        let i = MonomialIdeal::edge_ideal(&c.graph);
        let mut previous: Option<AssSet> = None;
        for (k, closed) in c.closures.iter().enumerate() {
            let n = k + 1;
            ensure(i.power(n).is_subset(closed), || format!("{:?}: I^{n} not in its closure", c.graph))?;
            for g in closed.generators() {
                ensure(in_symbolic_power(&covers, n, g.exponents()), || {
                    format!("{:?}: {g} outside the symbolic power {n}", c.graph)
                })?;
            }
            // cross-checked against the localization route in criterion 6
            let ass = associated_primes(closed).map_err(|e| e.to_string())?;
            if let Some(prev) = &previous {
                ensure(prev.is_subset(&ass), || format!("{:?}: Ass shrinks at n={n}", c.graph))?;
            }
            previous = Some(ass);
            powers += 1;
        }
    }
    Ok(format!("{powers} closure powers; debug assertions on"))
}

fn c8_leaf_and_cover(corpus: &[Computed]) -> Outcome {
    let mut graphs = 0;
    for c in corpus.iter().filter(|c| c.graph.is_pseudoforest() && !c.graph.leaves().is_empty()) {
        let leaf = check_leaf(&c.graph, &c.closures).map_err(|e| e.to_string())?;
        let cover = check_cover(&c.graph, &c.closures).map_err(|e| e.to_string())?;
        ensure(leaf.passed && cover.passed, || format!("{:?}: {:?} {:?}", c.graph, leaf.detail, cover.detail))?;
        graphs += 1;
    }
    ensure(graphs > 0, || "no pseudoforest with a leaf".into())?;
    Ok(format!("{graphs} pseudoforests with a leaf, all computed powers"))
}

fn main() {
    let start = Instant::now();
    let corpus = criterion_three_corpus();
    println!("criterion 3 corpus: {} graphs, closures in {} ms", corpus.len(), start.elapsed().as_millis());
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("1", Box::new(c1_naive_expansion)),
        ("2", Box::new(c2_binomial_expansion)),
        ("3", Box::new(|| c3_bounds(&corpus))),
        ("4", Box::new(c4_main_as_one)),
        ("5", Box::new(c5_triangle)),
        ("6", Box::new(|| c6_oracles(&corpus))),
        ("7", Box::new(|| c7_monotone_and_contained(&corpus))),
        ("8", Box::new(|| c8_leaf_and_cover(&corpus))),
    ];
    let mut failed = 0;
    for (id, check) in criteria {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| check())).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {id}: {detail} [{} ms]", started.elapsed().as_millis()),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {id}: {detail} [{} ms]", started.elapsed().as_millis());
            }
        }
    }
    println!("acceptance: {} of 8 criteria passed in {} ms", 8 - failed, start.elapsed().as_millis());
    if failed > 0 {
        std::process::exit(1);
    }
}
