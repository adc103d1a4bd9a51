//! Independent oracles shared by the integration tests. None of them call
//! the library's LP, decomposition or homology code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use closurestab::{Graph, Monomial, MonomialIdeal, PrimeSupport};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

pub fn ideal(r: usize, gens: &[&[u32]]) -> MonomialIdeal {
    MonomialIdeal::new(r, gens.iter().map(|g| Monomial::new(g.to_vec())).collect()).unwrap()
}

pub fn random_ideal(rng: &mut impl Rng, max_vars: usize, max_gens: usize, max_exp: u32) -> MonomialIdeal {
    let r = rng.gen_range(1..=max_vars);
    let k = rng.gen_range(1..=max_gens);
    let gens = (0..k)
        .map(|_| loop {
            let e: Vec<u32> = (0..r).map(|_| rng.gen_range(0..=max_exp)).collect();
            if e.iter().any(|&x| x > 0) {
                break Monomial::new(e);
            }
        })
        .collect();
    MonomialIdeal::new(r, gens).unwrap()
}

/// Every point of the box `0 <= a_i <= bounds_i`.
pub fn box_points(bounds: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out.into_iter().flat_map(|p| (0..=b).map(move |v| [p.clone(), vec![v]].concat())).collect();
    }
    out
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn member(ideal: &MonomialIdeal, a: &[u32]) -> bool {
    ideal.generators().iter().any(|g| divides(g.exponents(), a))
}

/// Associated primes as the prime colons `I : x^f` over the box
/// `0 <= f_i <= max exponent`, where every colon of `I` already occurs.
pub fn brute_ass(ideal: &MonomialIdeal) -> BTreeSet<Vec<usize>> {
    let r = ideal.ambient();
    let rho = (0..r).map(|i| ideal.generators().iter().map(|g| g.exponents()[i]).max().unwrap_or(0)).collect::<Vec<_>>();
    let mut out = BTreeSet::new();
    for f in box_points(&rho) {
        if member(ideal, &f) {
            continue;
        }
        // I : x^f is generated by x^(g - f)^+; it is prime iff its minimal
        // generators are variables
        let colon: Vec<Vec<u32>> =
            ideal.generators().iter().map(|g| g.exponents().iter().zip(&f).map(|(&a, &b)| a.saturating_sub(b)).collect()).collect();
        let minimal: Vec<&Vec<u32>> =
            colon.iter().filter(|c| !colon.iter().any(|d| d != *c && divides(d, c))).collect();
        let mut vars = BTreeSet::new();
        let prime = minimal.iter().all(|c| {
            let deg: u32 = c.iter().sum();
            if deg == 1 {
                vars.insert(c.iter().position(|&x| x == 1).unwrap() + 1);
            }
            deg == 1
        });
        if prime {
            out.insert(vars.into_iter().collect());
        }
    }
    out
}

pub fn support_set(primes: &[PrimeSupport]) -> BTreeSet<Vec<usize>> {
    primes.iter().map(|p| p.vars().to_vec()).collect()
}

/// Minimal vertex covers by brute force over vertex subsets.
pub fn minimal_covers(g: &Graph) -> Vec<Vec<usize>> {
    let r = g.vertex_count();
    let edges = g.edges();
    let covers: Vec<u64> = (0u64..1 << r)
        .filter(|&s| edges.iter().all(|&(u, v)| s >> (u - 1) & 1 == 1 || s >> (v - 1) & 1 == 1))
        .collect();
    covers
        .iter()
        .filter(|&&s| !covers.iter().any(|&t| t != s && t & s == t))
        .map(|&s| (1..=r).filter(|&v| s >> (v - 1) & 1 == 1).collect())
        .collect()
}

/// `x^a` lies in the `n`-th symbolic power of `I(G)` iff every minimal
/// vertex cover carries weight at least `n` on `a`.
pub fn in_symbolic_power(covers: &[Vec<usize>], n: usize, a: &[u32]) -> bool {
    covers.iter().all(|c| c.iter().map(|&v| a[v - 1] as usize).sum::<usize>() >= n)
}

/// Rank over Q by plain Gaussian elimination on big rationals.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        let inv = BigRational::one() / m[rank][c].clone();
        for i in rank + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone() * inv.clone();
            for j in c..cols {
                let d = f.clone() * m[rank][j].clone();
                m[i][j] -= d;
            }
        }
        rank += 1;
    }
    rank
}

/// Multigraded Betti numbers `β_{i,α}(I)` from the Taylor resolution: in
/// degree `α`, `Tor_{i+1}(R/I, K)` is the homology of the complex on the
/// generator subsets with lcm exactly `α`, where the Taylor differential
/// keeps only faces whose lcm does not drop.
pub fn taylor_betti(ideal: &MonomialIdeal) -> BTreeMap<usize, BTreeMap<Vec<u32>, u64>> {
    let gens: Vec<&[u32]> = ideal.generators().iter().map(|g| g.exponents()).collect();
    let k = gens.len();
    assert!(k <= 12, "Taylor oracle is exponential in the generator count");
    let r = ideal.ambient();
    let lcm_of = |s: usize| -> Vec<u32> {
        (0..r).map(|i| (0..k).filter(|j| s >> j & 1 == 1).map(|j| gens[j][i]).max().unwrap_or(0)).collect()
    };
    let mut by_lcm: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    for s in 1usize..1 << k {
        by_lcm.entry(lcm_of(s)).or_default().push(s);
    }
    let mut table: BTreeMap<usize, BTreeMap<Vec<u32>, u64>> = BTreeMap::new();
    for (alpha, subsets) in by_lcm {
        let level = |size: u32| subsets.iter().copied().filter(|s| s.count_ones() == size).collect::<Vec<_>>();
        // rank of the differential from subsets of `size` to `size - 1`
        let boundary_rank = |size: u32| -> usize {
            if size <= 1 {
                return 0;
            }
            let upper = level(size);
            let lower = level(size - 1);
            if upper.is_empty() || lower.is_empty() {
                return 0;
            }
            let rows: Vec<Vec<i64>> = upper
                .iter()
                .map(|&s| {
                    let mut row = vec![0i64; lower.len()];
                    let mut sign = 1;
                    for j in 0..k {
                        if s >> j & 1 == 1 {
                            if let Some(pos) = lower.iter().position(|&t| t == s & !(1 << j)) {
                                row[pos] = sign;
                            }
                            sign = -sign;
                        }
                    }
                    row
                })
                .collect();
            rational_rank(&rows)
        };
        for size in 1..=k as u32 {
            let chains = level(size).len();
            if chains == 0 {
                continue;
            }
            let h = chains - boundary_rank(size) - boundary_rank(size + 1);
            if h > 0 {
                table.entry(size as usize - 1).or_default().insert(alpha.clone(), h as u64);
            }
        }
    }
    table
}

pub fn graphs_up_to(max_vertices: usize, connected_only: bool) -> Vec<Graph> {
    closurestab::harness::enumerate_graphs(max_vertices, connected_only)
}
