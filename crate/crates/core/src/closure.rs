//! Integral closures of powers of monomial ideals.
//!
//! `x^a` lies in the closure of `I^n` exactly when `a` lies in `n·NP(I)`,
//! i.e. when there are rationals `l_g >= 0` with `sum l_g = n` and
//! `sum l_g·g <= a` coordinatewise over the minimal generators `g` of `I`.
//! Membership is decided by maximizing `sum l_g` subject to the second
//! condition with the exact simplex in [`crate::lp`].

use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::lp::{self, LpOutcome};
use crate::monomial::{Monomial, MonomialIdeal};

/// The packing LP attached to the generators of an ideal.
#[derive(Clone, Debug)]
pub struct NewtonProgram {
    // rows[i][j] = exponent of x_{i+1} in generator j
    rows: Vec<Vec<i64>>,
    ones: Vec<i64>,
    unit: bool,
}

impl NewtonProgram {
    pub fn new(ideal: &MonomialIdeal) -> Self {
        let gens = ideal.generators();
        let rows = (0..ideal.ambient())
            .map(|i| gens.iter().map(|g| g.exponents()[i] as i64).collect())
            .collect();
        NewtonProgram { rows, ones: vec![1; gens.len()], unit: ideal.is_unit() }
    }

    /// Largest `t` with `a ∈ t·conv(G(I)) + R^r_+`; `None` when unbounded
    /// (the unit ideal).
    pub fn packing_value(&self, a: &[u32]) -> Option<BigRational> {
        let b: Vec<i64> = a.iter().map(|&v| v as i64).collect();
        lp::maximize(&self.rows, &b, &self.ones, None).value().cloned()
    }

    pub fn contains(&self, n: usize, a: &[u32]) -> bool {
        if self.unit {
            return true;
        }
        if self.ones.is_empty() {
            return false;
        }
        let b: Vec<i64> = a.iter().map(|&v| v as i64).collect();
        match lp::maximize(&self.rows, &b, &self.ones, Some(n as i64)) {
            LpOutcome::Optimal { value, .. } => value >= BigRational::from_integer((n as i64).into()),
            LpOutcome::Unbounded => true,
        }
    }
}

/// Whether `x^a` lies in the integral closure of `I^n`.
pub fn np_member(ideal: &MonomialIdeal, n: usize, a: &Monomial) -> Result<bool> {
    if a.ambient() != ideal.ambient() {
        return Err(Error::DimensionMismatch { expected: ideal.ambient(), got: a.ambient() });
    }
    if n == 0 {
        return Ok(true);
    }
    Ok(NewtonProgram::new(ideal).contains(n, a.exponents()))
}

/// Minimal generators of the integral closure of `I^n`.
///
/// Candidates are the lattice points of the box `a_i <= n·rho_i`
/// (`rho_i` the largest exponent of `x_i` in `G(I)`) of total degree at most
/// `n·D + r - 1`, where `D` is the largest generator degree. Both bounds
/// hold for every minimal generator `a` of the closure: write
/// `a = p + v` with `p ∈ n·conv(G(I))` and `v >= 0`. If some `v_i >= 1` then
/// `a - e_i` is still in `n·NP(I)`, so minimality forces `v_i < 1` for all
/// `i` and `|a| = |p| + |v| < n·D + r`. Likewise `a_i > n·rho_i` would leave
/// room to lower `a_i`.
///
/// Points are walked by degree; a point is skipped as soon as it is a
/// multiple of a generator already found, and each degree level is tested
/// in parallel.
pub fn closure_power(ideal: &MonomialIdeal, n: usize) -> Result<MonomialIdeal> {
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    if n == 0 {
        return Err(Error::InvalidPower(0));
    }
    if ideal.is_unit() {
        return Ok(MonomialIdeal::unit(ideal.ambient()));
    }
    let r = ideal.ambient();
    let bounds: Vec<u32> = ideal.max_exponents().iter().map(|&b| b * n as u32).collect();
    let grid = Grid::new(bounds);
    let program = NewtonProgram::new(ideal);
    let ordinary = grid.membership(&ideal.power(n));
    let min_degree = n as u64 * ideal.min_degree();
    let max_degree = n as u64 * ideal.max_degree() + r as u64 - 1;

    let mut member = vec![false; grid.size()];
    let mut gens = Vec::new();
    for (degree, level) in grid.by_degree().into_iter().enumerate() {
        let degree = degree as u64;
        if degree < min_degree {
            continue;
        }
        let dominated = |idx: usize| {
            let p = grid.point(idx);
            (0..r).any(|i| p[i] > 0 && member[idx - grid.stride(i)])
        };
        let verdicts: Vec<(usize, bool, bool)> = level
            .par_iter()
            .map(|&idx| {
                if dominated(idx) {
                    (idx, true, false)
                } else if degree > max_degree {
                    (idx, false, false)
                } else {
                    let inside = ordinary[idx] || program.contains(n, &grid.point(idx));
                    (idx, inside, inside)
                }
            })
            .collect();
        for (idx, inside, generator) in verdicts {
            member[idx] = inside;
            if generator {
                gens.push(grid.monomial(idx));
            }
        }
    }
    MonomialIdeal::new(r, gens)
}

pub fn is_integrally_closed(ideal: &MonomialIdeal) -> Result<bool> {
    Ok(closure_power(ideal, 1)? == *ideal)
}

/// Smallest `m <= m_max` with `x^(m·a) ∈ I^(n·m)`, found by integer packing
/// of generators only. This never touches the LP, so it serves as an
/// independent check on [`np_member`].
pub fn power_certificate(ideal: &MonomialIdeal, n: usize, a: &Monomial, m_max: usize) -> Option<usize> {
    let mut gens: Vec<&Monomial> = ideal.generators().iter().collect();
    if gens.iter().any(|g| g.is_unit()) {
        return Some(1);
    }
    // larger generators first tightens the degree bound early
    gens.sort_by(|x, y| y.degree().cmp(&x.degree()));
    (1..=m_max).find(|&m| {
        let target = a.pow(m as u32);
        in_ordinary_power(&gens, n * m, target.exponents())
    })
}

/// Whether at least `need` generators (with repetition) fit under `budget`.
pub fn in_ordinary_power(gens: &[&Monomial], need: usize, budget: &[u32]) -> bool {
    let min_deg = gens.iter().map(|g| g.degree()).min().unwrap_or(0);
    let mut budget = budget.to_vec();
    pack(gens, need, &mut budget, min_deg)
}

fn pack(gens: &[&Monomial], need: usize, budget: &mut Vec<u32>, min_deg: u64) -> bool {
    if need == 0 {
        return true;
    }
    let Some((first, rest)) = gens.split_first() else {
        return false;
    };
    let total: u64 = budget.iter().map(|&b| b as u64).sum();
    if min_deg == 0 || total / min_deg < need as u64 {
        return false;
    }
    let fits = first
        .exponents()
        .iter()
        .zip(budget.iter())
        .filter(|(&g, _)| g > 0)
        .map(|(&g, &b)| (b / g) as usize)
        .min()
        .unwrap_or(need);
    let most = fits.min(need);
    if rest.is_empty() {
        return most >= need;
    }
    for c in (0..=most).rev() {
        for (b, &g) in budget.iter_mut().zip(first.exponents()) {
            *b -= g * c as u32;
        }
        let ok = pack(rest, need - c, budget, min_deg);
        for (b, &g) in budget.iter_mut().zip(first.exponents()) {
            *b += g * c as u32;
        }
        if ok {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn ideal(r: usize, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::new(r, gens.iter().map(|g| m(g)).collect()).unwrap()
    }

    fn c3() -> MonomialIdeal {
        MonomialIdeal::edge_ideal(&Graph::cycle(3))
    }

    #[test]
    fn membership_examples() {
        let squares = ideal(2, &[&[2, 0], &[0, 2]]);
        assert!(np_member(&squares, 1, &m(&[1, 1])).unwrap());
        assert!(!np_member(&c3(), 2, &m(&[1, 1, 1])).unwrap());
        assert!(np_member(&c3(), 2, &m(&[2, 1, 1])).unwrap());
        assert!(np_member(&c3(), 1, &m(&[1, 1])).is_err());
    }

    #[test]
    fn triangle_packing_value_is_three_halves() {
        let value = NewtonProgram::new(&c3()).packing_value(&[1, 1, 1]).unwrap();
        assert_eq!(value, BigRational::new(3.into(), 2.into()));
    }

    #[test]
    fn closure_examples() {
        let squares = ideal(2, &[&[2, 0], &[0, 2]]);
        assert_eq!(closure_power(&squares, 1).unwrap(), ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]));
        let expected = c3().power(2).sum(&ideal(3, &[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]])).unwrap();
        assert_eq!(closure_power(&c3(), 2).unwrap(), expected);
        // the three cubic terms are already in I^2
        assert_eq!(expected, c3().power(2));
        for gen in expected.generators() {
            assert!(np_member(&c3(), 2, gen).unwrap());
            for i in gen.support() {
                let lower = gen.colon(&Monomial::var(3, i));
                assert!(!np_member(&c3(), 2, &lower).unwrap());
            }
        }
    }

    #[test]
    fn bipartite_closures_are_ordinary_powers() {
        for g in [Graph::path(4), Graph::cycle(4), Graph::new(4, &[(1, 2), (1, 3), (1, 4)]).unwrap()] {
            let i = MonomialIdeal::edge_ideal(&g);
            for n in 1..=3 {
                let closure = closure_power(&i, n).unwrap();
                assert_eq!(closure, i.power(n));
                assert_eq!(closure, i.symbolic_power(n).unwrap());
            }
        }
    }

    #[test]
    fn closure_errors_and_degenerate_ideals() {
        assert!(matches!(closure_power(&MonomialIdeal::zero(2), 1), Err(Error::ZeroIdeal)));
        assert!(matches!(closure_power(&c3(), 0), Err(Error::InvalidPower(0))));
        assert!(closure_power(&MonomialIdeal::unit(2), 3).unwrap().is_unit());
    }

    #[test]
    fn integrally_closed_examples() {
        assert!(is_integrally_closed(&c3()).unwrap());
        assert!(is_integrally_closed(&ideal(3, &[&[1, 1, 1], &[1, 0, 0]])).unwrap());
        assert!(!is_integrally_closed(&ideal(2, &[&[2, 0], &[0, 2]])).unwrap());
        assert!(is_integrally_closed(&MonomialIdeal::unit(2)).unwrap());
    }

    #[test]
    fn certificate_examples() {
        let squares = ideal(2, &[&[2, 0], &[0, 2]]);
        assert_eq!(power_certificate(&squares, 1, &m(&[1, 1]), 4), Some(2));
        assert_eq!(power_certificate(&c3(), 2, &m(&[2, 1, 1]), 4), Some(1));
        assert_eq!(power_certificate(&c3(), 2, &m(&[1, 1, 1]), 6), None);
    }

    #[test]
    fn packing_search_matches_power_generators() {
        let i = ideal(3, &[&[2, 1, 0], &[0, 1, 2], &[1, 0, 1]]);
        let gens: Vec<&Monomial> = i.generators().iter().collect();
        let grid = Grid::new(vec![5, 4, 5]);
        for k in 1..=3 {
            let table = grid.membership(&i.power(k));
            for idx in 0..grid.size() {
                assert_eq!(in_ordinary_power(&gens, k, &grid.point(idx)), table[idx], "k={k} a={:?}", grid.point(idx));
            }
        }
    }
}
