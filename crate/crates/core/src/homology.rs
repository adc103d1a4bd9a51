//! Multigraded Betti numbers and depth of monomial quotients.
//!
//! `β_{i,α}(I)` is the rank of `H̃_{i-1}(K^α; Q)` where the upper Koszul
//! complex `K^α` collects the squarefree `γ ≤ α` with `x^{α-γ} ∈ I`. Only
//! multidegrees in the lcm lattice of `I` can carry nonzero Betti numbers,
//! and depth follows from the projective dimension by Auslander–Buchsbaum.
//! All ranks are taken over the rationals.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::decomp::maximal_in_ass;
use crate::grid::Grid;
use crate::lp::ExactScalar;
use crate::monomial::{Monomial, MonomialIdeal};

/// Elements of the lcm lattice of `G(I)`, in grid order of the box spanned
/// by the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcmLattice {
    pub elements: Vec<Monomial>,
}

/// A simplicial complex on variables `1..=r`, faces as bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    faces: Vec<u64>,
}

impl SimplicialComplex {
    pub fn new(mut faces: Vec<u64>) -> Self {
        faces.sort_by_key(|f| (f.count_ones(), *f));
        faces.dedup();
        SimplicialComplex { faces }
    }

    pub fn faces(&self) -> &[u64] {
        &self.faces
    }

    /// Faces as sorted lists of 1-based vertices.
    pub fn face_lists(&self) -> Vec<Vec<usize>> {
        self.faces
            .iter()
            .map(|&f| (0..64).filter(|i| f >> i & 1 == 1).map(|i| i + 1).collect())
            .collect()
    }

    pub fn is_void(&self) -> bool {
        self.faces.is_empty()
    }

    /// `ranks[d + 1]` is the rank of `H̃_d` for `d >= -1`. The empty complex
    /// `{∅}` has `H̃_{-1}` of rank one; the void complex has no homology.
    pub fn reduced_homology_ranks(&self) -> Vec<usize> {
        let Some(&top) = self.faces.last() else {
            return Vec::new();
        };
        let levels = top.count_ones() as usize + 1;
        let mut by_dim: Vec<Vec<u64>> = vec![Vec::new(); levels];
        for &f in &self.faces {
            by_dim[f.count_ones() as usize].push(f);
        }
        // boundary rank from level k to level k - 1
        let mut boundary_rank = vec![0usize; levels + 1];
        for k in 1..levels {
            boundary_rank[k] = boundary_matrix_rank(&by_dim[k], &by_dim[k - 1]);
        }
        (0..levels).map(|k| by_dim[k].len() - boundary_rank[k] - boundary_rank[k + 1]).collect()
    }
}

fn boundary_matrix_rank(faces: &[u64], facets_below: &[u64]) -> usize {
    if faces.is_empty() || facets_below.is_empty() {
        return 0;
    }
    let position: BTreeMap<u64, usize> = facets_below.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let rows: Vec<Vec<i64>> = faces
        .iter()
        .map(|&f| {
            let mut row = vec![0i64; facets_below.len()];
            let mut sign = 1;
            for v in 0..64 {
                if f >> v & 1 == 1 {
                    row[position[&(f & !(1 << v))]] = sign;
                    sign = -sign;
                }
            }
            row
        })
        .collect();
    rank(&rows)
}

/// Rank over the rationals. Rows are reduced with fraction-free integer
/// elimination (each row kept primitive), redone on big rationals if an
/// entry overflows.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    integer_rank(rows).unwrap_or_else(|| rank_in::<BigRational>(rows).expect("exact"))
}

fn integer_rank(rows: &[Vec<i64>]) -> Option<usize> {
    let mut m: Vec<Vec<i64>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let (top, below) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in below.iter_mut().filter(|row| row[c] != 0) {
            let g = pivot_row[c].gcd(&row[c]);
            let (a, b) = (pivot_row[c] / g, row[c] / g);
            let mut content = 0i64;
            for j in c..cols {
                row[j] = row[j].checked_mul(a)?.checked_sub(pivot_row[j].checked_mul(b)?)?;
                content = content.gcd(&row[j]);
            }
            if content > 1 {
                row[c..].iter_mut().for_each(|v| *v /= content);
            }
        }
        rank += 1;
    }
    Some(rank)
}

fn rank_in<T: ExactScalar>(rows: &[Vec<i64>]) -> Option<usize> {
    let mut m: Vec<Vec<T>> = rows.iter().map(|r| r.iter().map(|&v| T::from_i64(v)).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for i in rank + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].try_div(&pivot)?;
            for j in c..cols {
                let delta = factor.try_mul(&m[rank][j])?;
                m[i][j] = m[i][j].try_sub(&delta)?;
            }
        }
        rank += 1;
    }
    Some(rank)
}

/// `K^α` with faces as bitmasks over the positions of `supp(α)`, stored
/// as a membership table.
struct LocalComplex {
    support: Vec<usize>,
    face: Vec<bool>,
}

impl LocalComplex {
    fn from_table(grid: &Grid, member: &[bool], alpha: &[u32]) -> Self {
        let support: Vec<usize> = (0..alpha.len()).filter(|&i| alpha[i] > 0).collect();
        let base = grid.index(alpha);
        let face = (0usize..1 << support.len())
            .map(|mask| {
                let idx = support
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .fold(base, |idx, (_, &v)| idx - grid.stride(v));
                member[idx]
            })
            .collect();
        LocalComplex { support, face }
    }

    fn size(&self) -> usize {
        self.support.len()
    }

    /// A cone over some vertex has no reduced homology.
    fn is_cone(&self) -> bool {
        (0..self.size()).any(|j| {
            let bit = 1 << j;
            (0..self.face.len()).all(|m| m & bit != 0 || !self.face[m] || self.face[m | bit])
        })
    }

    fn level(&self, card: usize) -> Vec<usize> {
        (0..self.face.len()).filter(|&m| self.face[m] && m.count_ones() as usize == card).collect()
    }

    /// Rank of the boundary map out of the faces with `card` vertices.
    fn boundary_rank(&self, card: usize) -> usize {
        if card == 0 || card > self.size() {
            return 0;
        }
        let upper = self.level(card);
        let lower = self.level(card - 1);
        if upper.is_empty() || lower.is_empty() {
            return 0;
        }
        let mut position = vec![usize::MAX; self.face.len()];
        for (i, &f) in lower.iter().enumerate() {
            position[f] = i;
        }
        let rows: Vec<Vec<i64>> = upper
            .iter()
            .map(|&f| {
                let mut row = vec![0i64; lower.len()];
                let mut sign = 1;
                for v in 0..self.size() {
                    if f >> v & 1 == 1 {
                        row[position[f & !(1 << v)]] = sign;
                        sign = -sign;
                    }
                }
                row
            })
            .collect();
        rank(&rows)
    }

    /// Rank of `H̃_{card-1}`.
    fn homology(&self, card: usize) -> usize {
        let chains = self.level(card).len();
        if chains == 0 {
            return 0;
        }
        chains - self.boundary_rank(card) - self.boundary_rank(card + 1)
    }
}

/// Closure of `G(I)` under pairwise lcm.
pub fn lcm_lattice(ideal: &MonomialIdeal) -> LcmLattice {
    if ideal.is_zero() {
        return LcmLattice { elements: Vec::new() };
    }
    let grid = Grid::new(ideal.max_exponents());
    let mut seen = vec![false; grid.size()];
    let mut queue: Vec<Monomial> = Vec::new();
    for g in ideal.generators() {
        let idx = grid.index(g.exponents());
        if !seen[idx] {
            seen[idx] = true;
            queue.push(g.clone());
        }
    }
    while let Some(e) = queue.pop() {
        for g in ideal.generators() {
            let j = e.lcm(g);
            let idx = grid.index(j.exponents());
            if !seen[idx] {
                seen[idx] = true;
                queue.push(j);
            }
        }
    }
    let elements = (0..grid.size()).filter(|&i| seen[i]).map(|i| grid.monomial(i)).collect();
    LcmLattice { elements }
}

/// `K^α(I) = { γ ⊆ supp(α) squarefree : x^{α-γ} ∈ I }`.
pub fn upper_koszul(ideal: &MonomialIdeal, alpha: &Monomial) -> Result<SimplicialComplex> {
    if alpha.ambient() != ideal.ambient() {
        return Err(Error::DimensionMismatch { expected: ideal.ambient(), got: alpha.ambient() });
    }
    if !ideal.contains(alpha) {
        return Err(Error::InvalidSpec(format!("{alpha} is not a multiple of any generator")));
    }
    let support = alpha.support();
    let mut faces = Vec::new();
    for mask in 0u64..1 << support.len() {
        let mut e = alpha.exponents().to_vec();
        let mut face = 0u64;
        for (k, &v) in support.iter().enumerate() {
            if mask >> k & 1 == 1 {
                e[v - 1] -= 1;
                face |= 1 << (v - 1);
            }
        }
        if ideal.contains(&Monomial::new(e)) {
            faces.push(face);
        }
    }
    Ok(SimplicialComplex::new(faces))
}

/// Nonzero `β_{i,α}(I)`, keyed by homological degree then multidegree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub entries: BTreeMap<usize, BTreeMap<Vec<u32>, u64>>,
}

impl BettiTable {
    pub fn get(&self, i: usize, alpha: &[u32]) -> u64 {
        self.entries.get(&i).and_then(|row| row.get(alpha)).copied().unwrap_or(0)
    }

    /// Total Betti numbers `β_i(I)` for `i = 0..`.
    pub fn totals(&self) -> Vec<u64> {
        let top = self.entries.keys().next_back().map_or(0, |&i| i + 1);
        (0..top).map(|i| self.entries.get(&i).map_or(0, |row| row.values().sum())).collect()
    }

    /// Largest `i` with some `β_{i,α}(I) ≠ 0`.
    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }
}

pub fn betti_numbers(ideal: &MonomialIdeal) -> Result<BettiTable> {
    check_proper(ideal)?;
    let grid = Grid::new(ideal.max_exponents());
    let member = grid.membership(ideal);
    let lattice = lcm_lattice(ideal);
    let per_degree: Vec<(Vec<u32>, Vec<usize>)> = lattice
        .elements
        .par_iter()
        .filter_map(|alpha| {
            let local = LocalComplex::from_table(&grid, &member, alpha.exponents());
            if local.is_cone() {
                return None;
            }
            Some((alpha.exponents().to_vec(), (0..=local.size()).map(|card| local.homology(card)).collect()))
        })
        .collect();
    let mut table = BettiTable::default();
    for (alpha, ranks) in per_degree {
        for (i, &rank) in ranks.iter().enumerate() {
            if rank > 0 {
                table.entries.entry(i).or_default().insert(alpha.clone(), rank as u64);
            }
        }
    }
    Ok(table)
}

fn check_proper(ideal: &MonomialIdeal) -> Result<()> {
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    if ideal.is_unit() {
        return Err(Error::UnitIdeal);
    }
    Ok(())
}

/// Projective dimension of `R/I`: one more than the largest `i` with
/// `β_{i,α}(I) ≠ 0`. Candidates `i` are tried from the top down, so each
/// multidegree only has its homology computed in the degrees still open.
pub fn projective_dimension(ideal: &MonomialIdeal) -> Result<usize> {
    if ideal.is_zero() {
        return Ok(0);
    }
    check_proper(ideal)?;
    let grid = Grid::new(ideal.max_exponents());
    let member = grid.membership(ideal);
    let complexes: Vec<LocalComplex> = lcm_lattice(ideal)
        .elements
        .par_iter()
        .map(|alpha| LocalComplex::from_table(&grid, &member, alpha.exponents()))
        .filter(|c| !c.is_cone())
        .collect();
    // β_{i,α}(I) is the rank of H̃_{i-1}, which lives on faces with i vertices
    let top = (0..=ideal.ambient())
        .rev()
        .find(|&i| complexes.par_iter().any(|c| c.size() >= i && c.homology(i) > 0))
        .expect("every generator contributes to β_0");
    Ok(top + 1)
}

/// `depth R/I = r - pd(R/I)`; the zero ideal gives `r`. Depth zero means
/// the maximal ideal is associated, which the socle test settles without
/// any homology.
pub fn depth_quotient(ideal: &MonomialIdeal) -> Result<usize> {
    if ideal.is_unit() {
        return Err(Error::UnitIdeal);
    }
    if maximal_in_ass(ideal) {
        return Ok(0);
    }
    Ok(ideal.ambient() - projective_dimension(ideal)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::closure_power;
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
    fn lattice_examples() {
        let l = lcm_lattice(&ideal(3, &[&[1, 1, 0], &[0, 1, 1]]));
        let mut got = l.elements.clone();
        got.sort();
        assert_eq!(got, vec![m(&[1, 1, 0]), m(&[0, 1, 1]), m(&[1, 1, 1])]);
        assert_eq!(lcm_lattice(&c3()).elements.len(), 4);
        assert_eq!(lcm_lattice(&ideal(2, &[&[2, 3]])).elements, vec![m(&[2, 3])]);
    }

    #[test]
    fn koszul_examples() {
        // x^{(1,1)-e_i} is a single variable, not in (xy)
        let k = upper_koszul(&ideal(2, &[&[1, 1]]), &m(&[1, 1])).unwrap();
        assert_eq!(k.faces(), &[0]);
        // three isolated vertices: removing two variables leaves one
        let k = upper_koszul(&c3(), &m(&[1, 1, 1])).unwrap();
        assert_eq!(k.face_lists(), vec![vec![], vec![1], vec![2], vec![3]]);
        assert_eq!(k.reduced_homology_ranks(), vec![0, 2]);
        assert!(upper_koszul(&c3(), &m(&[1, 0, 0])).is_err());
    }

    #[test]
    fn homology_conventions() {
        assert_eq!(SimplicialComplex::new(vec![0]).reduced_homology_ranks(), vec![1]);
        assert!(SimplicialComplex::new(vec![]).reduced_homology_ranks().is_empty());
        // hollow triangle
        let circle = SimplicialComplex::new(vec![0, 1, 2, 4, 3, 5, 6]);
        assert_eq!(circle.reduced_homology_ranks(), vec![0, 0, 1]);
        // filled triangle is contractible
        let disk = SimplicialComplex::new(vec![0, 1, 2, 4, 3, 5, 6, 7]);
        assert_eq!(disk.reduced_homology_ranks(), vec![0, 0, 0, 0]);
    }

    #[test]
    fn betti_examples() {
        assert_eq!(betti_numbers(&ideal(2, &[&[1, 1]])).unwrap().totals(), vec![1]);
        let t = betti_numbers(&c3()).unwrap();
        assert_eq!(t.totals(), vec![3, 2]);
        assert_eq!(t.get(1, &[1, 1, 1]), 2);
        let squares = ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]);
        assert_eq!(projective_dimension(&squares).unwrap(), 2);
    }

    #[test]
    fn depth_examples() {
        assert_eq!(depth_quotient(&MonomialIdeal::edge_ideal(&Graph::path(2))).unwrap(), 1);
        assert_eq!(depth_quotient(&c3()).unwrap(), 1);
        assert_eq!(depth_quotient(&closure_power(&c3(), 2).unwrap()).unwrap(), 0);
        assert_eq!(depth_quotient(&MonomialIdeal::zero(3)).unwrap(), 3);
        assert!(depth_quotient(&MonomialIdeal::unit(3)).is_err());
    }

    #[test]
    fn top_down_search_matches_full_table() {
        for g in [Graph::cycle(4), Graph::cycle(5), Graph::complete(4), Graph::path(5)] {
            let i = MonomialIdeal::edge_ideal(&g);
            for n in 1..=3 {
                let closed = closure_power(&i, n).unwrap();
                let full = betti_numbers(&closed).unwrap().max_index().unwrap() + 1;
                assert_eq!(projective_dimension(&closed).unwrap(), full, "{g:?} n={n}");
            }
        }
    }

    #[test]
    fn integer_rank_fallback() {
        let big = i64::MAX / 2;
        assert_eq!(rank(&[vec![big, 3], vec![3, big]]), 2);
        assert_eq!(rank(&[vec![2, 4], vec![1, 2]]), 1);
        assert_eq!(rank(&[vec![0, 0], vec![0, 0]]), 0);
    }

    #[test]
    fn depth_zero_iff_socle() {
        for g in [Graph::cycle(3), Graph::cycle(5), Graph::path(4), Graph::complete(4)] {
            let i = MonomialIdeal::edge_ideal(&g);
            for n in 1..=3 {
                let closed = closure_power(&i, n).unwrap();
                let pd = projective_dimension(&closed).unwrap();
                assert_eq!(pd == closed.ambient(), maximal_in_ass(&closed), "{g:?} n={n}");
            }
        }
    }
}
