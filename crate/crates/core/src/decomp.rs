//! Irreducible decompositions and associated primes of monomial ideals.
//!
//! The primary route reads the components off the corners of the staircase
//! in a finite box; two independent routes are kept alongside it: a socle
//! test for the maximal ideal, and a recursion over localizations that
//! rebuilds `Ass` one variable at a time.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::monomial::{Monomial, MonomialIdeal, PrimeSupport};

/// An irreducible monomial ideal `(x_i^{a_i} : i in dom)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IrreducibleComponent {
    /// `(variable, exponent)` pairs, 1-based variables in increasing order.
    pub bounds: Vec<(usize, u32)>,
}

impl IrreducibleComponent {
    pub fn support(&self) -> PrimeSupport {
        PrimeSupport::new(self.bounds.iter().map(|&(i, _)| i).collect())
    }

    pub fn ideal(&self, ambient: usize) -> MonomialIdeal {
        let gens = self
            .bounds
            .iter()
            .map(|&(i, a)| {
                let mut e = vec![0; ambient];
                e[i - 1] = a;
                Monomial::new(e)
            })
            .collect();
        MonomialIdeal::new(ambient, gens).expect("in range")
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &IrreducibleComponent) -> bool {
        other.bounds.iter().all(|&(i, b)| self.bounds.iter().any(|&(j, a)| i == j && a <= b))
    }
}

impl fmt::Debug for IrreducibleComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .bounds
            .iter()
            .map(|&(i, a)| if a == 1 { format!("x{i}") } else { format!("x{i}^{a}") })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A deduplicated, sorted set of monomial primes.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AssSet(Vec<PrimeSupport>);

impl AssSet {
    pub fn new(mut primes: Vec<PrimeSupport>) -> Self {
        primes.sort();
        primes.dedup();
        AssSet(primes)
    }

    pub fn primes(&self) -> &[PrimeSupport] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: &PrimeSupport) -> bool {
        self.0.contains(p)
    }

    pub fn is_subset(&self, other: &AssSet) -> bool {
        self.0.iter().all(|p| other.contains(p))
    }
}

impl fmt::Debug for AssSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.0).finish()
    }
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

/// Irredundant irreducible decomposition.
///
/// Adding `x_i^(rho_i + 1)` for every variable makes the ideal artinian
/// without changing it inside the box `0 <= a <= rho`. Each maximal
/// standard monomial `x^b` of that ideal (a monomial outside `I` that every
/// variable pushes into `I` or out of the box) yields the component
/// `(x_i^(b_i + 1) : b_i < rho_i)`; the bounds at `rho_i + 1` only come from
/// the added powers and are dropped.
pub fn irreducible_decomposition(ideal: &MonomialIdeal) -> Result<Vec<IrreducibleComponent>> {
    check_proper(ideal)?;
    let rho = ideal.max_exponents();
    let grid = Grid::new(rho.clone());
    let member = grid.membership(ideal);
    let mut comps = Vec::new();
    let mut point = vec![0u32; ideal.ambient()];
    for idx in 0..grid.size() {
        let corner = !member[idx] && (0..rho.len()).all(|i| point[i] == rho[i] || member[idx + grid.stride(i)]);
        if corner {
            let bounds = (0..rho.len()).filter(|&i| point[i] < rho[i]).map(|i| (i + 1, point[i] + 1)).collect();
            comps.push(IrreducibleComponent { bounds });
        }
        grid.advance(&mut point);
    }
    let comps = prune(comps);
    if cfg!(debug_assertions) {
        let mut point = vec![0u32; ideal.ambient()];
        for &inside in &member {
            let in_all = comps.iter().all(|c| c.bounds.iter().any(|&(i, b)| point[i - 1] >= b));
            assert_eq!(inside, in_all, "decomposition does not intersect back to the ideal at {point:?}");
            grid.advance(&mut point);
        }
    }
    Ok(comps)
}

fn prune(mut comps: Vec<IrreducibleComponent>) -> Vec<IrreducibleComponent> {
    comps.sort();
    comps.dedup();
    let keep: Vec<bool> = comps
        .iter()
        .enumerate()
        .map(|(a, ca)| !comps.iter().enumerate().any(|(b, cb)| a != b && ca.contains(cb)))
        .collect();
    comps.into_iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| c).collect()
}

/// `Ass(R/I)`: the supports of the irredundant irreducible components.
pub fn associated_primes(ideal: &MonomialIdeal) -> Result<AssSet> {
    Ok(AssSet::new(irreducible_decomposition(ideal)?.iter().map(IrreducibleComponent::support).collect()))
}

/// Whether the maximal ideal `(x_1..x_r)` is associated to `R/I`, i.e.
/// whether `R/I` has a nonzero socle: a monomial `f ∉ I` with `x_i f ∈ I`
/// for every `i`. Such an `f` satisfies `f_i < rho_i` (a generator dividing
/// `x_i f` but not `f` must have `i`-th exponent `f_i + 1`), so the search
/// runs over a finite box.
pub fn maximal_in_ass(ideal: &MonomialIdeal) -> bool {
    if !ideal.is_proper() {
        return false;
    }
    socle_on(ideal, (1..=ideal.ambient()).collect::<Vec<_>>().as_slice()).is_some()
}

/// A socle monomial of `R/I` with respect to the variables in `vars`,
/// assuming the generators of `I` only involve `vars`.
fn socle_on(ideal: &MonomialIdeal, vars: &[usize]) -> Option<Monomial> {
    let rho = ideal.max_exponents();
    if vars.iter().any(|&i| rho[i - 1] == 0) {
        return None;
    }
    let grid = Grid::new(rho);
    let table = grid.membership(ideal);
    let mut point = vec![0u32; ideal.ambient()];
    for idx in 0..grid.size() {
        let candidate = !table[idx]
            && vars.iter().all(|&i| point[i - 1] < grid.bounds()[i - 1] && table[idx + grid.stride(i - 1)]);
        if candidate {
            return Some(Monomial::new(point));
        }
        grid.advance(&mut point);
    }
    None
}

/// `Ass(R/I)` rebuilt from localizations: the primes avoiding `x_i` are
/// those of `I` with `x_i` inverted, and the maximal ideal is decided by the
/// socle test. Recursing over which variables are inverted reaches every
/// monomial prime once.
pub fn ass_via_localization(ideal: &MonomialIdeal) -> Result<AssSet> {
    check_proper(ideal)?;
    let r = ideal.ambient();
    assert!(r <= 24, "localization recursion is exponential in the number of variables");
    let mut primes = Vec::new();
    let mut visited = vec![false; 1 << r];
    localize_rec(ideal, (1u32 << r) - 1, &mut visited, &mut primes);
    Ok(AssSet::new(primes))
}

fn localize_rec(ideal: &MonomialIdeal, active: u32, visited: &mut [bool], out: &mut Vec<PrimeSupport>) {
    if visited[active as usize] || !ideal.is_proper() {
        return;
    }
    visited[active as usize] = true;
    let vars: Vec<usize> = (0..ideal.ambient()).filter(|i| active >> i & 1 == 1).map(|i| i + 1).collect();
    if socle_on(ideal, &vars).is_some() {
        out.push(PrimeSupport::new(vars.clone()));
    }
    for &i in &vars {
        localize_rec(&ideal.localize(&[i]), active & !(1 << (i - 1)), visited, out);
    }
}

/// A monomial `f` of the given degree with `(I : f) = (x_i : i in p)`.
/// Candidates are all exponent vectors of exactly that degree, visited in
/// the same order as generators are printed.
pub fn witness_search(ideal: &MonomialIdeal, p: &PrimeSupport, degree: u32) -> Option<Monomial> {
    let r = ideal.ambient();
    let target = p.ideal(r);
    let mut found = None;
    let mut current = vec![0u32; r];
    compositions(&mut current, 0, degree, &mut |e| {
        let f = Monomial::new(e.to_vec());
        if !ideal.contains(&f) && ideal.colon(&f).expect("same ambient") == target {
            found = Some(f);
            true
        } else {
            false
        }
    });
    found
}

/// Visits exponent vectors with the given coordinate sum, lexicographically
/// descending; stops when `visit` returns true.
fn compositions(current: &mut [u32], pos: usize, left: u32, visit: &mut impl FnMut(&[u32]) -> bool) -> bool {
    if pos + 1 == current.len() {
        current[pos] = left;
        return visit(current);
    }
    if current.is_empty() {
        return left == 0 && visit(current);
    }
    for a in (0..=left).rev() {
        current[pos] = a;
        if compositions(current, pos + 1, left - a, visit) {
            return true;
        }
    }
    current[pos] = 0;
    false
}
