//! Stability indices of `Ass(R/closure(I(G)^n))` and `depth R/closure(I(G)^n)`.
//!
//! Both sequences stabilize no later than the graph invariants `phi0` and
//! `phi1`, so each is computed exactly up to that power and the index is
//! read off the finite prefix. Associated primes of closure powers grow
//! with `n`; a computed sequence that shrinks is reported as a violation
//! instead of being trusted.

use serde::{Deserialize, Serialize};

use crate::closure::closure_power;
use crate::decomp::{associated_primes, AssSet};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::homology::depth_quotient;
use crate::io::encode_graph6;
use crate::monomial::{MonomialIdeal, PrimeSupport};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StabilityOptions {
    /// Recompute closures of bipartite graphs instead of using `I^n`.
    pub paranoid: bool,
    /// Powers computed past each bound to confirm the sequence has settled.
    pub extra_powers: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants {
    pub vertices: usize,
    pub edges: usize,
    pub leaf_edges: usize,
    pub odd_girth: Option<usize>,
    pub n0: usize,
    pub n1: Option<usize>,
    pub phi0: usize,
    pub phi1: usize,
    pub bipartite: bool,
    pub pseudoforest: bool,
    pub has_c4: bool,
}

impl Invariants {
    pub fn of(g: &Graph) -> Self {
        Invariants {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            leaf_edges: g.leaf_edge_count(),
            odd_girth: g.odd_girth(),
            n0: g.n0(),
            n1: g.n1().ok(),
            phi0: g.phi0(),
            phi1: g.phi1(),
            bipartite: g.is_bipartite(),
            pseudoforest: g.is_pseudoforest(),
            has_c4: g.has_cycle_of_length(4),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    /// graph6 string of the graph.
    pub id: String,
    pub graph: Graph,
    pub invariants: Invariants,
    /// `Ass(R/closure(I^n))` for `n = 1..=phi0`.
    pub ass_sequence: Vec<AssSet>,
    /// `depth R/closure(I^n)` for `n = 1..=phi1`.
    pub depth_sequence: Vec<usize>,
    pub astab_bar: usize,
    pub dstab_bar: usize,
    /// Largest power at which each sequence was confirmed to be constant;
    /// equals the bounds unless extra powers were requested.
    pub ass_checked_to: usize,
    pub depth_checked_to: usize,
}

impl StabilityReport {
    pub const CSV_HEADER: &'static str =
        "id,vertices,edges,pseudoforest,has_c4,n0,n1,phi0,phi1,astab_bar,dstab_bar,depth_sequence";

    pub fn csv_row(&self) -> String {
        let inv = &self.invariants;
        let depths: Vec<String> = self.depth_sequence.iter().map(usize::to_string).collect();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.id,
            inv.vertices,
            inv.edges,
            inv.pseudoforest,
            inv.has_c4,
            inv.n0,
            inv.n1.map_or(String::new(), |v| v.to_string()),
            inv.phi0,
            inv.phi1,
            self.astab_bar,
            self.dstab_bar,
            depths.join(" "),
        )
    }
}

/// `closure(I(G)^n)` for `n = 1..=upto`.
pub fn closure_powers(g: &Graph, upto: usize, opts: StabilityOptions) -> Result<Vec<MonomialIdeal>> {
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let ideal = MonomialIdeal::edge_ideal(g);
    let shortcut = g.is_bipartite() && !opts.paranoid;
    (1..=upto)
        .map(|n| {
            let closed = if shortcut { ideal.power(n) } else { closure_power(&ideal, n)? };
            check_containment_chain(g, &ideal, &closed, n)?;
            Ok(closed)
        })
        .collect()
}

/// `I^n ⊆ closure(I^n) ⊆ I^(n)`. Membership in the symbolic power of an
/// edge ideal means every minimal vertex cover carries weight at least `n`.
fn check_containment_chain(g: &Graph, ideal: &MonomialIdeal, closed: &MonomialIdeal, n: usize) -> Result<()> {
    if !cfg!(debug_assertions) {
        return Ok(());
    }
    if !ideal.power(n).is_subset(closed) {
        return Err(violation(g, n, "I^n is not contained in its closure"));
    }
    let covers = ideal.minimal_primes()?;
    let outside = closed.generators().iter().find(|a| !covers.iter().all(|c| cover_weight(c, a.exponents()) >= n as u64));
    if let Some(a) = outside {
        return Err(violation(g, n, &format!("closure generator {a} is not in the symbolic power")));
    }
    Ok(())
}

pub fn cover_weight(cover: &PrimeSupport, a: &[u32]) -> u64 {
    cover.vars().iter().map(|&i| a[i - 1] as u64).sum()
}

fn violation(g: &Graph, n: usize, what: &str) -> Error {
    Error::Violation(format!("graph {} ({g:?}), n = {n}: {what}", encode_graph6(g)))
}

/// Ass of each ideal, checked to be increasing along the sequence.
pub fn monotone_ass(g: &Graph, closures: &[MonomialIdeal]) -> Result<Vec<AssSet>> {
    let seq = closures.iter().map(associated_primes).collect::<Result<Vec<_>>>()?;
    for (k, pair) in seq.windows(2).enumerate() {
        if !pair[0].is_subset(&pair[1]) {
            return Err(violation(g, k + 2, &format!("Ass shrank from {:?} to {:?}", pair[0], pair[1])));
        }
    }
    Ok(seq)
}

/// Least `n0` (1-based) such that `seq[n-1] == seq.last()` for all `n >= n0`.
pub fn stable_index<T: PartialEq>(seq: &[T]) -> usize {
    let Some(last) = seq.last() else {
        return 1;
    };
    seq.iter().rposition(|v| v != last).map_or(1, |i| i + 2)
}

pub fn ass_sequence(g: &Graph) -> Result<Vec<AssSet>> {
    let closures = closure_powers(g, g.phi0(), StabilityOptions::default())?;
    monotone_ass(g, &closures)
}

pub fn depth_sequence(g: &Graph) -> Result<Vec<usize>> {
    let closures = closure_powers(g, g.phi1(), StabilityOptions::default())?;
    closures.iter().map(depth_quotient).collect()
}

pub fn astab_bar(g: &Graph) -> Result<usize> {
    Ok(stable_index(&ass_sequence(g)?))
}

pub fn dstab_bar(g: &Graph) -> Result<usize> {
    Ok(stable_index(&depth_sequence(g)?))
}

pub fn report(g: &Graph) -> Result<StabilityReport> {
    report_with(g, StabilityOptions::default())
}

/// Full report. With `extra_powers > 0` the sequences are also computed past
/// `phi0` and `phi1`; any change there contradicts the bounds and is
/// returned as a violation.
pub fn report_with(g: &Graph, opts: StabilityOptions) -> Result<StabilityReport> {
    let upto = g.phi0().max(g.phi1()) + opts.extra_powers;
    let closures = closure_powers(g, upto, opts)?;
    report_from_closures(g, &closures, opts.extra_powers)
}

/// Report from precomputed `closure(I(G)^n)`, `n = 1..`, covering at least
/// `max(phi0, phi1) + extra_powers` powers.
pub fn report_from_closures(g: &Graph, closures: &[MonomialIdeal], extra_powers: usize) -> Result<StabilityReport> {
    let invariants = Invariants::of(g);
    let ass_to = invariants.phi0 + extra_powers;
    let depth_to = invariants.phi1 + extra_powers;
    assert!(closures.len() >= ass_to.max(depth_to), "not enough closure powers for the report");

    let mut ass = monotone_ass(g, &closures[..ass_to])?;
    if let Some(n) = (invariants.phi0..ass_to).find(|&k| ass[k] != ass[invariants.phi0 - 1]) {
        return Err(violation(g, n + 1, &format!("Ass changes after phi0 = {}", invariants.phi0)));
    }
    ass.truncate(invariants.phi0);

    let mut depths = closures[..depth_to].iter().map(depth_quotient).collect::<Result<Vec<_>>>()?;
    if let Some(n) = (invariants.phi1..depth_to).find(|&k| depths[k] != depths[invariants.phi1 - 1]) {
        return Err(violation(g, n + 1, &format!("depth changes after phi1 = {}", invariants.phi1)));
    }
    depths.truncate(invariants.phi1);

    Ok(StabilityReport {
        id: encode_graph6(g),
        graph: g.clone(),
        astab_bar: stable_index(&ass),
        dstab_bar: stable_index(&depths),
        ass_sequence: ass,
        depth_sequence: depths,
        ass_checked_to: ass_to,
        depth_checked_to: depth_to,
        invariants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn supports(sets: &[&[usize]]) -> AssSet {
        AssSet::new(sets.iter().map(|s| PrimeSupport::new(s.to_vec())).collect())
    }

    #[test]
    fn stable_index_examples() {
        assert_eq!(stable_index(&[1, 0]), 2);
        assert_eq!(stable_index(&[3, 3, 3]), 1);
        assert_eq!(stable_index(&[1, 2, 1]), 3);
        assert_eq!(stable_index(&[2, 1, 1]), 2);
        assert_eq!(stable_index::<u8>(&[]), 1);
    }

    #[test]
    fn triangle() {
        let g = Graph::cycle(3);
        let covers = supports(&[&[1, 2], &[1, 3], &[2, 3]]);
        let with_top = supports(&[&[1, 2], &[1, 3], &[2, 3], &[1, 2, 3]]);
        assert_eq!(ass_sequence(&g).unwrap(), vec![covers, with_top]);
        assert_eq!(depth_sequence(&g).unwrap(), vec![1, 0]);
        let rep = report(&g).unwrap();
        assert_eq!((rep.astab_bar, rep.dstab_bar), (2, 2));
        assert_eq!((rep.invariants.n0, rep.invariants.n1), (2, Some(2)));
    }

    #[test]
    fn edge_and_path() {
        let k2 = Graph::path(2);
        assert_eq!(ass_sequence(&k2).unwrap(), vec![supports(&[&[1], &[2]])]);
        assert_eq!(depth_sequence(&k2).unwrap(), vec![1]);
        assert_eq!(depth_sequence(&Graph::path(3)).unwrap(), vec![1]);
        let rep = report(&k2).unwrap();
        assert_eq!((rep.astab_bar, rep.dstab_bar, rep.invariants.phi0, rep.invariants.phi1), (1, 1, 1, 1));
        assert!(matches!(ass_sequence(&Graph::empty(3).unwrap()), Err(Error::NoEdges)));
    }

    #[test]
    fn sharp_examples() {
        let pendant = Graph::new(4, &[(1, 2), (2, 3), (1, 3), (3, 4)]).unwrap();
        let rep = report(&pendant).unwrap();
        assert_eq!((rep.invariants.phi0, rep.astab_bar), (2, 2));
        let c5 = report(&Graph::cycle(5)).unwrap();
        assert_eq!((c5.invariants.phi1, c5.dstab_bar), (3, 3));
    }

    #[test]
    fn paranoid_bipartite_matches_shortcut() {
        let g = Graph::cycle(4);
        let fast = closure_powers(&g, 3, StabilityOptions::default()).unwrap();
        let slow = closure_powers(&g, 3, StabilityOptions { paranoid: true, extra_powers: 0 }).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn extra_powers_confirm_bounds() {
        let opts = StabilityOptions { paranoid: false, extra_powers: 1 };
        let rep = report_with(&Graph::cycle(3), opts).unwrap();
        assert_eq!(rep.ass_sequence.len(), 2);
        assert_eq!(rep.ass_checked_to, 3);
    }

    #[test]
    fn report_json_round_trip() {
        let rep = report(&Graph::cycle(3)).unwrap();
        let text = serde_json::to_string(&rep).unwrap();
        assert_eq!(serde_json::from_str::<StabilityReport>(&text).unwrap(), rep);
        assert_eq!(text, serde_json::to_string(&report(&Graph::cycle(3)).unwrap()).unwrap());
    }
}
