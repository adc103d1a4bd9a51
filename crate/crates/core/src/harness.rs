//! Theorem-by-theorem verification over graph corpora.
//!
//! Every check computes both sides of the claimed identity along separate
//! code paths: closures of sum ideals against sums of componentwise
//! closures, associated primes of the whole against products of the parts,
//! observed stability indices against the invariants, and so on.

use std::collections::{BTreeMap, HashSet};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::closure::closure_power;
use crate::decomp::{ass_via_localization, associated_primes, maximal_in_ass, AssSet};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::homology::depth_quotient;
use crate::io::{encode_graph6, read_corpus};
use crate::monomial::{Monomial, MonomialIdeal};
use crate::stability::{
    closure_powers, cover_weight, report_from_closures, stable_index, StabilityOptions, StabilityReport,
};

/// Exhaustive corpora above this many vertices need `allow_large`.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 6;
pub const LARGE_EXHAUSTIVE_CAP: usize = 7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusMode {
    Exhaustive { max_vertices: usize },
    RandomPseudoforest { count: usize, max_vertices: usize, seed: u64 },
    File { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub mode: CorpusMode,
    pub connected_only: bool,
    pub pseudoforest_only: bool,
    pub no_c4: bool,
    /// Permit exhaustive enumeration on 7 vertices.
    pub allow_large: bool,
}

impl CorpusSpec {
    /// All connected graphs on `2..=max_vertices` vertices up to isomorphism.
    pub fn exhaustive(max_vertices: usize) -> Self {
        CorpusSpec::with_mode(CorpusMode::Exhaustive { max_vertices }, true)
    }

    pub fn random_pseudoforest(count: usize, max_vertices: usize, seed: u64) -> Self {
        CorpusSpec::with_mode(CorpusMode::RandomPseudoforest { count, max_vertices, seed }, false)
    }

    pub fn file(path: impl Into<PathBuf>) -> Self {
        CorpusSpec::with_mode(CorpusMode::File { path: path.into() }, false)
    }

    fn with_mode(mode: CorpusMode, connected_only: bool) -> Self {
        CorpusSpec { mode, connected_only, pseudoforest_only: false, no_c4: false, allow_large: false }
    }

    fn keep(&self, g: &Graph) -> bool {
        (!self.connected_only || g.is_connected())
            && (!self.pseudoforest_only || g.is_pseudoforest())
            && (!self.no_c4 || !g.has_cycle_of_length(4))
    }
}

pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<Graph>> {
    let graphs = match &spec.mode {
        CorpusMode::Exhaustive { max_vertices } => {
            let cap = if spec.allow_large { LARGE_EXHAUSTIVE_CAP } else { DEFAULT_EXHAUSTIVE_CAP };
            if *max_vertices > cap {
                return Err(Error::InvalidSpec(format!(
                    "exhaustive corpora are capped at {cap} vertices{}",
                    if spec.allow_large { "" } else { " without the large-corpus flag" }
                )));
            }
            enumerate_graphs(*max_vertices, spec.connected_only)
        }
        CorpusMode::RandomPseudoforest { count, max_vertices, seed } => {
            if *max_vertices < 2 {
                return Err(Error::InvalidSpec("random pseudoforests need at least 2 vertices".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..*count).map(|_| random_pseudoforest(&mut rng, *max_vertices)).collect()
        }
        CorpusMode::File { path } => read_corpus(path)?,
    };
    Ok(graphs.into_iter().filter(|g| spec.keep(g)).collect())
}

/// Graphs on `2..=max_vertices` vertices without isolated vertices, up to
/// isomorphism, each in canonical labelling, ordered by vertex count,
/// edge count and canonical string. Built by adding one vertex at a time:
/// every connected graph has a vertex whose removal keeps it connected, and
/// removing any vertex of a graph leaves a graph on one vertex fewer.
pub fn enumerate_graphs(max_vertices: usize, connected_only: bool) -> Vec<Graph> {
    let mut layer: Vec<Graph> = vec![Graph::empty(1).unwrap()];
    let mut out = Vec::new();
    for k in 2..=max_vertices {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &layer {
            for mask in 0u64..1 << (k - 1) {
                if connected_only && mask == 0 {
                    continue;
                }
                let mut h = Graph::empty(k).unwrap();
                for (u, v) in g.edges() {
                    h.add_edge(u, v).unwrap();
                }
                for u in 1..k {
                    if mask >> (u - 1) & 1 == 1 {
                        h.add_edge(u, k).unwrap();
                    }
                }
                let canon = canonical_form(&h);
                if seen.insert(encode_graph6(&canon)) {
                    next.push(canon);
                }
            }
        }
        let mut emitted: Vec<Graph> =
            next.iter().filter(|g| g.edge_count() > 0 && (1..=k).all(|v| g.degree(v) > 0)).cloned().collect();
        emitted.sort_by_key(sort_key);
        out.extend(emitted);
        layer = next;
    }
    out
}

/// Deterministic ordering key: vertex count, edge count, canonical graph6
/// (or the graph's own graph6 when its symmetry makes canonization too
/// expensive), then the graph's own graph6.
pub fn sort_key(g: &Graph) -> (usize, usize, String, String) {
    let own = encode_graph6(g);
    let canon = canonical_form_within(g, CANONICAL_BUDGET).map_or_else(|| own.clone(), |c| encode_graph6(&c));
    (g.vertex_count(), g.edge_count(), canon, own)
}

const CANONICAL_BUDGET: u64 = 1 << 20;

/// Relabelling of `g` that depends only on its isomorphism class.
///
/// Vertices are first split into classes by iterated degree refinement,
/// which any isomorphism preserves; then every ordering compatible with the
/// classes is tried and the one with the largest adjacency string wins. The
/// search is exact and exponential only within classes.
pub fn canonical_form(g: &Graph) -> Graph {
    canonical_form_within(g, u64::MAX).expect("unbounded search")
}

/// [`canonical_form`], or `None` if more than `budget` orderings would be tried.
pub fn canonical_form_within(g: &Graph, budget: u64) -> Option<Graph> {
    let r = g.vertex_count();
    let colors = refine_colors(g);
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 1..=r {
        cells.entry(colors[v - 1]).or_default().push(v);
    }
    let cells: Vec<Vec<usize>> = cells.into_values().collect();
    let orderings = cells.iter().flat_map(|c| 1..=c.len() as u64).try_fold(1u64, |acc, k| acc.checked_mul(k));
    if orderings.is_none_or(|count| count > budget) {
        return None;
    }
    let mut order = Vec::with_capacity(r);
    let mut best: Option<(Vec<bool>, Vec<usize>)> = None;
    search_orders(g, &cells, 0, &mut order, &mut best);
    let (_, order) = best.expect("at least one ordering");
    // order[p] is the vertex placed at position p + 1
    let mut position = vec![0; r + 1];
    for (p, &v) in order.iter().enumerate() {
        position[v] = p + 1;
    }
    let edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .map(|(u, v)| {
            let (a, b) = (position[u], position[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    Some(Graph::new(r, &edges).expect("relabelled edges are valid"))
}

fn refine_colors(g: &Graph) -> Vec<usize> {
    let r = g.vertex_count();
    let mut colors: Vec<usize> = (1..=r).map(|v| g.degree(v)).collect();
    loop {
        let signatures: Vec<(usize, Vec<usize>)> = (1..=r)
            .map(|v| {
                let mut around: Vec<usize> = g.neighbors(v).iter().map(|&u| colors[u - 1]).collect();
                around.sort_unstable();
                (colors[v - 1], around)
            })
            .collect();
        let mut distinct = signatures.clone();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = signatures.iter().map(|s| distinct.binary_search(s).unwrap()).collect();
        let before = colors.iter().collect::<HashSet<_>>().len();
        if distinct.len() == before {
            return next;
        }
        colors = next;
    }
}

fn adjacency_string(g: &Graph, order: &[usize]) -> Vec<bool> {
    let mut bits = Vec::with_capacity(order.len() * order.len() / 2);
    for j in 1..order.len() {
        for i in 0..j {
            bits.push(g.has_edge(order[i], order[j]));
        }
    }
    bits
}

fn search_orders(
    g: &Graph,
    cells: &[Vec<usize>],
    cell: usize,
    order: &mut Vec<usize>,
    best: &mut Option<(Vec<bool>, Vec<usize>)>,
) {
    if cell == cells.len() {
        let bits = adjacency_string(g, order);
        if best.as_ref().is_none_or(|(b, _)| bits > *b) {
            *best = Some((bits, order.clone()));
        }
        return;
    }
    let mut members = cells[cell].clone();
    permute(&mut members, 0, &mut |perm| {
        let len = order.len();
        order.extend_from_slice(perm);
        search_orders(g, cells, cell + 1, order, best);
        order.truncate(len);
    });
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// A pseudoforest on `2..=max_vertices` vertices without isolated vertices.
/// Each component is a uniformly random labelled tree (from a Prüfer code)
/// on at least two vertices; with probability one half one extra edge
/// closes a cycle, odd or even with equal probability when both exist.
pub fn random_pseudoforest(rng: &mut impl Rng, max_vertices: usize) -> Graph {
    let r = rng.gen_range(2..=max_vertices);
    let mut sizes = Vec::new();
    let mut left = r;
    while left > 0 {
        let mut s = if left <= 3 { left } else { rng.gen_range(2..=left) };
        if left - s == 1 {
            s += 1;
        }
        sizes.push(s);
        left -= s;
    }
    let mut labels: Vec<usize> = (1..=r).collect();
    labels.shuffle(rng);
    let mut g = Graph::empty(r).unwrap();
    let mut start = 0;
    for s in sizes {
        let verts = &labels[start..start + s];
        start += s;
        let tree = random_tree(rng, s);
        for &(u, v) in &tree {
            g.add_edge(verts[u], verts[v]).unwrap();
        }
        if s >= 3 && rng.gen_bool(0.5) {
            let dist = tree_distances(s, &tree);
            let want_odd = rng.gen_bool(0.5);
            let pairs: Vec<(usize, usize)> =
                (0..s).flat_map(|u| (u + 1..s).map(move |v| (u, v))).filter(|&(u, v)| dist[u][v] >= 2).collect();
            // a chord at tree distance d closes a cycle of length d + 1
            let matching: Vec<(usize, usize)> =
                pairs.iter().copied().filter(|&(u, v)| (dist[u][v] % 2 == 0) == want_odd).collect();
            let pool = if matching.is_empty() { &pairs } else { &matching };
            if let Some(&(u, v)) = pool.choose(rng) {
                g.add_edge(verts[u], verts[v]).unwrap();
            }
        }
    }
    g
}

/// Edges of a uniform random labelled tree on `0..n` via a Prüfer code.
fn random_tree(rng: &mut impl Rng, n: usize) -> Vec<(usize, usize)> {
    if n == 2 {
        return vec![(0, 1)];
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, c));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

fn tree_distances(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    (0..n)
        .map(|s| {
            let mut dist = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            dist
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// Closure of a sum with a normally torsion-free summand.
    T0,
    /// Associated primes of such a sum.
    T1,
    /// Depth of such a sum.
    T2,
    /// Stability bounds, and their sharpness on pseudoforests.
    Bounds,
    /// The maximal ideal is associated exactly from `n1` on.
    MainAsOne,
    /// Colon by a leaf edge lowers the power by one.
    Leaf,
    /// Minimal vertex covers carry weight at least `n`.
    Cover,
    /// Depth index of a graph from its bipartite and nonbipartite parts.
    D1,
    /// Associated primes by decomposition against localization.
    Oracles,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::T0,
        Check::T1,
        Check::T2,
        Check::Bounds,
        Check::MainAsOne,
        Check::Leaf,
        Check::Cover,
        Check::D1,
        Check::Oracles,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::T0 => "t0",
            Check::T1 => "t1",
            Check::T2 => "t2",
            Check::Bounds => "bounds",
            Check::MainAsOne => "main_as_one",
            Check::Leaf => "leaf",
            Check::Cover => "cover",
            Check::D1 => "d1",
            Check::Oracles => "oracles",
        }
    }

    /// Comma-separated names; `all` selects every check.
    pub fn parse_list(text: &str) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for word in text.split(',').map(str::trim).filter(|w| !w.is_empty()) {
            if word == "all" {
                out.extend(Check::ALL);
                continue;
            }
            let check = Check::ALL
                .into_iter()
                .find(|c| c.name() == word)
                .ok_or_else(|| Error::InvalidSpec(format!("unknown check {word:?}")))?;
            out.push(check);
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Result of one check on one instance; `detail` carries both sides of a
/// failed comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub passed: bool,
    pub detail: Option<Value>,
}

impl CheckOutcome {
    fn pass() -> Self {
        CheckOutcome { passed: true, detail: None }
    }

    fn fail(detail: Value) -> Self {
        CheckOutcome { passed: false, detail: Some(detail) }
    }

    fn compare<T: PartialEq + Serialize>(left: &T, right: &T) -> Self {
        if left == right {
            CheckOutcome::pass()
        } else {
            CheckOutcome::fail(json!({ "left": left, "right": right }))
        }
    }
}

fn exponents(gens: &[Monomial]) -> Vec<Vec<u32>> {
    gens.iter().map(|g| g.exponents().to_vec()).collect()
}

fn ideal_difference(left: &MonomialIdeal, right: &MonomialIdeal) -> Value {
    let only = |a: &MonomialIdeal, b: &MonomialIdeal| {
        exponents(&a.generators().iter().filter(|g| !b.contains(g)).cloned().collect::<Vec<_>>())
    };
    json!({ "only_left": only(left, right), "only_right": only(right, left) })
}

/// `I` on the first block of variables and `J` on the second, for a pair
/// `(bipartite, other)` of graphs.
struct SumPair {
    whole: Graph,
    left: usize,
    right: usize,
    i: MonomialIdeal,
    j: MonomialIdeal,
}

impl SumPair {
    fn new(g_bip: &Graph, g_other: &Graph, require_bipartite: bool) -> Result<Self> {
        if require_bipartite && !g_bip.is_bipartite() {
            return Err(Error::NotBipartite);
        }
        if g_bip.edge_count() == 0 || g_other.edge_count() == 0 {
            return Err(Error::NoEdges);
        }
        Ok(SumPair {
            whole: g_bip.disjoint_union(g_other)?,
            left: g_bip.vertex_count(),
            right: g_other.vertex_count(),
            i: MonomialIdeal::edge_ideal(g_bip),
            j: MonomialIdeal::edge_ideal(g_other),
        })
    }

    fn total(&self) -> usize {
        self.left + self.right
    }

    fn lift_i(&self, ideal: &MonomialIdeal) -> MonomialIdeal {
        ideal.embed(self.total(), 0)
    }

    fn lift_j(&self, ideal: &MonomialIdeal) -> MonomialIdeal {
        ideal.embed(self.total(), self.left)
    }

    /// `sum_{k=0}^{n} a(k)·b(n-k)` with `a`, `b` indexed by power.
    fn expansion(&self, n: usize, a: &[MonomialIdeal], b: &[MonomialIdeal]) -> Result<MonomialIdeal> {
        let mut acc = MonomialIdeal::zero(self.total());
        for k in 0..=n {
            acc = acc.sum(&self.lift_i(&a[k]).product(&self.lift_j(&b[n - k]))?)?;
        }
        Ok(acc)
    }

    /// `[R, closure(J), ..., closure(J^n)]` in the ring of `J`.
    fn j_closures(&self, n: usize) -> Result<Vec<MonomialIdeal>> {
        let mut out = vec![MonomialIdeal::unit(self.right)];
        for k in 1..=n {
            out.push(closure_power(&self.j, k)?);
        }
        Ok(out)
    }

    fn whole_closure(&self, n: usize) -> Result<MonomialIdeal> {
        closure_power(&MonomialIdeal::edge_ideal(&self.whole), n)
    }
}

/// Data for a bipartite/other pair shared by the sum checks up to power `n`.
struct PairTables {
    pair: SumPair,
    i_powers: Vec<MonomialIdeal>,
    j_closures: Vec<MonomialIdeal>,
    ass_i: AssSet,
    depth_a: Vec<usize>,
    depth_b: Vec<usize>,
}

impl PairTables {
    fn new(g_bip: &Graph, g_non: &Graph, n: usize, checks: &[Check]) -> Result<Self> {
        let pair = SumPair::new(g_bip, g_non, true)?;
        let i_powers: Vec<MonomialIdeal> = (0..=n).map(|k| pair.i.power(k)).collect();
        let j_closures = pair.j_closures(n)?;
        let ass_i = if checks.contains(&Check::T1) { associated_primes(&pair.i)? } else { AssSet::new(Vec::new()) };
        let (depth_a, depth_b) = if checks.contains(&Check::T2) {
            (
                i_powers[1..].iter().map(depth_quotient).collect::<Result<Vec<_>>>()?,
                j_closures[1..].iter().map(depth_quotient).collect::<Result<Vec<_>>>()?,
            )
        } else {
            (Vec::new(), Vec::new())
        };
        Ok(PairTables { pair, i_powers, j_closures, ass_i, depth_a, depth_b })
    }

    fn t0(&self, n: usize, whole: &MonomialIdeal) -> Result<CheckOutcome> {
        let right = self.pair.expansion(n, &self.i_powers, &self.j_closures)?;
        Ok(if *whole == right { CheckOutcome::pass() } else { CheckOutcome::fail(ideal_difference(whole, &right)) })
    }

    fn t1(&self, n: usize, whole: &MonomialIdeal) -> Result<CheckOutcome> {
        let left = associated_primes(whole)?;
        let ass_j = associated_primes(&self.j_closures[n])?;
        let right = AssSet::new(
            self.ass_i
                .primes()
                .iter()
                .flat_map(|p| ass_j.primes().iter().map(move |q| p.union(&q.shifted(self.pair.left))))
                .collect(),
        );
        Ok(CheckOutcome::compare(&left, &right))
    }

    fn t2(&self, n: usize, whole: &MonomialIdeal) -> Result<CheckOutcome> {
        let left = depth_quotient(whole)?;
        let right = depth_sum_formula(&self.depth_a, &self.depth_b, n);
        Ok(if left == right {
            CheckOutcome::pass()
        } else {
            CheckOutcome::fail(json!({
                "left": left,
                "right": right,
                "depth_a": &self.depth_a[..n],
                "depth_b": &self.depth_b[..n],
            }))
        })
    }
}

fn single_check(g_bip: &Graph, g_non: &Graph, n: usize, check: Check) -> Result<CheckOutcome> {
    let tables = PairTables::new(g_bip, g_non, n, &[check])?;
    let whole = tables.pair.whole_closure(n)?;
    match check {
        Check::T0 => tables.t0(n, &whole),
        Check::T1 => tables.t1(n, &whole),
        _ => tables.t2(n, &whole),
    }
}

/// `closure((I + J)^n) = sum_i I^i · closure(J^(n-i))` for bipartite `g_bip`.
pub fn check_t0(g_bip: &Graph, g_non: &Graph, n: usize) -> Result<CheckOutcome> {
    single_check(g_bip, g_non, n, Check::T0)
}

/// Outcome of comparing `closure((I + J)^n)` with the expansion that takes
/// closures of both summands' powers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaiveProbe {
    pub equal: bool,
    /// Generators of the closure of the sum missing from the expansion.
    pub missing: Vec<Vec<u32>>,
    pub closure_generators: usize,
    pub expansion_generators: usize,
}

pub fn naive_expansion_probe(g1: &Graph, g2: &Graph, n: usize) -> Result<NaiveProbe> {
    let pair = SumPair::new(g1, g2, false)?;
    let left = pair.whole_closure(n)?;
    let mut i_closures = vec![MonomialIdeal::unit(pair.left)];
    for k in 1..=n {
        i_closures.push(closure_power(&pair.i, k)?);
    }
    let right = pair.expansion(n, &i_closures, &pair.j_closures(n)?)?;
    let missing = left.generators().iter().filter(|g| !right.contains(g)).cloned().collect::<Vec<_>>();
    Ok(NaiveProbe {
        equal: left == right,
        missing: exponents(&missing),
        closure_generators: left.len(),
        expansion_generators: right.len(),
    })
}

/// `Ass(R/closure((I+J)^n)) = { p ∪ q : p ∈ Ass(R/I), q ∈ Ass(R/closure(J^n)) }`.
pub fn check_t1(g_bip: &Graph, g_non: &Graph, n: usize) -> Result<CheckOutcome> {
    single_check(g_bip, g_non, n, Check::T1)
}

/// Depth of `R/closure((I+J)^n)` from `depth_a[k-1] = depth A/I^k` and
/// `depth_b[k-1] = depth B/closure(J^k)`, `k = 1..=n`: the minimum of
/// `depth A/I^(n-i) + depth B/closure(J^i) + 1` over `1 <= i <= n-1` and
/// `depth A/I^(n-j+1) + depth B/closure(J^j)` over `1 <= j <= n`.
pub fn depth_sum_formula(depth_a: &[usize], depth_b: &[usize], n: usize) -> usize {
    assert!(n >= 1 && depth_a.len() >= n && depth_b.len() >= n);
    let first = (1..n).map(|i| depth_a[n - i - 1] + depth_b[i - 1] + 1);
    let second = (1..=n).map(|j| depth_a[n - j] + depth_b[j - 1]);
    first.chain(second).min().expect("j ranges over at least one value")
}

pub fn check_t2(g_bip: &Graph, g_non: &Graph, n: usize) -> Result<CheckOutcome> {
    single_check(g_bip, g_non, n, Check::T2)
}

/// Bound and sharpness checks read off a stability report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsVerdict {
    pub t3: bool,
    pub t4: bool,
    /// `None` when the graph is not a pseudoforest.
    pub t6: Option<bool>,
    /// `None` unless the graph is a pseudoforest without a 4-cycle.
    pub t8: Option<bool>,
}

impl BoundsVerdict {
    pub fn passed(&self) -> bool {
        self.t3 && self.t4 && self.t6 != Some(false) && self.t8 != Some(false)
    }
}

pub fn bounds_verdict(report: &StabilityReport) -> BoundsVerdict {
    let inv = &report.invariants;
    BoundsVerdict {
        t3: report.astab_bar <= inv.phi0,
        t4: report.dstab_bar <= inv.phi1,
        t6: inv.pseudoforest.then_some(report.astab_bar == inv.phi0),
        t8: (inv.pseudoforest && !inv.has_c4).then_some(report.dstab_bar == inv.phi1),
    }
}

pub fn check_bounds_and_sharpness(g: &Graph) -> Result<BoundsVerdict> {
    let opts = StabilityOptions { paranoid: false, extra_powers: 1 };
    let closures = closure_powers(g, g.phi0().max(g.phi1()) + 1, opts)?;
    Ok(bounds_verdict(&report_from_closures(g, &closures, 1)?))
}

/// `m ∈ Ass(R/closure(I^n))` iff `n >= n1`, for `n = 1..=closures.len()`,
/// on graphs whose components are all nonbipartite.
pub fn check_main_as_one(g: &Graph, closures: &[MonomialIdeal]) -> Result<CheckOutcome> {
    let n1 = g.n1()?;
    let wrong: Vec<usize> =
        (1..=closures.len()).filter(|&n| maximal_in_ass(&closures[n - 1]) != (n >= n1)).collect();
    Ok(if wrong.is_empty() { CheckOutcome::pass() } else { CheckOutcome::fail(json!({ "n1": n1, "wrong_at": wrong })) })
}

/// `closure(I^n) : x_u x_v = closure(I^(n-1))` for every leaf `v` with
/// neighbour `u` and `2 <= n <= closures.len()`.
pub fn check_leaf(g: &Graph, closures: &[MonomialIdeal]) -> Result<CheckOutcome> {
    let r = g.vertex_count();
    for v in g.leaves() {
        let u = g.neighbors(v)[0];
        let edge = Monomial::squarefree(r, &[u, v]);
        for n in 2..=closures.len() {
            let colon = closures[n - 1].colon(&edge)?;
            if colon != closures[n - 2] {
                return Ok(CheckOutcome::fail(json!({
                    "leaf": v,
                    "neighbor": u,
                    "n": n,
                    "difference": ideal_difference(&colon, &closures[n - 2]),
                })));
            }
        }
    }
    Ok(CheckOutcome::pass())
}

/// Every minimal vertex cover has weight at least `n` on every generator of
/// `closure(I^n)`.
pub fn check_cover(g: &Graph, closures: &[MonomialIdeal]) -> Result<CheckOutcome> {
    let covers = MonomialIdeal::edge_ideal(g).minimal_primes()?;
    for (k, closed) in closures.iter().enumerate() {
        let n = k as u64 + 1;
        for a in closed.generators() {
            if let Some(c) = covers.iter().find(|c| cover_weight(c, a.exponents()) < n) {
                return Ok(CheckOutcome::fail(json!({ "n": n, "generator": a.exponents(), "cover": c })));
            }
        }
    }
    Ok(CheckOutcome::pass())
}

/// `dstab_bar(G) = dstab(I(G')) + dstab_bar(I(G'')) - 1` with `G'` the
/// bipartite and `G''` the nonbipartite components; `None` unless both
/// parts are present. Each index is read off its sequence up to `phi1` of
/// the graph it belongs to.
pub fn check_d1(g: &Graph, report: &StabilityReport) -> Result<Option<CheckOutcome>> {
    let (Some(bip), Some(non)) = g.split_bipartite() else {
        return Ok(None);
    };
    let ordinary = MonomialIdeal::edge_ideal(&bip);
    let depths_bip = (1..=bip.phi1()).map(|k| depth_quotient(&ordinary.power(k))).collect::<Result<Vec<_>>>()?;
    let closures_non = closure_powers(&non, non.phi1(), StabilityOptions::default())?;
    let depths_non = closures_non.iter().map(depth_quotient).collect::<Result<Vec<_>>>()?;
    let right = stable_index(&depths_bip) + stable_index(&depths_non) - 1;
    Ok(Some(if report.dstab_bar == right {
        CheckOutcome::pass()
    } else {
        CheckOutcome::fail(json!({
            "dstab_bar": report.dstab_bar,
            "expected": right,
            "bipartite_depths": depths_bip,
            "nonbipartite_depths": depths_non,
        }))
    }))
}

pub fn check_oracles(closures: &[MonomialIdeal]) -> Result<CheckOutcome> {
    for (k, closed) in closures.iter().enumerate() {
        let left = associated_primes(closed)?;
        let right = ass_via_localization(closed)?;
        if left != right {
            return Ok(CheckOutcome::fail(json!({ "n": k + 1, "decomposition": left, "localization": right })));
        }
    }
    Ok(CheckOutcome::pass())
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub checks: Vec<Check>,
    pub jobs: Option<usize>,
    /// Largest bipartite and nonbipartite corpus members paired up for the
    /// sum checks, and the largest power used there.
    pub pair_bipartite_max: usize,
    pub pair_other_max: usize,
    pub pair_max_power: usize,
    /// Powers computed past `phi0`/`phi1` to confirm stabilization.
    pub extra_powers: usize,
    /// One stderr line per finished instance.
    pub log: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            checks: Check::ALL.to_vec(),
            jobs: None,
            pair_bipartite_max: 4,
            pair_other_max: 5,
            pair_max_power: 3,
            extra_powers: 1,
            log: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTally {
    pub passed: usize,
    pub failed: usize,
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub check: Check,
    /// graph6 of the graph, or of both graphs joined by `+` for sum checks.
    pub instance: String,
    pub n: Option<usize>,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub id: String,
    pub vertices: usize,
    pub edges: usize,
    pub pseudoforest: bool,
    pub phi0: usize,
    pub phi1: usize,
    pub astab_bar: Option<usize>,
    pub dstab_bar: Option<usize>,
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub corpus: CorpusSpec,
    pub checks: BTreeMap<Check, CheckTally>,
    pub graphs: Vec<GraphSummary>,
    pub counterexamples: Vec<Counterexample>,
    /// Instances where closing both summands' powers separately loses
    /// generators of the closure of the sum.
    pub naive_expansion_gaps: Vec<Value>,
    pub millis: u64,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.values().all(|t| t.failed == 0)
    }

    pub fn summary(&self) -> String {
        let mut lines = vec![format!("graphs: {}", self.graphs.len())];
        for (check, t) in &self.checks {
            lines.push(format!("{:<12} passed {:>6}  failed {:>4}  {:>8} ms", check.name(), t.passed, t.failed, t.millis));
        }
        if !self.naive_expansion_gaps.is_empty() {
            lines.push(format!("naive expansion gaps: {}", self.naive_expansion_gaps.len()));
        }
        lines.push(format!("{}", if self.all_passed() { "all checks passed" } else { "THEOREM VIOLATION" }));
        lines.join("\n")
    }

    fn record(&mut self, check: Check, instance: &str, n: Option<usize>, outcome: CheckOutcome, elapsed: Duration) {
        let tally = self.checks.entry(check).or_default();
        tally.millis += elapsed.as_millis() as u64;
        if outcome.passed {
            tally.passed += 1;
        } else {
            tally.failed += 1;
            self.counterexamples.push(Counterexample {
                check,
                instance: instance.to_string(),
                n,
                detail: outcome.detail.unwrap_or(Value::Null),
            });
        }
    }
}

type Finding = (Check, Option<usize>, CheckOutcome, Duration);

struct GraphOutcome {
    summary: GraphSummary,
    findings: Vec<Finding>,
    gaps: Vec<Value>,
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, Duration)> {
    let start = Instant::now();
    let value = f()?;
    Ok((value, start.elapsed()))
}

fn evaluate_graph(g: &Graph, opts: &RunOptions) -> Result<GraphOutcome> {
    let start = Instant::now();
    let has = |c: Check| opts.checks.contains(&c);
    let mut findings: Vec<Finding> = Vec::new();
    let mut gaps = Vec::new();
    let id = encode_graph6(g);
    let mut summary = GraphSummary {
        id: id.clone(),
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        pseudoforest: g.is_pseudoforest(),
        phi0: g.phi0(),
        phi1: g.phi1(),
        astab_bar: None,
        dstab_bar: None,
        millis: 0,
    };
    let per_graph = [Check::Bounds, Check::MainAsOne, Check::Leaf, Check::Cover, Check::D1, Check::Oracles];
    if per_graph.iter().any(|&c| has(c)) {
        let upto = summary.phi0.max(summary.phi1) + opts.extra_powers;
        let so = StabilityOptions { paranoid: false, extra_powers: opts.extra_powers };
        let (closures, closure_time) = timed(|| closure_powers(g, upto, so))?;
        let (report, report_time) = timed(|| Ok(report_from_closures(g, &closures, opts.extra_powers)))?;
        let report = match report {
            Ok(rep) => Some(rep),
            Err(Error::Violation(msg)) => {
                findings.push((Check::Bounds, None, CheckOutcome::fail(json!(msg)), closure_time + report_time));
                None
            }
            Err(e) => return Err(e),
        };
        if let Some(rep) = &report {
            summary.astab_bar = Some(rep.astab_bar);
            summary.dstab_bar = Some(rep.dstab_bar);
            if has(Check::Bounds) {
                let verdict = bounds_verdict(rep);
                let outcome = if verdict.passed() {
                    CheckOutcome::pass()
                } else {
                    CheckOutcome::fail(json!({ "verdict": verdict, "report": rep }))
                };
                findings.push((Check::Bounds, None, outcome, closure_time + report_time));
            }
            if has(Check::D1) {
                let (outcome, t) = timed(|| check_d1(g, rep))?;
                if let Some(outcome) = outcome {
                    findings.push((Check::D1, None, outcome, t));
                }
            }
        }
        if has(Check::MainAsOne) && summary.pseudoforest && g.n1().is_ok() {
            let (outcome, t) = timed(|| check_main_as_one(g, &closures))?;
            findings.push((Check::MainAsOne, None, outcome, t));
        }
        if has(Check::Leaf) && !g.leaves().is_empty() {
            let (outcome, t) = timed(|| check_leaf(g, &closures))?;
            findings.push((Check::Leaf, None, outcome, t));
        }
        if has(Check::Cover) {
            let (outcome, t) = timed(|| check_cover(g, &closures))?;
            findings.push((Check::Cover, None, outcome, t));
        }
        if has(Check::Oracles) {
            let (outcome, t) = timed(|| check_oracles(&closures))?;
            findings.push((Check::Oracles, None, outcome, t));
        }
    }
    // sum checks on the graph's own split, and the naive expansion on two
    // nonbipartite parts
    let (bip, non) = g.split_bipartite();
    if let (Some(bip), Some(non)) = (&bip, &non) {
        findings.extend(pair_findings(bip, non, opts)?);
    }
    if let Some(non) = &non {
        let comps = non.components();
        if comps.len() >= 2 && has(Check::T0) {
            let rest: Vec<usize> = comps[1..].iter().flat_map(|c| c.vertices.iter().copied()).collect();
            let (first, rest) = (&comps[0].graph, non.induced(&rest));
            for n in 2..=opts.pair_max_power {
                let probe = naive_expansion_probe(first, &rest, n)?;
                if !probe.equal {
                    gaps.push(json!({ "graph": id, "n": n, "probe": probe }));
                }
            }
        }
    }
    summary.millis = start.elapsed().as_millis() as u64;
    Ok(GraphOutcome { summary, findings, gaps })
}

/// The closure of the sum and the summand tables are built once per pair
/// and power; their cost is charged to the first selected sum check.
fn pair_findings(bip: &Graph, other: &Graph, opts: &RunOptions) -> Result<Vec<Finding>> {
    let selected: Vec<Check> = [Check::T0, Check::T1, Check::T2].into_iter().filter(|c| opts.checks.contains(c)).collect();
    let mut out = Vec::new();
    if selected.is_empty() {
        return Ok(out);
    }
    let (tables, mut shared) = timed(|| PairTables::new(bip, other, opts.pair_max_power, &opts.checks))?;
    for n in 1..=opts.pair_max_power {
        let (whole, t) = timed(|| tables.pair.whole_closure(n))?;
        shared += t;
        for &check in &selected {
            let (outcome, t) = timed(|| match check {
                Check::T0 => tables.t0(n, &whole),
                Check::T1 => tables.t1(n, &whole),
                _ => tables.t2(n, &whole),
            })?;
            out.push((check, Some(n), outcome, t + std::mem::take(&mut shared)));
        }
    }
    Ok(out)
}

/// Runs the selected checks over the corpus. Graph-level checks run on each
/// member; the sum checks run on every pair (bipartite member, nonbipartite
/// member) within the pairing size limits, as well as on each member that
/// has both kinds of components. Errors are operational failures; theorem
/// failures are recorded in the report.
pub fn run(spec: &CorpusSpec, opts: &RunOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut corpus = generate_corpus(spec)?;
    corpus.retain(|g| g.edge_count() > 0);
    let mut keyed: Vec<_> = corpus.into_iter().map(|g| (sort_key(&g), g)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidSpec(format!("cannot start worker pool: {e}")))?;

    let pair_checks = [Check::T0, Check::T1, Check::T2].iter().any(|c| opts.checks.contains(c));
    let pairs: Vec<(&Graph, &Graph)> = if pair_checks {
        let bips: Vec<&Graph> = keyed
            .iter()
            .map(|(_, g)| g)
            .filter(|g| g.is_bipartite() && g.vertex_count() <= opts.pair_bipartite_max)
            .collect();
        let others: Vec<&Graph> = keyed
            .iter()
            .map(|(_, g)| g)
            .filter(|g| !g.is_bipartite() && g.vertex_count() <= opts.pair_other_max)
            .collect();
        bips.iter().flat_map(|&a| others.iter().map(move |&b| (a, b))).collect()
    } else {
        Vec::new()
    };

    let (graph_outcomes, pair_outcomes) = pool.install(|| {
        let graphs: Vec<Result<GraphOutcome>> = keyed
            .par_iter()
            .map(|(_, g)| {
                let out = evaluate_graph(g, opts);
                if opts.log {
                    if let Ok(o) = &out {
                        eprintln!("{} {} ms", o.summary.id, o.summary.millis);
                    }
                }
                out
            })
            .collect();
        let pairs: Vec<Result<(String, Vec<Finding>)>> = pairs
            .par_iter()
            .map(|&(a, b)| {
                let instance = format!("{}+{}", encode_graph6(a), encode_graph6(b));
                let out = pair_findings(a, b, opts).map(|f| (instance.clone(), f));
                if opts.log && out.is_ok() {
                    eprintln!("{instance}");
                }
                out
            })
            .collect();
        (graphs, pairs)
    });

    let mut report = VerificationReport {
        schema: 1,
        corpus: spec.clone(),
        checks: opts.checks.iter().map(|&c| (c, CheckTally::default())).collect(),
        graphs: Vec::new(),
        counterexamples: Vec::new(),
        naive_expansion_gaps: Vec::new(),
        millis: 0,
    };
    for outcome in graph_outcomes {
        let outcome = outcome?;
        for (check, n, result, t) in outcome.findings {
            report.record(check, &outcome.summary.id, n, result, t);
        }
        report.naive_expansion_gaps.extend(outcome.gaps);
        report.graphs.push(outcome.summary);
    }
    for outcome in pair_outcomes {
        let (instance, findings) = outcome?;
        for (check, n, result, t) in findings {
            report.record(check, &instance, n, result, t);
        }
    }
    report.millis = start.elapsed().as_millis() as u64;
    Ok(report)
}
