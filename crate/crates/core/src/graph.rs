//! Finite simple graphs and the combinatorial invariants that bound the
//! stability indices of integral closures of powers of edge ideals.
//!
//! Vertices are labelled `1..=r` in every public signature. Internally the
//! adjacency structure is a bitmask per vertex, which caps graphs at 64
//! vertices; every exhaustive search in this module is exponential anyway.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    vertex_count: usize,
    // adj[i] has bit j set iff {i+1, j+1} is an edge
    adj: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = Error;

    fn try_from(repr: GraphRepr) -> Result<Self> {
        Graph::new(repr.vertices, &repr.edges)
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr { vertices: g.vertex_count, edges: g.edges() }
    }
}

/// A connected component together with its original vertex labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// The component relabelled onto `1..=vertices.len()`, preserving order.
    pub graph: Graph,
    /// `vertices[i]` is the original label of vertex `i + 1` of `graph`.
    pub vertices: Vec<usize>,
}

/// Outcome of a bipartiteness test, with a certificate either way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bipartition {
    /// `colors[v - 1]` is the side (0 or 1) of vertex `v`.
    Bipartite { colors: Vec<u8> },
    /// Vertices of an odd cycle in traversal order.
    OddCycle { cycle: Vec<usize> },
}

impl Bipartition {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, Bipartition::Bipartite { .. })
    }
}

/// Per-component data used by the invariant formulas.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentProfile {
    pub vertices: Vec<usize>,
    pub is_bipartite: bool,
    pub odd_girth: Option<usize>,
    pub max_odd_cycle: Option<usize>,
    pub max_cycle: usize,
    pub leaf_edge_count: usize,
}

impl Graph {
    /// Builds a graph from 1-based edges. Loops and out-of-range endpoints
    /// are rejected; repeated edges are an error as well.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(vertex_count)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn empty(vertex_count: usize) -> Result<Self> {
        if vertex_count > MAX_VERTICES {
            return Err(Error::TooManyVertices { got: vertex_count, max: MAX_VERTICES });
        }
        Ok(Graph { vertex_count, adj: vec![0; vertex_count] })
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v || self.has_edge(u, v) {
            return Err(Error::InvalidEdge(u, v));
        }
        self.adj[u - 1] |= 1 << (v - 1);
        self.adj[v - 1] |= 1 << (u - 1);
        Ok(())
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.vertex_count {
            return Err(Error::InvalidVertex { vertex: v, vertex_count: self.vertex_count });
        }
        Ok(())
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        let edges: Vec<_> = (1..=n).map(|i| (i, i % n + 1)).collect();
        Graph::new(n, &edges).unwrap()
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        Graph::new(n, &edges).unwrap()
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n).unwrap();
        for u in 1..=n {
            for v in u + 1..=n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    /// Disjoint union; the vertices of `other` are shifted past those of `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let mut g = Graph::empty(self.vertex_count + other.vertex_count)?;
        for (u, v) in self.edges() {
            g.add_edge(u, v)?;
        }
        for (u, v) in other.edges() {
            g.add_edge(u + self.vertex_count, v + self.vertex_count)?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u >= 1 && v >= 1 && u <= self.vertex_count && v <= self.vertex_count
            && self.adj[u - 1] >> (v - 1) & 1 == 1
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.vertex_count {
            let mut m = self.adj[u] & !((2u64 << u) - 1);
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                out.push((u + 1, v + 1));
                m &= m - 1;
            }
        }
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v - 1].count_ones() as usize
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        bits(self.adj[v - 1]).map(|i| i + 1).collect()
    }

    /// Subgraph induced on `keep` (1-based labels), relabelled in increasing order.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut g = Graph::empty(sorted.len()).unwrap();
        for (i, &u) in sorted.iter().enumerate() {
            for (j, &v) in sorted.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i + 1, j + 1).unwrap();
                }
            }
        }
        g
    }

    /// Connected components ordered by smallest vertex.
    pub fn components(&self) -> Vec<Component> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for start in 0..self.vertex_count {
            if seen >> start & 1 == 1 {
                continue;
            }
            let mut comp = 1u64 << start;
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0;
                for v in bits(frontier) {
                    next |= self.adj[v];
                }
                frontier = next & !comp;
                comp |= next;
            }
            seen |= comp;
            let vertices: Vec<usize> = bits(comp).map(|v| v + 1).collect();
            out.push(Component { graph: self.induced(&vertices), vertices });
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Two-colouring by BFS, or an odd cycle when none exists.
    pub fn bipartition(&self) -> Bipartition {
        let n = self.vertex_count;
        let mut color = vec![u8::MAX; n];
        let mut parent = vec![usize::MAX; n];
        for s in 0..n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in bits(self.adj[u]) {
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        parent[v] = u;
                        queue.push_back(v);
                    } else if color[v] == color[u] {
                        return Bipartition::OddCycle { cycle: odd_cycle_from_tree(&parent, u, v) };
                    }
                }
            }
        }
        Bipartition::Bipartite { colors: color }
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_bipartite()
    }

    /// Length of a shortest odd cycle, or `None` for bipartite graphs.
    ///
    /// A BFS from every root; a non-tree edge between two vertices at equal
    /// depth `d` closes an odd walk of length `2d + 1`, and the minimum over
    /// all roots is attained by a shortest odd cycle through its root.
    pub fn odd_girth(&self) -> Option<usize> {
        let n = self.vertex_count;
        let mut best: Option<usize> = None;
        for s in 0..n {
            let mut dist = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in bits(self.adj[u]) {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        queue.push_back(v);
                    } else if dist[v] == dist[u] {
                        let len = 2 * dist[u] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Bitmask of the lengths of all simple cycles (bit `L` set iff a cycle
    /// of length `L` exists). Exhaustive DFS where each cycle is rooted at
    /// its smallest vertex.
    pub fn cycle_lengths(&self) -> u128 {
        let mut lengths = 0u128;
        for s in 0..self.vertex_count {
            let allowed = !((1u64 << s) - 1) & !(1u64 << s);
            self.cycle_dfs(s, s, 1u64 << s, 1, allowed, &mut lengths);
        }
        lengths
    }

    fn cycle_dfs(&self, root: usize, at: usize, visited: u64, len: usize, allowed: u64, out: &mut u128) {
        if len >= 3 && self.adj[at] >> root & 1 == 1 {
            *out |= 1u128 << len;
        }
        for v in bits(self.adj[at] & allowed & !visited) {
            self.cycle_dfs(root, v, visited | 1 << v, len + 1, allowed, out);
        }
    }

    pub fn max_odd_cycle(&self) -> Option<usize> {
        let odd = self.cycle_lengths() & ODD_LENGTHS;
        (odd != 0).then(|| 127 - odd.leading_zeros() as usize)
    }

    /// Length of a longest cycle, 0 for forests.
    pub fn max_cycle(&self) -> usize {
        let all = self.cycle_lengths();
        if all == 0 {
            0
        } else {
            127 - all.leading_zeros() as usize
        }
    }

    pub fn has_cycle_of_length(&self, len: usize) -> bool {
        len >= 3 && len < 128 && self.cycle_lengths() >> len & 1 == 1
    }

    /// Number of edges with at least one endpoint of degree one.
    pub fn leaf_edge_count(&self) -> usize {
        self.edges()
            .into_iter()
            .filter(|&(u, v)| self.degree(u) == 1 || self.degree(v) == 1)
            .count()
    }

    pub fn is_pseudoforest(&self) -> bool {
        self.components().iter().all(|c| c.graph.edge_count() <= c.graph.vertex_count())
    }

    pub fn leaves(&self) -> Vec<usize> {
        (1..=self.vertex_count).filter(|&v| self.degree(v) == 1).collect()
    }

    /// The graph with `N[v]` removed, as an induced subgraph on the remaining
    /// vertices (relabelled in increasing order).
    pub fn delete_closed_neighborhood(&self, v: usize) -> Result<Graph> {
        self.check_vertex(v)?;
        let closed = self.adj[v - 1] | 1 << (v - 1);
        let keep: Vec<usize> =
            (1..=self.vertex_count).filter(|&u| closed >> (u - 1) & 1 == 0).collect();
        Ok(self.induced(&keep))
    }

    pub fn profile(&self) -> Vec<ComponentProfile> {
        self.components()
            .into_iter()
            .map(|c| {
                let g = &c.graph;
                ComponentProfile {
                    is_bipartite: g.is_bipartite(),
                    odd_girth: g.odd_girth(),
                    max_odd_cycle: g.max_odd_cycle(),
                    max_cycle: g.max_cycle(),
                    leaf_edge_count: g.leaf_edge_count(),
                    vertices: c.vertices,
                }
            })
            .collect()
    }

    /// `n0` over the nonbipartite components `G_1..G_s`:
    /// `sum(v_i - e_i - k_i) + j + k` when `s = 2j`, `... + j + 1` when
    /// `s = 2j + 1`, where `2k_i - 1` and `2k - 1` are odd girths.
    pub fn n0(&self) -> usize {
        let nonbip: Vec<Component> =
            self.components().into_iter().filter(|c| !c.graph.is_bipartite()).collect();
        let refs: Vec<&Graph> = nonbip.iter().map(|c| &c.graph).collect();
        n0_of(&refs)
    }

    /// `n1`, defined only when every component is nonbipartite.
    pub fn n1(&self) -> Result<usize> {
        let comps = self.components();
        if comps.is_empty() || comps.iter().any(|c| c.graph.is_bipartite()) {
            return Err(Error::BipartiteComponent);
        }
        let p = comps.len();
        let mut total = self.vertex_count as i64 - self.leaf_edge_count() as i64;
        for c in &comps {
            let m_i = (c.graph.max_odd_cycle().expect("nonbipartite") + 1) / 2;
            total -= m_i as i64;
        }
        let m = (self.odd_girth().expect("nonbipartite") + 1) / 2;
        let s = (p / 2) as i64;
        total += if p % 2 == 1 { s + 1 } else { s + m as i64 };
        Ok(to_positive(total))
    }

    /// `phi0`: the largest `n0` over all sub-collections of components.
    /// Bipartite components never enter `n0`, so only the `2^s` subsets of
    /// the nonbipartite ones are scanned; the empty collection gives 1.
    pub fn phi0(&self) -> usize {
        let nonbip: Vec<Component> =
            self.components().into_iter().filter(|c| !c.graph.is_bipartite()).collect();
        assert!(nonbip.len() < 24, "too many nonbipartite components for subset enumeration");
        let mut best = 1;
        for mask in 1u32..1 << nonbip.len() {
            let chosen: Vec<&Graph> = nonbip
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, c)| &c.graph)
                .collect();
            best = best.max(n0_of(&chosen));
        }
        best
    }

    /// `phi1`: `v - e - sum k_i + (1 | j + m | j + 1)` according to the
    /// number `t` of nonbipartite components (`0`, `2j`, `2j + 1`). Bipartite
    /// components use `2k_i` = longest cycle (`k_i = 1` for trees), the
    /// others `2k_i - 1` = longest odd cycle; `2m - 1` is the odd girth.
    pub fn phi1(&self) -> usize {
        let comps = self.components();
        let mut total = self.vertex_count as i64 - self.leaf_edge_count() as i64;
        let mut t = 0i64;
        for c in &comps {
            let k_i = if c.graph.is_bipartite() {
                (c.graph.max_cycle() / 2).max(1)
            } else {
                t += 1;
                (c.graph.max_odd_cycle().expect("nonbipartite") + 1) / 2
            };
            total -= k_i as i64;
        }
        let j = t / 2;
        total += if t == 0 {
            1
        } else if t % 2 == 0 {
            j + (self.odd_girth().expect("nonbipartite") as i64 + 1) / 2
        } else {
            j + 1
        };
        to_positive(total)
    }

    /// Union of all bipartite components and union of all nonbipartite
    /// components, each relabelled; `None` stands for an empty part.
    pub fn split_bipartite(&self) -> (Option<Graph>, Option<Graph>) {
        let (mut bip, mut non) = (Vec::new(), Vec::new());
        for c in self.components() {
            if c.graph.is_bipartite() {
                bip.extend(c.vertices);
            } else {
                non.extend(c.vertices);
            }
        }
        let part = |vs: Vec<usize>| (!vs.is_empty()).then(|| self.induced(&vs));
        (part(bip), part(non))
    }
}

const ODD_LENGTHS: u128 = 0xAAAA_AAAA_AAAA_AAAA_AAAA_AAAA_AAAA_AAAA;

fn n0_of(nonbipartite: &[&Graph]) -> usize {
    let s = nonbipartite.len();
    if s == 0 {
        return 1;
    }
    let mut total = 0i64;
    let mut odd_girth = usize::MAX;
    for g in nonbipartite {
        let girth = g.odd_girth().expect("nonbipartite");
        odd_girth = odd_girth.min(girth);
        let k_i = (girth + 1) / 2;
        total += g.vertex_count() as i64 - g.leaf_edge_count() as i64 - k_i as i64;
    }
    let j = (s / 2) as i64;
    let k = ((odd_girth + 1) / 2) as i64;
    total += if s % 2 == 0 { j + k } else { j + 1 };
    to_positive(total)
}

fn to_positive(value: i64) -> usize {
    assert!(value >= 1, "invariant evaluated to {value}");
    value as usize
}

fn odd_cycle_from_tree(parent: &[usize], u: usize, v: usize) -> Vec<usize> {
    let ancestors = |mut x: usize| {
        let mut path = vec![x];
        while parent[x] != usize::MAX {
            x = parent[x];
            path.push(x);
        }
        path
    };
    let pu = ancestors(u);
    let pv = ancestors(v);
    // strip the common root-side suffix, keeping the lowest common ancestor once
    let (mut i, mut j) = (pu.len(), pv.len());
    while i > 0 && j > 0 && pu[i - 1] == pv[j - 1] {
        i -= 1;
        j -= 1;
    }
    let mut cycle: Vec<usize> = pu[..=i].iter().map(|x| x + 1).collect();
    cycle.extend(pv[..j].iter().rev().map(|x| x + 1));
    cycle
}

pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            i
        })
    })
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({}; {:?})", self.vertex_count, self.edges())
    }
}
