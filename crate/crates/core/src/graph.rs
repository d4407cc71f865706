//! Kuperberg–Thurston building sets: vertex-2-connected subgraphs, full subgraphs and
//! their block decompositions.

use std::collections::{BTreeMap, BTreeSet};

use crate::diagonal::Polydiagonal;
use crate::error::{input, Result};

pub type Edge = (u32, u32);

fn norm_edge(a: u32, b: u32) -> Edge {
    (a.min(b), a.max(b))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledGraph {
    n: u32,
    edges: BTreeSet<Edge>,
}

impl LabeledGraph {
    pub fn new(n: u32, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        if n == 0 {
            return input("a graph needs at least one vertex");
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return input(format!("self-loop at {a}"));
            }
            if a == 0 || b == 0 || a > n || b > n {
                return input(format!("edge ({a},{b}) outside 1..={n}"));
            }
            set.insert(norm_edge(a, b));
        }
        Ok(LabeledGraph { n, edges: set })
    }

    pub fn complete(n: u32) -> Self {
        let edges = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b)));
        LabeledGraph::new(n, edges).unwrap()
    }

    pub fn path(n: u32) -> Self {
        LabeledGraph::new(n, (1..n).map(|a| (a, a + 1))).unwrap()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn induced(&self, vertices: &BTreeSet<u32>) -> Subgraph {
        let edges = self
            .edges
            .iter()
            .filter(|(a, b)| vertices.contains(a) && vertices.contains(b))
            .copied()
            .collect();
        Subgraph {
            vertices: vertices.clone(),
            edges,
        }
    }

    pub fn as_subgraph(&self) -> Subgraph {
        Subgraph {
            vertices: (1..=self.n).collect(),
            edges: self.edges.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgraph {
    pub vertices: BTreeSet<u32>,
    pub edges: BTreeSet<Edge>,
}

impl Subgraph {
    pub fn new(
        vertices: impl IntoIterator<Item = u32>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self> {
        let vertices: BTreeSet<u32> = vertices.into_iter().collect();
        let mut es = BTreeSet::new();
        for (a, b) in edges {
            if a == b || !vertices.contains(&a) || !vertices.contains(&b) {
                return input(format!("edge ({a},{b}) not between listed vertices"));
            }
            es.insert(norm_edge(a, b));
        }
        Ok(Subgraph {
            vertices,
            edges: es,
        })
    }

    /// The subgraph spanned by a set of edges.
    pub fn spanned(edges: impl IntoIterator<Item = Edge>) -> Self {
        let edges: BTreeSet<Edge> = edges.into_iter().map(|(a, b)| norm_edge(a, b)).collect();
        let vertices = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        Subgraph { vertices, edges }
    }

    fn adjacency(&self) -> BTreeMap<u32, Vec<u32>> {
        let mut adj: BTreeMap<u32, Vec<u32>> =
            self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for &(a, b) in &self.edges {
            adj.get_mut(&a).unwrap().push(b);
            adj.get_mut(&b).unwrap().push(a);
        }
        adj
    }

    /// Connected components of the vertex set with `removed` deleted.
    fn components_without(&self, removed: Option<u32>) -> Vec<BTreeSet<u32>> {
        let adj = self.adjacency();
        let mut seen = BTreeSet::new();
        let mut comps = Vec::new();
        for &start in &self.vertices {
            if Some(start) == removed || seen.contains(&start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(v) = stack.pop() {
                comp.insert(v);
                for &w in &adj[&v] {
                    if Some(w) != removed && seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    pub fn components(&self) -> Vec<BTreeSet<u32>> {
        self.components_without(None)
    }
}

/// Connected and still connected after deleting any one vertex; a single edge qualifies.
pub fn is_vertex_2connected(g: &Subgraph) -> Result<bool> {
    if g.vertices.len() < 2 {
        return input("vertex-2-connectivity needs at least 2 vertices");
    }
    if g.components().len() != 1 {
        return Ok(false);
    }
    if g.vertices.len() == 2 {
        return Ok(true);
    }
    Ok(g.vertices
        .iter()
        .all(|&v| g.components_without(Some(v)).len() == 1))
}

/// One vertex-2-connected subgraph per vertex set that supports one (the induced
/// subgraph, since adding edges preserves 2-connectivity), sorted by size then vertices.
pub fn v2c_subgraphs(g: &LabeledGraph) -> Vec<Subgraph> {
    let n = g.n as usize;
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let vs: BTreeSet<u32> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| i as u32 + 1)
            .collect();
        let sub = g.induced(&vs);
        if is_vertex_2connected(&sub).unwrap() {
            out.push(sub);
        }
    }
    out.sort_by(|a, b| {
        (a.vertices.len(), a.vertices.iter().collect::<Vec<_>>())
            .cmp(&(b.vertices.len(), b.vertices.iter().collect::<Vec<_>>()))
    });
    out
}

/// Δ of a connected subgraph: the diagonal over its vertex set.
pub fn subgraph_diagonal(n: u32, sub: &Subgraph) -> Result<Polydiagonal> {
    let blocks: Vec<Vec<u32>> = sub
        .components()
        .into_iter()
        .filter(|c| c.len() >= 2)
        .map(|c| c.into_iter().collect())
        .collect();
    Polydiagonal::new(n, blocks)
}

/// Contains every vertex of `g` and every edge of `g` joining two vertices in the
/// same component of `f`.
pub fn is_full(g: &LabeledGraph, f: &Subgraph) -> bool {
    if f.vertices != (1..=g.n).collect::<BTreeSet<_>>() || !f.edges.is_subset(&g.edges) {
        return false;
    }
    let comps = f.components();
    let comp_of = |v: u32| comps.iter().position(|c| c.contains(&v));
    g.edges
        .iter()
        .all(|&(a, b)| comp_of(a) != comp_of(b) || f.edges.contains(&(a, b)))
}

/// The maximal vertex-2-connected pieces (blocks) of a full subgraph.
pub fn full_subgraph_decomposition(g: &LabeledGraph, f: &Subgraph) -> Result<Vec<Subgraph>> {
    if !is_full(g, f) {
        return input("subgraph is not full");
    }
    let mut blocks = blocks_of(f);
    blocks.sort();
    Ok(blocks)
}

/// Biconnected components (edge partition) via Hopcroft–Tarjan.
fn blocks_of(f: &Subgraph) -> Vec<Subgraph> {
    struct State {
        adj: BTreeMap<u32, Vec<u32>>,
        depth: BTreeMap<u32, usize>,
        low: BTreeMap<u32, usize>,
        stack: Vec<Edge>,
        out: Vec<Subgraph>,
    }
    fn visit(st: &mut State, v: u32, parent: Option<u32>, d: usize) {
        st.depth.insert(v, d);
        st.low.insert(v, d);
        let neighbours = st.adj[&v].clone();
        for w in neighbours {
            if Some(w) == parent {
                continue;
            }
            match st.depth.get(&w).copied() {
                None => {
                    st.stack.push(norm_edge(v, w));
                    visit(st, w, Some(v), d + 1);
                    let lw = st.low[&w];
                    if lw < st.low[&v] {
                        st.low.insert(v, lw);
                    }
                    if lw >= d {
                        let mut edges = Vec::new();
                        while let Some(e) = st.stack.pop() {
                            edges.push(e);
                            if e == norm_edge(v, w) {
                                break;
                            }
                        }
                        st.out.push(Subgraph::spanned(edges));
                    }
                }
                Some(dw) if dw < d => {
                    st.stack.push(norm_edge(v, w));
                    if dw < st.low[&v] {
                        st.low.insert(v, dw);
                    }
                }
                Some(_) => {}
            }
        }
    }
    let mut st = State {
        adj: f.adjacency(),
        depth: BTreeMap::new(),
        low: BTreeMap::new(),
        stack: Vec::new(),
        out: Vec::new(),
    };
    for &v in &f.vertices {
        if !st.depth.contains_key(&v) {
            visit(&mut st, v, None, 0);
        }
    }
    st.out
}

/// The Kuperberg–Thurston building set: Δ of every vertex-2-connected subgraph.
pub fn kt_building_set(g: &LabeledGraph) -> Result<Vec<Polydiagonal>> {
    if g.n < 2 {
        return input("the KT building set needs n ≥ 2");
    }
    v2c_subgraphs(g)
        .iter()
        .map(|s| subgraph_diagonal(g.n, s))
        .collect()
}

/// Pairwise criterion: every two subgraphs are vertex-disjoint, share exactly one
/// vertex, or are nested.
pub fn kt_is_nest(subgraphs: &[Subgraph]) -> Result<bool> {
    for s in subgraphs {
        if !is_vertex_2connected(s)? {
            return input("kt_is_nest needs vertex-2-connected subgraphs");
        }
    }
    for (i, a) in subgraphs.iter().enumerate() {
        for b in &subgraphs[i + 1..] {
            let shared = a.vertices.intersection(&b.vertices).count();
            let nested = (a.vertices.is_subset(&b.vertices) && a.edges.is_subset(&b.edges))
                || (b.vertices.is_subset(&a.vertices) && b.edges.is_subset(&a.edges));
            if shared > 1 && !nested {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
