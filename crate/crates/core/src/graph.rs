//! Simple undirected graphs, arcs, and orientations induced by a
//! half-arc-transitive group action.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{orbits_of, GroupByGenerators, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge ({0}, {1}) has an endpoint outside 0..{2}")]
    VertexOutOfRange(usize, usize, usize),
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not tetravalent (vertex {vertex} has degree {degree})")]
    NotTetravalent { vertex: usize, degree: usize },
    #[error("generator {0} is not an automorphism of the graph")]
    NotAutomorphism(usize),
    #[error("generator degree {0} does not match vertex count {1}")]
    GroupDegree(usize, usize),
    #[error("group is not vertex-transitive")]
    NotVertexTransitive,
    #[error("group is not edge-transitive")]
    NotEdgeTransitive,
    #[error("group is arc-transitive")]
    ArcTransitive,
    #[error("invalid orientation: {0}")]
    BadOrientation(String),
}

/// An edge stored as `(u, v)` with `u < v`.
pub type Edge = (usize, usize);
/// An arc, an ordered pair of adjacent vertices.
pub type Arc = (usize, usize);

/// Simple undirected graph on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    connected: bool,
}

impl Graph {
    /// Builds a simple graph. Loops and repeated edges are rejected;
    /// connectivity is recorded, not enforced.
    pub fn new(n: usize, edge_list: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut adjacency = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for &(u, v) in edge_list {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange(u, v, n));
            }
            if u == v {
                return Err(GraphError::LoopEdge(u));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for nb in &mut adjacency {
            nb.sort_unstable();
        }
        let edges: Vec<Edge> = seen.into_iter().collect();
        let connected = is_connected(&adjacency);
        Ok(Graph { adjacency, edges, connected })
    }

    pub fn order(&self) -> usize {
        self.adjacency.len()
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges with `u < v`, sorted.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// All arcs, sorted lexicographically.
    pub fn arcs(&self) -> Vec<Arc> {
        let mut arcs = Vec::with_capacity(2 * self.size());
        for (u, nb) in self.adjacency.iter().enumerate() {
            for &v in nb {
                arcs.push((u, v));
            }
        }
        arcs
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adjacency.first().map_or(0, |nb| nb.len());
        self.adjacency.iter().all(|nb| nb.len() == d).then_some(d)
    }

    pub fn is_automorphism(&self, p: &Permutation) -> bool {
        p.degree() == self.order()
            && self.edges.iter().all(|&(u, v)| self.has_edge(p.apply(u), p.apply(v)))
    }

    /// Two-colouring if the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let n = self.order();
        let mut colour = vec![u8::MAX; n];
        for s in 0..n {
            if colour[s] != u8::MAX {
                continue;
            }
            colour[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adjacency[u] {
                    if colour[v] == u8::MAX {
                        colour[v] = 1 - colour[u];
                        queue.push_back(v);
                    } else if colour[v] == colour[u] {
                        return None;
                    }
                }
            }
        }
        Some(colour)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Relabels vertex `v` as `p(v)`.
    pub fn relabeled(&self, p: &Permutation) -> Graph {
        let edges: Vec<Edge> = self.edges.iter().map(|&(u, v)| (p.apply(u), p.apply(v))).collect();
        Graph::new(self.order(), &edges).expect("relabeling preserves simplicity")
    }

    /// Whether the graph is a single cycle through all vertices.
    pub fn is_cycle(&self) -> bool {
        self.order() >= 3 && self.connected && self.regular_degree() == Some(2)
    }

    /// Edge-list text: `n m` then one `u v` per line.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{} {}\n", self.order(), self.size());
        for (u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph {name} {{\n");
        for v in 0..self.order() {
            s.push_str(&format!("  {v};\n"));
        }
        for (u, v) in &self.edges {
            s.push_str(&format!("  {u} -- {v};\n"));
        }
        s.push_str("}\n");
        s
    }
}

fn is_connected(adjacency: &[Vec<usize>]) -> bool {
    let n = adjacency.len();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in &adjacency[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == n
}

/// A tetravalent graph with every edge given a direction so that each
/// vertex has two out-arcs and two in-arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedGraph {
    graph: Graph,
    out: Vec<[usize; 2]>,
    inn: Vec<[usize; 2]>,
}

impl OrientedGraph {
    /// Orients `graph` by the given arcs, one per edge.
    pub fn from_arcs(graph: Graph, arcs: &[Arc]) -> Result<OrientedGraph, GraphError> {
        let n = graph.order();
        if !graph.is_connected() {
            return Err(GraphError::Disconnected);
        }
        if let Some(v) = (0..n).find(|&v| graph.degree(v) != 4) {
            return Err(GraphError::NotTetravalent { vertex: v, degree: graph.degree(v) });
        }
        if arcs.len() != graph.size() {
            return Err(GraphError::BadOrientation(format!(
                "{} arcs for {} edges",
                arcs.len(),
                graph.size()
            )));
        }
        let mut covered = BTreeSet::new();
        let mut out: Vec<Vec<usize>> = vec![Vec::with_capacity(2); n];
        let mut inn: Vec<Vec<usize>> = vec![Vec::with_capacity(2); n];
        for &(u, v) in arcs {
            if !graph.has_edge(u, v) {
                return Err(GraphError::BadOrientation(format!("({u}, {v}) is not an arc")));
            }
            if !covered.insert((u.min(v), u.max(v))) {
                return Err(GraphError::BadOrientation(format!("edge {{{u}, {v}}} oriented twice")));
            }
            out[u].push(v);
            inn[v].push(u);
        }
        let mut out2 = Vec::with_capacity(n);
        let mut inn2 = Vec::with_capacity(n);
        for v in 0..n {
            if out[v].len() != 2 || inn[v].len() != 2 {
                return Err(GraphError::BadOrientation(format!(
                    "vertex {v} has out-degree {} and in-degree {}",
                    out[v].len(),
                    inn[v].len()
                )));
            }
            out[v].sort_unstable();
            inn[v].sort_unstable();
            out2.push([out[v][0], out[v][1]]);
            inn2.push([inn[v][0], inn[v][1]]);
        }
        Ok(OrientedGraph { graph, out: out2, inn: inn2 })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn order(&self) -> usize {
        self.graph.order()
    }

    pub fn out_neighbors(&self, v: usize) -> [usize; 2] {
        self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> [usize; 2] {
        self.inn[v]
    }

    /// Whether `(u, v)` is an arc of the orientation.
    pub fn is_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(&v)
    }

    /// Head of the edge `{u, v}`.
    pub fn head_of(&self, u: usize, v: usize) -> Option<usize> {
        if self.is_arc(u, v) {
            Some(v)
        } else if self.is_arc(v, u) {
            Some(u)
        } else {
            None
        }
    }

    /// Oriented arcs, sorted.
    pub fn arcs(&self) -> Vec<Arc> {
        let mut arcs: Vec<Arc> =
            (0..self.order()).flat_map(|u| self.out[u].iter().map(move |&v| (u, v))).collect();
        arcs.sort_unstable();
        arcs
    }

    pub fn preserved_by(&self, p: &Permutation) -> bool {
        (0..self.order()).all(|u| self.out[u].iter().all(|&v| self.is_arc(p.apply(u), p.apply(v))))
    }

    /// Whether `p` maps every arc of the orientation to a reversed arc.
    pub fn reversed_by(&self, p: &Permutation) -> bool {
        (0..self.order()).all(|u| self.out[u].iter().all(|&v| self.is_arc(p.apply(v), p.apply(u))))
    }

    pub fn reversed(&self) -> OrientedGraph {
        OrientedGraph { graph: self.graph.clone(), out: self.inn.clone(), inn: self.out.clone() }
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph {name} {{\n");
        for (u, v) in self.arcs() {
            s.push_str(&format!("  {u} -> {v};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Swaps head and tail of every edge.
pub fn reverse_orientation(og: &OrientedGraph) -> OrientedGraph {
    og.reversed()
}

/// Evidence that a group acts half-arc-transitively on a tetravalent graph,
/// with the orientation it induces.
#[derive(Debug, Clone)]
pub struct HatCertificate {
    pub group: GroupByGenerators,
    pub orientation: OrientedGraph,
    pub vertex_transitive: bool,
    pub edge_transitive: bool,
    pub arc_transitive: bool,
}

impl HatCertificate {
    pub fn is_valid(&self) -> bool {
        self.vertex_transitive
            && self.edge_transitive
            && !self.arc_transitive
            && self.group.generators().iter().all(|g| self.orientation.preserved_by(g))
    }
}

/// Transitivity summary of a group on a graph, without requiring
/// half-arc-transitivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitivityProfile {
    pub vertex_transitive: bool,
    pub edge_transitive: bool,
    pub arc_transitive: bool,
}

pub fn transitivity_profile(graph: &Graph, group: &GroupByGenerators) -> TransitivityProfile {
    let gens = group.generators();
    let vertices: Vec<usize> = (0..graph.order()).collect();
    let vertex_transitive = orbits_of(gens, &vertices, |g, &x| g.apply(x)).len() == 1;
    let edge_transitive = graph.size() == 0
        || orbits_of(gens, graph.edges(), |g, &(u, v)| {
            let (a, b) = (g.apply(u), g.apply(v));
            (a.min(b), a.max(b))
        })
        .len()
            == 1;
    let arcs = graph.arcs();
    let arc_transitive =
        arcs.is_empty() || orbits_of(gens, &arcs, |g, &(u, v)| (g.apply(u), g.apply(v))).len() == 1;
    TransitivityProfile { vertex_transitive, edge_transitive, arc_transitive }
}

/// Checks that `group` acts half-arc-transitively on the tetravalent
/// connected `graph` and returns the induced orientation: the arc orbit
/// containing the lexicographically least arc.
pub fn certify_hat(graph: &Graph, group: &GroupByGenerators) -> Result<HatCertificate, GraphError> {
    let n = graph.order();
    if group.degree() != n {
        return Err(GraphError::GroupDegree(group.degree(), n));
    }
    if !graph.is_connected() {
        return Err(GraphError::Disconnected);
    }
    if let Some(v) = (0..n).find(|&v| graph.degree(v) != 4) {
        return Err(GraphError::NotTetravalent { vertex: v, degree: graph.degree(v) });
    }
    if let Some(i) = group.generators().iter().position(|g| !graph.is_automorphism(g)) {
        return Err(GraphError::NotAutomorphism(i));
    }
    let profile = transitivity_profile(graph, group);
    if !profile.vertex_transitive {
        return Err(GraphError::NotVertexTransitive);
    }
    if !profile.edge_transitive {
        return Err(GraphError::NotEdgeTransitive);
    }
    if profile.arc_transitive {
        return Err(GraphError::ArcTransitive);
    }
    let arcs = graph.arcs();
    let orbits = orbits_of(group.generators(), &arcs, |g, &(u, v)| (g.apply(u), g.apply(v)));
    let first = orbits.iter().find(|o| o.contains(&0)).expect("arc 0 lies in an orbit");
    let chosen: Vec<Arc> = first.iter().map(|&i| arcs[i]).collect();
    let orientation = OrientedGraph::from_arcs(graph.clone(), &chosen)?;
    debug_assert!(group.generators().iter().all(|g| orientation.preserved_by(g)));
    Ok(HatCertificate {
        group: group.clone(),
        orientation,
        vertex_transitive: true,
        edge_transitive: true,
        arc_transitive: false,
    })
}

/// Both arc orbits of a certificate, as (chosen orbit, paired orbit).
pub fn arc_orbit_pair(cert: &HatCertificate) -> (Vec<Arc>, Vec<Arc>) {
    let chosen = cert.orientation.arcs();
    let mut paired: Vec<Arc> = chosen.iter().map(|&(u, v)| (v, u)).collect();
    paired.sort_unstable();
    (chosen, paired)
}
