//! Automorphism groups, isomorphism and canonical forms by equitable
//! partition refinement with individualization and backtracking.
//!
//! Everything runs on a [`Digraph`] so that undirected graphs and oriented
//! graphs share one search. An undirected graph is the digraph with every
//! edge in both directions.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{certify_hat, Graph, GraphError, OrientedGraph};
use crate::perm::{GroupByGenerators, PermError, Permutation};

/// Default cap on search-tree nodes per call.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search exceeded the budget of {0} tree nodes")]
    SearchBudgetExceeded(u64),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Out- and in-neighbour lists, each sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn from_graph(g: &Graph) -> Digraph {
        let adj = g.adjacency().to_vec();
        Digraph { out: adj.clone(), inn: adj }
    }

    pub fn from_oriented(og: &OrientedGraph) -> Digraph {
        let n = og.order();
        Digraph {
            out: (0..n).map(|v| og.out_neighbors(v).to_vec()).collect(),
            inn: (0..n).map(|v| og.in_neighbors(v).to_vec()).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.out.len()
    }

    pub fn reversed(&self) -> Digraph {
        Digraph { out: self.inn.clone(), inn: self.out.clone() }
    }

    fn arc_count(&self) -> usize {
        self.out.iter().map(|o| o.len()).sum()
    }

    /// Whether `p` maps every arc of `self` to an arc of `other`.
    pub fn maps_onto(&self, p: &Permutation, other: &Digraph) -> bool {
        self.order() == other.order()
            && p.degree() == self.order()
            && self.arc_count() == other.arc_count()
            && (0..self.order()).all(|u| {
                let pu = p.apply(u);
                self.out[u].iter().all(|&v| other.out[pu].binary_search(&p.apply(v)).is_ok())
            })
    }

    pub fn is_automorphism(&self, p: &Permutation) -> bool {
        self.maps_onto(p, self)
    }

    /// Sorted arc list after relabeling each vertex `v` as `label[v]`.
    fn relabeled_arcs(&self, label: &[usize]) -> Vec<(usize, usize)> {
        let mut arcs: Vec<(usize, usize)> = (0..self.order())
            .flat_map(|u| self.out[u].iter().map(move |&v| (label[u], label[v])))
            .collect();
        arcs.sort_unstable();
        arcs
    }
}

/// Ordered partition with stable cell ids.
#[derive(Debug, Clone)]
struct Partition {
    order: Vec<usize>,
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
}

impl Partition {
    fn unit(n: usize) -> Partition {
        Partition { order: vec![0], cells: vec![(0..n).collect()], cell_of: vec![0; n] }
    }

    /// First smallest cell with more than one vertex.
    fn target(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for &c in &self.order {
            let len = self.cells[c].len();
            if len > 1 && best.map_or(true, |b| len < self.cells[b].len()) {
                best = Some(c);
            }
        }
        best
    }

    fn leaf(&self) -> Vec<usize> {
        self.order.iter().map(|&c| self.cells[c][0]).collect()
    }

    fn insert_after(&mut self, anchor: usize, ids: &[usize]) {
        let pos = self.order.iter().position(|&c| c == anchor).expect("anchor cell present");
        self.order.splice(pos + 1..pos + 1, ids.iter().copied());
    }

    /// Splits `v` off its cell as a singleton placed in front of it.
    fn individualize(&mut self, v: usize) -> usize {
        let c = self.cell_of[v];
        self.cells[c].retain(|&x| x != v);
        let id = self.cells.len();
        self.cells.push(vec![v]);
        self.cell_of[v] = id;
        let pos = self.order.iter().position(|&x| x == c).expect("cell present");
        self.order.insert(pos, id);
        id
    }

    /// Refines to the coarsest equitable partition below `self`, using the
    /// queued cells as initial splitters. Records a label-free trace.
    fn refine(&mut self, d: &Digraph, mut queue: std::collections::VecDeque<usize>, trace: &mut Vec<u64>) {
        let n = self.cell_of.len();
        let mut queued = vec![false; self.cells.len()];
        for &c in &queue {
            queued[c] = true;
        }
        let mut outc = vec![0u64; n];
        let mut inc = vec![0u64; n];
        let mut touched: Vec<usize> = Vec::new();
        while let Some(s) = queue.pop_front() {
            queued[s] = false;
            let splitter = self.cells[s].clone();
            for &x in &splitter {
                for &v in &d.inn[x] {
                    if outc[v] == 0 && inc[v] == 0 {
                        touched.push(v);
                    }
                    outc[v] += 1;
                }
                for &v in &d.out[x] {
                    if outc[v] == 0 && inc[v] == 0 {
                        touched.push(v);
                    }
                    inc[v] += 1;
                }
            }
            let mut cand: Vec<usize> = touched.iter().map(|&v| self.cell_of[v]).collect();
            cand.sort_unstable();
            cand.dedup();
            // split in partition order so the outcome is label-independent
            let rank: HashMap<usize, usize> =
                self.order.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            cand.sort_unstable_by_key(|c| rank[c]);
            for c in cand {
                if self.cells[c].len() == 1 {
                    continue;
                }
                let key = |v: usize| (outc[v] << 32) | inc[v];
                let first = key(self.cells[c][0]);
                if self.cells[c].iter().all(|&v| key(v) == first) {
                    continue;
                }
                let mut groups: std::collections::BTreeMap<u64, Vec<usize>> = Default::default();
                for &v in &self.cells[c] {
                    groups.entry(key(v)).or_default().push(v);
                }
                trace.extend([rank[&c] as u64, rank[&s] as u64, groups.len() as u64]);
                let mut frags = groups.into_iter();
                let (k0, keep) = frags.next().expect("at least two fragments");
                trace.extend([k0, keep.len() as u64]);
                self.cells[c] = keep;
                let mut new_ids = Vec::new();
                for (k, members) in frags {
                    trace.extend([k, members.len() as u64]);
                    let id = self.cells.len();
                    for &v in &members {
                        self.cell_of[v] = id;
                    }
                    self.cells.push(members);
                    queued.push(false);
                    new_ids.push(id);
                }
                self.insert_after(c, &new_ids);
                for id in std::iter::once(c).chain(new_ids) {
                    if !queued[id] {
                        queued[id] = true;
                        queue.push_back(id);
                    }
                }
            }
            for v in touched.drain(..) {
                outc[v] = 0;
                inc[v] = 0;
            }
        }
        trace.push(u64::MAX);
        trace.extend(self.order.iter().map(|&c| self.cells[c].len() as u64));
    }
}

/// A node of the first path: the partition there, its trace, and the
/// vertex individualized to descend.
#[derive(Debug, Clone)]
struct Level {
    partition: Partition,
    trace: Vec<u64>,
    target: Vec<usize>,
    chosen: usize,
}

#[derive(Debug, Clone)]
struct FirstPath {
    levels: Vec<Level>,
    leaf: Vec<usize>,
    leaf_trace: Vec<u64>,
}

impl FirstPath {
    fn trace_at(&self, depth: usize) -> &[u64] {
        if depth < self.levels.len() {
            &self.levels[depth].trace
        } else {
            &self.leaf_trace
        }
    }
}

struct Searcher<'a> {
    d: &'a Digraph,
    nodes: u64,
    budget: u64,
}

impl<'a> Searcher<'a> {
    fn new(d: &'a Digraph, budget: u64) -> Self {
        Searcher { d, nodes: 0, budget }
    }

    fn tick(&mut self) -> Result<(), SearchError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(SearchError::SearchBudgetExceeded(self.budget))
        } else {
            Ok(())
        }
    }

    fn root(&mut self) -> Result<(Partition, Vec<u64>), SearchError> {
        self.tick()?;
        let mut p = Partition::unit(self.d.order());
        let mut trace = Vec::new();
        if self.d.order() > 0 {
            p.refine(self.d, [0].into_iter().collect(), &mut trace);
        }
        Ok((p, trace))
    }

    fn child(&mut self, p: &Partition, v: usize) -> Result<(Partition, Vec<u64>), SearchError> {
        self.tick()?;
        let mut q = p.clone();
        let id = q.individualize(v);
        let mut trace = Vec::new();
        q.refine(self.d, [id].into_iter().collect(), &mut trace);
        Ok((q, trace))
    }

    fn first_path(&mut self) -> Result<FirstPath, SearchError> {
        let (mut p, mut trace) = self.root()?;
        let mut levels = Vec::new();
        while let Some(c) = p.target() {
            let mut target = p.cells[c].clone();
            target.sort_unstable();
            let chosen = target[0];
            let (q, t) = self.child(&p, chosen)?;
            levels.push(Level { partition: p, trace, target, chosen });
            p = q;
            trace = t;
        }
        Ok(FirstPath { levels, leaf: p.leaf(), leaf_trace: trace })
    }
}

/// Union-find orbits of a generator set on points.
fn orbit_ids(n: usize, gens: &[&Permutation]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for g in gens {
        for x in 0..n {
            let (a, b) = (find(&mut parent, x), find(&mut parent, g.apply(x)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..n).map(|x| find(&mut parent, x)).collect()
}

/// Automorphism group found by search: generators with the level at which
/// each was found, the base (first-path vertices) and the basic orbit
/// lengths.
#[derive(Debug, Clone)]
pub struct AutGroup {
    pub generators: Vec<Permutation>,
    /// For each generator, the first-path depth at which it was found; it
    /// fixes every base point before that depth.
    pub levels: Vec<usize>,
    pub base: Vec<usize>,
    pub orbit_lengths: Vec<usize>,
    pub order: u128,
    pub nodes: u64,
    n: usize,
    first_path: FirstPath,
}

impl AutGroup {
    pub fn group(&self) -> Result<GroupByGenerators, PermError> {
        GroupByGenerators::new(self.n, self.generators.clone())
    }

    /// Generators fixing the first `depth` base points.
    fn stabilizer_gens(&self, depth: usize) -> Vec<&Permutation> {
        self.generators.iter().zip(&self.levels).filter(|(_, &l)| l >= depth).map(|(g, _)| g).collect()
    }

    /// Orbit ids on vertices of the full group.
    pub fn vertex_orbits(&self) -> Vec<usize> {
        orbit_ids(self.n, &self.generators.iter().collect::<Vec<_>>())
    }
}

/// Search settings.
#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    pub node_budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { node_budget: DEFAULT_NODE_BUDGET }
    }
}

/// Leaf-to-leaf mapping: `first[i] -> other[i]`.
fn leaf_map(first: &[usize], other: &[usize]) -> Permutation {
    let mut images = vec![0; first.len()];
    for (&a, &b) in first.iter().zip(other) {
        images[a] = b;
    }
    Permutation::from_images(images).expect("leaves are orderings of all vertices")
}

/// Depth-first search below `p` (at first-path depth `depth`) for a leaf
/// whose traces match `path` all the way down and whose leaf map sends
/// `src` onto `dst`.
fn find_match(
    s: &mut Searcher<'_>,
    p: &Partition,
    depth: usize,
    path: &FirstPath,
    src: &Digraph,
) -> Result<Option<Permutation>, SearchError> {
    match p.target() {
        None => {
            let pi = leaf_map(&path.leaf, &p.leaf());
            Ok(src.maps_onto(&pi, s.d).then_some(pi))
        }
        Some(c) => {
            let mut cell = p.cells[c].clone();
            cell.sort_unstable();
            for x in cell {
                let (q, t) = s.child(p, x)?;
                if t != path.trace_at(depth + 1) {
                    continue;
                }
                if let Some(pi) = find_match(s, &q, depth + 1, path, src)? {
                    return Ok(Some(pi));
                }
            }
            Ok(None)
        }
    }
}

pub fn digraph_automorphisms(d: &Digraph, cfg: SearchConfig) -> Result<AutGroup, SearchError> {
    let n = d.order();
    let mut s = Searcher::new(d, cfg.node_budget);
    let path = s.first_path()?;
    let depth = path.levels.len();
    let mut gens: Vec<Permutation> = Vec::new();
    let mut levels: Vec<usize> = Vec::new();
    let mut orbit_lengths = vec![1; depth];
    for k in (0..depth).rev() {
        let lvl = &path.levels[k];
        for &w in &lvl.target {
            if w == lvl.chosen {
                continue;
            }
            let ids = orbit_ids(n, &gens.iter().collect::<Vec<_>>());
            if ids[w] == ids[lvl.chosen] {
                continue;
            }
            let (q, t) = s.child(&lvl.partition, w)?;
            if t != path.trace_at(k + 1) {
                continue;
            }
            if let Some(pi) = find_match(&mut s, &q, k + 1, &path, d)? {
                gens.push(pi);
                levels.push(k);
            }
        }
        let ids = orbit_ids(n, &gens.iter().collect::<Vec<_>>());
        orbit_lengths[k] = (0..n).filter(|&x| ids[x] == ids[lvl.chosen]).count();
    }
    let order = orbit_lengths.iter().map(|&x| x as u128).product();
    Ok(AutGroup {
        generators: gens,
        levels,
        base: path.levels.iter().map(|l| l.chosen).collect(),
        orbit_lengths,
        order,
        nodes: s.nodes,
        n,
        first_path: path,
    })
}

/// Generators and order of the full automorphism group of `g`.
pub fn automorphism_group(g: &Graph) -> Result<AutGroup, SearchError> {
    digraph_automorphisms(&Digraph::from_graph(g), SearchConfig::default())
}

/// Children of a node to try, pruned by the stabilizer of the base prefix
/// when the node lies on the first path of `aut`.
fn candidates(cell: &[usize], on_first_path: Option<usize>, aut: &AutGroup) -> Vec<usize> {
    let mut cell = cell.to_vec();
    cell.sort_unstable();
    let Some(depth) = on_first_path else { return cell };
    let ids = orbit_ids(aut.n, &aut.stabilizer_gens(depth));
    let preferred = aut.base.get(depth).copied();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    if let Some(b) = preferred.filter(|b| cell.contains(b)) {
        seen.insert(ids[b]);
        out.push(b);
    }
    for x in cell {
        if seen.insert(ids[x]) {
            out.push(x);
        }
    }
    out
}

/// Isomorphism `d1 -> d2` if one exists.
pub fn digraph_isomorphism(
    d1: &Digraph,
    d2: &Digraph,
    cfg: SearchConfig,
) -> Result<Option<Permutation>, SearchError> {
    if d1.order() != d2.order() || d1.arc_count() != d2.arc_count() {
        return Ok(None);
    }
    let mut deg1: Vec<(usize, usize)> = (0..d1.order()).map(|v| (d1.out[v].len(), d1.inn[v].len())).collect();
    let mut deg2: Vec<(usize, usize)> = (0..d2.order()).map(|v| (d2.out[v].len(), d2.inn[v].len())).collect();
    deg1.sort_unstable();
    deg2.sort_unstable();
    if deg1 != deg2 {
        return Ok(None);
    }
    let mut s1 = Searcher::new(d1, cfg.node_budget);
    let path = s1.first_path()?;
    let aut2 = digraph_automorphisms(d2, cfg)?;
    let mut s2 = Searcher::new(d2, cfg.node_budget.saturating_sub(s1.nodes + aut2.nodes));
    let (p, t) = s2.root()?;
    if t != path.trace_at(0) {
        return Ok(None);
    }
    iso_dfs(&mut s2, &p, 0, Some(0), &path, &aut2, d1)
}

fn iso_dfs(
    s: &mut Searcher<'_>,
    p: &Partition,
    depth: usize,
    on_first: Option<usize>,
    path: &FirstPath,
    aut: &AutGroup,
    src: &Digraph,
) -> Result<Option<Permutation>, SearchError> {
    let Some(c) = p.target() else {
        let pi = leaf_map(&path.leaf, &p.leaf());
        return Ok(src.maps_onto(&pi, s.d).then_some(pi));
    };
    for x in candidates(&p.cells[c], on_first, aut) {
        let (q, t) = s.child(p, x)?;
        if t != path.trace_at(depth + 1) {
            continue;
        }
        let next = on_first.filter(|&d| aut.base.get(d) == Some(&x)).map(|d| d + 1);
        if let Some(pi) = iso_dfs(s, &q, depth + 1, next, path, aut, src)? {
            return Ok(Some(pi));
        }
    }
    Ok(None)
}

/// Isomorphism `g1 -> g2` as a vertex map, if one exists. The witness is
/// verified edge by edge.
pub fn are_isomorphic(g1: &Graph, g2: &Graph) -> Result<Option<Permutation>, SearchError> {
    let pi = digraph_isomorphism(&Digraph::from_graph(g1), &Digraph::from_graph(g2), SearchConfig::default())?;
    debug_assert!(pi.as_ref().map_or(true, |p| g1.relabeled(p) == *g2));
    Ok(pi)
}

/// Canonical labeling and the relabeled arc list. Two digraphs are
/// isomorphic iff their `arcs` agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub n: usize,
    /// Vertex `v` receives canonical label `labeling.apply(v)`.
    pub labeling: Permutation,
    pub arcs: Vec<(usize, usize)>,
}

impl CanonicalForm {
    /// Edge list for undirected input (arcs with `u < v`).
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.arcs.iter().copied().filter(|&(u, v)| u < v).collect()
    }
}

pub fn digraph_canonical_form(d: &Digraph, cfg: SearchConfig) -> Result<CanonicalForm, SearchError> {
    let aut = digraph_automorphisms(d, cfg)?;
    let mut s = Searcher::new(d, cfg.node_budget.saturating_sub(aut.nodes));
    let (p, t) = s.root()?;
    let mut best: Option<(Vec<Vec<u64>>, Vec<(usize, usize)>, Vec<usize>)> = None;
    let mut traces = vec![t];
    canon_dfs(&mut s, &p, &mut traces, Some(0), &aut, &mut best)?;
    let (_, arcs, leaf) = best.expect("the tree has at least one leaf");
    let mut label = vec![0; d.order()];
    for (i, &v) in leaf.iter().enumerate() {
        label[v] = i;
    }
    Ok(CanonicalForm {
        n: d.order(),
        labeling: Permutation::from_images(label)?,
        arcs,
    })
}

type Best = Option<(Vec<Vec<u64>>, Vec<(usize, usize)>, Vec<usize>)>;

fn canon_dfs(
    s: &mut Searcher<'_>,
    p: &Partition,
    traces: &mut Vec<Vec<u64>>,
    on_first: Option<usize>,
    aut: &AutGroup,
    best: &mut Best,
) -> Result<(), SearchError> {
    if let Some((bt, _, _)) = best.as_ref() {
        let k = traces.len();
        if traces[..] < bt[..k.min(bt.len())] {
            return Ok(());
        }
    }
    let Some(c) = p.target() else {
        let leaf = p.leaf();
        let mut label = vec![0; leaf.len()];
        for (i, &v) in leaf.iter().enumerate() {
            label[v] = i;
        }
        let arcs = s.d.relabeled_arcs(&label);
        let better = match best.as_ref() {
            None => true,
            Some((bt, ba, _)) => (&traces[..], &arcs) > (&bt[..], ba),
        };
        if better {
            *best = Some((traces.clone(), arcs, leaf));
        }
        return Ok(());
    };
    for x in candidates(&p.cells[c], on_first, aut) {
        let (q, t) = s.child(p, x)?;
        traces.push(t);
        let next = on_first.filter(|&d| aut.base.get(d) == Some(&x)).map(|d| d + 1);
        canon_dfs(s, &q, traces, next, aut, best)?;
        traces.pop();
    }
    Ok(())
}

pub fn canonical_form(g: &Graph) -> Result<CanonicalForm, SearchError> {
    digraph_canonical_form(&Digraph::from_graph(g), SearchConfig::default())
}

/// Whether the full automorphism group is transitive on arcs.
pub fn is_arc_transitive(g: &Graph) -> Result<bool, SearchError> {
    let aut = automorphism_group(g)?;
    let arcs = g.arcs();
    if arcs.is_empty() {
        return Ok(true);
    }
    let index: HashMap<(usize, usize), usize> = arcs.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let gens: Vec<Permutation> = aut
        .generators
        .iter()
        .map(|g| Permutation::from_images(arcs.iter().map(|&(u, v)| index[&(g.apply(u), g.apply(v))]).collect()))
        .collect::<Result<_, _>>()?;
    Ok(orbit_ids(arcs.len(), &gens.iter().collect::<Vec<_>>()).iter().all(|&x| x == 0))
}

/// Whether some automorphism of `g` exchanges the two arc orbits of the
/// half-arc-transitive action of `group`. Returns the swapping map.
pub fn orbit_swapper(g: &Graph, group: &GroupByGenerators) -> Result<Option<Permutation>, SearchError> {
    let cert = certify_hat(g, group)?;
    let d = Digraph::from_oriented(&cert.orientation);
    digraph_isomorphism(&d, &d.reversed(), SearchConfig::default())
}

pub fn has_orbit_swapper(g: &Graph, group: &GroupByGenerators) -> Result<bool, SearchError> {
    Ok(orbit_swapper(g, group)?.is_some())
}

/// First-path statistics, for diagnostics.
pub fn search_depth(aut: &AutGroup) -> usize {
    aut.first_path.levels.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_circulant_pm, build_xo, XoParams};
    use crate::graph::certify_hat;

    fn cycle(n: usize) -> Graph {
        let e: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &e).unwrap()
    }

    #[test]
    fn cycle_group_is_dihedral() {
        for n in 3..10 {
            let aut = automorphism_group(&cycle(n)).unwrap();
            assert_eq!(aut.order, 2 * n as u128);
            let g = aut.group().unwrap();
            assert_eq!(g.order().unwrap(), 2 * n);
            assert_eq!(crate::perm::group_structure(&g).unwrap(), crate::perm::StructureTag::dihedral(2 * n));
        }
    }

    #[test]
    fn complete_graph_k5() {
        let k5 = build_circulant_pm(5, &[1, 2]).unwrap();
        let aut = automorphism_group(&k5).unwrap();
        assert_eq!(aut.order, 120);
        assert!(is_arc_transitive(&k5).unwrap());
    }

    #[test]
    fn doyle_holt_group() {
        let inst = build_xo(XoParams::new(3, 9, 2).unwrap()).unwrap();
        let aut = automorphism_group(&inst.graph).unwrap();
        assert_eq!(aut.order, 54);
        assert!(aut.generators.iter().all(|p| inst.graph.is_automorphism(p)));
        assert!(!is_arc_transitive(&inst.graph).unwrap());
        assert!(!has_orbit_swapper(&inst.graph, &inst.group).unwrap());
    }

    #[test]
    fn relabeled_copy_is_isomorphic() {
        let g = build_circulant_pm(13, &[1, 5]).unwrap();
        let p = Permutation::from_images((0..13).map(|i| (7 * i + 3) % 13).collect()).unwrap();
        let h = g.relabeled(&p);
        let w = are_isomorphic(&g, &h).unwrap().unwrap();
        assert_eq!(g.relabeled(&w), h);
        assert_eq!(canonical_form(&g).unwrap().arcs, canonical_form(&h).unwrap().arcs);
    }

    #[test]
    fn different_circulants() {
        let a = build_circulant_pm(13, &[1, 3]).unwrap();
        let b = build_circulant_pm(13, &[1, 2]).unwrap();
        assert!(are_isomorphic(&a, &b).unwrap().is_none());
        assert_ne!(canonical_form(&a).unwrap().arcs, canonical_form(&b).unwrap().arcs);
        assert!(!is_arc_transitive(&a).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let k5 = build_circulant_pm(5, &[1, 2]).unwrap();
        let d = Digraph::from_graph(&k5);
        let err = digraph_automorphisms(&d, SearchConfig { node_budget: 3 }).unwrap_err();
        assert_eq!(err, SearchError::SearchBudgetExceeded(3));
    }

    #[test]
    fn empty_and_single_vertex() {
        let g = Graph::new(1, &[]).unwrap();
        assert_eq!(automorphism_group(&g).unwrap().order, 1);
        assert!(is_arc_transitive(&g).unwrap());
    }

    #[test]
    fn small_odd_family_member_has_no_swapper() {
        // arc-transitive, yet no automorphism exchanges the two orbits of G
        let inst = build_xo(XoParams::new(3, 7, 2).unwrap()).unwrap();
        assert!(is_arc_transitive(&inst.graph).unwrap());
        assert!(!has_orbit_swapper(&inst.graph, &inst.group).unwrap());
        // oracle: enumerate the full group and test every element
        let aut = automorphism_group(&inst.graph).unwrap().group().unwrap();
        assert_eq!(aut.order().unwrap(), 336);
        let og = certify_hat(&inst.graph, &inst.group).unwrap().orientation;
        assert!(aut.elements().unwrap().iter().all(|p| !og.reversed_by(p)));
    }

    #[test]
    fn swapper_found_when_present() {
        let inst = build_xo(XoParams::new(3, 5, 1).unwrap()).unwrap();
        let og = certify_hat(&inst.graph, &inst.group).unwrap().orientation;
        let p = orbit_swapper(&inst.graph, &inst.group).unwrap().unwrap();
        assert!(og.reversed_by(&p));
    }

    fn all_perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_perms(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn graph_from_mask(n: usize, mask: u32) -> Graph {
        let mut e = Vec::new();
        let mut bit = 0;
        for u in 0..n {
            for v in u + 1..n {
                if mask >> bit & 1 == 1 {
                    e.push((u, v));
                }
                bit += 1;
            }
        }
        Graph::new(n, &e).unwrap()
    }

    proptest::proptest! {
        #[test]
        fn aut_order_matches_brute_force(n in 1usize..7, mask in proptest::prelude::any::<u32>()) {
            let g = graph_from_mask(n, mask);
            let brute = all_perms(n)
                .into_iter()
                .filter(|p| g.is_automorphism(&Permutation::from_images(p.clone()).unwrap()))
                .count() as u128;
            proptest::prop_assert_eq!(automorphism_group(&g).unwrap().order, brute);
        }

        #[test]
        fn isomorphism_matches_brute_force(n in 1usize..7, m1 in proptest::prelude::any::<u32>(), m2 in proptest::prelude::any::<u32>()) {
            let (a, b) = (graph_from_mask(n, m1), graph_from_mask(n, m2));
            let brute = all_perms(n)
                .into_iter()
                .any(|p| a.relabeled(&Permutation::from_images(p).unwrap()) == b);
            let found = are_isomorphic(&a, &b).unwrap();
            proptest::prop_assert_eq!(found.is_some(), brute);
            if let Some(w) = found {
                proptest::prop_assert_eq!(a.relabeled(&w), b.clone());
            }
            let same = canonical_form(&a).unwrap().arcs == canonical_form(&b).unwrap().arcs;
            proptest::prop_assert_eq!(same, brute);
        }

        #[test]
        fn aut_order_stable_under_relabeling(seed in 0u64..1000) {
            let inst = build_xo(XoParams::new(3, 9, 2).unwrap()).unwrap();
            let n = inst.graph.order();
            let mut images: Vec<usize> = (0..n).collect();
            let mut x = seed;
            for i in (1..n).rev() {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                images.swap(i, (x >> 33) as usize % (i + 1));
            }
            let h = inst.graph.relabeled(&Permutation::from_images(images).unwrap());
            proptest::prop_assert_eq!(automorphism_group(&h).unwrap().order, 54);
            proptest::prop_assert_eq!(canonical_form(&h).unwrap().arcs, canonical_form(&inst.graph).unwrap().arcs);
        }
    }
}
