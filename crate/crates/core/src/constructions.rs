//! Parametric families of tetravalent graphs together with canonical
//! generating sets for half-arc-transitive groups acting on them.
//!
//! The layered families use vertices `u_i^j` with `i` the layer in `Z_m`
//! and `j` in `Z_r`, flattened to index `i * r + j`.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{transitivity_profile, Graph, GraphError};
use crate::perm::{gcd, GroupByGenerators, PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no parameter set matches: {0}")]
    NoSolution(String),
    #[error("connection set is not inverse-closed")]
    NotInverseClosed,
    #[error("connection set contains 0")]
    ContainsZero,
    #[error("canonical generators do not act as required: {0}")]
    GeneratorsInsufficient(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

fn invalid(msg: impl Into<String>) -> ConstructionError {
    ConstructionError::InvalidParams(msg.into())
}

pub(crate) fn modpow(base: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut b = base % m;
    let mut acc = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Inverse of `q` modulo `m`, if it is a unit.
pub fn mod_inverse(q: u64, m: u64) -> Option<u64> {
    let q = q % m;
    (1..m).find(|&x| q * x % m == 1).or(if m == 1 { Some(0) } else { None })
}

pub fn is_unit(q: u64, m: u64) -> bool {
    m > 1 && gcd(q % m, m) == 1
}

/// `1 + q + ... + q^(m-1)` modulo `r`.
fn geometric_sum(q: u64, m: u64, r: u64) -> u64 {
    (0..m).fold(0, |acc, i| (acc + modpow(q, i, r)) % r)
}

/// Least element of `{0..r-1}` congruent to one of `q, -q, q^-1, -q^-1`.
pub fn min_signed_inverse(q: u64, r: u64) -> u64 {
    let q = q % r;
    let mut cands = vec![q, (r - q) % r];
    if let Some(inv) = mod_inverse(q, r) {
        cands.push(inv);
        cands.push((r - inv) % r);
    }
    cands.into_iter().min().expect("non-empty")
}

/// Parameters of the odd-radius tightly attached family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct XoParams {
    pub m: u64,
    pub r: u64,
    pub q: u64,
}

impl XoParams {
    pub fn new(m: u64, r: u64, q: u64) -> Result<XoParams, ConstructionError> {
        let p = XoParams { m, r, q: if r > 0 { q % r } else { q } };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ConstructionError> {
        let XoParams { m, r, q } = *self;
        if m < 3 {
            return Err(invalid(format!("m = {m} must be at least 3")));
        }
        if r < 3 || r % 2 == 0 {
            return Err(invalid(format!("r = {r} must be odd and at least 3")));
        }
        if !is_unit(q, r) {
            return Err(invalid(format!("q = {q} is not a unit modulo {r}")));
        }
        let qm = modpow(q, m, r);
        if qm != 1 && qm != r - 1 {
            return Err(invalid(format!("q^m = {qm} is not +-1 modulo {r}")));
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        (self.m * self.r) as usize
    }

    /// All valid `q` for fixed `m` and `r`.
    pub fn all_for(m: u64, r: u64) -> Vec<XoParams> {
        (1..r).filter_map(|q| XoParams::new(m, r, q).ok()).collect()
    }
}

impl std::fmt::Display for XoParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Xo({},{};{})", self.m, self.r, self.q)
    }
}

/// Parameters of the even-radius tightly attached family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct XeParams {
    pub m: u64,
    pub r: u64,
    pub q: u64,
    pub t: u64,
}

impl XeParams {
    pub fn new(m: u64, r: u64, q: u64, t: u64) -> Result<XeParams, ConstructionError> {
        let p = if r > 0 { XeParams { m, r, q: q % r, t: t % r } } else { XeParams { m, r, q, t } };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ConstructionError> {
        let XeParams { m, r, q, t } = *self;
        if m < 4 || m % 2 == 1 {
            return Err(invalid(format!("m = {m} must be even and at least 4")));
        }
        if r < 4 {
            return Err(invalid(format!("r = {r} must be at least 4")));
        }
        if !is_unit(q, r) {
            return Err(invalid(format!("q = {q} is not a unit modulo {r}")));
        }
        if modpow(q, m, r) != 1 {
            return Err(invalid(format!("q^m is not 1 modulo {r}")));
        }
        if t * ((q + r - 1) % r) % r != 0 {
            return Err(invalid(format!("t(q - 1) = {} is not 0 modulo {r}", t * (q + r - 1) % r)));
        }
        if (geometric_sum(q, m, r) + 2 * t) % r != 0 {
            return Err(invalid(format!("1 + q + ... + q^(m-1) + 2t is not 0 modulo {r}")));
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        (self.m * self.r) as usize
    }

    /// All valid `(q, t)` for fixed `m` and `r`.
    pub fn all_for(m: u64, r: u64) -> Vec<XeParams> {
        let mut out = Vec::new();
        for q in 1..r {
            for t in 0..r {
                if let Ok(p) = XeParams::new(m, r, q, t) {
                    out.push(p);
                }
            }
        }
        out
    }
}

impl std::fmt::Display for XeParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Xe({},{};{},{})", self.m, self.r, self.q, self.t)
    }
}

/// A constructed graph and a group of automorphisms.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Graph,
    pub group: GroupByGenerators,
}

fn layered_index(r: u64) -> impl Fn(u64, u64) -> usize {
    move |i, j| (i * r + j) as usize
}

/// Checks every generator is an automorphism and that the group is
/// vertex- and edge-transitive.
fn finish(graph: Graph, gens: Vec<Permutation>) -> Result<Instance, ConstructionError> {
    if let Some(i) = gens.iter().position(|g| !graph.is_automorphism(g)) {
        return Err(ConstructionError::GeneratorsInsufficient(format!(
            "generator {i} is not an automorphism"
        )));
    }
    let group = GroupByGenerators::new(graph.order(), gens)?;
    let profile = transitivity_profile(&graph, &group);
    if !profile.vertex_transitive || !profile.edge_transitive {
        return Err(ConstructionError::GeneratorsInsufficient(format!(
            "vertex-transitive: {}, edge-transitive: {}",
            profile.vertex_transitive, profile.edge_transitive
        )));
    }
    Ok(Instance { graph, group })
}

/// The odd-radius family: `u_i^j ~ u_{i+1}^{j +- q^i}`.
///
/// The group is generated by the shift `u_i^j -> u_i^{j+1}`, the layer map
/// `u_i^j -> u_{i+1}^{qj}` and the reflection `u_i^j -> u_i^{-j}`.
pub fn build_xo(p: XoParams) -> Result<Instance, ConstructionError> {
    p.validate()?;
    let XoParams { m, r, q } = p;
    let idx = layered_index(r);
    let mut edges = Vec::with_capacity(2 * p.order());
    for i in 0..m {
        let step = modpow(q, i, r);
        for j in 0..r {
            let u = idx(i, j);
            let ni = (i + 1) % m;
            edges.push((u, idx(ni, (j + step) % r)));
            edges.push((u, idx(ni, (j + r - step) % r)));
        }
    }
    let graph = Graph::new(p.order(), &edges)?;
    let shift = layered_map(m, r, |i, j| (i, (j + 1) % r));
    let layer = layered_map(m, r, |i, j| ((i + 1) % m, q * j % r));
    let reflection = layered_map(m, r, |i, j| (i, (r - j) % r));
    finish(graph, vec![shift, layer, reflection])
}

/// The even-radius family: `u_i^j ~ u_{i+1}^j, u_{i+1}^{j+q^i}` for
/// `i < m - 1`, and `u_{m-1}^j ~ u_0^{j+t}, u_0^{j+q^(m-1)+t}`.
///
/// Generators: the shift, the layer map `u_i^j -> u_{i+1}^{qj}` (with
/// `u_{m-1}^j -> u_0^{qj+t}`) and the reflection `u_i^j -> u_i^{c_i - j}`
/// where `c_i = 1 + q + ... + q^(i-1)`.
pub fn build_xe(p: XeParams) -> Result<Instance, ConstructionError> {
    p.validate()?;
    let XeParams { m, r, q, t } = p;
    let idx = layered_index(r);
    let mut edges = Vec::with_capacity(2 * p.order());
    for i in 0..m {
        let step = modpow(q, i, r);
        for j in 0..r {
            let u = idx(i, j);
            if i + 1 < m {
                edges.push((u, idx(i + 1, j)));
                edges.push((u, idx(i + 1, (j + step) % r)));
            } else {
                edges.push((u, idx(0, (j + t) % r)));
                edges.push((u, idx(0, (j + step + t) % r)));
            }
        }
    }
    let graph = Graph::new(p.order(), &edges)?;
    let shift = layered_map(m, r, |i, j| (i, (j + 1) % r));
    let layer = layered_map(m, r, |i, j| {
        if i + 1 < m {
            (i + 1, q * j % r)
        } else {
            (0, (q * j + t) % r)
        }
    });
    let offsets: Vec<u64> = (0..m).map(|i| geometric_sum(q, i, r)).collect();
    let reflection = layered_map(m, r, |i, j| (i, (offsets[i as usize] + r - j) % r));
    finish(graph, vec![shift, layer, reflection])
}

fn layered_map(m: u64, r: u64, f: impl Fn(u64, u64) -> (u64, u64)) -> Permutation {
    let idx = layered_index(r);
    let mut images = vec![0; (m * r) as usize];
    for i in 0..m {
        for j in 0..r {
            let (a, b) = f(i, j);
            images[idx(i, j)] = idx(a, b);
        }
    }
    Permutation::from_images(images).expect("layered maps are bijections")
}

/// `Circ_n(S)`: `i ~ j` iff `j - i` lies in `S`.
pub fn build_circulant(n: u64, connection: &[u64]) -> Result<Graph, ConstructionError> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    let set: BTreeSet<u64> = connection.iter().map(|&s| s % n).collect();
    if set.contains(&0) {
        return Err(ConstructionError::ContainsZero);
    }
    if set.iter().any(|&s| !set.contains(&((n - s) % n))) {
        return Err(ConstructionError::NotInverseClosed);
    }
    let mut edges = BTreeSet::new();
    for i in 0..n {
        for &s in &set {
            let j = (i + s) % n;
            edges.insert((i.min(j) as usize, i.max(j) as usize));
        }
    }
    let edges: Vec<(usize, usize)> = edges.into_iter().collect();
    Ok(Graph::new(n as usize, &edges)?)
}

/// `Circ_n({+-a : a in jumps})`.
pub fn build_circulant_pm(n: u64, jumps: &[u64]) -> Result<Graph, ConstructionError> {
    let mut s = Vec::new();
    for &a in jumps {
        s.push(a % n);
        s.push((n - a % n) % n);
    }
    build_circulant(n, &s)
}

/// The lexicographic product `C_n[2K_1]` on vertices `(i, e)` flattened to
/// `2i + e`.
pub fn build_wreath(n: u64) -> Result<Graph, ConstructionError> {
    if n < 3 {
        return Err(invalid(format!("wreath graph needs n >= 3, got {n}")));
    }
    let v = |i: u64, e: u64| (2 * (i % n) + e) as usize;
    let mut edges = Vec::new();
    for i in 0..n {
        for e in 0..2 {
            for f in 0..2 {
                edges.push((v(i, e), v(i + 1, f)));
            }
        }
    }
    Ok(Graph::new((2 * n) as usize, &edges)?)
}

/// `C_n[2K_1]` with the group generated by the rotation `(i, e) -> (i+1, e)`
/// and the swap inside fibre 0. The induced orientation sends fibre `i` to
/// fibre `i + 1`, giving alternating 4-cycles.
pub fn build_wreath_instance(n: u64) -> Result<Instance, ConstructionError> {
    let graph = build_wreath(n)?;
    let size = (2 * n) as usize;
    let rotation: Vec<usize> = (0..size).map(|x| (x + 2) % size).collect();
    let mut swap: Vec<usize> = (0..size).collect();
    swap.swap(0, 1);
    finish(graph, vec![Permutation::from_images(rotation)?, Permutation::from_images(swap)?])
}

/// Cayley graph `Cay(H, {x, x^-1, y, y^-1})` of `H = <x, y>` with the group
/// generated by left multiplications and conjugation by `pi`, where `pi`
/// swaps `x` and `y` by conjugation.
///
/// Elements of `H` are sorted by image list; vertex `k` is the `k`-th
/// element. Edges join `h` to `hx` and `hy` (products read left to right).
pub fn build_swap_cayley(
    x: &Permutation,
    pi: &Permutation,
    cap: usize,
) -> Result<Instance, ConstructionError> {
    if x.degree() != pi.degree() {
        return Err(invalid("x and pi have different degrees"));
    }
    let y = x.conjugate_by(pi);
    if y.conjugate_by(pi) != *x {
        return Err(invalid("conjugation by pi does not swap x and y"));
    }
    let (xi, yi) = (x.inverse(), y.inverse());
    let conn = [x, &xi, &y, &yi];
    for a in 0..4 {
        for b in a + 1..4 {
            if conn[a] == conn[b] {
                return Err(invalid("x, x^-1, y, y^-1 must be pairwise distinct"));
            }
        }
    }
    let h = GroupByGenerators::new(x.degree(), vec![x.clone(), y.clone()])?.with_element_cap(cap);
    let elements = h.elements()?.to_vec();
    let index: HashMap<&Permutation, usize> =
        elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let pos = |p: &Permutation| index[p];
    let mut edges = Vec::with_capacity(2 * elements.len());
    for e in &elements {
        edges.push((pos(e), pos(&e.then(x))));
        edges.push((pos(e), pos(&e.then(&y))));
    }
    let graph = Graph::new(elements.len(), &edges)?;
    let left = |g: &Permutation| {
        Permutation::from_images(elements.iter().map(|e| pos(&g.then(e))).collect())
    };
    let conj = Permutation::from_images(elements.iter().map(|e| pos(&e.conjugate_by(pi))).collect())?;
    finish(graph, vec![left(x)?, left(&y)?, conj])
}

/// A named Cayley-type instance.
#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub x: &'static [usize],
    pub pi: &'static [usize],
    /// Radius and attachment number, as computed when the entry was chosen.
    pub radius: usize,
    pub attachment: usize,
    pub order: usize,
}

impl CatalogEntry {
    pub fn build(&self) -> Result<Instance, ConstructionError> {
        let x = Permutation::from_images(self.x.to_vec())?;
        let pi = Permutation::from_images(self.pi.to_vec())?;
        build_swap_cayley(&x, &pi, crate::perm::DEFAULT_ELEMENT_CAP)
    }
}

/// Small Cayley-type instances covering attachment patterns the layered
/// families cannot reach (`a < r`, `a` not dividing `r`, `a = 2r`).
pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry { name: "cay-r3-a1", x: &[5, 2, 3, 1, 0, 4, 7, 8, 6], pi: &[3, 4, 2, 0, 1, 8, 7, 6, 5], radius: 3, attachment: 1, order: 27 },
    CatalogEntry { name: "cay-r4-a1", x: &[0, 3, 4, 8, 5, 7, 1, 6, 2], pi: &[1, 0, 8, 7, 4, 5, 6, 3, 2], radius: 4, attachment: 1, order: 72 },
    CatalogEntry { name: "cay-r3-a2", x: &[5, 0, 4, 2, 3, 1], pi: &[5, 3, 4, 1, 2, 0], radius: 3, attachment: 2, order: 12 },
    CatalogEntry { name: "cay-r5-a2", x: &[0, 1, 4, 2, 3], pi: &[3, 4, 2, 0, 1], radius: 5, attachment: 2, order: 60 },
    CatalogEntry { name: "cay-r4-a2", x: &[3, 0, 5, 7, 2, 6, 4, 1], pi: &[5, 6, 2, 3, 7, 0, 1, 4], radius: 4, attachment: 2, order: 32 },
    CatalogEntry { name: "cay-r6-a3", x: &[1, 3, 4, 0, 5, 2, 6], pi: &[3, 6, 2, 0, 5, 4, 1], radius: 6, attachment: 3, order: 36 },
    CatalogEntry { name: "cay-r10-a5", x: &[0, 7, 3, 1, 8, 4, 2, 6, 5], pi: &[4, 7, 2, 6, 0, 8, 3, 1, 5], radius: 10, attachment: 5, order: 60 },
    CatalogEntry { name: "cay-r6-a4", x: &[3, 4, 2, 6, 1, 0, 8, 5, 7], pi: &[0, 6, 2, 7, 5, 4, 1, 3, 8], radius: 6, attachment: 4, order: 24 },
    CatalogEntry { name: "cay-r15-a10", x: &[3, 1, 4, 8, 7, 0, 5, 2, 6], pi: &[3, 4, 2, 0, 1, 8, 6, 7, 5], radius: 15, attachment: 10, order: 60 },
    CatalogEntry { name: "cay-r9-a6", x: &[8, 3, 6, 0, 5, 1, 7, 2, 4], pi: &[7, 1, 4, 5, 2, 3, 8, 0, 6], radius: 9, attachment: 6, order: 162 },
    CatalogEntry { name: "cay-r4-a4", x: &[1, 0, 7, 5, 6, 2, 4, 3], pi: &[7, 5, 6, 4, 3, 1, 2, 0], radius: 4, attachment: 4, order: 16 },
    CatalogEntry { name: "cay-r5-a5", x: &[2, 0, 7, 1, 5, 6, 4, 3], pi: &[0, 2, 1, 7, 4, 5, 6, 3], radius: 5, attachment: 5, order: 15 },
    CatalogEntry { name: "cay-r4-a8", x: &[3, 7, 5, 6, 2, 1, 4, 0], pi: &[2, 1, 0, 7, 5, 4, 6, 3], radius: 4, attachment: 8, order: 8 },
    CatalogEntry { name: "cay-r6-a12", x: &[4, 6, 0, 7, 2, 5, 1, 3], pi: &[0, 1, 4, 6, 2, 5, 3, 7], radius: 6, attachment: 12, order: 12 },
];

pub fn catalog_entry(name: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.name == name)
}

/// Tightly attached parameter sets with the given order, radius and
/// alternating jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum TightParams {
    Xo(XoParams),
    Xe(XeParams),
}

impl std::fmt::Display for TightParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TightParams::Xo(p) => p.fmt(f),
            TightParams::Xe(p) => p.fmt(f),
        }
    }
}

impl TightParams {
    pub fn build(&self) -> Result<Instance, ConstructionError> {
        match *self {
            TightParams::Xo(p) => build_xo(p),
            TightParams::Xe(p) => build_xe(p),
        }
    }

    pub fn radius(&self) -> u64 {
        match self {
            TightParams::Xo(p) => p.r,
            TightParams::Xe(p) => p.r,
        }
    }

    pub fn q(&self) -> u64 {
        match self {
            TightParams::Xo(p) => p.q,
            TightParams::Xe(p) => p.q,
        }
    }
}

/// Candidate parameter sets for a tightly attached graph of the given
/// order, radius `r` and jump `q`: one set for odd `r`, up to two for even.
pub fn reconstruct_from_invariants(
    order: u64,
    r: u64,
    q: u64,
) -> Result<Vec<TightParams>, ConstructionError> {
    if r < 3 || order % r != 0 {
        return Err(ConstructionError::NoSolution(format!("radius {r} does not divide order {order}")));
    }
    if !is_unit(q, r) {
        return Err(ConstructionError::NoSolution(format!("{q} is not a unit modulo {r}")));
    }
    let m = order / r;
    if r % 2 == 1 {
        return XoParams::new(m, r, q)
            .map(|p| vec![TightParams::Xo(p)])
            .map_err(|e| ConstructionError::NoSolution(e.to_string()));
    }
    let out: Vec<TightParams> =
        (0..r).filter_map(|t| XeParams::new(m, r, q, t).ok()).map(TightParams::Xe).collect();
    if out.is_empty() {
        return Err(ConstructionError::NoSolution(format!(
            "no t solves the even-radius equations for m = {m}, r = {r}, q = {q}"
        )));
    }
    Ok(out)
}

/// Parameter sets that the literature lists as giving isomorphic graphs.
pub fn xo_isomorphic_variants(p: XoParams) -> Vec<XoParams> {
    let r = p.r;
    let inv = mod_inverse(p.q, r).expect("unit");
    [r - p.q, inv, (r - inv) % r]
        .into_iter()
        .filter_map(|q| XoParams::new(p.m, r, q).ok())
        .collect()
}

/// As [`xo_isomorphic_variants`] for the even family; `t` shifts by
/// `q + q^3 + ... + q^(m-1)` for the negated variants.
pub fn xe_isomorphic_variants(p: XeParams) -> Vec<Result<XeParams, ConstructionError>> {
    let XeParams { m, r, q, t } = p;
    let inv = mod_inverse(q, r).expect("unit");
    let odd_sum = (1..m).step_by(2).fold(0, |acc, i| (acc + modpow(q, i, r)) % r);
    vec![
        XeParams::new(m, r, inv, t),
        XeParams::new(m, r, r - q, (t + odd_sum) % r),
        XeParams::new(m, r, (r - inv) % r, (t + odd_sum) % r),
    ]
}

/// Default odd-radius grid: `m` in 3..=6, odd `r` in 5..=15.
pub fn default_xo_grid() -> Vec<XoParams> {
    let mut out = Vec::new();
    for m in 3..=6 {
        for r in (5..=15).step_by(2) {
            out.extend(XoParams::all_for(m, r));
        }
    }
    out
}

/// Default even-radius grid: `m` in {4, 6}, even `r` in 4..=20.
pub fn default_xe_grid() -> Vec<XeParams> {
    let mut out = Vec::new();
    for m in [4, 6] {
        for r in (4..=20).step_by(2) {
            out.extend(XeParams::all_for(m, r));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::certify_hat;

    #[test]
    fn doyle_holt_counts() {
        let inst = build_xo(XoParams::new(3, 9, 2).unwrap()).unwrap();
        assert_eq!(inst.graph.order(), 27);
        assert_eq!(inst.graph.size(), 54);
        assert_eq!(inst.graph.regular_degree(), Some(4));
        assert!(inst.graph.is_connected());
        // stabilizer of order 2
        assert_eq!(inst.group.order().unwrap(), 54);
    }

    #[test]
    fn xo_rejects_non_unit() {
        assert!(matches!(XoParams::new(3, 9, 3), Err(ConstructionError::InvalidParams(_))));
        assert!(matches!(XoParams::new(3, 8, 3), Err(ConstructionError::InvalidParams(_))));
        assert!(matches!(XoParams::new(2, 9, 2), Err(ConstructionError::InvalidParams(_))));
        // 2^3 = 8 = -1 mod 9 but 2^4 = 7
        assert!(XoParams::new(4, 9, 2).is_err());
    }

    #[test]
    fn xe_examples() {
        for t in [0, 10] {
            let inst = build_xe(XeParams::new(4, 20, 3, t).unwrap()).unwrap();
            assert_eq!(inst.graph.order(), 80);
            assert!(certify_hat(&inst.graph, &inst.group).is_ok());
        }
        assert!(XeParams::new(4, 20, 2, 0).is_err());
        assert!(XeParams::new(4, 20, 3, 5).is_err());
    }

    #[test]
    fn xo_6_13_is_hat() {
        for q in [2, 3] {
            let inst = build_xo(XoParams::new(6, 13, q).unwrap()).unwrap();
            assert_eq!(inst.graph.order(), 78);
            assert!(certify_hat(&inst.graph, &inst.group).is_ok());
        }
    }

    #[test]
    fn circulants() {
        let k5 = build_circulant_pm(5, &[1, 2]).unwrap();
        assert_eq!(k5.size(), 10);
        assert_eq!(k5.regular_degree(), Some(4));
        let c13 = build_circulant_pm(13, &[1, 3]).unwrap();
        assert_eq!(c13.order(), 13);
        assert_eq!(c13.regular_degree(), Some(4));
        let k4 = build_circulant(4, &[1, 3, 2]).unwrap();
        assert_eq!(k4.size(), 6);
        assert_eq!(build_circulant(5, &[1]).unwrap_err(), ConstructionError::NotInverseClosed);
        assert_eq!(build_circulant(5, &[0, 1, 4]).unwrap_err(), ConstructionError::ContainsZero);
    }

    #[test]
    fn wreath_graphs() {
        let w3 = build_wreath(3).unwrap();
        assert_eq!(w3.order(), 6);
        assert_eq!(w3.regular_degree(), Some(4));
        // octahedron: every vertex misses exactly its fibre partner
        for v in 0..6 {
            assert!(!w3.has_edge(v, v ^ 1));
        }
        let w4 = build_wreath(4).unwrap();
        assert_eq!((w4.order(), w4.size()), (8, 16));
        assert!(build_wreath(2).is_err());
        let inst = build_wreath_instance(5).unwrap();
        assert_eq!(inst.group.order().unwrap(), 5 * 32);
    }

    #[test]
    fn reconstruction() {
        assert_eq!(
            reconstruct_from_invariants(27, 9, 2).unwrap(),
            vec![TightParams::Xo(XoParams { m: 3, r: 9, q: 2 })]
        );
        assert_eq!(
            reconstruct_from_invariants(80, 20, 3).unwrap(),
            vec![
                TightParams::Xe(XeParams { m: 4, r: 20, q: 3, t: 0 }),
                TightParams::Xe(XeParams { m: 4, r: 20, q: 3, t: 10 })
            ]
        );
        assert!(matches!(
            reconstruct_from_invariants(27, 9, 3),
            Err(ConstructionError::NoSolution(_))
        ));
    }

    #[test]
    fn signed_inverse_minimum() {
        // 2 mod 9: {2, 7, 5, 4}
        assert_eq!(min_signed_inverse(2, 9), 2);
        assert_eq!(min_signed_inverse(3, 20), 3);
        // 7 mod 20: {7, 13, 3, 17}
        assert_eq!(min_signed_inverse(7, 20), 3);
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(default_xo_grid().len(), 100);
        assert_eq!(default_xe_grid().len(), 124);
    }

    #[test]
    fn catalog_builds_with_recorded_orders() {
        for e in CATALOG {
            let inst = e.build().unwrap();
            assert_eq!(inst.graph.order(), e.order, "{}", e.name);
            assert!(certify_hat(&inst.graph, &inst.group).is_ok(), "{}", e.name);
            assert_eq!(inst.group.order().unwrap(), 2 * e.order, "{}", e.name);
        }
    }
}
