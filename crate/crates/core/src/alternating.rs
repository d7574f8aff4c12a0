//! Alternating cycles of an oriented tetravalent graph and the parameters
//! read off from them: radius, attachment number, attachment sets and the
//! jump values `q_t`, `q_h`.
//!
//! Cycles are stored as vertex sequences normalized to start at their least
//! vertex and to continue towards the lesser of its two cycle neighbours.
//! Position arithmetic on a cycle of length `2r` is taken modulo `2r`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{min_signed_inverse, ConstructionError, TightParams};
use crate::graph::{certify_hat, Graph, GraphError, OrientedGraph};
use crate::perm::{gcd, GroupByGenerators, PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AltError {
    #[error("alternating cycles have unequal lengths {0:?}")]
    UnequalCycleLengths(Vec<usize>),
    #[error("alternating cycle through vertex {0} is not simple")]
    NonSimpleCycle(usize),
    #[error("cycle intersections have unequal sizes {0:?}")]
    UnequalAttachment(Vec<usize>),
    #[error("attachment set {0} is not evenly spaced on its cycles")]
    IrregularAttachment(usize),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("construction is not well defined: {0}")]
    WellDefinednessFailure(String),
    #[error("permutation does not fix cycle {0} setwise")]
    NotCyclePreserving(usize),
    #[error("only {0} alternating cycles")]
    TooFewCycles(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Where a vertex sits on one of its two alternating cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Incidence {
    pub cycle: usize,
    pub position: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttachmentKind {
    /// `a = 2r`: two cycles, each through every vertex.
    Spanning,
    /// `a = r`.
    Tight,
    /// `a = 1`.
    Loose,
    /// `a = 2`.
    Antipodal,
    Generic,
}

/// Alternating-cycle data of an oriented tetravalent graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AltStructure {
    pub n: usize,
    pub cycles: Vec<Vec<usize>>,
    pub radius: usize,
    pub attachment: usize,
    pub ell: usize,
    /// Sorted vertex sets, ordered by least element.
    pub attachment_sets: Vec<Vec<usize>>,
    /// The unordered cycle pair `(lo, hi)` whose intersection each set is.
    pub attachment_pairs: Vec<(usize, usize)>,
    /// Attachment set index of each vertex.
    pub set_of: Vec<usize>,
    /// Cycle on which each vertex is the tail of both incident cycle arcs.
    pub tail_on: Vec<Incidence>,
    /// Cycle on which each vertex is the head of both incident cycle arcs.
    pub head_on: Vec<Incidence>,
    pub q_t: usize,
    pub q_h: usize,
    /// `{q_t, q_h}`, sorted.
    pub q_set: Vec<usize>,
    pub jum: usize,
    /// Whether `q_t` and `q_h` agreed at every inspected vertex.
    pub jumps_uniform: bool,
    pub jumps_checked: usize,
}

impl AltStructure {
    pub fn cycle_len(&self) -> usize {
        2 * self.radius
    }

    pub fn kind(&self) -> AttachmentKind {
        let (a, r) = (self.attachment, self.radius);
        if a == 2 * r {
            AttachmentKind::Spanning
        } else if a == r {
            AttachmentKind::Tight
        } else if a == 1 {
            AttachmentKind::Loose
        } else if a == 2 {
            AttachmentKind::Antipodal
        } else {
            AttachmentKind::Generic
        }
    }

    pub fn a_divides_r(&self) -> bool {
        self.radius % self.attachment == 0
    }

    /// Vertex at `position + offset` on a cycle.
    pub fn at(&self, cycle: usize, position: usize, offset: i64) -> usize {
        let len = self.cycle_len() as i64;
        let c = &self.cycles[cycle];
        c[((position as i64 + offset).rem_euclid(len)) as usize]
    }

    /// Position of `v` on `cycle`, if it lies there.
    pub fn position_on(&self, v: usize, cycle: usize) -> Option<usize> {
        [self.tail_on[v], self.head_on[v]].iter().find(|i| i.cycle == cycle).map(|i| i.position)
    }

    /// Whether the vertex at `position` of `cycle` is a tail there.
    pub fn is_tail_position(&self, cycle: usize, position: usize) -> bool {
        let v = self.cycles[cycle][position];
        self.tail_on[v].cycle == cycle && self.tail_on[v].position == position
    }

    /// The cycle containing the edge `{u, v}`.
    pub fn cycle_of_edge(&self, u: usize, v: usize) -> Option<usize> {
        let len = self.cycle_len();
        [self.tail_on[u], self.head_on[u]].into_iter().find_map(|inc| {
            let pv = self.position_on(v, inc.cycle)?;
            let d = (pv + len - inc.position) % len;
            (d == 1 || d == len - 1).then_some(inc.cycle)
        })
    }

    /// Image of `cycle` under an orientation-compatible automorphism, read
    /// off from the image of its first edge.
    pub fn cycle_image(&self, g: &Permutation, cycle: usize) -> Option<usize> {
        let c = &self.cycles[cycle];
        self.cycle_of_edge(g.apply(c[0]), g.apply(c[1]))
    }

    /// Pairs of cycles that intersect, each as `(lo, hi)`, sorted.
    pub fn intersecting_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = self.attachment_pairs.clone();
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }

    pub fn report(&self) -> AltReport {
        let kind = self.kind();
        AltReport {
            n: self.n,
            r: self.radius,
            a: self.attachment,
            ell: self.ell,
            q: self.q_set.clone(),
            jum: self.jum,
            kind,
            tightly_attached: self.attachment == self.radius,
            loosely_attached: self.attachment == 1,
            antipodally_attached: self.attachment == 2,
            cycle_count: self.cycles.len(),
        }
    }
}

/// Summary of an [`AltStructure`] for JSON output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AltReport {
    pub n: usize,
    pub r: usize,
    pub a: usize,
    pub ell: usize,
    pub q: Vec<usize>,
    pub jum: usize,
    pub kind: AttachmentKind,
    pub tightly_attached: bool,
    pub loosely_attached: bool,
    pub antipodally_attached: bool,
    pub cycle_count: usize,
}

/// All alternating cycles, normalized. Every edge lies on exactly one.
pub fn alternating_cycles(og: &OrientedGraph) -> Vec<Vec<usize>> {
    let g = og.graph();
    let mut used = std::collections::HashSet::new();
    let mut cycles = Vec::new();
    for &(u0, v0) in g.edges() {
        if used.contains(&(u0, v0)) {
            continue;
        }
        // walk from the tail of the edge towards its head
        let (tail, head) = if og.is_arc(u0, v0) { (u0, v0) } else { (v0, u0) };
        let mut seq = vec![tail];
        let (mut prev, mut cur) = (tail, head);
        loop {
            used.insert((prev.min(cur), prev.max(cur)));
            // at a head take the other in-arc, at a tail the other out-arc
            let pair = if og.is_arc(prev, cur) { og.in_neighbors(cur) } else { og.out_neighbors(cur) };
            let next = if pair[0] == prev { pair[1] } else { pair[0] };
            if cur == tail && next == head {
                break;
            }
            seq.push(cur);
            prev = cur;
            cur = next;
        }
        cycles.push(normalize_cycle(seq));
    }
    cycles.sort();
    cycles
}

fn normalize_cycle(seq: Vec<usize>) -> Vec<usize> {
    let len = seq.len();
    let (start, _) = seq.iter().enumerate().min_by_key(|&(_, &v)| v).expect("non-empty cycle");
    let fwd = seq[(start + 1) % len];
    let back = seq[(start + len - 1) % len];
    if fwd <= back {
        (0..len).map(|k| seq[(start + k) % len]).collect()
    } else {
        (0..len).map(|k| seq[(start + len - k) % len]).collect()
    }
}

fn min_pair(k: usize, a: usize) -> usize {
    k.min(a - k)
}

/// Full alternating-cycle analysis.
pub fn analyze(og: &OrientedGraph) -> Result<AltStructure, AltError> {
    let n = og.order();
    let cycles = alternating_cycles(og);
    let mut lengths: Vec<usize> = cycles.iter().map(|c| c.len()).collect();
    lengths.sort_unstable();
    lengths.dedup();
    if lengths.len() != 1 {
        return Err(AltError::UnequalCycleLengths(lengths));
    }
    let len = lengths[0];
    let radius = len / 2;

    let none = Incidence { cycle: usize::MAX, position: 0 };
    let mut tail_on = vec![none; n];
    let mut head_on = vec![none; n];
    for (ci, c) in cycles.iter().enumerate() {
        let first_is_tail = og.is_arc(c[0], c[1]);
        for (p, &v) in c.iter().enumerate() {
            let slot = if (p % 2 == 0) == first_is_tail { &mut tail_on[v] } else { &mut head_on[v] };
            if slot.cycle != usize::MAX {
                return Err(AltError::NonSimpleCycle(v));
            }
            *slot = Incidence { cycle: ci, position: p };
        }
    }
    if let Some(v) = (0..n).find(|&v| tail_on[v].cycle == head_on[v].cycle) {
        return Err(AltError::NonSimpleCycle(v));
    }

    let mut by_pair: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        let (x, y) = (tail_on[v].cycle, head_on[v].cycle);
        by_pair.entry((x.min(y), x.max(y))).or_default().push(v);
    }
    let mut groups: Vec<((usize, usize), Vec<usize>)> = by_pair.into_iter().collect();
    groups.sort_by_key(|(_, vs)| vs[0]);
    let mut sizes: Vec<usize> = groups.iter().map(|(_, vs)| vs.len()).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() != 1 || len % sizes[0] != 0 {
        return Err(AltError::UnequalAttachment(sizes));
    }
    let a = sizes[0];
    let ell = len / a;
    let mut set_of = vec![0; n];
    for (si, (_, vs)) in groups.iter().enumerate() {
        for &v in vs {
            set_of[v] = si;
        }
        for ci in [groups[si].0 .0, groups[si].0 .1] {
            let mut pos: Vec<usize> = vs
                .iter()
                .map(|&v| if tail_on[v].cycle == ci { tail_on[v].position } else { head_on[v].position })
                .collect();
            pos.sort_unstable();
            if pos.iter().enumerate().any(|(i, &p)| p != pos[0] + i * ell) {
                return Err(AltError::IrregularAttachment(si));
            }
        }
    }

    let mut s = AltStructure {
        n,
        cycles,
        radius,
        attachment: a,
        ell,
        attachment_pairs: groups.iter().map(|(p, _)| *p).collect(),
        attachment_sets: groups.into_iter().map(|(_, vs)| vs).collect(),
        set_of,
        tail_on,
        head_on,
        q_t: 0,
        q_h: 0,
        q_set: Vec::new(),
        jum: 0,
        jumps_uniform: true,
        jumps_checked: 0,
    };
    let sample: Vec<usize> = if n <= 200 {
        (0..n).collect()
    } else {
        let mut v = vec![0, n / 4, n / 2, 3 * n / 4];
        v.dedup();
        v
    };
    let (qt, qh) = jump_pair(&s, 0);
    s.jumps_uniform = sample.iter().all(|&v| jump_pair(&s, v) == (qt, qh));
    s.jumps_checked = sample.len();
    s.q_t = qt;
    s.q_h = qh;
    let mut q = vec![qt, qh];
    q.sort_unstable();
    q.dedup();
    s.jum = q[0];
    s.q_set = q;
    Ok(s)
}

/// `(q_t(v), q_h(v))` by index arithmetic on the two cycles through `v`.
pub fn jump_pair(s: &AltStructure, v: usize) -> (usize, usize) {
    let a = s.attachment;
    if a == 1 {
        return (0, 0);
    }
    let ell = s.ell as i64;
    let (t, h) = (s.tail_on[v], s.head_on[v]);
    let find = |target: usize, on: Incidence| {
        (0..a)
            .find(|&k| s.at(on.cycle, on.position, k as i64 * ell) == target)
            .expect("attachment set is evenly spaced on both cycles")
    };
    let u_ell = s.at(t.cycle, t.position, ell);
    let v_ell = s.at(h.cycle, h.position, ell);
    (min_pair(find(u_ell, h), a), min_pair(find(v_ell, t), a))
}

/// `(q_t(v), q_h(v))` for every vertex.
pub fn all_jump_pairs(s: &AltStructure) -> Vec<(usize, usize)> {
    (0..s.n).map(|v| jump_pair(s, v)).collect()
}

/// Builds the graph with its canonical group, analyzes it and checks that
/// the jump equals the least of `+-q, +-q^-1` modulo `r`, and that
/// attachment equals radius equals `r`.
pub fn verify_gta_jump(params: &TightParams) -> Result<bool, AltError> {
    let inst = params.build()?;
    let cert = certify_hat(&inst.graph, &inst.group)?;
    let s = analyze(&cert.orientation)?;
    let r = params.radius() as usize;
    Ok(s.radius == r
        && s.attachment == r
        && s.jum as u64 == min_signed_inverse(params.q(), params.radius()))
}

/// `Circ_a({+-1, +-jum})`. For `a = 1` a single vertex, for `a = 2` one edge.
pub fn associated_circulant(s: &AltStructure) -> Graph {
    match s.attachment {
        1 => Graph::new(1, &[]).expect("single vertex"),
        a => crate::constructions::build_circulant_pm(a as u64, &[1, s.jum as u64])
            .expect("jumps are nonzero modulo a"),
    }
}

/// Outcome of the index check for the multiplication rule relating the two
/// cycles through each vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultCheck {
    pub holds: bool,
    /// `(vertex, i)` at which the first failure occurred.
    pub witness: Option<(usize, usize)>,
}

/// For every vertex `v` with tail cycle `C = (u_k)` and head cycle
/// `C' = (v_k)` indexed from `v` with `u_ell = v_{q_t ell}`, checks
/// `u_{i ell} = v_{i q_t ell}` and `v_{i ell} = u_{+-i q_h ell}` for all
/// `i < a`, the sign being fixed per vertex.
pub fn check_mult_lemma(s: &AltStructure) -> MultCheck {
    let a = s.attachment;
    let ell = s.ell as i64;
    if a <= 1 {
        return MultCheck { holds: true, witness: None };
    }
    for v in 0..s.n {
        let (qt, qh) = jump_pair(s, v);
        let (t, h) = (s.tail_on[v], s.head_on[v]);
        let u = |k: i64| s.at(t.cycle, t.position, k);
        let dir: i64 = if s.at(h.cycle, h.position, qt as i64 * ell) == u(ell) { 1 } else { -1 };
        let w = |k: i64| s.at(h.cycle, h.position, dir * k);
        for i in 0..a as i64 {
            if u(i * ell) != w(i * qt as i64 * ell) {
                return MultCheck { holds: false, witness: Some((v, i as usize)) };
            }
        }
        let sign: i64 = if w(ell) == u(qh as i64 * ell) { 1 } else { -1 };
        for i in 0..a as i64 {
            if w(i * ell) != u(sign * i * qh as i64 * ell) {
                return MultCheck { holds: false, witness: Some((v, i as usize)) };
            }
        }
    }
    MultCheck { holds: true, witness: None }
}

/// Result of trying to build the antipodal map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TauOutcome {
    Automorphism(Permutation),
    NotWellDefined(usize),
    NotAutomorphism(Permutation),
}

impl TauOutcome {
    pub fn automorphism(self) -> Option<Permutation> {
        match self {
            TauOutcome::Automorphism(p) => Some(p),
            _ => None,
        }
    }
}

/// The map sending each vertex to its antipode on both of its cycles.
pub fn antipodal_tau(og: &OrientedGraph, s: &AltStructure) -> Result<TauOutcome, AltError> {
    if s.attachment != 2 {
        return Err(AltError::PreconditionFailed(format!("attachment is {}, not 2", s.attachment)));
    }
    if s.radius % 2 == 1 {
        return Err(AltError::PreconditionFailed(format!("radius {} is odd", s.radius)));
    }
    let r = s.radius as i64;
    let mut images = Vec::with_capacity(s.n);
    for v in 0..s.n {
        let (t, h) = (s.tail_on[v], s.head_on[v]);
        let x = s.at(t.cycle, t.position, r);
        if x != s.at(h.cycle, h.position, r) {
            return Ok(TauOutcome::NotWellDefined(v));
        }
        images.push(x);
    }
    let tau = Permutation::from_images(images)
        .map_err(|e| AltError::WellDefinednessFailure(e.to_string()))?;
    if og.graph().is_automorphism(&tau) {
        Ok(TauOutcome::Automorphism(tau))
    } else {
        Ok(TauOutcome::NotAutomorphism(tau))
    }
}

/// Action of an automorphism on one cycle it fixes setwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CycleAction {
    /// Shift of every position by the given amount, normalized into
    /// `(-r, r]`.
    Rotation(i64),
    Reflection,
}

impl CycleAction {
    /// The step as a multiple of `ell`, up to sign, in `0..=a/2`.
    pub fn ell_multiple(&self, s: &AltStructure) -> Option<usize> {
        match *self {
            CycleAction::Rotation(k) if k.unsigned_abs() as usize % s.ell == 0 => {
                Some(k.unsigned_abs() as usize / s.ell)
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationProfile {
    pub actions: Vec<CycleAction>,
    /// For `a` not dividing `r`: whether every intersecting pair of cycles
    /// sees steps `k ell` and `q k ell` (up to sign). `None` otherwise.
    pub two_class: Option<bool>,
}

/// Per-cycle action of `gamma`, which must fix every cycle setwise.
pub fn rotation_profile(gamma: &Permutation, s: &AltStructure) -> Result<RotationProfile, AltError> {
    let len = s.cycle_len();
    let r = s.radius as i64;
    let mut actions = Vec::with_capacity(s.cycles.len());
    for (ci, c) in s.cycles.iter().enumerate() {
        let k = s.position_on(gamma.apply(c[0]), ci).ok_or(AltError::NotCyclePreserving(ci))?;
        let rot = (0..len).all(|p| gamma.apply(c[p]) == c[(p + k) % len]);
        let refl = (0..len).all(|p| gamma.apply(c[p]) == c[(k + len - p) % len]);
        let action = if rot {
            let k = k as i64;
            CycleAction::Rotation(if k > r { k - 2 * r } else { k })
        } else if refl {
            CycleAction::Reflection
        } else {
            return Err(AltError::NotCyclePreserving(ci));
        };
        actions.push(action);
    }
    let two_class = if s.a_divides_r() {
        None
    } else {
        let a = s.attachment;
        let q = s.jum;
        let mults: Vec<Option<usize>> = actions.iter().map(|x| x.ell_multiple(s)).collect();
        let related = |x: usize, y: usize| {
            let qx = q * x % a;
            y % a == qx || y % a == (a - qx) % a
        };
        Some(s.intersecting_pairs().iter().all(|&(c1, c2)| match (mults[c1], mults[c2]) {
            (Some(k1), Some(k2)) => related(k1, k2) || related(k2, k1),
            _ => false,
        }))
    };
    Ok(RotationProfile { actions, two_class })
}

/// Element of `group` shifting `cycle` by `2 ell` positions (mapping its
/// first two vertices forward), if any.
pub fn double_step_element(
    group: &GroupByGenerators,
    s: &AltStructure,
    cycle: usize,
) -> Result<Option<Permutation>, AltError> {
    let c = &s.cycles[cycle];
    let len = s.cycle_len();
    let (x0, x1) = (c[(2 * s.ell) % len], c[(2 * s.ell + 1) % len]);
    Ok(group.elements()?.iter().find(|g| g.apply(c[0]) == x0 && g.apply(c[1]) == x1).cloned())
}

/// Builds a square root `rho` of `gamma` that fixes every alternating cycle
/// and rotates each by `ell` or `q ell` positions, then verifies it.
pub fn build_rho(
    og: &OrientedGraph,
    s: &AltStructure,
    group: &GroupByGenerators,
    gamma: &Permutation,
) -> Result<Permutation, AltError> {
    let (a, r, ell) = (s.attachment, s.radius, s.ell);
    let pre = |m: String| Err(AltError::PreconditionFailed(m));
    if a <= 4 {
        return pre(format!("4 < a fails: a = {a}"));
    }
    if a >= r {
        return pre(format!("a < r fails: a = {a}, r = {r}"));
    }
    if r % a == 0 {
        return pre(format!("a does not divide r fails: a = {a}, r = {r}"));
    }
    if s.q_set.len() != 1 {
        return pre(format!("jump set {:?} has more than one element", s.q_set));
    }
    let q = s.jum;
    let alt = crate::quotients::alt_graph(s)?;
    let bip = alt.bipartition();
    if q != 1 && bip.is_none() {
        return pre(format!("jump is {q} and the alternating-cycle graph is not bipartite"));
    }
    if !group.contains(gamma)? {
        return pre("gamma is not in the group".into());
    }
    let profile = rotation_profile(gamma, s).map_err(|e| match e {
        AltError::NotCyclePreserving(c) => {
            AltError::PreconditionFailed(format!("gamma does not fix cycle {c}"))
        }
        e => e,
    })?;
    let len = 2 * r as i64;
    let (ell_i, q_ell) = (ell as i64, (q * ell) as i64);
    let is_step = |x: &CycleAction, k: i64| matches!(*x, CycleAction::Rotation(st) if (st - k).rem_euclid(len) == 0 || (st + k).rem_euclid(len) == 0);
    if !profile.actions.iter().any(|x| is_step(x, 2 * ell_i)) {
        return pre("gamma is not a 2 ell rotation on any cycle".into());
    }

    let in_i: Vec<bool> = if q == 1 {
        vec![true; s.cycles.len()]
    } else if q + 1 == a / 2 && a % 2 == 0 {
        let colours = bip.expect("bipartite");
        (0..s.cycles.len()).map(|c| colours[c] == colours[0]).collect()
    } else {
        profile.actions.iter().map(|x| is_step(x, 2 * ell_i)).collect()
    };

    // per cycle: the signed shift rho applies to positions
    let mut shift = Vec::with_capacity(s.cycles.len());
    for (ci, action) in profile.actions.iter().enumerate() {
        let (half, full) = if in_i[ci] { (ell_i, 2 * ell_i) } else { (q_ell, 2 * q_ell) };
        let st = match *action {
            CycleAction::Rotation(st) => st,
            CycleAction::Reflection => {
                return Err(AltError::WellDefinednessFailure(format!("gamma reflects cycle {ci}")))
            }
        };
        let sh = if (st - full).rem_euclid(len) == 0 {
            half
        } else if (st + full).rem_euclid(len) == 0 {
            -half
        } else {
            return Err(AltError::WellDefinednessFailure(format!(
                "gamma shifts cycle {ci} by {st}, expected +-{full}"
            )));
        };
        shift.push(sh);
    }

    let mut images = Vec::with_capacity(s.n);
    for v in 0..s.n {
        let (t, h) = (s.tail_on[v], s.head_on[v]);
        let x = s.at(t.cycle, t.position, shift[t.cycle]);
        let y = s.at(h.cycle, h.position, shift[h.cycle]);
        if x != y {
            return Err(AltError::WellDefinednessFailure(format!(
                "vertex {v} maps to {x} along one cycle and {y} along the other"
            )));
        }
        images.push(x);
    }
    let rho = Permutation::from_images(images)
        .map_err(|e| AltError::WellDefinednessFailure(e.to_string()))?;
    let fail = |m: &str| Err(AltError::WellDefinednessFailure(m.into()));
    if !og.graph().is_automorphism(&rho) {
        return fail("rho is not an automorphism");
    }
    if rho.then(&rho) != *gamma {
        return fail("rho squared is not gamma");
    }
    if !og.reversed_by(&rho) {
        return fail("rho does not reverse the orientation");
    }
    Ok(rho)
}

/// Whether `a` and `q_t`, `q_h` satisfy the coprimality and inverse
/// relations (vacuous for `a < 2`).
pub fn jumps_are_inverse(s: &AltStructure) -> bool {
    let a = s.attachment;
    if a < 2 {
        return true;
    }
    let prod = s.q_t * s.q_h % a;
    gcd(a as u64, s.q_t as u64) == 1
        && gcd(a as u64, s.q_h as u64) == 1
        && (prod == 1 % a || prod == a - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_wreath_instance, build_xe, build_xo, XeParams, XoParams};
    use crate::graph::certify_hat;

    fn oriented(inst: &crate::constructions::Instance) -> OrientedGraph {
        certify_hat(&inst.graph, &inst.group).unwrap().orientation
    }

    #[test]
    fn doyle_holt() {
        let og = oriented(&build_xo(XoParams::new(3, 9, 2).unwrap()).unwrap());
        let cycles = alternating_cycles(&og);
        assert_eq!(cycles.len(), 3);
        assert!(cycles.iter().all(|c| c.len() == 18));
        let s = analyze(&og).unwrap();
        assert_eq!((s.radius, s.attachment, s.ell), (9, 9, 2));
        assert_eq!(s.q_set, vec![2, 4]);
        assert_eq!(s.jum, 2);
        assert!(s.jumps_uniform);
        assert_eq!(s.kind(), AttachmentKind::Tight);
        assert!(check_mult_lemma(&s).holds);
        assert!(jumps_are_inverse(&s));
        // attachment sets are the layers
        for (i, set) in s.attachment_sets.iter().enumerate() {
            assert_eq!(*set, (9 * i..9 * i + 9).collect::<Vec<_>>());
        }
    }

    #[test]
    fn reversal_swaps_jumps() {
        let og = oriented(&build_xo(XoParams::new(3, 9, 2).unwrap()).unwrap());
        let s = analyze(&og).unwrap();
        let rs = analyze(&og.reversed()).unwrap();
        assert_eq!((s.q_t, s.q_h), (rs.q_h, rs.q_t));
        assert_eq!(s.q_set, rs.q_set);
    }

    #[test]
    fn every_edge_on_one_cycle() {
        let og = oriented(&build_xe(XeParams::new(4, 20, 3, 0).unwrap()).unwrap());
        let cycles = alternating_cycles(&og);
        assert_eq!(cycles.len(), 4);
        let mut edges: Vec<(usize, usize)> = cycles
            .iter()
            .flat_map(|c| (0..c.len()).map(move |k| {
                let (x, y) = (c[k], c[(k + 1) % c.len()]);
                (x.min(y), x.max(y))
            }))
            .collect();
        edges.sort_unstable();
        assert_eq!(edges, og.graph().edges().to_vec());
    }

    #[test]
    fn wreath_has_four_cycles() {
        let inst = build_wreath_instance(5).unwrap();
        let og = oriented(&inst);
        let s = analyze(&og).unwrap();
        assert_eq!(s.cycles.len(), 5);
        assert_eq!((s.radius, s.attachment), (2, 2));
        assert_eq!(s.q_set, vec![1]);
        // fibres are the attachment sets
        assert!(s.attachment_sets.iter().all(|b| b[1] == b[0] + 1 && b[0] % 2 == 0));
    }

    #[test]
    fn circulants_of_structures() {
        let og = oriented(&build_xo(XoParams::new(3, 13, 3).unwrap()).unwrap());
        let s = analyze(&og).unwrap();
        assert_eq!((s.attachment, s.jum), (13, 3));
        let c = associated_circulant(&s);
        assert_eq!(c, crate::constructions::build_circulant_pm(13, &[1, 3]).unwrap());
    }

    #[test]
    fn tau_preconditions() {
        let og = oriented(&build_xo(XoParams::new(3, 9, 2).unwrap()).unwrap());
        let s = analyze(&og).unwrap();
        assert!(matches!(antipodal_tau(&og, &s), Err(AltError::PreconditionFailed(_))));
    }

    #[test]
    fn profile_of_shift_and_reflection() {
        let inst = build_xo(XoParams::new(3, 9, 2).unwrap()).unwrap();
        let og = oriented(&inst);
        let s = analyze(&og).unwrap();
        let id = Permutation::identity(27);
        let p = rotation_profile(&id, &s).unwrap();
        assert!(p.actions.iter().all(|&x| x == CycleAction::Rotation(0)));
        let shift = &inst.group.generators()[0];
        let p = rotation_profile(shift, &s).unwrap();
        // on the cycle through layers i, i+1 the vertex u_i^j sits at even
        // position 2t with j = 2 q^i t, so j -> j+1 moves t by (2 q^i)^-1 mod r
        let mut got: Vec<i64> = p
            .actions
            .iter()
            .map(|x| match x {
                CycleAction::Rotation(k) => k.abs(),
                CycleAction::Reflection => -1,
            })
            .collect();
        got.sort_unstable();
        let mut want: Vec<i64> = (0..3u32)
            .map(|i| {
                let t = (1..9).find(|t| 2 * 2i64.pow(i) * t % 9 == 1).unwrap();
                let k = 2 * t;
                k.min(18 - k)
            })
            .collect();
        want.sort_unstable();
        assert_eq!(got, want);
        assert_eq!(want, vec![2, 4, 8]);
        let refl = &inst.group.generators()[2];
        let p = rotation_profile(refl, &s).unwrap();
        assert!(p.actions.iter().all(|&x| x == CycleAction::Reflection));
        let layer = &inst.group.generators()[1];
        assert!(matches!(rotation_profile(layer, &s), Err(AltError::NotCyclePreserving(_))));
    }

    #[test]
    fn rho_rejects_small_attachment() {
        let inst = build_xo(XoParams::new(3, 9, 2).unwrap()).unwrap();
        let og = oriented(&inst);
        let s = analyze(&og).unwrap();
        let id = Permutation::identity(27);
        let err = build_rho(&og, &s, &inst.group, &id).unwrap_err();
        assert!(matches!(err, AltError::PreconditionFailed(m) if m.contains("a < r")));
    }
}
