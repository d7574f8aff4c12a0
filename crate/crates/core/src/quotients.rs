//! Block systems built from attachment sets, quotient graphs, the graph of
//! alternating cycles, action kernels and the induced actions on blocks.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alternating::{analyze, antipodal_tau, AltError, AltStructure, TauOutcome};
use crate::graph::{certify_hat, transitivity_profile, Graph, GraphError, TransitivityProfile};
use crate::perm::{
    setwise_kernel, subgroup_from_elements, GroupByGenerators, PermError, Permutation, StructureTag,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("generator {0} does not map blocks to blocks")]
    BlocksNotInvariant(usize),
    #[error("attachment number equals the cycle length; there is no proper block system")]
    Spanning,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("kernel inconsistent with the expected structure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Alt(#[from] AltError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    AttachmentSets,
    ConstructionB,
}

/// A partition of the vertex set into equal-sized blocks, ordered by least
/// element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSystem {
    pub blocks: Vec<Vec<usize>>,
    pub kind: BlockKind,
    /// Half the position step between consecutive members of a block along
    /// an alternating cycle.
    pub s: usize,
    #[serde(skip)]
    block_of: Vec<usize>,
}

impl BlockSystem {
    pub fn new(mut blocks: Vec<Vec<usize>>, kind: BlockKind, s: usize) -> BlockSystem {
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        blocks.sort();
        let n = blocks.iter().map(|b| b.len()).sum();
        let mut block_of = vec![usize::MAX; n];
        for (i, b) in blocks.iter().enumerate() {
            for &v in b {
                block_of[v] = i;
            }
        }
        BlockSystem { blocks, kind, s, block_of }
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_size(&self) -> usize {
        self.blocks.first().map_or(0, |b| b.len())
    }

    /// Whether the blocks are exactly the given sets, in any order.
    pub fn same_partition(&self, sets: &[Vec<usize>]) -> bool {
        let mut other: Vec<Vec<usize>> = sets
            .iter()
            .map(|s| {
                let mut s = s.clone();
                s.sort_unstable();
                s
            })
            .collect();
        other.sort();
        other == self.blocks
    }
}

/// The attachment sets as a block system.
pub fn attachment_partition(s: &AltStructure) -> BlockSystem {
    BlockSystem::new(s.attachment_sets.clone(), BlockKind::AttachmentSets, s.ell)
}

/// Blocks `{u_{i + 2sj}}` along the alternating cycles: the attachment sets
/// when `ell` is even, otherwise each attachment set split into the
/// vertices that are tails and those that are heads on a common cycle.
pub fn construction_b(s: &AltStructure) -> Result<BlockSystem, QuotientError> {
    if s.attachment == 2 * s.radius {
        return Err(QuotientError::Spanning);
    }
    if s.ell % 2 == 0 {
        return Ok(BlockSystem::new(s.attachment_sets.clone(), BlockKind::ConstructionB, s.ell / 2));
    }
    let mut blocks = Vec::with_capacity(2 * s.attachment_sets.len());
    for (set, &(lo, _)) in s.attachment_sets.iter().zip(&s.attachment_pairs) {
        let (tails, heads): (Vec<usize>, Vec<usize>) =
            set.iter().partition(|&&v| s.tail_on[v].cycle == lo);
        blocks.push(tails);
        blocks.push(heads);
    }
    Ok(BlockSystem::new(blocks, BlockKind::ConstructionB, s.ell))
}

/// Quotient of a graph by a block system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientGraph {
    pub graph: Graph,
    /// Largest number of neighbours a single vertex has inside one
    /// adjacent block.
    pub multiplicity: usize,
    /// Number of edges with both ends in one block.
    pub internal_edges: usize,
    /// A cycle whose edges all come from doubled adjacencies.
    pub degenerate: bool,
}

pub fn quotient_graph(g: &Graph, b: &BlockSystem) -> QuotientGraph {
    let mut edges = std::collections::BTreeSet::new();
    let mut internal = 0;
    for &(u, v) in g.edges() {
        let (x, y) = (b.block_of(u), b.block_of(v));
        if x == y {
            internal += 1;
        } else {
            edges.insert((x.min(y), x.max(y)));
        }
    }
    let mut multiplicity = 0;
    for v in 0..g.order() {
        let mut count: HashMap<usize, usize> = HashMap::new();
        for &w in g.neighbors(v) {
            *count.entry(b.block_of(w)).or_default() += 1;
        }
        multiplicity = multiplicity.max(count.into_values().max().unwrap_or(0));
    }
    let edges: Vec<(usize, usize)> = edges.into_iter().collect();
    let graph = Graph::new(b.len(), &edges).expect("quotient edges join distinct blocks");
    let degenerate = multiplicity == 2 && graph.is_cycle();
    QuotientGraph { graph, multiplicity, internal_edges: internal, degenerate }
}

/// Graph on alternating cycles, adjacent when they intersect.
pub fn alt_graph(s: &AltStructure) -> Result<Graph, AltError> {
    if s.cycles.len() < 3 {
        return Err(AltError::TooFewCycles(s.cycles.len()));
    }
    Graph::new(s.cycles.len(), &s.intersecting_pairs()).map_err(AltError::from)
}

/// The kernels of the actions on alternating cycles, on the blocks of
/// Construction B and on attachment sets.
#[derive(Debug, Clone)]
pub struct Kernels {
    pub alt: GroupByGenerators,
    /// Absent when the attachment number equals the cycle length.
    pub b: Option<GroupByGenerators>,
    pub a: GroupByGenerators,
}

impl Kernels {
    /// Whether all present kernels coincide elementwise.
    pub fn all_equal(&self) -> Result<bool, PermError> {
        let alt = self.alt.elements()?;
        let b_ok = match &self.b {
            Some(b) => b.elements()? == alt,
            None => true,
        };
        Ok(b_ok && self.a.elements()? == alt)
    }
}

/// Elements fixing every alternating cycle. Cycles are told apart by their
/// edges, since with two cycles both may pass through every vertex.
pub fn cycle_kernel(
    group: &GroupByGenerators,
    s: &AltStructure,
) -> Result<GroupByGenerators, QuotientError> {
    let fixed: Vec<Permutation> = group
        .elements()?
        .iter()
        .filter(|g| {
            (0..s.cycles.len()).all(|ci| {
                let c = &s.cycles[ci];
                s.cycle_image(g, ci) == Some(ci)
                    && c.iter().all(|&v| s.position_on(g.apply(v), ci).is_some())
            })
        })
        .cloned()
        .collect();
    Ok(subgroup_from_elements(group, fixed))
}

pub fn kernels(group: &GroupByGenerators, s: &AltStructure) -> Result<Kernels, QuotientError> {
    let alt = cycle_kernel(group, s)?;
    let a = setwise_kernel(group, &s.attachment_sets)?;
    let b = match construction_b(s) {
        Ok(bs) => Some(setwise_kernel(group, &bs.blocks)?),
        Err(QuotientError::Spanning) => None,
        Err(e) => return Err(e),
    };
    Ok(Kernels { alt, b, a })
}

/// The five possibilities for the kernel on alternating cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelCase {
    /// `a = 2r`: dihedral of order `2r`.
    Spanning,
    /// `a = r = 2`: an elementary abelian 2-group.
    WreathTight,
    /// `a = r > 2`: dihedral of order `2a`.
    Tight,
    /// `a < r`, `a | r`: cyclic of order `a` (or trivial when `a = 2`).
    Divides,
    /// `a < r`, `a` not dividing `r`: cyclic of order `a / 2`.
    NotDivides,
}

impl KernelCase {
    pub fn of(s: &AltStructure) -> KernelCase {
        let (a, r) = (s.attachment, s.radius);
        if a == 2 * r {
            KernelCase::Spanning
        } else if a == r && a == 2 {
            KernelCase::WreathTight
        } else if a == r {
            KernelCase::Tight
        } else if r % a == 0 {
            KernelCase::Divides
        } else {
            KernelCase::NotDivides
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            KernelCase::Spanning => "i",
            KernelCase::WreathTight => "ii",
            KernelCase::Tight => "iii",
            KernelCase::Divides => "iv",
            KernelCase::NotDivides => "v",
        }
    }

    /// Whether `tag` is an allowed kernel structure for this case.
    pub fn accepts(&self, s: &AltStructure, tag: StructureTag) -> bool {
        let (a, r) = (s.attachment, s.radius);
        match self {
            KernelCase::Spanning => tag == StructureTag::dihedral(2 * r),
            KernelCase::WreathTight => matches!(
                tag,
                StructureTag::Trivial | StructureTag::Cyclic(2) | StructureTag::ElemAbelian2(_)
            ),
            KernelCase::Tight => tag == StructureTag::dihedral(2 * a),
            KernelCase::Divides => {
                tag == StructureTag::cyclic(a) || (a == 2 && tag == StructureTag::Trivial)
            }
            KernelCase::NotDivides => tag == StructureTag::cyclic(a / 2),
        }
    }

    pub fn expected(&self, s: &AltStructure) -> String {
        let (a, r) = (s.attachment, s.radius);
        match self {
            KernelCase::Spanning => StructureTag::dihedral(2 * r).to_string(),
            KernelCase::WreathTight => "subgroup of Z2^n".into(),
            KernelCase::Tight => StructureTag::dihedral(2 * a).to_string(),
            KernelCase::Divides if a == 2 => "C2 or 1".into(),
            KernelCase::Divides => StructureTag::cyclic(a).to_string(),
            KernelCase::NotDivides => StructureTag::cyclic(a / 2).to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelClassification {
    pub case: KernelCase,
    pub case_id: String,
    pub observed: String,
    pub expected: String,
}

/// Matches the observed kernel structure against the case table.
pub fn classify_kernel(
    s: &AltStructure,
    k: &GroupByGenerators,
) -> Result<KernelClassification, QuotientError> {
    let case = KernelCase::of(s);
    let tag = crate::perm::group_structure(k)?;
    let out = KernelClassification {
        case,
        case_id: case.id().into(),
        observed: tag.to_string(),
        expected: case.expected(s),
    };
    if case.accepts(s, tag) {
        Ok(out)
    } else {
        Err(QuotientError::Inconsistent(format!(
            "case ({}) with r = {}, a = {}: observed {}, expected {}",
            out.case_id, s.radius, s.attachment, out.observed, out.expected
        )))
    }
}

/// Permutation of `sets` induced by `g`, if `g` maps sets onto sets.
fn induced_on_sets(g: &Permutation, sets: &[Vec<usize>], set_of: &[usize]) -> Option<Permutation> {
    let mut images = Vec::with_capacity(sets.len());
    for set in sets {
        let target = set_of[g.apply(set[0])];
        if set.iter().any(|&v| set_of[g.apply(v)] != target) || sets[target].len() != set.len() {
            return None;
        }
        images.push(target);
    }
    Permutation::from_images(images).ok()
}

fn induced_action(
    group: &GroupByGenerators,
    sets: &[Vec<usize>],
    set_of: &[usize],
) -> Result<GroupByGenerators, QuotientError> {
    let mut gens = Vec::with_capacity(group.generators().len());
    for (i, g) in group.generators().iter().enumerate() {
        gens.push(induced_on_sets(g, sets, set_of).ok_or(QuotientError::BlocksNotInvariant(i))?);
    }
    Ok(GroupByGenerators::new(sets.len(), gens)?.with_element_cap(group.element_cap()))
}

/// The permutation group induced on the blocks of `b`.
pub fn quotient_action(
    group: &GroupByGenerators,
    b: &BlockSystem,
) -> Result<GroupByGenerators, QuotientError> {
    let set_of: Vec<usize> = (0..group.degree()).map(|v| b.block_of(v)).collect();
    induced_action(group, &b.blocks, &set_of)
}

/// The permutation group induced on the alternating cycles.
pub fn cycle_action(
    group: &GroupByGenerators,
    s: &AltStructure,
) -> Result<GroupByGenerators, QuotientError> {
    // each vertex lies on two cycles, so a set map is read off two points
    let mut gens = Vec::new();
    for (i, g) in group.generators().iter().enumerate() {
        let mut images = Vec::with_capacity(s.cycles.len());
        for (ci, c) in s.cycles.iter().enumerate() {
            let target = s.cycle_image(g, ci).ok_or(QuotientError::BlocksNotInvariant(i))?;
            if c.iter().any(|&v| s.position_on(g.apply(v), target).is_none()) {
                return Err(QuotientError::BlocksNotInvariant(i));
            }
            images.push(target);
        }
        gens.push(
            Permutation::from_images(images).map_err(|_| QuotientError::BlocksNotInvariant(i))?,
        );
    }
    Ok(GroupByGenerators::new(s.cycles.len(), gens)?.with_element_cap(group.element_cap()))
}

/// Transitivity of the induced action on the graph of alternating cycles.
pub fn alt_action_profile(
    group: &GroupByGenerators,
    s: &AltStructure,
) -> Result<TransitivityProfile, QuotientError> {
    let alt = alt_graph(s)?;
    let induced = cycle_action(group, s)?;
    Ok(transitivity_profile(&alt, &induced))
}

/// Cycle-to-cycle map from the alternating cycles of a graph to those of
/// its quotient by Construction B.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiMap {
    pub images: Vec<usize>,
    pub bijective: bool,
    pub preserves_adjacency: bool,
}

impl PsiMap {
    pub fn is_isomorphism(&self) -> bool {
        self.bijective && self.preserves_adjacency
    }
}

/// Sends each cycle `(u_0, u_1, ...)` to the cycle of block labels
/// `(B_{u_0}, B_{u_1}, ...)` of period `ell` (or `2 ell` when `ell` is odd)
/// and locates it among the alternating cycles of the quotient.
pub fn psi_isomorphism(
    s: &AltStructure,
    b: &BlockSystem,
    quotient_alt: &AltStructure,
) -> Result<PsiMap, QuotientError> {
    if s.attachment >= s.radius {
        return Err(QuotientError::PreconditionFailed(format!(
            "a = {} is not below r = {}",
            s.attachment, s.radius
        )));
    }
    let period = if s.ell % 2 == 0 { s.ell } else { 2 * s.ell };
    let index: HashMap<&Vec<usize>, usize> =
        quotient_alt.cycles.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut images = Vec::with_capacity(s.cycles.len());
    for c in &s.cycles {
        let seq: Vec<usize> = c[..period].iter().map(|&v| b.block_of(v)).collect();
        let periodic = c.iter().enumerate().all(|(p, &v)| b.block_of(v) == seq[p % period]);
        let target = periodic.then(|| normalize(&seq)).and_then(|n| index.get(&n).copied());
        match target {
            Some(t) => images.push(t),
            None => {
                return Ok(PsiMap { images, bijective: false, preserves_adjacency: false });
            }
        }
    }
    let mut seen = images.clone();
    seen.sort_unstable();
    seen.dedup();
    let bijective = seen.len() == images.len() && images.len() == quotient_alt.cycles.len();
    let adjacent = |st: &AltStructure| {
        let pairs = st.intersecting_pairs();
        move |x: usize, y: usize| pairs.binary_search(&(x.min(y), x.max(y))).is_ok()
    };
    let (adj_s, adj_q) = (adjacent(s), adjacent(quotient_alt));
    let m = s.cycles.len();
    let preserves_adjacency = bijective
        && (0..m).all(|x| (x + 1..m).all(|y| adj_s(x, y) == adj_q(images[x], images[y])));
    Ok(PsiMap { images, bijective, preserves_adjacency })
}

fn normalize(seq: &[usize]) -> Vec<usize> {
    let len = seq.len();
    let start = (0..len).min_by_key(|&i| seq[i]).expect("non-empty");
    let (fwd, back) = (seq[(start + 1) % len], seq[(start + len - 1) % len]);
    if fwd <= back {
        (0..len).map(|k| seq[(start + k) % len]).collect()
    } else {
        (0..len).map(|k| seq[(start + len - k) % len]).collect()
    }
}

/// Which of the two outcomes of the cyclic quotient analysis applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuotientCase {
    Tight,
    CyclicQuotient,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientPipelineReport {
    pub r: usize,
    pub a: usize,
    pub case: QuotientCase,
    /// The antipodal map was added to the group first.
    pub extended_by_tau: bool,
    pub kernel_order: Option<usize>,
    pub kernel_structure: Option<String>,
    pub kernel_cyclic_of_expected_order: Option<bool>,
    pub orbits_are_blocks: Option<bool>,
    pub quotient_order: Option<usize>,
    pub quotient_simple_tetravalent: Option<bool>,
    pub quotient_hat: Option<bool>,
    pub quotient_attachment: Option<usize>,
    pub quotient_attachment_expected: Option<usize>,
    pub psi_isomorphism: Option<bool>,
    pub passes: bool,
}

/// Quotient analysis of a half-arc-transitive pair: either the graph is
/// tightly attached, or the blocks of Construction B are the orbits of a
/// cyclic normal subgroup and the quotient is a loosely or antipodally
/// attached half-arc-transitive graph.
pub fn cyclic_quotient_pipeline(
    g: &Graph,
    group: &GroupByGenerators,
) -> Result<QuotientPipelineReport, QuotientError> {
    let cert = certify_hat(g, group)?;
    let s = analyze(&cert.orientation)?;
    let (a, r) = (s.attachment, s.radius);
    if a == 2 * r {
        return Err(QuotientError::Spanning);
    }
    let mut group = group.clone();
    let mut extended_by_tau = false;
    if r % 2 == 0 && a == 2 {
        match antipodal_tau(&cert.orientation, &s)? {
            TauOutcome::Automorphism(tau) => {
                if !group.contains(&tau)? {
                    group = group.extended_by(tau)?;
                    extended_by_tau = true;
                }
            }
            other => {
                return Err(QuotientError::Inconsistent(format!("antipodal map unavailable: {other:?}")))
            }
        }
    }
    let mut report = QuotientPipelineReport {
        r,
        a,
        case: QuotientCase::Tight,
        extended_by_tau,
        kernel_order: None,
        kernel_structure: None,
        kernel_cyclic_of_expected_order: None,
        orbits_are_blocks: None,
        quotient_order: None,
        quotient_simple_tetravalent: None,
        quotient_hat: None,
        quotient_attachment: None,
        quotient_attachment_expected: None,
        psi_isomorphism: None,
        passes: true,
    };
    if a == r {
        return Ok(report);
    }
    report.case = QuotientCase::CyclicQuotient;
    let divides = r % a == 0;
    let b = construction_b(&s)?;
    let kb = setwise_kernel(&group, &b.blocks)?;
    let tag = crate::perm::group_structure(&kb)?;
    let expected_order = if divides { a } else { a / 2 };
    report.kernel_order = Some(kb.order()?);
    report.kernel_structure = Some(tag.to_string());
    report.kernel_cyclic_of_expected_order = Some(tag == StructureTag::cyclic(expected_order));
    report.orbits_are_blocks = Some(b.same_partition(&kb.point_orbits()));
    let q = quotient_graph(g, &b);
    report.quotient_order = Some(q.graph.order());
    let simple_tetra =
        q.multiplicity == 1 && q.internal_edges == 0 && q.graph.regular_degree() == Some(4);
    report.quotient_simple_tetravalent = Some(simple_tetra);
    report.quotient_attachment_expected = Some(if divides { 1 } else { 2 });
    if simple_tetra {
        let induced = quotient_action(&group, &b)?;
        match certify_hat(&q.graph, &induced) {
            Ok(qcert) => {
                report.quotient_hat = Some(true);
                let qs = analyze(&qcert.orientation)?;
                report.quotient_attachment = Some(qs.attachment);
                report.psi_isomorphism = Some(psi_isomorphism(&s, &b, &qs)?.is_isomorphism());
            }
            Err(_) => report.quotient_hat = Some(false),
        }
    }
    report.passes = report.kernel_cyclic_of_expected_order == Some(true)
        && report.orbits_are_blocks == Some(true)
        && simple_tetra
        && report.quotient_hat == Some(true)
        && report.quotient_attachment == report.quotient_attachment_expected
        && report.psi_isomorphism == Some(true);
    Ok(report)
}

/// Orders, structures and equalities of the three kernels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelReport {
    pub alt_order: usize,
    pub b_order: Option<usize>,
    pub a_order: usize,
    pub alt_structure: String,
    pub b_structure: Option<String>,
    pub a_structure: String,
    pub alt_equals_b: Option<bool>,
    pub alt_equals_a: bool,
    pub case: String,
    pub consistent: bool,
}

pub fn kernel_report(k: &Kernels, s: &AltStructure) -> Result<KernelReport, QuotientError> {
    let tag = |g: &GroupByGenerators| crate::perm::group_structure(g).map(|t| t.to_string());
    let alt = k.alt.elements()?;
    let consistent = classify_kernel(s, &k.alt).is_ok();
    Ok(KernelReport {
        alt_order: alt.len(),
        b_order: k.b.as_ref().map(|b| b.order()).transpose()?,
        a_order: k.a.order()?,
        alt_structure: tag(&k.alt)?,
        b_structure: k.b.as_ref().map(tag).transpose()?,
        a_structure: tag(&k.a)?,
        alt_equals_b: k.b.as_ref().map(|b| b.elements().map(|e| e == alt)).transpose()?,
        alt_equals_a: k.a.elements()? == alt,
        case: KernelCase::of(s).id().into(),
        consistent,
    })
}
