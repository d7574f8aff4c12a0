//! Verification suites over parameter grids, file ingestion, and JSON/DOT
//! reports.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::alternating::{
    analyze, build_rho, check_mult_lemma, double_step_element, jumps_are_inverse, rotation_profile,
    AltError, AltReport, AltStructure,
};
use crate::autsearch::{
    are_isomorphic, automorphism_group, is_arc_transitive, SearchError,
};
use crate::constructions::{
    build_wreath_instance, build_xe, build_xo, catalog_entry, default_xe_grid, default_xo_grid,
    min_signed_inverse, xe_isomorphic_variants, xo_isomorphic_variants, ConstructionError,
    Instance, XeParams, XoParams, CATALOG,
};
use crate::formats::{from_graph6_or_sparse6, parse_edge_list, FormatError};
use crate::graph::{certify_hat, transitivity_profile, Arc, Graph, GraphError, OrientedGraph};
use crate::perm::{GroupByGenerators, PermError, Permutation};
use crate::quotients::{
    alt_graph, classify_kernel, construction_b, cyclic_quotient_pipeline, kernel_report, kernels,
    quotient_graph, KernelCase, QuotientError, QuotientPipelineReport,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("unknown format `{0}`")]
    UnknownFormat(String),
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("bundle parse error at line {line}, column {column}: {message}")]
    Bundle { line: usize, column: usize, message: String },
    #[error("bad permutation in generator {index}: {source}")]
    BadPermutation { index: usize, source: PermError },
    #[error("{0}")]
    MissingGroup(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Alt(#[from] AltError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

impl HarnessError {
    /// Process exit code for the error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::UnknownSuite(_) | HarnessError::UnknownFormat(_) => 2,
            HarnessError::Io { .. } => 3,
            HarnessError::Bundle { .. }
            | HarnessError::BadPermutation { .. }
            | HarnessError::Format(_) => 4,
            HarnessError::Construction(_) => 5,
            HarnessError::MissingGroup(_) | HarnessError::Graph(_) => 6,
            HarnessError::Perm(PermError::CapExceeded { .. })
            | HarnessError::Search(SearchError::SearchBudgetExceeded(_)) => 8,
            HarnessError::Perm(_)
            | HarnessError::Alt(_)
            | HarnessError::Quotient(_)
            | HarnessError::Search(_) => 7,
        }
    }
}

/// Exit code when a suite or report records a failed check.
pub const EXIT_CHECK_FAILED: i32 = 1;

// ---------------------------------------------------------------------------
// ingestion

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputFormat {
    Edgelist,
    /// graph6 or sparse6, told apart by the leading `:`.
    Graph6,
    BundleJson,
}

impl std::str::FromStr for InputFormat {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edgelist" | "edge-list" => Ok(InputFormat::Edgelist),
            "graph6" | "sparse6" | "g6" | "s6" => Ok(InputFormat::Graph6),
            "bundle-json" | "json" | "bundle" => Ok(InputFormat::BundleJson),
            _ => Err(HarnessError::UnknownFormat(s.into())),
        }
    }
}

impl InputFormat {
    /// Guess from the file extension, then from the content.
    pub fn detect(path: &Path, text: &str) -> InputFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => InputFormat::BundleJson,
            Some("g6" | "s6" | "graph6" | "sparse6") => InputFormat::Graph6,
            Some("txt" | "edges" | "el") => InputFormat::Edgelist,
            _ => {
                let t = text.trim_start();
                if t.starts_with('{') {
                    InputFormat::BundleJson
                } else if t.starts_with(|c: char| c.is_ascii_digit() || c == '#') {
                    InputFormat::Edgelist
                } else {
                    InputFormat::Graph6
                }
            }
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct BundleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Bundle {
    graph: BundleGraph,
    #[serde(default)]
    generators: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    orientation: Option<Vec<Arc>>,
    #[serde(default)]
    params: Option<Value>,
}

/// A parsed input file.
#[derive(Debug, Clone)]
pub struct Ingested {
    pub graph: Graph,
    pub group: Option<GroupByGenerators>,
    /// Optional explicit orientation (bundle files only).
    pub orientation: Option<Vec<Arc>>,
    pub params: Option<Value>,
}

pub fn ingest_str(text: &str, format: InputFormat) -> Result<Ingested, HarnessError> {
    let plain = |graph| Ingested { graph, group: None, orientation: None, params: None };
    match format {
        InputFormat::Edgelist => Ok(plain(parse_edge_list(text)?)),
        InputFormat::Graph6 => {
            let line = text
                .lines()
                .map(str::trim)
                .find(|l| !l.is_empty())
                .ok_or(FormatError::Byte { offset: 0, message: "empty input".into() })?;
            Ok(plain(from_graph6_or_sparse6(line)?))
        }
        InputFormat::BundleJson => {
            let b: Bundle = serde_json::from_str(text).map_err(|e| HarnessError::Bundle {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
            let graph = Graph::new(b.graph.n, &b.graph.edges)?;
            let group = match b.generators {
                None => None,
                Some(gens) => {
                    let perms = gens
                        .into_iter()
                        .enumerate()
                        .map(|(index, images)| {
                            Permutation::from_images(images)
                                .map_err(|source| HarnessError::BadPermutation { index, source })
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Some(GroupByGenerators::new(graph.order(), perms)?)
                }
            };
            Ok(Ingested { graph, group, orientation: b.orientation, params: b.params })
        }
    }
}

/// Reads and parses `path`; the format is detected when not given.
pub fn ingest(path: &Path, format: Option<InputFormat>) -> Result<Ingested, HarnessError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| HarnessError::Io { path: path.to_path_buf(), message: e.to_string() })?;
    let format = format.unwrap_or_else(|| InputFormat::detect(path, &text));
    ingest_str(&text, format)
}

/// Serializes a graph and optional group as a bundle.
pub fn to_bundle_json(graph: &Graph, group: Option<&GroupByGenerators>, params: Option<Value>) -> String {
    let b = Bundle {
        graph: BundleGraph { n: graph.order(), edges: graph.edges().to_vec() },
        generators: group.map(|g| g.generators().iter().map(|p| p.images().to_vec()).collect()),
        orientation: None,
        params,
    };
    serde_json::to_string_pretty(&b).expect("bundle serializes")
}

// ---------------------------------------------------------------------------
// grids

/// One member of a verification grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceSpec {
    Xo { m: u64, r: u64, q: u64 },
    Xe { m: u64, r: u64, q: u64, t: u64 },
    Wreath { n: u64 },
    Catalog { name: String },
    File { path: PathBuf },
}

impl std::fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InstanceSpec::Xo { m, r, q } => write!(f, "Xo({m},{r};{q})"),
            InstanceSpec::Xe { m, r, q, t } => write!(f, "Xe({m},{r};{q},{t})"),
            InstanceSpec::Wreath { n } => write!(f, "W({n})"),
            InstanceSpec::Catalog { name } => f.write_str(name),
            InstanceSpec::File { path } => write!(f, "file:{}", path.display()),
        }
    }
}

/// Why an instance could not be built.
enum BuildFailure {
    Skipped(String),
    Error(String),
}

impl InstanceSpec {
    fn build(&self) -> Result<Instance, BuildFailure> {
        let invalid = |e: ConstructionError| match e {
            ConstructionError::InvalidParams(m) => BuildFailure::Skipped(format!("invalid parameters: {m}")),
            e => BuildFailure::Error(e.to_string()),
        };
        match self {
            InstanceSpec::Xo { m, r, q } => {
                build_xo(XoParams::new(*m, *r, *q).map_err(invalid)?).map_err(invalid)
            }
            InstanceSpec::Xe { m, r, q, t } => {
                build_xe(XeParams::new(*m, *r, *q, *t).map_err(invalid)?).map_err(invalid)
            }
            InstanceSpec::Wreath { n } => build_wreath_instance(*n).map_err(invalid),
            InstanceSpec::Catalog { name } => catalog_entry(name)
                .ok_or_else(|| BuildFailure::Error(format!("no catalog entry `{name}`")))?
                .build()
                .map_err(invalid),
            InstanceSpec::File { path } => {
                let ing = ingest(path, None).map_err(|e| BuildFailure::Error(e.to_string()))?;
                let group = ing
                    .group
                    .ok_or_else(|| BuildFailure::Skipped("file carries no group".into()))?;
                Ok(Instance { graph: ing.graph, group })
            }
        }
    }
}

/// Instances a suite runs over.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridConfig {
    pub instances: Vec<InstanceSpec>,
}

impl GridConfig {
    /// Layered families with `m` in 3..=6 and odd `r` in 5..=15, `m` in
    /// {4, 6} and even `r` in 4..=20, wreath graphs with `n` in 3..=8, and
    /// the Cayley catalog.
    pub fn standard() -> GridConfig {
        let mut instances: Vec<InstanceSpec> = default_xo_grid()
            .into_iter()
            .map(|p| InstanceSpec::Xo { m: p.m, r: p.r, q: p.q })
            .collect();
        instances.extend(
            default_xe_grid().into_iter().map(|p| InstanceSpec::Xe { m: p.m, r: p.r, q: p.q, t: p.t }),
        );
        instances.extend((3..=8).map(|n| InstanceSpec::Wreath { n }));
        instances.extend(CATALOG.iter().map(|e| InstanceSpec::Catalog { name: e.name.into() }));
        GridConfig { instances }
    }

    /// Wider ranges: `m` up to 8, odd `r` up to 25 and even `r` up to 30.
    pub fn extended() -> GridConfig {
        let mut instances = Vec::new();
        for m in 3..=8 {
            for r in (5..=25).step_by(2) {
                instances.extend(XoParams::all_for(m, r).into_iter().map(|p| InstanceSpec::Xo { m: p.m, r: p.r, q: p.q }));
            }
        }
        for m in [4, 6, 8] {
            for r in (4..=30).step_by(2) {
                instances.extend(
                    XeParams::all_for(m, r).into_iter().map(|p| InstanceSpec::Xe { m: p.m, r: p.r, q: p.q, t: p.t }),
                );
            }
        }
        instances.extend((3..=10).map(|n| InstanceSpec::Wreath { n }));
        instances.extend(CATALOG.iter().map(|e| InstanceSpec::Catalog { name: e.name.into() }));
        GridConfig { instances }
    }

    pub fn with(mut self, spec: InstanceSpec) -> GridConfig {
        self.instances.push(spec);
        self
    }
}

// ---------------------------------------------------------------------------
// suites

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Suite {
    #[serde(rename = "gta")]
    Gta,
    #[serde(rename = "jump-lemmas")]
    JumpLemmas,
    #[serde(rename = "kernels")]
    Kernels,
    #[serde(rename = "allkernels")]
    AllKernels,
    #[serde(rename = "quotient")]
    Quotient,
    #[serde(rename = "psi")]
    Psi,
    #[serde(rename = "iso-relations")]
    IsoRelations,
    #[serde(rename = "andivr-props")]
    AndivrProps,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Gta,
        Suite::JumpLemmas,
        Suite::Kernels,
        Suite::AllKernels,
        Suite::Quotient,
        Suite::Psi,
        Suite::IsoRelations,
        Suite::AndivrProps,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Gta => "gta",
            Suite::JumpLemmas => "jump-lemmas",
            Suite::Kernels => "kernels",
            Suite::AllKernels => "allkernels",
            Suite::Quotient => "quotient",
            Suite::Psi => "psi",
            Suite::IsoRelations => "iso-relations",
            Suite::AndivrProps => "andivr-props",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| HarnessError::UnknownSuite(s.into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceResult {
    pub key: String,
    pub params: InstanceSpec,
    pub status: Status,
    pub invariants: BTreeMap<String, Value>,
    /// Instance and violated assertion, present on failure or error.
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub instances: Vec<InstanceResult>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub errors: usize,
    /// Left out when reports are compared.
    pub wall_time_ms: Option<u64>,
}

impl SuiteReport {
    pub fn passes(&self) -> bool {
        self.failed == 0 && self.errors == 0
    }

    pub fn without_timing(mut self) -> SuiteReport {
        self.wall_time_ms = None;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Analysis shared by the suites for one instance.
struct Ctx {
    spec: InstanceSpec,
    inst: Instance,
    og: OrientedGraph,
    s: AltStructure,
}

enum Verdict {
    Pass,
    Fail(String),
    Skip(String),
}

type Checks = BTreeMap<String, Value>;

fn put(inv: &mut Checks, k: &str, v: impl Serialize) {
    inv.insert(k.into(), serde_json::to_value(v).expect("serializable"));
}

/// First failing assertion among `(name, holds)` pairs.
fn first_failure(checks: &[(&str, bool)]) -> Verdict {
    match checks.iter().find(|(_, ok)| !ok) {
        Some((name, _)) => Verdict::Fail(format!("{name} does not hold")),
        None => Verdict::Pass,
    }
}

fn suite_gta(c: &Ctx, inv: &mut Checks) -> Result<Verdict, HarnessError> {
    let (r, q) = match c.spec {
        InstanceSpec::Xo { r, q, .. } | InstanceSpec::Xe { r, q, .. } => (r, q),
        _ => return Ok(Verdict::Skip("not a layered family member".into())),
    };
    let expected = min_signed_inverse(q, r) as usize;
    put(inv, "r", c.s.radius);
    put(inv, "a", c.s.attachment);
    put(inv, "jum", c.s.jum);
    put(inv, "expected_jum", expected);
    Ok(first_failure(&[
        ("radius = r", c.s.radius == r as usize),
        ("attachment = r", c.s.attachment == r as usize),
        ("jum = min{+-q, +-q^-1}", c.s.jum == expected),
    ]))
}

fn suite_jumps(c: &Ctx, inv: &mut Checks) -> Result<Verdict, HarnessError> {
    let s = &c.s;
    put(inv, "a", s.attachment);
    put(inv, "q_t", s.q_t);
    put(inv, "q_h", s.q_h);
    if s.attachment < 2 {
        return Ok(Verdict::Skip("a < 2".into()));
    }
    let rev = analyze(&c.og.reversed())?;
    let mult = check_mult_lemma(s);
    put(inv, "jumps_checked", s.jumps_checked);
    if let Some(w) = mult.witness {
        put(inv, "mult_witness", w);
    }
    Ok(first_failure(&[
        ("gcd(a, q_t) = gcd(a, q_h) = 1 and q_t q_h = +-1 mod a", jumps_are_inverse(s)),
        ("index identity along both cycles", mult.holds),
        ("jumps agree at every inspected vertex", s.jumps_uniform),
        ("jum = min Q <= a/2", s.jum == s.q_set[0] && 2 * s.jum <= s.attachment),
        ("reversal swaps q_t and q_h", rev.q_t == s.q_h && rev.q_h == s.q_t && rev.q_set == s.q_set),
    ]))
}

fn suite_kernels(c: &Ctx, inv: &mut Checks) -> Result<Verdict, HarnessError> {
    let k = kernels(&c.inst.group, &c.s)?;
    put(inv, "r", c.s.radius);
    put(inv, "a", c.s.attachment);
    put(inv, "case", KernelCase::of(&c.s));
    put(inv, "kernel_order", k.alt.order()?);
    match classify_kernel(&c.s, &k.alt) {
        Ok(cl) => {
            put(inv, "kernel", &cl.observed);
            put(inv, "expected", &cl.expected);
            Ok(Verdict::Pass)
        }
        Err(QuotientError::Inconsistent(m)) => Ok(Verdict::Fail(m)),
        Err(e) => Err(e.into()),
    }
}

fn suite_allkernels(c: &Ctx, inv: &mut Checks) -> Result<Verdict, HarnessError> {
    if c.s.attachment == 2 * c.s.radius {
        return Ok(Verdict::Skip("a = 2r".into()));
    }
    let k = kernels(&c.inst.group, &c.s)?;
    let rep = kernel_report(&k, &c.s)?;
    put(inv, "kernels", &rep);
    Ok(first_failure(&[("K_alt = K_B = K_A elementwise", k.all_equal()?)]))
}

fn pipeline(c: &Ctx, inv: &mut Checks) -> Result<Option<QuotientPipelineReport>, HarnessError> {
    if c.s.attachment >= c.s.radius {
        return Ok(None);
    }
    let rep = cyclic_quotient_pipeline(&c.inst.graph, &c.inst.group)?;
    put(inv, "pipeline", &rep);
    Ok(Some(rep))
}

fn suite_quotient(c: &Ctx, inv: &mut Checks) -> Result<Verdict, HarnessError> {
    let Some(rep) = pipeline(c, inv)? else {
        return Ok(Verdict::Skip("a >= r".into()));
    };
    Ok(first_failure(&[
        ("K_B cyclic of order a (a | r) or a/2", rep.kernel_cyclic_of_expected_order == Some(true)),
        ("B is the orbit partition of K_B", rep.orbits_are_blocks == Some(true)),
        ("quotient simple and tetravalent", rep.quotient_simple_tetravalent == Some(true)),
        ("quotient action half-arc-transitive", rep.quotient_hat == Some(true)),
        ("quotient attachment 1 (a | r) or 2", rep.quotient_attachment == rep.quotient_attachment_expected),
    ]))
}

fn suite_psi(c: &Ctx, inv: &mut Checks) -> Result<Verdict, HarnessError> {
    let Some(rep) = pipeline(c, inv)? else {
        return Ok(Verdict::Skip("a >= r".into()));
    };
    Ok(first_failure(&[("psi is an isomorphism of alternating-cycle graphs", rep.psi_isomorphism == Some(true))]))
}

fn suite_iso(c: &Ctx, inv: &mut Checks) -> Result<Verdict, HarnessError> {
    let variants: Vec<(String, Instance)> = match c.spec {
        InstanceSpec::Xo { m, r, q } => xo_isomorphic_variants(XoParams::new(m, r, q)?)
            .into_iter()
            .map(|p| Ok((p.to_string(), build_xo(p)?)))
            .collect::<Result<_, ConstructionError>>()?,
        InstanceSpec::Xe { m, r, q, t } => xe_isomorphic_variants(XeParams::new(m, r, q, t)?)
            .into_iter()
            .map(|p| {
                let p = p?;
                Ok((p.to_string(), build_xe(p)?))
            })
            .collect::<Result<_, ConstructionError>>()?,
        _ => return Ok(Verdict::Skip("not a layered family member".into())),
    };
    put(inv, "variants", variants.iter().map(|(k, _)| k.as_str()).collect::<Vec<_>>());
    for (key, v) in &variants {
        match are_isomorphic(&c.inst.graph, &v.graph)? {
            Some(w) if c.inst.graph.relabeled(&w) == v.graph => {}
            Some(_) => return Ok(Verdict::Fail(format!("witness for {key} does not map edges onto edges"))),
            None => return Ok(Verdict::Fail(format!("not isomorphic to {key}"))),
        }
    }
    Ok(Verdict::Pass)
}

fn suite_andivr(c: &Ctx, inv: &mut Checks) -> Result<Verdict, HarnessError> {
    let s = &c.s;
    let (a, n) = (s.attachment, s.n);
    if s.a_divides_r() || a == n {
        return Ok(Verdict::Skip("a divides r or a = |V|".into()));
    }
    let q = s.jum;
    let sq = q * q % a;
    put(inv, "a", a);
    put(inv, "r", s.radius);
    put(inv, "jum", q);
    let mut checks: Vec<(&str, bool)> = vec![
        ("|Q| = 1", s.q_set.len() == 1),
        ("jum^2 = +-1 mod a", sq == 1 % a || sq == a - 1),
    ];
    let bip = alt_graph(s)?.is_bipartite();
    put(inv, "alt_bipartite", bip);
    if q != 1 && q + 1 != a / 2 {
        checks.push(("alternating-cycle graph bipartite", bip));
    }
    let k = kernels(&c.inst.group, s)?;
    let two_class = k
        .alt
        .elements()?
        .iter()
        .map(|g| rotation_profile(g, s).map(|p| p.two_class == Some(true)))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .all(|x| x);
    checks.push(("kernel elements rotate by k ell and q k ell", two_class));
    if a > 4 && a < s.radius {
        let gamma = double_step_element(&c.inst.group, s, 0)?;
        match gamma {
            Some(gamma) => {
                let rho = build_rho(&c.og, s, &c.inst.group, &gamma)?;
                put(inv, "rho_order", rho.order());
                checks.push(("rho^2 = gamma", rho.then(&rho) == gamma));
                checks.push(("rho is an automorphism", c.inst.graph.is_automorphism(&rho)));
                checks.push(("rho reverses the orientation", c.og.reversed_by(&rho)));
            }
            None => put(inv, "rho", "no 2 ell rotation in the group"),
        }
    } else {
        let refused = matches!(
            build_rho(&c.og, s, &c.inst.group, &Permutation::identity(n)),
            Err(AltError::PreconditionFailed(_))
        );
        put(inv, "rho", "preconditions not met");
        checks.push(("build_rho refuses", refused));
    }
    Ok(first_failure(&checks))
}

/// Runs one suite on one instance.
pub fn run_one(suite: Suite, spec: &InstanceSpec) -> InstanceResult {
    let key = spec.to_string();
    let mut invariants = Checks::new();
    let result = |status, invariants, witness| InstanceResult {
        key: key.clone(),
        params: spec.clone(),
        status,
        invariants,
        witness,
    };
    let inst = match spec.build() {
        Ok(i) => i,
        Err(BuildFailure::Skipped(m)) => {
            put(&mut invariants, "skip_reason", m);
            return result(Status::Skipped, invariants, None);
        }
        Err(BuildFailure::Error(m)) => return result(Status::Error, invariants, Some(format!("{key}: {m}"))),
    };
    let outcome = (|| -> Result<Verdict, HarnessError> {
        let cert = certify_hat(&inst.graph, &inst.group)?;
        let og = cert.orientation;
        let s = analyze(&og)?;
        let c = Ctx { spec: spec.clone(), inst, og, s };
        match suite {
            Suite::Gta => suite_gta(&c, &mut invariants),
            Suite::JumpLemmas => suite_jumps(&c, &mut invariants),
            Suite::Kernels => suite_kernels(&c, &mut invariants),
            Suite::AllKernels => suite_allkernels(&c, &mut invariants),
            Suite::Quotient => suite_quotient(&c, &mut invariants),
            Suite::Psi => suite_psi(&c, &mut invariants),
            Suite::IsoRelations => suite_iso(&c, &mut invariants),
            Suite::AndivrProps => suite_andivr(&c, &mut invariants),
        }
    })();
    match outcome {
        Ok(Verdict::Pass) => result(Status::Pass, invariants, None),
        Ok(Verdict::Fail(m)) => result(Status::Fail, invariants, Some(format!("{key}: {m}"))),
        Ok(Verdict::Skip(m)) => {
            put(&mut invariants, "skip_reason", m);
            result(Status::Skipped, invariants, None)
        }
        Err(e) => result(Status::Error, invariants, Some(format!("{key}: {e}"))),
    }
}

/// Runs `suite` over every instance of `grid` in parallel. Results keep
/// grid order.
pub fn run_suite(suite: Suite, grid: &GridConfig) -> SuiteReport {
    let start = Instant::now();
    let instances: Vec<InstanceResult> = grid.instances.par_iter().map(|spec| run_one(suite, spec)).collect();
    let count = |st: Status| instances.iter().filter(|r| r.status == st).count();
    SuiteReport {
        suite: suite.name().into(),
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        skipped: count(Status::Skipped),
        errors: count(Status::Error),
        instances,
        wall_time_ms: Some(start.elapsed().as_millis() as u64),
    }
}

// ---------------------------------------------------------------------------
// single-instance analysis

#[derive(Debug, Clone, Copy, Default)]
pub struct AnalyzeOptions {
    /// Analyze the orientation only; no group is needed or used.
    pub no_group: bool,
    /// Also decide arc-transitivity of the graph, its alternating-cycle
    /// graph and the quotient.
    pub arc_transitivity: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceTag {
    HalfArcTransitive,
    ArcTransitive,
    OrientationOnly,
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcTransitivity {
    pub graph: Option<bool>,
    pub alt: Option<bool>,
    pub quotient: Option<bool>,
}

/// Everything the pipeline learns about one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub edges: usize,
    pub tag: InstanceTag,
    pub group_order: Option<usize>,
    pub r: Option<usize>,
    pub a: Option<usize>,
    pub jum: Option<usize>,
    pub q: Option<Vec<usize>>,
    pub kernel: Option<String>,
    pub case: Option<KernelCase>,
    pub alternating: Option<AltReport>,
    pub kernels: Option<crate::quotients::KernelReport>,
    pub quotient: Option<QuotientPipelineReport>,
    pub arc_transitive: Option<ArcTransitivity>,
    pub errors: Vec<String>,
}

impl AnalysisReport {
    fn empty(g: &Graph, tag: InstanceTag) -> AnalysisReport {
        AnalysisReport {
            n: g.order(),
            edges: g.size(),
            tag,
            group_order: None,
            r: None,
            a: None,
            jum: None,
            q: None,
            kernel: None,
            case: None,
            alternating: None,
            kernels: None,
            quotient: None,
            arc_transitive: None,
            errors: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Orientation for `--no-group` runs: the bundle's own, or the one induced
/// by the full automorphism group when that acts half-arc-transitively.
fn orientation_without_group(ing: &Ingested) -> Result<Option<OrientedGraph>, HarnessError> {
    if let Some(arcs) = &ing.orientation {
        return Ok(Some(OrientedGraph::from_arcs(ing.graph.clone(), arcs)?));
    }
    let aut = automorphism_group(&ing.graph)?.group()?;
    match certify_hat(&ing.graph, &aut) {
        Ok(c) => Ok(Some(c.orientation)),
        Err(GraphError::ArcTransitive) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Certify, analyze, build quotients and kernels, and tag the case. Errors
/// from later stages are recorded in the report rather than returned.
pub fn analyze_cmd(ing: &Ingested, opts: AnalyzeOptions) -> Result<AnalysisReport, HarnessError> {
    let g = &ing.graph;
    if opts.no_group {
        let Some(og) = orientation_without_group(ing)? else {
            return Ok(AnalysisReport::empty(g, InstanceTag::ArcTransitive));
        };
        let mut rep = AnalysisReport::empty(g, InstanceTag::OrientationOnly);
        match analyze(&og) {
            Ok(s) => fill_alt(&mut rep, &s),
            Err(e) => rep.errors.push(e.to_string()),
        }
        return Ok(rep);
    }
    let group = ing.group.as_ref().ok_or_else(|| {
        HarnessError::MissingGroup("no group given; supply generators or pass --no-group".into())
    })?;
    let mut rep = AnalysisReport::empty(g, InstanceTag::Invalid);
    rep.group_order = Some(group.order()?);
    let cert = match certify_hat(g, group) {
        Ok(c) => c,
        Err(GraphError::ArcTransitive) => {
            rep.tag = InstanceTag::ArcTransitive;
            if opts.arc_transitivity {
                rep.arc_transitive = Some(ArcTransitivity { graph: Some(is_arc_transitive(g)?), alt: None, quotient: None });
            }
            return Ok(rep);
        }
        Err(e) => {
            rep.errors.push(e.to_string());
            return Ok(rep);
        }
    };
    rep.tag = InstanceTag::HalfArcTransitive;
    let s = match analyze(&cert.orientation) {
        Ok(s) => s,
        Err(e) => {
            rep.errors.push(e.to_string());
            return Ok(rep);
        }
    };
    fill_alt(&mut rep, &s);
    rep.case = Some(KernelCase::of(&s));
    match kernels(group, &s).and_then(|k| Ok((kernel_report(&k, &s)?, k))) {
        Ok((kr, k)) => {
            rep.kernel = Some(crate::perm::group_structure(&k.alt)?.to_string());
            if !kr.consistent {
                rep.errors.push(format!("kernel {} inconsistent with case {}", kr.alt_structure, kr.case));
            }
            rep.kernels = Some(kr);
        }
        Err(e) => rep.errors.push(e.to_string()),
    }
    if s.attachment < s.radius {
        match cyclic_quotient_pipeline(g, group) {
            Ok(p) => {
                if !p.passes {
                    rep.errors.push("quotient pipeline checks failed".into());
                }
                rep.quotient = Some(p);
            }
            Err(e) => rep.errors.push(e.to_string()),
        }
    }
    if opts.arc_transitivity {
        let alt = alt_graph(&s).ok().map(|a| is_arc_transitive(&a)).transpose()?;
        let quotient = match construction_b(&s) {
            Ok(b) if s.attachment < s.radius => {
                let qg = quotient_graph(g, &b);
                Some(is_arc_transitive(&qg.graph)?)
            }
            _ => None,
        };
        rep.arc_transitive = Some(ArcTransitivity { graph: Some(is_arc_transitive(g)?), alt, quotient });
    }
    Ok(rep)
}

fn fill_alt(rep: &mut AnalysisReport, s: &AltStructure) {
    rep.r = Some(s.radius);
    rep.a = Some(s.attachment);
    rep.jum = Some(s.jum);
    rep.q = Some(s.q_set.clone());
    rep.alternating = Some(s.report());
}

/// DOT renderings of the graph and every derived graph available: the
/// orientation, the alternating-cycle graph and the quotient by B.
pub fn dot_files(ing: &Ingested) -> Vec<(String, String)> {
    let g = &ing.graph;
    let mut out = vec![("graph.dot".to_string(), g.to_dot("graph"))];
    let Some(group) = &ing.group else { return out };
    let Ok(cert) = certify_hat(g, group) else { return out };
    out.push(("orientation.dot".into(), cert.orientation.to_dot("orientation")));
    let Ok(s) = analyze(&cert.orientation) else { return out };
    if let Ok(alt) = alt_graph(&s) {
        out.push(("alt.dot".into(), alt.to_dot("alt")));
    }
    if let Ok(b) = construction_b(&s) {
        out.push(("quotient.dot".into(), quotient_graph(g, &b).graph.to_dot("quotient")));
    }
    out
}

/// JSON summary of the full automorphism group.
pub fn aut_json(g: &Graph) -> Result<Value, HarnessError> {
    let aut = automorphism_group(g)?;
    Ok(json!({
        "order": u64::try_from(aut.order).map_or_else(|_| json!(aut.order.to_string()), |o| json!(o)),
        "generators": aut.generators.iter().map(|p| p.images().to_vec()).collect::<Vec<_>>(),
        "arc_transitive": is_arc_transitive(g)?,
    }))
}

/// Transitivity of a group on a graph, as JSON.
pub fn transitivity_json(g: &Graph, group: &GroupByGenerators) -> Value {
    serde_json::to_value(transitivity_profile(g, group)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doyle_holt() -> Ingested {
        let inst = build_xo(XoParams::new(3, 9, 2).unwrap()).unwrap();
        Ingested { graph: inst.graph, group: Some(inst.group), orientation: None, params: None }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(serde_json::to_value(s).unwrap(), json!(s.name()));
        }
        assert!(matches!("nope".parse::<Suite>(), Err(HarnessError::UnknownSuite(_))));
    }

    #[test]
    fn invalid_parameters_are_skipped() {
        let grid = GridConfig::default()
            .with(InstanceSpec::Xo { m: 3, r: 9, q: 3 })
            .with(InstanceSpec::Xo { m: 3, r: 9, q: 2 });
        let rep = run_suite(Suite::Gta, &grid);
        assert_eq!((rep.skipped, rep.passed, rep.failed), (1, 1, 0));
        assert!(rep.passes());
    }

    #[test]
    fn doyle_holt_report() {
        let rep = analyze_cmd(&doyle_holt(), AnalyzeOptions::default()).unwrap();
        assert_eq!(rep.tag, InstanceTag::HalfArcTransitive);
        assert_eq!((rep.r, rep.a, rep.jum), (Some(9), Some(9), Some(2)));
        assert_eq!(rep.kernel.as_deref(), Some("D18"));
        let v: Value = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(v["case"], "tight");
        assert!(rep.errors.is_empty());
    }

    #[test]
    fn orientation_only_mode() {
        let mut ing = doyle_holt();
        ing.group = None;
        let rep = analyze_cmd(&ing, AnalyzeOptions { no_group: true, ..Default::default() }).unwrap();
        assert_eq!(rep.tag, InstanceTag::OrientationOnly);
        assert_eq!(rep.a, Some(9));
        assert!(rep.kernels.is_none());
        assert!(matches!(analyze_cmd(&ing, AnalyzeOptions::default()), Err(HarnessError::MissingGroup(_))));
    }

    #[test]
    fn arc_transitive_input_is_tagged() {
        let g = crate::constructions::build_circulant_pm(5, &[1, 2]).unwrap();
        let aut = automorphism_group(&g).unwrap().group().unwrap();
        let ing = Ingested { graph: g, group: Some(aut), orientation: None, params: None };
        let rep = analyze_cmd(&ing, AnalyzeOptions { arc_transitivity: true, ..Default::default() }).unwrap();
        assert_eq!(rep.tag, InstanceTag::ArcTransitive);
        assert!(rep.alternating.is_none());
        assert_eq!(rep.arc_transitive.unwrap().graph, Some(true));
    }

    #[test]
    fn bundle_round_trip() {
        let ing = doyle_holt();
        let text = to_bundle_json(&ing.graph, ing.group.as_ref(), Some(json!({"m": 3})));
        let back = ingest_str(&text, InputFormat::BundleJson).unwrap();
        assert_eq!(back.graph, ing.graph);
        assert_eq!(back.group.unwrap().generators(), ing.group.unwrap().generators());
        assert_eq!(back.params, Some(json!({"m": 3})));
    }

    #[test]
    fn bundle_errors() {
        let bad = r#"{"graph": {"n": 3, "edges": [[0,1],[1,2],[2,0]]}, "generators": [[0,0,1]]}"#;
        assert!(matches!(ingest_str(bad, InputFormat::BundleJson), Err(HarnessError::BadPermutation { index: 0, .. })));
        let truncated = r#"{"graph": {"n": 3, "edges": [[0,1]"#;
        assert!(matches!(ingest_str(truncated, InputFormat::BundleJson), Err(HarnessError::Bundle { .. })));
    }

    #[test]
    fn edge_list_of_c4() {
        let ing = ingest_str("4 4\n0 1\n1 2\n2 3\n3 0\n", InputFormat::Edgelist).unwrap();
        assert!(ing.graph.is_cycle());
        assert_eq!(ing.graph.order(), 4);
        assert!(ingest_str("4 4\n0 1\n1 2\n", InputFormat::Edgelist).is_err());
    }

    #[test]
    fn dot_output_covers_derived_graphs() {
        let names: Vec<String> = dot_files(&doyle_holt()).into_iter().map(|(n, _)| n).collect();
        assert_eq!(names, ["graph.dot", "orientation.dot", "alt.dot", "quotient.dot"]);
    }

    #[test]
    fn reports_are_deterministic() {
        let grid = GridConfig::default()
            .with(InstanceSpec::Xo { m: 3, r: 9, q: 2 })
            .with(InstanceSpec::Catalog { name: "cay-r6-a3".into() });
        let a = run_suite(Suite::Quotient, &grid).without_timing().to_json();
        let b = run_suite(Suite::Quotient, &grid).without_timing().to_json();
        assert_eq!(a, b);
    }
}
