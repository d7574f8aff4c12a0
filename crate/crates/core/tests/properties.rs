//! Structural invariants checked over the built families, the Cayley
//! catalog and random inputs.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use proptest::prelude::*;

use hatkit_core::alternating::{analyze, AltStructure};
use hatkit_core::autsearch::{has_orbit_swapper, is_arc_transitive};
use hatkit_core::constructions::{
    build_wreath_instance, build_xe, build_xo, default_xe_grid, default_xo_grid, Instance, CATALOG,
};
use hatkit_core::formats::{from_graph6, from_sparse6, parse_edge_list, to_graph6, to_sparse6};
use hatkit_core::graph::{certify_hat, Graph, OrientedGraph};
use hatkit_core::perm::{orbits_of, GroupByGenerators, Permutation};
use hatkit_core::quotients::{alt_action_profile, alt_graph, construction_b, kernels, quotient_graph};

struct Case {
    name: String,
    inst: Instance,
    og: OrientedGraph,
    s: AltStructure,
}

impl std::fmt::Debug for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.name)
    }
}

fn cases() -> &'static [Case] {
    static CASES: OnceLock<Vec<Case>> = OnceLock::new();
    CASES.get_or_init(|| {
        let mut built: Vec<(String, Instance)> = Vec::new();
        for p in default_xo_grid() {
            built.push((p.to_string(), build_xo(p).unwrap()));
        }
        for p in default_xe_grid() {
            built.push((p.to_string(), build_xe(p).unwrap()));
        }
        for n in 3..=8 {
            built.push((format!("W({n})"), build_wreath_instance(n).unwrap()));
        }
        for e in CATALOG {
            built.push((e.name.to_string(), e.build().unwrap()));
        }
        built
            .into_iter()
            .map(|(name, inst)| {
                let og = certify_hat(&inst.graph, &inst.group).unwrap().orientation;
                let s = analyze(&og).unwrap();
                Case { name, inst, og, s }
            })
            .collect()
    })
}

fn case() -> impl Strategy<Value = &'static Case> {
    (0..cases().len()).prop_map(|i| &cases()[i])
}

/// Exponent of prime `p` in `n!`.
fn legendre(n: usize, p: usize) -> usize {
    let (mut e, mut k) = (0, p);
    while k <= n {
        e += n / k;
        k *= p;
    }
    e
}

fn divides_factorial(order: usize, n: usize) -> bool {
    let mut m = order;
    let mut p = 2;
    while m > 1 {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > legendre(n, p) {
            return false;
        }
        p += 1;
    }
    true
}

fn random_perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn random_graph() -> impl Strategy<Value = Graph> {
    (1usize..80).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..(3 * n)).prop_map(move |pairs| {
            let edges: BTreeSet<(usize, usize)> =
                pairs.into_iter().filter(|(u, v)| u != v).map(|(u, v)| (u.min(v), u.max(v))).collect();
            Graph::new(n, &edges.into_iter().collect::<Vec<_>>()).unwrap()
        })
    })
}

fn group_order_and_closure(c: &Case) -> Result<(), TestCaseError> {
    let g = &c.inst.group;
    let n = g.degree();
    let order = g.order().unwrap();
    prop_assert!(divides_factorial(order, n), "{}", c.name);
    let again = GroupByGenerators::new(n, g.generators().to_vec()).unwrap();
    prop_assert_eq!(again.elements().unwrap(), g.elements().unwrap());
    for (label, orbits) in [
        ("vertex", g.point_orbits()),
        ("edge", orbits_of(g.generators(), c.inst.graph.edges(), |p, &(u, v)| {
            let (a, b) = (p.apply(u), p.apply(v));
            (a.min(b), a.max(b))
        })),
        ("arc", orbits_of(g.generators(), &c.inst.graph.arcs(), |p, &(u, v)| (p.apply(u), p.apply(v)))),
    ] {
        for o in orbits {
            prop_assert_eq!(order % o.len(), 0, "{} {} orbit", c.name, label);
        }
    }
    Ok(())
}

fn stabilizer_order_two_above_antipodal(c: &Case) -> Result<(), TestCaseError> {
    if c.s.attachment >= 3 {
        prop_assert_eq!(c.inst.group.order().unwrap(), 2 * c.s.n, "{}", c.name);
    }
    Ok(())
}

fn cycle_kernel_is_normal(c: &Case) -> Result<(), TestCaseError> {
    let k = kernels(&c.inst.group, &c.s).unwrap();
    let elems = k.alt.elements().unwrap();
    for g in c.inst.group.generators() {
        for x in elems {
            prop_assert!(k.alt.contains(&x.conjugate_by(g)).unwrap(), "{}", c.name);
        }
    }
    Ok(())
}

fn certificate_orientation(c: &Case) -> Result<(), TestCaseError> {
    let og = &c.og;
    for g in c.inst.group.generators() {
        prop_assert!(og.preserved_by(g));
    }
    let arcs: BTreeSet<_> = og.arcs().into_iter().collect();
    let reversed: BTreeSet<_> = og.arcs().into_iter().map(|(u, v)| (v, u)).collect();
    prop_assert!(arcs.is_disjoint(&reversed));
    prop_assert_eq!(arcs.len() + reversed.len(), c.inst.graph.arcs().len());
    for v in 0..og.order() {
        let (o, i) = (og.out_neighbors(v), og.in_neighbors(v));
        prop_assert!(o[0] != o[1] && i[0] != i[1]);
    }
    Ok(())
}

fn alternating_cycle_invariants(c: &Case) -> Result<(), TestCaseError> {
    let s = &c.s;
    let (r, a) = (s.radius, s.attachment);
    prop_assert_eq!(2 * r % a, 0);
    prop_assert_eq!(s.ell, 2 * r / a);
    let mut seen_edges = BTreeSet::new();
    for cyc in &s.cycles {
        prop_assert_eq!(cyc.len(), 2 * r);
        for p in 0..cyc.len() {
            let (x, y, z) = (cyc[p], cyc[(p + 1) % cyc.len()], cyc[(p + 2) % cyc.len()]);
            // consecutive edges point opposite ways along the cycle
            prop_assert_ne!(c.og.is_arc(x, y), c.og.is_arc(y, z));
            prop_assert!(seen_edges.insert((x.min(y), x.max(y))));
        }
    }
    prop_assert_eq!(seen_edges.len(), c.inst.graph.size());
    if a == 2 * r {
        prop_assert_eq!(s.cycles.len(), 2);
    } else {
        for v in 0..s.n {
            let on: Vec<usize> = (0..s.cycles.len()).filter(|&ci| s.cycles[ci].contains(&v)).collect();
            prop_assert_eq!(on.len(), 2);
        }
    }
    for i in 0..s.cycles.len() {
        let ci: BTreeSet<_> = s.cycles[i].iter().collect();
        for j in i + 1..s.cycles.len() {
            let m = s.cycles[j].iter().filter(|v| ci.contains(v)).count();
            prop_assert!(m == 0 || m == a, "{}: cycles meet in {}", c.name, m);
        }
    }
    let mut covered = vec![0; s.n];
    for (set, &(lo, hi)) in s.attachment_sets.iter().zip(&s.attachment_pairs) {
        prop_assert_eq!(set.len(), a);
        for &v in set {
            covered[v] += 1;
        }
        for cyc in [lo, hi] {
            let mut pos: Vec<usize> = set.iter().map(|&v| s.position_on(v, cyc).unwrap()).collect();
            pos.sort_unstable();
            prop_assert!(pos.iter().all(|p| (p - pos[0]) % s.ell == 0), "{}", c.name);
        }
    }
    prop_assert!(covered.iter().all(|&k| k == 1));
    prop_assert!(2 * s.jum <= a.max(1));
    prop_assert_eq!(s.jum, s.q_set[0]);
    let rev = analyze(&c.og.reversed()).unwrap();
    prop_assert_eq!(&rev.q_set, &s.q_set);
    prop_assert_eq!((rev.q_t, rev.q_h), (s.q_h, s.q_t));
    Ok(())
}

fn derived_graphs_arc_transitive_when_tight_or_swapped(c: &Case) -> Result<(), TestCaseError> {
    let s = &c.s;
    if s.attachment < 2 * s.radius
        && (s.attachment == s.radius || has_orbit_swapper(&c.inst.graph, &c.inst.group).unwrap())
    {
        prop_assert!(is_arc_transitive(&alt_graph(s).unwrap()).unwrap(), "{}", c.name);
        let b = construction_b(s).unwrap();
        let q = quotient_graph(&c.inst.graph, &b);
        prop_assert!(is_arc_transitive(&q.graph).unwrap(), "{}", c.name);
    }
    Ok(())
}

fn induced_alt_action(c: &Case) -> Result<(), TestCaseError> {
    let s = &c.s;
    if s.attachment < s.radius && s.cycles.len() > 2 {
        let p = alt_action_profile(&c.inst.group, s).unwrap();
        prop_assert!(p.vertex_transitive && p.edge_transitive);
        prop_assert_eq!(p.arc_transitive, !s.a_divides_r(), "{}", c.name);
    }
    Ok(())
}

const CHECKS: &[(&str, fn(&Case) -> Result<(), TestCaseError>)] = &[
    ("group_order_and_closure", group_order_and_closure),
    ("stabilizer_order_two_above_antipodal", stabilizer_order_two_above_antipodal),
    ("cycle_kernel_is_normal", cycle_kernel_is_normal),
    ("certificate_orientation", certificate_orientation),
    ("alternating_cycle_invariants", alternating_cycle_invariants),
    ("derived_graphs_arc_transitive_when_tight_or_swapped", derived_graphs_arc_transitive_when_tight_or_swapped),
    ("induced_alt_action", induced_alt_action),
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_instances_satisfy_invariants(c in case()) {
        for (_, check) in CHECKS {
            check(c)?;
        }
    }








    #[test]
    fn format_round_trips(g in random_graph()) {
        prop_assert_eq!(&from_graph6(&to_graph6(&g)).unwrap(), &g);
        prop_assert_eq!(&from_sparse6(&to_sparse6(&g)).unwrap(), &g);
        prop_assert_eq!(&parse_edge_list(&g.to_edge_list()).unwrap(), &g);
    }

    #[test]
    fn permutation_algebra(p in random_perm(9), q in random_perm(9), r in random_perm(9)) {
        prop_assert_eq!(p.then(&q).then(&r), p.then(&q.then(&r)));
        prop_assert!(p.then(&p.inverse()).is_identity());
        prop_assert!(p.pow(p.order()).is_identity());
        prop_assert_eq!(p.conjugate_by(&q), q.inverse().then(&p).then(&q));
    }
}

#[test]
fn every_instance_satisfies_invariants() {
    for c in cases() {
        for (name, check) in CHECKS {
            if let Err(e) = check(c) {
                panic!("{name} fails on {}: {e}", c.name);
            }
        }
    }
}
