//! Permutations and finite permutation groups given by generators.
//!
//! All permutations act on the right: `p.then(&q)` maps `x` to `q(p(x))`.
//! This is the only composition convention used anywhere in the crate, so
//! a product `g1 g2 g3` is read "apply `g1`, then `g2`, then `g3`".

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default bound on the number of group elements materialized by closure.
pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

/// Environment variable overriding [`DEFAULT_ELEMENT_CAP`].
pub const ELEMENT_CAP_ENV: &str = "HATKIT_ELEMENT_CAP";

/// Element cap taken from `HATKIT_ELEMENT_CAP` when set, else the default.
pub fn element_cap_from_env() -> usize {
    std::env::var(ELEMENT_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&c| c > 0)
        .unwrap_or(DEFAULT_ELEMENT_CAP)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("image list is not a bijection on 0..{degree}: {reason}")]
    NotBijection { degree: usize, reason: String },
    #[error("group closure exceeded the element cap of {cap}")]
    CapExceeded { cap: usize },
}

/// A bijection of `{0, .., n-1}` stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (i, &x) in images.iter().enumerate() {
            if x >= n {
                return Err(PermError::NotBijection {
                    degree: n,
                    reason: format!("image {x} of point {i} is out of range"),
                });
            }
            if seen[x] {
                return Err(PermError::NotBijection {
                    degree: n,
                    reason: format!("point {x} is hit twice"),
                });
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Permutation of `0..degree` given by disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        for cyc in cycles {
            for (i, &x) in cyc.iter().enumerate() {
                if x >= degree {
                    return Err(PermError::NotBijection {
                        degree,
                        reason: format!("cycle point {x} out of range"),
                    });
                }
                images[x] = cyc[(i + 1) % cyc.len()];
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "composing permutations of different degree");
        Permutation { images: self.images.iter().map(|&x| other.images[x]).collect() }
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// Order of the permutation (lcm of its cycle lengths).
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.degree()];
        let mut ord = 1u64;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            ord = lcm(ord, len);
        }
        ord
    }

    /// `g^-1 self g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.inverse().then(self).then(g)
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().enumerate().filter(|(i, &x)| *i == x).map(|(i, _)| i)
    }

    /// Image of a point set, sorted.
    pub fn image_of_set(&self, set: &[usize]) -> Vec<usize> {
        let mut img: Vec<usize> = set.iter().map(|&x| self.images[x]).collect();
        img.sort_unstable();
        img
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.images)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = PermError;
    fn try_from(v: Vec<usize>) -> Result<Self, PermError> {
        Permutation::from_images(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.images
    }
}

/// Free-function form of [`Permutation::then`], checking degrees.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation, PermError> {
    if p.degree() != q.degree() {
        return Err(PermError::DegreeMismatch(p.degree(), q.degree()));
    }
    Ok(p.then(q))
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Abstract structure of a small group, as far as this crate needs to know it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "order")]
pub enum StructureTag {
    Trivial,
    /// Cyclic group of the given order.
    Cyclic(usize),
    /// Dihedral group; the payload is the group order `2n`.
    Dihedral(usize),
    /// Elementary abelian 2-group; the payload is the rank `k` (order `2^k`).
    ElemAbelian2(u32),
    /// Anything else, with the group order.
    Other(usize),
}

impl StructureTag {
    pub fn group_order(&self) -> usize {
        match *self {
            StructureTag::Trivial => 1,
            StructureTag::Cyclic(n) | StructureTag::Dihedral(n) | StructureTag::Other(n) => n,
            StructureTag::ElemAbelian2(k) => 1usize << k,
        }
    }

    /// Tag for the cyclic group of order `n`, collapsing `n = 1` to `Trivial`.
    pub fn cyclic(n: usize) -> StructureTag {
        if n <= 1 {
            StructureTag::Trivial
        } else {
            StructureTag::Cyclic(n)
        }
    }

    /// Tag for the dihedral group of order `order`, following the small-order
    /// conventions of [`group_structure`].
    pub fn dihedral(order: usize) -> StructureTag {
        match order {
            0 | 1 => StructureTag::Trivial,
            2 => StructureTag::Cyclic(2),
            4 => StructureTag::ElemAbelian2(2),
            n => StructureTag::Dihedral(n),
        }
    }
}

impl fmt::Display for StructureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureTag::Trivial => write!(f, "1"),
            StructureTag::Cyclic(n) => write!(f, "C{n}"),
            StructureTag::Dihedral(n) => write!(f, "D{n}"),
            StructureTag::ElemAbelian2(k) => write!(f, "Z2^{k}"),
            StructureTag::Other(n) => write!(f, "order {n}"),
        }
    }
}

/// A permutation group given by generators, with a lazily materialized
/// element list.
#[derive(Debug)]
pub struct GroupByGenerators {
    degree: usize,
    generators: Vec<Permutation>,
    element_cap: usize,
    elements: OnceLock<Vec<Permutation>>,
}

impl Clone for GroupByGenerators {
    fn clone(&self) -> Self {
        let elements = OnceLock::new();
        if let Some(e) = self.elements.get() {
            let _ = elements.set(e.clone());
        }
        GroupByGenerators {
            degree: self.degree,
            generators: self.generators.clone(),
            element_cap: self.element_cap,
            elements,
        }
    }
}

impl GroupByGenerators {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermError> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch(degree, g.degree()));
        }
        Ok(GroupByGenerators {
            degree,
            generators,
            element_cap: element_cap_from_env(),
            elements: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        GroupByGenerators::new(degree, Vec::new()).expect("no generators")
    }

    pub fn with_element_cap(mut self, cap: usize) -> Self {
        self.element_cap = cap.max(1);
        self
    }

    /// Group whose element set is already known (and closed).
    pub(crate) fn from_closed_elements(
        degree: usize,
        generators: Vec<Permutation>,
        mut elements: Vec<Permutation>,
        element_cap: usize,
    ) -> Self {
        elements.sort_unstable();
        let cell = OnceLock::new();
        let _ = cell.set(elements);
        GroupByGenerators { degree, generators, element_cap, elements: cell }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn element_cap(&self) -> usize {
        self.element_cap
    }

    pub fn is_materialized(&self) -> bool {
        self.elements.get().is_some()
    }

    /// All group elements, sorted by image list. Computed by breadth-first
    /// closure on first use.
    pub fn elements(&self) -> Result<&[Permutation], PermError> {
        if let Some(e) = self.elements.get() {
            return Ok(e);
        }
        let closed = closure(self.degree, &self.generators, self.element_cap)?;
        let _ = self.elements.set(closed);
        Ok(self.elements.get().expect("just set"))
    }

    pub fn order(&self) -> Result<usize, PermError> {
        Ok(self.elements()?.len())
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool, PermError> {
        Ok(self.elements()?.binary_search(p).is_ok())
    }

    /// Group generated by these generators plus `extra`.
    pub fn extended_by(&self, extra: Permutation) -> Result<GroupByGenerators, PermError> {
        let mut gens = self.generators.clone();
        gens.push(extra);
        Ok(GroupByGenerators::new(self.degree, gens)?.with_element_cap(self.element_cap))
    }

    /// Orbits on points, each sorted, listed by least element.
    pub fn point_orbits(&self) -> Vec<Vec<usize>> {
        let points: Vec<usize> = (0..self.degree).collect();
        orbits_of(&self.generators, &points, |g, &x| g.apply(x))
            .into_iter()
            .map(|orb| orb.into_iter().map(|i| points[i]).collect())
            .collect()
    }

    /// Whether only the identity fixes any point in `points`.
    pub fn is_semiregular(&self, points: &[usize]) -> Result<bool, PermError> {
        Ok(self
            .elements()?
            .iter()
            .filter(|g| !g.is_identity())
            .all(|g| points.iter().all(|&x| g.apply(x) != x)))
    }
}

fn closure(
    degree: usize,
    generators: &[Permutation],
    cap: usize,
) -> Result<Vec<Permutation>, PermError> {
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::new();
    seen.insert(id.clone());
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in generators {
            let h = g.then(s);
            if !seen.contains(&h) {
                if seen.len() >= cap {
                    return Err(PermError::CapExceeded { cap });
                }
                seen.insert(h.clone());
                out.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Orbits of the group generated by `generators` on a list of objects, under
/// the action `act`. Orbits are returned as lists of indices into `objects`,
/// each list sorted, ordered by least index.
///
/// Objects must be closed under the action; an image outside the list panics.
pub fn orbits_of<T, F>(generators: &[Permutation], objects: &[T], act: F) -> Vec<Vec<usize>>
where
    T: Hash + Eq,
    F: Fn(&Permutation, &T) -> T,
{
    let index: HashMap<&T, usize> = objects.iter().enumerate().map(|(i, o)| (o, i)).collect();
    let mut orbit_id = vec![usize::MAX; objects.len()];
    let mut orbits = Vec::new();
    for start in 0..objects.len() {
        if orbit_id[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        orbit_id[start] = id;
        let mut members = vec![start];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for g in generators {
                let img = act(g, &objects[i]);
                let j = *index.get(&img).expect("object set is not closed under the action");
                if orbit_id[j] == usize::MAX {
                    orbit_id[j] = id;
                    members.push(j);
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        orbits.push(members);
    }
    orbits
}

/// Transitivity on a domain of labeled objects.
pub fn is_transitive_on<T, F>(generators: &[Permutation], objects: &[T], act: F) -> bool
where
    T: Hash + Eq,
    F: Fn(&Permutation, &T) -> T,
{
    objects.is_empty() || orbits_of(generators, objects, act).len() == 1
}

/// Subgroup of elements fixing every object, under `act`. The result has its
/// elements materialized and a small generating set extracted greedily.
pub fn action_kernel<T, F>(
    group: &GroupByGenerators,
    objects: &[T],
    act: F,
) -> Result<GroupByGenerators, PermError>
where
    T: Eq,
    F: Fn(&Permutation, &T) -> T,
{
    let elements = group.elements()?;
    let kernel: Vec<Permutation> = elements
        .iter()
        .filter(|g| objects.iter().all(|o| act(g, o) == *o))
        .cloned()
        .collect();
    Ok(subgroup_from_elements(group, kernel))
}

/// Kernel of the action on a family of point sets (each fixed setwise).
/// The sets may overlap.
pub fn setwise_kernel(
    group: &GroupByGenerators,
    sets: &[Vec<usize>],
) -> Result<GroupByGenerators, PermError> {
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); group.degree()];
    for (i, s) in sets.iter().enumerate() {
        for &x in s {
            containing[x].push(i);
        }
    }
    let elements = group.elements()?;
    let kernel: Vec<Permutation> = elements
        .iter()
        .filter(|g| {
            sets.iter()
                .enumerate()
                .all(|(i, s)| s.iter().all(|&x| containing[g.apply(x)].contains(&i)))
        })
        .cloned()
        .collect();
    Ok(subgroup_from_elements(group, kernel))
}

/// Wraps a closed element set of `parent` as a group, picking generators
/// greedily.
pub(crate) fn subgroup_from_elements(
    parent: &GroupByGenerators,
    mut elements: Vec<Permutation>,
) -> GroupByGenerators {
    elements.sort_unstable();
    let degree = parent.degree();
    let mut gens: Vec<Permutation> = Vec::new();
    let mut generated: HashSet<Permutation> = HashSet::from([Permutation::identity(degree)]);
    for e in &elements {
        if generated.contains(e) {
            continue;
        }
        gens.push(e.clone());
        generated = closure(degree, &gens, usize::MAX)
            .expect("uncapped closure")
            .into_iter()
            .collect();
        if generated.len() == elements.len() {
            break;
        }
    }
    GroupByGenerators::from_closed_elements(degree, gens, elements, parent.element_cap())
}

/// Recognizes trivial, cyclic, dihedral and elementary abelian 2-groups.
///
/// Small cases: order 2 is reported `Cyclic(2)`, and the Klein four-group
/// (which is also the dihedral group of order 4) is `ElemAbelian2(2)`.
pub fn group_structure(group: &GroupByGenerators) -> Result<StructureTag, PermError> {
    let elements = group.elements()?;
    let order = elements.len();
    if order == 1 {
        return Ok(StructureTag::Trivial);
    }
    let orders: Vec<u64> = elements.iter().map(|g| g.order()).collect();
    if orders.iter().any(|&o| o as usize == order) {
        return Ok(StructureTag::Cyclic(order));
    }
    if orders.iter().all(|&o| o <= 2) {
        // every element an involution forces commutativity
        return Ok(StructureTag::ElemAbelian2(order.trailing_zeros()));
    }
    if order % 2 == 0 {
        let half = order / 2;
        for (c, &oc) in elements.iter().zip(&orders) {
            if oc as usize != half {
                continue;
            }
            let rotations: HashSet<Permutation> = (0..half as u64).map(|k| c.pow(k)).collect();
            let c_inv = c.inverse();
            let inverted = elements
                .iter()
                .zip(&orders)
                .any(|(t, &ot)| ot == 2 && !rotations.contains(t) && c.conjugate_by(t) == c_inv);
            if inverted {
                return Ok(StructureTag::Dihedral(order));
            }
        }
    }
    Ok(StructureTag::Other(order))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_images(v.to_vec()).unwrap()
    }

    #[test]
    fn identity_composes_neutrally() {
        let q = p(&[2, 0, 1, 4, 3]);
        let id = Permutation::identity(5);
        assert_eq!(id.then(&q), q);
        assert_eq!(q.then(&id), q);
        assert!(q.then(&q.inverse()).is_identity());
        assert!(q.inverse().then(&q).is_identity());
    }

    #[test]
    fn product_of_two_three_cycles() {
        // a = (0 1 2), b = (2 3 4); x -> a -> b
        let a = Permutation::from_cycles(5, &[&[0, 1, 2]]).unwrap();
        let b = Permutation::from_cycles(5, &[&[2, 3, 4]]).unwrap();
        // 0->1->1, 1->2->3, 2->0->0, 3->3->4, 4->4->2
        assert_eq!(a.then(&b).images(), &[1, 3, 0, 4, 2]);
        // 0->0->1, 1->1->2, 2->3->3, 3->4->4, 4->2->0
        assert_eq!(b.then(&a).images(), &[1, 2, 3, 4, 0]);
    }

    #[test]
    fn compose_rejects_degree_mismatch() {
        let err = compose(&Permutation::identity(3), &Permutation::identity(4)).unwrap_err();
        assert_eq!(err, PermError::DegreeMismatch(3, 4));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn empty_generator_set_is_trivial() {
        let g = GroupByGenerators::new(4, vec![]).unwrap();
        assert_eq!(g.elements().unwrap(), &[Permutation::identity(4)]);
        assert_eq!(group_structure(&g).unwrap(), StructureTag::Trivial);
    }

    #[test]
    fn n_cycle_generates_cyclic_group() {
        let c = p(&[1, 2, 3, 4, 5, 6, 0]);
        let g = GroupByGenerators::new(7, vec![c]).unwrap();
        assert_eq!(g.order().unwrap(), 7);
        assert_eq!(g.point_orbits(), vec![(0..7).collect::<Vec<_>>()]);
        assert_eq!(group_structure(&g).unwrap(), StructureTag::Cyclic(7));
        assert!(g.is_semiregular(&(0..7).collect::<Vec<_>>()).unwrap());
    }

    #[test]
    fn trivial_group_orbits_are_singletons() {
        let g = GroupByGenerators::trivial(3);
        assert_eq!(g.point_orbits(), vec![vec![0], vec![1], vec![2]]);
        assert!(!is_transitive_on(g.generators(), &[0usize, 1], |g, &x| g.apply(x)));
        assert!(g.is_semiregular(&[0, 1, 2]).unwrap());
    }

    #[test]
    fn transposition_is_not_semiregular() {
        let g = GroupByGenerators::new(3, vec![p(&[1, 0, 2])]).unwrap();
        assert!(!g.is_semiregular(&[0, 1, 2]).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let g = GroupByGenerators::new(5, vec![p(&[1, 2, 3, 4, 0]), p(&[1, 0, 2, 3, 4])])
            .unwrap()
            .with_element_cap(50);
        assert_eq!(g.elements().unwrap_err(), PermError::CapExceeded { cap: 50 });
    }

    #[test]
    fn dihedral_of_order_eighteen() {
        // rotation and reflection of a 9-gon
        let rot = p(&(0..9).map(|i| (i + 1) % 9).collect::<Vec<_>>());
        let refl = p(&(0..9).map(|i| (9 - i) % 9).collect::<Vec<_>>());
        let g = GroupByGenerators::new(9, vec![rot, refl]).unwrap();
        assert_eq!(group_structure(&g).unwrap(), StructureTag::Dihedral(18));
    }

    #[test]
    fn small_dihedral_conventions() {
        // D of order 4 acting on a square's diagonals is the Klein group
        let a = Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap();
        let b = Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap();
        let g = GroupByGenerators::new(4, vec![a.clone(), b]).unwrap();
        assert_eq!(group_structure(&g).unwrap(), StructureTag::ElemAbelian2(2));
        let g2 = GroupByGenerators::new(4, vec![a]).unwrap();
        assert_eq!(group_structure(&g2).unwrap(), StructureTag::Cyclic(2));
        assert_eq!(StructureTag::dihedral(4), StructureTag::ElemAbelian2(2));
        assert_eq!(StructureTag::dihedral(2), StructureTag::Cyclic(2));
    }

    #[test]
    fn symmetric_group_is_other() {
        let g = GroupByGenerators::new(4, vec![p(&[1, 2, 3, 0]), p(&[1, 0, 2, 3])]).unwrap();
        assert_eq!(group_structure(&g).unwrap(), StructureTag::Other(24));
    }

    #[test]
    fn kernel_on_singletons_is_identity_part() {
        let g = GroupByGenerators::new(4, vec![p(&[1, 2, 3, 0])]).unwrap();
        let singles: Vec<Vec<usize>> = (0..4).map(|i| vec![i]).collect();
        let k = setwise_kernel(&g, &singles).unwrap();
        assert_eq!(k.order().unwrap(), 1);
        let k2 = action_kernel(&g, &singles, |g, s| g.image_of_set(s)).unwrap();
        assert_eq!(k2.order().unwrap(), 1);
    }

    #[test]
    fn kernel_on_blocks_of_a_square() {
        let rot = p(&[1, 2, 3, 0]);
        let refl = p(&[0, 3, 2, 1]);
        let g = GroupByGenerators::new(4, vec![rot, refl]).unwrap();
        let blocks = vec![vec![0, 2], vec![1, 3]];
        let k = setwise_kernel(&g, &blocks).unwrap();
        // identity, rotation by 2, the two diagonal reflections
        assert_eq!(k.order().unwrap(), 4);
        assert_eq!(group_structure(&k).unwrap(), StructureTag::ElemAbelian2(2));
        for e in k.elements().unwrap() {
            assert!(g.contains(e).unwrap());
        }
    }

    #[test]
    fn permutation_serializes_as_image_list() {
        let q = p(&[2, 0, 1]);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "[2,0,1]");
        let back: Permutation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
        assert!(serde_json::from_str::<Permutation>("[0,0]").is_err());
    }
}
