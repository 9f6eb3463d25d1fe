//! Finite groups given by Cayley tables.
//!
//! Elements are dense indices `0..order` with the identity at index 0. The
//! conjugacy classes are computed once at construction and cached, so every
//! downstream lookup (`class_of`, `inverse`, `multiply`) is a table access.
//!
//! The physics literature on quantum doubles calls the centralizer
//! `{b : ab = ba}` of a single element the *normalizer* `N_a`. This module
//! computes centralizers and exposes them under that name,
//! [`FiniteGroup::normalizer`]. Note that the group-theoretic normalizer of
//! the cyclic subgroup `<a>` can be larger.

use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QdError, Result};

/// Element index into a [`FiniteGroup`].
pub type Element = usize;

/// Default cap on the order of groups built from generators.
pub const DEFAULT_MAX_ORDER: usize = 5040;

/// Full associativity is checked up to this order; above it, random triples.
const FULL_ASSOCIATIVITY_LIMIT: usize = 256;

/// Which constructor produced a group. Used to look up bundled irrep matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupKind {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    /// S3 in the element order (e, y, y², x, xy, xy²) with xy = y²x.
    S3Triangle,
    Generic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugacyClass {
    pub representative: Element,
    /// Sorted ascending; `members[0] == representative`.
    pub members: Vec<Element>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: Element) -> bool {
        self.members.binary_search(&g).is_ok()
    }
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    cayley: Vec<Element>,
    inverse: Vec<Element>,
    labels: Vec<String>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
    kind: GroupKind,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.cayley == other.cayley
    }
}

impl FiniteGroup {
    /// Builds a group from a row-major Cayley table, validating all group axioms.
    pub fn from_cayley(name: &str, table: Vec<Vec<Element>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(QdError::Argument("empty Cayley table".into()));
        }
        if table.iter().any(|row| row.len() != n) {
            return Err(QdError::Argument("Cayley table is not square".into()));
        }
        let cayley: Vec<Element> = table.into_iter().flatten().collect();
        Self::from_flat(name, n, cayley, labels, GroupKind::Generic)
    }

    fn from_flat(
        name: &str,
        n: usize,
        cayley: Vec<Element>,
        labels: Option<Vec<String>>,
        kind: GroupKind,
    ) -> Result<Self> {
        if let Some(&bad) = cayley.iter().find(|&&x| x >= n) {
            return Err(QdError::Argument(format!("Cayley entry {bad} out of range for order {n}")));
        }
        // Latin square: every row and column is a permutation.
        let mut seen = vec![usize::MAX; n];
        for r in 0..n {
            for c in 0..n {
                let v = cayley[r * n + c];
                if seen[v] == r {
                    return Err(QdError::Argument(format!("row {r} of Cayley table repeats element {v}")));
                }
                seen[v] = r;
            }
        }
        let mut seen = vec![usize::MAX; n];
        for c in 0..n {
            for r in 0..n {
                let v = cayley[r * n + c];
                if seen[v] == c {
                    return Err(QdError::Argument(format!("column {c} of Cayley table repeats element {v}")));
                }
                seen[v] = c;
            }
        }
        for g in 0..n {
            if cayley[g] != g || cayley[g * n] != g {
                return Err(QdError::Argument("element 0 must be the identity".into()));
            }
        }
        let mut inverse = vec![0; n];
        for g in 0..n {
            // Latin rows guarantee exactly one solution of g·h = e.
            let h = (0..n).find(|&h| cayley[g * n + h] == 0).unwrap();
            if cayley[h * n + g] != 0 {
                return Err(QdError::Argument(format!("element {g} has no two-sided inverse")));
            }
            inverse[g] = h;
        }
        check_associativity(n, &cayley)?;

        let labels = match labels {
            Some(l) => {
                check_labels(&l, n)?;
                l
            }
            None => (0..n).map(|i| i.to_string()).collect(),
        };

        let mut group = FiniteGroup {
            name: name.to_string(),
            order: n,
            cayley,
            inverse,
            labels,
            classes: Vec::new(),
            class_of: Vec::new(),
            kind,
        };
        group.compute_classes();
        Ok(group)
    }

    fn compute_classes(&mut self) {
        let n = self.order;
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        // Scanning in index order yields: identity class first, then by smallest member.
        for a in 0..n {
            if class_of[a] != usize::MAX {
                continue;
            }
            let mut members: Vec<Element> = (0..n).map(|g| self.conjugate(g, a)).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                class_of[m] = classes.len();
            }
            classes.push(ConjugacyClass { representative: a, members });
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Replaces the name and, if given, the element labels.
    pub fn renamed(mut self, name: &str, labels: Option<Vec<String>>) -> Result<Self> {
        if let Some(l) = labels {
            check_labels(&l, self.order)?;
            self.labels = l;
        }
        self.name = name.to_string();
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn identity(&self) -> Element {
        0
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, g: Element, h: Element) -> Element {
        self.cayley[g * self.order + h]
    }

    /// Checked multiplication.
    pub fn multiply(&self, g: Element, h: Element) -> Result<Element> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.mul(g, h))
    }

    #[inline]
    pub fn inv(&self, g: Element) -> Element {
        self.inverse[g]
    }

    /// `g a g⁻¹`.
    #[inline]
    pub fn conjugate(&self, g: Element, a: Element) -> Element {
        self.mul(self.mul(g, a), self.inv(g))
    }

    pub fn check(&self, g: Element) -> Result<()> {
        if g < self.order {
            Ok(())
        } else {
            Err(QdError::Argument(format!("element {g} out of range for group of order {}", self.order)))
        }
    }

    pub fn cayley_rows(&self) -> Vec<Vec<Element>> {
        self.cayley.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn label(&self, g: Element) -> &str {
        &self.labels[g]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element_by_label(&self, label: &str) -> Option<Element> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn conjugacy_classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, g: Element) -> usize {
        self.class_of[g]
    }

    /// `C_<label of representative>`, e.g. `C_x`.
    pub fn class_label(&self, class: usize) -> String {
        format!("C_{}", self.labels[self.classes[class].representative])
    }

    pub fn class_by_label(&self, label: &str) -> Option<usize> {
        (0..self.classes.len()).find(|&c| self.class_label(c) == label)
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.order
    }

    pub fn commute(&self, a: Element, b: Element) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Centralizer `{b : ab = ba}` (the "normalizer" N_a).
    pub fn normalizer(&self, a: Element) -> Result<Subgroup> {
        self.check(a)?;
        let elements: Vec<Element> = self.elements().filter(|&b| self.commute(a, b)).collect();
        Subgroup::new(self, elements)
    }

    /// Some `k` with `k r k⁻¹ = g`, if `g` is conjugate to `r`.
    pub fn conjugator(&self, r: Element, g: Element) -> Option<Element> {
        self.elements().find(|&k| self.conjugate(k, r) == g)
    }

    pub fn element_order(&self, g: Element) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    // ----- constructors -------------------------------------------------

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(QdError::Argument("cyclic group needs n ≥ 1".into()));
        }
        let cayley = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        Self::from_flat(&format!("Z{n}"), n, cayley, None, GroupKind::Cyclic(n))
    }

    /// Dihedral group of order `2n`: elements `r^k` then `s r^k`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(QdError::Argument("dihedral group needs n ≥ 1".into()));
        }
        let order = 2 * n;
        let split = |g: usize| (g / n, g % n);
        let mut cayley = Vec::with_capacity(order * order);
        for g in 0..order {
            for h in 0..order {
                let (a, k) = split(g);
                let (b, l) = split(h);
                // s^a r^k s^b r^l = s^(a+b) r^((-1)^b k + l)
                let rk = if b == 1 { (n - k) % n } else { k };
                cayley.push(((a + b) % 2) * n + (rk + l) % n);
            }
        }
        let labels = (0..order)
            .map(|g| match split(g) {
                (0, 0) => "e".to_string(),
                (0, k) => format!("r{k}"),
                (_, 0) => "s".to_string(),
                (_, k) => format!("sr{k}"),
            })
            .collect();
        Self::from_flat(&format!("D{n}"), order, cayley, Some(labels), GroupKind::Dihedral(n))
    }

    /// Symmetric group on `n ≤ 7` points, elements in lexicographic order.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > 7 {
            return Err(QdError::Argument(format!("symmetric group S{n} not supported (1 ≤ n ≤ 7)")));
        }
        let perms = lexicographic_permutations(n);
        let labels = perms.iter().map(|p| cycle_notation(p)).collect();
        let mut g = Self::from_permutations(&format!("S{n}"), &perms, Some(labels))?;
        g.kind = GroupKind::Symmetric(n);
        Ok(g)
    }

    /// S3 as triangle symmetries, ordered (e, y, y², x, xy, xy²).
    ///
    /// `y` is the rotation `i ↦ i+1 (mod 3)` and `x` the reflection `i ↦ −i`;
    /// products compose right-to-left so that `xy = y²x`.
    pub fn s3() -> Self {
        let y = vec![1u32, 2, 0];
        let x = vec![0u32, 2, 1];
        let e = vec![0u32, 1, 2];
        let y2 = compose(&y, &y);
        let xy = compose(&x, &y);
        let xy2 = compose(&x, &y2);
        let perms = vec![e, y, y2, x, xy, xy2];
        let labels = ["e", "y", "y2", "x", "xy", "xy2"].iter().map(|s| s.to_string()).collect();
        let mut g = Self::from_permutations("S3", &perms, Some(labels)).expect("S3 table is valid");
        g.kind = GroupKind::S3Triangle;
        g
    }

    /// Resolves built-in names: `s3`, `trivial`, `zN`, `dN`, `sN`.
    pub fn builtin(name: &str) -> Result<Self> {
        let lower = name.trim().to_ascii_lowercase();
        if lower == "s3" {
            return Ok(Self::s3());
        }
        if lower == "trivial" {
            return Self::cyclic(1);
        }
        let unknown = || QdError::Argument(format!("unknown built-in group '{name}' (try s3, z2, z3, d4, s4)"));
        let (prefix, digits) = lower.split_at(1.min(lower.len()));
        let n: usize = digits.parse().map_err(|_| unknown())?;
        match prefix {
            "z" => Self::cyclic(n),
            "d" => Self::dihedral(n),
            "s" => Self::symmetric(n),
            _ => Err(unknown()),
        }
    }

    /// Closure of a set of permutations with the default order cap.
    pub fn from_generators(perms: &[Vec<usize>]) -> Result<Self> {
        Self::from_generators_capped(perms, DEFAULT_MAX_ORDER)
    }

    /// Closure of a set of permutations on `m` points.
    ///
    /// Elements are numbered in breadth-first discovery order starting from
    /// the identity; products compose right-to-left, `(pq)(i) = p(q(i))`.
    pub fn from_generators_capped(perms: &[Vec<usize>], max_order: usize) -> Result<Self> {
        let m = perms.first().map(|p| p.len()).unwrap_or(0);
        let mut gens: Vec<Vec<u32>> = Vec::with_capacity(perms.len());
        for p in perms {
            if p.len() != m {
                return Err(QdError::Argument("generators act on different numbers of points".into()));
            }
            let mut hit = vec![false; m];
            for &i in p {
                if i >= m || hit[i] {
                    return Err(QdError::Argument(format!("{p:?} is not a permutation of 0..{m}")));
                }
                hit[i] = true;
            }
            gens.push(p.iter().map(|&i| i as u32).collect());
        }
        let identity: Vec<u32> = (0..m as u32).collect();
        let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut elements = vec![identity.clone()];
        index.insert(identity, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for s in &gens {
                let y = compose(&elements[i], s);
                if !index.contains_key(&y) {
                    if elements.len() == max_order {
                        return Err(QdError::Capacity(format!("generated group exceeds maximum order {max_order}")));
                    }
                    index.insert(y.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(y);
                }
            }
        }
        let labels = elements.iter().map(|p| cycle_notation(p)).collect();
        Self::from_permutations_indexed("perm", &elements, &index, Some(labels))
    }

    fn from_permutations(name: &str, perms: &[Vec<u32>], labels: Option<Vec<String>>) -> Result<Self> {
        let index: HashMap<Vec<u32>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Self::from_permutations_indexed(name, perms, &index, labels)
    }

    fn from_permutations_indexed(
        name: &str,
        perms: &[Vec<u32>],
        index: &HashMap<Vec<u32>, usize>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let n = perms.len();
        let mut cayley = Vec::with_capacity(n * n);
        for p in perms {
            for q in perms {
                let pq = compose(p, q);
                let k = *index.get(&pq).ok_or_else(|| QdError::Argument("permutation set is not closed".into()))?;
                cayley.push(k);
            }
        }
        Self::from_flat(name, n, cayley, labels, GroupKind::Generic)
    }
}

fn check_labels(labels: &[String], n: usize) -> Result<()> {
    if labels.len() != n {
        return Err(QdError::Argument(format!("{} labels given for a group of order {n}", labels.len())));
    }
    let distinct: std::collections::HashSet<&String> = labels.iter().collect();
    if distinct.len() != n {
        return Err(QdError::Argument("element labels are not distinct".into()));
    }
    Ok(())
}

/// `(pq)(i) = p(q(i))`.
fn compose(p: &[u32], q: &[u32]) -> Vec<u32> {
    q.iter().map(|&i| p[i as usize]).collect()
}

fn lexicographic_permutations(n: usize) -> Vec<Vec<u32>> {
    let mut cur: Vec<u32> = (0..n as u32).collect();
    let mut out = vec![cur.clone()];
    // next permutation until the sequence is descending
    while let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) {
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
    out
}

fn cycle_notation(p: &[u32]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut i = p[start] as usize;
        while i != start {
            seen[i] = true;
            cycle.push(i);
            i = p[i] as usize;
        }
        let body: Vec<String> = cycle.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("({})", body.join(" ")));
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

fn check_associativity(n: usize, cayley: &[Element]) -> Result<()> {
    let m = |a: usize, b: usize| cayley[a * n + b];
    let fail = |a, b, c| Err(QdError::Argument(format!("Cayley table not associative at ({a}, {b}, {c})")));
    if n <= FULL_ASSOCIATIVITY_LIMIT {
        for a in 0..n {
            for b in 0..n {
                let ab = m(a, b);
                for c in 0..n {
                    if m(ab, c) != m(a, m(b, c)) {
                        return fail(a, b, c);
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x005e_ed0f_a55c);
        for _ in 0..10 * n {
            let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            if m(m(a, b), c) != m(a, m(b, c)) {
                return fail(a, b, c);
            }
        }
    }
    Ok(())
}

/// A subgroup, carried both as parent indices and as a standalone group.
///
/// The standalone group numbers elements in ascending parent-index order, so
/// index 0 is again the identity.
#[derive(Debug, Clone)]
pub struct Subgroup {
    parent_order: usize,
    elements: Vec<Element>,
    to_local: HashMap<Element, usize>,
    group: FiniteGroup,
}

impl Subgroup {
    pub fn new(parent: &FiniteGroup, mut elements: Vec<Element>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        for &g in &elements {
            parent.check(g)?;
        }
        if elements.first() != Some(&0) {
            return Err(QdError::Argument("subset does not contain the identity".into()));
        }
        let to_local: HashMap<Element, usize> = elements.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let k = elements.len();
        let mut cayley = Vec::with_capacity(k * k);
        for &a in &elements {
            for &b in &elements {
                let ab = parent.mul(a, b);
                let local = to_local
                    .get(&ab)
                    .ok_or_else(|| QdError::Argument("subset is not closed under multiplication".into()))?;
                cayley.push(*local);
            }
        }
        let labels = elements.iter().map(|&g| parent.label(g).to_string()).collect();
        let name = format!("{}<{}>", parent.name(), k);
        let group = FiniteGroup::from_flat(&name, k, cayley, Some(labels), GroupKind::Generic)?;
        Ok(Subgroup { parent_order: parent.order(), elements, to_local, group })
    }

    pub fn whole(parent: &FiniteGroup) -> Self {
        Self::new(parent, parent.elements().collect()).expect("whole group is a subgroup")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Parent indices, ascending.
    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn as_group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn embed(&self, local: usize) -> Element {
        self.elements[local]
    }

    pub fn local_index(&self, parent_element: Element) -> Option<usize> {
        self.to_local.get(&parent_element).copied()
    }

    pub fn contains(&self, parent_element: Element) -> bool {
        self.to_local.contains_key(&parent_element)
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    /// `k H k⁻¹` as a sorted list of parent indices.
    pub fn conjugated_elements(&self, parent: &FiniteGroup, k: Element) -> Vec<Element> {
        let mut v: Vec<Element> = self.elements.iter().map(|&h| parent.conjugate(k, h)).collect();
        v.sort_unstable();
        v
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn class_sizes(g: &FiniteGroup) -> Vec<usize> {
        g.conjugacy_classes().iter().map(|c| c.size()).collect()
    }

    #[test]
    fn s3_relations() {
        let g = FiniteGroup::s3();
        let e = |s| g.element_by_label(s).unwrap();
        assert_eq!(g.mul(e("x"), e("y")), g.mul(e("y2"), e("x")));
        assert_eq!(g.mul(e("x"), e("y")), e("xy"));
        assert_eq!(g.mul(e("x"), e("y2")), e("xy2"));
        assert_eq!(g.mul(e("y"), e("y2")), e("e"));
        for s in ["x", "xy", "xy2"] {
            assert_eq!(g.mul(e(s), e(s)), 0);
        }
        assert_eq!(g.kind(), GroupKind::S3Triangle);
    }

    #[test]
    fn multiply_examples() {
        let z4 = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(z4.multiply(3, 2).unwrap(), 1);
        assert!(z4.multiply(4, 0).is_err());
        let g = FiniteGroup::s3();
        for h in g.elements() {
            assert_eq!(g.multiply(0, h).unwrap(), h);
        }
    }

    #[test]
    fn s3_classes_and_normalizers() {
        let g = FiniteGroup::s3();
        let classes = g.conjugacy_classes();
        assert_eq!(class_sizes(&g), vec![1, 2, 3]);
        assert_eq!(classes[1].members, vec![1, 2]);
        assert_eq!(classes[2].members, vec![3, 4, 5]);
        assert_eq!(g.class_label(1), "C_y");
        assert_eq!(g.class_label(2), "C_x");
        assert_eq!(g.normalizer(3).unwrap().elements(), &[0, 3]);
        assert_eq!(g.normalizer(1).unwrap().elements(), &[0, 1, 2]);
        assert_eq!(g.normalizer(2).unwrap().elements(), g.normalizer(1).unwrap().elements());
        assert_eq!(g.normalizer(0).unwrap().order(), 6);
    }

    #[test]
    fn abelian_classes_are_singletons() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        assert_eq!(class_sizes(&z3), vec![1, 1, 1]);
        assert!(z3.is_abelian());
    }

    #[test]
    fn generators_closure() {
        let s3 = FiniteGroup::from_generators(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(class_sizes(&s3), vec![1, 3, 2]);
        let triv = FiniteGroup::from_generators(&[vec![0, 1, 2]]).unwrap();
        assert_eq!(triv.order(), 1);
        let z4 = FiniteGroup::from_generators(&[vec![1, 2, 3, 0]]).unwrap();
        assert_eq!(z4.order(), 4);
        assert!(z4.is_abelian());
        assert_eq!(z4.element_order(1), 4);
    }

    #[test]
    fn generator_errors() {
        assert!(matches!(FiniteGroup::from_generators(&[vec![0, 0, 1]]), Err(QdError::Argument(_))));
        let s5 = [vec![1, 0, 2, 3, 4], vec![1, 2, 3, 4, 0]];
        assert!(matches!(FiniteGroup::from_generators_capped(&s5, 60), Err(QdError::Capacity(_))));
        assert_eq!(FiniteGroup::from_generators(&s5).unwrap().order(), 120);
    }

    #[test]
    fn quaternion_classes() {
        // Q8 via its left-regular representation; brute-force class sizes.
        let q8 = quaternion_regular();
        assert_eq!(q8.order(), 8);
        let mut sizes = class_sizes(&q8);
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
    }

    pub(crate) fn quaternion_regular() -> FiniteGroup {
        // Elements ±1, ±i, ±j, ±k encoded as (sign, unit) -> 2*unit + sign.
        let mul = |a: usize, b: usize| -> usize {
            let (sa, ua) = (a % 2, a / 2);
            let (sb, ub) = (b % 2, b / 2);
            // unit table for 1,i,j,k with sign
            const T: [[(usize, usize); 4]; 4] = [
                [(0, 0), (0, 1), (0, 2), (0, 3)],
                [(0, 1), (1, 0), (0, 3), (1, 2)],
                [(0, 2), (1, 3), (1, 0), (0, 1)],
                [(0, 3), (0, 2), (1, 1), (1, 0)],
            ];
            let (s, u) = T[ua][ub];
            2 * u + (sa + sb + s) % 2
        };
        let gens: Vec<Vec<usize>> = [2usize, 4].iter().map(|&g| (0..8).map(|x| mul(g, x)).collect()).collect();
        FiniteGroup::from_generators(&gens).unwrap()
    }

    #[test]
    fn builtin_names() {
        assert_eq!(FiniteGroup::builtin("z5").unwrap().order(), 5);
        assert_eq!(FiniteGroup::builtin("D4").unwrap().order(), 8);
        assert_eq!(FiniteGroup::builtin("s4").unwrap().order(), 24);
        assert_eq!(FiniteGroup::builtin("trivial").unwrap().order(), 1);
        assert!(FiniteGroup::builtin("q8").is_err());
        assert!(FiniteGroup::builtin("s9").is_err());
    }

    #[test]
    fn cayley_validation() {
        assert!(FiniteGroup::from_cayley("bad", vec![vec![0, 1], vec![1, 1]], None).is_err());
        assert!(FiniteGroup::from_cayley("bad", vec![vec![1, 0], vec![0, 1]], None).is_err());
        // Latin square with identity 0 but not associative (order 5 loop).
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(FiniteGroup::from_cayley("loop", loop5, None).is_err());
        let z2 = FiniteGroup::from_cayley("z2", vec![vec![0, 1], vec![1, 0]], None).unwrap();
        assert_eq!(z2.inv(1), 1);
    }

    #[test]
    fn subgroup_validation() {
        let g = FiniteGroup::s3();
        assert!(Subgroup::new(&g, vec![0, 1]).is_err());
        assert!(Subgroup::new(&g, vec![1, 2]).is_err());
        let h = Subgroup::new(&g, vec![0, 4]).unwrap();
        assert_eq!(h.as_group().order(), 2);
        assert_eq!(h.as_group().label(1), "xy");
    }

    #[test]
    fn orbit_stabilizer_and_conjugate_normalizers() {
        for g in [
            FiniteGroup::s3(),
            FiniteGroup::dihedral(4).unwrap(),
            FiniteGroup::dihedral(5).unwrap(),
            FiniteGroup::symmetric(4).unwrap(),
            FiniteGroup::cyclic(6).unwrap(),
            quaternion_regular(),
        ] {
            let total: usize = g.conjugacy_classes().iter().map(|c| c.size()).sum();
            assert_eq!(total, g.order());
            for a in g.elements() {
                let n = g.normalizer(a).unwrap();
                let c = &g.conjugacy_classes()[g.class_of(a)];
                assert_eq!(n.order() * c.size(), g.order(), "{} element {a}", g.name());
                assert_eq!(g.order() % c.size(), 0);
                for k in g.elements() {
                    let conj = g.normalizer(g.conjugate(k, a)).unwrap();
                    assert_eq!(conj.elements(), n.conjugated_elements(&g, k).as_slice());
                }
            }
        }
    }
}
