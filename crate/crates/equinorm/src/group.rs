//! Finite groups presented by multiplication tables, their subgroup
//! lattices, coset decompositions, and double cosets.
//!
//! Elements are indices `0..order`.  Conjugation is written as a right
//! action throughout the crate: `H.conjugate(g)` is `g^{-1} H g`.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
    id_elt: usize,
    names: Vec<String>,
    subgroup_cache: OnceLock<Vec<Vec<usize>>>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .finish()
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}
impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Validates closure, associativity, a two-sided identity and inverses.
    pub fn new(order: usize, table: Vec<usize>, names: Option<Vec<String>>) -> Result<Arc<Self>> {
        if order == 0 || table.len() != order * order {
            return Err(Error::Malformed(format!(
                "multiplication table must be {order}x{order}"
            )));
        }
        for a in 0..order {
            for b in 0..order {
                let c = table[a * order + b];
                if c >= order {
                    return Err(Error::TableNotClosed(a, b, c));
                }
            }
        }
        let mul = |a: usize, b: usize| table[a * order + b];
        let mut id_elt = None;
        for e in 0..order {
            if (0..order).all(|a| mul(e, a) == a && mul(a, e) == a) {
                id_elt = Some(e);
                break;
            }
        }
        let id_elt = id_elt.ok_or(Error::NoIdentity)?;
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(Error::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; order];
        for a in 0..order {
            match (0..order).find(|&b| mul(a, b) == id_elt && mul(b, a) == id_elt) {
                Some(b) => inv[a] = b,
                None => return Err(Error::NoInverse(a)),
            }
        }
        let names = match names {
            Some(n) => {
                if n.len() != order {
                    return Err(Error::Malformed(format!(
                        "expected {order} element names, got {}",
                        n.len()
                    )));
                }
                n
            }
            None => (0..order).map(|i| format!("g{i}")).collect(),
        };
        Ok(Arc::new(FiniteGroup {
            order,
            table,
            inv,
            id_elt,
            names,
            subgroup_cache: OnceLock::new(),
        }))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn id(&self) -> usize {
        self.id_elt
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `g^{-1} h g`.
    pub fn conj(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), h), g)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn name(&self, e: usize) -> &str {
        &self.names[e]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut n = 1;
        while x != self.id_elt {
            x = self.mul(x, g);
            n += 1;
        }
        n
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Smallest subgroup containing `gens` (as a sorted element list).
    pub fn closure_of(&self, gens: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.order];
        in_set[self.id_elt] = true;
        let mut frontier = vec![self.id_elt];
        for &g in gens {
            if !in_set[g] {
                in_set[g] = true;
                frontier.push(g);
            }
        }
        // elements of a finite subset closed under multiplication form a
        // subgroup, so products alone suffice
        loop {
            let mut added = Vec::new();
            let current: Vec<usize> = (0..self.order). filter(|&e| in_set[e]).collect();
            for &a in &current {
                for &b in &current {
                    let c = self.mul(a, b);
                    if !in_set[c] {
                        in_set[c] = true;
                        added.push(c);
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            frontier.extend(added);
        }
        (0..self.order).filter(|&e| in_set[e]).collect()
    }

    /// Sorted element lists of all subgroups, ordered by (size, elements).
    /// The position of a subgroup in this list is its canonical id.
    pub fn subgroup_lists(&self) -> &[Vec<usize>] {
        self.subgroup_cache.get_or_init(|| {
            let mut found: std::collections::BTreeSet<Vec<usize>> = std::collections::BTreeSet::new();
            let mut queue = vec![vec![self.id_elt]];
            found.insert(vec![self.id_elt]);
            while let Some(s) = queue.pop() {
                for g in 0..self.order {
                    if s.binary_search(&g).is_ok() {
                        continue;
                    }
                    let mut gens = s.clone();
                    gens.push(g);
                    let bigger = self.closure_of(&gens);
                    if found.insert(bigger.clone()) {
                        queue.push(bigger);
                    }
                }
            }
            let mut list: Vec<Vec<usize>> = found.into_iter().collect();
            list.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
            list
        })
    }

    pub fn subgroup_count(&self) -> usize {
        self.subgroup_lists().len()
    }
}

/// A subgroup of a fixed ambient group, remembered together with its
/// canonical id in the ambient subgroup lattice.
#[derive(Clone)]
pub struct Subgroup {
    group: Arc<FiniteGroup>,
    elements: Vec<usize>,
    id: usize,
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup#{}{:?}", self.id, self.elements)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.elements == other.elements
    }
}
impl Eq for Subgroup {}

impl Subgroup {
    pub fn from_elements(group: &Arc<FiniteGroup>, elements: &[usize]) -> Result<Self> {
        let mut elems: Vec<usize> = elements.to_vec();
        elems.sort_unstable();
        elems.dedup();
        for &e in &elems {
            if e >= group.order() {
                return Err(Error::ElementOutOfRange(e, group.order()));
            }
        }
        if elems.binary_search(&group.id()).is_err() {
            return Err(Error::NotASubgroup("missing identity".into()));
        }
        for &a in &elems {
            for &b in &elems {
                if elems.binary_search(&group.mul(a, b)).is_err() {
                    return Err(Error::NotASubgroup(format!(
                        "not closed under product of {a} and {b}"
                    )));
                }
            }
        }
        let id = group
            .subgroup_lists()
            .iter()
            .position(|s| *s == elems)
            .expect("closed subsets containing the identity appear in the lattice");
        Ok(Subgroup {
            group: group.clone(),
            elements: elems,
            id,
        })
    }

    pub fn generated(group: &Arc<FiniteGroup>, gens: &[usize]) -> Result<Self> {
        for &g in gens {
            if g >= group.order() {
                return Err(Error::ElementOutOfRange(g, group.order()));
            }
        }
        let elems = group.closure_of(gens);
        Subgroup::from_elements(group, &elems)
    }

    pub fn trivial(group: &Arc<FiniteGroup>) -> Self {
        Subgroup::from_elements(group, &[group.id()]).unwrap()
    }

    pub fn full(group: &Arc<FiniteGroup>) -> Self {
        let all: Vec<usize> = group.elements().collect();
        Subgroup::from_elements(group, &all).unwrap()
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn index_in_group(&self) -> usize {
        self.group.order() / self.size()
    }

    /// Canonical id of this subgroup in the ambient lattice.
    pub fn id(&self) -> usize {
        self.id
    }

    pub fn contains(&self, e: usize) -> bool {
        self.elements.binary_search(&e).is_ok()
    }

    pub fn is_contained_in(&self, other: &Subgroup) -> bool {
        self.group == other.group && self.elements.iter().all(|&e| other.contains(e))
    }

    pub fn is_full(&self) -> bool {
        self.size() == self.group.order()
    }

    /// Position of `e` in the sorted element list, for action tables
    /// indexed parallel to `elements()`.
    pub fn position_of(&self, e: usize) -> Option<usize> {
        self.elements.binary_search(&e).ok()
    }

    /// The conjugate `g^{-1} H g`.
    pub fn conjugate(&self, g: usize) -> Subgroup {
        let elems: Vec<usize> = self
            .elements
            .iter()
            .map(|&h| self.group.conj(h, g))
            .collect();
        Subgroup::from_elements(&self.group, &elems).unwrap()
    }

    pub fn is_normal_in(&self, other: &Subgroup) -> bool {
        other
            .elements
            .iter()
            .all(|&g| self.conjugate(g).elements == self.elements)
    }

    /// Smallest canonical id among conjugates `H^g` over the whole group;
    /// a conjugacy-class invariant.
    pub fn conjugacy_class_id(&self) -> usize {
        self.group
            .elements()
            .map(|g| self.conjugate(g).id)
            .min()
            .unwrap()
    }

    /// Left cosets `gH`.  The identity coset comes first with the identity
    /// element as its representative; the others are listed by their
    /// minimal element, increasing.
    pub fn coset_reps(&self) -> CosetDecomposition {
        let g = &self.group;
        let n = g.order();
        let mut coset_index = vec![usize::MAX; n];
        let mut reps = vec![g.id()];
        for &h in &self.elements {
            coset_index[h] = 0;
        }
        for e in 0..n {
            if coset_index[e] == usize::MAX {
                let idx = reps.len();
                reps.push(e);
                for &h in &self.elements {
                    coset_index[g.mul(e, h)] = idx;
                }
            }
        }
        CosetDecomposition {
            subgroup: self.clone(),
            reps,
            coset_index,
        }
    }

    /// Left cosets of `self` inside the overgroup `big`, with the same
    /// ordering conventions as `coset_reps`.
    pub fn coset_reps_in(&self, big: &Subgroup) -> Result<CosetDecomposition> {
        if !self.is_contained_in(big) {
            return Err(Error::NotContained(self.id, big.id));
        }
        let g = &self.group;
        let n = g.order();
        let mut coset_index = vec![usize::MAX; n];
        let mut reps = vec![g.id()];
        for &h in &self.elements {
            coset_index[h] = 0;
        }
        for &e in big.elements() {
            if coset_index[e] == usize::MAX {
                let idx = reps.len();
                reps.push(e);
                for &h in &self.elements {
                    coset_index[g.mul(e, h)] = idx;
                }
            }
        }
        Ok(CosetDecomposition {
            subgroup: self.clone(),
            reps,
            coset_index,
        })
    }
}

/// A choice of left-coset representatives for `subgroup` inside an ambient
/// group or overgroup, with constant-time coset lookup.
#[derive(Clone, Debug)]
pub struct CosetDecomposition {
    subgroup: Subgroup,
    reps: Vec<usize>,
    coset_index: Vec<usize>,
}

impl CosetDecomposition {
    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Index of the coset containing `e`, if `e` lies in the decomposed
    /// overgroup.
    pub fn coset_of(&self, e: usize) -> Option<usize> {
        match self.coset_index[e] {
            usize::MAX => None,
            i => Some(i),
        }
    }

    /// Writes `e = reps[i] * h` with `h` in the subgroup.
    pub fn factor(&self, e: usize) -> Option<(usize, usize)> {
        let i = self.coset_of(e)?;
        let g = self.subgroup.group();
        let h = g.mul(g.inv(self.reps[i]), e);
        debug_assert!(self.subgroup.contains(h));
        Some((i, h))
    }
}

/// Subgroups of the whole group, ordered by (size, element list); each
/// carries its canonical id, which is its position in this list.
pub fn enumerate_subgroups(group: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    group
        .subgroup_lists()
        .iter()
        .enumerate()
        .map(|(id, elems)| Subgroup {
            group: group.clone(),
            elements: elems.clone(),
            id,
        })
        .collect()
}

pub fn subgroup_by_id(group: &Arc<FiniteGroup>, id: usize) -> Option<Subgroup> {
    let lists = group.subgroup_lists();
    lists.get(id).map(|elems| Subgroup {
        group: group.clone(),
        elements: elems.clone(),
        id,
    })
}

/// `g^{-1} H g`, as a free function matching the method.
pub fn conjugate_subgroup(h: &Subgroup, g: usize) -> Subgroup {
    h.conjugate(g)
}

/// Minimal representatives of the double cosets `L g H`, increasing.
pub fn double_cosets(l: &Subgroup, h: &Subgroup) -> Vec<usize> {
    assert_eq!(l.group(), h.group(), "double cosets need a common ambient group");
    let g = l.group();
    let n = g.order();
    let mut seen = vec![false; n];
    let mut reps = Vec::new();
    for e in 0..n {
        if seen[e] {
            continue;
        }
        reps.push(e);
        for &a in l.elements() {
            for &b in h.elements() {
                seen[g.mul(g.mul(a, e), b)] = true;
            }
        }
    }
    reps
}

fn cycle_name(images: &[usize]) -> String {
    let n = images.len();
    let mut seen = vec![false; n];
    let mut out = String::new();
    for start in 0..n {
        if seen[start] || images[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = images[start];
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = images[x];
        }
        out.push('(');
        for (i, p) in cycle.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&p.to_string());
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

/// Group generated by permutations of `0..degree`, elements sorted by
/// one-line notation (the identity sorts first) and named in cycle notation.
pub fn from_permutation_gens(degree: usize, gens: &[Vec<usize>]) -> Result<Arc<FiniteGroup>> {
    use std::collections::BTreeSet;
    let mut parsed = Vec::new();
    for g in gens {
        if g.len() != degree {
            return Err(Error::Malformed(format!(
                "generator {:?} does not permute 0..{degree}",
                g
            )));
        }
        let mut seen = vec![false; degree];
        for &i in g {
            if i >= degree || seen[i] {
                return Err(Error::BadPermutation(g.clone(), degree));
            }
            seen[i] = true;
        }
        parsed.push(g.clone());
    }
    let id: Vec<usize> = (0..degree).collect();
    let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
    set.insert(id.clone());
    let mut queue: Vec<Vec<usize>> = vec![id];
    while let Some(p) = queue.pop() {
        for g in &parsed {
            // compose as functions: (g . p)(i) = g(p(i))
            let q: Vec<usize> = p.iter().map(|&i| g[i]).collect();
            if set.insert(q.clone()) {
                queue.push(q);
            }
        }
    }
    let elems: Vec<Vec<usize>> = set.into_iter().collect();
    let order = elems.len();
    let index_of = |p: &[usize]| elems.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
    let mut table = vec![0usize; order * order];
    for (a, pa) in elems.iter().enumerate() {
        for (b, pb) in elems.iter().enumerate() {
            let prod: Vec<usize> = pb.iter().map(|&i| pa[i]).collect();
            table[a * order + b] = index_of(&prod);
        }
    }
    let names: Vec<String> = elems.iter().map(|p| cycle_name(p)).collect();
    FiniteGroup::new(order, table, Some(names))
}

pub fn trivial_group() -> Arc<FiniteGroup> {
    FiniteGroup::new(1, vec![0], Some(vec!["e".into()])).unwrap()
}

pub fn cyclic(n: usize) -> Arc<FiniteGroup> {
    assert!(n >= 1);
    let mut table = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = (a + b) % n;
        }
    }
    let names = (0..n).map(|i| i.to_string()).collect();
    FiniteGroup::new(n, table, Some(names)).unwrap()
}

pub fn symmetric(n: usize) -> Arc<FiniteGroup> {
    assert!((1..=5).contains(&n), "symmetric groups are built for degree 1..=5");
    if n == 1 {
        return trivial_group();
    }
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    from_permutation_gens(n, &[swap, cycle]).unwrap()
}

pub fn dihedral(n: usize) -> Arc<FiniteGroup> {
    assert!(n >= 3, "dihedral groups are built for n >= 3 (order 2n)");
    let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    from_permutation_gens(n, &[rot, refl]).unwrap()
}

pub fn quaternion() -> Arc<FiniteGroup> {
    // elements 1, -1, i, -i, j, -j, k, -k encoded as (axis, sign)
    let decode = |e: usize| -> (usize, bool) { (e / 2, e % 2 == 1) };
    let encode = |axis: usize, neg: bool| -> usize { axis * 2 + usize::from(neg) };
    // axis 0 is the unit; axes 1,2,3 are i,j,k with i*j = k cyclically
    let mul = |a: usize, b: usize| -> usize {
        let (ax, an) = decode(a);
        let (bx, bn) = decode(b);
        let neg0 = an ^ bn;
        if ax == 0 {
            encode(bx, neg0)
        } else if bx == 0 {
            encode(ax, neg0)
        } else if ax == bx {
            encode(0, !neg0)
        } else {
            let cx = 6 - ax - bx;
            // i*j=k, j*k=i, k*i=j positive; reversed order flips sign
            let positive = (ax, bx) == (1, 2) || (ax, bx) == (2, 3) || (ax, bx) == (3, 1);
            encode(cx, if positive { neg0 } else { !neg0 })
        }
    };
    let mut table = vec![0; 64];
    for a in 0..8 {
        for b in 0..8 {
            table[a * 8 + b] = mul(a, b);
        }
    }
    let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteGroup::new(8, table, Some(names)).unwrap()
}

/// A product group together with the two coordinate embeddings.
#[derive(Clone, Debug)]
pub struct ProductGroup {
    pub group: Arc<FiniteGroup>,
    pub left_order: usize,
    pub right_order: usize,
    left_id: usize,
    right_id: usize,
}

impl ProductGroup {
    pub fn encode(&self, a: usize, b: usize) -> usize {
        a * self.right_order + b
    }

    pub fn decode(&self, e: usize) -> (usize, usize) {
        (e / self.right_order, e % self.right_order)
    }

    pub fn embed_left(&self, a: usize) -> usize {
        self.encode(a, self.right_id)
    }

    pub fn embed_right(&self, b: usize) -> usize {
        self.encode(self.left_id, b)
    }
}

pub fn product(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> ProductGroup {
    let na = a.order();
    let nb = b.order();
    let order = na * nb;
    let mut table = vec![0; order * order];
    for a1 in 0..na {
        for b1 in 0..nb {
            for a2 in 0..na {
                for b2 in 0..nb {
                    let x = a1 * nb + b1;
                    let y = a2 * nb + b2;
                    table[x * order + y] = a.mul(a1, a2) * nb + b.mul(b1, b2);
                }
            }
        }
    }
    let names: Vec<String> = (0..order)
        .map(|e| format!("({},{})", a.name(e / nb), b.name(e % nb)))
        .collect();
    let group = FiniteGroup::new(order, table, Some(names)).unwrap();
    ProductGroup {
        group,
        left_order: na,
        right_order: nb,
        left_id: a.id(),
        right_id: b.id(),
    }
}

/// Named groups of order at most 8, used by the exhaustive suites.
pub fn builtin_groups() -> Vec<(&'static str, Arc<FiniteGroup>)> {
    vec![
        ("C1", trivial_group()),
        ("C2", cyclic(2)),
        ("C3", cyclic(3)),
        ("C4", cyclic(4)),
        ("V4", product(&cyclic(2), &cyclic(2)).group),
        ("C5", cyclic(5)),
        ("C6", cyclic(6)),
        ("S3", symmetric(3)),
        ("C7", cyclic(7)),
        ("C8", cyclic(8)),
        ("C4xC2", product(&cyclic(4), &cyclic(2)).group),
        ("C2xC2xC2", product(&product(&cyclic(2), &cyclic(2)).group, &cyclic(2)).group),
        ("D4", dihedral(4)),
        ("Q8", quaternion()),
    ]
}

pub fn builtin_group(name: &str) -> Option<Arc<FiniteGroup>> {
    builtin_groups()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, g)| g)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force: every subset containing the identity that is closed
    /// under multiplication.  Exponential, for cross-checking only.
    fn subgroups_by_subset_scan(g: &Arc<FiniteGroup>) -> Vec<Vec<usize>> {
        let n = g.order();
        assert!(n <= 16);
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask & (1 << g.id()) == 0 {
                continue;
            }
            let elems: Vec<usize> = (0..n).filter(|&e| mask & (1 << e) != 0).collect();
            let closed = elems
                .iter()
                .all(|&a| elems.iter().all(|&b| elems.binary_search(&g.mul(a, b)).is_ok()));
            if closed {
                out.push(elems);
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        out
    }

    #[test]
    fn lattice_matches_subset_scan_on_all_builtins() {
        for (name, g) in builtin_groups() {
            let fast: Vec<Vec<usize>> = g.subgroup_lists().to_vec();
            let slow = subgroups_by_subset_scan(&g);
            assert_eq!(fast, slow, "subgroup lattice mismatch for {name}");
        }
    }

    #[test]
    fn subgroup_counts_are_the_known_ones() {
        let expected = [
            ("C1", 1),
            ("C2", 2),
            ("C3", 2),
            ("C4", 3),
            ("V4", 5),
            ("C5", 2),
            ("C6", 4),
            ("S3", 6),
            ("C7", 2),
            ("C8", 4),
            ("C4xC2", 8),
            ("C2xC2xC2", 16),
            ("D4", 10),
            ("Q8", 6),
        ];
        for (name, count) in expected {
            let g = builtin_group(name).unwrap();
            assert_eq!(g.subgroup_count(), count, "subgroup count for {name}");
        }
    }

    #[test]
    fn builtin_orders_and_identities() {
        for (name, g) in builtin_groups() {
            assert_eq!(g.id(), 0, "identity of {name} should be element 0");
            for a in g.elements() {
                assert_eq!(g.mul(a, g.inv(a)), g.id());
            }
        }
        assert_eq!(symmetric(3).order(), 6);
        assert_eq!(dihedral(4).order(), 8);
        assert_eq!(quaternion().order(), 8);
        assert!(!symmetric(3).is_abelian());
        assert!(!quaternion().is_abelian());
        assert!(cyclic(8).is_abelian());
    }

    #[test]
    fn quaternion_relations() {
        let q = quaternion();
        let by_name = |s: &str| q.names().iter().position(|n| n == s).unwrap();
        let (i, j, k, m1) = (by_name("i"), by_name("j"), by_name("k"), by_name("-1"));
        assert_eq!(q.mul(i, i), m1);
        assert_eq!(q.mul(j, j), m1);
        assert_eq!(q.mul(i, j), k);
        assert_eq!(q.mul(j, i), by_name("-k"));
        assert_eq!(q.element_order(i), 4);
        assert_eq!(q.element_order(m1), 2);
    }

    #[test]
    fn coset_reps_of_c2_in_c4() {
        let c4 = cyclic(4);
        let h = Subgroup::from_elements(&c4, &[0, 2]).unwrap();
        let dec = h.coset_reps();
        assert_eq!(dec.reps(), &[0, 1]);
        assert_eq!(dec.coset_of(2), Some(0));
        assert_eq!(dec.coset_of(3), Some(1));
        // factor 3 = 1 * 2
        assert_eq!(dec.factor(3), Some((1, 2)));
    }

    #[test]
    fn coset_decomposition_invariants_hold_everywhere() {
        for (_, g) in builtin_groups() {
            for h in enumerate_subgroups(&g) {
                let dec = h.coset_reps();
                assert_eq!(dec.len(), g.order() / h.size());
                assert_eq!(dec.reps()[0], g.id());
                // cosets partition the group and factorizations are valid
                let mut counts = vec![0usize; dec.len()];
                for e in g.elements() {
                    let (i, x) = dec.factor(e).unwrap();
                    counts[i] += 1;
                    assert!(h.contains(x));
                    assert_eq!(g.mul(dec.reps()[i], x), e);
                }
                assert!(counts.iter().all(|&c| c == h.size()));
                // non-identity reps are minimal in their cosets
                for (i, &r) in dec.reps().iter().enumerate().skip(1) {
                    let min = g
                        .elements()
                        .filter(|&e| dec.coset_of(e) == Some(i))
                        .min()
                        .unwrap();
                    assert_eq!(r, min);
                }
            }
        }
    }

    #[test]
    fn conjugation_is_a_right_action_on_subgroups() {
        let s3 = symmetric(3);
        for h in enumerate_subgroups(&s3) {
            for g1 in s3.elements() {
                for g2 in s3.elements() {
                    let lhs = h.conjugate(g1).conjugate(g2);
                    let rhs = h.conjugate(s3.mul(g1, g2));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn conjugate_convention_is_g_inverse_h_g() {
        let s3 = symmetric(3);
        let name = |s: &str| s3.names().iter().position(|n| n == s).unwrap();
        let h = Subgroup::generated(&s3, &[name("(0 1)")]).unwrap();
        let g = name("(0 1 2)");
        let conj = h.conjugate(g);
        // g^{-1} h g relabels the moved points of h along g^{-1}, so
        // (0 1 2)^{-1} (0 1) (0 1 2) = (0 2)
        assert!(conj.contains(name("(0 2)")));
        assert_eq!(conj.size(), 2);
    }

    #[test]
    fn double_cosets_of_s3_reflection_subgroup() {
        let s3 = symmetric(3);
        let name = |s: &str| s3.names().iter().position(|n| n == s).unwrap();
        let h = Subgroup::generated(&s3, &[name("(0 1)")]).unwrap();
        // H\S3/H: H itself (2 elements) and the other 4 elements form one
        // double coset, so exactly 2 classes
        let reps = double_cosets(&h, &h);
        assert_eq!(reps.len(), 2);
        assert_eq!(reps[0], s3.id());
        // double cosets partition the group
        let mut covered = vec![false; 6];
        for &r in &reps {
            for &a in h.elements() {
                for &b in h.elements() {
                    covered[s3.mul(s3.mul(a, r), b)] = true;
                }
            }
        }
        assert!(covered.iter().all(|&c| c));
    }

    #[test]
    fn double_cosets_against_trivial_subgroups() {
        let g = dihedral(4);
        let triv = Subgroup::trivial(&g);
        let full = Subgroup::full(&g);
        assert_eq!(double_cosets(&triv, &triv).len(), g.order());
        assert_eq!(double_cosets(&full, &triv).len(), 1);
        assert_eq!(double_cosets(&triv, &full).len(), 1);
    }

    #[test]
    fn product_group_embeddings_commute() {
        let p = product(&cyclic(4), &cyclic(2));
        let g = &p.group;
        assert_eq!(g.order(), 8);
        for a in 0..4 {
            for b in 0..2 {
                let e = g.mul(p.embed_left(a), p.embed_right(b));
                assert_eq!(e, p.encode(a, b));
                assert_eq!(
                    g.mul(p.embed_left(a), p.embed_right(b)),
                    g.mul(p.embed_right(b), p.embed_left(a))
                );
            }
        }
    }

    #[test]
    fn coset_reps_in_overgroup() {
        let d4 = dihedral(4);
        let subs = enumerate_subgroups(&d4);
        let big = subs.iter().find(|s| s.size() == 4).unwrap();
        let small = subs
            .iter()
            .find(|s| s.size() == 2 && s.is_contained_in(big))
            .unwrap();
        let dec = small.coset_reps_in(big).unwrap();
        assert_eq!(dec.len(), 2);
        assert_eq!(dec.reps()[0], d4.id());
        for &e in big.elements() {
            let (i, h) = dec.factor(e).unwrap();
            assert_eq!(d4.mul(dec.reps()[i], h), e);
        }
        // elements outside the overgroup are not covered
        let outside = d4.elements().find(|e| !big.contains(*e)).unwrap();
        assert_eq!(dec.coset_of(outside), None);
    }
}
