//! Indexing systems on a finite group, represented at orbit level: a set
//! of subgroup pairs `(K, H)` with `K <= H`, meaning the orbit `H/K` is
//! admissible as an `H`-set.  A finite `H`-set is admissible when every
//! orbit stabilizer pairs with `H`.
//!
//! The pair set of a valid system is closed under four rules:
//! reflexivity, conjugation by every group element, restriction (if `H/K`
//! is admissible and `M <= H` then each orbit of `res_M H/K`, i.e.
//! `M meet g K g^{-1}` for `g` in `H`, pairs with `M`), and composition
//! (`L <= K <= H` with both steps admissible).  Restriction closure
//! encodes both the subobject and the restriction axioms through the
//! double-coset decomposition of `res_M (H/K)`; composition encodes
//! induction.  `AxiomOracle` checks the axioms themselves against literal
//! finite-set constructions, so the rule set is verified rather than
//! trusted.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{enumerate_subgroups, FiniteGroup, Subgroup};
use crate::gset::{conjugacy_class_id_in, iso_test, EquivariantMap, FiniteGSet};
use crate::perm::Perm;

/// Containment, conjugation and intersection tables over the subgroup
/// lattice, built once and shared by closure computations.
struct Lattice {
    subs: Vec<Subgroup>,
    contained: Vec<Vec<bool>>,
    conj: Vec<Vec<usize>>,
    inter: Vec<Vec<usize>>,
}

impl Lattice {
    fn new(group: &Arc<FiniteGroup>) -> Self {
        let subs = enumerate_subgroups(group);
        let contained: Vec<Vec<bool>> = subs
            .iter()
            .map(|a| subs.iter().map(|b| a.is_contained_in(b)).collect())
            .collect();
        let conj: Vec<Vec<usize>> = subs
            .iter()
            .map(|s| group.elements().map(|g| s.conjugate(g).id()).collect())
            .collect();
        let inter: Vec<Vec<usize>> = subs
            .iter()
            .map(|a| {
                subs.iter()
                    .map(|b| {
                        let elems: Vec<usize> = a
                            .elements()
                            .iter()
                            .copied()
                            .filter(|&e| b.contains(e))
                            .collect();
                        Subgroup::from_elements(group, &elems).unwrap().id()
                    })
                    .collect()
            })
            .collect();
        Lattice {
            subs,
            contained,
            conj,
            inter,
        }
    }

    fn nested_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.subs.len();
        let mut out = Vec::new();
        for k in 0..n {
            for h in 0..n {
                if self.contained[k][h] {
                    out.push((k, h));
                }
            }
        }
        out
    }

    fn close(&self, start: &BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
        let group = self.subs[0].group();
        let mut pairs = start.clone();
        for i in 0..self.subs.len() {
            pairs.insert((i, i));
        }
        loop {
            let mut added = Vec::new();
            for &(k, h) in &pairs {
                // conjugation by every group element
                for g in group.elements() {
                    let p = (self.conj[k][g], self.conj[h][g]);
                    if !pairs.contains(&p) {
                        added.push(p);
                    }
                }
                // orbits of the restriction to any M <= H
                for m in 0..self.subs.len() {
                    if !self.contained[m][h] {
                        continue;
                    }
                    for &g in self.subs[h].elements() {
                        // g K g^{-1} is the conjugate by g^{-1}
                        let kg = self.conj[k][group.inv(g)];
                        let p = (self.inter[m][kg], m);
                        if !pairs.contains(&p) {
                            added.push(p);
                        }
                    }
                }
            }
            // composition of admissible steps
            let snapshot: Vec<(usize, usize)> = pairs.iter().copied().collect();
            for &(l, k) in &snapshot {
                for &(k2, h) in &snapshot {
                    if k2 == k && !pairs.contains(&(l, h)) {
                        added.push((l, h));
                    }
                }
            }
            if added.is_empty() {
                return pairs;
            }
            pairs.extend(added);
        }
    }
}

#[derive(Clone)]
pub struct IndexingSystem {
    group: Arc<FiniteGroup>,
    pairs: BTreeSet<(usize, usize)>,
}

impl std::fmt::Debug for IndexingSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "IndexingSystem{:?}", self.pairs)
    }
}

impl PartialEq for IndexingSystem {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.pairs == other.pairs
    }
}
impl Eq for IndexingSystem {}

impl IndexingSystem {
    /// Only the reflexive pairs: admissible sets are the trivial actions.
    pub fn minimal(group: &Arc<FiniteGroup>) -> Self {
        let n = group.subgroup_lists().len();
        IndexingSystem {
            group: group.clone(),
            pairs: (0..n).map(|i| (i, i)).collect(),
        }
    }

    /// Every nested pair: all finite `H`-sets are admissible.
    pub fn complete(group: &Arc<FiniteGroup>) -> Self {
        let lat = Lattice::new(group);
        IndexingSystem {
            group: group.clone(),
            pairs: lat.nested_pairs().into_iter().collect(),
        }
    }

    /// Smallest indexing system containing the given pairs.
    pub fn closure(group: &Arc<FiniteGroup>, gens: &[(usize, usize)]) -> Result<Self> {
        let lat = Lattice::new(group);
        let mut start = BTreeSet::new();
        for &(k, h) in gens {
            if k >= lat.subs.len() || h >= lat.subs.len() || !lat.contained[k][h] {
                return Err(Error::BadPair(k, h));
            }
            start.insert((k, h));
        }
        Ok(IndexingSystem {
            group: group.clone(),
            pairs: lat.close(&start),
        })
    }

    /// Accepts the pair set as given, provided each pair is nested;
    /// closure is not enforced.  `closed_violation` reports the defect.
    pub fn from_pairs_unvalidated(
        group: &Arc<FiniteGroup>,
        pairs: &[(usize, usize)],
    ) -> Result<Self> {
        let lat = Lattice::new(group);
        let mut set = BTreeSet::new();
        for &(k, h) in pairs {
            if k >= lat.subs.len() || h >= lat.subs.len() || !lat.contained[k][h] {
                return Err(Error::BadPair(k, h));
            }
            set.insert((k, h));
        }
        for i in 0..lat.subs.len() {
            set.insert((i, i));
        }
        Ok(IndexingSystem {
            group: group.clone(),
            pairs: set,
        })
    }

    /// Validates nestedness and closure.
    pub fn from_pairs(group: &Arc<FiniteGroup>, pairs: &[(usize, usize)]) -> Result<Self> {
        let sys = IndexingSystem::from_pairs_unvalidated(group, pairs)?;
        match sys.closed_violation() {
            None => Ok(sys),
            Some(v) => Err(Error::Malformed(format!("pair set is not closed: {v}"))),
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    /// Pairs `(K, H)` with `K` strictly smaller than `H`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        self.pairs.iter().copied().filter(|(k, h)| k != h).collect()
    }

    pub fn contains(&self, k_id: usize, h_id: usize) -> bool {
        self.pairs.contains(&(k_id, h_id))
    }

    pub fn contains_subgroups(&self, k: &Subgroup, h: &Subgroup) -> bool {
        self.contains(k.id(), h.id())
    }

    pub fn leq(&self, other: &IndexingSystem) -> bool {
        self.group == other.group && self.pairs.is_subset(&other.pairs)
    }

    /// First closure rule violated by the pair set, if any.
    pub fn closed_violation(&self) -> Option<String> {
        let lat = Lattice::new(&self.group);
        let closed = lat.close(&self.pairs);
        if closed == self.pairs {
            return None;
        }
        let missing = closed.difference(&self.pairs).next().unwrap();
        Some(format!(
            "closure requires the pair ({}, {})",
            missing.0, missing.1
        ))
    }

    pub fn is_closed(&self) -> bool {
        self.closed_violation().is_none()
    }

    /// A finite `H`-set is admissible when every orbit stabilizer `S`
    /// satisfies `(S, H)`.
    pub fn is_admissible_hset(&self, t: &FiniteGSet) -> bool {
        self.admissibility_failure(t).is_none()
    }

    /// The stabilizer id of the first inadmissible orbit, if any.
    pub fn admissibility_failure(&self, t: &FiniteGSet) -> Option<usize> {
        let h_id = t.acting().id();
        for o in t.orbits().orbits {
            if !self.contains(o.stabilizer.id(), h_id) {
                return Some(o.stabilizer.id());
            }
        }
        None
    }

    /// A map of finite sets over a common acting subgroup is admissible
    /// when, for every orbit of the target with stabilizer `H_b` at a
    /// basepoint `b`, the fiber over `b` is admissible as an `H_b`-set.
    pub fn is_admissible_map(&self, u: &EquivariantMap) -> bool {
        for o in u.target().orbits().orbits {
            let hb = &o.stabilizer;
            let restricted = u
                .source()
                .restrict(hb)
                .expect("stabilizers are contained in the acting subgroup");
            let fiber = restricted
                .sub_gset(&u.fiber(o.basepoint))
                .expect("fibers over fixed points are closed under the stabilizer");
            if !self.is_admissible_hset(&fiber) {
                return false;
            }
        }
        true
    }
}

pub const DEFAULT_PAIR_GUARD: usize = 24;

/// All indexing systems on the group, smallest first (by pair count, then
/// lexicographically).  Errors when the number of strict nested pairs
/// exceeds the guard.
pub fn enumerate_all(group: &Arc<FiniteGroup>) -> Result<Vec<IndexingSystem>> {
    enumerate_all_guarded(group, DEFAULT_PAIR_GUARD)
}

pub fn enumerate_all_guarded(
    group: &Arc<FiniteGroup>,
    pair_guard: usize,
) -> Result<Vec<IndexingSystem>> {
    let lat = Lattice::new(group);
    let candidates: Vec<(usize, usize)> = lat
        .nested_pairs()
        .into_iter()
        .filter(|(k, h)| k != h)
        .collect();
    // 128 strict pairs is the hard representation ceiling of the search
    let effective_guard = pair_guard.min(128);
    if candidates.len() > effective_guard {
        return Err(Error::GuardExceeded(candidates.len(), effective_guard));
    }
    let np = candidates.len();
    let index_of = |p: (usize, usize)| -> usize {
        candidates.iter().position(|&c| c == p).unwrap()
    };
    // every closure rule is either one pair forcing a fixed set of pairs
    // (conjugation, restriction) or two pairs forcing a third
    // (composition); precompute both shapes over the strict pairs, with
    // reflexive pairs left implicit since every system contains them
    let grp = lat.subs[0].group().clone();
    let mut unary: Vec<u128> = vec![0; np];
    for (i, &(k, h)) in candidates.iter().enumerate() {
        for g in grp.elements() {
            unary[i] |= 1u128 << index_of((lat.conj[k][g], lat.conj[h][g]));
        }
        for m in 0..lat.subs.len() {
            if !lat.contained[m][h] {
                continue;
            }
            for &g in lat.subs[h].elements() {
                let kg = lat.conj[k][grp.inv(g)];
                let low = lat.inter[m][kg];
                if low != m {
                    unary[i] |= 1u128 << index_of((low, m));
                }
            }
        }
    }
    let mut compose: Vec<Vec<(usize, usize)>> = vec![Vec::new(); np];
    for (i, &(l, k)) in candidates.iter().enumerate() {
        for (j, &(k2, h)) in candidates.iter().enumerate() {
            if k2 == k {
                let target = index_of((l, h));
                compose[i].push((j, target));
                compose[j].push((i, target));
            }
        }
    }
    let close_mask = |start: u128| -> u128 {
        let mut s = start;
        let mut queue: Vec<usize> = (0..np).filter(|&b| s >> b & 1 == 1).collect();
        while let Some(i) = queue.pop() {
            let fresh = unary[i] & !s;
            if fresh != 0 {
                s |= fresh;
                queue.extend((0..np).filter(|&b| fresh >> b & 1 == 1));
            }
            for &(j, target) in &compose[i] {
                if s >> j & 1 == 1 && s >> target & 1 == 0 {
                    s |= 1u128 << target;
                    queue.push(target);
                }
            }
        }
        s
    };
    let mut seen: std::collections::HashSet<u128> = std::collections::HashSet::new();
    let base = close_mask(0);
    seen.insert(base);
    let mut stack = vec![base];
    let mut masks = vec![base];
    while let Some(s) = stack.pop() {
        for c in 0..np {
            if s >> c & 1 == 0 {
                let bigger = close_mask(s | (1u128 << c));
                if seen.insert(bigger) {
                    stack.push(bigger);
                    masks.push(bigger);
                }
            }
        }
    }
    let mut out: Vec<BTreeSet<(usize, usize)>> = masks
        .into_iter()
        .map(|mask| {
            let mut pairs: BTreeSet<(usize, usize)> =
                (0..lat.subs.len()).map(|i| (i, i)).collect();
            pairs.extend((0..np).filter(|&b| mask >> b & 1 == 1).map(|b| candidates[b]));
            pairs
        })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
    Ok(out
        .into_iter()
        .map(|pairs| IndexingSystem {
            group: group.clone(),
            pairs,
        })
        .collect())
}

/// One isomorphism class of `H`-sets in an oracle catalog, together with
/// precomputed data for every axiom check: all of it produced by literal
/// finite-set constructions.
struct ClassEntry {
    set: FiniteGSet,
    /// exact stabilizer ids of the orbits
    stabs: Vec<usize>,
    /// stabilizer ids of a relabeled isomorphic copy
    relabel_stabs: Vec<usize>,
    /// per subgroup id `K` contained in `H`: stabilizer ids of `res_K`
    res: Vec<Option<Vec<usize>>>,
    /// per group element `g`: (id of `H^g`, stabilizer ids of the conjugate)
    conj: Vec<(usize, Vec<usize>)>,
    /// per overgroup id `H'` containing `H`: stabilizer ids of `ind_H^{H'}`
    ind: Vec<Option<Vec<usize>>>,
    /// stabilizer ids of every orbit sub-union
    subsets: Vec<Vec<usize>>,
}

/// Validates indexing systems against the literal axioms: for each
/// subgroup `H`, every isomorphism class of `H`-sets of size at most
/// `size_bound` is materialized, and its restrictions, conjugates,
/// inductions, subobjects and coproducts are computed with the actual
/// finite-set operations.  Built once per group; validation of a single
/// system is then pure pair-set lookups.
pub struct AxiomOracle {
    subs: Vec<Subgroup>,
    size_bound: usize,
    catalogs: Vec<Vec<ClassEntry>>,
    /// `coset_class[h][k]` = stabilizer ids of `H/K` as an `H`-set, for
    /// `K <= H`
    coset_class: Vec<Vec<Option<Vec<usize>>>>,
}

fn stab_ids(t: &FiniteGSet) -> Vec<usize> {
    let mut v: Vec<usize> = t
        .orbits()
        .orbits
        .iter()
        .map(|o| o.stabilizer.id())
        .collect();
    v.sort_unstable();
    v
}

impl AxiomOracle {
    pub fn new(group: &Arc<FiniteGroup>, size_bound: usize) -> Self {
        let subs = enumerate_subgroups(group);
        let n = subs.len();
        let contained: Vec<Vec<bool>> = subs
            .iter()
            .map(|a| subs.iter().map(|b| a.is_contained_in(b)).collect())
            .collect();
        let mut catalogs = Vec::with_capacity(n);
        for h in &subs {
            catalogs.push(Self::catalog_for(group, &subs, h, size_bound, &contained));
        }
        let coset_class: Vec<Vec<Option<Vec<usize>>>> = subs
            .iter()
            .map(|h| {
                subs.iter()
                    .map(|k| {
                        if k.is_contained_in(h) {
                            let c = FiniteGSet::coset_space(h, k).unwrap();
                            Some(stab_ids(&c))
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect();
        AxiomOracle {
            subs,
            size_bound,
            catalogs,
            coset_class,
        }
    }

    fn catalog_for(
        group: &Arc<FiniteGroup>,
        subs: &[Subgroup],
        h: &Subgroup,
        size_bound: usize,
        contained: &[Vec<bool>],
    ) -> Vec<ClassEntry> {
        // one transitive piece per conjugacy class (under H) of subgroups
        // of H with index at most the bound
        let mut piece_types: Vec<&Subgroup> = Vec::new();
        let mut seen_classes = BTreeSet::new();
        for s in subs {
            if !contained[s.id()][h.id()] {
                continue;
            }
            if h.size() / s.size() > size_bound {
                continue;
            }
            if seen_classes.insert(conjugacy_class_id_in(s, h)) {
                piece_types.push(s);
            }
        }
        // multisets of pieces with total size within the bound
        let mut multisets: Vec<Vec<usize>> = Vec::new();
        fn rec(
            types: &[&Subgroup],
            h_size: usize,
            from: usize,
            remaining: usize,
            current: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            out.push(current.clone());
            for i in from..types.len() {
                let size = h_size / types[i].size();
                if size <= remaining {
                    current.push(i);
                    rec(types, h_size, i, remaining - size, current, out);
                    current.pop();
                }
            }
        }
        rec(
            &piece_types,
            h.size(),
            0,
            size_bound,
            &mut Vec::new(),
            &mut multisets,
        );

        let mut entries = Vec::with_capacity(multisets.len());
        for ms in multisets {
            let mut set = FiniteGSet::empty(h.clone());
            for &i in &ms {
                set = set
                    .disjoint_union(&FiniteGSet::coset_space(h, piece_types[i]).unwrap())
                    .unwrap();
            }
            let stabs = stab_ids(&set);
            // a relabeled copy must be isomorphic and have the same class data
            let rot: Vec<usize> = (0..set.size()).map(|i| (i + 1) % set.size().max(1)).collect();
            let relabeled = if set.size() > 1 {
                set.relabel(&Perm::new(rot).unwrap())
            } else {
                set.clone()
            };
            assert!(
                iso_test(&set, &relabeled).is_some(),
                "relabeled copy must be isomorphic"
            );
            let relabel_stabs = stab_ids(&relabeled);

            let res: Vec<Option<Vec<usize>>> = subs
                .iter()
                .map(|k| {
                    if contained[k.id()][h.id()] {
                        Some(stab_ids(&set.restrict(k).unwrap()))
                    } else {
                        None
                    }
                })
                .collect();
            let conj: Vec<(usize, Vec<usize>)> = group
                .elements()
                .map(|g| {
                    let c = set.conjugate(g);
                    (c.acting().id(), stab_ids(&c))
                })
                .collect();
            let ind: Vec<Option<Vec<usize>>> = subs
                .iter()
                .map(|big| {
                    if contained[h.id()][big.id()] {
                        Some(stab_ids(&set.induce(big).unwrap()))
                    } else {
                        None
                    }
                })
                .collect();
            // sub-unions of orbits
            let orbit_list = set.orbits();
            let k = orbit_list.orbits.len();
            let mut subsets = Vec::new();
            for mask in 0u32..(1 << k) {
                let mut points = Vec::new();
                for (i, o) in orbit_list.orbits.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        points.extend(o.points.iter().copied());
                    }
                }
                subsets.push(stab_ids(&set.sub_gset(&points).unwrap()));
            }
            entries.push(ClassEntry {
                set,
                stabs,
                relabel_stabs,
                res,
                conj,
                ind,
                subsets,
            });
        }
        entries
    }

    pub fn size_bound(&self) -> usize {
        self.size_bound
    }

    pub fn catalog_sizes(&self) -> Vec<usize> {
        self.catalogs.iter().map(Vec::len).collect()
    }

    pub fn catalog_sets(&self, h_id: usize) -> Vec<&FiniteGSet> {
        self.catalogs[h_id].iter().map(|e| &e.set).collect()
    }

    fn member(&self, sys: &IndexingSystem, stabs: &[usize], acting_id: usize) -> bool {
        stabs.iter().all(|&s| sys.contains(s, acting_id))
    }

    /// First axiom failure, as a human-readable description; `None` when
    /// every axiom holds on the bounded catalog.
    pub fn validate(&self, sys: &IndexingSystem) -> Option<String> {
        let n = self.subs.len();
        for h in 0..n {
            let cat = &self.catalogs[h];
            // trivial sets are admissible: stabilizers all equal H
            for size in 0..=self.size_bound {
                let stabs = vec![h; size];
                if !self.member(sys, &stabs, h) {
                    return Some(format!(
                        "trivial {size}-point set over subgroup {h} is not admissible"
                    ));
                }
            }
            for (ci, entry) in cat.iter().enumerate() {
                let is_mem = self.member(sys, &entry.stabs, h);
                // isomorphism invariance
                if is_mem != self.member(sys, &entry.relabel_stabs, h) {
                    return Some(format!(
                        "membership of class {ci} over subgroup {h} is not isomorphism-invariant"
                    ));
                }
                if !is_mem {
                    continue;
                }
                // restriction
                for (k, r) in entry.res.iter().enumerate() {
                    if let Some(stabs) = r {
                        if !self.member(sys, stabs, k) {
                            return Some(format!(
                                "restriction of class {ci} from subgroup {h} to {k} is not admissible"
                            ));
                        }
                    }
                }
                // conjugation
                for (g, (hg, stabs)) in entry.conj.iter().enumerate() {
                    if !self.member(sys, stabs, *hg) {
                        return Some(format!(
                            "conjugate by element {g} of class {ci} over subgroup {h} is not admissible"
                        ));
                    }
                }
                // subobjects
                for stabs in &entry.subsets {
                    if !self.member(sys, stabs, h) {
                        return Some(format!(
                            "a subobject of class {ci} over subgroup {h} is not admissible"
                        ));
                    }
                }
                // induction along admissible coset spaces
                for (big, i) in entry.ind.iter().enumerate() {
                    if let Some(stabs) = i {
                        let coset = self.coset_class[big][h]
                            .as_ref()
                            .expect("h is contained in big");
                        if self.member(sys, coset, big) && !self.member(sys, stabs, big) {
                            return Some(format!(
                                "induction of class {ci} from subgroup {h} to {big} is not admissible"
                            ));
                        }
                    }
                }
            }
            // coproducts
            for (ai, a) in cat.iter().enumerate() {
                if !self.member(sys, &a.stabs, h) {
                    continue;
                }
                for (bi, b) in cat.iter().enumerate() {
                    if a.set.size() + b.set.size() > self.size_bound {
                        continue;
                    }
                    if !self.member(sys, &b.stabs, h) {
                        continue;
                    }
                    let mut both = a.stabs.clone();
                    both.extend(b.stabs.iter().copied());
                    if !self.member(sys, &both, h) {
                        return Some(format!(
                            "coproduct of classes {ai} and {bi} over subgroup {h} is not admissible"
                        ));
                    }
                }
            }
        }
        None
    }
}

impl IndexingSystem {
    /// Checks the seven defining axioms on every isomorphism class of
    /// `H`-sets of size at most `size_bound`, for every subgroup `H`,
    /// using literal finite-set constructions.  Returns the first failure
    /// description.  For repeated validation over one group, build an
    /// `AxiomOracle` once instead.
    pub fn validate_against_axioms(&self, size_bound: usize) -> Option<String> {
        AxiomOracle::new(&self.group, size_bound).validate(self)
    }
}
