//! Finite left actions of a subgroup on an indexed point set, with the
//! standard constructions: coset spaces, orbits with stabilizers and
//! witness isomorphisms, restriction, induction, conjugation, fixed
//! points, isomorphism testing, pullbacks, and a quotient comparison for
//! actions of a product group.
//!
//! A `FiniteGSet` always remembers which subgroup of the ambient group
//! acts; "a K-set" is a `FiniteGSet` whose `acting()` is `K`.  Actions are
//! stored as one permutation per subgroup element, indexed parallel to the
//! subgroup's sorted element list, and validated on construction.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, ProductGroup, Subgroup};
use crate::perm::Perm;

#[derive(Clone)]
pub struct FiniteGSet {
    acting: Subgroup,
    size: usize,
    act: Vec<Perm>,
    labels: Option<Vec<String>>,
}

impl std::fmt::Debug for FiniteGSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "FiniteGSet(|X|={}, acting=#{}, orbits={:?})",
            self.size,
            self.acting.id(),
            self.act.len()
        )
    }
}

impl PartialEq for FiniteGSet {
    fn eq(&self, other: &Self) -> bool {
        // labels are display data and do not affect identity
        self.acting == other.acting && self.size == other.size && self.act == other.act
    }
}
impl Eq for FiniteGSet {}

impl FiniteGSet {
    pub fn new(acting: Subgroup, size: usize, act: Vec<Perm>) -> Result<Self> {
        if act.len() != acting.size() {
            return Err(Error::NotAnAction(format!(
                "need one permutation per subgroup element, got {} for {}",
                act.len(),
                acting.size()
            )));
        }
        for p in &act {
            if p.degree() != size {
                return Err(Error::NotAnAction(format!(
                    "permutation degree {} does not match size {size}",
                    p.degree()
                )));
            }
        }
        let set = FiniteGSet {
            acting,
            size,
            act,
            labels: None,
        };
        let g = set.acting.group();
        let id_pos = set.acting.position_of(g.id()).unwrap();
        if !set.act[id_pos].is_identity() {
            return Err(Error::NotAnAction("identity element must act trivially".into()));
        }
        for &a in set.acting.elements() {
            for &b in set.acting.elements() {
                let ab = g.mul(a, b);
                let lhs = set.act_of(a).compose(set.act_of(b));
                if &lhs != set.act_of(ab) {
                    return Err(Error::NotAnAction(format!(
                        "act({a}) . act({b}) differs from act({ab})"
                    )));
                }
            }
        }
        Ok(set)
    }

    pub fn from_action_fn(
        acting: Subgroup,
        size: usize,
        f: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let mut act = Vec::with_capacity(acting.size());
        for &e in acting.elements() {
            let images: Vec<usize> = (0..size).map(|p| f(e, p)).collect();
            act.push(Perm::new(images)?);
        }
        FiniteGSet::new(acting, size, act)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.size);
        self.labels = Some(labels);
        self
    }

    pub fn acting(&self) -> &Subgroup {
        &self.acting
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.acting.group()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    pub fn label(&self, p: usize) -> String {
        match &self.labels {
            Some(l) => l[p].clone(),
            None => p.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn act_of(&self, elt: usize) -> &Perm {
        let pos = self
            .acting
            .position_of(elt)
            .expect("element must lie in the acting subgroup");
        &self.act[pos]
    }

    pub fn apply(&self, elt: usize, p: usize) -> usize {
        self.act_of(elt).apply(p)
    }

    pub fn trivial_set(acting: Subgroup, n: usize) -> Self {
        let act = vec![Perm::identity(n); acting.size()];
        FiniteGSet::new(acting, n, act).unwrap()
    }

    pub fn empty(acting: Subgroup) -> Self {
        FiniteGSet::trivial_set(acting, 0)
    }

    /// The coset space `acting/s` as an `acting`-set, points ordered as in
    /// `s.coset_reps_in(acting)`.
    pub fn coset_space(acting: &Subgroup, s: &Subgroup) -> Result<Self> {
        let dec = s.coset_reps_in(acting)?;
        let g = acting.group();
        let size = dec.len();
        let set = FiniteGSet::from_action_fn(acting.clone(), size, |e, p| {
            dec.coset_of(g.mul(e, dec.reps()[p])).unwrap()
        })?;
        let labels = dec
            .reps()
            .iter()
            .map(|&r| format!("{}*H{}", g.name(r), s.id()))
            .collect();
        Ok(set.with_labels(labels))
    }

    pub fn disjoint_union(&self, other: &FiniteGSet) -> Result<Self> {
        if self.acting != other.acting {
            return Err(Error::GroupMismatch);
        }
        let size = self.size + other.size;
        let offset = self.size;
        let set = FiniteGSet::from_action_fn(self.acting.clone(), size, |e, p| {
            if p < offset {
                self.apply(e, p)
            } else {
                offset + other.apply(e, p - offset)
            }
        })?;
        let labels = (0..size)
            .map(|p| {
                if p < offset {
                    self.label(p)
                } else {
                    other.label(p - offset)
                }
            })
            .collect();
        Ok(set.with_labels(labels))
    }

    /// Same points, action restricted to `k`.
    pub fn restrict(&self, k: &Subgroup) -> Result<Self> {
        if !k.is_contained_in(&self.acting) {
            return Err(Error::NotContained(k.id(), self.acting.id()));
        }
        let mut set = FiniteGSet::from_action_fn(k.clone(), self.size, |e, p| self.apply(e, p))?;
        set.labels = self.labels.clone();
        Ok(set)
    }

    /// The conjugate set: same points, acted on by `H^g = g^{-1} H g`,
    /// where `k` acts as `g k g^{-1}` did.  Stabilizers transform as
    /// `Stab(p)` becoming `Stab(p)^g`.
    pub fn conjugate(&self, g: usize) -> Self {
        let grp = self.acting.group();
        let new_acting = self.acting.conjugate(g);
        let mut set = FiniteGSet::from_action_fn(new_acting, self.size, |k, p| {
            let original = grp.mul(grp.mul(g, k), grp.inv(g));
            self.apply(original, p)
        })
        .expect("conjugating a valid action yields a valid action");
        set.labels = self.labels.clone();
        set
    }

    /// `ind_K^H X` for `K = self.acting()` and `K <= H`: points are pairs
    /// (coset of K in H, point of X), ordered lexicographically, with
    /// `h * (r_j, x) = (r_i, k x)` where `h r_j = r_i k`.
    pub fn induce(&self, h: &Subgroup) -> Result<Self> {
        let dec = self.acting.coset_reps_in(h)?;
        let g = h.group();
        let m = self.size;
        let size = dec.len() * m;
        let set = FiniteGSet::from_action_fn(h.clone(), size, |e, p| {
            let (j, x) = (p / m, p % m);
            let (i, k) = dec.factor(g.mul(e, dec.reps()[j])).unwrap();
            i * m + self.apply(k, x)
        })?;
        let labels = (0..size)
            .map(|p| format!("{}*({})", g.name(dec.reps()[p / m]), self.label(p % m)))
            .collect();
        Ok(set.with_labels(labels))
    }

    /// Points moved to new positions along `perm`; an isomorphic copy.
    pub fn relabel(&self, perm: &Perm) -> Self {
        assert_eq!(perm.degree(), self.size);
        let inv = perm.inverse();
        let mut set = FiniteGSet::from_action_fn(self.acting.clone(), self.size, |e, p| {
            perm.apply(self.apply(e, inv.apply(p)))
        })
        .expect("relabeling a valid action yields a valid action");
        set.labels = self
            .labels
            .as_ref()
            .map(|l| (0..self.size).map(|p| l[inv.apply(p)].clone()).collect());
        set
    }

    pub fn stabilizer_of(&self, p: usize) -> Subgroup {
        let elems: Vec<usize> = self
            .acting
            .elements()
            .iter()
            .copied()
            .filter(|&e| self.apply(e, p) == p)
            .collect();
        Subgroup::from_elements(self.acting.group(), &elems)
            .expect("stabilizers are subgroups")
    }

    pub fn fixed_points(&self, s: &Subgroup) -> Vec<usize> {
        assert!(
            s.is_contained_in(&self.acting),
            "fixed points are taken under a subgroup of the acting group"
        );
        self.points()
            .filter(|&p| s.elements().iter().all(|&e| self.apply(e, p) == p))
            .collect()
    }

    pub fn orbit_of(&self, p: usize) -> Vec<usize> {
        let mut orbit: Vec<usize> = self
            .acting
            .elements()
            .iter()
            .map(|&e| self.apply(e, p))
            .collect();
        orbit.sort_unstable();
        orbit.dedup();
        orbit
    }

    pub fn is_transitive(&self) -> bool {
        self.size > 0 && self.orbit_of(0).len() == self.size
    }

    /// Whether the action of `s` on the points is free.
    pub fn is_free_under(&self, s: &Subgroup) -> bool {
        self.points().all(|p| {
            s.elements()
                .iter()
                .all(|&e| e == self.group().id() || self.apply(e, p) != p)
        })
    }

    /// The sub-`G`-set on a union of orbits, reindexed in increasing point
    /// order.  Errors if `points` is not closed under the action.
    pub fn sub_gset(&self, points: &[usize]) -> Result<Self> {
        let mut pts: Vec<usize> = points.to_vec();
        pts.sort_unstable();
        pts.dedup();
        let index_of = |p: usize| pts.binary_search(&p).ok();
        for &p in &pts {
            for &e in self.acting.elements() {
                if index_of(self.apply(e, p)).is_none() {
                    return Err(Error::NotAnAction(format!(
                        "point set not closed: {p} leaves it under element {e}"
                    )));
                }
            }
        }
        let mut set = FiniteGSet::from_action_fn(self.acting.clone(), pts.len(), |e, i| {
            index_of(self.apply(e, pts[i])).unwrap()
        })?;
        set.labels = self
            .labels
            .as_ref()
            .map(|l| pts.iter().map(|&p| l[p].clone()).collect());
        Ok(set)
    }

    pub fn orbits(&self) -> OrbitDecomposition {
        let mut seen = vec![false; self.size];
        let mut orbits = Vec::new();
        for p in 0..self.size {
            if seen[p] {
                continue;
            }
            let points = self.orbit_of(p);
            for &q in &points {
                seen[q] = true;
            }
            let stabilizer = self.stabilizer_of(p);
            let orbit_set = self.sub_gset(&points).unwrap();
            let coset_space = FiniteGSet::coset_space(&self.acting, &stabilizer).unwrap();
            let dec = stabilizer.coset_reps_in(&self.acting).unwrap();
            let map: Vec<usize> = dec
                .reps()
                .iter()
                .map(|&r| points.binary_search(&self.apply(r, p)).unwrap())
                .collect();
            let witness = EquivariantMap::new(coset_space, orbit_set, map)
                .expect("the orbit map from the coset space is equivariant");
            orbits.push(Orbit {
                basepoint: p,
                points,
                stabilizer,
                witness,
            });
        }
        OrbitDecomposition { orbits }
    }

    /// Sorted multiset of orbit stabilizer classes, each the minimal
    /// canonical subgroup id in the stabilizer's conjugacy class under the
    /// acting subgroup.  An isomorphism invariant, and a complete one.
    pub fn orbit_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self
            .orbits()
            .orbits
            .iter()
            .map(|o| conjugacy_class_id_in(&o.stabilizer, &self.acting))
            .collect();
        t.sort_unstable();
        t
    }
}

/// Minimal canonical id among the conjugates `s^h` for `h` in `within`.
pub fn conjugacy_class_id_in(s: &Subgroup, within: &Subgroup) -> usize {
    within
        .elements()
        .iter()
        .map(|&h| s.conjugate(h).id())
        .min()
        .unwrap()
}

#[derive(Clone, Debug)]
pub struct Orbit {
    pub basepoint: usize,
    pub points: Vec<usize>,
    pub stabilizer: Subgroup,
    /// Isomorphism from the coset space of the stabilizer onto this orbit
    /// (as a standalone reindexed set), sending the identity coset to the
    /// basepoint.
    pub witness: EquivariantMap,
}

#[derive(Clone, Debug)]
pub struct OrbitDecomposition {
    pub orbits: Vec<Orbit>,
}

impl OrbitDecomposition {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn orbit_index_of(&self, p: usize) -> usize {
        self.orbits
            .iter()
            .position(|o| o.points.binary_search(&p).is_ok())
            .expect("every point lies in an orbit")
    }
}

#[derive(Clone)]
pub struct EquivariantMap {
    source: FiniteGSet,
    target: FiniteGSet,
    map: Vec<usize>,
}

impl std::fmt::Debug for EquivariantMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "EquivariantMap{:?}", self.map)
    }
}

impl PartialEq for EquivariantMap {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.map == other.map
    }
}
impl Eq for EquivariantMap {}

impl EquivariantMap {
    pub fn new(source: FiniteGSet, target: FiniteGSet, map: Vec<usize>) -> Result<Self> {
        if source.acting() != target.acting() {
            return Err(Error::GroupMismatch);
        }
        if map.len() != source.size() {
            return Err(Error::Malformed(format!(
                "map has {} entries for a source of size {}",
                map.len(),
                source.size()
            )));
        }
        for &q in &map {
            if q >= target.size() {
                return Err(Error::Malformed(format!(
                    "map value {q} out of range for target of size {}",
                    target.size()
                )));
            }
        }
        for &e in source.acting().elements() {
            for p in source.points() {
                if map[source.apply(e, p)] != target.apply(e, map[p]) {
                    return Err(Error::NotEquivariant { elt: e, point: p });
                }
            }
        }
        Ok(EquivariantMap { source, target, map })
    }

    pub fn identity(set: &FiniteGSet) -> Self {
        EquivariantMap {
            source: set.clone(),
            target: set.clone(),
            map: (0..set.size()).collect(),
        }
    }

    pub fn source(&self) -> &FiniteGSet {
        &self.source
    }

    pub fn target(&self) -> &FiniteGSet {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, p: usize) -> usize {
        self.map[p]
    }

    /// `self . first`, requiring `first.target() == self.source()`.
    pub fn compose(&self, first: &EquivariantMap) -> Result<Self> {
        if first.target != self.source {
            return Err(Error::Malformed(
                "composition needs matching middle object".into(),
            ));
        }
        Ok(EquivariantMap {
            source: first.source.clone(),
            target: self.target.clone(),
            map: first.map.iter().map(|&p| self.map[p]).collect(),
        })
    }

    pub fn is_bijective(&self) -> bool {
        if self.source.size() != self.target.size() {
            return false;
        }
        let mut seen = vec![false; self.target.size()];
        for &q in &self.map {
            if seen[q] {
                return false;
            }
            seen[q] = true;
        }
        true
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_bijective() {
            return None;
        }
        let mut map = vec![0; self.target.size()];
        for (p, &q) in self.map.iter().enumerate() {
            map[q] = p;
        }
        Some(EquivariantMap {
            source: self.target.clone(),
            target: self.source.clone(),
            map,
        })
    }

    pub fn fiber(&self, q: usize) -> Vec<usize> {
        (0..self.map.len()).filter(|&p| self.map[p] == q).collect()
    }
}

/// Equivariant isomorphism search.  Orbits are matched by the conjugacy
/// class of their stabilizers; within matched orbits a basepoint with the
/// exact same stabilizer is found and the map is spread along coset
/// representatives.
pub fn iso_test(x: &FiniteGSet, y: &FiniteGSet) -> Option<EquivariantMap> {
    if x.acting() != y.acting() || x.size() != y.size() {
        return None;
    }
    let acting = x.acting();
    let xo = x.orbits();
    let yo = y.orbits();
    if xo.len() != yo.len() {
        return None;
    }
    let key = |set: &FiniteGSet, o: &Orbit| {
        (o.points.len(), conjugacy_class_id_in(&o.stabilizer, set.acting()))
    };
    let mut xs: Vec<&Orbit> = xo.orbits.iter().collect();
    let mut ys: Vec<&Orbit> = yo.orbits.iter().collect();
    xs.sort_by_key(|o| key(x, o));
    ys.sort_by_key(|o| key(y, o));
    let mut map = vec![usize::MAX; x.size()];
    for (ox, oy) in xs.iter().zip(ys.iter()) {
        if key(x, ox) != key(y, oy) {
            return None;
        }
        let s = &ox.stabilizer;
        // some point of the y-orbit has stabilizer exactly s
        let q0 = oy
            .points
            .iter()
            .copied()
            .find(|&q| y.stabilizer_of(q) == *s)?;
        let dec = s.coset_reps_in(acting).unwrap();
        for &r in dec.reps() {
            map[x.apply(r, ox.basepoint)] = y.apply(r, q0);
        }
    }
    if map.iter().any(|&q| q == usize::MAX) {
        return None;
    }
    let m = EquivariantMap::new(x.clone(), y.clone(), map)
        .expect("orbitwise transport along equal stabilizers is equivariant");
    debug_assert!(m.is_bijective());
    Some(m)
}

/// Every equivariant map from `src` to `tgt`.  A map is determined by the
/// images of the orbit basepoints, which can land on any target point
/// fixed by the basepoint stabilizer; the enumeration walks those choices.
pub fn equivariant_maps(src: &FiniteGSet, tgt: &FiniteGSet) -> Vec<EquivariantMap> {
    if src.acting() != tgt.acting() {
        return Vec::new();
    }
    let orbits = src.orbits().orbits;
    let candidates: Vec<Vec<usize>> = orbits
        .iter()
        .map(|o| tgt.fixed_points(&o.stabilizer))
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let transversals: Vec<Vec<usize>> = orbits
        .iter()
        .map(|o| {
            o.stabilizer
                .coset_reps_in(src.acting())
                .expect("stabilizers live inside the acting subgroup")
                .reps()
                .to_vec()
        })
        .collect();
    let mut choice = vec![0usize; orbits.len()];
    let mut out = Vec::new();
    loop {
        let mut map = vec![usize::MAX; src.size()];
        for (i, o) in orbits.iter().enumerate() {
            let image = candidates[i][choice[i]];
            for &r in &transversals[i] {
                map[src.apply(r, o.basepoint)] = tgt.apply(r, image);
            }
        }
        out.push(
            EquivariantMap::new(src.clone(), tgt.clone(), map)
                .expect("orbitwise transport from fixed points is equivariant"),
        );
        let mut i = 0;
        loop {
            if i == orbits.len() {
                return out;
            }
            choice[i] += 1;
            if choice[i] < candidates[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Restriction along a subgroup decomposes a coset space into double-coset
/// pieces: `res_L (H/K)` is the disjoint union over `L g K` of
/// `L / (L meet g K g^{-1})`.  Used as a structural self-check.
pub fn restriction_double_coset_pieces(
    h: &Subgroup,
    k: &Subgroup,
    l: &Subgroup,
) -> Result<FiniteGSet> {
    let g = h.group();
    let mut pieces = FiniteGSet::empty(l.clone());
    for &d in &double_cosets_in(l, k, h) {
        // L meet g K g^{-1} = L meet K^{g^{-1}}
        let conj = k.conjugate(g.inv(d));
        let inter: Vec<usize> = l
            .elements()
            .iter()
            .copied()
            .filter(|&e| conj.contains(e))
            .collect();
        let s = Subgroup::from_elements(g, &inter)?;
        pieces = pieces.disjoint_union(&FiniteGSet::coset_space(l, &s)?)?;
    }
    Ok(pieces)
}

/// Double cosets `L g K` with `g` ranging over an overgroup `H`.
pub fn double_cosets_in(l: &Subgroup, k: &Subgroup, h: &Subgroup) -> Vec<usize> {
    let g = h.group();
    let mut seen = vec![false; g.order()];
    let mut reps = Vec::new();
    for &e in h.elements() {
        if seen[e] {
            continue;
        }
        reps.push(e);
        for &a in l.elements() {
            for &b in k.elements() {
                seen[g.mul(g.mul(a, e), b)] = true;
            }
        }
    }
    reps
}

/// A pullback (fiber product) of two maps with a common target, with its
/// two projections.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub gset: FiniteGSet,
    pub to_left: EquivariantMap,
    pub to_right: EquivariantMap,
    pairs: Vec<(usize, usize)>,
}

impl Pullback {
    pub fn pair_index(&self, c: usize, e: usize) -> Option<usize> {
        self.pairs.binary_search(&(c, e)).ok()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// The unique map induced by a cone: given `p`, `q` with
    /// `f . p = g . q`, the map `t -> (p(t), q(t))` into the pullback.
    pub fn mediate(&self, p: &EquivariantMap, q: &EquivariantMap) -> Result<EquivariantMap> {
        if p.source() != q.source() {
            return Err(Error::Malformed("cone legs need a common source".into()));
        }
        let map: Vec<usize> = p
            .source()
            .points()
            .map(|t| {
                self.pair_index(p.apply(t), q.apply(t)).ok_or_else(|| {
                    Error::Malformed(format!("cone does not commute at point {t}"))
                })
            })
            .collect::<Result<_>>()?;
        EquivariantMap::new(p.source().clone(), self.gset.clone(), map)
    }
}

pub fn pullback(f: &EquivariantMap, g: &EquivariantMap) -> Result<Pullback> {
    if f.target() != g.target() {
        return Err(Error::Malformed("pullback needs a common target".into()));
    }
    if f.source().acting() != g.source().acting() {
        return Err(Error::GroupMismatch);
    }
    let mut pairs = Vec::new();
    for c in f.source().points() {
        for e in g.source().points() {
            if f.apply(c) == g.apply(e) {
                pairs.push((c, e));
            }
        }
    }
    pairs.sort_unstable();
    let acting = f.source().acting().clone();
    let pr: Vec<(usize, usize)> = pairs.clone();
    let fs = f.source().clone();
    let gs = g.source().clone();
    let gset = FiniteGSet::from_action_fn(acting, pairs.len(), |elt, i| {
        let (c, e) = pr[i];
        let moved = (fs.apply(elt, c), gs.apply(elt, e));
        pr.binary_search(&moved).unwrap()
    })?;
    let to_left = EquivariantMap::new(
        gset.clone(),
        f.source().clone(),
        pairs.iter().map(|&(c, _)| c).collect(),
    )?;
    let to_right = EquivariantMap::new(
        gset.clone(),
        g.source().clone(),
        pairs.iter().map(|&(_, e)| e).collect(),
    )?;
    Ok(Pullback {
        gset,
        to_left,
        to_right,
        pairs,
    })
}

/// Outcome of the simplicial comparison for a quotient by the right factor
/// of a product group: level `n` of the quotient's chain sets against the
/// quotient of the chain sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NerveCheckResult {
    pub level: usize,
    pub tuple_classes: usize,
    pub chain_count: usize,
    pub injective: bool,
    pub surjective: bool,
    pub equivariant: bool,
}

impl NerveCheckResult {
    pub fn holds(&self) -> bool {
        self.injective && self.surjective && self.equivariant
    }
}

/// Compares `(X^{n+1} x Y) / Gamma` with the `n`-chains of the graph whose
/// object classes are `(X x Y)/Gamma` and whose morphism classes are
/// `(X x X x Y)/Gamma`, mapping a tuple class to its list of consecutive
/// morphism classes.  `x` and `y` are sets over the full product group;
/// `Gamma` is the embedded right factor, and the left factor acts on all
/// quotients.
pub fn nerve_quotient_check(
    pg: &ProductGroup,
    x: &FiniteGSet,
    y: &FiniteGSet,
    n: usize,
) -> Result<NerveCheckResult> {
    let full = Subgroup::full(&pg.group);
    if x.acting() != &full || y.acting() != &full {
        return Err(Error::GroupMismatch);
    }
    let gammas: Vec<usize> = (0..pg.right_order).map(|b| pg.embed_right(b)).collect();
    let lefts: Vec<usize> = (0..pg.left_order).map(|a| pg.embed_left(a)).collect();

    // orbit classes of tuples (x_0, ..., x_k, y) under the diagonal action
    // of Gamma, keyed by their minimal representative
    let canon = |tuple: &[usize], k: usize| -> Vec<usize> {
        let mut best = tuple.to_vec();
        for &g in &gammas {
            let mut moved: Vec<usize> = (0..=k).map(|i| x.apply(g, tuple[i])).collect();
            moved.push(y.apply(g, tuple[k + 1]));
            if moved < best {
                best = moved;
            }
        }
        best
    };

    let enumerate_classes = |k: usize| -> Vec<Vec<usize>> {
        let mut classes = std::collections::BTreeSet::new();
        let mut tuple = vec![0usize; k + 2];
        loop {
            classes.insert(canon(&tuple, k));
            // odometer over X^{k+1} x Y
            let mut pos = 0;
            loop {
                if pos == k + 2 {
                    let out: Vec<Vec<usize>> = classes.into_iter().collect();
                    return out;
                }
                let limit = if pos <= k { x.size() } else { y.size() };
                tuple[pos] += 1;
                if tuple[pos] < limit {
                    break;
                }
                tuple[pos] = 0;
                pos += 1;
            }
        }
    };

    if x.size() == 0 || y.size() == 0 {
        // no tuples on either side when a factor is empty
        let lhs = if x.size() == 0 || y.size() == 0 { 0 } else { 1 };
        return Ok(NerveCheckResult {
            level: n,
            tuple_classes: lhs,
            chain_count: lhs,
            injective: true,
            surjective: true,
            equivariant: true,
        });
    }

    let objects = enumerate_classes(0);
    let morphisms = enumerate_classes(1);
    let obj_index = |rep: &[usize]| objects.binary_search_by(|c| c.as_slice().cmp(rep)).unwrap();
    let mor_index =
        |rep: &[usize]| morphisms.binary_search_by(|c| c.as_slice().cmp(rep)).unwrap();

    // source and target of a morphism class, as object classes
    let src: Vec<usize> = morphisms
        .iter()
        .map(|m| obj_index(&canon(&[m[0], m[2]], 0)))
        .collect();
    let tgt: Vec<usize> = morphisms
        .iter()
        .map(|m| obj_index(&canon(&[m[1], m[2]], 0)))
        .collect();

    // all n-chains of composable morphism classes
    let chains: Vec<Vec<usize>> = if n == 0 {
        (0..objects.len()).map(|o| vec![o]).collect()
    } else {
        let mut partial: Vec<Vec<usize>> = (0..morphisms.len()).map(|m| vec![m]).collect();
        for _ in 1..n {
            let mut next = Vec::new();
            for c in partial {
                let last = *c.last().unwrap();
                for m in 0..morphisms.len() {
                    if src[m] == tgt[last] {
                        let mut ext = c.clone();
                        ext.push(m);
                        next.push(ext);
                    }
                }
            }
            partial = next;
        }
        partial
    };

    let tuples = enumerate_classes(n);
    let to_chain = |rep: &[usize]| -> Vec<usize> {
        if n == 0 {
            vec![obj_index(&canon(rep, 0))]
        } else {
            (1..=n)
                .map(|i| mor_index(&canon(&[rep[i - 1], rep[i], rep[n + 1]], 1)))
                .collect()
        }
    };

    let images: Vec<Vec<usize>> = tuples.iter().map(|t| to_chain(t)).collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut injective = true;
    for im in &images {
        if !seen.insert(im.clone()) {
            injective = false;
        }
    }
    let surjective = chains.iter().all(|c| seen.contains(c));

    // the left factor acts on every quotient; the comparison map must
    // commute with it
    let mut equivariant = true;
    'outer: for &a in &lefts {
        for (ti, t) in tuples.iter().enumerate() {
            let mut moved: Vec<usize> = (0..=n).map(|i| x.apply(a, t[i])).collect();
            moved.push(y.apply(a, t[n + 1]));
            let moved_class = canon(&moved, n);
            let lhs = to_chain(&moved_class);
            let rhs: Vec<usize> = if n == 0 {
                let o = images[ti][0];
                let rep = &objects[o];
                vec![obj_index(&canon(&[x.apply(a, rep[0]), y.apply(a, rep[1])], 0))]
            } else {
                images[ti]
                    .iter()
                    .map(|&m| {
                        let rep = &morphisms[m];
                        mor_index(&canon(
                            &[x.apply(a, rep[0]), x.apply(a, rep[1]), y.apply(a, rep[2])],
                            1,
                        ))
                    })
                    .collect()
            };
            if lhs != rhs {
                equivariant = false;
                break 'outer;
            }
        }
    }

    Ok(NerveCheckResult {
        level: n,
        tuple_classes: tuples.len(),
        chain_count: chains.len(),
        injective,
        surjective,
        equivariant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, dihedral, enumerate_subgroups, product, symmetric};

    #[test]
    fn coset_space_is_transitive_with_expected_stabilizer() {
        for (_, g) in crate::group::builtin_groups() {
            let full = Subgroup::full(&g);
            for h in enumerate_subgroups(&g) {
                let x = FiniteGSet::coset_space(&full, &h).unwrap();
                assert_eq!(x.size(), g.order() / h.size());
                assert!(x.size() == 1 || x.is_transitive());
                // the stabilizer of the identity coset is h itself
                assert_eq!(x.stabilizer_of(0), h);
            }
        }
    }

    #[test]
    fn orbit_stabilizer_theorem() {
        let g = dihedral(4);
        let full = Subgroup::full(&g);
        for h in enumerate_subgroups(&g) {
            let x = FiniteGSet::coset_space(&full, &h).unwrap();
            for k in enumerate_subgroups(&g) {
                let r = x.restrict(&k).unwrap();
                for o in r.orbits().orbits {
                    assert_eq!(o.points.len() * o.stabilizer.size(), k.size());
                    assert!(o.witness.is_bijective());
                    assert_eq!(o.witness.source().size(), o.points.len());
                }
            }
        }
    }

    #[test]
    fn restriction_satisfies_the_double_coset_formula() {
        for g in [symmetric(3), dihedral(4), cyclic(8)] {
            let full = Subgroup::full(&g);
            let subs = enumerate_subgroups(&g);
            for k in &subs {
                let coset = FiniteGSet::coset_space(&full, k).unwrap();
                for l in &subs {
                    let restricted = coset.restrict(l).unwrap();
                    let pieces = restriction_double_coset_pieces(&full, k, l).unwrap();
                    assert!(
                        iso_test(&restricted, &pieces).is_some(),
                        "double coset formula fails for K=#{} L=#{}",
                        k.id(),
                        l.id()
                    );
                }
            }
        }
    }

    #[test]
    fn conjugation_composes_and_transforms_stabilizers() {
        let g = symmetric(3);
        let full = Subgroup::full(&g);
        let subs = enumerate_subgroups(&g);
        let h = subs.iter().find(|s| s.size() == 2).unwrap();
        let x = FiniteGSet::coset_space(&full, h)
            .unwrap()
            .restrict(h)
            .unwrap();
        for g1 in g.elements() {
            let cx = x.conjugate(g1);
            assert_eq!(cx.acting(), &h.conjugate(g1));
            for p in x.points() {
                assert_eq!(cx.stabilizer_of(p), x.stabilizer_of(p).conjugate(g1));
            }
            for g2 in g.elements() {
                assert_eq!(cx.conjugate(g2), x.conjugate(g.mul(g1, g2)));
            }
        }
    }

    #[test]
    fn induction_is_transitive_and_hits_coset_spaces() {
        let g = dihedral(4);
        let full = Subgroup::full(&g);
        let subs = enumerate_subgroups(&g);
        for l in &subs {
            for k in subs.iter().filter(|k| l.is_contained_in(k)) {
                // ind_L^K (K/L-point) then up to G equals direct induction
                let pt_l = FiniteGSet::trivial_set(l.clone(), 1);
                let up_k = pt_l.induce(k).unwrap();
                let up_g = up_k.induce(&full).unwrap();
                let direct = pt_l.induce(&full).unwrap();
                assert!(iso_test(&up_g, &direct).is_some());
                // inducing the one-point L-set to G gives G/L
                let coset = FiniteGSet::coset_space(&full, l).unwrap();
                assert!(iso_test(&direct, &coset).is_some());
            }
        }
    }

    #[test]
    fn induction_point_stabilizers() {
        let g = symmetric(3);
        let full = Subgroup::full(&g);
        let k = enumerate_subgroups(&g)
            .into_iter()
            .find(|s| s.size() == 2)
            .unwrap();
        let x = FiniteGSet::trivial_set(k.clone(), 2);
        let ind = x.induce(&full).unwrap();
        assert_eq!(ind.size(), 6);
        // the identity-coset block keeps stabilizer K
        assert_eq!(ind.stabilizer_of(0), k);
        assert_eq!(ind.stabilizer_of(1), k);
    }

    #[test]
    fn iso_test_accepts_relabelings_and_rejects_different_types() {
        let g = dihedral(4);
        let full = Subgroup::full(&g);
        let subs = enumerate_subgroups(&g);
        let mut x = FiniteGSet::coset_space(&full, &subs[1]).unwrap();
        x = x
            .disjoint_union(&FiniteGSet::coset_space(&full, &subs[3]).unwrap())
            .unwrap();
        let perms = crate::perm::Perm::all(4);
        // relabel by a few permutations extended to the full size
        for seed in [1usize, 5, 17] {
            let small = &perms[seed % perms.len()];
            let mut images: Vec<usize> = (0..x.size()).collect();
            for i in 0..4.min(x.size()) {
                images[i] = small.apply(i);
            }
            if let Ok(p) = crate::perm::Perm::new(images) {
                let y = x.relabel(&p);
                let iso = iso_test(&x, &y).expect("relabeled copies are isomorphic");
                assert!(iso.is_bijective());
            }
        }
        let z = FiniteGSet::coset_space(&full, &subs[0]).unwrap();
        assert!(iso_test(&x, &z).is_none());
        // same size, different orbit type
        let a = FiniteGSet::trivial_set(Subgroup::full(&g), 2);
        let b = FiniteGSet::coset_space(&full, subs.iter().find(|s| s.size() == 4).unwrap())
            .unwrap();
        assert_eq!(a.size(), b.size());
        assert!(iso_test(&a, &b).is_none());
    }

    #[test]
    fn equivariant_map_enumeration_counts_fixed_points_orbitwise() {
        let g = cyclic(2);
        let full = Subgroup::full(&g);
        let free = FiniteGSet::coset_space(&full, &Subgroup::trivial(&g)).unwrap();
        let pt = FiniteGSet::coset_space(&full, &full).unwrap();
        // free to free: images of the basepoint range over the whole orbit
        assert_eq!(equivariant_maps(&free, &free).len(), 2);
        // collapsing to the point is the only map out
        assert_eq!(equivariant_maps(&free, &pt).len(), 1);
        // nothing maps the point into a fixed-point-free set
        assert!(equivariant_maps(&pt, &free).is_empty());
        // the empty set maps in exactly one way, and receives none from a
        // nonempty set
        let empty = FiniteGSet::empty(full.clone());
        assert_eq!(equivariant_maps(&empty, &free).len(), 1);
        assert!(equivariant_maps(&free, &empty).is_empty());
        // counts multiply over source orbits: two free orbits into free,
        // and every map is equivariant on inspection
        let two = free.disjoint_union(&free).unwrap();
        let maps = equivariant_maps(&two, &free);
        assert_eq!(maps.len(), 4);
        for m in &maps {
            for &e in full.elements() {
                for p in 0..two.size() {
                    assert_eq!(m.apply(two.apply(e, p)), free.apply(e, m.apply(p)));
                }
            }
        }
    }

    #[test]
    fn orbit_type_is_a_complete_invariant_on_small_sets() {
        let g = symmetric(3);
        let full = Subgroup::full(&g);
        let subs = enumerate_subgroups(&g);
        // all disjoint unions of at most two coset spaces
        let mut sets = vec![FiniteGSet::empty(full.clone())];
        for s in &subs {
            sets.push(FiniteGSet::coset_space(&full, s).unwrap());
        }
        let singles = sets.clone();
        for a in &singles {
            for b in &singles {
                if a.size() + b.size() <= 8 {
                    sets.push(a.disjoint_union(b).unwrap());
                }
            }
        }
        for a in &sets {
            for b in &sets {
                let same_type = a.orbit_type() == b.orbit_type();
                let isomorphic = iso_test(a, b).is_some();
                assert_eq!(same_type, isomorphic);
            }
        }
    }

    #[test]
    fn pullback_universal_property() {
        let g = symmetric(3);
        let full = Subgroup::full(&g);
        let subs = enumerate_subgroups(&g);
        let k = subs.iter().find(|s| s.size() == 2).unwrap();
        let l = subs.iter().find(|s| s.size() == 3).unwrap();
        let gh = FiniteGSet::coset_space(&full, &Subgroup::full(&g)).unwrap();
        let gk = FiniteGSet::coset_space(&full, k).unwrap();
        let gl = FiniteGSet::coset_space(&full, l).unwrap();
        let f = EquivariantMap::new(gk.clone(), gh.clone(), vec![0; gk.size()]).unwrap();
        let h = EquivariantMap::new(gl.clone(), gh.clone(), vec![0; gl.size()]).unwrap();
        let pb = pullback(&f, &h).unwrap();
        assert_eq!(pb.gset.size(), 6);
        // the projections commute
        for i in pb.gset.points() {
            assert_eq!(f.apply(pb.to_left.apply(i)), h.apply(pb.to_right.apply(i)));
        }
        // mediate the pullback's own cone: must be the identity
        let m = pb.mediate(&pb.to_left, &pb.to_right).unwrap();
        assert_eq!(m.map(), EquivariantMap::identity(&pb.gset).map());
        // a non-commuting cone is rejected
        let bad = EquivariantMap::identity(&gk);
        assert!(pb.mediate(&bad, &bad).is_err());
    }

    #[test]
    fn pullback_of_coset_projections_matches_double_cosets() {
        // G/K x_{G/H} G/L decomposes along K\H/L when K, L <= H
        let g = dihedral(4);
        let full = Subgroup::full(&g);
        let subs = enumerate_subgroups(&g);
        for h in &subs {
            let gh = FiniteGSet::coset_space(&full, h).unwrap();
            for k in subs.iter().filter(|s| s.is_contained_in(h)) {
                for l in subs.iter().filter(|s| s.is_contained_in(h)) {
                    let gk = FiniteGSet::coset_space(&full, k).unwrap();
                    let gl = FiniteGSet::coset_space(&full, l).unwrap();
                    let deck = k.coset_reps();
                    let decl = l.coset_reps();
                    let dech = h.coset_reps();
                    let f = EquivariantMap::new(
                        gk.clone(),
                        gh.clone(),
                        deck.reps()
                            .iter()
                            .map(|&r| dech.coset_of(r).unwrap())
                            .collect(),
                    )
                    .unwrap();
                    let e = EquivariantMap::new(
                        gl.clone(),
                        gh.clone(),
                        decl.reps()
                            .iter()
                            .map(|&r| dech.coset_of(r).unwrap())
                            .collect(),
                    )
                    .unwrap();
                    let pb = pullback(&f, &e).unwrap();
                    let mut expected = FiniteGSet::empty(full.clone());
                    for &d in &double_cosets_in(k, l, h) {
                        let conj = l.conjugate(g.inv(d));
                        let inter: Vec<usize> = k
                            .elements()
                            .iter()
                            .copied()
                            .filter(|&x| conj.contains(x))
                            .collect();
                        let s = Subgroup::from_elements(&g, &inter).unwrap();
                        expected = expected
                            .disjoint_union(&FiniteGSet::coset_space(&full, &s).unwrap())
                            .unwrap();
                    }
                    assert!(iso_test(&pb.gset, &expected).is_some());
                }
            }
        }
    }

    #[test]
    fn nerve_comparison_holds_for_free_right_actions() {
        let pg = product(&cyclic(2), &cyclic(2));
        let full = Subgroup::full(&pg.group);
        // X = the regular product-group set: the right factor acts freely
        let x = FiniteGSet::coset_space(&full, &Subgroup::trivial(&pg.group)).unwrap();
        let gamma_elems: Vec<usize> = (0..pg.right_order).map(|b| pg.embed_right(b)).collect();
        let gamma = Subgroup::from_elements(&pg.group, &gamma_elems).unwrap();
        assert!(x.is_free_under(&gamma));
        let y = FiniteGSet::trivial_set(full.clone(), 2);
        for n in 0..=3 {
            let res = nerve_quotient_check(&pg, &x, &y, n).unwrap();
            assert!(res.holds(), "comparison fails at level {n}: {res:?}");
        }
    }

    #[test]
    fn nerve_comparison_fails_without_freeness() {
        let pg = product(&cyclic(2), &cyclic(2));
        let full = Subgroup::full(&pg.group);
        // X mixes a free right-factor orbit with a fixed point: the
        // quotient of triples then exceeds the chains (a,c,a) and (a,c,b)
        // become distinct classes with the same pair of morphism classes
        let left_elems: Vec<usize> = (0..pg.left_order).map(|a| pg.embed_left(a)).collect();
        let left_sub = Subgroup::from_elements(&pg.group, &left_elems).unwrap();
        let free_orbit = FiniteGSet::coset_space(&full, &left_sub).unwrap();
        let fixed_pt = FiniteGSet::trivial_set(full.clone(), 1);
        let x = free_orbit.disjoint_union(&fixed_pt).unwrap();
        let gamma_elems: Vec<usize> = (0..pg.right_order).map(|b| pg.embed_right(b)).collect();
        let gamma = Subgroup::from_elements(&pg.group, &gamma_elems).unwrap();
        assert!(!x.is_free_under(&gamma));
        let y = FiniteGSet::trivial_set(full.clone(), 1);
        let res = nerve_quotient_check(&pg, &x, &y, 2).unwrap();
        assert!(!res.injective, "expected an injectivity failure, got {res:?}");
        assert_eq!(res.tuple_classes, 14);
        assert_eq!(res.chain_count, 13);
    }
}
