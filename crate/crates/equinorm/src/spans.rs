//! Spans of finite G-sets whose transfer leg is admissible: composition by
//! pullback, canonical isomorphism classes backed by a brute-force oracle,
//! hom groupoids, a semi-additivity check, the generator that turns a span
//! over an orbit into equivariant functor data, and evaluation of spans on
//! functions into a commutative monoid with compatible group action.
//!
//! A span runs from its source to its target: the left leg points at the
//! source and is unconstrained, the right leg points at the target and must
//! be admissible for the ambient indexing system.  Transfers move along the
//! right leg, so evaluation sums over its fibers; restrictions are spans
//! whose right leg is an isomorphism.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::gset::{equivariant_maps, pullback, EquivariantMap, FiniteGSet};
use crate::indexing::IndexingSystem;
use crate::normed::{
    fixed_subcategory, leaf_object, EquivariantFunctorData, NatTrans, NormedMorphism,
    NormedObject,
};
use crate::operad::{admissible_hset_classes, NormTree};

/// A span between finite sets over a common acting subgroup.  The left leg
/// maps the apex to the source, the right leg maps it to the target, and
/// the right leg is admissible: over each target orbit, its fiber is an
/// admissible set for the orbit stabilizer.
#[derive(Clone, PartialEq)]
pub struct SpanMorphism {
    source: FiniteGSet,
    target: FiniteGSet,
    apex: FiniteGSet,
    left: EquivariantMap,
    right: EquivariantMap,
}

impl std::fmt::Debug for SpanMorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Span(left {:?}, right {:?})", self.left, self.right)
    }
}

impl SpanMorphism {
    /// Build a span from its two legs out of a common apex.  The right leg
    /// is the transfer direction and must be admissible; the left leg is
    /// arbitrary.
    pub fn new(sys: &IndexingSystem, left: EquivariantMap, right: EquivariantMap) -> Result<Self> {
        if left.source() != right.source() {
            return Err(Error::BadSpan("legs must share an apex".into()));
        }
        if !sys.is_admissible_map(&right) {
            return Err(Error::BadSpan("right leg is not admissible".into()));
        }
        Ok(SpanMorphism {
            source: left.target().clone(),
            target: right.target().clone(),
            apex: left.source().clone(),
            left,
            right,
        })
    }

    /// The identity span: both legs the identity.  Its right leg is always
    /// admissible because fibers are one-point trivial sets.
    pub fn identity(sys: &IndexingSystem, a: &FiniteGSet) -> SpanMorphism {
        SpanMorphism::new(
            sys,
            EquivariantMap::identity(a),
            EquivariantMap::identity(a),
        )
        .expect("identity legs have one-point fibers, which are always admissible")
    }

    pub fn source(&self) -> &FiniteGSet {
        &self.source
    }

    pub fn target(&self) -> &FiniteGSet {
        &self.target
    }

    pub fn apex(&self) -> &FiniteGSet {
        &self.apex
    }

    pub fn left(&self) -> &EquivariantMap {
        &self.left
    }

    pub fn right(&self) -> &EquivariantMap {
        &self.right
    }
}

fn coset_projection(k: &Subgroup, h: &Subgroup) -> Result<EquivariantMap> {
    if k.group() != h.group() {
        return Err(Error::GroupMismatch);
    }
    if !k.is_contained_in(h) {
        return Err(Error::NotContained(k.id(), h.id()));
    }
    let full = Subgroup::full(k.group());
    let src = FiniteGSet::coset_space(&full, k)?;
    let tgt = FiniteGSet::coset_space(&full, h)?;
    let hdec = h.coset_reps();
    let map = k
        .coset_reps()
        .reps()
        .iter()
        .map(|&r| hdec.coset_of(r).expect("every element lies in some coset"))
        .collect();
    EquivariantMap::new(src, tgt, map)
}

/// The transfer span from `G/K` up to `G/H` for nested subgroups `K <= H`:
/// apex `G/K`, identity left leg, coset projection as the right leg.  The
/// projection is admissible exactly when `H/K` is an admissible `H`-set.
pub fn transfer_span(sys: &IndexingSystem, k: &Subgroup, h: &Subgroup) -> Result<SpanMorphism> {
    let proj = coset_projection(k, h)?;
    let id = EquivariantMap::identity(proj.source());
    SpanMorphism::new(sys, id, proj)
}

/// The restriction span from `G/H` down to `G/L` for nested subgroups
/// `L <= H`: apex `G/L`, coset projection as the left leg, identity right
/// leg.  Always admissible.
pub fn restriction_span(sys: &IndexingSystem, h: &Subgroup, l: &Subgroup) -> Result<SpanMorphism> {
    let proj = coset_projection(l, h)?;
    let id = EquivariantMap::identity(proj.source());
    SpanMorphism::new(sys, proj, id)
}

/// Compose two spans end to end: the composite apex is the pullback of the
/// facing legs.  Admissibility of the composite right leg follows from
/// pullback and composition stability, but is re-verified here rather than
/// assumed.
pub fn compose_spans(
    sys: &IndexingSystem,
    s: &SpanMorphism,
    t: &SpanMorphism,
) -> Result<SpanMorphism> {
    if s.target != t.source {
        return Err(Error::BadSpan(
            "the middle boundary of the spans does not match".into(),
        ));
    }
    let pb = pullback(&s.right, &t.left)?;
    let left = s.left.compose(&pb.to_left)?;
    let right = t.right.compose(&pb.to_right)?;
    SpanMorphism::new(sys, left, right)
}

/// Canonical key of a span's isomorphism class.  Each apex orbit
/// contributes the lexicographically smallest triple of stabilizer id and
/// leg values over its points; the sorted list of triples, together with
/// the boundary shapes, determines the span up to apex isomorphisms
/// commuting with both legs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpanIsoClass {
    source_type: Vec<usize>,
    target_type: Vec<usize>,
    signatures: Vec<(usize, usize, usize)>,
}

/// Compute the canonical isomorphism-class key of a span.  Two spans with
/// the same source and target get equal keys exactly when some apex
/// isomorphism commutes with both legs: an equivariant bijection matches
/// orbits with equal minimal triples, and conversely any orbit pair
/// sharing a triple admits a leg-preserving isomorphism built by
/// transporting the witnessing basepoints.
pub fn canonical_form(span: &SpanMorphism) -> SpanIsoClass {
    let mut signatures: Vec<(usize, usize, usize)> = span
        .apex
        .orbits()
        .orbits
        .iter()
        .map(|o| {
            o.points
                .iter()
                .map(|&q| {
                    (
                        span.apex.stabilizer_of(q).id(),
                        span.left.apply(q),
                        span.right.apply(q),
                    )
                })
                .min()
                .expect("orbits are nonempty")
        })
        .collect();
    signatures.sort_unstable();
    SpanIsoClass {
        source_type: span.source.orbit_type(),
        target_type: span.target.orbit_type(),
        signatures,
    }
}

/// All apex isomorphisms from `s` to `t` commuting with both legs: the
/// brute-force oracle that `canonical_form` is validated against.  Empty
/// when the boundaries differ.
pub fn span_isomorphisms(s: &SpanMorphism, t: &SpanMorphism) -> Vec<EquivariantMap> {
    if s.source != t.source || s.target != t.target || s.apex.size() != t.apex.size() {
        return Vec::new();
    }
    equivariant_maps(&s.apex, &t.apex)
        .into_iter()
        .filter(|w| {
            w.is_bijective()
                && s.apex.points().all(|c| {
                    t.left.apply(w.apply(c)) == s.left.apply(c)
                        && t.right.apply(w.apply(c)) == s.right.apply(c)
                })
        })
        .collect()
}

/// The order of the automorphism group of a span: apex self-isomorphisms
/// commuting with both legs.
pub fn span_aut_order(s: &SpanMorphism) -> usize {
    span_isomorphisms(s, s).len()
}

/// The groupoid of spans between two fixed boundary sets, materialized up
/// to an apex size bound.  The target comes first: it is the side the
/// admissible transfer legs land on.  Objects are all spans whose apex is
/// one of the isomorphism-class representatives of sets of size at most
/// the bound; morphisms are apex isomorphisms commuting with both legs.
pub struct HomGroupoid {
    pub target: FiniteGSet,
    pub source: FiniteGSet,
    pub spans: Vec<SpanMorphism>,
}

pub fn hom_groupoid(
    sys: &IndexingSystem,
    target: &FiniteGSet,
    source: &FiniteGSet,
    apex_bound: usize,
) -> Result<HomGroupoid> {
    if target.acting() != source.acting() {
        return Err(Error::GroupMismatch);
    }
    let acting = target.acting();
    let everything = IndexingSystem::complete(acting.group());
    let mut spans = Vec::new();
    for apex in admissible_hset_classes(&everything, acting, apex_bound) {
        let rights: Vec<EquivariantMap> = equivariant_maps(&apex, target)
            .into_iter()
            .filter(|u| sys.is_admissible_map(u))
            .collect();
        if rights.is_empty() {
            continue;
        }
        let lefts = equivariant_maps(&apex, source);
        for right in &rights {
            for left in &lefts {
                spans.push(SpanMorphism {
                    source: source.clone(),
                    target: target.clone(),
                    apex: apex.clone(),
                    left: left.clone(),
                    right: right.clone(),
                });
            }
        }
    }
    Ok(HomGroupoid {
        target: target.clone(),
        source: source.clone(),
        spans,
    })
}

impl HomGroupoid {
    pub fn len(&self) -> usize {
        self.spans.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    /// Isomorphism classes of the materialized spans, as index lists in
    /// first-seen order.
    pub fn iso_classes(&self) -> Vec<Vec<usize>> {
        let mut keys: Vec<SpanIsoClass> = Vec::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (i, s) in self.spans.iter().enumerate() {
            let key = canonical_form(s);
            match keys.iter().position(|k| *k == key) {
                Some(j) => classes[j].push(i),
                None => {
                    keys.push(key);
                    classes.push(vec![i]);
                }
            }
        }
        classes
    }

    pub fn aut_order(&self, i: usize) -> usize {
        span_aut_order(&self.spans[i])
    }
}

/// Split a span whose target is the disjoint union of `a` and `b` into its
/// two parts: each part keeps the apex points whose transfer leg lands in
/// the corresponding summand.  Restricting an admissible leg to the
/// preimage of a summand keeps it admissible, so both parts are spans.
pub fn split_span(
    sys: &IndexingSystem,
    span: &SpanMorphism,
    a: &FiniteGSet,
    b: &FiniteGSet,
) -> Result<(SpanMorphism, SpanMorphism)> {
    let sum = a.disjoint_union(b)?;
    if span.target != sum {
        return Err(Error::BadSpan(
            "the target is not the disjoint union of the given summands".into(),
        ));
    }
    let cut = a.size();
    let part = |points: Vec<usize>, tgt: &FiniteGSet, shift: usize| -> Result<SpanMorphism> {
        let apex = span.apex.sub_gset(&points)?;
        let left = EquivariantMap::new(
            apex.clone(),
            span.source.clone(),
            points.iter().map(|&c| span.left.apply(c)).collect(),
        )?;
        let right = EquivariantMap::new(
            apex,
            tgt.clone(),
            points.iter().map(|&c| span.right.apply(c) - shift).collect(),
        )?;
        SpanMorphism::new(sys, left, right)
    };
    let pa: Vec<usize> = span.apex.points().filter(|&c| span.right.apply(c) < cut).collect();
    let pb: Vec<usize> = span.apex.points().filter(|&c| span.right.apply(c) >= cut).collect();
    Ok((part(pa, a, 0)?, part(pb, b, cut)?))
}

/// Check that the span groupoid into a disjoint union decomposes as the
/// product of the groupoids into the summands.  Splitting must be a
/// bijection between isomorphism classes of spans into `a ⊔ b` and pairs
/// of classes into `a` and into `b` whose apex sizes fit the bound
/// together, and automorphism groups must multiply along the way.
pub fn semi_additivity_check(
    sys: &IndexingSystem,
    a: &FiniteGSet,
    b: &FiniteGSet,
    c: &FiniteGSet,
    apex_bound: usize,
) -> Result<bool> {
    let sum = a.disjoint_union(b)?;
    let whole = hom_groupoid(sys, &sum, c, apex_bound)?;
    let into_a = hom_groupoid(sys, a, c, apex_bound)?;
    let into_b = hom_groupoid(sys, b, c, apex_bound)?;
    let mut seen: BTreeMap<SpanIsoClass, (SpanIsoClass, SpanIsoClass)> = BTreeMap::new();
    let mut pairs_seen: BTreeSet<(SpanIsoClass, SpanIsoClass)> = BTreeSet::new();
    for sp in &whole.spans {
        let key = canonical_form(sp);
        let (pa, pb) = split_span(sys, sp, a, b)?;
        let pair = (canonical_form(&pa), canonical_form(&pb));
        match seen.get(&key) {
            Some(stored) => {
                // splitting must be constant on isomorphism classes
                if *stored != pair {
                    return Ok(false);
                }
            }
            None => {
                if span_aut_order(sp) != span_aut_order(&pa) * span_aut_order(&pb) {
                    return Ok(false);
                }
                // distinct classes must split distinctly
                if !pairs_seen.insert(pair.clone()) {
                    return Ok(false);
                }
                seen.insert(key, pair);
            }
        }
    }
    // every size-compatible pair of part classes must be hit
    let classes_a = into_a.iso_classes();
    let classes_b = into_b.iso_classes();
    let mut expected = 0usize;
    for ca in &classes_a {
        let rep_a = &into_a.spans[ca[0]];
        for cb in &classes_b {
            let rep_b = &into_b.spans[cb[0]];
            if rep_a.apex.size() + rep_b.apex.size() > apex_bound {
                continue;
            }
            expected += 1;
            let pair = (canonical_form(rep_a), canonical_form(rep_b));
            if !pairs_seen.contains(&pair) {
                return Ok(false);
            }
        }
    }
    Ok(expected == pairs_seen.len())
}

/// Rewrite a span whose target is a single orbit so that its apex is
/// literally the induced set of the transfer-leg fiber over the basepoint
/// and the transfer leg is the block projection.  The result is
/// isomorphic to the input as a span.
pub fn normalize_to_projection(
    sys: &IndexingSystem,
    span: &SpanMorphism,
) -> Result<SpanMorphism> {
    if !span.target.is_transitive() {
        return Err(Error::BadSpan(
            "normalization needs a single orbit as target".into(),
        ));
    }
    let h = span.target.stabilizer_of(0);
    let fiber = span.right.fiber(0);
    let t = span.apex.restrict(&h)?.sub_gset(&fiber)?;
    let ind = t.induce(span.target.acting())?;
    let dec = h.coset_reps_in(span.target.acting())?;
    let mut map = Vec::with_capacity(ind.size());
    for &r in dec.reps() {
        for &c in &fiber {
            map.push(span.apex.apply(r, c));
        }
    }
    let iso = EquivariantMap::new(ind, span.apex.clone(), map)?;
    debug_assert!(iso.is_bijective());
    SpanMorphism::new(sys, span.left.compose(&iso)?, span.right.compose(&iso)?)
}

/// Translate a span whose target is a single orbit into the strict functor
/// data it generates.  The fiber of the transfer leg over the basepoint is
/// an admissible set for the basepoint stabilizer; the left leg labels it,
/// giving a fixed norm object over the source, which is transported around
/// the orbit.  A one-point fiber yields plain leaf data, so the identity
/// span gives the identity functor.
pub fn theta(span: &SpanMorphism) -> Result<EquivariantFunctorData> {
    if !span.target.acting().is_full() {
        return Err(Error::BadSpan(
            "functor data needs the full group acting".into(),
        ));
    }
    if !span.target.is_transitive() {
        return Err(Error::BadSpan(
            "the generating spans have a single orbit as target".into(),
        ));
    }
    let h = span.target.stabilizer_of(0);
    let fiber = span.right.fiber(0);
    let base = if fiber.len() == 1 {
        leaf_object(&span.source, span.left.apply(fiber[0]))?
    } else {
        let t = span.apex.restrict(&h)?.sub_gset(&fiber)?;
        let labels: Vec<usize> = fiber.iter().map(|&c| span.left.apply(c)).collect();
        NormedObject::new(
            span.source.clone(),
            NormTree::Node {
                subgroup: h.clone(),
                hset: t,
                rep: span.target.group().id(),
                children: vec![NormTree::Leaf; fiber.len()],
            },
            labels,
        )?
    };
    debug_assert!(base.is_fixed_under(&h));
    let mut assign: Vec<Option<NormedObject>> = vec![None; span.target.size()];
    for &r in h.coset_reps().reps() {
        assign[span.target.apply(r, 0)] = Some(base.act(r));
    }
    EquivariantFunctorData::new(
        span.target.clone(),
        span.source.clone(),
        assign
            .into_iter()
            .map(|x| x.expect("coset representatives reach every point of the orbit"))
            .collect(),
    )
}

/// Translate a span isomorphism into the natural isomorphism between the
/// generated functor data: on the basepoint fibers the cell is an index
/// bijection, which is transported around the orbit.
pub fn theta_iso(
    s: &SpanMorphism,
    t: &SpanMorphism,
    w: &EquivariantMap,
) -> Result<NatTrans> {
    if w.source() != &s.apex || w.target() != &t.apex {
        return Err(Error::BadSpan("the cell must map apex to apex".into()));
    }
    if !w.is_bijective() {
        return Err(Error::BadSpan("span cells are apex isomorphisms".into()));
    }
    for c in s.apex.points() {
        if t.left.apply(w.apply(c)) != s.left.apply(c)
            || t.right.apply(w.apply(c)) != s.right.apply(c)
        {
            return Err(Error::BadSpan("the cell does not commute with the legs".into()));
        }
    }
    let from = theta(s)?;
    let to = theta(t)?;
    let h = s.target.stabilizer_of(0);
    let fs = s.right.fiber(0);
    let ft = t.right.fiber(0);
    let alpha: Vec<usize> = fs
        .iter()
        .map(|&c| {
            ft.binary_search(&w.apply(c))
                .expect("leg-commuting cells map fibers to fibers")
        })
        .collect();
    let comp0 = NormedMorphism::new(from.assigned(0).clone(), to.assigned(0).clone(), alpha)?;
    let mut comp: Vec<Option<NormedMorphism>> = vec![None; s.target.size()];
    for &r in h.coset_reps().reps() {
        comp[s.target.apply(r, 0)] = Some(comp0.act(r));
    }
    NatTrans::new(
        from,
        to,
        comp.into_iter()
            .map(|x| x.expect("coset representatives reach every point of the orbit"))
            .collect(),
    )
}

/// Outcome of comparing the span groupoid into an orbit with the fixed
/// subcategory of the normed category over the source, under the functor
/// generator: isomorphism classes should match one to one with equal
/// automorphism counts.
#[derive(Clone, Debug)]
pub struct ThetaReport {
    pub span_class_count: usize,
    pub fixed_class_count: usize,
    pub images_are_fixed: bool,
    pub classes_biject: bool,
    pub aut_orders_match: bool,
}

impl ThetaReport {
    pub fn holds(&self) -> bool {
        self.span_class_count == self.fixed_class_count
            && self.images_are_fixed
            && self.classes_biject
            && self.aut_orders_match
    }
}

/// Compare spans into an orbit against fixed objects over the source.  A
/// span with apex size at most the bound has a fiber of length at most
/// `bound / |orbit|`, so the fixed side is materialized up to that length
/// and the generator's images are matched against it class by class.
pub fn theta_fixed_comparison(
    sys: &IndexingSystem,
    orbit: &FiniteGSet,
    a: &FiniteGSet,
    apex_bound: usize,
) -> Result<ThetaReport> {
    if !orbit.is_transitive() {
        return Err(Error::BadSpan("the target must be a single orbit".into()));
    }
    let h = orbit.stabilizer_of(0);
    let hg = hom_groupoid(sys, orbit, a, apex_bound)?;
    let span_classes = hg.iso_classes();
    let length_bound = apex_bound / orbit.size();
    let fixed = fixed_subcategory(sys, a, &h, length_bound + 1);
    let bounded: Vec<Vec<usize>> = fixed
        .iso_classes()
        .into_iter()
        .filter(|cls| fixed.objects[cls[0]].length() <= length_bound)
        .collect();
    let mut images_are_fixed = true;
    let mut aut_orders_match = true;
    let mut matched: Vec<Option<usize>> = Vec::new();
    for cls in &span_classes {
        let rep = &hg.spans[cls[0]];
        let image = theta(rep)?.assigned(0).clone();
        if !image.is_fixed_under(&h) {
            images_are_fixed = false;
        }
        let found = bounded
            .iter()
            .position(|fc| !fixed.core_hom_fixed(&fixed.objects[fc[0]], &image).is_empty());
        if found.is_some() && fixed.core_hom_fixed(&image, &image).len() != span_aut_order(rep) {
            aut_orders_match = false;
        }
        matched.push(found);
    }
    let mut hit: Vec<usize> = matched.iter().filter_map(|m| *m).collect();
    hit.sort_unstable();
    hit.dedup();
    let classes_biject = matched.iter().all(Option::is_some)
        && hit.len() == span_classes.len()
        && span_classes.len() == bounded.len();
    Ok(ThetaReport {
        span_class_count: span_classes.len(),
        fixed_class_count: bounded.len(),
        images_are_fixed,
        classes_biject,
        aut_orders_match,
    })
}

/// A finite commutative monoid whose carrier is acted on by monoid
/// automorphisms: the value target for span evaluation.  The carrier set
/// holds the action; the addition table and zero are validated against it.
#[derive(Clone, Debug)]
pub struct CommutativeGMonoid {
    carrier: FiniteGSet,
    add: Vec<usize>,
    zero: usize,
}

impl CommutativeGMonoid {
    pub fn new(carrier: FiniteGSet, add: Vec<usize>, zero: usize) -> Result<Self> {
        let n = carrier.size();
        if add.len() != n * n {
            return Err(Error::BadMonoid(format!(
                "addition table has {} entries for {} elements",
                add.len(),
                n
            )));
        }
        if add.iter().any(|&v| v >= n) {
            return Err(Error::BadMonoid("addition table entry out of range".into()));
        }
        if zero >= n {
            return Err(Error::BadMonoid("zero element out of range".into()));
        }
        let sum = |a: usize, b: usize| add[a * n + b];
        for a in 0..n {
            if sum(zero, a) != a {
                return Err(Error::BadMonoid(format!("zero does not fix {a}")));
            }
            for b in 0..n {
                if sum(a, b) != sum(b, a) {
                    return Err(Error::BadMonoid(format!("not commutative at ({a},{b})")));
                }
                for c in 0..n {
                    if sum(sum(a, b), c) != sum(a, sum(b, c)) {
                        return Err(Error::BadMonoid(format!(
                            "not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        for &g in carrier.acting().elements() {
            if carrier.apply(g, zero) != zero {
                return Err(Error::BadMonoid(format!("element {g} moves zero")));
            }
            for a in 0..n {
                for b in 0..n {
                    if carrier.apply(g, sum(a, b)) != sum(carrier.apply(g, a), carrier.apply(g, b))
                    {
                        return Err(Error::BadMonoid(format!(
                            "element {g} is not additive at ({a},{b})"
                        )));
                    }
                }
            }
        }
        Ok(CommutativeGMonoid { carrier, add, zero })
    }

    /// Integers mod `m` with the trivial action.
    pub fn integers_mod(acting: &Subgroup, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::BadMonoid("modulus must be positive".into()));
        }
        let carrier = FiniteGSet::trivial_set(acting.clone(), m);
        let add = (0..m * m).map(|i| (i / m + i % m) % m).collect();
        CommutativeGMonoid::new(carrier, add, 0)
    }

    pub fn carrier(&self) -> &FiniteGSet {
        &self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn sum(&self, a: usize, b: usize) -> usize {
        self.add[a * self.carrier.size() + b]
    }

    pub fn apply(&self, g: usize, a: usize) -> usize {
        self.carrier.apply(g, a)
    }
}

/// Evaluate a span on an equivariant function from its source into the
/// monoid: pull the function back along the left leg, then add over the
/// fibers of the transfer leg.  The output is an equivariant function on
/// the target, since the action is by monoid automorphisms.
pub fn mackey_eval(
    m: &CommutativeGMonoid,
    span: &SpanMorphism,
    phi: &[usize],
) -> Result<Vec<usize>> {
    if m.carrier().acting() != span.source.acting() {
        return Err(Error::GroupMismatch);
    }
    if phi.len() != span.source.size() {
        return Err(Error::Malformed(format!(
            "expected {} function values, got {}",
            span.source.size(),
            phi.len()
        )));
    }
    if phi.iter().any(|&v| v >= m.size()) {
        return Err(Error::Malformed("function value out of range".into()));
    }
    for &g in span.source.acting().elements() {
        for p in span.source.points() {
            if phi[span.source.apply(g, p)] != m.apply(g, phi[p]) {
                return Err(Error::NotEquivariant { elt: g, point: p });
            }
        }
    }
    let out: Vec<usize> = span
        .target
        .points()
        .map(|b| {
            span.right
                .fiber(b)
                .into_iter()
                .fold(m.zero(), |acc, c| m.sum(acc, phi[span.left.apply(c)]))
        })
        .collect();
    debug_assert!(span.target.acting().elements().iter().all(|&g| {
        span.target
            .points()
            .all(|b| out[span.target.apply(g, b)] == m.apply(g, out[b]))
    }));
    Ok(out)
}

/// Every equivariant function from the set into the monoid carrier: the
/// valid evaluation inputs at that source.
pub fn monoid_valued_functions(m: &CommutativeGMonoid, a: &FiniteGSet) -> Vec<Vec<usize>> {
    equivariant_maps(a, m.carrier())
        .into_iter()
        .map(|f| f.map().to_vec())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, enumerate_subgroups, symmetric, FiniteGroup};
    use crate::gset::{double_cosets_in, iso_test, restriction_double_coset_pieces};
    use crate::indexing::enumerate_all;
    use crate::normed::slice_category;
    use crate::perm::Perm;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn orbit(sub: &Subgroup) -> FiniteGSet {
        FiniteGSet::coset_space(&Subgroup::full(sub.group()), sub).unwrap()
    }

    fn subgroup_of_order(g: &Arc<FiniteGroup>, n: usize) -> Subgroup {
        enumerate_subgroups(g)
            .into_iter()
            .find(|s| s.size() == n)
            .unwrap()
    }

    #[test]
    fn spans_validate_their_transfer_leg_and_compose_with_identities() {
        let g = cyclic(4);
        let complete = IndexingSystem::complete(&g);
        let minimal = IndexingSystem::minimal(&g);
        let e = Subgroup::trivial(&g);
        let full = Subgroup::full(&g);
        let c2 = subgroup_of_order(&g, 2);

        assert!(transfer_span(&complete, &e, &full).is_ok());
        assert!(matches!(
            transfer_span(&minimal, &e, &full),
            Err(Error::BadSpan(_))
        ));

        let tr = transfer_span(&complete, &c2, &full).unwrap();
        let before = canonical_form(&tr);
        let left_unit = compose_spans(
            &complete,
            &SpanMorphism::identity(&complete, tr.source()),
            &tr,
        )
        .unwrap();
        let right_unit = compose_spans(
            &complete,
            &tr,
            &SpanMorphism::identity(&complete, tr.target()),
        )
        .unwrap();
        assert_eq!(canonical_form(&left_unit), before);
        assert_eq!(canonical_form(&right_unit), before);
        assert!(!span_isomorphisms(&left_unit, &tr).is_empty());

        let mismatched = compose_spans(&complete, &tr, &tr);
        assert!(matches!(mismatched, Err(Error::BadSpan(_))));

        let pt = orbit(&full);
        let free = orbit(&e);
        let bad = SpanMorphism::new(
            &complete,
            EquivariantMap::identity(&pt),
            EquivariantMap::identity(&free),
        );
        assert!(matches!(bad, Err(Error::BadSpan(_))));
    }

    #[test]
    fn composing_transfer_with_restriction_decomposes_by_double_cosets() {
        let cases: Vec<(Arc<FiniteGroup>, usize, usize, usize)> = vec![
            (cyclic(4), 4, 2, 2),
            (symmetric(3), 6, 3, 2),
            (symmetric(3), 3, 1, 3),
        ];
        for (g, ho, ko, lo) in cases {
            let sys = IndexingSystem::complete(&g);
            let h = subgroup_of_order(&g, ho);
            let k = enumerate_subgroups(&g)
                .into_iter()
                .find(|s| s.size() == ko && s.is_contained_in(&h))
                .unwrap();
            let l = enumerate_subgroups(&g)
                .into_iter()
                .find(|s| s.size() == lo && s.is_contained_in(&h))
                .unwrap();
            let tr = transfer_span(&sys, &k, &h).unwrap();
            let res = restriction_span(&sys, &h, &l).unwrap();
            let comp = compose_spans(&sys, &tr, &res).unwrap();
            assert_eq!(comp.source(), tr.source());
            assert_eq!(comp.target(), res.target());

            let cosets = double_cosets_in(&l, &k, &h);
            assert_eq!(comp.apex().orbits().len(), cosets.len());

            let fiber_points = comp.right().fiber(0);
            let fiber = comp
                .apex()
                .restrict(&l)
                .unwrap()
                .sub_gset(&fiber_points)
                .unwrap();
            let pieces = restriction_double_coset_pieces(&h, &k, &l).unwrap();
            assert!(iso_test(&fiber, &pieces).is_some());
        }
    }

    #[test]
    fn composition_is_associative_on_iso_classes() {
        let g = cyclic(4);
        let e = Subgroup::trivial(&g);
        let full = Subgroup::full(&g);
        let c2 = subgroup_of_order(&g, 2);
        let (a, b, c, d) = (orbit(&e), orbit(&c2), orbit(&c2), orbit(&full));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for sys in [
            IndexingSystem::complete(&g),
            enumerate_all(&g).unwrap()[2].clone(),
        ] {
            let sab = hom_groupoid(&sys, &b, &a, 4).unwrap();
            let sbc = hom_groupoid(&sys, &c, &b, 4).unwrap();
            let scd = hom_groupoid(&sys, &d, &c, 4).unwrap();
            for _ in 0..10 {
                let s = &sab.spans[rng.random_range(0..sab.spans.len())];
                let t = &sbc.spans[rng.random_range(0..sbc.spans.len())];
                let u = &scd.spans[rng.random_range(0..scd.spans.len())];
                let lhs = compose_spans(&sys, &compose_spans(&sys, s, t).unwrap(), u).unwrap();
                let rhs = compose_spans(&sys, s, &compose_spans(&sys, t, u).unwrap()).unwrap();
                assert_eq!(canonical_form(&lhs), canonical_form(&rhs));
                assert!(!span_isomorphisms(&lhs, &rhs).is_empty());
            }
        }
    }

    #[test]
    fn canonical_forms_agree_with_the_isomorphism_search() {
        let c4 = cyclic(4);
        let s3 = symmetric(3);
        let samples = vec![
            hom_groupoid(
                &IndexingSystem::complete(&c4),
                &orbit(&subgroup_of_order(&c4, 2)),
                &orbit(&subgroup_of_order(&c4, 2)),
                3,
            )
            .unwrap(),
            hom_groupoid(
                &IndexingSystem::complete(&s3),
                &orbit(&subgroup_of_order(&s3, 2)),
                &orbit(&subgroup_of_order(&s3, 3)),
                3,
            )
            .unwrap(),
        ];
        for hg in samples {
            for i in 0..hg.spans.len() {
                for j in i..hg.spans.len() {
                    let same_key =
                        canonical_form(&hg.spans[i]) == canonical_form(&hg.spans[j]);
                    let found = !span_isomorphisms(&hg.spans[i], &hg.spans[j]).is_empty();
                    assert_eq!(same_key, found, "spans {i} and {j} disagree");
                }
            }
        }
    }

    fn spans_match_slices(
        hg: &HomGroupoid,
        slice: &crate::normed::SliceCategory,
    ) -> bool {
        let h = hg.target.stabilizer_of(0);
        let span_classes = hg.iso_classes();
        let slice_classes = slice.iso_classes();
        if span_classes.len() != slice_classes.len() {
            return false;
        }
        let mut used = vec![false; slice_classes.len()];
        for cls in &span_classes {
            let rep = &hg.spans[cls[0]];
            let fiber = rep.right().fiber(0);
            let t = rep.apex().restrict(&h).unwrap().sub_gset(&fiber).unwrap();
            let u: Vec<usize> = fiber.iter().map(|&c| rep.left().apply(c)).collect();
            let found = slice_classes.iter().position(|sc| {
                let so = &slice.objects[sc[0]];
                equivariant_maps(&t, &so.set).into_iter().any(|w| {
                    w.is_bijective() && (0..t.size()).all(|p| so.map[w.apply(p)] == u[p])
                })
            });
            match found {
                Some(j) if !used[j] => {
                    used[j] = true;
                    if span_aut_order(rep) != slice.aut_order(slice_classes[j][0]) {
                        return false;
                    }
                }
                _ => return false,
            }
        }
        true
    }

    #[test]
    fn hom_groupoids_match_slice_categories() {
        let g = cyclic(4);
        let c2 = subgroup_of_order(&g, 2);
        let full = Subgroup::full(&g);
        let free = orbit(&Subgroup::trivial(&g));
        let middle = orbit(&c2);
        for sys in enumerate_all(&g).unwrap() {
            let hg = hom_groupoid(&sys, &middle, &free, 4).unwrap();
            let slice = slice_category(&sys, &c2, &free, 2).unwrap();
            assert!(spans_match_slices(&hg, &slice));

            let hg = hom_groupoid(&sys, &orbit(&full), &middle, 4).unwrap();
            let slice = slice_category(&sys, &full, &middle, 4).unwrap();
            assert!(spans_match_slices(&hg, &slice));
        }
    }

    #[test]
    fn empty_boundaries_give_only_the_empty_span() {
        let g = cyclic(2);
        let sys = IndexingSystem::complete(&g);
        let free = orbit(&Subgroup::trivial(&g));
        let empty = FiniteGSet::empty(Subgroup::full(&g));
        for hg in [
            hom_groupoid(&sys, &free, &empty, 3).unwrap(),
            hom_groupoid(&sys, &empty, &free, 3).unwrap(),
            hom_groupoid(&sys, &empty, &empty, 3).unwrap(),
        ] {
            assert_eq!(hg.len(), 1);
            assert_eq!(hg.spans[0].apex().size(), 0);
            assert_eq!(hg.iso_classes().len(), 1);
            assert_eq!(hg.aut_order(0), 1);
        }
    }

    #[test]
    fn span_automorphism_orders_count_apex_symmetries() {
        let g = cyclic(2);
        let sys = IndexingSystem::complete(&g);
        let e = Subgroup::trivial(&g);
        let full = Subgroup::full(&g);
        let free = orbit(&e);
        let pt = orbit(&full);

        // both legs collapse the free orbit to the point: the full apex
        // symmetry survives
        let to_pt = equivariant_maps(&free, &pt).pop().unwrap();
        let folded = SpanMorphism::new(&sys, to_pt.clone(), to_pt).unwrap();
        assert_eq!(span_aut_order(&folded), 2);

        // an identity leg pins the apex and kills the symmetry
        let tr = transfer_span(&sys, &e, &full).unwrap();
        assert_eq!(span_aut_order(&tr), 1);
    }

    #[test]
    fn semi_additivity_check_passes_on_small_sums() {
        let c2 = cyclic(2);
        let sys2 = IndexingSystem::complete(&c2);
        let free2 = orbit(&Subgroup::trivial(&c2));
        let empty2 = FiniteGSet::empty(Subgroup::full(&c2));
        assert!(semi_additivity_check(&sys2, &free2, &free2, &free2, 4).unwrap());
        assert!(semi_additivity_check(&sys2, &free2, &empty2, &free2, 4).unwrap());

        let c4 = cyclic(4);
        let mid = orbit(&subgroup_of_order(&c4, 2));
        let pt4 = orbit(&Subgroup::full(&c4));
        for sys in [IndexingSystem::complete(&c4), IndexingSystem::minimal(&c4)] {
            assert!(semi_additivity_check(&sys, &mid, &pt4, &mid, 4).unwrap());
        }

        let s3 = symmetric(3);
        let sys3 = IndexingSystem::complete(&s3);
        let a = orbit(&subgroup_of_order(&s3, 2));
        let b = orbit(&subgroup_of_order(&s3, 3));
        assert!(semi_additivity_check(&sys3, &a, &b, &b, 4).unwrap());
    }

    #[test]
    fn theta_translates_generating_spans_to_functor_data() {
        let g = cyclic(2);
        let sys = IndexingSystem::complete(&g);
        let e = Subgroup::trivial(&g);
        let full = Subgroup::full(&g);
        let free = orbit(&e);
        let pt = orbit(&full);

        // identity span: identity functor data
        let id_span = SpanMorphism::identity(&sys, &free);
        assert_eq!(
            theta(&id_span).unwrap(),
            EquivariantFunctorData::identity_data(&free).unwrap()
        );

        // transfer span: the two-point norm object with both labels
        let tr = transfer_span(&sys, &e, &full).unwrap();
        let data = theta(&tr).unwrap();
        let regular = free.restrict(&full).unwrap();
        let expected = NormedObject::new(
            free.clone(),
            NormTree::Node {
                subgroup: full.clone(),
                hset: regular,
                rep: g.id(),
                children: vec![NormTree::Leaf, NormTree::Leaf],
            },
            vec![0, 1],
        )
        .unwrap();
        assert_eq!(data.assigned(0), &expected);
        assert!(data.assigned(0).is_fixed_under(&full));

        // one-point fibers with a twisted label leg: leaf data along the leg
        let twist = EquivariantMap::new(free.clone(), free.clone(), vec![1, 0]).unwrap();
        let twisted = SpanMorphism::new(&sys, twist, EquivariantMap::identity(&free)).unwrap();
        let data = theta(&twisted).unwrap();
        assert_eq!(
            data,
            EquivariantFunctorData::from_map(&free, &free, &[1, 0]).unwrap()
        );

        // a non-transitive target is rejected
        let two = pt.disjoint_union(&pt).unwrap();
        assert!(matches!(
            theta(&SpanMorphism::identity(&sys, &two)),
            Err(Error::BadSpan(_))
        ));
    }

    #[test]
    fn theta_comparison_reports_hold() {
        let c4 = cyclic(4);
        let mid = orbit(&subgroup_of_order(&c4, 2));
        let pt = orbit(&Subgroup::full(&c4));
        for sys in [
            IndexingSystem::complete(&c4),
            enumerate_all(&c4).unwrap()[2].clone(),
        ] {
            let report = theta_fixed_comparison(&sys, &mid, &mid, 4).unwrap();
            assert!(report.holds(), "orbit target failed: {report:?}");
            let report = theta_fixed_comparison(&sys, &pt, &mid, 2).unwrap();
            assert!(report.holds(), "point target failed: {report:?}");
        }

        let s3 = symmetric(3);
        let sys = IndexingSystem::complete(&s3);
        let a = orbit(&subgroup_of_order(&s3, 2));
        let pt3 = orbit(&Subgroup::full(&s3));
        let report = theta_fixed_comparison(&sys, &a, &pt3, 4).unwrap();
        assert!(report.holds(), "symmetric group target failed: {report:?}");
    }

    #[test]
    fn theta_is_functorial_on_span_symmetries() {
        let g = cyclic(2);
        let sys = IndexingSystem::complete(&g);
        let e = Subgroup::trivial(&g);
        let full = Subgroup::full(&g);
        let free = orbit(&e);
        let pt = orbit(&full);

        let to_pt = equivariant_maps(&free, &pt).pop().unwrap();
        let folded = SpanMorphism::new(&sys, to_pt.clone(), to_pt).unwrap();
        let cells = span_isomorphisms(&folded, &folded);
        assert_eq!(cells.len(), 2);
        for w in &cells {
            let nt = theta_iso(&folded, &folded, w).unwrap();
            let square = theta_iso(&folded, &folded, &w.compose(w).unwrap()).unwrap();
            for p in pt.points() {
                assert_eq!(square.comp[p], nt.comp[p].compose(&nt.comp[p]).unwrap());
            }
        }
        let nontrivial = cells
            .iter()
            .find(|w| *w != &EquivariantMap::identity(folded.apex()))
            .unwrap();
        let nt = theta_iso(&folded, &folded, nontrivial).unwrap();
        assert_eq!(nt.comp[0].alpha, vec![1, 0]);

        // a cell that does not commute with the legs is rejected
        let tr = transfer_span(&sys, &e, &full).unwrap();
        let swap = EquivariantMap::new(free.clone(), free.clone(), vec![1, 0]).unwrap();
        assert!(matches!(
            theta_iso(&tr, &tr, &swap),
            Err(Error::BadSpan(_))
        ));
    }

    #[test]
    fn mackey_eval_implements_transfers_and_restrictions() {
        let g = cyclic(4);
        let sys = IndexingSystem::complete(&g);
        let full = Subgroup::full(&g);
        let c2 = subgroup_of_order(&g, 2);
        let m5 = CommutativeGMonoid::integers_mod(&full, 5).unwrap();

        // identity span evaluates to the identity
        let pts = orbit(&full).disjoint_union(&orbit(&full)).unwrap();
        let id_span = SpanMorphism::identity(&sys, &pts);
        assert_eq!(mackey_eval(&m5, &id_span, &[3, 4]).unwrap(), vec![3, 4]);

        // transferring a constant multiplies it by the subgroup index
        let tr = transfer_span(&sys, &c2, &full).unwrap();
        assert_eq!(mackey_eval(&m5, &tr, &[3, 3]).unwrap(), vec![6 % 5]);

        // restriction pulls a constant back unchanged
        let res = restriction_span(&sys, &full, &c2).unwrap();
        assert_eq!(mackey_eval(&m5, &res, &[2]).unwrap(), vec![2, 2]);

        // a non-equivariant function is rejected
        assert!(matches!(
            mackey_eval(&m5, &tr, &[1, 2]),
            Err(Error::NotEquivariant { .. })
        ));

        // summing a sign orbit kills it: negation acts on integers mod 3
        let c2grp = cyclic(2);
        let sys2 = IndexingSystem::complete(&c2grp);
        let full2 = Subgroup::full(&c2grp);
        let signs = FiniteGSet::new(
            full2.clone(),
            3,
            vec![Perm::identity(3), Perm::new(vec![0, 2, 1]).unwrap()],
        )
        .unwrap();
        let m3 = CommutativeGMonoid::new(
            signs,
            (0..9).map(|i| (i / 3 + i % 3) % 3).collect(),
            0,
        )
        .unwrap();
        let tr2 = transfer_span(&sys2, &Subgroup::trivial(&c2grp), &full2).unwrap();
        for phi in monoid_valued_functions(&m3, tr2.source()) {
            assert_eq!(mackey_eval(&m3, &tr2, &phi).unwrap(), vec![0]);
        }
    }

    #[test]
    fn mackey_eval_is_functorial_over_composition() {
        // the evaluation model is the semantic oracle for composition
        let c4 = cyclic(4);
        let sys4 = IndexingSystem::complete(&c4);
        let e4 = Subgroup::trivial(&c4);
        let c2 = subgroup_of_order(&c4, 2);
        let full4 = Subgroup::full(&c4);
        let m4 = CommutativeGMonoid::integers_mod(&full4, 4).unwrap();
        let (a, b, c) = (orbit(&e4), orbit(&c2), orbit(&full4));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let sab = hom_groupoid(&sys4, &b, &a, 4).unwrap();
        let sbc = hom_groupoid(&sys4, &c, &b, 4).unwrap();
        let phis = monoid_valued_functions(&m4, &a);
        for _ in 0..12 {
            let s = &sab.spans[rng.random_range(0..sab.spans.len())];
            let t = &sbc.spans[rng.random_range(0..sbc.spans.len())];
            let st = compose_spans(&sys4, s, t).unwrap();
            for phi in &phis {
                let direct = mackey_eval(&m4, &st, phi).unwrap();
                let staged =
                    mackey_eval(&m4, t, &mackey_eval(&m4, s, phi).unwrap()).unwrap();
                assert_eq!(direct, staged);
            }
        }

        let s3 = symmetric(3);
        let sys3 = IndexingSystem::complete(&s3);
        let full3 = Subgroup::full(&s3);
        // odd permutations act on integers mod 3 by negation
        let signs = FiniteGSet::new(
            full3.clone(),
            3,
            s3.elements()
                .map(|g| {
                    if s3.element_order(g) == 2 {
                        Perm::new(vec![0, 2, 1]).unwrap()
                    } else {
                        Perm::identity(3)
                    }
                })
                .collect(),
        )
        .unwrap();
        let m3 = CommutativeGMonoid::new(
            signs,
            (0..9).map(|i| (i / 3 + i % 3) % 3).collect(),
            0,
        )
        .unwrap();
        let (a, b, c) = (
            orbit(&subgroup_of_order(&s3, 2)),
            orbit(&subgroup_of_order(&s3, 3)),
            orbit(&full3),
        );
        let sab = hom_groupoid(&sys3, &b, &a, 6).unwrap();
        let sbc = hom_groupoid(&sys3, &c, &b, 6).unwrap();
        let phis = monoid_valued_functions(&m3, &a);
        for _ in 0..12 {
            let s = &sab.spans[rng.random_range(0..sab.spans.len())];
            let t = &sbc.spans[rng.random_range(0..sbc.spans.len())];
            let st = compose_spans(&sys3, s, t).unwrap();
            for phi in &phis {
                let direct = mackey_eval(&m3, &st, phi).unwrap();
                let staged =
                    mackey_eval(&m3, t, &mackey_eval(&m3, s, phi).unwrap()).unwrap();
                assert_eq!(direct, staged);
            }
        }
    }

    #[test]
    fn normalization_preserves_the_isomorphism_class() {
        let g = cyclic(4);
        let sys = IndexingSystem::complete(&g);
        let c2 = subgroup_of_order(&g, 2);
        let mid = orbit(&c2);
        let free = orbit(&Subgroup::trivial(&g));
        let hg = hom_groupoid(&sys, &mid, &free, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..8 {
            let span = &hg.spans[rng.random_range(0..hg.spans.len())];
            let norm = normalize_to_projection(&sys, span).unwrap();
            assert_eq!(canonical_form(&norm), canonical_form(span));
            assert!(!span_isomorphisms(&norm, span).is_empty());
            let dec = c2.coset_reps();
            let m = norm.apex().size() / mid.size();
            for j in 0..dec.len() {
                for x in 0..m {
                    assert_eq!(
                        norm.right().apply(j * m + x),
                        mid.apply(dec.reps()[j], 0)
                    );
                }
            }
        }
    }

    #[test]
    fn monoid_tables_are_validated() {
        let g = cyclic(2);
        let full = Subgroup::full(&g);

        assert!(CommutativeGMonoid::integers_mod(&full, 0).is_err());
        assert!(CommutativeGMonoid::integers_mod(&full, 4).is_ok());

        // a non-commutative table is rejected: left projection
        let carrier = FiniteGSet::trivial_set(full.clone(), 2);
        let bad = CommutativeGMonoid::new(carrier.clone(), vec![0, 0, 1, 1], 0);
        assert!(matches!(bad, Err(Error::BadMonoid(_))));

        // an action that is not additive is rejected: negation mod 4 is
        // additive, but a transposition of 1 and 2 is not
        let twisted = FiniteGSet::new(
            full.clone(),
            4,
            vec![Perm::identity(4), Perm::new(vec![0, 2, 1, 3]).unwrap()],
        )
        .unwrap();
        let add: Vec<usize> = (0..16).map(|i| (i / 4 + i % 4) % 4).collect();
        assert!(matches!(
            CommutativeGMonoid::new(twisted, add.clone(), 0),
            Err(Error::BadMonoid(_))
        ));

        // negation mod 4 passes
        let negated = FiniteGSet::new(
            full.clone(),
            4,
            vec![Perm::identity(4), Perm::new(vec![0, 3, 2, 1]).unwrap()],
        )
        .unwrap();
        assert!(CommutativeGMonoid::new(negated, add, 0).is_ok());
    }
}
