//! End-to-end verification suite.  Each check exercises one headline
//! guarantee of the library, either against an independently coded oracle
//! or by an exhaustive sweep at pinned sizes, and reports a one-line
//! outcome.  The acceptance test target runs every check as its own test;
//! the command line exposes the same list behind `--verify-all`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{
    builtin_groups, cyclic, enumerate_subgroups, product, symmetric, trivial_group, FiniteGroup,
    ProductGroup, Subgroup,
};
use crate::gset::{nerve_quotient_check, FiniteGSet};
use crate::indexing::{enumerate_all, AxiomOracle, IndexingSystem};
use crate::normed::{
    beck_chevalley_mate, core_hom_set, enumerate_objects, external_norm, fixed_slice_comparison,
    hom_set, projection_adjunction, slice_category, slice_witness, sum_equivalence, tensor,
    EquivariantFunctorData, NormedMorphism, NormedObject,
};
use crate::operad::{
    admissible_hset_classes, enumerate_trees, graph_subgroup_of, has_fixed_operation,
    verify_operad_identities, EndOperad, FiniteOperad, FreeExtension, NormTree, SymOperad,
    SymOperation,
};
use crate::perm::Perm;
use crate::spans::{
    compose_spans, hom_groupoid, mackey_eval, monoid_valued_functions, span_aut_order, theta,
    theta_fixed_comparison, transfer_span, CommutativeGMonoid,
};

/// Outcome of one suite check.
#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl SuiteOutcome {
    /// The one-line report for this check.
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("{:<32} {} ({})", self.name, verdict, self.detail)
    }
}

fn outcome(name: &'static str, run: impl FnOnce() -> Result<(bool, String)>) -> SuiteOutcome {
    match run() {
        Ok((passed, detail)) => SuiteOutcome {
            name,
            passed,
            detail,
        },
        Err(e) => SuiteOutcome {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

/// Runs every suite check in order.
pub fn run_all() -> Vec<SuiteOutcome> {
    vec![
        check_indexing_enumeration(),
        check_axiom_validation(),
        check_action_cocycle(),
        check_fixed_tree_admissibility(),
        check_fixed_point_characterization(),
        check_operad_axioms_and_extension(),
        check_span_slice_fixed_counts(),
        check_mackey_functoriality(),
        check_normed_category_coherence(),
        check_nerve_quotient(),
        check_free_object_counting(),
    ]
}

/// Whether every check passed.
pub fn all_passed(outcomes: &[SuiteOutcome]) -> bool {
    outcomes.iter().all(|o| o.passed)
}

/// One subgroup per conjugacy class, in id order.
fn conjugacy_reps(group: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    let mut seen = BTreeSet::new();
    enumerate_subgroups(group)
        .into_iter()
        .filter(|s| seen.insert(s.conjugacy_class_id()))
        .collect()
}

/// Isomorphism-class representatives of all G-sets of size at most the
/// cap, the empty set included.
fn gset_classes(group: &Arc<FiniteGroup>, size_cap: usize) -> Vec<FiniteGSet> {
    let complete = IndexingSystem::complete(group);
    admissible_hset_classes(&complete, &Subgroup::full(group), size_cap)
}

/// Filters subsets of the subgroup containment relation by checking the
/// closure rules directly against subgroup arithmetic, independently of
/// the incremental enumeration.
fn indexing_systems_by_subset_filter(group: &Arc<FiniteGroup>) -> Vec<BTreeSet<(usize, usize)>> {
    let subs = enumerate_subgroups(group);
    let n = subs.len();
    let order = group.order();
    let mut conj = vec![vec![0usize; order]; n];
    for (k, sub) in subs.iter().enumerate() {
        for g in group.elements() {
            conj[k][g] = sub.conjugate(g).id();
        }
    }
    let mut inter = vec![vec![0usize; n]; n];
    for a in 0..n {
        for b in 0..n {
            let common: Vec<usize> = subs[a]
                .elements()
                .iter()
                .copied()
                .filter(|e| subs[b].contains(*e))
                .collect();
            inter[a][b] = Subgroup::from_elements(group, &common)
                .expect("an intersection of subgroups is a subgroup")
                .id();
        }
    }
    let contained: Vec<Vec<bool>> = (0..n)
        .map(|k| (0..n).map(|h| subs[k].is_contained_in(&subs[h])).collect())
        .collect();
    let strict: Vec<(usize, usize)> = (0..n)
        .flat_map(|k| (0..n).map(move |h| (k, h)))
        .filter(|&(k, h)| k != h && contained[k][h])
        .collect();
    assert!(strict.len() <= 20, "subset filter only for small lattices");
    let reflexive: BTreeSet<(usize, usize)> = (0..n).map(|i| (i, i)).collect();

    let closed = |pairs: &BTreeSet<(usize, usize)>| -> bool {
        for &(k, h) in pairs {
            for g in group.elements() {
                if !pairs.contains(&(conj[k][g], conj[h][g])) {
                    return false;
                }
            }
            for m in 0..n {
                if !contained[m][h] {
                    continue;
                }
                for &g in subs[h].elements() {
                    let kg = conj[k][group.inv(g)];
                    if !pairs.contains(&(inter[m][kg], m)) {
                        return false;
                    }
                }
            }
        }
        for &(l, k) in pairs {
            for &(k2, h) in pairs {
                if k2 == k && !pairs.contains(&(l, h)) {
                    return false;
                }
            }
        }
        true
    };

    let mut out = Vec::new();
    for mask in 0u64..(1 << strict.len()) {
        let mut pairs = reflexive.clone();
        for (i, &p) in strict.iter().enumerate() {
            if mask & (1 << i) != 0 {
                pairs.insert(p);
            }
        }
        if closed(&pairs) {
            out.push(pairs);
        }
    }
    out
}

/// Enumerated indexing systems agree with the subset-filter oracle, both
/// in count and in membership, on every group of the small catalog.
pub fn check_indexing_enumeration() -> SuiteOutcome {
    outcome("indexing enumeration oracle", || {
        let groups: Vec<(&str, Arc<FiniteGroup>)> = vec![
            ("C1", trivial_group()),
            ("C2", cyclic(2)),
            ("C3", cyclic(3)),
            ("C4", cyclic(4)),
            ("C6", cyclic(6)),
            ("V4", product(&cyclic(2), &cyclic(2)).group),
            ("S3", symmetric(3)),
        ];
        let mut detail = String::new();
        for (name, g) in groups {
            let fast: BTreeSet<BTreeSet<(usize, usize)>> = enumerate_all(&g)?
                .into_iter()
                .map(|s| s.pairs().clone())
                .collect();
            let slow: BTreeSet<BTreeSet<(usize, usize)>> =
                indexing_systems_by_subset_filter(&g).into_iter().collect();
            if fast != slow {
                return Ok((
                    false,
                    format!("mismatch on {name}: {} enumerated vs {} filtered", fast.len(), slow.len()),
                ));
            }
            let _ = write!(detail, "{name}:{} ", fast.len());
        }
        Ok((true, format!("systems per group: {}", detail.trim_end())))
    })
}

/// Every enumerated indexing system of every cataloged group of order at
/// most eight passes the axiom oracle with H-set size bound five.  One
/// catalog group exceeds the enumeration pair guard (its full poset holds
/// over ten million systems, far past any desk-scale budget); for it the
/// oracle validates every single-generator closure plus a seeded sample
/// of multi-generator closures instead, and the outcome reports that
/// exclusion rather than hiding it.
pub fn check_axiom_validation() -> SuiteOutcome {
    outcome("indexing axiom validation", || {
        let mut total = 0usize;
        let mut guarded: Vec<String> = Vec::new();
        for (name, g) in builtin_groups() {
            let oracle = AxiomOracle::new(&g, 5);
            let systems = match enumerate_all(&g) {
                Ok(list) => list,
                Err(Error::GuardExceeded(found, guard)) => {
                    guarded.push(format!("{name} ({found} pairs over guard {guard})"));
                    sampled_closures(&g, 0xA71F, 250)?
                }
                Err(e) => return Err(e),
            };
            for sys in systems {
                if let Some(msg) = oracle.validate(&sys) {
                    return Ok((
                        false,
                        format!("{name} system {:?}: {msg}", sys.strict_pairs()),
                    ));
                }
                total += 1;
            }
        }
        let note = if guarded.is_empty() {
            String::new()
        } else {
            format!("; guard-limited, closure-sampled: {}", guarded.join(", "))
        };
        Ok((
            true,
            format!(
                "{total} systems validated across {} groups{note}",
                builtin_groups().len()
            ),
        ))
    })
}

/// Deterministic sample of distinct indexing systems on a group whose
/// full poset is too large to enumerate: minimal, complete, every
/// single-generator closure, and seeded random generator sets.
fn sampled_closures(
    g: &Arc<FiniteGroup>,
    seed: u64,
    random_draws: usize,
) -> Result<Vec<IndexingSystem>> {
    let subs = enumerate_subgroups(g);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for k in &subs {
        for h in &subs {
            if k.id() != h.id() && k.is_contained_in(h) {
                pairs.push((k.id(), h.id()));
            }
        }
    }
    let mut out = vec![IndexingSystem::minimal(g), IndexingSystem::complete(g)];
    for &p in &pairs {
        out.push(IndexingSystem::closure(g, &[p])?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random_draws {
        let count = rng.random_range(2..=5);
        let gens: Vec<(usize, usize)> = (0..count)
            .map(|_| pairs[rng.random_range(0..pairs.len())])
            .collect();
        out.push(IndexingSystem::closure(g, &gens)?);
    }
    let mut seen = BTreeSet::new();
    out.retain(|sys| seen.insert(sys.strict_pairs()));
    Ok(out)
}

/// Appends a self-delimiting structural key for the tree: subgroup id,
/// representative, and the full node-set action table at every node, so
/// equal keys mean equal trees within one group.
fn push_tree_key(t: &NormTree, out: &mut Vec<u32>) {
    match t {
        NormTree::Leaf => out.push(u32::MAX),
        NormTree::Node {
            subgroup,
            hset,
            rep,
            children,
        } => {
            out.push(subgroup.id() as u32);
            out.push(*rep as u32);
            out.push(hset.size() as u32);
            for &e in subgroup.elements() {
                for p in hset.points() {
                    out.push(hset.apply(e, p) as u32);
                }
            }
            for c in children {
                push_tree_key(c, out);
            }
        }
    }
}

/// Packs a permutation of degree at most four into one word: the degree
/// in the high bits, one image per nibble below.
fn pack_perm(p: &Perm) -> u32 {
    let mut v = (p.degree() as u32) << 16;
    for (i, &im) in p.images().iter().enumerate() {
        v |= (im as u32) << (4 * i);
    }
    v
}

/// Composes two packed permutations, second applied first.
fn pack_compose(after: u32, first: u32) -> u32 {
    let d = after >> 16;
    let mut v = d << 16;
    for i in 0..d {
        let j = (first >> (4 * i)) & 15;
        v |= ((after >> (4 * j)) & 15) << (4 * i);
    }
    v
}

/// The group action on trees composes and `omega` satisfies the cocycle
/// identity, exactly, over every tree within the node budget and every
/// pair of group elements.  Each tree's translates and omegas are
/// tabulated once against a canonical index, and the two identities are
/// then checked pair by pair on the tables.
pub fn check_action_cocycle() -> SuiteOutcome {
    outcome("norm tree action cocycle", || {
        let mut tree_total = 0usize;
        let mut pair_total = 0usize;
        for g in [cyclic(4), symmetric(3)] {
            let sys = IndexingSystem::complete(&g);
            let trees = enumerate_trees(&sys, 4);
            let order = g.order();

            let mut keys: Vec<(Vec<u32>, u32)> = trees
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let mut key = Vec::new();
                    push_tree_key(t, &mut key);
                    (key, i as u32)
                })
                .collect();
            keys.sort_unstable();

            let mut act_row = vec![0u32; trees.len() * order];
            let mut omega_row = vec![0u32; trees.len() * order];
            let mut buf: Vec<u32> = Vec::new();
            for (i, t) in trees.iter().enumerate() {
                for a in g.elements() {
                    let at = t.act(a);
                    buf.clear();
                    push_tree_key(&at, &mut buf);
                    let Ok(pos) = keys.binary_search_by(|(k, _)| k.as_slice().cmp(&buf)) else {
                        return Ok((false, "an acted tree left the enumeration".into()));
                    };
                    act_row[i * order + a] = keys[pos].1;
                    omega_row[i * order + a] = pack_perm(&t.omega(a));
                }
            }

            for i in 0..trees.len() {
                for a in 0..order {
                    let j = act_row[i * order + a] as usize;
                    for b in 0..order {
                        pair_total += 1;
                        let ba = g.mul(b, a);
                        if act_row[j * order + b] != act_row[i * order + ba] {
                            return Ok((
                                false,
                                format!("action fails to compose at ({b}, {a})"),
                            ));
                        }
                        if pack_compose(omega_row[j * order + b], omega_row[i * order + a])
                            != omega_row[i * order + ba]
                        {
                            return Ok((
                                false,
                                format!("cocycle fails at ({b}, {a})"),
                            ));
                        }
                    }
                }
            }
            tree_total += trees.len();
        }
        Ok((true, format!("{tree_total} trees, {pair_total} element pairs")))
    })
}

/// For every subgroup-fixed tree within the budget, the leaf set with the
/// `omega` action is an admissible H-set of the tree's indexing system.
pub fn check_fixed_tree_admissibility() -> SuiteOutcome {
    outcome("fixed tree admissibility", || {
        let c4 = cyclic(4);
        let s3 = symmetric(3);
        let mut systems: Vec<IndexingSystem> = enumerate_all(&c4)?;
        systems.push(IndexingSystem::complete(&s3));
        let mut checked = 0usize;
        for sys in &systems {
            let group = sys.group();
            let subs = enumerate_subgroups(group);
            for t in enumerate_trees(sys, 4) {
                for h in &subs {
                    if !t.is_fixed_under(h) {
                        continue;
                    }
                    checked += 1;
                    let orbit_set = t.equivariant_orbit_set(h)?;
                    if !sys.is_admissible_hset(&orbit_set) {
                        return Ok((
                            false,
                            format!(
                                "a {}-leaf tree fixed under subgroup {} has an inadmissible leaf set",
                                t.length(),
                                h.id()
                            ),
                        ));
                    }
                }
            }
        }
        Ok((true, format!("{checked} fixed (subgroup, tree) pairs over {} systems", systems.len())))
    })
}

/// Over a strictly intermediate indexing system, graph-subgroup fixed
/// operations exist exactly for the admissible H-sets.
pub fn check_fixed_point_characterization() -> SuiteOutcome {
    outcome("fixed point characterization", || {
        let g = cyclic(4);
        let systems = enumerate_all(&g)?;
        let sys = systems
            .iter()
            .find(|s| s.strict_pairs() == vec![(0, 1), (0, 2)])
            .cloned();
        let Some(sys) = sys else {
            return Ok((false, "expected intermediate system is missing".into()));
        };
        let complete = IndexingSystem::complete(&g);
        let mut nonempty = 0usize;
        let mut empty = 0usize;
        for h in enumerate_subgroups(&g) {
            for t in admissible_hset_classes(&complete, &h, 4) {
                let gamma = graph_subgroup_of(&t);
                let found = has_fixed_operation(&sys, &gamma, 6);
                let admissible = sys.is_admissible_hset(&t);
                if found != admissible {
                    return Ok((
                        false,
                        format!(
                            "subgroup {} set of size {}: admissible = {admissible}, fixed operation found = {found}",
                            h.id(),
                            t.size(),
                        ),
                    ));
                }
                if admissible {
                    nonempty += 1;
                } else {
                    empty += 1;
                }
            }
        }
        Ok((true, format!("{nonempty} admissible with witnesses, {empty} inadmissible all empty")))
    })
}

/// The free operad satisfies the operad laws on bounded samples, and its
/// universal extension into a small endomorphism operad is equivariant
/// and composition-preserving.
pub fn check_operad_axioms_and_extension() -> SuiteOutcome {
    outcome("operad axioms and extension", || {
        let g = cyclic(2);
        let sys = IndexingSystem::complete(&g);
        let summary = verify_operad_identities(&sys, 3, 0xC0C0A, 300)?;

        // the integers mod three with the nontrivial element negating
        // them: addition is a commutative equivariant operation in every
        // arity, so extending the free operad by mod-three sums lands in
        // the fixed part of the endomorphism operad
        let full = Subgroup::full(&g);
        let x = FiniteGSet::new(
            full.clone(),
            3,
            vec![Perm::identity(3), Perm::new(vec![0, 2, 1])?],
        )?;
        let end = EndOperad::new(x);
        let ext = FreeExtension::new(&end, |_, t| {
            end.from_fn(t.size(), |args| args.iter().fold(0, |a, &b| (a + b) % 3))
        });
        let trees = enumerate_trees(&sys, 3);
        for t in &trees {
            let img = ext.eval_tree(t)?;
            for e in g.elements() {
                let lhs = ext.eval_tree(&t.act(e))?;
                let rhs = end.right_act(&end.g_act(e, &img), &t.omega(e).inverse());
                if lhs != rhs {
                    return Ok((false, format!("extension is not equivariant at element {e}")));
                }
            }
        }
        let sym = SymOperad { group: g.clone() };
        let pool: Vec<SymOperation> = trees
            .iter()
            .map(|t| SymOperation::from_tree(t.clone()))
            .collect();
        let mut compositions = 0usize;
        for op in pool.iter().filter(|o| o.arity() >= 1 && o.arity() <= 2) {
            let candidates: Vec<&SymOperation> =
                pool.iter().filter(|y| y.arity() <= 2).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(0xC0C0A + op.arity() as u64);
            for _ in 0..4 {
                let ys: Vec<SymOperation> = (0..op.arity())
                    .map(|_| (*candidates[rng.random_range(0..candidates.len())]).clone())
                    .collect();
                let composed = sym.gamma(op, &ys);
                let lhs = ext.eval(&composed)?;
                let rhs = end.gamma(
                    &ext.eval(op)?,
                    &ys.iter().map(|y| ext.eval(y)).collect::<Result<Vec<_>>>()?,
                );
                if lhs != rhs {
                    return Ok((false, "extension does not preserve composition".into()));
                }
                compositions += 1;
            }
        }
        Ok((
            true,
            format!(
                "{} trees, {} element pairs, {} sampled operad compositions, {compositions} extension compositions",
                summary.trees, summary.element_pairs_checked, summary.composition_samples
            ),
        ))
    })
}

/// Pairs span classes against slice classes through the translation of
/// spans into fixed objects, checking the counts and automorphism orders
/// agree class by class.
fn span_slice_match(
    sys: &IndexingSystem,
    orbit: &FiniteGSet,
    h: &Subgroup,
    a: &FiniteGSet,
    length_bound: usize,
) -> Result<(bool, usize)> {
    let hg = hom_groupoid(sys, orbit, a, length_bound * orbit.size())?;
    let span_classes = hg.iso_classes();
    let slice = slice_category(sys, h, a, length_bound)?;
    let slice_classes = slice.iso_classes();
    if span_classes.len() != slice_classes.len() {
        return Ok((false, span_classes.len()));
    }
    let witnesses: Vec<NormedObject> = slice_classes
        .iter()
        .map(|c| slice_witness(a, h, &slice.objects[c[0]]))
        .collect();
    let mut used = vec![false; witnesses.len()];
    for cls in &span_classes {
        let rep = &hg.spans[cls[0]];
        let image = theta(rep)?.assigned(0).clone();
        let found = witnesses.iter().position(|w| {
            core_hom_set(w, &image)
                .iter()
                .any(|f| f.is_fixed_under(h))
        });
        let Some(j) = found else {
            return Ok((false, span_classes.len()));
        };
        if used[j] || span_aut_order(rep) != slice.aut_order(slice_classes[j][0]) {
            return Ok((false, span_classes.len()));
        }
        used[j] = true;
    }
    Ok((true, span_classes.len()))
}

/// Spans into an orbit, admissible slices over the restriction, and fixed
/// objects of the free normed category present the same classes with the
/// same automorphism orders, across groups, orbits, label sets, and two
/// indexing systems.
pub fn check_span_slice_fixed_counts() -> SuiteOutcome {
    outcome("span slice fixed counting", || {
        // per-group cap on the label length at which the fixed side is
        // materialized; the span and slice sides also run uncapped
        let cases: Vec<(Arc<FiniteGroup>, usize, bool)> = vec![
            (cyclic(2), 4, false),
            (cyclic(4), 3, true),
            (symmetric(3), 2, false),
        ];
        let mut cells = 0usize;
        let mut classes = 0usize;
        for (g, cap, with_intermediate) in cases {
            let mut systems = vec![IndexingSystem::complete(&g)];
            if with_intermediate {
                let intermediate = enumerate_all(&g)?
                    .into_iter()
                    .find(|s| s.strict_pairs() == vec![(0, 1), (0, 2)]);
                match intermediate {
                    Some(sys) => systems.push(sys),
                    None => return Ok((false, "expected intermediate system is missing".into())),
                }
            }
            let full = Subgroup::full(&g);
            for sys in &systems {
                for h in conjugacy_reps(&g) {
                    let orbit = FiniteGSet::coset_space(&full, &h)?;
                    let uncapped = 4 / orbit.size();
                    let bound = uncapped.min(cap);
                    for a in gset_classes(&g, 4) {
                        cells += 1;
                        let spans_fixed =
                            theta_fixed_comparison(sys, &orbit, &a, bound * orbit.size())?;
                        if !spans_fixed.holds() {
                            return Ok((
                                false,
                                format!(
                                    "span/fixed mismatch: group order {}, subgroup {}, labels {}: {spans_fixed:?}",
                                    g.order(),
                                    h.id(),
                                    a.size()
                                ),
                            ));
                        }
                        let fixed_slice = fixed_slice_comparison(sys, &a, &h, bound)?;
                        if !fixed_slice.holds()
                            || fixed_slice.fixed_class_count != spans_fixed.fixed_class_count
                        {
                            return Ok((
                                false,
                                format!(
                                    "fixed/slice mismatch: group order {}, subgroup {}, labels {}: {fixed_slice:?}",
                                    g.order(),
                                    h.id(),
                                    a.size()
                                ),
                            ));
                        }
                        let (ok, n) = span_slice_match(sys, &orbit, &h, &a, uncapped)?;
                        if !ok {
                            return Ok((
                                false,
                                format!(
                                    "span/slice mismatch: group order {}, subgroup {}, labels {}",
                                    g.order(),
                                    h.id(),
                                    a.size()
                                ),
                            ));
                        }
                        classes += n;
                    }
                }
            }
        }
        Ok((true, format!("{cells} cells compared, {classes} span classes paired")))
    })
}

/// The integers modulo `m`, acted on trivially by the full group.
fn trivial_integers(group: &Arc<FiniteGroup>, m: usize) -> Result<CommutativeGMonoid> {
    CommutativeGMonoid::integers_mod(&Subgroup::full(group), m)
}

/// The integers modulo three, negated by the order-two elements: a monoid
/// action that is nontrivial yet by monoid automorphisms.
fn sign_integers(group: &Arc<FiniteGroup>) -> Result<CommutativeGMonoid> {
    let full = Subgroup::full(group);
    let carrier = FiniteGSet::new(
        full.clone(),
        3,
        group
            .elements()
            .map(|g| {
                if group.element_order(g) == 2 {
                    Perm::new(vec![0, 2, 1])
                } else {
                    Ok(Perm::identity(3))
                }
            })
            .collect::<Result<Vec<Perm>>>()?,
    )?;
    CommutativeGMonoid::new(carrier, (0..9).map(|i| (i / 3 + i % 3) % 3).collect(), 0)
}

/// Span evaluation into commutative monoids is functorial under span
/// composition on seeded random composable pairs, and transfer spans act
/// on constant functions as index-many-fold sums.
pub fn check_mackey_functoriality() -> SuiteOutcome {
    outcome("mackey functoriality", || {
        let c4 = cyclic(4);
        let s3 = symmetric(3);
        let mut pairs = 0usize;

        struct Chain {
            sys: IndexingSystem,
            monoid: CommutativeGMonoid,
            a: FiniteGSet,
            b: FiniteGSet,
            c: FiniteGSet,
        }
        let orbit = |g: &Arc<FiniteGroup>, size: usize| -> Result<FiniteGSet> {
            let sub = enumerate_subgroups(g)
                .into_iter()
                .find(|s| s.size() == size)
                .expect("catalog groups have subgroups of every divisor order");
            FiniteGSet::coset_space(&Subgroup::full(g), &sub)
        };

        let sys4 = IndexingSystem::complete(&c4);
        let sys3 = IndexingSystem::complete(&s3);
        let chains = vec![
            Chain {
                sys: sys4.clone(),
                monoid: trivial_integers(&c4, 4)?,
                a: orbit(&c4, 1)?,
                b: orbit(&c4, 2)?,
                c: orbit(&c4, 4)?,
            },
            Chain {
                sys: sys4.clone(),
                monoid: trivial_integers(&c4, 5)?,
                a: orbit(&c4, 2)?.disjoint_union(&orbit(&c4, 4)?)?,
                b: orbit(&c4, 2)?,
                c: orbit(&c4, 1)?.disjoint_union(&orbit(&c4, 4)?)?,
            },
            Chain {
                sys: sys3.clone(),
                monoid: sign_integers(&s3)?,
                a: orbit(&s3, 2)?,
                b: orbit(&s3, 3)?,
                c: orbit(&s3, 6)?,
            },
            Chain {
                sys: sys3.clone(),
                monoid: trivial_integers(&s3, 4)?,
                a: orbit(&s3, 3)?.disjoint_union(&orbit(&s3, 6)?)?,
                b: orbit(&s3, 3)?,
                c: orbit(&s3, 2)?,
            },
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
        for chain in &chains {
            let first = hom_groupoid(&chain.sys, &chain.b, &chain.a, 6)?;
            let second = hom_groupoid(&chain.sys, &chain.c, &chain.b, 6)?;
            let phis = monoid_valued_functions(&chain.monoid, &chain.a);
            if first.is_empty() || second.is_empty() || phis.is_empty() {
                return Ok((false, "a sampling pool is unexpectedly empty".into()));
            }
            for _ in 0..300 {
                let s = &first.spans[rng.random_range(0..first.len())];
                let t = &second.spans[rng.random_range(0..second.len())];
                let phi = &phis[rng.random_range(0..phis.len())];
                let st = compose_spans(&chain.sys, s, t)?;
                let direct = mackey_eval(&chain.monoid, &st, phi)?;
                let staged = mackey_eval(&chain.monoid, t, &mackey_eval(&chain.monoid, s, phi)?)?;
                if direct != staged {
                    return Ok((false, "staged evaluation differs from direct evaluation".into()));
                }
                pairs += 1;
            }
        }

        // transfers on constants multiply by the subgroup index
        let mut transfers = 0usize;
        for (g, modulus) in [(c4.clone(), 7usize), (s3.clone(), 5usize)] {
            let sys = IndexingSystem::complete(&g);
            let m = trivial_integers(&g, modulus)?;
            let subs = enumerate_subgroups(&g);
            for k in &subs {
                for h in &subs {
                    if k.id() == h.id() || !k.is_contained_in(h) {
                        continue;
                    }
                    let span = transfer_span(&sys, k, h)?;
                    let index = h.size() / k.size();
                    for value in 0..modulus {
                        let phi = vec![value; span.source().size()];
                        let out = mackey_eval(&m, &span, &phi)?;
                        let expected = vec![(index * value) % modulus; span.target().size()];
                        if out != expected {
                            return Ok((
                                false,
                                format!(
                                    "transfer from subgroup {} to {} on constant {value} gave {out:?}",
                                    k.id(),
                                    h.id()
                                ),
                            ));
                        }
                        transfers += 1;
                    }
                }
            }
        }
        Ok((true, format!("{pairs} composable pairs, {transfers} transfer constants")))
    })
}

/// The relabeling functors are strict and equivariant, projection
/// adjunctions satisfy the triangle identities, restriction mates of
/// norms are invertible with the predicted value, and the two-summand
/// decomposition is an equivalence with natural unit and counit.
pub fn check_normed_category_coherence() -> SuiteOutcome {
    outcome("normed category coherence", || {
        let g = cyclic(4);
        let sys = IndexingSystem::complete(&g);
        let full = Subgroup::full(&g);
        let subs = enumerate_subgroups(&g);
        let h2 = subs
            .iter()
            .find(|s| s.size() == 2)
            .expect("the cyclic group of order four has an order-two subgroup")
            .clone();

        // relabeling along a projection: strict, equivariant, functorial
        let t = FiniteGSet::coset_space(&h2, &Subgroup::trivial(&g))?;
        let adj = projection_adjunction(&sys, &h2, &t)?;
        let phi = &adj.right;
        let objects = enumerate_objects(&sys, &adj.base, 3);
        let ident = EquivariantFunctorData::identity_data(&adj.base)?;
        let composite = phi.then(&adj.left)?;
        for x in &objects {
            if ident.apply_object(x) != *x {
                return Ok((false, "identity data moves an object".into()));
            }
            if composite.apply_object(x) != adj.left.apply_object(&phi.apply_object(x)) {
                return Ok((false, "composing functor data fails on an object".into()));
            }
            for e in g.elements() {
                if phi.apply_object(&x.act(e)) != phi.apply_object(x).act(e) {
                    return Ok((false, format!("relabeling is not equivariant at element {e}")));
                }
            }
        }
        for x in &objects {
            for y in &objects {
                if phi.apply_object(&tensor(x, y))
                    != tensor(&phi.apply_object(x), &phi.apply_object(y))
                {
                    return Ok((false, "relabeling is not strict monoidal".into()));
                }
            }
        }
        let fixed: Vec<&NormedObject> =
            objects.iter().filter(|x| x.is_fixed_under(&h2)).collect();
        let mut norms = 0usize;
        for x in &fixed {
            for y in &fixed {
                let normed = external_norm(&sys, &t, &adj.base, &[(*x).clone(), (*y).clone()])?;
                let expected = external_norm(
                    &sys,
                    &t,
                    &adj.induced,
                    &[phi.apply_object(x), phi.apply_object(y)],
                )?;
                if phi.apply_object(&normed) != expected {
                    return Ok((false, "relabeling is not strict on norms".into()));
                }
                norms += 1;
            }
        }
        let grid: Vec<&NormedObject> = objects.iter().filter(|x| x.length() <= 2).collect();
        let mut morphisms = 0usize;
        for x in &grid {
            let id_m = NormedMorphism::identity(x);
            if phi.apply_morphism(&id_m) != NormedMorphism::identity(&phi.apply_object(x)) {
                return Ok((false, "relabeling moves an identity morphism".into()));
            }
            for y in &grid {
                for m in hom_set(x, y) {
                    morphisms += 1;
                    for e in g.elements() {
                        if phi.apply_morphism(&m.act(e)) != phi.apply_morphism(&m).act(e) {
                            return Ok((false, "relabeling is not equivariant on morphisms".into()));
                        }
                    }
                    if composite.apply_morphism(&m)
                        != adj.left.apply_morphism(&phi.apply_morphism(&m))
                    {
                        return Ok((false, "composing functor data fails on a morphism".into()));
                    }
                    for z in &grid {
                        for m2 in hom_set(y, z) {
                            let lhs = phi.apply_morphism(&m2.compose(&m)?);
                            let rhs = phi.apply_morphism(&m2).compose(&phi.apply_morphism(&m))?;
                            if lhs != rhs {
                                return Ok((false, "relabeling is not functorial".into()));
                            }
                        }
                    }
                }
            }
        }

        // triangle identities for every projection adjunction in range
        let mut adjunctions = 0usize;
        for h in conjugacy_reps(&g) {
            for t in admissible_hset_classes(&sys, &h, 3) {
                if t.size() == 0 {
                    continue;
                }
                let adj = projection_adjunction(&sys, &h, &t)?;
                if !adj.triangle_identities_hold(&sys, 3) {
                    return Ok((
                        false,
                        format!(
                            "triangle identities fail for subgroup {} and a {}-point norm",
                            h.id(),
                            t.size()
                        ),
                    ));
                }
                adjunctions += 1;
            }
        }

        // restriction mates of norms are invertible identities
        let mut mates = 0usize;
        for h in conjugacy_reps(&g) {
            for k in conjugacy_reps(&g) {
                if !k.is_contained_in(&h) {
                    continue;
                }
                for t in admissible_hset_classes(&sys, &h, 3) {
                    if t.size() == 0 {
                        continue;
                    }
                    let report = beck_chevalley_mate(&sys, &k, &h, &t, 3)?;
                    if !report.holds() {
                        return Ok((
                            false,
                            format!(
                                "mate fails for subgroups {} <= {} and a {}-point norm: {report:?}",
                                k.id(),
                                h.id(),
                                t.size()
                            ),
                        ));
                    }
                    mates += 1;
                }
            }
        }

        // the two-summand decomposition is an equivalence
        let a = FiniteGSet::coset_space(&full, &h2)?;
        let b = FiniteGSet::trivial_set(full.clone(), 1);
        let se = sum_equivalence(&a, &b)?;
        let sum_objects = enumerate_objects(&sys, &se.sum, 3);
        for x in &sum_objects {
            if !se.eta(x).is_bijective() {
                return Ok((false, "a sum unit component is not invertible".into()));
            }
        }
        let a_objects = enumerate_objects(&sys, &a, 3);
        let b_objects = enumerate_objects(&sys, &b, 3);
        for x in &a_objects {
            for y in &b_objects {
                let (ea, eb) = se.epsilon(x, y)?;
                if !ea.is_bijective() || !eb.is_bijective() {
                    return Ok((false, "a sum counit component is not invertible".into()));
                }
            }
        }
        let sum_grid: Vec<&NormedObject> =
            sum_objects.iter().filter(|x| x.length() <= 2).collect();
        let mut squares = 0usize;
        for x in &sum_grid {
            for y in &sum_grid {
                for m in hom_set(x, y) {
                    let fa = se.psi_left.apply_morphism(&m);
                    let fb = se.psi_right.apply_morphism(&m);
                    let lhs = se.eta(y).compose(&se.phi_morphism(&fa, &fb))?;
                    let rhs = m.compose(&se.eta(x))?;
                    if lhs != rhs {
                        return Ok((false, "the sum unit is not natural".into()));
                    }
                    squares += 1;
                }
            }
        }
        let a_grid: Vec<&NormedObject> = a_objects.iter().filter(|x| x.length() <= 2).collect();
        let b_grid: Vec<&NormedObject> = b_objects.iter().filter(|x| x.length() <= 2).collect();
        let counits: Vec<Vec<(NormedMorphism, NormedMorphism)>> = a_grid
            .iter()
            .map(|x| b_grid.iter().map(|y| se.epsilon(x, y)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        for (i, x) in a_grid.iter().enumerate() {
            for (i2, x2) in a_grid.iter().enumerate() {
                for f in hom_set(x, x2) {
                    for (j, y) in b_grid.iter().enumerate() {
                        for (j2, y2) in b_grid.iter().enumerate() {
                            for gm in hom_set(y, y2) {
                                let (ea, eb) = &counits[i][j];
                                let (ea2, eb2) = &counits[i2][j2];
                                let big = se.phi_morphism(&f, &gm);
                                let lhs_a = ea2.compose(&se.psi_left.apply_morphism(&big))?;
                                if lhs_a != f.compose(ea)? {
                                    return Ok((false, "the sum counit is not natural on the left".into()));
                                }
                                let lhs_b = eb2.compose(&se.psi_right.apply_morphism(&big))?;
                                if lhs_b != gm.compose(eb)? {
                                    return Ok((false, "the sum counit is not natural on the right".into()));
                                }
                                squares += 1;
                            }
                        }
                    }
                }
            }
        }
        Ok((
            true,
            format!(
                "{} objects, {morphisms} morphisms, {norms} norms, {adjunctions} adjunctions, {mates} mates, {squares} naturality squares",
                objects.len()
            ),
        ))
    })
}

/// For a product group whose right factor acts freely on the first set,
/// quotient tuples agree with chains of morphism classes level by level.
pub fn check_nerve_quotient() -> SuiteOutcome {
    outcome("nerve quotient comparison", || {
        let factor_pairs: Vec<ProductGroup> = vec![
            product(&cyclic(2), &cyclic(2)),
            product(&cyclic(2), &cyclic(3)),
            product(&cyclic(3), &cyclic(2)),
            product(&trivial_group(), &cyclic(6)),
            product(&cyclic(2), &symmetric(3)),
        ];
        let mut instances = 0usize;
        for pg in &factor_pairs {
            let gamma_elems: Vec<usize> = (0..pg.right_order).map(|b| pg.embed_right(b)).collect();
            let gamma = Subgroup::from_elements(&pg.group, &gamma_elems)?;
            let all_sets = gset_classes(&pg.group, 6);
            let xs: Vec<&FiniteGSet> = all_sets
                .iter()
                .filter(|x| x.size() > 0 && x.is_free_under(&gamma))
                .collect();
            let ys: Vec<&FiniteGSet> = all_sets.iter().filter(|y| y.size() > 0).collect();
            if xs.is_empty() {
                return Ok((false, "no free sets were generated".into()));
            }
            for x in &xs {
                for y in &ys {
                    for n in 0..=3 {
                        let res = nerve_quotient_check(pg, x, y, n)?;
                        if !res.holds() {
                            return Ok((
                                false,
                                format!(
                                    "level {n} over the order-{} product: {res:?}",
                                    pg.group.order()
                                ),
                            ));
                        }
                        instances += 1;
                    }
                }
            }
        }
        Ok((true, format!("{instances} instances across {} product groups", factor_pairs.len())))
    })
}

/// Objects of the free normed category are counted by trees times label
/// words: the length-n object count is the length-n tree count times
/// `|A|^n`.
pub fn check_free_object_counting() -> SuiteOutcome {
    outcome("free object counting", || {
        let g = cyclic(2);
        let sys = IndexingSystem::complete(&g);
        let trees = enumerate_trees(&sys, 4);
        let mut cells = 0usize;
        for a in gset_classes(&g, 3) {
            let objects = enumerate_objects(&sys, &a, 4);
            for n in 0..=3usize {
                let tree_count = trees.iter().filter(|t| t.length() == n).count();
                let object_count = objects.iter().filter(|x| x.length() == n).count();
                let expected = tree_count * a.size().pow(n as u32);
                if object_count != expected {
                    return Ok((
                        false,
                        format!(
                            "labels {}, length {n}: {object_count} objects vs {tree_count} trees * |A|^n = {expected}",
                            a.size()
                        ),
                    ));
                }
                cells += 1;
            }
        }
        Ok((true, format!("{cells} (labels, length) cells checked")))
    })
}
