//! The free operad of formal external norms over a finite group.
//!
//! Operations of arity `n` are pairs (tree, permutation).  A tree is
//! either a leaf (the 1-ary identity slot) or a node `r (x)_T (children)`:
//! a subgroup `H`, an admissible finite `H`-set `T` with a chosen point
//! ordering, a canonical left-coset representative `r` of `H`, and one
//! child tree per point of `T`.  The group acts by translating the
//! representative and recursively twisting children along the `H`-action
//! on `T`; `omega` records the induced permutation of leaves, a cocycle.
//!
//! The symmetric group acts on the right through the permutation
//! component, and composition grafts trees after the permutation reorders
//! the inputs, with the block calculus of [`Perm`] tracking leaf positions.
//! None of the operad identities are taken on faith: `verify_operad_identities`
//! checks unit laws, associativity, the group action, the cocycle law and
//! both equivariance laws by enumeration and seeded sampling.

use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{enumerate_subgroups, FiniteGroup, Subgroup};
use crate::gset::{conjugacy_class_id_in, FiniteGSet};
use crate::indexing::IndexingSystem;
use crate::perm::Perm;

#[derive(Clone, PartialEq, Eq)]
pub enum NormTree {
    Leaf,
    Node {
        subgroup: Subgroup,
        hset: FiniteGSet,
        rep: usize,
        children: Vec<NormTree>,
    },
}

impl std::fmt::Debug for NormTree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormTree::Leaf => write!(f, "*"),
            NormTree::Node {
                subgroup,
                rep,
                children,
                ..
            } => {
                write!(f, "{}(x)_H{}{:?}", rep, subgroup.id(), children)
            }
        }
    }
}

impl NormTree {
    /// Number of leaves, i.e. the arity of the operation the tree defines.
    pub fn length(&self) -> usize {
        match self {
            NormTree::Leaf => 1,
            NormTree::Node { children, .. } => children.iter().map(NormTree::length).sum(),
        }
    }

    /// Total number of leaves and nodes; bounds enumeration, since a node
    /// may have arity zero while adding structure.
    pub fn node_count(&self) -> usize {
        match self {
            NormTree::Leaf => 1,
            NormTree::Node { children, .. } => {
                1 + children.iter().map(NormTree::node_count).sum::<usize>()
            }
        }
    }

    /// Structural validity against an indexing system: each node's set is
    /// acted on by the node's subgroup and is admissible, the
    /// representative is canonical, and child counts match.
    pub fn validate(&self, sys: &IndexingSystem) -> Result<()> {
        match self {
            NormTree::Leaf => Ok(()),
            NormTree::Node {
                subgroup,
                hset,
                rep,
                children,
            } => {
                if hset.acting() != subgroup {
                    return Err(Error::BadTree(
                        "node set must be acted on by the node subgroup".into(),
                    ));
                }
                if let Some(stab) = sys.admissibility_failure(hset) {
                    return Err(Error::InadmissibleHSet {
                        stab,
                        sub: subgroup.id(),
                    });
                }
                let dec = subgroup.coset_reps();
                if !dec.reps().contains(rep) {
                    return Err(Error::BadTree(format!(
                        "representative {rep} is not canonical for subgroup {}",
                        subgroup.id()
                    )));
                }
                if children.len() != hset.size() {
                    return Err(Error::BadTree(format!(
                        "node needs {} children, has {}",
                        hset.size(),
                        children.len()
                    )));
                }
                children.iter().try_for_each(|c| c.validate(sys))
            }
        }
    }

    /// The left action: `g * (r (x)_T children)` translates the coset of
    /// `r`, writes `g r = r' h` with `h` in the node subgroup, permutes
    /// the child slots along the action of `h` on `T`, and acts by `g`
    /// itself inside each child, exactly as forced by distributing `g`
    /// over the composite of the translated generator with its children.
    pub fn act(&self, g: usize) -> NormTree {
        match self {
            NormTree::Leaf => NormTree::Leaf,
            NormTree::Node {
                subgroup,
                hset,
                rep,
                children,
            } => {
                let grp = subgroup.group();
                let dec = subgroup.coset_reps();
                let (j, h) = dec.factor(grp.mul(g, *rep)).unwrap();
                let sigma_inv = hset.act_of(h).inverse();
                let moved: Vec<NormTree> = (0..children.len())
                    .map(|i| children[sigma_inv.apply(i)].act(g))
                    .collect();
                NormTree::Node {
                    subgroup: subgroup.clone(),
                    hset: hset.clone(),
                    rep: dec.reps()[j],
                    children: moved,
                }
            }
        }
    }

    /// Permutation of the leaves induced by `g`: the unique `omega` with
    /// `g * (theta . inputs) = (g theta) . (omega-permuted inputs)`, a
    /// cocycle in `g`.
    pub fn omega(&self, g: usize) -> Perm {
        match self {
            NormTree::Leaf => Perm::identity(1),
            NormTree::Node {
                subgroup,
                hset,
                rep,
                children,
            } => {
                let grp = subgroup.group();
                let dec = subgroup.coset_reps();
                let (_, h) = dec.factor(grp.mul(g, *rep)).unwrap();
                let inner: Vec<Perm> = children.iter().map(|c| c.omega(g)).collect();
                Perm::block_wreath(hset.act_of(h), &inner)
            }
        }
    }

    pub fn is_fixed_under(&self, h: &Subgroup) -> bool {
        h.elements().iter().all(|&e| &self.act(e) == self)
    }

    /// Grafts `inputs[i]` onto leaf `i`, left to right.
    pub fn compose_trees(&self, inputs: &[NormTree]) -> Result<NormTree> {
        if inputs.len() != self.length() {
            return Err(Error::ArityMismatch {
                expected: self.length(),
                got: inputs.len(),
            });
        }
        Ok(self.graft(inputs))
    }

    fn graft(&self, inputs: &[NormTree]) -> NormTree {
        match self {
            NormTree::Leaf => inputs[0].clone(),
            NormTree::Node {
                subgroup,
                hset,
                rep,
                children,
            } => {
                let mut grafted = Vec::with_capacity(children.len());
                let mut offset = 0;
                for c in children {
                    let len = c.length();
                    grafted.push(c.graft(&inputs[offset..offset + len]));
                    offset += len;
                }
                NormTree::Node {
                    subgroup: subgroup.clone(),
                    hset: hset.clone(),
                    rep: *rep,
                    children: grafted,
                }
            }
        }
    }

    /// The leaf set as an `h`-set, with `h` acting through `omega`; only
    /// defined for trees fixed under `h`.  Construction re-validates that
    /// `omega` restricts to a homomorphism on `h`.
    pub fn equivariant_orbit_set(&self, h: &Subgroup) -> Result<FiniteGSet> {
        if !self.is_fixed_under(h) {
            return Err(Error::BadTree(
                "orbit set needs a tree fixed under the subgroup".into(),
            ));
        }
        let act: Vec<Perm> = h.elements().iter().map(|&e| self.omega(e)).collect();
        FiniteGSet::new(h.clone(), self.length(), act)
    }
}

/// An operation of the free operad: a tree together with a permutation of
/// its inputs, acting before the tree reads them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymOperation {
    pub tree: NormTree,
    pub perm: Perm,
}

impl SymOperation {
    pub fn new(tree: NormTree, perm: Perm) -> Result<Self> {
        if perm.degree() != tree.length() {
            return Err(Error::ArityMismatch {
                expected: tree.length(),
                got: perm.degree(),
            });
        }
        Ok(SymOperation { tree, perm })
    }

    pub fn from_tree(tree: NormTree) -> Self {
        let n = tree.length();
        SymOperation {
            tree,
            perm: Perm::identity(n),
        }
    }

    pub fn unit() -> Self {
        SymOperation::from_tree(NormTree::Leaf)
    }

    pub fn arity(&self) -> usize {
        self.perm.degree()
    }

    pub fn g_act(&self, g: usize) -> SymOperation {
        SymOperation {
            tree: self.tree.act(g),
            perm: self.tree.omega(g).compose(&self.perm),
        }
    }

    pub fn right_act(&self, sigma: &Perm) -> SymOperation {
        SymOperation {
            tree: self.tree.clone(),
            perm: self.perm.compose(sigma),
        }
    }
}

/// `gamma(x; y_1, ..., y_n)`: the permutation of `x` reorders which `y`
/// lands in which slot of the tree, and the output permutation is the
/// block action of `x.perm` on the input blocks composed with the inner
/// permutations.
pub fn compose_sym(x: &SymOperation, ys: &[SymOperation]) -> Result<SymOperation> {
    let n = x.arity();
    if ys.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: ys.len(),
        });
    }
    let dinv = x.perm.inverse();
    let reordered: Vec<NormTree> = (0..n).map(|i| ys[dinv.apply(i)].tree.clone()).collect();
    let tree = x.tree.compose_trees(&reordered)?;
    let inner: Vec<Perm> = ys.iter().map(|y| y.perm.clone()).collect();
    let perm = Perm::block_wreath(&x.perm, &inner);
    SymOperation::new(tree, perm)
}

/// The generating operation for an admissible `H`-set: the identity
/// representative over leaves, with the identity permutation.
pub fn generator_sym(h: &Subgroup, t: &FiniteGSet) -> SymOperation {
    assert_eq!(t.acting(), h);
    SymOperation::from_tree(NormTree::Node {
        subgroup: h.clone(),
        hset: t.clone(),
        rep: h.group().id(),
        children: vec![NormTree::Leaf; t.size()],
    })
}

/// The graph subgroup of an `H`-set `T` inside `H x Sym(|T|)`: pairs
/// `(h, sigma(h))` with `sigma` the action homomorphism.
#[derive(Clone, Debug)]
pub struct GraphSubgroup {
    pub subgroup: Subgroup,
    pub sigma: Vec<Perm>,
}

pub fn graph_subgroup_of(t: &FiniteGSet) -> GraphSubgroup {
    GraphSubgroup {
        subgroup: t.acting().clone(),
        sigma: t
            .acting()
            .elements()
            .iter()
            .map(|&e| t.act_of(e).clone())
            .collect(),
    }
}

impl GraphSubgroup {
    /// The degree of the permutations, i.e. the arity the subgroup graphs
    /// into.
    pub fn degree(&self) -> usize {
        self.sigma[0].degree()
    }

    pub fn sigma_of(&self, elt: usize) -> &Perm {
        let pos = self
            .subgroup
            .position_of(elt)
            .expect("element must lie in the graph subgroup's base");
        &self.sigma[pos]
    }

    /// Whether an operation is fixed by every `(h, sigma(h))`: the tree is
    /// `h`-fixed and the permutation intertwines `sigma` with `omega`.
    pub fn is_fixed(&self, op: &SymOperation) -> bool {
        self.subgroup.elements().iter().all(|&h| {
            op.tree.act(h) == op.tree
                && op.tree.omega(h).compose(&op.perm) == op.perm.compose(self.sigma_of(h))
        })
    }
}

/// Isomorphism-class representatives of admissible `H`-sets of size at
/// most `size_cap`: disjoint unions of coset spaces `H/S` over admissible
/// pairs, one `S` per conjugacy class in `H`.
pub fn admissible_hset_classes(
    sys: &IndexingSystem,
    h: &Subgroup,
    size_cap: usize,
) -> Vec<FiniteGSet> {
    let mut piece_types: Vec<Subgroup> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for s in enumerate_subgroups(h.group()) {
        if !s.is_contained_in(h) || h.size() / s.size() > size_cap {
            continue;
        }
        if !sys.contains(s.id(), h.id()) {
            continue;
        }
        if seen.insert(conjugacy_class_id_in(&s, h)) {
            piece_types.push(s);
        }
    }
    let mut out = Vec::new();
    let mut stack: Vec<(usize, usize, FiniteGSet)> =
        vec![(0, size_cap, FiniteGSet::empty(h.clone()))];
    while let Some((from, remaining, set)) = stack.pop() {
        out.push(set.clone());
        for i in from..piece_types.len() {
            let size = h.size() / piece_types[i].size();
            if size <= remaining {
                let bigger = set
                    .disjoint_union(&FiniteGSet::coset_space(h, &piece_types[i]).unwrap())
                    .unwrap();
                stack.push((i, remaining - size, bigger));
            }
        }
    }
    out
}

/// All trees with at most `node_budget` nodes over the indexing system,
/// with node sets drawn from the canonical admissible class
/// representatives.
pub fn enumerate_trees(sys: &IndexingSystem, node_budget: usize) -> Vec<NormTree> {
    let subs = enumerate_subgroups(sys.group());
    trees_up_to(sys, &subs, node_budget)
        .into_iter()
        .map(|(t, _)| t)
        .collect()
}

// (tree, node_count), every tree with count <= budget
fn trees_up_to(sys: &IndexingSystem, subs: &[Subgroup], budget: usize) -> Vec<(NormTree, usize)> {
    if budget == 0 {
        return Vec::new();
    }
    let mut out = vec![(NormTree::Leaf, 1)];
    let inner = if budget >= 2 {
        trees_up_to(sys, subs, budget - 1)
    } else {
        Vec::new()
    };
    for h in subs {
        let dec = h.coset_reps();
        for t in admissible_hset_classes(sys, h, budget.saturating_sub(1)) {
            let lists = child_lists(&inner, t.size(), budget - 1);
            for (children, count) in lists {
                for &r in dec.reps() {
                    out.push((
                        NormTree::Node {
                            subgroup: h.clone(),
                            hset: t.clone(),
                            rep: r,
                            children: children.clone(),
                        },
                        1 + count,
                    ));
                }
            }
        }
    }
    out
}

fn child_lists(pool: &[(NormTree, usize)], k: usize, budget: usize) -> Vec<(Vec<NormTree>, usize)> {
    if k == 0 {
        return vec![(Vec::new(), 0)];
    }
    let mut out = Vec::new();
    // each child needs at least one node
    for (t, c) in pool {
        if *c + (k - 1) > budget {
            continue;
        }
        for (mut rest, rc) in child_lists(pool, k - 1, budget - c) {
            rest.insert(0, t.clone());
            out.push((rest, c + rc));
        }
    }
    out
}

/// Coset representatives `r` of `G/K` whose coset is stable under left
/// translation by every element of `h`.  A tree fixed under `h` must have
/// such a representative at its root, because acting rewrites the root
/// representative to the canonical one of the translated coset.
fn stable_reps(h: &Subgroup, k: &Subgroup) -> Vec<usize> {
    let grp = k.group();
    let dec = k.coset_reps();
    dec.reps()
        .iter()
        .copied()
        .filter(|&r| {
            h.elements().iter().all(|&e| {
                let (j, _) = dec.factor(grp.mul(e, r)).unwrap();
                dec.reps()[j] == r
            })
        })
        .collect()
}

/// Visits every `h`-fixed tree with exactly `node_count` nodes, stopping
/// early when the callback returns true; reports whether it stopped.
/// Root candidates are pruned to stable representatives before the full
/// fixedness check, so non-fixed trees are mostly never built.
fn visit_fixed_exact(
    sys: &IndexingSystem,
    subs: &[Subgroup],
    h: &Subgroup,
    node_count: usize,
    f: &mut impl FnMut(NormTree) -> bool,
) -> bool {
    if node_count == 0 {
        return false;
    }
    if node_count == 1 && f(NormTree::Leaf) {
        return true;
    }
    let pool = trees_up_to(sys, subs, node_count - 1);
    // bucket by node count so tuple recursion touches only feasible sizes
    let mut by_count: Vec<Vec<usize>> = vec![Vec::new(); node_count];
    for (i, (_, c)) in pool.iter().enumerate() {
        by_count[*c].push(i);
    }
    for k in subs {
        let reps = stable_reps(h, k);
        if reps.is_empty() {
            continue;
        }
        for t in admissible_hset_classes(sys, k, node_count - 1) {
            let mut emit = |idxs: &[usize]| {
                for &r in &reps {
                    let tree = NormTree::Node {
                        subgroup: k.clone(),
                        hset: t.clone(),
                        rep: r,
                        children: idxs.iter().map(|&i| pool[i].0.clone()).collect(),
                    };
                    if tree.is_fixed_under(h) && f(tree) {
                        return true;
                    }
                }
                false
            };
            if visit_tuples(&by_count, t.size(), node_count - 1, &mut Vec::new(), &mut emit) {
                return true;
            }
        }
    }
    false
}

/// Ordered tuples of pool indices whose node counts sum to exactly the
/// budget, one callback per tuple; early exit as in `visit_fixed_exact`.
fn visit_tuples(
    by_count: &[Vec<usize>],
    k: usize,
    budget: usize,
    chosen: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if k == 0 {
        return budget == 0 && f(chosen);
    }
    // the remaining children need at least one node each
    for c in 1..=budget.saturating_sub(k - 1) {
        let Some(bucket) = by_count.get(c) else {
            break;
        };
        for &i in bucket {
            chosen.push(i);
            let stopped = visit_tuples(by_count, k - 1, budget - c, chosen, f);
            chosen.pop();
            if stopped {
                return true;
            }
        }
    }
    false
}

/// All operations of the graph subgroup's degree fixed by it, over trees
/// of at most `node_budget` nodes: the subgroup-fixed trees paired with
/// every permutation intertwining `sigma` with `omega`.
pub fn fixed_operations(
    sys: &IndexingSystem,
    gamma: &GraphSubgroup,
    node_budget: usize,
) -> Vec<SymOperation> {
    let subs = enumerate_subgroups(sys.group());
    let n = gamma.degree();
    let mut out = Vec::new();
    for b in 1..=node_budget {
        visit_fixed_exact(sys, &subs, &gamma.subgroup, b, &mut |tree| {
            if tree.length() == n {
                for perm in Perm::all(n) {
                    let op = SymOperation::new(tree.clone(), perm).unwrap();
                    if gamma.is_fixed(&op) {
                        out.push(op);
                    }
                }
            }
            false
        });
    }
    out
}

/// Whether any operation fixed by the graph subgroup exists within the
/// node budget: the emptiness answer of `fixed_operations`, but computed
/// by a streamed search with early exit, so it stays cheap at budgets
/// where the full list would not fit in memory.
pub fn has_fixed_operation(
    sys: &IndexingSystem,
    gamma: &GraphSubgroup,
    node_budget: usize,
) -> bool {
    let subs = enumerate_subgroups(sys.group());
    let n = gamma.degree();
    (1..=node_budget).any(|b| {
        visit_fixed_exact(sys, &subs, &gamma.subgroup, b, &mut |tree| {
            tree.length() == n
                && Perm::all(n)
                    .into_iter()
                    .any(|p| gamma.is_fixed(&SymOperation::new(tree.clone(), p).unwrap()))
        })
    })
}

/// A finite operad: operations with a unit, composition, a group action
/// and a right symmetric action.  The trait exists so the free operad can
/// be extended into arbitrary finite targets and compared against itself.
pub trait FiniteOperad {
    type Op: Clone + PartialEq + std::fmt::Debug;
    fn unit(&self) -> Self::Op;
    fn arity(&self, op: &Self::Op) -> usize;
    fn gamma(&self, op: &Self::Op, args: &[Self::Op]) -> Self::Op;
    fn g_act(&self, g: usize, op: &Self::Op) -> Self::Op;
    fn right_act(&self, op: &Self::Op, sigma: &Perm) -> Self::Op;
}

/// The free operad itself, as a trait object over a fixed group.
pub struct SymOperad {
    pub group: Arc<FiniteGroup>,
}

impl FiniteOperad for SymOperad {
    type Op = SymOperation;

    fn unit(&self) -> SymOperation {
        SymOperation::unit()
    }

    fn arity(&self, op: &SymOperation) -> usize {
        op.arity()
    }

    fn gamma(&self, op: &SymOperation, args: &[SymOperation]) -> SymOperation {
        compose_sym(op, args).expect("arity mismatch in operad composition")
    }

    fn g_act(&self, g: usize, op: &SymOperation) -> SymOperation {
        op.g_act(g)
    }

    fn right_act(&self, op: &SymOperation, sigma: &Perm) -> SymOperation {
        op.right_act(sigma)
    }
}

/// The endomorphism operad of a finite set with a group action: all
/// functions `X^n -> X`, composed by substitution.  Argument tuples are
/// encoded little-endian in the table index.
pub struct EndOperad {
    set: FiniteGSet,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EndOp {
    pub arity: usize,
    pub table: Vec<usize>,
}

impl EndOperad {
    /// The set must carry an action of the full group.
    pub fn new(set: FiniteGSet) -> Self {
        assert!(set.acting().is_full(), "endomorphism operads act under the full group");
        EndOperad { set }
    }

    pub fn point_count(&self) -> usize {
        self.set.size()
    }

    pub fn encode(&self, args: &[usize]) -> usize {
        let m = self.set.size();
        args.iter().rev().fold(0, |acc, &x| acc * m + x)
    }

    pub fn decode(&self, mut idx: usize, arity: usize) -> Vec<usize> {
        let m = self.set.size();
        (0..arity)
            .map(|_| {
                let x = idx % m;
                idx /= m;
                x
            })
            .collect()
    }

    pub fn from_fn(&self, arity: usize, f: impl Fn(&[usize]) -> usize) -> EndOp {
        let m = self.set.size();
        let size = m.pow(arity as u32);
        let table = (0..size).map(|i| f(&self.decode(i, arity))).collect();
        EndOp { arity, table }
    }

    pub fn eval(&self, op: &EndOp, args: &[usize]) -> usize {
        assert_eq!(args.len(), op.arity);
        op.table[self.encode(args)]
    }
}

impl FiniteOperad for EndOperad {
    type Op = EndOp;

    fn unit(&self) -> EndOp {
        self.from_fn(1, |args| args[0])
    }

    fn arity(&self, op: &EndOp) -> usize {
        op.arity
    }

    fn gamma(&self, op: &EndOp, args: &[EndOp]) -> EndOp {
        assert_eq!(args.len(), op.arity);
        let total: usize = args.iter().map(|a| a.arity).sum();
        self.from_fn(total, |xs| {
            let mut inner = Vec::with_capacity(op.arity);
            let mut offset = 0;
            for a in args {
                inner.push(self.eval(a, &xs[offset..offset + a.arity]));
                offset += a.arity;
            }
            self.eval(op, &inner)
        })
    }

    /// `(g . f)(xs) = g . f(g^{-1} xs)`.
    fn g_act(&self, g: usize, op: &EndOp) -> EndOp {
        let ginv = self.set.group().inv(g);
        self.from_fn(op.arity, |xs| {
            let moved: Vec<usize> = xs.iter().map(|&x| self.set.apply(ginv, x)).collect();
            self.set.apply(g, self.eval(op, &moved))
        })
    }

    /// `(f . sigma)(xs)` reads argument `i` from position `sigma^{-1}(i)`
    /// of `f`'s slots, i.e. feeds `f` the tuple `(x_{sigma^{-1}(0)}, ...)`.
    fn right_act(&self, op: &EndOp, sigma: &Perm) -> EndOp {
        let inv = sigma.inverse();
        self.from_fn(op.arity, |xs| {
            let moved: Vec<usize> = (0..op.arity).map(|i| xs[inv.apply(i)]).collect();
            self.eval(op, &moved)
        })
    }
}

/// The unique operad map out of the free operad determined by an
/// assignment of a target operation to each norm generator.  Assignments
/// are re-validated to be fixed under the generator's graph subgroup on
/// every use.
pub struct FreeExtension<'a, O: FiniteOperad> {
    target: &'a O,
    assign: Box<dyn Fn(&Subgroup, &FiniteGSet) -> O::Op + 'a>,
}

impl<'a, O: FiniteOperad> FreeExtension<'a, O> {
    pub fn new(
        target: &'a O,
        assign: impl Fn(&Subgroup, &FiniteGSet) -> O::Op + 'a,
    ) -> Self {
        FreeExtension {
            target,
            assign: Box::new(assign),
        }
    }

    fn assigned(&self, h: &Subgroup, t: &FiniteGSet) -> Result<O::Op> {
        let op = (self.assign)(h, t);
        if self.target.arity(&op) != t.size() {
            return Err(Error::ArityMismatch {
                expected: t.size(),
                got: self.target.arity(&op),
            });
        }
        // fixed under the graph subgroup: (h, sigma(h)) . op = op, where
        // the pair acts by op -> h . (op . sigma(h)^{-1})
        for &e in h.elements() {
            let sigma_inv = t.act_of(e).inverse();
            let moved = self
                .target
                .g_act(e, &self.target.right_act(&op, &sigma_inv));
            if moved != op {
                return Err(Error::AssignmentNotFixed);
            }
        }
        Ok(op)
    }

    pub fn eval_tree(&self, tree: &NormTree) -> Result<O::Op> {
        match tree {
            NormTree::Leaf => Ok(self.target.unit()),
            NormTree::Node {
                subgroup,
                hset,
                rep,
                children,
            } => {
                let op = self.assigned(subgroup, hset)?;
                let args: Vec<O::Op> = children
                    .iter()
                    .map(|c| self.eval_tree(c))
                    .collect::<Result<_>>()?;
                // the tree is the composite of the translated generator
                // with the children as written, so only the generator
                // moves by the representative
                Ok(self.target.gamma(&self.target.g_act(*rep, &op), &args))
            }
        }
    }

    pub fn eval(&self, x: &SymOperation) -> Result<O::Op> {
        Ok(self.target.right_act(&self.eval_tree(&x.tree)?, &x.perm))
    }
}

/// Counts from an identity-verification run over the free operad.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperadVerifySummary {
    pub trees: usize,
    pub element_pairs_checked: usize,
    pub composition_samples: usize,
}

/// Exhaustively checks, over all trees within the node budget:
/// the action composes, `omega` is a cocycle, lengths are invariant; then
/// checks the operad laws (units, associativity, both equivariance laws,
/// and compatibility of the group action with composition) on seeded
/// random samples.
pub fn verify_operad_identities(
    sys: &IndexingSystem,
    node_budget: usize,
    seed: u64,
    samples: usize,
) -> Result<OperadVerifySummary> {
    let group = sys.group();
    let trees = enumerate_trees(sys, node_budget);
    let mut pairs_checked = 0;
    for t in &trees {
        t.validate(sys)?;
        let id = group.id();
        if t.act(id) != *t || !t.omega(id).is_identity() {
            return Err(Error::BadTree("identity must act trivially".into()));
        }
        for g in group.elements() {
            let gt = t.act(g);
            if gt.length() != t.length() || gt.node_count() != t.node_count() {
                return Err(Error::BadTree("action must preserve shape".into()));
            }
            for g2 in group.elements() {
                pairs_checked += 1;
                // action law
                if gt.act(g2) != t.act(group.mul(g2, g)) {
                    return Err(Error::BadTree(format!(
                        "action fails to compose at ({g2}, {g})"
                    )));
                }
                // cocycle law
                if gt.omega(g2).compose(&t.omega(g)) != t.omega(group.mul(g2, g)) {
                    return Err(Error::BadTree(format!(
                        "omega cocycle fails at ({g2}, {g})"
                    )));
                }
            }
        }
    }

    // seeded sampling for the composition laws
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let small: Vec<&NormTree> = trees.iter().filter(|t| t.length() <= 4).collect();
    let by_len = |n: usize| -> Vec<&NormTree> {
        trees.iter().filter(|t| t.length() == n).collect()
    };
    let rand_sym = |rng: &mut ChaCha8Rng, pool: &[&NormTree]| -> SymOperation {
        let t = pool[rng.random_range(0..pool.len())].clone();
        let n = t.length();
        let perms = Perm::all(n);
        SymOperation::new(t, perms[rng.random_range(0..perms.len())].clone()).unwrap()
    };
    let mut done = 0;
    for _ in 0..samples {
        if small.is_empty() {
            break;
        }
        let x = rand_sym(&mut rng, &small);
        let n = x.arity();
        let mut ys = Vec::with_capacity(n);
        for _ in 0..n {
            ys.push(rand_sym(&mut rng, &small));
        }
        let composed = compose_sym(&x, &ys)?;

        // unit laws
        let units: Vec<SymOperation> = (0..n).map(|_| SymOperation::unit()).collect();
        if compose_sym(&x, &units)? != x {
            return Err(Error::BadTree("right unit law fails".into()));
        }
        if compose_sym(&SymOperation::unit(), &[x.clone()])? != x {
            return Err(Error::BadTree("left unit law fails".into()));
        }

        // compatibility with the group action, slotwise
        for g in group.elements() {
            let lhs = composed.g_act(g);
            let gys: Vec<SymOperation> = ys.iter().map(|y| y.g_act(g)).collect();
            let rhs = compose_sym(&x.g_act(g), &gys)?;
            if lhs != rhs {
                return Err(Error::BadTree(format!(
                    "group action fails to commute with composition at {g}"
                )));
            }
        }

        // outer equivariance: gamma(x . sigma; ys) = gamma(x; sigma^{-1} ys) . sigma(blocks)
        let perms = Perm::all(n);
        let sigma = perms[rng.random_range(0..perms.len())].clone();
        let lhs = compose_sym(&x.right_act(&sigma), &ys)?;
        let sinv = sigma.inverse();
        let reordered: Vec<SymOperation> = (0..n).map(|i| ys[sinv.apply(i)].clone()).collect();
        let sizes: Vec<usize> = ys.iter().map(|y| y.arity()).collect();
        let rhs = compose_sym(&x, &reordered)?.right_act(&Perm::block(&sigma, &sizes));
        if lhs != rhs {
            return Err(Error::BadTree("outer equivariance fails".into()));
        }

        // inner equivariance: gamma(x; ys . taus) = gamma(x; ys) . (tau_1 + ... + tau_n)
        let taus: Vec<Perm> = ys
            .iter()
            .map(|y| {
                let all = Perm::all(y.arity());
                all[rng.random_range(0..all.len())].clone()
            })
            .collect();
        let twisted: Vec<SymOperation> = ys
            .iter()
            .zip(&taus)
            .map(|(y, t)| y.right_act(t))
            .collect();
        let lhs = compose_sym(&x, &twisted)?;
        let rhs = composed.right_act(&Perm::direct_sum(&taus));
        if lhs != rhs {
            return Err(Error::BadTree("inner equivariance fails".into()));
        }

        // associativity on a shallow third layer
        let mut zs = Vec::new();
        let mut ok = true;
        for y in &ys {
            for _ in 0..y.arity() {
                let pool = by_len(1);
                if pool.is_empty() {
                    ok = false;
                    break;
                }
                zs.push(rand_sym(&mut rng, &pool));
            }
        }
        if ok {
            let left = compose_sym(&composed, &zs)?;
            let mut offset = 0;
            let mut inner_composites = Vec::with_capacity(n);
            for y in &ys {
                let k = y.arity();
                inner_composites.push(compose_sym(y, &zs[offset..offset + k])?);
                offset += k;
            }
            let right = compose_sym(&x, &inner_composites)?;
            if left != right {
                return Err(Error::BadTree("associativity fails".into()));
            }
        }
        done += 1;
    }

    Ok(OperadVerifySummary {
        trees: trees.len(),
        element_pairs_checked: pairs_checked,
        composition_samples: done,
    })
}
