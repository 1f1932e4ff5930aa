//! The free normed symmetric monoidal category on a finite G-set of
//! generating labels.
//!
//! An object is a norm tree together with one label per leaf, drawn from
//! a finite G-set `A`; a morphism is an index map between leaf positions
//! that preserves labels.  The group acts on objects through the tree
//! action and the leaf shuffle, and on morphisms by conjugating with the
//! shuffles.  Tensor products, external norms, and the structural
//! isomorphisms are all realized concretely: the coherence maps are
//! identity index maps and the braiding is a block swap.
//!
//! Equivariant assignments of objects to the points of a G-set generate
//! strict normed functors by structural recursion ("unfurling"); natural
//! transformations between such functors are generated by one component
//! per point.  On top of this the module builds the fixed subcategory of
//! a subgroup and its comparison with the slice category of admissible
//! H-sets over the label set, the adjunction between a projection functor
//! and its norm-object transpose, the base-change mate of that adjunction
//! along a smaller subgroup, and the equivalence between a product of two
//! label categories and the category over their disjoint union.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::gset::FiniteGSet;
use crate::indexing::IndexingSystem;
use crate::operad::{admissible_hset_classes, enumerate_trees, NormTree};

/// An object `(tree, labels)`: a formal tensor/norm word in `labels.len()`
/// generators, the i-th generator labeled by the point `labels[i]` of the
/// G-set `over`.
#[derive(Clone, PartialEq)]
pub struct NormedObject {
    pub over: FiniteGSet,
    pub tree: NormTree,
    pub labels: Vec<usize>,
}

impl std::fmt::Debug for NormedObject {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?}, {:?})", self.tree, self.labels)
    }
}

impl NormedObject {
    pub fn new(over: FiniteGSet, tree: NormTree, labels: Vec<usize>) -> Result<Self> {
        if !over.acting().is_full() {
            return Err(Error::Malformed(
                "label set of a normed object must carry a full group action".into(),
            ));
        }
        if labels.len() != tree.length() {
            return Err(Error::LabelMismatch {
                labels: labels.len(),
                len: tree.length(),
            });
        }
        if let Some(&bad) = labels.iter().find(|&&a| a >= over.size()) {
            return Err(Error::Malformed(format!(
                "label {} out of range for a set of {} points",
                bad,
                over.size()
            )));
        }
        Ok(NormedObject { over, tree, labels })
    }

    pub fn length(&self) -> usize {
        self.labels.len()
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.over.group()
    }

    /// `g · (θ, (a_i)) = (gθ, (g · a_{ω_θ(g)^{-1}(i)})_i)`.
    pub fn act(&self, g: usize) -> NormedObject {
        let om_inv = self.tree.omega(g).inverse();
        let labels = (0..self.labels.len())
            .map(|i| self.over.apply(g, self.labels[om_inv.apply(i)]))
            .collect();
        NormedObject {
            over: self.over.clone(),
            tree: self.tree.act(g),
            labels,
        }
    }

    pub fn is_fixed_under(&self, h: &Subgroup) -> bool {
        h.elements().iter().all(|&e| self.act(e) == *self)
    }

    /// The children of a node object, each with its slice of the labels.
    /// A leaf has no children.
    pub fn child_objects(&self) -> Vec<NormedObject> {
        match &self.tree {
            NormTree::Leaf => Vec::new(),
            NormTree::Node { children, .. } => {
                let mut out = Vec::with_capacity(children.len());
                let mut offset = 0;
                for child in children {
                    let len = child.length();
                    out.push(NormedObject {
                        over: self.over.clone(),
                        tree: child.clone(),
                        labels: self.labels[offset..offset + len].to_vec(),
                    });
                    offset += len;
                }
                out
            }
        }
    }
}

pub fn leaf_object(over: &FiniteGSet, a: usize) -> Result<NormedObject> {
    NormedObject::new(over.clone(), NormTree::Leaf, vec![a])
}

/// The tensor unit: the norm over the empty set, with no labels.
pub fn unit_object(over: &FiniteGSet) -> NormedObject {
    let full = Subgroup::full(over.group());
    NormedObject {
        over: over.clone(),
        tree: NormTree::Node {
            subgroup: full.clone(),
            hset: FiniteGSet::empty(full.clone()),
            rep: full.group().id(),
            children: Vec::new(),
        },
        labels: Vec::new(),
    }
}

/// Binary tensor: a node over the trivial two-point set of the full group,
/// with concatenated labels.
pub fn tensor(x: &NormedObject, y: &NormedObject) -> NormedObject {
    assert_eq!(x.over, y.over, "tensor factors must share a label set");
    let full = Subgroup::full(x.group());
    let mut labels = x.labels.clone();
    labels.extend_from_slice(&y.labels);
    NormedObject {
        over: x.over.clone(),
        tree: NormTree::Node {
            subgroup: full.clone(),
            hset: FiniteGSet::trivial_set(full.clone(), 2),
            rep: full.group().id(),
            children: vec![x.tree.clone(), y.tree.clone()],
        },
        labels,
    }
}

/// The external norm `⊗_T(x_1, …, x_{|T|})`: a node over the admissible
/// H-set `T` with concatenated labels.
pub fn external_norm(
    sys: &IndexingSystem,
    t: &FiniteGSet,
    over: &FiniteGSet,
    xs: &[NormedObject],
) -> Result<NormedObject> {
    if xs.len() != t.size() {
        return Err(Error::ArityMismatch {
            expected: t.size(),
            got: xs.len(),
        });
    }
    if let Some(stab) = sys.admissibility_failure(t) {
        return Err(Error::InadmissibleHSet {
            stab,
            sub: t.acting().id(),
        });
    }
    let mut labels = Vec::new();
    let mut children = Vec::with_capacity(xs.len());
    for x in xs {
        assert_eq!(x.over, *over, "norm inputs must share a label set");
        labels.extend_from_slice(&x.labels);
        children.push(x.tree.clone());
    }
    Ok(NormedObject {
        over: over.clone(),
        tree: NormTree::Node {
            subgroup: t.acting().clone(),
            hset: t.clone(),
            rep: t.group().id(),
            children,
        },
        labels,
    })
}

/// The left-nested iterated tensor `(…(x_1 ⊗ x_2) ⊗ …) ⊗ x_n`; the unit
/// when `xs` is empty, `x_1` itself when it is a singleton.
pub fn nfold_tensor(over: &FiniteGSet, xs: &[NormedObject]) -> NormedObject {
    match xs {
        [] => unit_object(over),
        [x] => x.clone(),
        _ => {
            let mut acc = tensor(&xs[0], &xs[1]);
            for x in &xs[2..] {
                acc = tensor(&acc, x);
            }
            acc
        }
    }
}

/// A morphism `(θ, (a_i)) → (τ, (b_j))`: an index map between leaf
/// positions with `a_i = b_{alpha[i]}`.
#[derive(Clone, PartialEq)]
pub struct NormedMorphism {
    pub source: NormedObject,
    pub target: NormedObject,
    pub alpha: Vec<usize>,
}

impl std::fmt::Debug for NormedMorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:?} -{:?}-> {:?}",
            self.source, self.alpha, self.target
        )
    }
}

impl NormedMorphism {
    pub fn new(source: NormedObject, target: NormedObject, alpha: Vec<usize>) -> Result<Self> {
        if source.over != target.over {
            return Err(Error::GroupMismatch);
        }
        if alpha.len() != source.length() {
            return Err(Error::LabelMismatch {
                labels: alpha.len(),
                len: source.length(),
            });
        }
        for (i, &j) in alpha.iter().enumerate() {
            if j >= target.length() {
                return Err(Error::Malformed(format!(
                    "index {} out of range for a target of length {}",
                    j,
                    target.length()
                )));
            }
            if source.labels[i] != target.labels[j] {
                return Err(Error::LabelIncompatible(i));
            }
        }
        Ok(NormedMorphism {
            source,
            target,
            alpha,
        })
    }

    pub fn identity(x: &NormedObject) -> Self {
        NormedMorphism {
            source: x.clone(),
            target: x.clone(),
            alpha: (0..x.length()).collect(),
        }
    }

    /// `self ∘ first`, applying `first` first.
    pub fn compose(&self, first: &NormedMorphism) -> Result<NormedMorphism> {
        if first.target != self.source {
            return Err(Error::Malformed(
                "morphism composition: inner target differs from outer source".into(),
            ));
        }
        let alpha = first.alpha.iter().map(|&j| self.alpha[j]).collect();
        NormedMorphism::new(first.source.clone(), self.target.clone(), alpha)
    }

    /// `g · α = ω_τ(g) ∘ α ∘ ω_θ(g)^{-1}` between the acted endpoints.
    pub fn act(&self, g: usize) -> NormedMorphism {
        let om_src_inv = self.source.tree.omega(g).inverse();
        let om_tgt = self.target.tree.omega(g);
        let alpha = (0..self.alpha.len())
            .map(|i| om_tgt.apply(self.alpha[om_src_inv.apply(i)]))
            .collect();
        NormedMorphism::new(self.source.act(g), self.target.act(g), alpha)
            .expect("the group action preserves label compatibility")
    }

    pub fn is_fixed_under(&self, h: &Subgroup) -> bool {
        h.elements().iter().all(|&e| self.act(e) == *self)
    }

    pub fn is_bijective(&self) -> bool {
        if self.source.length() != self.target.length() {
            return false;
        }
        let mut seen = vec![false; self.target.length()];
        for &j in &self.alpha {
            if seen[j] {
                return false;
            }
            seen[j] = true;
        }
        true
    }

    pub fn inverse(&self) -> Option<NormedMorphism> {
        if !self.is_bijective() {
            return None;
        }
        let mut alpha = vec![0; self.alpha.len()];
        for (i, &j) in self.alpha.iter().enumerate() {
            alpha[j] = i;
        }
        Some(NormedMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            alpha,
        })
    }
}

/// `f ⊗ g`: the block sum of the two index maps between the tensors.
pub fn tensor_morphism(f: &NormedMorphism, g: &NormedMorphism) -> NormedMorphism {
    let source = tensor(&f.source, &g.source);
    let target = tensor(&f.target, &g.target);
    let shift = f.target.length();
    let mut alpha = f.alpha.clone();
    alpha.extend(g.alpha.iter().map(|&j| j + shift));
    NormedMorphism::new(source, target, alpha)
        .expect("a block sum of label-compatible maps is label-compatible")
}

/// `⊗_T(f_1, …, f_{|T|})`: the block sum of the index maps between the
/// external norms.
pub fn norm_morphism(
    sys: &IndexingSystem,
    t: &FiniteGSet,
    over: &FiniteGSet,
    fs: &[NormedMorphism],
) -> Result<NormedMorphism> {
    let sources: Vec<NormedObject> = fs.iter().map(|f| f.source.clone()).collect();
    let targets: Vec<NormedObject> = fs.iter().map(|f| f.target.clone()).collect();
    let source = external_norm(sys, t, over, &sources)?;
    let target = external_norm(sys, t, over, &targets)?;
    let mut alpha = Vec::with_capacity(source.length());
    let mut shift = 0;
    for f in fs {
        alpha.extend(f.alpha.iter().map(|&j| j + shift));
        shift += f.target.length();
    }
    Ok(NormedMorphism::new(source, target, alpha)
        .expect("a block sum of label-compatible maps is label-compatible"))
}

/// The associator `(x⊗y)⊗z → x⊗(y⊗z)`: the identity index map.
pub fn associator(x: &NormedObject, y: &NormedObject, z: &NormedObject) -> NormedMorphism {
    let source = tensor(&tensor(x, y), z);
    let target = tensor(x, &tensor(y, z));
    let alpha = (0..source.length()).collect();
    NormedMorphism::new(source, target, alpha).expect("the associator is label-compatible")
}

/// The left unitor `e⊗x → x`: the identity index map.
pub fn left_unitor(x: &NormedObject) -> NormedMorphism {
    let source = tensor(&unit_object(&x.over), x);
    NormedMorphism::new(source, x.clone(), (0..x.length()).collect())
        .expect("the left unitor is label-compatible")
}

/// The right unitor `x⊗e → x`: the identity index map.
pub fn right_unitor(x: &NormedObject) -> NormedMorphism {
    let source = tensor(x, &unit_object(&x.over));
    NormedMorphism::new(source, x.clone(), (0..x.length()).collect())
        .expect("the right unitor is label-compatible")
}

/// The braiding `x⊗y → y⊗x`: the block swap of the two label blocks.
pub fn braiding(x: &NormedObject, y: &NormedObject) -> NormedMorphism {
    let source = tensor(x, y);
    let target = tensor(y, x);
    let n = x.length();
    let m = y.length();
    let alpha = (0..n + m)
        .map(|i| if i < n { m + i } else { i - n })
        .collect();
    NormedMorphism::new(source, target, alpha).expect("the braiding is label-compatible")
}

/// The untwistor `v_T: ⊗_T(x_1, …) → ⊗_{|T|}(x_1, …)` from the norm to the
/// iterated tensor of the same inputs in the same order: the identity
/// index map.
pub fn untwistor(
    sys: &IndexingSystem,
    t: &FiniteGSet,
    over: &FiniteGSet,
    xs: &[NormedObject],
) -> Result<NormedMorphism> {
    let source = external_norm(sys, t, over, xs)?;
    let target = nfold_tensor(over, xs);
    let alpha = (0..source.length()).collect();
    Ok(NormedMorphism::new(source, target, alpha)
        .expect("the untwistor is label-compatible"))
}

/// All label-compatible index maps from `x` to `y`.
pub fn hom_set(x: &NormedObject, y: &NormedObject) -> Vec<NormedMorphism> {
    if x.over != y.over {
        return Vec::new();
    }
    let candidates: Vec<Vec<usize>> = x
        .labels
        .iter()
        .map(|&a| {
            (0..y.length())
                .filter(|&j| y.labels[j] == a)
                .collect::<Vec<_>>()
        })
        .collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return Vec::new();
    }
    let n = candidates.len();
    let mut choice = vec![0usize; n];
    let mut out = Vec::new();
    loop {
        let alpha: Vec<usize> = (0..n).map(|i| candidates[i][choice[i]]).collect();
        out.push(NormedMorphism {
            source: x.clone(),
            target: y.clone(),
            alpha,
        });
        let mut i = 0;
        loop {
            if i == n {
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

/// The hom set of the groupoid core: bijective label-compatible maps only.
pub fn core_hom_set(x: &NormedObject, y: &NormedObject) -> Vec<NormedMorphism> {
    if x.length() != y.length() {
        return Vec::new();
    }
    hom_set(x, y)
        .into_iter()
        .filter(|m| m.is_bijective())
        .collect()
}

/// All objects over `a` whose trees use at most `node_budget` nodes.
pub fn enumerate_objects(
    sys: &IndexingSystem,
    a: &FiniteGSet,
    node_budget: usize,
) -> Vec<NormedObject> {
    assert!(
        a.acting().is_full(),
        "objects are labeled by a set with a full group action"
    );
    assert!(Arc::ptr_eq(sys.group(), a.group()) || sys.group() == a.group());
    let mut out = Vec::new();
    for tree in enumerate_trees(sys, node_budget) {
        let n = tree.length();
        if n > 0 && a.size() == 0 {
            continue;
        }
        let mut tuple = vec![0usize; n];
        'tuples: loop {
            out.push(NormedObject {
                over: a.clone(),
                tree: tree.clone(),
                labels: tuple.clone(),
            });
            let mut i = 0;
            loop {
                if i == n {
                    break 'tuples;
                }
                tuple[i] += 1;
                if tuple[i] < a.size() {
                    break;
                }
                tuple[i] = 0;
                i += 1;
            }
        }
    }
    out
}

fn prefix_sums(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    for &s in sizes {
        out.push(acc);
        acc += s;
    }
    out.push(acc);
    out
}

/// The generating data of a strict normed functor `G(A) → G(B)`: one
/// object of `G(B)` per point of `A`, equivariantly.
#[derive(Clone, PartialEq)]
pub struct EquivariantFunctorData {
    source: FiniteGSet,
    target: FiniteGSet,
    assign: Vec<NormedObject>,
}

impl std::fmt::Debug for EquivariantFunctorData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FunctorData{:?}", self.assign)
    }
}

impl EquivariantFunctorData {
    pub fn new(
        source: FiniteGSet,
        target: FiniteGSet,
        assign: Vec<NormedObject>,
    ) -> Result<Self> {
        if !source.acting().is_full() || !target.acting().is_full() {
            return Err(Error::Malformed(
                "functor data is indexed by sets with full group actions".into(),
            ));
        }
        if source.group() != target.group() {
            return Err(Error::GroupMismatch);
        }
        if assign.len() != source.size() {
            return Err(Error::Malformed(format!(
                "expected one assigned object per point: {} points, {} objects",
                source.size(),
                assign.len()
            )));
        }
        for x in &assign {
            if x.over != target {
                return Err(Error::GroupMismatch);
            }
        }
        for g in 0..source.group().order() {
            for a in source.points() {
                if assign[source.apply(g, a)] != assign[a].act(g) {
                    return Err(Error::DataNotEquivariant { elt: g, point: a });
                }
            }
        }
        Ok(EquivariantFunctorData {
            source,
            target,
            assign,
        })
    }

    pub fn source(&self) -> &FiniteGSet {
        &self.source
    }

    pub fn target(&self) -> &FiniteGSet {
        &self.target
    }

    pub fn assigned(&self, a: usize) -> &NormedObject {
        &self.assign[a]
    }

    /// The data of the identity functor on `G(A)`: each point to its leaf.
    pub fn identity_data(a: &FiniteGSet) -> Result<Self> {
        let assign = a
            .points()
            .map(|p| leaf_object(a, p))
            .collect::<Result<Vec<_>>>()?;
        EquivariantFunctorData::new(a.clone(), a.clone(), assign)
    }

    /// The data of the relabeling functor of an equivariant map `A → B`:
    /// each point to the leaf at its image.
    pub fn from_map(source: &FiniteGSet, target: &FiniteGSet, map: &[usize]) -> Result<Self> {
        if map.len() != source.size() {
            return Err(Error::Malformed(format!(
                "expected one image per point: {} points, {} images",
                source.size(),
                map.len()
            )));
        }
        let assign = map
            .iter()
            .map(|&b| leaf_object(target, b))
            .collect::<Result<Vec<_>>>()?;
        EquivariantFunctorData::new(source.clone(), target.clone(), assign)
    }

    /// The unfurled functor on objects: leaves are replaced by their
    /// assigned objects, nodes are kept with the same translate.
    pub fn apply_object(&self, x: &NormedObject) -> NormedObject {
        assert_eq!(x.over, self.source, "object lives over the source labels");
        match &x.tree {
            NormTree::Leaf => self.assign[x.labels[0]].clone(),
            NormTree::Node {
                subgroup,
                hset,
                rep,
                children,
            } => {
                let mut new_children = Vec::with_capacity(children.len());
                let mut new_labels = Vec::new();
                for child in x.child_objects() {
                    let image = self.apply_object(&child);
                    new_children.push(image.tree);
                    new_labels.extend(image.labels);
                }
                NormedObject {
                    over: self.target.clone(),
                    tree: NormTree::Node {
                        subgroup: subgroup.clone(),
                        hset: hset.clone(),
                        rep: *rep,
                        children: new_children,
                    },
                    labels: new_labels,
                }
            }
        }
    }

    /// The unfurled functor on morphisms: the block map sending the i-th
    /// source block identically onto the `alpha[i]`-th target block.
    pub fn apply_morphism(&self, f: &NormedMorphism) -> NormedMorphism {
        let src = self.apply_object(&f.source);
        let tgt = self.apply_object(&f.target);
        let k: Vec<usize> = f
            .source
            .labels
            .iter()
            .map(|&a| self.assign[a].length())
            .collect();
        let l: Vec<usize> = f
            .target
            .labels
            .iter()
            .map(|&b| self.assign[b].length())
            .collect();
        let s_off = prefix_sums(&k);
        let t_off = prefix_sums(&l);
        let mut alpha = vec![0usize; src.length()];
        for i in 0..k.len() {
            for p in 0..k[i] {
                alpha[s_off[i] + p] = t_off[f.alpha[i]] + p;
            }
        }
        NormedMorphism::new(src, tgt, alpha)
            .expect("the block image of a label-compatible map is label-compatible")
    }

    /// The generating data of the composite functor: unfurl `next` over
    /// each assigned object.  Composition of the unfurled functors agrees
    /// with unfurling this data strictly.
    pub fn then(&self, next: &EquivariantFunctorData) -> Result<EquivariantFunctorData> {
        let assign = self
            .assign
            .iter()
            .map(|x| next.apply_object(x))
            .collect::<Vec<_>>();
        EquivariantFunctorData::new(self.source.clone(), next.target.clone(), assign)
    }
}

/// A natural transformation between two unfurled functors with a common
/// source label set, generated by one component per point.
#[derive(Clone, Debug)]
pub struct NatTrans {
    pub from: EquivariantFunctorData,
    pub to: EquivariantFunctorData,
    pub comp: Vec<NormedMorphism>,
}

impl NatTrans {
    pub fn new(
        from: EquivariantFunctorData,
        to: EquivariantFunctorData,
        comp: Vec<NormedMorphism>,
    ) -> Result<Self> {
        if from.source != to.source || from.target != to.target {
            return Err(Error::GroupMismatch);
        }
        if comp.len() != from.source.size() {
            return Err(Error::Malformed(format!(
                "expected one component per point: {} points, {} components",
                from.source.size(),
                comp.len()
            )));
        }
        for (a, m) in comp.iter().enumerate() {
            if m.source != from.assign[a] || m.target != to.assign[a] {
                return Err(Error::Malformed(format!(
                    "component at point {} does not run between the assigned objects",
                    a
                )));
            }
        }
        for g in 0..from.source.group().order() {
            for a in from.source.points() {
                if comp[from.source.apply(g, a)] != comp[a].act(g) {
                    return Err(Error::DataNotEquivariant { elt: g, point: a });
                }
            }
        }
        Ok(NatTrans { from, to, comp })
    }

    /// The component at an arbitrary object: the block sum of the
    /// per-label components.
    pub fn component_at(&self, x: &NormedObject) -> NormedMorphism {
        let src = self.from.apply_object(x);
        let tgt = self.to.apply_object(x);
        let k: Vec<usize> = x
            .labels
            .iter()
            .map(|&a| self.from.assign[a].length())
            .collect();
        let l: Vec<usize> = x
            .labels
            .iter()
            .map(|&a| self.to.assign[a].length())
            .collect();
        let s_off = prefix_sums(&k);
        let t_off = prefix_sums(&l);
        let mut alpha = vec![0usize; src.length()];
        for (i, &a) in x.labels.iter().enumerate() {
            for (p, &q) in self.comp[a].alpha.iter().enumerate() {
                alpha[s_off[i] + p] = t_off[i] + q;
            }
        }
        NormedMorphism::new(src, tgt, alpha)
            .expect("a block sum of label-compatible components is label-compatible")
    }
}

/// The full subcategory of H-fixed objects, materialized up to a node
/// budget.
pub struct FixedSubcategory {
    pub subgroup: Subgroup,
    pub objects: Vec<NormedObject>,
}

pub fn fixed_subcategory(
    sys: &IndexingSystem,
    a: &FiniteGSet,
    h: &Subgroup,
    node_budget: usize,
) -> FixedSubcategory {
    let objects = enumerate_objects(sys, a, node_budget)
        .into_iter()
        .filter(|x| x.is_fixed_under(h))
        .collect();
    FixedSubcategory {
        subgroup: h.clone(),
        objects,
    }
}

impl FixedSubcategory {
    /// All H-fixed label-compatible maps.
    pub fn hom_fixed(&self, x: &NormedObject, y: &NormedObject) -> Vec<NormedMorphism> {
        hom_set(x, y)
            .into_iter()
            .filter(|m| m.is_fixed_under(&self.subgroup))
            .collect()
    }

    /// H-fixed bijections.
    pub fn core_hom_fixed(&self, x: &NormedObject, y: &NormedObject) -> Vec<NormedMorphism> {
        self.hom_fixed(x, y)
            .into_iter()
            .filter(|m| m.is_bijective())
            .collect()
    }

    /// Isomorphism classes of the materialized objects, as index lists.
    pub fn iso_classes(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (i, x) in self.objects.iter().enumerate() {
            match classes
                .iter_mut()
                .find(|c| !self.core_hom_fixed(&self.objects[c[0]], x).is_empty())
            {
                Some(class) => class.push(i),
                None => classes.push(vec![i]),
            }
        }
        classes
    }

    pub fn aut_order(&self, i: usize) -> usize {
        self.core_hom_fixed(&self.objects[i], &self.objects[i]).len()
    }
}

/// An admissible H-set with a structure map to the restricted label set.
#[derive(Clone, Debug)]
pub struct SliceObject {
    pub set: FiniteGSet,
    pub map: Vec<usize>,
}

/// The slice category of admissible H-sets over `res_H A`, materialized
/// up to a size bound.  Built from group and set primitives only, with
/// brute-force map enumeration.
pub struct SliceCategory {
    pub subgroup: Subgroup,
    pub base: FiniteGSet,
    pub objects: Vec<SliceObject>,
}

fn equivariant_functions(src: &FiniteGSet, tgt: &FiniteGSet) -> Vec<Vec<usize>> {
    crate::gset::equivariant_maps(src, tgt)
        .into_iter()
        .map(|m| m.map().to_vec())
        .collect()
}

pub fn slice_category(
    sys: &IndexingSystem,
    h: &Subgroup,
    a: &FiniteGSet,
    size_bound: usize,
) -> Result<SliceCategory> {
    let base = a.restrict(h)?;
    let mut objects = Vec::new();
    for t in admissible_hset_classes(sys, h, size_bound) {
        for map in equivariant_functions(&t, &base) {
            objects.push(SliceObject {
                set: t.clone(),
                map,
            });
        }
    }
    Ok(SliceCategory {
        subgroup: h.clone(),
        base,
        objects,
    })
}

impl SliceCategory {
    /// All H-maps `w` with `y.map ∘ w = x.map`.
    pub fn hom(&self, x: &SliceObject, y: &SliceObject) -> Vec<Vec<usize>> {
        equivariant_functions(&x.set, &y.set)
            .into_iter()
            .filter(|w| (0..x.set.size()).all(|p| y.map[w[p]] == x.map[p]))
            .collect()
    }

    fn has_iso(&self, x: &SliceObject, y: &SliceObject) -> bool {
        if x.set.size() != y.set.size() {
            return false;
        }
        self.hom(x, y).into_iter().any(|w| {
            let mut seen = vec![false; y.set.size()];
            w.iter().all(|&q| !std::mem::replace(&mut seen[q], true))
        })
    }

    pub fn iso_classes(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (i, x) in self.objects.iter().enumerate() {
            match classes
                .iter_mut()
                .find(|c| self.has_iso(&self.objects[c[0]], x))
            {
                Some(class) => class.push(i),
                None => classes.push(vec![i]),
            }
        }
        classes
    }

    pub fn aut_order(&self, i: usize) -> usize {
        let x = &self.objects[i];
        self.hom(x, x)
            .into_iter()
            .filter(|w| {
                let mut seen = vec![false; x.set.size()];
                w.iter().all(|&q| !std::mem::replace(&mut seen[q], true))
            })
            .count()
    }
}

/// The canonical H-fixed object of a slice object: the norm over its set
/// with the structure map as labels.
pub fn slice_witness(a: &FiniteGSet, h: &Subgroup, so: &SliceObject) -> NormedObject {
    NormedObject::new(
        a.clone(),
        NormTree::Node {
            subgroup: h.clone(),
            hset: so.set.clone(),
            rep: h.group().id(),
            children: vec![NormTree::Leaf; so.set.size()],
        },
        so.map.clone(),
    )
    .expect("a slice object yields a valid normed object")
}

/// The outcome of comparing the H-fixed subcategory with the slice
/// category of admissible H-sets over the labels.
#[derive(Debug)]
pub struct FixedSliceReport {
    pub slice_object_count: usize,
    pub fixed_object_count: usize,
    pub slice_class_count: usize,
    pub fixed_class_count: usize,
    pub witnesses_are_fixed_objects: bool,
    pub essentially_surjective: bool,
    pub fully_faithful: bool,
    pub aut_orders_match: bool,
}

impl FixedSliceReport {
    pub fn holds(&self) -> bool {
        self.slice_class_count == self.fixed_class_count
            && self.witnesses_are_fixed_objects
            && self.essentially_surjective
            && self.fully_faithful
            && self.aut_orders_match
    }
}

/// Compare the H-fixed subcategory (objects of label length at most
/// `bound`, trees of at most `bound + 1` nodes) against the slice
/// category of admissible H-sets of size at most `bound` over `res_H A`.
pub fn fixed_slice_comparison(
    sys: &IndexingSystem,
    a: &FiniteGSet,
    h: &Subgroup,
    bound: usize,
) -> Result<FixedSliceReport> {
    let slice = slice_category(sys, h, a, bound)?;
    let all_fixed = fixed_subcategory(sys, a, h, bound + 1);
    let fixed = FixedSubcategory {
        subgroup: h.clone(),
        objects: all_fixed
            .objects
            .into_iter()
            .filter(|x| x.length() <= bound)
            .collect(),
    };

    let witnesses: Vec<NormedObject> = slice
        .objects
        .iter()
        .map(|so| slice_witness(a, h, so))
        .collect();
    let witnesses_are_fixed_objects = witnesses
        .iter()
        .all(|w| w.is_fixed_under(h) && fixed.objects.contains(w));

    let mut essentially_surjective = true;
    for x in &fixed.objects {
        let t = x.tree.equivariant_orbit_set(h)?;
        if !sys.is_admissible_hset(&t) {
            essentially_surjective = false;
            break;
        }
        let wit = slice_witness(
            a,
            h,
            &SliceObject {
                set: t,
                map: x.labels.clone(),
            },
        );
        let m = NormedMorphism::new(wit, x.clone(), (0..x.length()).collect());
        match m {
            Ok(m) if m.is_bijective() && m.is_fixed_under(h) => {}
            _ => {
                essentially_surjective = false;
                break;
            }
        }
    }

    let slice_classes = slice.iso_classes();
    let fixed_classes = fixed.iso_classes();

    let mut fully_faithful = true;
    let mut aut_orders_match = true;
    for ci in &slice_classes {
        let i = ci[0];
        if slice.aut_order(i)
            != fixed
                .core_hom_fixed(&witnesses[i], &witnesses[i])
                .len()
        {
            aut_orders_match = false;
        }
        for cj in &slice_classes {
            let j = cj[0];
            let slice_hom = slice.hom(&slice.objects[i], &slice.objects[j]).len();
            let fixed_hom = fixed.hom_fixed(&witnesses[i], &witnesses[j]).len();
            if slice_hom != fixed_hom {
                fully_faithful = false;
            }
        }
    }

    Ok(FixedSliceReport {
        slice_object_count: slice.objects.len(),
        fixed_object_count: fixed.objects.len(),
        slice_class_count: slice_classes.len(),
        fixed_class_count: fixed_classes.len(),
        witnesses_are_fixed_objects,
        essentially_surjective,
        fully_faithful,
        aut_orders_match,
    })
}

/// The adjunction between the relabeling functor of the projection
/// `ind_H^G T → G/H` and its transpose, generated by the H-fixed norm
/// object over the induced set.
pub struct ProjectionAdjunction {
    pub subgroup: Subgroup,
    pub hset: FiniteGSet,
    pub base: FiniteGSet,
    pub induced: FiniteGSet,
    /// Data of the relabeling functor along the projection.
    pub left: EquivariantFunctorData,
    /// Data of its right adjoint.
    pub right: EquivariantFunctorData,
    pub unit: NatTrans,
    pub counit: NatTrans,
}

pub fn projection_adjunction(
    sys: &IndexingSystem,
    h: &Subgroup,
    t: &FiniteGSet,
) -> Result<ProjectionAdjunction> {
    if t.acting() != h {
        return Err(Error::GroupMismatch);
    }
    if let Some(stab) = sys.admissibility_failure(t) {
        return Err(Error::InadmissibleHSet { stab, sub: h.id() });
    }
    let group = h.group().clone();
    let full = Subgroup::full(&group);
    let base = FiniteGSet::coset_space(&full, h)?;
    let induced = t.induce(&full)?;
    let m = t.size();

    // The projection sends the coset block of a point to its coset.
    let p_map: Vec<usize> = induced.points().map(|p| p / m.max(1)).collect();
    let left = EquivariantFunctorData::from_map(&induced, &base, &p_map)?;

    // The H-fixed norm object over the identity-coset block.
    let x_t = NormedObject::new(
        induced.clone(),
        NormTree::Node {
            subgroup: h.clone(),
            hset: t.clone(),
            rep: group.id(),
            children: vec![NormTree::Leaf; m],
        },
        (0..m).collect(),
    )?;
    let dec = h.coset_reps_in(&full)?;
    let assign: Vec<NormedObject> = dec.reps().iter().map(|&r| x_t.act(r)).collect();
    let right = EquivariantFunctorData::new(base.clone(), induced.clone(), assign)?;

    let round_trip = left.then(&right)?;
    let unit_comp = induced
        .points()
        .map(|a| {
            let target = round_trip.assigned(a).clone();
            let j = target
                .labels
                .iter()
                .position(|&b| b == a)
                .expect("each point appears among the labels of its coset's norm object");
            NormedMorphism::new(leaf_object(&induced, a)?, target, vec![j])
        })
        .collect::<Result<Vec<_>>>()?;
    let unit = NatTrans::new(
        EquivariantFunctorData::identity_data(&induced)?,
        round_trip,
        unit_comp,
    )?;

    let other_trip = right.then(&left)?;
    let counit_comp = base
        .points()
        .map(|j| {
            let source = other_trip.assigned(j).clone();
            NormedMorphism::new(source, leaf_object(&base, j)?, vec![0; m])
        })
        .collect::<Result<Vec<_>>>()?;
    let counit = NatTrans::new(
        other_trip,
        EquivariantFunctorData::identity_data(&base)?,
        counit_comp,
    )?;

    Ok(ProjectionAdjunction {
        subgroup: h.clone(),
        hset: t.clone(),
        base,
        induced,
        left,
        right,
        unit,
        counit,
    })
}

impl ProjectionAdjunction {
    /// Both triangle identities, checked on every object within the node
    /// budget on each side.
    pub fn triangle_identities_hold(&self, sys: &IndexingSystem, node_budget: usize) -> bool {
        for x in enumerate_objects(sys, &self.induced, node_budget) {
            let lx = self.left.apply_object(&x);
            let m1 = self.left.apply_morphism(&self.unit.component_at(&x));
            let m2 = self.counit.component_at(&lx);
            match m2.compose(&m1) {
                Ok(c) if c == NormedMorphism::identity(&lx) => {}
                _ => return false,
            }
        }
        for y in enumerate_objects(sys, &self.base, node_budget) {
            let ry = self.right.apply_object(&y);
            let m1 = self.unit.component_at(&ry);
            let m2 = self.right.apply_morphism(&self.counit.component_at(&y));
            match m2.compose(&m1) {
                Ok(c) if c == NormedMorphism::identity(&ry) => {}
                _ => return false,
            }
        }
        true
    }
}

/// The outcome of building the base-change mate of the projection
/// adjunctions along `K ≤ H` and comparing it with the predicted identity
/// index maps.
#[derive(Debug)]
pub struct MateReport {
    pub checked_objects: usize,
    pub invertible: bool,
    pub matches_predicted: bool,
    pub basepoint_is_identity_map: bool,
    pub identity_when_equal: bool,
}

impl MateReport {
    pub fn holds(&self) -> bool {
        self.invertible
            && self.matches_predicted
            && self.basepoint_is_identity_map
            && self.identity_when_equal
    }
}

/// Build the mate `G(v) ∘ R' → R ∘ G(w)` of the projection adjunctions of
/// `T` over `H` and `res_K T` over `K`, evaluate it on every object of
/// `G(G/K)` within the node budget, and compare against the transported
/// identity-index prediction.
pub fn beck_chevalley_mate(
    sys: &IndexingSystem,
    k: &Subgroup,
    h: &Subgroup,
    t: &FiniteGSet,
    node_budget: usize,
) -> Result<MateReport> {
    if !k.is_contained_in(h) {
        return Err(Error::NotContained(k.id(), h.id()));
    }
    let res_t = t.restrict(k)?;
    let adj_h = projection_adjunction(sys, h, t)?;
    let adj_k = projection_adjunction(sys, k, &res_t)?;
    let group = h.group().clone();
    let full = Subgroup::full(&group);
    let dec_k = k.coset_reps_in(&full)?;
    let dec_h = h.coset_reps_in(&full)?;
    let m = t.size();

    // v: ind_K res T → ind_H T, on the identity block the identity of T,
    // extended equivariantly.
    let v_map: Vec<usize> = adj_k
        .induced
        .points()
        .map(|p| {
            let (j, x) = (p / m.max(1), p % m.max(1));
            adj_h.induced.apply(dec_k.reps()[j], x)
        })
        .collect();
    let v_data = EquivariantFunctorData::from_map(&adj_k.induced, &adj_h.induced, &v_map)?;

    // w: G/K → G/H, the projection of cosets.
    let w_map: Vec<usize> = dec_k
        .reps()
        .iter()
        .map(|&r| dec_h.coset_of(r).expect("every element lies in some coset"))
        .collect();
    let w_data = EquivariantFunctorData::from_map(&adj_k.base, &adj_h.base, &w_map)?;

    // The square of relabeling functors commutes on the nose.
    let down_right = v_data.then(&adj_h.left)?;
    let right_down = adj_k.left.then(&w_data)?;
    if down_right != right_down {
        return Err(Error::Malformed(
            "the base-change square of projections does not commute".into(),
        ));
    }

    let f1 = adj_k.right.then(&v_data)?;
    let f2 = w_data.then(&adj_h.right)?;

    // Predicted transformation: the identity index map at the identity
    // coset, transported along coset representatives.
    let base_pred = NormedMorphism::new(
        f1.assigned(0).clone(),
        f2.assigned(0).clone(),
        (0..m).collect(),
    )?;
    let pred_comp: Vec<NormedMorphism> = dec_k.reps().iter().map(|&r| base_pred.act(r)).collect();
    let predicted = NatTrans::new(f1.clone(), f2.clone(), pred_comp)?;

    let mate_at = |y: &NormedObject| -> Result<NormedMorphism> {
        let z = v_data.apply_object(&adj_k.right.apply_object(y));
        let m1 = adj_h.unit.component_at(&z);
        let m2 = adj_h
            .right
            .apply_morphism(&w_data.apply_morphism(&adj_k.counit.component_at(y)));
        m2.compose(&m1)
    };

    let mut invertible = true;
    let mut matches_predicted = true;
    let mut identity_when_equal = true;
    let objects = enumerate_objects(sys, &adj_k.base, node_budget);
    for y in &objects {
        let mate = mate_at(y)?;
        invertible &= mate.is_bijective();
        matches_predicted &= mate == predicted.component_at(y);
        if k == h {
            identity_when_equal &= mate == NormedMorphism::identity(&mate.source.clone());
        }
    }

    let basepoint = mate_at(&leaf_object(&adj_k.base, 0)?)?;
    let basepoint_is_identity_map = basepoint.alpha == (0..m).collect::<Vec<_>>()
        && basepoint.source == *f1.assigned(0)
        && basepoint.target == *f2.assigned(0);

    Ok(MateReport {
        checked_objects: objects.len(),
        invertible,
        matches_predicted,
        basepoint_is_identity_map,
        identity_when_equal,
    })
}

/// The equivalence between `G(A) × G(B)` and `G(A ⊔ B)`.
pub struct SumEquivalence {
    pub left: FiniteGSet,
    pub right: FiniteGSet,
    pub sum: FiniteGSet,
    /// Data of the functor `G(A⊔B) → G(A)`: inclusion on A, the unit on B.
    pub psi_left: EquivariantFunctorData,
    /// Data of the functor `G(A⊔B) → G(B)`: the unit on A, inclusion on B.
    pub psi_right: EquivariantFunctorData,
}

pub fn sum_equivalence(a: &FiniteGSet, b: &FiniteGSet) -> Result<SumEquivalence> {
    let sum = a.disjoint_union(b)?;
    let n = a.size();
    let psi_left = EquivariantFunctorData::new(
        sum.clone(),
        a.clone(),
        sum.points()
            .map(|c| {
                if c < n {
                    leaf_object(a, c)
                } else {
                    Ok(unit_object(a))
                }
            })
            .collect::<Result<Vec<_>>>()?,
    )?;
    let psi_right = EquivariantFunctorData::new(
        sum.clone(),
        b.clone(),
        sum.points()
            .map(|c| {
                if c < n {
                    Ok(unit_object(b))
                } else {
                    leaf_object(b, c - n)
                }
            })
            .collect::<Result<Vec<_>>>()?,
    )?;
    Ok(SumEquivalence {
        left: a.clone(),
        right: b.clone(),
        sum,
        psi_left,
        psi_right,
    })
}

impl SumEquivalence {
    pub fn include_left(&self, x: &NormedObject) -> NormedObject {
        assert_eq!(x.over, self.left);
        NormedObject {
            over: self.sum.clone(),
            tree: x.tree.clone(),
            labels: x.labels.clone(),
        }
    }

    pub fn include_right(&self, y: &NormedObject) -> NormedObject {
        assert_eq!(y.over, self.right);
        let n = self.left.size();
        NormedObject {
            over: self.sum.clone(),
            tree: y.tree.clone(),
            labels: y.labels.iter().map(|&b| b + n).collect(),
        }
    }

    /// `Φ(x, y) = incl(x) ⊗ incl(y)` over the disjoint union.
    pub fn phi(&self, x: &NormedObject, y: &NormedObject) -> NormedObject {
        tensor(&self.include_left(x), &self.include_right(y))
    }

    pub fn phi_morphism(&self, f: &NormedMorphism, g: &NormedMorphism) -> NormedMorphism {
        let fi = NormedMorphism {
            source: self.include_left(&f.source),
            target: self.include_left(&f.target),
            alpha: f.alpha.clone(),
        };
        let gi = NormedMorphism {
            source: self.include_right(&g.source),
            target: self.include_right(&g.target),
            alpha: g.alpha.clone(),
        };
        tensor_morphism(&fi, &gi)
    }

    pub fn psi(&self, x: &NormedObject) -> (NormedObject, NormedObject) {
        (
            self.psi_left.apply_object(x),
            self.psi_right.apply_object(x),
        )
    }

    /// The component `Φ(Ψ(x)) → x`: the A-labeled positions in order,
    /// then the B-labeled positions, each sent home.
    pub fn eta(&self, x: &NormedObject) -> NormedMorphism {
        let (xa, xb) = self.psi(x);
        let src = self.phi(&xa, &xb);
        let n = self.left.size();
        let mut alpha: Vec<usize> = x
            .labels
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c < n)
            .map(|(i, _)| i)
            .collect();
        alpha.extend(
            x.labels
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c >= n)
                .map(|(i, _)| i),
        );
        NormedMorphism::new(src, x.clone(), alpha)
            .expect("the unshuffle of labels is label-compatible")
    }

    /// The components `Ψ(Φ(x, y)) → (x, y)`: identity index maps.
    pub fn epsilon(
        &self,
        x: &NormedObject,
        y: &NormedObject,
    ) -> Result<(NormedMorphism, NormedMorphism)> {
        let p = self.phi(x, y);
        let ea = NormedMorphism::new(
            self.psi_left.apply_object(&p),
            x.clone(),
            (0..x.length()).collect(),
        )?;
        let eb = NormedMorphism::new(
            self.psi_right.apply_object(&p),
            y.clone(),
            (0..y.length()).collect(),
        )?;
        Ok((ea, eb))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, enumerate_subgroups, symmetric};
    use crate::indexing::enumerate_all;
    use crate::perm::Perm;

    fn regular_set(g: &Arc<FiniteGroup>) -> FiniteGSet {
        FiniteGSet::coset_space(&Subgroup::full(g), &Subgroup::trivial(g)).unwrap()
    }

    fn subgroup_of_size(g: &Arc<FiniteGroup>, n: usize) -> Subgroup {
        enumerate_subgroups(g)
            .into_iter()
            .find(|s| s.size() == n)
            .unwrap()
    }

    #[test]
    fn action_laws_and_the_fixed_norm_object() {
        let g = cyclic(2);
        let sys = IndexingSystem::complete(&g);
        let full = Subgroup::full(&g);
        let a = regular_set(&g);
        let t = FiniteGSet::coset_space(&full, &Subgroup::trivial(&g)).unwrap();
        let x = external_norm(
            &sys,
            &t,
            &a,
            &[
                leaf_object(&a, 0).unwrap(),
                leaf_object(&a, a.apply(1, 0)).unwrap(),
            ],
        )
        .unwrap();
        assert!(x.is_fixed_under(&full));
        assert!(!leaf_object(&a, 0).unwrap().is_fixed_under(&full));

        let g4 = cyclic(4);
        let sys4 = IndexingSystem::complete(&g4);
        let a4 = FiniteGSet::coset_space(&Subgroup::full(&g4), &subgroup_of_size(&g4, 2)).unwrap();
        let objects = enumerate_objects(&sys4, &a4, 2);
        assert!(!objects.is_empty());
        for x in &objects {
            assert_eq!(x.act(g4.id()), *x);
            for gp in 0..4 {
                for ge in 0..4 {
                    assert_eq!(x.act(gp).act(ge), x.act(g4.mul(ge, gp)));
                }
            }
        }
    }

    #[test]
    fn morphism_action_respects_composition() {
        let g = cyclic(4);
        let sys = IndexingSystem::complete(&g);
        let a = FiniteGSet::coset_space(&Subgroup::full(&g), &subgroup_of_size(&g, 2)).unwrap();
        let objects: Vec<NormedObject> = enumerate_objects(&sys, &a, 2)
            .into_iter()
            .filter(|x| x.length() <= 2)
            .take(10)
            .collect();
        for x in &objects {
            for y in &objects {
                for m1 in hom_set(x, y).into_iter().take(3) {
                    for ge in 0..4 {
                        let acted = m1.act(ge);
                        assert_eq!(acted.source, x.act(ge));
                        assert_eq!(acted.target, y.act(ge));
                    }
                    for z in objects.iter().take(4) {
                        for m2 in hom_set(y, z).into_iter().take(2) {
                            let comp = m2.compose(&m1).unwrap();
                            for ge in 0..4 {
                                assert_eq!(
                                    comp.act(ge),
                                    m2.act(ge).compose(&m1.act(ge)).unwrap()
                                );
                            }
                        }
                    }
                }
            }
            let id = NormedMorphism::identity(x);
            for ge in 0..4 {
                assert_eq!(id.act(ge), NormedMorphism::identity(&x.act(ge)));
            }
        }
    }

    #[test]
    fn structural_isomorphisms_satisfy_coherence() {
        let g = cyclic(2);
        let sys = IndexingSystem::complete(&g);
        let full = Subgroup::full(&g);
        let a = regular_set(&g);
        let t = FiniteGSet::coset_space(&full, &Subgroup::trivial(&g)).unwrap();
        let l0 = leaf_object(&a, 0).unwrap();
        let l1 = leaf_object(&a, 1).unwrap();
        let nm = external_norm(&sys, &t, &a, &[l0.clone(), l1.clone()]).unwrap();
        let samples = [l0.clone(), l1.clone(), nm, tensor(&l0, &l1)];

        for x in &samples {
            let idx: Vec<usize> = (0..x.length()).collect();
            assert_eq!(left_unitor(x).alpha, idx);
            assert_eq!(right_unitor(x).alpha, idx);
            for y in &samples {
                let there = braiding(x, y);
                let back = braiding(y, x);
                let round = back.compose(&there).unwrap();
                assert_eq!(round, NormedMorphism::identity(&tensor(x, y)));
            }
        }

        // pentagon: both associator routes from ((w x) y) z to w (x (y z))
        for w in &samples {
            for x in &samples {
                for y in &samples {
                    for z in &samples {
                        let route1 = associator(w, x, &tensor(y, z))
                            .compose(&associator(&tensor(w, x), y, z))
                            .unwrap();
                        let route2 = tensor_morphism(
                            &NormedMorphism::identity(w),
                            &associator(x, y, z),
                        )
                        .compose(
                            &associator(w, &tensor(x, y), z)
                                .compose(&tensor_morphism(
                                    &associator(w, x, y),
                                    &NormedMorphism::identity(z),
                                ))
                                .unwrap(),
                        )
                        .unwrap();
                        assert_eq!(route1, route2);
                    }
                }
            }
        }

        // hexagon: braiding past a tensor in two ways
        for x in &samples {
            for y in &samples {
                for z in &samples {
                    let route1 = associator(y, z, x)
                        .compose(
                            &braiding(x, &tensor(y, z))
                                .compose(&associator(x, y, z))
                                .unwrap(),
                        )
                        .unwrap();
                    let route2 = tensor_morphism(
                        &NormedMorphism::identity(y),
                        &braiding(x, z),
                    )
                    .compose(
                        &associator(y, x, z)
                            .compose(&tensor_morphism(
                                &braiding(x, y),
                                &NormedMorphism::identity(z),
                            ))
                            .unwrap(),
                    )
                    .unwrap();
                    assert_eq!(route1, route2);
                }
            }
        }

        // unit coherence
        for x in &samples {
            for y in &samples {
                let via_unitors = tensor_morphism(&right_unitor(x), &NormedMorphism::identity(y));
                let via_assoc = tensor_morphism(&NormedMorphism::identity(x), &left_unitor(y))
                    .compose(&associator(x, &unit_object(&a), y))
                    .unwrap();
                assert_eq!(via_unitors, via_assoc);
            }
        }
    }

    #[test]
    fn untwistor_square_commutes() {
        let g = cyclic(4);
        let sys = IndexingSystem::complete(&g);
        let h = subgroup_of_size(&g, 2);
        let t = FiniteGSet::coset_space(&h, &Subgroup::trivial(&g)).unwrap();
        let a = FiniteGSet::coset_space(&Subgroup::full(&g), &h).unwrap();
        let objects: Vec<NormedObject> = enumerate_objects(&sys, &a, 2)
            .into_iter()
            .take(8)
            .collect();
        for x1 in &objects {
            for x2 in &objects {
                let xs = [x1.clone(), x2.clone()];
                for &e in h.elements() {
                    let sigma = t.act_of(e).clone();
                    let sigma_inv = sigma.inverse();
                    let acted: Vec<NormedObject> = xs.iter().map(|x| x.act(e)).collect();
                    let permuted: Vec<NormedObject> = (0..xs.len())
                        .map(|i| xs[sigma_inv.apply(i)].act(e))
                        .collect();

                    let src = external_norm(&sys, &t, &a, &xs).unwrap();
                    assert_eq!(src.act(e), external_norm(&sys, &t, &a, &permuted).unwrap());
                    let nf = nfold_tensor(&a, &xs);
                    assert_eq!(nf.act(e), nfold_tensor(&a, &acted));

                    let sizes: Vec<usize> = permuted.iter().map(|x| x.length()).collect();
                    let block = Perm::block(&sigma_inv, &sizes);
                    let blockm = NormedMorphism::new(
                        nfold_tensor(&a, &permuted),
                        nfold_tensor(&a, &acted),
                        block.images().to_vec(),
                    )
                    .unwrap();
                    let path_a = blockm
                        .compose(&untwistor(&sys, &t, &a, &permuted).unwrap())
                        .unwrap();
                    let path_b = untwistor(&sys, &t, &a, &xs).unwrap().act(e);
                    assert_eq!(path_a, path_b);
                }
            }
        }
    }

    #[test]
    fn hom_sets_count_label_compatible_maps() {
        let g = cyclic(2);
        let sys = IndexingSystem::complete(&g);
        let full = Subgroup::full(&g);
        let a = regular_set(&g);
        let t = FiniteGSet::coset_space(&full, &Subgroup::trivial(&g)).unwrap();
        let x = leaf_object(&a, 0).unwrap();
        let l0 = leaf_object(&a, 0).unwrap();
        let y = external_norm(&sys, &t, &a, &[l0.clone(), l0.clone()]).unwrap();
        assert_eq!(hom_set(&x, &y).len(), t.size());
        assert_eq!(hom_set(&y, &y).len(), 4);
        let core = core_hom_set(&y, &y);
        assert_eq!(core.len(), 2);
        assert!(core.contains(&NormedMorphism::identity(&y)));
        let z = leaf_object(&a, 1).unwrap();
        assert!(hom_set(&x, &z).is_empty());
    }

    #[test]
    fn object_enumeration_counts_trees_times_labels() {
        let g = cyclic(2);
        let sys = IndexingSystem::complete(&g);
        let a = regular_set(&g);
        let trees = enumerate_trees(&sys, 2);
        let objects = enumerate_objects(&sys, &a, 2);
        let expected: usize = trees.iter().map(|t| a.size().pow(t.length() as u32)).sum();
        assert_eq!(objects.len(), expected);
        for n in 0..3 {
            let tree_count = trees.iter().filter(|t| t.length() == n).count();
            let object_count = objects.iter().filter(|x| x.length() == n).count();
            assert_eq!(object_count, tree_count * a.size().pow(n as u32));
        }
        for (i, x) in objects.iter().enumerate() {
            for y in &objects[i + 1..] {
                assert!(x != y);
            }
        }
    }

    #[test]
    fn unfurled_functors_are_strict_equivariant_and_compose() {
        let g = cyclic(4);
        let sys = IndexingSystem::complete(&g);
        let h = subgroup_of_size(&g, 2);
        let t = FiniteGSet::coset_space(&h, &Subgroup::trivial(&g)).unwrap();
        let adj = projection_adjunction(&sys, &h, &t).unwrap();
        let phi = &adj.right;
        let base_objects: Vec<NormedObject> = enumerate_objects(&sys, &adj.base, 2)
            .into_iter()
            .take(12)
            .collect();

        let ident = EquivariantFunctorData::identity_data(&adj.base).unwrap();
        for x in &base_objects {
            assert_eq!(ident.apply_object(x), *x);
            for ge in 0..4 {
                assert_eq!(phi.apply_object(&x.act(ge)), phi.apply_object(x).act(ge));
            }
            for y in &base_objects {
                assert_eq!(
                    phi.apply_object(&tensor(x, y)),
                    tensor(&phi.apply_object(x), &phi.apply_object(y))
                );
                for m in hom_set(x, y).into_iter().take(3) {
                    assert_eq!(ident.apply_morphism(&m), m);
                    assert_eq!(
                        phi.apply_morphism(&NormedMorphism::identity(x)),
                        NormedMorphism::identity(&phi.apply_object(x))
                    );
                    for ge in 0..4 {
                        assert_eq!(phi.apply_morphism(&m.act(ge)), phi.apply_morphism(&m).act(ge));
                    }
                    for z in base_objects.iter().take(4) {
                        for m2 in hom_set(y, z).into_iter().take(2) {
                            let comp = m2.compose(&m).unwrap();
                            assert_eq!(
                                phi.apply_morphism(&comp),
                                phi.apply_morphism(&m2)
                                    .compose(&phi.apply_morphism(&m))
                                    .unwrap()
                            );
                        }
                    }
                }
            }
        }

        // strictness on norms
        let fixed_pair: Vec<NormedObject> = base_objects
            .iter()
            .filter(|x| x.is_fixed_under(&h))
            .take(2)
            .cloned()
            .collect();
        if fixed_pair.len() == 2 {
            let normed = external_norm(&sys, &t, &adj.base, &fixed_pair).unwrap();
            let images: Vec<NormedObject> =
                fixed_pair.iter().map(|x| phi.apply_object(x)).collect();
            assert_eq!(
                phi.apply_object(&normed),
                external_norm(&sys, &t, &adj.induced, &images).unwrap()
            );
        }

        // composing the generating data matches composing the functors
        let composite = phi.then(&adj.left).unwrap();
        for x in &base_objects {
            assert_eq!(
                composite.apply_object(x),
                adj.left.apply_object(&phi.apply_object(x))
            );
            for y in base_objects.iter().take(5) {
                for m in hom_set(x, y).into_iter().take(2) {
                    assert_eq!(
                        composite.apply_morphism(&m),
                        adj.left.apply_morphism(&phi.apply_morphism(&m))
                    );
                }
            }
        }
    }

    #[test]
    fn block_map_example() {
        let g = cyclic(2);
        let a = regular_set(&g);
        let base = tensor(
            &leaf_object(&a, 0).unwrap(),
            &tensor(&leaf_object(&a, 0).unwrap(), &leaf_object(&a, 1).unwrap()),
        );
        let phi = EquivariantFunctorData::new(
            a.clone(),
            a.clone(),
            vec![base.clone(), base.act(1)],
        )
        .unwrap();
        let x = leaf_object(&a, 0).unwrap();
        let y = tensor(&leaf_object(&a, 0).unwrap(), &leaf_object(&a, 0).unwrap());
        let f = NormedMorphism::new(x, y, vec![1]).unwrap();
        let image = phi.apply_morphism(&f);
        assert_eq!(image.source.length(), 3);
        assert_eq!(image.target.length(), 6);
        assert_eq!(image.alpha, vec![3, 4, 5]);
    }

    #[test]
    fn nat_trans_components_are_natural() {
        let g = cyclic(4);
        let sys = IndexingSystem::complete(&g);
        let h = subgroup_of_size(&g, 2);
        let t = FiniteGSet::coset_space(&h, &Subgroup::trivial(&g)).unwrap();
        let adj = projection_adjunction(&sys, &h, &t).unwrap();

        let ind_objects: Vec<NormedObject> = enumerate_objects(&sys, &adj.induced, 2)
            .into_iter()
            .filter(|x| x.length() <= 2)
            .take(10)
            .collect();
        for x in &ind_objects {
            for y in &ind_objects {
                for m in hom_set(x, y).into_iter().take(3) {
                    let lhs = adj
                        .unit
                        .component_at(y)
                        .compose(&adj.unit.from.apply_morphism(&m))
                        .unwrap();
                    let rhs = adj
                        .unit
                        .to
                        .apply_morphism(&m)
                        .compose(&adj.unit.component_at(x))
                        .unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }

        let base_objects: Vec<NormedObject> = enumerate_objects(&sys, &adj.base, 2)
            .into_iter()
            .take(10)
            .collect();
        for x in &base_objects {
            for y in &base_objects {
                for m in hom_set(x, y).into_iter().take(3) {
                    let lhs = adj
                        .counit
                        .component_at(y)
                        .compose(&adj.counit.from.apply_morphism(&m))
                        .unwrap();
                    let rhs = adj
                        .counit
                        .to
                        .apply_morphism(&m)
                        .compose(&adj.counit.component_at(x))
                        .unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn fixed_subcategory_matches_slice_category() {
        let g2 = cyclic(2);
        let sys2 = IndexingSystem::complete(&g2);
        let a2 = regular_set(&g2);
        let full2 = Subgroup::full(&g2);
        let report = fixed_slice_comparison(&sys2, &a2, &full2, 2).unwrap();
        assert!(report.holds(), "C2 regular comparison: {:?}", report);
        assert_eq!(report.slice_object_count, 3);
        assert_eq!(report.slice_class_count, 2);

        let g4 = cyclic(4);
        let a4 = FiniteGSet::coset_space(&Subgroup::full(&g4), &subgroup_of_size(&g4, 2)).unwrap();
        for sys in enumerate_all(&g4).unwrap() {
            let report = fixed_slice_comparison(&sys, &a4, &Subgroup::full(&g4), 2).unwrap();
            assert!(report.holds(), "C4 comparison: {:?}", report);
        }
        let h = subgroup_of_size(&g4, 2);
        let sys4 = IndexingSystem::complete(&g4);
        let report = fixed_slice_comparison(&sys4, &a4, &h, 2).unwrap();
        assert!(report.holds(), "C4 at C2 comparison: {:?}", report);
    }

    #[test]
    fn projection_adjunction_units_counits_and_triangles() {
        let g = cyclic(4);
        let sys = IndexingSystem::complete(&g);
        let h = subgroup_of_size(&g, 2);

        // one-point norm: unit and counit are identity index maps
        let pt = FiniteGSet::coset_space(&h, &h).unwrap();
        let adj_pt = projection_adjunction(&sys, &h, &pt).unwrap();
        for m in &adj_pt.unit.comp {
            assert_eq!(m.alpha, vec![0]);
        }
        for m in &adj_pt.counit.comp {
            assert_eq!(m.alpha, vec![0]);
        }

        // the fold counit over the regular two-point set
        let g2 = cyclic(2);
        let sys2 = IndexingSystem::complete(&g2);
        let full2 = Subgroup::full(&g2);
        let t2 = FiniteGSet::coset_space(&full2, &Subgroup::trivial(&g2)).unwrap();
        let adj2 = projection_adjunction(&sys2, &full2, &t2).unwrap();
        assert_eq!(adj2.counit.comp[0].alpha, vec![0, 0]);
        assert!(adj2.triangle_identities_hold(&sys2, 2));

        let t = FiniteGSet::coset_space(&h, &Subgroup::trivial(&g)).unwrap();
        let adj = projection_adjunction(&sys, &h, &t).unwrap();
        assert!(adj.triangle_identities_hold(&sys, 2));

        // inadmissible norms are rejected
        let minimal = IndexingSystem::minimal(&g);
        assert!(projection_adjunction(&minimal, &h, &t).is_err());
    }

    #[test]
    fn beck_chevalley_mates_are_invertible_identities() {
        let g = cyclic(4);
        let sys = IndexingSystem::complete(&g);
        let full = Subgroup::full(&g);
        let c2 = subgroup_of_size(&g, 2);
        let t = FiniteGSet::coset_space(&full, &c2).unwrap();
        let report = beck_chevalley_mate(&sys, &c2, &full, &t, 2).unwrap();
        assert!(report.holds(), "C4 mate: {:?}", report);
        assert!(report.checked_objects > 0);

        let t_h = FiniteGSet::coset_space(&c2, &Subgroup::trivial(&g)).unwrap();
        let report = beck_chevalley_mate(&sys, &c2, &c2, &t_h, 2).unwrap();
        assert!(report.holds(), "equal-subgroup mate: {:?}", report);

        let s3 = symmetric(3);
        let sys3 = IndexingSystem::complete(&s3);
        let full3 = Subgroup::full(&s3);
        let k3 = subgroup_of_size(&s3, 2);
        let c3 = subgroup_of_size(&s3, 3);
        let t3 = FiniteGSet::coset_space(&full3, &c3).unwrap();
        let report = beck_chevalley_mate(&sys3, &k3, &full3, &t3, 1).unwrap();
        assert!(report.holds(), "S3 mate: {:?}", report);
    }

    #[test]
    fn sum_equivalence_eta_epsilon_natural() {
        let g = cyclic(2);
        let sys = IndexingSystem::complete(&g);
        let a = regular_set(&g);
        let b = regular_set(&g);
        let se = sum_equivalence(&a, &b).unwrap();

        // eta at an A-labeled leaf is the right-unitor shape
        let x = leaf_object(&se.sum, 0).unwrap();
        let eta = se.eta(&x);
        assert_eq!(eta.alpha, vec![0]);
        assert_eq!(
            eta.source,
            tensor(
                &se.include_left(&leaf_object(&a, 0).unwrap()),
                &se.include_right(&unit_object(&b)),
            )
        );

        let sum_objects: Vec<NormedObject> = enumerate_objects(&sys, &se.sum, 2)
            .into_iter()
            .take(25)
            .collect();
        for x in &sum_objects {
            let eta = se.eta(x);
            assert!(eta.is_bijective());
            for y in sum_objects.iter().take(12) {
                for m in hom_set(x, y).into_iter().take(3) {
                    let fa = se.psi_left.apply_morphism(&m);
                    let fb = se.psi_right.apply_morphism(&m);
                    let lhs = se.eta(y).compose(&se.phi_morphism(&fa, &fb)).unwrap();
                    let rhs = m.compose(&se.eta(x)).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }

        let a_objects: Vec<NormedObject> = enumerate_objects(&sys, &a, 2)
            .into_iter()
            .take(8)
            .collect();
        for x in &a_objects {
            for y in a_objects.iter().take(6) {
                let (ea, eb) = se.epsilon(x, y).unwrap();
                assert!(ea.is_bijective() && eb.is_bijective());
                for x2 in a_objects.iter().take(4) {
                    for y2 in a_objects.iter().take(4) {
                        for f in hom_set(x, x2).into_iter().take(2) {
                            for gm in hom_set(y, y2).into_iter().take(2) {
                                let (ea2, eb2) = se.epsilon(x2, y2).unwrap();
                                let big = se.phi_morphism(&f, &gm);
                                let lhs_a = ea2
                                    .compose(&se.psi_left.apply_morphism(&big))
                                    .unwrap();
                                let rhs_a = f.compose(&ea).unwrap();
                                assert_eq!(lhs_a, rhs_a);
                                let lhs_b = eb2
                                    .compose(&se.psi_right.apply_morphism(&big))
                                    .unwrap();
                                let rhs_b = gm.compose(&eb).unwrap();
                                assert_eq!(lhs_b, rhs_b);
                            }
                        }
                    }
                }
            }
        }

        // empty second summand: psi_left is literally the identity data
        let empty = FiniteGSet::empty(Subgroup::full(&g));
        let se0 = sum_equivalence(&a, &empty).unwrap();
        assert_eq!(
            se0.psi_left,
            EquivariantFunctorData::identity_data(&a).unwrap()
        );
        for x in enumerate_objects(&sys, &se0.sum, 2).into_iter().take(10) {
            assert!(se0.eta(&x).is_bijective());
        }
    }
}
