//! JSON schemas for every value the command line reads or writes: groups,
//! G-sets, equivariant maps, transfer relations, norm trees, normed
//! objects, spans, and action monoids.  Encoding is canonical: struct
//! fields serialize in declaration order and keyed tables use sorted maps,
//! so equal values produce identical bytes.  Every decoder re-validates
//! through the library constructors, so malformed files fail with the same
//! errors as malformed in-memory data.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{from_permutation_gens, subgroup_by_id, FiniteGroup, Subgroup};
use crate::gset::{EquivariantMap, FiniteGSet};
use crate::indexing::IndexingSystem;
use crate::normed::NormedObject;
use crate::operad::NormTree;
use crate::perm::Perm;
use crate::spans::{CommutativeGMonoid, SpanMorphism};

fn bad(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

/// A finite group as its multiplication table, row per left factor.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupDto {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl GroupDto {
    pub fn from_group(g: &FiniteGroup) -> Self {
        let n = g.order();
        GroupDto {
            order: n,
            mul: (0..n)
                .map(|a| (0..n).map(|b| g.mul(a, b)).collect())
                .collect(),
            names: Some(g.names().to_vec()),
        }
    }

    pub fn to_group(&self) -> Result<Arc<FiniteGroup>> {
        if self.mul.len() != self.order {
            return Err(bad(format!(
                "field mul: {} rows for order {}",
                self.mul.len(),
                self.order
            )));
        }
        let mut flat = Vec::with_capacity(self.order * self.order);
        for (i, row) in self.mul.iter().enumerate() {
            if row.len() != self.order {
                return Err(bad(format!(
                    "field mul: row {i} has {} entries for order {}",
                    row.len(),
                    self.order
                )));
            }
            flat.extend_from_slice(row);
        }
        FiniteGroup::new(self.order, flat, self.names.clone())
    }
}

/// A group presented by permutation generators.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PermGenDto {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
}

impl PermGenDto {
    pub fn to_group(&self) -> Result<Arc<FiniteGroup>> {
        from_permutation_gens(self.degree, &self.generators)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GroupFile {
    Table(GroupDto),
    Gens(PermGenDto),
}

/// Parse a group from JSON text, accepting either the multiplication-table
/// schema or the permutation-generator schema.
pub fn parse_group(text: &str) -> Result<Arc<FiniteGroup>> {
    let file: GroupFile =
        serde_json::from_str(text).map_err(|e| bad(format!("group file: {e}")))?;
    match file {
        GroupFile::Table(dto) => dto.to_group(),
        GroupFile::Gens(dto) => dto.to_group(),
    }
}

fn action_table(acting: &Subgroup, size: usize, apply: impl Fn(usize, usize) -> usize) -> BTreeMap<String, Vec<usize>> {
    acting
        .elements()
        .iter()
        .map(|&e| (e.to_string(), (0..size).map(|p| apply(e, p)).collect()))
        .collect()
}

fn parse_action(
    action: &BTreeMap<String, Vec<usize>>,
    acting: &Subgroup,
    size: usize,
) -> Result<Vec<Perm>> {
    if action.len() != acting.elements().len() {
        return Err(bad(format!(
            "field action: {} entries for a subgroup of {} elements",
            action.len(),
            acting.elements().len()
        )));
    }
    let mut perms = Vec::with_capacity(acting.elements().len());
    for &e in acting.elements() {
        let images = action
            .get(&e.to_string())
            .ok_or_else(|| bad(format!("field action: missing element {e}")))?;
        if images.len() != size {
            return Err(bad(format!(
                "field action: element {e} lists {} images for size {size}",
                images.len()
            )));
        }
        perms.push(Perm::new(images.clone())?);
    }
    Ok(perms)
}

/// A finite set with a group action, keyed by acting element index.  The
/// `group` field records the ambient group's order and is checked against
/// the group supplied at decode time.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GSetDto {
    pub group: usize,
    pub size: usize,
    pub action: BTreeMap<String, Vec<usize>>,
}

impl GSetDto {
    pub fn from_gset(x: &FiniteGSet) -> Self {
        GSetDto {
            group: x.group().order(),
            size: x.size(),
            action: action_table(x.acting(), x.size(), |e, p| x.apply(e, p)),
        }
    }

    /// Decode as a set with the full group acting.
    pub fn to_gset(&self, group: &Arc<FiniteGroup>) -> Result<FiniteGSet> {
        self.to_gset_acted(&Subgroup::full(group))
    }

    /// Decode as a set acted on by the given subgroup; the action table
    /// must list exactly its elements.
    pub fn to_gset_acted(&self, acting: &Subgroup) -> Result<FiniteGSet> {
        if self.group != acting.group().order() {
            return Err(bad(format!(
                "field group: order {} does not match the loaded group of order {}",
                self.group,
                acting.group().order()
            )));
        }
        let perms = parse_action(&self.action, acting, self.size)?;
        FiniteGSet::new(acting.clone(), self.size, perms)
    }
}

/// An equivariant map with both endpoint sets inline.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapDto {
    pub source: GSetDto,
    pub target: GSetDto,
    pub map: Vec<usize>,
}

impl MapDto {
    pub fn from_map(f: &EquivariantMap) -> Self {
        MapDto {
            source: GSetDto::from_gset(f.source()),
            target: GSetDto::from_gset(f.target()),
            map: f.map().to_vec(),
        }
    }

    pub fn to_map(&self, group: &Arc<FiniteGroup>) -> Result<EquivariantMap> {
        EquivariantMap::new(
            self.source.to_gset(group)?,
            self.target.to_gset(group)?,
            self.map.clone(),
        )
    }
}

/// A transfer relation: the orbit-level pairs of an indexing system, using
/// canonical subgroup ids.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransferRelationDto {
    pub group: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl TransferRelationDto {
    pub fn from_system(sys: &IndexingSystem) -> Self {
        TransferRelationDto {
            group: sys.group().order(),
            pairs: sys.pairs().iter().copied().collect(),
        }
    }

    pub fn to_system(&self, group: &Arc<FiniteGroup>) -> Result<IndexingSystem> {
        if self.group != group.order() {
            return Err(bad(format!(
                "field group: order {} does not match the loaded group of order {}",
                self.group,
                group.order()
            )));
        }
        IndexingSystem::from_pairs(group, &self.pairs)
    }
}

/// A norm tree: either the string "leaf" or a node carrying a subgroup id,
/// an H-set, a coset representative, and child trees.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NormTreeDto {
    Leaf(String),
    Node { node: NormNodeDto },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormNodeDto {
    #[serde(rename = "H")]
    pub h: usize,
    pub hset: GSetDto,
    pub rep: usize,
    pub children: Vec<NormTreeDto>,
}

impl NormTreeDto {
    pub fn from_tree(tree: &NormTree) -> Self {
        match tree {
            NormTree::Leaf => NormTreeDto::Leaf("leaf".into()),
            NormTree::Node {
                subgroup,
                hset,
                rep,
                children,
            } => NormTreeDto::Node {
                node: NormNodeDto {
                    h: subgroup.id(),
                    hset: GSetDto::from_gset(hset),
                    rep: *rep,
                    children: children.iter().map(NormTreeDto::from_tree).collect(),
                },
            },
        }
    }

    pub fn to_tree(&self, group: &Arc<FiniteGroup>) -> Result<NormTree> {
        match self {
            NormTreeDto::Leaf(tag) if tag == "leaf" => Ok(NormTree::Leaf),
            NormTreeDto::Leaf(tag) => Err(bad(format!("unknown tree tag {tag:?}"))),
            NormTreeDto::Node { node } => {
                let subgroup = subgroup_by_id(group, node.h)
                    .ok_or_else(|| bad(format!("field H: no subgroup with id {}", node.h)))?;
                let hset = node.hset.to_gset_acted(&subgroup)?;
                let children = node
                    .children
                    .iter()
                    .map(|c| c.to_tree(group))
                    .collect::<Result<Vec<_>>>()?;
                Ok(NormTree::Node {
                    subgroup,
                    hset,
                    rep: node.rep,
                    children,
                })
            }
        }
    }
}

/// A normed object: a tree plus its leaf labels.  The labeled set is
/// supplied at decode time.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormedObjectDto {
    pub tree: NormTreeDto,
    pub labels: Vec<usize>,
}

impl NormedObjectDto {
    pub fn from_object(x: &NormedObject) -> Self {
        NormedObjectDto {
            tree: NormTreeDto::from_tree(&x.tree),
            labels: x.labels.clone(),
        }
    }

    pub fn to_object(&self, over: &FiniteGSet) -> Result<NormedObject> {
        NormedObject::new(
            over.clone(),
            self.tree.to_tree(over.group())?,
            self.labels.clone(),
        )
    }
}

/// A span with all three sets inline and the legs as point arrays.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpanDto {
    pub source: GSetDto,
    pub target: GSetDto,
    pub apex: GSetDto,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl SpanDto {
    pub fn from_span(s: &SpanMorphism) -> Self {
        SpanDto {
            source: GSetDto::from_gset(s.source()),
            target: GSetDto::from_gset(s.target()),
            apex: GSetDto::from_gset(s.apex()),
            left: s.left().map().to_vec(),
            right: s.right().map().to_vec(),
        }
    }

    /// Decode and re-validate: the legs must be equivariant and the right
    /// leg admissible for the supplied indexing system.
    pub fn to_span(&self, sys: &IndexingSystem) -> Result<SpanMorphism> {
        let group = sys.group();
        let apex = self.apex.to_gset(group)?;
        let left = EquivariantMap::new(apex.clone(), self.source.to_gset(group)?, self.left.clone())?;
        let right = EquivariantMap::new(apex, self.target.to_gset(group)?, self.right.clone())?;
        SpanMorphism::new(sys, left, right)
    }
}

/// A commutative monoid with a group action, as a nested addition table
/// plus the action keyed by element index.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonoidDto {
    pub size: usize,
    pub add: Vec<Vec<usize>>,
    pub zero: usize,
    pub action: BTreeMap<String, Vec<usize>>,
}

impl MonoidDto {
    pub fn from_monoid(m: &CommutativeGMonoid) -> Self {
        MonoidDto {
            size: m.size(),
            add: (0..m.size())
                .map(|a| (0..m.size()).map(|b| m.sum(a, b)).collect())
                .collect(),
            zero: m.zero(),
            action: action_table(m.carrier().acting(), m.size(), |e, p| m.apply(e, p)),
        }
    }

    pub fn to_monoid(&self, group: &Arc<FiniteGroup>) -> Result<CommutativeGMonoid> {
        let acting = Subgroup::full(group);
        let perms = parse_action(&self.action, &acting, self.size)?;
        let carrier = FiniteGSet::new(acting, self.size, perms)?;
        let mut flat = Vec::with_capacity(self.size * self.size);
        for (i, row) in self.add.iter().enumerate() {
            if row.len() != self.size {
                return Err(bad(format!(
                    "field add: row {i} has {} entries for size {}",
                    row.len(),
                    self.size
                )));
            }
            flat.extend_from_slice(row);
        }
        if self.add.len() != self.size {
            return Err(bad(format!(
                "field add: {} rows for size {}",
                self.add.len(),
                self.size
            )));
        }
        CommutativeGMonoid::new(carrier, flat, self.zero)
    }
}

/// Serialize any schema value to canonical pretty JSON.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("schema types serialize without error")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, enumerate_subgroups, symmetric};
    use crate::indexing::enumerate_all;
    use crate::spans::{canonical_form, transfer_span};

    #[test]
    fn groups_round_trip_through_both_schemas() {
        let g = symmetric(3);
        let dto = GroupDto::from_group(&g);
        let text = to_canonical_json(&dto);
        let back = parse_group(&text).unwrap();
        assert_eq!(back.order(), 6);
        for a in back.elements() {
            for b in back.elements() {
                assert_eq!(back.mul(a, b), g.mul(a, b));
            }
        }
        assert_eq!(back.names(), g.names());

        let gens = PermGenDto {
            degree: 3,
            generators: vec![vec![1, 0, 2], vec![1, 2, 0]],
        };
        let viagens = parse_group(&to_canonical_json(&gens)).unwrap();
        assert_eq!(viagens.order(), 6);

        // a broken table names the offending field
        let broken = r#"{"order": 2, "mul": [[0, 1]]}"#;
        match parse_group(broken) {
            Err(Error::Malformed(msg)) => assert!(msg.contains("mul")),
            other => panic!("expected a malformed-field error, got {other:?}"),
        }
    }

    #[test]
    fn gsets_and_spans_round_trip_and_revalidate() {
        let g = cyclic(4);
        let sys = IndexingSystem::complete(&g);
        let c2 = enumerate_subgroups(&g)
            .into_iter()
            .find(|s| s.size() == 2)
            .unwrap();
        let full = Subgroup::full(&g);
        let x = FiniteGSet::coset_space(&full, &c2).unwrap();
        let dto = GSetDto::from_gset(&x);
        assert_eq!(dto.to_gset(&g).unwrap(), x);

        // the group reference is checked
        let other = cyclic(2);
        assert!(matches!(dto.to_gset(&other), Err(Error::Malformed(_))));

        let tr = transfer_span(&sys, &c2, &full).unwrap();
        let span_dto = SpanDto::from_span(&tr);
        let back = span_dto.to_span(&sys).unwrap();
        assert_eq!(canonical_form(&back), canonical_form(&tr));

        // decoding re-checks admissibility
        let minimal = IndexingSystem::minimal(&g);
        assert!(matches!(
            span_dto.to_span(&minimal),
            Err(Error::BadSpan(_))
        ));
    }

    #[test]
    fn transfer_relations_and_monoids_round_trip() {
        let g = cyclic(4);
        for sys in enumerate_all(&g).unwrap() {
            let dto = TransferRelationDto::from_system(&sys);
            let back = dto.to_system(&g).unwrap();
            assert_eq!(back.pairs(), sys.pairs());
        }

        let full = Subgroup::full(&g);
        let m = CommutativeGMonoid::integers_mod(&full, 5).unwrap();
        let dto = MonoidDto::from_monoid(&m);
        let back = dto.to_monoid(&g).unwrap();
        assert_eq!(back.size(), 5);
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(back.sum(a, b), m.sum(a, b));
            }
        }
    }

    #[test]
    fn trees_round_trip_and_serialization_is_canonical() {
        let g = cyclic(4);
        let full = Subgroup::full(&g);
        let c2 = enumerate_subgroups(&g)
            .into_iter()
            .find(|s| s.size() == 2)
            .unwrap();
        let free = FiniteGSet::coset_space(&full, &Subgroup::trivial(&g)).unwrap();
        let hset = free.restrict(&c2).unwrap();
        let tree = NormTree::Node {
            subgroup: c2.clone(),
            hset,
            rep: g.id(),
            children: vec![NormTree::Leaf; 4],
        };
        let dto = NormTreeDto::from_tree(&tree);
        let text = to_canonical_json(&dto);
        let back = dto.to_tree(&g).unwrap();
        assert_eq!(back, tree);

        // byte-for-byte reproducibility after a round trip
        assert_eq!(to_canonical_json(&NormTreeDto::from_tree(&back)), text);

        let obj = NormedObjectDto {
            tree: dto,
            labels: vec![0, 1, 2, 3],
        };
        let decoded = obj.to_object(&free).unwrap();
        assert_eq!(NormedObjectDto::from_object(&decoded).labels, obj.labels);
    }
}
