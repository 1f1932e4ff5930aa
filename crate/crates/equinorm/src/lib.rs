//! Finite equivariant combinatorics, made executable: indexing systems on a
//! finite group, the free operad of formal external norms, free normed
//! symmetric monoidal categories, and the incomplete span category, together
//! with the comparison maps between them.
//!
//! Everything is exhaustive and exact over explicitly finite data: groups
//! are multiplication tables, actions are permutation tables, and each
//! structural identity asserted by the library is also checked by
//! enumeration in the test suites.

pub mod error;
pub mod group;
pub mod gset;
pub mod indexing;
pub mod json;
pub mod normed;
pub mod operad;
pub mod perm;
pub mod spans;
pub mod suite;

pub use error::{Error, Result};
pub use group::{
    builtin_group, builtin_groups, conjugate_subgroup, cyclic, dihedral, double_cosets,
    enumerate_subgroups, from_permutation_gens, product, quaternion, subgroup_by_id, symmetric,
    trivial_group, CosetDecomposition, FiniteGroup, ProductGroup, Subgroup,
};
pub use gset::{
    conjugacy_class_id_in, equivariant_maps, iso_test, nerve_quotient_check, pullback,
    EquivariantMap, FiniteGSet, NerveCheckResult, Orbit, OrbitDecomposition, Pullback,
};
pub use indexing::{
    enumerate_all, enumerate_all_guarded, AxiomOracle, IndexingSystem, DEFAULT_PAIR_GUARD,
};
pub use json::{
    parse_group, to_canonical_json, GSetDto, GroupDto, MapDto, MonoidDto, NormNodeDto,
    NormTreeDto, NormedObjectDto, PermGenDto, SpanDto, TransferRelationDto,
};
pub use normed::{
    associator, beck_chevalley_mate, braiding, core_hom_set, enumerate_objects, external_norm,
    fixed_slice_comparison, fixed_subcategory, hom_set, leaf_object, left_unitor, nfold_tensor,
    norm_morphism, projection_adjunction, right_unitor, slice_category, slice_witness,
    sum_equivalence, tensor, tensor_morphism, unit_object, untwistor, EquivariantFunctorData,
    FixedSliceReport, FixedSubcategory, MateReport, NatTrans, NormedMorphism, NormedObject,
    ProjectionAdjunction, SliceCategory, SliceObject, SumEquivalence,
};
pub use operad::{
    admissible_hset_classes, compose_sym, enumerate_trees, fixed_operations, generator_sym,
    graph_subgroup_of, has_fixed_operation, verify_operad_identities, EndOp, EndOperad,
    FiniteOperad, FreeExtension, GraphSubgroup, NormTree, OperadVerifySummary, SymOperad,
    SymOperation,
};
pub use perm::Perm;
pub use spans::{
    canonical_form, compose_spans, hom_groupoid, mackey_eval, monoid_valued_functions,
    normalize_to_projection, restriction_span, semi_additivity_check, span_aut_order,
    span_isomorphisms, split_span, theta, theta_fixed_comparison, theta_iso, transfer_span,
    CommutativeGMonoid, HomGroupoid, SpanIsoClass, SpanMorphism, ThetaReport,
};
pub use suite::{all_passed, run_all, SuiteOutcome};
