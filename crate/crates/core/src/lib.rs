//! Classification engine for group coverings, torsors under them and
//! twisted local systems over combinatorial base spaces, with finite
//! coefficient groups.
//!
//! The engine enumerates crossed morphisms and nonabelian Čech cocycles
//! exhaustively, partitions them under the appropriate coboundary actions,
//! and cross-validates every classification against an independent route:
//! semidirect-product lifts against twisted cohomology, Čech classes
//! against the edge-path group, holonomy against the torsor it was
//! extracted from, gauge groups against automorphism groups.

pub mod bundle;
pub mod cech;
pub mod cohomology;
pub mod error;
pub mod fp;
pub mod graph;
pub mod group;

pub use bundle::{
    adjoint_bundle, associated_bundle, automorphism_bundle, automorphism_composition_group,
    build_group_covering, build_torsor, bundle_isomorphisms, cover_deck_presentation, frame_bundle,
    gauge_group, global_sections, holonomy, torsor_isomorphisms, CoveringModel, DeckPresentation,
    FibreBundleModel, GaugeGroup, GroupBundleModel, TorsorModel,
};
pub use cech::{
    apply_coboundary, cech_h1, check_cocycle, coboundary_equivalent, cocycle_holonomy,
    compare_cech_group_cohomology, nerve_action, nerve_pi1, CechClassification, CechCocycle,
    CechComparison, CocycleReport, Nerve, NervePi1, Twist,
};
pub use cohomology::{
    classify_group_coverings, deck_h1_classes, enumerate_crossed, enumerate_deck_crossed,
    h1_classes, h1_via_semidirect, is_deck_crossed, mapped_coefficients, match_semidirect,
    section_to_crossed, validate_deck_action, ClassificationResult, CrossedMorphism,
    DeckClassification, PiGroup, SemidirectClassification,
};
pub use error::{check_budget, Error, Result, DEFAULT_BUDGET};
pub use fp::{
    enumerate_homs, evaluate_hom, graph_pi1, surface_presentation, Assignment, GraphPi1,
    Presentation, Word,
};
pub use graph::{Graph, SpanningTree, Step};
pub use group::{
    are_isomorphic, determinant_morphism, enumerate_automorphisms, find_isomorphism,
    general_linear, matrix_group, semidirect_product, AutomorphismGroup, DeterminantData,
    FiniteField, FiniteGroup, GroupMorphism, GroupSpec, MatrixGroup, SemidirectProduct,
};
