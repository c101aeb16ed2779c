//! Cones, chamber decompositions and comparisons computed from a Cox presentation.

mod cones;
mod classify;
mod git;
mod multiplicity;
mod render;
mod report;
mod sbl;

pub use cones::{effective_cone, movable_cone, nef_cone};
pub use git::{
    git_chamber, gkz_decomposition, mori_chamber_decomposition, orbit_cones, MoriChambers, ProvenanceNote,
    MAX_FACE_VARS,
};
pub use sbl::{
    sbld, sbld_from, stable_base_locus, StableBaseLocus, StableBaseLocusDecomposition, DEFAULT_K_MAX,
};
pub use classify::{
    classify_invariants, classify_pair, identity_pullback, invariants, ClassificationFlags, Invariants,
    PairClassification, Witness,
};
pub use multiplicity::{
    minor_multiplicity, minor_multiplicity_report, recursion_check, MultiplicityReport, RecursionReport,
};
pub use report::{
    decomposition_report, model_hash, ComplexEntry, ConeEntry, Cones, Counts, DecompositionReport, LocusEntry,
    MoriEntry, RegionEntry, ReportOptions, SbldEntry,
};
pub use render::{count_chamber_polygons, render_svg, RenderSpec, MAX_SIZE, MIN_SIZE};
