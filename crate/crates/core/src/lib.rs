//! Nested Steiner quadruple systems: constructions, censuses, bounds,
//! classification and split search.

pub mod analysis;
pub mod catalog;
pub mod construct;
pub mod design;
pub mod error;
pub mod field;
pub mod format;
pub mod search;

pub use analysis::{
    bounds_profile, classify, classify_census, cyclotomic_cosets, difference_census, feasibility_row,
    feasibility_table, quasi_uniform_collapse_check, validate_bounds, validate_census, BoundViolation,
    BoundsProfile, Classification, CosetSet, DifferenceCensus, FeasibilityRow, HalfPartition, NestingKind,
};
pub use catalog::{catalog, catalog_get, CatalogEntry};
pub use construct::{
    block_classes, boolean_sqs, doubling_a, doubling_b, nest_from_class_reps, one_factorization,
    rotational_expand, BooleanClasses, OneFactorization, RotationalSpec,
};
pub use design::{
    alternative_splits, pair_census, verify_steiner, NestedBlock, NestedDesign, Pair, PairCensus, Point,
    Quad, VerificationReport,
};
pub use error::{Error, Result};
pub use field::Gf2nField;
pub use format::{parse_design, parse_rotational_spec, serialize_design, serialize_rotational_spec};
pub use search::{
    local_balance, search_nesting, search_rotational, Limits, SearchOutcome, SearchSpec, SearchStatus,
    SupportConstraint, Target,
};
