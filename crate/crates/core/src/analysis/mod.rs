//! Closed-form bounds, classification of nestings, the feasibility table,
//! difference censuses and cyclotomic cosets.

mod bounds;
mod classify;
mod cosets;
mod difference;
mod feasibility;

pub use bounds::{
    admissible_order, bounds_profile, raises_to_quarter_square, validate_bounds, validate_census, BoundViolation,
    BoundsProfile,
};
pub use classify::{classify, classify_census, Classification, HalfPartition, NestingKind};
pub use cosets::{cyclotomic_cosets, CosetSet};
pub use difference::{block_contribution, difference_census, difference_class, DifferenceCensus, DifferenceClass};
pub use feasibility::{
    feasibility_row, feasibility_table, quasi_uniform_collapse_check, CandidateClass, ColumnEntry, FeasibilityRow,
};
