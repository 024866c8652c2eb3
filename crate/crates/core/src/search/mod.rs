//! Searching for splits that meet a multiplicity target.

mod balance;
mod nesting;
mod rotational;
mod spec;

pub use balance::local_balance;
pub use nesting::search_nesting;
pub use rotational::search_rotational;
pub use spec::{Limits, Refusal, SearchOutcome, SearchSpec, SearchStats, SearchStatus, SupportConstraint, Target};
pub(crate) use spec::{Budget, Resolved};
