//! Generators for nested quadruple systems.

mod boolean;
mod doubling;
mod factorization;
mod rotational;

pub use boolean::{
    block_classes, block_classes_with, boolean_sqs, boolean_to_rotational, nest_from_class_reps,
    rotational_boolean_sqs, BlockClass, BooleanClasses, BooleanRelabel,
};
pub use doubling::{doubled_point, doubling_a, doubling_b};
pub use factorization::{one_factorization, OneFactorization};
pub use rotational::{rotational_expand, RotationalSpec};
