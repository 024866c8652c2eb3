//! Shared inputs for the benchmarks.

use nsqs_core::{catalog_get, NestedDesign, RotationalSpec};

pub fn catalog_design(name: &str) -> NestedDesign {
    catalog_get(name).and_then(|e| e.design()).expect("catalog entry expands")
}

pub fn catalog_spec(name: &str) -> RotationalSpec {
    catalog_get(name)
        .and_then(|e| e.rotational_spec())
        .expect("catalog entry loads")
        .expect("entry has a rotational spec")
}
