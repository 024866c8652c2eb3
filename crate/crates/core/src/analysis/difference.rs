use std::collections::BTreeMap;

use serde::Serialize;

use crate::construct::RotationalSpec;
use crate::design::{NestedBlock, Pair, Quad};
use crate::error::{Error, Result};

/// Shift-orbit of a pair on `Z_p ∪ {∞}`: finite pairs keyed by
/// `min(d, p - d)`, pairs through infinity in one class.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DifferenceClass {
    Finite(u32),
    Infinity,
}

pub fn difference_class(p: u32, pair: Pair) -> DifferenceClass {
    if pair.hi().0 == p {
        DifferenceClass::Infinity
    } else {
        let d = (pair.hi().0 - pair.lo().0) % p;
        DifferenceClass::Finite(d.min(p - d))
    }
}

/// Predicted multiplicity of every pair in a difference class, computed
/// from base blocks alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DifferenceCensus {
    pub p: u32,
    pub counts: BTreeMap<DifferenceClass, u64>,
}

impl DifferenceCensus {
    pub fn predicted(&self, pair: Pair) -> u64 {
        self.counts.get(&difference_class(self.p, pair)).copied().unwrap_or(0)
    }

    /// All `(p - 1)/2` finite classes plus the infinity class.
    pub fn all_classes(p: u32) -> impl Iterator<Item = DifferenceClass> {
        (1..=p / 2).map(DifferenceClass::Finite).chain(std::iter::once(DifferenceClass::Infinity))
    }
}

/// Size of the set stabilizer of a block under `x -> m x + t`.
fn stabilizer_size(spec: &RotationalSpec, block: &NestedBlock) -> u64 {
    let q = block.quad();
    let mut s = 0;
    for &m in spec.multipliers() {
        for t in 0..spec.p() {
            let img = Quad::new(q.points().map(|x| spec.image(x, m, t))).expect("bijection");
            if img == q {
                s += 1;
            }
        }
    }
    s
}

/// Per-class multiplicity contributed by the orbit of one base block.
pub fn block_contribution(spec: &RotationalSpec, base: &NestedBlock) -> Result<BTreeMap<DifferenceClass, u64>> {
    let p = spec.p();
    let mut contrib: BTreeMap<DifferenceClass, u64> = BTreeMap::new();
    for pair in base.pairs() {
        match difference_class(p, pair) {
            DifferenceClass::Infinity => {
                *contrib.entry(DifferenceClass::Infinity).or_default() += spec.multipliers().len() as u64;
            }
            DifferenceClass::Finite(d) => {
                for &m in spec.multipliers() {
                    let md = (d as u64 * m as u64 % p as u64) as u32;
                    *contrib.entry(DifferenceClass::Finite(md.min(p - md))).or_default() += 1;
                }
            }
        }
    }
    let stab = stabilizer_size(spec, base);
    for c in contrib.values_mut() {
        if *c % stab != 0 {
            return Err(Error::InconsistentSpec(format!("stabilizer of {base} does not preserve its split")));
        }
        *c /= stab;
    }
    Ok(contrib)
}

/// Sum over the full group of the images of each base split's pairs,
/// divided by the block stabilizer. For odd `p` the `p` shifts of one pair
/// hit every pair of its class exactly once, so only the multiplier action
/// on differences has to be tracked.
pub fn difference_census(spec: &RotationalSpec) -> Result<DifferenceCensus> {
    let p = spec.p();
    if p.is_multiple_of(2) {
        return Err(Error::InconsistentSpec(format!("difference classes need odd p, got {p}")));
    }
    let mut counts: BTreeMap<DifferenceClass, u64> = DifferenceCensus::all_classes(p).map(|c| (c, 0)).collect();
    for base in spec.base_blocks() {
        for (class, c) in block_contribution(spec, base)? {
            *counts.entry(class).or_default() += c;
        }
    }
    Ok(DifferenceCensus { p, counts })
}
