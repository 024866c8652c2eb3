use serde::Serialize;

use crate::design::{pair_census, NestedDesign, Pair, PairCensus, Point};
use crate::error::{Error, Result};

/// `v >= 4` and `v ≡ 2, 4 (mod 6)`.
pub fn admissible_order(v: u64) -> bool {
    v >= 4 && matches!(v % 6, 2 | 4)
}

/// Orders with `v ≡ 2, 10 (mod 12)`, where every point needs `v/2`
/// ND-pairs and the ND-pair count is at least `v²/4`.
pub fn raises_to_quarter_square(v: u64) -> bool {
    matches!(v % 12, 2 | 10)
}

/// Every closed-form bound on a nested SQS(v).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsProfile {
    pub v: u64,
    pub block_count: u64,
    pub total_pair_slots: u64,
    /// Largest possible multiplicity `(v-2)/2`.
    pub max_mult: u64,
    /// At most `v/2` pairs reach `max_mult`.
    pub max_count_at_max: u64,
    /// `(v/2)(v/2-1)`, before the mod-12 strengthening.
    pub half_square_nd_pairs: u64,
    pub min_nd_pairs: u64,
    pub max_nd_pairs: u64,
    /// Some ND-pair has multiplicity at most this.
    pub min_mult_upper: u64,
    /// Some ND-pair has multiplicity at least this.
    pub max_mult_lower: u64,
    pub min_point_degree: u64,
}

pub fn bounds_profile(v: u64) -> Result<BoundsProfile> {
    if !admissible_order(v) {
        return Err(Error::InvalidOrder { v, reason: "an SQS(v) needs v >= 4 and v ≡ 2, 4 (mod 6)".into() });
    }
    let half = v / 2;
    let raised = raises_to_quarter_square(v);
    let half_square = half * (half - 1);
    Ok(BoundsProfile {
        v,
        block_count: v * (v - 1) * (v - 2) / 24,
        total_pair_slots: v * (v - 1) * (v - 2) / 12,
        max_mult: (v - 2) / 2,
        max_count_at_max: half,
        half_square_nd_pairs: half_square,
        min_nd_pairs: if raised { v * v / 4 } else { half_square },
        max_nd_pairs: v * (v - 1) / 2,
        min_mult_upper: (v - 1) / 3,
        max_mult_lower: (v - 2).div_ceil(6),
        min_point_degree: if raised { half } else { (v - 2) / 2 },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "kebab-case")]
pub enum BoundViolation {
    TotalPairSlots { expected: u64, actual: u64 },
    MaxMultiplicity { pair: Pair, count: u64, bound: u64 },
    MaxMultiplicityCount { count: u64, bound: u64 },
    PointDegree { point: Point, degree: u64, bound: u64 },
    MinNdPairs { count: u64, bound: u64 },
    MinMultUpper { min: u64, bound: u64 },
    MaxMultLower { max: u64, bound: u64 },
}

impl BoundViolation {
    pub fn name(&self) -> &'static str {
        match self {
            BoundViolation::TotalPairSlots { .. } => "total pair slots",
            BoundViolation::MaxMultiplicity { .. } => "max multiplicity",
            BoundViolation::MaxMultiplicityCount { .. } => "max multiplicity count",
            BoundViolation::PointDegree { .. } => "point degree",
            BoundViolation::MinNdPairs { .. } => "min ND-pairs",
            BoundViolation::MinMultUpper { .. } => "min multiplicity upper bound",
            BoundViolation::MaxMultLower { .. } => "max multiplicity lower bound",
        }
    }
}

/// Check a census against every bound; empty means all hold.
pub fn validate_census(census: &PairCensus) -> Result<Vec<BoundViolation>> {
    let b = bounds_profile(census.v() as u64)?;
    let mut out = Vec::new();

    let total = census.total();
    if total != b.total_pair_slots {
        out.push(BoundViolation::TotalPairSlots { expected: b.total_pair_slots, actual: total });
    }

    let mut at_max = 0u64;
    for (pair, c) in census.nd_pairs() {
        let c = c as u64;
        if c > b.max_mult {
            out.push(BoundViolation::MaxMultiplicity { pair, count: c, bound: b.max_mult });
        }
        if c == b.max_mult {
            at_max += 1;
        }
    }
    if at_max > b.max_count_at_max {
        out.push(BoundViolation::MaxMultiplicityCount { count: at_max, bound: b.max_count_at_max });
    }

    for (i, &deg) in census.degrees().iter().enumerate() {
        if (deg as u64) < b.min_point_degree {
            out.push(BoundViolation::PointDegree { point: Point(i as u32), degree: deg as u64, bound: b.min_point_degree });
        }
    }

    let m = census.nd_pair_count() as u64;
    if m < b.min_nd_pairs {
        out.push(BoundViolation::MinNdPairs { count: m, bound: b.min_nd_pairs });
    }
    if let Some(min) = census.min_mult() {
        if min as u64 > b.min_mult_upper {
            out.push(BoundViolation::MinMultUpper { min: min as u64, bound: b.min_mult_upper });
        }
    }
    let max = census.max_mult().unwrap_or(0) as u64;
    if max < b.max_mult_lower {
        out.push(BoundViolation::MaxMultLower { max, bound: b.max_mult_lower });
    }
    Ok(out)
}

pub fn validate_bounds(design: &NestedDesign) -> Result<Vec<BoundViolation>> {
    validate_census(&pair_census(design))
}
