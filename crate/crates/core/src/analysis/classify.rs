use std::fmt;

use serde::Serialize;

use crate::design::{all_pairs, pair_census, NestedDesign, PairCensus, Point};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NestingKind {
    CompleteUniform,
    MinimumUniform,
    Uniform,
    QuasiUniform,
    Irregular,
}

impl NestingKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            NestingKind::CompleteUniform => "complete-uniform",
            NestingKind::MinimumUniform => "minimum-uniform",
            NestingKind::Uniform => "uniform",
            NestingKind::QuasiUniform => "quasi-uniform",
            NestingKind::Irregular => "irregular",
        }
    }

    /// Every ND-pair has the same multiplicity.
    pub fn is_uniform(&self) -> bool {
        matches!(self, NestingKind::CompleteUniform | NestingKind::MinimumUniform | NestingKind::Uniform)
    }
}

impl fmt::Display for NestingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Split of the points into two halves whose internal pairs are exactly
/// the ND-pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalfPartition {
    pub first: Vec<Point>,
    pub second: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub kind: NestingKind,
    pub v: u32,
    #[serde(rename = "M")]
    pub nd_pairs: u64,
    pub mu_min: u32,
    pub mu_max: u32,
    pub half_partition: Option<HalfPartition>,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mu_min == self.mu_max {
            write!(f, "{} M={} mu={}", self.kind, self.nd_pairs, self.mu_min)
        } else {
            write!(f, "{} M={} mu_min={} mu_max={}", self.kind, self.nd_pairs, self.mu_min, self.mu_max)
        }
    }
}

pub fn classify(design: &NestedDesign) -> Classification {
    classify_census(&pair_census(design))
}

pub fn classify_census(census: &PairCensus) -> Classification {
    let v = census.v() as u64;
    let m = census.nd_pair_count() as u64;
    let mu_min = census.min_mult().unwrap_or(0);
    let mu_max = census.max_mult().unwrap_or(0);
    let half_square = (v / 2) * (v / 2).saturating_sub(1);
    let uniform = m > 0 && mu_min == mu_max;

    let kind = if uniform && m == v * (v - 1) / 2 && 6 * mu_min as u64 == v - 2 {
        NestingKind::CompleteUniform
    } else if uniform && v.is_multiple_of(2) && m == half_square && 3 * mu_min as u64 == v - 1 {
        NestingKind::MinimumUniform
    } else if uniform {
        NestingKind::Uniform
    } else if m > 0 && mu_max - mu_min <= 1 {
        NestingKind::QuasiUniform
    } else {
        NestingKind::Irregular
    };

    let half_partition = if v.is_multiple_of(2) && m > 0 && m == half_square {
        half_partition(census)
    } else {
        None
    };

    Classification { kind, v: census.v(), nd_pairs: m, mu_min, mu_max, half_partition }
}

/// Seed one half with point 0 and its ND-neighbours, then confirm that
/// ND-pairs are exactly the pairs inside a half.
fn half_partition(census: &PairCensus) -> Option<HalfPartition> {
    let v = census.v();
    let mut side = vec![false; v as usize];
    side[0] = true;
    for (pair, _) in census.nd_pairs() {
        if pair.lo() == Point(0) {
            side[pair.hi().0 as usize] = true;
        }
    }
    if side.iter().filter(|&&s| s).count() != (v / 2) as usize {
        return None;
    }
    let same = |p: Point, q: Point| side[p.0 as usize] == side[q.0 as usize];
    if all_pairs(v).any(|p| census.is_nd(p) != same(p.lo(), p.hi())) {
        return None;
    }
    let (first, second): (Vec<Point>, Vec<Point>) = (0..v).map(Point).partition(|p| side[p.0 as usize]);
    Some(HalfPartition { first, second })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::Pair;

    #[test]
    fn quasi_and_irregular() {
        let c = PairCensus::from_counts(4, [(Pair::new(0, 1).unwrap(), 2), (Pair::new(2, 3).unwrap(), 3)]).unwrap();
        assert_eq!(classify_census(&c).kind, NestingKind::QuasiUniform);
        let c = PairCensus::from_counts(4, [(Pair::new(0, 1).unwrap(), 1), (Pair::new(2, 3).unwrap(), 3)]).unwrap();
        assert_eq!(classify_census(&c).kind, NestingKind::Irregular);
    }

    #[test]
    fn single_block_has_halves() {
        // SQS(4): M = 2 = (4/2)(4/2 - 1), mu = 1 = (4-1)/3
        let c = PairCensus::from_counts(4, [(Pair::new(0, 1).unwrap(), 1), (Pair::new(2, 3).unwrap(), 1)]).unwrap();
        let k = classify_census(&c);
        assert_eq!(k.kind, NestingKind::MinimumUniform);
        let h = k.half_partition.clone().unwrap();
        assert_eq!(h.first, vec![Point(0), Point(1)]);
        assert_eq!(h.second, vec![Point(2), Point(3)]);
        assert_eq!(k.to_string(), "minimum-uniform M=2 mu=1");
    }

    #[test]
    fn display_of_non_uniform() {
        let c = PairCensus::from_counts(4, [(Pair::new(0, 1).unwrap(), 2), (Pair::new(2, 3).unwrap(), 3)]).unwrap();
        assert_eq!(classify_census(&c).to_string(), "quasi-uniform M=2 mu_min=2 mu_max=3");
    }
}
