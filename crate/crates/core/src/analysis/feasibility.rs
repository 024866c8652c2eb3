use serde::Serialize;

use crate::analysis::bounds::{admissible_order, bounds_profile, BoundsProfile};
use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateClass {
    Complete,
    Minimum,
    Intermediate,
}

/// One `(M, μ)` cell of the table.
///
/// `marker` follows the usual legend: existence sources `a`..`i`, `?` for
/// an open candidate, empty for a candidate listed without a marker, and
/// `x`, `b`, `z` for excluded minimum/complete columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColumnEntry {
    pub nd_pairs: u64,
    pub multiplicity: Option<u64>,
    pub class: CandidateClass,
    pub candidate: bool,
    pub marker: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilityRow {
    pub v: u64,
    pub total_pair_slots: u64,
    pub bounds: BoundsProfile,
    pub minimum: ColumnEntry,
    pub complete: ColumnEntry,
    pub intermediate: Vec<ColumnEntry>,
}

impl FeasibilityRow {
    /// Surviving `(M, μ)` candidates in increasing `M`.
    pub fn candidates(&self) -> Vec<&ColumnEntry> {
        let mut out: Vec<&ColumnEntry> = std::iter::once(&self.minimum)
            .chain(&self.intermediate)
            .chain(std::iter::once(&self.complete))
            .filter(|e| e.candidate)
            .collect();
        out.sort_by_key(|e| e.nd_pairs);
        out
    }
}

/// Orders with a complete uniform nesting in the built-in catalog, and the
/// catalog marker for each.
const KNOWN_COMPLETE: [(u64, &str, &str); 6] = [
    (8, "a", "catalog sqs8"),
    (20, "e", "catalog ro20"),
    (26, "f", "catalog ro26"),
    (32, "g", "catalog bool32"),
    (38, "h", "catalog ro38"),
    (62, "i", "catalog ro62"),
];

// listed in the published table without any existence marker
const UNMARKED: [(u64, u64); 2] = [(28, 182), (56, 1540)];

fn existence(v: u64, m: u64, class: CandidateClass) -> (String, String) {
    if UNMARKED.contains(&(v, m)) {
        return (String::new(), "unmarked".into());
    }
    let known_complete = |u: u64| KNOWN_COMPLETE.iter().find(|k| k.0 == u);
    let hit = match class {
        CandidateClass::Complete => known_complete(v).map(|k| (k.1.to_string(), k.2.to_string())),
        CandidateClass::Minimum => known_complete(v / 2)
            .map(|k| ("d".to_string(), format!("doubling-a of {}", k.2.trim_start_matches("catalog ")))),
        CandidateClass::Intermediate => (v == 10 && m == 30).then(|| ("c".to_string(), "catalog sqs10".to_string())),
    };
    hit.unwrap_or_else(|| ("?".into(), "open".into()))
}

fn excluded(nd_pairs: u64, class: CandidateClass, marker: &str, reason: &str) -> ColumnEntry {
    ColumnEntry {
        nd_pairs,
        multiplicity: None,
        class,
        candidate: false,
        marker: marker.into(),
        reason: reason.into(),
    }
}

fn candidate(v: u64, nd_pairs: u64, mu: u64, class: CandidateClass) -> ColumnEntry {
    let (marker, reason) = existence(v, nd_pairs, class);
    ColumnEntry { nd_pairs, multiplicity: Some(mu), class, candidate: true, marker, reason }
}

/// Necessary conditions for a uniform nesting with `m` ND-pairs:
/// `m | total`, `μ | (v-1)(v-2)/6` and `v | 2m`.
fn divisibility_ok(v: u64, total: u64, m: u64) -> Option<u64> {
    if m == 0 || !total.is_multiple_of(m) {
        return None;
    }
    let mu = total / m;
    let per_point = (v - 1) * (v - 2) / 6;
    (per_point.is_multiple_of(mu) && (2 * m).is_multiple_of(v)).then_some(mu)
}

pub fn feasibility_row(v: u64) -> Result<FeasibilityRow> {
    let bounds = bounds_profile(v)?;
    let total = bounds.total_pair_slots;
    let half_square = bounds.half_square_nd_pairs;
    let all = bounds.max_nd_pairs;

    let minimum = if v % 6 != 4 {
        excluded(half_square, CandidateClass::Minimum, "x", "minimum-needs-v-4-mod-6")
    } else if v % 12 == 10 {
        excluded(half_square, CandidateClass::Minimum, "b", "minimum-impossible-v-10-mod-12")
    } else {
        match divisibility_ok(v, total, half_square) {
            Some(mu) => candidate(v, half_square, mu, CandidateClass::Minimum),
            None => excluded(half_square, CandidateClass::Minimum, "x", "minimum-divisibility"),
        }
    };

    let complete = if v % 6 != 2 {
        excluded(all, CandidateClass::Complete, "z", "complete-needs-v-2-mod-6")
    } else {
        match divisibility_ok(v, total, all) {
            Some(mu) => candidate(v, all, mu, CandidateClass::Complete),
            None => excluded(all, CandidateClass::Complete, "z", "complete-divisibility"),
        }
    };

    let lo = bounds.min_nd_pairs.max(half_square + 1);
    let intermediate = (lo..all)
        .filter_map(|m| divisibility_ok(v, total, m).map(|mu| candidate(v, m, mu, CandidateClass::Intermediate)))
        .collect();

    Ok(FeasibilityRow { v, total_pair_slots: total, bounds, minimum, complete, intermediate })
}

/// Rows for every admissible order in `v_min..=v_max`.
pub fn feasibility_table(v_min: u64, v_max: u64) -> Vec<FeasibilityRow> {
    (v_min..=v_max)
        .filter(|&v| admissible_order(v))
        .map(|v| feasibility_row(v).expect("admissible"))
        .collect()
}

/// True iff `k | v(v-1)(v-2)/12`, in which case any quasi-uniform nesting
/// with exactly `k` ND-pairs is uniform.
pub fn quasi_uniform_collapse_check(v: u64, k: u64) -> Result<bool> {
    let b = bounds_profile(v)?;
    if k < b.half_square_nd_pairs || k > b.max_nd_pairs {
        return Err(Error::OutOfRange { value: k, lo: b.half_square_nd_pairs, hi: b.max_nd_pairs });
    }
    Ok(b.total_pair_slots % k == 0)
}
