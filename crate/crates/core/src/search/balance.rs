use std::time::Instant;

use super::{Limits, SearchOutcome, SearchStats, SearchStatus};
use crate::design::{pair_census, verify_steiner, NestedDesign};
use crate::error::{Error, Result};

use super::nesting::split_pair_ids;

/// `(distance outside [lo, hi] summed over ND-pairs, sum of squared counts)`
type Score = (i64, i64);

fn pair_score(c: u32, lo: u32, hi: u32) -> Score {
    if c == 0 {
        return (0, 0);
    }
    let c = c as i64;
    let dist = (lo as i64 - c).max(c - hi as i64).max(0);
    (dist, c * c)
}

/// Hill climbing over single-block re-splits. Each step applies the move
/// with the best strict improvement of the score (ties go to the lowest
/// block, then split, index); stops at a local optimum.
pub fn local_balance(design: &NestedDesign, lo: u32, hi: u32, limits: &Limits) -> Result<SearchOutcome> {
    if lo == 0 || lo > hi {
        return Err(Error::OutOfRange { value: lo as u64, lo: 1, hi: hi as u64 });
    }
    if !verify_steiner(design).passed {
        return Err(Error::Precondition(format!("input is not an SQS({})", design.v())));
    }
    let start = Instant::now();
    let deadline = start + limits.max_time;
    let quads = design.quads();
    let splits = split_pair_ids(&quads);
    let mut current: Vec<usize> = design.blocks().iter().map(|b| b.split_index()).collect();
    let mut counts = pair_census(design).dense().to_vec();
    let mut stats = SearchStats::default();
    let mut status = SearchStatus::Exhausted;

    loop {
        let mut best: Option<(Score, usize, usize)> = None;
        for (b, s_now) in current.iter().enumerate() {
            let [r0, r1] = splits[b][*s_now];
            for (t, &[a0, a1]) in splits[b].iter().enumerate() {
                if t == *s_now {
                    continue;
                }
                let mut delta = (0i64, 0i64);
                let mut bump = |q: usize, by: i32| {
                    let old = counts[q];
                    let new = (old as i32 + by) as u32;
                    let (o, n) = (pair_score(old, lo, hi), pair_score(new, lo, hi));
                    delta.0 += n.0 - o.0;
                    delta.1 += n.1 - o.1;
                };
                // the four pairs are distinct
                bump(r0, -1);
                bump(r1, -1);
                bump(a0, 1);
                bump(a1, 1);
                if delta < (0, 0) && best.is_none_or(|(d, _, _)| delta < d) {
                    best = Some((delta, b, t));
                }
            }
        }
        let Some((_, b, t)) = best else { break };
        if stats.nodes >= limits.max_nodes || Instant::now() >= deadline {
            status = SearchStatus::BudgetExceeded;
            break;
        }
        for q in splits[b][current[b]] {
            counts[q] -= 1;
        }
        for q in splits[b][t] {
            counts[q] += 1;
        }
        current[b] = t;
        stats.nodes += 1;
    }

    let blocks = quads.iter().zip(&current).map(|(q, &s)| q.splits()[s]).collect();
    let out = if design.has_infinity() {
        NestedDesign::with_infinity(design.v(), blocks)?
    } else {
        NestedDesign::new(design.v(), blocks)?
    };
    let in_band = counts.iter().all(|&c| c == 0 || (lo..=hi).contains(&c));
    if in_band {
        status = SearchStatus::Found;
    }
    Ok(SearchOutcome {
        status,
        witness: Some(out),
        base_splits: None,
        refusal: None,
        stats,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::classify;
    use crate::catalog::{sqs10_uniform, sqs8_uniform};
    use crate::construct::doubling_b;

    #[test]
    fn uniform_input_is_left_alone() {
        let d = sqs10_uniform();
        let out = local_balance(&d, 2, 2, &Limits::default()).unwrap();
        assert_eq!(out.stats.nodes, 0);
        assert_eq!(out.witness.as_ref(), Some(&d));
        assert_eq!(out.status, SearchStatus::Found);
    }

    #[test]
    fn doubling_b_balances_to_quasi_uniform() {
        let d = doubling_b(&sqs8_uniform()).unwrap();
        let out = local_balance(&d, 2, 3, &Limits::default()).unwrap();
        assert_eq!(out.status, SearchStatus::Found);
        let c = classify(out.witness.as_ref().unwrap());
        assert_eq!((c.mu_min, c.mu_max), (2, 3));
        assert!(verify_steiner(out.witness.as_ref().unwrap()).passed);
    }
}
