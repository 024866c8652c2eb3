use std::collections::BTreeMap;
use std::sync::atomic::AtomicBool;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Budget, Resolved, SearchOutcome, SearchSpec, SearchStats, SearchStatus};
use super::spec::Refusal;
use crate::analysis::{block_contribution, classify, difference_class, DifferenceCensus, DifferenceClass};
use crate::construct::{rotational_expand, RotationalSpec};
use crate::design::{all_pairs, NestedBlock, Quad};
use crate::error::{Error, Result};

/// Per-class contribution of one split, or `None` if the block's stabilizer
/// does not fix that split.
type Contribution = Option<Vec<(usize, u32)>>;

struct Rotor<'a> {
    r: &'a Resolved,
    class_size: u32,
    /// `contrib[b][s]`
    contrib: Vec<[Contribution; 3]>,
    /// Classes touched by any split of block `b`, with the largest amount
    /// any one split adds.
    touch: Vec<Vec<(usize, u32)>>,
    must: Vec<bool>,
    forbidden: Vec<bool>,
    counts: Vec<u32>,
    potential: Vec<u32>,
    assigned: Vec<Option<u8>>,
    nd_classes: usize,
    stats: SearchStats,
}

#[derive(Copy, Clone, PartialEq, Eq)]
enum Flow {
    Found,
    Continue,
    Stop,
}

impl Rotor<'_> {
    fn nd_limit_classes(&self) -> Option<usize> {
        self.r.nd_exact.or(self.r.nd_max).map(|m| m / self.class_size as usize)
    }

    fn feasible(&mut self, b: usize, s: usize) -> bool {
        let Some(add) = &self.contrib[b][s] else {
            self.stats.prunes_capacity += 1;
            return false;
        };
        let mut new_nd = 0;
        for &(c, x) in add {
            if self.forbidden[c] || self.counts[c] + x > self.r.hi {
                self.stats.prunes_capacity += 1;
                return false;
            }
            if self.counts[c] == 0 {
                new_nd += 1;
            }
        }
        if self.nd_limit_classes().is_some_and(|m| self.nd_classes + new_nd > m) {
            self.stats.prunes_support += 1;
            return false;
        }
        for &(c, max_add) in &self.touch[b] {
            let here = add.iter().find(|(k, _)| *k == c).map_or(0, |(_, x)| *x);
            let after = self.counts[c] + here;
            if (after > 0 || self.must[c]) && after + (self.potential[c] - max_add) < self.r.lo {
                self.stats.prunes_deficit += 1;
                return false;
            }
        }
        true
    }

    fn apply(&mut self, b: usize, s: usize) {
        self.assigned[b] = Some(s as u8);
        for &(c, m) in &self.touch[b] {
            self.potential[c] -= m;
        }
        for &(c, x) in self.contrib[b][s].as_ref().expect("feasible split") {
            if self.counts[c] == 0 {
                self.nd_classes += 1;
            }
            self.counts[c] += x;
        }
    }

    fn undo(&mut self, b: usize, s: usize) {
        for &(c, x) in self.contrib[b][s].as_ref().expect("feasible split") {
            self.counts[c] -= x;
            if self.counts[c] == 0 {
                self.nd_classes -= 1;
            }
        }
        for &(c, m) in &self.touch[b] {
            self.potential[c] += m;
        }
        self.assigned[b] = None;
    }

    fn choose(&mut self) -> Option<(usize, Vec<usize>)> {
        let mut best: Option<(usize, Vec<usize>)> = None;
        for b in 0..self.contrib.len() {
            if self.assigned[b].is_some() {
                continue;
            }
            let options: Vec<usize> = (0..3).filter(|&s| self.feasible(b, s)).collect();
            if options.is_empty() {
                return Some((b, options));
            }
            if best.as_ref().is_none_or(|(_, o)| options.len() < o.len()) {
                let forced = options.len() == 1;
                best = Some((b, options));
                if forced {
                    break;
                }
            }
        }
        best
    }

    fn leaf_ok(&mut self) -> bool {
        let ok = self.counts.iter().enumerate().all(|(c, &n)| {
            (n == 0 && !self.must[c]) || (self.r.lo..=self.r.hi).contains(&n)
        }) && self
            .r
            .nd_exact
            .is_none_or(|m| m == self.nd_classes * self.class_size as usize);
        if !ok {
            self.stats.prunes_support += 1;
        }
        ok
    }

    fn dfs(&mut self, budget: &mut Budget<'_>, rng: &mut ChaCha8Rng) -> Flow {
        self.stats.nodes += 1;
        if !budget.tick(self.stats.nodes) {
            return Flow::Stop;
        }
        let Some((b, mut options)) = self.choose() else {
            return if self.leaf_ok() { Flow::Found } else { Flow::Continue };
        };
        options.shuffle(rng);
        for s in options {
            self.apply(b, s);
            match self.dfs(budget, rng) {
                Flow::Found => return Flow::Found,
                Flow::Stop => {
                    self.undo(b, s);
                    return Flow::Stop;
                }
                Flow::Continue => self.undo(b, s),
            }
        }
        Flow::Continue
    }
}

/// Search over the three splits of each base block of `spec` (its current
/// splits are ignored). Pair multiplicities are tracked per difference
/// class, so every class is one counter.
pub fn search_rotational(spec: &RotationalSpec, search: &SearchSpec) -> Result<SearchOutcome> {
    // validates that the base quads expand to an SQS
    rotational_expand(spec)?;
    let start = Instant::now();
    let p = spec.p();
    if p.is_multiple_of(2) {
        return Err(Error::InconsistentSpec(format!("difference classes need odd p, got {p}")));
    }
    let r = match search.resolve(spec.v()) {
        Ok(r) => r,
        Err(refusal) => return Ok(SearchOutcome::refused(refusal)),
    };

    let classes: Vec<DifferenceClass> = DifferenceCensus::all_classes(p).collect();
    let index: BTreeMap<DifferenceClass, usize> = classes.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let mut must = vec![false; classes.len()];
    let mut forbidden = vec![false; classes.len()];
    if let Some(req) = &r.required {
        let mut seen: Vec<(usize, usize)> = vec![(0, 0); classes.len()];
        for pair in all_pairs(spec.v()) {
            let c = index[&difference_class(p, pair)];
            seen[c].0 += 1;
            if req[pair.index()] {
                seen[c].1 += 1;
            }
        }
        for (c, &(total, inside)) in seen.iter().enumerate() {
            if inside == total {
                must[c] = true;
            } else if inside == 0 {
                forbidden[c] = true;
            } else {
                return Ok(SearchOutcome::refused(Refusal {
                    condition: "support is a union of difference classes",
                    detail: format!("class {:?} is split by the support set", classes[c]),
                }));
            }
        }
    }

    let quads: Vec<Quad> = spec.base_quads();
    let mut contrib = Vec::with_capacity(quads.len());
    let mut touch = Vec::with_capacity(quads.len());
    for q in &quads {
        let mut per_split: [Contribution; 3] = [None, None, None];
        let mut t: BTreeMap<usize, u32> = BTreeMap::new();
        for (s, nb) in q.splits().iter().enumerate() {
            if let Ok(map) = block_contribution(spec, nb) {
                let v: Vec<(usize, u32)> = map.iter().map(|(c, x)| (index[c], *x as u32)).collect();
                for &(c, x) in &v {
                    let e = t.entry(c).or_default();
                    *e = (*e).max(x);
                }
                per_split[s] = Some(v);
            }
        }
        contrib.push(per_split);
        touch.push(t.into_iter().collect::<Vec<_>>());
    }
    let mut potential = vec![0u32; classes.len()];
    for t in &touch {
        for &(c, m) in t {
            potential[c] += m;
        }
    }

    let mut rotor = Rotor {
        r: &r,
        class_size: p,
        contrib,
        touch,
        must,
        forbidden,
        counts: vec![0; classes.len()],
        potential,
        assigned: vec![None; quads.len()],
        nd_classes: 0,
        stats: SearchStats::default(),
    };
    let cancel = AtomicBool::new(false);
    let mut budget = Budget::new(&search.limits, start, &cancel);
    let mut rng = ChaCha8Rng::seed_from_u64(search.limits.seed);
    let flow = rotor.dfs(&mut budget, &mut rng);

    let mut outcome = SearchOutcome {
        status: match flow {
            Flow::Found => SearchStatus::Found,
            Flow::Continue => SearchStatus::Exhausted,
            Flow::Stop => SearchStatus::BudgetExceeded,
        },
        witness: None,
        base_splits: None,
        refusal: None,
        stats: rotor.stats.clone(),
        elapsed: Duration::ZERO,
    };
    if flow == Flow::Found {
        let splits: Vec<NestedBlock> = quads
            .iter()
            .zip(&rotor.assigned)
            .map(|(q, s)| q.splits()[s.expect("complete assignment") as usize])
            .collect();
        let nested = spec.with_splits(splits)?;
        let design = rotational_expand(&nested)?;
        if !search.target.accepts(&classify(&design)) {
            return Err(Error::InconsistentSpec(format!(
                "rotational search produced splits that do not meet {}",
                search.target
            )));
        }
        outcome.witness = Some(design);
        outcome.base_splits = Some(nested);
    }
    outcome.elapsed = start.elapsed();
    Ok(outcome)
}
