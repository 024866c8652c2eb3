use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Budget, Resolved, SearchOutcome, SearchSpec, SearchStats, SearchStatus};
use crate::analysis::classify;
use crate::design::{pair_slots, verify_steiner, NestedDesign, Quad};
use crate::error::{Error, Result};

#[derive(Copy, Clone, PartialEq, Eq)]
enum Flow {
    Found,
    Continue,
    Stop,
}

#[derive(Copy, Clone)]
enum Reject {
    Capacity,
    Deficit,
    Support,
}

/// DFS state over block splits. `splits[b][s]` holds the two pair ids of
/// split `s` of block `b`; the other four pairs of the block are the other
/// two splits.
#[derive(Clone)]
struct Nester<'a> {
    quads: &'a [Quad],
    splits: &'a [[[usize; 2]; 3]],
    r: &'a Resolved,
    counts: Vec<u32>,
    avail: Vec<u32>,
    assigned: Vec<Option<u8>>,
    nd_count: usize,
    depth: usize,
    stats: SearchStats,
}

impl<'a> Nester<'a> {
    fn new(quads: &'a [Quad], splits: &'a [[[usize; 2]; 3]], r: &'a Resolved, slots: usize) -> Nester<'a> {
        let mut avail = vec![0u32; slots];
        for s in splits {
            for pair in s.iter().flatten() {
                avail[*pair] += 1;
            }
        }
        Nester {
            quads,
            splits,
            r,
            counts: vec![0; slots],
            avail,
            assigned: vec![None; quads.len()],
            nd_count: 0,
            depth: 0,
            stats: SearchStats::default(),
        }
    }

    #[inline]
    fn needs(&self, q: usize) -> bool {
        self.counts[q] > 0 || self.r.must_be_nd(q)
    }

    fn nd_limit(&self) -> Option<usize> {
        self.r.nd_exact.or(self.r.nd_max)
    }

    fn check(&self, b: usize, s: usize) -> std::result::Result<(), Reject> {
        let chosen = self.splits[b][s];
        let mut new_nd = 0;
        for &q in &chosen {
            if self.r.forbidden(q) || self.counts[q] + 1 > self.r.hi {
                return Err(Reject::Capacity);
            }
            if self.counts[q] + self.avail[q] < self.r.lo {
                return Err(Reject::Deficit);
            }
            if self.counts[q] == 0 {
                new_nd += 1;
            }
        }
        if self.nd_limit().is_some_and(|m| self.nd_count + new_nd > m) {
            return Err(Reject::Support);
        }
        for (t, other) in self.splits[b].iter().enumerate() {
            if t == s {
                continue;
            }
            for &q in other {
                if self.needs(q) && self.counts[q] + self.avail[q] - 1 < self.r.lo {
                    return Err(Reject::Deficit);
                }
            }
        }
        Ok(())
    }

    fn apply(&mut self, b: usize, s: usize) {
        self.assigned[b] = Some(s as u8);
        for q in self.splits[b].iter().flatten() {
            self.avail[*q] -= 1;
        }
        for &q in &self.splits[b][s] {
            if self.counts[q] == 0 {
                self.nd_count += 1;
            }
            self.counts[q] += 1;
        }
        self.depth += 1;
    }

    fn undo(&mut self, b: usize, s: usize) {
        self.depth -= 1;
        for &q in &self.splits[b][s] {
            self.counts[q] -= 1;
            if self.counts[q] == 0 {
                self.nd_count -= 1;
            }
        }
        for q in self.splits[b].iter().flatten() {
            self.avail[*q] += 1;
        }
        self.assigned[b] = None;
    }

    fn record(&mut self, why: Reject) {
        match why {
            Reject::Capacity => self.stats.prunes_capacity += 1,
            Reject::Deficit => self.stats.prunes_deficit += 1,
            Reject::Support => self.stats.prunes_support += 1,
        }
    }

    /// Unassigned block with the fewest feasible splits, or `None` at a leaf.
    /// A block with none left yields an empty option list.
    fn choose(&mut self) -> Option<(usize, Vec<usize>)> {
        let mut best: Option<(usize, Vec<usize>)> = None;
        for b in 0..self.quads.len() {
            if self.assigned[b].is_some() {
                continue;
            }
            let mut options = Vec::with_capacity(3);
            let mut last = Reject::Capacity;
            for s in 0..3 {
                match self.check(b, s) {
                    Ok(()) => options.push(s),
                    Err(why) => last = why,
                }
            }
            if options.is_empty() {
                self.record(last);
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
        if self.r.nd_exact.is_some_and(|m| m != self.nd_count) {
            self.stats.prunes_support += 1;
            return false;
        }
        true
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

    fn witness(&self, source: &NestedDesign) -> Result<NestedDesign> {
        let blocks = self
            .quads
            .iter()
            .zip(&self.assigned)
            .map(|(q, s)| q.splits()[s.expect("complete assignment") as usize])
            .collect();
        if source.has_infinity() {
            NestedDesign::with_infinity(source.v(), blocks)
        } else {
            NestedDesign::new(source.v(), blocks)
        }
    }
}

pub(crate) fn split_pair_ids(quads: &[Quad]) -> Vec<[[usize; 2]; 3]> {
    quads
        .iter()
        .map(|q| q.splits().map(|nb| [nb.first().index(), nb.second().index()]))
        .collect()
}

/// Depth-first search over the three splits of every block of `design`
/// (its current splits are ignored) for a nesting meeting `spec`.
pub fn search_nesting(design: &NestedDesign, spec: &SearchSpec) -> Result<SearchOutcome> {
    let report = verify_steiner(design);
    if !report.passed {
        return Err(Error::Precondition(format!("input is not an SQS({})", design.v())));
    }
    let start = Instant::now();
    let r = match spec.resolve(design.v()) {
        Ok(r) => r,
        Err(refusal) => return Ok(SearchOutcome::refused(refusal)),
    };
    let quads = design.quads();
    let splits = split_pair_ids(&quads);
    let root = Nester::new(&quads, &splits, &r, pair_slots(design.v()));
    let cancel = AtomicBool::new(false);
    let limits = &spec.limits;

    let (flow, stats, winner) = if limits.workers <= 1 {
        let mut n = root;
        let mut budget = Budget::new(limits, start, &cancel);
        let mut rng = ChaCha8Rng::seed_from_u64(limits.seed);
        let flow = n.dfs(&mut budget, &mut rng);
        let stats = n.stats.clone();
        let exceeded = budget.exceeded;
        (resolve_flow(flow, exceeded), stats, (flow == Flow::Found).then_some(n))
    } else {
        run_parallel(root, limits, start, &cancel)
    };

    let mut outcome = SearchOutcome {
        status: flow,
        witness: None,
        base_splits: None,
        refusal: None,
        stats,
        elapsed: start.elapsed(),
    };
    if let Some(n) = winner {
        let w = n.witness(design)?;
        if !spec.target.accepts(&classify(&w)) {
            return Err(Error::InconsistentSpec(format!(
                "search produced a nesting that does not meet {}",
                spec.target
            )));
        }
        outcome.witness = Some(w);
    }
    Ok(outcome)
}

fn resolve_flow(flow: Flow, exceeded: bool) -> SearchStatus {
    match flow {
        Flow::Found => SearchStatus::Found,
        Flow::Continue => SearchStatus::Exhausted,
        Flow::Stop if exceeded => SearchStatus::BudgetExceeded,
        Flow::Stop => SearchStatus::Exhausted,
    }
}

/// Spreads the root block's options over worker threads; the first worker
/// to finish with a witness cancels the rest.
fn run_parallel<'a>(
    mut root: Nester<'a>,
    limits: &super::Limits,
    start: Instant,
    cancel: &AtomicBool,
) -> (SearchStatus, SearchStats, Option<Nester<'a>>) {
    let Some((b, mut options)) = root.choose() else {
        let ok = root.leaf_ok();
        let status = if ok { SearchStatus::Found } else { SearchStatus::Exhausted };
        let stats = root.stats.clone();
        return (status, stats, ok.then_some(root));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(limits.seed);
    options.shuffle(&mut rng);
    let workers = limits.workers.min(options.len()).max(1);
    let per_worker = limits.max_nodes / workers as u64;
    let results: Vec<(SearchStatus, SearchStats, Option<Nester<'a>>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let mut n = root.clone();
                let mine: Vec<usize> = options.iter().copied().skip(w).step_by(workers).collect();
                let worker_limits = super::Limits { max_nodes: per_worker, ..limits.clone() };
                std::thread::Builder::new()
                    .stack_size(64 << 20)
                    .spawn_scoped(scope, move || {
                        let mut budget = Budget::new(&worker_limits, start, cancel);
                        let mut rng = ChaCha8Rng::seed_from_u64(worker_limits.seed.wrapping_add(w as u64 + 1));
                        let mut status = SearchStatus::Exhausted;
                        for s in mine {
                            n.apply(b, s);
                            match n.dfs(&mut budget, &mut rng) {
                                Flow::Found => {
                                    cancel.store(true, Ordering::Relaxed);
                                    let stats = n.stats.clone();
                                    return (SearchStatus::Found, stats, Some(n));
                                }
                                Flow::Stop => {
                                    status = resolve_flow(Flow::Stop, budget.exceeded);
                                    n.undo(b, s);
                                    break;
                                }
                                Flow::Continue => n.undo(b, s),
                            }
                        }
                        let stats = n.stats.clone();
                        (status, stats, None)
                    })
                    .expect("spawn search worker")
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("search worker panicked")).collect()
    });
    let mut stats = root.stats.clone();
    let mut status = SearchStatus::Exhausted;
    let mut winner = None;
    for (st, s, n) in results {
        stats.absorb(&s);
        // worker stats start from a clone of the root's
        stats.nodes -= root.stats.nodes;
        stats.prunes_capacity -= root.stats.prunes_capacity;
        stats.prunes_deficit -= root.stats.prunes_deficit;
        stats.prunes_support -= root.stats.prunes_support;
        match st {
            SearchStatus::Found if winner.is_none() => {
                status = SearchStatus::Found;
                winner = n;
            }
            SearchStatus::BudgetExceeded if status != SearchStatus::Found => status = SearchStatus::BudgetExceeded,
            _ => {}
        }
    }
    (status, stats, winner)
}
