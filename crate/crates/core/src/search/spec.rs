use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::analysis::{bounds_profile, Classification, NestingKind};
use crate::construct::RotationalSpec;
use crate::design::{pair_slots, NestedDesign, Pair};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Target {
    Uniform { mu: u32 },
    CompleteUniform,
    MinimumUniform,
    /// Multiplicities in `[mu, mu + 1]`.
    QuasiUniform { mu: u32 },
    Band { lo: u32, hi: u32 },
}

impl Target {
    /// Whether a classified design meets this target.
    pub fn accepts(&self, c: &Classification) -> bool {
        match *self {
            Target::Uniform { mu } => c.mu_min == mu && c.mu_max == mu,
            Target::CompleteUniform => c.kind == NestingKind::CompleteUniform,
            Target::MinimumUniform => c.kind == NestingKind::MinimumUniform,
            Target::QuasiUniform { mu } => c.mu_min >= mu && c.mu_max <= mu + 1,
            Target::Band { lo, hi } => c.mu_min >= lo && c.mu_max <= hi,
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Uniform { mu } => write!(f, "uniform({mu})"),
            Target::CompleteUniform => write!(f, "complete-uniform"),
            Target::MinimumUniform => write!(f, "minimum-uniform"),
            Target::QuasiUniform { mu } => write!(f, "quasi-uniform({mu},{})", mu + 1),
            Target::Band { lo, hi } => write!(f, "band({lo},{hi})"),
        }
    }
}

/// Constraint on which pairs end up as ND-pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportConstraint {
    ExactCount(usize),
    MaxCount(usize),
    ExactSet(Vec<Pair>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_nodes: u64,
    pub max_time: Duration,
    pub seed: u64,
    /// Top-level subtrees are spread over this many threads; 1 is
    /// deterministic.
    pub workers: usize,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits { max_nodes: 100_000_000, max_time: Duration::from_secs(300), seed: 0, workers: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub target: Target,
    pub support: Option<SupportConstraint>,
    pub limits: Limits,
}

impl SearchSpec {
    pub fn new(target: Target) -> SearchSpec {
        SearchSpec { target, support: None, limits: Limits::default() }
    }

    pub fn with_support(mut self, support: SupportConstraint) -> SearchSpec {
        self.support = Some(support);
        self
    }

    pub fn with_limits(mut self, limits: Limits) -> SearchSpec {
        self.limits = limits;
        self
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Found,
    Exhausted,
    BudgetExceeded,
    Refused,
}

impl SearchStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SearchStatus::Found => "found",
            SearchStatus::Exhausted => "exhausted",
            SearchStatus::BudgetExceeded => "budget-exceeded",
            SearchStatus::Refused => "refused",
        }
    }
}

/// A necessary condition that the target violates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refusal {
    pub condition: &'static str,
    pub detail: String,
}

impl fmt::Display for Refusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.condition, self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes_capacity: u64,
    pub prunes_deficit: u64,
    pub prunes_support: u64,
}

impl SearchStats {
    pub(crate) fn absorb(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.prunes_capacity += other.prunes_capacity;
        self.prunes_deficit += other.prunes_deficit;
        self.prunes_support += other.prunes_support;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub witness: Option<NestedDesign>,
    /// Base-block splits, for rotational searches.
    pub base_splits: Option<RotationalSpec>,
    pub refusal: Option<Refusal>,
    pub stats: SearchStats,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SearchOutcome {
    pub(crate) fn refused(refusal: Refusal) -> SearchOutcome {
        SearchOutcome {
            status: SearchStatus::Refused,
            witness: None,
            base_splits: None,
            refusal: Some(refusal),
            stats: SearchStats::default(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn is_found(&self) -> bool {
        self.status == SearchStatus::Found
    }
}

/// Target and support constraints reduced to numbers for one order `v`.
#[derive(Clone, Debug)]
pub(crate) struct Resolved {
    pub lo: u32,
    pub hi: u32,
    pub nd_exact: Option<usize>,
    pub nd_max: Option<usize>,
    /// Dense by pair index: `Some(true)` must be ND, `Some(false)` must not.
    pub required: Option<Vec<bool>>,
}

impl Resolved {
    pub fn must_be_nd(&self, pair_id: usize) -> bool {
        self.required.as_ref().is_some_and(|r| r[pair_id])
    }

    pub fn forbidden(&self, pair_id: usize) -> bool {
        self.required.as_ref().is_some_and(|r| !r[pair_id])
    }
}

fn refuse(condition: &'static str, detail: String) -> Refusal {
    Refusal { condition, detail }
}

impl SearchSpec {
    /// Checks the target against every necessary condition on a nested
    /// SQS(v). Only divisibility for non-uniform bands is left advisory.
    pub(crate) fn resolve(&self, v: u32) -> Result<Resolved, Refusal> {
        let b = bounds_profile(v as u64).map_err(|e| refuse("admissible order", e.to_string()))?;
        let total = b.total_pair_slots;
        let all = b.max_nd_pairs;
        let v64 = v as u64;
        let check_uniform = |mu: u64| -> Result<u64, Refusal> {
            if mu == 0 {
                return Err(refuse("positive multiplicity", "mu must be at least 1".into()));
            }
            if mu > b.max_mult {
                return Err(refuse(
                    "maximum multiplicity (v-2)/2",
                    format!("mu={mu} exceeds {} for v={v}", b.max_mult),
                ));
            }
            if total % mu != 0 {
                return Err(refuse(
                    "mu divides total pair slots",
                    format!("{mu} does not divide {total}"),
                ));
            }
            let m = total / mu;
            let point_slots = (v64 - 1) * (v64 - 2) / 6;
            if m < b.min_nd_pairs {
                let name = if b.min_nd_pairs > b.half_square_nd_pairs {
                    "v²/4 lower bound"
                } else {
                    "(v/2)(v/2-1) lower bound"
                };
                return Err(refuse(
                    name,
                    format!("mu={mu} forces M={m} ND-pairs but v={v} needs at least {}", b.min_nd_pairs),
                ));
            }
            if m > all {
                return Err(refuse(
                    "at most C(v,2) ND-pairs",
                    format!("mu={mu} forces M={m} > {all}"),
                ));
            }
            if !point_slots.is_multiple_of(mu) {
                return Err(refuse(
                    "mu divides (v-1)(v-2)/6",
                    format!("{mu} does not divide {point_slots}"),
                ));
            }
            if !(2 * m).is_multiple_of(v64) {
                return Err(refuse("v divides 2M", format!("{v} does not divide {}", 2 * m)));
            }
            Ok(m)
        };

        let (lo, hi, mut nd_exact) = match self.target {
            Target::Uniform { mu } => {
                let m = check_uniform(mu as u64)?;
                (mu, mu, Some(m))
            }
            Target::CompleteUniform => {
                if v % 6 != 2 {
                    return Err(refuse(
                        "complete uniform needs v ≡ 2 (mod 6)",
                        format!("v={v} ≡ {} (mod 6)", v % 6),
                    ));
                }
                let mu = (v - 2) / 6;
                check_uniform(mu as u64)?;
                (mu, mu, Some(all))
            }
            Target::MinimumUniform => {
                if v % 6 != 4 {
                    return Err(refuse(
                        "minimum uniform needs v ≡ 4 (mod 6)",
                        format!("(v-1)/3 is not an integer for v={v}"),
                    ));
                }
                let mu = (v - 1) / 3;
                let m = check_uniform(mu as u64)?;
                (mu, mu, Some(m))
            }
            Target::QuasiUniform { mu } => (mu, mu + 1, None),
            Target::Band { lo, hi } => (lo, hi, None),
        };
        let (lo64, hi64) = (lo as u64, hi as u64);
        if lo == 0 || lo > hi {
            return Err(refuse("non-empty band", format!("band [{lo},{hi}] is empty or contains 0")));
        }
        if lo64 > b.min_mult_upper {
            return Err(refuse(
                "some ND-pair has multiplicity at most (v-1)/3",
                format!("lower end {lo} exceeds {}", b.min_mult_upper),
            ));
        }
        if hi64 < b.max_mult_lower {
            return Err(refuse(
                "some ND-pair has multiplicity at least (v-2)/6",
                format!("upper end {hi} is below {}", b.max_mult_lower),
            ));
        }
        // With multiplicities in [lo, hi], M lies in [total/hi, total/lo].
        let m_lo = total.div_ceil(hi64).max(b.min_nd_pairs);
        let m_hi = (total / lo64).min(all);
        if m_lo > m_hi {
            let name = if total / lo64 < b.min_nd_pairs && b.min_nd_pairs > b.half_square_nd_pairs {
                "v²/4 lower bound"
            } else {
                "ND-pair count range"
            };
            return Err(refuse(name, format!("no M in [{m_lo}, {m_hi}] fits band [{lo},{hi}]")));
        }

        let mut nd_max = None;
        let mut required = None;
        match &self.support {
            None => {}
            Some(SupportConstraint::ExactCount(m)) => {
                let m64 = *m as u64;
                if nd_exact.is_some_and(|e| e != m64) {
                    return Err(refuse(
                        "support size",
                        format!("target forces M={}, support asks for {m}", nd_exact.unwrap_or(0)),
                    ));
                }
                if m64 < m_lo || m64 > m_hi {
                    return Err(refuse("support size", format!("M={m} is outside [{m_lo}, {m_hi}]")));
                }
                nd_exact = Some(m64);
            }
            Some(SupportConstraint::MaxCount(m)) => {
                if (*m as u64) < m_lo {
                    return Err(refuse("support size", format!("at most {m} ND-pairs but at least {m_lo} needed")));
                }
                nd_max = Some(*m);
            }
            Some(SupportConstraint::ExactSet(pairs)) => {
                let mut dense = vec![false; pair_slots(v)];
                for p in pairs {
                    if p.hi().0 >= v {
                        return Err(refuse("support set", format!("pair {p} is outside v={v}")));
                    }
                    dense[p.index()] = true;
                }
                let m = dense.iter().filter(|&&x| x).count() as u64;
                if nd_exact.is_some_and(|e| e != m) || m < m_lo || m > m_hi {
                    return Err(refuse("support size", format!("support set of {m} pairs cannot meet the target")));
                }
                nd_exact = Some(m);
                required = Some(dense);
            }
        }
        if nd_exact == Some(all) {
            required = Some(vec![true; pair_slots(v)]);
        }
        Ok(Resolved { lo, hi, nd_exact: nd_exact.map(|m| m as usize), nd_max, required })
    }
}

/// Node and wall-clock budget shared by a search's workers.
pub(crate) struct Budget<'a> {
    pub max_nodes: u64,
    pub deadline: Instant,
    pub cancel: &'a AtomicBool,
    pub exceeded: bool,
}

impl<'a> Budget<'a> {
    pub fn new(limits: &Limits, start: Instant, cancel: &'a AtomicBool) -> Budget<'a> {
        Budget { max_nodes: limits.max_nodes, deadline: start + limits.max_time, cancel, exceeded: false }
    }

    /// False once the search has to stop.
    #[inline]
    pub fn tick(&mut self, nodes: u64) -> bool {
        if self.exceeded {
            return false;
        }
        if nodes >= self.max_nodes {
            self.exceeded = true;
            return false;
        }
        if nodes.is_multiple_of(1024) {
            if self.cancel.load(Ordering::Relaxed) {
                return false;
            }
            if Instant::now() >= self.deadline {
                self.exceeded = true;
                return false;
            }
        }
        true
    }
}
