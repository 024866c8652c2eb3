//! Points, pairs, nested blocks and nested designs, with the two basic
//! measurements on them: the Steiner triple-coverage check and the pair
//! census of the chosen splits.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of a design, `0..v`. In rotational designs the largest index
/// `v - 1` plays the role of the fixed point at infinity.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub u32);

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for Point {
    fn from(value: u32) -> Self {
        Point(value)
    }
}

/// An unordered pair of distinct points, stored as `lo < hi`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pair {
    lo: Point,
    hi: Point,
}

impl Pair {
    pub fn new(a: impl Into<Point>, b: impl Into<Point>) -> Result<Pair> {
        let (a, b) = (a.into(), b.into());
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Pair { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Ok(Pair { lo: b, hi: a }),
            std::cmp::Ordering::Equal => Err(Error::InvalidPair(a)),
        }
    }

    pub fn lo(&self) -> Point {
        self.lo
    }

    pub fn hi(&self) -> Point {
        self.hi
    }

    pub fn contains(&self, p: Point) -> bool {
        self.lo == p || self.hi == p
    }

    pub fn is_disjoint(&self, other: &Pair) -> bool {
        !other.contains(self.lo) && !other.contains(self.hi)
    }

    /// Dense index of the pair among all pairs of `0..v` (colex order).
    pub fn index(&self) -> usize {
        pair_index(self.lo.0, self.hi.0)
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.lo, self.hi)
    }
}

/// Canonical pair of two distinct points; symmetric in its arguments.
pub fn canonical_pair(a: impl Into<Point>, b: impl Into<Point>) -> Result<Pair> {
    Pair::new(a, b)
}

#[inline]
pub fn pair_index(lo: u32, hi: u32) -> usize {
    debug_assert!(lo < hi);
    let hi = hi as usize;
    hi * (hi - 1) / 2 + lo as usize
}

pub fn pair_slots(v: u32) -> usize {
    let v = v as usize;
    v * v.saturating_sub(1) / 2
}

/// All pairs of `0..v` in index order.
pub fn all_pairs(v: u32) -> impl Iterator<Item = Pair> {
    (1..v).flat_map(|hi| (0..hi).map(move |lo| Pair { lo: Point(lo), hi: Point(hi) }))
}

#[inline]
fn triple_index(a: u32, b: u32, c: u32) -> usize {
    let (a, b, c) = (a as usize, b as usize, c as usize);
    c * (c - 1) * (c - 2) / 6 + b * (b - 1) / 2 + a
}

/// A 4-subset of points in increasing order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Quad([Point; 4]);

impl Quad {
    pub fn new(points: [impl Into<Point>; 4]) -> Result<Quad> {
        let mut pts = points.map(Into::into);
        pts.sort_unstable();
        if pts.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidBlock(format!(
                "duplicate point in {{{}, {}, {}, {}}}",
                pts[0], pts[1], pts[2], pts[3]
            )));
        }
        Ok(Quad(pts))
    }

    pub fn points(&self) -> [Point; 4] {
        self.0
    }

    pub fn contains(&self, p: Point) -> bool {
        self.0.contains(&p)
    }

    /// The three ways of splitting this quadruple into two pairs.
    pub fn splits(&self) -> [NestedBlock; 3] {
        let [a, b, c, d] = self.0;
        let mk = |x: Point, y: Point, z: Point, w: Point| NestedBlock {
            first: Pair { lo: x, hi: y },
            second: Pair { lo: z, hi: w },
        };
        [mk(a, b, c, d), mk(a, c, b, d), mk(a, d, b, c)]
    }

    fn triples(&self) -> [[u32; 3]; 4] {
        let [a, b, c, d] = self.0.map(|p| p.0);
        [[a, b, c], [a, b, d], [a, c, d], [b, c, d]]
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "{{{a},{b},{c},{d}}}")
    }
}

/// The three splits of a 4-set of points into two pairs.
pub fn alternative_splits(points: [impl Into<Point>; 4]) -> Result<[NestedBlock; 3]> {
    Ok(Quad::new(points)?.splits())
}

/// A block together with its chosen partition into two disjoint pairs.
///
/// Canonical form keeps `first < second`, which puts the smallest point of
/// the block in `first`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NestedBlock {
    first: Pair,
    second: Pair,
}

impl NestedBlock {
    pub fn new(first: Pair, second: Pair) -> Result<NestedBlock> {
        if !first.is_disjoint(&second) {
            return Err(Error::InvalidBlock(format!(
                "pairs {first} and {second} overlap"
            )));
        }
        let (first, second) = if first <= second { (first, second) } else { (second, first) };
        Ok(NestedBlock { first, second })
    }

    /// `[{a,b} | {c,d}]`
    pub fn from_points(
        a: impl Into<Point>,
        b: impl Into<Point>,
        c: impl Into<Point>,
        d: impl Into<Point>,
    ) -> Result<NestedBlock> {
        NestedBlock::new(Pair::new(a, b)?, Pair::new(c, d)?)
    }

    pub fn first(&self) -> Pair {
        self.first
    }

    pub fn second(&self) -> Pair {
        self.second
    }

    pub fn pairs(&self) -> [Pair; 2] {
        [self.first, self.second]
    }

    pub fn quad(&self) -> Quad {
        let mut pts = [self.first.lo, self.first.hi, self.second.lo, self.second.hi];
        pts.sort_unstable();
        Quad(pts)
    }

    /// Position of this split within [`Quad::splits`] of its own block.
    pub fn split_index(&self) -> usize {
        let pts = self.quad().0;
        // first always holds the minimum point; its partner decides the split
        match pts.iter().position(|&p| p == self.first.hi) {
            Some(1) => 0,
            Some(2) => 1,
            _ => 2,
        }
    }

    pub fn map_points(&self, mut f: impl FnMut(Point) -> Point) -> Result<NestedBlock> {
        NestedBlock::from_points(
            f(self.first.lo),
            f(self.first.hi),
            f(self.second.lo),
            f(self.second.hi),
        )
    }
}

impl fmt::Display for NestedBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}|{}]", self.first, self.second)
    }
}

/// A collection of nested blocks on `v` points.
///
/// Blocks are kept sorted by their point set, so a block's position is
/// unaffected by changing its split.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NestedDesign {
    v: u32,
    blocks: Vec<NestedBlock>,
    infinity: bool,
}

impl NestedDesign {
    pub fn new(v: u32, blocks: Vec<NestedBlock>) -> Result<NestedDesign> {
        Self::build(v, blocks, false)
    }

    /// A design whose point `v - 1` is the fixed point at infinity.
    pub fn with_infinity(v: u32, blocks: Vec<NestedBlock>) -> Result<NestedDesign> {
        Self::build(v, blocks, true)
    }

    fn build(v: u32, mut blocks: Vec<NestedBlock>, infinity: bool) -> Result<NestedDesign> {
        for b in &blocks {
            for p in b.quad().points() {
                if p.0 >= v {
                    return Err(Error::PointOutOfRange { point: p.0, v });
                }
            }
        }
        if infinity && v == 0 {
            return Err(Error::Schema("infinity requires at least one point".into()));
        }
        blocks.sort_unstable_by_key(|b| (b.quad(), *b));
        Ok(NestedDesign { v, blocks, infinity })
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn blocks(&self) -> &[NestedBlock] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn has_infinity(&self) -> bool {
        self.infinity
    }

    pub fn infinity(&self) -> Option<Point> {
        self.infinity.then(|| Point(self.v - 1))
    }

    pub fn quads(&self) -> Vec<Quad> {
        self.blocks.iter().map(NestedBlock::quad).collect()
    }

    /// Same blocks, infinity marker dropped (points become plain labels).
    pub fn without_infinity(mut self) -> NestedDesign {
        self.infinity = false;
        self
    }

    /// Replace the split of the block at `index`.
    pub fn repartition(&self, index: usize, split: NestedBlock) -> Result<NestedDesign> {
        let current = self.blocks.get(index).ok_or_else(|| {
            Error::InvalidSplit(format!("block index {index} out of range ({} blocks)", self.len()))
        })?;
        if current.quad() != split.quad() {
            return Err(Error::InvalidSplit(format!(
                "split {split} does not cover block {}",
                current.quad()
            )));
        }
        let mut out = self.clone();
        out.blocks[index] = split;
        Ok(out)
    }

    /// Position of the block with the given point set.
    pub fn position(&self, quad: &Quad) -> Option<usize> {
        self.blocks
            .binary_search_by(|b| b.quad().cmp(quad))
            .ok()
            .or_else(|| self.blocks.iter().position(|b| b.quad() == *quad))
    }

    /// Apply a point bijection to every block.
    pub fn relabel(&self, mut f: impl FnMut(Point) -> Point) -> Result<NestedDesign> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.map_points(&mut f))
            .collect::<Result<Vec<_>>>()?;
        Self::build(self.v, blocks, false)
    }

    pub fn block_count_for(v: u32) -> u64 {
        let v = v as u64;
        v * v.saturating_sub(1) * v.saturating_sub(2) / 24
    }

    pub fn total_pair_slots_for(v: u32) -> u64 {
        let v = v as u64;
        v * v.saturating_sub(1) * v.saturating_sub(2) / 12
    }
}

/// A triple covered the wrong number of times.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleWitness {
    pub triple: [Point; 3],
    pub coverage: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub v: u32,
    pub block_count: usize,
    pub expected_block_count: u64,
    pub uncovered_triples: u64,
    pub overcovered_triples: u64,
    pub witness: Option<TripleWitness>,
}

impl VerificationReport {
    pub fn violations(&self) -> u64 {
        self.uncovered_triples + self.overcovered_triples
    }
}

/// Check that every 3-subset of points lies in exactly one block.
pub fn verify_steiner(design: &NestedDesign) -> VerificationReport {
    let v = design.v;
    let n_triples = if v >= 3 { triple_index(0, 1, v) } else { 0 };
    let mut occupancy = vec![0u8; n_triples];
    for block in &design.blocks {
        for [a, b, c] in block.quad().triples() {
            let slot = &mut occupancy[triple_index(a, b, c)];
            *slot = slot.saturating_add(1);
        }
    }

    let mut uncovered = 0u64;
    let mut overcovered = 0u64;
    let mut witness = None;
    // walk triples in the same colex order as triple_index
    let mut idx = 0usize;
    for c in 2..v {
        for b in 1..c {
            for a in 0..b {
                let cov = occupancy[idx];
                idx += 1;
                if cov == 1 {
                    continue;
                }
                if cov == 0 {
                    uncovered += 1;
                } else {
                    overcovered += 1;
                }
                if witness.is_none() {
                    witness = Some(TripleWitness {
                        triple: [Point(a), Point(b), Point(c)],
                        coverage: cov as u32,
                    });
                }
            }
        }
    }

    VerificationReport {
        passed: v >= 4 && uncovered == 0 && overcovered == 0,
        v,
        block_count: design.len(),
        expected_block_count: NestedDesign::block_count_for(v),
        uncovered_triples: uncovered,
        overcovered_triples: overcovered,
        witness,
    }
}

/// Multiplicity of every pair of `0..v` across the chosen splits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCensus {
    v: u32,
    counts: Vec<u32>,
}

impl PairCensus {
    /// Build a census directly from counts, e.g. for checking bounds on a
    /// hypothetical distribution.
    pub fn from_counts(v: u32, counts: impl IntoIterator<Item = (Pair, u32)>) -> Result<PairCensus> {
        let mut dense = vec![0u32; pair_slots(v)];
        for (pair, c) in counts {
            if pair.hi.0 >= v {
                return Err(Error::PointOutOfRange { point: pair.hi.0, v });
            }
            dense[pair.index()] += c;
        }
        Ok(PairCensus { v, counts: dense })
    }

    pub(crate) fn from_dense(v: u32, counts: Vec<u32>) -> PairCensus {
        debug_assert_eq!(counts.len(), pair_slots(v));
        PairCensus { v, counts }
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn count(&self, pair: Pair) -> u32 {
        self.counts.get(pair.index()).copied().unwrap_or(0)
    }

    /// Dense counts in [`Pair::index`] order.
    pub fn dense(&self) -> &[u32] {
        &self.counts
    }

    /// Sum of all multiplicities (two per block).
    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    /// Number of ND-pairs, i.e. pairs with positive multiplicity.
    pub fn nd_pair_count(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    pub fn min_mult(&self) -> Option<u32> {
        self.counts.iter().copied().filter(|&c| c > 0).min()
    }

    pub fn max_mult(&self) -> Option<u32> {
        self.counts.iter().copied().max().filter(|&c| c > 0)
    }

    /// ND-pairs with their multiplicities, in pair index order.
    pub fn nd_pairs(&self) -> impl Iterator<Item = (Pair, u32)> + '_ {
        all_pairs(self.v)
            .zip(self.counts.iter().copied())
            .filter(|&(_, c)| c > 0)
    }

    /// For each point, the number of distinct ND-pairs containing it.
    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.v as usize];
        for (p, _) in self.nd_pairs() {
            deg[p.lo.0 as usize] += 1;
            deg[p.hi.0 as usize] += 1;
        }
        deg
    }

    /// multiplicity -> number of ND-pairs with that multiplicity
    pub fn histogram(&self) -> BTreeMap<u32, usize> {
        let mut h = BTreeMap::new();
        for &c in self.counts.iter().filter(|&&c| c > 0) {
            *h.entry(c).or_insert(0) += 1;
        }
        h
    }

    pub fn is_nd(&self, pair: Pair) -> bool {
        self.count(pair) > 0
    }
}

pub fn pair_census(design: &NestedDesign) -> PairCensus {
    let mut counts = vec![0u32; pair_slots(design.v)];
    for block in &design.blocks {
        for p in block.pairs() {
            counts[p.index()] += 1;
        }
    }
    PairCensus::from_dense(design.v, counts)
}
