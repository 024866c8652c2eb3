use std::collections::hash_map::Entry;
use std::collections::HashMap;

use serde::Serialize;

use crate::design::{verify_steiner, NestedBlock, NestedDesign, Point, Quad};
use crate::error::{Error, Result};

/// Base nested blocks on `Z_p ∪ {∞}` together with a multiplier group.
///
/// The point `p` stands for infinity. The acting group is
/// `x -> m·x + t (mod p)` for `m` in the multiplier group and `t` in `Z_p`,
/// with infinity fixed; splits are carried along with the blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RotationalSpec {
    p: u32,
    base_blocks: Vec<NestedBlock>,
    multipliers: Vec<u32>,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl RotationalSpec {
    pub fn new(p: u32, base_blocks: Vec<NestedBlock>, multipliers: Vec<u32>) -> Result<RotationalSpec> {
        if p < 3 {
            return Err(Error::InconsistentSpec(format!("modulus {p} too small")));
        }
        for b in &base_blocks {
            if let Some(x) = b.quad().points().iter().find(|x| x.0 > p) {
                return Err(Error::PointOutOfRange { point: x.0, v: p + 1 });
            }
        }
        let mut mults: Vec<u32> = multipliers.iter().map(|m| m % p).collect();
        mults.sort_unstable();
        mults.dedup();
        if !mults.contains(&1) {
            return Err(Error::InconsistentSpec("multiplier group must contain 1".into()));
        }
        if let Some(m) = mults.iter().find(|&&m| gcd(m, p) != 1) {
            return Err(Error::InconsistentSpec(format!("multiplier {m} is not a unit mod {p}")));
        }
        for &a in &mults {
            for &b in &mults {
                let ab = (a as u64 * b as u64 % p as u64) as u32;
                if mults.binary_search(&ab).is_err() {
                    return Err(Error::InconsistentSpec(format!(
                        "multipliers not closed: {a}·{b} = {ab} mod {p}"
                    )));
                }
            }
        }
        Ok(RotationalSpec { p, base_blocks, multipliers: mults })
    }

    /// Shift group only.
    pub fn cyclic(p: u32, base_blocks: Vec<NestedBlock>) -> Result<RotationalSpec> {
        RotationalSpec::new(p, base_blocks, vec![1])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn v(&self) -> u32 {
        self.p + 1
    }

    pub fn infinity(&self) -> Point {
        Point(self.p)
    }

    pub fn base_blocks(&self) -> &[NestedBlock] {
        &self.base_blocks
    }

    pub fn base_quads(&self) -> Vec<Quad> {
        self.base_blocks.iter().map(NestedBlock::quad).collect()
    }

    pub fn multipliers(&self) -> &[u32] {
        &self.multipliers
    }

    /// Same base blocks with new splits, given in base block order.
    pub fn with_splits(&self, splits: Vec<NestedBlock>) -> Result<RotationalSpec> {
        if splits.len() != self.base_blocks.len() {
            return Err(Error::InvalidSplit(format!(
                "{} splits for {} base blocks",
                splits.len(),
                self.base_blocks.len()
            )));
        }
        for (s, b) in splits.iter().zip(&self.base_blocks) {
            if s.quad() != b.quad() {
                return Err(Error::InvalidSplit(format!("split {s} does not cover base block {}", b.quad())));
            }
        }
        Ok(RotationalSpec { p: self.p, base_blocks: splits, multipliers: self.multipliers.clone() })
    }

    #[inline]
    pub fn image(&self, x: Point, m: u32, t: u32) -> Point {
        if x.0 == self.p {
            x
        } else {
            Point(((x.0 as u64 * m as u64 + t as u64) % self.p as u64) as u32)
        }
    }

    pub fn map_block(&self, b: &NestedBlock, m: u32, t: u32) -> NestedBlock {
        b.map_points(|x| self.image(x, m, t))
            .expect("group elements are bijections")
    }

    /// All images of one base block, deduplicated by point set.
    pub fn orbit(&self, b: &NestedBlock) -> Vec<NestedBlock> {
        let mut seen = HashMap::new();
        for &m in &self.multipliers {
            for t in 0..self.p {
                let img = self.map_block(b, m, t);
                seen.entry(img.quad()).or_insert(img);
            }
        }
        let mut out: Vec<_> = seen.into_values().collect();
        out.sort_unstable();
        out
    }
}

/// Develop the base blocks under the full group and check the result is an
/// SQS(p + 1) with consistently propagated splits.
pub fn rotational_expand(spec: &RotationalSpec) -> Result<NestedDesign> {
    let mut blocks: HashMap<Quad, (NestedBlock, usize)> = HashMap::new();
    for (i, base) in spec.base_blocks.iter().enumerate() {
        for &m in &spec.multipliers {
            for t in 0..spec.p {
                let img = spec.map_block(base, m, t);
                match blocks.entry(img.quad()) {
                    Entry::Vacant(e) => {
                        e.insert((img, i));
                    }
                    Entry::Occupied(e) => {
                        let (prev, j) = e.get();
                        if *prev != img {
                            return Err(Error::InconsistentSpec(format!(
                                "block {} gets split {prev} from base block {j} and {img} from base block {i}",
                                img.quad()
                            )));
                        }
                    }
                }
            }
        }
    }
    let v = spec.v();
    let expected = NestedDesign::block_count_for(v);
    let design = NestedDesign::with_infinity(v, blocks.into_values().map(|(b, _)| b).collect())?;
    let report = verify_steiner(&design);
    if !report.passed {
        let witness = report
            .witness
            .map(|w| format!("; triple {{{},{},{}}} covered {} times", w.triple[0], w.triple[1], w.triple[2], w.coverage))
            .unwrap_or_default();
        return Err(Error::InconsistentSpec(format!(
            "expansion has {} blocks (expected {expected}){witness}",
            design.len()
        )));
    }
    Ok(design)
}
