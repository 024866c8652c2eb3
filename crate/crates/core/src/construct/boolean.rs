use std::collections::{HashMap, HashSet};

use crate::construct::rotational::{rotational_expand, RotationalSpec};
use crate::design::{NestedBlock, NestedDesign, Point, Quad};
use crate::error::{Error, Result};
use crate::field::Gf2nField;

fn field_for(n: u32, poly: Option<u32>) -> Result<Gf2nField> {
    match poly {
        Some(p) => Gf2nField::new(n, p),
        None => Gf2nField::with_default_polynomial(n),
    }
}

/// The Boolean SQS(2^n): all 4-subsets of GF(2)^n summing to zero.
///
/// Points are the vectors read as integers; every block is split into its
/// two smallest and two largest points.
pub fn boolean_sqs(n: u32, poly: Option<u32>) -> Result<NestedDesign> {
    let field = field_for(n, poly)?;
    let size = field.size();
    let mut blocks = Vec::with_capacity(NestedDesign::block_count_for(size) as usize);
    for c in 2..size {
        for b in 1..c {
            for a in 0..b {
                let d = a ^ b ^ c;
                if d > c {
                    blocks.push(NestedBlock::from_points(a, b, c, d)?);
                }
            }
        }
    }
    NestedDesign::new(size, blocks)
}

/// Relabelling of GF(2)^n by discrete logs: `alpha^i -> i`, `0 -> ∞`.
#[derive(Clone, Debug)]
pub struct BooleanRelabel {
    field: Gf2nField,
}

pub fn boolean_to_rotational(field: &Gf2nField) -> BooleanRelabel {
    BooleanRelabel { field: field.clone() }
}

impl BooleanRelabel {
    pub fn field(&self) -> &Gf2nField {
        &self.field
    }

    pub fn infinity(&self) -> Point {
        Point(self.field.order())
    }

    pub fn map(&self, vector: u32) -> Point {
        match self.field.log(vector) {
            Some(i) => Point(i),
            None => self.infinity(),
        }
    }

    pub fn unmap(&self, point: Point) -> u32 {
        if point == self.infinity() {
            0
        } else {
            self.field.exp(point.0 as u64)
        }
    }

    /// Relabel a design on GF(2)^n into exponent coordinates.
    pub fn apply(&self, design: &NestedDesign) -> Result<NestedDesign> {
        if design.v() != self.field.size() {
            return Err(Error::Precondition(format!(
                "design has {} points, field has {}",
                design.v(),
                self.field.size()
            )));
        }
        let blocks = design
            .blocks()
            .iter()
            .map(|b| b.map_points(|x| self.map(x.0)))
            .collect::<Result<Vec<_>>>()?;
        NestedDesign::with_infinity(design.v(), blocks)
    }
}

/// Boolean SQS(2^n) in exponent coordinates over `Z_{2^n-1} ∪ {∞}`, each
/// block split into its two smallest and two largest labels.
pub fn rotational_boolean_sqs(field: &Gf2nField) -> Result<NestedDesign> {
    let flat = boolean_sqs(field.n(), Some(field.modulus()))?;
    let relabel = boolean_to_rotational(field);
    let blocks = flat
        .blocks()
        .iter()
        .map(|b| Ok(b.map_points(|x| relabel.map(x.0))?.quad().splits()[0]))
        .collect::<Result<Vec<_>>>()?;
    NestedDesign::with_infinity(field.size(), blocks)
}

/// One orbit of the rotational Boolean SQS under shifts and doubling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockClass {
    /// Smallest block of the orbit, with its default split.
    pub representative: NestedBlock,
    pub orbit: Vec<Quad>,
}

#[derive(Clone, Debug)]
pub struct BooleanClasses {
    pub n: u32,
    pub modulus: u32,
    pub p: u32,
    /// Powers of two mod p, plus their negatives when negation is included.
    pub multipliers: Vec<u32>,
    pub classes: Vec<BlockClass>,
    /// Whether `x -> -x` on finite exponents maps blocks to blocks for this
    /// polynomial.
    pub negation_preserves_blocks: bool,
}

impl BooleanClasses {
    /// Index of the class containing a block.
    pub fn class_of(&self, quad: &Quad) -> Option<usize> {
        self.classes.iter().position(|c| c.orbit.binary_search(quad).is_ok())
    }

    /// Rotational spec with one base block per class, using the given splits
    /// in any order. Each class must receive exactly one split.
    pub fn spec_for(&self, splits: &[NestedBlock]) -> Result<RotationalSpec> {
        let mut assigned: Vec<Option<NestedBlock>> = vec![None; self.classes.len()];
        for s in splits {
            let idx = self
                .class_of(&s.quad())
                .ok_or_else(|| Error::InvalidSplit(format!("{s} is not a block of the system")))?;
            if let Some(prev) = assigned[idx] {
                return Err(Error::InvalidSplit(format!("{prev} and {s} lie in the same block class")));
            }
            assigned[idx] = Some(*s);
        }
        let base = assigned
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                s.ok_or_else(|| {
                    Error::InvalidSplit(format!(
                        "no split given for the class of {}",
                        self.classes[i].representative.quad()
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        RotationalSpec::new(self.p, base, self.multipliers.clone())
    }

    /// Spec built from the class representatives' default splits.
    pub fn representative_spec(&self) -> Result<RotationalSpec> {
        let reps: Vec<_> = self.classes.iter().map(|c| c.representative).collect();
        self.spec_for(&reps)
    }
}

pub fn block_classes(field: &Gf2nField) -> Result<BooleanClasses> {
    block_classes_with(field, false)
}

/// Block classes under shift and doubling, optionally also negation of the
/// finite exponents. Negation is refused when it does not preserve the
/// block set for the field's polynomial.
pub fn block_classes_with(field: &Gf2nField, negation: bool) -> Result<BooleanClasses> {
    let n = field.n();
    if n.is_multiple_of(2) {
        return Err(Error::InvalidOrder {
            v: field.size() as u64,
            reason: format!("block classes are defined for odd n, got n={n}"),
        });
    }
    let p = field.order();
    let design = rotational_boolean_sqs(field)?;
    let quads = design.quads();
    let present: HashSet<Quad> = quads.iter().copied().collect();

    let negate = |x: Point| if x.0 == p { x } else { Point((p - x.0) % p) };
    let negation_preserves_blocks = quads.iter().all(|q| {
        let img = Quad::new(q.points().map(negate)).expect("bijection");
        present.contains(&img)
    });
    if negation && !negation_preserves_blocks {
        return Err(Error::InvalidField(format!(
            "negating exponents does not preserve the blocks for polynomial {:#x}",
            field.modulus()
        )));
    }

    let mut multipliers: Vec<u32> = (0..n).map(|i| (1u64 << i) as u32 % p).collect();
    if negation {
        let neg: Vec<u32> = multipliers.iter().map(|m| p - m).collect();
        multipliers.extend(neg);
    }
    multipliers.sort_unstable();
    multipliers.dedup();
    let group = RotationalSpec::new(p, vec![], multipliers.clone())?;

    let mut class_of: HashMap<Quad, usize> = HashMap::with_capacity(quads.len());
    let mut classes = Vec::new();
    // quads are sorted, so the first unvisited block is its orbit's minimum
    for block in design.blocks() {
        let q = block.quad();
        if class_of.contains_key(&q) {
            continue;
        }
        let mut orbit: Vec<Quad> = group.orbit(block).iter().map(NestedBlock::quad).collect();
        orbit.sort_unstable();
        for o in &orbit {
            if !present.contains(o) {
                return Err(Error::InconsistentSpec(format!("image {o} of {q} is not a block")));
            }
            class_of.insert(*o, classes.len());
        }
        classes.push(BlockClass { representative: *block, orbit });
    }

    Ok(BooleanClasses {
        n,
        modulus: field.modulus(),
        p,
        multipliers,
        classes,
        negation_preserves_blocks,
    })
}

/// Propagate one split per block class to the whole Boolean SQS.
pub fn nest_from_class_reps(classes: &BooleanClasses, splits: &[NestedBlock]) -> Result<NestedDesign> {
    rotational_expand(&classes.spec_for(splits)?)
}
