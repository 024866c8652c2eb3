//! Built-in nested designs and rotational specs with their expected
//! censuses. Every block carries its split; `INF` marks the fixed point.

use crate::analysis::{classify, NestingKind};
use crate::construct::{block_classes, nest_from_class_reps, rotational_expand, RotationalSpec};
use crate::design::{pair_census, NestedBlock, NestedDesign};
use crate::error::{Error, Result};
use crate::field::Gf2nField;

const INF: u32 = u32::MAX;

type Split = [u32; 4];

fn block(s: &Split, inf: u32) -> NestedBlock {
    let m = |x: u32| if x == INF { inf } else { x };
    NestedBlock::from_points(m(s[0]), m(s[1]), m(s[2]), m(s[3])).expect("catalog blocks are valid")
}

fn blocks(splits: &[Split], inf: u32) -> Vec<NestedBlock> {
    splits.iter().map(|s| block(s, inf)).collect()
}

// Boolean SQS(8) on Z_8 read as 3-bit vectors.
const BOOL8: [Split; 14] = [
    [0, 1, 2, 3], [0, 1, 4, 5], [0, 1, 6, 7], [0, 2, 4, 6], [0, 2, 5, 7],
    [0, 3, 4, 7], [0, 3, 5, 6], [1, 2, 5, 6], [1, 2, 4, 7], [1, 3, 4, 6],
    [1, 3, 5, 7], [2, 3, 4, 5], [2, 3, 6, 7], [4, 5, 6, 7],
];

// Complete uniform nested SQS(8) on Z_7 ∪ {∞}.
const SQS8_UNIFORM: [Split; 14] = [
    [INF, 0, 2, 6], [INF, 1, 0, 3], [INF, 2, 1, 4], [INF, 3, 2, 5],
    [INF, 4, 3, 6], [INF, 5, 0, 4], [INF, 6, 1, 5], [0, 1, 4, 6],
    [0, 2, 3, 4], [0, 5, 1, 2], [0, 6, 3, 5], [1, 3, 4, 5],
    [1, 6, 2, 3], [2, 4, 5, 6],
];

// Uniform nested SQS(10) on Z_5 × Z_2, written as ((x,i),(y,j)) pairs.
type Z5x2 = (u32, u32);
const SQS10_UNIFORM: [[Z5x2; 4]; 30] = [
    [(0, 0), (2, 1), (0, 1), (1, 1)], [(2, 0), (3, 1), (1, 1), (2, 1)], [(4, 0), (4, 1), (2, 1), (3, 1)],
    [(1, 0), (0, 1), (3, 1), (4, 1)], [(3, 0), (1, 1), (4, 1), (0, 1)],
    [(0, 0), (4, 1), (1, 1), (3, 1)], [(2, 0), (0, 1), (2, 1), (4, 1)], [(4, 0), (1, 1), (0, 1), (3, 1)],
    [(1, 0), (2, 1), (1, 1), (4, 1)], [(3, 0), (3, 1), (0, 1), (2, 1)],
    [(1, 0), (2, 0), (0, 1), (1, 1)], [(3, 0), (4, 0), (1, 1), (2, 1)], [(0, 0), (1, 0), (2, 1), (3, 1)],
    [(2, 0), (3, 0), (3, 1), (4, 1)], [(0, 0), (4, 0), (0, 1), (4, 1)],
    [(1, 0), (4, 0), (0, 1), (2, 1)], [(1, 0), (3, 0), (1, 1), (3, 1)], [(0, 0), (3, 0), (2, 1), (4, 1)],
    [(0, 0), (2, 0), (0, 1), (3, 1)], [(2, 0), (4, 0), (1, 1), (4, 1)],
    [(1, 0), (2, 0), (0, 0), (4, 1)], [(2, 0), (3, 0), (1, 0), (2, 1)], [(3, 0), (4, 0), (2, 0), (0, 1)],
    [(0, 0), (4, 0), (3, 0), (3, 1)], [(0, 0), (1, 0), (4, 0), (1, 1)],
    [(1, 0), (3, 0), (4, 0), (4, 1)], [(2, 0), (4, 0), (0, 0), (2, 1)], [(0, 0), (3, 0), (1, 0), (0, 1)],
    [(1, 0), (4, 0), (2, 0), (3, 1)], [(0, 0), (2, 0), (3, 0), (1, 1)],
];

/// `(x, i) -> x + 5 i`
pub fn z5x2_point(x: u32, i: u32) -> u32 {
    x + 5 * i
}

// Z_19 ∪ {∞}, shifts only.
const RO20: [Split; 15] = [
    [INF, 1, 0, 8], [INF, 2, 0, 5], [INF, 13, 0, 9], [0, 1, 2, 4], [0, 1, 6, 9],
    [0, 1, 10, 17], [0, 2, 6, 14], [0, 2, 9, 15], [0, 3, 4, 16], [0, 3, 5, 10],
    [0, 4, 5, 9], [0, 4, 7, 15], [0, 5, 6, 16], [0, 6, 11, 18], [0, 6, 8, 17],
];

// Z_25 ∪ {∞}, shifts only. The third block is listed elsewhere as
// [∞,14 | 0,7]; that orbit repeats difference 7 and never covers 4, so the
// expansion is not an SQS. Its shift class must be {∞,0,4,11}, and the
// split [∞,21 | 0,7] keeps the listed pair {0,7}.
const RO26: [Split; 26] = [
    [INF, 3, 0, 1], [INF, 13, 0, 5], [INF, 21, 0, 7], [INF, 15, 0, 6], [0, 1, 12, 22],
    [0, 1, 13, 21], [0, 1, 14, 23], [0, 2, 1, 5], [0, 2, 6, 9], [0, 2, 7, 17],
    [0, 2, 15, 20], [0, 3, 5, 11], [0, 3, 8, 17], [0, 3, 13, 20], [0, 4, 2, 12],
    [0, 4, 6, 18], [0, 4, 10, 21], [0, 5, 6, 24], [0, 5, 9, 21], [0, 6, 3, 10],
    [0, 6, 11, 22], [0, 8, 1, 9], [0, 8, 6, 19], [0, 9, 7, 18], [0, 9, 10, 24],
    [0, 10, 7, 19],
];

// Z_37 ∪ {∞}, shifts only. [8, 0, 9, 33] is kept unsorted; canonical
// form sorts it.
const RO38: [Split; 57] = [
    [INF, 22, 0, 2], [INF, 33, 0, 3], [INF, 14, 0, 8], [INF, 10, 0, 11], [INF, 18, 0, 13],
    [INF, 28, 0, 16], [0, 1, 2, 6], [0, 1, 7, 19], [0, 1, 9, 35], [0, 1, 10, 24],
    [0, 1, 13, 30], [0, 1, 20, 34], [0, 2, 4, 16], [0, 2, 5, 8], [0, 2, 13, 36],
    [0, 2, 19, 24], [0, 2, 25, 30], [0, 3, 7, 28], [0, 3, 9, 19], [0, 3, 12, 20],
    [0, 3, 17, 27], [0, 4, 1, 11], [0, 4, 5, 21], [0, 4, 8, 22], [0, 4, 15, 27],
    [0, 4, 17, 32], [0, 5, 3, 26], [0, 5, 19, 35], [0, 5, 23, 29], [0, 5, 27, 34],
    [0, 6, 4, 30], [0, 6, 5, 31], [0, 6, 7, 27], [0, 6, 10, 32], [0, 6, 17, 26],
    [0, 7, 5, 25], [0, 7, 12, 23], [0, 7, 14, 31], [0, 7, 17, 36], [0, 7, 26, 35],
    [0, 8, 6, 23], [8, 0, 9, 33], [0, 8, 10, 35], [0, 8, 11, 24], [0, 9, 4, 14],
    [0, 9, 6, 24], [0, 9, 10, 21], [0, 9, 15, 30], [0, 10, 4, 19], [0, 10, 22, 34],
    [0, 12, 8, 32], [0, 13, 9, 29], [0, 13, 16, 35], [0, 14, 15, 36], [0, 15, 3, 21],
    [0, 15, 8, 26], [0, 16, 8, 27],
];

// Z_61 ∪ {∞} with multiplier group {1, 9, 20, 34, 58}.
const RO62_MULTIPLIERS: [u32; 5] = [1, 9, 20, 34, 58];
const RO62: [Split; 31] = [
    [INF, 5, 0, 1], [INF, 10, 0, 2], [0, 1, 20, 30], [0, 1, 21, 42], [0, 1, 22, 23],
    [0, 1, 24, 25], [0, 1, 26, 31], [0, 1, 29, 41], [0, 1, 33, 57], [0, 2, 14, 44],
    [0, 2, 18, 56], [0, 2, 20, 22], [0, 2, 30, 53], [0, 2, 33, 49], [0, 2, 40, 42],
    [0, 4, 7, 58], [0, 4, 8, 53], [0, 4, 9, 13], [0, 4, 12, 28], [0, 4, 17, 43],
    [0, 4, 22, 46], [0, 4, 33, 55], [0, 4, 36, 44], [0, 5, 14, 52], [0, 5, 18, 28],
    [0, 5, 34, 39], [0, 5, 48, 56], [0, 8, 1, 9], [0, 8, 21, 51], [0, 10, 1, 11],
    [0, 10, 12, 56],
];

// One split per block class of the Boolean SQS(32) for
// x^5 + x^2 + 1, in exponent coordinates over Z_31 ∪ {∞}.
pub const BOOL32_POLYNOMIAL: u32 = 0b10_0101;
const BOOL32: [Split; 8] = [
    [0, 1, 2, 11], [0, 1, 3, 27], [0, 1, 4, 17], [0, 1, 5, 19],
    [0, 26, 1, 7], [0, 24, 1, 14], [0, 5, 10, 22], [0, 2, INF, 5],
];

#[derive(Clone, Debug)]
pub enum CatalogPayload {
    Flat(NestedDesign),
    Rotational(RotationalSpec),
    BooleanClasses { n: u32, polynomial: u32, splits: Vec<NestedBlock> },
}

/// Census facts every entry must reproduce once expanded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expected {
    pub v: u32,
    pub blocks: usize,
    pub nd_pairs: u64,
    pub mu_min: u32,
    pub mu_max: u32,
    pub kind: NestingKind,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub payload: CatalogPayload,
    pub expected: Expected,
}

impl CatalogEntry {
    pub fn kind(&self) -> &'static str {
        match self.payload {
            CatalogPayload::Flat(_) => "flat-design",
            CatalogPayload::Rotational(_) => "rotational-spec",
            CatalogPayload::BooleanClasses { .. } => "boolean-class-spec",
        }
    }

    /// Base blocks or listed blocks, as stored.
    pub fn listed_blocks(&self) -> Vec<NestedBlock> {
        match &self.payload {
            CatalogPayload::Flat(d) => d.blocks().to_vec(),
            CatalogPayload::Rotational(s) => s.base_blocks().to_vec(),
            CatalogPayload::BooleanClasses { splits, .. } => splits.clone(),
        }
    }

    /// Rotational form, for entries that have one.
    pub fn rotational_spec(&self) -> Result<Option<RotationalSpec>> {
        match &self.payload {
            CatalogPayload::Flat(_) => Ok(None),
            CatalogPayload::Rotational(s) => Ok(Some(s.clone())),
            CatalogPayload::BooleanClasses { n, polynomial, splits } => {
                let classes = block_classes(&Gf2nField::new(*n, *polynomial)?)?;
                Ok(Some(classes.spec_for(splits)?))
            }
        }
    }

    /// The full nested design.
    pub fn design(&self) -> Result<NestedDesign> {
        match &self.payload {
            CatalogPayload::Flat(d) => Ok(d.clone()),
            CatalogPayload::Rotational(s) => rotational_expand(s),
            CatalogPayload::BooleanClasses { n, polynomial, splits } => {
                let classes = block_classes(&Gf2nField::new(*n, *polynomial)?)?;
                nest_from_class_reps(&classes, splits)
            }
        }
    }

    /// Expand and compare against the expected facts; returns a description
    /// of the first mismatch.
    pub fn check(&self) -> Result<std::result::Result<(), String>> {
        let d = self.design()?;
        let c = pair_census(&d);
        let k = classify(&d);
        let got = Expected {
            v: d.v(),
            blocks: d.len(),
            nd_pairs: c.nd_pair_count() as u64,
            mu_min: k.mu_min,
            mu_max: k.mu_max,
            kind: k.kind,
        };
        Ok(if got == self.expected {
            Ok(())
        } else {
            Err(format!("{}: expected {:?}, got {:?}", self.name, self.expected, got))
        })
    }
}

pub const CATALOG_NAMES: [&str; 8] = ["bool8", "sqs8", "sqs10", "ro20", "ro26", "ro38", "ro62", "bool32"];

pub fn bool8() -> NestedDesign {
    NestedDesign::new(8, blocks(&BOOL8, INF)).expect("valid")
}

/// Complete uniform nested SQS(8); point 7 is infinity.
pub fn sqs8_uniform() -> NestedDesign {
    NestedDesign::with_infinity(8, blocks(&SQS8_UNIFORM, 7)).expect("valid")
}

/// Uniform nested SQS(10) with 30 ND-pairs, on `x + 5 i`.
pub fn sqs10_uniform() -> NestedDesign {
    let bl = SQS10_UNIFORM
        .iter()
        .map(|q| {
            let [a, b, c, d] = q.map(|(x, i)| z5x2_point(x, i));
            NestedBlock::from_points(a, b, c, d).expect("valid")
        })
        .collect();
    NestedDesign::new(10, bl).expect("valid")
}

fn rotational(p: u32, splits: &[Split], multipliers: &[u32]) -> RotationalSpec {
    RotationalSpec::new(p, blocks(splits, p), multipliers.to_vec()).expect("valid spec")
}

fn complete(v: u32, mu: u32) -> Expected {
    Expected {
        v,
        blocks: NestedDesign::block_count_for(v) as usize,
        nd_pairs: (v as u64) * (v as u64 - 1) / 2,
        mu_min: mu,
        mu_max: mu,
        kind: NestingKind::CompleteUniform,
    }
}

pub fn catalog_get(name: &str) -> Result<CatalogEntry> {
    let entry = match name {
        "bool8" => CatalogEntry {
            name: "bool8",
            description: "Boolean SQS(8) nested by smallest/largest pairs",
            payload: CatalogPayload::Flat(bool8()),
            expected: Expected { v: 8, blocks: 14, nd_pairs: 12, mu_min: 2, mu_max: 3, kind: NestingKind::QuasiUniform },
        },
        "sqs8" => CatalogEntry {
            name: "sqs8",
            description: "complete uniform nested SQS(8) on Z_7 ∪ {∞}",
            payload: CatalogPayload::Flat(sqs8_uniform()),
            expected: complete(8, 1),
        },
        "sqs10" => CatalogEntry {
            name: "sqs10",
            description: "uniform nested SQS(10) with 30 ND-pairs on Z_5 × Z_2",
            payload: CatalogPayload::Flat(sqs10_uniform()),
            expected: Expected { v: 10, blocks: 30, nd_pairs: 30, mu_min: 2, mu_max: 2, kind: NestingKind::Uniform },
        },
        "ro20" => CatalogEntry {
            name: "ro20",
            description: "complete uniform rotational SQS(20), 15 base blocks",
            payload: CatalogPayload::Rotational(rotational(19, &RO20, &[1])),
            expected: complete(20, 3),
        },
        "ro26" => CatalogEntry {
            name: "ro26",
            description: "complete uniform rotational SQS(26), 26 base blocks",
            payload: CatalogPayload::Rotational(rotational(25, &RO26, &[1])),
            expected: complete(26, 4),
        },
        "ro38" => CatalogEntry {
            name: "ro38",
            description: "complete uniform rotational SQS(38), 57 base blocks",
            payload: CatalogPayload::Rotational(rotational(37, &RO38, &[1])),
            expected: complete(38, 6),
        },
        "ro62" => CatalogEntry {
            name: "ro62",
            description: "complete uniform rotational SQS(62), 31 base blocks, multipliers {1,9,20,34,58}",
            payload: CatalogPayload::Rotational(rotational(61, &RO62, &RO62_MULTIPLIERS)),
            expected: complete(62, 10),
        },
        "bool32" => CatalogEntry {
            name: "bool32",
            description: "complete uniform Boolean SQS(32) from one split per block class",
            payload: CatalogPayload::BooleanClasses {
                n: 5,
                polynomial: BOOL32_POLYNOMIAL,
                splits: blocks(&BOOL32, 31),
            },
            expected: complete(32, 5),
        },
        _ => {
            return Err(Error::NotFound { name: name.to_string(), available: CATALOG_NAMES.join(", ") });
        }
    };
    Ok(entry)
}

pub fn catalog() -> Vec<CatalogEntry> {
    CATALOG_NAMES.iter().map(|n| catalog_get(n).expect("listed")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listed_sizes() {
        let sizes: Vec<(&str, usize)> = catalog().iter().map(|e| (e.name, e.listed_blocks().len())).collect();
        assert_eq!(
            sizes,
            vec![
                ("bool8", 14),
                ("sqs8", 14),
                ("sqs10", 30),
                ("ro20", 15),
                ("ro26", 26),
                ("ro38", 57),
                ("ro62", 31),
                ("bool32", 8)
            ]
        );
    }

    #[test]
    fn ro26_first_block() {
        let e = catalog_get("ro26").unwrap();
        // [{∞,3}|{0,1}], canonical form puts {0,1} first
        assert_eq!(e.listed_blocks()[0], NestedBlock::from_points(25u32, 3, 0, 1).unwrap());
    }

    #[test]
    fn ro26_listed_third_block_breaks_the_system() {
        let mut listed = RO26;
        listed[2] = [INF, 14, 0, 7];
        let spec = rotational(25, &listed, &[1]);
        assert!(rotational_expand(&spec).is_err());
        let fixed = rotational(25, &RO26, &[1]);
        assert!(crate::design::verify_steiner(&rotational_expand(&fixed).unwrap()).passed);
    }

    #[test]
    fn unknown_name_lists_available() {
        let err = catalog_get("ro14").unwrap_err();
        assert!(err.to_string().contains("ro20"), "{err}");
    }

    #[test]
    fn small_entries_check_out() {
        for name in ["bool8", "sqs8", "sqs10", "ro20"] {
            catalog_get(name).unwrap().check().unwrap().unwrap();
        }
    }
}
