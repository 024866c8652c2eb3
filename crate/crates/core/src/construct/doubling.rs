//! Doubling constructions: a nested SQS(v) on `Q` gives a nested SQS(2v)
//! on `Q × {0,1}`, with `(x, i)` stored as point `x + i·v`.

use crate::construct::factorization::OneFactorization;
use crate::design::{pair_census, verify_steiner, NestedBlock, NestedDesign, Point};
use crate::error::{Error, Result};

#[inline]
pub fn doubled_point(x: Point, side: u32, v: u32) -> Point {
    debug_assert!(side < 2 && x.0 < v);
    Point(x.0 + side * v)
}

fn require_steiner(input: &NestedDesign) -> Result<()> {
    let report = verify_steiner(input);
    if report.passed {
        return Ok(());
    }
    let detail = match report.witness {
        Some(w) => format!(
            "triple {{{},{},{}}} covered {} times",
            w.triple[0], w.triple[1], w.triple[2], w.coverage
        ),
        None => format!("v={} is not a valid order", input.v()),
    };
    Err(Error::Precondition(format!("input is not an SQS({}): {detail}", input.v())))
}

/// Type I: two copies of the input, splits copied.
/// Type II: `{(x,0),(y,0),(z,1),(w,1)}` for `{x,y}`, `{z,w}` in a common
/// factor, split into the within-side pairs.
pub fn doubling_a(input: &NestedDesign, factorization: &OneFactorization) -> Result<NestedDesign> {
    require_steiner(input)?;
    factorization.validate()?;
    let v = input.v();
    if factorization.v() != v {
        return Err(Error::Precondition(format!(
            "factorization is on {} points, design on {v}",
            factorization.v()
        )));
    }
    let pt = |x: Point, side: u32| doubled_point(x, side, v);

    let mut blocks = Vec::with_capacity(NestedDesign::block_count_for(2 * v) as usize);
    for side in 0..2 {
        for b in input.blocks() {
            blocks.push(b.map_points(|x| pt(x, side))?);
        }
    }
    for factor in factorization.factors() {
        for left in factor {
            for right in factor {
                blocks.push(NestedBlock::from_points(
                    pt(left.lo(), 0),
                    pt(left.hi(), 0),
                    pt(right.lo(), 1),
                    pt(right.hi(), 1),
                )?);
            }
        }
    }
    NestedDesign::new(2 * v, blocks)
}

/// Type I: `{(x,i),(y,j),(z,k),(w,m)}` with `i+j+k+m` even, split as the
/// input split. Type II: `{(x,0),(x,1),(y,0),(y,1)}` split into the two
/// same-point pairs.
///
/// Requires every pair of the input to be an ND-pair.
pub fn doubling_b(input: &NestedDesign) -> Result<NestedDesign> {
    require_steiner(input)?;
    let census = pair_census(input);
    if let Some(missing) = crate::design::all_pairs(input.v()).find(|p| !census.is_nd(*p)) {
        return Err(Error::MissingNdPair(missing));
    }
    let v = input.v();
    let pt = |x: Point, side: u32| doubled_point(x, side, v);

    let mut blocks = Vec::with_capacity(NestedDesign::block_count_for(2 * v) as usize);
    for b in input.blocks() {
        let (a, bb) = (b.first().lo(), b.first().hi());
        let (c, d) = (b.second().lo(), b.second().hi());
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let m = (i + j + k) % 2;
                    blocks.push(NestedBlock::from_points(pt(a, i), pt(bb, j), pt(c, k), pt(d, m))?);
                }
            }
        }
    }
    for y in 1..v {
        for x in 0..y {
            let (x, y) = (Point(x), Point(y));
            blocks.push(NestedBlock::from_points(pt(x, 0), pt(x, 1), pt(y, 0), pt(y, 1))?);
        }
    }
    NestedDesign::new(2 * v, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::factorization::one_factorization;
    use crate::design::{all_pairs, Quad};

    fn nb(a: u32, b: u32, c: u32, d: u32) -> NestedBlock {
        NestedBlock::from_points(a, b, c, d).unwrap()
    }

    fn sqs4() -> NestedDesign {
        NestedDesign::new(4, vec![nb(0, 1, 2, 3)]).unwrap()
    }

    #[test]
    fn doubling_a_from_sqs4() {
        let out = doubling_a(&sqs4(), &one_factorization(4).unwrap()).unwrap();
        assert_eq!(out.len(), 14);
        assert!(verify_steiner(&out).passed);
        let c = pair_census(&out);
        // within-side pairs only: 2·C(4,2)
        assert_eq!(c.nd_pair_count(), 12);
        for p in all_pairs(8) {
            let same_side = (p.lo().0 < 4) == (p.hi().0 < 4);
            assert_eq!(c.is_nd(p), same_side);
        }
    }

    #[test]
    fn doubling_b_needs_every_pair() {
        // SQS(4) split once has 2 of 6 pairs as ND-pairs
        assert!(matches!(doubling_b(&sqs4()), Err(Error::MissingNdPair(_))));
    }

    #[test]
    fn doubling_rejects_non_steiner_input() {
        let broken = NestedDesign::new(8, vec![nb(0, 1, 2, 3)]).unwrap();
        assert!(matches!(doubling_b(&broken), Err(Error::Precondition(_))));
        assert!(matches!(
            doubling_a(&broken, &one_factorization(8).unwrap()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn mismatched_factorization() {
        assert!(doubling_a(&sqs4(), &one_factorization(6).unwrap()).is_err());
    }

    #[test]
    fn type_ii_blocks_of_doubling_b() {
        let sqs8 = crate::catalog::sqs8_uniform();
        let out = doubling_b(&sqs8).unwrap();
        let q = Quad::new([2u32, 10, 5, 13]).unwrap();
        let idx = out.position(&q).unwrap();
        assert_eq!(out.blocks()[idx], nb(2, 10, 5, 13));
    }
}
