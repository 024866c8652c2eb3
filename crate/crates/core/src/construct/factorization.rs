use std::collections::HashSet;

use crate::design::{pair_slots, Pair, Point};
use crate::error::{Error, Result};

/// A partition of the edges of `K_v` into `v - 1` perfect matchings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneFactorization {
    v: u32,
    factors: Vec<Vec<Pair>>,
}

impl OneFactorization {
    /// Wrap explicit factors, checking the one-factorization properties.
    pub fn from_factors(v: u32, factors: Vec<Vec<Pair>>) -> Result<OneFactorization> {
        let f = OneFactorization { v, factors };
        f.validate()?;
        Ok(f)
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn factors(&self) -> &[Vec<Pair>] {
        &self.factors
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.v;
        let bad = |msg: String| Err(Error::Precondition(format!("one-factorization of K_{v}: {msg}")));
        if v == 0 || v % 2 == 1 {
            return bad("order must be even".into());
        }
        if self.factors.len() != (v - 1) as usize {
            return bad(format!("{} factors, expected {}", self.factors.len(), v - 1));
        }
        let mut edges = HashSet::with_capacity(pair_slots(v));
        for (i, factor) in self.factors.iter().enumerate() {
            let mut covered = vec![false; v as usize];
            if factor.len() != (v / 2) as usize {
                return bad(format!("factor {i} has {} edges", factor.len()));
            }
            for e in factor {
                for p in [e.lo(), e.hi()] {
                    if p.0 >= v || covered[p.0 as usize] {
                        return bad(format!("factor {i} is not a perfect matching at {p}"));
                    }
                    covered[p.0 as usize] = true;
                }
                if !edges.insert(*e) {
                    return bad(format!("edge {e} repeated"));
                }
            }
        }
        Ok(())
    }
}

/// Round-robin (circle) one-factorization with point `v - 1` fixed:
/// factor `i` is `{v-1, i}` together with `{i+j, i-j}` mod `v - 1`.
pub fn one_factorization(v: u32) -> Result<OneFactorization> {
    if v < 2 || v % 2 == 1 {
        return Err(Error::InvalidOrder { v: v as u64, reason: "one-factorization needs an even order".into() });
    }
    let m = v - 1;
    let factors = (0..m)
        .map(|i| {
            let mut f = vec![Pair::new(Point(m), Point(i)).expect("distinct")];
            for j in 1..=(v - 2) / 2 {
                let a = (i + j) % m;
                let b = (i + m - j) % m;
                f.push(Pair::new(a, b).expect("j < m/2 keeps the points distinct"));
            }
            f.sort_unstable();
            f
        })
        .collect();
    Ok(OneFactorization { v, factors })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_orders() {
        let f2 = one_factorization(2).unwrap();
        assert_eq!(f2.factors(), &[vec![Pair::new(0, 1).unwrap()]]);

        let f4 = one_factorization(4).unwrap();
        assert_eq!(f4.factors().len(), 3);
        assert!(f4.factors().iter().all(|f| f.len() == 2));
        f4.validate().unwrap();
    }

    #[test]
    fn brute_force_check_k8() {
        let f = one_factorization(8).unwrap();
        assert_eq!(f.factors().len(), 7);
        // every edge of K_8 in exactly one factor; each factor a matching
        let mut hits = [0; 28];
        for factor in f.factors() {
            let mut deg = [0; 8];
            for e in factor {
                hits[e.index()] += 1;
                deg[e.lo().0 as usize] += 1;
                deg[e.hi().0 as usize] += 1;
            }
            assert_eq!(deg, [1; 8]);
        }
        assert!(hits.iter().all(|&h| h == 1));
    }

    #[test]
    fn larger_orders_validate() {
        for v in (2..=40).step_by(2) {
            one_factorization(v).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn odd_order_is_rejected() {
        assert!(matches!(one_factorization(7), Err(Error::InvalidOrder { .. })));
        assert!(one_factorization(0).is_err());
    }

    #[test]
    fn repeated_edge_fails_validation() {
        let e = |a, b| Pair::new(a, b).unwrap();
        let bad = vec![vec![e(0, 1), e(2, 3)], vec![e(0, 1), e(2, 3)], vec![e(0, 3), e(1, 2)]];
        assert!(OneFactorization::from_factors(4, bad).is_err());
    }
}
