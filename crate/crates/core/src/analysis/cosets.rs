use serde::Serialize;

use crate::error::{Error, Result};

/// Orbits of `Z_m \ {0}` under `x -> 2x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetSet {
    pub modulus: u64,
    /// Each coset starts at its smallest element and lists successive
    /// doublings; cosets are ordered by that leader.
    pub cosets: Vec<Vec<u64>>,
}

impl CosetSet {
    pub fn coset_of(&self, x: u64) -> Option<usize> {
        let x = x % self.modulus;
        self.cosets.iter().position(|c| c.contains(&x))
    }

    pub fn leader(&self, index: usize) -> u64 {
        self.cosets[index][0]
    }

    /// Index of the coset of `-x` for the coset at `index`.
    pub fn negated(&self, index: usize) -> usize {
        let x = self.leader(index);
        self.coset_of(self.modulus - x).expect("cosets partition the nonzero residues")
    }
}

pub fn cyclotomic_cosets(m: u64) -> Result<CosetSet> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(Error::InvalidModulus(m));
    }
    let mut seen = vec![false; m as usize];
    let mut cosets = Vec::new();
    for leader in 1..m {
        if seen[leader as usize] {
            continue;
        }
        let mut coset = Vec::new();
        let mut x = leader;
        while !seen[x as usize] {
            seen[x as usize] = true;
            coset.push(x);
            x = 2 * x % m;
        }
        cosets.push(coset);
    }
    Ok(CosetSet { modulus: m, cosets })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_31() {
        let c = cyclotomic_cosets(31).unwrap();
        assert_eq!(c.cosets.len(), 6);
        assert!(c.cosets.iter().all(|k| k.len() == 5));
        assert_eq!(c.cosets[0], vec![1, 2, 4, 8, 16]);
        assert_eq!(c.cosets[1], vec![3, 6, 12, 24, 17]);
        assert_eq!(c.cosets[2], vec![5, 10, 20, 9, 18]);
        let leaders: Vec<u64> = (0..6).map(|i| c.leader(i)).collect();
        assert_eq!(leaders, vec![1, 3, 5, 7, 11, 15]);
        let mut c7 = c.cosets[3].clone();
        c7.sort_unstable();
        assert_eq!(c7, vec![7, 14, 19, 25, 28]);
        let mut c11 = c.cosets[4].clone();
        c11.sort_unstable();
        assert_eq!(c11, vec![11, 13, 21, 22, 26]);
        let mut c15 = c.cosets[5].clone();
        c15.sort_unstable();
        assert_eq!(c15, vec![15, 23, 27, 29, 30]);
        // C_1 pairs with C_15 under negation
        assert_eq!(c.leader(c.negated(0)), 15);
        assert_eq!(c.leader(c.negated(1)), 7);
        assert_eq!(c.leader(c.negated(2)), 11);
    }

    #[test]
    fn small_moduli() {
        assert_eq!(cyclotomic_cosets(7).unwrap().cosets, vec![vec![1, 2, 4], vec![3, 6, 5]]);
        assert_eq!(cyclotomic_cosets(3).unwrap().cosets, vec![vec![1, 2]]);
        // 9: 2 has order 6, and {3, 6} is its own coset
        assert_eq!(cyclotomic_cosets(9).unwrap().cosets, vec![vec![1, 2, 4, 8, 7, 5], vec![3, 6]]);
    }

    #[test]
    fn even_modulus() {
        assert_eq!(cyclotomic_cosets(8), Err(Error::InvalidModulus(8)));
        assert!(cyclotomic_cosets(1).is_err());
    }
}
