//! GF(2^n) with log/antilog tables for a primitive element.

use crate::error::{Error, Result};

/// Default primitive polynomials, bit `i` standing for `x^i`.
pub fn default_polynomial(n: u32) -> Option<u32> {
    Some(match n {
        2 => 0b111,        // x^2+x+1
        3 => 0b1011,       // x^3+x+1
        4 => 0b1_0011,     // x^4+x+1
        5 => 0b10_0101,    // x^5+x^2+1
        6 => 0b100_0011,   // x^6+x+1
        7 => 0b1000_0011,  // x^7+x+1
        8 => 0x11d,        // x^8+x^4+x^3+x^2+1
        9 => 0x211,        // x^9+x^4+1
        10 => 0x409,       // x^10+x^3+1
        _ => return None,
    })
}

pub const MAX_DEGREE: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2nField {
    n: u32,
    modulus: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Gf2nField {
    /// Field defined by `modulus`, which must be primitive of degree `n`.
    pub fn new(n: u32, modulus: u32) -> Result<Gf2nField> {
        if !(2..=MAX_DEGREE).contains(&n) {
            return Err(Error::InvalidField(format!("degree {n} outside 2..={MAX_DEGREE}")));
        }
        if modulus >> n != 1 {
            return Err(Error::InvalidField(format!(
                "polynomial {modulus:#x} does not have degree {n}"
            )));
        }
        let size = 1u32 << n;
        let order = size - 1;
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![u32::MAX; size as usize];
        let mut x = 1u32;
        for i in 0..order {
            if log[x as usize] != u32::MAX {
                return Err(Error::InvalidField(format!(
                    "polynomial {modulus:#x} is not primitive: x has order {i}"
                )));
            }
            exp[i as usize] = x;
            log[x as usize] = i;
            x <<= 1;
            if x & size != 0 {
                x ^= modulus;
            }
        }
        if x != 1 {
            return Err(Error::InvalidField(format!(
                "polynomial {modulus:#x} is not primitive"
            )));
        }
        Ok(Gf2nField { n, modulus, exp, log })
    }

    pub fn with_default_polynomial(n: u32) -> Result<Gf2nField> {
        let poly = default_polynomial(n)
            .ok_or_else(|| Error::InvalidField(format!("no default polynomial for n={n}")))?;
        Gf2nField::new(n, poly)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn size(&self) -> u32 {
        1 << self.n
    }

    /// Multiplicative order `2^n - 1`.
    pub fn order(&self) -> u32 {
        self.size() - 1
    }

    /// `alpha^i`
    pub fn exp(&self, i: u64) -> u32 {
        self.exp[(i % self.order() as u64) as usize]
    }

    /// Discrete log of a nonzero element.
    pub fn log(&self, x: u32) -> Option<u32> {
        match self.log.get(x as usize) {
            Some(&l) if l != u32::MAX => Some(l),
            _ => None,
        }
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match (self.log(a), self.log(b)) {
            (Some(la), Some(lb)) => self.exp(la as u64 + lb as u64),
            _ => 0,
        }
    }
}
