//! The prime field Z/p.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest modulus accepted by [`PrimeField::new`].
pub const DEFAULT_MAX_PRIME: u32 = 9973;

/// Z/p for an odd prime p, with a precomputed table of inverses.
///
/// Cloning is cheap; the inverse table is shared.
#[derive(Clone)]
pub struct PrimeField {
    p: u32,
    inverses: Arc<[u32]>,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        Self::with_max(p, DEFAULT_MAX_PRIME)
    }

    /// Like [`PrimeField::new`] but with a caller-chosen upper bound on `p`.
    pub fn with_max(p: u32, max_p: u32) -> Result<Self> {
        if p == 2 {
            return Err(Error::input("p = 2 is not supported; p must be an odd prime"));
        }
        if p > max_p {
            return Err(Error::CapExceeded {
                what: "prime modulus",
                required: p as u128,
                cap: max_p as u128,
            });
        }
        if !is_prime(p) {
            return Err(Error::input(format!("{p} is not prime")));
        }
        let mut inverses = vec![0u32; p as usize];
        // inv(a) = -(p / a) * inv(p mod a)
        inverses[1] = 1;
        for a in 2..p as u64 {
            let q = p as u64 / a;
            let r = p as u64 % a;
            inverses[a as usize] = ((p as u64 - q) * inverses[r as usize] as u64 % p as u64) as u32;
        }
        Ok(PrimeField { p, inverses: inverses.into() })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.p as usize
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p { s - self.p } else { s }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b { a - b } else { a + self.p - b }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 { 0 } else { self.p - a }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.p as u64) as u32
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 { None } else { Some(self.inverses[a as usize]) }
    }

    /// Reduces an arbitrary integer into [0, p).
    pub fn reduce(&self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    pub fn check_residue(&self, a: u32) -> Result<u32> {
        if a < self.p {
            Ok(a)
        } else {
            Err(Error::input(format!("residue {a} out of range for p = {}", self.p)))
        }
    }

    pub(crate) fn same_as(&self, other: &PrimeField) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::FieldMismatch { left: self.p, right: other.p })
        }
    }
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl Eq for PrimeField {}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// Trial division.
pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
