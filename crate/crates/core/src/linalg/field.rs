//! Arithmetic in prime fields `F_p` with `p <= 251`.
//!
//! Elements are plain `u32` values in `[0, p)`. The [`Field`] value carries the
//! modulus and performs every operation, so containers only need to store one
//! copy of it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted by [`Field::new`].
pub const MAX_MODULUS: u32 = 251;

/// A prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Field {
    p: u32,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn new(p: u32) -> Result<Self> {
        if p > MAX_MODULUS || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field { p })
    }

    /// Convenience constructor for tests and examples; panics on a bad modulus.
    pub fn of(p: u32) -> Self {
        Field::new(p).expect("prime modulus")
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    /// Number of elements, as `u64` for counting formulas.
    #[inline]
    pub fn size(self) -> u64 {
        self.p as u64
    }

    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        (a * b) % self.p
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            return None;
        }
        // Fermat: a^(p-2)
        Some(self.pow(a, self.p - 2))
    }

    pub fn pow(self, mut base: u32, mut exp: u32) -> u32 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn elements(self) -> std::ops::Range<u32> {
        0..self.p
    }

    pub fn contains(self, v: u32) -> bool {
        v < self.p
    }
}

impl TryFrom<u32> for Field {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        Field::new(p)
    }
}

impl From<Field> for u32 {
    fn from(f: Field) -> u32 {
        f.p
    }
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites_and_large_moduli() {
        for p in [0, 1, 4, 9, 15, 253, 257] {
            assert_eq!(Field::new(p), Err(Error::NotPrime(p)));
        }
        for p in [2, 3, 5, 7, 251] {
            assert!(Field::new(p).is_ok());
        }
    }

    #[test]
    fn inverses_are_exact() {
        for p in [2, 3, 5, 7, 251] {
            let f = Field::of(p);
            assert_eq!(f.inv(0), None);
            for a in 1..p {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }

    #[test]
    fn add_sub_neg() {
        let f = Field::of(5);
        assert_eq!(f.add(3, 4), 2);
        assert_eq!(f.sub(1, 3), 3);
        assert_eq!(f.neg(2), 3);
        assert_eq!(f.reduce(-7), 3);
    }
}
