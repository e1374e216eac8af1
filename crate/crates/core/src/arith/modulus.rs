use serde::{Deserialize, Serialize};

use super::{is_prime, MAX_MODULUS};
use crate::error::{invalid, Error, Result};

/// An odd modulus `q ≥ 3` with its primality and class mod 4 cached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Modulus {
    q: u64,
    is_prime: bool,
    residue_class_mod_4: u8,
}

impl Modulus {
    pub fn new(q: u64) -> Result<Self> {
        if q < 3 || q % 2 == 0 {
            return Err(invalid(format!("modulus must be odd and at least 3, got {q}")));
        }
        if q > MAX_MODULUS {
            return Err(invalid(format!("modulus {q} exceeds 2^62")));
        }
        Ok(Modulus {
            q,
            is_prime: is_prime(q),
            residue_class_mod_4: (q % 4) as u8,
        })
    }

    /// Like [`Modulus::new`] but also requires `q` to be prime.
    pub fn prime(q: u64) -> Result<Self> {
        let m = Self::new(q)?;
        if !m.is_prime {
            return Err(Error::NotPrime(q));
        }
        Ok(m)
    }

    #[inline]
    pub fn get(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn is_prime(&self) -> bool {
        self.is_prime
    }

    #[inline]
    pub fn residue_class_mod_4(&self) -> u8 {
        self.residue_class_mod_4
    }

    pub fn require_prime(&self) -> Result<()> {
        if self.is_prime {
            Ok(())
        } else {
            Err(Error::NotPrime(self.q))
        }
    }

    /// Checks that `a` is a unit and returns it reduced.
    pub fn unit(&self, a: u64) -> Result<u64> {
        let r = a % self.q;
        if super::gcd(r, self.q) != 1 {
            return Err(Error::NotUnit { value: a, modulus: self.q });
        }
        Ok(r)
    }
}

impl std::fmt::Display for Modulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.q)
    }
}
