use super::Field;
use crate::error::{Error, Result};

/// The prime field `F_p` with `p < 2^16`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !super::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= 1 << 16 {
            return Err(Error::BaseFieldTooLarge { p, r: 1 });
        }
        Ok(Self { p: p as u32 })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn order(&self) -> u64 {
        self.p as u64
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }
    fn neg(&self, a: u32) -> u32 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }
    fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        Some(self.pow(a, (self.p - 2) as u128))
    }
    fn element(&self, index: u64) -> u32 {
        index as u32
    }
    fn index_of(&self, a: u32) -> u64 {
        a as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_is_primitive_mod_11() {
        let f = PrimeField::new(11).unwrap();
        let order = (1..=10).find(|&e| f.pow(2, e) == 1).unwrap();
        assert_eq!(order, 10);
    }

    #[test]
    fn rejects_composite() {
        assert_eq!(PrimeField::new(12), Err(Error::NotPrime(12)));
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
    }
}
