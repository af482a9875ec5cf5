use std::fmt;

use super::poly;
use super::{Field, PrimeField};
use crate::error::{Error, Result};

/// Largest supported base field order `q = p^r`.
pub const MAX_BASE_ORDER: u64 = 256;

/// Element of `F_q`, stored as the integer encoding `Σ c_s p^s` of its
/// coefficient vector over `F_p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BaseElement(pub(crate) u8);

impl BaseElement {
    pub fn index(self) -> u8 {
        self.0
    }
}

impl fmt::Debug for BaseElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `F_q = F_p[z]/(g(z))` with full addition and multiplication tables.
#[derive(Clone)]
pub struct BaseField {
    p: u32,
    r: usize,
    q: usize,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl fmt::Debug for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BaseField")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl BaseField {
    pub fn new(p: u64, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::ZeroDegree);
        }
        let prime = PrimeField::new(p)?;
        let q = (p as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
        if q > MAX_BASE_ORDER as u128 {
            return Err(Error::BaseFieldTooLarge { p, r });
        }
        let q = q as usize;
        let p32 = p as u32;
        let modulus = poly::lowest_irreducible(&prime, r);

        let digits = |mut a: usize| -> Vec<u32> {
            let mut d = vec![0u32; r];
            for slot in d.iter_mut() {
                *slot = (a % p as usize) as u32;
                a /= p as usize;
            }
            d
        };
        let encode = |d: &[u32]| -> u8 { d.iter().rev().fold(0usize, |acc, &c| acc * p as usize + c as usize) as u8 };

        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p32).collect();
                add[a * q + b] = encode(&sum);
                let mut prod = poly::rem(&prime, &poly::mul(&prime, &da, &db), &modulus);
                prod.resize(r, 0);
                mul[a * q + b] = encode(&prod);
            }
        }
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u8;
            }
        }
        Ok(Self {
            p: p32,
            r,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree `r` of `F_q` over `F_p`.
    pub fn degree(&self) -> usize {
        self.r
    }

    pub fn size(&self) -> usize {
        self.q
    }

    /// Modulus `g` over `F_p`, coefficients low to high, monic of degree `r`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.r == 1
    }

    /// Coefficient vector over `F_p` (length `r`).
    pub fn coeffs(&self, a: BaseElement) -> Vec<u32> {
        let mut v = a.0 as u32;
        (0..self.r)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Option<BaseElement> {
        if coeffs.len() != self.r || coeffs.iter().any(|&c| c >= self.p) {
            return None;
        }
        let v = coeffs.iter().rev().fold(0u32, |acc, &c| acc * self.p + c);
        Some(BaseElement(v as u8))
    }

    /// The image of `c ∈ F_p` in `F_q`.
    pub fn from_prime(&self, c: u32) -> BaseElement {
        BaseElement((c % self.p) as u8)
    }
}

impl Field for BaseField {
    type Elem = BaseElement;

    fn order(&self) -> u64 {
        self.q as u64
    }
    #[inline]
    fn zero(&self) -> BaseElement {
        BaseElement(0)
    }
    #[inline]
    fn one(&self) -> BaseElement {
        BaseElement(1)
    }
    #[inline]
    fn add(&self, a: BaseElement, b: BaseElement) -> BaseElement {
        BaseElement(self.add[a.0 as usize * self.q + b.0 as usize])
    }
    #[inline]
    fn neg(&self, a: BaseElement) -> BaseElement {
        BaseElement(self.neg[a.0 as usize])
    }
    #[inline]
    fn mul(&self, a: BaseElement, b: BaseElement) -> BaseElement {
        BaseElement(self.mul[a.0 as usize * self.q + b.0 as usize])
    }
    fn inv(&self, a: BaseElement) -> Option<BaseElement> {
        (a.0 != 0).then(|| BaseElement(self.inv[a.0 as usize]))
    }
    fn element(&self, index: u64) -> BaseElement {
        debug_assert!(index < self.q as u64);
        BaseElement(index as u8)
    }
    fn index_of(&self, a: BaseElement) -> u64 {
        a.0 as u64
    }
}
