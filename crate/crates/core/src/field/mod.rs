//! Finite field tower `F_p ⊂ F_q ⊂ F_{q^m}`.
//!
//! Elements are plain `Copy` values; all arithmetic goes through the field
//! object that owns the tables, so a single [`ExtField`] can be shared
//! read-only between threads.
//!
//! Moduli are the lowest irreducible polynomials of the requested degree in
//! the order of their integer encoding `Σ c_i · base^i` (monic leading term
//! omitted), which makes every construction reproducible. The basis of
//! `F_{q^m}` over `F_q` is the polynomial basis `(1, y, …, y^{m-1})`.

mod base;
mod ext;
pub(crate) mod poly;
mod prime;

use std::fmt;
use std::hash::Hash;

use rand::Rng;

pub use base::{BaseElement, BaseField, MAX_BASE_ORDER};
pub use ext::{ExtElement, ExtField, FieldParams, MAX_EXT_DEGREE};
pub use prime::PrimeField;

/// Arithmetic over a finite field whose elements are small `Copy` values.
pub trait Field {
    type Elem: Copy + Eq + Hash + fmt::Debug;

    /// Number of elements.
    fn order(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: Self::Elem) -> Option<Self::Elem>;

    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.add(a, self.neg(b))
    }

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }

    /// Bijection `0..order() -> elements`, used for exhaustive enumeration.
    fn element(&self, index: u64) -> Self::Elem;

    /// Inverse of [`Field::element`].
    fn index_of(&self, a: Self::Elem) -> u64;

    /// Uniformly random element.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        self.element(rng.gen_range(0..self.order()))
    }

    fn pow(&self, a: Self::Elem, mut e: u128) -> Self::Elem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// Trial-division factorization of `n`, stopping as soon as the cofactor is
/// prime. Returns the distinct prime factors in increasing order.
pub(crate) fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while n > 1 {
        if primal_check::miller_rabin(n) {
            out.push(n);
            break;
        }
        if d.saturating_mul(d) > n {
            out.push(n);
            break;
        }
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    out.sort_unstable();
    out.dedup();
    out
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && primal_check::miller_rabin(n)
}
