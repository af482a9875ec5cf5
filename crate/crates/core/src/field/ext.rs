use std::fmt;

use rand::Rng;

use super::base::BaseElement;
use super::{distinct_prime_factors, poly, BaseField, Field};
use crate::error::{Error, Result};

/// Largest supported extension degree `m`.
pub const MAX_EXT_DEGREE: usize = 64;

/// Element of `F_{q^m}`: coefficients over `F_q` in the polynomial basis.
/// Only the first `m` slots are meaningful; the rest stay zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExtElement {
    c: [u8; MAX_EXT_DEGREE],
}

impl Default for ExtElement {
    fn default() -> Self {
        Self { c: [0; MAX_EXT_DEGREE] }
    }
}

impl fmt::Debug for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let len = self.c.iter().rposition(|&x| x != 0).map_or(1, |i| i + 1);
        write!(f, "{:?}", &self.c[..len])
    }
}

/// Construction summary of a field tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldParams {
    pub p: u32,
    pub r: usize,
    pub q: u64,
    pub m: usize,
    /// Degree-`r` irreducible over `F_p`, low to high.
    pub base_modulus: Vec<u32>,
    /// Degree-`m` irreducible over `F_q`, low to high, as base-field indices.
    pub top_modulus: Vec<u8>,
}

/// `F_{q^m} = F_q[y]/(f(y))` with precomputed Frobenius powers.
#[derive(Clone)]
pub struct ExtField {
    base: BaseField,
    m: usize,
    p: u32,
    order: u64,
    modulus: Vec<BaseElement>,
    /// `y^m = Σ_j reduction[j] y^j`.
    reduction: Vec<BaseElement>,
    /// `frob[i][j] = σ^i(y^j)`.
    frob: Vec<Vec<ExtElement>>,
    primitive: ExtElement,
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtField").field("params", &self.params()).finish()
    }
}

impl ExtField {
    /// Builds `F_{(p^r)^m}`.
    pub fn new(p: u64, r: usize, m: usize) -> Result<Self> {
        Self::over(BaseField::new(p, r)?, m)
    }

    pub fn over(base: BaseField, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = base.order() as u128;
        let order = q.checked_pow(m as u32).unwrap_or(u128::MAX);
        if m > MAX_EXT_DEGREE || order >= 1u128 << 64 {
            return Err(Error::ExtensionTooLarge { m });
        }
        let modulus = poly::lowest_irreducible(&base, m);
        let reduction: Vec<BaseElement> = modulus[..m].iter().map(|&c| base.neg(c)).collect();
        let p = base.characteristic();
        let mut field = Self {
            base,
            m,
            p,
            order: order as u64,
            modulus,
            reduction,
            frob: Vec::new(),
            primitive: ExtElement::default(),
        };
        field.frob = field.frobenius_tables();
        field.primitive = field.find_primitive()?;
        Ok(field)
    }

    fn frobenius_tables(&self) -> Vec<Vec<ExtElement>> {
        let b = &self.base;
        let x = vec![b.zero(), b.one()];
        let yq = poly::powmod(b, &x, b.order(), &self.modulus);
        let yq = self.from_poly(&yq);
        let mut sigma = Vec::with_capacity(self.m);
        let mut acc = self.one();
        for _ in 0..self.m {
            sigma.push(acc);
            acc = self.mul(acc, yq);
        }
        let identity: Vec<ExtElement> = (0..self.m).map(|j| self.basis(j)).collect();
        let mut tables = vec![identity];
        for i in 1..self.m {
            let prev = &tables[i - 1];
            let next = prev.iter().map(|&e| self.apply_linear(&sigma, e)).collect();
            tables.push(next);
        }
        tables
    }

    fn find_primitive(&self) -> Result<ExtElement> {
        let group = self.order - 1;
        let factors = distinct_prime_factors(group);
        for idx in 1..self.order {
            let g = self.element(idx);
            if factors.iter().all(|&l| self.pow(g, (group / l) as u128) != self.one()) {
                if self.pow(g, group as u128) != self.one() {
                    return Err(Error::Internal(format!(
                        "element order check failed; modulus {:?} is not irreducible",
                        self.modulus
                    )));
                }
                return Ok(g);
            }
        }
        Err(Error::Internal("no primitive element found".into()))
    }

    pub fn params(&self) -> FieldParams {
        FieldParams {
            p: self.p,
            r: self.base.degree(),
            q: self.base.order(),
            m: self.m,
            base_modulus: self.base.modulus().to_vec(),
            top_modulus: self.modulus.iter().map(|c| c.index()).collect(),
        }
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    /// Extension degree `m`.
    pub fn degree(&self) -> usize {
        self.m
    }

    /// Base field order `q`.
    pub fn q(&self) -> u64 {
        self.base.order()
    }

    fn from_poly(&self, coeffs: &[BaseElement]) -> ExtElement {
        let mut e = ExtElement::default();
        for (slot, c) in e.c.iter_mut().zip(coeffs) {
            *slot = c.index();
        }
        e
    }

    /// `j`-th polynomial basis element `y^j`, `j < m`.
    pub fn basis(&self, j: usize) -> ExtElement {
        assert!(j < self.m, "basis index {j} out of range");
        let mut e = ExtElement::default();
        e.c[j] = 1;
        e
    }

    /// Image of `λ ∈ F_q`.
    pub fn embed(&self, lambda: BaseElement) -> ExtElement {
        let mut e = ExtElement::default();
        e.c[0] = lambda.index();
        e
    }

    pub fn coeff(&self, x: ExtElement, j: usize) -> BaseElement {
        BaseElement(x.c[j])
    }

    /// `ext(x)`: coordinates over `F_q` in the polynomial basis.
    pub fn ext_expand(&self, x: ExtElement) -> Vec<BaseElement> {
        x.c[..self.m].iter().map(|&c| BaseElement(c)).collect()
    }

    /// Inverse of [`ExtField::ext_expand`]: `Σ_j coords[j] · y^j`.
    pub fn reconstruct(&self, coords: &[BaseElement]) -> ExtElement {
        assert_eq!(coords.len(), self.m, "expansion length must equal m");
        self.from_poly(coords)
    }

    /// `x` lies in the embedded copy of `F_q`.
    pub fn in_base(&self, x: ExtElement) -> bool {
        x.c[1..self.m].iter().all(|&c| c == 0)
    }

    /// `λ · x` for `λ ∈ F_q`.
    #[inline]
    pub fn scale(&self, lambda: BaseElement, x: ExtElement) -> ExtElement {
        let mut out = ExtElement::default();
        if lambda.index() == 0 {
            return out;
        }
        if self.base.is_prime_field() {
            let l = lambda.index() as u32;
            for j in 0..self.m {
                out.c[j] = ((l * x.c[j] as u32) % self.p) as u8;
            }
        } else {
            for j in 0..self.m {
                out.c[j] = self.base.mul(lambda, BaseElement(x.c[j])).index();
            }
        }
        out
    }

    /// `acc + λ · x`.
    #[inline]
    pub fn add_scaled(&self, acc: ExtElement, lambda: BaseElement, x: ExtElement) -> ExtElement {
        if lambda.index() == 0 {
            return acc;
        }
        let mut out = acc;
        if self.base.is_prime_field() {
            let l = lambda.index() as u32;
            for j in 0..self.m {
                out.c[j] = ((out.c[j] as u32 + l * x.c[j] as u32) % self.p) as u8;
            }
        } else {
            for j in 0..self.m {
                let t = self.base.mul(lambda, BaseElement(x.c[j]));
                out.c[j] = self.base.add(BaseElement(out.c[j]), t).index();
            }
        }
        out
    }

    /// `Σ_j x_j · images[j]` for an `F_q`-linear map given on the basis.
    fn apply_linear(&self, images: &[ExtElement], x: ExtElement) -> ExtElement {
        if self.base.is_prime_field() {
            let mut acc = [0u32; MAX_EXT_DEGREE];
            for (j, img) in images.iter().enumerate() {
                let xj = x.c[j] as u32;
                if xj == 0 {
                    continue;
                }
                for s in 0..self.m {
                    acc[s] += xj * img.c[s] as u32;
                }
            }
            let mut out = ExtElement::default();
            for s in 0..self.m {
                out.c[s] = (acc[s] % self.p) as u8;
            }
            out
        } else {
            images.iter().enumerate().fold(ExtElement::default(), |acc, (j, &img)| {
                self.add_scaled(acc, BaseElement(x.c[j]), img)
            })
        }
    }

    /// `σ^i(x) = x^{q^i}`; the exponent is taken modulo `m`.
    pub fn frobenius(&self, x: ExtElement, i: usize) -> ExtElement {
        let i = i % self.m;
        if i == 0 {
            return x;
        }
        self.apply_linear(&self.frob[i], x)
    }

    /// Field norm `N(x) = Π_{i<m} σ^i(x) ∈ F_q`.
    pub fn norm(&self, x: ExtElement) -> BaseElement {
        let mut acc = x;
        for i in 1..self.m {
            acc = self.mul(acc, self.frobenius(x, i));
        }
        debug_assert!(self.in_base(acc));
        BaseElement(acc.c[0])
    }

    /// A fixed generator of the multiplicative group (smallest by index).
    pub fn primitive_element(&self) -> ExtElement {
        self.primitive
    }

    fn mul_prime(&self, a: ExtElement, b: ExtElement) -> ExtElement {
        let m = self.m;
        let p = self.p;
        let mut t = [0u32; 2 * MAX_EXT_DEGREE];
        for i in 0..m {
            let ai = a.c[i] as u32;
            if ai == 0 {
                continue;
            }
            for j in 0..m {
                t[i + j] += ai * b.c[j] as u32;
            }
        }
        for i in (m..2 * m - 1).rev() {
            let c = t[i] % p;
            if c == 0 {
                continue;
            }
            for j in 0..m {
                t[i - m + j] += c * self.reduction[j].index() as u32;
            }
        }
        let mut out = ExtElement::default();
        for j in 0..m {
            out.c[j] = (t[j] % p) as u8;
        }
        out
    }

    fn mul_tables(&self, a: ExtElement, b: ExtElement) -> ExtElement {
        let m = self.m;
        let f = &self.base;
        let mut t = [BaseElement(0); 2 * MAX_EXT_DEGREE];
        for i in 0..m {
            let ai = BaseElement(a.c[i]);
            if ai.index() == 0 {
                continue;
            }
            for j in 0..m {
                t[i + j] = f.add(t[i + j], f.mul(ai, BaseElement(b.c[j])));
            }
        }
        for i in (m..2 * m - 1).rev() {
            let c = t[i];
            if c.index() == 0 {
                continue;
            }
            for j in 0..m {
                t[i - m + j] = f.add(t[i - m + j], f.mul(c, self.reduction[j]));
            }
        }
        let mut out = ExtElement::default();
        for j in 0..m {
            out.c[j] = t[j].index();
        }
        out
    }
}

impl Field for ExtField {
    type Elem = ExtElement;

    fn order(&self) -> u64 {
        self.order
    }

    #[inline]
    fn zero(&self) -> ExtElement {
        ExtElement::default()
    }

    #[inline]
    fn one(&self) -> ExtElement {
        let mut e = ExtElement::default();
        e.c[0] = 1;
        e
    }

    #[inline]
    fn add(&self, a: ExtElement, b: ExtElement) -> ExtElement {
        let mut out = ExtElement::default();
        if self.base.is_prime_field() {
            for j in 0..self.m {
                let s = a.c[j] as u32 + b.c[j] as u32;
                out.c[j] = if s >= self.p { s - self.p } else { s } as u8;
            }
        } else {
            for j in 0..self.m {
                out.c[j] = self.base.add(BaseElement(a.c[j]), BaseElement(b.c[j])).index();
            }
        }
        out
    }

    #[inline]
    fn neg(&self, a: ExtElement) -> ExtElement {
        let mut out = ExtElement::default();
        for j in 0..self.m {
            out.c[j] = self.base.neg(BaseElement(a.c[j])).index();
        }
        out
    }

    #[inline]
    fn sub(&self, a: ExtElement, b: ExtElement) -> ExtElement {
        if self.base.is_prime_field() {
            let mut out = ExtElement::default();
            for j in 0..self.m {
                let s = a.c[j] as u32 + self.p - b.c[j] as u32;
                out.c[j] = if s >= self.p { s - self.p } else { s } as u8;
            }
            out
        } else {
            self.add(a, self.neg(b))
        }
    }

    #[inline]
    fn mul(&self, a: ExtElement, b: ExtElement) -> ExtElement {
        if self.base.is_prime_field() {
            self.mul_prime(a, b)
        } else {
            self.mul_tables(a, b)
        }
    }

    /// Inverse through the norm: `x^{-1} = N(x)^{-1} · Π_{0<i<m} σ^i(x)`.
    fn inv(&self, a: ExtElement) -> Option<ExtElement> {
        if self.is_zero(a) {
            return None;
        }
        let mut rest = self.one();
        for i in 1..self.m {
            rest = self.mul(rest, self.frobenius(a, i));
        }
        let n = self.mul(a, rest);
        debug_assert!(self.in_base(n));
        let n_inv = self.base.inv(BaseElement(n.c[0]))?;
        Some(self.scale(n_inv, rest))
    }

    fn element(&self, mut index: u64) -> ExtElement {
        let q = self.base.order();
        let mut e = ExtElement::default();
        for j in 0..self.m {
            e.c[j] = (index % q) as u8;
            index /= q;
        }
        e
    }

    fn index_of(&self, a: ExtElement) -> u64 {
        let q = self.base.order();
        a.c[..self.m].iter().rev().fold(0u64, |acc, &c| acc * q + c as u64)
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> ExtElement {
        let q = self.base.order() as u16;
        let mut e = ExtElement::default();
        for j in 0..self.m {
            e.c[j] = rng.gen_range(0..q) as u8;
        }
        e
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f4() -> ExtField {
        ExtField::new(2, 1, 2).unwrap()
    }

    #[test]
    fn f4_modulus_and_frobenius() {
        let f = f4();
        // y^2 + y + 1
        assert_eq!(f.params().top_modulus, vec![1, 1, 1]);
        let y = f.basis(1);
        let y_plus_1 = f.add(y, f.one());
        assert_eq!(f.frobenius(y, 1), y_plus_1);
        assert_eq!(f.frobenius(y, 0), y);
        assert_eq!(f.frobenius(y, 2), y);
    }

    #[test]
    fn frobenius_fixes_base_field() {
        let f = ExtField::new(3, 1, 4).unwrap();
        for l in 0..3 {
            let lambda = f.embed(f.base().element(l));
            assert_eq!(f.frobenius(lambda, 1), lambda);
        }
    }

    #[test]
    fn frobenius_matches_power() {
        for (p, r, m) in [(2, 1, 5), (3, 1, 3), (2, 2, 3), (11, 1, 4), (2, 4, 2)] {
            let f = ExtField::new(p, r, m).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..20 {
                let x = f.random(&mut rng);
                assert_eq!(f.frobenius(x, 1), f.pow(x, f.q() as u128));
                assert_eq!(f.frobenius(x, m), x);
            }
        }
    }

    #[test]
    fn primitive_orders() {
        let f = f4();
        let g = f.primitive_element();
        let order = (1..=3u128).find(|&e| f.pow(g, e) == f.one()).unwrap();
        assert_eq!(order, 3);

        let f11 = ExtField::new(11, 1, 1).unwrap();
        assert_eq!(f11.primitive_element(), f11.embed(f11.base().element(2)));
    }

    #[test]
    fn primitive_has_full_order_desk_scale() {
        for (p, r, m) in [(2, 1, 4), (3, 1, 3), (2, 2, 2), (5, 1, 2)] {
            let f = ExtField::new(p, r, m).unwrap();
            let g = f.primitive_element();
            let n = f.order() - 1;
            let mut x = g;
            let mut ord = 1u64;
            while x != f.one() {
                x = f.mul(x, g);
                ord += 1;
            }
            assert_eq!(ord, n, "p={p} r={r} m={m}");
        }
    }

    #[test]
    fn exhaustive_axioms_up_to_16() {
        for (p, r, m) in [(2, 1, 2), (2, 1, 3), (2, 1, 4), (3, 1, 2), (2, 2, 2), (2, 4, 1)] {
            let f = ExtField::new(p, r, m).unwrap();
            let all: Vec<_> = (0..f.order()).map(|i| f.element(i)).collect();
            for &a in &all {
                assert_eq!(f.index_of(a), f.index_of(f.element(f.index_of(a))));
                assert_eq!(f.sub(a, a), f.zero());
                if a != f.zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                for &b in &all {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
                    assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
                    for &c in &all {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn expansion_basics() {
        let f = ExtField::new(3, 1, 3).unwrap();
        assert!(f.ext_expand(f.zero()).iter().all(|c| c.index() == 0));
        let e = f.ext_expand(f.basis(0));
        assert_eq!(e.iter().map(|c| c.index()).collect::<Vec<_>>(), vec![1, 0, 0]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let x = f.random(&mut rng);
            assert_eq!(f.reconstruct(&f.ext_expand(x)), x);
        }
    }

    #[test]
    fn uniformity_chi_square_f4() {
        let f = f4();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut counts = [0f64; 4];
        let draws = 10_000;
        for _ in 0..draws {
            counts[f.index_of(f.random(&mut rng)) as usize] += 1.0;
        }
        let expected = draws as f64 / 4.0;
        let chi2: f64 = counts.iter().map(|c| (c - expected).powi(2) / expected).sum();
        // chi-square critical value, 3 degrees of freedom, significance 0.01
        assert!(chi2 < 11.345, "chi2 = {chi2}");
    }

    #[test]
    fn norm_of_primitive_generates_base() {
        let f = ExtField::new(11, 1, 3).unwrap();
        let n = f.norm(f.primitive_element());
        let b = f.base();
        let order = (1..=10u128).find(|&e| b.pow(n, e) == b.one()).unwrap();
        assert_eq!(order, 10);
    }

    #[test]
    fn rejects_oversized() {
        assert!(matches!(ExtField::new(2, 1, 64), Err(Error::ExtensionTooLarge { .. })));
        assert!(matches!(ExtField::new(16, 1, 2), Err(Error::NotPrime(16))));
        assert!(ExtField::new(2, 1, 63).is_ok());
    }
}
