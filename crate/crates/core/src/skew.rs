//! Skew polynomials over `F_{q^m}` with the twist `x·a = σ(a)·x`, and
//! generalized operator evaluation.

use crate::error::{Error, Result};
use crate::field::{ExtElement, ExtField, Field};

/// Polynomial `Σ_i c_i x^i` with coefficients on the left. Trailing zeros are
/// always trimmed, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SkewPolynomial {
    coeffs: Vec<ExtElement>,
}

/// Degree of a skew polynomial; `Zero` orders below every finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    Zero,
    Finite(usize),
}

impl Degree {
    /// `deg < bound` with the zero polynomial below everything.
    pub fn less_than(self, bound: usize) -> bool {
        match self {
            Degree::Zero => true,
            Degree::Finite(d) => d < bound,
        }
    }
}

impl SkewPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(field: &ExtField, c: ExtElement) -> Self {
        Self::new(field, vec![c])
    }

    /// `x^i`.
    pub fn monomial(field: &ExtField, c: ExtElement, i: usize) -> Self {
        let mut coeffs = vec![field.zero(); i + 1];
        coeffs[i] = c;
        Self::new(field, coeffs)
    }

    pub fn new(field: &ExtField, mut coeffs: Vec<ExtElement>) -> Self {
        while coeffs.last().is_some_and(|&c| field.is_zero(c)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[ExtElement] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, field: &ExtField, i: usize) -> ExtElement {
        self.coeffs.get(i).copied().unwrap_or_else(|| field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::Zero,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn add(&self, field: &ExtField, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| field.add(self.coeff(field, i), other.coeff(field, i)))
            .collect();
        Self::new(field, coeffs)
    }

    pub fn sub(&self, field: &ExtField, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| field.sub(self.coeff(field, i), other.coeff(field, i)))
            .collect();
        Self::new(field, coeffs)
    }

    /// `(f·g)_k = Σ_{i+j=k} f_i σ^i(g_j)`.
    pub fn mul(&self, field: &ExtField, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &fi) in self.coeffs.iter().enumerate() {
            if field.is_zero(fi) {
                continue;
            }
            for (j, &gj) in other.coeffs.iter().enumerate() {
                let t = field.mul(fi, field.frobenius(gj, i));
                out[i + j] = field.add(out[i + j], t);
            }
        }
        Self::new(field, out)
    }

    /// `(Q, R)` with `self = V·Q + R` and `deg R < deg V`.
    pub fn left_divide(&self, field: &ExtField, v: &Self) -> Result<(Self, Self)> {
        let Degree::Finite(dv) = v.degree() else {
            return Err(Error::DivisionByZero);
        };
        let lead_inv = field.inv(v.coeffs[dv]).expect("trimmed leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dv {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![field.zero(); rem.len() - dv];
        for d in (dv..rem.len()).rev() {
            let top = rem[d];
            if field.is_zero(top) {
                continue;
            }
            // V · (c x^s) has leading term v_dv σ^dv(c) x^d, so
            // c = σ^{-dv}(v_dv^{-1} top).
            let s = d - dv;
            let c = field.frobenius(field.mul(lead_inv, top), field.degree() - dv % field.degree());
            quot[s] = c;
            for (i, &vi) in v.coeffs.iter().enumerate() {
                let t = field.mul(vi, field.frobenius(c, i));
                rem[i + s] = field.sub(rem[i + s], t);
            }
            debug_assert!(field.is_zero(rem[d]));
        }
        Ok((Self::new(field, quot), Self::new(field, rem)))
    }
}

/// `D_a(b) = σ(b)·a`.
pub fn d_op(field: &ExtField, b: ExtElement, a: ExtElement) -> ExtElement {
    field.mul(field.frobenius(b, 1), a)
}

/// `D_a^0(b), …, D_a^{len-1}(b)`.
pub fn d_powers(field: &ExtField, b: ExtElement, a: ExtElement, len: usize) -> Vec<ExtElement> {
    let mut out = Vec::with_capacity(len);
    let mut cur = b;
    for _ in 0..len {
        out.push(cur);
        cur = d_op(field, cur, a);
    }
    out
}

/// `Σ_i f_i D_a^i(b)`.
pub fn op_eval(field: &ExtField, f: &SkewPolynomial, b: ExtElement, a: ExtElement) -> ExtElement {
    let mut acc = field.zero();
    let mut cur = b;
    for (i, &fi) in f.coeffs.iter().enumerate() {
        if i > 0 {
            cur = d_op(field, cur, a);
        }
        acc = field.add(acc, field.mul(fi, cur));
    }
    acc
}

/// Operator evaluation from precomputed powers `D_a^i(b)`.
pub fn op_eval_with(field: &ExtField, f: &SkewPolynomial, powers: &[ExtElement]) -> ExtElement {
    assert!(powers.len() >= f.coeffs.len(), "not enough precomputed powers");
    f.coeffs
        .iter()
        .zip(powers)
        .fold(field.zero(), |acc, (&fi, &p)| field.add(acc, field.mul(fi, p)))
}
