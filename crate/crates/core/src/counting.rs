//! Exact combinatorics: Gaussian binomials, rank-counted matrices, sum-rank
//! sphere sizes and weight compositions.
//!
//! Compositions are always produced in lexicographic order of their parts;
//! that order is the index space shared by the analysis and the LP.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `(v_1, …, v_ℓ)` with `0 ≤ v_i ≤ cap`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightComposition {
    parts: Vec<usize>,
    cap: usize,
}

impl fmt::Debug for WeightComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.parts)
    }
}

impl WeightComposition {
    pub fn new(parts: Vec<usize>, cap: usize) -> Result<Self> {
        if let Some(&bad) = parts.iter().find(|&&v| v > cap) {
            return Err(Error::InfeasibleComposition(format!(
                "part {bad} exceeds block cap {cap}"
            )));
        }
        Ok(Self { parts, cap })
    }

    pub fn zero(ell: usize, cap: usize) -> Self {
        Self {
            parts: vec![0; ell],
            cap,
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Parts sorted in non-increasing order: the representative of the
    /// composition's orbit under block permutations.
    pub fn sorted_desc(&self) -> Self {
        let mut parts = self.parts.clone();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts, cap: self.cap }
    }

    /// Number of distinct rearrangements, `ℓ! / Π mult(v)!`.
    pub fn orbit_size(&self) -> BigUint {
        let mut counts = vec![0usize; self.cap + 1];
        for &v in &self.parts {
            counts[v] += 1;
        }
        let mut out = factorial(self.parts.len());
        for c in counts {
            out /= factorial(c);
        }
        out
    }
}

fn check_feasible(total: usize, ell: usize, mu: usize) -> Result<()> {
    if total > ell * mu {
        return Err(Error::InfeasibleComposition(format!(
            "total {total} exceeds {ell} blocks of capacity {mu}"
        )));
    }
    Ok(())
}

/// `W(total, ℓ, μ)` in lexicographic order.
pub fn enumerate_compositions(total: usize, ell: usize, mu: usize) -> Result<Vec<WeightComposition>> {
    check_feasible(total, ell, mu)?;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(ell);
    fill_compositions(total, ell, mu, &mut cur, &mut out);
    Ok(out)
}

fn fill_compositions(
    remaining: usize,
    slots: usize,
    mu: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<WeightComposition>,
) {
    if slots == 0 {
        if remaining == 0 {
            out.push(WeightComposition {
                parts: cur.clone(),
                cap: mu,
            });
        }
        return;
    }
    let rest_cap = (slots - 1) * mu;
    let lo = remaining.saturating_sub(rest_cap);
    let hi = remaining.min(mu);
    for v in lo..=hi {
        cur.push(v);
        fill_compositions(remaining - v, slots - 1, mu, cur, out);
        cur.pop();
    }
}

/// Orbit representatives of `W(total, ℓ, μ)` under block permutations: the
/// non-increasing compositions, in lexicographic order.
pub fn enumerate_partitions(total: usize, ell: usize, mu: usize) -> Result<Vec<WeightComposition>> {
    check_feasible(total, ell, mu)?;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(ell);
    fill_partitions(total, ell, mu, mu, &mut cur, &mut out);
    out.sort();
    Ok(out)
}

fn fill_partitions(
    remaining: usize,
    slots: usize,
    max_part: usize,
    mu: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<WeightComposition>,
) {
    if slots == 0 {
        if remaining == 0 {
            out.push(WeightComposition {
                parts: cur.clone(),
                cap: mu,
            });
        }
        return;
    }
    let hi = remaining.min(max_part);
    for v in (0..=hi).rev() {
        if v * slots < remaining {
            break;
        }
        cur.push(v);
        fill_partitions(remaining - v, slots - 1, v, mu, cur, out);
        cur.pop();
    }
}

/// `|W(total, ℓ, μ)|`, the coefficient of `z^total` in `(1 + … + z^μ)^ℓ`.
pub fn composition_count(total: usize, ell: usize, mu: usize) -> BigUint {
    let mut poly = vec![BigUint::one()];
    for _ in 0..ell {
        let mut next = vec![BigUint::zero(); poly.len() + mu];
        for (i, c) in poly.iter().enumerate() {
            for slot in &mut next[i..=i + mu] {
                *slot += c;
            }
        }
        poly = next;
    }
    poly.get(total).cloned().unwrap_or_default()
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn pow(q: u64, e: usize) -> BigUint {
    num_traits::pow(BigUint::from(q), e)
}

/// `[a choose j]_q`, zero when `j > a`.
pub fn gaussian_binomial(a: usize, j: usize, q: u64) -> BigUint {
    if j > a {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 1..=j {
        num *= pow(q, a - j + i) - 1u32;
        den *= pow(q, i) - 1u32;
    }
    num / den
}

/// Number of `a × b` matrices over `F_q` of rank `j`.
pub fn nm_q(a: usize, b: usize, j: usize, q: u64) -> BigUint {
    if j > a.min(b) {
        return BigUint::zero();
    }
    let qb = pow(q, b);
    (0..j).fold(gaussian_binomial(a, j, q), |acc, i| acc * (&qb - pow(q, i)))
}

/// Number of vectors in `F_{q^m}^n` of sum-rank weight `j` for the given
/// block lengths.
pub fn nsrm(m: usize, partition: &[usize], j: usize, q: u64) -> BigUint {
    nsrm_table(m, partition, q).get(j).cloned().unwrap_or_default()
}

/// `nsrm` for every weight `0 ..= Σ min(n_i, m)`, by convolving the per-block
/// rank distributions.
pub fn nsrm_table(m: usize, partition: &[usize], q: u64) -> Vec<BigUint> {
    let mut acc = vec![BigUint::one()];
    for &ni in partition {
        let block: Vec<BigUint> = (0..=ni.min(m)).map(|j| nm_q(m, ni, j, q)).collect();
        let mut next = vec![BigUint::zero(); acc.len() + block.len() - 1];
        for (i, x) in acc.iter().enumerate() {
            for (j, y) in block.iter().enumerate() {
                next[i + j] += x * y;
            }
        }
        acc = next;
    }
    acc
}
