//! Exact success probabilities of support guessing and the resulting work
//! factor bounds.
//!
//! Everything is a `BigRational`; `log2` is only taken when reporting.
//!
//! Success probabilities are invariant under permuting blocks of the error
//! and guess compositions simultaneously. Quantities that take a min or max
//! over all error compositions therefore only need one representative per
//! orbit (a non-increasing composition). The `_full` variants enumerate every
//! composition and exist to cross-check the reduced ones.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::code::LrsCode;
use crate::counting::{self, enumerate_compositions, enumerate_partitions, WeightComposition};
use crate::error::{Error, Result};

/// Parameters of one analysis point. `μ = min(η, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnalysisContext {
    pub q: u64,
    pub m: usize,
    pub ell: usize,
    pub eta: usize,
    pub n: usize,
    pub k: usize,
    pub mu: usize,
    pub w: usize,
    pub u: usize,
}

impl AnalysisContext {
    pub fn new(q: u64, m: usize, ell: usize, eta: usize, k: usize, w: usize, u: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParameters(format!(
                "field size q = {q} must be at least 2"
            )));
        }
        if ell == 0 || eta == 0 || m == 0 {
            return Err(Error::InvalidParameters("ell, eta and m must be positive".into()));
        }
        let n = ell * eta;
        if k == 0 || k > n {
            return Err(Error::InvalidDimension { k, n });
        }
        let mu = eta.min(m);
        if w > ell * mu {
            return Err(Error::InvalidParameters(format!(
                "w = {w} exceeds ell * mu = {}",
                ell * mu
            )));
        }
        if u > ell * mu {
            return Err(Error::InvalidParameters(format!(
                "u = {u} exceeds ell * mu = {}",
                ell * mu
            )));
        }
        Ok(Self {
            q,
            m,
            ell,
            eta,
            n,
            k,
            mu,
            w,
            u,
        })
    }

    pub fn for_code(code: &LrsCode, w: usize, u: usize) -> Result<Self> {
        Self::new(
            code.field().q(),
            code.field().degree(),
            code.ell(),
            code.eta(),
            code.k(),
            w,
            u,
        )
    }

    /// Same code parameters with a different target radius.
    pub fn with_w(&self, w: usize) -> Result<Self> {
        Self::new(self.q, self.m, self.ell, self.eta, self.k, w, self.u)
    }

    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    /// Cost model of one iteration, `n² ℓ^u`.
    pub fn iteration_cost(&self) -> BigUint {
        BigUint::from(self.n * self.n) * counting::pow(self.ell as u64, self.u)
    }

    pub fn w_compositions(&self) -> Vec<WeightComposition> {
        enumerate_compositions(self.w, self.ell, self.mu).expect("w validated")
    }

    pub fn u_compositions(&self) -> Vec<WeightComposition> {
        enumerate_compositions(self.u, self.ell, self.mu).expect("u validated")
    }
}

/// Smallest trade dimension `ε` with `2(w − ε) + u ≤ n − k`, clamped at 0.
pub fn min_trade(w: usize, u: usize, redundancy: usize) -> usize {
    let excess = u as i64 - redundancy as i64;
    let t = w as i64 + Integer::div_ceil(&excess, &2);
    t.max(0) as usize
}

/// PMF over intersection dimensions `j = 0, 1, …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionPmf {
    values: Vec<BigRational>,
}

impl IntersectionPmf {
    pub fn point_mass(j: usize) -> Self {
        let mut values = vec![BigRational::zero(); j + 1];
        values[j] = BigRational::one();
        Self { values }
    }

    pub fn prob(&self, j: usize) -> BigRational {
        self.values.get(j).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn total(&self) -> BigRational {
        self.values.iter().sum()
    }

    pub fn mean(&self) -> BigRational {
        self.values
            .iter()
            .enumerate()
            .map(|(j, p)| p * BigRational::from_integer(BigInt::from(j)))
            .sum()
    }

    /// `Pr[J ≥ lo]`.
    pub fn tail(&self, lo: usize) -> BigRational {
        self.values.iter().skip(lo).sum()
    }

    pub fn convolve(&self, other: &Self) -> Self {
        let mut values = vec![BigRational::zero(); self.values.len() + other.values.len() - 1];
        for (i, a) in self.values.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.values.iter().enumerate() {
                if !b.is_zero() {
                    values[i + j] += a * b;
                }
            }
        }
        Self { values }
    }
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Distribution of `dim(E ∩ U)` for a fixed `w_i`-space `E` and a uniform
/// `u_i`-space `U` of `F_q^μ`.
pub fn single_block_pmf(w_i: usize, u_i: usize, mu: usize, q: u64) -> IntersectionPmf {
    assert!(w_i <= mu && u_i <= mu, "block dimensions exceed mu");
    let den = counting::gaussian_binomial(mu, u_i, q);
    let values = (0..=w_i.min(u_i))
        .map(|j| {
            if u_i - j > mu - w_i {
                return BigRational::zero();
            }
            let num = counting::gaussian_binomial(mu - w_i, u_i - j, q)
                * counting::gaussian_binomial(w_i, j, q)
                * counting::pow(q, (w_i - j) * (u_i - j));
            ratio(num, den.clone())
        })
        .collect();
    IntersectionPmf { values }
}

/// Distribution of the intersection sum-dimension for given compositions.
pub fn convolved_pmf(w_comp: &WeightComposition, u_comp: &WeightComposition, mu: usize, q: u64) -> IntersectionPmf {
    assert_eq!(w_comp.len(), u_comp.len(), "composition lengths differ");
    w_comp
        .parts()
        .iter()
        .zip(u_comp.parts())
        .fold(IntersectionPmf::point_mass(0), |acc, (&w, &u)| {
            acc.convolve(&single_block_pmf(w, u, mu, q))
        })
}

/// `P_μ(u⃗, w⃗)`, computed without memoization.
pub fn success_prob(u_comp: &WeightComposition, w_comp: &WeightComposition, ctx: &AnalysisContext) -> BigRational {
    let lo = min_trade(w_comp.total(), u_comp.total(), ctx.redundancy());
    if lo == 0 {
        return BigRational::one();
    }
    convolved_pmf(w_comp, u_comp, ctx.mu, ctx.q).tail(lo)
}

/// Work factor, possibly infinite when the success probability is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WorkFactor {
    Finite(BigRational),
    Infinite,
}

impl WorkFactor {
    /// `cost / prob`.
    pub fn from_prob(cost: &BigUint, prob: &BigRational) -> Self {
        if prob.is_zero() {
            WorkFactor::Infinite
        } else {
            WorkFactor::Finite(BigRational::from_integer(BigInt::from(cost.clone())) / prob)
        }
    }

    pub fn log2(&self) -> f64 {
        match self {
            WorkFactor::Finite(v) => log2_rational(v),
            WorkFactor::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            WorkFactor::Finite(v) => Some(v),
            WorkFactor::Infinite => None,
        }
    }
}

impl PartialOrd for WorkFactor {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering::*;
        Some(match (self, other) {
            (WorkFactor::Finite(a), WorkFactor::Finite(b)) => a.cmp(b),
            (WorkFactor::Finite(_), WorkFactor::Infinite) => Less,
            (WorkFactor::Infinite, WorkFactor::Finite(_)) => Greater,
            (WorkFactor::Infinite, WorkFactor::Infinite) => Equal,
        })
    }
}

impl fmt::Display for WorkFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WorkFactor::Finite(v) => write!(f, "{v}"),
            WorkFactor::Infinite => write!(f, "inf"),
        }
    }
}

fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().unwrap().log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.log2() + shift as f64
}

/// `log2` of a positive rational, accurate for magnitudes far outside `f64`.
pub fn log2_rational(x: &BigRational) -> f64 {
    if !x.is_positive() {
        return if x.is_zero() { f64::NEG_INFINITY } else { f64::NAN };
    }
    log2_biguint(x.numer().magnitude()) - log2_biguint(x.denom().magnitude())
}

/// PMF over `W(u, ℓ, μ)` in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuessDistribution {
    compositions: Vec<WeightComposition>,
    probs: Vec<BigRational>,
}

impl GuessDistribution {
    pub fn new(ctx: &AnalysisContext, probs: Vec<BigRational>) -> Result<Self> {
        let compositions = ctx.u_compositions();
        if probs.len() != compositions.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} probabilities for {} compositions",
                probs.len(),
                compositions.len()
            )));
        }
        if probs.iter().any(|p| p.is_negative()) {
            return Err(Error::InvalidDistribution("negative probability".into()));
        }
        let total: BigRational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(Self { compositions, probs })
    }

    pub fn uniform(ctx: &AnalysisContext) -> Self {
        let compositions = ctx.u_compositions();
        let p = BigRational::new(BigInt::one(), BigInt::from(compositions.len()));
        let probs = vec![p; compositions.len()];
        Self { compositions, probs }
    }

    pub fn point_mass(ctx: &AnalysisContext, comp: &WeightComposition) -> Result<Self> {
        let compositions = ctx.u_compositions();
        let Some(idx) = compositions.iter().position(|c| c == comp) else {
            return Err(Error::InvalidDistribution(format!("{comp:?} is not in W(u, ell, mu)")));
        };
        let mut probs = vec![BigRational::zero(); compositions.len()];
        probs[idx] = BigRational::one();
        Ok(Self { compositions, probs })
    }

    pub fn compositions(&self) -> &[WeightComposition] {
        &self.compositions
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn support(&self) -> impl Iterator<Item = (&WeightComposition, &BigRational)> {
        self.compositions.iter().zip(&self.probs).filter(|(_, p)| !p.is_zero())
    }

    /// Constant on every block-permutation orbit.
    pub fn is_symmetric(&self) -> bool {
        let mut seen: HashMap<WeightComposition, &BigRational> = HashMap::new();
        for (c, p) in self.compositions.iter().zip(&self.probs) {
            match seen.entry(c.sorted_desc()) {
                std::collections::hash_map::Entry::Occupied(e) => {
                    if *e.get() != p {
                        return false;
                    }
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(p);
                }
            }
        }
        true
    }

    /// Exact sampler over the support.
    pub fn sampler(&self) -> DistributionSampler {
        let den = self.probs.iter().fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
        let mut cumulative = Vec::new();
        let mut indices = Vec::new();
        let mut acc = BigInt::zero();
        for (i, p) in self.probs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            acc += p.numer() * (&den / p.denom());
            cumulative.push(acc.magnitude().clone());
            indices.push(i);
        }
        DistributionSampler {
            total: den.magnitude().clone(),
            cumulative,
            indices,
        }
    }
}

/// Draws composition indices with exactly the distribution's probabilities.
#[derive(Debug, Clone)]
pub struct DistributionSampler {
    total: BigUint,
    cumulative: Vec<BigUint>,
    indices: Vec<usize>,
}

impl DistributionSampler {
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        if self.indices.len() == 1 {
            return self.indices[0];
        }
        let x = rng.gen_biguint_below(&self.total);
        let pos = self.cumulative.partition_point(|c| c <= &x);
        self.indices[pos]
    }
}

/// `lbW`, `ubW` and `Q` of the distribution-free sandwich.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SandwichBounds {
    pub lower: WorkFactor,
    pub upper: WorkFactor,
    /// `None` when some error composition can never be decoded.
    pub q_sum: Option<BigRational>,
}

type ProbKey = (usize, Vec<(usize, usize)>);

/// Memoized evaluator for one context. Safe to share between threads.
pub struct Analyzer {
    ctx: AnalysisContext,
    blocks: RwLock<HashMap<(usize, usize), Arc<IntersectionPmf>>>,
    probs: RwLock<HashMap<ProbKey, BigRational>>,
}

impl fmt::Debug for Analyzer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Analyzer").field("ctx", &self.ctx).finish()
    }
}

impl Analyzer {
    pub fn new(ctx: AnalysisContext) -> Self {
        Self {
            ctx,
            blocks: RwLock::default(),
            probs: RwLock::default(),
        }
    }

    pub fn ctx(&self) -> &AnalysisContext {
        &self.ctx
    }

    fn block_pmf(&self, w_i: usize, u_i: usize) -> Arc<IntersectionPmf> {
        if let Some(p) = self.blocks.read().unwrap().get(&(w_i, u_i)) {
            return p.clone();
        }
        let p = Arc::new(single_block_pmf(w_i, u_i, self.ctx.mu, self.ctx.q));
        self.blocks.write().unwrap().entry((w_i, u_i)).or_insert(p).clone()
    }

    /// `P_μ(u⃗, w⃗)`. The threshold uses the totals of the given
    /// compositions, so `w⃗` need not have total `ctx.w`.
    pub fn success_prob(&self, u_comp: &WeightComposition, w_comp: &WeightComposition) -> BigRational {
        let lo = min_trade(w_comp.total(), u_comp.total(), self.ctx.redundancy());
        if lo == 0 {
            return BigRational::one();
        }
        let mut pairs: Vec<(usize, usize)> = w_comp
            .parts()
            .iter()
            .zip(u_comp.parts())
            .filter(|(_, &u)| u > 0)
            .map(|(&w, &u)| (w, u))
            .collect();
        let reachable: usize = pairs.iter().map(|&(w, u)| w.min(u)).sum();
        if reachable < lo {
            return BigRational::zero();
        }
        pairs.sort_unstable();
        let key = (lo, pairs);
        if let Some(p) = self.probs.read().unwrap().get(&key) {
            return p.clone();
        }
        let pmf = key.1.iter().fold(IntersectionPmf::point_mass(0), |acc, &(w, u)| {
            acc.convolve(&self.block_pmf(w, u))
        });
        let p = pmf.tail(lo);
        self.probs.write().unwrap().entry(key).or_insert(p).clone()
    }

    /// `P_{μ,u}(w⃗) = Σ_{u⃗} p_{u⃗} P_μ(u⃗, w⃗)`.
    pub fn success_prob_given_dist(&self, dist: &GuessDistribution, w_comp: &WeightComposition) -> BigRational {
        dist.support().map(|(u, p)| p * self.success_prob(u, w_comp)).sum()
    }

    /// `P_{μ,u}(w)` and the lexicographically first minimizing `w⃗`.
    pub fn worst_case_prob(&self, dist: &GuessDistribution) -> (BigRational, WeightComposition) {
        if !dist.is_symmetric() {
            return self.worst_case_prob_full(dist);
        }
        let reps = enumerate_partitions(self.ctx.w, self.ctx.ell, self.ctx.mu).expect("w validated");
        let values: Vec<BigRational> = reps.par_iter().map(|w| self.success_prob_given_dist(dist, w)).collect();
        let min = values.iter().min().expect("W(w) is nonempty").clone();
        let arg = reps
            .iter()
            .zip(&values)
            .filter(|(_, v)| **v == min)
            .map(|(w, _)| ascending(w))
            .min()
            .expect("minimum attained");
        (min, arg)
    }

    /// [`Analyzer::worst_case_prob`] over every composition, without the
    /// orbit reduction.
    pub fn worst_case_prob_full(&self, dist: &GuessDistribution) -> (BigRational, WeightComposition) {
        let all = self.ctx.w_compositions();
        let values: Vec<BigRational> = all.par_iter().map(|w| self.success_prob_given_dist(dist, w)).collect();
        let (idx, min) = values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))
            .expect("W(w) is nonempty");
        (min.clone(), all[idx].clone())
    }

    /// `n² ℓ^u / P_{μ,u}(w)`.
    pub fn work_factor_upper(&self, dist: &GuessDistribution) -> WorkFactor {
        WorkFactor::from_prob(&self.ctx.iteration_cost(), &self.worst_case_prob(dist).0)
    }

    /// `max_{u⃗} P_μ(u⃗, w⃗)`.
    pub fn best_guess_prob(&self, w_comp: &WeightComposition) -> BigRational {
        let us = self.ctx.u_compositions();
        us.iter()
            .map(|u| self.success_prob(u, w_comp))
            .max()
            .expect("W(u) is nonempty")
    }

    /// Distribution-free bounds on the worst-case work factor.
    pub fn sandwich_bounds(&self) -> SandwichBounds {
        let reps = enumerate_partitions(self.ctx.w, self.ctx.ell, self.ctx.mu).expect("w validated");
        let terms: Vec<Option<BigRational>> = reps
            .par_iter()
            .map(|w| {
                let best = self.best_guess_prob(w);
                (!best.is_zero()).then(|| BigRational::from_integer(BigInt::from(w.orbit_size())) / best)
            })
            .collect();
        self.bounds_from_terms(terms)
    }

    /// [`Analyzer::sandwich_bounds`] summing over every composition.
    pub fn sandwich_bounds_full(&self) -> SandwichBounds {
        let all = self.ctx.w_compositions();
        let terms: Vec<Option<BigRational>> = all
            .par_iter()
            .map(|w| {
                let best = self.best_guess_prob(w);
                (!best.is_zero()).then(|| best.recip())
            })
            .collect();
        self.bounds_from_terms(terms)
    }

    fn bounds_from_terms(&self, terms: Vec<Option<BigRational>>) -> SandwichBounds {
        let Some(q_sum) = terms.into_iter().sum::<Option<BigRational>>() else {
            return SandwichBounds {
                lower: WorkFactor::Infinite,
                upper: WorkFactor::Infinite,
                q_sum: None,
            };
        };
        let cost = BigRational::from_integer(BigInt::from(self.ctx.iteration_cost()));
        let count = counting::composition_count(self.ctx.w, self.ctx.ell, self.ctx.mu);
        let upper = &cost * &q_sum;
        let lower = &upper / BigRational::from_integer(BigInt::from(count));
        SandwichBounds {
            lower: WorkFactor::Finite(lower),
            upper: WorkFactor::Finite(upper),
            q_sum: Some(q_sum),
        }
    }

    /// `P̂(j) = max_{w⃗ ∈ W(j)} max_{u⃗} P_μ(u⃗, w⃗)`: the best case over
    /// compositions with every distribution allowed.
    pub fn best_case_prob(&self, j: usize) -> BigRational {
        let reps = enumerate_partitions(j, self.ctx.ell, self.ctx.mu).expect("j <= w validated");
        reps.iter()
            .map(|w| self.best_guess_prob(w))
            .max()
            .expect("W(j) is nonempty")
    }

    /// `max_{w⃗ ∈ W(j)} P_{μ,u}(w⃗)` for a fixed distribution.
    pub fn best_case_prob_given_dist(&self, dist: &GuessDistribution, j: usize) -> BigRational {
        let list = if dist.is_symmetric() {
            enumerate_partitions(j, self.ctx.ell, self.ctx.mu)
        } else {
            enumerate_compositions(j, self.ctx.ell, self.ctx.mu)
        }
        .expect("j <= w validated");
        list.iter()
            .map(|w| self.success_prob_given_dist(dist, w))
            .max()
            .expect("W(j) is nonempty")
    }

    /// `Ā_j = q^{m(k−n)} · NSRM(m, n⃗, j)` for `j = 0 ..= w`.
    pub fn average_spectrum(&self) -> Vec<BigRational> {
        let c = &self.ctx;
        let table = counting::nsrm_table(c.m, &vec![c.eta; c.ell], c.q);
        let scale = counting::pow(c.q, c.m * (c.n - c.k));
        (0..=c.w)
            .map(|j| ratio(table.get(j).cloned().unwrap_or_default(), scale.clone()))
            .collect()
    }

    /// Average-case lower bound for uniform received words, with `P̂(j)` the
    /// best case over all guessing distributions.
    pub fn uniform_lower_bound(&self) -> WorkFactor {
        let spectrum = self.average_spectrum();
        let total: BigRational = spectrum
            .iter()
            .enumerate()
            .map(|(j, a)| a * self.best_case_prob(j))
            .sum();
        WorkFactor::from_prob(&self.ctx.iteration_cost(), &total)
    }

    /// The same bound with `P̂(j)` taken for one fixed guessing distribution.
    pub fn uniform_lower_bound_for(&self, dist: &GuessDistribution) -> WorkFactor {
        let spectrum = self.average_spectrum();
        let total: BigRational = spectrum
            .iter()
            .enumerate()
            .map(|(j, a)| a * self.best_case_prob_given_dist(dist, j))
            .sum();
        WorkFactor::from_prob(&self.ctx.iteration_cost(), &total)
    }
}

/// Lexicographically smallest rearrangement.
fn ascending(c: &WeightComposition) -> WeightComposition {
    let mut parts = c.parts().to_vec();
    parts.sort_unstable();
    WeightComposition::new(parts, c.cap()).expect("same parts")
}
