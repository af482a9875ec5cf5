//! Exact two-phase simplex over `BigRational` and the guessing-distribution
//! linear program.
//!
//! The LP maximizes `t` subject to `Σ_u p_u P(u⃗, w⃗) ≥ t` for every error
//! composition `w⃗`, with `p` a distribution. [`build_lp`] builds it over all
//! compositions. [`build_reduced_lp`] uses one variable per block-permutation
//! orbit of guess compositions and one row per orbit of error compositions;
//! because the problem is concave and invariant under simultaneous block
//! permutations, averaging an optimum over the orbit gives a symmetric
//! optimum, so both programs have the same value.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::analysis::{Analyzer, GuessDistribution, WorkFactor};
use crate::counting::{enumerate_partitions, WeightComposition};
use crate::error::{Error, Result};

/// `maximize c·x subject to A x ≤ b, x ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpInstance {
    pub a: Vec<Vec<BigRational>>,
    pub b: Vec<BigRational>,
    pub c: Vec<BigRational>,
    /// Column labels for the first `N_u` variables.
    pub u_order: Vec<WeightComposition>,
    /// Row labels for the first `N_w` constraints.
    pub w_order: Vec<WeightComposition>,
}

impl LpInstance {
    pub fn rows(&self) -> usize {
        self.a.len()
    }

    pub fn cols(&self) -> usize {
        self.c.len()
    }

    /// `A x ≤ b` and `x ≥ 0`, exactly.
    pub fn is_feasible(&self, x: &[BigRational]) -> bool {
        if x.len() != self.cols() || x.iter().any(|v| v.is_negative()) {
            return false;
        }
        self.a.iter().zip(&self.b).all(|(row, bi)| {
            let lhs: BigRational = row
                .iter()
                .zip(x)
                .filter(|(a, _)| !a.is_zero())
                .map(|(a, v)| a * v)
                .sum();
            &lhs <= bi
        })
    }

    pub fn objective(&self, x: &[BigRational]) -> BigRational {
        self.c.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Stopped after the pivot budget with no certified optimum.
    PivotLimit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<BigRational>,
    pub objective: BigRational,
    /// `z_j − c_j` over structural and slack columns at termination; all
    /// nonnegative when optimal.
    pub reduced_costs: Vec<BigRational>,
    pub pivots: usize,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
    /// `c_j − z_j` for the current objective.
    d: Vec<BigRational>,
    value: BigRational,
    pivots: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
    Budget,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let inv = self.rows[r][col].recip();
        if !inv.is_one() {
            for v in self.rows[r].iter_mut().filter(|v| !v.is_zero()) {
                *v *= &inv;
            }
            self.rhs[r] *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        let nz: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for &j in &nz {
                let t = &f * &pivot_row[j];
                self.rows[i][j] -= t;
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        if !self.d[col].is_zero() {
            let f = self.d[col].clone();
            for &j in &nz {
                let t = &f * &pivot_row[j];
                self.d[j] -= t;
            }
            self.value += &f * &pivot_rhs;
        }
        self.basis[r] = col;
        self.pivots += 1;
    }

    /// Bland's rule: smallest improving column, ties in the ratio test broken
    /// by smallest basic variable.
    fn run(&mut self, allowed: usize, budget: Option<usize>) -> Outcome {
        loop {
            let Some(col) = (0..allowed).find(|&j| self.d[j].is_positive()) else {
                return Outcome::Optimal;
            };
            if budget.is_some_and(|b| self.pivots >= b) {
                return Outcome::Budget;
            }
            let mut best: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return Outcome::Unbounded;
            };
            self.pivot(r, col);
        }
    }

    fn set_objective(&mut self, cost: &[BigRational]) {
        let width = self.rows.first().map_or(cost.len(), Vec::len);
        let mut d: Vec<BigRational> = (0..width).map(|j| cost.get(j).cloned().unwrap_or_default()).collect();
        let mut value = BigRational::zero();
        for (i, &bv) in self.basis.iter().enumerate() {
            let cb = cost.get(bv).cloned().unwrap_or_default();
            if cb.is_zero() {
                continue;
            }
            for (dj, a) in d.iter_mut().zip(&self.rows[i]) {
                if !a.is_zero() {
                    *dj -= &cb * a;
                }
            }
            value += &cb * &self.rhs[i];
        }
        self.d = d;
        self.value = value;
    }
}

/// Exact two-phase simplex. `pivot_budget` bounds the total number of pivots
/// across both phases.
pub fn simplex_solve(lp: &LpInstance, pivot_budget: Option<usize>) -> LpSolution {
    let m = lp.rows();
    let n = lp.cols();
    let negative: Vec<usize> = (0..m).filter(|&i| lp.b[i].is_negative()).collect();
    let n_art = negative.len();
    let width = n + m + n_art;
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art = 0;
    for i in 0..m {
        let flip = lp.b[i].is_negative();
        let mut row = vec![BigRational::zero(); width];
        for (j, a) in lp.a[i].iter().enumerate() {
            row[j] = if flip { -a.clone() } else { a.clone() };
        }
        row[n + i] = if flip { -BigRational::one() } else { BigRational::one() };
        if flip {
            row[n + m + art] = BigRational::one();
            basis.push(n + m + art);
            art += 1;
        } else {
            basis.push(n + i);
        }
        rhs.push(lp.b[i].abs());
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        rhs,
        basis,
        d: Vec::new(),
        value: BigRational::zero(),
        pivots: 0,
    };

    let finish = |t: &Tableau, status: LpStatus| {
        let mut x = vec![BigRational::zero(); n];
        for (i, &bv) in t.basis.iter().enumerate() {
            if bv < n {
                x[bv] = t.rhs[i].clone();
            }
        }
        let reduced_costs = t.d.iter().take(n + m).map(|v| -v.clone()).collect();
        LpSolution {
            status,
            objective: lp.objective(&x),
            x,
            reduced_costs,
            pivots: t.pivots,
        }
    };

    if n_art > 0 {
        let mut phase1 = vec![BigRational::zero(); width];
        for slot in &mut phase1[n + m..] {
            *slot = -BigRational::one();
        }
        t.set_objective(&phase1);
        match t.run(width, pivot_budget) {
            Outcome::Budget => return finish(&t, LpStatus::PivotLimit),
            Outcome::Unbounded => unreachable!("phase one is bounded by zero"),
            Outcome::Optimal => {}
        }
        if t.value.is_negative() {
            return finish(&t, LpStatus::Infeasible);
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= n + m {
                match (0..n + m).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(col) => t.pivot(i, col),
                    None => {
                        t.rows.remove(i);
                        t.rhs.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        for row in &mut t.rows {
            row.truncate(n + m);
        }
    }

    let mut cost = lp.c.clone();
    cost.resize(n + m, BigRational::zero());
    t.set_objective(&cost);
    match t.run(n + m, pivot_budget) {
        Outcome::Optimal => finish(&t, LpStatus::Optimal),
        Outcome::Unbounded => finish(&t, LpStatus::Unbounded),
        Outcome::Budget => finish(&t, LpStatus::PivotLimit),
    }
}

/// Appends the probability-simplex rows and the `t` column.
fn assemble(
    probs: Vec<Vec<BigRational>>,
    u_order: Vec<WeightComposition>,
    w_order: Vec<WeightComposition>,
) -> LpInstance {
    let nu = u_order.len();
    let mut a: Vec<Vec<BigRational>> = probs
        .into_iter()
        .map(|row| {
            let mut r: Vec<BigRational> = row.into_iter().map(|p| -p).collect();
            r.push(BigRational::one());
            r
        })
        .collect();
    let mut sum = vec![BigRational::one(); nu];
    sum.push(BigRational::zero());
    a.push(sum.clone());
    a.push(sum.into_iter().map(|v| -v).collect());
    let mut b = vec![BigRational::zero(); w_order.len()];
    b.push(BigRational::one());
    b.push(-BigRational::one());
    let mut c = vec![BigRational::zero(); nu];
    c.push(BigRational::one());
    LpInstance {
        a,
        b,
        c,
        u_order,
        w_order,
    }
}

/// The LP over all compositions, rows and columns in lexicographic order.
pub fn build_lp(an: &Analyzer) -> LpInstance {
    let us = an.ctx().u_compositions();
    let ws = an.ctx().w_compositions();
    let probs = ws
        .par_iter()
        .map(|w| us.iter().map(|u| an.success_prob(u, w)).collect())
        .collect();
    assemble(probs, us, ws)
}

/// Orbit structure of `W(u, ℓ, μ)`.
#[derive(Debug, Clone)]
pub struct GuessOrbits {
    pub reps: Vec<WeightComposition>,
    /// Orbit index of every composition in lexicographic order.
    pub orbit_of: Vec<usize>,
    pub sizes: Vec<usize>,
}

pub fn guess_orbits(an: &Analyzer) -> GuessOrbits {
    let c = an.ctx();
    let reps = enumerate_partitions(c.u, c.ell, c.mu).expect("u validated");
    let index: HashMap<WeightComposition, usize> = reps.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    let orbit_of: Vec<usize> = c.u_compositions().iter().map(|u| index[&u.sorted_desc()]).collect();
    let mut sizes = vec![0usize; reps.len()];
    for &o in &orbit_of {
        sizes[o] += 1;
    }
    GuessOrbits { reps, orbit_of, sizes }
}

/// The orbit-reduced LP. Column `U` carries the total mass `y_U` of orbit
/// `U`; the entry for row `λ` is the orbit average of `P(u⃗, λ)`.
pub fn build_reduced_lp(an: &Analyzer) -> (LpInstance, GuessOrbits) {
    let c = an.ctx();
    let orbits = guess_orbits(an);
    let us = c.u_compositions();
    let w_reps = enumerate_partitions(c.w, c.ell, c.mu).expect("w validated");
    let probs = w_reps
        .par_iter()
        .map(|w| {
            let mut sums = vec![BigRational::zero(); orbits.reps.len()];
            for (u, &o) in us.iter().zip(&orbits.orbit_of) {
                sums[o] += an.success_prob(u, w);
            }
            sums.into_iter()
                .zip(&orbits.sizes)
                .map(|(s, &size)| s / BigRational::from_integer(BigInt::from(size)))
                .collect()
        })
        .collect();
    (assemble(probs, orbits.reps.clone(), w_reps), orbits)
}

/// LP-optimal guessing distribution and its worst-case work factor.
#[derive(Debug, Clone)]
pub struct OptimalDistribution {
    pub dist: GuessDistribution,
    /// Optimal worst-case success probability `x_{N_u+1}`.
    pub objective: BigRational,
    pub work_factor: WorkFactor,
    pub solution: LpSolution,
}

fn check_status(sol: &LpSolution) -> Result<()> {
    match sol.status {
        LpStatus::Optimal => Ok(()),
        LpStatus::PivotLimit => Err(Error::Internal(format!(
            "pivot budget exhausted after {} pivots",
            sol.pivots
        ))),
        other => Err(Error::Internal(format!("guessing LP reported {other:?}"))),
    }
}

/// Solves the orbit-reduced LP and spreads each orbit's mass evenly.
pub fn optimal_distribution(an: &Analyzer, pivot_budget: Option<usize>) -> Result<OptimalDistribution> {
    let (lp, orbits) = build_reduced_lp(an);
    let solution = simplex_solve(&lp, pivot_budget);
    check_status(&solution)?;
    let probs = orbits
        .orbit_of
        .iter()
        .map(|&o| &solution.x[o] / BigRational::from_integer(BigInt::from(orbits.sizes[o])))
        .collect();
    finish(an, GuessDistribution::new(an.ctx(), probs)?, solution)
}

/// Solves the LP over all compositions.
pub fn optimal_distribution_full(an: &Analyzer, pivot_budget: Option<usize>) -> Result<OptimalDistribution> {
    let lp = build_lp(an);
    let solution = simplex_solve(&lp, pivot_budget);
    check_status(&solution)?;
    let nu = lp.u_order.len();
    finish(
        an,
        GuessDistribution::new(an.ctx(), solution.x[..nu].to_vec())?,
        solution,
    )
}

fn finish(an: &Analyzer, dist: GuessDistribution, solution: LpSolution) -> Result<OptimalDistribution> {
    let objective = solution.objective.clone();
    let work_factor = WorkFactor::from_prob(&an.ctx().iteration_cost(), &objective);
    Ok(OptimalDistribution {
        dist,
        objective,
        work_factor,
        solution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::AnalysisContext;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn lp(a: Vec<Vec<i64>>, b: Vec<i64>, c: Vec<i64>) -> LpInstance {
        LpInstance {
            a: a.into_iter()
                .map(|row| row.into_iter().map(|v| r(v, 1)).collect())
                .collect(),
            b: b.into_iter().map(|v| r(v, 1)).collect(),
            c: c.into_iter().map(|v| r(v, 1)).collect(),
            u_order: Vec::new(),
            w_order: Vec::new(),
        }
    }

    #[test]
    fn tiny_lp() {
        let p = lp(vec![vec![1, 1]], vec![1], vec![0, 1]);
        let s = simplex_solve(&p, None);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.x, vec![r(0, 1), r(1, 1)]);
        assert_eq!(s.objective, r(1, 1));
        assert!(s.reduced_costs.iter().all(|v| !v.is_negative()));
    }

    #[test]
    fn textbook_lp() {
        // max 3x + 5y s.t. x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), 36.
        let p = lp(vec![vec![1, 0], vec![0, 2], vec![3, 2]], vec![4, 12, 18], vec![3, 5]);
        let s = simplex_solve(&p, None);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.x, vec![r(2, 1), r(6, 1)]);
        assert_eq!(s.objective, r(36, 1));
        assert!(p.is_feasible(&s.x));
    }

    #[test]
    fn statuses() {
        let infeasible = lp(vec![vec![1], vec![-1]], vec![1, -2], vec![1]);
        assert_eq!(simplex_solve(&infeasible, None).status, LpStatus::Infeasible);
        let unbounded = lp(vec![vec![-1, 1]], vec![1], vec![1, 0]);
        assert_eq!(simplex_solve(&unbounded, None).status, LpStatus::Unbounded);
        let p = lp(vec![vec![1, 0], vec![0, 2], vec![3, 2]], vec![4, 12, 18], vec![3, 5]);
        assert_eq!(simplex_solve(&p, Some(1)).status, LpStatus::PivotLimit);
    }

    #[test]
    fn equality_pair_and_degenerate_rows() {
        // x + y = 1 encoded as two inequalities, max x − y.
        let p = lp(vec![vec![1, 1], vec![-1, -1], vec![1, 0]], vec![1, -1, 1], vec![1, -1]);
        let s = simplex_solve(&p, None);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.x, vec![r(1, 1), r(0, 1)]);
    }

    #[test]
    fn single_block_instance() {
        let ctx = AnalysisContext::new(11, 10, 1, 10, 5, 4, 3).unwrap();
        let an = Analyzer::new(ctx);
        let lp = build_lp(&an);
        assert_eq!((lp.rows(), lp.cols()), (3, 2));
        let opt = optimal_distribution(&an, None).unwrap();
        let u = &lp.u_order[0];
        let w = &lp.w_order[0];
        assert_eq!(opt.objective, an.success_prob(u, w));
        assert_eq!(opt.dist.probs(), &[r(1, 1)]);
    }

    #[test]
    fn structure_of_full_instance() {
        let ctx = AnalysisContext::new(11, 2, 5, 2, 5, 4, 3).unwrap();
        let an = Analyzer::new(ctx);
        let lp = build_lp(&an);
        let (nw, nu) = (lp.w_order.len(), lp.u_order.len());
        assert_eq!((lp.rows(), lp.cols()), (nw + 2, nu + 1));
        for (i, w) in lp.w_order.iter().enumerate().step_by(7) {
            for (j, u) in lp.u_order.iter().enumerate().step_by(5) {
                assert_eq!(lp.a[i][j], -an.success_prob(u, w));
            }
            assert!(lp.a[i][nu].is_one());
        }
        assert!(lp.a[nw][..nu].iter().all(|v| v.is_one()) && lp.a[nw][nu].is_zero());
        assert!(lp.a[nw + 1][..nu].iter().all(|v| *v == -BigRational::one()));
        assert_eq!(lp.b[nw], r(1, 1));
        assert_eq!(lp.b[nw + 1], r(-1, 1));
    }

    #[test]
    fn reduced_and_full_agree() {
        for ctx in [
            AnalysisContext::new(2, 2, 3, 2, 2, 3, 2).unwrap(),
            AnalysisContext::new(11, 2, 5, 2, 5, 4, 3).unwrap(),
            AnalysisContext::new(3, 2, 2, 2, 2, 3, 2).unwrap(),
        ] {
            let an = Analyzer::new(ctx);
            let reduced = optimal_distribution(&an, None).unwrap();
            let full = optimal_distribution_full(&an, None).unwrap();
            assert_eq!(reduced.objective, full.objective);
            assert_eq!(an.worst_case_prob(&reduced.dist).0, reduced.objective);
            assert_eq!(an.worst_case_prob_full(&full.dist).0, full.objective);
            let lp = build_lp(&an);
            let mut x = full.dist.probs().to_vec();
            x.push(full.objective.clone());
            assert!(lp.is_feasible(&x));
            let mut xr = reduced.dist.probs().to_vec();
            xr.push(reduced.objective.clone());
            assert!(lp.is_feasible(&xr));
            let uniform = GuessDistribution::uniform(an.ctx());
            assert!(an.worst_case_prob(&uniform).0 <= reduced.objective);
        }
    }

    #[test]
    fn deterministic_pivots() {
        let ctx = AnalysisContext::new(11, 2, 5, 2, 5, 4, 3).unwrap();
        let an = Analyzer::new(ctx);
        let lp = build_lp(&an);
        assert_eq!(simplex_solve(&lp, None), simplex_solve(&lp, None));
    }
}
