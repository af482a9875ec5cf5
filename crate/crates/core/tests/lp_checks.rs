use std::collections::BTreeMap;

use lrs_core::analysis::{AnalysisContext, Analyzer};
use lrs_core::lp::{build_lp, optimal_distribution, optimal_distribution_full, simplex_solve, LpStatus};
use num_rational::BigRational;
use num_traits::{One, Zero};

fn small(ell: usize) -> Analyzer {
    let eta = 10 / ell;
    Analyzer::new(AnalysisContext::new(11, eta, ell, eta, 5, 4, 3).unwrap())
}

#[test]
fn reduced_lp_matches_full_lp_on_small_contexts() {
    // The full instance at ell = 10 takes thousands of pivots; the
    // acceptance run covers it.
    for ell in [1, 2, 5] {
        let an = small(ell);
        let reduced = optimal_distribution(&an, None).unwrap();
        let full = optimal_distribution_full(&an, None).unwrap();
        assert_eq!(reduced.objective, full.objective, "ell={ell}");
        assert_eq!(an.worst_case_prob(&reduced.dist).0, reduced.objective);
        assert_eq!(an.worst_case_prob_full(&full.dist).0, full.objective);
        assert!(full.solution.reduced_costs.iter().all(|r| *r >= BigRational::zero()));
        let total: BigRational = reduced.dist.probs().iter().sum();
        assert!(total.is_one());
    }
}

#[test]
fn full_lp_cells_are_success_probabilities() {
    let an = small(5);
    let lp = build_lp(&an);
    let nu = lp.u_order.len();
    let mut state = 99u64;
    for _ in 0..10 {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
        let i = (state >> 33) as usize % lp.w_order.len();
        let j = (state >> 13) as usize % nu;
        assert_eq!(lp.a[i][j], -an.success_prob(&lp.u_order[j], &lp.w_order[i]));
    }
    let sol = simplex_solve(&lp, None);
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!(lp.is_feasible(&sol.x));
}

#[test]
fn lp_optimum_sits_inside_the_sandwich() {
    for ell in [1, 2, 5, 10] {
        let an = small(ell);
        let sb = an.sandwich_bounds();
        let opt = optimal_distribution(&an, None).unwrap();
        assert!(sb.lower <= opt.work_factor && opt.work_factor <= sb.upper, "ell={ell}");
        assert_eq!(sb, an.sandwich_bounds_full());
        if ell == 1 {
            assert_eq!(sb.lower, sb.upper);
        }
    }
}

#[test]
fn no_grid_distribution_beats_the_lp() {
    for ell in [1, 2, 5] {
        let an = small(ell);
        let opt = optimal_distribution(&an, None).unwrap();
        let us = an.ctx().u_compositions();
        let ws = an.ctx().w_compositions();
        let rows: Vec<Vec<BigRational>> = ws
            .iter()
            .map(|w| us.iter().map(|u| an.success_prob(u, w)).collect())
            .collect();
        let mut orbits: BTreeMap<_, Vec<usize>> = BTreeMap::new();
        for (i, w) in ws.iter().enumerate() {
            orbits.entry(w.sorted_desc()).or_default().push(i);
        }
        let groups: Vec<Vec<usize>> = orbits.into_values().collect();
        assert_eq!(
            lrs_oracles::grid_exceeds(&rows, 8, &opt.objective, &groups),
            None,
            "ell={ell}"
        );
    }
}
