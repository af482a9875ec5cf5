//! Brute-force reference computations over prime fields `F_p`.
//!
//! Nothing here shares code with `lrs-core`: matrices are plain `Vec<Vec<u32>>`
//! and every count is obtained by enumeration.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

pub type Mat = Vec<Vec<u32>>;

fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat; p is prime and small.
    let mut acc = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Reduced row echelon form with zero rows dropped.
pub fn rref(m: &Mat, p: u32) -> Mat {
    let mut a: Mat = m.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut row = 0;
    for col in 0..cols {
        let Some(piv) = (row..a.len()).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(row, piv);
        let inv = inv_mod(a[row][col], p);
        for x in &mut a[row] {
            *x = *x * inv % p;
        }
        for i in 0..a.len() {
            if i != row && a[i][col] != 0 {
                let f = a[i][col];
                for j in 0..cols {
                    a[i][j] = (a[i][j] + p * p - f * a[row][j] % p) % p;
                }
            }
        }
        row += 1;
    }
    a.truncate(row);
    a
}

pub fn rank(m: &Mat, p: u32) -> usize {
    rref(m, p).len()
}

/// All vectors of `F_p^len`, first coordinate varying fastest.
pub fn all_vectors(len: usize, p: u32) -> impl Iterator<Item = Vec<u32>> {
    let total = (p as usize).pow(len as u32);
    (0..total).map(move |mut idx| {
        (0..len)
            .map(|_| {
                let d = (idx % p as usize) as u32;
                idx /= p as usize;
                d
            })
            .collect()
    })
}

/// All `rows × cols` matrices over `F_p`.
pub fn all_matrices(rows: usize, cols: usize, p: u32) -> impl Iterator<Item = Mat> {
    all_vectors(rows * cols, p).map(move |v| v.chunks(cols.max(1)).map(<[u32]>::to_vec).take(rows).collect())
}

/// `counts[j]` = number of `rows × cols` matrices of rank `j`.
pub fn count_by_rank(rows: usize, cols: usize, p: u32) -> Vec<u64> {
    let mut counts = vec![0u64; rows.min(cols) + 1];
    if cols == 0 || rows == 0 {
        counts[0] = 1;
        return counts;
    }
    for m in all_matrices(rows, cols, p) {
        counts[rank(&m, p)] += 1;
    }
    counts
}

/// Every `k`-dimensional subspace of `F_p^dim`, as its RREF basis.
pub fn subspaces(dim: usize, k: usize, p: u32) -> Vec<Mat> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut seen = BTreeSet::new();
    for m in all_matrices(k, dim, p) {
        let r = rref(&m, p);
        if r.len() == k {
            seen.insert(r);
        }
    }
    seen.into_iter().collect()
}

pub fn intersection_dim(a: &Mat, b: &Mat, p: u32) -> usize {
    let mut stacked = a.clone();
    stacked.extend(b.iter().cloned());
    a.len() + b.len() - rank(&stacked, p)
}

/// `counts[j]` = number of vectors in `F_{p^m}^n` of sum-rank weight `j`,
/// visiting every vector as a tuple of `m × n_i` expansion matrices.
pub fn sum_rank_spectrum(m: usize, blocks: &[usize], p: u32) -> Vec<u64> {
    let ranks: Vec<Vec<usize>> = blocks
        .iter()
        .map(|&ni| all_matrices(m, ni, p).map(|x| rank(&x, p)).collect())
        .collect();
    let max: usize = blocks.iter().map(|&ni| ni.min(m)).sum();
    let mut counts = vec![0u64; max + 1];
    fn walk(ranks: &[Vec<usize>], acc: usize, counts: &mut [u64]) {
        match ranks.split_first() {
            None => counts[acc] += 1,
            Some((first, rest)) => {
                for &r in first {
                    walk(rest, acc + r, counts);
                }
            }
        }
    }
    walk(&ranks, 0, &mut counts);
    counts
}

/// Distribution of `dim(W ∩ U)` over all pairs of a `w`- and a
/// `u`-dimensional subspace of `F_p^mu`.
pub fn intersection_pmf(p: u32, mu: usize, w: usize, u: usize) -> Vec<BigRational> {
    let ws = subspaces(mu, w, p);
    let us = subspaces(mu, u, p);
    let mut counts = vec![0u64; mu + 1];
    for a in &ws {
        for b in &us {
            counts[intersection_dim(a, b, p)] += 1;
        }
    }
    let total = BigInt::from((ws.len() * us.len()) as u64);
    counts
        .into_iter()
        .map(|c| BigRational::new(BigInt::from(c), total.clone()))
        .collect()
}

/// Fraction of (error support, guessed support) tuples, both ranging over
/// all subspace tuples of the given block dimensions, whose blockwise
/// intersection dimensions sum to at least `lo`.
pub fn guess_success(p: u32, mu: usize, w_parts: &[usize], u_parts: &[usize], lo: usize) -> BigRational {
    let per_block: Vec<Vec<usize>> = w_parts
        .iter()
        .zip(u_parts)
        .map(|(&w, &u)| {
            let us = subspaces(mu, u, p);
            subspaces(mu, w, p)
                .iter()
                .flat_map(|a| us.iter().map(|b| intersection_dim(a, b, p)).collect::<Vec<_>>())
                .collect()
        })
        .collect();
    let (mut hit, mut total) = (0u64, 0u64);
    fn walk(blocks: &[Vec<usize>], acc: usize, lo: usize, hit: &mut u64, total: &mut u64) {
        match blocks.split_first() {
            None => {
                *total += 1;
                if acc >= lo {
                    *hit += 1;
                }
            }
            Some((first, rest)) => {
                for &d in first {
                    walk(rest, acc + d, lo, hit, total);
                }
            }
        }
    }
    walk(&per_block, 0, lo, &mut hit, &mut total);
    BigRational::new(BigInt::from(hit), BigInt::from(total))
}

/// Searches the grid of distributions with masses in `{0, 1/steps, …, 1}`
/// for one whose worst row value `min_w Σ_u x_u rows[w][u]` exceeds
/// `threshold`, by branch and bound. Besides the single-row bounds, the
/// uniform average over all rows and over each of `groups` prunes subtrees.
pub fn grid_exceeds(
    rows: &[Vec<BigRational>],
    steps: u32,
    threshold: &BigRational,
    groups: &[Vec<usize>],
) -> Option<Vec<u32>> {
    let nu = rows.first().map_or(0, Vec::len);
    if nu == 0 {
        return None;
    }
    let mut den = threshold.denom().clone();
    for r in rows {
        for x in r {
            den = den.lcm(x.denom());
        }
    }
    let scale = |x: &BigRational| (x * BigRational::from_integer(den.clone())).to_integer();
    let m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(scale).collect()).collect();
    let target = scale(threshold) * BigInt::from(steps);

    let mut all: Vec<Vec<usize>> = (0..rows.len()).map(|w| vec![w]).collect();
    all.push((0..rows.len()).collect());
    all.extend(groups.iter().filter(|g| !g.is_empty()).cloned());
    let col: Vec<Vec<BigInt>> = all
        .iter()
        .map(|g| (0..nu).map(|u| g.iter().map(|&w| &m[w][u]).sum()).collect())
        .collect();
    let suffix_max: Vec<Vec<BigInt>> = col
        .iter()
        .map(|c| {
            let mut out = vec![BigInt::zero(); nu + 1];
            for u in (0..nu).rev() {
                out[u] = if u + 1 == nu {
                    c[u].clone()
                } else {
                    c[u].clone().max(out[u + 1].clone())
                };
            }
            out
        })
        .collect();
    let limits: Vec<BigInt> = all.iter().map(|g| &target * BigInt::from(g.len())).collect();

    struct Search<'a> {
        m: &'a [Vec<BigInt>],
        col: &'a [Vec<BigInt>],
        suffix_max: &'a [Vec<BigInt>],
        limits: &'a [BigInt],
        target: &'a BigInt,
        point: Vec<u32>,
    }

    impl Search<'_> {
        fn dfs(&mut self, idx: usize, left: u32, group_sums: &[BigInt], row_sums: &[BigInt]) -> bool {
            let nu = self.point.len();
            let r = BigInt::from(left);
            for (g, s) in group_sums.iter().enumerate() {
                if s + &r * &self.suffix_max[g][idx] <= self.limits[g] {
                    return false;
                }
            }
            if idx + 1 == nu {
                self.point[idx] = left;
                let done = row_sums
                    .iter()
                    .enumerate()
                    .all(|(w, s)| s + &r * &self.m[w][idx] > *self.target);
                return done;
            }
            for v in (0..=left).rev() {
                self.point[idx] = v;
                let bv = BigInt::from(v);
                let gs: Vec<BigInt> = group_sums
                    .iter()
                    .enumerate()
                    .map(|(g, s)| s + &bv * &self.col[g][idx])
                    .collect();
                let rs: Vec<BigInt> = row_sums
                    .iter()
                    .enumerate()
                    .map(|(w, s)| s + &bv * &self.m[w][idx])
                    .collect();
                if self.dfs(idx + 1, left - v, &gs, &rs) {
                    return true;
                }
            }
            self.point[idx] = 0;
            false
        }
    }

    let mut search = Search {
        m: &m,
        col: &col,
        suffix_max: &suffix_max,
        limits: &limits,
        target: &target,
        point: vec![0; nu],
    };
    let zeros_g = vec![BigInt::zero(); all.len()];
    let zeros_r = vec![BigInt::zero(); rows.len()];
    search.dfs(0, steps, &zeros_g, &zeros_r).then_some(search.point)
}

/// `[a choose j]_p` counted as the number of `j`-subspaces of `F_p^a`.
pub fn gaussian_by_enumeration(a: usize, j: usize, p: u32) -> u64 {
    if j > a {
        return 0;
    }
    subspaces(a, j, p).len() as u64
}
