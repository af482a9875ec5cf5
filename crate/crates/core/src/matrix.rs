//! Dense linear algebra over any [`Field`]: echelon forms, rank, kernels,
//! inverses, subspaces and uniform sampling of full-rank matrices.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Field;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Copy> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn zeros<F: Field<Elem = E>>(field: &F, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, field.zero())
    }

    pub fn identity<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    /// Panics if rows have different lengths.
    pub fn from_rows(rows: &[Vec<E>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend_from_slice(r);
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)]);
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Rows `self` followed by rows of `other`.
    pub fn stack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column count mismatch in stack");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Self {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<E> std::ops::Index<(usize, usize)> for Matrix<E> {
    type Output = E;
    fn index(&self, (i, j): (usize, usize)) -> &E {
        &self.data[i * self.cols + j]
    }
}

impl<E> std::ops::IndexMut<(usize, usize)> for Matrix<E> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        &mut self.data[i * self.cols + j]
    }
}

pub fn mul<F: Field>(field: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.cols, b.rows, "inner dimension mismatch");
    let mut out = Matrix::zeros(field, a.rows, b.cols);
    for i in 0..a.rows {
        for t in 0..a.cols {
            let x = a[(i, t)];
            if field.is_zero(x) {
                continue;
            }
            for j in 0..b.cols {
                out[(i, j)] = field.add(out[(i, j)], field.mul(x, b[(t, j)]));
            }
        }
    }
    out
}

/// Row vector times matrix.
pub fn vec_mul<F: Field>(field: &F, v: &[F::Elem], m: &Matrix<F::Elem>) -> Vec<F::Elem> {
    assert_eq!(v.len(), m.rows, "vector length mismatch");
    let mut out = vec![field.zero(); m.cols];
    for (t, &x) in v.iter().enumerate() {
        if field.is_zero(x) {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o = field.add(*o, field.mul(x, m[(t, j)]));
        }
    }
    out
}

/// Matrix times column vector.
pub fn mul_vec<F: Field>(field: &F, m: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    assert_eq!(v.len(), m.cols, "vector length mismatch");
    (0..m.rows)
        .map(|i| {
            m.row(i)
                .iter()
                .zip(v)
                .fold(field.zero(), |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
        })
        .collect()
}

/// Reduced row echelon form with its pivot columns. Zero rows are kept at
/// the bottom so the shape is unchanged.
pub fn rref_with_pivots<F: Field>(field: &F, m: &Matrix<F::Elem>) -> (Matrix<F::Elem>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&i| !field.is_zero(a[(i, col)])) else {
            continue;
        };
        a.swap_rows(row, p);
        let inv = field.inv(a[(row, col)]).expect("nonzero pivot");
        for j in col..a.cols {
            a[(row, j)] = field.mul(a[(row, j)], inv);
        }
        for i in 0..a.rows {
            if i == row {
                continue;
            }
            let factor = a[(i, col)];
            if field.is_zero(factor) {
                continue;
            }
            for j in col..a.cols {
                let t = field.mul(factor, a[(row, j)]);
                a[(i, j)] = field.sub(a[(i, j)], t);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

pub fn rref<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    rref_with_pivots(field, m).0
}

pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    rref_with_pivots(field, m).1.len()
}

/// Basis of the right kernel `{x : M x = 0}`, one vector per free column in
/// increasing column order.
pub fn right_kernel<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let (r, pivots) = rref_with_pivots(field, m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| kernel_vector(field, &r, &pivots, free))
        .collect()
}

/// Kernel vector with `x_free = 1` and all other free coordinates zero,
/// read off an RREF matrix.
pub(crate) fn kernel_vector<F: Field>(field: &F, r: &Matrix<F::Elem>, pivots: &[usize], free: usize) -> Vec<F::Elem> {
    let mut x = vec![field.zero(); r.cols];
    x[free] = field.one();
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = field.neg(r[(i, free)]);
    }
    x
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    assert_eq!(m.rows, m.cols, "inverse of a non-square matrix");
    let n = m.rows;
    let mut aug = Matrix::zeros(field, n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)];
        }
        aug[(i, n + i)] = field.one();
    }
    let (r, pivots) = rref_with_pivots(field, &aug);
    if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
        return None;
    }
    let mut inv = Matrix::zeros(field, n, n);
    for i in 0..n {
        for j in 0..n {
            inv[(i, j)] = r[(i, n + j)];
        }
    }
    Some(inv)
}

/// Invertible `T` with `B · T = [0 | I_u]` for a full-rank `u × η` matrix `B`.
///
/// `B` is completed to a basis by the unit vectors of its non-pivot columns,
/// `S = [C; B]`, and `T = S^{-1}`.
pub fn full_rank_completion<F: Field>(field: &F, b: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>> {
    let (u, eta) = (b.rows, b.cols);
    let (_, pivots) = rref_with_pivots(field, b);
    if pivots.len() != u {
        return Err(Error::RankDeficient {
            expected: u,
            got: pivots.len(),
        });
    }
    let mut is_pivot = vec![false; eta];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut s = Matrix::zeros(field, eta, eta);
    let mut row = 0;
    for c in (0..eta).filter(|&c| !is_pivot[c]) {
        s[(row, c)] = field.one();
        row += 1;
    }
    for i in 0..u {
        for j in 0..eta {
            s[(row + i, j)] = b[(i, j)];
        }
    }
    inverse(field, &s).ok_or_else(|| Error::Internal("basis completion is singular".into()))
}

/// Uniformly random `rows × cols` matrix of rank `rows` (`rows <= cols`),
/// by rejection sampling.
pub fn sample_full_rank<F: Field, R: Rng + ?Sized>(
    field: &F,
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Matrix<F::Elem> {
    assert!(rows <= cols, "cannot have full row rank {rows} with {cols} columns");
    loop {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        let m = Matrix { rows, cols, data };
        if rank(field, &m) == rows {
            return m;
        }
    }
}

/// `F`-subspace of `F^ambient_dim` stored by its canonical RREF basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace<E> {
    ambient_dim: usize,
    basis: Matrix<E>,
}

impl<E: Copy> Subspace<E> {
    pub fn zero<F: Field<Elem = E>>(field: &F, ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Matrix::zeros(field, 0, ambient_dim),
        }
    }

    pub fn full<F: Field<Elem = E>>(field: &F, ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Matrix::identity(field, ambient_dim),
        }
    }

    /// Row space of `generators`.
    pub fn row_space<F: Field<Elem = E>>(field: &F, generators: &Matrix<E>) -> Self {
        let (r, pivots) = rref_with_pivots(field, generators);
        let keep: Vec<usize> = (0..pivots.len()).collect();
        Self {
            ambient_dim: generators.cols,
            basis: r.select_rows(&keep),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    /// Canonical RREF basis, one row per dimension.
    pub fn basis(&self) -> &Matrix<E> {
        &self.basis
    }

    pub fn contains<F: Field<Elem = E>>(&self, field: &F, v: &[E]) -> bool {
        let single = Matrix::from_rows(&[v.to_vec()], self.ambient_dim);
        rank(field, &self.basis.stack(&single)) == self.dim()
    }

    /// `S1 + S2`.
    pub fn sum<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(Self::row_space(field, &self.basis.stack(&other.basis)))
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: other.ambient_dim,
            });
        }
        Ok(())
    }
}

/// `dim(S1 ∩ S2) = dim S1 + dim S2 − rank([B1; B2])`.
pub fn subspace_intersection_dim<F: Field>(field: &F, s1: &Subspace<F::Elem>, s2: &Subspace<F::Elem>) -> Result<usize> {
    s1.check_ambient(s2)?;
    let stacked = rank(field, &s1.basis.stack(&s2.basis));
    Ok(s1.dim() + s2.dim() - stacked)
}

/// Uniform element of the Grassmannian of `dim`-subspaces of `F^ambient_dim`.
pub fn sample_uniform_subspace<F: Field, R: Rng + ?Sized>(
    field: &F,
    ambient_dim: usize,
    dim: usize,
    rng: &mut R,
) -> Subspace<F::Elem> {
    let generators = sample_full_rank(field, dim, ambient_dim, rng);
    Subspace::row_space(field, &generators)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::field::{BaseElement, BaseField};

    fn gf(p: u64) -> BaseField {
        BaseField::new(p, 1).unwrap()
    }

    fn m(f: &BaseField, rows: &[&[u64]]) -> Matrix<BaseElement> {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<_>> = rows.iter().map(|r| r.iter().map(|&x| f.element(x)).collect()).collect();
        Matrix::from_rows(&rows, cols)
    }

    /// All vectors of `F^n` in index order.
    fn all_vectors(f: &BaseField, n: usize) -> Vec<Vec<BaseElement>> {
        let q = f.order();
        (0..q.pow(n as u32))
            .map(|mut t| {
                (0..n)
                    .map(|_| {
                        let e = f.element(t % q);
                        t /= q;
                        e
                    })
                    .collect()
            })
            .collect()
    }

    /// Every subspace of `F_2^n`, collected as canonical row spaces of all
    /// generator sets of size up to n.
    fn all_subspaces(f: &BaseField, n: usize) -> Vec<Subspace<BaseElement>> {
        let vecs = all_vectors(f, n);
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let total = vecs.len();
        for mask in 0u64..(1 << total.min(16)) {
            let gens: Vec<Vec<_>> = (0..total)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| vecs[i].clone())
                .collect();
            if gens.len() > n {
                continue;
            }
            let s = Subspace::row_space(f, &Matrix::from_rows(&gens, n));
            if seen.insert(s.clone()) {
                out.push(s);
            }
        }
        out
    }

    #[test]
    fn rank_examples() {
        let f = gf(2);
        assert_eq!(rank(&f, &Matrix::zeros(&f, 3, 4)), 0);
        assert_eq!(rank(&f, &Matrix::identity(&f, 5)), 5);
        assert_eq!(rank(&f, &m(&f, &[&[1, 1], &[1, 1]])), 1);
    }

    #[test]
    fn rref_idempotent_and_kernel() {
        let f = gf(11);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..7);
            let data: Vec<Vec<_>> = (0..rows)
                .map(|_| (0..cols).map(|_| f.random(&mut rng)).collect())
                .collect();
            let a = Matrix::from_rows(&data, cols);
            let r = rref(&f, &a);
            assert_eq!(rref(&f, &r), r);
            assert_eq!(rank(&f, &a), rank(&f, &r));
            let ker = right_kernel(&f, &a);
            assert_eq!(ker.len(), cols - rank(&f, &a));
            for x in ker {
                assert!(mul_vec(&f, &a, &x).iter().all(|&v| v == f.zero()));
            }
        }
    }

    #[test]
    fn intersection_examples() {
        let f = gf(2);
        let a = Subspace::row_space(&f, &m(&f, &[&[1, 0]]));
        let b = Subspace::row_space(&f, &m(&f, &[&[1, 1]]));
        assert_eq!(subspace_intersection_dim(&f, &a, &b).unwrap(), 0);
        assert_eq!(subspace_intersection_dim(&f, &a, &a).unwrap(), 1);
        let z = Subspace::zero(&f, 2);
        assert_eq!(subspace_intersection_dim(&f, &a, &z).unwrap(), 0);
        let c = Subspace::zero(&f, 3);
        assert!(subspace_intersection_dim(&f, &a, &c).is_err());
    }

    #[test]
    fn modular_law_exhaustive_q2() {
        let f = gf(2);
        for n in 1..=3 {
            let subs = all_subspaces(&f, n);
            for s1 in &subs {
                for s2 in &subs {
                    let cap = subspace_intersection_dim(&f, s1, s2).unwrap();
                    let sum = s1.sum(&f, s2).unwrap().dim();
                    assert_eq!(cap + sum, s1.dim() + s2.dim());
                }
            }
        }
    }

    #[test]
    fn sampler_edge_dims() {
        let f = gf(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(sample_uniform_subspace(&f, 4, 0, &mut rng), Subspace::zero(&f, 4));
        assert_eq!(sample_uniform_subspace(&f, 4, 4, &mut rng), Subspace::full(&f, 4));
    }

    #[test]
    fn sampler_uniform_over_lines_of_f2_cubed() {
        let f = gf(2);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut counts = std::collections::HashMap::new();
        let draws = 10_000;
        for _ in 0..draws {
            let s = sample_uniform_subspace(&f, 3, 1, &mut rng);
            *counts.entry(s).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 7);
        let expected = draws as f64 / 7.0;
        let chi2: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // chi-square critical value, 6 degrees of freedom, significance 0.01
        assert!(chi2 < 16.812, "chi2 = {chi2}");
    }

    #[test]
    fn completion_examples() {
        let f = gf(2);
        let b = m(&f, &[&[1, 1]]);
        let t = full_rank_completion(&f, &b).unwrap();
        assert_eq!(mul(&f, &b, &t), m(&f, &[&[0, 1]]));
        assert!(inverse(&f, &t).is_some());

        let empty = Matrix::zeros(&f, 0, 3);
        assert_eq!(full_rank_completion(&f, &empty).unwrap(), Matrix::identity(&f, 3));

        let id = Matrix::identity(&f, 3);
        let t = full_rank_completion(&f, &id).unwrap();
        assert_eq!(mul(&f, &id, &t), Matrix::identity(&f, 3));

        let deficient = m(&f, &[&[1, 1], &[1, 1]]);
        assert!(matches!(
            full_rank_completion(&f, &deficient),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn completion_random() {
        let f = gf(11);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let eta = rng.gen_range(1..8);
            let u = rng.gen_range(0..=eta);
            let b = sample_full_rank(&f, u, eta, &mut rng);
            let t = full_rank_completion(&f, &b).unwrap();
            let bt = mul(&f, &b, &t);
            for i in 0..u {
                for j in 0..eta {
                    let want = if j == eta - u + i { f.one() } else { f.zero() };
                    assert_eq!(bt[(i, j)], want);
                }
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let f = gf(5);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let a = sample_full_rank(&f, 4, 4, &mut rng);
            let inv = inverse(&f, &a).unwrap();
            assert_eq!(mul(&f, &a, &inv), Matrix::identity(&f, 4));
        }
        assert!(inverse(&f, &Matrix::zeros(&f, 2, 2)).is_none());
    }
}
