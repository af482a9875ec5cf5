//! Sum-rank weight, error decomposition `e = a·B`, supports and uniform
//! error sampling.

use std::ops::Range;

use rand::Rng;

use crate::counting::WeightComposition;
use crate::error::{Error, Result};
use crate::field::{BaseElement, ExtElement, ExtField, Field};
use crate::matrix::{self, Matrix, Subspace};

/// Block lengths `(n_1, …, n_ℓ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LengthPartition {
    blocks: Vec<usize>,
    offsets: Vec<usize>,
}

impl LengthPartition {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::EmptyCode);
        }
        let mut offsets = Vec::with_capacity(blocks.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for &b in &blocks {
            acc += b;
            offsets.push(acc);
        }
        Ok(Self { blocks, offsets })
    }

    /// `ℓ` blocks of length `η`.
    pub fn constant(ell: usize, eta: usize) -> Result<Self> {
        Self::new(vec![eta; ell])
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn ell(&self) -> usize {
        self.blocks.len()
    }

    pub fn n(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn range(&self, i: usize) -> Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    /// Largest possible sum-rank weight, `Σ min(n_i, m)`.
    pub fn max_weight(&self, m: usize) -> usize {
        self.blocks.iter().map(|&b| b.min(m)).sum()
    }
}

/// Vector over `F_{q^m}` split according to a [`LengthPartition`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockVector {
    data: Vec<ExtElement>,
    partition: LengthPartition,
}

impl BlockVector {
    pub fn new(data: Vec<ExtElement>, partition: LengthPartition) -> Result<Self> {
        if data.len() != partition.n() {
            return Err(Error::DimensionMismatch {
                expected: partition.n(),
                got: data.len(),
            });
        }
        Ok(Self { data, partition })
    }

    pub fn zero(field: &ExtField, partition: LengthPartition) -> Self {
        Self {
            data: vec![field.zero(); partition.n()],
            partition,
        }
    }

    pub fn from_blocks(blocks: &[Vec<ExtElement>]) -> Result<Self> {
        let partition = LengthPartition::new(blocks.iter().map(Vec::len).collect())?;
        Ok(Self {
            data: blocks.concat(),
            partition,
        })
    }

    pub fn random<R: Rng + ?Sized>(field: &ExtField, partition: LengthPartition, rng: &mut R) -> Self {
        let data = (0..partition.n()).map(|_| field.random(rng)).collect();
        Self { data, partition }
    }

    pub fn data(&self) -> &[ExtElement] {
        &self.data
    }

    pub fn partition(&self) -> &LengthPartition {
        &self.partition
    }

    pub fn block(&self, i: usize) -> &[ExtElement] {
        &self.data[self.partition.range(i)]
    }

    pub fn blocks(&self) -> impl Iterator<Item = &[ExtElement]> {
        (0..self.partition.ell()).map(move |i| self.block(i))
    }

    pub fn add(&self, field: &ExtField, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| field.add(a, b))
    }

    pub fn sub(&self, field: &ExtField, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| field.sub(a, b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(ExtElement, ExtElement) -> ExtElement) -> Result<Self> {
        if self.partition != other.partition {
            return Err(Error::DimensionMismatch {
                expected: self.partition.n(),
                got: other.partition.n(),
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self {
            data,
            partition: self.partition.clone(),
        })
    }

    pub fn hamming_weight(&self, field: &ExtField) -> usize {
        self.data.iter().filter(|&&x| !field.is_zero(x)).count()
    }
}

/// `m × len` matrix over `F_q` whose column `j` is `ext(x_j)`.
pub fn ext_matrix(field: &ExtField, x: &[ExtElement]) -> Matrix<BaseElement> {
    let m = field.degree();
    let mut out = Matrix::zeros(field.base(), m, x.len());
    for (j, &xj) in x.iter().enumerate() {
        for s in 0..m {
            out[(s, j)] = field.coeff(xj, s);
        }
    }
    out
}

pub fn block_rank(field: &ExtField, x: &[ExtElement]) -> usize {
    matrix::rank(field.base(), &ext_matrix(field, x))
}

pub fn sum_rank_weight(field: &ExtField, x: &BlockVector) -> usize {
    x.blocks().map(|b| block_rank(field, b)).sum()
}

pub fn sum_rank_distance(field: &ExtField, x: &BlockVector, y: &BlockVector) -> Result<usize> {
    Ok(sum_rank_weight(field, &x.sub(field, y)?))
}

pub fn weight_composition_of(field: &ExtField, x: &BlockVector) -> WeightComposition {
    let parts = x.blocks().map(|b| block_rank(field, b)).collect();
    let cap = x
        .partition
        .blocks()
        .iter()
        .copied()
        .max()
        .unwrap_or(0)
        .min(field.degree());
    WeightComposition::new(parts, cap).expect("block rank never exceeds min(n_i, m)")
}

/// `a · B` for `a` over `F_{q^m}` and `B` over `F_q`.
pub fn ext_vec_times_base(field: &ExtField, a: &[ExtElement], b: &Matrix<BaseElement>) -> Vec<ExtElement> {
    assert_eq!(a.len(), b.rows(), "vector length mismatch");
    (0..b.cols())
        .map(|j| {
            a.iter()
                .enumerate()
                .fold(field.zero(), |acc, (t, &at)| field.add_scaled(acc, b[(t, j)], at))
        })
        .collect()
}

/// Per-block full-rank factorization `e^{(i)} = a^{(i)} · B^{(i)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorDecomposition {
    pub a_blocks: Vec<Vec<ExtElement>>,
    pub b_blocks: Vec<Matrix<BaseElement>>,
}

impl ErrorDecomposition {
    pub fn recompose(&self, field: &ExtField) -> Result<BlockVector> {
        let blocks: Vec<Vec<ExtElement>> = self
            .a_blocks
            .iter()
            .zip(&self.b_blocks)
            .map(|(a, b)| ext_vec_times_base(field, a, b))
            .collect();
        BlockVector::from_blocks(&blocks)
    }

    pub fn weights(&self) -> Vec<usize> {
        self.a_blocks.iter().map(Vec::len).collect()
    }
}

/// `B^{(i)}` = nonzero rows of `rref(ext(e^{(i)}))`, `a^{(i)}` = the entries of
/// `e^{(i)}` at the pivot columns.
pub fn decompose(field: &ExtField, e: &BlockVector) -> ErrorDecomposition {
    let mut a_blocks = Vec::with_capacity(e.partition.ell());
    let mut b_blocks = Vec::with_capacity(e.partition.ell());
    for block in e.blocks() {
        let (r, pivots) = matrix::rref_with_pivots(field.base(), &ext_matrix(field, block));
        let keep: Vec<usize> = (0..pivots.len()).collect();
        b_blocks.push(r.select_rows(&keep));
        a_blocks.push(pivots.iter().map(|&p| block[p]).collect());
    }
    ErrorDecomposition { a_blocks, b_blocks }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SupportKind {
    Row,
    Column,
}

/// Per-block supports of one kind.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SupportProfile {
    pub kind: SupportKind,
    pub spaces: Vec<Subspace<BaseElement>>,
}

impl SupportProfile {
    pub fn sum_dim(&self) -> usize {
        self.spaces.iter().map(Subspace::dim).sum()
    }
}

/// Per-block row space of `ext(e^{(i)})`, which is the row space of `B^{(i)}`.
pub fn row_support(field: &ExtField, e: &BlockVector) -> SupportProfile {
    let spaces = e
        .blocks()
        .map(|b| Subspace::row_space(field.base(), &ext_matrix(field, b)))
        .collect();
    SupportProfile {
        kind: SupportKind::Row,
        spaces,
    }
}

/// Per-block column space of `ext(e^{(i)})`, inside `F_q^m`.
pub fn column_support(field: &ExtField, e: &BlockVector) -> SupportProfile {
    let spaces = e
        .blocks()
        .map(|b| Subspace::row_space(field.base(), &ext_matrix(field, b).transpose()))
        .collect();
    SupportProfile {
        kind: SupportKind::Column,
        spaces,
    }
}

/// `Σ_i dim(S1_i ∩ S2_i)`.
pub fn support_intersection_sumdim(field: &ExtField, s1: &SupportProfile, s2: &SupportProfile) -> Result<usize> {
    if s1.kind != s2.kind {
        return Err(Error::SupportMismatch(
            "row and column supports cannot be intersected".into(),
        ));
    }
    if s1.spaces.len() != s2.spaces.len() {
        return Err(Error::SupportMismatch(format!(
            "{} blocks against {} blocks",
            s1.spaces.len(),
            s2.spaces.len()
        )));
    }
    s1.spaces
        .iter()
        .zip(&s2.spaces)
        .map(|(a, b)| matrix::subspace_intersection_dim(field.base(), a, b))
        .sum()
}

/// Vector over `F_{q^m}` with `F_q`-rank `w` (uniform among such vectors).
pub fn sample_full_rank_ext<R: Rng + ?Sized>(field: &ExtField, w: usize, rng: &mut R) -> Vec<ExtElement> {
    let rows = matrix::sample_full_rank(field.base(), w, field.degree(), rng);
    (0..w).map(|i| field.reconstruct(rows.row(i))).collect()
}

/// Uniform error whose block ranks equal `composition`.
pub fn sample_error<R: Rng + ?Sized>(
    field: &ExtField,
    partition: &LengthPartition,
    composition: &WeightComposition,
    rng: &mut R,
) -> Result<BlockVector> {
    if composition.len() != partition.ell() {
        return Err(Error::DimensionMismatch {
            expected: partition.ell(),
            got: composition.len(),
        });
    }
    let m = field.degree();
    let mut data = Vec::with_capacity(partition.n());
    for (&w, &ni) in composition.parts().iter().zip(partition.blocks()) {
        if w > ni.min(m) {
            return Err(Error::InfeasibleComposition(format!(
                "block rank {w} exceeds min({ni}, {m})"
            )));
        }
        let a = sample_full_rank_ext(field, w, rng);
        let b = matrix::sample_full_rank(field.base(), w, ni, rng);
        data.extend(ext_vec_times_base(field, &a, &b));
    }
    BlockVector::new(data, partition.clone())
}
