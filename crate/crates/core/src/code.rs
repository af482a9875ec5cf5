//! Linearized Reed–Solomon codes: construction, encoding, interpolation
//! decoding and column-erasure decoding.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{BaseElement, ExtElement, ExtField, Field};
use crate::matrix::{self, Matrix};
use crate::skew::{self, SkewPolynomial};
use crate::sum_rank::{self, BlockVector, LengthPartition};

/// LRS code with constant block length `η`.
#[derive(Debug, Clone)]
pub struct LrsCode {
    field: ExtField,
    partition: LengthPartition,
    eta: usize,
    k: usize,
    reps: Vec<ExtElement>,
    eval_points: Vec<Vec<ExtElement>>,
    /// `beta_powers[i][j][s] = D_{a_i}^s(β^{(i)}_j)` for `s < n`.
    beta_powers: Vec<Vec<Vec<ExtElement>>>,
}

/// Builds the code over `F_{(p^r)^m}` with `ℓ` blocks of length `η` and
/// dimension `k`. Representatives are `a_i = γ^{i-1}` for the field's fixed
/// primitive element `γ`; every block uses the first `η` basis elements.
pub fn build_code(p: u64, r: usize, m: usize, ell: usize, eta: usize, k: usize) -> Result<LrsCode> {
    let field = ExtField::new(p, r, m)?;
    LrsCode::new(field, ell, eta, k)
}

impl LrsCode {
    pub fn new(field: ExtField, ell: usize, eta: usize, k: usize) -> Result<Self> {
        let q = field.q();
        let m = field.degree();
        if ell == 0 || eta == 0 {
            return Err(Error::EmptyCode);
        }
        if ell as u64 > q - 1 {
            return Err(Error::TooManyBlocks {
                ell,
                max: (q - 1) as usize,
            });
        }
        if eta > m {
            return Err(Error::BlockTooLong { eta, m });
        }
        let n = ell * eta;
        if k == 0 || k > n {
            return Err(Error::InvalidDimension { k, n });
        }
        let partition = LengthPartition::constant(ell, eta)?;
        let gamma = field.primitive_element();
        let reps: Vec<ExtElement> = (0..ell).map(|i| field.pow(gamma, i as u128)).collect();
        let mut norms: Vec<BaseElement> = reps.iter().map(|&a| field.norm(a)).collect();
        norms.sort();
        norms.dedup();
        if norms.len() != ell {
            return Err(Error::Internal("conjugacy representatives are not distinct".into()));
        }
        let points: Vec<ExtElement> = (0..eta).map(|j| field.basis(j)).collect();
        let eval_points = vec![points; ell];
        let beta_powers = reps
            .iter()
            .zip(&eval_points)
            .map(|(&a, pts)| pts.iter().map(|&b| skew::d_powers(&field, b, a, n)).collect())
            .collect();
        Ok(Self {
            field,
            partition,
            eta,
            k,
            reps,
            eval_points,
            beta_powers,
        })
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn partition(&self) -> &LengthPartition {
        &self.partition
    }

    pub fn ell(&self) -> usize {
        self.partition.ell()
    }

    pub fn eta(&self) -> usize {
        self.eta
    }

    pub fn n(&self) -> usize {
        self.partition.n()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Largest rank of a single block, `min(η, m)`.
    pub fn mu(&self) -> usize {
        self.eta.min(self.field.degree())
    }

    pub fn min_distance(&self) -> usize {
        self.n() - self.k + 1
    }

    /// Unique decoding radius `⌊(d − 1)/2⌋`.
    pub fn tau(&self) -> usize {
        (self.n() - self.k) / 2
    }

    pub fn reps(&self) -> &[ExtElement] {
        &self.reps
    }

    pub fn eval_points(&self) -> &[Vec<ExtElement>] {
        &self.eval_points
    }

    pub fn random_message<R: Rng + ?Sized>(&self, rng: &mut R) -> SkewPolynomial {
        SkewPolynomial::new(&self.field, (0..self.k).map(|_| self.field.random(rng)).collect())
    }

    /// Message polynomial from its `k` coefficients.
    pub fn message(&self, coeffs: Vec<ExtElement>) -> Result<SkewPolynomial> {
        if coeffs.len() > self.k {
            return Err(Error::DegreeTooLarge {
                degree: coeffs.len() - 1,
                k: self.k,
            });
        }
        Ok(SkewPolynomial::new(&self.field, coeffs))
    }

    fn check_degree(&self, f: &SkewPolynomial) -> Result<()> {
        if !f.degree().less_than(self.k) {
            return Err(Error::DegreeTooLarge {
                degree: f.coeffs().len() - 1,
                k: self.k,
            });
        }
        Ok(())
    }

    pub fn encode(&self, f: &SkewPolynomial) -> Result<BlockVector> {
        self.check_degree(f)?;
        let data = self
            .beta_powers
            .iter()
            .flat_map(|block| block.iter().map(|pw| skew::op_eval_with(&self.field, f, pw)))
            .collect();
        BlockVector::new(data, self.partition.clone())
    }

    /// Encoding at arbitrary per-block evaluation points (same representatives).
    pub fn encode_at(&self, f: &SkewPolynomial, points: &[Vec<ExtElement>]) -> Result<BlockVector> {
        self.check_degree(f)?;
        if points.len() != self.ell() {
            return Err(Error::DimensionMismatch {
                expected: self.ell(),
                got: points.len(),
            });
        }
        let blocks: Vec<Vec<ExtElement>> = points
            .iter()
            .zip(&self.reps)
            .map(|(pts, &a)| pts.iter().map(|&b| skew::op_eval(&self.field, f, b, a)).collect())
            .collect();
        BlockVector::from_blocks(&blocks)
    }

    fn check_received(&self, y: &BlockVector) -> Result<()> {
        if y.partition() != &self.partition {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: y.data().len(),
            });
        }
        Ok(())
    }

    /// Message of the unique codeword within sum-rank distance `t_max` of `y`,
    /// or `None`.
    pub fn decode_unique(&self, y: &BlockVector, t_max: usize) -> Result<Option<SkewPolynomial>> {
        self.check_received(y)?;
        if 2 * t_max > self.n() - self.k {
            return Err(Error::RadiusTooLarge {
                t_max,
                redundancy: self.n() - self.k,
            });
        }
        let f = &self.field;
        let rows: Vec<(Vec<ExtElement>, &[ExtElement])> = (0..self.ell())
            .flat_map(|i| {
                let a = self.reps[i];
                y.block(i)
                    .iter()
                    .zip(&self.beta_powers[i])
                    .map(move |(&yj, bp)| (skew::d_powers(f, yj, a, t_max + 1), bp.as_slice()))
            })
            .collect();
        let Some(msg) = self.solve_key_equation(rows.iter().map(|(yp, bp)| (yp.as_slice(), *bp)), t_max) else {
            return Ok(None);
        };
        let c = self.encode(&msg)?;
        if sum_rank::sum_rank_distance(f, y, &c)? > t_max {
            return Ok(None);
        }
        Ok(Some(msg))
    }

    /// Solves `V(y_j) = N(β_j)` for `deg V ≤ t`, `deg N ≤ k − 1 + t` from the
    /// D-powers of the received values and the evaluation points, then returns
    /// `N` left-divided by `V` if the division is exact and of degree `< k`.
    fn solve_key_equation<'a>(
        &self,
        rows: impl ExactSizeIterator<Item = (&'a [ExtElement], &'a [ExtElement])>,
        t: usize,
    ) -> Option<SkewPolynomial> {
        let f = &self.field;
        let nv = t + 1;
        let nn = self.k + t;
        let mut system = Matrix::zeros(f, rows.len(), nv + nn);
        for (r, (yp, bp)) in rows.enumerate() {
            for s in 0..nv {
                system[(r, s)] = yp[s];
            }
            for s in 0..nn {
                system[(r, nv + s)] = f.neg(bp[s]);
            }
        }
        let (red, pivots) = matrix::rref_with_pivots(f, &system);
        let free = (0..nv + nn).find(|c| !pivots.contains(c))?;
        let x = matrix::kernel_vector(f, &red, &pivots, free);
        let v = SkewPolynomial::new(f, x[..nv].to_vec());
        if v.is_zero() {
            return None;
        }
        let num = SkewPolynomial::new(f, x[nv..].to_vec());
        let (quot, rem) = num.left_divide(f, &v).ok()?;
        (rem.is_zero() && quot.degree().less_than(self.k)).then_some(quot)
    }

    /// Precomputes the D-powers of `y` needed by every erasure decode.
    pub fn prepare<'a>(&self, y: &'a BlockVector) -> Result<PreparedReceived<'a>> {
        self.check_received(y)?;
        let len = self.tau() + 1;
        let powers = (0..self.ell())
            .map(|i| {
                y.block(i)
                    .iter()
                    .map(|&yj| skew::d_powers(&self.field, yj, self.reps[i], len))
                    .collect()
            })
            .collect();
        Ok(PreparedReceived { y, powers })
    }

    /// Column-erasure decoder `DEC(y, ∅, B_C)`.
    pub fn dec_error_erasure(&self, y: &BlockVector, erasures: &ErasureInput) -> Result<Option<BlockVector>> {
        let prepared = self.prepare(y)?;
        self.dec_error_erasure_prepared(&prepared, erasures)
    }

    pub fn dec_error_erasure_prepared(
        &self,
        prepared: &PreparedReceived<'_>,
        erasures: &ErasureInput,
    ) -> Result<Option<BlockVector>> {
        let transforms = self.validate_erasures(erasures)?;
        let u = erasures.total();
        let t = (self.n() - u - self.k) / 2;
        let f = &self.field;

        // Transformed and punctured D-powers, one row per kept position.
        let mut rows: Vec<(Vec<ExtElement>, Vec<ExtElement>)> = Vec::with_capacity(self.n() - u);
        let mut kept_y = Vec::with_capacity(self.n() - u);
        for (i, transform) in transforms.iter().enumerate() {
            let y_pw = &prepared.powers[i];
            let b_pw = &self.beta_powers[i];
            let kept = self.eta - erasures.col_blocks[i].rows();
            match transform {
                None => {
                    for j in 0..self.eta {
                        rows.push((y_pw[j][..t + 1].to_vec(), b_pw[j][..self.k + t].to_vec()));
                        kept_y.push(prepared.y.block(i)[j]);
                    }
                }
                Some(tm) => {
                    for j in 0..kept {
                        let col: Vec<BaseElement> = tm.column(j);
                        rows.push((combine(f, &col, y_pw, t + 1), combine(f, &col, b_pw, self.k + t)));
                        kept_y.push(combine_values(f, &col, prepared.y.block(i)));
                    }
                }
            }
        }
        let Some(msg) = self.solve_key_equation(rows.iter().map(|(a, b)| (a.as_slice(), b.as_slice())), t) else {
            return Ok(None);
        };

        // Verify within the punctured transformed code.
        let mut dist = 0;
        let mut at = 0;
        for i in 0..self.ell() {
            let kept = self.eta - erasures.col_blocks[i].rows();
            let diff: Vec<ExtElement> = (at..at + kept)
                .map(|r| f.sub(kept_y[r], skew::op_eval_with(f, &msg, &rows[r].1)))
                .collect();
            dist += sum_rank::block_rank(f, &diff);
            at += kept;
        }
        if dist > t {
            return Ok(None);
        }
        Ok(Some(self.encode(&msg)?))
    }

    /// Per-block completions `T_i`, `None` for blocks without erasures.
    fn validate_erasures(&self, erasures: &ErasureInput) -> Result<Vec<Option<Matrix<BaseElement>>>> {
        if !erasures.row_basis.is_empty() {
            return Err(Error::UnsupportedRowErasures);
        }
        if erasures.col_blocks.len() != self.ell() {
            return Err(Error::DimensionMismatch {
                expected: self.ell(),
                got: erasures.col_blocks.len(),
            });
        }
        let u = erasures.total();
        if u + self.k > self.n() {
            return Err(Error::InvalidParameters(format!(
                "{u} erasures leave fewer than k = {} positions",
                self.k
            )));
        }
        erasures
            .col_blocks
            .iter()
            .map(|b| {
                if b.cols() != self.eta {
                    return Err(Error::DimensionMismatch {
                        expected: self.eta,
                        got: b.cols(),
                    });
                }
                if b.rows() == 0 {
                    return Ok(None);
                }
                matrix::full_rank_completion(self.field.base(), b).map(Some)
            })
            .collect()
    }
}

/// `Σ_r col[r] · powers[r][s]` for `s < len`.
fn combine(f: &ExtField, col: &[BaseElement], powers: &[Vec<ExtElement>], len: usize) -> Vec<ExtElement> {
    let mut out = vec![f.zero(); len];
    for (r, &c) in col.iter().enumerate() {
        if c.index() == 0 {
            continue;
        }
        for (o, &p) in out.iter_mut().zip(&powers[r][..len]) {
            *o = f.add_scaled(*o, c, p);
        }
    }
    out
}

fn combine_values(f: &ExtField, col: &[BaseElement], values: &[ExtElement]) -> ExtElement {
    col.iter()
        .zip(values)
        .fold(f.zero(), |acc, (&c, &v)| f.add_scaled(acc, c, v))
}

/// Received word with its D-powers cached for repeated erasure decoding.
#[derive(Debug, Clone)]
pub struct PreparedReceived<'a> {
    y: &'a BlockVector,
    /// `powers[i][j][s] = D_{a_i}^s(y^{(i)}_j)` for `s ≤ τ`.
    powers: Vec<Vec<Vec<ExtElement>>>,
}

impl PreparedReceived<'_> {
    pub fn received(&self) -> &BlockVector {
        self.y
    }
}

/// Erasure side information for `DEC`. Only column erasures are supported,
/// so `row_basis` must be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErasureInput {
    pub row_basis: Vec<ExtElement>,
    /// Per block a full-rank `u_i × η` matrix over `F_q`.
    pub col_blocks: Vec<Matrix<BaseElement>>,
}

impl ErasureInput {
    pub fn columns(col_blocks: Vec<Matrix<BaseElement>>) -> Self {
        Self {
            row_basis: Vec::new(),
            col_blocks,
        }
    }

    pub fn none(code: &LrsCode) -> Self {
        let b = code.field().base();
        Self::columns(vec![Matrix::zeros(b, 0, code.eta()); code.ell()])
    }

    pub fn total(&self) -> usize {
        self.col_blocks.iter().map(Matrix::rows).sum()
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::counting::WeightComposition;
    use crate::sum_rank::{decompose, sample_error, sum_rank_weight};

    #[test]
    fn construction_errors() {
        assert!(matches!(
            build_code(2, 1, 2, 2, 2, 2),
            Err(Error::TooManyBlocks { ell: 2, max: 1 })
        ));
        assert!(matches!(build_code(3, 1, 2, 2, 3, 2), Err(Error::BlockTooLong { .. })));
        assert!(matches!(
            build_code(3, 1, 2, 2, 2, 5),
            Err(Error::InvalidDimension { .. })
        ));
        assert!(matches!(
            build_code(3, 1, 2, 2, 2, 0),
            Err(Error::InvalidDimension { .. })
        ));
        assert!(matches!(build_code(4, 1, 2, 1, 2, 1), Err(Error::NotPrime(4))));
        assert!(matches!(build_code(3, 1, 2, 0, 2, 1), Err(Error::EmptyCode)));
    }

    #[test]
    fn code_parameters() {
        let code = build_code(11, 1, 1, 10, 1, 5).unwrap();
        assert_eq!((code.n(), code.tau(), code.min_distance()), (10, 2, 6));
        let gab = build_code(11, 1, 10, 1, 10, 5).unwrap();
        assert_eq!(gab.ell(), 1);
        assert_eq!(gab.reps(), &[gab.field().one()]);
    }

    #[test]
    fn encode_basics() {
        let code = build_code(3, 1, 2, 2, 2, 2).unwrap();
        let f = code.field();
        assert_eq!(
            code.encode(&SkewPolynomial::zero()).unwrap(),
            BlockVector::zero(f, code.partition().clone())
        );
        let c = f.basis(1);
        let cw = code.encode(&SkewPolynomial::constant(f, c)).unwrap();
        for (i, pts) in code.eval_points().iter().enumerate() {
            let want: Vec<_> = pts.iter().map(|&b| f.mul(c, b)).collect();
            assert_eq!(cw.block(i), want.as_slice());
        }
        let big = SkewPolynomial::monomial(f, f.one(), 2);
        assert!(matches!(code.encode(&big), Err(Error::DegreeTooLarge { .. })));
    }

    #[test]
    fn transform_commutes_with_encoding() {
        let code = build_code(5, 1, 3, 2, 3, 3).unwrap();
        let f = code.field();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let msg = code.random_message(&mut rng);
            let c = code.encode(&msg).unwrap();
            let ts: Vec<_> = (0..2)
                .map(|_| matrix::sample_full_rank(f.base(), 3, 3, &mut rng))
                .collect();
            let mut lhs = Vec::new();
            let mut pts = Vec::new();
            for (i, tm) in ts.iter().enumerate() {
                lhs.push(sum_rank::ext_vec_times_base(f, c.block(i), tm));
                pts.push(sum_rank::ext_vec_times_base(f, &code.eval_points()[i], tm));
            }
            assert_eq!(
                BlockVector::from_blocks(&lhs).unwrap(),
                code.encode_at(&msg, &pts).unwrap()
            );
        }
    }

    #[test]
    fn unique_decoding_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (m, ell, eta) in [(10, 1, 10), (5, 2, 5), (2, 5, 2), (1, 10, 1)] {
            let code = build_code(11, 1, m, ell, eta, 5).unwrap();
            let f = code.field();
            for _ in 0..100 {
                let msg = code.random_message(&mut rng);
                let c = code.encode(&msg).unwrap();
                assert_eq!(code.decode_unique(&c, 0).unwrap(), Some(msg.clone()));
                let w = rng.gen_range(0..=code.tau());
                let comp = random_composition(w, ell, code.mu(), &mut rng);
                let e = sample_error(f, code.partition(), &comp, &mut rng).unwrap();
                let y = c.add(f, &e).unwrap();
                assert_eq!(code.decode_unique(&y, code.tau()).unwrap(), Some(msg));
            }
        }
    }

    pub(crate) fn random_composition(w: usize, ell: usize, mu: usize, rng: &mut impl Rng) -> WeightComposition {
        let comps = crate::counting::enumerate_compositions(w, ell, mu).unwrap();
        comps[rng.gen_range(0..comps.len())].clone()
    }

    #[test]
    fn radius_precondition() {
        let code = build_code(11, 1, 1, 10, 1, 5).unwrap();
        let y = BlockVector::zero(code.field(), code.partition().clone());
        assert!(matches!(code.decode_unique(&y, 3), Err(Error::RadiusTooLarge { .. })));
    }

    #[test]
    fn erasure_decoding_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let code = build_code(11, 1, 2, 5, 2, 5).unwrap();
        let f = code.field();
        for _ in 0..200 {
            let msg = code.random_message(&mut rng);
            let c = code.encode(&msg).unwrap();
            // t = 1 full error plus u = 3 erasures whose row support is known.
            let erasure_comp = random_composition(3, 5, 2, &mut rng);
            let e1 = sample_error(f, code.partition(), &erasure_comp, &mut rng).unwrap();
            let full_comp = random_composition(1, 5, 2, &mut rng);
            let e2 = sample_error(f, code.partition(), &full_comp, &mut rng).unwrap();
            let y = c.add(f, &e1).unwrap().add(f, &e2).unwrap();
            let known = ErasureInput::columns(decompose(f, &e1).b_blocks);
            assert_eq!(code.dec_error_erasure(&y, &known).unwrap(), Some(c));
        }
    }

    #[test]
    fn erasure_without_erasures_matches_unique() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let code = build_code(7, 1, 3, 3, 3, 4).unwrap();
        let f = code.field();
        for _ in 0..200 {
            let y = BlockVector::random(f, code.partition().clone(), &mut rng);
            let unique = code
                .decode_unique(&y, code.tau())
                .unwrap()
                .map(|m| code.encode(&m).unwrap());
            assert_eq!(code.dec_error_erasure(&y, &ErasureInput::none(&code)).unwrap(), unique);
            if let Some(c) = unique {
                assert!(sum_rank_weight(f, &y.sub(f, &c).unwrap()) <= code.tau());
            }
        }
    }

    #[test]
    fn erasure_input_validation() {
        let code = build_code(11, 1, 2, 5, 2, 5).unwrap();
        let f = code.field();
        let y = BlockVector::zero(f, code.partition().clone());
        let mut bad = ErasureInput::none(&code);
        bad.row_basis.push(f.one());
        assert!(matches!(
            code.dec_error_erasure(&y, &bad),
            Err(Error::UnsupportedRowErasures)
        ));
        let short = ErasureInput::columns(vec![Matrix::zeros(f.base(), 0, 2); 4]);
        assert!(code.dec_error_erasure(&y, &short).is_err());
        let mut deficient = ErasureInput::none(&code);
        deficient.col_blocks[0] = Matrix::filled(2, 2, f.base().one());
        assert!(matches!(
            code.dec_error_erasure(&y, &deficient),
            Err(Error::RankDeficient { .. })
        ));
        let mut too_many = ErasureInput::none(&code);
        for b in &mut too_many.col_blocks {
            *b = Matrix::identity(f.base(), 2);
        }
        assert!(matches!(
            code.dec_error_erasure(&y, &too_many),
            Err(Error::InvalidParameters(_))
        ));
    }
}
