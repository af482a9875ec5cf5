//! Randomized decoding beyond the unique radius: guess a column support for
//! part of the error, hand it to the erasure decoder, repeat.

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::{log2_rational, DistributionSampler, GuessDistribution};
use crate::code::{ErasureInput, LrsCode};
use crate::counting::WeightComposition;
use crate::error::{Error, Result};
use crate::field::BaseElement;
use crate::matrix::{self, Matrix};
use crate::sum_rank::{self, BlockVector};

/// Independent per-trial generator: ChaCha8 keyed by the master seed, with
/// the trial index as the stream id.
pub fn seed_stream(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}

#[derive(Debug, Clone)]
pub struct DecoderConfig<'a> {
    pub code: &'a LrsCode,
    pub w: usize,
    pub u: usize,
    pub dist: GuessDistribution,
    /// 0 means unbounded.
    pub max_iterations: u64,
    pub seed: u64,
}

impl<'a> DecoderConfig<'a> {
    pub fn new(
        code: &'a LrsCode,
        w: usize,
        u: usize,
        dist: GuessDistribution,
        max_iterations: u64,
        seed: u64,
    ) -> Result<Self> {
        let (ell, mu) = (code.ell(), code.mu());
        if u > ell * mu {
            return Err(Error::InfeasibleComposition(format!(
                "u = {u} exceeds {ell} blocks of capacity {mu}"
            )));
        }
        if u + code.k() > code.n() {
            return Err(Error::InvalidParameters(format!(
                "u = {u} leaves fewer than k = {} positions",
                code.k()
            )));
        }
        if w > code.n() {
            return Err(Error::InvalidParameters(format!("w = {w} exceeds n = {}", code.n())));
        }
        if let Some(bad) = dist
            .compositions()
            .iter()
            .find(|c| c.len() != ell || c.total() != u || c.cap() != mu)
        {
            return Err(Error::InvalidDistribution(format!(
                "composition {bad:?} is not in W({u}, {ell}, {mu})"
            )));
        }
        Ok(Self {
            code,
            w,
            u,
            dist,
            max_iterations,
            seed,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationTrace {
    pub guess: WeightComposition,
    /// Per block a full-rank `u_i × η` basis of the guessed row space.
    pub support: Vec<Matrix<BaseElement>>,
    /// The erasure decoder returned a codeword.
    pub decoded: bool,
    /// That codeword also lies within distance `w` of the received word.
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    /// `None` when the iteration cap was reached.
    pub codeword: Option<BlockVector>,
    pub iterations_used: u64,
    pub trace: Option<Vec<IterationTrace>>,
}

/// When a planted-mode trial counts as solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PlantedTarget {
    /// Any codeword within distance `w`.
    #[default]
    Any,
    /// Only the codeword the error was added to.
    Planted,
}

#[derive(Debug, Clone, Default)]
pub struct DecodeOptions<'b> {
    pub trace: bool,
    /// Keep going until this codeword is returned.
    pub target: Option<&'b BlockVector>,
    /// Use this support every iteration instead of sampling.
    pub forced_support: Option<&'b [Matrix<BaseElement>]>,
}

/// Algorithm driver using the stream `seed_stream(cfg.seed, 0)`.
pub fn randomized_decode(cfg: &DecoderConfig<'_>, y: &BlockVector) -> Result<DecodeOutcome> {
    let mut rng = seed_stream(cfg.seed, 0);
    randomized_decode_with(cfg, y, &mut rng, &DecodeOptions::default())
}

pub fn randomized_decode_with(
    cfg: &DecoderConfig<'_>,
    y: &BlockVector,
    rng: &mut ChaCha8Rng,
    opts: &DecodeOptions<'_>,
) -> Result<DecodeOutcome> {
    let code = cfg.code;
    let field = code.field();
    let base = field.base();
    let eta = code.eta();
    let prepared = code.prepare(y)?;
    let sampler: DistributionSampler = cfg.dist.sampler();
    let mut trace = opts.trace.then(Vec::new);
    let mut iterations = 0u64;
    while cfg.max_iterations == 0 || iterations < cfg.max_iterations {
        iterations += 1;
        let (guess, support) = match opts.forced_support {
            Some(s) => {
                let parts = s.iter().map(Matrix::rows).collect();
                (WeightComposition::new(parts, code.mu())?, s.to_vec())
            }
            None => {
                let guess = cfg.dist.compositions()[sampler.sample_index(rng)].clone();
                let support = guess
                    .parts()
                    .iter()
                    .map(|&ui| matrix::sample_uniform_subspace(base, eta, ui, rng).basis().clone())
                    .collect();
                (guess, support)
            }
        };
        let erasures = ErasureInput::columns(support);
        let candidate = code.dec_error_erasure_prepared(&prepared, &erasures)?;
        let decoded = candidate.is_some();
        let accepted = match &candidate {
            Some(c) => sum_rank::sum_rank_distance(field, y, c)? <= cfg.w && opts.target.is_none_or(|t| t == c),
            None => false,
        };
        if let Some(tr) = trace.as_mut() {
            tr.push(IterationTrace {
                guess,
                support: erasures.col_blocks,
                decoded,
                accepted,
            });
        }
        if accepted {
            return Ok(DecodeOutcome {
                codeword: candidate,
                iterations_used: iterations,
                trace,
            });
        }
    }
    Ok(DecodeOutcome {
        codeword: None,
        iterations_used: iterations,
        trace,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentMode {
    Planted,
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    pub mode: ExperimentMode,
    pub trials: u64,
    pub total_iterations: u64,
    pub successes: u64,
    /// `successes / total_iterations`, the geometric-model estimate.
    pub empirical_success_prob_per_iteration: f64,
    /// `log2(n²ℓ^u · total_iterations / successes)`; `None` without successes.
    pub empirical_log2_work_factor: Option<f64>,
}

impl TrialReport {
    fn from_counts(mode: ExperimentMode, cost: &BigUint, trials: u64, total_iterations: u64, successes: u64) -> Self {
        let rate = if total_iterations == 0 {
            0.0
        } else {
            successes as f64 / total_iterations as f64
        };
        let wf = (successes > 0).then(|| {
            let cost = num_rational::BigRational::from_integer(cost.clone().into());
            log2_rational(&cost) + (total_iterations as f64).log2() - (successes as f64).log2()
        });
        Self {
            mode,
            trials,
            total_iterations,
            successes,
            empirical_success_prob_per_iteration: rate,
            empirical_log2_work_factor: wf,
        }
    }

    /// Mean iterations per successful trial.
    pub fn mean_iterations(&self) -> Option<f64> {
        (self.successes > 0).then(|| self.total_iterations as f64 / self.successes as f64)
    }
}

fn iteration_cost(code: &LrsCode, u: usize) -> BigUint {
    BigUint::from(code.n() * code.n()) * num_traits::pow(BigUint::from(code.ell()), u)
}

/// Planted trials: random codeword plus an error of composition `w_comp`,
/// each decoded under `cfg.max_iterations`. Trial `i` draws everything from
/// `seed_stream(cfg.seed, i)`.
pub fn run_planted_experiment(
    cfg: &DecoderConfig<'_>,
    w_comp: &WeightComposition,
    trials: u64,
    target: PlantedTarget,
) -> Result<TrialReport> {
    let code = cfg.code;
    if w_comp.len() != code.ell() {
        return Err(Error::DimensionMismatch {
            expected: code.ell(),
            got: w_comp.len(),
        });
    }
    let per_trial: Vec<(u64, bool)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed_stream(cfg.seed, i);
            let msg = code.random_message(&mut rng);
            let c = code.encode(&msg)?;
            let e = sum_rank::sample_error(code.field(), code.partition(), w_comp, &mut rng)?;
            let y = c.add(code.field(), &e)?;
            let opts = DecodeOptions {
                target: (target == PlantedTarget::Planted).then_some(&c),
                ..Default::default()
            };
            let out = randomized_decode_with(cfg, &y, &mut rng, &opts)?;
            Ok((out.iterations_used, out.codeword.is_some()))
        })
        .collect::<Result<_>>()?;
    Ok(aggregate(ExperimentMode::Planted, cfg, trials, &per_trial))
}

/// Uniform received words, each decoded under `per_trial_cap`.
pub fn run_uniform_y_experiment(cfg: &DecoderConfig<'_>, trials: u64, per_trial_cap: u64) -> Result<TrialReport> {
    if per_trial_cap == 0 {
        return Err(Error::InvalidParameters("per-trial cap must be at least 1".into()));
    }
    let code = cfg.code;
    let capped = DecoderConfig {
        max_iterations: per_trial_cap,
        ..cfg.clone()
    };
    let per_trial: Vec<(u64, bool)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed_stream(cfg.seed, i);
            let y = BlockVector::random(code.field(), code.partition().clone(), &mut rng);
            let out = randomized_decode_with(&capped, &y, &mut rng, &DecodeOptions::default())?;
            Ok((out.iterations_used, out.codeword.is_some()))
        })
        .collect::<Result<_>>()?;
    Ok(aggregate(ExperimentMode::Uniform, cfg, trials, &per_trial))
}

fn aggregate(mode: ExperimentMode, cfg: &DecoderConfig<'_>, trials: u64, per_trial: &[(u64, bool)]) -> TrialReport {
    let total: u64 = per_trial.iter().map(|t| t.0).sum();
    let successes = per_trial.iter().filter(|t| t.1).count() as u64;
    TrialReport::from_counts(mode, &iteration_cost(cfg.code, cfg.u), trials, total, successes)
}
