//! Test statistics, running estimators and swap-productivity reports.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::chains::{run_chain, Algorithm, ChainError, ChainState, RunOptions};
use crate::feasibility::{strip_matrix, FeasibilityError};
use crate::matrix::{BinaryMatrix, MatrixError};
use crate::rng::RngStream;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("statistic needs at least 2 rows, matrix has {0}")]
    TooFewRows(usize),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("trace iterations must increase strictly ({last} then {next})")]
    NonIncreasing { last: u64, next: u64 },
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Feasibility(#[from] FeasibilityError),
    #[error("every cell is forced by the margins; there is nothing to sample")]
    NothingToSample,
    #[error("fill probability {0} is outside [0, 1]")]
    InvalidFill(f64),
    #[error("unknown statistic {0:?}; expected one of: s2, ones, perturbation")]
    UnknownStatistic(String),
}

/// Mean squared off-diagonal entry of `A Aᵀ`:
/// `(1/(m(m-1))) sum_{i != j} s_ij^2` with `s_ij` the number of columns where
/// rows `i` and `j` both hold a 1.
pub fn s_bar_squared(a: &BinaryMatrix) -> Result<f64, StatsError> {
    let m = a.rows();
    if m < 2 {
        return Err(StatsError::TooFewRows(m));
    }
    let mut total: u64 = 0;
    for i in 0..m {
        for j in i + 1..m {
            let s: u64 = a.row_words(i).iter().zip(a.row_words(j)).map(|(x, y)| (x & y).count_ones() as u64).sum();
            total += 2 * s * s;
        }
    }
    Ok(total as f64 / (m * (m - 1)) as f64)
}

/// Fraction of cells where `a` differs from `initial`.
pub fn perturbation_score(a: &BinaryMatrix, initial: &BinaryMatrix) -> Result<f64, StatsError> {
    let diff = a.hamming(initial)?;
    Ok(diff as f64 / (a.rows() * a.cols()) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    SBarSquared,
    /// Total number of ones; constant along any chain.
    TotalOnes,
    /// Perturbation score against the chain's starting matrix.
    Perturbation,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::SBarSquared => "s2",
            Statistic::TotalOnes => "ones",
            Statistic::Perturbation => "perturbation",
        }
    }

    pub fn evaluate(self, a: &BinaryMatrix, initial: &BinaryMatrix) -> Result<f64, StatsError> {
        match self {
            Statistic::SBarSquared => s_bar_squared(a),
            Statistic::TotalOnes => Ok(a.ones() as f64),
            Statistic::Perturbation => perturbation_score(a, initial),
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistic {
    type Err = StatsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "s2" | "sbar2" => Ok(Statistic::SBarSquared),
            "ones" => Ok(Statistic::TotalOnes),
            "perturbation" => Ok(Statistic::Perturbation),
            other => Err(StatsError::UnknownStatistic(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub iteration: u64,
    pub value: f64,
    pub running_mean: f64,
    /// Sample standard deviation of the values so far (0 for one value).
    pub running_std: f64,
}

/// Per-iteration record of a statistic with running mean and standard
/// deviation (Welford updates).
#[derive(Debug, Clone, PartialEq)]
pub struct StatTrace {
    name: String,
    points: Vec<TracePoint>,
    mean: f64,
    m2: f64,
}

impl StatTrace {
    pub fn new(name: impl Into<String>) -> Self {
        StatTrace { name: name.into(), points: Vec::new(), mean: 0.0, m2: 0.0 }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn push(&mut self, iteration: u64, value: f64) -> Result<(), StatsError> {
        if let Some(last) = self.points.last() {
            if iteration <= last.iteration {
                return Err(StatsError::NonIncreasing { last: last.iteration, next: iteration });
            }
        }
        let n = self.points.len() as f64 + 1.0;
        let delta = value - self.mean;
        self.mean += delta / n;
        self.m2 += delta * (value - self.mean);
        let running_std = if n > 1.0 { (self.m2 / (n - 1.0)).max(0.0).sqrt() } else { 0.0 };
        self.points.push(TracePoint { iteration, value, running_mean: self.mean, running_std });
        Ok(())
    }

    pub fn points(&self) -> &[TracePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn mean(&self) -> Option<f64> {
        self.points.last().map(|p| p.running_mean)
    }

    pub fn std(&self) -> Option<f64> {
        self.points.last().map(|p| p.running_std)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EstimateConfig {
    pub algorithm: Algorithm,
    pub run: RunOptions,
    pub seed: u64,
    /// Run on the instance with forced rows and columns removed. The
    /// statistic is evaluated on the same matrices the chain visits.
    pub strip: bool,
}

impl EstimateConfig {
    pub fn new(algorithm: Algorithm, iterations: u64, seed: u64) -> Self {
        EstimateConfig { algorithm, run: RunOptions::new(iterations), seed, strip: true }
    }
}

#[derive(Debug, Clone)]
pub struct Estimate {
    pub trace: StatTrace,
    /// The statistic on the starting matrix, in the frame the chain ran in.
    pub observed: f64,
    pub successful_swaps: u64,
    pub rows: usize,
    pub cols: usize,
}

/// Runs a chain from `initial` and records `statistic` on every retained state.
pub fn estimate_statistic(
    initial: &BinaryMatrix,
    statistic: Statistic,
    config: &EstimateConfig,
) -> Result<Estimate, StatsError> {
    let start =
        if config.strip { strip_matrix(initial)?.1.ok_or(StatsError::NothingToSample)? } else { initial.clone() };
    let observed = statistic.evaluate(&start, &start)?;
    let mut trace = StatTrace::new(statistic.name());
    let mut failure = None;
    let mut rng = RngStream::new(config.seed);
    let state = run_chain(start.clone(), config.algorithm, config.run, &mut rng, |s| {
        if failure.is_some() {
            return;
        }
        let pushed = statistic.evaluate(s.matrix(), &start).and_then(|v| trace.push(s.iteration(), v));
        if let Err(e) = pushed {
            failure = Some(e);
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(Estimate { trace, observed, successful_swaps: state.successful_swaps(), rows: start.rows(), cols: start.cols() })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyReport {
    pub algorithm: Algorithm,
    pub iterations: u64,
    pub swaps: u64,
    pub cells_changed: u64,
    pub wall_seconds: f64,
    /// `None` when no swap happened.
    pub time_per_swap: Option<f64>,
}

pub fn swap_efficiency_report(state: &ChainState, wall: Duration) -> EfficiencyReport {
    let wall_seconds = wall.as_secs_f64();
    let swaps = state.successful_swaps();
    EfficiencyReport {
        algorithm: state.algorithm(),
        iterations: state.iteration(),
        swaps,
        cells_changed: state.cells_changed(),
        wall_seconds,
        time_per_swap: (swaps > 0).then(|| wall_seconds / swaps as f64),
    }
}

/// `m x n` matrix with independent Bernoulli(`p`) cells.
pub fn random_fill(m: usize, n: usize, p: f64, rng: &mut RngStream) -> Result<BinaryMatrix, StatsError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(StatsError::InvalidFill(p));
    }
    Ok(BinaryMatrix::from_fn(m, n, |_, _| rng.bernoulli(p))?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkRecord {
    pub fill: f64,
    pub seed: u64,
    /// Dimensions after stripping forced rows and columns.
    pub rows: usize,
    pub cols: usize,
    pub report: EfficiencyReport,
    pub perturbation: f64,
}

/// One row of a swap-productivity table: a Bernoulli(`fill`) matrix drawn
/// from `seed`, stripped, then `iterations` steps of `algorithm`.
///
/// The matrix depends only on `(rows, cols, fill, seed)`, so different
/// algorithms with the same seed start from the same matrix.
pub fn run_benchmark(
    rows: usize,
    cols: usize,
    fill: f64,
    algorithm: Algorithm,
    iterations: u64,
    seed: u64,
) -> Result<BenchmarkRecord, StatsError> {
    let base = RngStream::new(seed);
    let mut fill_rng = base.split(0);
    let full = random_fill(rows, cols, fill, &mut fill_rng)?;
    let start = strip_matrix(&full)?.1.ok_or(StatsError::NothingToSample)?;
    let mut chain_rng = base.split(1);
    let mut state = ChainState::new(start.clone(), algorithm)?;
    let clock = Instant::now();
    for _ in 0..iterations {
        state.step(&mut chain_rng)?;
    }
    let wall = clock.elapsed();
    Ok(BenchmarkRecord {
        fill,
        seed,
        rows: start.rows(),
        cols: start.cols(),
        report: swap_efficiency_report(&state, wall),
        perturbation: perturbation_score(state.matrix(), &start)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::SwapQuad;
    use proptest::prelude::*;

    #[test]
    fn s_bar_squared_small_cases() {
        let id = BinaryMatrix::from_grid(&[[1, 0], [0, 1]]).unwrap();
        assert_eq!(s_bar_squared(&id).unwrap(), 0.0);
        // A Aᵀ for the 3x3 example's state A has s_13 = 1 and s_12 = s_23 = 0: (2 * 1) / 6.
        let a = BinaryMatrix::from_grid(&[[0, 1, 0], [1, 0, 1], [0, 1, 0]]).unwrap();
        assert!((s_bar_squared(&a).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let row = BinaryMatrix::from_grid(&[[1, 0]]).unwrap();
        assert_eq!(s_bar_squared(&row).unwrap_err(), StatsError::TooFewRows(1));
    }

    #[test]
    fn s_bar_squared_of_finch() {
        // Independent recount of the embedded table: sum_{i != j} s_ij^2 = 8274 over 13 * 12.
        let f = crate::datasets::finch();
        assert!((s_bar_squared(&f).unwrap() - 8274.0 / 156.0).abs() < 1e-12);
        let (_, stripped) = strip_matrix(&f).unwrap();
        assert!((s_bar_squared(&stripped.unwrap()).unwrap() - 5932.0 / 132.0).abs() < 1e-12);
    }

    #[test]
    fn perturbation_examples() {
        let a = BinaryMatrix::from_grid(&[[1, 0], [0, 1]]).unwrap();
        let b = BinaryMatrix::from_grid(&[[0, 1], [1, 0]]).unwrap();
        assert_eq!(perturbation_score(&a, &a).unwrap(), 0.0);
        assert_eq!(perturbation_score(&b, &a).unwrap(), 1.0);

        let big = BinaryMatrix::from_fn(10, 10, |i, j| (i + j) % 2 == 0).unwrap();
        let q = SwapQuad::new(0, 1, 0, 1).unwrap();
        let swapped = big.apply_swap(q).unwrap();
        assert!((perturbation_score(&swapped, &big).unwrap() - 0.04).abs() < 1e-15);

        let other = BinaryMatrix::zeros(3, 2).unwrap();
        assert!(matches!(perturbation_score(&a, &other), Err(StatsError::Matrix(_))));
    }

    #[test]
    fn trace_rejects_non_increasing_iterations() {
        let mut t = StatTrace::new("x");
        t.push(1, 1.0).unwrap();
        assert!(t.push(1, 2.0).is_err());
        t.push(5, 3.0).unwrap();
        assert_eq!(t.mean(), Some(2.0));
        assert!((t.std().unwrap() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn constant_statistic_has_zero_variance() {
        let f = crate::datasets::finch();
        let cfg = EstimateConfig::new(Algorithm::RectangleLoop, 2_000, 4);
        let est = estimate_statistic(&f, Statistic::TotalOnes, &cfg).unwrap();
        assert_eq!(est.trace.len(), 2_000);
        assert_eq!(est.trace.std(), Some(0.0));
        assert_eq!(est.trace.mean(), Some(est.observed));
    }

    #[test]
    fn estimate_without_strip_rejects_degenerate_for_rectangle_loop() {
        let f = crate::datasets::finch();
        let cfg = EstimateConfig { strip: false, ..EstimateConfig::new(Algorithm::RectangleLoop, 10, 1) };
        assert!(matches!(
            estimate_statistic(&f, Statistic::SBarSquared, &cfg),
            Err(StatsError::Chain(ChainError::DegenerateRow(12)))
        ));
        let cfg = EstimateConfig { strip: false, ..EstimateConfig::new(Algorithm::Swap, 10, 1) };
        let est = estimate_statistic(&f, Statistic::SBarSquared, &cfg).unwrap();
        assert!((est.observed - 8274.0 / 156.0).abs() < 1e-12);
    }

    #[test]
    fn empty_run_report() {
        let a = BinaryMatrix::from_grid(&[[1, 0], [0, 1]]).unwrap();
        let state = ChainState::new(a, Algorithm::Swap).unwrap();
        let rep = swap_efficiency_report(&state, Duration::from_millis(3));
        assert_eq!(rep.swaps, 0);
        assert_eq!(rep.time_per_swap, None);
    }

    #[test]
    fn benchmark_shares_matrix_across_algorithms() {
        let s = run_benchmark(40, 40, 0.2, Algorithm::Swap, 500, 3).unwrap();
        let r = run_benchmark(40, 40, 0.2, Algorithm::RectangleLoop, 500, 3).unwrap();
        assert_eq!((s.rows, s.cols), (r.rows, r.cols));
        assert_eq!(s.report.iterations, 500);
        assert!(r.perturbation <= (4.0 * r.report.swaps as f64 / (r.rows * r.cols) as f64).min(1.0));
        assert!(matches!(run_benchmark(4, 4, 1.5, Algorithm::Swap, 1, 0), Err(StatsError::InvalidFill(_))));
    }

    proptest! {
        #[test]
        fn running_moments_match_batch(values in proptest::collection::vec(-1e3f64..1e3, 1..200)) {
            let mut t = StatTrace::new("v");
            for (k, &v) in values.iter().enumerate() {
                t.push(k as u64 + 1, v).unwrap();
            }
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let var = if values.len() > 1 {
                values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
            } else {
                0.0
            };
            let scale = mean.abs().max(1.0);
            prop_assert!((t.mean().unwrap() - mean).abs() <= 1e-9 * scale);
            let sd = var.sqrt();
            prop_assert!((t.std().unwrap() - sd).abs() <= 1e-9 * sd.max(1.0));
        }

        #[test]
        fn s_bar_squared_invariant_under_permutations(
            seed in 0u64..1000,
            shift in 0usize..17,
            row_shift in 0usize..13,
        ) {
            let mut rng = RngStream::new(seed);
            let a = random_fill(13, 17, 0.4, &mut rng).unwrap();
            let cols = BinaryMatrix::from_fn(13, 17, |i, j| a.get(i, (j + shift) % 17)).unwrap();
            let both = BinaryMatrix::from_fn(13, 17, |i, j| a.get((i + row_shift) % 13, (j + shift) % 17)).unwrap();
            let base = s_bar_squared(&a).unwrap();
            prop_assert_eq!(s_bar_squared(&cols).unwrap(), base);
            prop_assert_eq!(s_bar_squared(&both).unwrap(), base);
        }

        #[test]
        fn perturbation_bounded_by_swaps(seed in 0u64..500, steps in 1u64..300) {
            let mut rng = RngStream::new(seed);
            let a = random_fill(12, 12, 0.3, &mut rng).unwrap();
            let (_, Some(start)) = strip_matrix(&a).unwrap() else { return Ok(()) };
            let opts = RunOptions::new(steps);
            let state = run_chain(start.clone(), Algorithm::RectangleLoop, opts, &mut rng, |_| {}).unwrap();
            let cells = (start.rows() * start.cols()) as f64;
            let bound = (4.0 * state.successful_swaps() as f64 / cells).min(1.0);
            prop_assert!(perturbation_score(state.matrix(), &start).unwrap() <= bound + 1e-12);
        }
    }
}
