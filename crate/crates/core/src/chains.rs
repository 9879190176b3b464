//! Swap, Curveball and Rectangle Loop chains over matrices with fixed margins.
//!
//! Each step mutates a [`ChainState`] in place. All three chains leave the
//! row and column sums untouched and have the uniform distribution over the
//! matrices sharing those sums as their stationary law.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::matrix::{BinaryMatrix, MatrixError, SwapQuad};
use crate::rng::RngStream;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("{algorithm} needs at least 2 rows, matrix has {rows}")]
    TooFewRows { algorithm: Algorithm, rows: usize },
    #[error("{algorithm} needs at least 2 columns, matrix has {cols}")]
    TooFewCols { algorithm: Algorithm, cols: usize },
    #[error("row {0} is degenerate (all zeros or all ones); strip it first")]
    DegenerateRow(usize),
    #[error("column {0} is degenerate (all zeros or all ones); strip it first")]
    DegenerateColumn(usize),
    #[error("thinning interval must be at least 1")]
    InvalidThin,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Swap,
    Curveball,
    RectangleLoop,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Swap, Algorithm::Curveball, Algorithm::RectangleLoop];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Swap => "swap",
            Algorithm::Curveball => "curveball",
            Algorithm::RectangleLoop => "rectangle-loop",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown algorithm {0:?}; expected one of: swap, curveball, rectangle-loop")]
pub struct UnknownAlgorithm(pub String);

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "swap" => Ok(Algorithm::Swap),
            "curveball" => Ok(Algorithm::Curveball),
            "rectangle-loop" | "rectangle" => Ok(Algorithm::RectangleLoop),
            other => Err(UnknownAlgorithm(other.to_string())),
        }
    }
}

/// What a single step looked at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Proposal {
    Quad(SwapQuad),
    RowPair(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepOutcome {
    pub proposal: Proposal,
    pub changed: bool,
    pub cells_changed: usize,
}

/// Current matrix of a running chain plus its counters.
#[derive(Debug, Clone)]
pub struct ChainState {
    matrix: BinaryMatrix,
    algorithm: Algorithm,
    iteration: u64,
    successful_swaps: u64,
    cells_changed: u64,
    // Curveball scratch space, reused across steps.
    pool: Vec<usize>,
}

impl ChainState {
    /// Checks the chain's preconditions on `matrix` and wraps it.
    pub fn new(matrix: BinaryMatrix, algorithm: Algorithm) -> Result<Self, ChainError> {
        let (m, n) = (matrix.rows(), matrix.cols());
        if m < 2 {
            return Err(ChainError::TooFewRows { algorithm, rows: m });
        }
        match algorithm {
            Algorithm::Swap if n < 2 => return Err(ChainError::TooFewCols { algorithm, cols: n }),
            Algorithm::RectangleLoop => {
                if let Some(i) = (0..m).find(|&i| matrix.row_sums()[i] == 0 || matrix.row_sums()[i] == n) {
                    return Err(ChainError::DegenerateRow(i));
                }
                if let Some(j) = (0..n).find(|&j| matrix.col_sums()[j] == 0 || matrix.col_sums()[j] == m) {
                    return Err(ChainError::DegenerateColumn(j));
                }
            }
            _ => {}
        }
        Ok(ChainState { matrix, algorithm, iteration: 0, successful_swaps: 0, cells_changed: 0, pool: Vec::new() })
    }

    pub fn matrix(&self) -> &BinaryMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> BinaryMatrix {
        self.matrix
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    /// Steps that changed the matrix.
    pub fn successful_swaps(&self) -> u64 {
        self.successful_swaps
    }

    /// Total cells toggled; four per swap, more for Curveball trades.
    pub fn cells_changed(&self) -> u64 {
        self.cells_changed
    }

    /// Advances the chain by one step of its algorithm.
    pub fn step(&mut self, rng: &mut RngStream) -> Result<StepOutcome, ChainError> {
        let outcome = match self.algorithm {
            Algorithm::Swap => swap_move(&mut self.matrix, rng)?,
            Algorithm::Curveball => curveball_move(&mut self.matrix, &mut self.pool, rng)?,
            Algorithm::RectangleLoop => rectangle_loop_move(&mut self.matrix, rng)?,
        };
        self.iteration += 1;
        if outcome.changed {
            self.successful_swaps += 1;
            self.cells_changed += outcome.cells_changed as u64;
        }
        Ok(outcome)
    }
}

/// One swap-chain step: two distinct rows and two distinct columns uniformly
/// at random; swap if they frame a checkerboard unit.
pub fn swap_step(state: &mut ChainState, rng: &mut RngStream) -> Result<StepOutcome, ChainError> {
    debug_assert_eq!(state.algorithm, Algorithm::Swap);
    state.step(rng)
}

/// One Curveball step: trade the exclusive columns of two random rows.
pub fn curveball_step(state: &mut ChainState, rng: &mut RngStream) -> Result<StepOutcome, ChainError> {
    debug_assert_eq!(state.algorithm, Algorithm::Curveball);
    state.step(rng)
}

/// One Rectangle Loop step.
pub fn rectangle_loop_step(state: &mut ChainState, rng: &mut RngStream) -> Result<StepOutcome, ChainError> {
    debug_assert_eq!(state.algorithm, Algorithm::RectangleLoop);
    state.step(rng)
}

fn swap_move(a: &mut BinaryMatrix, rng: &mut RngStream) -> Result<StepOutcome, ChainError> {
    let (m, n) = (a.rows(), a.cols());
    if m < 2 {
        return Err(ChainError::TooFewRows { algorithm: Algorithm::Swap, rows: m });
    }
    if n < 2 {
        return Err(ChainError::TooFewCols { algorithm: Algorithm::Swap, cols: n });
    }
    let (r1, r2) = rng.distinct_pair(m);
    let (c1, c2) = rng.distinct_pair(n);
    let quad = SwapQuad { r1, r2, c1, c2 };
    Ok(apply_if_checkerboard(a, quad))
}

#[inline]
fn apply_if_checkerboard(a: &mut BinaryMatrix, quad: SwapQuad) -> StepOutcome {
    let changed = a.is_checkerboard(quad);
    if changed {
        a.flip_quad(quad);
    }
    StepOutcome { proposal: Proposal::Quad(quad), changed, cells_changed: if changed { 4 } else { 0 } }
}

// Rows a and b trade their exclusive columns. Among all ways of giving row a
// the same number of exclusive columns from the pool, one is drawn uniformly
// from those that differ from the current split. With no alternative split
// the matrix stays put.
fn curveball_move(a: &mut BinaryMatrix, pool: &mut Vec<usize>, rng: &mut RngStream) -> Result<StepOutcome, ChainError> {
    let m = a.rows();
    if m < 2 {
        return Err(ChainError::TooFewRows { algorithm: Algorithm::Curveball, rows: m });
    }
    let (ra, rb) = rng.distinct_pair(m);
    let proposal = Proposal::RowPair(ra, rb);

    pool.clear();
    let mut a_only = 0usize;
    for (w, (&x, &y)) in a.row_words(ra).iter().zip(a.row_words(rb)).enumerate() {
        a_only += (x & !y).count_ones() as usize;
        let mut diff = x ^ y;
        while diff != 0 {
            pool.push(w * 64 + diff.trailing_zeros() as usize);
            diff &= diff - 1;
        }
    }
    let size = pool.len();
    if a_only == 0 || a_only == size {
        return Ok(StepOutcome { proposal, changed: false, cells_changed: 0 });
    }

    // Rejection of the identity split keeps the draw uniform over the rest.
    loop {
        rng.choose_prefix(pool, a_only);
        if pool[..a_only].iter().any(|&j| !a.get(ra, j)) {
            break;
        }
    }
    let mut moved = 0;
    for (k, &j) in pool.iter().enumerate() {
        let want_a = k < a_only;
        if a.get(ra, j) != want_a {
            a.flip(ra, j);
            a.flip(rb, j);
            moved += 2;
        }
    }
    Ok(StepOutcome { proposal, changed: true, cells_changed: moved })
}

fn rectangle_loop_move(a: &mut BinaryMatrix, rng: &mut RngStream) -> Result<StepOutcome, ChainError> {
    let (m, n) = (a.rows(), a.cols());
    let r1 = rng.below(m);
    let c1 = rng.below(n);
    let (r2, c2) = if a.get(r1, c1) {
        // A 0 in row r1, then a 1 in that 0's column.
        let zeros = n - a.row_sums()[r1];
        if zeros == 0 {
            return Err(ChainError::DegenerateRow(r1));
        }
        let c2 = a.nth_zero_in_row(r1, rng.below(zeros)).expect("zero count matches row");
        let ones = a.col_sums()[c2];
        if ones == 0 {
            return Err(ChainError::DegenerateColumn(c2));
        }
        let r2 = a.nth_one_in_col(c2, rng.below(ones)).expect("one count matches column");
        (r2, c2)
    } else {
        // A 1 in column c1, then a 0 in that 1's row.
        let ones = a.col_sums()[c1];
        if ones == 0 {
            return Err(ChainError::DegenerateColumn(c1));
        }
        let r2 = a.nth_one_in_col(c1, rng.below(ones)).expect("one count matches column");
        let zeros = n - a.row_sums()[r2];
        if zeros == 0 {
            return Err(ChainError::DegenerateRow(r2));
        }
        let c2 = a.nth_zero_in_row(r2, rng.below(zeros)).expect("zero count matches row");
        (r2, c2)
    };
    debug_assert!(r1 != r2 && c1 != c2);
    Ok(apply_if_checkerboard(a, SwapQuad { r1, r2, c1, c2 }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub iterations: u64,
    pub burn_in: u64,
    pub thin: u64,
}

impl RunOptions {
    pub fn new(iterations: u64) -> Self {
        RunOptions { iterations, burn_in: 0, thin: 1 }
    }

    /// Whether the state after step `t` (1-based) is handed to the observer.
    pub fn observes(&self, t: u64) -> bool {
        t > self.burn_in && (t - self.burn_in) % self.thin == 0
    }
}

/// Runs exactly `opts.iterations` steps from `initial`.
///
/// `observer` sees the state after every `thin`-th step past `burn_in`.
pub fn run_chain(
    initial: BinaryMatrix,
    algorithm: Algorithm,
    opts: RunOptions,
    rng: &mut RngStream,
    mut observer: impl FnMut(&ChainState),
) -> Result<ChainState, ChainError> {
    if opts.thin == 0 {
        return Err(ChainError::InvalidThin);
    }
    let mut state = ChainState::new(initial, algorithm)?;
    for t in 1..=opts.iterations {
        state.step(rng)?;
        if opts.observes(t) {
            observer(&state);
        }
    }
    Ok(state)
}

/// [`run_chain`] collecting the observed matrices.
pub fn sample_chain(
    initial: BinaryMatrix,
    algorithm: Algorithm,
    opts: RunOptions,
    rng: &mut RngStream,
) -> Result<(ChainState, Vec<BinaryMatrix>), ChainError> {
    let mut samples = Vec::new();
    let state = run_chain(initial, algorithm, opts, rng, |s| samples.push(s.matrix().clone()))?;
    Ok((state, samples))
}
