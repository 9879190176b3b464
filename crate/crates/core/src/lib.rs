//! Uniform sampling of binary matrices with fixed row and column sums.
//!
//! Three Markov chains share one state type: the classical swap chain, the
//! Curveball trade chain and the Rectangle Loop chain. For instances small
//! enough to enumerate, [`exact`] builds each chain's transition matrix in
//! exact rational arithmetic and checks stationarity, symmetry, Peskun
//! dominance and total-variation decay.
//!
//! ```
//! use margin_mcmc::{enumerate_state_space, build_rectangle_kernel, check_stationarity, Margins};
//!
//! let margins = Margins::new(vec![1, 2, 1], vec![1, 2, 1]).unwrap();
//! let space = enumerate_state_space(&margins, 100).unwrap();
//! assert_eq!(space.len(), 5);
//! let kernel = build_rectangle_kernel(&space).unwrap();
//! assert!(check_stationarity(&kernel).exact);
//! ```

pub mod chains;
pub mod datasets;
pub mod exact;
pub mod feasibility;
pub mod matrix;
pub mod rng;
pub mod stats;

pub use chains::{
    curveball_step, rectangle_loop_step, run_chain, sample_chain, swap_step, Algorithm, ChainError, ChainState,
    Proposal, RunOptions, StepOutcome,
};
pub use exact::{
    build_curveball_kernel, build_kernel, build_rectangle_kernel, build_swap_kernel, check_peskun_dominance,
    check_stationarity, fraction_string, rectangle_pair_probability, swap_difference, tv_distance_curve, ExactError,
    PeskunReport, Rational, StationarityReport, TransitionMatrix, TvCurve, TvPoint,
};
pub use feasibility::{
    enumerate_state_space, gale_ryser_feasible, strip_degenerate, strip_matrix, FeasibilityError, Reduction,
    StateSpace, DEFAULT_STATE_CAP,
};
pub use matrix::{BinaryMatrix, CanonicalKey, Margins, MatrixError, SwapQuad};
pub use rng::{RngStream, RNG_ALGORITHM};
pub use stats::{
    estimate_statistic, perturbation_score, random_fill, run_benchmark, s_bar_squared, swap_efficiency_report,
    BenchmarkRecord, EfficiencyReport, Estimate, EstimateConfig, StatTrace, Statistic, StatsError, TracePoint,
};
