use margin_mcmc::exact::{rectangle_kernel_closed_form, rectangle_kernel_enumerated};
use margin_mcmc::{
    build_curveball_kernel, build_rectangle_kernel, build_swap_kernel, check_peskun_dominance, check_stationarity,
    enumerate_state_space, gale_ryser_feasible, strip_matrix, Algorithm, BinaryMatrix, ChainState, Margins, Proposal,
    Rational, RngStream, StateSpace,
};
use num_traits::One;
use proptest::prelude::*;

fn grid(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BinaryMatrix> {
    (2..=max_rows, 2..=max_cols)
        .prop_flat_map(|(m, n)| proptest::collection::vec(proptest::collection::vec(any::<bool>(), n), m))
        .prop_map(|rows| BinaryMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]).unwrap())
}

fn algorithm() -> impl Strategy<Value = Algorithm> {
    prop_oneof![Just(Algorithm::Swap), Just(Algorithm::Curveball), Just(Algorithm::RectangleLoop)]
}

/// Chain start for `algorithm`: the matrix itself, or its stripped core for
/// the Rectangle Loop chain.
fn start_for(a: &BinaryMatrix, algorithm: Algorithm) -> Option<BinaryMatrix> {
    match algorithm {
        Algorithm::RectangleLoop => strip_matrix(a).unwrap().1.filter(|s| s.rows() >= 2 && s.cols() >= 2),
        _ => Some(a.clone()),
    }
}

fn space_of(a: &BinaryMatrix) -> StateSpace {
    enumerate_state_space(&a.margins(), 10_000).unwrap()
}

fn nondegenerate(space: &StateSpace) -> bool {
    let margins = space.margins();
    margins.rows().iter().all(|&r| r > 0 && r < space.cols())
        && margins.cols().iter().all(|&c| c > 0 && c < space.rows())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chains_preserve_margins(a in grid(12, 12), alg in algorithm(), seed in any::<u64>()) {
        let Some(start) = start_for(&a, alg) else { return Ok(()) };
        let margins = start.margins();
        let mut state = ChainState::new(start, alg).unwrap();
        let mut rng = RngStream::new(seed);
        for _ in 0..2_000 {
            state.step(&mut rng).unwrap();
        }
        prop_assert_eq!(state.matrix().margins(), margins);
        prop_assert!(state.matrix().verify_sums().is_ok());
    }

    #[test]
    fn identical_seeds_give_identical_trajectories(a in grid(8, 8), alg in algorithm(), seed in any::<u64>()) {
        let Some(start) = start_for(&a, alg) else { return Ok(()) };
        let trajectory = |start: BinaryMatrix| {
            let mut state = ChainState::new(start, alg).unwrap();
            let mut rng = RngStream::new(seed);
            (0..300).map(|_| { state.step(&mut rng).unwrap(); state.matrix().clone() }).collect::<Vec<_>>()
        };
        prop_assert_eq!(trajectory(start.clone()), trajectory(start));
    }

    #[test]
    fn rectangle_loop_quads_are_proper(a in grid(10, 10), seed in any::<u64>()) {
        let Some(start) = start_for(&a, Algorithm::RectangleLoop) else { return Ok(()) };
        let (m, n) = (start.rows(), start.cols());
        let mut state = ChainState::new(start, Algorithm::RectangleLoop).unwrap();
        let mut rng = RngStream::new(seed);
        for _ in 0..500 {
            let before = state.matrix().clone();
            let out = state.step(&mut rng).unwrap();
            let Proposal::Quad(q) = out.proposal else { panic!("rectangle loop proposes quads") };
            prop_assert!(q.r1 != q.r2 && q.c1 != q.c2);
            prop_assert!(q.r1 < m && q.r2 < m && q.c1 < n && q.c2 < n);
            prop_assert_eq!(out.changed, before.is_checkerboard(q));
        }
    }

    #[test]
    fn enumeration_matches_margins_and_feasibility(a in grid(4, 4)) {
        let margins = a.margins();
        prop_assert!(gale_ryser_feasible(&margins));
        let space = space_of(&a);
        prop_assert!(space.index_of(&a).is_some());
        prop_assert!(space.states().iter().all(|s| s.margins() == margins));

        // Reversing rows and columns permutes the margin vectors; the count must not change.
        let mut rows = margins.rows().to_vec();
        let mut cols = margins.cols().to_vec();
        rows.reverse();
        cols.rotate_left(1);
        let permuted = enumerate_state_space(&Margins::new(rows, cols).unwrap(), 10_000).unwrap();
        prop_assert_eq!(permuted.len(), space.len());
    }

    #[test]
    fn exact_kernels_are_stochastic_symmetric_and_stationary(a in grid(4, 4)) {
        let space = space_of(&a);
        let mut kernels = vec![build_swap_kernel(&space), build_curveball_kernel(&space).unwrap()];
        if nondegenerate(&space) {
            kernels.push(build_rectangle_kernel(&space).unwrap());
        }
        for p in &kernels {
            prop_assert!(p.is_stochastic());
            prop_assert_eq!(p.asymmetry(), None);
            prop_assert!(check_stationarity(p).exact);
            for i in 0..p.len() {
                let total: Rational = p.row(i).iter().map(|(_, v)| *v).sum();
                prop_assert_eq!(total, Rational::one());
            }
        }
    }

    #[test]
    fn rectangle_kernel_dominates_swap_and_matches_enumeration(a in grid(4, 4)) {
        let space = space_of(&a);
        prop_assume!(nondegenerate(&space));
        let closed = rectangle_kernel_closed_form(&space).unwrap();
        prop_assert_eq!(closed.dense(), rectangle_kernel_enumerated(&space).unwrap().dense());
        let report = check_peskun_dominance(&closed, &build_swap_kernel(&space)).unwrap();
        prop_assert!(report.dominates, "witness {:?}", report.witness);
    }
}
