//! Shared fixtures for the criterion benchmarks.

use margin_mcmc::{enumerate_state_space, random_fill, strip_matrix, BinaryMatrix, Margins, RngStream, StateSpace};

/// Bernoulli(`fill`) `m x n` matrix from `seed` with forced rows and columns removed.
pub fn stripped_fill(m: usize, n: usize, fill: f64, seed: u64) -> BinaryMatrix {
    let mut rng = RngStream::new(seed);
    let full = random_fill(m, n, fill, &mut rng).expect("fill is a probability");
    strip_matrix(&full).expect("margins come from a matrix").1.expect("random fill leaves free cells")
}

pub fn space(rows: &[usize], cols: &[usize]) -> StateSpace {
    let margins = Margins::new(rows.to_vec(), cols.to_vec()).expect("non-empty margins");
    enumerate_state_space(&margins, usize::MAX).expect("no cap")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures() {
        let a = stripped_fill(30, 30, 0.2, 1);
        assert!(a.row_sums().iter().all(|&r| r > 0 && r < a.cols()));
        assert_eq!(space(&[1, 2, 1], &[1, 2, 1]).len(), 5);
    }
}
