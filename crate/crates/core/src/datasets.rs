//! Embedded reference data.

use crate::matrix::{BinaryMatrix, SwapQuad};

/// Presence (1) or absence (0) of 13 finch species (rows) on 17 islands
/// (columns A..Q).
pub const FINCH: [[u8; 17]; 13] = [
    [0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1, 1],
    [1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 0, 1, 1, 0, 0],
    [1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 1, 0, 0],
    [0, 0, 1, 1, 1, 0, 0, 1, 0, 1, 0, 1, 1, 0, 1, 1, 1],
    [1, 1, 1, 0, 1, 1, 1, 1, 1, 1, 0, 1, 0, 1, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0],
    [0, 0, 1, 1, 1, 1, 1, 1, 1, 0, 0, 1, 0, 1, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 0, 0, 1, 0, 0],
    [0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 0, 1, 1, 0, 0],
    [0, 0, 1, 1, 1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
];

/// Accepted range for the share of 2x2 submatrices of the finch data that are
/// checkerboard units (roughly 3%).
pub const FINCH_SWAPPABLE_RANGE: (f64, f64) = (0.02, 0.04);

pub fn finch() -> BinaryMatrix {
    let m = BinaryMatrix::from_grid(&FINCH).expect("finch table is binary and rectangular");
    let frac = swappable_fraction(&m);
    assert!(
        (FINCH_SWAPPABLE_RANGE.0..=FINCH_SWAPPABLE_RANGE.1).contains(&frac),
        "finch transcription check failed: swappable fraction {frac}"
    );
    m
}

/// Fraction of all `C(m,2) C(n,2)` 2x2 submatrices that are checkerboard units.
pub fn swappable_fraction(a: &BinaryMatrix) -> f64 {
    let (m, n) = (a.rows(), a.cols());
    let mut total = 0u64;
    let mut hits = 0u64;
    for r1 in 0..m {
        for r2 in r1 + 1..m {
            for c1 in 0..n {
                for c2 in c1 + 1..n {
                    total += 1;
                    hits += a.is_checkerboard(SwapQuad { r1, r2, c1, c2 }) as u64;
                }
            }
        }
    }
    if total == 0 {
        0.0
    } else {
        hits as f64 / total as f64
    }
}

/// Looks up an embedded dataset by name.
pub fn by_name(name: &str) -> Option<BinaryMatrix> {
    match name {
        "finch" => Some(finch()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finch_shape_and_margins() {
        let f = finch();
        assert_eq!((f.rows(), f.cols()), (13, 17));
        assert_eq!(f.row_sums()[12], 17);
        // Recounted from the table, species 1..13 and islands A..Q.
        assert_eq!(f.row_sums(), &[14, 13, 14, 10, 12, 2, 10, 1, 10, 11, 6, 2, 17]);
        assert_eq!(f.col_sums(), &[4, 4, 11, 10, 10, 8, 9, 10, 8, 9, 4, 9, 4, 7, 9, 3, 3]);
        assert_eq!(f.ones(), 122);
    }

    #[test]
    fn finch_swappable_share_near_three_percent() {
        let frac = swappable_fraction(&finch());
        assert!(frac > 0.02 && frac < 0.04, "{frac}");
    }

    #[test]
    fn lookup() {
        assert!(by_name("finch").is_some());
        assert!(by_name("sparrow").is_none());
    }
}
