//! Existence of matrices with given margins, removal of forced rows and
//! columns, and exhaustive enumeration of small state spaces.

use std::collections::HashMap;

use thiserror::Error;

use crate::matrix::{BinaryMatrix, CanonicalKey, Margins, MatrixError};

/// Largest state space [`enumerate_state_space`] builds unless told otherwise.
pub const DEFAULT_STATE_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FeasibilityError {
    #[error("state space exceeds cap of {cap} (stopped after {found} states)")]
    CapExceeded { cap: usize, found: usize },
    #[error("margins are inconsistent: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Gale–Ryser test: does at least one binary matrix have these margins?
pub fn gale_ryser_feasible(margins: &Margins) -> bool {
    feasible_parts(margins.rows(), margins.cols())
}

fn feasible_parts(rows: &[usize], cols: &[usize]) -> bool {
    let (m, n) = (rows.len(), cols.len());
    if rows.iter().any(|&r| r > n) || cols.iter().any(|&c| c > m) {
        return false;
    }
    if rows.iter().sum::<usize>() != cols.iter().sum::<usize>() {
        return false;
    }
    let mut sorted = rows.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    // conjugate[k] = number of columns with sum > k, so that
    // sum_j min(c_j, k) = conjugate[0] + ... + conjugate[k-1].
    let mut conjugate = vec![0usize; m + 1];
    for &c in cols {
        for slot in conjugate.iter_mut().take(c) {
            *slot += 1;
        }
    }
    let (mut lhs, mut rhs) = (0usize, 0usize);
    for (k, &r) in sorted.iter().enumerate() {
        lhs += r;
        rhs += conjugate[k];
        if lhs > rhs {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Removal {
    order: usize,
    fill: bool,
}

/// Result of repeatedly deleting rows with sum 0 or n and columns with sum 0
/// or m. Keeps what is needed to rebuild full-size matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    full: Margins,
    reduced: Option<Margins>,
    kept_rows: Vec<usize>,
    kept_cols: Vec<usize>,
    row_removal: Vec<Option<Removal>>,
    col_removal: Vec<Option<Removal>>,
}

/// Strips degenerate rows and columns until none remain.
///
/// Fails only when the margins cannot belong to any matrix in a way the
/// stripping itself exposes (a forced line driving a count below zero).
pub fn strip_degenerate(margins: &Margins) -> Result<Reduction, FeasibilityError> {
    let (m, n) = (margins.m(), margins.n());
    let mut r: Vec<i64> = margins.rows().iter().map(|&x| x as i64).collect();
    let mut c: Vec<i64> = margins.cols().iter().map(|&x| x as i64).collect();
    let mut row_removal: Vec<Option<Removal>> = vec![None; m];
    let mut col_removal: Vec<Option<Removal>> = vec![None; n];
    let (mut m_active, mut n_active) = (m as i64, n as i64);
    let mut order = 0;

    loop {
        let row = (0..m).find(|&i| row_removal[i].is_none() && (r[i] == 0 || r[i] == n_active));
        if let Some(i) = row {
            let fill = r[i] > 0;
            row_removal[i] = Some(Removal { order, fill });
            order += 1;
            m_active -= 1;
            if fill {
                for j in (0..n).filter(|&j| col_removal[j].is_none()) {
                    c[j] -= 1;
                    if c[j] < 0 {
                        return Err(FeasibilityError::Inconsistent(format!("full row {i} meets empty column {j}")));
                    }
                }
            }
            continue;
        }
        let col = (0..n).find(|&j| col_removal[j].is_none() && (c[j] == 0 || c[j] == m_active));
        if let Some(j) = col {
            let fill = c[j] > 0;
            col_removal[j] = Some(Removal { order, fill });
            order += 1;
            n_active -= 1;
            if fill {
                for i in (0..m).filter(|&i| row_removal[i].is_none()) {
                    r[i] -= 1;
                    if r[i] < 0 {
                        return Err(FeasibilityError::Inconsistent(format!("full column {j} meets empty row {i}")));
                    }
                }
            }
            continue;
        }
        break;
    }

    let kept_rows: Vec<usize> = (0..m).filter(|&i| row_removal[i].is_none()).collect();
    let kept_cols: Vec<usize> = (0..n).filter(|&j| col_removal[j].is_none()).collect();
    let reduced = if kept_rows.is_empty() || kept_cols.is_empty() {
        None
    } else {
        Some(Margins::new(
            kept_rows.iter().map(|&i| r[i] as usize).collect(),
            kept_cols.iter().map(|&j| c[j] as usize).collect(),
        )?)
    };
    Ok(Reduction { full: margins.clone(), reduced, kept_rows, kept_cols, row_removal, col_removal })
}

impl Reduction {
    pub fn full_margins(&self) -> &Margins {
        &self.full
    }

    /// Margins of the reduced instance; `None` when everything was forced.
    pub fn reduced_margins(&self) -> Option<&Margins> {
        self.reduced.as_ref()
    }

    pub fn kept_rows(&self) -> &[usize] {
        &self.kept_rows
    }

    pub fn kept_cols(&self) -> &[usize] {
        &self.kept_cols
    }

    pub fn is_identity(&self) -> bool {
        self.kept_rows.len() == self.full.m() && self.kept_cols.len() == self.full.n()
    }

    /// Restricts a full-size matrix to the kept rows and columns.
    pub fn reduce(&self, full: &BinaryMatrix) -> Result<Option<BinaryMatrix>, FeasibilityError> {
        if full.margins() != self.full {
            return Err(FeasibilityError::Inconsistent(format!(
                "matrix margins {} differ from reduction margins {}",
                full.margins(),
                self.full
            )));
        }
        if self.reduced.is_none() {
            return Ok(None);
        }
        let out = BinaryMatrix::from_fn(self.kept_rows.len(), self.kept_cols.len(), |i, j| {
            full.get(self.kept_rows[i], self.kept_cols[j])
        })?;
        Ok(Some(out))
    }

    /// Rebuilds the full-size matrix: kept cells come from `reduced`, stripped
    /// cells take the value forced by whichever of their row or column was
    /// removed first.
    pub fn expand(&self, reduced: Option<&BinaryMatrix>) -> Result<BinaryMatrix, FeasibilityError> {
        let mut row_pos = vec![usize::MAX; self.full.m()];
        for (k, &i) in self.kept_rows.iter().enumerate() {
            row_pos[i] = k;
        }
        let mut col_pos = vec![usize::MAX; self.full.n()];
        for (k, &j) in self.kept_cols.iter().enumerate() {
            col_pos[j] = k;
        }
        if let Some(red) = reduced {
            if red.rows() != self.kept_rows.len() || red.cols() != self.kept_cols.len() {
                return Err(MatrixError::DimensionMismatch(
                    red.rows(),
                    red.cols(),
                    self.kept_rows.len(),
                    self.kept_cols.len(),
                )
                .into());
            }
        } else if self.reduced.is_some() {
            return Err(FeasibilityError::Inconsistent("reduced matrix required".into()));
        }
        let out = BinaryMatrix::from_fn(self.full.m(), self.full.n(), |i, j| {
            match (self.row_removal[i], self.col_removal[j]) {
                (None, None) => reduced.is_some_and(|red| red.get(row_pos[i], col_pos[j])),
                (Some(a), None) => a.fill,
                (None, Some(b)) => b.fill,
                (Some(a), Some(b)) => {
                    if a.order < b.order {
                        a.fill
                    } else {
                        b.fill
                    }
                }
            }
        })?;
        Ok(out)
    }
}

/// Strips a concrete matrix, returning the reduction and the reduced matrix.
pub fn strip_matrix(a: &BinaryMatrix) -> Result<(Reduction, Option<BinaryMatrix>), FeasibilityError> {
    let reduction = strip_degenerate(&a.margins())?;
    let reduced = reduction.reduce(a)?;
    Ok((reduction, reduced))
}

/// Every matrix with a given pair of margins, sorted by canonical key.
#[derive(Debug, Clone)]
pub struct StateSpace {
    margins: Margins,
    states: Vec<BinaryMatrix>,
    index: HashMap<CanonicalKey, usize>,
}

impl StateSpace {
    pub fn margins(&self) -> &Margins {
        &self.margins
    }

    pub fn states(&self) -> &[BinaryMatrix] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, a: &BinaryMatrix) -> Option<usize> {
        self.index.get(&a.canonical_key()).copied()
    }

    pub fn index_of_key(&self, key: &CanonicalKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn rows(&self) -> usize {
        self.margins.m()
    }

    pub fn cols(&self) -> usize {
        self.margins.n()
    }
}

impl PartialEq for StateSpace {
    fn eq(&self, other: &Self) -> bool {
        self.margins == other.margins && self.states == other.states
    }
}

/// Enumerates every matrix with the given margins by row-wise backtracking.
///
/// Rows are filled top to bottom with column subsets in lexicographic order;
/// a branch is cut as soon as the remaining rows cannot be completed against
/// the residual column sums. Infeasible margins give an empty space.
pub fn enumerate_state_space(margins: &Margins, cap: usize) -> Result<StateSpace, FeasibilityError> {
    let (m, n) = (margins.m(), margins.n());
    let mut found: Vec<BinaryMatrix> = Vec::new();
    if gale_ryser_feasible(margins) {
        let mut search = Search {
            rows: margins.rows(),
            residual: margins.cols().to_vec(),
            chosen: vec![Vec::new(); m],
            n,
            cap,
            found: &mut found,
        };
        search.fill_row(0)?;
    }
    found.sort_by_cached_key(BinaryMatrix::canonical_key);
    let index = found.iter().enumerate().map(|(k, a)| (a.canonical_key(), k)).collect();
    Ok(StateSpace { margins: margins.clone(), states: found, index })
}

struct Search<'a> {
    rows: &'a [usize],
    residual: Vec<usize>,
    chosen: Vec<Vec<usize>>,
    n: usize,
    cap: usize,
    found: &'a mut Vec<BinaryMatrix>,
}

impl Search<'_> {
    fn fill_row(&mut self, i: usize) -> Result<(), FeasibilityError> {
        if i == self.rows.len() {
            if self.found.len() == self.cap {
                return Err(FeasibilityError::CapExceeded { cap: self.cap, found: self.found.len() + 1 });
            }
            let chosen = &self.chosen;
            let a = BinaryMatrix::from_fn(self.rows.len(), self.n, |r, c| chosen[r].contains(&c))?;
            self.found.push(a);
            return Ok(());
        }
        self.choose(i, 0, self.rows[i])
    }

    fn choose(&mut self, i: usize, start: usize, left: usize) -> Result<(), FeasibilityError> {
        if left == 0 {
            if feasible_parts(&self.rows[i + 1..], &self.residual) {
                self.fill_row(i + 1)?;
            }
            return Ok(());
        }
        if start + left > self.n {
            return Ok(());
        }
        for j in start..=self.n - left {
            if self.residual[j] == 0 {
                continue;
            }
            self.residual[j] -= 1;
            self.chosen[i].push(j);
            let res = self.choose(i, j + 1, left - 1);
            self.chosen[i].pop();
            self.residual[j] += 1;
            res?;
        }
        Ok(())
    }
}
