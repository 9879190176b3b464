//! Exact transition kernels of the three chains on an enumerated state space,
//! plus the checks run against them: uniform stationarity, symmetry, Peskun
//! dominance and total-variation convergence.
//!
//! Kernel entries are exact rationals. Matrix powers for total variation are
//! taken in `f64` after the exact kernel is built.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::chains::Algorithm;
use crate::feasibility::StateSpace;
use crate::matrix::{BinaryMatrix, SwapQuad};

/// Exact probability, always in lowest terms.
pub type Rational = Ratio<i128>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("matrices are not swappable (they must differ in exactly one checkerboard unit)")]
    NotSwappable,
    #[error("kernels are defined on different state spaces")]
    SpaceMismatch,
    #[error("closed-form and enumerated Rectangle Loop kernels disagree at ({row},{col}): {closed} vs {enumerated}")]
    Inconsistent { row: usize, col: usize, closed: Rational, enumerated: Rational },
    #[error("margins are degenerate: every row and column needs both a 0 and a 1")]
    Degenerate,
    #[error("{0} needs at least two rows")]
    TooFewRows(Algorithm),
    #[error("matrix is not in the state space")]
    UnknownState,
}

/// Renders a rational as `p/q`, including integers (`0/1`, `1/1`).
pub fn fraction_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn choose(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// Square stochastic matrix over the states of a [`StateSpace`], stored as
/// sparse rows sorted by column.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    space: StateSpace,
    rows: Vec<Vec<(usize, Rational)>>,
}

impl TransitionMatrix {
    fn from_maps(space: &StateSpace, maps: Vec<BTreeMap<usize, Rational>>) -> Self {
        let rows = maps.into_iter().map(|m| m.into_iter().filter(|(_, p)| !p.is_zero()).collect()).collect();
        TransitionMatrix { space: space.clone(), rows }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        let row = &self.rows[i];
        match row.binary_search_by_key(&j, |&(c, _)| c) {
            Ok(k) => row[k].1,
            Err(_) => Rational::zero(),
        }
    }

    /// Nonzero entries of row `i` as `(column, probability)`.
    pub fn row(&self, i: usize) -> &[(usize, Rational)] {
        &self.rows[i]
    }

    /// Probability of moving from `a` to `b` in one step.
    pub fn entry(&self, a: &BinaryMatrix, b: &BinaryMatrix) -> Result<Rational, ExactError> {
        let i = self.space.index_of(a).ok_or(ExactError::UnknownState)?;
        let j = self.space.index_of(b).ok_or(ExactError::UnknownState)?;
        Ok(self.get(i, j))
    }

    /// Dense entries with rows and columns in the order of `states`.
    pub fn in_order(&self, states: &[BinaryMatrix]) -> Result<Vec<Vec<Rational>>, ExactError> {
        let idx = states
            .iter()
            .map(|s| self.space.index_of(s).ok_or(ExactError::UnknownState))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(idx.iter().map(|&i| idx.iter().map(|&j| self.get(i, j)).collect()).collect())
    }

    pub fn dense(&self) -> Vec<Vec<Rational>> {
        (0..self.len()).map(|i| (0..self.len()).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![0.0; n];
                for (j, p) in row {
                    dense[*j] = *p.numer() as f64 / *p.denom() as f64;
                }
                dense
            })
            .collect()
    }

    /// Every row sums to exactly one and every entry lies in [0, 1].
    pub fn is_stochastic(&self) -> bool {
        self.rows.iter().all(|row| {
            row.iter().all(|(_, p)| !p.is_negative() && *p <= Rational::one())
                && row.iter().map(|(_, p)| *p).sum::<Rational>() == Rational::one()
        })
    }

    /// First pair `(i, j)` with `P(i,j) != P(j,i)`, if any.
    pub fn asymmetry(&self) -> Option<(usize, usize)> {
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, p) in row {
                if self.get(j, i) != p {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// If `a` and `b` differ in exactly one checkerboard unit, returns its quad
/// oriented so that `a` holds `[[1,0],[0,1]]` at rows `(r1,r2)`, columns `(c1,c2)`.
pub fn swap_difference(a: &BinaryMatrix, b: &BinaryMatrix) -> Option<SwapQuad> {
    if a.hamming(b).ok()? != 4 {
        return None;
    }
    let mut cells = Vec::with_capacity(4);
    for i in 0..a.rows() {
        for (w, (&x, &y)) in a.row_words(i).iter().zip(b.row_words(i)).enumerate() {
            let mut d = x ^ y;
            while d != 0 {
                cells.push((i, w * 64 + d.trailing_zeros() as usize));
                d &= d - 1;
            }
        }
    }
    let (r1, r2) = (cells[0].0, cells[3].0);
    let (c1, c2) = (cells[0].1.min(cells[1].1), cells[0].1.max(cells[1].1));
    let expected = [(r1, c1), (r1, c2), (r2, c1), (r2, c2)];
    if r1 == r2 || c1 == c2 || cells != expected {
        return None;
    }
    let q = SwapQuad { r1, r2, c1, c2 };
    if !a.is_checkerboard(q) {
        return None;
    }
    Some(if a.get(r1, c1) { q } else { SwapQuad { r1, r2, c1: c2, c2: c1 } })
}

/// Neighbors of `a` reachable by one swap, with the quad used.
fn swap_neighbors(a: &BinaryMatrix) -> Vec<(SwapQuad, BinaryMatrix)> {
    let (m, n) = (a.rows(), a.cols());
    let mut out = Vec::new();
    for r1 in 0..m {
        for r2 in r1 + 1..m {
            for c1 in 0..n {
                for c2 in c1 + 1..n {
                    let q = SwapQuad { r1, r2, c1, c2 };
                    if a.is_checkerboard(q) {
                        let mut b = a.clone();
                        b.flip_quad(q);
                        out.push((q, b));
                    }
                }
            }
        }
    }
    out
}

/// Swap-chain kernel: each swappable neighbor gets `1/(C(m,2) C(n,2))`.
pub fn build_swap_kernel(space: &StateSpace) -> TransitionMatrix {
    let pairs = choose(space.rows(), 2) * choose(space.cols(), 2);
    let mut maps = vec![BTreeMap::new(); space.len()];
    for (i, a) in space.states().iter().enumerate() {
        let mut stay = Rational::one();
        if pairs > 0 {
            let p = Rational::new(1, pairs);
            for (_, b) in swap_neighbors(a) {
                let j = space.index_of(&b).expect("swap preserves margins");
                maps[i].insert(j, p);
                stay -= p;
            }
        }
        maps[i].insert(i, stay);
    }
    TransitionMatrix::from_maps(space, maps)
}

fn check_nondegenerate(space: &StateSpace) -> Result<(), ExactError> {
    let (m, n) = (space.rows(), space.cols());
    let mg = space.margins();
    if mg.rows().iter().any(|&r| r == 0 || r >= n) || mg.cols().iter().any(|&c| c == 0 || c >= m) {
        return Err(ExactError::Degenerate);
    }
    Ok(())
}

fn rectangle_quad_probability(a: &BinaryMatrix, q: SwapQuad) -> Rational {
    // `a` holds [[1,0],[0,1]] on (r1,r2) x (c1,c2).
    let (m, n) = (a.rows() as i128, a.cols() as i128);
    let zeros = |i: usize| n - a.row_sums()[i] as i128;
    let ones = |j: usize| a.col_sums()[j] as i128;
    let term = |z: i128, o: i128| Rational::new(1, z * o);
    let sum = term(zeros(q.r1), ones(q.c2))
        + term(ones(q.c2), zeros(q.r2))
        + term(zeros(q.r2), ones(q.c1))
        + term(ones(q.c1), zeros(q.r1));
    sum / Rational::from_integer(m * n)
}

/// Closed-form one-step Rectangle Loop probability between swappable matrices.
///
/// With `a` holding `[[1,0],[0,1]]` on rows `i1,i2` and columns `j1,j2`, the
/// four corners of the rectangle each start one path:
/// `(1/mn) [1/((n-r_i1) c_j2) + 1/(c_j2 (n-r_i2)) + 1/((n-r_i2) c_j1) + 1/(c_j1 (n-r_i1))]`.
pub fn rectangle_pair_probability(a: &BinaryMatrix, b: &BinaryMatrix) -> Result<Rational, ExactError> {
    let q = swap_difference(a, b).ok_or(ExactError::NotSwappable)?;
    Ok(rectangle_quad_probability(a, q))
}

/// Rectangle Loop kernel from the closed form.
pub fn rectangle_kernel_closed_form(space: &StateSpace) -> Result<TransitionMatrix, ExactError> {
    check_nondegenerate(space)?;
    let mut maps = vec![BTreeMap::new(); space.len()];
    for (i, a) in space.states().iter().enumerate() {
        let mut stay = Rational::one();
        for (q, b) in swap_neighbors(a) {
            let j = space.index_of(&b).expect("swap preserves margins");
            let oriented = if a.get(q.r1, q.c1) { q } else { SwapQuad { c1: q.c2, c2: q.c1, ..q } };
            let p = rectangle_quad_probability(a, oriented);
            maps[i].insert(j, p);
            stay -= p;
        }
        maps[i].insert(i, stay);
    }
    Ok(TransitionMatrix::from_maps(space, maps))
}

/// Rectangle Loop kernel by following every branch of a single step: each of
/// the `mn` starting cells, then each admissible column and row choice.
pub fn rectangle_kernel_enumerated(space: &StateSpace) -> Result<TransitionMatrix, ExactError> {
    check_nondegenerate(space)?;
    let mut maps = vec![BTreeMap::new(); space.len()];
    for (i, a) in space.states().iter().enumerate() {
        let (m, n) = (a.rows(), a.cols());
        let cell = Rational::new(1, (m * n) as i128);
        let row = &mut maps[i];
        let mut land = |r1: usize, r2: usize, c1: usize, c2: usize, p: Rational| {
            let q = SwapQuad { r1, r2, c1, c2 };
            let target = if a.is_checkerboard(q) {
                let mut b = a.clone();
                b.flip_quad(q);
                space.index_of(&b).expect("swap preserves margins")
            } else {
                i
            };
            *row.entry(target).or_insert_with(Rational::zero) += p;
        };
        for r1 in 0..m {
            for c1 in 0..n {
                if a.get(r1, c1) {
                    let zero_cols: Vec<usize> = (0..n).filter(|&j| !a.get(r1, j)).collect();
                    for &c2 in &zero_cols {
                        let one_rows: Vec<usize> = (0..m).filter(|&k| a.get(k, c2)).collect();
                        let p = cell / Rational::from_integer((zero_cols.len() * one_rows.len()) as i128);
                        for &r2 in &one_rows {
                            land(r1, r2, c1, c2, p);
                        }
                    }
                } else {
                    let one_rows: Vec<usize> = (0..m).filter(|&k| a.get(k, c1)).collect();
                    for &r2 in &one_rows {
                        let zero_cols: Vec<usize> = (0..n).filter(|&j| !a.get(r2, j)).collect();
                        let p = cell / Rational::from_integer((zero_cols.len() * one_rows.len()) as i128);
                        for &c2 in &zero_cols {
                            land(r1, r2, c1, c2, p);
                        }
                    }
                }
            }
        }
    }
    Ok(TransitionMatrix::from_maps(space, maps))
}

/// Rectangle Loop kernel, built both ways and required to agree exactly.
pub fn build_rectangle_kernel(space: &StateSpace) -> Result<TransitionMatrix, ExactError> {
    let closed = rectangle_kernel_closed_form(space)?;
    let enumerated = rectangle_kernel_enumerated(space)?;
    for i in 0..closed.len() {
        if closed.row(i) != enumerated.row(i) {
            let j =
                (0..closed.len()).find(|&j| closed.get(i, j) != enumerated.get(i, j)).expect("rows differ somewhere");
            return Err(ExactError::Inconsistent {
                row: i,
                col: j,
                closed: closed.get(i, j),
                enumerated: enumerated.get(i, j),
            });
        }
    }
    Ok(closed)
}

/// Curveball kernel: every row pair with probability `1/C(m,2)`, then every
/// split of the trade pool giving row `a` as many exclusive columns as before
/// and differing from the current split, uniformly.
pub fn build_curveball_kernel(space: &StateSpace) -> Result<TransitionMatrix, ExactError> {
    let m = space.rows();
    if m < 2 {
        return Err(ExactError::TooFewRows(Algorithm::Curveball));
    }
    let pair = Rational::new(1, choose(m, 2));
    let mut maps = vec![BTreeMap::new(); space.len()];
    for (i, a) in space.states().iter().enumerate() {
        let row = &mut maps[i];
        for ra in 0..m {
            for rb in ra + 1..m {
                let pool: Vec<usize> = (0..a.cols()).filter(|&j| a.get(ra, j) != a.get(rb, j)).collect();
                let k = pool.iter().filter(|&&j| a.get(ra, j)).count();
                let splits = choose(pool.len(), k);
                if splits <= 1 {
                    *row.entry(i).or_insert_with(Rational::zero) += pair;
                    continue;
                }
                let p = pair / Rational::from_integer(splits - 1);
                let current: u32 =
                    pool.iter().enumerate().filter(|(_, &j)| a.get(ra, j)).map(|(bit, _)| 1 << bit).sum();
                for subset in 0u32..1 << pool.len() {
                    if subset.count_ones() as usize != k || subset == current {
                        continue;
                    }
                    let mut b = a.clone();
                    for (bit, &j) in pool.iter().enumerate() {
                        if (subset >> bit & 1 == 1) != a.get(ra, j) {
                            b.flip(ra, j);
                            b.flip(rb, j);
                        }
                    }
                    let j = space.index_of(&b).expect("trade preserves margins");
                    *row.entry(j).or_insert_with(Rational::zero) += p;
                }
            }
        }
    }
    Ok(TransitionMatrix::from_maps(space, maps))
}

pub fn build_kernel(space: &StateSpace, algorithm: Algorithm) -> Result<TransitionMatrix, ExactError> {
    match algorithm {
        Algorithm::Swap => Ok(build_swap_kernel(space)),
        Algorithm::Curveball => build_curveball_kernel(space),
        Algorithm::RectangleLoop => build_rectangle_kernel(space),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StationarityReport {
    /// `pi P == pi` holds exactly for uniform `pi`.
    pub exact: bool,
    /// Largest `|(pi P - pi)_j|`.
    pub max_residual: Rational,
}

/// Checks that the uniform distribution is stationary, in exact arithmetic.
pub fn check_stationarity(p: &TransitionMatrix) -> StationarityReport {
    let s = p.len();
    if s == 0 {
        return StationarityReport { exact: true, max_residual: Rational::zero() };
    }
    let mut col_sums = vec![Rational::zero(); s];
    for row in &p.rows {
        for &(j, v) in row {
            col_sums[j] += v;
        }
    }
    let pi = Rational::new(1, s as i128);
    let max_residual =
        col_sums.into_iter().map(|c| ((c - Rational::one()) * pi).abs()).max().unwrap_or_else(Rational::zero);
    StationarityReport { exact: max_residual.is_zero(), max_residual }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeskunReport {
    pub dominates: bool,
    /// First off-diagonal `(i, j)` with `P1(i,j) < P2(i,j)`.
    pub witness: Option<(usize, usize)>,
    /// First off-diagonal `(i, j)` with `P1(i,j) > P2(i,j)`.
    pub strict: Option<(usize, usize)>,
}

/// Does `p1` dominate `p2` off the diagonal?
pub fn check_peskun_dominance(p1: &TransitionMatrix, p2: &TransitionMatrix) -> Result<PeskunReport, ExactError> {
    if p1.space != p2.space {
        return Err(ExactError::SpaceMismatch);
    }
    let mut witness = None;
    let mut strict = None;
    'rows: for i in 0..p1.len() {
        let cols: std::collections::BTreeSet<usize> = p1.row(i).iter().chain(p2.row(i)).map(|&(j, _)| j).collect();
        for j in cols.into_iter().filter(|&j| j != i) {
            let (a, b) = (p1.get(i, j), p2.get(i, j));
            if a < b {
                witness = Some((i, j));
                break 'rows;
            }
            if a > b && strict.is_none() {
                strict = Some((i, j));
            }
        }
    }
    Ok(PeskunReport { dominates: witness.is_none(), witness, strict })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TvPoint {
    pub k: usize,
    pub tv: f64,
}

impl TvPoint {
    /// `log10(tv)`; negative infinity when the distance is exactly zero.
    pub fn log10_tv(&self) -> f64 {
        if self.tv > 0.0 {
            self.tv.log10()
        } else {
            f64::NEG_INFINITY
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TvCurve {
    pub points: Vec<TvPoint>,
}

impl TvCurve {
    pub fn tv(&self, k: usize) -> Option<f64> {
        self.points.iter().find(|p| p.k == k).map(|p| p.tv)
    }
}

/// `max_A (1/2) sum_B |Q(A,B) - 1/S|` for a square row-stochastic `Q`.
pub fn tv_to_uniform(q: &[Vec<f64>]) -> f64 {
    let s = q.len();
    let pi = 1.0 / s as f64;
    q.iter().map(|row| 0.5 * row.iter().map(|x| (x - pi).abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Worst-case total variation distance to uniform after `k = 1..=k_max` steps.
pub fn tv_distance_curve(p: &TransitionMatrix, k_max: usize) -> TvCurve {
    let s = p.len();
    let sparse: Vec<Vec<(usize, f64)>> = p
        .rows
        .iter()
        .map(|row| row.iter().map(|(j, v)| (*j, *v.numer() as f64 / *v.denom() as f64)).collect())
        .collect();
    let mut power: Vec<Vec<f64>> = (0..s)
        .map(|i| {
            let mut e = vec![0.0; s];
            e[i] = 1.0;
            e
        })
        .collect();
    let mut points = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        power = power
            .iter()
            .map(|row| {
                let mut next = vec![0.0; s];
                for (l, &x) in row.iter().enumerate() {
                    if x != 0.0 {
                        for &(j, v) in &sparse[l] {
                            next[j] += x * v;
                        }
                    }
                }
                next
            })
            .collect();
        points.push(TvPoint { k, tv: tv_to_uniform(&power) });
    }
    TvCurve { points }
}

impl fmt::Display for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            let cells: Vec<String> = (0..self.len()).map(|j| fraction_string(&self.get(i, j))).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}
