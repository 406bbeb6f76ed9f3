//! Labelled matrices over the polynomial ring and the engines that expand
//! them: a subset dynamic program, a brute-force permutation sum, the
//! signed-permutation expansion of parity-corrected matrices, and Pfaffians
//! by perfect-matching enumeration.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::poly::{PolyVar, Polynomial};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
    #[error("{engine} is limited to size {bound}, got {size}")]
    SizeExceeded {
        engine: &'static str,
        size: usize,
        bound: usize,
    },
    #[error("matrix is not skew-symmetric at ({0},{1})")]
    NotSkew(usize, usize),
    #[error("pfaffian needs an even size, got {0}")]
    OddSize(usize),
    #[error("unknown label {0}")]
    UnknownLabel(usize),
    #[error("duplicate label {0}")]
    DuplicateLabel(usize),
    #[error("correction term missing for label {0}")]
    MissingCorrection(usize),
}

/// A matrix of polynomials whose rows and columns carry integer labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    row_labels: Vec<usize>,
    col_labels: Vec<usize>,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    /// Builds a matrix by evaluating `f(row_label, col_label)` on every cell.
    pub fn from_fn<F>(row_labels: Vec<usize>, col_labels: Vec<usize>, mut f: F) -> Result<Self, MatrixError>
    where
        F: FnMut(usize, usize) -> Polynomial,
    {
        check_distinct(&row_labels)?;
        check_distinct(&col_labels)?;
        let mut entries = Vec::with_capacity(row_labels.len() * col_labels.len());
        for &r in &row_labels {
            for &c in &col_labels {
                entries.push(f(r, c));
            }
        }
        Ok(Self {
            row_labels,
            col_labels,
            entries,
        })
    }

    /// Square matrix on `labels` for both axes.
    pub fn square<F>(labels: Vec<usize>, f: F) -> Self
    where
        F: FnMut(usize, usize) -> Polynomial,
    {
        Self::from_fn(labels.clone(), labels, f).expect("labels from a range are distinct")
    }

    /// Unlabelled constructor: rows and columns are labelled `0..`.
    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == n_cols), "ragged rows");
        Self {
            row_labels: (0..n_rows).collect(),
            col_labels: (0..n_cols).collect(),
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn empty() -> Self {
        Self {
            row_labels: Vec::new(),
            col_labels: Vec::new(),
            entries: Vec::new(),
        }
    }

    pub fn row_labels(&self) -> &[usize] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[usize] {
        &self.col_labels
    }

    pub fn nrows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    /// Entry by position.
    pub fn at(&self, r: usize, c: usize) -> &Polynomial {
        &self.entries[r * self.ncols() + c]
    }

    fn at_mut(&mut self, r: usize, c: usize) -> &mut Polynomial {
        let n = self.ncols();
        &mut self.entries[r * n + c]
    }

    /// Entry by label.
    pub fn get(&self, row: usize, col: usize) -> Result<&Polynomial, MatrixError> {
        let r = position(&self.row_labels, row)?;
        let c = position(&self.col_labels, col)?;
        Ok(self.at(r, c))
    }

    pub fn set(&mut self, row: usize, col: usize, value: Polynomial) -> Result<(), MatrixError> {
        let r = position(&self.row_labels, row)?;
        let c = position(&self.col_labels, col)?;
        *self.at_mut(r, c) = value;
        Ok(())
    }

    pub fn map<F: FnMut(&Polynomial) -> Polynomial>(&self, f: F) -> PolyMatrix {
        PolyMatrix {
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn substitute(&self, map: &BTreeMap<PolyVar, Polynomial>) -> PolyMatrix {
        self.map(|p| p.substitute(map))
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.ncols() {
            for r in 0..self.nrows() {
                entries.push(self.at(r, c).clone());
            }
        }
        PolyMatrix {
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
            entries,
        }
    }

    /// Multiplies the row at position `r` by the constant `k`.
    pub fn scale_row(&self, r: usize, k: &BigInt) -> PolyMatrix {
        let mut out = self.clone();
        for c in 0..self.ncols() {
            let scaled = out.at(r, c).scale(k);
            *out.at_mut(r, c) = scaled;
        }
        out
    }

    /// True when `M[i,j] = -M[j,i]` for all cells, which forces a zero
    /// diagonal. Requires identical row and column labels.
    pub fn is_skew(&self) -> bool {
        self.first_skew_violation().is_none()
    }

    fn first_skew_violation(&self) -> Option<(usize, usize)> {
        if self.row_labels != self.col_labels {
            return Some((0, 0));
        }
        let n = self.nrows();
        for i in 0..n {
            for j in i..n {
                if *self.at(i, j) != -self.at(j, i) {
                    return Some((self.row_labels[i], self.col_labels[j]));
                }
            }
        }
        None
    }

    pub fn variables(&self) -> BTreeSet<PolyVar> {
        self.entries.iter().flat_map(|p| p.variables()).collect()
    }

    /// Removes the given row and column labels, keeping the order of what
    /// remains.
    pub fn submatrix_delete(&self, drop_rows: &BTreeSet<usize>, drop_cols: &BTreeSet<usize>) -> Result<PolyMatrix, MatrixError> {
        for &r in drop_rows {
            position(&self.row_labels, r)?;
        }
        for &c in drop_cols {
            position(&self.col_labels, c)?;
        }
        let rows: Vec<usize> = (0..self.nrows())
            .filter(|&r| !drop_rows.contains(&self.row_labels[r]))
            .collect();
        let cols: Vec<usize> = (0..self.ncols())
            .filter(|&c| !drop_cols.contains(&self.col_labels[c]))
            .collect();
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &r in &rows {
            for &c in &cols {
                entries.push(self.at(r, c).clone());
            }
        }
        Ok(PolyMatrix {
            row_labels: rows.iter().map(|&r| self.row_labels[r]).collect(),
            col_labels: cols.iter().map(|&c| self.col_labels[c]).collect(),
            entries,
        })
    }
}

/// One line per cell, `(row,col): <canonical polynomial>`, in row-major
/// order. Used for golden files.
impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, &rl) in self.row_labels.iter().enumerate() {
            for (c, &cl) in self.col_labels.iter().enumerate() {
                writeln!(f, "({rl},{cl}): {}", self.at(r, c))?;
            }
        }
        Ok(())
    }
}

fn check_distinct(labels: &[usize]) -> Result<(), MatrixError> {
    let mut seen = BTreeSet::new();
    for &l in labels {
        if !seen.insert(l) {
            return Err(MatrixError::DuplicateLabel(l));
        }
    }
    Ok(())
}

fn position(labels: &[usize], label: usize) -> Result<usize, MatrixError> {
    labels
        .iter()
        .position(|&l| l == label)
        .ok_or(MatrixError::UnknownLabel(label))
}

fn require_square(m: &PolyMatrix) -> Result<usize, MatrixError> {
    if m.is_square() {
        Ok(m.nrows())
    } else {
        Err(MatrixError::NonSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        })
    }
}

/// Which cells of a corrected matrix receive the `-lambda*c_i*c_j` term:
/// those with `i + j` even (`EvenCorrected`) or odd (`OddCorrected`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityRule {
    EvenCorrected,
    OddCorrected,
}

impl ParityRule {
    pub fn corrects(self, i: usize, j: usize) -> bool {
        let even = (i + j) % 2 == 0;
        match self {
            ParityRule::EvenCorrected => even,
            ParityRule::OddCorrected => !even,
        }
    }
}

/// Size limits for the expansion engines. Exceeding one is an error rather
/// than a very long computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeBounds {
    pub det_dp: usize,
    pub perm_oracle: usize,
    pub signed_perm: usize,
    pub pfaffian: usize,
}

impl Default for SizeBounds {
    fn default() -> Self {
        Self {
            det_dp: 8,
            perm_oracle: 7,
            signed_perm: 6,
            pfaffian: 10,
        }
    }
}

impl SizeBounds {
    fn check(engine: &'static str, size: usize, bound: usize) -> Result<(), MatrixError> {
        if size > bound {
            Err(MatrixError::SizeExceeded { engine, size, bound })
        } else {
            Ok(())
        }
    }

    /// Determinant by dynamic programming over column subsets.
    ///
    /// `minor[S]` holds the determinant of the first `|S|` rows restricted
    /// to the columns in `S`. It is obtained by Laplace expansion along row
    /// `|S| - 1`:
    ///
    /// `minor[S] = sum_{c in S} (-1)^{#{d in S : d > c}} M[|S|-1, c] minor[S \ c]`.
    ///
    /// Subsets of one size are independent of each other and are filled in
    /// parallel; each level only reads the previous one.
    pub fn det_dp(&self, m: &PolyMatrix) -> Result<Polynomial, MatrixError> {
        let n = require_square(m)?;
        Self::check("det_dp", n, self.det_dp)?;
        if n == 0 {
            return Ok(Polynomial::one());
        }
        let mut level: HashMap<u32, Polynomial> = HashMap::from([(0u32, Polynomial::one())]);
        for row in 0..n {
            let size = row + 1;
            let subsets: Vec<u32> = (0u32..(1 << n)).filter(|s| s.count_ones() as usize == size).collect();
            let prev = &level;
            let next: HashMap<u32, Polynomial> = subsets
                .into_par_iter()
                .map(|set| {
                    let mut acc = Polynomial::zero();
                    for c in 0..n {
                        if set & (1 << c) == 0 {
                            continue;
                        }
                        let entry = m.at(row, c);
                        if entry.is_zero() {
                            continue;
                        }
                        let rest = set & !(1 << c);
                        let sub = &prev[&rest];
                        if sub.is_zero() {
                            continue;
                        }
                        let above = (rest >> c).count_ones();
                        let term = entry * sub;
                        acc = if above % 2 == 0 { acc + term } else { acc - term };
                    }
                    (set, acc)
                })
                .collect();
            level = next;
        }
        Ok(level.remove(&((1u32 << n) - 1)).expect("full subset is present"))
    }

    /// Determinant as the signed sum over all permutations, the sign taken
    /// from the inversion count.
    pub fn det_perm_oracle(&self, m: &PolyMatrix) -> Result<Polynomial, MatrixError> {
        let n = require_square(m)?;
        Self::check("det_perm_oracle", n, self.perm_oracle)?;
        let mut total = Polynomial::zero();
        for perm in permutations(n) {
            let mut prod = Polynomial::one();
            for (i, &j) in perm.iter().enumerate() {
                prod = &prod * m.at(i, j);
                if prod.is_zero() {
                    break;
                }
            }
            if inversions(&perm) % 2 == 0 {
                total = total + prod;
            } else {
                total = total - prod;
            }
        }
        Ok(total)
    }

    /// Expansion over signed permutations `(pi, eps)` of the row labels.
    ///
    /// The weight of `(pi, eps)` is the product over `i` of `base[i, pi(i)]`
    /// when `eps_i = +1` and of `-lambda * correction[i] * correction[pi(i)]`
    /// when `eps_i = -1`; `eps_i = -1` is only admitted where `parity_rule`
    /// corrects the cell `(i, pi(i))`. The sum of `sgn(pi) * weight` equals
    /// the determinant of `base` with the corrected cells replaced by
    /// `base[i,j] - lambda * correction[i] * correction[j]`.
    pub fn det_signed_perm_expansion(
        &self,
        base: &PolyMatrix,
        correction: &BTreeMap<usize, Polynomial>,
        parity_rule: ParityRule,
    ) -> Result<Polynomial, MatrixError> {
        let n = require_square(base)?;
        Self::check("det_signed_perm_expansion", n, self.signed_perm)?;
        if base.row_labels != base.col_labels {
            return Err(MatrixError::UnknownLabel(
                *base.col_labels.first().unwrap_or(&0),
            ));
        }
        let labels = base.row_labels.clone();
        let corr: Vec<&Polynomial> = labels
            .iter()
            .map(|l| correction.get(l).ok_or(MatrixError::MissingCorrection(*l)))
            .collect::<Result<_, _>>()?;
        let lambda = Polynomial::lambda();
        let mut total = Polynomial::zero();
        for perm in permutations(n) {
            let odd = inversions(&perm) % 2 == 1;
            let flippable: Vec<usize> = (0..n)
                .filter(|&i| parity_rule.corrects(labels[i], labels[perm[i]]))
                .collect();
            for mask in 0u32..(1 << flippable.len()) {
                let mut weight = Polynomial::one();
                for (i, &j) in perm.iter().enumerate() {
                    let flipped = flippable
                        .iter()
                        .position(|&f| f == i)
                        .is_some_and(|k| mask & (1 << k) != 0);
                    let factor = if flipped {
                        -(&(&lambda * corr[i]) * corr[j])
                    } else {
                        base.at(i, j).clone()
                    };
                    weight = &weight * &factor;
                    if weight.is_zero() {
                        break;
                    }
                }
                total = if odd { total - weight } else { total + weight };
            }
        }
        Ok(total)
    }

    /// Pfaffian of an even skew-symmetric matrix as a signed sum over the
    /// perfect matchings of its positions.
    pub fn pfaffian(&self, m: &PolyMatrix) -> Result<Polynomial, MatrixError> {
        let (even, odd) = self.pfaffian_split(m)?;
        Ok(even + odd)
    }

    /// The Pfaffian split by the parity of the label matched with the first
    /// label: `(Pf_e, Pf_o)`.
    pub fn pfaffian_split(&self, m: &PolyMatrix) -> Result<(Polynomial, Polynomial), MatrixError> {
        let n = require_square(m)?;
        if n % 2 == 1 {
            return Err(MatrixError::OddSize(n));
        }
        Self::check("pfaffian", n, self.pfaffian)?;
        if let Some((i, j)) = m.first_skew_violation() {
            return Err(MatrixError::NotSkew(i, j));
        }
        let mut even = Polynomial::zero();
        let mut odd = Polynomial::zero();
        for matching in Matching::enumerate(n) {
            let mut prod = Polynomial::constant(matching.sign());
            for &(i, j) in matching.pairs() {
                prod = &prod * m.at(i, j);
            }
            match matching.partner(0) {
                Some(k) if m.row_labels[k] % 2 == 1 => odd = odd + prod,
                _ => even = even + prod,
            }
        }
        Ok((even, odd))
    }
}

/// Determinant with the default size bounds.
pub fn det_dp(m: &PolyMatrix) -> Result<Polynomial, MatrixError> {
    SizeBounds::default().det_dp(m)
}

pub fn det_perm_oracle(m: &PolyMatrix) -> Result<Polynomial, MatrixError> {
    SizeBounds::default().det_perm_oracle(m)
}

pub fn det_signed_perm_expansion(
    base: &PolyMatrix,
    correction: &BTreeMap<usize, Polynomial>,
    parity_rule: ParityRule,
) -> Result<Polynomial, MatrixError> {
    SizeBounds::default().det_signed_perm_expansion(base, correction, parity_rule)
}

pub fn pfaffian(m: &PolyMatrix) -> Result<Polynomial, MatrixError> {
    SizeBounds::default().pfaffian(m)
}

pub fn pfaffian_split(m: &PolyMatrix) -> Result<(Polynomial, Polynomial), MatrixError> {
    SizeBounds::default().pfaffian_split(m)
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

fn inversions(perm: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                count += 1;
            }
        }
    }
    count
}

/// A perfect matching of the positions `0..n`, stored as pairs `(i, j)` with
/// `i < j`, sorted by `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    /// Validates that `pairs` partitions `0..n`.
    pub fn new(n: usize, pairs: Vec<(usize, usize)>) -> Option<Self> {
        let mut seen = vec![false; n];
        let mut sorted = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            if a == b || a >= n || b >= n || seen[a] || seen[b] {
                return None;
            }
            seen[a] = true;
            seen[b] = true;
            sorted.push((a.min(b), a.max(b)));
        }
        if seen.iter().any(|s| !s) {
            return None;
        }
        sorted.sort_unstable();
        Some(Self { pairs: sorted })
    }

    /// Every perfect matching of `0..n`; empty when `n` is odd, a single
    /// empty matching when `n == 0`.
    pub fn enumerate(n: usize) -> Vec<Matching> {
        fn go(free: &mut Vec<usize>, acc: &mut Vec<(usize, usize)>, out: &mut Vec<Matching>) {
            if free.is_empty() {
                out.push(Matching { pairs: acc.clone() });
                return;
            }
            let first = free.remove(0);
            for k in 0..free.len() {
                let partner = free.remove(k);
                acc.push((first, partner));
                go(free, acc, out);
                acc.pop();
                free.insert(k, partner);
            }
            free.insert(0, first);
        }
        let mut out = Vec::new();
        if n % 2 == 0 {
            go(&mut (0..n).collect(), &mut Vec::new(), &mut out);
        }
        out
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn partner(&self, i: usize) -> Option<usize> {
        self.pairs.iter().find_map(|&(a, b)| {
            if a == i {
                Some(b)
            } else if b == i {
                Some(a)
            } else {
                None
            }
        })
    }

    fn raw_sign(&self) -> i64 {
        let word: Vec<usize> = self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        if inversions(&word) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Sign of the word `i1 j1 i2 j2 ...`, normalised so that the reference
    /// matching `{(0,n-1), (1,n-2), ...}` has sign `+1`.
    pub fn sign(&self) -> i64 {
        let n = 2 * self.pairs.len();
        let reference = Matching {
            pairs: (0..n / 2).map(|i| (i, n - 1 - i)).collect(),
        };
        self.raw_sign() * reference.raw_sign()
    }
}
