//! Exact 2x2 matrices over the Gaussian rationals, random SL(2) samplers,
//! and the numeric trace matrices built from tuples of such matrices.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Sl2Error {
    #[error("matrix has determinant {0}, expected 1")]
    NotUnimodular(Box<GaussianRational>),
    #[error("matrix is singular")]
    Singular,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
}

/// `re + im*i` with both parts exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(k: i64) -> Self {
        Self::new(BigRational::from_integer(k.into()), BigRational::zero())
    }

    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Self::new(
            BigRational::new(re_num.into(), re_den.into()),
            BigRational::new(im_num.into(), im_den.into()),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -&self.im / &n))
    }

    /// Real integer value, if this is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        (self.im.is_zero() && self.re.is_integer()).then(|| self.re.to_integer())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) if self.im.is_negative() => write!(f, "{}-{}i", self.re, -&self.im),
            (false, false) => write!(f, "{}+{}i", self.re, self.im),
        }
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-&self.re, -&self.im)
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> Self {
        -&self
    }
}

/// `{re_num, re_den, im_num, im_den}` as decimal strings.
impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("GaussianRational", 4)?;
        s.serialize_field("re_num", &self.re.numer().to_string())?;
        s.serialize_field("re_den", &self.re.denom().to_string())?;
        s.serialize_field("im_num", &self.im.numer().to_string())?;
        s.serialize_field("im_den", &self.im.denom().to_string())?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            re_num: String,
            re_den: String,
            im_num: String,
            im_den: String,
        }
        let raw = Raw::deserialize(deserializer)?;
        let int = |s: &str| s.parse::<BigInt>().map_err(serde::de::Error::custom);
        let ratio = |n: &str, d: &str| -> Result<BigRational, D::Error> {
            let d = int(d)?;
            if d.is_zero() {
                return Err(serde::de::Error::custom("zero denominator"));
            }
            Ok(BigRational::new(int(n)?, d))
        };
        Ok(GaussianRational::new(
            ratio(&raw.re_num, &raw.re_den)?,
            ratio(&raw.im_num, &raw.im_den)?,
        ))
    }
}

/// `[[e11, e12], [e21, e22]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2 {
    pub e11: GaussianRational,
    pub e12: GaussianRational,
    pub e21: GaussianRational,
    pub e22: GaussianRational,
}

impl Mat2 {
    pub fn new(e11: GaussianRational, e12: GaussianRational, e21: GaussianRational, e22: GaussianRational) -> Self {
        Self { e11, e12, e21, e22 }
    }

    pub fn from_ints(e11: i64, e12: i64, e21: i64, e22: i64) -> Self {
        Self::new(
            GaussianRational::from_int(e11),
            GaussianRational::from_int(e12),
            GaussianRational::from_int(e21),
            GaussianRational::from_int(e22),
        )
    }

    /// Constructor that insists on determinant one.
    pub fn sl2(e11: GaussianRational, e12: GaussianRational, e21: GaussianRational, e22: GaussianRational) -> Result<Self, Sl2Error> {
        let m = Self::new(e11, e12, e21, e22);
        m.check_unimodular()?;
        Ok(m)
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }

    /// `S = [[0, -1], [1, 0]]`.
    pub fn s() -> Self {
        Self::from_ints(0, -1, 1, 0)
    }

    /// `T = [[1, 1], [0, 1]]`.
    pub fn t() -> Self {
        Self::from_ints(1, 1, 0, 1)
    }

    pub fn det(&self) -> GaussianRational {
        &(&self.e11 * &self.e22) - &(&self.e12 * &self.e21)
    }

    pub fn trace(&self) -> GaussianRational {
        &self.e11 + &self.e22
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().is_one()
    }

    pub fn check_unimodular(&self) -> Result<(), Sl2Error> {
        let d = self.det();
        if d.is_one() {
            Ok(())
        } else {
            Err(Sl2Error::NotUnimodular(Box::new(d)))
        }
    }

    pub fn mul(&self, y: &Mat2) -> Mat2 {
        Mat2::new(
            &(&self.e11 * &y.e11) + &(&self.e12 * &y.e21),
            &(&self.e11 * &y.e12) + &(&self.e12 * &y.e22),
            &(&self.e21 * &y.e11) + &(&self.e22 * &y.e21),
            &(&self.e21 * &y.e12) + &(&self.e22 * &y.e22),
        )
    }

    /// Adjugate, divided by the determinant unless it is one.
    pub fn inverse(&self) -> Result<Mat2, Sl2Error> {
        let adj = Mat2::new(self.e22.clone(), -&self.e12, -&self.e21, self.e11.clone());
        let d = self.det();
        if d.is_one() {
            return Ok(adj);
        }
        let inv = d.inv().ok_or(Sl2Error::Singular)?;
        Ok(Mat2::new(&adj.e11 * &inv, &adj.e12 * &inv, &adj.e21 * &inv, &adj.e22 * &inv))
    }

    /// `x^eps` for `eps = ±1`.
    pub fn signed_power(&self, eps: Sign) -> Result<Mat2, Sl2Error> {
        match eps {
            Sign::Plus => Ok(self.clone()),
            Sign::Minus => self.inverse(),
        }
    }
}

/// Both sides of `tr(m M^-1) = tr(m) tr(M) - tr(m M)`.
pub fn trace_relation_check(m: &Mat2, big_m: &Mat2) -> Result<(GaussianRational, GaussianRational), Sl2Error> {
    m.check_unimodular()?;
    big_m.check_unimodular()?;
    let lhs = m.mul(&big_m.inverse()?).trace();
    let rhs = &(&m.trace() * &big_m.trace()) - &m.mul(big_m).trace();
    Ok((lhs, rhs))
}

/// Product of `word_len` letters drawn uniformly from `S, S^-1, T, T^-1`.
pub fn random_sl2z_with<R: Rng + ?Sized>(word_len: usize, rng: &mut R) -> Mat2 {
    let letters = [
        Mat2::s(),
        Mat2::from_ints(0, 1, -1, 0),
        Mat2::t(),
        Mat2::from_ints(1, -1, 0, 1),
    ];
    (0..word_len).fold(Mat2::identity(), |acc, _| acc.mul(&letters[rng.gen_range(0..4)]))
}

pub fn random_sl2z(word_len: usize, seed: u64) -> Mat2 {
    random_sl2z_with(word_len, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn random_gaussian<R: Rng + ?Sized>(rng: &mut R, height: i64) -> GaussianRational {
    let mut part = || BigRational::new(rng.gen_range(-height..=height).into(), rng.gen_range(1..=height).into());
    let re = part();
    let im = part();
    GaussianRational::new(re, im)
}

/// Picks `a, b, c` with numerators and denominators bounded by
/// `height_bound` (resampling `a` until it is nonzero) and sets
/// `d = (1 + bc) / a`.
pub fn random_sl2_gaussian_with<R: Rng + ?Sized>(height_bound: u32, rng: &mut R) -> Mat2 {
    let h = i64::from(height_bound.max(1));
    let a = loop {
        let a = random_gaussian(rng, h);
        if !a.is_zero() {
            break a;
        }
    };
    let b = random_gaussian(rng, h);
    let c = random_gaussian(rng, h);
    sl2_from_abc(a, b, c).expect("a is nonzero")
}

pub fn random_sl2_gaussian(seed: u64, height_bound: u32) -> Mat2 {
    random_sl2_gaussian_with(height_bound, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `[[a, b], [c, (1 + bc)/a]]`.
pub fn sl2_from_abc(a: GaussianRational, b: GaussianRational, c: GaussianRational) -> Result<Mat2, Sl2Error> {
    let inv = a.inv().ok_or(Sl2Error::Singular)?;
    let d = &(&GaussianRational::one() + &(&b * &c)) * &inv;
    Ok(Mat2::new(a, b, c, d))
}

/// Which sampler produces the SL(2) instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    /// Words in `S` and `T`; integer entries.
    Sl2z { word_len: usize },
    /// Gaussian-rational entries of bounded height.
    Gaussian { height_bound: u32 },
}

impl Generator {
    pub const DEFAULT_WORD_LEN: usize = 12;
    pub const DEFAULT_HEIGHT: u32 = 5;

    pub fn sl2z() -> Self {
        Generator::Sl2z {
            word_len: Self::DEFAULT_WORD_LEN,
        }
    }

    pub fn gaussian() -> Self {
        Generator::Gaussian {
            height_bound: Self::DEFAULT_HEIGHT,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Mat2 {
        match *self {
            Generator::Sl2z { word_len } => random_sl2z_with(word_len, rng),
            Generator::Gaussian { height_bound } => random_sl2_gaussian_with(height_bound, rng),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Generator::Sl2z { .. } => "sl2z",
            Generator::Gaussian { .. } => "gaussian",
        }
    }
}

/// A random stream for one trial: the master seed picks the key and the
/// trial index picks the stream, so trials are reproducible independently.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// Exponents `eps_1, ..., eps_n` in `{+1, -1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SignVector(pub Vec<Sign>);

impl SignVector {
    pub fn all_plus(n: usize) -> Self {
        Self(vec![Sign::Plus; n])
    }

    /// Bit `k` of `mask` set means `eps_{k+1} = -1`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Self((0..n).map(|k| if mask >> k & 1 == 1 { Sign::Minus } else { Sign::Plus }).collect())
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self((0..n).map(|_| if rng.gen_bool(0.5) { Sign::Minus } else { Sign::Plus }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Serialize for SignVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let v: Vec<i8> = self.0.iter().map(|s| if *s == Sign::Plus { 1 } else { -1 }).collect();
        v.serialize(serializer)
    }
}

/// A dense matrix of Gaussian rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

impl ExactMatrix {
    pub fn from_fn<F: FnMut(usize, usize) -> GaussianRational>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        Self::from_fn(n, m, |r, c| GaussianRational::from_int(rows[r][c]))
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussianRational {
        &self.data[r * self.cols + c]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[GaussianRational]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    fn require_square(&self) -> Result<usize, Sl2Error> {
        if self.rows == self.cols {
            Ok(self.rows)
        } else {
            Err(Sl2Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Determinant by Gaussian elimination over the field, pivoting on the
    /// first nonzero entry of each column.
    pub fn det(&self) -> Result<GaussianRational, Sl2Error> {
        let n = self.require_square()?;
        let mut m: Vec<Vec<GaussianRational>> = self.rows().map(<[_]>::to_vec).collect();
        let mut det = GaussianRational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return Ok(GaussianRational::zero());
            };
            if p != col {
                m.swap(p, col);
                det = -det;
            }
            let pivot_inv = m[col][col].inv().expect("pivot is nonzero");
            det = &det * &m[col][col];
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] * &pivot_inv;
                for c in col..n {
                    let delta = &factor * &m[col][c];
                    m[r][c] = &m[r][c] - &delta;
                }
            }
        }
        Ok(det)
    }

    /// A nonzero row vector `v` with `v M = 0`, normalised so that its first
    /// nonzero coordinate is one, or `None` when `M` is invertible.
    pub fn left_kernel(&self) -> Result<Option<Vec<GaussianRational>>, Sl2Error> {
        let n = self.require_square()?;
        // v M = 0  <=>  M^t v^t = 0; reduce M^t to row echelon form
        let mut m: Vec<Vec<GaussianRational>> = (0..n).map(|r| (0..n).map(|c| self.get(c, r).clone()).collect()).collect();
        let mut pivot_cols = Vec::new();
        let mut row = 0;
        for col in 0..n {
            let Some(p) = (row..n).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(p, row);
            let inv = m[row][col].inv().expect("pivot is nonzero");
            for c in col..n {
                m[row][c] = &m[row][c] * &inv;
            }
            for r in 0..n {
                if r == row || m[r][col].is_zero() {
                    continue;
                }
                let factor = m[r][col].clone();
                for c in col..n {
                    let delta = &factor * &m[row][c];
                    m[r][c] = &m[r][c] - &delta;
                }
            }
            pivot_cols.push(col);
            row += 1;
        }
        let Some(free) = (0..n).find(|c| !pivot_cols.contains(c)) else {
            return Ok(None);
        };
        let mut v = vec![GaussianRational::zero(); n];
        v[free] = GaussianRational::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -&m[r][free];
        }
        let lead = v.iter().find(|x| !x.is_zero()).cloned().expect("free coordinate is one");
        let lead_inv = lead.inv().expect("nonzero");
        Ok(Some(v.iter().map(|x| x * &lead_inv).collect()))
    }

    /// `v M`.
    pub fn left_mul(&self, v: &[GaussianRational]) -> Result<Vec<GaussianRational>, Sl2Error> {
        if v.len() != self.rows {
            return Err(Sl2Error::LengthMismatch(v.len(), self.rows));
        }
        Ok((0..self.cols)
            .map(|c| {
                v.iter()
                    .enumerate()
                    .fold(GaussianRational::zero(), |acc, (r, x)| &acc + &(x * self.get(r, c)))
            })
            .collect())
    }
}

/// Serialises as an array of rows.
impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<&[GaussianRational]> = self.rows().collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<GaussianRational>> = Vec::deserialize(deserializer)?;
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(serde::de::Error::custom("ragged matrix"));
        }
        Ok(ExactMatrix {
            rows: n,
            cols: m,
            data: rows.into_iter().flatten().collect(),
        })
    }
}

/// The `A`, `B`, `C` trace matrices of the generalised Magnus identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MagnusMatrices {
    pub a: ExactMatrix,
    pub b: ExactMatrix,
    pub c: ExactMatrix,
}

fn check_all(ms: &[Mat2]) -> Result<(), Sl2Error> {
    ms.iter().try_for_each(Mat2::check_unimodular)
}

/// With `m_0 = M_0 = I`:
/// `A[i,j] = tr(m_i M_j^-1)` for `i + j` even and `tr(m_i M_j)` otherwise
/// (`0 <= i, j <= n`), `B[i,j] = -tr(m_i M_j)`, `C[i,j] = tr(m_i M_j^-1)`.
pub fn build_magnus_matrices(m: &[Mat2], big_m: &[Mat2]) -> Result<MagnusMatrices, Sl2Error> {
    if m.len() != big_m.len() {
        return Err(Sl2Error::LengthMismatch(m.len(), big_m.len()));
    }
    check_all(m)?;
    check_all(big_m)?;
    let n = m.len();
    let small: Vec<Mat2> = std::iter::once(Mat2::identity()).chain(m.iter().cloned()).collect();
    let large: Vec<Mat2> = std::iter::once(Mat2::identity()).chain(big_m.iter().cloned()).collect();
    let large_inv: Vec<Mat2> = large.iter().map(|x| x.inverse()).collect::<Result<_, _>>()?;
    let tr_plus = |i: usize, j: usize| small[i].mul(&large[j]).trace();
    let tr_minus = |i: usize, j: usize| small[i].mul(&large_inv[j]).trace();
    Ok(MagnusMatrices {
        a: ExactMatrix::from_fn(n + 1, n + 1, |i, j| if (i + j) % 2 == 0 { tr_minus(i, j) } else { tr_plus(i, j) }),
        b: ExactMatrix::from_fn(n, n, |i, j| -tr_plus(i + 1, j + 1)),
        c: ExactMatrix::from_fn(n, n, |i, j| tr_minus(i + 1, j + 1)),
    })
}

/// `(tr(x_i y_j))_{i,j}`.
pub fn trace_gram(x: &[Mat2], y: &[Mat2]) -> ExactMatrix {
    ExactMatrix::from_fn(x.len(), y.len(), |i, j| x[i].mul(&y[j]).trace())
}

/// `D[i,j] = tr(m_i M_j^{eps_i})`.
pub fn build_thm2_d(m: &[Mat2], big_m: &[Mat2], eps: &SignVector) -> Result<ExactMatrix, Sl2Error> {
    if m.len() != big_m.len() {
        return Err(Sl2Error::LengthMismatch(m.len(), big_m.len()));
    }
    if eps.len() != m.len() {
        return Err(Sl2Error::LengthMismatch(eps.len(), m.len()));
    }
    check_all(m)?;
    check_all(big_m)?;
    let inv: Vec<Mat2> = big_m.iter().map(Mat2::inverse).collect::<Result<_, _>>()?;
    let n = m.len();
    Ok(ExactMatrix::from_fn(n, n, |i, j| {
        let rhs = match eps.0[i] {
            Sign::Plus => &big_m[j],
            Sign::Minus => &inv[j],
        };
        m[i].mul(rhs).trace()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gi(k: i64) -> GaussianRational {
        GaussianRational::from_int(k)
    }

    #[test]
    fn identity_is_neutral() {
        let x = random_sl2z(9, 3);
        assert_eq!(Mat2::identity().mul(&x), x);
        assert_eq!(x.mul(&Mat2::identity()), x);
    }

    #[test]
    fn product_of_unipotents() {
        let p = Mat2::t().mul(&Mat2::from_ints(1, 0, 1, 1));
        assert_eq!(p, Mat2::from_ints(2, 1, 1, 1));
    }

    #[test]
    fn determinant_is_multiplicative() {
        for seed in 0..20 {
            let x = random_sl2_gaussian(seed, 4);
            let y = Mat2::new(gi(2), GaussianRational::i(), gi(-1), gi(3));
            assert_eq!(x.mul(&y).det(), &x.det() * &y.det());
        }
    }

    #[test]
    fn inverses() {
        assert_eq!(Mat2::t().inverse().unwrap(), Mat2::from_ints(1, -1, 0, 1));
        assert_eq!(Mat2::identity().inverse().unwrap(), Mat2::identity());
        assert_eq!(Mat2::s().inverse().unwrap(), Mat2::from_ints(0, 1, -1, 0));
        let general = Mat2::from_ints(2, 0, 0, 3);
        assert_eq!(general.mul(&general.inverse().unwrap()), Mat2::identity());
        assert_eq!(Mat2::from_ints(1, 2, 2, 4).inverse(), Err(Sl2Error::Singular));
    }

    #[test]
    fn trace_relation_examples() {
        let (l, r) = trace_relation_check(&Mat2::t(), &Mat2::from_ints(1, 0, 1, 1)).unwrap();
        assert_eq!((l.clone(), r), (gi(1), gi(1)));
        let (l, r) = trace_relation_check(&Mat2::t(), &Mat2::s()).unwrap();
        assert_eq!(l, gi(-1));
        assert_eq!(r, gi(-1));
        let m = random_sl2z(12, 77);
        let (l, r) = trace_relation_check(&m, &Mat2::identity()).unwrap();
        assert_eq!(l, m.trace());
        assert_eq!(r, m.trace());
    }

    #[test]
    fn trace_relation_rejects_non_unimodular() {
        assert!(matches!(
            trace_relation_check(&Mat2::from_ints(2, 0, 0, 1), &Mat2::identity()),
            Err(Sl2Error::NotUnimodular(_))
        ));
    }

    #[test]
    fn empty_word_is_identity() {
        assert_eq!(random_sl2z(0, 5), Mat2::identity());
    }

    #[test]
    fn samplers_are_unimodular_and_reproducible() {
        for seed in 0..50 {
            let z = random_sl2z(12, seed);
            assert!(z.is_unimodular());
            assert!(z.e11.as_integer().is_some() && z.e22.as_integer().is_some());
            assert_eq!(z, random_sl2z(12, seed));
            let g = random_sl2_gaussian(seed, 5);
            assert!(g.is_unimodular());
            assert_eq!(g, random_sl2_gaussian(seed, 5));
        }
    }

    #[test]
    fn abc_construction() {
        let id = sl2_from_abc(gi(1), gi(0), gi(0)).unwrap();
        assert_eq!(id, Mat2::identity());
        let m = sl2_from_abc(GaussianRational::i(), gi(0), gi(0)).unwrap();
        assert_eq!(m.e22, -GaussianRational::i());
        assert!(m.is_unimodular());
        assert!(Mat2::sl2(gi(1), gi(1), gi(1), gi(1)).is_err());
    }

    #[test]
    fn magnus_all_identity() {
        let mm = build_magnus_matrices(&[Mat2::identity()], &[Mat2::identity()]).unwrap();
        assert_eq!(mm.a, ExactMatrix::from_int_rows(&[vec![2, 2], vec![2, 2]]));
        assert_eq!(mm.b, ExactMatrix::from_int_rows(&[vec![-2]]));
        assert_eq!(mm.c, ExactMatrix::from_int_rows(&[vec![2]]));
    }

    #[test]
    fn magnus_t_s_instance() {
        // hand computed: TS = [[1,-1],[1,0]], TS^-1 = [[-1,1],[-1,0]]
        let mm = build_magnus_matrices(&[Mat2::t()], &[Mat2::s()]).unwrap();
        assert_eq!(mm.a, ExactMatrix::from_int_rows(&[vec![2, 0], vec![2, -1]]));
        assert_eq!(mm.b, ExactMatrix::from_int_rows(&[vec![-1]]));
        assert_eq!(mm.c, ExactMatrix::from_int_rows(&[vec![-1]]));
        assert_eq!(mm.a.det().unwrap(), gi(-2));
    }

    #[test]
    fn magnus_rejects_bad_input() {
        assert!(matches!(build_magnus_matrices(&[Mat2::t()], &[]), Err(Sl2Error::LengthMismatch(1, 0))));
        assert!(build_magnus_matrices(&[Mat2::from_ints(1, 0, 0, 2)], &[Mat2::t()]).is_err());
    }

    #[test]
    fn thm2_small_cases() {
        let ids = vec![Mat2::identity(); 3];
        let d = build_thm2_d(&ids, &ids, &SignVector::from_mask(3, 0b101)).unwrap();
        assert_eq!(d, ExactMatrix::from_int_rows(&[vec![2; 3], vec![2; 3], vec![2; 3]]));
        assert!(d.det().unwrap().is_zero());
        let d1 = build_thm2_d(&[Mat2::t()], &[Mat2::s()], &SignVector::all_plus(1)).unwrap();
        assert_eq!(d1.get(0, 0), &Mat2::t().mul(&Mat2::s()).trace());
        assert!(build_thm2_d(&[Mat2::t()], &[Mat2::s()], &SignVector::all_plus(2)).is_err());
    }

    #[test]
    fn exact_det_and_kernel_basics() {
        let id = ExactMatrix::from_int_rows(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(id.det().unwrap(), gi(1));
        assert_eq!(id.left_kernel().unwrap(), None);
        let twos = ExactMatrix::from_int_rows(&[vec![2; 3], vec![2; 3], vec![2; 3]]);
        assert!(twos.det().unwrap().is_zero());
        let v = twos.left_kernel().unwrap().unwrap();
        assert_eq!(v, vec![gi(1), gi(-1), gi(0)]);
        assert!(twos.left_mul(&v).unwrap().iter().all(GaussianRational::is_zero));
    }

    #[test]
    fn exact_det_with_row_swap() {
        let m = ExactMatrix::from_int_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.det().unwrap(), gi(-1));
        let m3 = ExactMatrix::from_int_rows(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        assert_eq!(m3.det().unwrap(), gi(4));
    }

    #[test]
    fn kernel_skips_pivotless_columns() {
        // first column of M^t is zero
        let m = ExactMatrix::from_int_rows(&[vec![0, 0], vec![1, 3]]);
        let v = m.left_kernel().unwrap().unwrap();
        assert_eq!(v, vec![gi(1), gi(0)]);
    }

    #[test]
    fn non_square_det_rejected() {
        let m = ExactMatrix::from_int_rows(&[vec![1, 2, 3]]);
        assert!(matches!(m.det(), Err(Sl2Error::NonSquare { rows: 1, cols: 3 })));
    }

    #[test]
    fn json_entry_format() {
        let g = GaussianRational::from_parts(-3, 4, 1, 2);
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, r#"{"re_num":"-3","re_den":"4","im_num":"1","im_den":"2"}"#);
        let back: GaussianRational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
        let m = ExactMatrix::from_int_rows(&[vec![1, 2], vec![3, 4]]);
        let back: ExactMatrix = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn trial_streams_differ() {
        let mut a = trial_rng(42, 0);
        let mut b = trial_rng(42, 1);
        assert_ne!(a.gen::<u64>(), b.gen::<u64>());
        assert_eq!(trial_rng(42, 3).gen::<u64>(), trial_rng(42, 3).gen::<u64>());
    }
}
