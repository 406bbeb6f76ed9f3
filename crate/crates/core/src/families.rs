//! Constructors for the symbolic matrices `A`, `B`, `C` of the two
//! determinant identity families and their specialisations.
//!
//! The first family lives on labels `0..=n` (with `a[0,0] = 2` built in);
//! the second on labels `1..=n` for `A` and `2..=n` for `B` and `C`, with the
//! relation `a[i,1] = beta * a[1,i]` built into the first column of `A`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::matrix::PolyMatrix;
use crate::poly::{PolyVar, Polynomial};

fn a(i: usize, j: usize) -> Polynomial {
    Polynomial::entry(i, j)
}

/// `lambda * x * y`.
fn lambda_product(x: &Polynomial, y: &Polynomial) -> Polynomial {
    &(&Polynomial::lambda() * x) * y
}

/// The identity a check is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityId {
    Thm1,
    Thm3,
    Cor5,
    Cor6,
    Thm7,
    PfaffianSquare,
    Magnus,
    MagnusThm1,
    MagnusOriginal,
    Thm2,
    Trace,
}

impl IdentityId {
    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::Thm1 => "thm1",
            IdentityId::Thm3 => "thm3",
            IdentityId::Cor5 => "cor5",
            IdentityId::Cor6 => "cor6",
            IdentityId::Thm7 => "thm7",
            IdentityId::PfaffianSquare => "pfaffian-square",
            IdentityId::Magnus => "magnus",
            IdentityId::MagnusThm1 => "magnus-thm1",
            IdentityId::MagnusOriginal => "magnus-original",
            IdentityId::Thm2 => "thm2",
            IdentityId::Trace => "trace",
        }
    }

    /// Smallest admissible size for the symbolic families.
    pub fn min_n(self) -> usize {
        match self {
            IdentityId::Thm1 => 0,
            IdentityId::Cor5 | IdentityId::Cor6 | IdentityId::Thm7 | IdentityId::PfaffianSquare => 2,
            IdentityId::Thm2 => 1,
            _ => 1,
        }
    }

    /// Whether the family only makes sense for even `n`.
    pub fn needs_even(self) -> bool {
        matches!(self, IdentityId::Cor6 | IdentityId::Thm7 | IdentityId::PfaffianSquare)
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The three matrices of one identity instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityMatrices {
    pub a: PolyMatrix,
    pub b: PolyMatrix,
    pub c: PolyMatrix,
}

/// Test hook: replace `B[row, col]` by `lambda*a[row,0]*a[0,col] + a[row,col]`
/// in the first family, i.e. flip the sign of its plain term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignFlip {
    pub row: usize,
    pub col: usize,
}

pub fn build_thm1(n: usize) -> IdentityMatrices {
    build_thm1_with(n, None)
}

pub fn build_thm1_with(n: usize, flip: Option<SignFlip>) -> IdentityMatrices {
    let a_mat = PolyMatrix::square((0..=n).collect(), |i, j| {
        if i == 0 && j == 0 {
            Polynomial::constant(2)
        } else if i == 0 {
            &Polynomial::lambda() * &a(0, j)
        } else if j == 0 || (i + j) % 2 == 0 {
            a(i, j)
        } else {
            &lambda_product(&a(i, 0), &a(0, j)) - &a(i, j)
        }
    });
    let b_mat = PolyMatrix::square((1..=n).collect(), |i, j| {
        let twisted = lambda_product(&a(i, 0), &a(0, j));
        if flip == Some(SignFlip { row: i, col: j }) {
            &twisted + &a(i, j)
        } else {
            &twisted - &a(i, j)
        }
    });
    let c_mat = PolyMatrix::square((1..=n).collect(), a);
    IdentityMatrices {
        a: a_mat,
        b: b_mat,
        c: c_mat,
    }
}

/// How `beta` enters the second family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaMode {
    Symbolic,
    Value(i64),
}

impl BetaMode {
    fn poly(self) -> Polynomial {
        match self {
            BetaMode::Symbolic => Polynomial::beta(),
            BetaMode::Value(v) => Polynomial::constant(v),
        }
    }
}

/// The cell `a[i,j] - lambda*a[1,i]*a[1,j]` when `correct`, else `a[i,j]`.
fn thm3_cell(i: usize, j: usize, correct: bool) -> Polynomial {
    if correct {
        &a(i, j) - &lambda_product(&a(1, i), &a(1, j))
    } else {
        a(i, j)
    }
}

pub fn build_thm3(n: usize, beta: BetaMode) -> IdentityMatrices {
    assert!(n >= 1, "the second family needs n >= 1");
    let beta = beta.poly();
    let a_mat = PolyMatrix::square((1..=n).collect(), |i, j| {
        if i == 1 && j != 1 {
            &Polynomial::lambda() * &a(1, j)
        } else if j == 1 && i != 1 {
            &beta * &a(1, i)
        } else {
            a(i, j)
        }
    });
    let b_mat = PolyMatrix::square((2..=n).collect(), |i, j| thm3_cell(i, j, (i + j) % 2 == 0));
    let c_mat = PolyMatrix::square((2..=n).collect(), |i, j| thm3_cell(i, j, (i + j) % 2 == 1));
    IdentityMatrices {
        a: a_mat,
        b: b_mat,
        c: c_mat,
    }
}

/// The specialisations of the second family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Specialization {
    /// Symmetric entries, diagonal 2, `beta = 1`.
    Symmetric,
    /// Skew-symmetric entries, zero diagonal, `beta = -1`.
    Skew,
}

/// The substitution realising `kind` on every variable up to index `n`.
pub fn specialization_map(kind: Specialization, n: usize) -> BTreeMap<PolyVar, Polynomial> {
    let (beta, diag, sign) = match kind {
        Specialization::Symmetric => (1, 2, 1),
        Specialization::Skew => (-1, 0, -1),
    };
    let mut map = BTreeMap::from([(PolyVar::Beta, Polynomial::constant(beta))]);
    for i in 0..=n {
        map.insert(PolyVar::Entry(i, i), Polynomial::constant(diag));
        for j in 0..i {
            map.insert(PolyVar::Entry(i, j), a(j, i).scale(&sign.into()));
        }
    }
    map
}

/// Applies the specialisation to matrices built with symbolic `beta`.
/// `lambda` is left alone.
pub fn apply_specialization(m: &IdentityMatrices, kind: Specialization) -> IdentityMatrices {
    let n = m
        .a
        .row_labels()
        .iter()
        .chain(m.a.col_labels())
        .copied()
        .max()
        .unwrap_or(0);
    let map = specialization_map(kind, n);
    IdentityMatrices {
        a: m.a.substitute(&map),
        b: m.b.substitute(&map),
        c: m.c.substitute(&map),
    }
}

/// `lambda -> value`.
pub fn fix_lambda(m: &IdentityMatrices, value: i64) -> IdentityMatrices {
    let map = BTreeMap::from([(PolyVar::Lambda, Polynomial::constant(value))]);
    IdentityMatrices {
        a: m.a.substitute(&map),
        b: m.b.substitute(&map),
        c: m.c.substitute(&map),
    }
}
