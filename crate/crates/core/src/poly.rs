//! Sparse multivariate polynomials over arbitrary-precision integers.
//!
//! The indeterminates are the doubly indexed entries `a[i,j]` together with
//! the two parameters `lambda` and `beta`. Polynomials are kept in canonical
//! form at all times (no zero coefficients, no zero exponents), so ring
//! equality is plain structural equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// An indeterminate. The derived order is `Lambda < Beta < Entry(i, j)`,
/// with entries compared lexicographically by `(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PolyVar {
    Lambda,
    Beta,
    Entry(usize, usize),
}

impl fmt::Display for PolyVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyVar::Lambda => f.write_str("lambda"),
            PolyVar::Beta => f.write_str("beta"),
            PolyVar::Entry(i, j) => write!(f, "a[{i},{j}]"),
        }
    }
}

/// A power product of variables, stored as `(var, exponent)` pairs sorted
/// by variable with every exponent positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(PolyVar, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: PolyVar) -> Self {
        Self::pow(v, 1)
    }

    pub fn pow(v: PolyVar, e: u32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Self { factors: vec![(v, e)] }
        }
    }

    /// Builds a monomial from arbitrary `(var, exp)` pairs, merging repeats
    /// and dropping zero exponents.
    pub fn from_factors<I: IntoIterator<Item = (PolyVar, u32)>>(factors: I) -> Self {
        let mut map: BTreeMap<PolyVar, u32> = BTreeMap::new();
        for (v, e) in factors {
            *map.entry(v).or_insert(0) += e;
        }
        Self {
            factors: map.into_iter().filter(|&(_, e)| e > 0).collect(),
        }
    }

    pub fn factors(&self) -> &[(PolyVar, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: PolyVar) -> u32 {
        self.factors
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|idx| self.factors[idx].1)
            .unwrap_or(0)
    }

    /// The monomial with `v` removed, together with the exponent it had.
    pub fn split_off(&self, v: PolyVar) -> (Monomial, u32) {
        let mut rest = Vec::with_capacity(self.factors.len());
        let mut exp = 0;
        for &(w, e) in &self.factors {
            if w == v {
                exp = e;
            } else {
                rest.push((w, e));
            }
        }
        (Monomial { factors: rest }, exp)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { factors: out }
    }

    pub fn vars(&self) -> impl Iterator<Item = PolyVar> + '_ {
        self.factors.iter().map(|&(v, _)| v)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then exponent vectors read
    /// in increasing variable order, larger exponent of an earlier variable
    /// winning.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match self.degree().cmp(&other.degree()) {
            Equal => {}
            ord => return ord,
        }
        for (&(va, ea), &(vb, eb)) in self.factors.iter().zip(&other.factors) {
            match va.cmp(&vb) {
                // self has a positive exponent where other has zero
                Less => return Greater,
                Greater => return Less,
                Equal => match ea.cmp(&eb) {
                    Equal => continue,
                    ord => return ord,
                },
            }
        }
        self.factors.len().cmp(&other.factors.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in canonical form: a map from monomials to nonzero
/// coefficients. The zero polynomial has no terms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term<T: Into<BigInt>>(c: T, m: Monomial) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn var(v: PolyVar) -> Self {
        Self::term(1, Monomial::var(v))
    }

    /// The indeterminate `a[i,j]`.
    pub fn entry(i: usize, j: usize) -> Self {
        Self::var(PolyVar::Entry(i, j))
    }

    pub fn lambda() -> Self {
        Self::var(PolyVar::Lambda)
    }

    pub fn beta() -> Self {
        Self::var(PolyVar::Beta)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The constant coefficient, if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn degree_in(&self, v: PolyVar) -> Option<u32> {
        self.terms.keys().map(|m| m.exponent(v)).max()
    }

    /// Every variable occurring with a nonzero coefficient.
    pub fn variables(&self) -> std::collections::BTreeSet<PolyVar> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Simultaneous substitution of variables by polynomials. Variables not
    /// in `map` are left in place.
    pub fn substitute(&self, map: &BTreeMap<PolyVar, Polynomial>) -> Polynomial {
        let mut powers: BTreeMap<(PolyVar, u32), Polynomial> = BTreeMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut value = Polynomial::constant(c.clone());
            for &(v, e) in m.factors() {
                match map.get(&v) {
                    Some(image) => {
                        let p = powers.entry((v, e)).or_insert_with(|| image.pow(e));
                        value = &value * &*p;
                    }
                    None => kept.push((v, e)),
                }
                if value.is_zero() {
                    break;
                }
            }
            if value.is_zero() {
                continue;
            }
            let kept = Monomial { factors: kept };
            for (vm, vc) in value.terms {
                out.add_term(vm.mul(&kept), vc);
            }
        }
        out
    }

    /// The coefficient of `v^k` when the polynomial is viewed as a
    /// polynomial in `v` over the remaining variables.
    pub fn coeff_in_var(&self, v: PolyVar, k: u32) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let (rest, e) = m.split_off(v);
            if e == k {
                out.add_term(rest, c.clone());
            }
        }
        out
    }
}

impl From<i64> for Polynomial {
    fn from(c: i64) -> Self {
        Polynomial::constant(c)
    }
}

impl From<PolyVar> for Polynomial {
    fn from(v: PolyVar) -> Self {
        Polynomial::var(v)
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        if self.terms.len() < rhs.terms.len() {
            return rhs + self;
        }
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(mut self) -> Polynomial {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        // accumulate in a hash map; the BTreeMap is built once at the end
        let mut acc: std::collections::HashMap<Monomial, BigInt> =
            std::collections::HashMap::with_capacity(self.len() * rhs.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_default() += ca * cb;
            }
        }
        Polynomial {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl std::iter::Sum for Polynomial {
    fn sum<I: Iterator<Item = Polynomial>>(iter: I) -> Self {
        iter.fold(Polynomial::zero(), |acc, p| acc + p)
    }
}

impl std::iter::Product for Polynomial {
    fn product<I: Iterator<Item = Polynomial>>(iter: I) -> Self {
        iter.fold(Polynomial::one(), |acc, p| &acc * &p)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    for &(v, e) in m.factors() {
        write!(f, "*{v}")?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Canonical text: terms in descending monomial order, every coefficient
/// written out, factors joined by `*`, e.g.
/// `-1*lambda*a[0,1]*a[1,0] + 2*a[1,1]`. Later negative terms are written
/// with ` - ` and the absolute value of the coefficient.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            if idx == 0 {
                write!(f, "{c}")?;
            } else if c.is_negative() {
                write!(f, " - {}", c.abs())?;
            } else {
                write!(f, " + {c}")?;
            }
            write_monomial(f, m)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParsePolyError {
    #[error("empty polynomial text")]
    Empty,
    #[error("malformed term `{0}`")]
    BadTerm(String),
    #[error("malformed factor `{0}`")]
    BadFactor(String),
}

fn parse_var(s: &str) -> Result<PolyVar, ParsePolyError> {
    match s {
        "lambda" => Ok(PolyVar::Lambda),
        "beta" => Ok(PolyVar::Beta),
        _ => {
            let inner = s
                .strip_prefix("a[")
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| ParsePolyError::BadFactor(s.to_string()))?;
            let (i, j) = inner
                .split_once(',')
                .ok_or_else(|| ParsePolyError::BadFactor(s.to_string()))?;
            let i = i.trim().parse().map_err(|_| ParsePolyError::BadFactor(s.to_string()))?;
            let j = j.trim().parse().map_err(|_| ParsePolyError::BadFactor(s.to_string()))?;
            Ok(PolyVar::Entry(i, j))
        }
    }
}

fn parse_term(body: &str, negate: bool) -> Result<(Monomial, BigInt), ParsePolyError> {
    let mut coeff = BigInt::one();
    let mut factors = Vec::new();
    for (idx, raw) in body.split('*').enumerate() {
        let piece = raw.trim();
        if piece.is_empty() {
            return Err(ParsePolyError::BadTerm(body.to_string()));
        }
        if idx == 0 {
            if let Ok(c) = piece.parse::<BigInt>() {
                coeff = c;
                continue;
            }
        }
        let (name, exp) = match piece.split_once('^') {
            Some((name, e)) => (
                name,
                e.parse::<u32>().map_err(|_| ParsePolyError::BadFactor(piece.to_string()))?,
            ),
            None => (piece, 1),
        };
        factors.push((parse_var(name)?, exp));
    }
    if negate {
        coeff = -coeff;
    }
    Ok((Monomial::from_factors(factors), coeff))
}

/// Accepts the canonical text and any reordering of it; ` - ` separators,
/// `+ -c` forms and omitted unit coefficients are tolerated.
impl FromStr for Polynomial {
    type Err = ParsePolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParsePolyError::Empty);
        }
        let mut out = Polynomial::zero();
        let mut rest = s;
        let mut negate = false;
        loop {
            // a binary operator is an ASCII sign with whitespace on both sides
            let split = rest
                .char_indices()
                .skip(1)
                .find(|&(i, ch)| {
                    (ch == '+' || ch == '-')
                        && rest[..i].ends_with(' ')
                        && rest[i + 1..].starts_with(' ')
                })
                .map(|(i, ch)| (i, ch == '-'));
            let (body, next) = match split {
                Some((i, neg)) => (&rest[..i], Some((&rest[i + 1..], neg))),
                None => (rest, None),
            };
            let (m, c) = parse_term(body.trim(), negate)?;
            out.add_term(m, c);
            match next {
                Some((r, neg)) => {
                    rest = r.trim_start();
                    negate = neg;
                }
                None => break,
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(i: usize, j: usize) -> Polynomial {
        Polynomial::entry(i, j)
    }

    #[test]
    fn additive_inverse_cancels() {
        assert!((&a(1, 2) + &(-&a(1, 2))).is_zero());
    }

    #[test]
    fn zero_is_additive_identity() {
        let p = &(&a(1, 0) * &Polynomial::lambda()) - &a(3, 3);
        assert_eq!(&Polynomial::zero() + &p, p);
    }

    #[test]
    fn like_terms_merge() {
        let p = &a(1, 1).scale(&2.into()) + &a(1, 1).scale(&3.into());
        assert_eq!(p, a(1, 1).scale(&5.into()));
    }

    #[test]
    fn difference_of_squares() {
        let lhs = &(&a(1, 0) + &a(0, 1)) * &(&a(1, 0) - &a(0, 1));
        let rhs = &a(1, 0).pow(2) - &a(0, 1).pow(2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiply_by_zero() {
        assert!((&a(2, 2) * &Polynomial::zero()).is_zero());
    }

    #[test]
    fn exponents_add() {
        let l = Polynomial::lambda();
        let p = &l * &(&l * &a(1, 1));
        assert_eq!(
            p,
            Polynomial::term(1, Monomial::from_factors([(PolyVar::Lambda, 2), (PolyVar::Entry(1, 1), 1)]))
        );
    }

    #[test]
    fn substitute_lambda_by_one() {
        let p = &(&(&Polynomial::lambda() * &a(1, 0)) * &a(0, 1)) - &a(1, 1);
        let map = BTreeMap::from([(PolyVar::Lambda, Polynomial::one())]);
        assert_eq!(p.substitute(&map), &(&a(1, 0) * &a(0, 1)) - &a(1, 1));
    }

    #[test]
    fn substitute_entry_by_beta_multiple() {
        let map = BTreeMap::from([(PolyVar::Entry(2, 1), &Polynomial::beta() * &a(1, 2))]);
        assert_eq!(a(2, 1).substitute(&map), &Polynomial::beta() * &a(1, 2));
    }

    #[test]
    fn substitute_collapses_specialised_rhs() {
        let p = &a(1, 1) - &Polynomial::beta().scale(&2.into());
        let map = BTreeMap::from([
            (PolyVar::Entry(1, 1), Polynomial::constant(2)),
            (PolyVar::Beta, Polynomial::one()),
        ]);
        assert!(p.substitute(&map).is_zero());
    }

    #[test]
    fn substitution_is_simultaneous() {
        // swapping two variables must not chain
        let p = &a(1, 2) - &a(2, 1).scale(&3.into());
        let map = BTreeMap::from([(PolyVar::Entry(1, 2), a(2, 1)), (PolyVar::Entry(2, 1), a(1, 2))]);
        assert_eq!(p.substitute(&map), &a(2, 1) - &a(1, 2).scale(&3.into()));
    }

    #[test]
    fn coefficient_extraction() {
        let l = Polynomial::lambda();
        let p = &(&(&l.pow(2) * &a(1, 1)) + &(&l * &a(1, 2))) + &a(1, 3);
        assert_eq!(p.coeff_in_var(PolyVar::Lambda, 1), a(1, 2));
        assert_eq!(a(1, 1).coeff_in_var(PolyVar::Lambda, 0), a(1, 1));
        assert!((&l * &a(1, 2)).coeff_in_var(PolyVar::Lambda, 3).is_zero());
    }

    #[test]
    fn var_order() {
        assert!(PolyVar::Lambda < PolyVar::Beta);
        assert!(PolyVar::Beta < PolyVar::Entry(0, 0));
        assert!(PolyVar::Entry(0, 5) < PolyVar::Entry(1, 0));
        assert!(PolyVar::Entry(1, 2) < PolyVar::Entry(1, 3));
    }

    #[test]
    fn graded_order_puts_degree_first() {
        let big = Monomial::from_factors([(PolyVar::Entry(5, 5), 2)]);
        let small = Monomial::from_factors([(PolyVar::Lambda, 1)]);
        assert!(big > small);
        let la = Monomial::from_factors([(PolyVar::Lambda, 1), (PolyVar::Entry(3, 3), 1)]);
        let aa = Monomial::from_factors([(PolyVar::Entry(0, 1), 1), (PolyVar::Entry(1, 0), 1)]);
        assert!(la > aa);
    }

    #[test]
    fn canonical_rendering() {
        let p = &a(1, 1).scale(&2.into()) - &(&(&Polynomial::lambda() * &a(0, 1)) * &a(1, 0));
        assert_eq!(p.to_string(), "-1*lambda*a[0,1]*a[1,0] + 2*a[1,1]");
        assert_eq!(Polynomial::zero().to_string(), "0");
        assert_eq!(Polynomial::constant(-7).to_string(), "-7");
        let q = &(&a(1, 2).pow(2) * &Polynomial::lambda()) - &a(2, 2);
        assert_eq!(q.to_string(), "1*lambda*a[1,2]^2 - 1*a[2,2]");
    }

    #[test]
    fn parse_accepts_variants() {
        let p: Polynomial = "-1*lambda*a[0,1]*a[1,0] + 2*a[1,1]".parse().unwrap();
        let q: Polynomial = "2*a[1,1] + -1*a[1,0]*lambda*a[0,1]".parse().unwrap();
        let r: Polynomial = "2*a[1,1] - lambda*a[0,1]*a[1,0]".parse().unwrap();
        assert_eq!(p, q);
        assert_eq!(p, r);
        assert_eq!("0".parse::<Polynomial>().unwrap(), Polynomial::zero());
        assert_eq!("a[2,3]^2".parse::<Polynomial>().unwrap(), a(2, 3).pow(2));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert_eq!("".parse::<Polynomial>(), Err(ParsePolyError::Empty));
        assert!("2*x".parse::<Polynomial>().is_err());
        assert!("a[1]".parse::<Polynomial>().is_err());
        assert!("2**a[1,1]".parse::<Polynomial>().is_err());
    }
}
