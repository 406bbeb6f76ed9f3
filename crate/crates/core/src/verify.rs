//! Identity checks. Each check builds its matrices, forms the residual
//! (left side minus right side) and reports whether it vanishes. Failing
//! reports carry a witness from which the failure can be reproduced.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::families::{
    apply_specialization, build_thm1_with, build_thm3, fix_lambda, BetaMode, IdentityId, IdentityMatrices, SignFlip,
    Specialization,
};
use crate::matrix::{MatrixError, PolyMatrix, SizeBounds};
use crate::poly::Polynomial;
use crate::sl2::{
    build_magnus_matrices, build_thm2_d, trace_gram, trace_relation_check, trial_rng, ExactMatrix, GaussianRational,
    Generator, Mat2, SignVector, Sl2Error,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Sl2(#[from] Sl2Error),
    #[error("{identity} needs an even size, got n = {n}")]
    OddSizeForSkew { identity: IdentityId, n: usize },
    #[error("{identity} is not defined for n = {n}")]
    InvalidSize { identity: IdentityId, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Parameters that, together with the identity and `n`, reproduce a report.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReportParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<Generator>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_mode: Option<EpsMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub specialization: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_checked: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutation: Option<SignFlip>,
    /// Informational values that are reported but not asserted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub identity: IdentityId,
    pub n: usize,
    pub params: ReportParams,
    pub status: Status,
    /// Canonical text of a nonzero residual.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    pub millis: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// How sign vectors are chosen for the vanishing check on `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EpsMode {
    Random,
    Exhaustive,
}

/// Which reading of the generalised Magnus identity to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MagnusForm {
    /// `det A = (-1)^n det B + det C` with `B = (-tr(m_i M_j))`, as stated.
    Stated,
    /// `det A = (-1)^n det(tr(m_i M_j)) + det C`, the form obtained from the
    /// first determinant family with `a[i,j] = tr(m_i M_j^-1)`.
    FromThm1,
}

impl MagnusForm {
    fn identity(self) -> IdentityId {
        match self {
            MagnusForm::Stated => IdentityId::Magnus,
            MagnusForm::FromThm1 => IdentityId::MagnusThm1,
        }
    }
}

/// Runs the checks with a set of size bounds. When `cross_check` is on and
/// every matrix fits the permutation oracle, residuals are also formed with
/// the oracle and the two must agree.
#[derive(Debug, Clone, Copy)]
pub struct Verifier {
    pub bounds: SizeBounds,
    pub cross_check: bool,
}

impl Default for Verifier {
    fn default() -> Self {
        Self {
            bounds: SizeBounds::default(),
            cross_check: true,
        }
    }
}

/// A residual from `det_dp`, plus the oracle's residual when it differs.
struct Residual {
    value: Polynomial,
    cross_checked: bool,
    oracle_mismatch: Option<Polynomial>,
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

fn sign(n: usize) -> BigInt {
    if n % 2 == 0 {
        BigInt::from(1)
    } else {
        BigInt::from(-1)
    }
}

fn matrices_witness(m: &IdentityMatrices) -> serde_json::Value {
    serde_json::json!({
        "a": m.a.to_string(),
        "b": m.b.to_string(),
        "c": m.c.to_string(),
    })
}

impl Verifier {
    /// Forms a residual with `det_dp` and, if enabled and in range, again
    /// with the permutation oracle.
    fn residual<F>(&self, mats: &[&PolyMatrix], combine: F) -> Result<Residual, VerifyError>
    where
        F: Fn(&dyn Fn(&PolyMatrix) -> Result<Polynomial, MatrixError>) -> Result<Polynomial, VerifyError>,
    {
        let value = combine(&|m: &PolyMatrix| self.bounds.det_dp(m))?;
        let oracle_fits = mats.iter().all(|m| m.nrows() <= self.bounds.perm_oracle);
        if !(self.cross_check && oracle_fits) {
            return Ok(Residual {
                value,
                cross_checked: false,
                oracle_mismatch: None,
            });
        }
        let oracle = combine(&|m: &PolyMatrix| self.bounds.det_perm_oracle(m))?;
        let oracle_mismatch = (oracle != value).then_some(oracle);
        Ok(Residual {
            value,
            cross_checked: true,
            oracle_mismatch,
        })
    }

    fn finish(
        identity: IdentityId,
        n: usize,
        mut params: ReportParams,
        residual: Residual,
        witness: impl FnOnce() -> serde_json::Value,
        start: Instant,
    ) -> VerificationReport {
        params.cross_checked = Some(residual.cross_checked);
        let pass = residual.value.is_zero() && residual.oracle_mismatch.is_none();
        let witness = (!pass).then(|| {
            let mut w = witness();
            if let (Some(oracle), Some(obj)) = (&residual.oracle_mismatch, w.as_object_mut()) {
                obj.insert("oracle_residual".into(), oracle.to_string().into());
            }
            w
        });
        VerificationReport {
            identity,
            n,
            params,
            status: if pass { Status::Pass } else { Status::Fail },
            residual: (!pass).then(|| residual.value.to_string()),
            witness,
            millis: elapsed_ms(start),
        }
    }

    /// `det A - (-1)^n det B - det C` for the first family.
    pub fn verify_thm1(&self, n: usize) -> Result<VerificationReport, VerifyError> {
        self.verify_thm1_mutated(n, None)
    }

    pub fn verify_thm1_mutated(&self, n: usize, flip: Option<SignFlip>) -> Result<VerificationReport, VerifyError> {
        let start = Instant::now();
        let m = build_thm1_with(n, flip);
        let sgn = sign(n);
        let residual = self.residual(&[&m.a, &m.b, &m.c], |det| {
            let da = det(&m.a)?;
            let db = det(&m.b)?;
            let dc = det(&m.c)?;
            Ok(&(&da - &db.scale(&sgn)) - &dc)
        })?;
        let params = ReportParams {
            mutation: flip,
            ..Default::default()
        };
        Ok(Self::finish(IdentityId::Thm1, n, params, residual, || matrices_witness(&m), start))
    }

    /// The second family and its specialisations: `Thm3`, `Cor5`, `Cor6`,
    /// `Thm7`.
    pub fn verify_thm3_family(&self, n: usize, which: IdentityId) -> Result<VerificationReport, VerifyError> {
        let start = Instant::now();
        if n < which.min_n() || !matches!(which, IdentityId::Thm3 | IdentityId::Cor5 | IdentityId::Cor6 | IdentityId::Thm7) {
            return Err(VerifyError::InvalidSize { identity: which, n });
        }
        if which.needs_even() && n % 2 == 1 {
            return Err(VerifyError::OddSizeForSkew { identity: which, n });
        }
        let generic = build_thm3(n, BetaMode::Symbolic);
        let mut params = ReportParams::default();
        let (mats, residual) = match which {
            IdentityId::Thm3 => {
                let m = generic;
                let tail = m.a.submatrix_delete(&BTreeSet::from([1]), &BTreeSet::from([1]))?;
                let factor = &Polynomial::entry(1, 1) - &Polynomial::beta().scale(&2.into());
                let res = self.residual(&[&m.a, &m.b, &m.c, &tail], |det| {
                    let lhs = &det(&m.a)? - &(&Polynomial::beta() * &(&det(&m.b)? + &det(&m.c)?));
                    Ok(&lhs - &(&factor * &det(&tail)?))
                })?;
                (m, res)
            }
            IdentityId::Cor5 => {
                params.specialization = Some("symmetric, diagonal 2, beta=1".into());
                let m = apply_specialization(&generic, Specialization::Symmetric);
                let res = self.residual(&[&m.a, &m.b, &m.c], |det| {
                    Ok(&(&det(&m.a)? - &det(&m.b)?) - &det(&m.c)?)
                })?;
                (m, res)
            }
            IdentityId::Cor6 => {
                params.specialization = Some("skew, beta=-1".into());
                let m = apply_specialization(&generic, Specialization::Skew);
                let res = self.residual(&[&m.a, &m.b, &m.c], |det| {
                    Ok(&(&det(&m.a)? + &det(&m.b)?) + &det(&m.c)?)
                })?;
                (m, res)
            }
            IdentityId::Thm7 => {
                params.specialization = Some("skew, beta=-1, lambda=1".into());
                let m = fix_lambda(&apply_specialization(&generic, Specialization::Skew), 1);
                let (pf_e, pf_o) = self.bounds.pfaffian_split(&m.a)?;
                let product = (&pf_e * &pf_o).scale(&2.into());
                let res = self.residual(&[&m.c], |det| Ok(&det(&m.c)? + &product))?;
                (m, res)
            }
            _ => unreachable!(),
        };
        Ok(Self::finish(which, n, params, residual, || matrices_witness(&mats), start))
    }

    /// `Pf(A)^2 - det A` and `Pf - Pf_e - Pf_o` for the generic skew matrix
    /// on `1..=n`.
    pub fn verify_pfaffian_square(&self, n: usize) -> Result<VerificationReport, VerifyError> {
        let start = Instant::now();
        if n % 2 == 1 {
            return Err(VerifyError::OddSizeForSkew {
                identity: IdentityId::PfaffianSquare,
                n,
            });
        }
        let m = generic_skew(n);
        let pf = self.bounds.pfaffian(&m)?;
        let (pf_e, pf_o) = self.bounds.pfaffian_split(&m)?;
        let det = self.bounds.det_dp(&m)?;
        let split_gap = &(&pf - &pf_e) - &pf_o;
        let residual = Residual {
            value: &(&pf.pow(2) - &det) + &split_gap,
            cross_checked: false,
            oracle_mismatch: None,
        };
        let params = ReportParams::default();
        Ok(Self::finish(
            IdentityId::PfaffianSquare,
            n,
            params,
            residual,
            || serde_json::json!({ "matrix": m.to_string(), "split_gap": split_gap.to_string() }),
            start,
        ))
    }

    /// Numeric check of the generalised Magnus identity over seeded trials,
    /// together with its vanishing clauses: `det A = 0` for `n >= 4` and
    /// `det B = det C = 0` for `n >= 5`.
    pub fn verify_magnus_numeric(
        &self,
        n: usize,
        trials: usize,
        master_seed: u64,
        generator: Generator,
        form: MagnusForm,
    ) -> Result<VerificationReport, VerifyError> {
        let start = Instant::now();
        if n == 0 {
            return Err(VerifyError::InvalidSize {
                identity: form.identity(),
                n,
            });
        }
        let outcomes: Vec<Result<Option<serde_json::Value>, VerifyError>> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(master_seed, t as u64);
                let m: Vec<Mat2> = (0..n).map(|_| generator.sample(&mut rng)).collect();
                let big_m: Vec<Mat2> = (0..n).map(|_| generator.sample(&mut rng)).collect();
                let mats = build_magnus_matrices(&m, &big_m)?;
                let det_a = mats.a.det()?;
                let det_b = mats.b.det()?;
                let det_c = mats.c.det()?;
                let parity = if n % 2 == 0 { GaussianRational::one() } else { -GaussianRational::one() };
                let rhs = match form {
                    MagnusForm::Stated => &(&parity * &det_b) + &det_c,
                    MagnusForm::FromThm1 => {
                        let plus_b = ExactMatrix::from_fn(n, n, |i, j| -mats.b.get(i, j));
                        &(&parity * &plus_b.det()?) + &det_c
                    }
                };
                let mut failures = Vec::new();
                if det_a != rhs {
                    failures.push(format!("det A = {det_a} but right side = {rhs}"));
                }
                if n >= 4 && !det_a.is_zero() {
                    failures.push(format!("det A = {det_a}, expected 0"));
                }
                if n >= 5 && !(det_b.is_zero() && det_c.is_zero()) {
                    failures.push(format!("det B = {det_b}, det C = {det_c}, expected 0"));
                }
                if failures.is_empty() {
                    return Ok(None);
                }
                Ok(Some(serde_json::json!({
                    "trial": t,
                    "failures": failures,
                    "m": m,
                    "big_m": big_m,
                    "a": mats.a,
                    "b": mats.b,
                    "c": mats.c,
                })))
            })
            .collect();
        let params = ReportParams {
            trials: Some(trials),
            master_seed: Some(master_seed),
            generator: Some(generator),
            ..Default::default()
        };
        collect_numeric(form.identity(), n, params, outcomes, start)
    }

    /// The two four-by-four identities
    /// `det(tr m_i M_j) + det(tr m_i M_j^-1) = 0` and
    /// `det(tr m_i m_j) det(tr M_i M_j) = det(tr m_i M_j)^2`.
    pub fn verify_magnus_original(&self, trials: usize, master_seed: u64, generator: Generator) -> Result<VerificationReport, VerifyError> {
        let start = Instant::now();
        let outcomes: Vec<Result<Option<serde_json::Value>, VerifyError>> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(master_seed, t as u64);
                let m: Vec<Mat2> = (0..4).map(|_| generator.sample(&mut rng)).collect();
                let big_m: Vec<Mat2> = (0..4).map(|_| generator.sample(&mut rng)).collect();
                let big_m_inv: Vec<Mat2> = big_m.iter().map(Mat2::inverse).collect::<Result<_, _>>()?;
                let mixed = trace_gram(&m, &big_m).det()?;
                let mixed_inv = trace_gram(&m, &big_m_inv).det()?;
                let small = trace_gram(&m, &m).det()?;
                let large = trace_gram(&big_m, &big_m).det()?;
                let mut failures = Vec::new();
                if !(&mixed + &mixed_inv).is_zero() {
                    failures.push(format!("det(tr m_i M_j) + det(tr m_i M_j^-1) = {}", &mixed + &mixed_inv));
                }
                if &small * &large != &mixed * &mixed {
                    failures.push(format!("{} * {} != ({})^2", small, large, mixed));
                }
                if failures.is_empty() {
                    return Ok(None);
                }
                Ok(Some(serde_json::json!({ "trial": t, "failures": failures, "m": m, "big_m": big_m })))
            })
            .collect();
        let params = ReportParams {
            trials: Some(trials),
            master_seed: Some(master_seed),
            generator: Some(generator),
            ..Default::default()
        };
        collect_numeric(IdentityId::MagnusOriginal, 4, params, outcomes, start)
    }

    /// `det D = 0` for `D[i,j] = tr(m_i M_j^{eps_i})`, each zero backed by a
    /// left kernel vector checked by multiplication. Below `n = 5` nothing
    /// is asserted; the determinant of the first instance is reported.
    pub fn verify_thm2(
        &self,
        n: usize,
        trials: usize,
        master_seed: u64,
        eps_mode: EpsMode,
        generator: Generator,
    ) -> Result<VerificationReport, VerifyError> {
        let start = Instant::now();
        if n == 0 {
            return Err(VerifyError::InvalidSize {
                identity: IdentityId::Thm2,
                n,
            });
        }
        let asserting = n >= 5;
        let jobs: Vec<(u64, Option<u64>)> = match eps_mode {
            EpsMode::Random => (0..trials as u64).map(|t| (t, None)).collect(),
            EpsMode::Exhaustive => (0..1u64 << n).map(|mask| (0, Some(mask))).collect(),
        };
        let run = |&(t, mask): &(u64, Option<u64>)| -> Result<(GaussianRational, Option<serde_json::Value>), VerifyError> {
            let mut rng = trial_rng(master_seed, t);
            let m: Vec<Mat2> = (0..n).map(|_| generator.sample(&mut rng)).collect();
            let big_m: Vec<Mat2> = (0..n).map(|_| generator.sample(&mut rng)).collect();
            let eps = match mask {
                Some(mask) => SignVector::from_mask(n, mask),
                None => SignVector::random(n, &mut rng),
            };
            let d = build_thm2_d(&m, &big_m, &eps)?;
            let det = d.det()?;
            if !asserting {
                return Ok((det, None));
            }
            let mut failures = Vec::new();
            if !det.is_zero() {
                failures.push(format!("det D = {det}"));
            }
            match d.left_kernel()? {
                Some(v) if d.left_mul(&v)?.iter().all(GaussianRational::is_zero) => {}
                Some(_) => failures.push("left kernel vector does not annihilate D".to_string()),
                None => failures.push("D has no left kernel".to_string()),
            }
            if failures.is_empty() {
                return Ok((det, None));
            }
            Ok((
                det,
                Some(serde_json::json!({ "trial": t, "eps": eps, "failures": failures, "m": m, "big_m": big_m, "d": d })),
            ))
        };
        let outcomes: Vec<_> = jobs.par_iter().map(run).collect::<Result<Vec<_>, _>>()?;
        let mut params = ReportParams {
            trials: Some(jobs.len()),
            master_seed: Some(master_seed),
            generator: Some(generator),
            eps_mode: Some(eps_mode),
            ..Default::default()
        };
        if !asserting {
            params.observed = outcomes.first().map(|(det, _)| format!("det D = {det}"));
        }
        let witness = outcomes.into_iter().find_map(|(_, w)| w);
        Ok(VerificationReport {
            identity: IdentityId::Thm2,
            n,
            params,
            status: if witness.is_none() { Status::Pass } else { Status::Fail },
            residual: None,
            witness,
            millis: elapsed_ms(start),
        })
    }

    /// `tr(m M^-1) = tr(m) tr(M) - tr(m M)` over seeded pairs.
    pub fn verify_trace_relation(&self, trials: usize, master_seed: u64, generator: Generator) -> Result<VerificationReport, VerifyError> {
        let start = Instant::now();
        let outcomes: Vec<Result<Option<serde_json::Value>, VerifyError>> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(master_seed, t as u64);
                let m = generator.sample(&mut rng);
                let big_m = generator.sample(&mut rng);
                let (lhs, rhs) = trace_relation_check(&m, &big_m)?;
                Ok((lhs != rhs).then(|| {
                    serde_json::json!({ "trial": t, "m": m, "big_m": big_m, "lhs": lhs, "rhs": rhs })
                }))
            })
            .collect();
        let params = ReportParams {
            trials: Some(trials),
            master_seed: Some(master_seed),
            generator: Some(generator),
            ..Default::default()
        };
        collect_numeric(IdentityId::Trace, 2, params, outcomes, start)
    }
}

fn collect_numeric(
    identity: IdentityId,
    n: usize,
    params: ReportParams,
    outcomes: Vec<Result<Option<serde_json::Value>, VerifyError>>,
    start: Instant,
) -> Result<VerificationReport, VerifyError> {
    let mut witness = None;
    for outcome in outcomes {
        if let Some(w) = outcome? {
            witness.get_or_insert(w);
        }
    }
    Ok(VerificationReport {
        identity,
        n,
        params,
        status: if witness.is_none() { Status::Pass } else { Status::Fail },
        residual: None,
        witness,
        millis: elapsed_ms(start),
    })
}

/// The skew matrix on `1..=n` with `a[i,j]` above the diagonal.
pub fn generic_skew(n: usize) -> PolyMatrix {
    PolyMatrix::square((1..=n).collect(), |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => Polynomial::entry(i, j),
        std::cmp::Ordering::Equal => Polynomial::zero(),
        std::cmp::Ordering::Greater => -Polynomial::entry(j, i),
    })
}

pub fn verify_thm1(n: usize) -> Result<VerificationReport, VerifyError> {
    Verifier::default().verify_thm1(n)
}

pub fn verify_thm3_family(n: usize, which: IdentityId) -> Result<VerificationReport, VerifyError> {
    Verifier::default().verify_thm3_family(n, which)
}

/// Which checks a sweep runs and with what parameters.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub max_n: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub generators: Vec<Generator>,
    pub eps_mode: EpsMode,
    pub magnus_forms: Vec<MagnusForm>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            max_n: 6,
            trials: 100,
            master_seed: 0,
            generators: vec![Generator::sl2z(), Generator::gaussian()],
            eps_mode: EpsMode::Random,
            magnus_forms: vec![MagnusForm::Stated, MagnusForm::FromThm1],
        }
    }
}

/// Every check, ordered by identity and then `n`, with the generalised
/// Magnus identity checked in each form listed in the config.
pub fn run_suite(verifier: &Verifier, cfg: &SuiteConfig) -> Result<Vec<VerificationReport>, VerifyError> {
    let mut out = Vec::new();
    for n in 0..=cfg.max_n {
        out.push(verifier.verify_thm1(n)?);
    }
    for which in [IdentityId::Thm3, IdentityId::Cor5, IdentityId::Cor6, IdentityId::Thm7] {
        for n in which.min_n()..=cfg.max_n {
            if which.needs_even() && n % 2 == 1 {
                continue;
            }
            out.push(verifier.verify_thm3_family(n, which)?);
        }
    }
    for n in (2..=cfg.max_n).step_by(2) {
        out.push(verifier.verify_pfaffian_square(n)?);
    }
    for &form in &cfg.magnus_forms {
        for &g in &cfg.generators {
            for n in 1..=cfg.max_n {
                out.push(verifier.verify_magnus_numeric(n, cfg.trials, cfg.master_seed, g, form)?);
            }
        }
    }
    for &g in &cfg.generators {
        out.push(verifier.verify_magnus_original(cfg.trials, cfg.master_seed, g)?);
    }
    for &g in &cfg.generators {
        for n in 5..=cfg.max_n.max(5) {
            out.push(verifier.verify_thm2(n, cfg.trials, cfg.master_seed, cfg.eps_mode, g)?);
        }
    }
    for &g in &cfg.generators {
        out.push(verifier.verify_trace_relation(cfg.trials, cfg.master_seed, g)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thm1_small_cases_pass() {
        for n in 0..=2 {
            let r = verify_thm1(n).unwrap();
            assert!(r.passed(), "n={n}: {:?}", r.residual);
            assert_eq!(r.params.cross_checked, Some(true));
        }
    }

    #[test]
    fn thm1_detects_sign_flip() {
        let r = Verifier::default()
            .verify_thm1_mutated(2, Some(SignFlip { row: 1, col: 2 }))
            .unwrap();
        assert_eq!(r.status, Status::Fail);
        assert!(r.residual.is_some());
        assert!(r.witness.is_some());
    }

    #[test]
    fn thm3_family_small_cases() {
        for which in [IdentityId::Thm3, IdentityId::Cor5] {
            assert!(verify_thm3_family(2, which).unwrap().passed());
        }
        assert!(verify_thm3_family(1, IdentityId::Thm3).unwrap().passed());
        assert!(verify_thm3_family(2, IdentityId::Cor6).unwrap().passed());
        assert!(verify_thm3_family(2, IdentityId::Thm7).unwrap().passed());
    }

    #[test]
    fn odd_skew_sizes_rejected() {
        assert_eq!(
            verify_thm3_family(3, IdentityId::Cor6),
            Err(VerifyError::OddSizeForSkew { identity: IdentityId::Cor6, n: 3 })
        );
        assert!(verify_thm3_family(0, IdentityId::Thm3).is_err());
        assert!(verify_thm3_family(2, IdentityId::Thm1).is_err());
    }

    #[test]
    fn oversized_requests_fail_loudly() {
        let tight = Verifier {
            bounds: SizeBounds { det_dp: 3, ..SizeBounds::default() },
            cross_check: false,
        };
        assert!(matches!(tight.verify_thm1(3), Err(VerifyError::Matrix(MatrixError::SizeExceeded { .. }))));
    }

    #[test]
    fn thm2_below_threshold_is_informational() {
        let r = Verifier::default()
            .verify_thm2(4, 1, 3, EpsMode::Random, Generator::sl2z())
            .unwrap();
        assert!(r.passed());
        assert!(r.params.observed.is_some());
    }

    #[test]
    fn reports_are_deterministic() {
        let v = Verifier::default();
        let strip = |mut r: VerificationReport| {
            r.millis = 0;
            r
        };
        let a = strip(v.verify_magnus_numeric(3, 5, 9, Generator::gaussian(), MagnusForm::FromThm1).unwrap());
        let b = strip(v.verify_magnus_numeric(3, 5, 9, Generator::gaussian(), MagnusForm::FromThm1).unwrap());
        assert_eq!(a, b);
    }
}
