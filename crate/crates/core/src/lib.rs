//! Exact verification of determinant and Pfaffian identities over
//! `Z[a[i,j], lambda, beta]`, and of the SL(2) trace identities they
//! specialise to.
//!
//! * [`poly`]: canonical sparse polynomials with big-integer coefficients.
//! * [`matrix`]: labelled polynomial matrices, two independent determinant
//!   engines, the signed-permutation expansion and Pfaffians.
//! * [`families`]: builders for the `A`, `B`, `C` matrices of each family.
//! * [`sl2`]: Gaussian-rational 2x2 matrices and numeric trace matrices.
//! * [`verify`]: residual-based checks producing [`VerificationReport`]s.

pub mod families;
pub mod matrix;
pub mod poly;
pub mod sl2;
pub mod verify;

pub use families::{
    apply_specialization, build_thm1, build_thm1_with, build_thm3, BetaMode, IdentityId, IdentityMatrices, SignFlip,
    Specialization,
};
pub use matrix::{
    det_dp, det_perm_oracle, det_signed_perm_expansion, pfaffian, pfaffian_split, Matching, MatrixError, ParityRule,
    PolyMatrix, SizeBounds,
};
pub use poly::{Monomial, ParsePolyError, PolyVar, Polynomial};
pub use sl2::{ExactMatrix, GaussianRational, Generator, Mat2, Sign, SignVector, Sl2Error};
pub use verify::{
    run_suite, EpsMode, MagnusForm, ReportParams, Status, SuiteConfig, VerificationReport, Verifier, VerifyError,
};
