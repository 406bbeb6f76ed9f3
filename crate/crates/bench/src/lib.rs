//! Deterministic inputs shared by the benchmarks in `benches/`.

use detrace_core::matrix::PolyMatrix;
use detrace_core::poly::Polynomial;
use detrace_core::sl2::{trial_rng, Generator, Mat2};

/// The generic `n x n` matrix with entry `a[i,j]` at `(i, j)`.
pub fn generic_square(n: usize) -> PolyMatrix {
    PolyMatrix::square((0..n).collect(), Polynomial::entry)
}

/// Two lists of `n` sampled SL(2) matrices, fixed by `seed`.
pub fn sl2_lists(n: usize, generator: Generator, seed: u64) -> (Vec<Mat2>, Vec<Mat2>) {
    let mut rng = trial_rng(seed, 0);
    let m = (0..n).map(|_| generator.sample(&mut rng)).collect();
    let big_m = (0..n).map(|_| generator.sample(&mut rng)).collect();
    (m, big_m)
}
