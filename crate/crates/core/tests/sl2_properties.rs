use detrace_core::matrix::{det_dp, PolyMatrix};
use detrace_core::poly::Polynomial;
use detrace_core::sl2::{trace_relation_check, trial_rng, ExactMatrix, GaussianRational, Generator, Mat2};
use proptest::prelude::*;

/// Leibniz formula over all permutations, independent of elimination.
fn leibniz(m: &ExactMatrix) -> GaussianRational {
    let n = m.nrows();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = GaussianRational::zero();
    permute(&mut perm, 0, &mut |p| {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        let mut term = GaussianRational::one();
        for (r, &c) in p.iter().enumerate() {
            term = &term * m.get(r, c);
        }
        total = if inversions % 2 == 0 { &total + &term } else { &total - &term };
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

fn int_rows() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-4i64..=4, n), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn elimination_matches_leibniz(rows in int_rows()) {
        let m = ExactMatrix::from_int_rows(&rows);
        prop_assert_eq!(m.det().unwrap(), leibniz(&m));
    }

    #[test]
    fn elimination_matches_polynomial_engine(rows in int_rows()) {
        let exact = ExactMatrix::from_int_rows(&rows).det().unwrap();
        let poly = PolyMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| Polynomial::constant(x)).collect()).collect(),
        );
        let symbolic = det_dp(&poly).unwrap();
        let value = symbolic.as_constant().unwrap_or_default();
        prop_assert_eq!(exact.as_integer(), Some(value));
    }

    #[test]
    fn sampled_matrices_are_unimodular_and_invertible(seed in any::<u64>(), gaussian in any::<bool>()) {
        let g = if gaussian { Generator::gaussian() } else { Generator::sl2z() };
        let m = g.sample(&mut trial_rng(seed, 0));
        prop_assert!(m.is_unimodular());
        prop_assert_eq!(m.mul(&m.inverse().unwrap()), Mat2::identity());
    }

    #[test]
    fn left_kernel_vectors_annihilate(rows in int_rows()) {
        let m = ExactMatrix::from_int_rows(&rows);
        match m.left_kernel().unwrap() {
            Some(v) => {
                prop_assert!(v.iter().any(|x| !x.is_zero()));
                prop_assert!(m.left_mul(&v).unwrap().iter().all(GaussianRational::is_zero));
                prop_assert!(m.det().unwrap().is_zero());
            }
            None => prop_assert!(!m.det().unwrap().is_zero()),
        }
    }
}

#[test]
fn trace_relation_holds_on_a_thousand_pairs() {
    for g in [Generator::sl2z(), Generator::gaussian()] {
        for t in 0..1000 {
            let mut rng = trial_rng(7, t);
            let (m, big_m) = (g.sample(&mut rng), g.sample(&mut rng));
            let (lhs, rhs) = trace_relation_check(&m, &big_m).unwrap();
            assert_eq!(lhs, rhs, "{} trial {t}", g.name());
        }
    }
}
