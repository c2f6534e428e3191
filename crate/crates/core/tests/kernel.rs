use nalgebra::DMatrix;
use pl2::hilbert::{inner_product, kernel, kernel_element};
use pl2::{c, Complex64, EvalParams};
use proptest::prelude::*;

fn points() -> impl Strategy<Value = Vec<(Complex64, Complex64)>> {
    prop::collection::vec(
        (
            0.0f64..0.85,
            0.0f64..std::f64::consts::TAU,
            0.5f64..3.0,
            -5.0f64..5.0,
        )
            .prop_map(|(r, a, tr, ti)| (Complex64::from_polar(r, a), c(tr, ti))),
        1..8,
    )
}

fn min_eigenvalue(g: DMatrix<Complex64>) -> f64 {
    g.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn truncated_gram_is_positive_semidefinite(pts in points()) {
        let n = pts.len();
        let ks: Vec<_> = pts.iter().map(|&(w, t)| kernel_element(w, t, 64).unwrap()).collect();
        let g = DMatrix::from_fn(n, n, |i, j| inner_product(&ks[j], &ks[i]));
        let scale = g.iter().map(|v| v.norm()).fold(0.0, f64::max);
        prop_assert!(min_eigenvalue(g) >= -1e-12 * scale.max(1.0));
    }

    #[test]
    fn kernel_gram_is_hermitian_and_positive(pts in points()) {
        let params = EvalParams::with_tol(1e-12).unwrap();
        let n = pts.len();
        let g = DMatrix::from_fn(n, n, |i, j| {
            let (zi, si) = pts[i];
            let (wj, tj) = pts[j];
            kernel(zi, wj, si, tj, &params).unwrap()
        });
        for i in 0..n {
            for j in 0..n {
                prop_assert!((g[(i, j)] - g[(j, i)].conj()).norm() <= 1e-11);
            }
        }
        // each entry carries a certified error of at most tol
        prop_assert!(min_eigenvalue(g) >= -(n as f64) * params.tol);
    }
}
