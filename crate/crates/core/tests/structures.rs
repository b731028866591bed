use proptest::prelude::*;
use so4_spherical::algebra::{Matrix, GR};
use so4_spherical::hyp::l_eigensolve;
use so4_spherical::structures::{
    build_l, build_l_n, build_structures, eigen_ledger, eigen_ledger_from_rep, lambda_wk, mu_wk,
};

#[test]
fn hahn_matrix_identities() {
    for ell in 0..=8 {
        let s = build_structures(ell);
        let n = ell + 1;
        let diag = Matrix::diag((0..n as i64).map(|j| GR::from_int(-j * (j + 1))).collect());
        assert_eq!(&(&s.c0 + &s.c1) * &s.u, &s.u * &diag, "ell={ell}");
        assert_eq!(&s.u * &s.u_inv, Matrix::identity(n));
        let conj = |m: &Matrix| &(&s.u_inv * m) * &s.u;
        assert_eq!(conj(&s.a0), &s.q0 + &s.q1, "ell={ell}");
        assert_eq!(conj(&(&s.c1 + &s.c0)), -&s.v0, "ell={ell}");
        let rhs = &(&s.q1 * &s.j) - &(&s.q0 * &(&s.j + &Matrix::identity(n)));
        assert_eq!(conj(&(&s.c1 - &s.c0)), rhs, "ell={ell}");
    }
}

#[test]
fn l_eigenvalues_have_geometric_multiplicity_one() {
    for ell in 0..=6 {
        for n in 0..=8 {
            let l = build_l_n(ell, n);
            let found = l_eigensolve(ell, n).unwrap();
            assert_eq!(found.len(), n.min(ell) + 1);
            for (mu, a) in &found {
                let shifted = &l - &Matrix::identity(ell + 1).scale(mu);
                assert_eq!(shifted.rank(), ell, "ell={ell} n={n} mu={mu}");
                assert_eq!(shifted.mul_vec(&a.a), vec![GR::from_int(0); ell + 1]);
            }
        }
    }
}

#[test]
fn eigenvalue_pairs_are_distinct() {
    for ell in 0..=6 {
        let mut seen = Vec::new();
        for w in 0..=8 {
            for k in 0..=ell {
                let pair = (lambda_wk(w, k), mu_wk(ell, w, k));
                assert!(!seen.contains(&pair), "ell={ell} w={w} k={k}");
                seen.push(pair);
            }
        }
    }
}

proptest! {
    #[test]
    fn ledger_round_trip(ell in 0usize..=8, w in 0usize..=10, k in 0usize..=8) {
        prop_assume!(k <= ell);
        let e = eigen_ledger(ell, w, k).unwrap();
        prop_assert!(e.is_consistent());
        let back = eigen_ledger_from_rep(ell, &e.m1, &e.m2).unwrap();
        prop_assert_eq!((back.w, back.k), (w, k));
        prop_assert_eq!(e.lambda, lambda_wk(w, k));
    }

    #[test]
    fn l_is_tridiagonal(ell in 0usize..=8, p in -30i64..=30, q in 1i64..=7) {
        let l = build_l(ell, &GR::from_frac(p, q));
        for i in 0..=ell {
            for j in 0..=ell {
                if i.abs_diff(j) > 1 {
                    prop_assert_eq!(&l[(i, j)], &GR::from_int(0));
                }
            }
        }
    }

    #[test]
    fn structure_matrices_have_documented_shapes(ell in 0usize..=8) {
        let s = build_structures(ell);
        prop_assert!(s.c.is_diagonal() && s.v.is_diagonal() && s.j.is_diagonal() && s.v0.is_diagonal());
        prop_assert!(s.q0.is_strictly_upper() && s.q1.is_strictly_lower());
        prop_assert!(s.ustar_u.is_diagonal());
        prop_assert_eq!(&s.u.transpose() * &s.u, s.ustar_u.clone());
    }
}
