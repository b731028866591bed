use num_traits::Zero;
use so4_spherical::algebra::{Matrix, MatrixPolynomial, Var, GR};
use so4_spherical::family::build_family;
use so4_spherical::hyp::hyp_solve;
use so4_spherical::operators::{apply, build_operator, commutator_check, conjugate, OperatorName};
use so4_spherical::structures::{build_structures, lambda_matrix, mu_matrix};

const ELLS: [usize; 5] = [0, 1, 2, 4, 6];

#[test]
fn eigenfunction_identities() {
    for ell in ELLS {
        let fam = build_family(ell, 8).unwrap();
        let ops: Vec<_> = OperatorName::ALL.iter().map(|&n| build_operator(n, ell)).collect();
        for w in 0..=8 {
            let lam = lambda_matrix(ell, w);
            let mu = mu_matrix(ell, w);
            let p = &fam.pw[&w];
            let pt = &fam.pw_tilde[&w];
            assert_eq!(apply(&ops[0], p).unwrap(), p.right_mul_const(&lam), "D̄ ell={ell} w={w}");
            assert_eq!(apply(&ops[1], p).unwrap(), p.right_mul_const(&mu), "Ē ell={ell} w={w}");
            assert_eq!(apply(&ops[2], pt).unwrap(), pt.right_mul_const(&lam), "D̃ ell={ell} w={w}");
            assert_eq!(apply(&ops[3], pt).unwrap(), pt.right_mul_const(&mu), "Ẽ ell={ell} w={w}");
        }
    }
}

#[test]
fn conjugation_by_psi() {
    for ell in 0..=6 {
        let psi = build_family(ell, 0).unwrap().psi;
        let d = conjugate(&build_operator(OperatorName::Dbar, ell), &psi).unwrap();
        assert_eq!(d, build_operator(OperatorName::Dtilde, ell), "ell={ell}");
        let e = conjugate(&build_operator(OperatorName::Ebar, ell), &psi).unwrap();
        assert_eq!(e, build_operator(OperatorName::Etilde, ell), "ell={ell}");
    }
}

#[test]
fn operators_commute() {
    for ell in 0..=4 {
        let (d, e) = (build_operator(OperatorName::Dbar, ell), build_operator(OperatorName::Ebar, ell));
        assert!(commutator_check(&d, &e, 12), "bar ell={ell}");
        let (d, e) = (build_operator(OperatorName::Dtilde, ell), build_operator(OperatorName::Etilde, ell));
        assert!(commutator_check(&d, &e, 12), "tilde ell={ell}");
    }
}

#[test]
fn derivative_at_one() {
    for ell in [0, 1, 2, 4] {
        let s = build_structures(ell);
        let c_inv = s.c.inverse().unwrap();
        let s1_c_inv = (&s.s1 - &s.c).inverse().unwrap();
        let fam = build_family(ell, 6).unwrap();
        let one = GR::from_int(1);
        for w in 0..=6 {
            let lam = lambda_matrix(ell, w);
            // D̄ on P_w at u = 1
            let p = &fam.pw[&w];
            let lhs = p.derivative().eval(&one);
            for k in 0..=ell {
                let l = lam[(k, k)].clone();
                let want = -&(&c_inv * &(&(&s.v + &Matrix::identity(ell + 1).scale(&l)) * &p.eval(&one)));
                assert_eq!(lhs.column(k), want.column(k), "ell={ell} w={w} k={k}");
            }
            // D̃ on P̃_w at u = 1
            let pt = &fam.pw_tilde[&w];
            let lhs = pt.derivative().eval(&one);
            for k in 0..=ell {
                let l = lam[(k, k)].clone();
                let want = &s1_c_inv * &(&(&Matrix::identity(ell + 1).scale(&l) - &s.lambda0) * &pt.eval(&one));
                assert_eq!(lhs.column(k), want.column(k), "tilde ell={ell} w={w} k={k}");
            }
        }
    }
}

#[test]
fn series_solution_matches_family_columns() {
    for ell in [0, 1, 2, 4] {
        let fam = build_family(ell, 6).unwrap();
        for w in 0..=6 {
            let pt_s = fam.pw_tilde[&w].to_s().unwrap();
            for k in 0..=ell {
                let col = pt_s.column(k);
                let f0 = col.eval(&GR::zero()).column(0);
                let lam = lambda_matrix(ell, w)[(k, k)].clone();
                let sol = hyp_solve(ell, &lam, &f0, 40).unwrap();
                assert!(sol.is_polynomial, "ell={ell} w={w} k={k}");
                assert_eq!(sol.degree, Some(w));
                assert_eq!(sol.polynomial().unwrap(), col);
            }
        }
    }
}

#[test]
fn application_raises_degree_by_at_most_coefficient_degree() {
    let ell = 3;
    let fam = build_family(ell, 5).unwrap();
    for name in OperatorName::ALL {
        let op = build_operator(name, ell);
        for w in 0..=5 {
            let p: &MatrixPolynomial = &fam.pw[&w];
            let out = apply(&op, p).unwrap();
            assert!(out.degree().unwrap_or(0) <= p.degree().unwrap_or(0));
            assert_eq!(out.var(), Var::U);
        }
    }
}
