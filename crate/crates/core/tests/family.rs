use proptest::prelude::*;
use so4_spherical::algebra::{Matrix, GR};
use so4_spherical::family::{build_family, coeffs_by_racah, coeffs_by_recursion, eval_h};
use so4_spherical::structures::{build_l_n, mu_wk};
use so4_spherical::verify::{a_w0_closed_form, psi_entry_closed_form};

#[test]
fn recursion_agrees_with_racah_on_grid() {
    for ell in 0..=6 {
        for w in 0..=8 {
            for k in 0..=ell {
                let a = coeffs_by_recursion(ell, w, k).unwrap();
                assert_eq!(a, coeffs_by_racah(ell, w, k).unwrap(), "ell={ell} w={w} k={k}");
                assert_eq!(a.a[0], GR::from_int(1));
                for j in (w + k + 1)..=ell {
                    assert_eq!(a.a[j], GR::from_int(0), "tail ell={ell} w={w} k={k} j={j}");
                }
                let mu = GR::real(mu_wk(ell, w, k));
                let image = build_l_n(ell, w + k).mul_vec(&a.a);
                assert_eq!(image, a.a.iter().map(|x| x * &mu).collect::<Vec<_>>());
            }
        }
    }
}

#[test]
fn w_zero_closed_form() {
    for ell in 0..=6 {
        for k in 0..=ell {
            let a = coeffs_by_recursion(ell, 0, k).unwrap();
            for j in 0..=ell {
                assert_eq!(a.a[j], a_w0_closed_form(k, j), "ell={ell} k={k} j={j}");
            }
        }
    }
    let a = coeffs_by_recursion(4, 0, 2).unwrap();
    assert_eq!(a.a[..3], [GR::from_int(1), GR::from_parts((0, 1), (-2, 1)), GR::from_frac(-2, 3)]);
}

#[test]
fn psi_is_the_gegenbauer_matrix() {
    for ell in 0..=6 {
        let fam = build_family(ell, 0).unwrap();
        for j in 0..=ell {
            for k in 0..=ell {
                assert_eq!(fam.psi[(j, k)], psi_entry_closed_form(j, k), "ell={ell} j={j} k={k}");
            }
        }
        assert!(fam.psi.is_upper_triangular());
        assert!(fam.psi.det().is_constant());
    }
}

#[test]
fn tilde_family_has_exact_degree_and_relates_by_psi() {
    for ell in [0, 1, 2, 4, 6] {
        let fam = build_family(ell, 8).unwrap();
        for w in 0..=8 {
            let pt = &fam.pw_tilde[&w];
            assert_eq!(&fam.psi * pt, fam.pw[&w]);
            assert_eq!(pt.degree(), Some(w), "ell={ell} w={w}");
            let lead: Matrix = pt.coeff(w);
            assert!(lead.is_diagonal());
            assert!((0..=ell).all(|j| lead[(j, j)] != GR::from_int(0)));
        }
    }
}

proptest! {
    #[test]
    fn h_is_one_at_u_one(ell in 0usize..=6, w in 0usize..=8, k in 0usize..=6) {
        prop_assume!(k <= ell);
        let h = eval_h(ell, w, k, 1.0).unwrap();
        for x in h.iter() {
            prop_assert!((x.re - 1.0).abs() < 1e-10 && x.im.abs() < 1e-10);
        }
    }

    #[test]
    fn recursion_and_racah_agree_beyond_grid(ell in 0usize..=9, w in 0usize..=12, k in 0usize..=9) {
        prop_assume!(k <= ell);
        prop_assert_eq!(coeffs_by_recursion(ell, w, k).unwrap(), coeffs_by_racah(ell, w, k).unwrap());
    }
}
