use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use so4_spherical::algebra::{rat, Polynomial, Var, GR};
use so4_spherical::special::{binomial, factorial, gegenbauer, hahn_value, hyp_value, int, pochhammer};

fn gr(r: BigRational) -> GR {
    GR::real(r)
}

fn u() -> Polynomial {
    Polynomial::x(Var::U)
}

/// `C_n^λ(x) = Σ_k (-1)^k (λ)_{n-k} / (k! (n-2k)!) (2x)^{n-2k}`
fn gegenbauer_explicit(n: usize, lam: u32) -> Polynomial {
    let mut coeffs = vec![GR::from_int(0); n + 1];
    for k in 0..=n / 2 {
        let m = n - 2 * k;
        let c = pochhammer(&int(lam as i64), n - k) * BigRational::from_integer(BigInt::from(2).pow(m as u32))
            / BigRational::from_integer(factorial(k as u64) * factorial(m as u64));
        coeffs[m] = gr(if k % 2 == 0 { c } else { -c });
    }
    Polynomial::new(coeffs, Var::U)
}

fn geg(n: i64, lam: u32) -> Polynomial {
    if n < 0 {
        Polynomial::zero(Var::U)
    } else {
        gegenbauer(n as usize, lam)
    }
}

#[test]
fn gegenbauer_matches_explicit_sum() {
    for lam in 1..=6 {
        for n in 0..=10 {
            assert_eq!(gegenbauer(n, lam), gegenbauer_explicit(n, lam), "n={n} lam={lam}");
        }
    }
}

#[test]
fn chebyshev_second_kind_is_lambda_one() {
    // U_n(cos θ) = sin((n+1)θ)/sin θ
    for n in 0..=8 {
        for th in [0.3f64, 1.1, 2.5] {
            let v = gegenbauer(n, 1).eval_f64(th.cos()).re;
            let want = ((n as f64 + 1.0) * th).sin() / th.sin();
            assert!((v - want).abs() < 1e-10, "n={n}");
        }
    }
}

proptest! {
    #[test]
    fn derivative_lowers_degree_raises_lambda(n in 0i64..=10, lam in 1u32..=6) {
        let lhs = geg(n, lam).derivative();
        let rhs = geg(n - 1, lam + 1).scale(&GR::from_int(2 * lam as i64));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn three_term_recurrence(n in 0i64..=10, lam in 1u32..=6) {
        let l = lam as i64;
        let lhs = (&u() * &geg(n, lam)).scale(&GR::from_int(2 * (n + l)));
        let rhs = &geg(n + 1, lam).scale(&GR::from_int(n + 1)) + &geg(n - 1, lam).scale(&GR::from_int(n + 2 * l - 1));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lowering_lambda_with_derivative(n in 0i64..=10, lam in 2u32..=6) {
        let l = lam as i64;
        let one_minus = Polynomial::one_minus_sq_pow(1, Var::U);
        let lhs = &(&one_minus * &geg(n, lam).derivative()) + &(&u() * &geg(n, lam)).scale(&GR::from_int(1 - 2 * l));
        let c = GR::real(rat(-(n + 1) * (2 * l + n - 1), 2 * (l - 1)));
        prop_assert_eq!(lhs, geg(n + 1, lam - 1).scale(&c));
    }

    #[test]
    fn lambda_shift_without_derivative(n in 0i64..=10, lam in 2u32..=6) {
        let l = lam as i64;
        let lhs = geg(n + 1, lam - 1).scale(&GR::real(rat(n + 2 * l - 1, 2 * (l - 1))));
        prop_assert_eq!(lhs, &geg(n + 1, lam) - &(&u() * &geg(n, lam)));
    }

    #[test]
    fn hahn_boundary_values(ell in 0usize..=8, a in 0usize..=8) {
        // Q_k(0) = Q_0(j) = 1 and Q_k(N) = (-1)^k when α = β = 0
        prop_assume!(a <= ell);
        let one = GR::from_int(1);
        prop_assert_eq!(hahn_value(a, 0, ell).unwrap(), one.clone());
        prop_assert_eq!(hahn_value(0, a, ell).unwrap(), one);
        prop_assert_eq!(hahn_value(a, ell, ell).unwrap(), GR::from_int(if a % 2 == 0 { 1 } else { -1 }));
    }
}

#[test]
fn hahn_orthogonality() {
    for ell in 0..=8usize {
        for j in 0..=ell {
            for k in 0..=ell {
                let s: GR = (0..=ell).map(|r| &hahn_value(j, r, ell).unwrap() * &hahn_value(k, r, ell).unwrap()).sum();
                let want = if j == k {
                    BigRational::new(
                        factorial((ell + j + 1) as u64) * factorial((ell - j) as u64),
                        BigInt::from(2 * j + 1) * factorial(ell as u64) * factorial(ell as u64),
                    )
                } else {
                    int(0)
                };
                assert_eq!(s, gr(want), "ell={ell} j={j} k={k}");
            }
        }
    }
}

#[test]
fn hahn_recursions() {
    for ell in 0..=8usize {
        let l = ell as i64;
        let q = |j: i64, k: i64| {
            if j < 0 || k < 0 || j > l || k > l {
                GR::from_int(0)
            } else {
                hahn_value(k as usize, j as usize, ell).unwrap()
            }
        };
        let g = GR::from_int;
        for j in 0..=l {
            for k in 0..=l {
                let lhs = &g(j * (l - j + 1) + (j + 1) * (l - j) - k * (k + 1)) * &q(j, k);
                let rhs = &(&g(j * (l - j + 1)) * &q(j - 1, k)) + &(&g((j + 1) * (l - j)) * &q(j + 1, k));
                assert_eq!(lhs, rhs, "in j: ell={ell} j={j} k={k}");

                let lhs = &g(l - 2 * j) * &q(j, k);
                let rhs = &(&GR::from_frac(k * (l + k + 1), 2 * k + 1) * &q(j, k - 1))
                    + &(&GR::from_frac((k + 1) * (l - k), 2 * k + 1) * &q(j, k + 1));
                assert_eq!(lhs, rhs, "in k: ell={ell} j={j} k={k}");

                let lhs = &g(k * (l - j) - k * (k + j + 1) + 2 * (j + 1) * (l - j)) * &q(j, k);
                let rhs = &(&g(2 * (j + 1) * (l - j)) * &q(j + 1, k)) + &(&g(k * (k + l + 1)) * &q(j, k - 1));
                assert_eq!(lhs, rhs, "mixed: ell={ell} j={j} k={k}");
            }
        }
    }
}

#[test]
fn mixed_relation_with_minus_sign_fails() {
    // ℓ = 2, j = 0, k = 1: Q_1(0) = 1, Q_1(1) = 0, Q_0(0) = 1 gives 4 on the left
    // and 0 - 4 on the right
    let q = |k, j| hahn_value(k, j, 2).unwrap();
    assert_eq!(q(1, 0), GR::from_int(1));
    assert_eq!(q(1, 1), GR::from_int(0));
    let lhs = &GR::from_int(4) * &q(1, 0);
    assert_ne!(lhs, &(&GR::from_int(4) * &q(1, 1)) - &(&GR::from_int(4) * &q(0, 0)));
    assert_eq!(lhs, &(&GR::from_int(4) * &q(1, 1)) + &(&GR::from_int(4) * &q(0, 0)));
}

#[test]
fn pfaff_saalschutz_values() {
    for ell in 0..=6i64 {
        for j in 0..=ell {
            let v = hyp_value(vec![int(-j), int(j + 1), int(-ell - 1)], vec![int(1), int(-ell)], GR::from_int(1)).unwrap();
            let want = BigRational::new(
                binomial((ell + j + 1) as u64, j as u64),
                binomial(ell as u64, j as u64),
            );
            let want = if j % 2 == 0 { want } else { -want };
            assert_eq!(v, gr(want), "ell={ell} j={j}");
        }
    }
}
