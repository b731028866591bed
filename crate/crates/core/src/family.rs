//! The coefficient vectors `a^{w,k}`, the packages `P_w`, the base package
//! `Ψ = P_0`, and the orthogonal family `P̃_w = Ψ⁻¹ P_w`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{rat, MatrixPolynomial, Polynomial, Var, GR};
use crate::error::{Error, Result};
use crate::special::{binomial, f21_in_u, factorial, int, pochhammer, racah_value};
use crate::structures::{build_l_n, build_structures, mu_wk};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientVector {
    pub ell: usize,
    pub w: usize,
    pub k: usize,
    pub a: Vec<GR>,
}

fn check_k(ell: usize, k: usize) -> Result<()> {
    if k > ell {
        return Err(Error::IndexOutOfRange(format!("k={k} > l={ell}")));
    }
    Ok(())
}

/// Runs the three-term recursion from `a_0 = 1` with `μ = μ_w(k)` and checks
/// the closing equation at `j = ℓ`.
pub fn coeffs_by_recursion(ell: usize, w: usize, k: usize) -> Result<CoefficientVector> {
    check_k(ell, k)?;
    let l = build_l_n(ell, w + k);
    let mu = GR::real(mu_wk(ell, w, k));
    let mut a = vec![GR::one()];
    for j in 0..ell {
        let mut rhs = &(&mu - &l[(j, j)]) * &a[j];
        if j >= 1 {
            rhs -= &l[(j, j - 1)] * &a[j - 1];
        }
        a.push(&rhs / &l[(j, j + 1)]);
    }
    let mut closing = &(&l[(ell, ell)] - &mu) * &a[ell];
    if ell >= 1 {
        closing += &l[(ell, ell - 1)] * &a[ell - 1];
    }
    if !closing.is_zero() {
        return Err(Error::ClosingEquation { ell, w, k });
    }
    Ok(CoefficientVector { ell, w, k, a })
}

/// Closed form through the Racah polynomials `R_k(λ(j); -ℓ-1, -w-k-1, 0, 0)`.
pub fn coeffs_by_racah(ell: usize, w: usize, k: usize) -> Result<CoefficientVector> {
    check_k(ell, k)?;
    let alpha = int(-(ell as i64) - 1);
    let beta = int(-((w + k) as i64) - 1);
    let zero = int(0);
    let minus_two_i = GR::i().scale(&int(-2));
    let a = (0..=ell)
        .map(|j| {
            let poch = pochhammer(&int(-((w + k) as i64)), j);
            if poch.is_zero() {
                return Ok(GR::zero());
            }
            let r = racah_value(k, j, &alpha, &beta, &zero, &zero, ell)?;
            let c = poch
                * num_rational::BigRational::new(factorial(j as u64), factorial(2 * j as u64))
                * num_rational::BigRational::new(
                    binomial(ell as u64, j as u64),
                    binomial((ell + j + 1) as u64, j as u64),
                );
            Ok(&minus_two_i.pow(j as u32) * &r.scale(&c))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoefficientVector { ell, w, k, a })
}

/// Entry `(j, k)` of `P_w` before scaling by `a_j`.
fn hyp_entry(w: usize, k: usize, j: usize) -> Polynomial {
    let n = w + k - j;
    let b = int((w + k + j + 2) as i64);
    let c = int(j as i64) + rat(3, 2);
    f21_in_u(n, &b, &c).expect("terminating by construction")
}

pub fn build_pw(ell: usize, w: usize) -> Result<MatrixPolynomial> {
    let cols = (0..=ell).map(|k| coeffs_by_recursion(ell, w, k)).collect::<Result<Vec<_>>>()?;
    Ok(MatrixPolynomial::from_fn(ell + 1, ell + 1, Var::U, |j, k| {
        let aj = &cols[k].a[j];
        if aj.is_zero() {
            Polynomial::zero(Var::U)
        } else {
            hyp_entry(w, k, j).scale(aj)
        }
    }))
}

/// `Ψ`, `Ψ⁻¹`, `P_w` and `P̃_w` for `0 ≤ w ≤ w_max`.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyPackage {
    pub ell: usize,
    #[serde(rename = "Psi")]
    pub psi: MatrixPolynomial,
    #[serde(rename = "PsiInv")]
    pub psi_inv: MatrixPolynomial,
    #[serde(rename = "Pw")]
    pub pw: BTreeMap<usize, MatrixPolynomial>,
    #[serde(rename = "PwTilde")]
    pub pw_tilde: BTreeMap<usize, MatrixPolynomial>,
}

pub fn build_family(ell: usize, w_max: usize) -> Result<FamilyPackage> {
    let psi = build_pw(ell, 0)?;
    let psi_inv = psi.inverse_triangular()?;
    let built = (0..=w_max)
        .into_par_iter()
        .map(|w| {
            let p = if w == 0 { psi.clone() } else { build_pw(ell, w)? };
            let pt = &psi_inv * &p;
            Ok((w, p, pt))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut pw = BTreeMap::new();
    let mut pw_tilde = BTreeMap::new();
    for (w, p, pt) in built {
        pw.insert(w, p);
        pw_tilde.insert(w, pt);
    }
    Ok(FamilyPackage { ell, psi, psi_inv, pw, pw_tilde })
}

/// The vector function `H(u) = U T(u) P(u)` of one spherical function,
/// prepared for repeated floating evaluation.
#[derive(Clone, Debug)]
pub struct HFunction {
    pub ell: usize,
    pub w: usize,
    pub k: usize,
    u: DMatrix<f64>,
    column: Vec<Polynomial>,
}

impl HFunction {
    pub fn new(ell: usize, w: usize, k: usize) -> Result<Self> {
        let a = coeffs_by_recursion(ell, w, k)?;
        let s = build_structures(ell);
        let u = DMatrix::from_fn(ell + 1, ell + 1, |i, j| s.u[(i, j)].to_complex64().re);
        let column = (0..=ell)
            .map(|j| if a.a[j].is_zero() { Polynomial::zero(Var::U) } else { hyp_entry(w, k, j).scale(&a.a[j]) })
            .collect();
        Ok(Self { ell, w, k, u, column })
    }

    pub fn eval(&self, x: f64) -> Result<DVector<Complex64>> {
        if !(x > -1.0 && x <= 1.0) {
            return Err(Error::Domain(format!("u = {x} is outside (-1, 1]")));
        }
        Ok(self.eval_closed(x))
    }

    /// Same as [`eval`](Self::eval) but also accepts `u = -1`, where the
    /// formula extends continuously.
    pub fn eval_closed(&self, x: f64) -> DVector<Complex64> {
        let t = (1.0 - x * x).max(0.0).sqrt();
        let tp = DVector::from_fn(self.ell + 1, |j, _| self.column[j].eval_f64(x) * t.powi(j as i32));
        self.u.map(|v| Complex64::new(v, 0.0)) * tp
    }
}

pub fn eval_h(ell: usize, w: usize, k: usize, u: f64) -> Result<DVector<Complex64>> {
    HFunction::new(ell, w, k)?.eval(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr(re: (i64, i64), im: (i64, i64)) -> GR {
        GR::from_parts(re, im)
    }

    #[test]
    fn recursion_examples() {
        let a = coeffs_by_recursion(2, 0, 1).unwrap().a;
        assert_eq!(a, vec![GR::one(), -GR::i(), GR::zero()]);
        let a = coeffs_by_recursion(2, 0, 2).unwrap().a;
        assert_eq!(a, vec![GR::one(), gr((0, 1), (-2, 1)), GR::from_frac(-2, 3)]);
        for l in 0..6 {
            let a = coeffs_by_recursion(l, 0, 0).unwrap().a;
            assert!(a[0].is_one() && a[1..].iter().all(Zero::is_zero));
        }
        // k = 0 but w > 0: the first step gives a_1 = μ_w(0)/L_01 ≠ 0
        assert_eq!(coeffs_by_recursion(2, 1, 0).unwrap().a, vec![GR::one(), gr((0, 1), (1, 2)), GR::zero()]);
        let a = coeffs_by_recursion(4, 2, 0).unwrap().a;
        assert_eq!(a, vec![GR::one(), gr((0, 1), (4, 3)), GR::from_frac(-4, 21), GR::zero(), GR::zero()]);
    }

    #[test]
    fn k_zero_closed_form() {
        // with k = 0 the Racah factor is 1
        for l in 0..7usize {
            for w in 0..9usize {
                let a = coeffs_by_recursion(l, w, 0).unwrap().a;
                for (j, aj) in a.iter().enumerate() {
                    let c = pochhammer(&int(-(w as i64)), j)
                        * num_rational::BigRational::new(factorial(j as u64), factorial(2 * j as u64))
                        * num_rational::BigRational::new(
                            binomial(l as u64, j as u64),
                            binomial((l + j + 1) as u64, j as u64),
                        );
                    let want = GR::i().scale(&int(-2)).pow(j as u32).scale(&c);
                    assert_eq!(aj, &want);
                }
            }
        }
    }

    #[test]
    fn racah_first_entry_is_one() {
        for l in 0..5 {
            for w in 0..4 {
                for k in 0..=l {
                    assert!(coeffs_by_racah(l, w, k).unwrap().a[0].is_one());
                }
            }
        }
    }

    #[test]
    fn psi_for_ell_one() {
        let p = build_pw(1, 0).unwrap();
        let mut want = MatrixPolynomial::zeros(2, 2, Var::U);
        want[(0, 0)] = Polynomial::from_ints(&[1], Var::U);
        want[(0, 1)] = Polynomial::from_ints(&[0, 1], Var::U);
        want[(1, 1)] = Polynomial::constant(-GR::i(), Var::U);
        assert_eq!(p, want);
    }

    #[test]
    fn family_basics() {
        let f = build_family(1, 2).unwrap();
        assert_eq!(f.pw_tilde[&0], MatrixPolynomial::identity(2, Var::U));
        assert_eq!(f.psi.det(), Polynomial::constant(-GR::i(), Var::U));
    }

    #[test]
    fn h_at_one_is_all_ones() {
        for (l, w, k) in [(0, 3, 0), (2, 1, 2), (4, 2, 3), (3, 0, 1)] {
            let h = eval_h(l, w, k, 1.0).unwrap();
            assert!(h.iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-12), "{h:?}");
        }
    }

    #[test]
    fn trivial_function_is_constant() {
        for x in [-0.9, -0.3, 0.2, 0.77] {
            let h = eval_h(2, 0, 0, x).unwrap();
            assert!(h.iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-12));
        }
    }

    #[test]
    fn h_domain() {
        assert!(eval_h(2, 0, 0, -1.0).is_err());
        assert!(eval_h(2, 0, 0, 1.5).is_err());
    }
}
