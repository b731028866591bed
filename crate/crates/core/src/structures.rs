//! The constant matrices attached to the K-type of dimension ℓ+1, the
//! tridiagonal matrix `L(λ)`, and the eigenvalue bookkeeping between the
//! `(w, k)` and `(m1, m2)` parameterizations.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::algebra::{rat, Matrix, GR};
use crate::error::{Error, Result};
use crate::special::{factorial, hahn_value, int};

/// Every structure matrix for a fixed ℓ. Indices run over `0..=ℓ`.
#[derive(Clone, Debug, Serialize)]
pub struct StructureSet {
    pub ell: usize,
    #[serde(rename = "A0")]
    pub a0: Matrix,
    #[serde(rename = "C0")]
    pub c0: Matrix,
    #[serde(rename = "C1")]
    pub c1: Matrix,
    #[serde(rename = "V0")]
    pub v0: Matrix,
    #[serde(rename = "V")]
    pub v: Matrix,
    #[serde(rename = "C")]
    pub c: Matrix,
    #[serde(rename = "J")]
    pub j: Matrix,
    #[serde(rename = "Q0")]
    pub q0: Matrix,
    #[serde(rename = "Q1")]
    pub q1: Matrix,
    #[serde(rename = "M")]
    pub m: Matrix,
    #[serde(rename = "S1")]
    pub s1: Matrix,
    #[serde(rename = "R1")]
    pub r1: Matrix,
    #[serde(rename = "R2")]
    pub r2: Matrix,
    #[serde(rename = "Lambda0")]
    pub lambda0: Matrix,
    #[serde(rename = "M0")]
    pub m0: Matrix,
    #[serde(rename = "B")]
    pub b: Matrix,
    #[serde(rename = "U")]
    pub u: Matrix,
    #[serde(rename = "Uinv")]
    pub u_inv: Matrix,
    #[serde(rename = "UstarU")]
    pub ustar_u: Matrix,
}

fn g(n: i64) -> GR {
    GR::from_int(n)
}

fn q(p: i64, d: i64) -> GR {
    GR::from_frac(p, d)
}

/// `(j+ℓ+1)!(ℓ-j)! / ((2j+1) ℓ! ℓ!)`, the squared norm of the Hahn column `j`.
pub fn hahn_norm(ell: usize, j: usize) -> BigRational {
    let num = factorial((j + ell + 1) as u64) * factorial((ell - j) as u64);
    let den = factorial(ell as u64).pow(2) * num_bigint::BigInt::from(2 * j + 1);
    BigRational::new(num, den)
}

pub fn build_structures(ell: usize) -> StructureSet {
    let n = ell + 1;
    let l = ell as i64;
    let diag = |f: &dyn Fn(i64) -> GR| Matrix::diag((0..n as i64).map(f).collect());
    let mut c0 = Matrix::zeros(n, n);
    let mut c1 = Matrix::zeros(n, n);
    let mut q0 = Matrix::zeros(n, n);
    let mut q1 = Matrix::zeros(n, n);
    let mut m = Matrix::zeros(n, n);
    let mut s1 = Matrix::zeros(n, n);
    let mut r1 = Matrix::zeros(n, n);
    for j in 1..n {
        let jj = j as i64;
        let x = jj * (l - jj + 1);
        c0[(j, j - 1)] = g(x);
        c0[(j, j)] = g(-x);
        q1[(j, j - 1)] = q(x, 2 * jj - 1);
    }
    for j in 0..ell {
        let jj = j as i64;
        let x = (jj + 1) * (l - jj);
        c1[(j, j + 1)] = g(x);
        c1[(j, j)] = g(-x);
        q0[(j, j + 1)] = q((jj + 1) * (l + jj + 2), 2 * jj + 3);
        m[(j, j + 1)] = g((jj + 1) * (l + jj + 2));
        s1[(j, j + 1)] = g(2 * (jj + 1));
        r1[(j, j + 1)] = q(jj + 1, 2);
        r1[(j + 1, j)] = q(-(l - jj), 2);
    }
    let c = diag(&|j| g(2 * j + 3));
    let b = (&c - &s1).scale(&q(1, 2));
    let u = Matrix::from_fn(n, n, |j, k| hahn_value(k, j, ell).expect("indices in range"));
    let u_inv = u.inverse().expect("Hahn matrix is invertible");
    StructureSet {
        ell,
        a0: diag(&|j| g(l - 2 * j)),
        c0,
        c1,
        v0: diag(&|j| g(j * (j + 1))),
        v: diag(&|j| g(j * (j + 2))),
        c,
        j: diag(&|j| g(j)),
        q0,
        q1,
        m,
        s1,
        r1,
        r2: diag(&|j| q(l - 2 * j, 2)),
        lambda0: diag(&|j| g(-j * (j + 2))),
        m0: diag(&|j| q(-j * (l + 2), 2)),
        b,
        u,
        u_inv,
        ustar_u: Matrix::diag((0..n).map(|j| GR::real(hahn_norm(ell, j))).collect()),
    }
}

/// `L(λ)` for an arbitrary `λ`.
pub fn build_l(ell: usize, lam: &GR) -> Matrix {
    let n = ell + 1;
    let l = ell as i64;
    let mut out = Matrix::zeros(n, n);
    for j in 0..n {
        let jj = j as i64;
        out[(j, j)] = q(-jj * (jj + 1), 2);
        if j >= 1 {
            let f = GR::i().scale(&rat(-jj * (l - jj + 1), 2 * (2 * jj - 1) * (2 * jj + 1)));
            out[(j, j - 1)] = &f * &(g((jj - 1) * (jj + 1)) + lam);
        }
        if j < ell {
            out[(j, j + 1)] = GR::i().scale(&rat(-(jj + 1) * (l + jj + 2), 2));
        }
    }
    out
}

/// `L(λ)` at `λ = -n(n+2)`.
pub fn build_l_n(ell: usize, n: usize) -> Matrix {
    let n = n as i64;
    build_l(ell, &g(-n * (n + 2)))
}

/// `λ_w(k) = -(w+k)(w+k+2)`.
pub fn lambda_wk(w: usize, k: usize) -> i64 {
    let n = (w + k) as i64;
    -n * (n + 2)
}

/// `μ_w(k) = w(ℓ/2 - k) - k(ℓ/2 + 1)`.
pub fn mu_wk(ell: usize, w: usize, k: usize) -> BigRational {
    let half = rat(ell as i64, 2);
    let (w, k) = (int(w as i64), int(k as i64));
    &w * (&half - &k) - &k * (&half + int(1))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenLedger {
    pub ell: usize,
    pub w: usize,
    pub k: usize,
    #[serde(serialize_with = "ser_rat")]
    pub m1: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub m2: BigRational,
    pub lambda: i64,
    #[serde(serialize_with = "ser_rat")]
    pub mu: BigRational,
}

fn ser_rat<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&GR::real(r.clone()).to_string())
}

pub fn eigen_ledger(ell: usize, w: usize, k: usize) -> Result<EigenLedger> {
    if k > ell {
        return Err(Error::IndexOutOfRange(format!("k={k} > l={ell}")));
    }
    let half = rat(ell as i64, 2);
    let m1 = int(w as i64) + &half;
    let m2 = &half - int(k as i64);
    let entry = EigenLedger { ell, w, k, m1, m2, lambda: lambda_wk(w, k), mu: mu_wk(ell, w, k) };
    debug_assert!(entry.is_consistent());
    Ok(entry)
}

pub fn eigen_ledger_from_rep(ell: usize, m1: &BigRational, m2: &BigRational) -> Result<EigenLedger> {
    let half = rat(ell as i64, 2);
    let w = m1 - &half;
    let k = &half - m2;
    let reject = || Error::NoKType { m1: GR::real(m1.clone()).to_string(), m2: GR::real(m2.clone()).to_string(), dim: ell + 1 };
    if w.is_negative() || m2.abs() > half || !w.is_integer() || !k.is_integer() {
        return Err(reject());
    }
    let w = usize::try_from(w.to_integer()).map_err(|_| reject())?;
    let k = usize::try_from(k.to_integer()).map_err(|_| reject())?;
    eigen_ledger(ell, w, k)
}

impl EigenLedger {
    /// Checks the `(m1, m2)` formulas against the `(w, k)` ones.
    pub fn is_consistent(&self) -> bool {
        let d = &self.m1 - &self.m2;
        let lam = -(&d * (&d + int(2)));
        let mu = -rat((self.ell * (self.ell + 2)) as i64, 4) + (&self.m1 + int(1)) * &self.m2;
        lam == int(self.lambda) && mu == self.mu
    }

    pub fn lambda_gr(&self) -> GR {
        g(self.lambda)
    }

    pub fn mu_gr(&self) -> GR {
        GR::real(self.mu.clone())
    }
}

/// `Λ_w = diag(λ_w(k))`.
pub fn lambda_matrix(ell: usize, w: usize) -> Matrix {
    Matrix::diag((0..=ell).map(|k| g(lambda_wk(w, k))).collect())
}

/// `M_w = diag(μ_w(k))`.
pub fn mu_matrix(ell: usize, w: usize) -> Matrix {
    Matrix::diag((0..=ell).map(|k| GR::real(mu_wk(ell, w, k))).collect())
}

pub fn is_zero_matrix(m: &Matrix) -> bool {
    m.entries().iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn ell_zero() {
        let s = build_structures(0);
        assert_eq!(s.c, Matrix::diag(vec![g(3)]));
        assert_eq!(s.b, Matrix::diag(vec![q(3, 2)]));
        for m in [&s.a0, &s.c0, &s.c1, &s.v0, &s.v, &s.j, &s.q0, &s.q1, &s.m, &s.s1, &s.r1, &s.r2, &s.lambda0, &s.m0] {
            assert!(is_zero_matrix(m), "{m:?}");
        }
    }

    #[test]
    fn ell_two_c0_plus_c1() {
        let s = build_structures(2);
        let want = Matrix::from_int_rows(&[&[-2, 2, 0], &[2, -4, 2], &[0, 2, -2]]);
        assert_eq!(&s.c0 + &s.c1, want);
    }

    #[test]
    fn ell_two_hahn_matrix() {
        let s = build_structures(2);
        assert_eq!(s.u, Matrix::from_int_rows(&[&[1, 1, 1], &[1, 0, -2], &[1, -1, 1]]));
    }

    #[test]
    fn shapes() {
        for l in 0..7 {
            let s = build_structures(l);
            for m in [&s.a0, &s.v0, &s.v, &s.c, &s.j, &s.r2, &s.lambda0, &s.m0, &s.ustar_u] {
                assert!(m.is_diagonal());
            }
            assert!(s.q0.is_strictly_upper() && s.m.is_strictly_upper() && s.s1.is_strictly_upper());
            assert!(s.q1.is_strictly_lower());
            assert!(s.c0.is_lower_triangular() && s.c1.is_upper_triangular());
            for j in 0..=l {
                assert_eq!(s.b[(j, j)], q(2 * j as i64 + 3, 2));
            }
        }
    }

    #[test]
    fn l_zero() {
        assert!(is_zero_matrix(&build_l_n(0, 3)));
    }

    #[test]
    fn l_eigenvector_ell2_n1() {
        let l = build_l_n(2, 1);
        let a = vec![GR::one(), -GR::i(), GR::zero()];
        let la = l.mul_vec(&a);
        let mu = g(-2);
        assert_eq!(la, a.iter().map(|x| x * &mu).collect::<Vec<_>>());
        // the last row reads 0 = μ·0 because the subdiagonal factor (n-ℓ+1) vanishes
        assert!(l[(2, 1)].is_zero());
    }

    #[test]
    fn l_entries_at_polynomial_lambda() {
        // subdiagonal in the factored form i·j(ℓ-j+1)(n-j+1)(n+j+1)/(2(2j-1)(2j+1))
        for l in 0..7i64 {
            for n in 0..9i64 {
                let m = build_l_n(l as usize, n as usize);
                for j in 1..=l {
                    let want = GR::i().scale(&rat(
                        j * (l - j + 1) * (n - j + 1) * (n + j + 1),
                        2 * (2 * j - 1) * (2 * j + 1),
                    ));
                    assert_eq!(m[(j as usize, j as usize - 1)], want);
                }
            }
        }
    }

    #[test]
    fn ledger_examples() {
        let e = eigen_ledger(2, 1, 1).unwrap();
        assert_eq!((e.m1.clone(), e.m2.clone()), (int(2), int(0)));
        assert_eq!(e.lambda, -8);
        assert_eq!(e.mu, int(-2));
        for l in 0..6 {
            let e = eigen_ledger(l, 0, 0).unwrap();
            assert_eq!((e.lambda, e.mu), (0, int(0)));
        }
        let e = eigen_ledger_from_rep(2, &int(1), &int(1)).unwrap();
        assert_eq!((e.w, e.k, e.lambda, e.mu), (0, 0, 0, int(0)));
    }

    #[test]
    fn ledger_rejects_missing_ktype() {
        assert!(eigen_ledger_from_rep(2, &int(0), &int(0)).is_err());
        assert!(eigen_ledger_from_rep(2, &int(3), &int(2)).is_err());
        assert!(eigen_ledger_from_rep(2, &rat(3, 2), &int(0)).is_err());
    }

    #[test]
    fn ledger_consistent_odd_ell() {
        for l in 0..8 {
            for w in 0..9 {
                for k in 0..=l {
                    let e = eigen_ledger(l, w, k).unwrap();
                    assert!(e.is_consistent());
                    assert_eq!(eigen_ledger_from_rep(l, &e.m1, &e.m2).unwrap(), e);
                }
            }
        }
    }
}
