//! Power-series solutions of `s(1-s)F'' + (B - sC)F' + (Λ0 - λ)F = 0`, the
//! form `D̃F = λF` takes after `u = 1 - 2s`, and the tridiagonal eigenproblem
//! for `L(λ)`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{Matrix, MatrixPolynomial, Polynomial, Var, GR};
use crate::error::{Error, Result};
use crate::family::{coeffs_by_recursion, CoefficientVector};
use crate::structures::{build_structures, mu_wk, StructureSet};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypSolution {
    pub ell: usize,
    pub lambda: GR,
    #[serde(rename = "F0")]
    pub f0: Vec<GR>,
    /// Taylor coefficients at `s = 0`, so `F(s) = Σ coefficients[i] s^i`.
    pub coefficients: Vec<Vec<GR>>,
    pub is_polynomial: bool,
    pub degree: Option<usize>,
}

impl HypSolution {
    /// The solution as an `(ℓ+1) × 1` polynomial in `s`, when it terminates.
    pub fn polynomial(&self) -> Option<MatrixPolynomial> {
        if !self.is_polynomial {
            return None;
        }
        let n = self.ell + 1;
        Some(MatrixPolynomial::from_fn(n, 1, Var::S, |j, _| {
            Polynomial::new(self.coefficients.iter().map(|f| f[j].clone()).collect(), Var::S)
        }))
    }
}

fn is_zero_vec(v: &[GR]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Back substitution with the upper bidiagonal `B + i`.
fn solve_b_shift(s: &StructureSet, i: usize, rhs: &[GR]) -> Vec<GR> {
    let n = rhs.len();
    let shift = GR::from_int(i as i64);
    let mut x = vec![GR::zero(); n];
    for j in (0..n).rev() {
        let mut acc = rhs[j].clone();
        if j + 1 < n {
            acc -= &s.b[(j, j + 1)] * &x[j + 1];
        }
        let d = &s.b[(j, j)] + &shift;
        assert!(!d.is_zero(), "B + i has diagonal j + 3/2 + i");
        x[j] = &acc / &d;
    }
    x
}

/// `(i(C+i-1) - Λ0 + λ) F_i`, which is diagonal in the standard basis.
fn middle(s: &StructureSet, i: usize, lam: &GR, f: &[GR]) -> Vec<GR> {
    let ii = GR::from_int(i as i64);
    f.iter()
        .enumerate()
        .map(|(j, fj)| {
            let d = &(&(&ii * &(&(&s.c[(j, j)] + &ii) - &GR::one())) - &s.lambda0[(j, j)]) + lam;
            &d * fj
        })
        .collect()
}

fn step(s: &StructureSet, i: usize, lam: &GR, f: &[GR]) -> Vec<GR> {
    let scale = GR::from_frac(1, (i + 1) as i64);
    solve_b_shift(s, i, &middle(s, i, lam, f)).into_iter().map(|x| &x * &scale).collect()
}

/// Runs the recursion from `F0` until a coefficient vanishes or
/// `max_terms` coefficients have been produced.
pub fn hyp_solve(ell: usize, lam: &GR, f0: &[GR], max_terms: usize) -> Result<HypSolution> {
    if f0.len() != ell + 1 {
        return Err(Error::SizeMismatch(format!("F0 has {} entries, expected {}", f0.len(), ell + 1)));
    }
    let s = build_structures(ell);
    let mut coefficients = vec![f0.to_vec()];
    let mut terminated = is_zero_vec(f0);
    while !terminated && coefficients.len() < max_terms.max(1) {
        let i = coefficients.len() - 1;
        let next = step(&s, i, lam, &coefficients[i]);
        if is_zero_vec(&next) {
            terminated = true;
        } else {
            coefficients.push(next);
        }
    }
    if !terminated && coefficients.len() == max_terms.max(1) {
        // the last stored coefficient may still be followed by a zero one
        let i = coefficients.len() - 1;
        terminated = is_zero_vec(&step(&s, i, lam, &coefficients[i]));
    }
    let degree = if terminated && !is_zero_vec(f0) { Some(coefficients.len() - 1) } else { None };
    Ok(HypSolution { ell, lambda: lam.clone(), f0: f0.to_vec(), coefficients, is_polynomial: terminated, degree })
}

/// The linear maps `F0 ↦ F_i` for `0 ≤ i ≤ count`.
fn transfer_matrices(s: &StructureSet, lam: &GR, count: usize) -> Vec<Matrix> {
    let n = s.ell + 1;
    let mut out = vec![Matrix::identity(n)];
    for i in 0..count {
        let prev = &out[i];
        let cols: Vec<Vec<GR>> = (0..n).map(|c| step(s, i, lam, &prev.column(c))).collect();
        out.push(Matrix::from_fn(n, n, |r, c| cols[c][r].clone()));
    }
    out
}

/// A polynomial solution of exact degree `degree` at `λ = -n(n+2)`.
#[derive(Clone, Debug, Serialize)]
pub struct PolynomialSolution {
    pub n: usize,
    pub degree: usize,
    /// The index of the only nonzero entry of the leading coefficient.
    pub leading_index: usize,
    pub solution: HypSolution,
}

/// Every degree in which `D̃F = -n(n+2)F` has a polynomial solution, with one
/// solution per degree. Solutions of degree `≤ w` are exactly the `F0` in
/// the kernel of the transfer map to `F_{w+1}`; beyond degree `n` the middle
/// factor is invertible, so no new solutions appear.
pub fn polynomial_solutions(ell: usize, n: usize) -> Result<Vec<PolynomialSolution>> {
    let s = build_structures(ell);
    let nn = n as i64;
    let lam = GR::from_int(-nn * (nn + 2));
    let t = transfer_matrices(&s, &lam, n + 1);
    let mut out = Vec::new();
    let mut prev_dim = 0;
    for w in 0..=n {
        let ker = t[w + 1].nullspace();
        if ker.len() == prev_dim {
            continue;
        }
        if ker.len() != prev_dim + 1 {
            return Err(Error::Precondition(format!("degree {w} solution space grew by {}", ker.len() - prev_dim)));
        }
        prev_dim = ker.len();
        let f0 = ker
            .into_iter()
            .find(|v| !is_zero_vec(&t[w].mul_vec(v)))
            .ok_or_else(|| Error::Precondition(format!("no exact degree {w} solution")))?;
        let sol = hyp_solve(ell, &lam, &f0, w + 2)?;
        let lead = &sol.coefficients[w];
        let nz: Vec<usize> = (0..=ell).filter(|&j| !lead[j].is_zero()).collect();
        if nz.len() != 1 || sol.degree != Some(w) {
            return Err(Error::Precondition(format!("degree {w} solution has leading support {nz:?}")));
        }
        out.push(PolynomialSolution { n, degree: w, leading_index: nz[0], solution: sol });
    }
    Ok(out)
}

/// Solutions of `L(-n(n+2)) a = μ a` for `μ = μ_w(k)`, `w + k = n`, in
/// increasing `k`.
pub fn l_eigensolve(ell: usize, n: usize) -> Result<Vec<(GR, CoefficientVector)>> {
    (0..=n.min(ell))
        .map(|k| {
            let w = n - k;
            Ok((GR::real(mu_wk(ell, w, k)), coeffs_by_recursion(ell, w, k)?))
        })
        .collect()
}
