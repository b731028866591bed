//! Exact integration against the matrix weight
//! `W(u) = (2/π)√(1-u²) Ψ*(u) T*(u) U*U T(u) Ψ(u)` on `[-1, 1]`.
//!
//! The inner product is `⟨F, G⟩ = ∫ G(u)* W(u) F(u) du`. Swapping the
//! arguments conjugate-transposes the result.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Matrix, MatrixPolynomial, Polynomial, Var, GR};
use crate::error::{Error, Result};
use crate::family::{build_pw, FamilyPackage};
use crate::operators::{apply, MatrixODEOperator};
use crate::special::factorial;
use crate::structures::build_structures;

/// `(2/π) ∫ u^m √(1-u²) du` over `[-1, 1]`, which is the Catalan-type
/// number `(2t)! / (4^t t! (t+1)!)` for `m = 2t`.
pub fn chebyshev_moment(m: usize) -> BigRational {
    if m % 2 == 1 {
        return BigRational::zero();
    }
    let t = (m / 2) as u64;
    let den = BigInt::from(4u8).pow(t as u32) * factorial(t) * factorial(t + 1);
    BigRational::new(factorial(2 * t), den)
}

/// The same moment by adaptive Simpson quadrature after `u = cos θ`.
pub fn chebyshev_moment_numeric(m: usize, tol: f64) -> f64 {
    let f = |th: f64| th.cos().powi(m as i32) * th.sin().powi(2);
    fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(a, m, fa, flm, fm);
        let right = simpson(m, b, fm, frm, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    // several starting panels, since a single one can sample only zeros
    let panels = 16;
    let h = std::f64::consts::PI / panels as f64;
    let total: f64 = (0..panels)
        .map(|p| {
            let (a, b) = (p as f64 * h, (p + 1) as f64 * h);
            let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
            let whole = simpson(a, b, fa, fm, fb);
            rec(&f, a, b, fa, fm, fb, whole, tol / panels as f64, 40)
        })
        .sum();
    2.0 / std::f64::consts::PI * total
}

/// Integral of a scalar polynomial in `u` against the normalized measure.
pub fn integrate_poly(p: &Polynomial) -> GR {
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(m, _)| m % 2 == 0)
        .map(|(m, c)| c.scale(&chebyshev_moment(m)))
        .sum()
}

pub fn integrate(m: &MatrixPolynomial) -> Matrix {
    Matrix::from_fn(m.rows(), m.cols(), |i, j| integrate_poly(&m[(i, j)]))
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightMatrix {
    pub ell: usize,
    /// `Ψ* diag(‖u_j‖² (1-u²)^j) Ψ`; the full weight is this times `(2/π)√(1-u²)`.
    pub poly_part: MatrixPolynomial,
    /// `Σ_c poly_part_c · moment(m + c)` for `m` up to the cached bound.
    #[serde(skip)]
    moments: Vec<Matrix>,
}

impl WeightMatrix {
    pub fn new(ell: usize) -> Result<Self> {
        let psi = build_pw(ell, 0)?;
        Ok(Self::from_psi(ell, &psi))
    }

    pub fn from_psi(ell: usize, psi: &MatrixPolynomial) -> Self {
        let s = build_structures(ell);
        let mid = MatrixPolynomial::from_fn(ell + 1, ell + 1, Var::U, |i, j| {
            if i == j {
                Polynomial::one_minus_sq_pow(j, Var::U).scale(&s.ustar_u[(j, j)])
            } else {
                Polynomial::zero(Var::U)
            }
        });
        let poly_part = &(&psi.conj_transpose() * &mid) * psi;
        Self { ell, poly_part, moments: Vec::new() }
    }

    /// Makes `moment_matrix(m)` available for `m ≤ max`.
    pub fn prepare(&mut self, max: usize) {
        let coeffs = self.poly_part.coeff_matrices();
        let n = self.ell + 1;
        let start = self.moments.len();
        let extra: Vec<Matrix> = (start..=max)
            .into_par_iter()
            .map(|m| {
                let mut acc = Matrix::zeros(n, n);
                for (c, pc) in coeffs.iter().enumerate() {
                    let mo = chebyshev_moment(m + c);
                    if !mo.is_zero() {
                        acc = &acc + &pc.scale(&GR::real(mo));
                    }
                }
                acc
            })
            .collect();
        self.moments.extend(extra);
    }

    fn moment_matrix(&self, m: usize) -> &Matrix {
        &self.moments[m]
    }

    /// The full weight `(2/π)√(1-u²) poly_part(u)` at a point of `[-1, 1]`.
    pub fn eval_f64(&self, u: f64) -> Result<DMatrix<Complex64>> {
        if !(-1.0..=1.0).contains(&u) {
            return Err(Error::Domain(format!("u = {u} is outside [-1, 1]")));
        }
        let pref = 2.0 / std::f64::consts::PI * (1.0 - u * u).sqrt();
        Ok(self.poly_part.eval_f64(u) * Complex64::new(pref, 0.0))
    }

    /// `⟨F, G⟩ = ∫ G* W F`.
    pub fn inner_product(&mut self, f: &MatrixPolynomial, g: &MatrixPolynomial) -> Result<Matrix> {
        let n = self.ell + 1;
        if f.rows() != n || g.rows() != n {
            return Err(Error::SizeMismatch(format!("inner product on {}/{} rows, weight has {n}", f.rows(), g.rows())));
        }
        let need = f.degree().unwrap_or(0) + g.degree().unwrap_or(0);
        self.prepare(need);
        Ok(self.inner_product_prepared(&f.coeff_matrices(), &g.coeff_matrices()))
    }

    fn inner_product_prepared(&self, fc: &[Matrix], gc: &[Matrix]) -> Matrix {
        let mut acc = Matrix::zeros(gc.first().map_or(0, Matrix::cols), fc.first().map_or(0, Matrix::cols));
        for (b, gb) in gc.iter().enumerate() {
            let gb_star = gb.conj_transpose();
            let mut y = Matrix::zeros(self.ell + 1, acc.cols());
            for (a, fa) in fc.iter().enumerate() {
                y = &y + &(self.moment_matrix(a + b) * fa);
            }
            acc = &acc + &(&gb_star * &y);
        }
        acc
    }
}

/// `⟨P̃_w, P̃_{w'}⟩` for `0 ≤ w, w' ≤ w_max`.
#[derive(Clone, Debug, Serialize)]
pub struct GramTable {
    pub ell: usize,
    pub w_max: usize,
    pub entries: Vec<GramEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GramEntry {
    pub w: usize,
    pub w2: usize,
    pub matrix: Matrix,
}

impl GramTable {
    pub fn get(&self, w: usize, w2: usize) -> &Matrix {
        &self.entries[w * (self.w_max + 1) + w2].matrix
    }

    /// Off-diagonal blocks vanish and diagonal blocks are diagonal with
    /// positive real entries.
    pub fn is_orthogonal(&self) -> bool {
        self.entries.iter().all(|e| {
            if e.w != e.w2 {
                e.matrix.is_zero()
            } else {
                e.matrix.is_diagonal()
                    && (0..=self.ell).all(|j| {
                        let d = &e.matrix[(j, j)];
                        d.is_real() && d.re().is_positive()
                    })
            }
        })
    }
}

pub fn gram_table(weight: &mut WeightMatrix, family: &FamilyPackage, w_max: usize) -> Result<GramTable> {
    let fams: Vec<&MatrixPolynomial> = (0..=w_max)
        .map(|w| family.pw_tilde.get(&w).ok_or_else(|| Error::IndexOutOfRange(format!("w={w} not built"))))
        .collect::<Result<_>>()?;
    let max_deg = fams.iter().map(|p| p.degree().unwrap_or(0)).max().unwrap_or(0);
    weight.prepare(2 * max_deg);
    let coeffs: Vec<Vec<Matrix>> = fams.iter().map(|p| p.coeff_matrices()).collect();
    let w: &WeightMatrix = weight;
    let entries = (0..=w_max)
        .flat_map(|a| (0..=w_max).map(move |b| (a, b)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(a, b)| GramEntry { w: a, w2: b, matrix: w.inner_product_prepared(&coeffs[a], &coeffs[b]) })
        .collect();
    Ok(GramTable { ell: family.ell, w_max, entries })
}

/// `⟨e_0, e_0⟩`, the squared norm of the constant spherical function. It
/// equals `ℓ + 1` because `H = (1, …, 1)` for that function.
pub fn trace_norm_check(ell: usize) -> Result<BigRational> {
    let mut w = WeightMatrix::new(ell)?;
    let e0 = MatrixPolynomial::from_fn(ell + 1, 1, Var::U, |i, _| {
        if i == 0 {
            Polynomial::one(Var::U)
        } else {
            Polynomial::zero(Var::U)
        }
    });
    let v = w.inner_product(&e0, &e0)?;
    let v = &v[(0, 0)];
    if !v.is_real() {
        return Err(Error::Precondition("norm is not real".into()));
    }
    Ok(v.re().clone())
}

/// `⟨op F, G⟩ = ⟨F, op G⟩` for `F, G ∈ {P̃_0, …, P̃_{w_max}}`.
pub fn symmetry_check(op: &MatrixODEOperator, weight: &mut WeightMatrix, family: &FamilyPackage, w_max: usize) -> Result<bool> {
    let fams: Vec<&MatrixPolynomial> = (0..=w_max)
        .map(|w| family.pw_tilde.get(&w).ok_or_else(|| Error::IndexOutOfRange(format!("w={w} not built"))))
        .collect::<Result<_>>()?;
    symmetric_on(op, weight, &fams)
}

/// The bilinear check on `u^a I` for `a ≤ degree`, which covers every pair of
/// monomial vectors.
pub fn symmetry_check_monomials(op: &MatrixODEOperator, weight: &mut WeightMatrix, degree: usize) -> Result<bool> {
    let n = weight.ell + 1;
    let monos: Vec<MatrixPolynomial> = (0..=degree)
        .map(|a| MatrixPolynomial::identity(n, Var::U).scale_poly(&Polynomial::monomial(GR::one(), a, Var::U)))
        .collect();
    symmetric_on(op, weight, &monos.iter().collect::<Vec<_>>())
}

fn symmetric_on(op: &MatrixODEOperator, weight: &mut WeightMatrix, fs: &[&MatrixPolynomial]) -> Result<bool> {
    let images = fs.iter().map(|f| apply(op, f)).collect::<Result<Vec<_>>>()?;
    let deg = fs.iter().chain(images.iter().collect::<Vec<_>>().iter()).map(|p| p.degree().unwrap_or(0)).max().unwrap_or(0);
    weight.prepare(2 * deg);
    let c: Vec<Vec<Matrix>> = fs.iter().map(|f| f.coeff_matrices()).collect();
    let ci: Vec<Vec<Matrix>> = images.iter().map(MatrixPolynomial::coeff_matrices).collect();
    let w: &WeightMatrix = weight;
    let pairs: Vec<(usize, usize)> = (0..fs.len()).flat_map(|a| (0..fs.len()).map(move |b| (a, b))).collect();
    Ok(pairs
        .par_iter()
        .all(|&(a, b)| w.inner_product_prepared(&ci[a], &c[b]) == w.inner_product_prepared(&c[a], &ci[b])))
}

/// `poly_part = L · Dg · Uf` with `Uf` unit upper triangular and `L = Uf*`.
#[derive(Clone, Debug, Serialize)]
pub struct Ldu {
    #[serde(rename = "L")]
    pub l: MatrixPolynomial,
    #[serde(rename = "D")]
    pub d: MatrixPolynomial,
    #[serde(rename = "U")]
    pub u: MatrixPolynomial,
}

pub fn ldu_decompose(ell: usize) -> Result<Ldu> {
    let psi = build_pw(ell, 0)?;
    let s = build_structures(ell);
    let n = ell + 1;
    let mut diag = Vec::with_capacity(n);
    for j in 0..n {
        let p = &psi[(j, j)];
        if !p.is_constant() || p.is_zero() {
            return Err(Error::BadDiagonal(j));
        }
        diag.push(p.coeff(0));
    }
    let inv: Vec<GR> = diag.iter().map(|d| d.inv().expect("nonzero")).collect();
    let uf = MatrixPolynomial::from_fn(n, n, Var::U, |i, j| psi[(i, j)].scale(&inv[i]));
    let d = MatrixPolynomial::from_fn(n, n, Var::U, |i, j| {
        if i == j {
            let c = GR::real(diag[j].norm_sqr()) * &s.ustar_u[(j, j)];
            Polynomial::one_minus_sq_pow(j, Var::U).scale(&c)
        } else {
            Polynomial::zero(Var::U)
        }
    });
    Ok(Ldu { l: uf.conj_transpose(), d, u: uf })
}

/// The constant matrices commuting with `poly_part(u)` for every `u`.
#[derive(Clone, Debug, Serialize)]
pub struct Commutant {
    pub ell: usize,
    pub dimension: usize,
    /// Starts with the identity.
    pub basis: Vec<Matrix>,
    pub reduction: Option<Reduction>,
}

/// `R = [ker(B - r) | ker(B - r)^⊥]` for a self-adjoint non-scalar `B` in the
/// commutant, with `R* poly_part R` block diagonal.
#[derive(Clone, Debug, Serialize)]
pub struct Reduction {
    pub self_adjoint: Matrix,
    pub eigenvalue: GR,
    pub r: Matrix,
    pub block_sizes: (usize, usize),
    pub reduced: MatrixPolynomial,
}

fn vec_to_matrix(n: usize, v: &[GR]) -> Matrix {
    Matrix::from_fn(n, n, |i, j| v[i * n + j].clone())
}

fn matrix_to_vec(m: &Matrix) -> Vec<GR> {
    let n = m.rows();
    (0..n * n).map(|k| m[(k / n, k % n)].clone()).collect()
}

fn rank_of(vs: &[Vec<GR>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    Matrix::from_fn(vs.len(), vs[0].len(), |i, j| vs[i][j].clone()).rank()
}

pub fn commutant(weight: &WeightMatrix) -> Result<Commutant> {
    let n = weight.ell + 1;
    let coeffs = weight.poly_part.coeff_matrices();
    let nn = n * n;
    // row (c, i, j): Σ_k A_ik W_c[k, j] - W_c[i, k] A_kj
    let mut rows = Vec::new();
    for wc in &coeffs {
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![GR::zero(); nn];
                for k in 0..n {
                    row[i * n + k] += &wc[(k, j)];
                    row[k * n + j] -= &wc[(i, k)];
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let null = if rows.is_empty() {
        (0..nn).map(|k| (0..nn).map(|c| if c == k { GR::one() } else { GR::zero() }).collect()).collect()
    } else {
        Matrix::from_fn(rows.len(), nn, |i, j| rows[i][j].clone()).nullspace()
    };
    let mut basis_vecs = vec![matrix_to_vec(&Matrix::identity(n))];
    for v in null {
        let mut trial = basis_vecs.clone();
        trial.push(v.clone());
        if rank_of(&trial) == trial.len() {
            basis_vecs = trial;
        }
    }
    let basis: Vec<Matrix> = basis_vecs.iter().map(|v| vec_to_matrix(n, v)).collect();
    let reduction = if basis.len() > 1 { Some(reduce(weight, &basis[1])?) } else { None };
    Ok(Commutant { ell: weight.ell, dimension: basis.len(), basis, reduction })
}

fn self_adjoint_from(a: &Matrix) -> Matrix {
    let b = a + &a.conj_transpose();
    if !b.is_scalar() {
        return b;
    }
    // A + A* = cI, so i(A - (c/2)I) is self-adjoint and not scalar
    let half_c = &b[(0, 0)] * &GR::from_frac(1, 2);
    (a - &Matrix::identity(a.rows()).scale(&half_c)).scale(&GR::i())
}

/// Best rational approximation with denominator at most `max_den`.
fn rationalize(x: f64, max_den: i64) -> Option<BigRational> {
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        let ai = a.to_i64()?;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = y - a;
        if frac.abs() < 1e-12 {
            break;
        }
        y = 1.0 / frac;
    }
    (k1 != 0).then(|| BigRational::new(BigInt::from(h1), BigInt::from(k1)))
}

/// Orthogonalizes over `ℚ(i)` without normalizing.
fn gram_schmidt(vs: Vec<Vec<GR>>) -> Vec<Vec<GR>> {
    let dot = |a: &[GR], b: &[GR]| -> GR { a.iter().zip(b).map(|(x, y)| &x.conj() * y).sum() };
    let mut out: Vec<Vec<GR>> = Vec::new();
    for mut v in vs {
        for q in &out {
            let c = &dot(q, &v) / &dot(q, q);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= &c * qi;
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            out.push(v);
        }
    }
    out
}

fn reduce(weight: &WeightMatrix, a: &Matrix) -> Result<Reduction> {
    let n = a.rows();
    let b = self_adjoint_from(a);
    let eig = nalgebra::SymmetricEigen::new(b.to_complex().map(|z| z.re)).eigenvalues;
    let mut candidates: Vec<f64> = eig.iter().copied().collect();
    candidates.sort_by(f64::total_cmp);
    let r = candidates
        .iter()
        .filter_map(|&x| rationalize(x, 1 << 20))
        .map(GR::real)
        .find(|r| (&b - &Matrix::identity(n).scale(r)).rank() < n)
        .ok_or_else(|| Error::Precondition("no rational eigenvalue for the self-adjoint element".into()))?;
    let shifted = &b - &Matrix::identity(n).scale(&r);
    let ker = gram_schmidt(shifted.nullspace());
    // the orthogonal complement of the kernel is the column space of B - r
    let (_, pivots) = shifted.rref();
    let img = gram_schmidt(pivots.iter().map(|&p| shifted.column(p)).collect());
    let cols: Vec<Vec<GR>> = ker.iter().chain(img.iter()).cloned().collect();
    let rm = Matrix::from_fn(n, n, |i, j| cols[j][i].clone());
    let reduced = &(&MatrixPolynomial::from_const(&rm.conj_transpose(), Var::U) * &weight.poly_part)
        * &MatrixPolynomial::from_const(&rm, Var::U);
    let k = ker.len();
    let blocks_ok = (0..n).all(|i| (0..n).all(|j| (i < k) == (j < k) || reduced[(i, j)].is_zero()));
    if !blocks_ok {
        return Err(Error::Precondition("reduction is not block diagonal".into()));
    }
    Ok(Reduction { self_adjoint: b, eigenvalue: r, r: rm, block_sizes: (k, n - k), reduced })
}

impl Ldu {
    pub fn reassemble(&self) -> MatrixPolynomial {
        &(&self.l * &self.d) * &self.u
    }
}
