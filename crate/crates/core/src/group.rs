//! Floating-point geometry of `SO(4)` and `SO(3)`: the double cover on
//! `Λ²(ℝ⁴)`, the representations `π_ℓ` of `SO(3)`, and reconstruction of the
//! spherical functions `Φ = H Φ_π` from the exact polynomial data.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::family::HFunction;

pub type CMatrix = DMatrix<Complex64>;

/// Tolerance for single operations on unit-scale matrices.
pub const TOL_SINGLE: f64 = 1e-9;
/// Tolerance for composite checks.
pub const TOL_COMPOSITE: f64 = 1e-7;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

pub fn max_abs_c(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.norm()))
}

/// A real orthogonal matrix of size 3 or 4 with determinant 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Rotation(DMatrix<f64>);

impl Rotation {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        if !(n == 3 || n == 4) || m.ncols() != n {
            return Err(Error::NotRotation(format!("{}x{} matrix", m.nrows(), m.ncols())));
        }
        let err = max_abs(&(m.transpose() * &m - DMatrix::identity(n, n)));
        if err >= TOL_SINGLE {
            return Err(Error::NotRotation(format!("|QᵀQ - I| = {err:e}")));
        }
        let det = m.determinant();
        if (det - 1.0).abs() >= TOL_SINGLE {
            return Err(Error::NotRotation(format!("det = {det}")));
        }
        Ok(Self(m))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotRotation("ragged rows".into()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim()).map(|i| self.0.row(i).iter().copied().collect()).collect()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self(&self.0 * &o.0)
    }

    pub fn neg(&self) -> Self {
        Self(-&self.0)
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    /// `k ↦ diag(k, 1)`.
    pub fn embed(&self) -> Self {
        let mut m = DMatrix::identity(4, 4);
        m.view_mut((0, 0), (3, 3)).copy_from(&self.0);
        Self(m)
    }

    /// Rotation in the `(1, 4)`-plane.
    pub fn a_theta(theta: f64) -> Self {
        let (s, co) = theta.sin_cos();
        let mut m = DMatrix::identity(4, 4);
        m[(0, 0)] = co;
        m[(0, 3)] = s;
        m[(3, 0)] = -s;
        m[(3, 3)] = co;
        Self(m)
    }

    /// Rotation in the `(2, 3)`-plane of `ℝ³`, fixing `e_1`.
    pub fn m_theta(theta: f64) -> Self {
        let (s, co) = theta.sin_cos();
        let mut m = DMatrix::identity(3, 3);
        m[(1, 1)] = co;
        m[(1, 2)] = s;
        m[(2, 1)] = -s;
        m[(2, 2)] = co;
        Self(m)
    }

    /// `exp(βY_1)` in `ℝ³`, a rotation in the `(1, 2)`-plane.
    pub fn y1_theta(beta: f64) -> Self {
        let (s, co) = beta.sin_cos();
        let mut m = DMatrix::identity(3, 3);
        m[(0, 0)] = co;
        m[(0, 1)] = s;
        m[(1, 0)] = -s;
        m[(1, 1)] = co;
        Self(m)
    }

    /// `exp(X)` for a random skew `X`, reproducible from the generator.
    pub fn random(n: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut x = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v: f64 = rng.random_range(-2.0..2.0);
                x[(i, j)] = v;
                x[(j, i)] = -v;
            }
        }
        let m = x.exp();
        // re-orthogonalize away the last bits of round-off
        let qr = m.qr();
        let (mut q, r) = (qr.q(), qr.r());
        for j in 0..n {
            if r[(j, j)] < 0.0 {
                q.column_mut(j).neg_mut();
            }
        }
        Self(q)
    }
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// `q(g)` on `Λ²(ℝ⁴)` in the basis `e_i ∧ e_j`, `i < j`.
fn wedge(g: &DMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(6, 6, |r, col| {
        let (i, j) = PAIRS[col];
        let (k, l) = PAIRS[r];
        g[(k, i)] * g[(l, j)] - g[(l, i)] * g[(k, j)]
    })
}

fn wedge_vector(terms: &[(f64, (usize, usize))]) -> DVector<f64> {
    let mut v = DVector::zeros(6);
    for &(s, p) in terms {
        v[PAIRS.iter().position(|&q| q == p).unwrap()] += s;
    }
    v / 2f64.sqrt()
}

/// Orthonormal bases of the two invariant subspaces. The first is the
/// displayed spanning set with its last two vectors negated, which makes
/// `a(k) = k` on the embedded `SO(3)`.
fn cover_bases() -> (Vec<DVector<f64>>, Vec<DVector<f64>>) {
    let v1 = vec![
        wedge_vector(&[(1.0, (0, 3)), (1.0, (1, 2))]),
        wedge_vector(&[(-1.0, (0, 2)), (1.0, (1, 3))]),
        wedge_vector(&[(1.0, (0, 1)), (1.0, (2, 3))]),
    ];
    let v2 = vec![
        wedge_vector(&[(1.0, (0, 3)), (-1.0, (1, 2))]),
        wedge_vector(&[(1.0, (0, 2)), (1.0, (1, 3))]),
        wedge_vector(&[(-1.0, (0, 1)), (1.0, (2, 3))]),
    ];
    (v1, v2)
}

/// `(a(g), b(g))`, the two blocks of `q(g)`.
pub fn wedge_cover(g: &Rotation) -> Result<(Rotation, Rotation)> {
    if g.dim() != 4 {
        return Err(Error::NotRotation("the cover needs a 4x4 matrix".into()));
    }
    let q = wedge(g.matrix());
    let (v1, v2) = cover_bases();
    let block = |a: &[DVector<f64>], b: &[DVector<f64>]| DMatrix::from_fn(3, 3, |m, n| a[m].dot(&(&q * &b[n])));
    let off = max_abs(&block(&v1, &v2)).max(max_abs(&block(&v2, &v1)));
    if off >= TOL_SINGLE {
        return Err(Error::NotRotation(format!("off-diagonal block of size {off:e}")));
    }
    Ok((Rotation::new(block(&v1, &v1))?, Rotation::new(block(&v2, &v2))?))
}

/// The `(ℓ+1)`-dimensional representation of `SO(3)` in the basis `v_j`.
#[derive(Clone, Debug)]
pub struct RepSO3 {
    pub ell: usize,
    pub de: CMatrix,
    pub df: CMatrix,
    pub dh: CMatrix,
}

impl RepSO3 {
    pub fn new(ell: usize) -> Self {
        let n = ell + 1;
        let mut de = CMatrix::zeros(n, n);
        let mut df = CMatrix::zeros(n, n);
        let mut dh = CMatrix::zeros(n, n);
        for j in 0..n {
            dh[(j, j)] = c(ell as f64 - 2.0 * j as f64);
            if j >= 1 {
                de[(j - 1, j)] = c((ell - j + 1) as f64);
            }
            if j + 1 < n {
                df[(j + 1, j)] = c((j + 1) as f64);
            }
        }
        Self { ell, de, df, dh }
    }

    /// `dπ(X)` for a real skew 3×3 matrix `X`.
    pub fn dpi(&self, x: &DMatrix<f64>) -> CMatrix {
        let (c1, c2, c3) = (x[(1, 0)], x[(2, 0)], x[(2, 1)]);
        let i_half = Complex64::new(0.0, 0.5);
        (&self.de + &self.df) * (i_half * c1) + (&self.de - &self.df) * c(0.5 * c2) - &self.dh * (i_half * c3)
    }

    /// `dπ(Y_1)`, `dπ(Y_2)`, `dπ(Y_3)`.
    pub fn dpi_y(&self) -> [CMatrix; 3] {
        let y = |i: usize, j: usize| {
            let mut m = DMatrix::zeros(3, 3);
            m[(i, j)] = 1.0;
            m[(j, i)] = -1.0;
            m
        };
        [self.dpi(&y(0, 1)), self.dpi(&y(0, 2)), self.dpi(&y(1, 2))]
    }

    /// `π(m_θ) = diag(e^{iθ(ℓ-2j)/2})`.
    pub fn m_theta(&self, theta: f64) -> CMatrix {
        CMatrix::from_diagonal(&DVector::from_fn(self.ell + 1, |j, _| {
            Complex64::from_polar(1.0, theta * (self.ell as f64 - 2.0 * j as f64) / 2.0)
        }))
    }
}

/// Taylor series with scaling and squaring, truncated once a term drops
/// below `1e-16` in max norm.
pub fn exp_series(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm = max_abs_c(a) * n as f64;
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a / c(2f64.powi(squarings as i32));
    let mut sum = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for k in 1..200 {
        term = &term * &scaled / c(k as f64);
        sum += &term;
        if max_abs_c(&term) < 1e-16 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Angles with `k = m_α exp(βY_1) m_γ`.
pub fn euler_xzx(k: &DMatrix<f64>) -> (f64, f64, f64) {
    let beta = k[(0, 0)].clamp(-1.0, 1.0).acos();
    let s = beta.sin();
    if s.abs() > 1e-7 {
        let alpha = k[(2, 0)].atan2(-k[(1, 0)]);
        let gamma = k[(0, 2)].atan2(k[(0, 1)]);
        (alpha, beta, gamma)
    } else if k[(0, 0)] > 0.0 {
        // k fixes e_1 and is itself some m_α
        (k[(1, 2)].atan2(k[(1, 1)]), 0.0, 0.0)
    } else {
        (k[(2, 1)].atan2(-k[(1, 1)]), std::f64::consts::PI, 0.0)
    }
}

/// `π_ℓ(k)` through the factorization `k = m_α exp(βY_1) m_γ`.
pub fn rep_exp(rep: &RepSO3, k: &Rotation) -> Result<CMatrix> {
    if k.dim() != 3 {
        return Err(Error::NotRotation("π_ℓ needs a 3x3 matrix".into()));
    }
    let (alpha, beta, gamma) = euler_xzx(k.matrix());
    let [y1, _, _] = rep.dpi_y();
    let middle = exp_series(&(y1 * c(beta)));
    Ok(rep.m_theta(alpha) * middle * rep.m_theta(gamma))
}

/// `Φ_π(g) = π(a(g))`.
pub fn phi_pi(rep: &RepSO3, g: &Rotation) -> Result<CMatrix> {
    let (a, _) = wedge_cover(g)?;
    rep_exp(rep, &a)
}

/// The section `A(y)` with `A(y) e_1 = y/‖y‖`, defined off the ray
/// `{(t, 0, 0) : t ≤ 0}`.
pub fn section_a(y: &[f64; 3]) -> DMatrix<f64> {
    let r = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
    let (y1, y2, y3) = (y[0], y[1], y[2]);
    let d = r + y1;
    DMatrix::from_row_slice(
        3,
        3,
        &[
            y1,
            -y2,
            -y3,
            y2,
            -y2 * y2 / d + r,
            -y2 * y3 / d,
            y3,
            -y2 * y3 / d,
            -y3 * y3 / d + r,
        ],
    ) / r
}

/// `k_0 ∈ SO(3)` and `u` with `g e_4 = k_0 (√(1-u²), 0, 0, u)`.
pub fn k_section(g: &Rotation) -> (Rotation, f64) {
    let m = g.matrix();
    let x = [m[(0, 3)], m[(1, 3)], m[(2, 3)]];
    let u = m[(3, 3)].clamp(-1.0, 1.0);
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    if r < 1e-12 {
        return (Rotation::identity(3), u);
    }
    if r + x[0] > 1e-3 * r {
        return (Rotation(section_a(&x)), u);
    }
    // near the excluded ray use the chart rotated by diag(-1, -1, 1)
    let flip = DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, -1.0, 1.0]));
    let k0 = &flip * section_a(&[-x[0], -x[1], x[2]]);
    (Rotation(k0), u)
}

/// The spherical function of type `π_ℓ` indexed by `(w, k)`.
#[derive(Clone, Debug)]
pub struct SphericalFunction {
    pub rep: RepSO3,
    pub h: HFunction,
}

impl SphericalFunction {
    pub fn new(ell: usize, w: usize, k: usize) -> Result<Self> {
        Ok(Self { rep: RepSO3::new(ell), h: HFunction::new(ell, w, k)? })
    }

    /// `H(g) = π(k_0) diag(H(u)) π(k_0)⁻¹`.
    pub fn h_of_g(&self, g: &Rotation) -> Result<CMatrix> {
        let (k0, u) = k_section(g);
        let p = rep_exp(&self.rep, &k0)?;
        let diag = CMatrix::from_diagonal(&self.h.eval_closed(u));
        let p_inv = p.clone().try_inverse().ok_or_else(|| Error::NotRotation("singular π(k_0)".into()))?;
        Ok(&p * diag * p_inv)
    }

    pub fn eval(&self, g: &Rotation) -> Result<CMatrix> {
        Ok(self.h_of_g(g)? * phi_pi(&self.rep, g)?)
    }
}

pub fn reconstruct_phi(ell: usize, w: usize, k: usize, g: &Rotation) -> Result<CMatrix> {
    SphericalFunction::new(ell, w, k)?.eval(g)
}

/// `C_n^1(x)`, the Chebyshev polynomial of the second kind.
pub fn chebyshev_u(n: usize, x: f64) -> f64 {
    let (mut a, mut b) = (1.0, 2.0 * x);
    if n == 0 {
        return a;
    }
    for _ in 1..n {
        (a, b) = (b, 2.0 * x * b - a);
    }
    b
}

/// `(2/π) ∫ H_2(u)* H_1(u) √(1-u²) du` by Gauss–Chebyshev quadrature of the
/// second kind with `nodes` points.
pub fn h_inner_product(h1: &HFunction, h2: &HFunction, nodes: usize) -> Complex64 {
    let np1 = (nodes + 1) as f64;
    (1..=nodes)
        .map(|i| {
            let th = i as f64 * std::f64::consts::PI / np1;
            let u = th.cos();
            let weight = 2.0 / np1 * th.sin().powi(2);
            let a = h1.eval_closed(u);
            let b = h2.eval_closed(u);
            b.dotc(&a) * weight
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cover_of_identity_and_minus_identity() {
        for g in [Rotation::identity(4), Rotation::identity(4).neg()] {
            let (a, b) = wedge_cover(&g).unwrap();
            assert!(max_abs(&(a.matrix() - DMatrix::identity(3, 3))) < 1e-12);
            assert!(max_abs(&(b.matrix() - DMatrix::identity(3, 3))) < 1e-12);
        }
    }

    #[test]
    fn generators() {
        let r = RepSO3::new(4);
        assert_eq!(&r.de * &r.df - &r.df * &r.de, r.dh);
        assert_eq!(rep_exp(&r, &Rotation::identity(3)).unwrap(), CMatrix::identity(5, 5));
    }

    #[test]
    fn euler_round_trip() {
        let mut rng = seeded_rng(3);
        for _ in 0..50 {
            let k = Rotation::random(3, &mut rng);
            let (a, b, g) = euler_xzx(k.matrix());
            let back = Rotation::m_theta(a).mul(&Rotation::y1_theta(b)).mul(&Rotation::m_theta(g));
            assert!(max_abs(&(back.matrix() - k.matrix())) < 1e-10);
        }
        for k in [Rotation::m_theta(0.7), Rotation::y1_theta(std::f64::consts::PI).mul(&Rotation::m_theta(0.3))] {
            let (a, b, g) = euler_xzx(k.matrix());
            let back = Rotation::m_theta(a).mul(&Rotation::y1_theta(b)).mul(&Rotation::m_theta(g));
            assert!(max_abs(&(back.matrix() - k.matrix())) < 1e-10);
        }
    }

    #[test]
    fn section_maps_e1() {
        for y in [[0.3, -0.2, 0.9], [-0.5, 0.1, 0.1], [2.0, 0.0, 0.0]] {
            let a = section_a(&y);
            let r = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
            for i in 0..3 {
                assert!((a[(i, 0)] - y[i] / r).abs() < 1e-14);
            }
            assert!(Rotation::new(a).is_ok());
        }
    }

    #[test]
    fn rejects_non_rotations() {
        let mut m = DMatrix::identity(3, 3);
        m[(0, 0)] = -1.0;
        assert!(Rotation::new(m).is_err());
        assert!(Rotation::new(DMatrix::identity(3, 3) * 1.1).is_err());
    }

    #[test]
    fn chebyshev_values() {
        assert_eq!(chebyshev_u(0, 0.3), 1.0);
        assert_eq!(chebyshev_u(3, 1.0), 4.0);
        assert!((chebyshev_u(2, 0.5) - 0.0).abs() < 1e-15);
    }
}
