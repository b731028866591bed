//! Matrices whose entries are polynomials in one shared variable.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::gaussian::GR;
use super::matrix::Matrix;
use super::poly::{Polynomial, Var};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixPolynomial {
    rows: usize,
    cols: usize,
    var: Var,
    entries: Vec<Polynomial>,
}

impl MatrixPolynomial {
    pub fn zeros(rows: usize, cols: usize, var: Var) -> Self {
        Self { rows, cols, var, entries: vec![Polynomial::zero(var); rows * cols] }
    }

    pub fn identity(n: usize, var: Var) -> Self {
        Self::from_const(&Matrix::identity(n), var)
    }

    pub fn from_fn(rows: usize, cols: usize, var: Var, f: impl Fn(usize, usize) -> Polynomial) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let p = f(i, j);
                assert_eq!(p.var(), var, "entry variable tag mismatch");
                entries.push(p);
            }
        }
        Self { rows, cols, var, entries }
    }

    pub fn from_const(m: &Matrix, var: Var) -> Self {
        Self::from_fn(m.rows(), m.cols(), var, |i, j| Polynomial::constant(m[(i, j)].clone(), var))
    }

    /// Builds `Σ_d C_d x^d` from its coefficient matrices.
    pub fn from_coeffs(coeffs: &[Matrix], var: Var) -> Self {
        let (r, c) = coeffs.first().map_or((0, 0), |m| (m.rows(), m.cols()));
        Self::from_fn(r, c, var, |i, j| {
            Polynomial::new(coeffs.iter().map(|m| m[(i, j)].clone()).collect(), var)
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Maximum entry degree; `None` for the zero matrix.
    pub fn degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(Polynomial::degree).max()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(Polynomial::is_constant)
    }

    pub fn coeff(&self, d: usize) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].coeff(d))
    }

    pub fn coeff_matrices(&self) -> Vec<Matrix> {
        match self.degree() {
            None => vec![Matrix::zeros(self.rows, self.cols)],
            Some(d) => (0..=d).map(|k| self.coeff(k)).collect(),
        }
    }

    pub fn leading_coeff(&self) -> Matrix {
        self.coeff(self.degree().unwrap_or(0))
    }

    pub fn column(&self, k: usize) -> Self {
        Self::from_fn(self.rows, 1, self.var, |i, _| self[(i, k)].clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.var, |i, j| self[(j, i)].clone())
    }

    /// Conjugate coefficients and transpose positions; `M*` for real argument.
    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.var, |i, j| self[(j, i)].conj())
    }

    pub fn derivative(&self) -> Self {
        self.map(Polynomial::derivative)
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Self {
        Self { rows: self.rows, cols: self.cols, var: self.var, entries: self.entries.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &GR) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn scale_poly(&self, p: &Polynomial) -> Self {
        self.map(|q| q * p)
    }

    pub fn eval(&self, x: &GR) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].eval(x))
    }

    pub fn eval_f64(&self, x: f64) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].eval_f64(x))
    }

    fn all_off(&self, keep: impl Fn(usize, usize) -> bool) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| keep(i, j) || self[(i, j)].is_zero()))
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.all_off(|i, j| i <= j)
    }

    pub fn is_diagonal(&self) -> bool {
        self.all_off(|i, j| i == j)
    }

    pub fn left_mul_const(&self, m: &Matrix) -> Self {
        &Self::from_const(m, self.var) * self
    }

    pub fn right_mul_const(&self, m: &Matrix) -> Self {
        self * &Self::from_const(m, self.var)
    }

    pub fn to_s(&self) -> Result<Self> {
        let e = self.entries.iter().map(Polynomial::to_s).collect::<Result<Vec<_>>>()?;
        Ok(Self { rows: self.rows, cols: self.cols, var: Var::S, entries: e })
    }

    pub fn to_u(&self) -> Result<Self> {
        let e = self.entries.iter().map(Polynomial::to_u).collect::<Result<Vec<_>>>()?;
        Ok(Self { rows: self.rows, cols: self.cols, var: Var::U, entries: e })
    }

    /// Inverse of an upper triangular matrix with nonzero constant diagonal,
    /// by back substitution. The result is again polynomial.
    pub fn inverse_triangular(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::SizeMismatch("inverse of a non-square matrix".into()));
        }
        if !self.is_upper_triangular() {
            return Err(Error::NotTriangular);
        }
        for i in 0..self.rows {
            let d = &self[(i, i)];
            if d.is_zero() || !d.is_constant() {
                return Err(Error::BadDiagonal(i));
            }
        }
        self.solve_upper_triangular(&Self::identity(self.rows, self.var))
    }

    /// Solves `self · X = rhs` for upper triangular `self`, dividing by the
    /// diagonal entries exactly. Fails if any division leaves a remainder.
    pub fn solve_upper_triangular(&self, rhs: &Self) -> Result<Self> {
        if !self.is_upper_triangular() {
            return Err(Error::NotTriangular);
        }
        if self.rows != rhs.rows || !self.is_square() {
            return Err(Error::SizeMismatch("triangular solve".into()));
        }
        let n = self.rows;
        let mut x = Self::zeros(n, rhs.cols, self.var);
        for c in 0..rhs.cols {
            for i in (0..n).rev() {
                let mut acc = rhs[(i, c)].clone();
                for k in i + 1..n {
                    if !self[(i, k)].is_zero() && !x[(k, c)].is_zero() {
                        acc = &acc - &(&self[(i, k)] * &x[(k, c)]);
                    }
                }
                let d = &self[(i, i)];
                if d.is_zero() {
                    return Err(Error::BadDiagonal(i));
                }
                let (q, r) = acc.divrem(d)?;
                if !r.is_zero() {
                    return Err(Error::NonPolynomial);
                }
                x[(i, c)] = q;
            }
        }
        Ok(x)
    }

    /// Determinant by fraction-free (Bareiss) elimination; every division is
    /// exact.
    pub fn det(&self) -> Polynomial {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Polynomial::one(self.var);
        }
        let mut m = self.clone();
        let mut sign = GR::one();
        let mut prev = Polynomial::one(self.var);
        for k in 0..n - 1 {
            let Some(p) = (k..n).find(|&i| !m[(i, k)].is_zero()) else {
                return Polynomial::zero(self.var);
            };
            if p != k {
                for j in 0..n {
                    m.entries.swap(p * n + j, k * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[(k, k)] * &m[(i, j)]) - &(&m[(i, k)] * &m[(k, j)]);
                    let (q, r) = num.divrem(&prev).expect("same variable");
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    m[(i, j)] = q;
                }
                m[(i, k)] = Polynomial::zero(self.var);
            }
            prev = m[(k, k)].clone();
        }
        m[(n - 1, n - 1)].scale(&sign)
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }
}

/// Checked inverse of an upper triangular matrix polynomial.
pub fn matpoly_inverse_triangular(m: &MatrixPolynomial) -> Result<MatrixPolynomial> {
    m.inverse_triangular()
}

pub fn matpoly_det(m: &MatrixPolynomial) -> Polynomial {
    m.det()
}

impl Index<(usize, usize)> for MatrixPolynomial {
    type Output = Polynomial;
    fn index(&self, (i, j): (usize, usize)) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for MatrixPolynomial {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Polynomial {
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &MatrixPolynomial {
    type Output = MatrixPolynomial;
    fn mul(self, o: &MatrixPolynomial) -> MatrixPolynomial {
        assert_eq!(self.cols, o.rows, "matrix polynomial product size mismatch");
        assert_eq!(self.var, o.var, "variable tag mismatch");
        let mut out = MatrixPolynomial::zeros(self.rows, o.cols, self.var);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        out
    }
}

impl Add for &MatrixPolynomial {
    type Output = MatrixPolynomial;
    fn add(self, o: &MatrixPolynomial) -> MatrixPolynomial {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "size mismatch");
        MatrixPolynomial {
            rows: self.rows,
            cols: self.cols,
            var: self.var,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &MatrixPolynomial {
    type Output = MatrixPolynomial;
    fn sub(self, o: &MatrixPolynomial) -> MatrixPolynomial {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "size mismatch");
        MatrixPolynomial {
            rows: self.rows,
            cols: self.cols,
            var: self.var,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &MatrixPolynomial {
    type Output = MatrixPolynomial;
    fn neg(self) -> MatrixPolynomial {
        self.map(|p| -p)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for MatrixPolynomial {
            type Output = MatrixPolynomial;
            fn $m(self, o: MatrixPolynomial) -> MatrixPolynomial {
                (&self).$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl fmt::Debug for MatrixPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatPolyRepr {
    rows: usize,
    cols: usize,
    var: Var,
    /// `entries[i][j]` is the coefficient list of entry (i, j), lowest first.
    entries: Vec<Vec<Vec<GR>>>,
}

impl Serialize for MatrixPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].coeffs().to_vec()).collect())
            .collect();
        MatPolyRepr { rows: self.rows, cols: self.cols, var: self.var, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MatPolyRepr::deserialize(d)?;
        if r.entries.len() != r.rows || r.entries.iter().any(|row| row.len() != r.cols) {
            return Err(serde::de::Error::custom("matrix shape does not match rows/cols"));
        }
        let entries = r.entries.into_iter().flatten().map(|c| Polynomial::new(c, r.var)).collect();
        Ok(Self { rows: r.rows, cols: r.cols, var: r.var, entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn up(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c, Var::U)
    }

    /// Ψ for ℓ = 1, entered by hand.
    fn psi1() -> MatrixPolynomial {
        let mut m = MatrixPolynomial::zeros(2, 2, Var::U);
        m[(0, 0)] = up(&[1]);
        m[(0, 1)] = up(&[0, 1]);
        m[(1, 1)] = Polynomial::constant(-GR::i(), Var::U);
        m
    }

    #[test]
    fn identity_inverse_and_det() {
        let id = MatrixPolynomial::identity(3, Var::U);
        assert_eq!(id.inverse_triangular().unwrap(), id);
        assert_eq!(id.det(), up(&[1]));
    }

    #[test]
    fn psi1_inverse() {
        let inv = psi1().inverse_triangular().unwrap();
        let mut want = MatrixPolynomial::zeros(2, 2, Var::U);
        want[(0, 0)] = up(&[1]);
        want[(0, 1)] = Polynomial::monomial(-GR::i(), 1, Var::U);
        want[(1, 1)] = Polynomial::constant(GR::i(), Var::U);
        assert_eq!(inv, want);
    }

    #[test]
    fn psi1_det() {
        assert_eq!(psi1().det(), Polynomial::constant(-GR::i(), Var::U));
    }

    #[test]
    fn diagonal_inverse() {
        let d = Matrix::diag(vec![GR::from_int(2), GR::from_frac(-1, 3), GR::i()]);
        let inv = MatrixPolynomial::from_const(&d, Var::U).inverse_triangular().unwrap();
        let want = Matrix::diag(vec![GR::from_frac(1, 2), GR::from_int(-3), -GR::i()]);
        assert_eq!(inv, MatrixPolynomial::from_const(&want, Var::U));
    }

    #[test]
    fn singular_constant_det() {
        let m = Matrix::from_int_rows(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert!(MatrixPolynomial::from_const(&m, Var::U).det().is_zero());
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut m = psi1();
        m[(1, 0)] = up(&[1]);
        assert_eq!(m.inverse_triangular(), Err(Error::NotTriangular));
        let mut m = psi1();
        m[(1, 1)] = up(&[0, 1]);
        assert_eq!(m.inverse_triangular(), Err(Error::BadDiagonal(1)));
    }

    #[test]
    fn nonpolynomial_solve_is_reported() {
        let mut m = MatrixPolynomial::identity(1, Var::U);
        m[(0, 0)] = up(&[1, 1]);
        let rhs = MatrixPolynomial::identity(1, Var::U);
        assert_eq!(m.solve_upper_triangular(&rhs), Err(Error::NonPolynomial));
    }

    fn arb_entry() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((-4i64..4, -4i64..4), 0..3).prop_map(|v| {
            Polynomial::new(v.into_iter().map(|(a, b)| GR::from_parts((a, 1), (b, 1))).collect(), Var::U)
        })
    }

    fn arb_upper(n: usize) -> impl Strategy<Value = MatrixPolynomial> {
        (
            prop::collection::vec(arb_entry(), n * n),
            prop::collection::vec((1i64..5, -3i64..3), n),
        )
            .prop_map(move |(e, d)| {
                MatrixPolynomial::from_fn(n, n, Var::U, |i, j| {
                    if i == j {
                        Polynomial::constant(GR::from_parts((d[i].0, 1), (d[i].1, 1)), Var::U)
                    } else if i < j {
                        e[i * n + j].clone()
                    } else {
                        Polynomial::zero(Var::U)
                    }
                })
            })
    }

    fn arb_full(n: usize) -> impl Strategy<Value = MatrixPolynomial> {
        prop::collection::vec(arb_entry(), n * n)
            .prop_map(move |e| MatrixPolynomial::from_fn(n, n, Var::U, |i, j| e[i * n + j].clone()))
    }

    proptest! {
        #[test]
        fn triangular_inverse_exact(m in arb_upper(4)) {
            let inv = m.inverse_triangular().unwrap();
            prop_assert_eq!(&m * &inv, MatrixPolynomial::identity(4, Var::U));
        }

        #[test]
        fn det_multiplicative_triangular(a in arb_upper(3), b in arb_upper(3)) {
            prop_assert_eq!((&a * &b).det(), &a.det() * &b.det());
        }

        #[test]
        fn det_multiplicative_full(a in arb_full(3), b in arb_full(3)) {
            prop_assert_eq!((&a * &b).det(), &a.det() * &b.det());
        }

        #[test]
        fn conj_transpose_involution(a in arb_full(3)) {
            prop_assert_eq!(a.conj_transpose().conj_transpose(), a);
        }

        #[test]
        fn json_roundtrip(a in arb_full(2)) {
            let s = serde_json::to_string(&a).unwrap();
            prop_assert_eq!(serde_json::from_str::<MatrixPolynomial>(&s).unwrap(), a);
        }
    }
}
