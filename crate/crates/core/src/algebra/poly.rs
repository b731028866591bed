//! Univariate polynomials over ℚ(i), tagged with their variable.
//!
//! Two variables occur: `u ∈ [-1, 1]` and `s = (1 - u)/2`. The tag keeps the
//! two from being mixed by accident; [`Polynomial::to_s`] and
//! [`Polynomial::to_u`] convert between them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::gaussian::{rat, GR};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Var {
    #[serde(rename = "u")]
    U,
    #[serde(rename = "s")]
    S,
}

impl Var {
    pub fn symbol(self) -> char {
        match self {
            Var::U => 'u',
            Var::S => 's',
        }
    }
}

/// Coefficients lowest degree first, trailing zeros stripped.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Polynomial {
    var: Var,
    coeffs: Vec<GR>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
}

/// Checked ring operation; fails when the variable tags differ.
pub fn poly_arith(a: &Polynomial, b: &Polynomial, op: PolyOp) -> Result<Polynomial> {
    if a.var != b.var {
        return Err(Error::VarMismatch(a.var.symbol(), b.var.symbol()));
    }
    Ok(match op {
        PolyOp::Add => a.add_unchecked(b),
        PolyOp::Mul => a.mul_unchecked(b),
    })
}

pub fn poly_derivative(p: &Polynomial) -> Polynomial {
    p.derivative()
}

impl Polynomial {
    pub fn new(coeffs: Vec<GR>, var: Var) -> Self {
        let mut p = Self { var, coeffs };
        p.trim();
        p
    }

    pub fn from_ints(coeffs: &[i64], var: Var) -> Self {
        Self::new(coeffs.iter().map(|&c| GR::from_int(c)).collect(), var)
    }

    pub fn zero(var: Var) -> Self {
        Self { var, coeffs: Vec::new() }
    }

    pub fn one(var: Var) -> Self {
        Self::constant(GR::one(), var)
    }

    pub fn constant(c: GR, var: Var) -> Self {
        Self::new(vec![c], var)
    }

    pub fn monomial(c: GR, deg: usize, var: Var) -> Self {
        let mut v = vec![GR::zero(); deg + 1];
        v[deg] = c;
        Self::new(v, var)
    }

    /// The variable itself.
    pub fn x(var: Var) -> Self {
        Self::monomial(GR::one(), 1, var)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn coeffs(&self) -> &[GR] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> GR {
        self.coeffs.get(d).cloned().unwrap_or_else(GR::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> GR {
        self.coeffs.last().cloned().unwrap_or_else(GR::zero)
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.var, o.var, "polynomial variable tag mismatch");
    }

    fn add_unchecked(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|d| match (self.coeffs.get(d), o.coeffs.get(d)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::new(c, self.var)
    }

    fn mul_unchecked(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.var);
        }
        let mut c = vec![GR::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        Self::new(c, self.var)
    }

    pub fn scale(&self, c: &GR) -> Self {
        if c.is_zero() {
            return Self::zero(self.var);
        }
        Self::new(self.coeffs.iter().map(|a| a * c).collect(), self.var)
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(d, a)| a * GR::from_int(d as i64))
            .collect();
        Self::new(c, self.var)
    }

    /// Conjugates every coefficient; this is `p*` for a real variable.
    pub fn conj(&self) -> Self {
        Self { var: self.var, coeffs: self.coeffs.iter().map(GR::conj).collect() }
    }

    pub fn eval(&self, x: &GR) -> GR {
        self.coeffs.iter().rev().fold(GR::zero(), |acc, c| &acc * x + c)
    }

    /// Floating evaluation by Horner's rule; carries ordinary round-off.
    pub fn eval_f64(&self, x: f64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c.to_complex64())
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![GR::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Self { var: self.var, coeffs: c }
    }

    /// Euclidean division over ℚ(i).
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        if self.var != d.var {
            return Err(Error::VarMismatch(self.var.symbol(), d.var.symbol()));
        }
        let dd = d.degree().ok_or_else(|| Error::Precondition("division by zero polynomial".into()))?;
        let lead_inv = d.leading().inv().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![GR::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let c = &r[top] * &lead_inv;
            if !c.is_zero() {
                for (i, b) in d.coeffs.iter().enumerate() {
                    let t = &c * b;
                    r[top - dd + i] -= t;
                }
            }
            q[top - dd] = c;
            r.pop();
        }
        Ok((Self::new(q, self.var), Self::new(r, self.var)))
    }

    /// Substitutes `x = a + b·y`, tagging the result with `var`.
    pub fn substitute_affine(&self, a: &GR, b: &GR, var: Var) -> Self {
        let lin = Self::new(vec![a.clone(), b.clone()], var);
        let mut acc = Self::zero(var);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_unchecked(&lin).add_unchecked(&Self::constant(c.clone(), var));
        }
        acc
    }

    /// Rewrites a polynomial in `u` in terms of `s`, using `u = 1 - 2s`.
    pub fn to_s(&self) -> Result<Self> {
        if self.var != Var::U {
            return Err(Error::VarMismatch('u', self.var.symbol()));
        }
        Ok(self.substitute_affine(&GR::one(), &GR::from_int(-2), Var::S))
    }

    /// Rewrites a polynomial in `s` in terms of `u`, using `s = (1 - u)/2`.
    pub fn to_u(&self) -> Result<Self> {
        if self.var != Var::S {
            return Err(Error::VarMismatch('s', self.var.symbol()));
        }
        Ok(self.substitute_affine(&GR::from_frac(1, 2), &GR::from_frac(-1, 2), Var::U))
    }

    /// `(1 - x²)^j`.
    pub fn one_minus_sq_pow(j: usize, var: Var) -> Self {
        let base = Self::new(vec![GR::one(), GR::zero(), GR::from_int(-1)], var);
        (0..j).fold(Self::one(var), |acc, _| acc.mul_unchecked(&base))
    }

    pub fn half() -> GR {
        GR::real(rat(1, 2))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        self.check(o);
        self.add_unchecked(o)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        self.check(o);
        self.add_unchecked(&-o)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        self.check(o);
        self.mul_unchecked(o)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { var: self.var, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, o: Polynomial) -> Polynomial {
        &self + &o
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, o: Polynomial) -> Polynomial {
        &self - &o
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, o: Polynomial) -> Polynomial {
        &self * &o
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let x = self.var.symbol();
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c}){x}")?,
                _ => write!(f, "({c}){x}^{d}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn u(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c, Var::U)
    }

    #[test]
    fn difference_of_squares() {
        let p = poly_arith(&u(&[1, 1]), &u(&[1, -1]), PolyOp::Mul).unwrap();
        assert_eq!(p, u(&[1, 0, -1]));
    }

    #[test]
    fn additive_identity() {
        let p = u(&[3, 0, 5]);
        assert_eq!(poly_arith(&Polynomial::zero(Var::U), &p, PolyOp::Add).unwrap(), p);
    }

    #[test]
    fn monomial_product() {
        assert_eq!(&u(&[0, 1]) * &u(&[0, 2]), u(&[0, 0, 2]));
    }

    #[test]
    fn tag_mismatch() {
        let s = Polynomial::from_ints(&[1], Var::S);
        assert_eq!(poly_arith(&u(&[1]), &s, PolyOp::Add), Err(Error::VarMismatch('u', 's')));
    }

    #[test]
    fn derivatives() {
        assert_eq!(poly_derivative(&u(&[0, 0, 1])), u(&[0, 2]));
        assert!(poly_derivative(&u(&[7])).is_zero());
        assert_eq!(poly_derivative(&u(&[1, 0, -1])), u(&[0, -2]));
    }

    #[test]
    fn zero_degree_sentinel() {
        assert_eq!(Polynomial::zero(Var::U).degree(), None);
        assert_eq!(u(&[1, 2, 0, 0]).degree(), Some(1));
    }

    #[test]
    fn s_u_roundtrip() {
        // u itself becomes 1 - 2s
        assert_eq!(u(&[0, 1]).to_s().unwrap(), Polynomial::from_ints(&[1, -2], Var::S));
        let p = u(&[3, -1, 4, 1]);
        assert_eq!(p.to_s().unwrap().to_u().unwrap(), p);
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((-9i64..9, -9i64..9), 0..6).prop_map(|v| {
            Polynomial::new(v.into_iter().map(|(a, b)| GR::from_parts((a, 1), (b, 1))).collect(), Var::U)
        })
    }

    proptest! {
        #[test]
        fn divrem_reconstructs(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree() < b.degree() || r.is_zero());
        }

        #[test]
        fn product_rule(a in arb_poly(), b in arb_poly()) {
            let lhs = (&a * &b).derivative();
            let rhs = &(&a.derivative() * &b) + &(&a * &b.derivative());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn eval_is_ring_hom(a in arb_poly(), b in arb_poly(), x in -5i64..5) {
            let x = GR::from_frac(x, 3);
            prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
        }
    }
}
