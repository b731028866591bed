//! Matrix differential operators `F ↦ A2 F'' + A1 F' + A0 F` with polynomial
//! coefficients acting on the left of column-vector (or matrix) functions.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Matrix, MatrixPolynomial, Polynomial, Var, GR};
use crate::error::{Error, Result};
use crate::structures::{build_structures, StructureSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OperatorName {
    Dbar,
    Ebar,
    Dtilde,
    Etilde,
}

impl OperatorName {
    pub const ALL: [OperatorName; 4] = [Self::Dbar, Self::Ebar, Self::Dtilde, Self::Etilde];

    pub fn label(self) -> &'static str {
        match self {
            Self::Dbar => "D̄",
            Self::Ebar => "Ē",
            Self::Dtilde => "D̃",
            Self::Etilde => "Ẽ",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixODEOperator {
    #[serde(rename = "A2")]
    pub a2: Option<MatrixPolynomial>,
    #[serde(rename = "A1")]
    pub a1: MatrixPolynomial,
    #[serde(rename = "A0")]
    pub a0: MatrixPolynomial,
}

impl PartialEq for MatrixODEOperator {
    fn eq(&self, o: &Self) -> bool {
        let z = |m: &Option<MatrixPolynomial>| m.as_ref().is_none_or(MatrixPolynomial::is_zero);
        let a2_eq = match (&self.a2, &o.a2) {
            (Some(a), Some(b)) => a == b,
            _ => z(&self.a2) && z(&o.a2),
        };
        a2_eq && self.a1 == o.a1 && self.a0 == o.a0
    }
}

fn poly_u(c: &[i64]) -> Polynomial {
    Polynomial::from_ints(c, Var::U)
}

fn cst(m: &Matrix) -> MatrixPolynomial {
    MatrixPolynomial::from_const(m, Var::U)
}

impl MatrixODEOperator {
    pub fn new(a2: Option<MatrixPolynomial>, a1: MatrixPolynomial, a0: MatrixPolynomial) -> Self {
        Self { a2, a1, a0 }
    }

    /// The zeroth-order operator `F ↦ p F`.
    pub fn multiplication(p: MatrixPolynomial) -> Self {
        let n = p.rows();
        Self { a2: None, a1: MatrixPolynomial::zeros(n, n, p.var()), a0: p }
    }

    pub fn order(&self) -> usize {
        match &self.a2 {
            Some(a) if !a.is_zero() => 2,
            _ if !self.a1.is_zero() => 1,
            _ => 0,
        }
    }

    pub fn size(&self) -> usize {
        self.a0.rows()
    }

    pub fn var(&self) -> Var {
        self.a0.var()
    }
}

pub fn build_operator(name: OperatorName, ell: usize) -> MatrixODEOperator {
    build_operator_with(name, &build_structures(ell))
}

pub fn build_operator_with(name: OperatorName, s: &StructureSet) -> MatrixODEOperator {
    let n = s.ell + 1;
    let one_minus_u2 = poly_u(&[1, 0, -1]);
    let u = poly_u(&[0, 1]);
    let id = MatrixPolynomial::identity(n, Var::U);
    let half_i = GR::i().scale(&crate::algebra::rat(1, 2));
    match name {
        OperatorName::Dbar => MatrixODEOperator::new(
            Some(id.scale_poly(&one_minus_u2)),
            -&cst(&s.c).scale_poly(&u),
            -&cst(&s.v),
        ),
        OperatorName::Ebar => MatrixODEOperator::new(
            None,
            (&cst(&s.q0).scale_poly(&one_minus_u2) + &cst(&s.q1)).scale(&half_i),
            &cst(&s.m).scale_poly(&u).scale(&-&half_i) - &cst(&s.v0).scale(&GR::from_frac(1, 2)),
        ),
        OperatorName::Dtilde => MatrixODEOperator::new(
            Some(id.scale_poly(&one_minus_u2)),
            &cst(&s.s1) - &cst(&s.c).scale_poly(&u),
            cst(&s.lambda0),
        ),
        OperatorName::Etilde => {
            MatrixODEOperator::new(None, &cst(&s.r2).scale_poly(&u) + &cst(&s.r1), cst(&s.m0))
        }
    }
}

/// `A2 F'' + A1 F' + A0 F`, column by column.
pub fn apply(op: &MatrixODEOperator, f: &MatrixPolynomial) -> Result<MatrixPolynomial> {
    if f.rows() != op.size() {
        return Err(Error::SizeMismatch(format!("operator of size {} applied to {} rows", op.size(), f.rows())));
    }
    if f.var() != op.var() {
        return Err(Error::VarMismatch(op.var().symbol(), f.var().symbol()));
    }
    let d1 = f.derivative();
    let mut out = &(&op.a1 * &d1) + &(&op.a0 * f);
    if let Some(a2) = &op.a2 {
        out = &out + &(a2 * &d1.derivative());
    }
    Ok(out)
}

/// The operator `G ↦ Ψ⁻¹ op(Ψ G)`. Each coefficient is obtained by exact
/// triangular division, so a non-polynomial result is reported.
pub fn conjugate(op: &MatrixODEOperator, psi: &MatrixPolynomial) -> Result<MatrixODEOperator> {
    if psi.rows() != op.size() || !psi.is_square() {
        return Err(Error::SizeMismatch("conjugating matrix".into()));
    }
    let d1 = psi.derivative();
    let d2 = d1.derivative();
    let n = op.size();
    let zero = MatrixPolynomial::zeros(n, n, op.var());
    let a2 = op.a2.clone().unwrap_or_else(|| zero.clone());
    let new_a2 = &a2 * psi;
    let new_a1 = &(&a2 * &d1).scale(&GR::from_int(2)) + &(&op.a1 * psi);
    let new_a0 = &(&(&a2 * &d2) + &(&op.a1 * &d1)) + &(&op.a0 * psi);
    let a2 = match op.a2 {
        Some(_) => Some(psi.solve_upper_triangular(&new_a2)?),
        None => None,
    };
    Ok(MatrixODEOperator::new(a2, psi.solve_upper_triangular(&new_a1)?, psi.solve_upper_triangular(&new_a0)?))
}

/// `u^d e_j` as an `n × 1` matrix polynomial.
pub fn monomial_vector(n: usize, j: usize, d: usize, var: Var) -> MatrixPolynomial {
    MatrixPolynomial::from_fn(n, 1, var, |i, _| {
        if i == j {
            Polynomial::monomial(GR::from_int(1), d, var)
        } else {
            Polynomial::zero(var)
        }
    })
}

/// True iff `A(B F) = B(A F)` for every `F = u^d e_j` with `d ≤ degree_bound`.
pub fn commutator_check(a: &MatrixODEOperator, b: &MatrixODEOperator, degree_bound: usize) -> bool {
    let n = a.size();
    if b.size() != n {
        return false;
    }
    let cases: Vec<(usize, usize)> = (0..=degree_bound).flat_map(|d| (0..n).map(move |j| (d, j))).collect();
    cases.par_iter().all(|&(d, j)| {
        let f = monomial_vector(n, j, d, a.var());
        let ab = apply(a, &apply(b, &f).unwrap()).unwrap();
        let ba = apply(b, &apply(a, &f).unwrap()).unwrap();
        ab == ba
    })
}
