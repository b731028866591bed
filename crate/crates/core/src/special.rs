//! Terminating hypergeometric series and the Gegenbauer, Hahn and Racah
//! families built from them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{rat, Polynomial, Var, GR};
use crate::error::{Error, Result};

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient for nonnegative `n`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Rising factorial `(a)_m`.
pub fn pochhammer(a: &BigRational, m: usize) -> BigRational {
    let mut acc = BigRational::one();
    let mut x = a.clone();
    for _ in 0..m {
        acc *= &x;
        x += BigRational::one();
    }
    acc
}

#[derive(Clone, Debug, PartialEq)]
pub enum HypArg {
    Value(GR),
    /// Keep the argument symbolic and return a polynomial in this variable.
    Symbol(Var),
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypergeometricSpec {
    pub num: Vec<BigRational>,
    pub den: Vec<BigRational>,
    pub arg: HypArg,
}

#[derive(Clone, Debug, PartialEq)]
pub enum HypValue {
    Value(GR),
    Poly(Polynomial),
}

impl HypergeometricSpec {
    pub fn new(num: Vec<BigRational>, den: Vec<BigRational>, arg: HypArg) -> Self {
        Self { num, den, arg }
    }

    /// Index of the last nonzero term: the smallest `N` with `-N` among the
    /// numerator parameters.
    pub fn termination(&self) -> Result<usize> {
        self.num
            .iter()
            .filter(|a| a.is_integer() && *a <= &BigRational::zero())
            .map(|a| usize::try_from(-a.to_integer()).expect("small parameter"))
            .min()
            .ok_or(Error::NonTerminating)
    }

    /// The coefficients `c_m` with `F = Σ c_m z^m`.
    pub fn series_coeffs(&self) -> Result<Vec<BigRational>> {
        let n = self.termination()?;
        let mut out = Vec::with_capacity(n + 1);
        let mut t = BigRational::one();
        out.push(t.clone());
        for m in 0..n {
            let mm = int(m as i64);
            let mut den = int(m as i64 + 1);
            for b in &self.den {
                let f = b + &mm;
                if f.is_zero() {
                    return Err(Error::DenominatorZero(m + 1));
                }
                den *= f;
            }
            for a in &self.num {
                t *= a + &mm;
            }
            t /= den;
            out.push(t.clone());
        }
        Ok(out)
    }
}

pub fn hyp_terminating(spec: &HypergeometricSpec) -> Result<HypValue> {
    let c = spec.series_coeffs()?;
    Ok(match &spec.arg {
        HypArg::Value(z) => {
            let v = c.iter().rev().fold(GR::zero(), |acc, cm| &acc * z + GR::real(cm.clone()));
            HypValue::Value(v)
        }
        HypArg::Symbol(var) => HypValue::Poly(Polynomial::new(c.into_iter().map(GR::real).collect(), *var)),
    })
}

/// Value of a terminating series at a point.
pub fn hyp_value(num: Vec<BigRational>, den: Vec<BigRational>, z: GR) -> Result<GR> {
    match hyp_terminating(&HypergeometricSpec::new(num, den, HypArg::Value(z)))? {
        HypValue::Value(v) => Ok(v),
        HypValue::Poly(_) => unreachable!(),
    }
}

/// A terminating series as a polynomial in its argument.
pub fn hyp_poly(num: Vec<BigRational>, den: Vec<BigRational>, var: Var) -> Result<Polynomial> {
    match hyp_terminating(&HypergeometricSpec::new(num, den, HypArg::Symbol(var)))? {
        HypValue::Poly(p) => Ok(p),
        HypValue::Value(_) => unreachable!(),
    }
}

/// `₂F₁(-n, b; c; (1-u)/2)` expanded in `u`.
pub fn f21_in_u(n: usize, b: &BigRational, c: &BigRational) -> Result<Polynomial> {
    hyp_poly(vec![int(-(n as i64)), b.clone()], vec![c.clone()], Var::S)?.to_u()
}

/// Gegenbauer polynomial `C_n^λ(u)`, expanded in `u`.
pub fn gegenbauer(n: usize, lam: u32) -> Polynomial {
    let n64 = n as i64;
    let l = lam as i64;
    let c = binomial((n64 + 2 * l - 1) as u64, n as u64);
    let f = f21_in_u(n, &int(n64 + 2 * l), &(int(l) + rat(1, 2))).expect("terminating by construction");
    f.scale(&GR::real(BigRational::from_integer(c)))
}

/// `U_{jk} = ₃F₂(-k, -j, k+1; 1, -ℓ; 1)`, the Hahn polynomial `Q_k(j)`.
pub fn hahn_value(k: usize, j: usize, ell: usize) -> Result<GR> {
    if j > ell || k > ell {
        return Err(Error::IndexOutOfRange(format!("j={j}, k={k}, l={ell}")));
    }
    let (k, j, l) = (k as i64, j as i64, ell as i64);
    hyp_value(vec![int(-k), int(-j), int(k + 1)], vec![int(1), int(-l)], GR::one())
}

/// Racah polynomial `R_k(λ(j); α, β, γ, δ)`, that is
/// `₄F₃(-k, k+α+β+1, -j, j+γ+δ+1; α+1, β+δ+1, γ+1; 1)`.
pub fn racah_value(
    k: usize,
    j: usize,
    alpha: &BigRational,
    beta: &BigRational,
    gamma: &BigRational,
    delta: &BigRational,
    n: usize,
) -> Result<GR> {
    let one = BigRational::one();
    let bottoms = [alpha + &one, beta + delta + &one, gamma + &one];
    let minus_n = int(-(n as i64));
    if !bottoms.contains(&minus_n) {
        return Err(Error::Precondition("none of α+1, β+δ+1, γ+1 equals -N".into()));
    }
    if k > n {
        return Err(Error::Precondition(format!("k={k} exceeds N={n}")));
    }
    let (kk, jj) = (int(k as i64), int(j as i64));
    let num = vec![-&kk, &kk + alpha + beta + &one, -&jj, &jj + gamma + delta + &one];
    hyp_value(num, bottoms.to_vec(), GR::one())
}
