//! Gaussian rationals: exact complex numbers `a + bi` with `a, b` in ℚ.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// An element of ℚ(i). Both parts are kept in lowest terms with positive
/// denominators (guaranteed by `BigRational`).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

pub type GR = GaussianRational;

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(n.into()))
    }

    pub fn from_frac(p: i64, q: i64) -> Self {
        Self::real(rat(p, q))
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        Self::new(rat(re.0, re.1), rat(im.0, im.1))
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn imag(im: BigRational) -> Self {
        Self { re: BigRational::zero(), im }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::imag(BigRational::one())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }

    /// |z|², always a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self { re: &self.re / &n, im: -&self.im / &n })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self { re: &self.re * r, im: &self.im * r }
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        Self::real(r)
    }
}

impl<'a> Add<&'a GR> for &'a GR {
    type Output = GR;
    fn add(self, o: &GR) -> GR {
        GR { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a GR> for &'a GR {
    type Output = GR;
    fn sub(self, o: &GR) -> GR {
        GR { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a GR> for &'a GR {
    type Output = GR;
    fn mul(self, o: &GR) -> GR {
        if self.im.is_zero() && o.im.is_zero() {
            return GR::real(&self.re * &o.re);
        }
        GR {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl<'a> Div<&'a GR> for &'a GR {
    type Output = GR;
    fn div(self, o: &GR) -> GR {
        if o.im.is_zero() {
            return GR { re: &self.re / &o.re, im: &self.im / &o.re };
        }
        self * &o.inv().expect("division by zero Gaussian rational")
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr<GR> for GR {
            type Output = GR;
            fn $m(self, o: GR) -> GR {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a GR> for GR {
            type Output = GR;
            fn $m(self, o: &GR) -> GR {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<GR> for &'a GR {
            type Output = GR;
            fn $m(self, o: GR) -> GR {
                self.$m(&o)
            }
        }
        impl $atr<GR> for GR {
            fn $am(&mut self, o: GR) {
                *self = (&*self).$m(&o);
            }
        }
        impl<'a> $atr<&'a GR> for GR {
            fn $am(&mut self, o: &GR) {
                *self = (&*self).$m(o);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);
forward_binop!(Div, div, DivAssign, div_assign);

impl Neg for GR {
    type Output = GR;
    fn neg(self) -> GR {
        GR { re: -self.re, im: -self.im }
    }
}

impl Neg for &GR {
    type Output = GR;
    fn neg(self) -> GR {
        GR { re: -&self.re, im: -&self.im }
    }
}

impl Sum for GR {
    fn sum<I: Iterator<Item = GR>>(it: I) -> GR {
        it.fold(GR::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a GR> for GR {
    fn sum<I: Iterator<Item = &'a GR>>(it: I) -> GR {
        it.fold(GR::zero(), |a, b| a + b)
    }
}

impl Product for GR {
    fn product<I: Iterator<Item = GR>>(it: I) -> GR {
        it.fold(GR::one(), |a, b| a * b)
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text form: `"3/2"`, `"-1*i"`, `"1/2-3/4*i"`, `"0"`.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.re)),
            (true, false) => write!(f, "{}*i", fmt_rat(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}*i", fmt_rat(&self.re), sign, fmt_rat(&self.im.abs()))
            }
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rat(s: &str) -> Result<BigRational, Error> {
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    let s = s.strip_prefix('+').unwrap_or(s);
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| bad())?;
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
    }
}

impl FromStr for GaussianRational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let Some(body) = s.strip_suffix("*i") else {
            return Ok(GR::real(parse_rat(s)?));
        };
        // split at the last sign that is not the leading one
        let cut = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        match cut {
            None => Ok(GR::imag(parse_rat(body)?)),
            Some(i) => Ok(GR::new(parse_rat(&body[..i])?, parse_rat(&body[i..])?)),
        }
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_gr() -> impl Strategy<Value = GR> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20)
            .prop_map(|(a, b, c, d)| GR::from_parts((a, b), (c, d)))
    }

    #[test]
    fn display_forms() {
        assert_eq!(GR::zero().to_string(), "0");
        assert_eq!(GR::from_frac(3, 2).to_string(), "3/2");
        assert_eq!(GR::i().to_string(), "1*i");
        assert_eq!((-GR::i()).to_string(), "-1*i");
        assert_eq!(GR::from_parts((1, 2), (-3, 4)).to_string(), "1/2-3/4*i");
        assert_eq!(GR::from_parts((-1, 1), (2, 6)).to_string(), "-1+1/3*i");
    }

    #[test]
    fn i_squared() {
        assert_eq!(GR::i() * GR::i(), GR::from_int(-1));
        assert_eq!(GR::i().inv().unwrap(), -GR::i());
    }

    #[test]
    fn canonical_denominators() {
        let x = GR::from_parts((4, -6), (0, 5));
        assert_eq!(x.re().denom(), &BigInt::from(3));
        assert_eq!(x.re().numer(), &BigInt::from(-2));
    }

    proptest! {
        #[test]
        fn roundtrip_text(x in arb_gr()) {
            let s = x.to_string();
            prop_assert_eq!(s.parse::<GR>().unwrap(), x.clone());
            let j = serde_json::to_string(&x).unwrap();
            prop_assert_eq!(serde_json::from_str::<GR>(&j).unwrap(), x);
        }

        #[test]
        fn add_sub_exact(x in arb_gr(), y in arb_gr()) {
            prop_assert_eq!(&(&x + &y) - &y, x);
        }

        #[test]
        fn mul_div_exact(x in arb_gr(), y in arb_gr()) {
            prop_assume!(!y.is_zero());
            prop_assert_eq!(&(&x * &y) / &y, x);
        }

        #[test]
        fn conj_multiplicative(x in arb_gr(), y in arb_gr()) {
            prop_assert_eq!((&x * &y).conj(), x.conj() * y.conj());
        }
    }
}
