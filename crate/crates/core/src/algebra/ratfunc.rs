//! Reduced rational functions `num / den` over Q(i).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{GaussianRational, Poly};
use crate::error::{Error, Result};

/// Canonical form: `gcd(num, den) = 1` and `den` monic. The zero function is
/// `0 / 1`. Derived equality is therefore equality of functions.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Reduce `num / den`; errors on the zero denominator.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (mut num, _) = num.div_rem(&g)?;
        let (mut den, _) = den.div_rem(&g)?;
        let lead = den.leading().expect("nonzero").inv()?;
        num = num.scale(&lead);
        den = den.scale(&lead);
        Ok(Self { num, den })
    }

    pub fn zero() -> Self {
        Self { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        Self { num: p, den: Poly::one() }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The numerator when the denominator is 1.
    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<GaussianRational> {
        (self.is_polynomial() && self.num.is_constant()).then(|| self.num.constant_term())
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self::new(self.num.scale(c), self.den.clone()).expect("denominator stays nonzero")
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        Ok(Self { num: base.num.pow(e), den: base.den.pow(e) })
    }

    pub fn derivative(&self) -> Self {
        // (n/d)' = (n' d - n d') / d^2
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(num, &self.den * &self.den).expect("nonzero denominator")
    }

    /// Logarithmic derivative `f'/f`.
    pub fn log_derivative(&self) -> Result<Self> {
        self.derivative().checked_div(self)
    }

    /// Default pole tolerance `1e-12 (1 + |z|)^deg(den)`.
    pub fn pole_tolerance(&self, z: Complex64) -> f64 {
        let d = self.den.degree().unwrap_or(0) as i32;
        1e-12 * (1.0 + z.norm()).powi(d)
    }

    /// Floating evaluation; errors when `|den(z)|` falls below the pole
    /// tolerance.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if self.is_polynomial() {
            return Ok(self.num.eval(z) / self.den.constant_term().to_complex());
        }
        let d = self.den.eval(z);
        if d.norm() < self.pole_tolerance(z) {
            return Err(Error::PoleProximity { magnitude: d.norm() });
        }
        Ok(self.num.eval(z) / d)
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &'a RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero");
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::new(num, &self.den * &rhs.den).expect("nonzero")
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &'a RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &'a RatFunc) -> RatFunc {
        if self.is_polynomial() && rhs.is_polynomial() {
            let c = &self.den.constant_term() * &rhs.den.constant_term();
            return RatFunc::new(&self.num * &rhs.num, Poly::constant(c)).expect("nonzero");
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

macro_rules! owned_ratfunc_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &'a RatFunc) -> RatFunc { (&self).$m(rhs) }
        }
    )*};
}
owned_ratfunc_ops!(Add add, Sub sub, Mul mul);

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl From<GaussianRational> for RatFunc {
    fn from(c: GaussianRational) -> Self {
        RatFunc::constant(c)
    }
}

fn needs_group(p: &Poly) -> bool {
    p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1
        || p.coeffs().last().is_some_and(|c| c.needs_parens() || c.is_negative_real_like())
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one_poly() {
            return write!(f, "{}", self.num);
        }
        let n = if needs_group(&self.num) { format!("({})", self.num) } else { self.num.to_string() };
        write!(f, "{n}/({})", self.den)
    }
}

impl Poly {
    fn is_one_poly(&self) -> bool {
        self.degree() == Some(0) && self.constant_term().is_one()
    }
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("RatFunc", 3)?;
        s.serialize_field("text", &self.to_string())?;
        s.serialize_field("num", &self.num)?;
        s.serialize_field("den", &self.den)?;
        s.end()
    }
}
