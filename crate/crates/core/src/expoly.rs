//! Exponential polynomials `sum_j a_j(z) e^{q_j(z)}` in canonical form.
//!
//! Coefficients are reduced rational functions, exponents are polynomials
//! with zero constant term. Canonical form keeps exponents pairwise distinct
//! and sorted, so two expressions denote the same function exactly when
//! their term lists are equal (Borel's lemma for distinct exponents).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::algebra::{GaussianRational, Poly, RatFunc};
use crate::error::{Error, Result};

/// Largest real part we let `exp` see before reporting overflow.
pub const EXP_BUDGET: f64 = 709.0;

/// One summand `coeff * e^{exponent}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExpTerm {
    pub coeff: RatFunc,
    pub exponent: Poly,
}

impl ExpTerm {
    pub fn new(coeff: RatFunc, exponent: Poly) -> Self {
        Self { coeff, exponent }
    }
}

/// Canonical exponential polynomial. The empty term list is zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ExpPoly {
    terms: Vec<ExpTerm>,
}

fn check_exponent(q: &Poly) -> Result<()> {
    if q.constant_term().is_zero() {
        Ok(())
    } else {
        Err(Error::NonzeroConstantExponent { exponent: q.to_string() })
    }
}

impl ExpPoly {
    /// Merge like exponents, drop zero coefficients and sort.
    pub fn normalize(terms: impl IntoIterator<Item = ExpTerm>) -> Result<Self> {
        let mut map: BTreeMap<Poly, RatFunc> = BTreeMap::new();
        for t in terms {
            check_exponent(&t.exponent)?;
            if t.coeff.is_zero() {
                continue;
            }
            match map.get_mut(&t.exponent) {
                Some(c) => *c = &*c + &t.coeff,
                None => {
                    map.insert(t.exponent, t.coeff);
                }
            }
        }
        Ok(Self::from_map(map))
    }

    fn from_map(map: BTreeMap<Poly, RatFunc>) -> Self {
        Self {
            terms: map
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(exponent, coeff)| ExpTerm { coeff, exponent })
                .collect(),
        }
    }

    fn to_map(&self) -> BTreeMap<Poly, RatFunc> {
        self.terms.iter().map(|t| (t.exponent.clone(), t.coeff.clone())).collect()
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::from(1))
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_ratfunc(RatFunc::constant(c))
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::from_ratfunc(RatFunc::from_poly(p))
    }

    pub fn from_ratfunc(r: RatFunc) -> Self {
        Self::term(r, Poly::zero()).expect("zero exponent is admissible")
    }

    /// Single term `coeff * e^{exponent}`.
    pub fn term(coeff: impl Into<RatFunc>, exponent: Poly) -> Result<Self> {
        Self::normalize([ExpTerm::new(coeff.into(), exponent)])
    }

    /// `e^{exponent}`.
    pub fn exp(exponent: Poly) -> Result<Self> {
        Self::term(RatFunc::one(), exponent)
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exact identity test against zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `e^{exponent}` (zero when absent).
    pub fn coeff_of(&self, exponent: &Poly) -> RatFunc {
        self.terms
            .iter()
            .find(|t| &t.exponent == exponent)
            .map(|t| t.coeff.clone())
            .unwrap_or_else(RatFunc::zero)
    }

    pub fn exponents(&self) -> impl Iterator<Item = &Poly> {
        self.terms.iter().map(|t| &t.exponent)
    }

    /// True when no coefficient has a pole.
    pub fn is_entire(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.is_polynomial())
    }

    /// A plain rational function when the only exponent is zero.
    pub fn as_ratfunc(&self) -> Option<RatFunc> {
        match self.terms.as_slice() {
            [] => Some(RatFunc::zero()),
            [t] if t.exponent.is_zero() => Some(t.coeff.clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_map(self.terms.iter().map(|t| (t.exponent.clone(), &t.coeff * c)).collect())
    }

    /// `(a e^q)' = (a' + a q') e^q`, term by term.
    pub fn derivative(&self) -> Self {
        let mut map = BTreeMap::new();
        for t in &self.terms {
            let qd = RatFunc::from_poly(t.exponent.derivative());
            let c = &t.coeff.derivative() + &(&t.coeff * &qd);
            map.insert(t.exponent.clone(), c);
        }
        Self::from_map(map)
    }

    /// Exact `n`-th power by binary exponentiation.
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut sq = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// Floating evaluation. Reports overflow rather than returning `inf`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let q = t.exponent.eval(z);
            if q.re > EXP_BUDGET {
                return Err(Error::Overflow { context: format!("Re exponent {} at z = {z}", q.re) });
            }
            acc += t.coeff.eval(z)? * q.exp();
        }
        if !acc.is_finite() {
            return Err(Error::Overflow { context: format!("sum at z = {z}") });
        }
        Ok(acc)
    }

    /// `sum_j a_j(z) e^{q_j(z) + shift}`; the shift is added before
    /// exponentiating so large cancelling exponents never overflow.
    pub fn eval_shifted(&self, z: Complex64, shift: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let q = t.exponent.eval(z) + shift;
            if q.re > EXP_BUDGET {
                return Err(Error::Overflow { context: format!("Re exponent {} at z = {z}", q.re) });
            }
            acc += t.coeff.eval(z)? * q.exp();
        }
        Ok(acc)
    }

    /// `ln|f(z)|` without forming `f(z)`: the largest `Re q_j + ln|a_j|` is
    /// factored out. Returns `-inf` at zeros.
    pub fn log_abs(&self, z: Complex64) -> Result<f64> {
        let mut logs = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let a = t.coeff.eval(z)?;
            if a.norm() == 0.0 {
                continue;
            }
            logs.push(a.ln() + t.exponent.eval(z));
        }
        let Some(m) = logs.iter().map(|w| w.re).fold(None, |acc: Option<f64>, x| {
            Some(acc.map_or(x, |a| a.max(x)))
        }) else {
            return Ok(f64::NEG_INFINITY);
        };
        let s: Complex64 = logs.iter().map(|w| (w - m).exp()).sum();
        Ok(m + s.norm().ln())
    }

    /// Substitute `z -> lambda z` in coefficients and exponents.
    pub fn substitute_linear(&self, lambda: &GaussianRational) -> Self {
        let lin = Poly::monomial(lambda.clone(), 1);
        let map = self
            .terms
            .iter()
            .map(|t| {
                let c = RatFunc::new(t.coeff.num().compose(&lin), t.coeff.den().compose(&lin))
                    .expect("nonzero denominator");
                (t.exponent.compose(&lin), c)
            })
            .collect::<Vec<_>>();
        Self::normalize(map.into_iter().map(|(e, c)| ExpTerm::new(c, e))).expect("z -> lambda z keeps zero constant terms")
    }
}

impl<'a> Add<&'a ExpPoly> for &'a ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &'a ExpPoly) -> ExpPoly {
        let mut map = self.to_map();
        for t in &rhs.terms {
            match map.get_mut(&t.exponent) {
                Some(c) => *c = &*c + &t.coeff,
                None => {
                    map.insert(t.exponent.clone(), t.coeff.clone());
                }
            }
        }
        ExpPoly::from_map(map)
    }
}

impl<'a> Sub<&'a ExpPoly> for &'a ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &'a ExpPoly) -> ExpPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a ExpPoly> for &'a ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: &'a ExpPoly) -> ExpPoly {
        let mut map: BTreeMap<Poly, RatFunc> = BTreeMap::new();
        for a in &self.terms {
            for b in &rhs.terms {
                let e = &a.exponent + &b.exponent;
                let c = &a.coeff * &b.coeff;
                match map.get_mut(&e) {
                    Some(x) => *x = &*x + &c,
                    None => {
                        map.insert(e, c);
                    }
                }
            }
        }
        ExpPoly::from_map(map)
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        ExpPoly {
            terms: self.terms.iter().map(|t| ExpTerm::new(-&t.coeff, t.exponent.clone())).collect(),
        }
    }
}

impl Neg for ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        -&self
    }
}

macro_rules! owned_ep_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<ExpPoly> for ExpPoly {
            type Output = ExpPoly;
            fn $m(self, rhs: ExpPoly) -> ExpPoly { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a ExpPoly> for ExpPoly {
            type Output = ExpPoly;
            fn $m(self, rhs: &'a ExpPoly) -> ExpPoly { (&self).$m(rhs) }
        }
    )*};
}
owned_ep_ops!(Add add, Sub sub, Mul mul);

impl From<Poly> for ExpPoly {
    fn from(p: Poly) -> Self {
        ExpPoly::from_poly(p)
    }
}

impl From<RatFunc> for ExpPoly {
    fn from(r: RatFunc) -> Self {
        ExpPoly::from_ratfunc(r)
    }
}

/// Parseable form: `(z + 1)*exp(z^2) - 1/2*exp(z)`.
impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest exponent first reads naturally
        for (i, t) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let c = format!("({})", t.coeff);
            if t.exponent.is_zero() {
                write!(f, "{c}")?;
            } else if t.coeff == RatFunc::one() {
                write!(f, "exp({})", t.exponent)?;
            } else {
                write!(f, "{c}*exp({})", t.exponent)?;
            }
        }
        Ok(())
    }
}

impl Serialize for ExpTerm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ExpTerm", 2)?;
        s.serialize_field("coeff", &self.coeff)?;
        s.serialize_field("exponent", &self.exponent)?;
        s.end()
    }
}

impl Serialize for ExpPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ExpPoly", 2)?;
        s.serialize_field("text", &self.to_string())?;
        s.serialize_field("terms", &self.terms)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn z() -> Poly {
        Poly::z()
    }
    fn c(v: i64) -> RatFunc {
        RatFunc::constant(GaussianRational::from(v))
    }
    fn q(n: i64, d: i64) -> GaussianRational {
        GaussianRational::ratio(n, d)
    }
    fn e(p: Poly) -> ExpPoly {
        ExpPoly::exp(p).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let t = |k: i64, p: Poly| ExpTerm::new(c(k), p);
        let a = ExpPoly::normalize([t(1, z()), t(2, z())]).unwrap();
        assert_eq!(a, ExpPoly::term(c(3), z()).unwrap());
        assert!(ExpPoly::normalize([t(1, z()), t(-1, z())]).unwrap().is_zero());
        let zr = RatFunc::from_poly(z());
        let inv_z = RatFunc::new(Poly::one(), z()).unwrap();
        let z2 = Poly::monomial(q(1, 1), 2);
        let a = ExpPoly::normalize([
            ExpTerm::new(zr.clone(), z2.clone()),
            ExpTerm::new(inv_z.clone(), z()),
            ExpTerm::new(-zr, z2),
        ])
        .unwrap();
        assert_eq!(a, ExpPoly::term(inv_z, z()).unwrap());
        let bad = ExpPoly::normalize([t(1, Poly::from_ints(&[1, 1]))]);
        assert!(matches!(bad, Err(Error::NonzeroConstantExponent { .. })));
    }

    #[test]
    fn arithmetic_examples() {
        let one = ExpPoly::one();
        let a = &(&e(z()) + &one) * &(&e(z()) - &one);
        assert_eq!(a, &e(z().scale(&q(2, 1))) - &one);
        let half = z().scale(&q(1, 2));
        assert_eq!(&e(half.clone()) * &e(half), e(z()));
        let cube = (&one + &e(z())).pow(3);
        let want = &(&(&one + &e(z()).scale(&c(3))) + &e(z().scale(&q(2, 1))).scale(&c(3)))
            + &e(z().scale(&q(3, 1)));
        assert_eq!(cube, want);
    }

    #[test]
    fn square_of_two_term_sum() {
        // (c0 e^{z/2} + c1 e^{z/4})^2 = c0^2 e^z + 2 c0 c1 e^{3z/4} + c1^2 e^{z/2}
        let (c0, c1) = (q(3, 1), q(-5, 2));
        let f = &ExpPoly::term(RatFunc::constant(c0.clone()), z().scale_rat(&rat(1, 2))).unwrap()
            + &ExpPoly::term(RatFunc::constant(c1.clone()), z().scale_rat(&rat(1, 4))).unwrap();
        let sq = f.pow(2);
        assert_eq!(sq.coeff_of(&z()), RatFunc::constant(&c0 * &c0));
        assert_eq!(sq.coeff_of(&z().scale_rat(&rat(3, 4))), RatFunc::constant(&(&c0 * &c1) * &q(2, 1)));
        assert_eq!(sq.coeff_of(&z().scale_rat(&rat(1, 2))), RatFunc::constant(&c1 * &c1));
        assert_eq!(sq.len(), 3);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(e(z()).derivative(), e(z()));
        let z2 = Poly::monomial(q(1, 1), 2);
        let a = ExpPoly::term(RatFunc::from_poly(z()), z2.clone()).unwrap();
        let want = ExpPoly::term(RatFunc::from_poly(Poly::from_ints(&[1, 0, 2])), z2).unwrap();
        assert_eq!(a.derivative(), want);
        // b1 e^{p1} -> b1 (b1'/b1 + p1') e^{p1}
        let b1 = RatFunc::from_poly(Poly::from_ints(&[1, 0, 3]));
        let p1 = Poly::from_ints(&[0, 2, 1]);
        let big_b1 = &b1.log_derivative().unwrap() + &RatFunc::from_poly(p1.derivative());
        let lhs = ExpPoly::term(b1.clone(), p1.clone()).unwrap().derivative();
        assert_eq!(lhs, ExpPoly::term(&b1 * &big_b1, p1).unwrap());
    }

    #[test]
    fn eval_examples() {
        assert!((e(z()).eval(Complex64::new(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        let cosh = &e(z()) + &e(-z());
        let v = cosh.eval(Complex64::new(0.0, std::f64::consts::PI)).unwrap();
        assert!((v + 2.0).norm() < 1e-14);
        let a = ExpPoly::term(RatFunc::from_poly(z()), Poly::monomial(q(1, 1), 2)).unwrap();
        let v = a.eval(Complex64::new(1.0, 0.0)).unwrap();
        assert!((v - std::f64::consts::E).norm() < 1e-14);
        assert!(matches!(e(z()).eval(Complex64::new(800.0, 0.0)), Err(Error::Overflow { .. })));
        let la = e(z()).log_abs(Complex64::new(800.0, 3.0)).unwrap();
        assert!((la - 800.0).abs() < 1e-12);
    }

    #[test]
    fn display_roundtrip_shape() {
        let a = &e(z()) + &ExpPoly::constant(q(-1, 2));
        assert_eq!(a.to_string(), "exp(z) + (-1/2)");
    }
}
