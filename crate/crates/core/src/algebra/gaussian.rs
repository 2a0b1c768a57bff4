//! Exact complex rationals `a + bi` with `a, b` in Q.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact element of Q(i). Both parts are kept in lowest terms with positive
/// denominators by `BigRational`, so derived equality is exact equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    /// `num/den` as a real Gaussian rational. Panics on `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(num.into(), den.into()))
    }

    pub fn real(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `|x|^2`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm_sqr();
        Ok(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// Argument in `[0, 2pi)`, computed in floating point.
    pub fn arg(&self) -> f64 {
        let a = self.to_complex().arg();
        if a < 0.0 {
            a + std::f64::consts::TAU
        } else {
            a
        }
    }

    /// Exact `n`-th roots that lie in Q(i), sorted by argument in `[0, 2pi)`.
    pub fn nth_roots(&self, n: u32) -> Vec<GaussianRational> {
        roots::gaussian_nth_roots(self, n)
    }

    /// The Gaussian-rational `n`-th root with the smallest argument in `[0, 2pi)`.
    pub fn nth_root(&self, n: u32) -> Result<GaussianRational> {
        self.nth_roots(n).into_iter().next().ok_or(Error::NotAPower { n })
    }
}

/// Lossless for moderate sizes; saturates to +-inf for huge magnitudes.
pub fn rat_to_f64(x: &BigRational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // shift numerator and denominator so both fit into f64
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let ns = (nb - 60).max(0);
    let ds = (db - 60).max(0);
    let n = (x.numer() >> ns as usize).to_f64().unwrap_or(0.0);
    let d = (x.denom() >> ds as usize).to_f64().unwrap_or(1.0);
    let shift = (ns - ds) as i32;
    (n / d) * 2f64.powi(shift)
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::from_ints(0, 0)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::from_ints(1, 0)
    }
}

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        Self::from_ints(v, 0)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(v: BigRational) -> Self {
        Self::real(v)
    }
}

impl From<BigInt> for GaussianRational {
    fn from(v: BigInt) -> Self {
        Self::real(BigRational::from_integer(v))
    }
}

/// Lexicographic on `(re, im)`; used only to canonically order exponents.
impl Ord for GaussianRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

impl PartialOrd for GaussianRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &'a GaussianRational) -> GaussianRational {
                let f: fn(&GaussianRational, &GaussianRational) -> GaussianRational = $body;
                f(self, rhs)
            }
        }
        impl $tr<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &'a GaussianRational) -> GaussianRational {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| GaussianRational::new(&a.re + &b.re, &a.im + &b.im));
forward_binop!(Sub, sub, |a, b| GaussianRational::new(&a.re - &b.re, &a.im - &b.im));
forward_binop!(Mul, mul, |a, b| GaussianRational::new(
    &a.re * &b.re - &a.im * &b.im,
    &a.re * &b.im + &a.im * &b.re
));
forward_binop!(Div, div, |a, b| a
    .checked_div(b)
    .expect("GaussianRational division by zero"));

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

/// Always `"num/den"`, also for integers.
pub fn rat_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn fmt_rat(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl GaussianRational {
    /// `"num/den"` strings for the two parts; the JSON encoding.
    pub fn parts_as_strings(&self) -> (String, String) {
        (rat_string(&self.re), rat_string(&self.im))
    }

    /// True when printing needs parentheses to be used as a product factor.
    pub(crate) fn needs_parens(&self) -> bool {
        !self.re.is_zero() && !self.im.is_zero()
    }

    pub(crate) fn is_negative_real_like(&self) -> bool {
        (self.im.is_zero() && self.re.is_negative()) || (self.re.is_zero() && self.im.is_negative())
    }
}

/// Parseable form: `3/4`, `-1/2*i`, `(1+2*i)`.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |im: &BigRational| -> String {
            if im.is_one() {
                "i".to_string()
            } else if (-im).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", fmt_rat(im))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.re)),
            (true, false) => write!(f, "{}", im_part(&self.im)),
            (false, false) => {
                let im = if self.im.is_negative() {
                    im_part(&self.im)
                } else {
                    format!("+{}", im_part(&self.im))
                };
                write!(f, "({}{})", fmt_rat(&self.re), im)
            }
        }
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (re, im) = self.parts_as_strings();
        let mut s = serializer.serialize_struct("GaussianRational", 2)?;
        s.serialize_field("re", &re)?;
        s.serialize_field("im", &im)?;
        s.end()
    }
}

mod roots {
    //! Exact n-th roots in Q(i).
    //!
    //! A root of `u/d` (u a Gaussian integer, d a positive integer) is `w/d`
    //! with `w^n = u d^(n-1)`; since Z[i] is integrally closed, `w` is a
    //! Gaussian integer whenever the root is in Q(i). Candidates come from a
    //! floating guess per branch, refined by Newton steps on Z[i] and accepted
    //! only after an exact check.

    use super::*;
    use num_integer::Integer;
    use num_traits::FromPrimitive;

    type GInt = (BigInt, BigInt);

    fn gmul(a: &GInt, b: &GInt) -> GInt {
        (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
    }

    fn gpow(a: &GInt, n: u32) -> GInt {
        let mut acc: GInt = (BigInt::one(), BigInt::zero());
        for _ in 0..n {
            acc = gmul(&acc, a);
        }
        acc
    }

    fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
        // den > 0
        let two = BigInt::from(2);
        (num * &two + den).div_floor(&(den * &two))
    }

    /// Newton step w <- ((n-1) w + g / w^(n-1)) / n, rounded to Z[i].
    fn newton(w: &GInt, g: &GInt, n: u32) -> Option<GInt> {
        let wn1 = gpow(w, n - 1);
        let norm = &wn1.0 * &wn1.0 + &wn1.1 * &wn1.1;
        if norm.is_zero() {
            return None;
        }
        // g / wn1 = g * conj(wn1) / |wn1|^2 as exact rationals
        let num = gmul(g, &(wn1.0.clone(), -wn1.1.clone()));
        let nn = BigInt::from(n);
        let n1 = BigInt::from(n - 1);
        // ((n-1) w |wn1|^2 + num) / (n |wn1|^2)
        let re = &n1 * &w.0 * &norm + &num.0;
        let im = &n1 * &w.1 * &norm + &num.1;
        let den = &nn * &norm;
        Some((round_div(&re, &den), round_div(&im, &den)))
    }

    fn log_abs_and_arg(g: &GInt) -> (f64, f64) {
        let bits = g.0.bits().max(g.1.bits()) as i64;
        let shift = (bits - 60).max(0) as usize;
        let re = (&g.0 >> shift).to_f64().unwrap_or(0.0);
        let im = (&g.1 >> shift).to_f64().unwrap_or(0.0);
        let c = Complex64::new(re, im);
        (c.norm().ln() + shift as f64 * std::f64::consts::LN_2, c.arg())
    }

    fn gint_root(g: &GInt, n: u32) -> Vec<GInt> {
        if g.0.is_zero() && g.1.is_zero() {
            return vec![(BigInt::zero(), BigInt::zero())];
        }
        if n == 1 {
            return vec![g.clone()];
        }
        let (la, arg) = log_abs_and_arg(g);
        let mag = la / n as f64;
        let mut found: Vec<GInt> = Vec::new();
        for j in 0..n {
            let phi = (arg + std::f64::consts::TAU * j as f64) / n as f64;
            let (re, im) = if mag < 700.0 {
                let m = mag.exp();
                (m * phi.cos(), m * phi.sin())
            } else {
                // beyond f64: start from a scaled guess and let Newton converge
                let m = 1e300;
                (m * phi.cos(), m * phi.sin())
            };
            let mut w: GInt = (
                BigInt::from_f64(re.round()).unwrap_or_default(),
                BigInt::from_f64(im.round()).unwrap_or_default(),
            );
            for _ in 0..200 {
                if gpow(&w, n) == *g {
                    if !found.contains(&w) {
                        found.push(w.clone());
                    }
                    break;
                }
                match newton(&w, g, n) {
                    Some(next) if next != w => w = next,
                    _ => {
                        // stalled: probe the 3x3 neighbourhood once
                        for dr in -1i32..=1 {
                            for di in -1i32..=1 {
                                let cand = (&w.0 + dr, &w.1 + di);
                                if gpow(&cand, n) == *g && !found.contains(&cand) {
                                    found.push(cand);
                                }
                            }
                        }
                        break;
                    }
                }
            }
        }
        found
    }

    pub(super) fn gaussian_nth_roots(x: &GaussianRational, n: u32) -> Vec<GaussianRational> {
        assert!(n >= 1, "root order must be positive");
        if x.is_zero() {
            return vec![GaussianRational::zero()];
        }
        let d = x.re.denom().lcm(x.im.denom());
        let u: GInt = (
            x.re.numer() * (&d / x.re.denom()),
            x.im.numer() * (&d / x.im.denom()),
        );
        let dn1 = num_traits::pow(d.clone(), (n - 1) as usize);
        let g = (&u.0 * &dn1, &u.1 * &dn1);
        let mut out: Vec<GaussianRational> = gint_root(&g, n)
            .into_iter()
            .map(|w| {
                GaussianRational::new(
                    BigRational::new(w.0, d.clone()),
                    BigRational::new(w.1, d.clone()),
                )
            })
            .filter(|r| r.pow(n as i64).map(|p| &p == x).unwrap_or(false))
            .collect();
        out.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap_or(Ordering::Equal));
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> GaussianRational {
        GaussianRational::ratio(n, d)
    }

    #[test]
    fn field_ops() {
        let a = GaussianRational::from_ints(1, 2);
        let b = GaussianRational::from_ints(3, -1);
        assert_eq!(&a * &b, GaussianRational::from_ints(5, 5));
        assert_eq!((&a / &b) * b.clone(), a);
        assert!(GaussianRational::zero().inv().is_err());
    }

    #[test]
    fn roots_pick_smallest_argument() {
        assert_eq!(q(16, 1).nth_root(2).unwrap(), q(4, 1));
        assert_eq!(q(9, 4).nth_root(2).unwrap(), q(3, 2));
        // -1 = i^2: roots i (arg pi/2) and -i
        assert_eq!(q(-1, 1).nth_root(2).unwrap(), GaussianRational::i());
        // cube roots of -1 inside Q(i): only -1
        assert_eq!(q(-1, 1).nth_root(3).unwrap(), q(-1, 1));
        // 2i = (1+i)^2
        assert_eq!(
            GaussianRational::from_ints(0, 2).nth_root(2).unwrap(),
            GaussianRational::from_ints(1, 1)
        );
        assert!(q(2, 1).nth_root(2).is_err());
        assert_eq!(q(1, 1).nth_roots(4).len(), 4);
    }

    #[test]
    fn big_roots() {
        let w = GaussianRational::new(
            BigRational::new(BigInt::from(123456789012345i64) * 1000003, 7.into()),
            BigRational::new((-98765432109876i64).into(), 7.into()),
        );
        let p = w.pow(5).unwrap();
        let r = p.nth_roots(5);
        assert!(r.contains(&w));
    }

    #[test]
    fn display_forms() {
        assert_eq!(q(3, 4).to_string(), "3/4");
        assert_eq!(GaussianRational::new(q(1, 2).re, q(-1, 3).re).to_string(), "(1/2-1/3*i)");
        assert_eq!(GaussianRational::from_ints(0, -1).to_string(), "-i");
    }
}
