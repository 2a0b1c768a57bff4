//! Dense univariate polynomials over Q(i).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::GaussianRational;
use crate::error::{Error, Result};

/// `coeffs[k]` is the coefficient of `z^k`. Trailing zeros are never stored,
/// so the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<GaussianRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        Self::monomial(GaussianRational::one(), 1)
    }

    pub fn monomial(c: GaussianRational, k: usize) -> Self {
        let mut coeffs = vec![GaussianRational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// Real integer coefficients, lowest degree first.
    pub fn from_ints(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| GaussianRational::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs.get(k).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.coeff(0)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn scale_rat(&self, c: &BigRational) -> Self {
        self.scale(&GaussianRational::real(c.clone()))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &GaussianRational::from(k as i64))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut out = vec![GaussianRational::zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            out.push(c / &GaussianRational::from(k as i64 + 1));
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut sq = self.clone();
        let mut e = e;
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

    /// Euclidean division over the field Q(i): `self = q * rhs + r`,
    /// `deg r < deg rhs`.
    pub fn div_rem(&self, rhs: &Poly) -> Result<(Poly, Poly)> {
        let d = rhs.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = rhs.leading().expect("nonzero").inv()?;
        let mut rem = self.coeffs.clone();
        let n = match self.degree() {
            Some(n) if n >= d => n,
            _ => return Ok((Poly::zero(), self.clone())),
        };
        let mut quot = vec![GaussianRational::zero(); n - d + 1];
        for k in (0..=n - d).rev() {
            let c = &rem[k + d] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = &c * b;
                rem[k + j] -= &t;
            }
            quot[k] = c;
        }
        rem.truncate(d);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// `Some(q)` when `rhs` divides `self` exactly.
    pub fn exact_div(&self, rhs: &Poly) -> Result<Option<Poly>> {
        let (q, r) = self.div_rem(rhs)?;
        Ok(r.is_zero().then_some(q))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        // monic remainders keep the coefficient growth in check
        b = b.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Squarefree (all roots simple): `gcd(p, p')` is constant.
    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    /// `p(q(z))`.
    pub fn compose(&self, q: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &Poly::constant(c.clone());
        }
        acc
    }

    /// Horner evaluation in floating point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_complex())
    }

    /// Exact evaluation at a Gaussian-rational point.
    pub fn eval_exact(&self, z: &GaussianRational) -> GaussianRational {
        self.coeffs
            .iter()
            .rev()
            .fold(GaussianRational::zero(), |acc, c| &(&acc * z) + c)
    }

    pub fn to_complex_coeffs(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(GaussianRational::to_complex).collect()
    }

    /// `Some(s)` with `self = s * other` for a Gaussian-rational `s`.
    pub fn ratio_to(&self, other: &Poly) -> Option<GaussianRational> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(GaussianRational::zero());
        }
        if self.degree() != other.degree() {
            return None;
        }
        let s = self.leading()? / other.leading()?;
        (other.scale(&s) == *self).then_some(s)
    }

    /// Exact n-th root. Among the Gaussian-rational choices the root whose
    /// leading coefficient has the smallest argument in `[0, 2pi)` is
    /// returned; when the principal branch is in Q(i) this is the branch with
    /// argument in `[0, 2pi/n)`.
    pub fn nth_root(&self, n: u32) -> Result<Poly> {
        if n == 0 {
            return Err(Error::InvalidInput("root order must be >= 1".into()));
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let d = match self.degree() {
            None => return Ok(Poly::zero()),
            Some(d) => d,
        };
        if d % n as usize != 0 {
            return Err(Error::NotAPower { n });
        }
        let e = d / n as usize;
        // Reversed polynomial B(x) = x^d b(1/x) has constant term lead(b);
        // G = B^(1/n) as a power series via Miller's recurrence
        //   g_k = 1/(k b_0) sum_{j=1..k} ((1/n + 1) j - k) b_j g_{k-j}.
        let rev: Vec<GaussianRational> = self.coeffs.iter().rev().cloned().collect();
        let b0 = &rev[0];
        let alpha = BigRational::new(1.into(), (n as i64).into());
        for g0 in b0.nth_roots(n) {
            let mut g = vec![g0];
            let b0_inv = b0.inv()?;
            for k in 1..=e {
                let mut acc = GaussianRational::zero();
                for j in 1..=k.min(d) {
                    let w = (&alpha + BigRational::one()) * BigRational::from_integer((j as i64).into())
                        - BigRational::from_integer((k as i64).into());
                    let t = &(&rev[j] * &g[k - j]) * &GaussianRational::real(w);
                    acc += &t;
                }
                let kk = GaussianRational::from(k as i64);
                g.push(&(&acc * &b0_inv) / &kk);
            }
            g.reverse();
            let cand = Poly::new(g);
            if cand.pow(n) == *self {
                return Ok(cand);
            }
        }
        Err(Error::NotAPower { n })
    }

    /// Numerical roots (Aberth iteration); empty for constants.
    pub fn roots_approx(&self) -> Vec<Complex64> {
        let d = match self.degree() {
            None | Some(0) => return Vec::new(),
            Some(d) => d,
        };
        let c = self.to_complex_coeffs();
        let lead = c[d];
        let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
        let bound = 1.0 + monic[..d].iter().map(|x| x.norm()).fold(0.0, f64::max);
        let dp: Vec<Complex64> = (1..=d).map(|k| monic[k] * k as f64).collect();
        let eval = |cs: &[Complex64], z: Complex64| {
            cs.iter().rev().fold(Complex64::new(0.0, 0.0), |a, &x| a * z + x)
        };
        let mut z: Vec<Complex64> = (0..d)
            .map(|k| {
                let th = std::f64::consts::TAU * k as f64 / d as f64 + 0.4;
                Complex64::from_polar(0.5 * bound, th)
            })
            .collect();
        for _ in 0..500 {
            let mut max_step: f64 = 0.0;
            for i in 0..d {
                let p = eval(&monic, z[i]);
                let q = eval(&dp, z[i]);
                if p.norm() == 0.0 {
                    continue;
                }
                let ratio = p / q;
                let s: Complex64 = (0..d)
                    .filter(|&j| j != i)
                    .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                    .sum();
                let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
                if step.is_finite() {
                    z[i] -= step;
                    max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
                }
            }
            if max_step < 1e-15 {
                break;
            }
        }
        z
    }
}

/// Canonical exponent order: degree first, then coefficients compared
/// lexicographically from the leading term, each by `(re, im)`.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! owned_poly_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &'a Poly) -> Poly { (&self).$m(rhs) }
        }
    )*};
}
owned_poly_ops!(Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl From<GaussianRational> for Poly {
    fn from(c: GaussianRational) -> Self {
        Poly::constant(c)
    }
}

/// Parseable form, highest degree first: `(1+2*i)*z^2 + 3/4*z - 1`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = if c.is_negative_real_like() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            if k == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{mag}*{var}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Poly", 2)?;
        s.serialize_field("text", &self.to_string())?;
        s.serialize_field("coeffs", &self.coeffs)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::from_ints(cs)
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&p(&[1, 1]) * &p(&[-1, 1]), p(&[-1, 0, 1]));
        assert_eq!(p(&[1, 2, 1]).div_rem(&p(&[1, 1])).unwrap(), (p(&[1, 1]), Poly::zero()));
        // z^3 = z (z^2 + 1) - z
        assert_eq!(p(&[0, 0, 0, 1]).div_rem(&p(&[1, 0, 1])).unwrap(), (p(&[0, 1]), p(&[0, -1])));
        assert_eq!(p(&[1]).div_rem(&Poly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p(&[0, 0, 0, 1]).derivative(), p(&[0, 0, 3]));
        assert_eq!(p(&[5]).derivative(), Poly::zero());
        let a = Poly::new(vec![
            GaussianRational::zero(),
            GaussianRational::i(),
            GaussianRational::from_ints(1, 1),
        ]);
        let want = Poly::new(vec![GaussianRational::i(), GaussianRational::from_ints(2, 2)]);
        assert_eq!(a.derivative(), want);
        assert_eq!(a.antiderivative().derivative(), a);
    }

    #[test]
    fn nth_root_examples() {
        assert_eq!(p(&[1, 2, 1]).nth_root(2).unwrap(), p(&[1, 1]));
        assert_eq!(p(&[0, 1]).nth_root(2), Err(Error::NotAPower { n: 2 }));
        // 16 has square roots +-4; the branch rule keeps +4
        assert_eq!(p(&[16]).nth_root(2).unwrap(), p(&[4]));
        assert_eq!(p(&[1, 0, 1]).nth_root(2), Err(Error::NotAPower { n: 2 }));
        // (2 - z)^2: leading coefficient 1 has roots +-1, branch keeps +1 -> z - 2
        assert_eq!(p(&[4, -4, 1]).nth_root(2).unwrap(), p(&[-2, 1]));
    }

    #[test]
    fn eval_examples() {
        let i = Complex64::new(0.0, 1.0);
        assert!(p(&[1, 0, 1]).eval(i).norm() < 1e-15);
        let v = p(&[0, -2, 0, 1]).eval(Complex64::new(1.0, 1.0));
        assert!((v - Complex64::new(-4.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[-1, 1]);
        assert_eq!(a.gcd(&b), b);
        assert!(a.is_squarefree());
        assert!(!p(&[1, 2, 1]).is_squarefree());
    }

    #[test]
    fn roots_approx_matches() {
        let r = p(&[-6, 11, -6, 1]).roots_approx();
        let mut re: Vec<f64> = r.iter().map(|z| z.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (x, want) in re.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - want).abs() < 1e-10);
        }
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, 0, 1]).to_string(), "z^2 - 1");
        let q = Poly::new(vec![GaussianRational::zero(), GaussianRational::from_ints(1, 2), GaussianRational::ratio(3, 4)]);
        assert_eq!(q.to_string(), "3/4*z^2 + (1+2*i)*z");
    }
}
