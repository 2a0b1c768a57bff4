//! Explicit entire solutions of `f^n + P(z, f) = b1 e^{p1} + b2 e^{p2}`.
//!
//! Two families are constructed: `alpha = -1`, where
//! `f = g1 e^{p1/n} + g2 e^{p2/n}`, and `0 < alpha < 1`, where
//! `f = g1 sum_j c_j (b2/b1)^j e^{t_j p1}` with `t_j = j (alpha - 1) + 1/n`.
//! In both cases `f^n - b1 e^{p1} - b2 e^{p2}` is a residual whose exponents
//! are at most `(n-1)/n` times `p1`, so it can be absorbed by a differential
//! polynomial of degree at most `n - 1`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::{rat, rat_string, rat_to_f64, GaussianRational, Poly, RatFunc};
use crate::error::{Error, Result};
use crate::expoly::{ExpPoly, ExpTerm};
use crate::hfun::sample_points;

/// Validated input `(n, b1, b2, p1, p2)` with `p1` monic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TCProblem {
    pub n: u32,
    pub b1: Poly,
    pub b2: Poly,
    pub p1: Poly,
    pub p2: Poly,
    #[serde(skip)]
    alpha: BigRational,
    #[serde(skip)]
    k: usize,
}

impl TCProblem {
    pub fn new(n: u32, b1: Poly, b2: Poly, p1: Poly, p2: Poly) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("n = {n} must be at least 2")));
        }
        if b1.is_zero() || b2.is_zero() {
            return Err(Error::InvalidInput("b1 and b2 must be nonzero".into()));
        }
        let (k1, k2) = (p1.degree().unwrap_or(0), p2.degree().unwrap_or(0));
        if k1 != k2 {
            return Err(Error::DegreeMismatch { left: k1, right: k2 });
        }
        if k1 == 0 {
            return Err(Error::ConstantPolynomial);
        }
        if !p1.constant_term().is_zero() || !p2.constant_term().is_zero() {
            return Err(Error::InvalidInput("p1(0) and p2(0) must vanish".into()));
        }
        if !p1.leading().expect("nonzero").is_one() {
            return Err(Error::InvalidInput(format!(
                "leading coefficient of p1 must be 1, got {}",
                p1.leading().expect("nonzero")
            )));
        }
        let a = p2.leading().expect("nonzero").clone();
        if !a.is_real() {
            return Err(Error::NonRealAlpha(a.to_string()));
        }
        let alpha = a.re;
        if alpha.is_one() {
            return Err(Error::EqualLeadingCoefficients);
        }
        if alpha.abs() > BigRational::one() {
            return Err(Error::InvalidInput(format!("|alpha| = |{alpha}| exceeds 1; swap the terms")));
        }
        Ok(Self { n, b1, b2, p1, p2, alpha, k: k1 })
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    fn rhs(&self) -> ExpPoly {
        let t1 = ExpPoly::term(self.b1.clone(), self.p1.clone()).expect("p1(0) = 0");
        let t2 = ExpPoly::term(self.b2.clone(), self.p2.clone()).expect("p2(0) = 0");
        &t1 + &t2
    }
}

/// Minimal `m >= 0` with `alpha <= ((m+1) n - 1) / ((m+1) n)`.
pub fn smallest_m(n: u32, alpha: &BigRational) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n = {n} must be at least 2")));
    }
    if !(alpha.is_positive() && *alpha < BigRational::one()) {
        return Err(Error::InvalidInput(format!("alpha = {alpha} must lie in (0, 1)")));
    }
    let mut m = 0usize;
    loop {
        let d = BigInt::from((m as u64 + 1) * n as u64);
        if *alpha <= BigRational::new(&d - 1, d) {
            return Ok(m);
        }
        m += 1;
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `sum n!/(j_0! ... j_m!) c_0^{j_0} ... c_m^{j_m}` over `j_0 + ... + j_m = n`
/// with `j_1 + 2 j_2 + ... + m j_m = k0`.
pub fn multinomial_c(k0: usize, n: u32, c: &[GaussianRational]) -> GaussianRational {
    #[allow(clippy::too_many_arguments)]
    fn walk(
        i: usize,
        left: u32,
        weight: usize,
        c: &[GaussianRational],
        den: BigInt,
        prod: GaussianRational,
        nfact: &BigInt,
        acc: &mut GaussianRational,
    ) {
        if i == c.len() {
            if left == 0 && weight == 0 {
                let coef = GaussianRational::real(BigRational::new(nfact.clone(), den));
                *acc += &(&coef * &prod);
            }
            return;
        }
        // slot i adds i to the weight per unit, so stop once it overshoots
        let mut power = GaussianRational::one();
        for j in 0..=left {
            let w = i * j as usize;
            if w > weight {
                break;
            }
            walk(i + 1, left - j, weight - w, c, &den * factorial(j), &prod * &power, nfact, acc);
            power = &power * &c[i];
        }
    }
    let mut acc = GaussianRational::zero();
    if c.is_empty() {
        return acc;
    }
    walk(0, n, k0, c, BigInt::one(), GaussianRational::one(), &factorial(n), &mut acc);
    acc
}

/// `c_0 = 1`, `c_1 = 1/n`, and `c_j` for `j >= 2` from `C_j = 0`, which is
/// linear in `c_j` with coefficient `n c_0^{n-1} = n`.
pub fn solve_coefficients(n: u32, m: usize) -> Vec<GaussianRational> {
    let mut c = vec![GaussianRational::one()];
    if m >= 1 {
        c.push(GaussianRational::ratio(1, n as i64));
    }
    for j in 2..=m {
        c.push(GaussianRational::zero());
        let rest = multinomial_c(j, n, &c);
        c[j] = -(rest / GaussianRational::from(n as i64));
    }
    c
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TcCase {
    /// `alpha = -1`.
    MinusOne,
    /// `0 < alpha < 1`.
    Fractional,
}

#[derive(Clone, Debug, Serialize)]
pub struct TcWitness {
    pub case: TcCase,
    pub n: u32,
    pub alpha: GaussianRational,
    pub m: usize,
    pub gamma1: Poly,
    pub gamma2: Option<Poly>,
    pub c: Vec<GaussianRational>,
    #[serde(serialize_with = "ser_rats")]
    pub t: Vec<BigRational>,
    pub f: ExpPoly,
    pub residual: ExpPoly,
}

fn ser_rats<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(rat_string))
}

impl TcWitness {
    /// Rebuild `f` from the stored `gamma`, `c` and `t`.
    pub fn rebuild_f(&self, prob: &TCProblem) -> Result<ExpPoly> {
        match self.case {
            TcCase::MinusOne => {
                let g2 = self.gamma2.clone().ok_or_else(|| Error::VerificationFailed("gamma2 missing".into()))?;
                let nn = rat(1, self.n as i64);
                ExpPoly::normalize([
                    ExpTerm::new(self.gamma1.clone().into(), prob.p1.scale_rat(&nn)),
                    ExpTerm::new(g2.into(), prob.p2.scale_rat(&nn)),
                ])
            }
            TcCase::Fractional => {
                let ratio = RatFunc::new(prob.b2.clone(), prob.b1.clone())?;
                let g1 = RatFunc::from_poly(self.gamma1.clone());
                let terms = self.c.iter().zip(&self.t).enumerate().map(|(j, (cj, tj))| {
                    let coeff = (&g1 * &ratio.pow(j as i64).expect("nonzero")).scale(cj);
                    ExpTerm::new(coeff, prob.p1.scale_rat(tj))
                });
                ExpPoly::normalize(terms.collect::<Vec<_>>())
            }
        }
    }
}

/// `alpha = -1`: `f = g1 e^{p1/n} + g2 e^{p2/n}` with `g_i^n = b_i`.
pub fn construct_case1(prob: &TCProblem) -> Result<TcWitness> {
    if *prob.alpha() != -BigRational::one() {
        return Err(Error::InvalidInput(format!("alpha = {} is not -1", prob.alpha())));
    }
    let gamma1 = prob.b1.nth_root(prob.n)?;
    let gamma2 = prob.b2.nth_root(prob.n)?;
    let nn = rat(1, prob.n as i64);
    let mut w = TcWitness {
        case: TcCase::MinusOne,
        n: prob.n,
        alpha: GaussianRational::from(-1),
        m: 0,
        gamma1,
        gamma2: Some(gamma2),
        c: vec![GaussianRational::one(), GaussianRational::one()],
        t: vec![nn.clone(), -nn],
        f: ExpPoly::zero(),
        residual: ExpPoly::zero(),
    };
    w.f = w.rebuild_f(prob)?;
    w.residual = &w.f.pow(prob.n) - &prob.rhs();
    Ok(w)
}

/// `0 < alpha < 1`: the sum over `j = 0..=m` with `m = smallest_m(n, alpha)`.
pub fn construct_case2(prob: &TCProblem) -> Result<TcWitness> {
    let alpha = prob.alpha().clone();
    let m = smallest_m(prob.n, &alpha)?;
    if m >= 1 && prob.p2 != prob.p1.scale_rat(&alpha) {
        return Err(Error::P2NotProportional);
    }
    let gamma1 = prob.b1.nth_root(prob.n)?;
    let nn = rat(1, prob.n as i64);
    let t = (0..=m).map(|j| &alpha * BigRational::from(BigInt::from(j)) - BigInt::from(j) + &nn).collect();
    let mut w = TcWitness {
        case: TcCase::Fractional,
        n: prob.n,
        alpha: GaussianRational::real(alpha),
        m,
        gamma1,
        gamma2: None,
        c: solve_coefficients(prob.n, m),
        t,
        f: ExpPoly::zero(),
        residual: ExpPoly::zero(),
    };
    w.f = w.rebuild_f(prob)?;
    w.residual = &w.f.pow(prob.n) - &prob.rhs();
    Ok(w)
}

/// Dispatch on `alpha`.
pub fn construct(prob: &TCProblem) -> Result<TcWitness> {
    if *prob.alpha() == -BigRational::one() {
        construct_case1(prob)
    } else if prob.alpha().is_positive() {
        construct_case2(prob)
    } else {
        Err(Error::InvalidInput(format!(
            "no explicit family for alpha = {}; only -1 and (0, 1) are supported",
            prob.alpha()
        )))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualTerm {
    pub exponent: String,
    pub coefficient: String,
    /// Leading coefficient of the exponent relative to `p1`.
    pub factor: String,
    pub factor_f64: f64,
    /// Whether the exponent equals `factor * p1` exactly.
    pub proportional: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TcReport {
    pub n: u32,
    pub bound: String,
    pub matched: Vec<(String, String)>,
    pub residual: Vec<ResidualTerm>,
    /// `P(z, f) = -residual`, as an exponential polynomial in `z`.
    pub p_of_f: String,
    pub numeric_points: usize,
    pub numeric_max_rel_error: f64,
}

/// Rounding scale for evaluating `e` at `z`: every coefficient taken in
/// absolute value, so cancellation near zeros of the coefficients does not
/// shrink it.
fn magnitude(e: &ExpPoly, z: Complex64) -> Result<f64> {
    let r = z.norm();
    let abs_poly = |p: &Poly| p.coeffs().iter().rev().fold(0.0, |acc, c| acc * r + c.to_complex().norm());
    let mut total = 0.0;
    for t in e.terms() {
        let den = t.coeff.den().eval(z).norm();
        if den == 0.0 {
            return Err(Error::PoleProximity { magnitude: f64::INFINITY });
        }
        total += abs_poly(t.coeff.num()) / den * t.exponent.eval(z).re.exp();
    }
    Ok(total)
}

/// Exact check of the witness against `f^n - b1 e^{p1} - b2 e^{p2} = residual`
/// plus a numerical spot check at ten points. `gamma`, if given, must have
/// exponents of degree below `k` and is added to `f` first.
pub fn verify_tc(w: &TcWitness, prob: &TCProblem, gamma: Option<&ExpPoly>) -> Result<TcReport> {
    let rebuilt = w.rebuild_f(prob)?;
    if rebuilt != w.f {
        return Err(Error::VerificationFailed(format!("f = {} does not match its coefficients ({rebuilt})", w.f)));
    }
    if !w.f.is_entire() {
        return Err(Error::VerificationFailed(format!("f = {} has poles", w.f)));
    }
    let k = prob.degree();
    let f = match gamma {
        Some(g) => {
            if let Some(q) = g.exponents().find(|q| q.degree().unwrap_or(0) >= k) {
                return Err(Error::InvalidInput(format!("gamma exponent {q} is not of degree below {k}")));
            }
            if !g.is_entire() {
                return Err(Error::InvalidInput("gamma must be entire".into()));
            }
            &w.f + g
        }
        None => w.f.clone(),
    };
    let residual = &f.pow(w.n) - &prob.rhs();
    if gamma.is_none() && residual != w.residual {
        return Err(Error::VerificationFailed(format!(
            "stored residual {} differs from recomputed {residual}",
            w.residual
        )));
    }
    let fn_pow = f.pow(w.n);
    let mut matched = vec![(prob.p1.to_string(), fn_pow.coeff_of(&prob.p1).to_string())];
    let c1 = residual.coeff_of(&prob.p1);
    if !c1.is_zero() {
        return Err(Error::VerificationFailed(format!(
            "coefficient of exp({}) is {} instead of {}",
            prob.p1,
            fn_pow.coeff_of(&prob.p1),
            prob.b1
        )));
    }
    if w.case == TcCase::MinusOne || w.m >= 1 {
        if !residual.coeff_of(&prob.p2).is_zero() {
            return Err(Error::VerificationFailed(format!(
                "coefficient of exp({}) is {} instead of {}",
                prob.p2,
                fn_pow.coeff_of(&prob.p2),
                prob.b2
            )));
        }
        matched.push((prob.p2.to_string(), fn_pow.coeff_of(&prob.p2).to_string()));
    }
    let bound = rat(w.n as i64 - 1, w.n as i64);
    let mut terms = Vec::new();
    for t in residual.terms() {
        let s = t.exponent.coeff(k);
        if !s.is_real() || s.re > bound {
            return Err(Error::VerificationFailed(format!(
                "residual exponent {} has factor {s} above {bound}",
                t.exponent
            )));
        }
        terms.push(ResidualTerm {
            exponent: t.exponent.to_string(),
            coefficient: t.coeff.to_string(),
            factor: s.to_string(),
            factor_f64: rat_to_f64(&s.re),
            proportional: t.exponent == prob.p1.scale(&s),
        });
    }
    let pts = sample_points(2.0, 10);
    let mut worst = 0.0_f64;
    for z in &pts {
        let fz = f.eval(*z)?;
        let lhs = fz.powu(w.n);
        let rhs = prob.rhs().eval(*z)?;
        let res = residual.eval(*z)?;
        let scale = magnitude(&f, *z)?.powi(w.n as i32) + magnitude(&prob.rhs(), *z)? + magnitude(&residual, *z)?;
        let err = (lhs - rhs - res).norm() / scale.max(f64::MIN_POSITIVE);
        worst = worst.max(err);
    }
    if worst > 1e-8 {
        return Err(Error::VerificationFailed(format!("numerical residual {worst:e} exceeds 1e-8")));
    }
    Ok(TcReport {
        n: w.n,
        bound: bound.to_string(),
        matched,
        residual: terms,
        p_of_f: (-&residual).to_string(),
        numeric_points: pts.len(),
        numeric_max_rel_error: worst,
    })
}

/// `D_j = iota_{j-1} b1^{1/n - j}`, with `iota_{-1} = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct DDescriptor {
    pub iota_prev: RatFunc,
    #[serde(serialize_with = "ser_rat")]
    pub b1_power: BigRational,
}

fn ser_rat<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

#[derive(Clone, Debug, Serialize)]
pub struct KappaIota {
    pub a1: RatFunc,
    pub iota: Vec<RatFunc>,
    pub kappa: Vec<RatFunc>,
    pub d: Vec<DDescriptor>,
}

/// `iota_j`, `kappa_j` and `D_j` for `j = 0..=m`, with the identities
/// `iota_j = -(jn - 1) iota_0 iota_{j-1}` and
/// `kappa_j = (log D_j)' + t_j p1'` checked exactly; `(log D_j)'` is taken as
/// `(D_j^n)' / (n D_j^n)` so the check does not reuse the closed form.
pub fn kappa_iota(prob: &TCProblem, m: usize) -> Result<KappaIota> {
    let n = prob.n as i64;
    let b1 = RatFunc::from_poly(prob.b1.clone());
    let b2 = RatFunc::from_poly(prob.b2.clone());
    let p1d = RatFunc::from_poly(prob.p1.derivative());
    let p2d = RatFunc::from_poly(prob.p2.derivative());
    let l1 = b1.log_derivative()?;
    let big_b1 = &l1 + &p1d;
    let big_b2 = &b2.log_derivative()? + &p2d;
    let a1 = &(&b1 * &b2) * &(&big_b2 - &big_b1);
    if a1.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let inv_n = GaussianRational::ratio(1, n);
    let iota0 = a1.checked_div(&b1)?.scale(&inv_n);
    let mut iota = vec![iota0.clone()];
    for j in 1..=m {
        let mut prod = GaussianRational::from(if j % 2 == 0 { 1 } else { -1 });
        for l in 1..=j as i64 {
            prod = &prod * &GaussianRational::from(l * n - 1);
        }
        let closed = iota0.pow(j as i64 + 1)?.scale(&prod);
        let rec = (&iota0 * &iota[j - 1]).scale(&GaussianRational::from(1 - j as i64 * n));
        if closed != rec {
            return Err(Error::VerificationFailed(format!("iota_{j}: {closed} != {rec}")));
        }
        iota.push(closed);
    }
    let alpha = prob.alpha().clone();
    let t = |j: usize| -> GaussianRational {
        let j = BigRational::from(BigInt::from(j));
        GaussianRational::real(&j * &alpha - &j + rat(1, n))
    };
    let mut kappa = vec![(&l1 + &p1d).scale(&inv_n)];
    let mut d = vec![DDescriptor { iota_prev: RatFunc::one(), b1_power: rat(1, n) }];
    for j in 1..=m {
        let prev = &iota[j - 1];
        let jn1 = GaussianRational::ratio(j as i64 * n - 1, n);
        let kj = &(&prev.log_derivative()? - &l1.scale(&jn1)) + &p1d.scale(&t(j));
        // D_j^n = iota_{j-1}^n b1^{1 - jn} = num / den, left unreduced
        let e = (j as i64 * n - 1) as u32;
        let num = prev.num().pow(n as u32);
        let den = &prev.den().pow(n as u32) * &prob.b1.pow(e);
        let logd_num = &(&num.derivative() * &den) - &(&num * &den.derivative());
        // n (kappa_j - t_j p1') must equal logd_num / (num den)
        let lhs = (&kj - &p1d.scale(&t(j))).scale(&GaussianRational::from(n));
        if lhs.num() * &(&num * &den) != &logd_num * lhs.den() {
            return Err(Error::VerificationFailed(format!("kappa_{j}: {kj} disagrees with (log D_{j})'")));
        }
        kappa.push(kj);
        d.push(DDescriptor { iota_prev: prev.clone(), b1_power: rat(1, n) - BigInt::from(j) });
    }
    Ok(KappaIota { a1, iota, kappa, d })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: i64) -> GaussianRational {
        GaussianRational::from(v)
    }

    fn p(cs: &[i64]) -> Poly {
        Poly::from_ints(cs)
    }

    fn prob(n: u32, b1: i64, b2: i64, p1: Poly, p2: Poly) -> TCProblem {
        TCProblem::new(n, p(&[b1]), p(&[b2]), p1, p2).unwrap()
    }

    #[test]
    fn smallest_m_examples() {
        assert_eq!(smallest_m(2, &rat(1, 2)).unwrap(), 0);
        assert_eq!(smallest_m(2, &rat(3, 4)).unwrap(), 1);
        assert_eq!(smallest_m(2, &rat(7, 8)).unwrap(), 3);
        assert!(smallest_m(2, &rat(1, 1)).is_err());
    }

    #[test]
    fn multinomial_examples() {
        let c = vec![GaussianRational::ratio(3, 1), GaussianRational::ratio(5, 1)];
        assert_eq!(multinomial_c(0, 3, &c), g(27));
        assert_eq!(multinomial_c(1, 3, &c), g(3 * 9 * 5));
        let c = vec![g(1), GaussianRational::ratio(1, 2), GaussianRational::ratio(-1, 8)];
        assert!(multinomial_c(2, 2, &c).is_zero());
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(solve_coefficients(2, 1), vec![g(1), GaussianRational::ratio(1, 2)]);
        assert_eq!(
            solve_coefficients(2, 2),
            vec![g(1), GaussianRational::ratio(1, 2), GaussianRational::ratio(-1, 8)]
        );
        assert_eq!(solve_coefficients(3, 1), vec![g(1), GaussianRational::ratio(1, 3)]);
    }

    #[test]
    fn case1_examples() {
        let pr = prob(2, 1, 1, Poly::z(), -Poly::z());
        let w = construct_case1(&pr).unwrap();
        assert_eq!(w.residual, ExpPoly::constant(g(2)));
        let rep = verify_tc(&w, &pr, None).unwrap();
        assert_eq!(rep.residual[0].factor, "0");
        let pr = prob(2, 4, 9, p(&[0, 0, 1]), p(&[0, 0, -1]));
        let w = construct_case1(&pr).unwrap();
        assert_eq!(w.residual, ExpPoly::constant(g(12)));
        let pr = prob(3, 8, 1, Poly::z(), -Poly::z());
        let w = construct_case1(&pr).unwrap();
        let third = Poly::z().scale_rat(&rat(1, 3));
        let want = &ExpPoly::term(g(12), third.clone()).unwrap() + &ExpPoly::term(g(6), -third).unwrap();
        assert_eq!(w.residual, want);
        verify_tc(&w, &pr, None).unwrap();
    }

    #[test]
    fn case2_examples() {
        let half = Poly::z().scale_rat(&rat(1, 2));
        let pr = prob(2, 1, 1, Poly::z(), half.clone());
        let w = construct_case2(&pr).unwrap();
        assert_eq!(w.m, 0);
        assert_eq!(w.residual, -ExpPoly::exp(half).unwrap());
        let rep = verify_tc(&w, &pr, None).unwrap();
        assert_eq!(rep.residual[0].factor, "1/2");

        let pr = prob(2, 1, 5, Poly::z(), Poly::z().scale_rat(&rat(3, 4)));
        let w = construct_case2(&pr).unwrap();
        assert_eq!(w.m, 1);
        // c1^2 b2^2 e^{z/2} = 25/4 e^{z/2}
        let want = ExpPoly::term(GaussianRational::ratio(25, 4), Poly::z().scale_rat(&rat(1, 2))).unwrap();
        assert_eq!(w.residual, want);
        verify_tc(&w, &pr, None).unwrap();

        let pr = prob(2, 1, 1, Poly::z(), Poly::z().scale_rat(&rat(5, 6)));
        let w = construct_case2(&pr).unwrap();
        assert_eq!(w.m, 2);
        assert_eq!(w.t, vec![rat(1, 2), rat(1, 3), rat(1, 6)]);
        assert!(w.residual.coeff_of(&Poly::z().scale_rat(&rat(2, 3))).is_zero());
        let rep = verify_tc(&w, &pr, None).unwrap();
        assert!(rep.residual.iter().all(|t| t.factor_f64 <= 0.5));

        let bad = TCProblem::new(2, p(&[1]), p(&[1]), p(&[0, 1, 1]), p(&[0, 0, 1]).scale_rat(&rat(3, 4))).unwrap();
        assert_eq!(construct_case2(&bad).unwrap_err(), Error::P2NotProportional);
    }

    #[test]
    fn tampered_witness_fails() {
        let pr = prob(2, 1, 1, Poly::z(), Poly::z().scale_rat(&rat(3, 4)));
        let mut w = construct_case2(&pr).unwrap();
        w.c[1] = GaussianRational::ratio(1, 3);
        assert!(matches!(verify_tc(&w, &pr, None), Err(Error::VerificationFailed(_))));
        w.f = w.rebuild_f(&pr).unwrap();
        w.residual = &w.f.pow(2) - &pr.rhs();
        let err = verify_tc(&w, &pr, None).unwrap_err();
        assert!(matches!(&err, Error::VerificationFailed(msg) if msg.contains("3/4*z")), "{err}");
    }

    #[test]
    fn gamma_is_accepted() {
        let pr = prob(2, 1, 1, p(&[0, 0, 1]), p(&[0, 0, -1]));
        let w = construct_case1(&pr).unwrap();
        let gamma = ExpPoly::exp(Poly::z()).unwrap();
        verify_tc(&w, &pr, Some(&gamma)).unwrap();
        let big = ExpPoly::exp(p(&[0, 0, 2])).unwrap();
        assert!(verify_tc(&w, &pr, Some(&big)).is_err());
    }

    #[test]
    fn kappa_iota_example() {
        let pr = prob(2, 1, 1, Poly::z(), Poly::z().scale_rat(&rat(3, 4)));
        let ki = kappa_iota(&pr, 1).unwrap();
        assert_eq!(ki.iota[0], RatFunc::constant(GaussianRational::ratio(-1, 8)));
        assert_eq!(ki.iota[1], RatFunc::constant(GaussianRational::ratio(-1, 64)));
        assert_eq!(ki.kappa[0], RatFunc::constant(GaussianRational::ratio(1, 2)));
    }

    #[test]
    fn problem_validation() {
        assert!(matches!(TCProblem::new(1, p(&[1]), p(&[1]), Poly::z(), -Poly::z()), Err(Error::InvalidInput(_))));
        let iz = Poly::monomial(GaussianRational::i(), 1);
        assert!(matches!(TCProblem::new(2, p(&[1]), p(&[1]), Poly::z(), iz), Err(Error::NonRealAlpha(_))));
        assert!(matches!(
            TCProblem::new(2, p(&[1]), p(&[1]), Poly::z(), p(&[0, 0, 1])),
            Err(Error::DegreeMismatch { .. })
        ));
        assert!(matches!(TCProblem::new(2, p(&[2]), p(&[1]), Poly::z(), -Poly::z()).and_then(|pr| construct(&pr)), Err(Error::NotAPower { .. })));
    }
}
