//! Solutions `g = kappa e^h` of `g'' + A g = 0` with
//! `A = -(b1 e^{p1} + b2 e^{p2} + b3)`, for `p2 = p1/2` and for the explicit
//! `p1 = z`, `p2 = 3z/4` family.
//!
//! With `f = h'` the equation becomes
//! `f^2 + f' + 2 (kappa'/kappa) f + kappa''/kappa = -A`, which is checked
//! exactly after multiplying through by `kappa^2`.

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{rat, solve_linear, GaussianRational, Poly, RatFunc};
use crate::error::{Error, Result};
use crate::expoly::ExpPoly;

#[derive(Clone, Debug, Serialize)]
pub struct HalfCaseWitness {
    pub p1: Poly,
    pub kappa: Poly,
    pub gamma1: Poly,
    pub gamma: Poly,
    pub b1: Poly,
    pub b2: Poly,
    pub b3: Poly,
    /// `h' = gamma1 e^{p1/2} + gamma`.
    pub hprime: ExpPoly,
    /// `A = -(b1 e^{p1} + b2 e^{p1/2} + b3)`.
    pub a: ExpPoly,
}

fn check_kappa(kappa: &Poly) -> Result<()> {
    if kappa.is_zero() {
        return Err(Error::InvalidInput("kappa must be nonzero".into()));
    }
    if !kappa.is_squarefree() {
        return Err(Error::KappaNotSquarefree);
    }
    Ok(())
}

fn exact_quotient(num: &Poly, kappa: &Poly, which: &'static str) -> Result<Poly> {
    num.exact_div(kappa)?.ok_or(Error::NonPolynomialRelation { which })
}

/// Choose `kappa`, `gamma` and `b1 = gamma1^2`; derive `b2`, `b3` from
///
/// `2 gamma1 gamma + gamma1' + gamma1 p1'/2 + 2 (kappa'/kappa) gamma1 = b2`,
/// `gamma^2 + gamma' + 2 gamma kappa'/kappa + kappa''/kappa = b3`.
pub fn construct_half(p1: &Poly, kappa: &Poly, gamma: &Poly, b1: &Poly) -> Result<HalfCaseWitness> {
    match p1.degree() {
        Some(k) if k >= 1 => {}
        _ => return Err(Error::ConstantPolynomial),
    }
    if !p1.constant_term().is_zero() {
        return Err(Error::InvalidInput("p1(0) must vanish".into()));
    }
    check_kappa(kappa)?;
    let gamma1 = b1.nth_root(2)?;
    let k1 = kappa.derivative();
    let k2 = k1.derivative();
    let two = GaussianRational::from(2);
    let half = GaussianRational::ratio(1, 2);

    let b2_num = &(&(&(&gamma1 * gamma).scale(&two) + &gamma1.derivative())
        + &(&gamma1 * &p1.derivative()).scale(&half))
        * kappa
        + (&k1 * &gamma1).scale(&two);
    let b2 = exact_quotient(&b2_num, kappa, "b2")?;
    let b3_num = &(&(&(gamma * gamma) + &gamma.derivative()) * kappa) + &(&(&k1 * gamma).scale(&two) + &k2);
    let b3 = exact_quotient(&b3_num, kappa, "b3")?;

    let p_half = p1.scale_rat(&rat(1, 2));
    let hprime = &ExpPoly::term(gamma1.clone(), p_half.clone())? + &ExpPoly::from_poly(gamma.clone());
    let a = -(&(&ExpPoly::term(b1.clone(), p1.clone())? + &ExpPoly::term(b2.clone(), p_half)?)
        + &ExpPoly::from_poly(b3.clone()));
    Ok(HalfCaseWitness {
        p1: p1.clone(),
        kappa: kappa.clone(),
        gamma1,
        gamma: gamma.clone(),
        b1: b1.clone(),
        b2,
        b3,
        hprime,
        a,
    })
}

/// `(g, s, t)` with `s a + t b = g = gcd(a, b)`, `g` monic.
fn ext_gcd(a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly)> {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Poly::one(), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), Poly::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1)?;
        let s = &s0 - &(&q * &s1);
        let t = &t0 - &(&q * &t1);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s);
        (t0, t1) = (t1, t);
    }
    let lead = r0.leading().ok_or(Error::DivisionByZero)?.inv()?;
    Ok((r0.scale(&lead), s0.scale(&lead), t0.scale(&lead)))
}

/// A `gamma` that makes the `b3` relation polynomial for squarefree `kappa`:
/// `gamma = g0 + kappa * free` where `g0 = -kappa'' / (2 kappa') mod kappa`.
/// The `b2` relation additionally needs `kappa | gamma1`.
pub fn admissible_gamma(kappa: &Poly, free: &Poly) -> Result<Poly> {
    check_kappa(kappa)?;
    if kappa.is_constant() {
        return Ok(free.clone());
    }
    let k1 = kappa.derivative();
    let (_, inv, _) = ext_gcd(&k1.scale(&GaussianRational::from(2)), kappa)?;
    let (_, g0) = (&(-&kappa.derivative().derivative()) * &inv).div_rem(kappa)?;
    Ok(&g0 + &(kappa * free))
}

/// `kappa^2 [(h')^2 + h'' + 2 (kappa'/kappa) h' + kappa''/kappa + A]`.
pub fn banklaine_residual(a: &ExpPoly, hprime: &ExpPoly, kappa: &Poly) -> ExpPoly {
    let k = ExpPoly::from_poly(kappa.clone());
    let k1 = ExpPoly::from_poly(kappa.derivative());
    let k2 = ExpPoly::from_poly(kappa.derivative().derivative());
    let kk = &k * &k;
    let two = ExpPoly::constant(GaussianRational::from(2));
    let terms = [
        &kk * &(hprime * hprime),
        &kk * &hprime.derivative(),
        &(&two * &(&k * &k1)) * hprime,
        &k * &k2,
        &kk * a,
    ];
    terms.iter().fold(ExpPoly::zero(), |acc, t| &acc + t)
}

/// Whether `g = kappa e^h` with the given `h'` solves `g'' + A g = 0` exactly.
pub fn verify_banklaine(a: &ExpPoly, hprime: &ExpPoly, kappa: &Poly) -> bool {
    banklaine_residual(a, hprime, kappa).is_zero()
}

#[derive(Clone, Debug, Serialize)]
pub struct ThreeQuarterWitness {
    pub c: GaussianRational,
    /// `h' = -4c^2 e^{z/2} + c e^{z/4} - 1/8`.
    pub hprime: ExpPoly,
    /// `A = -(h'' + (h')^2)`, computed.
    pub a: ExpPoly,
    pub b1: GaussianRational,
    pub b2: GaussianRational,
    pub b3: GaussianRational,
    /// The alternative closed form `-(16c^2 e^z - 8c^3 e^{3z/4} + 1/64)`.
    pub a_printed: ExpPoly,
    pub printed_matches: bool,
    pub residual_zero: bool,
}

/// The one-parameter family with `p1 = z`, `p2 = 3z/4`, `kappa = 1`.
pub fn three_quarter_family(c: &GaussianRational) -> Result<ThreeQuarterWitness> {
    if c.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let z = Poly::z();
    let e = |coef: GaussianRational, s: (i64, i64)| -> Result<ExpPoly> {
        ExpPoly::term(coef, z.scale_rat(&rat(s.0, s.1)))
    };
    let c2 = c * c;
    let c3 = &c2 * c;
    let hprime = &(&e(-(&c2 * &GaussianRational::from(4)), (1, 2))? + &e(c.clone(), (1, 4))?)
        + &ExpPoly::constant(GaussianRational::ratio(-1, 8));
    let a = -(&hprime.derivative() + &(&hprime * &hprime));
    let whole = z.clone();
    let three_q = z.scale_rat(&rat(3, 4));
    let b = |q: &Poly| -> GaussianRational { (-a.coeff_of(q)).as_constant().expect("constant coefficient") };
    let (b1, b2, b3) = (b(&whole), b(&three_q), b(&Poly::zero()));
    let exps: Vec<&Poly> = a.exponents().collect();
    if exps.len() != 3 || b1.is_zero() || b2.is_zero() {
        return Err(Error::VerificationFailed(format!("unexpected A = {a}")));
    }
    let a_printed = -(&(&e(&c2 * &GaussianRational::from(16), (1, 1))? + &e(-(&c3 * &GaussianRational::from(8)), (3, 4))?)
        + &ExpPoly::constant(GaussianRational::ratio(1, 64)));
    let residual_zero = verify_banklaine(&a, &hprime, &Poly::one());
    Ok(ThreeQuarterWitness {
        c: c.clone(),
        printed_matches: a_printed == a,
        hprime,
        a,
        b1,
        b2,
        b3,
        a_printed,
        residual_zero,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AnsatzOutcome {
    pub feasible: bool,
    pub gamma1: Option<Poly>,
    pub gamma: Option<Poly>,
    pub degree_bound: usize,
}

/// Try `h' = gamma1 e^{p1/2} + gamma` with `gamma1 = +-sqrt(b1)` and unknown
/// `gamma` of degree at most `2 max(deg inputs)` against the cleared
/// identities for the exponents `p1/2` and `p2`. The system is linear in the
/// coefficients of `gamma`; `b3` is left free.
pub fn half_ansatz_feasible(p1: &Poly, p2: &Poly, kappa: &Poly, b1: &Poly, b2: &Poly) -> Result<AnsatzOutcome> {
    check_kappa(kappa)?;
    let degs = [p1, p2, kappa, b1, b2].iter().filter_map(|p| p.degree()).max().unwrap_or(0);
    let bound = 2 * degs.max(1);
    let Ok(root) = b1.nth_root(2) else {
        return Ok(AnsatzOutcome { feasible: false, gamma1: None, gamma: None, degree_bound: bound });
    };
    let p_half = p1.scale_rat(&rat(1, 2));
    let matches_half = *p2 == p_half;
    let two = GaussianRational::from(2);
    let half = GaussianRational::ratio(1, 2);
    let k1 = kappa.derivative();
    for g1 in [root.clone(), -&root] {
        // 2 g1 kappa * gamma = target
        let fixed = &(&(&g1.derivative() + &(&g1 * &p1.derivative()).scale(&half)) * kappa) + &(&k1 * &g1).scale(&two);
        let rhs_half = if matches_half { &(b2 * kappa) - &fixed } else { -&fixed };
        let lin = (&g1 * kappa).scale(&two);
        let rows = lin.degree().unwrap_or(0) + bound + 1;
        let rows = rows.max(rhs_half.degree().map_or(0, |d| d + 1));
        let mut a: Vec<Vec<GaussianRational>> = vec![vec![GaussianRational::zero(); bound + 1]; rows];
        let mut rhs: Vec<GaussianRational> = (0..rows).map(|i| rhs_half.coeff(i)).collect();
        for col in 0..=bound {
            for (i, c) in lin.coeffs().iter().enumerate() {
                a[i + col][col] = c.clone();
            }
        }
        if !matches_half {
            // e^{p2} must then be matched by nothing: 0 = b2
            for c in b2.coeffs() {
                a.push(vec![GaussianRational::zero(); bound + 1]);
                rhs.push(c.clone());
            }
        }
        if let Some(x) = solve_linear(&a, &rhs) {
            return Ok(AnsatzOutcome {
                feasible: true,
                gamma1: Some(g1),
                gamma: Some(Poly::new(x)),
                degree_bound: bound,
            });
        }
    }
    Ok(AnsatzOutcome { feasible: false, gamma1: None, gamma: None, degree_bound: bound })
}

/// `g''/g` for `g = kappa e^h`, as a rational-coefficient exponential polynomial.
pub fn g_second_over_g(hprime: &ExpPoly, kappa: &Poly) -> Result<ExpPoly> {
    let k = RatFunc::from_poly(kappa.clone());
    let l1 = k.log_derivative()?;
    let l2 = RatFunc::from_poly(kappa.derivative().derivative()).checked_div(&k)?;
    let two_l1 = l1.scale(&GaussianRational::from(2));
    Ok(&(&(hprime * hprime) + &hprime.derivative()) + &(&hprime.scale(&two_l1) + &ExpPoly::from_ratfunc(l2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::from_ints(cs)
    }

    #[test]
    fn half_examples() {
        let w = construct_half(&p(&[0, 2]), &p(&[1]), &Poly::zero(), &p(&[1])).unwrap();
        assert_eq!(w.gamma1, p(&[1]));
        assert_eq!(w.b2, p(&[1]));
        assert!(w.b3.is_zero());
        assert_eq!(w.hprime, ExpPoly::exp(Poly::z()).unwrap());
        assert!(verify_banklaine(&w.a, &w.hprime, &w.kappa));

        let w = construct_half(&p(&[0, 2]), &p(&[1]), &p(&[1]), &p(&[4])).unwrap();
        assert_eq!(w.gamma1, p(&[2]));
        assert_eq!(w.b2, p(&[6]));
        assert_eq!(w.b3, p(&[1]));
        assert!(verify_banklaine(&w.a, &w.hprime, &w.kappa));

        let err = construct_half(&p(&[0, 2]), &p(&[0, 1]), &Poly::zero(), &p(&[1])).unwrap_err();
        assert_eq!(err, Error::NonPolynomialRelation { which: "b2" });
        assert_eq!(
            construct_half(&p(&[0, 2]), &p(&[0, 0, 1]), &Poly::zero(), &p(&[1])).unwrap_err(),
            Error::KappaNotSquarefree
        );
        assert!(matches!(construct_half(&p(&[0, 2]), &p(&[1]), &Poly::zero(), &p(&[2])), Err(Error::NotAPower { .. })));
    }

    #[test]
    fn half_with_roots() {
        // kappa = z^2 - 1, gamma1 = kappa, gamma from the congruence
        let kappa = p(&[-1, 0, 1]);
        let gamma = admissible_gamma(&kappa, &p(&[3])).unwrap();
        let w = construct_half(&p(&[0, 0, 1]), &kappa, &gamma, &(&kappa * &kappa)).unwrap();
        assert!(verify_banklaine(&w.a, &w.hprime, &w.kappa));
        let g = g_second_over_g(&w.hprime, &w.kappa).unwrap();
        assert!((&g + &w.a).is_zero());
    }

    #[test]
    fn three_quarter_examples() {
        let w = three_quarter_family(&GaussianRational::from(1)).unwrap();
        assert!(w.residual_zero && w.printed_matches);
        assert_eq!(w.b1, GaussianRational::from(16));
        assert_eq!(w.b2, GaussianRational::from(-8));
        assert_eq!(w.b3, GaussianRational::ratio(1, 64));
        let w = three_quarter_family(&GaussianRational::from(2)).unwrap();
        assert!(w.residual_zero && !w.printed_matches);
        assert_eq!(w.b1, GaussianRational::from(256));
        assert_eq!(w.b2, GaussianRational::from(-64));
        assert_eq!(three_quarter_family(&GaussianRational::from(0)).unwrap_err(), Error::ZeroParameter);
    }

    #[test]
    fn perturbed_a_fails() {
        let w = three_quarter_family(&GaussianRational::from(1)).unwrap();
        let bad = &w.a + &ExpPoly::exp(Poly::z().scale_rat(&rat(1, 4))).unwrap();
        assert!(!verify_banklaine(&bad, &w.hprime, &Poly::one()));
    }

    #[test]
    fn ansatz_controls() {
        let p1 = p(&[0, 2]);
        let half = Poly::z();
        let out = half_ansatz_feasible(&p1, &half, &p(&[1]), &p(&[1]), &p(&[5, 3])).unwrap();
        assert!(out.feasible);
        let w = construct_half(&p1, &p(&[1]), out.gamma.as_ref().unwrap(), &p(&[1])).unwrap();
        assert_eq!(w.b2, p(&[5, 3]));
        let two_thirds = p1.scale_rat(&rat(2, 3));
        let out = half_ansatz_feasible(&p1, &two_thirds, &p(&[1]), &p(&[1]), &p(&[5, 3])).unwrap();
        assert!(!out.feasible);
    }
}
