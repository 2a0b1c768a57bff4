//! Numerical Nevanlinna proximity and characteristic functions for
//! exponential polynomials, with order fitting.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{GaussianRational, Poly};
use crate::error::{Error, Result};
use crate::expoly::ExpPoly;
use crate::indicator::delta;

pub const DEFAULT_SAMPLES: usize = 2048;
const MAX_SAMPLES: usize = 1 << 20;

fn check_circle(f: &ExpPoly, r: f64) -> Result<()> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(r > 0.0) {
        return Err(Error::InvalidInput(format!("radius {r} must be positive")));
    }
    let mut seen: Vec<&Poly> = Vec::new();
    for t in f.terms() {
        let den = t.coeff.den();
        if den.is_constant() || seen.contains(&den) {
            continue;
        }
        seen.push(den);
        if den.roots_approx().iter().any(|w| (w.norm() - r).abs() <= 1e-9 * (1.0 + r)) {
            return Err(Error::PoleOnCircle { radius: r });
        }
    }
    Ok(())
}

/// `(1/2pi) int log+ |f(r e^{i theta})| dtheta` by the trapezoid rule with
/// `samples` nodes; `log|f|` is formed in log scale.
pub fn proximity(f: &ExpPoly, r: f64, samples: usize) -> Result<f64> {
    check_circle(f, r)?;
    if samples == 0 {
        return Err(Error::InvalidInput("samples must be positive".into()));
    }
    let mut acc = 0.0;
    for i in 0..samples {
        let z = Complex64::from_polar(r, TAU * i as f64 / samples as f64);
        let l = f.log_abs(z)?;
        if l > 0.0 {
            acc += l;
        }
    }
    Ok(acc / samples as f64)
}

/// Proximity with node doubling from `DEFAULT_SAMPLES` until the relative
/// change drops below `1e-3`.
pub fn proximity_converged(f: &ExpPoly, r: f64) -> Result<f64> {
    let mut n = DEFAULT_SAMPLES;
    let mut prev = proximity(f, r, n)?;
    while n < MAX_SAMPLES {
        n *= 2;
        let next = proximity(f, r, n)?;
        if (next - prev).abs() <= 1e-3 * next.abs().max(1e-300) {
            return Ok(next);
        }
        prev = next;
    }
    Ok(prev)
}

/// `T(r, f) = m(r, f)` for entire `f`.
pub fn characteristic(f: &ExpPoly, r: f64) -> Result<f64> {
    if !f.is_entire() {
        return Err(Error::NotEntire);
    }
    proximity_converged(f, r)
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthCurve {
    pub radii: Vec<f64>,
    pub t_values: Vec<f64>,
    pub fitted_order: f64,
    pub fitted_constant: f64,
}

/// `T(r, f)` on `radii` (computed in parallel) with its order fit.
pub fn growth_curve(f: &ExpPoly, radii: &[f64]) -> Result<GrowthCurve> {
    let t_values = radii.par_iter().map(|&r| characteristic(f, r)).collect::<Result<Vec<_>>>()?;
    let (fitted_order, fitted_constant) = order_fit(radii, &t_values)?;
    Ok(GrowthCurve { radii: radii.to_vec(), t_values, fitted_order, fitted_constant })
}

fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Slope of `log T` against `log r` over the top half of the radii, and the
/// mean of `T / r^order` there.
pub fn order_fit(radii: &[f64], t: &[f64]) -> Result<(f64, f64)> {
    if radii.len() != t.len() {
        return Err(Error::InvalidInput("radii and T values differ in length".into()));
    }
    if radii.len() < 5 {
        return Err(Error::InsufficientData(format!("{} radii, need at least 5", radii.len())));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) || radii[0] <= 0.0 {
        return Err(Error::InvalidInput("radii must be positive and increasing".into()));
    }
    if radii[radii.len() - 1] < 10.0 * radii[0] {
        return Err(Error::InsufficientData("radii must span at least a decade".into()));
    }
    let lo = radii.len() / 2;
    let (rs, ts) = (&radii[lo..], &t[lo..]);
    if ts.iter().any(|&v| v <= 0.0) {
        let c = ts.iter().sum::<f64>() / ts.len() as f64;
        return Ok((0.0, c));
    }
    let lx: Vec<f64> = rs.iter().map(|r| r.ln()).collect();
    let ly: Vec<f64> = ts.iter().map(|v| v.ln()).collect();
    let (order, _) = least_squares(&lx, &ly);
    let c = rs.iter().zip(ts).map(|(r, v)| v / r.powf(order)).sum::<f64>() / rs.len() as f64;
    Ok((order, c))
}

/// `(1/2pi) int max(delta(p1), delta(p2), 0) dtheta` on `nodes` nodes.
pub fn steinmetz_oracle(p1: &Poly, p2: &Poly, nodes: usize) -> Result<f64> {
    let mut acc = 0.0;
    for i in 0..nodes {
        let th = TAU * i as f64 / nodes as f64;
        acc += delta(p1, th)?.max(delta(p2, th)?).max(0.0);
    }
    Ok(acc / nodes as f64)
}

#[derive(Clone, Debug, Serialize)]
pub struct SteinmetzMeasurement {
    pub radii: Vec<f64>,
    pub t_values: Vec<f64>,
    /// Least-squares slope of `T` against `r^k` over the window.
    pub c_slope: f64,
    /// `T(r) / r^k` at the largest radius.
    pub c_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SteinmetzReport {
    pub k: usize,
    pub alpha: [f64; 2],
    pub r: f64,
    pub c_oracle: f64,
    pub base: SteinmetzMeasurement,
    /// `b1 -> (z + 2) b1`, `b2 -> 100 b2`.
    pub alt_b: SteinmetzMeasurement,
    /// Lower-order perturbation `p_i -> p_i + z^{k-1}`; absent for `k = 1`.
    pub alt_p: Option<SteinmetzMeasurement>,
    pub oracle_rel_error: f64,
    pub b_rel_change: f64,
    pub p_rel_change: Option<f64>,
    pub tolerance: f64,
    pub agrees_with_oracle: bool,
    pub b_independent: bool,
    pub p_independent: Option<bool>,
}

const WINDOW_POINTS: usize = 8;

/// Measure `C` in `T(r, f) ~ C r^k` as the slope of `T` against `r^k` over
/// `[r/2, r]`, which cancels the bounded `log|b|` contributions.
pub fn steinmetz_measure(f: &ExpPoly, k: usize, r: f64) -> Result<SteinmetzMeasurement> {
    let radii: Vec<f64> =
        (0..WINDOW_POINTS).map(|i| r * (0.5 + 0.5 * i as f64 / (WINDOW_POINTS - 1) as f64)).collect();
    let t_values = radii.par_iter().map(|&s| characteristic(f, s)).collect::<Result<Vec<_>>>()?;
    let x: Vec<f64> = radii.iter().map(|s| s.powi(k as i32)).collect();
    let (c_slope, _) = least_squares(&x, &t_values);
    let c_ratio = t_values[WINDOW_POINTS - 1] / r.powi(k as i32);
    Ok(SteinmetzMeasurement { radii, t_values, c_slope, c_ratio })
}

fn pair(b1: &Poly, b2: &Poly, p1: &Poly, p2: &Poly) -> Result<ExpPoly> {
    Ok(&ExpPoly::term(b1.clone(), p1.clone())? + &ExpPoly::term(b2.clone(), p2.clone())?)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Compare the measured `C` for `b1 e^{p1} + b2 e^{p2}` with the indicator
/// oracle and check it does not move when the `b`'s or the lower-order terms
/// of the `p`'s change.
pub fn steinmetz_check(b1: &Poly, b2: &Poly, p1: &Poly, p2: &Poly, r: f64) -> Result<SteinmetzReport> {
    let (k1, k2) = (p1.degree().unwrap_or(0), p2.degree().unwrap_or(0));
    if k1 != k2 {
        return Err(Error::DegreeMismatch { left: k1, right: k2 });
    }
    if k1 == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let (l1, l2) = (p1.leading().expect("nonzero"), p2.leading().expect("nonzero"));
    if l1 == l2 {
        return Err(Error::EqualLeadingCoefficients);
    }
    if b1.is_zero() || b2.is_zero() {
        return Err(Error::InvalidInput("b1 and b2 must be nonzero".into()));
    }
    let k = k1;
    let alpha = (l2 / l1).to_complex();
    let c_oracle = steinmetz_oracle(p1, p2, 4096)?;
    let base = steinmetz_measure(&pair(b1, b2, p1, p2)?, k, r)?;
    let b1_alt = b1 * &Poly::from_ints(&[2, 1]);
    let b2_alt = b2.scale(&GaussianRational::from(100));
    let alt_b = steinmetz_measure(&pair(&b1_alt, &b2_alt, p1, p2)?, k, r)?;
    let alt_p = if k >= 2 {
        let lower = Poly::monomial(GaussianRational::from(1), k - 1);
        Some(steinmetz_measure(&pair(b1, b2, &(p1 + &lower), &(p2 + &lower))?, k, r)?)
    } else {
        None
    };
    let tolerance = 0.03;
    let oracle_rel_error = rel(base.c_slope, c_oracle);
    let b_rel_change = rel(alt_b.c_slope, base.c_slope);
    let p_rel_change = alt_p.as_ref().map(|m| rel(m.c_slope, base.c_slope));
    Ok(SteinmetzReport {
        k,
        alpha: [alpha.re, alpha.im],
        r,
        c_oracle,
        agrees_with_oracle: oracle_rel_error <= tolerance,
        b_independent: b_rel_change <= tolerance,
        p_independent: p_rel_change.map(|c| c <= tolerance),
        base,
        alt_b,
        alt_p,
        oracle_rel_error,
        b_rel_change,
        p_rel_change,
        tolerance,
    })
}

/// `r / pi`, the proximity of `e^z` on `|z| = r`.
pub fn exp_proximity_closed_form(r: f64) -> f64 {
    r / PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RatFunc;

    #[test]
    fn proximity_examples() {
        let ez = ExpPoly::exp(Poly::z()).unwrap();
        let m = proximity(&ez, 10.0, 2048).unwrap();
        assert!((m - 10.0 / PI).abs() < 0.005 * 10.0 / PI);
        assert_eq!(proximity(&ExpPoly::one(), 3.0, 64).unwrap(), 0.0);
        let cosh = &ez + &ExpPoly::exp(-Poly::z()).unwrap();
        let m = proximity_converged(&cosh, 50.0).unwrap();
        assert!((m - 100.0 / PI).abs() < 0.02 * 100.0 / PI);
    }

    #[test]
    fn poles_and_entire() {
        let r = RatFunc::new(Poly::one(), Poly::from_ints(&[-2, 1])).unwrap();
        let f = ExpPoly::from_ratfunc(r);
        assert_eq!(proximity(&f, 2.0, 64), Err(Error::PoleOnCircle { radius: 2.0 }));
        assert!(proximity(&f, 3.0, 64).is_ok());
        assert_eq!(characteristic(&f, 3.0), Err(Error::NotEntire));
    }

    #[test]
    fn order_fits() {
        let radii: Vec<f64> = (0..10).map(|i| 4.0 * 1.5_f64.powi(i)).collect();
        let ez = ExpPoly::exp(Poly::z()).unwrap();
        let c = growth_curve(&ez, &radii).unwrap();
        assert!((c.fitted_order - 1.0).abs() < 0.02);
        assert!((c.fitted_constant - 1.0 / PI).abs() < 0.03 / PI);
        let radii: Vec<f64> = (0..10).map(|i| 1.0 + 1.5 * i as f64).collect();
        let ez2 = ExpPoly::exp(Poly::from_ints(&[0, 0, 1])).unwrap();
        let c = growth_curve(&ez2, &radii).unwrap();
        assert!((c.fitted_order - 2.0).abs() < 0.02);
        let poly = ExpPoly::from_poly(Poly::from_ints(&[1, 0, 0, 1]));
        let radii: Vec<f64> = (0..10).map(|i| 10.0 * 2.0_f64.powi(i)).collect();
        let c = growth_curve(&poly, &radii).unwrap();
        assert!(c.fitted_order.abs() < 0.2, "{c:?}");
        assert!(matches!(order_fit(&[1.0, 2.0, 3.0], &[1.0, 1.0, 1.0]), Err(Error::InsufficientData(_))));
        assert!(matches!(order_fit(&[1.0, 2.0, 3.0, 4.0, 5.0], &[1.0; 5]), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn oracle_values() {
        let c = steinmetz_oracle(&Poly::z(), &-Poly::z(), 4096).unwrap();
        assert!((c - 2.0 / PI).abs() < 1e-6);
        let c = steinmetz_oracle(&Poly::z(), &Poly::z().scale(&GaussianRational::ratio(1, 2)), 4096).unwrap();
        assert!((c - 1.0 / PI).abs() < 1e-6);
    }
}
