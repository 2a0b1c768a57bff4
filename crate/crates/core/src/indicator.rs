//! Growth directions of `e^{p(z)}`.
//!
//! For `p(z) = (a + ib) z^k + ...` the indicator is
//! `delta(p, theta) = a cos(k theta) - b sin(k theta) = Re((a+ib) e^{ik theta})`.
//! Its `2k` zeros split the plane into sectors where `|e^p|` alternately grows
//! and decays like `e^{delta r^k}`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{GaussianRational, Poly};
use crate::error::{Error, Result};

fn leading_data(p: &Poly) -> Result<(usize, Complex64)> {
    match p.degree() {
        Some(k) if k >= 1 => Ok((k, p.leading().expect("nonzero").to_complex())),
        _ => Err(Error::ConstantPolynomial),
    }
}

/// `delta(p, theta)`.
pub fn delta(p: &Poly, theta: f64) -> Result<f64> {
    let (k, lead) = leading_data(p)?;
    let kt = k as f64 * theta;
    Ok(lead.re * kt.cos() - lead.im * kt.sin())
}

/// Sector boundaries and signs of the indicator.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SectorMap {
    pub k: usize,
    /// `2k` increasing boundary angles in `[0, 2pi)`.
    pub theta: Vec<f64>,
    /// `sign[j]` is the sign of delta on `(theta[j], theta[j+1])`, cyclically.
    pub sign: Vec<i8>,
}

/// A sector `S_j` shrunk by `epsilon` on both sides.
#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct ShrunkSector {
    pub theta_lo: f64,
    pub theta_hi: f64,
    pub epsilon: f64,
}

impl ShrunkSector {
    pub fn width(&self) -> f64 {
        self.theta_hi - self.theta_lo
    }

    pub fn central(&self) -> f64 {
        0.5 * (self.theta_lo + self.theta_hi)
    }

    /// `count` evenly spaced angles covering the closed sector.
    pub fn rays(&self, count: usize) -> Vec<f64> {
        if count <= 1 {
            return vec![self.central()];
        }
        (0..count)
            .map(|i| self.theta_lo + self.width() * i as f64 / (count - 1) as f64)
            .collect()
    }
}

impl SectorMap {
    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// `(lo, hi)` of sector `j`; `hi` may exceed `2pi` for the wrapping sector.
    pub fn bounds(&self, j: usize) -> (f64, f64) {
        let lo = self.theta[j];
        let hi = if j + 1 < self.theta.len() { self.theta[j + 1] } else { self.theta[0] + TAU };
        (lo, hi)
    }

    pub fn central_angle(&self, j: usize) -> f64 {
        let (lo, hi) = self.bounds(j);
        0.5 * (lo + hi)
    }

    pub fn shrunk(&self, j: usize, epsilon: f64) -> Result<ShrunkSector> {
        let (lo, hi) = self.bounds(j);
        #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
        if !(epsilon > 0.0) || 2.0 * epsilon >= hi - lo {
            return Err(Error::InvalidInput(format!(
                "epsilon {epsilon} must be positive and below half the sector width {}",
                hi - lo
            )));
        }
        Ok(ShrunkSector { theta_lo: lo + epsilon, theta_hi: hi - epsilon, epsilon })
    }

    /// Indices of sectors where `e^p` grows.
    pub fn growth_sectors(&self) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.sign[j] > 0).collect()
    }

    pub fn decay_sectors(&self) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.sign[j] < 0).collect()
    }

    /// Sector index containing `theta` (boundaries belong to the sector they open).
    pub fn sector_of(&self, theta: f64) -> usize {
        let t = theta.rem_euclid(TAU);
        (0..self.len())
            .find(|&j| {
                let (lo, hi) = self.bounds(j);
                (lo <= t && t < hi) || (lo <= t + TAU && t + TAU < hi)
            })
            .unwrap_or(0)
    }
}

/// Zeros of delta in closed form: `k theta + arg(lead) = pi/2 + m pi`.
pub fn sector_map(p: &Poly) -> Result<SectorMap> {
    let (k, lead) = leading_data(p)?;
    let phi = lead.arg();
    let step = PI / k as f64;
    let theta1 = (PI / 2.0 - phi).rem_euclid(PI) / k as f64;
    let theta: Vec<f64> = (0..2 * k).map(|j| theta1 + j as f64 * step).collect();
    let mut map = SectorMap { k, theta, sign: Vec::with_capacity(2 * k) };
    for j in 0..2 * k {
        let d = delta(p, map.central_angle(j))?;
        map.sign.push(if d > 0.0 { 1 } else { -1 });
    }
    Ok(map)
}

/// Result of rescaling a pair of exponents to leading coefficients `1, alpha`.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormalizedPair {
    /// `z -> z / lambda` with `lambda^k` the first leading coefficient, done exactly.
    Exact { p1: Poly, p2: Poly, alpha: GaussianRational, lambda: GaussianRational, swapped: bool },
    /// `lambda` is not in Q(i); floating coefficients (lowest degree first).
    ExactnessLost {
        p1: Vec<[f64; 2]>,
        p2: Vec<[f64; 2]>,
        alpha: [f64; 2],
        lambda: [f64; 2],
        swapped: bool,
    },
}

impl NormalizedPair {
    pub fn alpha(&self) -> Complex64 {
        match self {
            NormalizedPair::Exact { alpha, .. } => alpha.to_complex(),
            NormalizedPair::ExactnessLost { alpha, .. } => Complex64::new(alpha[0], alpha[1]),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, NormalizedPair::Exact { .. })
    }
}

/// Rescale `z` so that the leading coefficients become `1` and `alpha` with
/// `|alpha| <= 1`; inputs are swapped first when needed.
pub fn normalize_leading(p1: &Poly, p2: &Poly) -> Result<NormalizedPair> {
    let (k1, k2) = (p1.degree().unwrap_or(0), p2.degree().unwrap_or(0));
    if k1 != k2 {
        return Err(Error::DegreeMismatch { left: k1, right: k2 });
    }
    if k1 == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let (a1, a2) = (p1.leading().expect("nonzero"), p2.leading().expect("nonzero"));
    if a1 == a2 {
        return Err(Error::EqualLeadingCoefficients);
    }
    let swapped = a2.norm_sqr() > a1.norm_sqr();
    let (p1, p2) = if swapped { (p2, p1) } else { (p1, p2) };
    let a1 = p1.leading().expect("nonzero");
    let alpha = p2.leading().expect("nonzero") / a1;
    match a1.nth_root(k1 as u32) {
        Ok(lambda) => {
            let inv = lambda.inv()?;
            let sub = Poly::monomial(inv, 1);
            Ok(NormalizedPair::Exact {
                p1: p1.compose(&sub),
                p2: p2.compose(&sub),
                alpha,
                lambda,
                swapped,
            })
        }
        Err(_) => {
            let a = a1.to_complex();
            let lambda = Complex64::from_polar(a.norm().powf(1.0 / k1 as f64), a.arg() / k1 as f64);
            let rescale = |p: &Poly| -> Vec<[f64; 2]> {
                p.to_complex_coeffs()
                    .iter()
                    .enumerate()
                    .map(|(j, c)| {
                        let v = c / lambda.powi(j as i32);
                        [v.re, v.im]
                    })
                    .collect()
            };
            let al = alpha.to_complex();
            Ok(NormalizedPair::ExactnessLost {
                p1: rescale(p1),
                p2: rescale(p2),
                alpha: [al.re, al.im],
                lambda: [lambda.re, lambda.im],
                swapped,
            })
        }
    }
}

/// Smallest radius `r0 <= cap`, found by doubling from 1, such that
/// `Re p(r e^{i theta}) >= (1 - eps) delta r^k` holds at `r0` and at the
/// probe radii `2 r0, 4 r0`. `None` when the cap is reached first.
pub fn growth_radius(p: &Poly, theta: f64, eps: f64, cap: f64) -> Result<Option<f64>> {
    let (k, _) = leading_data(p)?;
    let d = delta(p, theta)?;
    if d <= 0.0 {
        return Err(Error::InvalidInput(format!("delta(p, {theta}) = {d} is not positive")));
    }
    let dir = Complex64::from_polar(1.0, theta);
    let holds = |r: f64| p.eval(dir * r).re >= (1.0 - eps) * d * r.powi(k as i32);
    let mut r = 1.0;
    while r <= cap {
        if holds(r) && holds(2.0 * r) && holds(4.0 * r) {
            return Ok(Some(r));
        }
        r *= 2.0;
    }
    Ok(None)
}
