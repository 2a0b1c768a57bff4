//! Ray integration of `F' = R1 e^{q} F + R2` and the sector-wise growth
//! dichotomy of its solutions.
//!
//! Large solutions are carried as `u = log F` with
//! `u' = e^{i theta} (R1 e^q + R2 e^{-u})` in the ray parameter `r`. Near
//! zeros of `F`, where `u` has a logarithmic singularity, the integrator
//! switches to `F` itself; `Im u` is then reconstructed by unwrapping.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Poly, RatFunc};
use crate::error::{Error, Result};
use crate::indicator::sector_map;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RayConfig {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub max_steps: usize,
    /// Stop once `Re u` exceeds this.
    pub re_u_budget: f64,
    /// Stop once `Re q` exceeds this (`e^q` would overflow).
    pub re_q_budget: f64,
}

impl Default for RayConfig {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, h_init: 1e-3, max_steps: 200_000, re_u_budget: 1e100, re_q_budget: 700.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RayStatus {
    Decayed,
    PolynomiallyBounded,
    /// Grows like `exp(c r^rho)` with finite `rho`.
    FiniteOrder,
    SuperExponential,
    OverflowStopped,
}

#[derive(Clone, Debug, Serialize)]
pub struct RayTrace {
    pub theta: f64,
    pub f0: [f64; 2],
    pub r_values: Vec<f64>,
    /// `u = log F`, continued along the ray.
    pub log_f: Vec<[f64; 2]>,
    pub status: RayStatus,
    /// Slope of `log|F|` against `log r` over `[r_end/2, r_end]`.
    pub poly_exponent: f64,
    /// Slope of `log log|F|` against `log r` there, when `log|F| > 0`.
    pub order_estimate: Option<f64>,
    /// Slope of `log log|F|` against `r` there, when `log|F| > 1`.
    pub loglog_rate: Option<f64>,
    /// Largest `|y' - rhs(y)| / (1 + |y'|)` at step midpoints.
    pub residual_max: f64,
    pub steps: usize,
    pub rejected: usize,
}

impl RayTrace {
    pub fn log_abs(&self) -> impl Iterator<Item = f64> + '_ {
        self.log_f.iter().map(|u| u[0])
    }

    pub fn final_log_abs(&self) -> f64 {
        self.log_f.last().map_or(f64::NAN, |u| u[0])
    }

    /// Least-squares slope of `g(log|F|)` against `x(r)` over samples with
    /// `lo <= r <= hi`; `None` if fewer than two samples qualify or `g`
    /// is undefined for one of them.
    pub fn slope_between(&self, lo: f64, hi: f64, x: impl Fn(f64) -> f64, g: impl Fn(f64) -> Option<f64>) -> Option<f64> {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (r, u) in self.r_values.iter().zip(&self.log_f) {
            if *r >= lo && *r <= hi {
                xs.push(x(*r));
                ys.push(g(u[0])?);
            }
        }
        slope(&xs, &ys)
    }
}

fn slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

// Dormand-Prince 5(4)
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    /// State is `F`.
    Direct,
    /// State is `u = log F`.
    Log,
}

// switch to log form above |F| = e^40, back below e^30
const TO_LOG: f64 = 40.0;
const TO_DIRECT: f64 = 30.0;

enum Rhs {
    Value(Complex64),
    Budget,
}

struct Problem<'a> {
    r1: &'a RatFunc,
    r2: &'a RatFunc,
    q: &'a Poly,
    dir: Complex64,
    cfg: &'a RayConfig,
}

impl Problem<'_> {
    fn rhs(&self, mode: Mode, r: f64, y: Complex64) -> Result<Rhs> {
        let z = self.dir * r;
        let qz = self.q.eval(z);
        if qz.re > self.cfg.re_q_budget {
            return Ok(Rhs::Budget);
        }
        let a = self.r1.eval(z)? * qz.exp();
        let b = self.r2.eval(z)?;
        let v = match mode {
            Mode::Direct => self.dir * (a * y + b),
            Mode::Log => {
                if -y.re > 700.0 {
                    return Ok(Rhs::Budget);
                }
                self.dir * (a + b * (-y).exp())
            }
        };
        if !v.is_finite() {
            return Ok(Rhs::Budget);
        }
        Ok(Rhs::Value(v))
    }
}

fn nearest_branch(prev_im: f64, im: f64) -> f64 {
    im + TAU * ((prev_im - im) / TAU).round()
}

fn check_ray(r1: &RatFunc, r2: &RatFunc, theta: f64, r0: f64, r_max: f64) -> Result<()> {
    let dir = Complex64::from_polar(1.0, theta);
    for den in [r1.den(), r2.den()] {
        for w in den.roots_approx() {
            // distance from w to the segment r0..r_max along dir
            let s = (w * dir.conj()).re.clamp(r0, r_max);
            let d = (w - dir * s).norm();
            if d < 0.1 {
                return Err(Error::PoleOnRay { distance: d });
            }
        }
    }
    Ok(())
}

/// Integrate from `F(r0 e^{i theta}) = F0` out to `r_max`.
#[allow(clippy::too_many_arguments)]
pub fn integrate_ray(
    r1: &RatFunc,
    r2: &RatFunc,
    q: &Poly,
    theta: f64,
    f0: Complex64,
    r0: f64,
    r_max: f64,
    cfg: &RayConfig,
) -> Result<RayTrace> {
    if f0 == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidInput("F0 must be nonzero".into()));
    }
    if !(r0 >= 0.0 && r_max > r0) {
        return Err(Error::InvalidInput(format!("need 0 <= r0 < r_max, got {r0}, {r_max}")));
    }
    check_ray(r1, r2, theta, r0, r_max)?;
    let pr = Problem { r1, r2, q, dir: Complex64::from_polar(1.0, theta), cfg };

    let mut mode = if f0.ln().re > TO_LOG { Mode::Log } else { Mode::Direct };
    let mut y = if mode == Mode::Log { f0.ln() } else { f0 };
    let mut u_im = f0.arg();
    let mut r = r0;
    let mut h = cfg.h_init.min(r_max - r0);
    let mut r_values = vec![r0];
    let mut log_f = vec![[f0.norm().ln(), u_im]];
    let mut residual_max = 0.0_f64;
    let (mut steps, mut rejected) = (0usize, 0usize);
    let mut stopped = false;

    let Rhs::Value(mut k1) = pr.rhs(mode, r, y)? else {
        return Err(Error::Overflow { context: "right-hand side at r0".into() });
    };
    'outer: while r < r_max {
        if steps + rejected >= cfg.max_steps {
            return Err(Error::StepCollapse { r });
        }
        if h < 1e-13 * (1.0 + r) {
            return Err(Error::StepCollapse { r });
        }
        h = h.min(r_max - r);
        let mut k = [k1; 7];
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                ys += *kj * (h * A[s][j]);
            }
            match pr.rhs(mode, r + C[s] * h, ys)? {
                Rhs::Value(v) => k[s] = v,
                Rhs::Budget => {
                    if h > 1e-6 * (1.0 + r) {
                        h *= 0.25;
                        rejected += 1;
                        continue 'outer;
                    }
                    stopped = true;
                    break 'outer;
                }
            }
        }
        let mut y1 = y;
        for j in 0..6 {
            y1 += k[j] * (h * A[6][j]);
        }
        let mut err = Complex64::new(0.0, 0.0);
        for j in 0..7 {
            err += k[j] * (h * E[j]);
        }
        let scale = cfg.atol + cfg.rtol * y.norm().max(y1.norm());
        let en = err.norm() / scale;
        if !en.is_finite() || en > 1.0 {
            h *= (0.9 * en.powf(-0.2)).clamp(0.1, 0.9);
            if !en.is_finite() {
                h *= 0.1;
            }
            rejected += 1;
            continue;
        }
        // dense output at the midpoint, re-checked against the right-hand side
        let ydiff = y1 - y;
        let bspl = k[0] * h - ydiff;
        let c4 = ydiff - k[6] * h - bspl;
        let mut c5 = Complex64::new(0.0, 0.0);
        for j in 0..7 {
            c5 += k[j] * (h * D[j]);
        }
        let th = 0.5;
        let ym = y + (ydiff + (bspl + (c4 + c5 * (1.0 - th)) * th) * (1.0 - th)) * th;
        let dy = dense_derivative(ydiff, bspl, c4, c5, th) / h;
        if let Rhs::Value(f_mid) = pr.rhs(mode, r + th * h, ym)? {
            residual_max = residual_max.max((dy - f_mid).norm() / (1.0 + dy.norm()));
        }

        r += h;
        y = y1;
        k1 = k[6];
        steps += 1;
        let u = match mode {
            Mode::Direct => {
                let re = y.norm().ln();
                u_im = nearest_branch(u_im, y.arg());
                Complex64::new(re, u_im)
            }
            Mode::Log => {
                u_im = y.im;
                y
            }
        };
        r_values.push(r);
        log_f.push([u.re, u.im]);
        if u.re > cfg.re_u_budget {
            stopped = r < r_max;
            break;
        }
        let switch = match mode {
            Mode::Direct if u.re > TO_LOG => Some(Mode::Log),
            Mode::Log if u.re < TO_DIRECT => Some(Mode::Direct),
            _ => None,
        };
        if let Some(m) = switch {
            mode = m;
            y = if m == Mode::Log { u } else { u.exp() };
            match pr.rhs(mode, r, y)? {
                Rhs::Value(v) => k1 = v,
                Rhs::Budget => {
                    stopped = true;
                    break;
                }
            }
        }
        let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
    }
    Ok(classify(theta, f0, r_values, log_f, stopped, residual_max, steps, rejected))
}

fn dense_derivative(
    ydiff: Complex64,
    bspl: Complex64,
    c4: Complex64,
    c5: Complex64,
    th: f64,
) -> Complex64 {
    // y = y0 + t (ydiff + (1-t) (bspl + t (c4 + (1-t) c5)))
    let a = c4 + c5 * (1.0 - th);
    let da = -c5;
    let b = bspl + a * th;
    let db = a + da * th;
    let c = ydiff + b * (1.0 - th);
    let dc = -b + db * (1.0 - th);
    c + dc * th
}

#[allow(clippy::too_many_arguments)]
fn classify(
    theta: f64,
    f0: Complex64,
    r_values: Vec<f64>,
    log_f: Vec<[f64; 2]>,
    stopped: bool,
    residual_max: f64,
    steps: usize,
    rejected: usize,
) -> RayTrace {
    let mut t = RayTrace {
        theta,
        f0: [f0.re, f0.im],
        r_values,
        log_f,
        status: RayStatus::PolynomiallyBounded,
        poly_exponent: 0.0,
        order_estimate: None,
        loglog_rate: None,
        residual_max,
        steps,
        rejected,
    };
    let r_end = *t.r_values.last().expect("nonempty");
    let lo = 0.5 * r_end;
    t.poly_exponent = t.slope_between(lo, r_end, |r| r.max(1e-300).ln(), Some).unwrap_or(0.0);
    t.order_estimate = t.slope_between(lo, r_end, |r| r.max(1e-300).ln(), |l| (l > 0.0).then(|| l.ln()));
    t.loglog_rate = t.slope_between(lo, r_end, |r| r, |l| (l > 1.0).then(|| l.ln()));
    let first = t
        .r_values
        .iter()
        .zip(&t.log_f)
        .find(|(r, _)| **r >= lo)
        .map_or(0.0, |(_, u)| u[0]);
    let end = t.final_log_abs();
    t.status = if stopped {
        RayStatus::OverflowStopped
    } else if t.loglog_rate.is_some_and(|s| s >= 0.5) {
        RayStatus::SuperExponential
    } else if t.poly_exponent < -0.5 && end < first && end < 0.0 {
        RayStatus::Decayed
    } else if end > first && convex_in_log_r(&t, lo, r_end) {
        RayStatus::FiniteOrder
    } else {
        RayStatus::PolynomiallyBounded
    };
    t
}

/// Quadratic fit of `log|F|` in centered `log r`: exponential growth shows
/// a curvature comparable to the slope, power growth shows none.
fn convex_in_log_r(t: &RayTrace, lo: f64, hi: f64) -> bool {
    let pts: Vec<(f64, f64)> = t
        .r_values
        .iter()
        .zip(&t.log_f)
        .filter(|(r, _)| **r >= lo && **r <= hi && **r > 0.0)
        .map(|(r, u)| (r.ln(), u[0]))
        .collect();
    if pts.len() < 5 {
        return false;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let xs: Vec<f64> = pts.iter().map(|p| p.0 - mx).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    // normal equations for y = a + b x + c x^2
    let s = |k: i32| xs.iter().map(|x| x.powi(k)).sum::<f64>();
    let sy = |k: i32| xs.iter().zip(&ys).map(|(x, y)| x.powi(k) * y).sum::<f64>();
    let m = [[n, s(1), s(2)], [s(1), s(2), s(3)], [s(2), s(3), s(4)]];
    let v = [sy(0), sy(1), sy(2)];
    let Some([_, b, c]) = solve3(m, v) else {
        return false;
    };
    b > 0.0 && c > 0.2 * b
}

fn solve3(mut m: [[f64; 3]; 3], mut v: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let p = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[p][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, p);
        v.swap(col, p);
        for row in 0..3 {
            if row != col {
                let f = m[row][col] / m[col][col];
                #[allow(clippy::needless_range_loop)]
                for k in col..3 {
                    m[row][k] -= f * m[col][k];
                }
                v[row] -= f * v[col];
            }
        }
    }
    Some([v[0] / m[0][0], v[1] / m[1][1], v[2] / m[2][2]])
}

/// Twice the largest modulus of a zero or pole of `R1`, `R2`, plus one.
pub fn default_r0(r1: &RatFunc, r2: &RatFunc) -> f64 {
    let m = [r1.num(), r1.den(), r2.num(), r2.den()]
        .iter()
        .flat_map(|p| p.roots_approx())
        .map(|w| w.norm())
        .fold(0.0_f64, f64::max);
    2.0 * m + 1.0
}

/// Degree of the polynomial part of `R2` (0 when it is proper).
pub fn poly_part_degree(r2: &RatFunc) -> usize {
    r2.num().div_rem(r2.den()).ok().and_then(|(q, _)| q.degree()).unwrap_or(0)
}

pub const GENERIC_F0: [(f64, f64); 3] = [(1.0, 0.0), (1.0, 1.0), (-2.0, 0.0)];

#[derive(Clone, Debug, Serialize)]
pub struct SectorSummary {
    pub sector: usize,
    /// Sign of `delta(q, .)`; 0 for constant `q`.
    pub sign: i8,
    pub theta: f64,
    pub traces: Vec<RayTrace>,
    pub super_exponential: bool,
    /// Largest fitted exponent `s` in `|F| ~ r^s` across the traces.
    pub max_poly_exponent: f64,
    /// `max_poly_exponent <= n2 + 2` where that bound applies (`sign < 0`).
    pub within_poly_bound: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DichotomyReport {
    pub r0: f64,
    pub r_max: f64,
    pub n2: usize,
    pub sectors: Vec<SectorSummary>,
    /// Some ray grew super-exponentially for every generic start.
    pub flagged: bool,
}

/// Central rays of the sectors of `q` (or four diagonal rays if `q` is
/// constant), each integrated from the three generic starting values.
pub fn dichotomy_report(
    r1: &RatFunc,
    r2: &RatFunc,
    q: &Poly,
    epsilon: f64,
    r_max: f64,
    cfg: &RayConfig,
) -> Result<DichotomyReport> {
    let r0 = default_r0(r1, r2);
    if r_max <= r0 {
        return Err(Error::InvalidInput(format!("r_max {r_max} must exceed r0 = {r0}")));
    }
    let rays: Vec<(usize, i8, f64)> = if q.is_constant() {
        (0..4).map(|j| (j, 0, (2 * j + 1) as f64 * PI / 4.0)).collect()
    } else {
        let map = sector_map(q)?;
        (0..map.len())
            .map(|j| Ok((j, map.sign[j], map.shrunk(j, epsilon)?.central())))
            .collect::<Result<_>>()?
    };
    let n2 = poly_part_degree(r2);
    let sectors = rays
        .par_iter()
        .map(|&(j, sign, theta)| {
            let traces = GENERIC_F0
                .iter()
                .map(|&(a, b)| integrate_ray(r1, r2, q, theta, Complex64::new(a, b), r0, r_max, cfg))
                .collect::<Result<Vec<_>>>()?;
            let super_exponential = traces.iter().all(|t| t.status == RayStatus::SuperExponential);
            let max_poly_exponent = traces.iter().map(|t| t.poly_exponent).fold(f64::NEG_INFINITY, f64::max);
            let within_poly_bound = (sign < 0).then_some(max_poly_exponent <= n2 as f64 + 2.0);
            Ok(SectorSummary { sector: j, sign, theta, traces, super_exponential, max_poly_exponent, within_poly_bound })
        })
        .collect::<Result<Vec<_>>>()?;
    let flagged = sectors.iter().any(|s| s.super_exponential);
    Ok(DichotomyReport { r0, r_max, n2, sectors, flagged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GaussianRational;

    fn konst(v: i64) -> RatFunc {
        RatFunc::constant(GaussianRational::from(v))
    }

    #[test]
    fn closed_form_one_plus_exp() {
        // F = 1 + e^z solves F' = F - 1 with F(0) = 2
        let cfg = RayConfig::default();
        let t = integrate_ray(&konst(1), &konst(-1), &Poly::zero(), 0.0, Complex64::new(2.0, 0.0), 0.0, 20.0, &cfg)
            .unwrap();
        let want = (1.0 + 20.0_f64.exp()).ln();
        assert!((t.final_log_abs() - want).abs() < 1e-8 * want);
        assert_eq!(t.status, RayStatus::FiniteOrder);
        assert!(t.residual_max < 1e-6);
    }

    #[test]
    fn fixed_point() {
        let cfg = RayConfig::default();
        let t = integrate_ray(&konst(1), &konst(-1), &Poly::zero(), 0.3, Complex64::new(1.0, 0.0), 0.0, 10.0, &cfg)
            .unwrap();
        assert!(t.final_log_abs().abs() < 1e-12);
        assert_eq!(t.status, RayStatus::PolynomiallyBounded);
    }

    #[test]
    fn double_exponential_on_growth_ray() {
        let cfg = RayConfig::default();
        let t = integrate_ray(&konst(1), &konst(-1), &Poly::z(), 0.0, Complex64::new(1.0, 1.0), 1.0, 25.0, &cfg)
            .unwrap();
        assert_eq!(t.status, RayStatus::SuperExponential);
        let s = t.slope_between(5.0, 25.0, |r| r, |l| (l > 0.0).then(|| l.ln())).unwrap();
        assert!((s - 1.0).abs() < 0.1, "{s}");
        assert!(t.residual_max < 1e-6, "{}", t.residual_max);
    }

    #[test]
    fn zero_crossing_on_decay_ray() {
        // F0 = -2 on theta = pi passes through F = 0
        let cfg = RayConfig::default();
        let t = integrate_ray(&konst(1), &konst(-1), &Poly::z(), PI, Complex64::new(-2.0, 0.0), 1.0, 25.0, &cfg)
            .unwrap();
        assert!(t.poly_exponent <= 2.2);
        assert!(t.residual_max < 1e-6);
    }

    #[test]
    fn dichotomy_examples() {
        let cfg = RayConfig::default();
        let rep = dichotomy_report(&konst(1), &konst(-1), &Poly::z(), 0.1, 25.0, &cfg).unwrap();
        assert!(rep.flagged);
        let decay = rep.sectors.iter().find(|s| s.sign < 0).unwrap();
        assert_eq!(decay.within_poly_bound, Some(true));
        let rep = dichotomy_report(&konst(1), &konst(-1), &Poly::zero(), 0.1, 25.0, &cfg).unwrap();
        assert!(!rep.flagged);
    }

    #[test]
    fn pole_on_ray() {
        let r = RatFunc::new(Poly::one(), Poly::from_ints(&[-5, 1])).unwrap();
        let cfg = RayConfig::default();
        let e = integrate_ray(&r, &konst(1), &Poly::zero(), 0.0, Complex64::new(1.0, 0.0), 0.0, 10.0, &cfg);
        assert!(matches!(e, Err(Error::PoleOnRay { .. })));
    }
}
