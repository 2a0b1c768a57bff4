//! Numerical evaluation of `H(z) = e^{p(z)} int_0^z beta(t) e^{-p(t)} dt`
//! and checks of its sector-wise asymptotics.
//!
//! Every integral here is taken over the rescaled integrand
//! `beta(t) e^{p(z) - p(t)}`, so `e^{p(z)}` is never formed on its own.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::Poly;
use crate::error::{Error, Result};
use crate::expoly::{ExpPoly, EXP_BUDGET};
use crate::indicator::{sector_map, SectorMap};
use crate::quad::integrate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PathKind {
    /// Straight segment `0 -> z`.
    Segment,
    /// `0 -> |z|` along the positive real axis, then the arc of radius `|z|` to `z`.
    TwoLegViaCircle,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HEvalConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub path: PathKind,
}

impl Default for HEvalConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-300, rel_tol: 1e-10, max_subdivisions: 2000, path: PathKind::Segment }
    }
}

impl HEvalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        if self.max_subdivisions < 8 {
            return Err(Error::InvalidInput("max_subdivisions must be at least 8".into()));
        }
        Ok(())
    }

    pub fn with_path(mut self, path: PathKind) -> Self {
        self.path = path;
        self
    }
}

/// `beta(t) e^{shift - p(t)}`.
fn integrand(p: &Poly, beta: &ExpPoly, shift: Complex64, t: Complex64) -> Result<Complex64> {
    let e = shift - p.eval(t);
    if e.re > EXP_BUDGET + 40.0 {
        return Err(Error::Overflow { context: format!("Re(p(z) - p(t)) = {} at t = {t}", e.re) });
    }
    beta.eval_shifted(t, e)
}

fn segment_integral(
    p: &Poly,
    beta: &ExpPoly,
    shift: Complex64,
    from: Complex64,
    to: Complex64,
    cfg: &HEvalConfig,
) -> Result<Complex64> {
    let d = to - from;
    let out = integrate(
        |s| Ok(integrand(p, beta, shift, from + d * s)? * d),
        0.0,
        1.0,
        cfg.abs_tol,
        cfg.rel_tol,
        cfg.max_subdivisions,
    )?;
    Ok(out.value)
}

fn arc_integral(
    p: &Poly,
    beta: &ExpPoly,
    shift: Complex64,
    radius: f64,
    phi_end: f64,
    cfg: &HEvalConfig,
) -> Result<Complex64> {
    let out = integrate(
        |phi| {
            let t = Complex64::from_polar(radius, phi);
            Ok(integrand(p, beta, shift, t)? * t * Complex64::i())
        },
        0.0,
        phi_end,
        cfg.abs_tol,
        cfg.rel_tol,
        cfg.max_subdivisions,
    )?;
    Ok(out.value)
}

/// `H(z)` for `beta` pole-free along the configured path.
#[allow(non_snake_case)]
pub fn eval_H(p: &Poly, beta: &ExpPoly, z: Complex64, cfg: &HEvalConfig) -> Result<Complex64> {
    cfg.validate()?;
    if z == Complex64::new(0.0, 0.0) {
        return Ok(z);
    }
    let pz = p.eval(z);
    let value = match cfg.path {
        PathKind::Segment => segment_integral(p, beta, pz, Complex64::new(0.0, 0.0), z, cfg)?,
        PathKind::TwoLegViaCircle => {
            let r = z.norm();
            let leg = segment_integral(p, beta, pz, Complex64::new(0.0, 0.0), Complex64::new(r, 0.0), cfg)?;
            leg + arc_integral(p, beta, pz, r, z.arg(), cfg)?
        }
    };
    if !value.is_finite() {
        return Err(Error::Overflow { context: format!("H({z})") });
    }
    Ok(value)
}

/// `H(z) - a e^{p(z)}` by direct subtraction.
#[allow(non_snake_case)]
pub fn H_deviation(p: &Poly, beta: &ExpPoly, a: Complex64, z: Complex64, cfg: &HEvalConfig) -> Result<Complex64> {
    let h = eval_H(p, beta, z, cfg)?;
    let pz = p.eval(z);
    if pz.re > EXP_BUDGET {
        return Err(Error::Overflow { context: format!("e^p at z = {z}") });
    }
    Ok(h - a * pz.exp())
}

const MAX_RAY_CHUNKS: usize = 200;

/// `int_{r0}^{inf} beta(t) e^{shift - p(t)} e^{i theta} drho` with
/// `t = rho e^{i theta}`, summed over chunks of doubling length until a chunk
/// and the integrand at its end are both negligible and still decreasing.
fn ray_integral(
    p: &Poly,
    beta: &ExpPoly,
    shift: Complex64,
    theta: f64,
    r0: f64,
    first_len: f64,
    cfg: &HEvalConfig,
) -> Result<Complex64> {
    let dir = Complex64::from_polar(1.0, theta);
    let g = |rho: f64| -> Result<Complex64> { Ok(integrand(p, beta, shift, dir * rho)? * dir) };
    let mut sum = Complex64::new(0.0, 0.0);
    let mut lo = r0;
    let mut len = first_len;
    let mut g_lo = g(lo)?.norm();
    for _ in 0..MAX_RAY_CHUNKS {
        let hi = lo + len;
        let chunk = integrate(
            &g,
            lo,
            hi,
            cfg.abs_tol,
            cfg.rel_tol,
            cfg.max_subdivisions,
        )?;
        sum += chunk.value;
        let g_hi = g(hi)?.norm();
        let tol = cfg.abs_tol.max(cfg.rel_tol * sum.norm());
        if chunk.value.norm() <= tol && g_hi * hi <= tol && g_hi <= g_lo {
            return Ok(sum);
        }
        lo = hi;
        g_lo = g_hi;
        len *= 2.0;
    }
    Err(Error::ToleranceNotMet { subdivisions: MAX_RAY_CHUNKS, estimate: g_lo * lo })
}

fn degree(p: &Poly) -> Result<usize> {
    match p.degree() {
        Some(k) if k >= 1 => Ok(k),
        _ => Err(Error::ConstantPolynomial),
    }
}

fn growth_sector(map: &SectorMap, j: usize) -> Result<()> {
    if j >= map.len() {
        return Err(Error::InvalidInput(format!("sector index {j} out of range 0..{}", map.len())));
    }
    if map.sign[j] <= 0 {
        return Err(Error::InvalidInput(format!("delta is negative on sector {j}")));
    }
    Ok(())
}

/// `a_j = int_0^{inf e^{i theta*}} beta e^{-p}` along the central ray of
/// growth sector `j`.
pub fn asymptotic_constant(p: &Poly, beta: &ExpPoly, j: usize, cfg: &HEvalConfig) -> Result<Complex64> {
    cfg.validate()?;
    let map = sector_map(p)?;
    growth_sector(&map, j)?;
    ray_integral(p, beta, Complex64::new(0.0, 0.0), map.central_angle(j), 0.0, 1.0, cfg)
}

/// Order of an exponential polynomial: the largest exponent degree.
pub fn order(beta: &ExpPoly) -> usize {
    beta.exponents().filter_map(Poly::degree).max().unwrap_or(0)
}

/// Direct difference versus tail integral at one point of a growth sector.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CrossCheck {
    pub radius: f64,
    pub theta: f64,
    pub direct: [f64; 2],
    pub tail: [f64; 2],
    pub abs_diff: f64,
    /// `|a_j e^p|`; the direct difference loses about `rel_tol` of this.
    pub cancellation_scale: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticReport {
    pub sector: usize,
    pub sign: i8,
    pub theta_lo: f64,
    pub theta_hi: f64,
    pub a_j: Option<[f64; 2]>,
    pub radii: Vec<f64>,
    /// Worst `log|H - a_j e^p| / r^k` over the rays of the shrunk sector.
    pub s_values: Vec<f64>,
    /// `rho = max(order(beta), k - 1)`.
    pub rho: usize,
    /// `log log|H - a_j e^p| / log r` when `rho < k`; `None` where the inner
    /// logarithm is not positive.
    pub loglog: Option<Vec<Option<f64>>>,
    pub cross_check: Option<CrossCheck>,
}

impl AsymptoticReport {
    pub fn max_abs_s(&self) -> f64 {
        self.s_values.iter().fold(0.0_f64, |m, s| m.max(s.abs()))
    }

    pub fn trend_decreasing(&self) -> bool {
        self.s_values.windows(2).all(|w| w[1].abs() <= w[0].abs() + 1e-12)
    }
}

const RAYS_PER_SECTOR: usize = 5;

// log of exact zeros is floored so s stays finite
fn floor_log(x: f64) -> f64 {
    x.max(f64::MIN_POSITIVE).ln()
}

/// `H - a_j e^{p}` at `z` in a growth sector, as `-int_z^{inf} beta e^{p(z) - p(t)} dt`
/// along the ray through `z`.
fn tail_deviation(p: &Poly, beta: &ExpPoly, z: Complex64, k: usize, cfg: &HEvalConfig) -> Result<Complex64> {
    let r = z.norm();
    let first = 1.0 / (1.0 + k as f64 * r.powi(k as i32 - 1));
    Ok(-ray_integral(p, beta, p.eval(z), z.arg(), r, first, cfg)?)
}

/// `H - a_j e^{p}` at `z`, with `a_j` the constant of the sector containing
/// `z` (zero in decay sectors).
pub fn sector_deviation(p: &Poly, beta: &ExpPoly, z: Complex64, cfg: &HEvalConfig) -> Result<Complex64> {
    cfg.validate()?;
    let k = degree(p)?;
    let map = sector_map(p)?;
    if map.sign[map.sector_of(z.arg())] > 0 {
        tail_deviation(p, beta, z, k, cfg)
    } else {
        eval_H(p, beta, z, cfg)
    }
}

/// For each sector, tabulate `s(r) = log|H - a_j e^p| / r^k` on the rays of
/// the sector shrunk by `epsilon`. Decay sectors use `a_j = 0`.
pub fn verify_sector_asymptotics(
    p: &Poly,
    beta: &ExpPoly,
    cfg: &HEvalConfig,
    radii: &[f64],
    epsilon: f64,
) -> Result<Vec<AsymptoticReport>> {
    cfg.validate()?;
    let k = degree(p)?;
    if radii.is_empty() || radii.windows(2).any(|w| w[1] <= w[0]) || radii[0] <= 0.0 {
        return Err(Error::InvalidInput("radii must be positive and strictly increasing".into()));
    }
    let map = sector_map(p)?;
    let rho = order(beta).max(k - 1);
    (0..map.len())
        .map(|j| {
            let shrunk = map.shrunk(j, epsilon)?;
            let rays = shrunk.rays(RAYS_PER_SECTOR);
            let growth = map.sign[j] > 0;
            let a = if growth { Some(asymptotic_constant(p, beta, j, cfg)?) } else { None };
            let logs: Vec<f64> = radii
                .par_iter()
                .map(|&r| {
                    let worst = rays
                        .iter()
                        .map(|&th| {
                            let z = Complex64::from_polar(r, th);
                            let dev = if growth {
                                tail_deviation(p, beta, z, k, cfg)?
                            } else {
                                eval_H(p, beta, z, cfg)?
                            };
                            Ok(floor_log(dev.norm()))
                        })
                        .collect::<Result<Vec<f64>>>()?;
                    Ok(worst.into_iter().fold(f64::NEG_INFINITY, f64::max))
                })
                .collect::<Result<Vec<f64>>>()?;
            let s_values = logs.iter().zip(radii).map(|(l, r)| l / r.powi(k as i32)).collect();
            let loglog = (rho < k).then(|| {
                logs.iter()
                    .zip(radii)
                    .map(|(&l, &r)| (l > 0.0 && r > 1.0).then(|| l.ln() / r.ln()))
                    .collect()
            });
            let cross_check = match a {
                Some(a) => cross_check(p, beta, a, radii[0], shrunk.central(), k, cfg)?,
                None => None,
            };
            Ok(AsymptoticReport {
                sector: j,
                sign: map.sign[j],
                theta_lo: shrunk.theta_lo,
                theta_hi: shrunk.theta_hi,
                a_j: a.map(|a| [a.re, a.im]),
                radii: radii.to_vec(),
                s_values,
                rho,
                loglog,
                cross_check,
            })
        })
        .collect()
}

fn cross_check(
    p: &Poly,
    beta: &ExpPoly,
    a: Complex64,
    r: f64,
    theta: f64,
    k: usize,
    cfg: &HEvalConfig,
) -> Result<Option<CrossCheck>> {
    let z = Complex64::from_polar(r, theta);
    if p.eval(z).re > 600.0 {
        return Ok(None);
    }
    let direct = H_deviation(p, beta, a, z, cfg)?;
    let tail = tail_deviation(p, beta, z, k, cfg)?;
    Ok(Some(CrossCheck {
        radius: r,
        theta,
        direct: [direct.re, direct.im],
        tail: [tail.re, tail.im],
        abs_diff: (direct - tail).norm(),
        cancellation_scale: (a * p.eval(z).exp()).norm(),
    }))
}

/// `f = c e^{p} + H` solving `f' - kappa f = beta` with `p = int kappa`, `p(0) = 0`.
#[derive(Clone, Debug)]
pub struct FirstOrderSolution {
    pub kappa: Poly,
    pub p: Poly,
    pub beta: ExpPoly,
    pub c: Complex64,
    pub cfg: HEvalConfig,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ResidualSample {
    pub z: [f64; 2],
    pub f: [f64; 2],
    pub residual: f64,
    pub bound: f64,
}

impl ResidualSample {
    pub fn ok(&self) -> bool {
        self.residual <= self.bound
    }
}

pub fn solve_first_order(kappa: &Poly, beta: &ExpPoly, c: Complex64, cfg: &HEvalConfig) -> Result<FirstOrderSolution> {
    cfg.validate()?;
    if kappa.is_zero() {
        return Err(Error::InvalidInput("kappa must be a nonzero polynomial".into()));
    }
    Ok(FirstOrderSolution {
        kappa: kappa.clone(),
        p: kappa.antiderivative(),
        beta: beta.clone(),
        c,
        cfg: *cfg,
    })
}

impl FirstOrderSolution {
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let h = eval_H(&self.p, &self.beta, z, &self.cfg)?;
        if self.c == Complex64::new(0.0, 0.0) {
            return Ok(h);
        }
        let pz = self.p.eval(z);
        if pz.re > EXP_BUDGET {
            return Err(Error::Overflow { context: format!("e^p at z = {z}") });
        }
        Ok(self.c * pz.exp() + h)
    }

    /// `|f' - kappa f - beta|` with `f'` from central differences at step
    /// `1e-5 (1 + |z|)`, against the bound `1e-6 (1 + |f| + |beta|)`.
    pub fn residual(&self, z: Complex64) -> Result<ResidualSample> {
        let h = 1e-5 * (1.0 + z.norm());
        let fp = (self.eval(z + h)? - self.eval(z - h)?) / (2.0 * h);
        let f = self.eval(z)?;
        let b = self.beta.eval(z)?;
        let res = (fp - self.kappa.eval(z) * f - b).norm();
        Ok(ResidualSample {
            z: [z.re, z.im],
            f: [f.re, f.im],
            residual: res,
            bound: 1e-6 * (1.0 + f.norm() + b.norm()),
        })
    }
}

/// Points on a small grid in the disc of radius `r`, used for spot checks.
pub fn sample_points(r: f64, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|i| {
            let frac = (i as f64 + 0.5) / count as f64;
            Complex64::from_polar(r * frac.sqrt(), 2.0 * PI * 0.618_033_988_75 * i as f64)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn one() -> ExpPoly {
        ExpPoly::one()
    }

    fn z_beta() -> ExpPoly {
        ExpPoly::from_poly(Poly::z())
    }

    #[test]
    fn eval_examples() {
        let cfg = HEvalConfig::default();
        let h = eval_H(&Poly::z(), &one(), c(1.0, 0.0), &cfg).unwrap();
        assert!((h - c(std::f64::consts::E - 1.0, 0.0)).norm() < 1e-12);
        let z2 = Poly::from_ints(&[0, 0, 1]);
        assert_eq!(eval_H(&z2, &z_beta(), c(0.0, 0.0), &cfg).unwrap(), c(0.0, 0.0));
        let h = eval_H(&z2, &z_beta(), c(2.0, 0.0), &cfg).unwrap();
        let want = (4.0_f64.exp() - 1.0) / 2.0;
        assert!((h.re - want).abs() < 1e-9 * want && h.im.abs() < 1e-9);
    }

    #[test]
    fn two_leg_agrees() {
        let cfg = HEvalConfig::default();
        let z2 = Poly::from_ints(&[0, 0, 1]);
        let z = c(1.5, -2.0);
        let a = eval_H(&z2, &z_beta(), z, &cfg).unwrap();
        let b = eval_H(&z2, &z_beta(), z, &cfg.with_path(PathKind::TwoLegViaCircle)).unwrap();
        assert!((a - b).norm() <= 1e-9 * a.norm());
    }

    #[test]
    fn far_growth_no_overflow() {
        // H = e^z - 1; at z = 600 the rescaled integrand peaks at 1
        let cfg = HEvalConfig::default();
        let h = eval_H(&Poly::z(), &one(), c(600.0, 0.0), &cfg).unwrap();
        assert!((h.re.ln() - 600.0).abs() < 1e-9);
    }

    #[test]
    fn asymptotic_constants() {
        let cfg = HEvalConfig::default();
        let map = sector_map(&Poly::z()).unwrap();
        let j = map.growth_sectors()[0];
        let a = asymptotic_constant(&Poly::z(), &one(), j, &cfg).unwrap();
        assert!((a - c(1.0, 0.0)).norm() < 1e-10);
        let z2 = Poly::from_ints(&[0, 0, 1]);
        let j = sector_map(&z2).unwrap().sector_of(0.0);
        let a = asymptotic_constant(&z2, &z_beta(), j, &cfg).unwrap();
        assert!((a - c(0.5, 0.0)).norm() < 1e-10);
        let a = asymptotic_constant(&Poly::z(), &ExpPoly::zero(), 1, &cfg).unwrap();
        assert_eq!(a, c(0.0, 0.0));
        let decay = map.decay_sectors()[0];
        assert!(asymptotic_constant(&Poly::z(), &one(), decay, &cfg).is_err());
    }

    #[test]
    fn sector_asymptotics_closed_forms() {
        let cfg = HEvalConfig::default();
        let radii = [2.0, 4.0, 8.0, 16.0, 32.0];
        // |H - a_j e^p| is exactly 1 and 1/2 respectively
        for (p, beta, dev) in [(Poly::z(), one(), 1.0_f64), (Poly::from_ints(&[0, 0, 1]), z_beta(), 0.5)] {
            let k = p.degree().unwrap() as i32;
            let reps = verify_sector_asymptotics(&p, &beta, &cfg, &radii, 0.1).unwrap();
            for rep in reps.iter().filter(|r| r.sign > 0) {
                for (s, r) in rep.s_values.iter().zip(&radii) {
                    assert!((s - dev.ln() / r.powi(k)).abs() <= 1e-9, "{rep:?}");
                }
                let cc = rep.cross_check.unwrap();
                assert!(cc.abs_diff <= 1e-8 * (1.0 + cc.cancellation_scale), "{cc:?}");
            }
        }
    }

    #[test]
    fn decay_sector_bounded() {
        let cfg = HEvalConfig::default();
        for r in [1.0, 5.0, 20.0, 80.0] {
            let d = H_deviation(&Poly::z(), &one(), c(7.0, 0.0), c(-r, 0.0), &cfg).unwrap();
            assert!(d.norm() <= 1.0 + 7.0 + 1e-12);
        }
    }

    #[test]
    fn first_order_examples() {
        let cfg = HEvalConfig::default();
        let kappa = Poly::from_ints(&[1]);
        let s = solve_first_order(&kappa, &one(), c(0.0, 0.0), &cfg).unwrap();
        assert!(s.residual(c(1.0, 0.0)).unwrap().ok());
        let s = solve_first_order(&kappa, &ExpPoly::zero(), c(1.0, 0.0), &cfg).unwrap();
        let v = s.eval(c(1.0, 1.0)).unwrap();
        assert!((v - c(1.0, 1.0).exp()).norm() < 1e-14);
        let s = solve_first_order(&Poly::from_ints(&[0, 2]), &z_beta(), c(0.0, 0.0), &cfg).unwrap();
        for z in sample_points(2.0, 10) {
            let r = s.residual(z).unwrap();
            assert!(r.ok(), "{r:?}");
        }
        assert!(solve_first_order(&Poly::zero(), &one(), c(0.0, 0.0), &cfg).is_err());
    }
}
