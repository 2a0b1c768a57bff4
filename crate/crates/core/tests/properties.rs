mod common;

use common::*;
use expode::algebra::{GaussianRational, Poly, RatFunc};
use expode::expoly::ExpPoly;
use expode::hfun::{eval_H, HEvalConfig, PathKind};
use expode::indicator::{delta, sector_map};
use expode::nevanlinna::proximity;
use expode::parse::{parse_expoly, parse_poly, parse_ratfunc, parse_rational};
use expode::{banklaine, tc};
use num_complex::Complex64;
use num_traits::{One, Zero};
use proptest::prelude::*;
use std::f64::consts::{PI, TAU};

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #[test]
    fn ring_axioms(a in expoly(), b in expoly(), c in expoly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &ExpPoly::zero(), a.clone());
        prop_assert_eq!(&a * &ExpPoly::one(), a.clone());
    }

    #[test]
    fn difference_with_self_is_zero(a in expoly()) {
        prop_assert!((&a - &a).is_zero());
        prop_assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn product_rule(a in expoly(), b in expoly()) {
        let lhs = (&a * &b).derivative();
        let rhs = &(&a.derivative() * &b) + &(&a * &b.derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in entire_expoly(), b in entire_expoly(), x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let z = Complex64::new(x, y);
        let ab = (&a * &b).eval(z).unwrap();
        prop_assert!(close(ab, a.eval(z).unwrap() * b.eval(z).unwrap(), 1e-9));
        let s = (&a + &b).eval(z).unwrap();
        prop_assert!(close(s, a.eval(z).unwrap() + b.eval(z).unwrap(), 1e-9));
    }

    #[test]
    fn print_parse_roundtrip(a in expoly(), p in poly(4), r in ratfunc()) {
        prop_assert_eq!(parse_expoly(&a.to_string()).unwrap(), a);
        prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
        prop_assert_eq!(parse_ratfunc(&r.to_string()).unwrap(), r);
    }

    #[test]
    fn exact_root_of_a_power(g in nonzero_poly(3), n in 2u32..=4) {
        let root = g.pow(n).nth_root(n).unwrap();
        prop_assert_eq!(root.pow(n), g.pow(n));
        prop_assert!(root.ratio_to(&g).is_some());
    }

    #[test]
    fn ratfunc_log_derivative(n in nonzero_poly(2), d in nonzero_poly(1), e in 1i64..=3) {
        let r = RatFunc::new(n, d).unwrap();
        let lhs = r.pow(e).unwrap().log_derivative().unwrap();
        let rhs = r.log_derivative().unwrap().scale(&GaussianRational::from(e));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn indicator_invariants(lead in gauss().prop_filter("nonzero", |g| !g.is_zero()), k in 1usize..=4, th in 0.0f64..TAU) {
        let p = Poly::monomial(lead, k);
        let map = sector_map(&p).unwrap();
        prop_assert_eq!(map.len(), 2 * k);
        let d = delta(&p, th).unwrap();
        let d2 = delta(&p, th + TAU / k as f64).unwrap();
        prop_assert!((d - d2).abs() <= 1e-9 * (1.0 + d.abs()));
        let d3 = delta(&p, th + PI / k as f64).unwrap();
        prop_assert!((d + d3).abs() <= 1e-9 * (1.0 + d.abs()));
        for j in 0..map.len() {
            let c = delta(&p, map.central_angle(j)).unwrap();
            prop_assert_eq!(c.signum() as i8, map.sign[j]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn h_is_path_independent(r in 0.0f64..2.0, th in -PI..PI, k in 1usize..=2) {
        // the arc can pass through |e^{p(z) - p(t)}| ~ e^{2 r^k}, so r stays small
        let p = Poly::monomial(GaussianRational::one(), k);
        let beta = ExpPoly::from_poly(Poly::from_ints(&[1, 1]));
        let z = Complex64::from_polar(r, th);
        let cfg = HEvalConfig::default();
        let a = eval_H(&p, &beta, z, &cfg).unwrap();
        let b = eval_H(&p, &beta, z, &cfg.with_path(PathKind::TwoLegViaCircle)).unwrap();
        prop_assert!(close(a, b, 1e-8), "{a} vs {b}");
    }

    #[test]
    fn h_is_linear_in_beta(x in -3.0f64..3.0, y in -3.0f64..3.0, c in -3i64..=3) {
        let p = Poly::z();
        let b1 = ExpPoly::from_poly(Poly::from_ints(&[0, 1]));
        let b2 = ExpPoly::exp(Poly::from_ints(&[0, -1])).unwrap();
        let z = Complex64::new(x, y);
        let cfg = HEvalConfig::default();
        let sum = &b1 + &b2.scale(&RatFunc::constant(GaussianRational::from(c)));
        let lhs = eval_H(&p, &sum, z, &cfg).unwrap();
        let rhs = eval_H(&p, &b1, z, &cfg).unwrap() + c as f64 * eval_H(&p, &b2, z, &cfg).unwrap();
        prop_assert!(close(lhs, rhs, 1e-8));
    }

    #[test]
    fn proximity_is_subadditive(a in entire_expoly(), b in entire_expoly(), r in 0.5f64..6.0) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let m = |f: &ExpPoly| proximity(f, r, 4096).unwrap();
        let (ma, mb) = (m(&a), m(&b));
        prop_assert!(m(&(&a * &b)) <= ma + mb + 1e-6);
        prop_assert!(m(&(&a + &b)) <= ma + mb + 2f64.ln() + 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tc_witnesses_verify(n in 2u32..=4, num in 1i64..=11, den_extra in 1i64..=12, g in nonzero_poly(1), h in nonzero_poly(1)) {
        let alpha = rat(num, num + den_extra);
        let p1 = Poly::z();
        let b1 = g.pow(n);
        // b2 / b1 polynomial keeps f entire
        let b2 = &b1 * &h;
        let prob = tc::TCProblem::new(n, b1, b2, p1.clone(), p1.scale_rat(&alpha)).unwrap();
        let w = tc::construct(&prob).unwrap();
        let m = w.m;
        prop_assert_eq!(m, tc::smallest_m(n, &alpha).unwrap());
        let rep = tc::verify_tc(&w, &prob, None).unwrap();
        let bound = rat(n as i64 - 1, n as i64);
        for term in &rep.residual {
            prop_assert!(parse_rational(&term.factor).unwrap() <= bound);
        }
        for k0 in 0..=m {
            let s = &(&alpha * rat(k0 as i64, 1)) - rat(k0 as i64, 1) + rat(1, 1);
            prop_assert!(s > bound);
        }
    }

    #[test]
    fn smallest_m_is_monotone(n in 2u32..=5, a in 1i64..=30, b in 1i64..=30) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let x = rat(lo, hi + 1);
        let y = rat(hi, hi + 1);
        prop_assert!(tc::smallest_m(n, &x).unwrap() <= tc::smallest_m(n, &y).unwrap());
    }

    #[test]
    fn kappa_iota_identities(n in 2u32..=4, g in nonzero_poly(1), b2 in nonzero_poly(2), num in 1i64..=5) {
        let alpha = rat(num, num + 1);
        let p1 = Poly::from_ints(&[0, 1, 1]);
        let prob = tc::TCProblem::new(n, g.pow(n), b2, p1.clone(), p1.scale_rat(&alpha)).unwrap();
        let m = tc::smallest_m(n, &alpha).unwrap();
        prop_assert!(tc::kappa_iota(&prob, m).is_ok());
    }

    #[test]
    fn half_case_forward_constructions(roots in prop::collection::btree_set(-4i64..=4, 0..=2), u in nonzero_poly(1), free in poly(1), lead in 1i64..=3) {
        let kappa = roots.iter().fold(Poly::one(), |acc, &r| &acc * &Poly::from_ints(&[-r, 1]));
        let gamma = banklaine::admissible_gamma(&kappa, &free).unwrap();
        let g1 = &kappa * &u;
        let p1 = Poly::from_ints(&[0, lead]);
        let w = banklaine::construct_half(&p1, &kappa, &gamma, &g1.pow(2)).unwrap();
        prop_assert!(banklaine::verify_banklaine(&w.a, &w.hprime, &kappa));
    }
}

#[test]
fn solve_coefficients_kill_middle_sums() {
    for n in 2..=5u32 {
        for m in 0..=6usize {
            let c = tc::solve_coefficients(n, m);
            assert!(tc::multinomial_c(0, n, &c).is_one());
            if m >= 1 {
                assert!(tc::multinomial_c(1, n, &c).is_one());
            }
            for j in 2..=m {
                assert!(tc::multinomial_c(j, n, &c).is_zero(), "n={n} m={m} j={j}");
            }
        }
    }
}

#[test]
fn smallest_m_boundary_is_inclusive() {
    for n in 2..=5i64 {
        for m0 in 0..=6i64 {
            let d = (m0 + 1) * n;
            assert_eq!(tc::smallest_m(n as u32, &rat(d - 1, d)).unwrap(), m0 as usize);
        }
    }
}
