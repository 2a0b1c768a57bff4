#![allow(dead_code)]

use std::collections::BTreeMap;

use expode::algebra::{GaussianRational, Poly, RatFunc};
use expode::expoly::{ExpPoly, ExpTerm};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn small_rat() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

pub fn gauss() -> impl Strategy<Value = GaussianRational> {
    prop_oneof![
        3 => small_rat().prop_map(GaussianRational::real),
        2 => (small_rat(), small_rat()).prop_map(|(a, b)| GaussianRational::new(a, b)),
    ]
}

pub fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(gauss(), 0..=max_deg + 1).prop_map(Poly::new)
}

pub fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

/// Exponents drawn from a small pool so that merging gets exercised.
pub fn exponent() -> impl Strategy<Value = Poly> {
    let c = prop_oneof![Just(rat(1, 1)), Just(rat(-1, 1)), Just(rat(1, 2)), Just(rat(2, 1)), Just(rat(-3, 4))];
    prop_oneof![
        2 => Just(Poly::zero()),
        3 => c.clone().prop_map(|a| Poly::new(vec![GaussianRational::zero(), GaussianRational::real(a)])),
        1 => (c.clone(), c).prop_map(|(a, b)| Poly::new(vec![
            GaussianRational::zero(),
            GaussianRational::real(a),
            GaussianRational::real(b),
        ])),
        1 => Just(Poly::new(vec![GaussianRational::zero(), GaussianRational::i()])),
    ]
}

pub fn ratfunc() -> impl Strategy<Value = RatFunc> {
    let den = prop_oneof![
        3 => Just(Poly::one()),
        1 => (-3i64..=3).prop_map(|a| Poly::from_ints(&[-a, 1])),
    ];
    (poly(2), den).prop_map(|(n, d)| RatFunc::new(n, d).expect("nonzero denominator"))
}

pub fn entire_expoly() -> impl Strategy<Value = ExpPoly> {
    prop::collection::vec((poly(2), exponent()), 0..=3).prop_map(|ts| {
        ExpPoly::normalize(ts.into_iter().map(|(c, e)| ExpTerm::new(c.into(), e))).expect("zero constant terms")
    })
}

pub fn expoly() -> impl Strategy<Value = ExpPoly> {
    prop::collection::vec((ratfunc(), exponent()), 0..=3)
        .prop_map(|ts| ExpPoly::normalize(ts.into_iter().map(|(c, e)| ExpTerm::new(c, e))).expect("zero constant terms"))
}

/// A runner with a fixed seed and no failure files.
pub fn runner(cases: u32) -> TestRunner {
    let cfg = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(cfg, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * i)
}

/// Multinomial sum by scanning every tuple in `[0, n]^(m+1)`.
pub fn brute_multinomial(k0: usize, n: u32, c: &[GaussianRational]) -> GaussianRational {
    let m1 = c.len();
    let mut acc = GaussianRational::zero();
    let total = (n as usize + 1).pow(m1 as u32);
    for code in 0..total {
        let mut j = vec![0u32; m1];
        let mut x = code;
        for slot in j.iter_mut() {
            *slot = (x % (n as usize + 1)) as u32;
            x /= n as usize + 1;
        }
        if j.iter().sum::<u32>() != n {
            continue;
        }
        if j.iter().enumerate().map(|(i, &ji)| i * ji as usize).sum::<usize>() != k0 {
            continue;
        }
        let den = j.iter().fold(BigInt::one(), |a, &ji| a * factorial(ji));
        let mut term = GaussianRational::real(BigRational::new(factorial(n), den));
        for (ci, &ji) in c.iter().zip(&j) {
            for _ in 0..ji {
                term = &term * ci;
            }
        }
        acc += &term;
    }
    acc
}

/// Sum of `coef * e^{rate z}` with rational rates.
pub type ExpSeries = BTreeMap<BigRational, BigRational>;

pub fn series_mul(a: &ExpSeries, b: &ExpSeries) -> ExpSeries {
    let mut out = ExpSeries::new();
    for (ra, ca) in a {
        for (rb, cb) in b {
            *out.entry(ra + rb).or_insert_with(BigRational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn series_derivative(a: &ExpSeries) -> ExpSeries {
    let mut out: ExpSeries = a.iter().map(|(r, c)| (r.clone(), r * c)).collect();
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn series_add(a: &ExpSeries, b: &ExpSeries) -> ExpSeries {
    let mut out = a.clone();
    for (r, c) in b {
        *out.entry(r.clone()).or_insert_with(BigRational::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}
