//! Globally adaptive Gauss-Kronrod (7, 15) quadrature for complex integrands
//! of a real parameter.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadOutput {
    pub value: Complex64,
    pub error: f64,
    pub subdivisions: usize,
}

#[derive(Clone, Copy, Debug)]
struct Piece {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<Piece>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x)? + f(c + x)?;
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    let value = kron * h;
    let error = ((kron - gauss) * h).norm();
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::Overflow { context: "non-finite quadrature panel".into() });
    }
    Ok(Piece { a, b, value, error })
}

/// Integrate `f` over `[a, b]` until the summed error estimate drops below
/// `max(abs_tol, rel_tol |I|)`; the most uncertain panel is bisected first.
pub fn integrate<F>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<QuadOutput>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    if a == b {
        return Ok(QuadOutput { value: Complex64::new(0.0, 0.0), error: 0.0, subdivisions: 0 });
    }
    let first = gk15(&mut f, a, b)?;
    let mut heap = BinaryHeap::new();
    let mut total = first.value;
    let mut err = first.error;
    heap.push(first);
    // panels too narrow to split again keep their error but leave the heap
    let mut frozen_err = 0.0;
    let mut frozen_val = Complex64::new(0.0, 0.0);
    let min_width = (b - a).abs() * 1e-14;
    loop {
        let tol = abs_tol.max(rel_tol * total.norm());
        if err <= tol {
            break;
        }
        if heap.len() >= max_subdivisions {
            return Err(Error::ToleranceNotMet { subdivisions: heap.len(), estimate: err });
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::ToleranceNotMet { subdivisions: 0, estimate: err });
        };
        if (worst.b - worst.a).abs() < min_width {
            frozen_err += worst.error;
            frozen_val += worst.value;
            if heap.is_empty() {
                return Err(Error::ToleranceNotMet { subdivisions: 1, estimate: err });
            }
            continue;
        }
        let m = 0.5 * (worst.a + worst.b);
        let left = gk15(&mut f, worst.a, m)?;
        let right = gk15(&mut f, m, worst.b)?;
        heap.push(left);
        heap.push(right);
        // recompute sums from scratch to avoid drift
        total = frozen_val + heap.iter().map(|p| p.value).sum::<Complex64>();
        err = frozen_err + heap.iter().map(|p| p.error).sum::<f64>();
    }
    Ok(QuadOutput { value: total, error: err, subdivisions: heap.len() })
}
