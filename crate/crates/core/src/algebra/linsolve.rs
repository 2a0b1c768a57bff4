use num_traits::Zero;

use super::GaussianRational;

/// Solve `A x = b` exactly by Gauss-Jordan elimination.
///
/// Returns `None` when the system is inconsistent. Free variables are set to
/// zero, so a consistent underdetermined system yields one particular
/// solution.
pub fn solve_linear(
    a: &[Vec<GaussianRational>],
    b: &[GaussianRational],
) -> Option<Vec<GaussianRational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<GaussianRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("pivot nonzero");
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                #[allow(clippy::needless_range_loop)] // reads row r while writing row i
                for j in c..=cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![GaussianRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: i64) -> GaussianRational {
        GaussianRational::from(v)
    }

    #[test]
    fn solves_and_detects_inconsistency() {
        let a = vec![vec![g(1), g(1)], vec![g(1), g(-1)]];
        assert_eq!(solve_linear(&a, &[g(3), g(1)]), Some(vec![g(2), g(1)]));
        let a = vec![vec![g(1), g(1)], vec![g(2), g(2)]];
        assert_eq!(solve_linear(&a, &[g(1), g(3)]), None);
        let a = vec![vec![g(0)]];
        assert_eq!(solve_linear(&a, &[g(1)]), None);
    }
}
