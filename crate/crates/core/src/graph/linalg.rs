use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::MetricGraph;
use crate::error::{Error, Result};

/// Solve a nonsingular augmented system [A | b] by Gaussian elimination.
pub(crate) fn solve_dense(mut a: Vec<Vec<BigRational>>) -> Result<Vec<BigRational>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::Disconnected)?;
        a.swap(col, piv);
        let inv = BigRational::from_integer(1.into()) / a[col][col].clone();
        for k in col..=n {
            a[col][k] = a[col][k].clone() * inv.clone();
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in col..=n {
                    let t = a[col][k].clone() * f.clone();
                    a[r][k] -= t;
                }
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n].clone()).collect())
}

/// Diagonal of the Smith normal form (d1 | d2 | ...), nonnegative.
pub fn smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    if rows == 0 {
        return vec![];
    }
    let cols = a[0].len();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pr, pc)) = min_nonzero(&a, t) else {
            diag.extend(std::iter::repeat_n(BigInt::zero(), rows.min(cols) - t));
            break;
        };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let mut done = true;
            for r in t + 1..rows {
                if !a[r][t].is_zero() {
                    let q = a[r][t].div_floor(&a[t][t]);
                    for c in t..cols {
                        let v = &a[t][c] * &q;
                        a[r][c] -= v;
                    }
                    if !a[r][t].is_zero() {
                        done = false;
                    }
                }
            }
            for c in t + 1..cols {
                if !a[t][c].is_zero() {
                    let q = a[t][c].div_floor(&a[t][t]);
                    for row in a.iter_mut().skip(t) {
                        let v = &row[t] * &q;
                        row[c] -= v;
                    }
                    if !a[t][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                let bad = (t + 1..rows).flat_map(|r| (t + 1..cols).map(move |c| (r, c))).find(|&(r, c)| {
                    !(&a[r][c] % &a[t][t]).is_zero()
                });
                match bad {
                    None => break,
                    Some((r, _)) => {
                        for c in t..cols {
                            let v = a[r][c].clone();
                            a[t][c] += v;
                        }
                        continue;
                    }
                }
            }
            let (pr, pc) = min_nonzero(&a, t).unwrap();
            a.swap(t, pr);
            for row in a.iter_mut() {
                row.swap(t, pc);
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn min_nonzero(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (r, row) in a.iter().enumerate().skip(t) {
        for (c, v) in row.iter().enumerate().skip(t) {
            if !v.is_zero() && best.is_none_or(|(br, bc)| v.abs() < a[br][bc].abs()) {
                best = Some((r, c));
            }
        }
    }
    best
}

/// Number of spanning trees of the underlying multigraph (lengths ignored), by the
/// matrix-tree determinant.
pub fn spanning_tree_count(g: &MetricGraph) -> BigInt {
    if g.vertices.len() <= 1 {
        return BigInt::from(1);
    }
    let a = g.reduced_laplacian_int();
    bareiss_det(a)
}

fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}
