//! Lowest eigenvalues of a symmetric tridiagonal matrix by Sturm-sequence
//! bisection, with optional eigenvectors by shifted inverse iteration.
//!
//! Backend of the finite-difference oracle; sized for n up to a few times
//! 10^4 and a handful of requested states, where this is plenty fast.

use crate::error::{Error, Result};

/// k smallest eigenvalues, ascending. `offdiag` holds the n-1 couplings.
pub fn tridiag_lowest_eigen(diag: &[f64], offdiag: &[f64], k: usize) -> Result<Vec<f64>> {
    check_shape(diag, offdiag, k)?;
    let pivmin = pivot_floor(offdiag);
    let (lo, hi) = gershgorin(diag, offdiag);
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        out.push(bisect(diag, offdiag, j, lo, hi, pivmin));
    }
    Ok(out)
}

/// Eigenvalues plus 2-norm-normalized eigenvectors.
pub fn tridiag_lowest_eigen_with_vectors(
    diag: &[f64],
    offdiag: &[f64],
    k: usize,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let vals = tridiag_lowest_eigen(diag, offdiag, k)?;
    let scale = vals
        .iter()
        .fold(1.0f64, |m, v| m.max(v.abs()))
        .max(offdiag.iter().fold(0.0f64, |m, b| m.max(b.abs())));
    let mut vecs: Vec<Vec<f64>> = Vec::with_capacity(k);
    for (j, &lambda) in vals.iter().enumerate() {
        let mut v = inverse_iteration(diag, offdiag, lambda, scale);
        // Near-degenerate pairs would contaminate each other; a cheap
        // Gram-Schmidt pass against the previous vectors settles it.
        for prev in vecs.iter().take(j) {
            let dot: f64 = v.iter().zip(prev.iter()).map(|(a, b)| a * b).sum();
            if dot.abs() > 1e-8 {
                for (vi, pi) in v.iter_mut().zip(prev.iter()) {
                    *vi -= dot * pi;
                }
                normalize(&mut v);
            }
        }
        vecs.push(v);
    }
    Ok((vals, vecs))
}

fn check_shape(diag: &[f64], offdiag: &[f64], k: usize) -> Result<()> {
    if diag.is_empty() {
        return Err(Error::domain("tridiagonal matrix must be nonempty"));
    }
    if offdiag.len() + 1 != diag.len() {
        return Err(Error::domain(format!(
            "offdiag length {} must be diag length {} minus one",
            offdiag.len(),
            diag.len()
        )));
    }
    if k == 0 || k > diag.len() {
        return Err(Error::domain(format!(
            "requested {k} eigenvalues of a dimension-{} matrix",
            diag.len()
        )));
    }
    Ok(())
}

fn pivot_floor(offdiag: &[f64]) -> f64 {
    let max_b2 = offdiag.iter().fold(0.0f64, |m, b| m.max(b * b));
    f64::MIN_POSITIVE * max_b2.max(1.0)
}

fn gershgorin(diag: &[f64], offdiag: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { offdiag[i - 1].abs() } else { 0.0 };
        let right = if i < n - 1 { offdiag[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    (lo, hi)
}

/// Number of eigenvalues strictly below x (Sturm count via the LDL^T pivots).
fn sturm_count(diag: &[f64], offdiag: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut d = diag[0] - x;
    if d.abs() < pivmin {
        d = -pivmin;
    }
    if d < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        d = diag[i] - x - offdiag[i - 1] * offdiag[i - 1] / d;
        if d.abs() < pivmin {
            d = -pivmin;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

fn bisect(diag: &[f64], offdiag: &[f64], j: usize, mut lo: f64, mut hi: f64, pivmin: f64) -> f64 {
    // Invariant: count(lo) <= j < count(hi).
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, offdiag, mid, pivmin) > j {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// A few rounds of inverse iteration with a partially pivoted tridiagonal LU.
fn inverse_iteration(diag: &[f64], offdiag: &[f64], lambda: f64, scale: f64) -> Vec<f64> {
    let n = diag.len();
    // Tiny shift keeps the factorization comfortably nonsingular.
    let shifted: Vec<f64> = diag.iter().map(|a| a - lambda - 1e-14 * scale).collect();
    let lu = LuTridiag::factor(&shifted, offdiag);
    // Deterministic, mildly irregular start vector.
    let mut v: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.5 * ((i as f64 * 0.7391).sin()))
        .collect();
    normalize(&mut v);
    for _ in 0..3 {
        v = lu.solve(&v);
        normalize(&mut v);
    }
    v
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

/// LU factorization of a (shifted) symmetric tridiagonal matrix with partial
/// pivoting; pivoting introduces one extra superdiagonal.
struct LuTridiag {
    low: Vec<f64>,
    d: Vec<f64>,
    up1: Vec<f64>,
    up2: Vec<f64>,
    swapped: Vec<bool>,
}

impl LuTridiag {
    fn factor(diag: &[f64], offdiag: &[f64]) -> Self {
        let n = diag.len();
        let mut d = diag.to_vec();
        // low starts as the subdiagonal and ends as the multipliers; up1
        // starts as the superdiagonal and collects the swap updates.
        let mut low = offdiag.to_vec();
        let mut up1 = offdiag.to_vec();
        let mut up2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= low[i].abs() {
                let pivot = if d[i] != 0.0 { d[i] } else { f64::MIN_POSITIVE };
                let m = low[i] / pivot;
                low[i] = m;
                d[i + 1] -= m * up1[i];
            } else {
                swapped[i] = true;
                let m = d[i] / low[i];
                d[i] = low[i];
                low[i] = m;
                let t = up1[i];
                up1[i] = d[i + 1];
                d[i + 1] = t - m * d[i + 1];
                if i + 1 < n - 1 {
                    // Fill-in second superdiagonal from the swapped row.
                    up2[i] = up1[i + 1];
                    up1[i + 1] *= -m;
                }
            }
        }
        LuTridiag { low, d, up1, up2, swapped }
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = rhs.len();
        let mut x = rhs.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                x.swap(i, i + 1);
            }
            x[i + 1] -= self.low[i] * x[i];
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            if i + 1 < n {
                acc -= self.up1[i] * x[i + 1];
            }
            if i + 2 < n {
                acc -= self.up2[i] * x[i + 2];
            }
            let pivot = if self.d[i] != 0.0 { self.d[i] } else { f64::MIN_POSITIVE };
            x[i] = acc / pivot;
        }
        x
    }
}
