//! Singular value decomposition for the tiny per-frame matrices.
//!
//! The embedding only ever decomposes 3x3 and 4x4 matrices, so a one-sided
//! Jacobi iteration is both simpler and more accurate here than a general
//! bidiagonalisation, and it is fully deterministic.

use crate::error::{Error, Result};

/// Largest matrix dimension the embedding uses.
pub const MAX_DIM: usize = 4;

/// Dense row-major matrix of active size `n` inside fixed 4x4 storage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallMatrix {
    pub n: usize,
    pub data: [[f64; MAX_DIM]; MAX_DIM],
}

impl SmallMatrix {
    pub fn zero(n: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&n), "matrix dimension {n} out of range");
        SmallMatrix {
            n,
            data: [[0.0; MAX_DIM]; MAX_DIM],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SmallMatrix::zero(n);
        for i in 0..n {
            m.data[i][i] = 1.0;
        }
        m
    }

    /// Largest absolute entry, used as the scale for tolerances.
    pub fn max_abs(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                best = best.max(self.data[i][j].abs());
            }
        }
        best
    }
}

/// Result of [`svd_small`]: `a = u * diag(s) * v^T` with `s` sorted
/// descending and the leading entry of every `u` column non-negative.
#[derive(Debug, Clone)]
pub struct SvdTriple {
    pub u: SmallMatrix,
    pub s: [f64; MAX_DIM],
    pub v: SmallMatrix,
}

/// One-sided Jacobi SVD of a small square matrix.
#[allow(clippy::needless_range_loop)]
pub fn svd_small(a: &SmallMatrix) -> Result<SvdTriple> {
    let n = a.n;
    if n != 3 && n != 4 {
        return Err(Error::InvalidInput(format!(
            "decomposition expects a 3x3 or 4x4 matrix, got {n}x{n}"
        )));
    }
    for i in 0..n {
        for j in 0..n {
            if !a.data[i][j].is_finite() {
                return Err(Error::InvalidInput(format!(
                    "matrix entry ({i},{j}) is not finite: {}",
                    a.data[i][j]
                )));
            }
        }
    }
    let mut w = *a;
    let mut v = SmallMatrix::identity(n);
    let eps = 1e-15;
    let max_sweeps = 60;

    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for r in 0..n {
                    alpha += w.data[r][p] * w.data[r][p];
                    beta += w.data[r][q] * w.data[r][q];
                    gamma += w.data[r][p] * w.data[r][q];
                }
                if gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..n {
                    let wp = w.data[r][p];
                    let wq = w.data[r][q];
                    w.data[r][p] = c * wp - s * wq;
                    w.data[r][q] = s * wp + c * wq;
                    let vp = v.data[r][p];
                    let vq = v.data[r][q];
                    v.data[r][p] = c * vp - s * vq;
                    v.data[r][q] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    // Column norms are the singular values; sort them descending.
    let mut norms = [0.0f64; MAX_DIM];
    for k in 0..n {
        norms[k] = (0..n)
            .map(|r| w.data[r][k] * w.data[r][k])
            .sum::<f64>()
            .sqrt();
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let mut s = [0.0f64; MAX_DIM];
    let mut u = SmallMatrix::zero(n);
    let mut v_sorted = SmallMatrix::zero(n);
    for (k, &src) in order.iter().enumerate() {
        s[k] = norms[src];
        for r in 0..n {
            v_sorted.data[r][k] = v.data[r][src];
        }
    }

    // Normalise the strong columns of W into U, then complete any null
    // directions with Gram-Schmidt against the standard basis.
    let tol = s[0].max(f64::MIN_POSITIVE) * 1e-12;
    let mut valid = [false; MAX_DIM];
    for (k, &src) in order.iter().enumerate() {
        if s[k] > tol {
            for r in 0..n {
                u.data[r][k] = w.data[r][src] / s[k];
            }
            valid[k] = true;
        }
    }
    for k in 0..n {
        if valid[k] {
            continue;
        }
        for e in 0..n {
            let mut cand = [0.0f64; MAX_DIM];
            cand[e] = 1.0;
            for j in 0..n {
                if !valid[j] {
                    continue;
                }
                let dot: f64 = (0..n).map(|r| u.data[r][j] * cand[r]).sum();
                for r in 0..n {
                    cand[r] -= dot * u.data[r][j];
                }
            }
            let norm = (0..n).map(|r| cand[r] * cand[r]).sum::<f64>().sqrt();
            if norm > 0.5 {
                for r in 0..n {
                    u.data[r][k] = cand[r] / norm;
                }
                valid[k] = true;
                break;
            }
        }
    }

    // Fix signs so repeated runs and the inverse stage agree exactly.
    for k in 0..n {
        if let Some(r) = (0..n).find(|&r| u.data[r][k].abs() > 1e-12) {
            if u.data[r][k] < 0.0 {
                for rr in 0..n {
                    u.data[rr][k] = -u.data[rr][k];
                    v_sorted.data[rr][k] = -v_sorted.data[rr][k];
                }
            }
        }
    }

    Ok(SvdTriple { u, s, v: v_sorted })
}

/// Multiply the factors back into a matrix.
pub fn svd_reconstruct(t: &SvdTriple) -> SmallMatrix {
    let n = t.u.n;
    let mut a = SmallMatrix::zero(n);
    for i in 0..n {
        for j in 0..n {
            let mut sum = 0.0;
            for k in 0..n {
                sum += t.u.data[i][k] * t.s[k] * t.v.data[j][k];
            }
            a.data[i][j] = sum;
        }
    }
    a
}
