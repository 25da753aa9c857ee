//! Small dense complex linear algebra: a pivoted linear solve and the
//! eigenvalues of an upper-Hessenberg matrix by shifted QR.

use crate::math::{self, Complex64, ZERO};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinalgError {
    /// A pivot fell below the relative threshold.
    Singular { pivot: f64 },
    /// QR iteration did not deflate within the iteration budget.
    NoConvergence,
}

impl core::fmt::Display for LinalgError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::Singular { pivot } => write!(f, "matrix is singular (pivot {pivot:e})"),
            Self::NoConvergence => write!(f, "QR iteration did not converge"),
        }
    }
}

impl core::error::Error for LinalgError {}

/// Relative pivot threshold below which a system is declared singular.
pub const SINGULAR_PIVOT: f64 = 1e-14;

/// Solves `m x = b` by Gaussian elimination with partial pivoting.
pub fn solve<const N: usize>(
    mut m: [[Complex64; N]; N],
    mut b: [Complex64; N],
) -> Result<[Complex64; N], LinalgError> {
    let norm = m
        .iter()
        .flat_map(|row| row.iter())
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    if norm == 0.0 {
        return Err(LinalgError::Singular { pivot: 0.0 });
    }
    for col in 0..N {
        let (piv, piv_abs) = (col..N)
            .map(|r| (r, m[r][col].norm()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if piv_abs <= SINGULAR_PIVOT * norm {
            return Err(LinalgError::Singular {
                pivot: piv_abs / norm,
            });
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..N {
            let f = m[r][col] / m[col][col];
            if f == ZERO {
                continue;
            }
            for k in col..N {
                let v = m[col][k];
                m[r][k] -= f * v;
            }
            let v = b[col];
            b[r] -= f * v;
        }
    }
    let mut x = [ZERO; N];
    for r in (0..N).rev() {
        let s = (r + 1..N).fold(b[r], |acc, k| acc - m[r][k] * x[k]);
        x[r] = s / m[r][r];
    }
    Ok(x)
}

/// Eigenvalues of an upper-Hessenberg matrix by single-shift complex QR with
/// Wilkinson shifts, deflation and exceptional shifts.
pub fn hessenberg_eigenvalues<const N: usize>(
    mut h: [[Complex64; N]; N],
) -> Result<[Complex64; N], LinalgError> {
    const MAX_ITER_PER_EIGENVALUE: usize = 60;
    let mut eig = [ZERO; N];
    if N == 0 {
        return Ok(eig);
    }
    let mut hi = N - 1;
    let mut iter = 0usize;
    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let sub = h[lo][lo - 1].norm();
            let diag = h[lo][lo].norm() + h[lo - 1][lo - 1].norm();
            if sub <= f64::EPSILON * diag || sub < f64::MIN_POSITIVE {
                h[lo][lo - 1] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[hi][hi];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > MAX_ITER_PER_EIGENVALUE {
            return Err(LinalgError::NoConvergence);
        }

        let mu = if iter % 11 == 10 {
            // Exceptional shift breaks cycles such as nilpotent Jordan blocks.
            h[hi][hi] + Complex64::new(0.75, 0.4375) * h[hi][hi - 1].norm()
        } else {
            wilkinson_shift(
                h[hi - 1][hi - 1],
                h[hi - 1][hi],
                h[hi][hi - 1],
                h[hi][hi],
            )
        };

        for k in lo..=hi {
            h[k][k] -= mu;
        }
        let mut rotations = [(ZERO, ZERO); N];
        for k in lo..hi {
            let (c, s) = givens(h[k][k], h[k + 1][k]);
            rotations[k] = (c, s);
            for j in k..=hi {
                let a = h[k][j];
                let b = h[k + 1][j];
                h[k][j] = c.conj() * a + s.conj() * b;
                h[k + 1][j] = -s * a + c * b;
            }
        }
        for k in lo..hi {
            let (c, s) = rotations[k];
            for row in h.iter_mut().take((k + 2).min(hi) + 1).skip(lo) {
                let a = row[k];
                let b = row[k + 1];
                row[k] = a * c + b * s;
                row[k + 1] = -(a * s.conj()) + b * c.conj();
            }
        }
        for k in lo..=hi {
            h[k][k] += mu;
        }
    }
    eig[0] = h[0][0];
    Ok(eig)
}

/// Unitary rotation `[[c̄, s̄], [−s, c]]` mapping `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (Complex64, Complex64) {
    let r = math::sqrt(a.norm_sqr() + b.norm_sqr());
    if r == 0.0 {
        (Complex64::new(1.0, 0.0), ZERO)
    } else {
        (a / r, b / r)
    }
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let l1 = mid + disc;
    let l2 = mid - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}
