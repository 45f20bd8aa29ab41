//! Finite sections of the operators driving the determinant identities:
//! Toeplitz matrices `T_n(phi)`, the Hankel matrices `U_n` and `V_n` built
//! from the ratio symbols, the kernel `K_n = U_n V_n`, and the delta
//! vectors of the quotient formula.
//!
//! For banded symbols the Hankel matrices vanish identically beyond
//! row/column `band - n - 1`, so the default section size
//! `max(band - n, 1)` makes every finite section the exact operator: no
//! truncation error enters the kernel or its determinant.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::symbol::LaurentSeries;

/// The vectors of the determinant quotient formula:
/// `u_delta(i) = u_{n+i}`, `v_delta(i) = v_{-n-i}`. (Despite the notation
/// these are coefficient lookups, not the Hankel operators applied to a
/// vector.)
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaVectors {
    pub u_delta: Vec<Complex64>,
    pub v_delta: Vec<Complex64>,
}

/// `n x n` block Toeplitz section with block `(i, j) = phi_{i-j}`;
/// the result is `(n d) x (n d)` for block dimension `d`.
pub fn toeplitz_matrix(phi: &LaurentSeries, n: usize) -> ComplexMatrix {
    assert!(n >= 1, "section size must be positive");
    let d = phi.dim();
    let mut m = ComplexMatrix::zeros(n * d, n * d);
    for i in 0..n {
        for j in 0..n {
            if let Some(block) = phi.block(i as i64 - j as i64) {
                m.set_block(i, j, d, block);
            }
        }
    }
    m
}

/// Section size at which a banded Hankel matrix is exact: entries vanish
/// once `n + i + j + 1` exceeds the band.
pub fn exact_section_size(band: usize, n: usize) -> usize {
    band.saturating_sub(n).max(1)
}

/// `m x m` block section of the Hankel matrix `U_n(i, j) = u_{n+i+j+1}`.
pub fn hankel_u(u: &LaurentSeries, n: usize, m: usize) -> ComplexMatrix {
    assert!(m >= 1, "section size must be positive");
    let d = u.dim();
    let mut out = ComplexMatrix::zeros(m * d, m * d);
    for i in 0..m {
        for j in 0..m {
            let k = (n + i + j + 1) as i64;
            if let Some(block) = u.block(k) {
                out.set_block(i, j, d, block);
            }
        }
    }
    out
}

/// `m x m` block section of the Hankel matrix `V_n(i, j) = v_{-n-i-j-1}`.
pub fn hankel_v(v: &LaurentSeries, n: usize, m: usize) -> ComplexMatrix {
    assert!(m >= 1, "section size must be positive");
    let d = v.dim();
    let mut out = ComplexMatrix::zeros(m * d, m * d);
    for i in 0..m {
        for j in 0..m {
            let k = -((n + i + j + 1) as i64);
            if let Some(block) = v.block(k) {
                out.set_block(i, j, d, block);
            }
        }
    }
    out
}

/// `m x m` block section of the kernel
/// `K_n(i, j) = sum_{k >= 1} u_{n+i+k} v_{-k-n-j}` (indices shifted to the
/// section offset `n`), computed as the Hankel product `U_n V_n` with the
/// inner dimension large enough that the banded sum over `k` is exact.
///
/// `m` defaults to the exact section size for the pair's band. The
/// entries carry no checkerboard sign twist: conjugating by
/// `diag((-1)^i)` would flip the off-diagonal signs without changing any
/// determinant, so the plain product convention is used throughout.
pub fn kernel_section(
    u: &LaurentSeries,
    v: &LaurentSeries,
    n: usize,
    m: Option<usize>,
) -> ComplexMatrix {
    let band = u.band().max(v.band());
    let exact = exact_section_size(band, n);
    let m = m.unwrap_or(exact);
    // Inner dimension: keep every k with both factors inside their bands.
    let inner = exact.max(m);
    let hu = hankel_u(u, n, inner);
    let hv = hankel_v(v, n, inner);
    let full = hu.mul(&hv);
    if inner == m {
        return full;
    }
    let d = u.dim();
    let mut out = ComplexMatrix::zeros(m * d, m * d);
    for i in 0..m * d {
        for j in 0..m * d {
            out[(i, j)] = full[(i, j)];
        }
    }
    out
}

/// Hilbert-Schmidt mass of the banded Hankel matrix `U_n` (`negative:
/// false`) or `V_n` (`negative: true`) lying outside the leading
/// `m x m` block section.
pub fn hankel_tail_hs(series: &LaurentSeries, negative: bool, n: usize, m: usize) -> f64 {
    let limit = series.band().saturating_sub(n); // rows/cols beyond this are zero
    let mut tail = 0.0f64;
    for i in 0..limit {
        for j in 0..limit {
            if i < m && j < m {
                continue;
            }
            let mut k = (n + i + j + 1) as i64;
            if negative {
                k = -k;
            }
            let mass = series.block_norm(k);
            tail += mass * mass;
        }
    }
    tail.sqrt()
}

/// Delta vectors for the scalar quotient formula.
pub fn delta_vectors(
    u: &LaurentSeries,
    v: &LaurentSeries,
    n: usize,
    m: usize,
) -> Result<DeltaVectors> {
    if u.dim() != 1 || v.dim() != 1 {
        return Err(Error::ScalarOnly {
            op: "delta_vectors",
            dim: u.dim().max(v.dim()),
        });
    }
    let u_delta = (0..m).map(|i| u.scalar_coeff((n + i) as i64)).collect();
    let v_delta = (0..m).map(|i| v.scalar_coeff(-((n + i) as i64))).collect();
    Ok(DeltaVectors { u_delta, v_delta })
}
