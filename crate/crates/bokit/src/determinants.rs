//! Numerically stable determinants: Toeplitz sections, Fredholm
//! determinants of the banded kernel, and the limit constant `Z` by two
//! independent routes (coefficient series and operator sections).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{lu_factor, ComplexMatrix};
use crate::operators::{exact_section_size, hankel_tail_hs, hankel_u, hankel_v, kernel_section, toeplitz_matrix};
use crate::symbol::{invert_symbol, LaurentSeries};

/// Determinant in log-polar form, accumulated pivot by pivot so that
/// products of hundreds of pivots can neither overflow nor underflow.
#[derive(Debug, Clone, PartialEq)]
pub struct LogDet {
    pub log_magnitude: f64,
    /// In `(-pi, pi]`.
    pub phase: f64,
    /// `exp(log_magnitude) * exp(i * phase)`, kept consistent by
    /// construction.
    pub value: Complex64,
    /// Ratio of extreme pivot magnitudes (`>= 1`, infinite when singular).
    pub condition_hint: f64,
}

impl LogDet {
    pub fn one() -> Self {
        Self::from_log_polar(0.0, 0.0, 1.0)
    }

    pub fn zero() -> Self {
        Self {
            log_magnitude: f64::NEG_INFINITY,
            phase: 0.0,
            value: Complex64::ZERO,
            condition_hint: f64::INFINITY,
        }
    }

    pub fn from_log_polar(log_magnitude: f64, phase: f64, condition_hint: f64) -> Self {
        let phase = wrap_phase(phase);
        Self {
            log_magnitude,
            phase,
            value: Complex64::from_polar(log_magnitude.exp(), phase),
            condition_hint,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.log_magnitude == f64::NEG_INFINITY
    }

    /// `num / den` evaluated in log-polar form.
    pub fn ratio(num: &LogDet, den: &LogDet) -> Complex64 {
        Complex64::from_polar(
            (num.log_magnitude - den.log_magnitude).exp(),
            num.phase - den.phase,
        )
    }
}

pub(crate) fn wrap_phase(p: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut x = p.rem_euclid(tau);
    if x > std::f64::consts::PI {
        x -= tau;
    }
    x
}

/// Distance between two phases modulo `2 pi`.
pub(crate) fn phase_distance(a: f64, b: f64) -> f64 {
    wrap_phase(a - b).abs()
}

/// Determinant by row-pivoted elimination, accumulating log-magnitudes
/// and phases of the pivots. A pivot column identically below the
/// exact-zero floor yields an exact zero.
pub fn det_complex(m: &ComplexMatrix) -> Result<LogDet> {
    let lu = lu_factor(m)?;
    if lu.is_singular() {
        return Ok(LogDet::zero());
    }
    let mut log_magnitude = 0.0f64;
    let mut phase = if lu.swap_count() % 2 == 1 {
        std::f64::consts::PI
    } else {
        0.0
    };
    for p in lu.pivot_values() {
        log_magnitude += p.norm().ln();
        phase += p.arg();
    }
    Ok(LogDet::from_log_polar(
        log_magnitude,
        phase,
        lu.condition_hint(),
    ))
}

/// `D_n(phi) = det T_n(phi)`, with the empty determinant `D_0 := 1`.
pub fn toeplitz_det(phi: &LaurentSeries, n: usize) -> Result<LogDet> {
    if n == 0 {
        return Ok(LogDet::one());
    }
    det_complex(&toeplitz_matrix(phi, n))
}

/// `det(I - K_n)` on the exact banded section (or the `section` override),
/// together with a heuristic bound on what the discarded part of the
/// kernel could contribute: `||U_tail|| ||V_tail|| exp(||U_n|| ||V_n|| + 1)`
/// in Hilbert-Schmidt norms. The bound is exactly 0 for the default
/// (banded-exact) section.
pub fn fredholm_det(
    u: &LaurentSeries,
    v: &LaurentSeries,
    n: usize,
    section: Option<usize>,
) -> Result<(LogDet, f64)> {
    let band = u.band().max(v.band());
    let exact = exact_section_size(band, n);
    let m = section.unwrap_or(exact);
    let k = kernel_section(u, v, n, Some(m));
    let det = det_complex(&k.identity_minus())?;
    let tail_estimate = if m >= exact {
        0.0
    } else {
        let tail_u = hankel_tail_hs(u, false, n, m);
        let tail_v = hankel_tail_hs(v, true, n, m);
        let hs_u = hankel_u(u, n, exact).frobenius_norm();
        let hs_v = hankel_v(v, n, exact).frobenius_norm();
        tail_u * tail_v * (hs_u * hs_v + 1.0).exp()
    };
    Ok((det, tail_estimate))
}

/// The strong Szego limit constant from the coefficient series:
/// `Z = exp(sum_{k>=1} k (log phi)_k (log phi)_{-k})`, summed over the
/// stored band. Scalar only; the block constant has no convergent scalar
/// series and is served by [`szego_z_operator`].
pub fn szego_z_series(log_phi: &LaurentSeries) -> Result<Complex64> {
    if log_phi.dim() != 1 {
        return Err(Error::ScalarOnly {
            op: "szego_z_series",
            dim: log_phi.dim(),
        });
    }
    let mut sum = Complex64::ZERO;
    for k in 1..=(log_phi.band() as i64) {
        sum += (k as f64) * log_phi.scalar_coeff(k) * log_phi.scalar_coeff(-k);
    }
    Ok(sum.exp())
}

/// Parameters for the operator route to `Z`.
#[derive(Debug, Clone)]
pub struct SzegoOperatorParams {
    /// Circle samples used to invert the symbol.
    pub samples: usize,
    /// Band for the inverse symbol's coefficients.
    pub inverse_band: usize,
    /// Cap on the section size (in blocks) for the adaptive doubling.
    pub section_cap: usize,
    /// Absolute stabilization tolerance on log-magnitude and phase.
    pub tolerance: f64,
}

impl Default for SzegoOperatorParams {
    fn default() -> Self {
        Self {
            samples: 512,
            inverse_band: 64,
            section_cap: 4096,
            tolerance: 1e-10,
        }
    }
}

/// The operator representation of the limit constant,
/// `Z = det T(phi) T(phi^{-1})`, the only route valid for block symbols.
///
/// The `N x N` block section of the semi-infinite product is computed
/// with the inner sum over the banded coefficients taken exactly, then
/// `N` is doubled until log-magnitude and phase stabilize below the
/// tolerance (immediately for banded data, since the product differs
/// from the identity only in a corner block).
pub fn szego_z_operator(phi: &LaurentSeries, params: &SzegoOperatorParams) -> Result<LogDet> {
    let (inv, _residual) = invert_symbol(phi, params.samples, params.inverse_band)?;
    let mut n = phi.band().max(inv.band()).max(1);
    let mut prev = product_section_det(phi, &inv, n)?;
    let mut older = prev.value;
    loop {
        let next_n = 2 * n;
        if next_n > params.section_cap {
            return Err(Error::NonConvergence {
                cap: params.section_cap,
                last: prev.value,
                previous: older,
            });
        }
        let cur = product_section_det(phi, &inv, next_n)?;
        let mag_close = (cur.log_magnitude - prev.log_magnitude).abs() < params.tolerance
            || (cur.is_zero() && prev.is_zero());
        let phase_close = phase_distance(cur.phase, prev.phase) < params.tolerance;
        if mag_close && phase_close {
            return Ok(cur);
        }
        older = prev.value;
        prev = cur;
        n = next_n;
    }
}

/// Determinant of the `n x n` block section of `T(phi) T(phi_inv)`, the
/// product of semi-infinite sections: entry `(i, j)` sums
/// `phi_{i-l} phi_inv_{l-j}` over every `l >= 0` inside both bands.
fn product_section_det(
    phi: &LaurentSeries,
    phi_inv: &LaurentSeries,
    n: usize,
) -> Result<LogDet> {
    let d = phi.dim();
    let b1 = phi.band() as i64;
    let b2 = phi_inv.band() as i64;
    let mut a = ComplexMatrix::zeros(n * d, n * d);
    let mut block = vec![Complex64::ZERO; d * d];
    for i in 0..n as i64 {
        for j in 0..n as i64 {
            let lo = (i - b1).max(j - b2).max(0);
            let hi = (i + b1).min(j + b2);
            if lo > hi {
                continue;
            }
            block.iter_mut().for_each(|z| *z = Complex64::ZERO);
            for l in lo..=hi {
                let pa = phi.block(i - l).expect("within band");
                let pb = phi_inv.block(l - j).expect("within band");
                for r in 0..d {
                    for t in 0..d {
                        let art = pa[r * d + t];
                        if art == Complex64::ZERO {
                            continue;
                        }
                        for s in 0..d {
                            block[r * d + s] += art * pb[t * d + s];
                        }
                    }
                }
            }
            a.set_block(i as usize, j as usize, d, &block);
        }
    }
    det_complex(&a)
}
