//! Wiener-Hopf factorization of circle symbols and the ratio symbols
//! feeding the Hankel constructions.
//!
//! Scalar symbols are factored canonically by splitting `log phi` into its
//! analytic and co-analytic halves and exponentiating each (a triangular
//! recurrence, exact in exact arithmetic). Block symbols cannot be factored
//! through a matrix logarithm, so the plus factor is obtained from a
//! finite-section linear solve instead: find `w = phi_+^{-1}` with
//! `w_0 = I` from the conditions `(w phi)_k = 0` for `k = 1..band`, then
//! `phi_+ = w^{-1}` and `phi_- = w phi`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{lu_factor, ComplexMatrix};
use crate::symbol::{convolve, log_symbol, LaurentSeries};

/// A factorization `phi = phi_+ phi_-`, optionally with a second pair
/// `phi = psi_- psi_+` (needed by the block kernel construction).
///
/// `plus` is plus-supported with identity block at 0. `minus` is
/// minus-supported; for scalar symbols its constant term is exactly 1,
/// for block symbols it is a unimodular block (determinant 1 within the
/// factorization tolerance) because the two one-sided normalizations
/// cannot hold simultaneously in the noncommutative case.
#[derive(Debug, Clone)]
pub struct FactorizationData {
    pub plus: LaurentSeries,
    pub minus: LaurentSeries,
    /// `(psi_minus, psi_plus)` with mirrored support, both with identity
    /// constant block.
    pub second_pair: Option<(LaurentSeries, LaurentSeries)>,
    /// `||plus * minus - phi||_F` over the stored bands (and the worse of
    /// the two residuals when a second pair is present).
    pub recon_residual: f64,
}

/// The mutually inverse ratio symbols `u` and `v`: scalar
/// `u = phi_- / phi_+`, `v = phi_+ / phi_-`; block `u = phi_- psi_+^{-1}`,
/// `v = psi_-^{-1} phi_+`.
#[derive(Debug, Clone)]
pub struct RatioPair {
    pub u: LaurentSeries,
    pub v: LaurentSeries,
    /// `||u * v - 1||_F` over the working band.
    pub inverse_residual: f64,
}

/// Exponential of a plus-supported scalar series with zero constant term,
/// by the recurrence `e_0 = 1`, `e_n = (1/n) sum_{j=1..n} j a_j e_{n-j}`.
pub fn exp_series(a: &LaurentSeries, band: usize) -> Result<LaurentSeries> {
    if a.dim() != 1 {
        return Err(Error::ScalarOnly {
            op: "exp_series",
            dim: a.dim(),
        });
    }
    let a0 = a.scalar_coeff(0).norm();
    if a0 > 0.0 {
        return Err(Error::NonzeroConstantTerm { magnitude: a0 });
    }
    if a.negative_mass() > 0.0 {
        return Err(Error::SupportViolation {
            side: "plus",
            context: "exp_series",
        });
    }
    let mut e = vec![Complex64::ZERO; band + 1];
    e[0] = Complex64::ONE;
    for n in 1..=band {
        let mut acc = Complex64::ZERO;
        for j in 1..=n.min(a.band()) {
            acc += (j as f64) * a.scalar_coeff(j as i64) * e[n - j];
        }
        e[n] = acc / n as f64;
    }
    let mut out = LaurentSeries::zeros(1, band);
    for (n, &v) in e.iter().enumerate() {
        out.set_scalar(n as i64, v);
    }
    Ok(out)
}

/// Series inverse of a plus-supported series with identity constant block:
/// `q_0 = I`, `q_n = -sum_{j=1..n} p_j q_{n-j}`. Exact in exact arithmetic;
/// minus-supported input is handled by reflecting at the call site.
pub fn invert_triangular(p: &LaurentSeries, band: usize) -> Result<LaurentSeries> {
    let d = p.dim();
    if p.negative_mass() > 0.0 {
        return Err(Error::SupportViolation {
            side: "plus",
            context: "invert_triangular",
        });
    }
    let p0 = p.block(0).expect("band includes 0");
    let identity = ComplexMatrix::identity(d);
    let mut dev = 0.0f64;
    for r in 0..d {
        for c in 0..d {
            dev += (p0[r * d + c] - identity[(r, c)]).norm_sqr();
        }
    }
    if dev.sqrt() > 1e-9 {
        return Err(Error::InvalidParameter(
            "invert_triangular expects an identity constant block".into(),
        ));
    }

    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(band + 1);
    q.push(identity.data().to_vec());
    for n in 1..=band {
        let mut acc = vec![Complex64::ZERO; d * d];
        for j in 1..=n.min(p.band()) {
            let pj = p.block(j as i64).expect("within band");
            block_mul_acc_neg(&mut acc, pj, &q[n - j], d);
        }
        q.push(acc);
    }
    let mut out = LaurentSeries::zeros(d, band);
    for (n, block) in q.iter().enumerate() {
        out.set_block(n as i64, block);
    }
    Ok(out)
}

fn block_mul_acc_neg(dst: &mut [Complex64], a: &[Complex64], b: &[Complex64], d: usize) {
    for r in 0..d {
        for m in 0..d {
            let arm = a[r * d + m];
            if arm == Complex64::ZERO {
                continue;
            }
            for c in 0..d {
                dst[r * d + c] -= arm * b[m * d + c];
            }
        }
    }
}

/// Scalar factorization from an already-normalized `log phi` (zero
/// constant term) and the matching geometric-mean-1 symbol.
pub fn factor_from_log(
    log_phi: &LaurentSeries,
    phi_normalized: &LaurentSeries,
    band: usize,
    tolerance: f64,
) -> Result<FactorizationData> {
    let plus = exp_series(&log_phi.plus_part(), band)?;
    let minus = exp_series(&log_phi.minus_part().reflect(), band)?.reflect();
    let (product, _) = convolve(&plus, &minus, band + band)?;
    let recon_residual = product.sub(phi_normalized)?.norm();
    if recon_residual > tolerance {
        return Err(Error::ResidualTooLarge {
            what: "factorization reconstruction",
            residual: recon_residual,
            tolerance,
            band,
        });
    }
    Ok(FactorizationData {
        plus,
        minus,
        second_pair: None,
        recon_residual,
    })
}

/// Canonical scalar Wiener-Hopf factorization `phi = phi_+ phi_-` with
/// `phi_+(0) = phi_-(inf) = 1`, via log-split-exponentiate.
///
/// The symbol is normalized to geometric mean 1 first (the removed
/// constant is `log_symbol`'s business); the reconstruction residual is
/// measured against the normalized symbol. `band` defaults to four times
/// the input band.
pub fn wiener_hopf_scalar(
    phi: &LaurentSeries,
    samples: usize,
    band: Option<usize>,
    tolerance: f64,
) -> Result<FactorizationData> {
    let band = band.unwrap_or(4 * phi.band().max(1));
    let (log_phi, mean) = log_symbol(phi, samples, band)?;
    let normalized = phi.scale(Complex64::ONE / mean);
    factor_from_log(&log_phi, &normalized, band, tolerance)
}

/// Block factorization `phi = phi_+ phi_-` by a finite-section linear
/// solve, valid in the perturbative regime where the section matrix is
/// nonsingular (small deviation of `phi` from the identity).
///
/// Unknown blocks `w_1..w_band` of `w = phi_+^{-1}` satisfy
/// `sum_j w_j phi_{k-j} = -phi_k` for `k = 1..band`; the system is solved
/// through its transpose so the unknowns multiply from the left. The
/// minus factor `w phi` is certified minus-supported: its mass at
/// positive indices must stay below the tolerance.
pub fn block_plus_factorization(
    phi: &LaurentSeries,
    band: usize,
    tolerance: f64,
) -> Result<FactorizationData> {
    let d = phi.dim();
    let m = band;
    // Transposed block system: sum_j phi_{k-j}^T x_j = -phi_k^T, x_j = w_j^T.
    let mut system = ComplexMatrix::zeros(m * d, m * d);
    let mut rhs = ComplexMatrix::zeros(m * d, d);
    for k in 1..=m {
        for j in 1..=m {
            let kj = k as i64 - j as i64;
            if kj.unsigned_abs() as usize > phi.band() {
                continue;
            }
            for r in 0..d {
                for c in 0..d {
                    // transpose: entry (r, c) of phi_{k-j}^T is phi_{k-j}(c, r)
                    system[((k - 1) * d + r, (j - 1) * d + c)] = phi.coeff(kj, c, r);
                }
            }
        }
        for r in 0..d {
            for c in 0..d {
                rhs[((k - 1) * d + r, c)] = -phi.coeff(k as i64, c, r);
            }
        }
    }
    let lu = lu_factor(&system)?;
    if lu.is_singular() {
        return Err(Error::SingularFactorizationSystem { band });
    }
    let solution = lu.solve_matrix(&rhs)?;

    let mut w = LaurentSeries::zeros(d, m);
    w.set_block(0, ComplexMatrix::identity(d).data());
    for j in 1..=m {
        let mut block = vec![Complex64::ZERO; d * d];
        for r in 0..d {
            for c in 0..d {
                // untranspose
                block[r * d + c] = solution[((j - 1) * d + c, r)];
            }
        }
        w.set_block(j as i64, &block);
    }

    let (minus_raw, _) = convolve(&w, phi, m + phi.band())?;
    let positive_mass = minus_raw.positive_mass();
    if positive_mass > tolerance {
        return Err(Error::ResidualTooLarge {
            what: "minus-support certification",
            residual: positive_mass,
            tolerance,
            band,
        });
    }
    let mut minus = minus_raw.minus_part();
    let b0 = minus_raw.block(0).expect("band includes 0").to_vec();
    minus.set_block(0, &b0);

    let plus = invert_triangular(&w, m)?;
    let (product, _) = convolve(&plus, &minus, m + minus.band())?;
    let recon_residual = product.sub(phi)?.norm().hypot(positive_mass);
    if recon_residual > tolerance {
        return Err(Error::ResidualTooLarge {
            what: "factorization reconstruction",
            residual: recon_residual,
            tolerance,
            band,
        });
    }
    Ok(FactorizationData {
        plus,
        minus,
        second_pair: None,
        recon_residual,
    })
}

/// Build the ratio pair from a factorization. Scalar:
/// `u = minus * plus^{-1}`, `v = plus * minus^{-1}`. Block (second pair
/// required): `u = phi_- psi_+^{-1}`, `v = psi_-^{-1} phi_+`. One-sided
/// inverses are computed by the exact triangular recursion.
pub fn make_ratios(
    factorization: &FactorizationData,
    out_band: usize,
    tolerance: f64,
) -> Result<RatioPair> {
    let d = factorization.plus.dim();
    let (u, v) = if d == 1 && factorization.second_pair.is_none() {
        let plus_inv = invert_triangular(&factorization.plus, out_band)?;
        let minus_inv =
            invert_triangular(&factorization.minus.reflect(), out_band)?.reflect();
        let (u, _) = convolve(&factorization.minus, &plus_inv, out_band)?;
        let (v, _) = convolve(&factorization.plus, &minus_inv, out_band)?;
        (u, v)
    } else {
        let (psi_minus, psi_plus) = factorization
            .second_pair
            .as_ref()
            .ok_or(Error::MissingSecondFactorization)?;
        let psi_plus_inv = invert_triangular(psi_plus, out_band)?;
        let psi_minus_inv = invert_triangular(&psi_minus.reflect(), out_band)?.reflect();
        let (u, _) = convolve(&factorization.minus, &psi_plus_inv, out_band)?;
        let (v, _) = convolve(&psi_minus_inv, &factorization.plus, out_band)?;
        (u, v)
    };
    let (product, _) = convolve(&u, &v, out_band)?;
    let inverse_residual = product.sub(&LaurentSeries::identity(d))?.norm();
    if inverse_residual > tolerance {
        return Err(Error::ResidualTooLarge {
            what: "ratio mutual inverse",
            residual: inverse_residual,
            tolerance,
            band: out_band,
        });
    }
    Ok(RatioPair {
        u,
        v,
        inverse_residual,
    })
}
