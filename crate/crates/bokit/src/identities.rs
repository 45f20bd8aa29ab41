//! The verification engine: evaluate both sides of each determinant
//! identity and report residuals.
//!
//! A pipeline struct caches everything derived from one symbol (log,
//! factorization, ratio pair, limit constant) so that sweeps over the
//! section size `n` or the deformation parameter only pay for the
//! determinants. All checks are pure; sweeps run their items
//! independently and merge deterministically.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::determinants::{
    fredholm_det, szego_z_operator, szego_z_series, toeplitz_det, LogDet, SzegoOperatorParams,
};
use crate::error::{Error, Result};
use crate::factorization::{
    block_plus_factorization, factor_from_log, make_ratios, FactorizationData, RatioPair,
};
use crate::matrix::{lu_factor, ComplexMatrix};
use crate::operators::{delta_vectors, exact_section_size, hankel_u, hankel_v, kernel_section};
use crate::symbol::{coeffs_from_samples, convolve, krein_diagnostics, log_symbol, LaurentSeries};

/// Relative residuals divide by `max(|lhs|, this floor)`.
pub const RESIDUAL_FLOOR: f64 = 1e-300;

/// Which identity a report belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckKind {
    Bo,
    Quotient,
    Cramer,
    LambdaSweep,
    BlockBo,
}

impl CheckKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckKind::Bo => "bo",
            CheckKind::Quotient => "quotient",
            CheckKind::Cramer => "cramer",
            CheckKind::LambdaSweep => "lambda_sweep",
            CheckKind::BlockBo => "block_bo",
        }
    }
}

impl std::str::FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bo" => Ok(CheckKind::Bo),
            "quotient" => Ok(CheckKind::Quotient),
            "cramer" => Ok(CheckKind::Cramer),
            "lambda_sweep" => Ok(CheckKind::LambdaSweep),
            "block_bo" => Ok(CheckKind::BlockBo),
            other => Err(Error::Config(format!("unknown check kind '{other}'"))),
        }
    }
}

/// One identity-verification record.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub kind: CheckKind,
    pub n: usize,
    pub lambda: Option<Complex64>,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    /// Truncation bands, Hilbert-Schmidt norms, condition hints.
    pub diagnostics: BTreeMap<String, f64>,
}

fn report(
    kind: CheckKind,
    n: usize,
    lhs: Complex64,
    rhs: Complex64,
    diagnostics: BTreeMap<String, f64>,
) -> CheckReport {
    let abs_residual = (lhs - rhs).norm();
    CheckReport {
        kind,
        n,
        lambda: None,
        lhs,
        rhs,
        abs_residual,
        rel_residual: abs_residual / lhs.norm().max(RESIDUAL_FLOOR),
        diagnostics,
    }
}

/// Truncation and tolerance knobs shared by the pipelines.
#[derive(Debug, Clone)]
pub struct CheckParams {
    /// Working band for the symbol, factors, and ratio symbols.
    pub band: usize,
    /// Circle samples for Fourier inversion; must be at least `2*band+2`.
    pub fft_samples: usize,
    /// Section cap for the operator route to the limit constant.
    pub section_cap: usize,
    /// Residual tolerance for factorizations and ratio inverses.
    pub factorization_tol: f64,
}

impl Default for CheckParams {
    fn default() -> Self {
        Self {
            band: 64,
            fft_samples: 512,
            section_cap: 4096,
            factorization_tol: 1e-10,
        }
    }
}

/// Everything derived from one scalar symbol, ready for checks at any `n`.
#[derive(Debug, Clone)]
pub struct ScalarPipeline {
    /// Geometric-mean-1 symbol.
    pub phi: LaurentSeries,
    /// `log phi` with zero constant term.
    pub log_phi: LaurentSeries,
    /// The constant removed during normalization.
    pub geometric_mean: Complex64,
    pub factorization: FactorizationData,
    pub ratios: RatioPair,
    pub z_series: Complex64,
    /// Krein seminorm of `log phi` (symbol-class certificate).
    pub krein_seminorm: f64,
    pub params: CheckParams,
}

impl ScalarPipeline {
    /// Build from the symbol's own coefficients: take the continuous log,
    /// normalize the geometric mean away, factor, and form the ratios.
    pub fn from_symbol(phi: &LaurentSeries, params: &CheckParams) -> Result<Self> {
        if phi.dim() != 1 {
            return Err(Error::ScalarOnly {
                op: "ScalarPipeline",
                dim: phi.dim(),
            });
        }
        let (log_phi, mean) = log_symbol(phi, params.fft_samples, params.band)
            .map_err(Error::staged("log_symbol"))?;
        let normalized = phi.scale(Complex64::ONE / mean);
        Self::assemble(normalized, log_phi, mean, params)
    }

    /// Build from coefficients of `log phi`; the symbol itself is
    /// reconstructed by sampling the pointwise exponential. A nonzero
    /// constant term is removed and kept as the geometric mean.
    pub fn from_log_coeffs(log_phi: &LaurentSeries, params: &CheckParams) -> Result<Self> {
        if log_phi.dim() != 1 {
            return Err(Error::ScalarOnly {
                op: "ScalarPipeline",
                dim: log_phi.dim(),
            });
        }
        let mut log_phi = log_phi.clone();
        let mean = log_phi.scalar_coeff(0).exp();
        log_phi.set_scalar(0, Complex64::ZERO);
        let samples = log_phi.sample_scalar(params.fft_samples)?;
        let blocks: Vec<ComplexMatrix> = samples
            .into_iter()
            .map(|s| {
                let mut m = ComplexMatrix::zeros(1, 1);
                m[(0, 0)] = s.exp();
                m
            })
            .collect();
        let phi = coeffs_from_samples(&blocks, params.band)
            .map_err(Error::staged("symbol reconstruction"))?;
        Self::assemble(phi, log_phi, mean, params)
    }

    fn assemble(
        phi: LaurentSeries,
        log_phi: LaurentSeries,
        mean: Complex64,
        params: &CheckParams,
    ) -> Result<Self> {
        let factorization =
            factor_from_log(&log_phi, &phi, params.band, params.factorization_tol)
                .map_err(Error::staged("wiener_hopf_scalar"))?;
        let ratios = make_ratios(&factorization, params.band, params.factorization_tol)
            .map_err(Error::staged("make_ratios"))?;
        let z_series = szego_z_series(&log_phi)?;
        let krein = krein_diagnostics(&log_phi, params.band / 2);
        Ok(Self {
            phi,
            log_phi,
            geometric_mean: mean,
            factorization,
            ratios,
            z_series,
            krein_seminorm: krein.krein_seminorm,
            params: params.clone(),
        })
    }

    /// `D_n` of the original, un-normalized symbol. Every check runs on
    /// the geometric-mean-1 symbol; this convenience multiplies the
    /// normalized determinant back by `G^n`. No check uses it.
    pub fn denormalized_toeplitz_det(&self, n: usize) -> Result<Complex64> {
        let det = toeplitz_det(&self.phi, n)?;
        Ok(det.value * self.geometric_mean.powu(n as u32))
    }

    fn base_diagnostics(&self) -> BTreeMap<String, f64> {
        let mut d = BTreeMap::new();
        d.insert("band".into(), self.params.band as f64);
        d.insert("recon_residual".into(), self.factorization.recon_residual);
        d.insert("inverse_residual".into(), self.ratios.inverse_residual);
        d.insert("krein_seminorm".into(), self.krein_seminorm);
        d
    }
}

/// One side-by-side evaluation of the determinant identity
/// `D_n(phi) = Z det(I - K_n)` at section `n`.
pub fn bo_check(pipeline: &ScalarPipeline, n: usize) -> Result<CheckReport> {
    let t = toeplitz_det(&pipeline.phi, n).map_err(Error::staged("toeplitz_det"))?;
    let (f, tail) = fredholm_det(&pipeline.ratios.u, &pipeline.ratios.v, n, None)
        .map_err(Error::staged("fredholm_det"))?;
    let rhs = pipeline.z_series * f.value;

    let band = pipeline.ratios.u.band().max(pipeline.ratios.v.band());
    let m = exact_section_size(band, n);
    let mut diag = pipeline.base_diagnostics();
    diag.insert("section".into(), m as f64);
    diag.insert(
        "hs_norm_u".into(),
        hankel_u(&pipeline.ratios.u, n, m).frobenius_norm(),
    );
    diag.insert(
        "hs_norm_v".into(),
        hankel_v(&pipeline.ratios.v, n, m).frobenius_norm(),
    );
    diag.insert("cond_lhs".into(), t.condition_hint);
    diag.insert("cond_rhs".into(), f.condition_hint);
    diag.insert("tail_estimate".into(), tail);
    Ok(report(CheckKind::Bo, n, t.value, rhs, diag))
}

/// The determinant quotient formula at section `n >= 1`:
/// `D_{n-1}/D_n = 1 - ((I - U_n V_n)^{-1} U_n delta, V_n delta)` with the
/// bilinear (unconjugated) pairing.
pub fn quotient_check(pipeline: &ScalarPipeline, n: usize) -> Result<CheckReport> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "quotient_check needs n >= 1".into(),
        ));
    }
    let u = &pipeline.ratios.u;
    let v = &pipeline.ratios.v;
    let band = u.band().max(v.band());
    // One more than the Hankel support so the delta vectors fit whole.
    let m = band.saturating_sub(n).saturating_add(1).max(1);
    let hu = hankel_u(u, n, m);
    let hv = hankel_v(v, n, m);
    let a = hu.mul(&hv).identity_minus();
    let lu = lu_factor(&a)?;
    if lu.is_singular() {
        return Err(Error::SingularMatrix {
            condition_hint: lu.condition_hint(),
        });
    }
    let deltas = delta_vectors(u, v, n, m)?;
    let x = lu.solve_vec(&deltas.u_delta)?;
    let pairing: Complex64 = x
        .iter()
        .zip(&deltas.v_delta)
        .map(|(a, b)| a * b)
        .sum();
    let rhs = Complex64::ONE - pairing;

    let num = toeplitz_det(&pipeline.phi, n - 1).map_err(Error::staged("toeplitz_det"))?;
    let den = toeplitz_det(&pipeline.phi, n).map_err(Error::staged("toeplitz_det"))?;
    let lhs = LogDet::ratio(&num, &den);

    let mut diag = pipeline.base_diagnostics();
    diag.insert("section".into(), m as f64);
    diag.insert("cond_section".into(), lu.condition_hint());
    diag.insert("cond_lhs".into(), num.condition_hint.max(den.condition_hint));
    Ok(report(CheckKind::Quotient, n, lhs, rhs, diag))
}

/// Cramer consistency from the ratio symbols alone: the upper-left entry
/// of `(I - K_{n-1})^{-1}` against `det(I - K_n) / det(I - K_{n-1})`.
pub fn cramer_check_ratios(
    u: &LaurentSeries,
    v: &LaurentSeries,
    n: usize,
) -> Result<CheckReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("cramer_check needs n >= 1".into()));
    }
    let (f_prev, _) = fredholm_det(u, v, n - 1, None)?;
    let (f_cur, _) = fredholm_det(u, v, n, None)?;
    if f_prev.is_zero() {
        return Err(Error::SingularMatrix {
            condition_hint: f_prev.condition_hint,
        });
    }
    let rhs = LogDet::ratio(&f_cur, &f_prev);

    let band = u.band().max(v.band());
    let m = exact_section_size(band, n - 1);
    let d = u.dim();
    let a = kernel_section(u, v, n - 1, Some(m)).identity_minus();
    let lu = lu_factor(&a)?;
    if lu.is_singular() {
        return Err(Error::SingularMatrix {
            condition_hint: lu.condition_hint(),
        });
    }
    let mut e0 = vec![Complex64::ZERO; m * d];
    e0[0] = Complex64::ONE;
    let x = lu.solve_vec(&e0)?;
    let lhs = x[0];

    let mut diag = BTreeMap::new();
    diag.insert("section".into(), m as f64);
    diag.insert("cond_section".into(), lu.condition_hint());
    diag.insert("cond_rhs".into(), f_cur.condition_hint.max(f_prev.condition_hint));
    Ok(report(CheckKind::Cramer, n, lhs, rhs, diag))
}

/// Pipeline wrapper around [`cramer_check_ratios`].
pub fn cramer_check(pipeline: &ScalarPipeline, n: usize) -> Result<CheckReport> {
    let mut rep = cramer_check_ratios(&pipeline.ratios.u, &pipeline.ratios.v, n)?;
    for (k, val) in pipeline.base_diagnostics() {
        rep.diagnostics.entry(k).or_insert(val);
    }
    Ok(rep)
}

/// Outcome of one `(lambda, n)` sweep item. Failures are recorded as
/// strings so a sweep never aborts on an isolated bad parameter.
#[derive(Debug, Clone)]
pub struct SweepRecord {
    pub lambda: Complex64,
    pub n: usize,
    pub result: std::result::Result<CheckReport, String>,
}

/// Deform `phi` to `phi^lambda = exp(lambda log phi)` and run the
/// determinant identity check at every requested section, for every
/// `lambda`. Items are independent; results are merged in `(lambda, n)`
/// input order regardless of execution order.
pub fn lambda_sweep(
    base_log: &LaurentSeries,
    lambdas: &[Complex64],
    ns: &[usize],
    params: &CheckParams,
) -> Vec<SweepRecord> {
    let per_lambda = |&lambda: &Complex64| -> Vec<SweepRecord> {
        let scaled = base_log.scale(lambda);
        match ScalarPipeline::from_log_coeffs(&scaled, params) {
            Ok(pipeline) => ns
                .iter()
                .map(|&n| {
                    let result = bo_check(&pipeline, n)
                        .map(|mut rep| {
                            rep.kind = CheckKind::LambdaSweep;
                            rep.lambda = Some(lambda);
                            rep
                        })
                        .map_err(|e| e.to_string());
                    SweepRecord { lambda, n, result }
                })
                .collect(),
            Err(e) => {
                let message = e.to_string();
                ns.iter()
                    .map(|&n| SweepRecord {
                        lambda,
                        n,
                        result: Err(message.clone()),
                    })
                    .collect()
            }
        }
    };
    crate::par::par_flat_map(lambdas, per_lambda)
}

/// Everything derived from one block symbol with both factorizations.
#[derive(Debug, Clone)]
pub struct BlockPipeline {
    pub phi: LaurentSeries,
    /// `plus`/`minus` computed by the finite-section solve; `second_pair`
    /// holds the supplied `(psi_minus, psi_plus)`.
    pub factorization: FactorizationData,
    pub ratios: RatioPair,
    /// `Z = det T(phi) T(phi^{-1})` from the operator route.
    pub z_operator: LogDet,
    pub params: CheckParams,
}

impl BlockPipeline {
    /// Factor-first construction: `phi := psi_minus psi_plus` from the
    /// supplied pair, then the plus factorization is computed numerically.
    pub fn from_factors(
        psi_minus: &LaurentSeries,
        psi_plus: &LaurentSeries,
        params: &CheckParams,
    ) -> Result<Self> {
        let (phi, _) = convolve(psi_minus, psi_plus, psi_minus.band() + psi_plus.band())?;
        Self::from_symbol_with_factors(&phi, psi_minus, psi_plus, params)
    }

    /// Explicit construction from `phi` and a user-supplied second pair;
    /// the pair's reconstruction of `phi` is certified against the
    /// factorization tolerance.
    pub fn from_symbol_with_factors(
        phi: &LaurentSeries,
        psi_minus: &LaurentSeries,
        psi_plus: &LaurentSeries,
        params: &CheckParams,
    ) -> Result<Self> {
        if psi_minus.dim() != phi.dim() || psi_plus.dim() != phi.dim() {
            return Err(Error::DimensionMismatch {
                left: phi.dim(),
                right: psi_minus.dim().max(psi_plus.dim()),
            });
        }
        if psi_plus.negative_mass() > 0.0 {
            return Err(Error::SupportViolation {
                side: "plus",
                context: "psi_plus",
            });
        }
        if psi_minus.positive_mass() > 0.0 {
            return Err(Error::SupportViolation {
                side: "minus",
                context: "psi_minus",
            });
        }
        let (psi_product, _) =
            convolve(psi_minus, psi_plus, psi_minus.band() + psi_plus.band())?;
        let second_residual = psi_product.sub(phi)?.norm();
        if second_residual > params.factorization_tol {
            return Err(Error::ResidualTooLarge {
                what: "second factorization reconstruction",
                residual: second_residual,
                tolerance: params.factorization_tol,
                band: phi.band(),
            });
        }
        let mut factorization =
            block_plus_factorization(phi, params.band, params.factorization_tol)
                .map_err(Error::staged("block_plus_factorization"))?;
        factorization.recon_residual = factorization.recon_residual.max(second_residual);
        factorization.second_pair = Some((psi_minus.clone(), psi_plus.clone()));
        let ratios = make_ratios(&factorization, params.band, params.factorization_tol)
            .map_err(Error::staged("make_ratios"))?;
        let z_operator = szego_z_operator(
            phi,
            &SzegoOperatorParams {
                samples: params.fft_samples,
                inverse_band: params.band,
                section_cap: params.section_cap,
                tolerance: 1e-10,
            },
        )
        .map_err(Error::staged("szego_z_operator"))?;
        Ok(Self {
            phi: phi.clone(),
            factorization,
            ratios,
            z_operator,
            params: params.clone(),
        })
    }
}

/// The block determinant identity at section `n`:
/// `D_n(phi) = det T(phi) T(phi^{-1}) * det(I - K_n)` with the kernel
/// built from `u = phi_- psi_+^{-1}` and `v = psi_-^{-1} phi_+`.
pub fn block_bo_check(pipeline: &BlockPipeline, n: usize) -> Result<CheckReport> {
    let t = toeplitz_det(&pipeline.phi, n).map_err(Error::staged("toeplitz_det"))?;
    let (f, tail) = fredholm_det(&pipeline.ratios.u, &pipeline.ratios.v, n, None)
        .map_err(Error::staged("fredholm_det"))?;
    let rhs = pipeline.z_operator.value * f.value;

    let band = pipeline.ratios.u.band().max(pipeline.ratios.v.band());
    let m = exact_section_size(band, n);
    let mut diag = BTreeMap::new();
    diag.insert("band".into(), pipeline.params.band as f64);
    diag.insert("section".into(), m as f64);
    diag.insert(
        "recon_residual".into(),
        pipeline.factorization.recon_residual,
    );
    diag.insert("inverse_residual".into(), pipeline.ratios.inverse_residual);
    diag.insert("cond_lhs".into(), t.condition_hint);
    diag.insert("cond_rhs".into(), f.condition_hint);
    diag.insert("tail_estimate".into(), tail);
    let mut rep = report(CheckKind::BlockBo, n, t.value, rhs, diag);
    rep.lambda = None;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn analytic_pipeline() -> ScalarPipeline {
        // log phi = 0.4 z + 0.2 z^2 + 0.1 z^5: plus-supported, so the
        // kernel vanishes identically and every identity is exact.
        let log = LaurentSeries::from_scalar_coeffs(
            5,
            &[(1, c(0.4, 0.0)), (2, c(0.2, 0.0)), (5, c(0.1, 0.0))],
        )
        .unwrap();
        ScalarPipeline::from_log_coeffs(&log, &CheckParams::default()).unwrap()
    }

    fn exp_trig_pipeline(t: f64) -> ScalarPipeline {
        let log =
            LaurentSeries::from_scalar_coeffs(1, &[(1, c(t, 0.0)), (-1, c(t, 0.0))]).unwrap();
        ScalarPipeline::from_log_coeffs(&log, &CheckParams::default()).unwrap()
    }

    #[test]
    fn analytic_symbol_checks_are_exact() {
        let p = analytic_pipeline();
        assert!((p.z_series - Complex64::ONE).norm() < 1e-15);
        for n in 1..=8 {
            let bo = bo_check(&p, n).unwrap();
            assert!(bo.abs_residual < 1e-13, "bo at n={n}: {}", bo.abs_residual);
            assert!((bo.lhs - Complex64::ONE).norm() < 1e-13);
            let q = quotient_check(&p, n).unwrap();
            assert!(q.abs_residual < 1e-13, "quotient at n={n}");
            let cr = cramer_check(&p, n).unwrap();
            assert!(cr.abs_residual < 1e-13, "cramer at n={n}");
        }
    }

    #[test]
    fn bo_holds_on_exp_trig_family() {
        let p = exp_trig_pipeline(0.3);
        assert!((p.z_series - c((0.09f64).exp(), 0.0)).norm() < 1e-14);
        for n in 1..=10 {
            let rep = bo_check(&p, n).unwrap();
            assert!(
                rep.rel_residual < 1e-10,
                "n = {n}: rel residual {}",
                rep.rel_residual
            );
        }
    }

    #[test]
    fn quotient_telescopes_to_inverse_determinant() {
        let p = exp_trig_pipeline(0.25);
        let mut product = Complex64::ONE;
        let n_max = 8;
        for n in 1..=n_max {
            let rep = quotient_check(&p, n).unwrap();
            assert!(rep.rel_residual < 1e-10, "n = {n}");
            product *= rep.lhs;
        }
        let d = toeplitz_det(&p.phi, n_max).unwrap().value;
        let err = (product - d.inv()).norm() / d.inv().norm();
        assert!(err < 1e-9, "telescoping error {err}");
    }

    #[test]
    fn cramer_toy_is_scalar_cramer_rule() {
        // u_1 = 1, v_{-1} = c: K_0 = [[c]], K_1 empty, so both sides are
        // 1 / (1 - c).
        let cc = c(0.35, 0.15);
        let u = LaurentSeries::from_scalar_coeffs(1, &[(1, Complex64::ONE)]).unwrap();
        let v = LaurentSeries::from_scalar_coeffs(1, &[(-1, cc)]).unwrap();
        let rep = cramer_check_ratios(&u, &v, 1).unwrap();
        let want = (Complex64::ONE - cc).inv();
        assert!((rep.lhs - want).norm() < 1e-14);
        assert!((rep.rhs - want).norm() < 1e-14);
        assert!(rep.abs_residual < 1e-14);
    }

    #[test]
    fn cramer_and_quotient_express_the_same_ratio() {
        // Both compute D_{n-1}/D_n = det(I - K_{n-1})/det(I - K_n); the
        // cramer report's sides are reciprocals of that ratio.
        let p = exp_trig_pipeline(0.3);
        for n in 1..=8 {
            let q = quotient_check(&p, n).unwrap();
            let cr = cramer_check(&p, n).unwrap();
            let err = (q.rhs - cr.rhs.inv()).norm();
            assert!(err < 1e-9, "n = {n}: {err}");
        }
    }

    #[test]
    fn lambda_sweep_records_every_item_in_order() {
        let log =
            LaurentSeries::from_scalar_coeffs(1, &[(1, c(0.2, 0.0)), (-1, c(0.2, 0.0))]).unwrap();
        let lambdas = [Complex64::ZERO, Complex64::ONE, c(1.0, 1.0)];
        let ns = [1usize, 2, 3];
        let records = lambda_sweep(&log, &lambdas, &ns, &CheckParams::default());
        assert_eq!(records.len(), 9);
        for (i, r) in records.iter().enumerate() {
            assert_eq!(r.lambda, lambdas[i / 3]);
            assert_eq!(r.n, ns[i % 3]);
            let rep = r.result.as_ref().expect("no failures in this sweep");
            assert_eq!(rep.kind, CheckKind::LambdaSweep);
            assert!(rep.rel_residual < 1e-9, "item {i}");
        }
        // lambda = 0 deforms to the constant symbol: both sides exactly 1.
        let zero = records[0].result.as_ref().unwrap();
        assert!((zero.lhs - Complex64::ONE).norm() < 1e-13);
        assert!((zero.rhs - Complex64::ONE).norm() < 1e-13);
    }

    #[test]
    fn lambda_one_reproduces_plain_bo() {
        let log =
            LaurentSeries::from_scalar_coeffs(1, &[(1, c(0.2, 0.0)), (-1, c(0.2, 0.0))]).unwrap();
        let params = CheckParams::default();
        let p = ScalarPipeline::from_log_coeffs(&log, &params).unwrap();
        let plain = bo_check(&p, 4).unwrap();
        let sweep = lambda_sweep(&log, &[Complex64::ONE], &[4], &params);
        let swept = sweep[0].result.as_ref().unwrap();
        assert!((plain.lhs - swept.lhs).norm() < 1e-14);
        assert!((plain.rhs - swept.rhs).norm() < 1e-14);
    }

    #[test]
    fn lambda_sweep_records_failures_and_continues() {
        // lambda = 40 starves the band (exp(20 (z + 1/z)) needs far more
        // than 64 coefficients); the sweep must flag those items and
        // still deliver the healthy lambda = 1 results.
        let log =
            LaurentSeries::from_scalar_coeffs(1, &[(1, c(0.5, 0.0)), (-1, c(0.5, 0.0))]).unwrap();
        let lambdas = [Complex64::ONE, c(40.0, 0.0)];
        let ns = [1usize, 2];
        let records = lambda_sweep(&log, &lambdas, &ns, &CheckParams::default());
        assert_eq!(records.len(), 4);
        for r in &records[..2] {
            assert!(r.result.is_ok(), "lambda = 1 must pass");
        }
        for r in &records[2..] {
            assert_eq!(r.lambda, c(40.0, 0.0));
            assert!(r.result.is_err(), "starved deformation must be flagged");
        }
    }

    #[test]
    fn z_scales_quadratically_under_deformation() {
        // log phi = t (z + 1/z): Z(lambda) = exp(lambda^2 t^2), read off
        // the series route directly.
        let t = 0.2;
        let log =
            LaurentSeries::from_scalar_coeffs(1, &[(1, c(t, 0.0)), (-1, c(t, 0.0))]).unwrap();
        for lambda in [c(-2.0, 0.0), c(0.5, 0.0), c(1.0, 1.0), c(2.0, 0.0)] {
            let z = szego_z_series(&log.scale(lambda)).unwrap();
            let want = (lambda * lambda * (t * t)).exp();
            assert!((z - want).norm() < 1e-13, "lambda = {lambda}");
        }
    }

    #[test]
    fn block_pipeline_identity_symbol_is_trivial() {
        let params = CheckParams {
            band: 16,
            ..Default::default()
        };
        let psi = LaurentSeries::identity(2);
        let p = BlockPipeline::from_factors(&psi, &psi, &params).unwrap();
        assert!((p.z_operator.value - Complex64::ONE).norm() < 1e-12);
        for n in 1..=4 {
            let rep = block_bo_check(&p, n).unwrap();
            assert!((rep.lhs - Complex64::ONE).norm() < 1e-12);
            assert!(rep.abs_residual < 1e-12);
        }
    }

    #[test]
    fn block_bo_on_small_noncommuting_instance() {
        let psi_minus = LaurentSeries::from_block_coeffs(
            2,
            2,
            &[
                (0, 0, 0, Complex64::ONE),
                (0, 1, 1, Complex64::ONE),
                (-1, 0, 1, c(0.12, 0.04)),
                (-2, 1, 0, c(-0.05, 0.08)),
            ],
        )
        .unwrap();
        let psi_plus = LaurentSeries::from_block_coeffs(
            2,
            2,
            &[
                (0, 0, 0, Complex64::ONE),
                (0, 1, 1, Complex64::ONE),
                (1, 1, 0, c(0.1, -0.06)),
                (2, 0, 0, c(0.07, 0.02)),
            ],
        )
        .unwrap();
        let params = CheckParams {
            band: 40,
            fft_samples: 128,
            ..Default::default()
        };
        let p = BlockPipeline::from_factors(&psi_minus, &psi_plus, &params).unwrap();
        for n in 1..=6 {
            let rep = block_bo_check(&p, n).unwrap();
            assert!(
                rep.rel_residual < 1e-8,
                "n = {n}: rel residual {}",
                rep.rel_residual
            );
        }
    }

    #[test]
    fn denormalized_determinant_restores_the_geometric_mean() {
        // Scale a geometric-mean-1 symbol by 2.5: the pipeline strips the
        // constant, and the convenience accessor must put 2.5^n back.
        let log = LaurentSeries::from_scalar_coeffs(
            2,
            &[(1, c(0.3, 0.1)), (-2, c(0.1, -0.2))],
        )
        .unwrap();
        let params = CheckParams {
            band: 32,
            fft_samples: 128,
            ..Default::default()
        };
        let base = ScalarPipeline::from_log_coeffs(&log, &params).unwrap();
        let scaled = base.phi.scale(c(2.5, 0.0));
        let p = ScalarPipeline::from_symbol(&scaled, &params).unwrap();
        assert!((p.geometric_mean - c(2.5, 0.0)).norm() < 1e-10);
        for n in 1..=6 {
            let direct = toeplitz_det(&scaled, n).unwrap().value;
            let restored = p.denormalized_toeplitz_det(n).unwrap();
            let rel = (direct - restored).norm() / direct.norm();
            assert!(rel < 1e-10, "n = {n}: rel {rel}");
        }
    }

    #[test]
    fn quotient_rejects_n_zero() {
        let p = analytic_pipeline();
        assert!(quotient_check(&p, 0).is_err());
        assert!(cramer_check(&p, 0).is_err());
    }
}
