//! Run configuration: JSON schema, validation, and the shipped symbol
//! families.
//!
//! Top-level keys: `symbol`, `truncation`, `check`, `tolerances`,
//! `output`. Scalar coefficients are `[k, re, im]` triples; block
//! coefficients are `[k, row, col, re, im]` with a `dim` field on the
//! symbol. Check kinds mirror [`CheckKind`].

use std::path::PathBuf;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::identities::{BlockPipeline, CheckKind, CheckParams, ScalarPipeline};
use crate::symbol::{convolve, LaurentSeries};

/// Scalar coefficient entry `[k, re, im]`.
pub type ScalarCoeff = (i64, f64, f64);
/// Block coefficient entry `[k, row, col, re, im]`.
pub type BlockCoeff = (i64, usize, usize, f64, f64);

/// Symbol families accepted by the runner.
#[derive(Debug, Clone)]
pub enum SymbolSpec {
    /// `log phi = sum c_k z^k` from an explicit list ("exp_trig" family).
    LogCoeffs(Vec<(i64, Complex64)>),
    /// `phi` given directly by its coefficients.
    Coeffs(Vec<(i64, Complex64)>),
    /// Products of `(1 - a z)^{+-1}` and `(1 - b / z)^{+-1}`, `|a|,|b| < 1`.
    Rational {
        plus_zeros: Vec<Complex64>,
        plus_poles: Vec<Complex64>,
        minus_zeros: Vec<Complex64>,
        minus_poles: Vec<Complex64>,
    },
    /// Random seeded factor pair `psi_-`, `psi_+`; `phi := psi_- psi_+`.
    BlockFactorFirst {
        dim: usize,
        factor_band: usize,
        scale: f64,
        seed: u64,
    },
    /// Explicit block symbol with its second factorization pair.
    BlockExplicit {
        dim: usize,
        phi: Vec<BlockCoeff>,
        psi_minus: Vec<BlockCoeff>,
        psi_plus: Vec<BlockCoeff>,
    },
}

impl SymbolSpec {
    pub fn is_block(&self) -> bool {
        matches!(
            self,
            SymbolSpec::BlockFactorFirst { .. } | SymbolSpec::BlockExplicit { .. }
        )
    }

    /// Assemble the scalar pipeline for this spec.
    pub fn build_scalar_pipeline(&self, params: &CheckParams) -> Result<ScalarPipeline> {
        match self {
            SymbolSpec::LogCoeffs(coeffs) => {
                let band = coeffs
                    .iter()
                    .map(|(k, _)| k.unsigned_abs() as usize)
                    .max()
                    .unwrap_or(0);
                let series = series_from_pairs(band, coeffs)?;
                ScalarPipeline::from_log_coeffs(&series, params)
            }
            SymbolSpec::Coeffs(coeffs) => {
                let band = coeffs
                    .iter()
                    .map(|(k, _)| k.unsigned_abs() as usize)
                    .max()
                    .unwrap_or(0);
                let series = series_from_pairs(band, coeffs)?;
                ScalarPipeline::from_symbol(&series, params)
            }
            SymbolSpec::Rational {
                plus_zeros,
                plus_poles,
                minus_zeros,
                minus_poles,
            } => {
                let phi = rational_series(
                    plus_zeros,
                    plus_poles,
                    minus_zeros,
                    minus_poles,
                    params.band,
                )?;
                ScalarPipeline::from_symbol(&phi, params)
            }
            _ => Err(Error::Config(
                "scalar check requires a scalar symbol kind".into(),
            )),
        }
    }

    /// Assemble the block pipeline for this spec.
    pub fn build_block_pipeline(&self, params: &CheckParams) -> Result<BlockPipeline> {
        match self {
            SymbolSpec::BlockFactorFirst {
                dim,
                factor_band,
                scale,
                seed,
            } => {
                let (psi_minus, psi_plus) =
                    random_factor_pair(*dim, *factor_band, *scale, *seed);
                BlockPipeline::from_factors(&psi_minus, &psi_plus, params)
            }
            SymbolSpec::BlockExplicit {
                dim,
                phi,
                psi_minus,
                psi_plus,
            } => {
                let phi = block_series_from_entries(*dim, phi)?;
                let psi_minus = block_series_from_entries(*dim, psi_minus)?;
                let psi_plus = block_series_from_entries(*dim, psi_plus)?;
                BlockPipeline::from_symbol_with_factors(&phi, &psi_minus, &psi_plus, params)
            }
            _ => Err(Error::Config(
                "block check requires a block symbol kind".into(),
            )),
        }
    }
}

fn series_from_pairs(band: usize, coeffs: &[(i64, Complex64)]) -> Result<LaurentSeries> {
    let pairs: Vec<(i64, Complex64)> = coeffs.to_vec();
    LaurentSeries::from_scalar_coeffs(band, &pairs)
}

fn block_series_from_entries(dim: usize, entries: &[BlockCoeff]) -> Result<LaurentSeries> {
    let band = entries
        .iter()
        .map(|(k, ..)| k.unsigned_abs() as usize)
        .max()
        .unwrap_or(0);
    let converted: Vec<(i64, usize, usize, Complex64)> = entries
        .iter()
        .map(|&(k, r, c, re, im)| (k, r, c, Complex64::new(re, im)))
        .collect();
    LaurentSeries::from_block_coeffs(dim, band, &converted)
}

/// Coefficients of a product of elementary rational factors, truncated at
/// `band`.
pub fn rational_series(
    plus_zeros: &[Complex64],
    plus_poles: &[Complex64],
    minus_zeros: &[Complex64],
    minus_poles: &[Complex64],
    band: usize,
) -> Result<LaurentSeries> {
    for a in plus_zeros
        .iter()
        .chain(plus_poles)
        .chain(minus_zeros)
        .chain(minus_poles)
    {
        if a.norm() >= 1.0 {
            return Err(Error::Config(format!(
                "rational parameter {a} must have modulus < 1"
            )));
        }
    }
    let mut acc = LaurentSeries::scalar_one();
    for &a in plus_zeros {
        let factor =
            LaurentSeries::from_scalar_coeffs(1, &[(0, Complex64::ONE), (1, -a)])?;
        acc = convolve(&acc, &factor, band)?.0;
    }
    for &a in plus_poles {
        let mut geo = LaurentSeries::zeros(1, band);
        let mut power = Complex64::ONE;
        for k in 0..=band {
            geo.set_scalar(k as i64, power);
            power *= a;
        }
        acc = convolve(&acc, &geo, band)?.0;
    }
    for &b in minus_zeros {
        let factor =
            LaurentSeries::from_scalar_coeffs(1, &[(0, Complex64::ONE), (-1, -b)])?;
        acc = convolve(&acc, &factor, band)?.0;
    }
    for &b in minus_poles {
        let mut geo = LaurentSeries::zeros(1, band);
        let mut power = Complex64::ONE;
        for k in 0..=band {
            geo.set_scalar(-(k as i64), power);
            power *= b;
        }
        acc = convolve(&acc, &geo, band)?.0;
    }
    Ok(acc)
}

/// Seeded random one-sided factor pair with identity constant blocks and
/// total off-identity Frobenius mass equal to `scale` on each side.
pub fn random_factor_pair(
    dim: usize,
    factor_band: usize,
    scale: f64,
    seed: u64,
) -> (LaurentSeries, LaurentSeries) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let minus = random_one_sided(&mut rng, dim, factor_band, scale, false);
    let plus = random_one_sided(&mut rng, dim, factor_band, scale, true);
    (minus, plus)
}

fn random_one_sided(
    rng: &mut ChaCha8Rng,
    dim: usize,
    band: usize,
    scale: f64,
    plus: bool,
) -> LaurentSeries {
    let mut blocks: Vec<Vec<Complex64>> = Vec::with_capacity(band);
    let mut mass_sq = 0.0f64;
    for _ in 0..band {
        let block: Vec<Complex64> = (0..dim * dim)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        mass_sq += block.iter().map(|z| z.norm_sqr()).sum::<f64>();
        blocks.push(block);
    }
    let factor = if mass_sq > 0.0 {
        scale / mass_sq.sqrt()
    } else {
        0.0
    };
    let mut out = LaurentSeries::zeros(dim, band.max(1));
    let identity: Vec<Complex64> = {
        let mut v = vec![Complex64::ZERO; dim * dim];
        for r in 0..dim {
            v[r * dim + r] = Complex64::ONE;
        }
        v
    };
    out.set_block(0, &identity);
    for (i, block) in blocks.iter().enumerate() {
        let k = (i + 1) as i64;
        let scaled: Vec<Complex64> = block.iter().map(|z| z * factor).collect();
        out.set_block(if plus { k } else { -k }, &scaled);
    }
    out
}

/// Validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub symbol: SymbolSpec,
    pub params: CheckParams,
    pub check_kind: CheckKind,
    pub ns: Vec<usize>,
    pub lambdas: Vec<Complex64>,
    /// Exit code is 0 iff every relative residual stays below this.
    pub residual_tol: f64,
    pub output: PathBuf,
}

impl RunConfig {
    /// Re-seed the random symbol family (no-op for deterministic kinds).
    pub fn override_seed(&mut self, new_seed: u64) {
        if let SymbolSpec::BlockFactorFirst { seed, .. } = &mut self.symbol {
            *seed = new_seed;
        }
    }
}

// -- serde schema -----------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    symbol: SymbolSection,
    #[serde(default)]
    truncation: TruncationSection,
    check: CheckSection,
    #[serde(default)]
    tolerances: TolerancesSection,
    #[serde(default)]
    output: Option<String>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum SymbolSection {
    LogCoeffs {
        coeffs: Vec<ScalarCoeff>,
    },
    Coeffs {
        coeffs: Vec<ScalarCoeff>,
    },
    Rational {
        #[serde(default)]
        plus_zeros: Vec<(f64, f64)>,
        #[serde(default)]
        plus_poles: Vec<(f64, f64)>,
        #[serde(default)]
        minus_zeros: Vec<(f64, f64)>,
        #[serde(default)]
        minus_poles: Vec<(f64, f64)>,
    },
    BlockFactorFirst {
        dim: usize,
        factor_band: usize,
        scale: f64,
        #[serde(default)]
        seed: u64,
    },
    BlockExplicit {
        dim: usize,
        phi: Vec<BlockCoeff>,
        psi_minus: Vec<BlockCoeff>,
        psi_plus: Vec<BlockCoeff>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TruncationSection {
    #[serde(default = "default_band")]
    band: usize,
    #[serde(default = "default_fft_samples")]
    fft_samples: usize,
    #[serde(default = "default_section_cap")]
    section_cap: usize,
}

fn default_band() -> usize {
    64
}
fn default_fft_samples() -> usize {
    512
}
fn default_section_cap() -> usize {
    4096
}

impl Default for TruncationSection {
    fn default() -> Self {
        Self {
            band: default_band(),
            fft_samples: default_fft_samples(),
            section_cap: default_section_cap(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CheckSection {
    kind: String,
    n: Vec<usize>,
    #[serde(default)]
    lambda: Vec<(f64, f64)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TolerancesSection {
    #[serde(default = "default_factorization_tol")]
    factorization_tol: f64,
    #[serde(default = "default_residual_tol")]
    residual_tol: f64,
}

fn default_factorization_tol() -> f64 {
    1e-10
}
fn default_residual_tol() -> f64 {
    1e-8
}

impl Default for TolerancesSection {
    fn default() -> Self {
        Self {
            factorization_tol: default_factorization_tol(),
            residual_tol: default_residual_tol(),
        }
    }
}

/// Parse and validate a JSON run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let file: ConfigFile =
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;

    let band = file.truncation.band;
    if band < 1 {
        return Err(Error::Config("truncation.band must be >= 1".into()));
    }
    let required = 2 * band + 2;
    if file.truncation.fft_samples < required {
        return Err(Error::Config(format!(
            "truncation.fft_samples < 2*band+2 (band {band} needs {required}, got {})",
            file.truncation.fft_samples
        )));
    }
    if file.check.n.is_empty() {
        return Err(Error::Config("check.n must be a nonempty array".into()));
    }
    if file.tolerances.factorization_tol <= 0.0 || file.tolerances.residual_tol <= 0.0 {
        return Err(Error::Config("tolerances must be positive".into()));
    }

    let check_kind: CheckKind = file.check.kind.parse()?;
    let lambdas: Vec<Complex64> = file
        .check
        .lambda
        .iter()
        .map(|&(re, im)| Complex64::new(re, im))
        .collect();
    if check_kind == CheckKind::LambdaSweep && lambdas.is_empty() {
        return Err(Error::Config(
            "check.lambda must be nonempty for lambda_sweep".into(),
        ));
    }

    let symbol = match file.symbol {
        SymbolSection::LogCoeffs { coeffs } => {
            SymbolSpec::LogCoeffs(convert_scalar_coeffs(&coeffs, band)?)
        }
        SymbolSection::Coeffs { coeffs } => {
            if coeffs.is_empty() {
                return Err(Error::Config("symbol.coeffs must be nonempty".into()));
            }
            SymbolSpec::Coeffs(convert_scalar_coeffs(&coeffs, band)?)
        }
        SymbolSection::Rational {
            plus_zeros,
            plus_poles,
            minus_zeros,
            minus_poles,
        } => {
            let conv = |v: &[(f64, f64)]| -> Result<Vec<Complex64>> {
                v.iter()
                    .map(|&(re, im)| {
                        let a = Complex64::new(re, im);
                        if a.norm() >= 1.0 {
                            Err(Error::Config(format!(
                                "rational parameter {a} must have modulus < 1"
                            )))
                        } else {
                            Ok(a)
                        }
                    })
                    .collect()
            };
            SymbolSpec::Rational {
                plus_zeros: conv(&plus_zeros)?,
                plus_poles: conv(&plus_poles)?,
                minus_zeros: conv(&minus_zeros)?,
                minus_poles: conv(&minus_poles)?,
            }
        }
        SymbolSection::BlockFactorFirst {
            dim,
            factor_band,
            scale,
            seed,
        } => {
            if dim < 1 || factor_band < 1 {
                return Err(Error::Config(
                    "block_factor_first needs dim >= 1 and factor_band >= 1".into(),
                ));
            }
            if scale <= 0.0 || scale >= 0.5 || scale.is_nan() {
                return Err(Error::Config(
                    "block_factor_first scale must lie in (0, 0.5) for the \
                     perturbative factorization regime"
                        .into(),
                ));
            }
            SymbolSpec::BlockFactorFirst {
                dim,
                factor_band,
                scale,
                seed,
            }
        }
        SymbolSection::BlockExplicit {
            dim,
            phi,
            psi_minus,
            psi_plus,
        } => {
            if dim < 1 {
                return Err(Error::Config("block_explicit needs dim >= 1".into()));
            }
            SymbolSpec::BlockExplicit {
                dim,
                phi,
                psi_minus,
                psi_plus,
            }
        }
    };

    let block_kind = check_kind == CheckKind::BlockBo;
    if block_kind != symbol.is_block() {
        return Err(Error::Config(format!(
            "check kind '{}' is incompatible with the '{}' symbol kind",
            check_kind.as_str(),
            if symbol.is_block() { "block" } else { "scalar" }
        )));
    }

    Ok(RunConfig {
        symbol,
        params: CheckParams {
            band,
            fft_samples: file.truncation.fft_samples,
            section_cap: file.truncation.section_cap,
            factorization_tol: file.tolerances.factorization_tol,
        },
        check_kind,
        ns: file.check.n,
        lambdas,
        residual_tol: file.tolerances.residual_tol,
        output: PathBuf::from(file.output.unwrap_or_else(|| "report.csv".into())),
    })
}

fn convert_scalar_coeffs(coeffs: &[ScalarCoeff], band: usize) -> Result<Vec<(i64, Complex64)>> {
    for &(k, ..) in coeffs {
        if k.unsigned_abs() as usize > band {
            return Err(Error::Config(format!(
                "symbol coefficient index {k} exceeds truncation.band {band}"
            )));
        }
    }
    Ok(coeffs
        .iter()
        .map(|&(k, re, im)| (k, Complex64::new(re, im)))
        .collect())
}
