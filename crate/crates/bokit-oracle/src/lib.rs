//! Independent brute-force oracles for bokit's tests.
//!
//! These deliberately share no code with the production paths they check:
//! determinants are expanded by cofactors, kernel entries are summed with
//! a literal double loop over the band, and Fourier coefficients come
//! from an O(N^2) direct sum. Compile them into test targets only.

use num_complex::Complex64;

use bokit::{ComplexMatrix, LaurentSeries};

/// Exact cofactor expansion along the first row. Factorial cost; callers
/// must stay at 9x9 or below.
pub fn det_cofactor(m: &ComplexMatrix) -> Complex64 {
    assert!(m.rows() == m.cols(), "square matrices only");
    assert!(m.rows() <= 9, "cofactor expansion capped at 9x9");
    det_rec(m)
}

fn det_rec(m: &ComplexMatrix) -> Complex64 {
    let n = m.rows();
    if n == 0 {
        return Complex64::ONE;
    }
    if n == 1 {
        return m[(0, 0)];
    }
    let mut acc = Complex64::ZERO;
    let mut sign = Complex64::ONE;
    for j in 0..n {
        let a = m[(0, j)];
        if a != Complex64::ZERO {
            let mut minor = ComplexMatrix::zeros(n - 1, n - 1);
            for r in 1..n {
                let mut cc = 0;
                for c in 0..n {
                    if c == j {
                        continue;
                    }
                    minor[(r - 1, cc)] = m[(r, c)];
                    cc += 1;
                }
            }
            acc += sign * a * det_rec(&minor);
        }
        sign = -sign;
    }
    acc
}

/// Kernel section by the literal double sum
/// `K_n(i, j) = sum_{k >= 1} u_{n+i+k} v_{-k-n-j}` over the finite band,
/// without forming the Hankel matrices.
pub fn kernel_bruteforce(
    u: &LaurentSeries,
    v: &LaurentSeries,
    n: usize,
    m: usize,
) -> ComplexMatrix {
    let d = u.dim();
    assert_eq!(d, v.dim());
    let k_max = u.band().max(v.band());
    let mut out = ComplexMatrix::zeros(m * d, m * d);
    for i in 0..m {
        for j in 0..m {
            let mut block = vec![Complex64::ZERO; d * d];
            for k in 1..=k_max as i64 {
                let iu = (n + i) as i64 + k;
                let iv = -k - (n + j) as i64;
                let (Some(bu), Some(bv)) = (u.block(iu), v.block(iv)) else {
                    continue;
                };
                for r in 0..d {
                    for t in 0..d {
                        let a = bu[r * d + t];
                        if a == Complex64::ZERO {
                            continue;
                        }
                        for s in 0..d {
                            block[r * d + s] += a * bv[t * d + s];
                        }
                    }
                }
            }
            out.set_block(i, j, d, &block);
        }
    }
    out
}

/// Fourier coefficients by the O(N^2) direct sum,
/// `c_k = (1/N) sum_j values[j] exp(-2 pi i j k / N)`.
pub fn slow_dft(values: &[ComplexMatrix], band: usize) -> LaurentSeries {
    let n = values.len();
    assert!(n >= 2 * band + 2, "need at least 2*band+2 samples");
    let d = values[0].rows();
    let mut out = LaurentSeries::zeros(d, band);
    for k in -(band as i64)..=(band as i64) {
        let mut block = vec![Complex64::ZERO; d * d];
        for (j, value) in values.iter().enumerate() {
            let angle = -2.0 * std::f64::consts::PI * (j as f64) * (k as f64) / n as f64;
            let w = Complex64::from_polar(1.0, angle);
            for r in 0..d {
                for c in 0..d {
                    block[r * d + c] += value[(r, c)] * w;
                }
            }
        }
        for entry in &mut block {
            *entry /= n as f64;
        }
        out.set_block(k, &block);
    }
    out
}
