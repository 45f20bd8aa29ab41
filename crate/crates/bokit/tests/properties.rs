//! Property tests for the series layer: sampling round trips, convolution
//! algebra, winding numbers, and log/exp inversion.

use num_complex::Complex64;
use proptest::prelude::*;

use bokit::factorization::exp_series;
use bokit::symbol::{coeffs_from_samples, convolve, log_symbol, winding_number, LaurentSeries};

fn small_complex() -> impl Strategy<Value = Complex64> {
    ((-100i32..=100), (-100i32..=100))
        .prop_map(|(re, im)| Complex64::new(re as f64 / 250.0, im as f64 / 250.0))
}

fn scalar_series(band: usize) -> impl Strategy<Value = LaurentSeries> {
    proptest::collection::vec(small_complex(), 2 * band + 1).prop_map(move |entries| {
        let mut s = LaurentSeries::zeros(1, band);
        for (i, v) in entries.into_iter().enumerate() {
            s.set_scalar(i as i64 - band as i64, v);
        }
        s
    })
}

fn block_series(band: usize) -> impl Strategy<Value = LaurentSeries> {
    proptest::collection::vec(small_complex(), 4 * (2 * band + 1)).prop_map(move |entries| {
        let mut s = LaurentSeries::zeros(2, band);
        for (i, chunk) in entries.chunks(4).enumerate() {
            s.set_block(i as i64 - band as i64, chunk);
        }
        s
    })
}

proptest! {
    #[test]
    fn sampling_round_trips_scalar_series(s in scalar_series(6)) {
        let n = 2 * 6 + 2;
        let back = coeffs_from_samples(&s.sample(n), 6).unwrap();
        prop_assert!(back.sub(&s).unwrap().norm() < 1e-13);
    }

    #[test]
    fn sampling_round_trips_block_series(s in block_series(4)) {
        let back = coeffs_from_samples(&s.sample(16), 4).unwrap();
        prop_assert!(back.sub(&s).unwrap().norm() < 1e-13);
    }

    #[test]
    fn convolution_is_associative_with_unit(
        a in scalar_series(3),
        b in scalar_series(3),
        cc in scalar_series(3),
    ) {
        let full = 9;
        let (ab, _) = convolve(&a, &b, 6).unwrap();
        let (ab_c, _) = convolve(&ab, &cc, full).unwrap();
        let (bc, _) = convolve(&b, &cc, 6).unwrap();
        let (a_bc, _) = convolve(&a, &bc, full).unwrap();
        prop_assert!(ab_c.sub(&a_bc).unwrap().norm() < 1e-12);

        let one = LaurentSeries::scalar_one();
        let (ua, _) = convolve(&one, &a, 3).unwrap();
        prop_assert!(ua.sub(&a).unwrap().norm() < 1e-15);
    }

    #[test]
    fn winding_counts_the_harmonic_power(k in -3i64..=3) {
        let n = 64;
        let samples: Vec<Complex64> = (0..n)
            .map(|j| {
                let w = Complex64::from_polar(
                    1.0,
                    2.0 * std::f64::consts::PI * j as f64 / n as f64,
                );
                w.powi(k as i32) * (2.0 + 0.25 * (w + w.inv()))
            })
            .collect();
        prop_assert_eq!(winding_number(&samples).unwrap(), k);
    }

    #[test]
    fn log_inverts_exp_on_analytic_symbols(
        coeffs in proptest::collection::vec(small_complex(), 6),
    ) {
        // a plus-supported with a_0 = 0; phi = exp(a) is analytic and
        // nonvanishing, so log_symbol must recover a.
        let mut a = LaurentSeries::zeros(1, 6);
        for (i, v) in coeffs.into_iter().enumerate() {
            a.set_scalar(i as i64 + 1, v * 0.5);
        }
        let phi = exp_series(&a, 32).unwrap();
        let (log, mean) = log_symbol(&phi, 128, 32).unwrap();
        prop_assert!((mean - Complex64::ONE).norm() < 1e-10);
        prop_assert!(log.sub(&a).unwrap().norm() < 1e-10);
    }
}
