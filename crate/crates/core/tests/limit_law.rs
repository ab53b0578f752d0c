//! Finite-n approach to the Gaussian limit law.

use refined_dt::expand::expand_m_delta_laurent;
use refined_dt::moments::{convergence_report, distribution_table, ks_distance, MomentSource};
use refined_dt::sampler::{acceptance_rate_estimate, SamplerConfig};

#[test]
fn ks_distance_shrinks_with_n() {
    let series = expand_m_delta_laurent(0, 200);
    let d: Vec<f64> = [20, 50, 100, 200]
        .iter()
        .map(|&n| {
            ks_distance(&distribution_table(n, 0, MomentSource::Laurent(series.coeff(n))).unwrap())
                .unwrap()
        })
        .collect();
    assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
}

#[test]
fn twisted_tables_are_centred_on_their_own_mean() {
    let series = expand_m_delta_laurent(3, 60);
    let t = distribution_table(60, 3, MomentSource::Laurent(series.coeff(60))).unwrap();
    assert!(t.mean > 0.0);
    let d = ks_distance(&t).unwrap();
    assert!(d > 0.0 && d < 0.5);
}

#[test]
fn moment_errors_shrink_over_doubling() {
    let reports = convergence_report(2, &[512, 1024, 2048]).unwrap();
    assert!(reports.windows(2).all(|w| w[1].abs_error < w[0].abs_error));
    let odd = convergence_report(3, &[10, 100]).unwrap();
    assert!(odd.iter().all(|r| r.raw.is_zero()));
}

#[test]
fn acceptance_rate_falls_with_n() {
    let rates: Vec<f64> = [100u64, 1000, 10_000]
        .iter()
        .map(|&n| acceptance_rate_estimate(&SamplerConfig::new(n).with_seed(9), 20_000))
        .collect();
    assert!(rates.windows(2).all(|w| w[1] < w[0]), "{rates:?}");
}
