//! Distributional checks of the conditioned sampler against exact laws.

mod common;

use std::collections::BTreeMap;

use refined_dt::expand::expand_m_delta_laurent;
use refined_dt::partitions::joint_counts;
use refined_dt::sampler::{chi_square, sample_conditioned, SamplerConfig};
use statrs::distribution::{ChiSquared, ContinuousCDF};

const ALPHA: f64 = 0.01;

fn critical(dof: usize) -> f64 {
    ChiSquared::new(dof as f64)
        .unwrap()
        .inverse_cdf(1.0 - ALPHA)
}

fn chi_square_against<K: Ord + Copy>(
    observed: &BTreeMap<K, u64>,
    exact: &BTreeMap<K, f64>,
) -> (f64, usize) {
    assert!(
        observed.keys().all(|k| exact.contains_key(k)),
        "sample outside the support"
    );
    let obs: Vec<u64> = exact
        .keys()
        .map(|k| observed.get(k).copied().unwrap_or(0))
        .collect();
    let probs: Vec<f64> = exact.values().copied().collect();
    chi_square(&obs, &probs, 5.0)
}

#[test]
fn brute_force_joint_law_matches_library_enumerator() {
    for n in 0..=8 {
        assert_eq!(common::brute_joint(n), joint_counts(n).unwrap(), "n={n}");
    }
}

#[test]
fn laurent_expansion_encodes_trace_and_statistic() {
    // With δ = 2n+1 > max |stat|, the exponent δ·tr + stat decodes uniquely.
    for n in 1..=8usize {
        let delta = 2 * n as i64 + 1;
        let series = expand_m_delta_laurent(delta, n);
        let mut decoded = BTreeMap::new();
        for (e, c) in series.coeff(n).terms() {
            let tr = (e + n as i64).div_euclid(delta);
            let stat = e - delta * tr;
            decoded.insert((tr as u64, stat), c.to_string().parse::<u64>().unwrap());
        }
        assert_eq!(decoded, common::brute_joint(n), "n={n}");
    }
}

#[test]
fn trace_proxy_and_statistic_have_the_exact_joint_law() {
    let n = 6;
    let run = sample_conditioned(&SamplerConfig::new(n).with_seed(11).with_target(60_000)).unwrap();
    let exact = common::brute_joint(n as usize);
    let total: u64 = exact.values().sum();
    let exact: BTreeMap<_, _> = exact
        .into_iter()
        .map(|(k, c)| (k, c as f64 / total as f64))
        .collect();
    let mut observed = BTreeMap::new();
    for r in &run.records {
        assert_eq!(r.size, n);
        *observed.entry((r.trace_proxy, r.stat)).or_insert(0u64) += 1;
    }
    let (stat, dof) = chi_square_against(&observed, &exact);
    assert!(stat < critical(dof), "χ²={stat} dof={dof}");
}

#[test]
fn statistic_law_is_exact_for_small_sizes() {
    for n in 2..=8u64 {
        let run = sample_conditioned(&SamplerConfig::new(n).with_seed(100 + n).with_target(20_000))
            .unwrap();
        let exact = common::brute_stat_pmf(n as usize);
        let mut observed = BTreeMap::new();
        for r in &run.records {
            *observed.entry(r.stat).or_insert(0u64) += 1;
        }
        let (stat, dof) = chi_square_against(&observed, &exact);
        assert!(stat < critical(dof), "n={n} χ²={stat} dof={dof}");
    }
}

#[test]
fn conditioned_law_does_not_depend_on_radius() {
    let n = 6u64;
    let exact = common::brute_stat_pmf(n as usize);
    let base = SamplerConfig::new(n).radius_n;
    for (i, f) in [0.7, 1.0, 1.4].into_iter().enumerate() {
        let cfg = SamplerConfig::new(n)
            .with_radius(base * f)
            .with_seed(7 + i as u64)
            .with_target(20_000);
        let run = sample_conditioned(&cfg).unwrap();
        let mut observed = BTreeMap::new();
        for r in &run.records {
            *observed.entry(r.stat).or_insert(0u64) += 1;
        }
        let (stat, dof) = chi_square_against(&observed, &exact);
        assert!(
            stat < critical(dof),
            "radius factor {f}: χ²={stat} dof={dof}"
        );
    }
}

#[test]
fn odd_sample_moments_vanish_within_error() {
    let run = sample_conditioned(&SamplerConfig::new(40).with_seed(3).with_target(40_000)).unwrap();
    let xs: Vec<f64> = run.records.iter().map(|r| r.stat as f64).collect();
    let len = xs.len() as f64;
    for k in [1, 3] {
        let vals: Vec<f64> = xs.iter().map(|x| x.powi(k)).collect();
        let mean = vals.iter().sum::<f64>() / len;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (len - 1.0);
        let se = (var / len).sqrt();
        assert!(mean.abs() < 3.0 * se, "k={k} mean={mean} se={se}");
    }
}

#[test]
fn workers_partition_the_target_deterministically() {
    let cfg = SamplerConfig::new(30)
        .with_seed(5)
        .with_target(1001)
        .with_workers(3);
    let a = sample_conditioned(&cfg).unwrap();
    let b = sample_conditioned(&cfg).unwrap();
    assert_eq!(a.records, b.records);
    let per: Vec<usize> = (0..3)
        .map(|w| a.records.iter().filter(|r| r.worker == w).count())
        .collect();
    assert_eq!(per, vec![334, 334, 333]);
    assert!(a
        .records
        .windows(2)
        .all(|w| (w[0].worker, w[0].counter) < (w[1].worker, w[1].counter)));
}
