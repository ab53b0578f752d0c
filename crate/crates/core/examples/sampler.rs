//! Samples the statistic on uniform plane partitions of a fixed large size
//! and compares the sample variance with the exact second moment.
//!
//!     cargo run --release --example sampler -- [n] [samples] [workers]

use refined_dt::expand::expand_m_delta_float_jet;
use refined_dt::sampler::{sample_conditioned, SamplerConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let n: u64 = args.next().map_or(10_000, |s| s.parse().expect("n"));
    let samples: usize = args.next().map_or(2000, |s| s.parse().expect("samples"));
    let workers: usize = args.next().map_or(1, |s| s.parse().expect("workers"));

    let config = SamplerConfig::new(n)
        .with_seed(2024)
        .with_target(samples)
        .with_workers(workers);
    println!("config: {}", config.to_json());
    let run = sample_conditioned(&config).unwrap();
    let s = run.summary();
    println!(
        "accepted {} of {} attempts (rate {:.4})",
        s.accepted, s.attempts, s.acceptance_rate
    );
    println!("mean of stat / n^(2/3):     {:+.5}", s.mean);
    println!(
        "variance of stat / n^(2/3): {:.5} ± {:.5}",
        s.variance, s.variance_std_error
    );

    let exact = expand_m_delta_float_jet(0, n as usize, 2)
        .coeff(n as usize)
        .moment_ratio(2)
        * (n as f64).powf(-4.0 / 3.0);
    println!("exact second moment:        {exact:.5}");
    println!("limit variance:             {:.5}", s.sigma2);
    let tr: f64 = run
        .records
        .iter()
        .map(|r| r.trace_proxy as f64)
        .sum::<f64>()
        / run.records.len() as f64;
    println!(
        "mean trace / n^(2/3):       {:.5}",
        tr * (n as f64).powf(-2.0 / 3.0)
    );
}
