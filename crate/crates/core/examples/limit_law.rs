//! Exact distribution of the statistic, standardized, with its
//! Kolmogorov–Smirnov distance to the standard normal.
//!
//!     cargo run --release --example limit_law -- [delta] > table.csv

use std::io;

use refined_dt::expand::expand_m_delta_laurent;
use refined_dt::moments::{distribution_table, ks_distance, MomentSource};

fn main() {
    let delta: i64 = std::env::args()
        .nth(1)
        .map_or(0, |s| s.parse().expect("delta"));
    let sizes = [10, 20, 50, 100, 200];
    let series = expand_m_delta_laurent(delta, 200);
    for n in sizes {
        let table = distribution_table(n, delta, MomentSource::Laurent(series.coeff(n))).unwrap();
        eprintln!(
            "n = {n:3}: support {:4} values, mean {:9.4}, sd {:8.4}, KS {:.5}",
            table.support.len(),
            table.mean,
            table.std_dev,
            ks_distance(&table).unwrap()
        );
    }
    let table = distribution_table(100, delta, MomentSource::Laurent(series.coeff(100))).unwrap();
    table.write_csv(io::stdout().lock()).unwrap();
}
