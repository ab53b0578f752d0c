//! Normalized moments n^{-2k/3} E[(w+ - w-)^k] from exact jets, against the
//! Gaussian moments, written as CSV to stdout.
//!
//!     cargo run --release --example moment_convergence -- [n_max]

use std::io;

use refined_dt::expand::expand_m_delta_jet;
use refined_dt::moments::{convergence_report_from_jets, write_reports_csv};

fn main() {
    let n_max: usize = std::env::args()
        .nth(1)
        .map_or(1024, |s| s.parse().expect("n_max"));
    let n_list: Vec<usize> = std::iter::successors(Some(16usize), |n| Some(n * 2))
        .take_while(|&n| n <= n_max)
        .collect();
    let jets = expand_m_delta_jet(0, n_max, 6);
    let mut reports = Vec::new();
    for k in [2, 3, 4, 6] {
        reports.extend(convergence_report_from_jets(&jets, k, &n_list).unwrap());
    }
    write_reports_csv(io::stdout().lock(), &reports).unwrap();
}
