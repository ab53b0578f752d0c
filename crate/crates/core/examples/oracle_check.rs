//! Enumerates plane partitions directly, prints their statistics, and checks
//! the weighted count against the product expansion.
//!
//!     cargo run --release --example oracle_check -- [ncap]

use refined_dt::expand::expand_m_delta_laurent;
use refined_dt::partitions::{enumerate, refined_poly_oracle, PlanePartition};

fn main() {
    let n_cap: usize = std::env::args()
        .nth(1)
        .map_or(10, |s| s.parse().expect("ncap"));

    println!("plane partitions of 3 (rows separated by ';'):");
    for p in enumerate(3).unwrap() {
        let s = p.stats();
        println!(
            "  {:8} w0 = {} w+ = {} w- = {}",
            p.to_string(),
            s.w0,
            s.w_plus,
            s.w_minus
        );
    }

    let p: PlanePartition = "4,3,1;2,2;1".parse().unwrap();
    let s = p.stats();
    println!(
        "\n{p}: size {}, statistic {}; transpose {} has statistic {}",
        s.size(),
        s.stat(),
        p.transpose(),
        p.transpose().stats().stat()
    );

    let mut all_ok = true;
    for delta in [0, 1, 3] {
        let series = expand_m_delta_laurent(delta, n_cap);
        for n in 0..=n_cap {
            let ok = series.coeff(n) == &refined_poly_oracle(n, delta).unwrap();
            all_ok &= ok;
            if !ok {
                println!("MISMATCH n = {n}, delta = {delta}");
            }
        }
    }
    println!(
        "\nexpansion vs enumeration for n ≤ {n_cap}, delta ∈ {{0, 1, 3}}: {}",
        if all_ok { "all equal" } else { "FAILED" }
    );
}
