//! Expands M_δ(t, q) three ways: full Laurent coefficients, the refined
//! invariants M_3(t, q^{1/2}), and exact moment jets at a larger size.
//!
//!     cargo run --release --example expand_series -- [delta] [nmax]

use refined_dt::expand::{
    expand_m_delta_half, expand_m_delta_jet, expand_m_delta_laurent, expand_macmahon,
};

fn main() {
    let mut args = std::env::args().skip(1);
    let delta: i64 = args.next().map_or(0, |s| s.parse().expect("delta"));
    let n_max: usize = args.next().map_or(6, |s| s.parse().expect("nmax"));

    println!("[t^n] M_{delta}(t, q):");
    for (n, p) in expand_m_delta_laurent(delta, n_max).iter() {
        println!("  n = {n:2}: {p}");
    }

    println!("\nrefined invariants [t^n] M_3(t, q^(1/2)):");
    for (n, p) in expand_m_delta_half(3, 4).iter() {
        println!("  n = {n}: {p}");
    }

    let counts = expand_macmahon::<num_bigint::BigInt>(100);
    println!("\nplane partitions of 100: {}", counts.coeff(100));

    let jets = expand_m_delta_jet(0, 256, 4);
    let jet = jets.coeff(256);
    println!("derivatives at q = 1 of p_256(q), orders 0..4:");
    for (j, c) in jet.coeffs().iter().enumerate() {
        println!("  {j}: {c}");
    }
}
