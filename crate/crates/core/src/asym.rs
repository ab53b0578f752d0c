//! Closed-form asymptotics: limit-law parameters, Wright's formula for the
//! number of plane partitions, the moment asymptotics, the major-arc model
//! of `M(e^{-y})`, the leading Mellin term of `F_2`, and the saddle radius.
//!
//! The probes on the real axis use `t = e^{-y}` with `y = 1/N > 0`.

use std::f64::consts::{LN_2, PI};

use num_bigint::{BigInt, Sign};
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::expand::TSeries;

/// The special values everything else is built from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Constants {
    pub zeta2: f64,
    pub zeta3: f64,
    pub zeta_prime_minus1: f64,
    pub euler_gamma: f64,
}

pub const CONSTANTS: Constants = Constants {
    zeta2: PI * PI / 6.0,
    zeta3: 1.202_056_903_159_594_3,
    zeta_prime_minus1: -0.165_421_143_700_450_93,
    euler_gamma: 0.577_215_664_901_532_9,
};

/// `(μ, σ²)` of the Gaussian limit of `δ w₀ + w₊ - w₋` after centring by
/// `μ n^{2/3}` and scaling by `n^{2/3}`:
/// `μ = δ ζ(2) / (2ζ(3))^{2/3}`, `σ² = (2ζ(3))^{-1/3}`.
pub fn theorem1_params(delta: f64) -> (f64, f64) {
    debug_assert!(delta >= 0.0);
    let c = &CONSTANTS;
    let two_z3 = 2.0 * c.zeta3;
    (
        delta * c.zeta2 / two_z3.powf(2.0 / 3.0),
        two_z3.powf(-1.0 / 3.0),
    )
}

/// `σ²` alone.
pub fn limit_variance() -> f64 {
    theorem1_params(0.0).1
}

/// Mean and standard-deviation constants of the trace `w₀`:
/// `a = ζ(2)/(2ζ(3))^{2/3}`, `b = √(1/3) / (2ζ(3))^{1/3}`.
pub fn km_params() -> (f64, f64) {
    let two_z3 = 2.0 * CONSTANTS.zeta3;
    (
        CONSTANTS.zeta2 / two_z3.powf(2.0 / 3.0),
        (1.0_f64 / 3.0).sqrt() / two_z3.powf(1.0 / 3.0),
    )
}

/// Exponential rate `3 (ζ(3)/4)^{1/3}` in Wright's formula.
pub fn wright_rate() -> f64 {
    3.0 * (CONSTANTS.zeta3 / 4.0).cbrt()
}

/// Natural log of Wright's asymptotic for the number of plane partitions,
/// `ζ(3)^{7/36} 2^{-11/36} (3π)^{-1/2} n^{-25/36} exp(3(ζ(3)/4)^{1/3} n^{2/3} + ζ'(-1))`.
pub fn ln_wright_pn(n: f64) -> f64 {
    let c = &CONSTANTS;
    (7.0 / 36.0) * c.zeta3.ln()
        - (11.0 / 36.0) * LN_2
        - 0.5 * (3.0 * PI).ln()
        - (25.0 / 36.0) * n.ln()
        + wright_rate() * (n.powf(4.0 / 3.0)).sqrt()
        + c.zeta_prime_minus1
}

/// Wright's asymptotic itself; overflows to infinity past `n ≈ 10^5`, use
/// [`ln_wright_pn`] there.
pub fn wright_pn(n: f64) -> f64 {
    ln_wright_pn(n).exp()
}

/// `(k-1)!!`, with `(-1)!! = 1`.
pub fn double_factorial_odd(k: u32) -> f64 {
    let mut acc = 1.0;
    let mut j = k as i64 - 1;
    while j > 1 {
        acc *= j as f64;
        j -= 2;
    }
    acc
}

/// `ln` of the asymptotic `∂^k p_n(1) ~ n^{2k/3} (k-1)!! (2ζ(3))^{-k/6} wright_pn(n)`.
/// `None` for odd `k`, where the prediction is exactly zero.
pub fn ln_moment_asym(n: f64, k: u32) -> Option<f64> {
    if k % 2 == 1 {
        return None;
    }
    let k_f = k as f64;
    Some(
        (2.0 * k_f / 3.0) * n.ln() + double_factorial_odd(k).ln()
            - (k_f / 6.0) * (2.0 * CONSTANTS.zeta3).ln()
            + ln_wright_pn(n),
    )
}

/// The moment asymptotic in linear scale; exactly `0.0` for odd `k`.
pub fn moment_asym(n: f64, k: u32) -> f64 {
    ln_moment_asym(n, k).map_or(0.0, f64::exp)
}

/// Saddle radius `N = (n / 2ζ(3))^{1/3}`.
pub fn saddle_n(n: f64) -> f64 {
    (n / (2.0 * CONSTANTS.zeta3)).cbrt()
}

/// Inverse of [`saddle_n`]: `n = 2ζ(3) N³`.
pub fn size_at_radius(radius: f64) -> f64 {
    2.0 * CONSTANTS.zeta3 * radius.powi(3)
}

/// Small-`y` expansion of `F_2(e^{-y})`: the leading `2ζ(3) y^{-4}`, plus
/// (when `include_subleading`) the `y^{-2}` coefficient `-2γΓ(2)ζ(-1)/3`.
///
/// The subleading term is experimental: the double pole at `s = 2` admits
/// other readings, and a direct residue computation gives a `log y` term as
/// well. Only the leading term is relied on.
pub fn f2_mellin_approx(y: f64, include_subleading: bool) -> f64 {
    let c = &CONSTANTS;
    let lead = 2.0 * c.zeta3 * y.powi(-4);
    if include_subleading {
        let zeta_minus1 = -1.0 / 12.0;
        lead - 2.0 * c.euler_gamma * zeta_minus1 / 3.0 * y.powi(-2)
    } else {
        lead
    }
}

/// `ln` of the major-arc model `e^{ζ'(-1)} y^{1/12} e^{ζ(3)/y²}`.
pub fn ln_major_arc_m(y: f64) -> f64 {
    CONSTANTS.zeta_prime_minus1 + y.ln() / 12.0 + CONSTANTS.zeta3 / (y * y)
}

/// Major-arc model of `M(e^{-y})` on the positive real axis.
pub fn major_arc_m(y: f64) -> f64 {
    ln_major_arc_m(y).exp()
}

/// Checks `Σ_{k<m} (1 + 2k - m)² = m(m² - 1)/3` in exact integers.
pub fn f2_identity_check(m: u64) -> bool {
    let lhs: u128 = crate::expand::squared_exponent_sum(m);
    let m = m as u128;
    3 * lhs == m * (m * m - 1)
}

/// Natural log of a positive big integer, from its bit length and leading
/// 64 bits. Returns `-inf` for zero and `NaN` for negatives.
pub fn ln_bigint(x: &BigInt) -> f64 {
    match x.sign() {
        Sign::NoSign => f64::NEG_INFINITY,
        Sign::Minus => f64::NAN,
        Sign::Plus => {
            let shift = x.bits().saturating_sub(64);
            let top = (x >> shift).to_f64().expect("64-bit value fits f64");
            top.ln() + shift as f64 * LN_2
        }
    }
}

/// `ln Σ_{n ≤ n_max} a_n e^{-n y}` for a series with non-negative terms,
/// summed in log space.
pub fn ln_eval_at_exp(series: &TSeries<f64>, y: f64) -> f64 {
    let logs: Vec<f64> = series
        .iter()
        .filter(|(_, a)| **a > 0.0)
        .map(|(n, a)| a.ln() - n as f64 * y)
        .collect();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + logs.iter().map(|l| (l - max).exp()).sum::<f64>().ln()
}
