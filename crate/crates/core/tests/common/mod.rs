//! Reference values built without the library: plain series for ζ(2), ζ(3),
//! a fixed-point Glaisher–Kinkelin limit for ζ'(-1), and exact pmfs.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// ζ(2) = 3 Σ 1/(k² C(2k,k)).
pub fn zeta2() -> f64 {
    let mut sum = 0.0;
    let mut central = 1.0_f64;
    for k in 1..60u32 {
        let k = k as f64;
        central *= (4.0 * k - 2.0) / k;
        sum += 1.0 / (k * k * central);
    }
    3.0 * sum
}

/// ζ(3) = (5/2) Σ (-1)^{k+1} / (k³ C(2k,k)).
pub fn zeta3() -> f64 {
    let mut sum = 0.0;
    let mut central = 1.0_f64;
    for k in 1..60u32 {
        let kf = k as f64;
        central *= (4.0 * kf - 2.0) / kf;
        let term = 1.0 / (kf * kf * kf * central);
        sum += if k % 2 == 1 { term } else { -term };
    }
    2.5 * sum
}

const DIGITS: u32 = 60;

fn scale() -> BigInt {
    BigInt::from(10).pow(DIGITS)
}

/// 2 atanh(z) for fixed-point z with |z| ≤ 1/3.
fn two_atanh(z: &BigInt, s: &BigInt) -> BigInt {
    let z2 = z * z / s;
    let mut power = z.clone();
    let mut sum = BigInt::zero();
    let mut j = 1u32;
    while !power.is_zero() {
        sum += &power / j;
        power = &power * &z2 / s;
        j += 2;
    }
    sum * 2
}

/// Fixed-point ln of a positive integer.
fn ln_int(k: u64, s: &BigInt, ln2: &BigInt) -> BigInt {
    let e = 63 - k.leading_zeros() as u64;
    let r = (BigInt::from(k) * s) >> e;
    let z = (&r - s) * s / (&r + s);
    two_atanh(&z, s) + ln2 * e
}

/// ζ'(-1) = 1/12 - ln A, with A the Glaisher–Kinkelin constant as the limit of
/// Σ_{k≤n} k ln k - (n²/2 + n/2 + 1/12) ln n + n²/4, whose error is a
/// series in n^{-2}; Richardson over n = 16, 32, 64, 128.
pub fn zeta_prime_minus1() -> f64 {
    let s = scale();
    let ln2 = two_atanh(&(&s / 3), &s);
    let approx = |n: u64| -> BigInt {
        let mut acc = BigInt::zero();
        for k in 2..=n {
            acc += ln_int(k, &s, &ln2) * k;
        }
        let ln_n = ln_int(n, &s, &ln2);
        acc - ln_n * (6 * n * n + 6 * n + 1) / 12 + &s * (n * n) / 4
    };
    let mut level: Vec<BigInt> = [16u64, 32, 64, 128].iter().map(|&n| approx(n)).collect();
    let mut factor = BigInt::one();
    while level.len() > 1 {
        factor *= 4;
        let denom = &factor - 1;
        level = level
            .windows(2)
            .map(|w| (&w[1] * &factor - &w[0]) / &denom)
            .collect();
    }
    let zp: BigInt = &s / 12 - &level[0];
    let sign = if zp.is_negative() { -1.0 } else { 1.0 };
    let mag = zp.abs() * BigInt::from(10).pow(18) / s;
    sign * mag.to_f64().unwrap() / 1e18
}

/// Limit variance (2ζ(3))^{-1/3} from the series value of ζ(3).
pub fn limit_variance() -> f64 {
    (2.0 * zeta3()).powf(-1.0 / 3.0)
}

/// Exact pmf of the statistic at size `n` from a brute-force walk over
/// plane partitions that does not use the library enumerator.
pub fn brute_stat_pmf(n: usize) -> BTreeMap<i64, f64> {
    let joint = brute_joint(n);
    let total: u64 = joint.values().sum();
    let mut out = BTreeMap::new();
    for (&(_, s), &c) in &joint {
        *out.entry(s).or_insert(0.0) += c as f64 / total as f64;
    }
    out
}

/// Counts of (trace, statistic) over plane partitions of size `n`, with
/// trace = Σ diagonal entries. Built by filling cells row by row, each entry
/// bounded by its upper and left neighbours.
pub fn brute_joint(n: usize) -> BTreeMap<(u64, i64), u64> {
    let mut out = BTreeMap::new();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    fill(n as u32, &mut rows, &mut out);
    out
}

fn record(rows: &[Vec<u32>], out: &mut BTreeMap<(u64, i64), u64>) {
    let (mut tr, mut stat) = (0u64, 0i64);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if i == j {
                tr += v as u64;
            } else if j > i {
                stat += v as i64;
            } else {
                stat -= v as i64;
            }
        }
    }
    *out.entry((tr, stat)).or_insert(0) += 1;
}

fn fill(left: u32, rows: &mut Vec<Vec<u32>>, out: &mut BTreeMap<(u64, i64), u64>) {
    if left == 0 {
        record(rows, out);
        return;
    }
    // Open a new row; its first entry is bounded by the row above.
    let bound = rows.last().map_or(left, |r| r[0].min(left));
    for v in 1..=bound {
        rows.push(vec![v]);
        extend(left - v, rows, out);
        rows.pop();
    }
}

fn extend(left: u32, rows: &mut Vec<Vec<u32>>, out: &mut BTreeMap<(u64, i64), u64>) {
    fill(left, rows, out);
    if left == 0 {
        return;
    }
    let i = rows.len() - 1;
    let j = rows[i].len();
    let mut bound = rows[i][j - 1].min(left);
    if i > 0 {
        match rows[i - 1].get(j) {
            Some(&up) => bound = bound.min(up),
            None => return,
        }
    }
    for v in 1..=bound {
        rows[i].push(v);
        extend(left - v, rows, out);
        rows[i].pop();
    }
}
