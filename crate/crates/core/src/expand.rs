//! Truncated t-series expansion of `M_δ(t, q) = Π_{m≥1} Π_{k<m} 1/(1 - q^{δ+2k+1-m} t^m)`.
//!
//! Two routes:
//!
//! - the product route applies each geometric factor in place with the
//!   prefix recurrence `a'_n = a_n + w · a'_{n-m}` (ascending `n`); it works
//!   over any [`CoeffRing`] but costs about `N³/6` ring operations in total;
//! - the logarithmic-derivative route uses `n a_n = Σ_{k=1}^n c_k a_{n-k}`,
//!   where `t d/dt log M_δ = Σ c_k t^k`, and costs `N²/2` multiplications;
//!   it needs a [`PowerSumRing`] (jets, `BigInt`, `f64`).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::qseries::{
    CoeffRing, DenseLaurent, ExponentUnit, FloatJet, LaurentPoly, MomentJet, PowerSumRing,
};

/// Power series in `t` truncated after `t^{n_max}`, coefficients in `R`.
#[derive(Clone, Debug, PartialEq)]
pub struct TSeries<R> {
    coeffs: Vec<R>,
}

impl<R: CoeffRing> TSeries<R> {
    /// The constant series `1`.
    pub fn one(ctx: &R::Ctx, n_max: usize) -> Self {
        let mut coeffs = vec![R::zero_in(ctx); n_max + 1];
        coeffs[0] = R::one_in(ctx);
        TSeries { coeffs }
    }
}

impl<R> TSeries<R> {
    pub fn from_coeffs(coeffs: Vec<R>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series has at least t^0");
        TSeries { coeffs }
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^n`.
    pub fn coeff(&self, n: usize) -> &R {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &R)> {
        self.coeffs.iter().enumerate()
    }

    /// Truncation to `t^{n_max}` with `n_max ≤ self.n_max()`.
    pub fn restrict(&self, n_max: usize) -> Self
    where
        R: Clone,
    {
        assert!(n_max <= self.n_max());
        TSeries {
            coeffs: self.coeffs[..=n_max].to_vec(),
        }
    }

    pub fn map<S>(&self, f: impl FnMut(&R) -> S) -> TSeries<S> {
        TSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

/// Multiplies `s` by `Σ_{j≥0} w^j t^{jm}`, truncated at `s.n_max()`.
pub fn mul_geometric_factor<R: CoeffRing>(mut s: TSeries<R>, w: &R, m: usize) -> TSeries<R> {
    assert!(m >= 1, "period must be at least 1");
    for n in m..s.coeffs.len() {
        let (lo, hi) = s.coeffs.split_at_mut(n);
        hi[0].add_product_assign(w, &lo[n - m]);
    }
    s
}

/// Same as [`mul_geometric_factor`] with `w = q^e`, in place.
fn apply_monomial_factor<R: CoeffRing>(coeffs: &mut [R], ctx: &R::Ctx, e: i64, m: usize) {
    for n in m..coeffs.len() {
        let (lo, hi) = coeffs.split_at_mut(n);
        hi[0].add_monomial_product_assign(ctx, e, &lo[n - m]);
    }
}

/// Exponent of `q` in factor `(m, k)`: `δ + 2k + 1 - m`.
pub fn factor_exponent(delta: i64, m: usize, k: usize) -> i64 {
    delta + 2 * k as i64 + 1 - m as i64
}

/// Expands `M_δ(t, q)` to order `n_max` over the ring `R` by the product
/// route.
///
/// Factors with `m > n_max` cannot touch the truncation and are skipped.
/// Factors are applied with `m` ascending, then `k` ascending.
pub fn expand_m_delta<R: CoeffRing>(delta: i64, n_max: usize, ctx: &R::Ctx) -> TSeries<R> {
    let mut s = TSeries::one(ctx, n_max);
    for m in 1..=n_max {
        for k in 0..m {
            apply_monomial_factor(&mut s.coeffs, ctx, factor_exponent(delta, m, k), m);
        }
    }
    s
}

/// `M_δ(t, q)` with exact Laurent coefficients in whole powers of `q`.
pub fn expand_m_delta_laurent(delta: i64, n_max: usize) -> TSeries<LaurentPoly> {
    expand_dense(delta, n_max, ExponentUnit::Whole)
}

/// `M_δ(t, q^{1/2})`: exponents stored in units of `q^{1/2}`. With `δ = 3`
/// the coefficients are the refined DT invariants of `C^3`.
pub fn expand_m_delta_half(delta: i64, n_max: usize) -> TSeries<LaurentPoly> {
    expand_dense(delta, n_max, ExponentUnit::Half)
}

fn expand_dense(delta: i64, n_max: usize, unit: ExponentUnit) -> TSeries<LaurentPoly> {
    expand_m_delta::<DenseLaurent>(delta, n_max, &unit).map(DenseLaurent::to_sparse)
}

/// Power sums `Σ_{k<m} (δ + 1 - m + 2k)^j` for `j < len`.
fn factor_power_sums(delta: i64, m: usize, len: usize) -> Vec<BigInt> {
    let exps = (0..m).map(|k| factor_exponent(delta, m, k));
    let mut small = vec![0i128; len];
    let mut ok = true;
    'outer: for e in exps.clone() {
        let mut p: i128 = 1;
        for (j, slot) in small.iter_mut().enumerate() {
            if j > 0 {
                match p.checked_mul(e as i128) {
                    Some(v) => p = v,
                    None => {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            match slot.checked_add(p) {
                Some(v) => *slot = v,
                None => {
                    ok = false;
                    break 'outer;
                }
            }
        }
    }
    if ok {
        return small.into_iter().map(BigInt::from).collect();
    }
    let mut sums = vec![BigInt::zero(); len];
    for e in exps {
        let e = BigInt::from(e);
        let mut p = BigInt::one();
        for (j, slot) in sums.iter_mut().enumerate() {
            if j > 0 {
                p *= &e;
            }
            *slot += &p;
        }
    }
    sums
}

/// Power sums of the coefficients of `t d/dt log M_δ(t, q) = Σ_k c_k(q) t^k`,
/// `c_k = Σ_{m | k} m Σ_{i<m} q^{(k/m)(δ+2i+1-m)}`, for `k ≤ n_max`, `j < len`.
/// Entry `0` is the zero vector.
pub fn log_derivative_power_sums(delta: i64, n_max: usize, len: usize) -> Vec<Vec<BigInt>> {
    let mut c = vec![vec![BigInt::zero(); len]; n_max + 1];
    for m in 1..=n_max {
        let s = factor_power_sums(delta, m, len);
        for r in 1..=n_max / m {
            let target = &mut c[r * m];
            let mut rp = BigInt::from(m);
            for (j, slot) in target.iter_mut().enumerate() {
                if j > 0 {
                    rp *= r;
                }
                if !s[j].is_zero() {
                    *slot += &rp * &s[j];
                }
            }
        }
    }
    c
}

/// Expands `M_δ(t, q)` to order `n_max` by the logarithmic-derivative route.
pub fn expand_m_delta_power_sums<R: PowerSumRing>(
    delta: i64,
    n_max: usize,
    ctx: &R::Ctx,
) -> TSeries<R> {
    let len = R::power_sum_len(ctx);
    let mults: Vec<R::Multiplier> = log_derivative_power_sums(delta, n_max, len)
        .iter()
        .map(|s| R::multiplier(ctx, s))
        .collect();
    let mut coeffs: Vec<R> = Vec::with_capacity(n_max + 1);
    coeffs.push(R::one_in(ctx));
    for n in 1..=n_max {
        let mut acc = R::zero_in(ctx);
        for k in 1..=n {
            acc.add_multiplier_product(&mults[k], &coeffs[n - k]);
        }
        acc.div_index(n as u64);
        coeffs.push(acc);
    }
    TSeries { coeffs }
}

/// Exact moment jets of order `order` of every coefficient up to `n_max`.
pub fn expand_m_delta_jet(delta: i64, n_max: usize, order: usize) -> TSeries<MomentJet> {
    expand_m_delta_power_sums(delta, n_max, &order)
}

/// Floating-point moment jets, for sizes beyond the exact route's budget.
pub fn expand_m_delta_float_jet(delta: i64, n_max: usize, order: usize) -> TSeries<FloatJet> {
    expand_m_delta_power_sums(delta, n_max, &order)
}

/// MacMahon's function `M(t) = Π (1 - t^m)^{-m}`, i.e. `M_δ` at `q = 1`.
/// Use `R = BigInt` for exact counts or `R = f64` for a float expansion.
pub fn expand_macmahon<R>(n_max: usize) -> TSeries<R>
where
    R: PowerSumRing<Ctx = ()>,
{
    expand_m_delta_power_sums(0, n_max, &())
}

/// `F_2(t) = (1/3) Σ_m m(m²-1) t^m / (1 - t^m)^2`, whose coefficient of
/// `t^n` is `(1/3) Σ_{m | n} m(m²-1) · (n/m)`.
pub fn expand_f2(n_max: usize) -> TSeries<BigInt> {
    let mut coeffs = vec![BigInt::zero(); n_max + 1];
    for m in 2..=n_max {
        let mm = m as u128;
        let weight = BigInt::from(mm * (mm * mm - 1) / 3);
        for i in 1..=n_max / m {
            coeffs[i * m] += &weight * i;
        }
    }
    TSeries { coeffs }
}

/// Coefficient of `t^n` in the product `a · b`.
pub fn product_coeff(a: &TSeries<BigInt>, b: &TSeries<BigInt>, n: usize) -> BigInt {
    assert!(n <= a.n_max() && n <= b.n_max());
    (0..=n)
        .filter(|&i| !a.coeffs[i].is_zero())
        .map(|i| &a.coeffs[i] * &b.coeffs[n - i])
        .sum()
}

/// Truncated product of two integer series.
pub fn series_product(a: &TSeries<BigInt>, b: &TSeries<BigInt>) -> TSeries<BigInt> {
    let n_max = a.n_max().min(b.n_max());
    TSeries {
        coeffs: (0..=n_max).map(|n| product_coeff(a, b, n)).collect(),
    }
}

/// `M_2(t) = F_2(t) · M(t)`, whose coefficient of `t^n` is
/// `Σ_{|π| = n} (w_+ - w_-)^2 = (∂^2 p_n)(1)`.
pub fn second_moment_series(n_max: usize) -> TSeries<BigInt> {
    series_product(&expand_f2(n_max), &expand_macmahon::<BigInt>(n_max))
}

/// `Σ_{k=0}^{m-1} (1 + 2k - m)^2`, the inner sum collapsed in `F_2`.
pub fn squared_exponent_sum(m: u64) -> u128 {
    (0..m)
        .map(|k| {
            let e = 1 + 2 * k as i128 - m as i128;
            (e * e) as u128
        })
        .sum()
}
