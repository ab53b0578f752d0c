//! Coefficient rings for the t-series expansion engine.
//!
//! Every coefficient of a product expansion lives in one of these rings:
//!
//! - [`LaurentPoly`]: the full Laurent polynomial in `q` (or `q^{1/2}`).
//! - [`MomentJet`]: the exact image of a Laurent polynomial under
//!   `p(q) ↦ (∂^j p)(1)` for `j ≤ K`, with `∂ = q d/dq`.
//! - [`FloatJet`]: the same jet in floating point with a separate
//!   logarithmic scale, for sizes where the exact integers get expensive.
//! - [`num_bigint::BigInt`] and `f64`: the specialization `q = 1`.
//!
//! The engine only ever multiplies by monomials `q^e`, so the trait has a
//! dedicated entry point for that case.

mod float_jet;
mod jet;
mod laurent;

pub use float_jet::FloatJet;
pub use jet::{jet_mul, MomentJet};
pub(crate) use laurent::DenseLaurent;
pub use laurent::{laurent_mul, ExponentUnit, LaurentPoly};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt::Debug;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QSeriesError {
    #[error("jet order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
}

/// A commutative ring that can hold the `t^n` coefficients of `M_δ(t, q)`.
///
/// `Ctx` carries whatever a value needs to be built from scratch: the
/// exponent unit for Laurent polynomials, the order for jets.
pub trait CoeffRing: Clone + Debug + Send + Sync {
    type Ctx: Clone + Debug + Send + Sync;

    fn zero_in(ctx: &Self::Ctx) -> Self;

    fn one_in(ctx: &Self::Ctx) -> Self;

    /// Image of the monomial `q^e`.
    fn monomial_in(ctx: &Self::Ctx, e: i64) -> Self;

    fn add_assign_ref(&mut self, other: &Self);

    fn mul_ref(&self, other: &Self) -> Self;

    /// `self += w * x`.
    fn add_product_assign(&mut self, w: &Self, x: &Self) {
        let p = w.mul_ref(x);
        self.add_assign_ref(&p);
    }

    /// `self += q^e * x`; the hot loop of the expansion.
    fn add_monomial_product_assign(&mut self, ctx: &Self::Ctx, e: i64, x: &Self) {
        let w = Self::monomial_in(ctx, e);
        self.add_product_assign(&w, x);
    }
}

/// Rings whose elements are pinned down by power sums `Σ_e c_e e^j`,
/// `j < power_sum_len`, and that admit division by a positive integer
/// (exact for the integer rings whenever the quotient is integral).
///
/// These are the rings the logarithmic-derivative recurrence runs over.
pub trait PowerSumRing: CoeffRing {
    /// A fixed ring element prepared for repeated multiplication.
    type Multiplier: Send + Sync;

    fn power_sum_len(ctx: &Self::Ctx) -> usize;

    /// The element with power sums `sums[j]`.
    fn multiplier(ctx: &Self::Ctx, sums: &[BigInt]) -> Self::Multiplier;

    /// `self += c · x`.
    fn add_multiplier_product(&mut self, c: &Self::Multiplier, x: &Self);

    /// `self /= n`.
    fn div_index(&mut self, n: u64);
}

impl CoeffRing for BigInt {
    type Ctx = ();

    fn zero_in(_: &()) -> Self {
        BigInt::zero()
    }

    fn one_in(_: &()) -> Self {
        BigInt::one()
    }

    fn monomial_in(_: &(), _e: i64) -> Self {
        BigInt::one()
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn add_monomial_product_assign(&mut self, _: &(), _e: i64, x: &Self) {
        *self += x;
    }
}

impl CoeffRing for f64 {
    type Ctx = ();

    fn zero_in(_: &()) -> Self {
        0.0
    }

    fn one_in(_: &()) -> Self {
        1.0
    }

    fn monomial_in(_: &(), _e: i64) -> Self {
        1.0
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self += *other;
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn add_monomial_product_assign(&mut self, _: &(), _e: i64, x: &Self) {
        *self += *x;
    }
}

impl PowerSumRing for BigInt {
    type Multiplier = BigInt;

    fn power_sum_len(_: &()) -> usize {
        1
    }

    fn multiplier(_: &(), sums: &[BigInt]) -> BigInt {
        sums[0].clone()
    }

    fn add_multiplier_product(&mut self, c: &BigInt, x: &Self) {
        *self += c * x;
    }

    fn div_index(&mut self, n: u64) {
        let (q, r) = self.div_rem(&BigInt::from(n));
        debug_assert!(r.is_zero(), "inexact division by {n}");
        *self = q;
    }
}

impl PowerSumRing for f64 {
    type Multiplier = f64;

    fn power_sum_len(_: &()) -> usize {
        1
    }

    fn multiplier(_: &(), sums: &[BigInt]) -> f64 {
        sums[0].to_f64().unwrap_or(f64::INFINITY)
    }

    fn add_multiplier_product(&mut self, c: &f64, x: &Self) {
        *self += c * x;
    }

    fn div_index(&mut self, n: u64) {
        *self /= n as f64;
    }
}

/// Binomial coefficients `C(j, i)` for `0 ≤ i ≤ j ≤ order`.
pub(crate) fn binomial_table(order: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(order + 1);
    for j in 0..=order {
        let mut row = vec![BigInt::one(); j + 1];
        for i in 1..j {
            row[i] = &rows[j - 1][i - 1] + &rows[j - 1][i];
        }
        rows.push(row);
    }
    rows
}
