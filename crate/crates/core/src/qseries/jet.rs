use std::cell::RefCell;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use super::{binomial_table, CoeffRing, PowerSumRing, QSeriesError};

/// Moment jet of order `K`: the vector `(∂^j p)(1)`, `0 ≤ j ≤ K`, of a
/// Laurent polynomial `p`, i.e. the power sums `Σ_e c_e e^j`.
///
/// Internally the entries are stored as `C(K, j) · m_j`. In that basis the
/// jet is the coefficient list of `Σ_e c_e (e + y)^K` in descending powers of
/// `y`, and multiplying by `q^e` becomes a Taylor shift `y → y + e`, which
/// only needs multiplications by the small integer `e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MomentJet {
    scaled: Vec<BigInt>,
}

thread_local! {
    static SHIFT_SCRATCH: RefCell<(Vec<BigInt>, BigInt)> = RefCell::new((Vec::new(), BigInt::zero()));
}

fn binomial_row(order: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(order + 1);
    let mut c = BigInt::one();
    for j in 0..=order {
        row.push(c.clone());
        c = c * (order - j) / (j + 1);
    }
    row
}

impl MomentJet {
    /// Jet from its power sums `coeffs[j] = Σ c_e e^j`.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let row = binomial_row(coeffs.len().saturating_sub(1));
        let scaled = coeffs.into_iter().zip(row).map(|(c, b)| c * b).collect();
        MomentJet { scaled }
    }

    pub fn zero(order: usize) -> Self {
        MomentJet {
            scaled: vec![BigInt::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::of_exponent(0, order)
    }

    /// Image of `q^e`: the powers `e^0, …, e^K`.
    pub fn of_exponent(e: i64, order: usize) -> Self {
        let base = BigInt::from(e);
        Self::from_coeffs((0..=order).map(|j| Pow::pow(&base, j as u32)).collect())
    }

    pub fn order(&self) -> usize {
        self.scaled.len() - 1
    }

    /// The power sums `(∂^j p)(1)` for `j = 0..=K`.
    pub fn coeffs(&self) -> Vec<BigInt> {
        let row = binomial_row(self.order());
        self.scaled
            .iter()
            .zip(row)
            .map(|(s, b)| {
                let (q, r) = s.div_rem(&b);
                debug_assert!(r.is_zero());
                q
            })
            .collect()
    }

    pub fn coeff(&self, j: usize) -> BigInt {
        let row = binomial_row(self.order());
        &self.scaled[j] / &row[j]
    }

    pub fn is_zero(&self) -> bool {
        self.scaled.iter().all(Zero::is_zero)
    }

    /// Product rule for `∂^j`: `c_j = Σ_i C(j,i) a_i b_{j-i}`.
    pub fn mul(&self, other: &Self) -> Result<Self, QSeriesError> {
        if self.order() != other.order() {
            return Err(QSeriesError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        let order = self.order();
        let binom = binomial_table(order);
        let a = self.coeffs();
        let b = other.coeffs();
        let c = (0..=order)
            .map(|j| {
                (0..=j)
                    .map(|i| &binom[j][i] * &a[i] * &b[j - i])
                    .sum::<BigInt>()
            })
            .collect();
        Ok(Self::from_coeffs(c))
    }

    pub fn add(&self, other: &Self) -> Result<Self, QSeriesError> {
        if self.order() != other.order() {
            return Err(QSeriesError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        let mut out = self.clone();
        out.add_assign_ref(other);
        Ok(out)
    }

    /// `self += q^e · x` via an in-place Taylor shift of a copy of `x`.
    pub fn add_shifted_assign(&mut self, e: i64, x: &MomentJet) {
        assert_eq!(self.order(), x.order(), "jet order mismatch");
        let order = self.order();
        SHIFT_SCRATCH.with(|cell| {
            let mut guard = cell.borrow_mut();
            let (buf, tmp) = &mut *guard;
            buf.clone_from(&x.scaled);
            if e != 0 {
                let mag = e.unsigned_abs();
                for i in 0..order {
                    for j in 1..=(order - i) {
                        if buf[j - 1].is_zero() {
                            continue;
                        }
                        tmp.clone_from(&buf[j - 1]);
                        *tmp *= mag;
                        if e < 0 {
                            buf[j] -= &*tmp;
                        } else {
                            buf[j] += &*tmp;
                        }
                    }
                }
            }
            for (a, b) in self.scaled.iter_mut().zip(buf.iter()) {
                *a += b;
            }
        });
    }
}

/// Product of two jets of equal order.
pub fn jet_mul(a: &MomentJet, b: &MomentJet) -> Result<MomentJet, QSeriesError> {
    a.mul(b)
}

impl CoeffRing for MomentJet {
    type Ctx = usize;

    fn zero_in(order: &usize) -> Self {
        MomentJet::zero(*order)
    }

    fn one_in(order: &usize) -> Self {
        MomentJet::one(*order)
    }

    fn monomial_in(order: &usize, e: i64) -> Self {
        MomentJet::of_exponent(e, *order)
    }

    fn add_assign_ref(&mut self, other: &Self) {
        assert_eq!(self.order(), other.order(), "jet order mismatch");
        for (a, b) in self.scaled.iter_mut().zip(&other.scaled) {
            *a += b;
        }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other).expect("jet order mismatch")
    }

    fn add_monomial_product_assign(&mut self, _order: &usize, e: i64, x: &Self) {
        self.add_shifted_assign(e, x);
    }
}

/// Nonzero weights `(j, i, C(K-j+i, i) · c_i)`: in the stored basis,
/// `(c · a)[j] = Σ_i C(K-j+i, i) c_i a[j-i]`.
#[derive(Debug, Clone)]
pub struct JetMultiplier {
    weights: Vec<(usize, usize, BigInt)>,
}

impl PowerSumRing for MomentJet {
    type Multiplier = JetMultiplier;

    fn power_sum_len(order: &usize) -> usize {
        order + 1
    }

    fn multiplier(order: &usize, sums: &[BigInt]) -> JetMultiplier {
        let order = *order;
        let binom = binomial_table(order);
        let mut weights = Vec::new();
        for j in 0..=order {
            for i in 0..=j {
                if sums[i].is_zero() {
                    continue;
                }
                weights.push((j, i, &binom[order - j + i][i] * &sums[i]));
            }
        }
        JetMultiplier { weights }
    }

    fn add_multiplier_product(&mut self, c: &JetMultiplier, x: &Self) {
        for (j, i, w) in &c.weights {
            let src = &x.scaled[j - i];
            if !src.is_zero() {
                self.scaled[*j] += w * src;
            }
        }
    }

    fn div_index(&mut self, n: u64) {
        let d = BigInt::from(n);
        for x in &mut self.scaled {
            let (q, r) = x.div_rem(&d);
            debug_assert!(r.is_zero(), "inexact division by {n}");
            *x = q;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::LaurentPoly;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn of_exponent_examples() {
        assert_eq!(MomentJet::of_exponent(0, 2).coeffs(), ints(&[1, 0, 0]));
        assert_eq!(
            MomentJet::of_exponent(-1, 3).coeffs(),
            ints(&[1, -1, 1, -1])
        );
        assert_eq!(MomentJet::of_exponent(2, 2).coeffs(), ints(&[1, 2, 4]));
    }

    #[test]
    fn mul_adds_exponents() {
        let j = |e| MomentJet::of_exponent(e, 5);
        assert_eq!(jet_mul(&j(1), &j(-1)).unwrap(), j(0));
        assert_eq!(jet_mul(&j(2), &j(3)).unwrap(), j(5));
    }

    #[test]
    fn mul_commutes_with_jet_map() {
        let a = LaurentPoly::from_i64_terms(&[(0, 1), (1, 1)]);
        let b = LaurentPoly::from_i64_terms(&[(0, 1), (-1, 1)]);
        let lhs = jet_mul(&a.jet(4), &b.jet(4)).unwrap();
        let expected = LaurentPoly::from_i64_terms(&[(-1, 1), (0, 2), (1, 1)]).jet(4);
        assert_eq!(lhs, expected);
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let err = jet_mul(&MomentJet::one(2), &MomentJet::one(3)).unwrap_err();
        assert_eq!(err, QSeriesError::OrderMismatch { left: 2, right: 3 });
        assert!(MomentJet::one(2).add(&MomentJet::one(1)).is_err());
    }

    #[test]
    fn taylor_shift_matches_direct_product() {
        let x = LaurentPoly::from_i64_terms(&[(-3, 2), (0, 5), (4, -7)]);
        for e in [-5_i64, -1, 0, 1, 3, 17] {
            for order in [0usize, 1, 2, 5, 8] {
                let mut acc = LaurentPoly::from_i64_terms(&[(2, 1)]).jet(order);
                acc.add_shifted_assign(e, &x.jet(order));
                let mut want = LaurentPoly::from_i64_terms(&[(2, 1)]);
                want.add_shifted_assign(e, &x);
                assert_eq!(acc, want.jet(order), "e={e} order={order}");
            }
        }
    }
}
