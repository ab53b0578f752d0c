use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{CoeffRing, PowerSumRing};

/// Floating-point moment jet with a detached natural-log scale.
///
/// Same basis as [`super::MomentJet`] (`C(K, j) · m_j`), but the entries are
/// `f64` multiplied by `exp(ln_scale)`, so the plane-partition counts, which
/// overflow `f64` past `n ≈ 7000`, remain representable. Exactness is lost:
/// the entries carry ordinary floating-point rounding.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatJet {
    ln_scale: f64,
    scaled: Vec<f64>,
}

const RENORM_HI: f64 = 1e100;
const RENORM_LO: f64 = 1e-100;

fn binomials(order: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(order + 1);
    let mut c = 1.0_f64;
    for j in 0..=order {
        row.push(c);
        c = c * (order - j) as f64 / (j + 1) as f64;
    }
    row
}

impl FloatJet {
    pub fn zero(order: usize) -> Self {
        FloatJet {
            ln_scale: f64::NEG_INFINITY,
            scaled: vec![0.0; order + 1],
        }
    }

    pub fn of_exponent(e: i64, order: usize) -> Self {
        let row = binomials(order);
        let scaled = (0..=order)
            .map(|j| row[j] * (e as f64).powi(j as i32))
            .collect();
        FloatJet {
            ln_scale: 0.0,
            scaled,
        }
    }

    pub fn order(&self) -> usize {
        self.scaled.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.ln_scale == f64::NEG_INFINITY || self.scaled.iter().all(|&x| x == 0.0)
    }

    /// Natural log of `(∂^0 p)(1)`, the total count.
    pub fn ln_count(&self) -> f64 {
        self.scaled[0].ln() + self.ln_scale
    }

    /// `(∂^j p)(1) / p(1)`, computed without leaving the scaled range.
    pub fn moment_ratio(&self, j: usize) -> f64 {
        let row = binomials(self.order());
        self.scaled[j] / row[j] / self.scaled[0]
    }

    /// `(∂^j p)(1)` as a plain float; overflows to infinity for large counts.
    pub fn coeff(&self, j: usize) -> f64 {
        let row = binomials(self.order());
        self.scaled[j] / row[j] * self.ln_scale.exp()
    }

    /// `(ln_scale, scaled entries)`; the true entry `j` is
    /// `scaled[j] / C(K, j) · exp(ln_scale)`.
    pub fn raw_parts(&self) -> (f64, &[f64]) {
        (self.ln_scale, &self.scaled)
    }

    fn renormalize(&mut self) {
        let m = self.scaled.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
        if m == 0.0 {
            self.ln_scale = f64::NEG_INFINITY;
        } else if !(RENORM_LO..=RENORM_HI).contains(&m) {
            for x in &mut self.scaled {
                *x /= m;
            }
            self.ln_scale += m.ln();
        }
    }

    fn add_scaled(&mut self, ln_other: f64, other: &[f64]) {
        if ln_other == f64::NEG_INFINITY {
            return;
        }
        if self.ln_scale == f64::NEG_INFINITY {
            self.ln_scale = ln_other;
            self.scaled.copy_from_slice(other);
            self.renormalize();
            return;
        }
        if ln_other > self.ln_scale {
            let f = (self.ln_scale - ln_other).exp();
            for (a, b) in self.scaled.iter_mut().zip(other) {
                *a = *a * f + b;
            }
            self.ln_scale = ln_other;
        } else {
            let f = (ln_other - self.ln_scale).exp();
            for (a, b) in self.scaled.iter_mut().zip(other) {
                *a += b * f;
            }
        }
        self.renormalize();
    }

    pub fn add_shifted_assign(&mut self, e: i64, x: &FloatJet) {
        assert_eq!(self.order(), x.order(), "jet order mismatch");
        if x.is_zero() {
            return;
        }
        let order = x.order();
        let mut buf = x.scaled.clone();
        if e != 0 {
            let e = e as f64;
            for i in 0..order {
                for j in 1..=(order - i) {
                    buf[j] += e * buf[j - 1];
                }
            }
        }
        self.add_scaled(x.ln_scale, &buf);
    }
}

impl CoeffRing for FloatJet {
    type Ctx = usize;

    fn zero_in(order: &usize) -> Self {
        FloatJet::zero(*order)
    }

    fn one_in(order: &usize) -> Self {
        FloatJet::of_exponent(0, *order)
    }

    fn monomial_in(order: &usize, e: i64) -> Self {
        FloatJet::of_exponent(e, *order)
    }

    fn add_assign_ref(&mut self, other: &Self) {
        assert_eq!(self.order(), other.order(), "jet order mismatch");
        self.add_scaled(other.ln_scale, &other.scaled);
    }

    /// General product; the expansion engine never calls this (it only
    /// multiplies by monomials), so it goes through unscaled moments.
    fn mul_ref(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order(), "jet order mismatch");
        if self.is_zero() || other.is_zero() {
            return FloatJet::zero(self.order());
        }
        let order = self.order();
        let row = binomials(order);
        let a: Vec<f64> = (0..=order).map(|j| self.scaled[j] / row[j]).collect();
        let b: Vec<f64> = (0..=order).map(|j| other.scaled[j] / row[j]).collect();
        let mut out = Vec::with_capacity(order + 1);
        for j in 0..=order {
            let inner = binomials(j);
            let c: f64 = (0..=j).map(|i| inner[i] * a[i] * b[j - i]).sum();
            out.push(c * row[j]);
        }
        let mut jet = FloatJet {
            ln_scale: self.ln_scale + other.ln_scale,
            scaled: out,
        };
        jet.renormalize();
        jet
    }

    fn add_monomial_product_assign(&mut self, _order: &usize, e: i64, x: &Self) {
        self.add_shifted_assign(e, x);
    }
}

/// Float counterpart of the exact jet multiplier.
#[derive(Debug, Clone)]
pub struct FloatJetMultiplier {
    weights: Vec<(usize, usize, f64)>,
}

impl PowerSumRing for FloatJet {
    type Multiplier = FloatJetMultiplier;

    fn power_sum_len(order: &usize) -> usize {
        order + 1
    }

    fn multiplier(order: &usize, sums: &[BigInt]) -> FloatJetMultiplier {
        let order = *order;
        let mut weights = Vec::new();
        for j in 0..=order {
            for (i, sum) in sums.iter().enumerate().take(j + 1) {
                let c = sum.to_f64().unwrap_or(f64::INFINITY);
                if c != 0.0 {
                    weights.push((j, i, binomials(order - j + i)[i] * c));
                }
            }
        }
        FloatJetMultiplier { weights }
    }

    fn add_multiplier_product(&mut self, c: &FloatJetMultiplier, x: &Self) {
        if x.is_zero() {
            return;
        }
        let mut buf = vec![0.0; x.scaled.len()];
        for (j, i, w) in &c.weights {
            buf[*j] += w * x.scaled[j - i];
        }
        self.add_scaled(x.ln_scale, &buf);
    }

    fn div_index(&mut self, n: u64) {
        if self.ln_scale != f64::NEG_INFINITY {
            self.ln_scale -= (n as f64).ln();
        }
    }
}
