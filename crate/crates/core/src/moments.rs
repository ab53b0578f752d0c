//! Moments and distributions of `δ w₀ + w₊ - w₋` on plane partitions of a
//! fixed size, from exact coefficients.
//!
//! Raw moments stay as unreduced `(Σ_π e^k, p_n(1))` integer pairs and are
//! only turned into floats at the end, by a scaled big-integer division.

use std::fmt;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::asym::limit_variance;
use crate::expand::{expand_m_delta_jet, TSeries};
use crate::format::float17;
use crate::partitions::{refined_poly_oracle, PartitionError};
use crate::qseries::{FloatJet, LaurentPoly, MomentJet};

#[derive(Debug, thiserror::Error)]
pub enum MomentError {
    #[error("a jet of order {order} does not carry moment {k}")]
    JetOrderTooLow { order: usize, k: u32 },
    #[error(
        "a moment jet does not determine the distribution; use a Laurent coefficient or the oracle"
    )]
    PmfUnavailable,
    #[error("degenerate distribution table: {0}")]
    Degenerate(String),
    #[error("n = {n} is beyond the expansion (n_max = {n_max})")]
    OutOfRange { n: usize, n_max: usize },
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

/// Where the coefficient `p_n(q)` comes from.
#[derive(Clone, Copy, Debug)]
pub enum MomentSource<'a> {
    /// An exact Laurent coefficient of `M_δ`.
    Laurent(&'a LaurentPoly),
    /// An exact moment jet of `p_n`.
    Jet(&'a MomentJet),
    /// Brute-force enumeration of the plane partitions of size `n`.
    Oracle,
}

/// An unreduced fraction of big integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactRatio {
    #[serde(serialize_with = "ser_bigint")]
    pub num: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub den: BigInt,
}

fn ser_bigint<S: serde::Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl ExactRatio {
    pub fn new(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        ExactRatio { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn reduced(&self) -> BigRational {
        BigRational::new(self.num.clone(), self.den.clone())
    }

    /// Equality as rational numbers.
    pub fn same_value(&self, other: &ExactRatio) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.num, &self.den)
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// `x · 2^e` without intermediate overflow.
fn scale_pow2(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

/// `num / den` as a float. The integer quotient is taken after scaling by a
/// power of two so it carries at least 100 bits (30 decimal digits), then
/// rounded once.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = 100 + den.bits() as i64 - num.bits() as i64;
    let q = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    scale_pow2(q.to_f64().unwrap_or(f64::NAN), -shift)
}

/// `(∂^k p_n)(1) / p_n(1)`. The oracle source uses `δ = 0`.
pub fn raw_moment(n: usize, k: u32, source: MomentSource<'_>) -> Result<ExactRatio, MomentError> {
    match source {
        MomentSource::Laurent(p) => Ok(ExactRatio::new(p.derivative_at_one(k), p.eval_at_one())),
        MomentSource::Jet(j) => {
            if j.order() < k as usize {
                return Err(MomentError::JetOrderTooLow {
                    order: j.order(),
                    k,
                });
            }
            Ok(ExactRatio::new(j.coeff(k as usize), j.coeff(0)))
        }
        MomentSource::Oracle => {
            let p = refined_poly_oracle(n, 0)?;
            Ok(ExactRatio::new(p.derivative_at_one(k), p.eval_at_one()))
        }
    }
}

/// `n^{-2k/3}` times a raw moment.
pub fn normalize(n: usize, k: u32, raw: f64) -> f64 {
    if raw == 0.0 {
        return 0.0;
    }
    raw * (n as f64).powf(-2.0 * k as f64 / 3.0)
}

/// `n^{-2k/3} · raw_moment(n, k, source)`.
pub fn normalized_moment(n: usize, k: u32, source: MomentSource<'_>) -> Result<f64, MomentError> {
    Ok(normalize(n, k, raw_moment(n, k, source)?.to_f64()))
}

/// Normalized moment from a floating-point jet.
pub fn normalized_moment_float(n: usize, k: u32, jet: &FloatJet) -> Result<f64, MomentError> {
    if jet.order() < k as usize {
        return Err(MomentError::JetOrderTooLow {
            order: jet.order(),
            k,
        });
    }
    Ok(normalize(n, k, jet.moment_ratio(k as usize)))
}

/// `E[Z^k]` for `Z ~ N(0, sigma2)`: `(k-1)!! sigma2^{k/2}` for even `k`.
pub fn gaussian_moment(k: u32, sigma2: f64) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    crate::asym::double_factorial_odd(k) * sigma2.powi(k as i32 / 2)
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Exact pmf of the statistic on plane partitions of size `n`.
#[derive(Clone, Debug, Serialize)]
pub struct DistributionTable {
    pub n: usize,
    pub delta: i64,
    /// Sorted statistic values.
    pub support: Vec<i64>,
    #[serde(skip)]
    pub counts: Vec<BigInt>,
    #[serde(skip)]
    pub total: BigInt,
    pub mean: f64,
    pub std_dev: f64,
    /// `(s - mean) / std_dev`; all zero for a point mass.
    pub standardized: Vec<f64>,
    /// `P(S ≤ s)` at each support point.
    pub cdf: Vec<f64>,
}

impl DistributionTable {
    fn from_poly(n: usize, delta: i64, p: &LaurentPoly) -> Self {
        let support: Vec<i64> = p.terms().iter().map(|(e, _)| *e).collect();
        let counts: Vec<BigInt> = p.terms().iter().map(|(_, c)| c.clone()).collect();
        let total: BigInt = counts.iter().sum();
        let s1 = p.derivative_at_one(1);
        let s2 = p.derivative_at_one(2);
        let var_num = &total * &s2 - &s1 * &s1;
        let mean = ratio_to_f64(&s1, &total);
        let std_dev = ratio_to_f64(&var_num, &(&total * &total)).sqrt();
        let standardized = support
            .iter()
            .map(|&s| {
                if std_dev == 0.0 {
                    0.0
                } else {
                    ratio_to_f64(&(&total * s - &s1), &total) / std_dev
                }
            })
            .collect();
        let mut cum = BigInt::zero();
        let cdf = counts
            .iter()
            .map(|c| {
                cum += c;
                ratio_to_f64(&cum, &total)
            })
            .collect();
        DistributionTable {
            n,
            delta,
            support,
            counts,
            total,
            mean,
            std_dev,
            standardized,
            cdf,
        }
    }

    pub fn probabilities(&self) -> Vec<ExactRatio> {
        self.counts
            .iter()
            .map(|c| ExactRatio::new(c.clone(), self.total.clone()))
            .collect()
    }

    /// `(support, probability)` pairs, reduced.
    pub fn pmf(&self) -> Vec<(i64, BigRational)> {
        self.support
            .iter()
            .zip(self.probabilities())
            .map(|(&s, p)| (s, p.reduced()))
            .collect()
    }

    /// CSV with columns `s,prob_num,prob_den,std_s,cdf,normal_cdf`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), MomentError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["s", "prob_num", "prob_den", "std_s", "cdf", "normal_cdf"])?;
        for i in 0..self.support.len() {
            out.write_record([
                self.support[i].to_string(),
                self.counts[i].to_string(),
                self.total.to_string(),
                float17(self.standardized[i]),
                float17(self.cdf[i]),
                float17(normal_cdf(self.standardized[i])),
            ])?;
        }
        out.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// Exact pmf of `δ w₀ + w₊ - w₋` on plane partitions of size `n`,
/// standardized by its exact mean and standard deviation. For a Laurent
/// source the exponents are read as they are, so `delta` is only recorded.
pub fn distribution_table(
    n: usize,
    delta: i64,
    source: MomentSource<'_>,
) -> Result<DistributionTable, MomentError> {
    let poly = match source {
        MomentSource::Laurent(p) => p.clone(),
        MomentSource::Oracle => refined_poly_oracle(n, delta)?,
        MomentSource::Jet(_) => return Err(MomentError::PmfUnavailable),
    };
    if poly.is_zero() {
        return Err(MomentError::Degenerate("no mass".into()));
    }
    if poly
        .terms()
        .iter()
        .any(|(_, c)| c.sign() == num_bigint::Sign::Minus)
    {
        return Err(MomentError::Degenerate("negative coefficient".into()));
    }
    Ok(DistributionTable::from_poly(n, delta, &poly))
}

/// `sup_x |F(x) - Φ(x)|` between the standardized step CDF and the standard
/// normal CDF; both one-sided limits are checked at every atom. A point
/// mass sits at 0 and gives 0.5.
pub fn ks_distance(table: &DistributionTable) -> Result<f64, MomentError> {
    if table.support.is_empty() {
        return Err(MomentError::Degenerate("empty support".into()));
    }
    if table.cdf.last().is_some_and(|&c| (c - 1.0).abs() > 1e-12) {
        return Err(MomentError::Degenerate(
            "probabilities do not sum to 1".into(),
        ));
    }
    let mut prev = 0.0;
    let mut d: f64 = 0.0;
    for (z, &f) in table.standardized.iter().zip(&table.cdf) {
        let phi = normal_cdf(*z);
        d = d.max((f - phi).abs()).max((prev - phi).abs());
        prev = f;
    }
    Ok(d)
}

/// One row of a moment convergence report.
#[derive(Clone, Debug, Serialize)]
pub struct MomentReport {
    pub n: usize,
    pub k: u32,
    pub raw: ExactRatio,
    pub normalized: f64,
    pub gauss_ref: f64,
    pub abs_error: f64,
}

/// Reports for `k` over `n_list` from precomputed jets of `M_0`.
pub fn convergence_report_from_jets(
    jets: &TSeries<MomentJet>,
    k: u32,
    n_list: &[usize],
) -> Result<Vec<MomentReport>, MomentError> {
    n_list
        .iter()
        .map(|&n| {
            if n > jets.n_max() {
                return Err(MomentError::OutOfRange {
                    n,
                    n_max: jets.n_max(),
                });
            }
            Ok(moment_report(
                n,
                k,
                raw_moment(n, k, MomentSource::Jet(jets.coeff(n)))?,
            ))
        })
        .collect()
}

/// Report row for a raw moment, against the Gaussian limit moment.
pub fn moment_report(n: usize, k: u32, raw: ExactRatio) -> MomentReport {
    let gauss_ref = gaussian_moment(k, limit_variance());
    let normalized = normalize(n, k, raw.to_f64());
    MomentReport {
        n,
        k,
        raw,
        normalized,
        gauss_ref,
        abs_error: (normalized - gauss_ref).abs(),
    }
}

/// Expands exact jets of order `k` up to `max(n_list)` and reports moment `k`.
pub fn convergence_report(k: u32, n_list: &[usize]) -> Result<Vec<MomentReport>, MomentError> {
    let n_max = n_list.iter().copied().max().unwrap_or(0);
    let jets = expand_m_delta_jet(0, n_max, k as usize);
    convergence_report_from_jets(&jets, k, n_list)
}

/// CSV with columns `n,k,raw_num,raw_den,normalized,gauss_ref,abs_error`.
pub fn write_reports_csv<W: Write>(w: W, reports: &[MomentReport]) -> Result<(), MomentError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "n",
        "k",
        "raw_num",
        "raw_den",
        "normalized",
        "gauss_ref",
        "abs_error",
    ])?;
    for r in reports {
        out.write_record([
            r.n.to_string(),
            r.k.to_string(),
            r.raw.num.to_string(),
            r.raw.den.to_string(),
            float17(r.normalized),
            float17(r.gauss_ref),
            float17(r.abs_error),
        ])?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}
