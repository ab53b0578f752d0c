use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{CoeffRing, MomentJet};

/// Unit of the stored exponents.
///
/// `Half` stores exponents in units of `q^{1/2}`, so the refined invariants
/// `M_3(t, q^{1/2})` stay in integer arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentUnit {
    #[default]
    Whole,
    Half,
}

/// A Laurent polynomial with arbitrary-precision integer coefficients.
///
/// Terms are kept sorted by exponent with no zero coefficients, so derived
/// equality is equality of polynomials (for a fixed exponent unit).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    unit: ExponentUnit,
    terms: Vec<(i64, BigInt)>,
}

impl LaurentPoly {
    /// Builds a polynomial from `(exponent, coefficient)` pairs in any order.
    /// Repeated exponents are summed.
    pub fn new<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, BigInt)>,
    {
        let mut terms: Vec<(i64, BigInt)> = terms.into_iter().collect();
        terms.sort_by_key(|(e, _)| *e);
        let mut out: Vec<(i64, BigInt)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some((last, acc)) if *last == e => *acc += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        LaurentPoly {
            unit: ExponentUnit::Whole,
            terms: out,
        }
    }

    pub fn from_i64_terms(terms: &[(i64, i64)]) -> Self {
        Self::new(terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn monomial(e: i64) -> Self {
        LaurentPoly {
            unit: ExponentUnit::Whole,
            terms: vec![(e, BigInt::one())],
        }
    }

    /// Reinterprets the stored exponents in the given unit, without rescaling.
    pub fn with_unit(mut self, unit: ExponentUnit) -> Self {
        self.unit = unit;
        self
    }

    /// Same polynomial with exponents stored in `q^{1/2}` units.
    pub fn to_half_units(&self) -> Self {
        match self.unit {
            ExponentUnit::Half => self.clone(),
            ExponentUnit::Whole => LaurentPoly {
                unit: ExponentUnit::Half,
                terms: self.terms.iter().map(|(e, c)| (2 * e, c.clone())).collect(),
            },
        }
    }

    pub fn unit(&self) -> ExponentUnit {
        self.unit
    }

    pub fn terms(&self) -> &[(i64, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        match self.terms.binary_search_by_key(&e, |(x, _)| *x) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.last().map(|(e, _)| *e)
    }

    /// Substitutes `q → q^{-1}`.
    pub fn mirror(&self) -> Self {
        LaurentPoly {
            unit: self.unit,
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(e, c)| (-e, c.clone()))
                .collect(),
        }
    }

    /// `Σ_e c_e · e^k`, i.e. `(∂^k p)(1)` in units of the stored exponent.
    /// `k = 0` evaluates at `q = 1`.
    pub fn derivative_at_one(&self, k: u32) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| c * BigInt::from(*e).pow(k))
            .sum()
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.derivative_at_one(0)
    }

    /// Image under the jet map of order `order`.
    pub fn jet(&self, order: usize) -> MomentJet {
        let coeffs = (0..=order)
            .map(|j| self.derivative_at_one(j as u32))
            .collect();
        MomentJet::from_coeffs(coeffs)
    }

    /// Multiplication by `q^e`.
    pub fn shifted(&self, e: i64) -> Self {
        LaurentPoly {
            unit: self.unit,
            terms: self.terms.iter().map(|(x, c)| (x + e, c.clone())).collect(),
        }
    }

    fn common_units(a: &Self, b: &Self) -> (Self, Self) {
        if a.unit == b.unit {
            (a.clone(), b.clone())
        } else {
            (a.to_half_units(), b.to_half_units())
        }
    }

    /// Exact product. Mixed units are promoted to `q^{1/2}`.
    pub fn mul(&self, other: &Self) -> Self {
        if self.unit != other.unit {
            let (a, b) = Self::common_units(self, other);
            return a.mul(&b);
        }
        let (Some(lo_a), Some(hi_a), Some(lo_b), Some(hi_b)) = (
            self.min_exponent(),
            self.max_exponent(),
            other.min_exponent(),
            other.max_exponent(),
        ) else {
            return LaurentPoly::zero().with_unit(self.unit);
        };
        let lo = lo_a + lo_b;
        let width = (hi_a + hi_b - lo + 1) as usize;
        let mut dense = vec![BigInt::zero(); width];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                dense[(ea + eb - lo) as usize] += ca * cb;
            }
        }
        let terms = dense
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (lo + i as i64, c))
            .collect();
        LaurentPoly {
            unit: self.unit,
            terms,
        }
    }

    /// `self += q^e · x`, merging in one pass.
    pub fn add_shifted_assign(&mut self, e: i64, x: &LaurentPoly) {
        if x.is_zero() {
            return;
        }
        if self.is_zero() {
            self.unit = x.unit;
            self.terms = x.terms.iter().map(|(d, c)| (d + e, c.clone())).collect();
            return;
        }
        debug_assert_eq!(self.unit, x.unit);
        let mine = std::mem::take(&mut self.terms);
        let mut out = Vec::with_capacity(mine.len() + x.terms.len());
        let mut a = mine.into_iter().peekable();
        let mut b = x.terms.iter().peekable();
        loop {
            let ord = match (a.peek(), b.peek()) {
                (Some((ea, _)), Some((eb, _))) => ea.cmp(&(eb + e)),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => break,
            };
            match ord {
                Ordering::Less => out.push(a.next().unwrap()),
                Ordering::Greater => {
                    let (eb, cb) = b.next().unwrap();
                    out.push((eb + e, cb.clone()));
                }
                Ordering::Equal => {
                    let (ea, mut ca) = a.next().unwrap();
                    ca += &b.next().unwrap().1;
                    if !ca.is_zero() {
                        out.push((ea, ca));
                    }
                }
            }
        }
        self.terms = out;
    }
}

/// Exact product of two Laurent polynomials.
pub fn laurent_mul(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    a.mul(b)
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::mul(self, rhs)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl CoeffRing for LaurentPoly {
    type Ctx = ExponentUnit;

    fn zero_in(unit: &ExponentUnit) -> Self {
        LaurentPoly::zero().with_unit(*unit)
    }

    fn one_in(unit: &ExponentUnit) -> Self {
        LaurentPoly::one().with_unit(*unit)
    }

    fn monomial_in(unit: &ExponentUnit, e: i64) -> Self {
        LaurentPoly::monomial(e).with_unit(*unit)
    }

    fn add_assign_ref(&mut self, other: &Self) {
        if self.unit == other.unit || self.is_zero() || other.is_zero() {
            self.add_shifted_assign(0, other);
        } else {
            let (a, b) = LaurentPoly::common_units(self, other);
            *self = a;
            self.add_shifted_assign(0, &b);
        }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        LaurentPoly::mul(self, other)
    }

    fn add_monomial_product_assign(&mut self, _unit: &ExponentUnit, e: i64, x: &Self) {
        self.add_shifted_assign(e, x);
    }
}

/// Dense working form used by the expansion engine: `coeffs[i]` is the
/// coefficient of `q^{lo + i}`. Zeros are allowed; converting back to
/// [`LaurentPoly`] drops them.
#[derive(Clone, Debug, Default)]
pub(crate) struct DenseLaurent {
    unit: ExponentUnit,
    lo: i64,
    coeffs: Vec<BigInt>,
}

impl DenseLaurent {
    pub(crate) fn to_sparse(&self) -> LaurentPoly {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.lo + i as i64, c.clone()))
            .collect();
        LaurentPoly {
            unit: self.unit,
            terms,
        }
    }

    fn from_sparse(p: &LaurentPoly) -> Self {
        let Some(lo) = p.min_exponent() else {
            return DenseLaurent {
                unit: p.unit,
                ..Default::default()
            };
        };
        let width = (p.max_exponent().unwrap() - lo + 1) as usize;
        let mut coeffs = vec![BigInt::zero(); width];
        for (e, c) in &p.terms {
            coeffs[(e - lo) as usize] = c.clone();
        }
        DenseLaurent {
            unit: p.unit,
            lo,
            coeffs,
        }
    }

    fn add_shifted_assign(&mut self, e: i64, x: &DenseLaurent) {
        if x.coeffs.is_empty() {
            return;
        }
        let x_lo = x.lo + e;
        if self.coeffs.is_empty() {
            self.lo = x_lo;
            self.coeffs.clone_from(&x.coeffs);
            return;
        }
        if x_lo < self.lo {
            let pad = (self.lo - x_lo) as usize;
            self.coeffs
                .splice(0..0, std::iter::repeat_with(BigInt::zero).take(pad));
            self.lo = x_lo;
        }
        let start = (x_lo - self.lo) as usize;
        let end = start + x.coeffs.len();
        if end > self.coeffs.len() {
            self.coeffs.resize(end, BigInt::zero());
        }
        for (a, b) in self.coeffs[start..end].iter_mut().zip(&x.coeffs) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }
}

impl CoeffRing for DenseLaurent {
    type Ctx = ExponentUnit;

    fn zero_in(unit: &ExponentUnit) -> Self {
        DenseLaurent {
            unit: *unit,
            ..Default::default()
        }
    }

    fn one_in(unit: &ExponentUnit) -> Self {
        Self::monomial_in(unit, 0)
    }

    fn monomial_in(unit: &ExponentUnit, e: i64) -> Self {
        DenseLaurent {
            unit: *unit,
            lo: e,
            coeffs: vec![BigInt::one()],
        }
    }

    fn add_assign_ref(&mut self, other: &Self) {
        self.add_shifted_assign(0, other);
    }

    fn mul_ref(&self, other: &Self) -> Self {
        DenseLaurent::from_sparse(&self.to_sparse().mul(&other.to_sparse()))
    }

    fn add_monomial_product_assign(&mut self, _unit: &ExponentUnit, e: i64, x: &Self) {
        self.add_shifted_assign(e, x);
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mag = c.abs();
            let exp = match (self.unit, e) {
                (_, 0) => None,
                (ExponentUnit::Whole, 1) => Some("q".to_string()),
                (ExponentUnit::Whole, e) => Some(format!("q^{e}")),
                (ExponentUnit::Half, e) if e % 2 == 0 => Some(if e / 2 == 1 {
                    "q".to_string()
                } else {
                    format!("q^{}", e / 2)
                }),
                (ExponentUnit::Half, e) => Some(format!("q^({e}/2)")),
            };
            match exp {
                None => write!(f, "{mag}")?,
                Some(q) if mag.is_one() => write!(f, "{q}")?,
                Some(q) => write!(f, "{mag}*{q}")?,
            }
        }
        Ok(())
    }
}

/// JSON form: a sorted array of `[exponent, "coefficient"]` pairs, exponents
/// in the stored unit.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(i64, String)> = self
            .terms
            .iter()
            .map(|(e, c)| (*e, c.to_str_radix(10)))
            .collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs: Vec<(i64, String)> = Vec::deserialize(d)?;
        let mut terms = Vec::with_capacity(pairs.len());
        for (e, c) in pairs {
            let c: BigInt = c.parse().map_err(D::Error::custom)?;
            terms.push((e, c));
        }
        Ok(LaurentPoly::new(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_i64_terms(terms)
    }

    #[test]
    fn mul_identity_and_inverse() {
        let a = p(&[(-1, 1), (0, 1), (1, 1)]);
        assert_eq!(laurent_mul(&a, &LaurentPoly::one()), a);
        assert_eq!(
            laurent_mul(&LaurentPoly::monomial(1), &LaurentPoly::monomial(-1)),
            LaurentPoly::one()
        );
    }

    #[test]
    fn mul_hand_expansion() {
        let a = p(&[(0, 1), (1, 1)]);
        let b = p(&[(0, 1), (-1, 1)]);
        assert_eq!(&a * &b, p(&[(-1, 1), (0, 2), (1, 1)]));
    }

    #[test]
    fn cancellation_drops_terms() {
        let a = p(&[(0, 1), (1, 1)]);
        let b = p(&[(0, 1), (1, -1)]);
        let prod = &a * &b;
        assert_eq!(prod, p(&[(0, 1), (2, -1)]));
        assert!(prod.terms().iter().all(|(_, c)| !c.is_zero()));
        let z = &a + &p(&[(0, -1), (1, -1)]);
        assert!(z.is_zero());
    }

    #[test]
    fn mirror_examples() {
        let pal = p(&[(-1, 1), (0, 1), (1, 1)]);
        assert_eq!(pal.mirror(), pal);
        assert_eq!(LaurentPoly::monomial(2).mirror(), LaurentPoly::monomial(-2));
        let p3 = p(&[(-2, 1), (-1, 1), (0, 2), (1, 1), (2, 1)]);
        assert_eq!(p3.mirror(), p3);
    }

    #[test]
    fn derivative_at_one_examples() {
        let a = p(&[(-1, 1), (0, 1), (1, 1)]);
        assert_eq!(a.derivative_at_one(0), BigInt::from(3));
        assert_eq!(a.derivative_at_one(1), BigInt::from(0));
        assert_eq!(a.derivative_at_one(2), BigInt::from(2));
    }

    #[test]
    fn json_round_trip_format() {
        let a = p(&[(1, 1), (-2, 12345678901234)]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"[[-2,"12345678901234"],[1,"1"]]"#);
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<LaurentPoly>(r#"[[0,"x"]]"#).is_err());
    }

    #[test]
    fn mixed_units_promote_to_half() {
        let whole = LaurentPoly::monomial(1);
        let half = LaurentPoly::monomial(1).with_unit(ExponentUnit::Half);
        let prod = &whole * &half;
        assert_eq!(prod.unit(), ExponentUnit::Half);
        assert_eq!(prod.terms(), &[(3, BigInt::one())]);
    }

    #[test]
    fn display() {
        let a = p(&[(-2, 1), (-1, 1), (0, 2), (1, 1), (2, 1)]);
        assert_eq!(a.to_string(), "q^-2 + q^-1 + 2 + q + q^2");
        let h = LaurentPoly::monomial(3).with_unit(ExponentUnit::Half);
        assert_eq!(h.to_string(), "q^(3/2)");
        assert_eq!(p(&[(0, -3), (1, 2)]).to_string(), "-3 + 2*q");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }
}
