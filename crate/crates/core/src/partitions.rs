//! Brute-force plane partitions: enumeration, the statistics `w₀`, `w₊`,
//! `w₋`, and the exact oracles built on top of them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::qseries::LaurentPoly;

/// Largest `n` [`enumerate`] accepts unless a cap is given explicitly.
pub const DEFAULT_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PartitionError {
    #[error(
        "n = {n} is above the enumeration cap {cap}; plane partition counts grow like \
         exp(2.01 n^(2/3)), so brute force is restricted to small sizes"
    )]
    CapExceeded { n: usize, cap: usize },
    #[error("not a plane partition: {0}")]
    Invalid(String),
    #[error("cannot parse plane partition {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// A plane partition stored as ragged rows of positive entries,
/// `rows[i][j] = π_{i,j}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u32>>", into = "Vec<Vec<u32>>")]
pub struct PlanePartition {
    rows: Vec<Vec<u32>>,
}

/// The statistics of one plane partition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StatTriple {
    /// Trace: the diagonal mass.
    pub w0: u64,
    /// Mass strictly above the diagonal (`i < j`).
    pub w_plus: u64,
    /// Mass strictly below the diagonal (`i > j`).
    pub w_minus: u64,
}

impl StatTriple {
    pub fn size(&self) -> u64 {
        self.w0 + self.w_plus + self.w_minus
    }

    /// `w₊ - w₋`.
    pub fn stat(&self) -> i64 {
        self.w_plus as i64 - self.w_minus as i64
    }

    /// `δ w₀ + w₊ - w₋`, the exponent of `q` in `M_δ`.
    pub fn weight(&self, delta: i64) -> i64 {
        delta * self.w0 as i64 + self.stat()
    }
}

impl PlanePartition {
    /// Validates and wraps `rows`. Entries must be positive and weakly
    /// decreasing along rows and columns; empty rows are not allowed.
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self, PartitionError> {
        for (i, row) in rows.iter().enumerate() {
            if row.is_empty() {
                return Err(PartitionError::Invalid(format!("row {i} is empty")));
            }
            for (j, &v) in row.iter().enumerate() {
                if v == 0 {
                    return Err(PartitionError::Invalid(format!("zero entry at ({i}, {j})")));
                }
                if j > 0 && v > row[j - 1] {
                    return Err(PartitionError::Invalid(format!(
                        "row {i} increases at column {j}"
                    )));
                }
                if i > 0 && (j >= rows[i - 1].len() || v > rows[i - 1][j]) {
                    return Err(PartitionError::Invalid(format!(
                        "column {j} increases at row {i}"
                    )));
                }
            }
        }
        Ok(PlanePartition { rows })
    }

    pub fn empty() -> Self {
        PlanePartition::default()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// `π_{i,j}`, zero outside the support.
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.rows
            .get(i)
            .and_then(|r| r.get(j))
            .copied()
            .unwrap_or(0)
    }

    pub fn size(&self) -> u64 {
        self.rows.iter().flatten().map(|&v| v as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn stats(&self) -> StatTriple {
        let mut t = StatTriple::default();
        for (i, row) in self.rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let v = v as u64;
                match i.cmp(&j) {
                    std::cmp::Ordering::Equal => t.w0 += v,
                    std::cmp::Ordering::Less => t.w_plus += v,
                    std::cmp::Ordering::Greater => t.w_minus += v,
                }
            }
        }
        t
    }

    /// Reflection in the diagonal, `π^T_{i,j} = π_{j,i}`.
    pub fn transpose(&self) -> Self {
        let width = self.rows.first().map_or(0, Vec::len);
        let rows = (0..width)
            .map(|j| {
                self.rows
                    .iter()
                    .take_while(|r| r.len() > j)
                    .map(|r| r[j])
                    .collect()
            })
            .collect();
        PlanePartition { rows }
    }
}

impl TryFrom<Vec<Vec<u32>>> for PlanePartition {
    type Error = PartitionError;

    fn try_from(rows: Vec<Vec<u32>>) -> Result<Self, Self::Error> {
        PlanePartition::new(rows)
    }
}

impl From<PlanePartition> for Vec<Vec<u32>> {
    fn from(p: PlanePartition) -> Self {
        p.rows
    }
}

/// Text form: rows separated by `;`, entries by `,`. The empty partition is
/// the empty string.
impl fmt::Display for PlanePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for PlanePartition {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(PlanePartition::empty());
        }
        let parse_err = |reason: String| PartitionError::Parse {
            input: s.to_string(),
            reason,
        };
        let rows = s
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|v| {
                        v.trim()
                            .parse::<u32>()
                            .map_err(|e| parse_err(e.to_string()))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        PlanePartition::new(rows)
    }
}

struct Dfs<'a, F> {
    current: PlanePartition,
    visit: &'a mut F,
}

impl<F: FnMut(&PlanePartition)> Dfs<'_, F> {
    fn start_row(&mut self, remaining: u32) {
        if remaining == 0 {
            (self.visit)(&self.current);
            return;
        }
        self.current.rows.push(Vec::new());
        self.extend_row(remaining);
        self.current.rows.pop();
    }

    // A row that stops here sorts before any of its extensions, so closing
    // the row comes first.
    fn extend_row(&mut self, remaining: u32) {
        let r = self.current.rows.len() - 1;
        let j = self.current.rows[r].len();
        if j > 0 {
            self.start_row(remaining);
        }
        let mut bound = remaining;
        if j > 0 {
            bound = bound.min(self.current.rows[r][j - 1]);
        }
        if r > 0 {
            match self.current.rows[r - 1].get(j) {
                Some(&above) => bound = bound.min(above),
                None => return,
            }
        }
        for v in 1..=bound {
            self.current.rows[r].push(v);
            self.extend_row(remaining - v);
            self.current.rows[r].pop();
        }
    }
}

fn check_cap(n: usize, cap: usize) -> Result<(), PartitionError> {
    if n > cap {
        Err(PartitionError::CapExceeded { n, cap })
    } else {
        Ok(())
    }
}

/// Calls `visit` once for every plane partition of size `n`, in increasing
/// lexicographic order of the row lists.
pub fn for_each_partition<F>(n: usize, cap: usize, mut visit: F) -> Result<(), PartitionError>
where
    F: FnMut(&PlanePartition),
{
    check_cap(n, cap)?;
    let mut dfs = Dfs {
        current: PlanePartition::empty(),
        visit: &mut visit,
    };
    dfs.start_row(n as u32);
    Ok(())
}

/// All plane partitions of size `n` (`n ≤ DEFAULT_CAP`), in lexicographic order.
pub fn enumerate(n: usize) -> Result<Vec<PlanePartition>, PartitionError> {
    enumerate_with_cap(n, DEFAULT_CAP)
}

pub fn enumerate_with_cap(n: usize, cap: usize) -> Result<Vec<PlanePartition>, PartitionError> {
    let mut out = Vec::new();
    for_each_partition(n, cap, |p| out.push(p.clone()))?;
    Ok(out)
}

/// Number of plane partitions of size `n`, by brute force.
pub fn count(n: usize) -> Result<u64, PartitionError> {
    let mut c = 0;
    for_each_partition(n, DEFAULT_CAP, |_| c += 1)?;
    Ok(c)
}

/// `Σ_{|π| = n} q^{δ w₀ + w₊ - w₋}` by enumeration.
pub fn refined_poly_oracle(n: usize, delta: i64) -> Result<LaurentPoly, PartitionError> {
    let mut acc: BTreeMap<i64, u64> = BTreeMap::new();
    for_each_partition(n, DEFAULT_CAP, |p| {
        *acc.entry(p.stats().weight(delta)).or_default() += 1;
    })?;
    Ok(LaurentPoly::new(
        acc.into_iter().map(|(e, c)| (e, BigInt::from(c))),
    ))
}

/// `Σ_{|π| = n} w₀(π)^i (w₊(π) - w₋(π))^j`, exactly.
pub fn joint_moment_oracle(n: usize, i: u32, j: u32) -> Result<BigInt, PartitionError> {
    let mut sum = BigInt::zero();
    for (&(w0, s), &c) in &joint_counts(n)? {
        let term: BigInt = Pow::pow(BigInt::from(w0), i) * Pow::pow(BigInt::from(s), j);
        sum += term * c;
    }
    Ok(sum)
}

/// Number of plane partitions of size `n` with each value of `(w₀, w₊ - w₋)`.
pub fn joint_counts(n: usize) -> Result<BTreeMap<(u64, i64), u64>, PartitionError> {
    let mut acc = BTreeMap::new();
    for_each_partition(n, DEFAULT_CAP, |p| {
        let t = p.stats();
        *acc.entry((t.w0, t.stat())).or_default() += 1;
    })?;
    Ok(acc)
}

/// `Σ_{|π| = n} (w₊ - w₋)^k`, the oracle value of `(∂^k p_n)(1)`.
pub fn stat_power_sum(n: usize, k: u32) -> Result<BigInt, PartitionError> {
    joint_moment_oracle(n, 0, k)
}
