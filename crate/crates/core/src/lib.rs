//! Plane partitions weighted by `q^{δ w₀ + w₊ - w₋}`: exact expansion of the
//! generating function `M_δ(t, q)`, brute-force enumeration, moments and
//! distributions of the statistic at fixed size, asymptotic formulas, and a
//! conditioned Boltzmann sampler for sizes out of reach of exact methods.
//!
//! `w₀`, `w₊`, `w₋` are the total mass on, above and below the diagonal.

pub mod asym;
pub mod cli;
pub mod expand;
pub mod format;
pub mod moments;
pub mod partitions;
pub mod qseries;
pub mod sampler;
