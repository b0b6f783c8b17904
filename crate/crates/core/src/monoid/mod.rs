//! Toric monoid computations behind the saturation of base-changed models.

pub mod affine;
pub mod brute;
pub mod chart;

use thiserror::Error;

pub use affine::{verify_lemm_coker, AffineMonoid, LemmCokerInstance, LemmCokerReport};
pub use chart::{
    cokernel_generators_case1, cokernel_generators_case2, divisible_case1, filtration_summands,
    sat_member_case1, sat_member_case2, SaturationChartCase1, SaturationChartCase2,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("invalid monoid: {0}")]
    InvalidMonoid(String),
    #[error("monoid is not saturated: {0:?} lies in the saturation but not in P")]
    NotSaturatedInput(Vec<i64>),
    #[error("precondition failed: {0}")]
    Precondition(String),
}
