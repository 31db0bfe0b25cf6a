//! Closed-form checks: isoparametric surfaces, rotation about an offset
//! axis, helicoidal surfaces and the shrinker axis condition.
//!
//! The parametric families are handled by expanding a cleared-denominator
//! residual in the functions `{1, t, t², sin t, cos t}` of the second
//! parameter and inspecting which coefficients are forced to vanish.

use serde::{Deserialize, Serialize};

pub mod helicoidal;
pub mod isoparametric;
pub mod offset_axis;

pub use helicoidal::{
    circle_arc_profile, helicoidal_coefficients, helicoidal_nonexistence_scan, shrinker_axis_check, shrinker_scan,
    vertical_line_profile, HelicoidalParams, ResidualCoefficients, ScanGrid,
};
pub use isoparametric::{isoparametric_suite, verify_isoparametric, IsoVerdict, Isoparametric};
pub use offset_axis::{
    offset_axis_coefficients, offset_axis_sphere_profile, offset_axis_suite, OffsetAxisCoefficients,
};

/// Coefficients with max absolute value above this count as forced nonzero.
pub const NONZERO_THRESHOLD: f64 = 1e-6;

/// Residuals below this (absolute) count as vanishing for model surfaces.
pub const STATIONARY_TOL: f64 = 1e-9;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Stationary,
    NotStationary,
    /// Every branch of the case split hits a nonzero coefficient.
    Blocked,
    /// The coefficients force the axis through the origin (`q1 = 0`).
    Q1ForcedZero,
    /// Nothing forces a contradiction for these parameters.
    Consistent,
}

/// One branch of a case split in a nonexistence argument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchReport {
    pub name: String,
    /// Coefficients that vanish identically on this branch.
    pub vanishing: Vec<String>,
    pub blocking_coefficient: Option<String>,
    pub max_abs_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub params: serde_json::Value,
    pub verdict: Verdict,
    pub blocking_coefficient: Option<String>,
    pub max_abs_value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub branches: Vec<BranchReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: String,
    pub cells: Vec<CellReport>,
}

impl SuiteReport {
    pub fn new(suite: &str, cells: Vec<CellReport>) -> Self {
        Self { schema: SCHEMA_VERSION, suite: suite.to_string(), cells }
    }

    /// Cells whose verdict differs from the recorded expectation.
    pub fn mismatches(&self) -> impl Iterator<Item = &CellReport> {
        self.cells.iter().filter(|c| c.expected.is_some_and(|e| e != c.verdict))
    }

    pub fn count(&self, verdict: Verdict) -> usize {
        self.cells.iter().filter(|c| c.verdict == verdict).count()
    }
}

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
