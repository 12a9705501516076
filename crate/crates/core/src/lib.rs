//! Coupled scalar recursions and their potential functions.
//!
//! The crate evaluates the uncoupled recursion `x <- f(g(x))`, the spatially
//! coupled recursion `x <- A^T f(A g(x))` with a zero boundary, the single
//! system potential `U_s`, the coupled potential `U_c`, and the thresholds of
//! parameterized families (single-system, stability, coupled/potential and
//! Maxwell). Everything here is pure computation over `alloc`; file formats
//! and the command-line front end live in the `maxsat` crate.
#![cfg_attr(not(test), no_std)]
// `!(a > b)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;

pub mod potential;
pub mod recursion;
pub mod special;
pub mod system;
pub mod systems;
pub mod thresholds;

pub use error::{Error, Result};

pub use potential::{FiniteWidthCondition, FiniteWidthEvidence, PotentialMinimum, PotentialReport};
pub use recursion::{CoupledProfile, CoupledRun, CouplingSpec, FixedPoint, IterationConfig};
pub use thresholds::{FixedPointCurve, ThresholdReport, ThresholdValue};
pub use system::{ParamSystem, ScalarSystem, Slice, SupNorms, SystemFlags, Translated};

