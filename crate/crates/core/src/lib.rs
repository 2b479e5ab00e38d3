//! Contextuality, magic, and entanglement harvested by localized detectors
//! coupled to a massless scalar field in flat spacetime.
//!
//! The pipeline: closed-form smeared field bi-distributions ([`fieldprop`]),
//! perturbative detector density matrices ([`udwstate`]), measurement
//! scenarios and empirical models ([`ctxscen`]), the contextual-fraction
//! linear program ([`lpcf`]), scalar measures ([`measures`]), and
//! configuration-driven parameter sweeps ([`sweep`]).

// Full-precision numeric literals are kept as computed (the extra digits
// round to the intended f64), and `!(x > 0)`-style validations deliberately
// treat NaN as invalid input.
#![allow(clippy::excessive_precision)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ctxscen;
pub mod fieldprop;
pub mod lpcf;
pub mod matcore;
pub mod measures;
pub mod numkernel;
pub mod sweep;
pub mod udwstate;

pub use numkernel::Complex64;
