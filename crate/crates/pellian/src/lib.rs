//! Exact arithmetic in real quadratic fields, generalized and simultaneous
//! Pellian equation solving, and evaluators for the effective bounds that
//! control simultaneous rational approximation to pairs of quadratic
//! irrationals.
//!
//! The crate is organized around a few hard rules:
//!
//! * algebraic values (elements of Z[sqrt(D)], units, solution classes)
//!   are exact big-integer data, and every order decision about them is
//!   made by integer casework and squaring;
//! * every inexact real (logarithms, heights, linear forms) lives in an
//!   outward-rounded [`IntervalReal`] whose enclosure is a guarantee, not
//!   an estimate;
//! * refinement at higher precision never widens an enclosure, and a
//!   comparison that cannot be decided below the precision ceiling is an
//!   explicit error, never a guess.

pub mod approx;
pub mod bounds;
pub mod cf;
pub mod dyadic;
pub mod error;
pub mod height;
pub mod interval;
pub mod pell;
pub mod quad;
pub mod system;
pub mod unit;

pub use dyadic::{Dyadic, Round};
pub use error::{Error, Result};
pub use interval::{IntervalReal, Precision};
pub use quad::{QuadElement, QuadRational};
pub use unit::Unit;
