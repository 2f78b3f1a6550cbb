//! Exact genus-0 Gromov–Witten invariants of projective spaces, their
//! products and Fano complete intersections.
//!
//! Two independent engines are provided: [`wdvv::WdvvEngine`] reconstructs
//! primary invariants of `P^r` from associativity, and
//! [`descend::DescendEngine`] computes one-descendant invariants from the
//! closed-form J-function. [`verify`] cross-checks them.

pub mod bracket;
pub mod cohomology;
pub mod descend;
pub mod error;
pub mod jfun;
pub mod laurent;
pub mod memo;
pub mod rational;
pub mod splits;
pub mod target;
pub mod verify;
pub mod wdvv;

pub use bracket::{Bracket, DescBracket};
pub use cohomology::CohClass;
pub use error::{GwError, Result};
pub use rational::Rational;
pub use target::{CurveClass, Monomial, Target, TargetKind};
