//! Integration beyond the Riemann integral, organized around the problem of
//! recovering a function from its derivative.
//!
//! The crate has four layers:
//!
//! * [`realsets`] — intervals, tagged partitions, gauges and fineness
//!   predicates, plus a symbolic engine for closed subsets of a compact
//!   interval (finite sets, convergent sequences, rank towers, generalized
//!   Cantor sets) with derived sets, Cantor-Bendixson rank, perfect kernels,
//!   contiguous intervals and measure.
//! * [`corpus`] — constructors for the classical pathological derivatives
//!   (oscillating power functions, Volterra-type functions over Cantor sets,
//!   the Cantor function, a conditionally integrable derivative), each
//!   packaged with its known primitive and classification flags.
//! * [`integrators`] — the method hierarchy: Riemann, improper Cauchy-Riemann
//!   extensions of finite and transfinite order, the Harnack extension over a
//!   perfect set, the Henstock-Kurzweil gauge integral, the McShane variant,
//!   a Perron major/minor verifier, and a totalization driver that composes
//!   them over declared singular structure.
//! * [`diagnostics`] — oscillation, absolute-continuity witnesses, absolute
//!   divergence detection and the end-to-end primitive-recovery harness.
//!
//! The numeric core is generic over the scalar type via [`scalar::Real`];
//! `f64` aliases for the main vocabulary types are exported at the crate
//! root. Cantor-set construction endpoints are kept as exact rationals
//! internally and converted to the scalar type at query time.

pub mod corpus;
pub mod diagnostics;
pub mod integrators;
pub mod realsets;
pub mod scalar;
pub mod sum;

pub use scalar::Real;

/// `f64` interval.
pub type Interval64 = realsets::Interval<f64>;
/// `f64` tagged partition.
pub type TaggedPartition64 = realsets::TaggedPartition<f64>;
/// `f64` gauge.
pub type Gauge64 = realsets::Gauge<f64>;
/// `f64` symbolic closed set.
pub type SymbolicClosedSet64 = realsets::SymbolicClosedSet<f64>;
/// `f64` corpus entry.
pub type FunctionEntry64 = corpus::FunctionEntry<f64>;
/// `f64` integral result.
pub type IntegralResult64 = integrators::IntegralResult<f64>;
