//! The integration-method hierarchy: Riemann, improper Cauchy-Riemann
//! extensions of finite and transfinite order, the Harnack extension over
//! a perfect set, the Henstock-Kurzweil gauge integral, the McShane
//! variant, a Perron major/minor verifier, and the totalization driver
//! composing them over declared singular structure.
//!
//! Divergence is operationalized: the underlying limits either exist or
//! do not, so each driver tracks a falsifiable proxy (monotone growth of
//! the tracked quantity past `1/tol`, or sustained non-contracting
//! increments) and records it in the result trail.

mod cauchy;
mod extrapolate;
mod gaugeint;
mod harnack;
mod perron;
mod quad;
mod riemann;
mod totalize;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cauchy::{cauchy_riemann, cauchy_riemann_omega};
pub use extrapolate::{limit_extrapolate, Extrapolation};
pub use gaugeint::{
    derivative_gauge, henstock_kurzweil, mcshane, GaugeChoice, DEFAULT_GAUGE_PROBE,
    DEFAULT_REFINEMENTS,
};
pub use harnack::harnack;
pub use perron::{perron_check, PerronVerdict};
pub use riemann::riemann;
pub use totalize::totalize;

use crate::corpus::{EntryFlags, FunctionEntry};
use crate::realsets::{Interval, SetError, SymbolicClosedSet};
use crate::scalar::Real;

#[derive(Debug, Clone, Error)]
pub enum IntegrateError {
    #[error(transparent)]
    Set(#[from] SetError),

    #[error("integrand evaluation failed at x={at}")]
    EvalFailure { at: f64 },

    #[error("singular points closer than {separation} cannot be isolated")]
    SingularitySeparation { separation: f64 },

    #[error("automatic gauge schedules need entry metadata: {detail}")]
    NeedsMetadata { detail: String },

    #[error("invalid argument: {detail}")]
    InvalidArgument { detail: String },

    #[error("need at least {needed} terms, got {got}")]
    TooFewTerms { needed: usize, got: usize },

    #[error("perron check: {detail}")]
    Perron { detail: String },
}

/// Convergence status of an integration attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Converged,
    Diverged,
    Unconverged,
    NotApplicable,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::Diverged => "diverged",
            Status::Unconverged => "unconverged",
            Status::NotApplicable => "not-applicable",
        }
    }

    pub fn from_str_name(s: &str) -> Option<Self> {
        Some(match s {
            "converged" => Status::Converged,
            "diverged" => Status::Diverged,
            "unconverged" => Status::Unconverged,
            "not-applicable" => Status::NotApplicable,
            _ => return None,
        })
    }
}

/// Integration method identifiers (CLI `--method` names in parentheses).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// `riemann`
    Riemann,
    /// `cr`
    CauchyRiemann,
    /// `cr_omega`
    CauchyRiemannOmega,
    /// `harnack`
    Harnack,
    /// `hk`
    HenstockKurzweil,
    /// `mcshane`
    McShane,
    /// `perron`
    Perron,
    /// `totalize`
    Totalize,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Riemann => "riemann",
            Method::CauchyRiemann => "cr",
            Method::CauchyRiemannOmega => "cr_omega",
            Method::Harnack => "harnack",
            Method::HenstockKurzweil => "hk",
            Method::McShane => "mcshane",
            Method::Perron => "perron",
            Method::Totalize => "totalize",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "riemann" => Method::Riemann,
            "cr" => Method::CauchyRiemann,
            "cr_omega" => Method::CauchyRiemannOmega,
            "harnack" => Method::Harnack,
            "hk" => Method::HenstockKurzweil,
            "mcshane" => Method::McShane,
            "perron" => Method::Perron,
            "totalize" => Method::Totalize,
            _ => return None,
        })
    }

    pub fn all() -> [Method; 8] {
        [
            Method::Riemann,
            Method::CauchyRiemann,
            Method::CauchyRiemannOmega,
            Method::Harnack,
            Method::HenstockKurzweil,
            Method::McShane,
            Method::Perron,
            Method::Totalize,
        ]
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Cap on stored per-interval contributions in a trail.
const TRAIL_CONTRIBUTION_CAP: usize = 32;

/// Diagnostics accumulated by a driver: refinement sums, extrapolation
/// estimates, per-interval contributions, divergence witnesses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trail<R> {
    pub notes: Vec<String>,
    /// Cell counts of the partitions or refinement stages used.
    pub partition_cells: Vec<u64>,
    /// Raw per-stage sums (cutoff integrals, refinement sums, partials).
    pub sums: Vec<R>,
    /// Successive accelerated estimates from the extrapolation table.
    pub extrapolation: Vec<R>,
    /// Per-interval contributions in reduction order (capped).
    pub contributions: Vec<R>,
    pub contribution_count: u64,
    /// Monotone witness partials backing a `Diverged` verdict.
    pub witness: Vec<R>,
    /// Defaults in effect, echoed for reproducibility.
    pub defaults: Vec<(String, f64)>,
}

impl<R: Real> Default for Trail<R> {
    fn default() -> Self {
        Self {
            notes: Vec::new(),
            partition_cells: Vec::new(),
            sums: Vec::new(),
            extrapolation: Vec::new(),
            contributions: Vec::new(),
            contribution_count: 0,
            witness: Vec::new(),
            defaults: Vec::new(),
        }
    }
}

impl<R: Real> Trail<R> {
    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    pub fn push_contribution(&mut self, value: R) {
        self.contribution_count += 1;
        if self.contributions.len() < TRAIL_CONTRIBUTION_CAP {
            self.contributions.push(value);
        }
    }

    pub fn set_default(&mut self, key: &str, value: f64) {
        self.defaults.push((key.to_string(), value));
    }
}

/// Outcome of an integration method.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralResult<R> {
    pub value: R,
    /// Finite always. For `Converged` it bounds the distance to the
    /// method's limiting value; otherwise it is the last tracked increment,
    /// a diagnostic rather than a bound.
    pub error_estimate: R,
    pub method: Method,
    pub status: Status,
    pub trail: Trail<R>,
}

impl<R: Real> IntegralResult<R> {
    pub fn new(
        method: Method,
        status: Status,
        value: R,
        error_estimate: R,
        trail: Trail<R>,
    ) -> Self {
        Self {
            value,
            error_estimate,
            method,
            status,
            trail,
        }
    }

    pub fn not_applicable(method: Method, reason: impl Into<String>) -> Self {
        let mut trail = Trail::default();
        trail.note(reason);
        Self {
            value: R::zero(),
            error_estimate: R::zero(),
            method,
            status: Status::NotApplicable,
            trail,
        }
    }

    pub fn is_converged(&self) -> bool {
        self.status == Status::Converged
    }

    /// JSON-facing mirror with fixed key order.
    pub fn to_report(&self) -> IntegralReport {
        IntegralReport {
            method: self.method.name().to_string(),
            value: self.value.as_f64(),
            error: self.error_estimate.as_f64(),
            status: self.status.as_str().to_string(),
            trail: TrailReport {
                notes: self.trail.notes.clone(),
                partition_cells: self.trail.partition_cells.clone(),
                sums: self.trail.sums.iter().map(|v| v.as_f64()).collect(),
                extrapolation: self
                    .trail
                    .extrapolation
                    .iter()
                    .map(|v| v.as_f64())
                    .collect(),
                contributions: self
                    .trail
                    .contributions
                    .iter()
                    .map(|v| v.as_f64())
                    .collect(),
                contribution_count: self.trail.contribution_count,
                witness: self.trail.witness.iter().map(|v| v.as_f64()).collect(),
                defaults: self.trail.defaults.clone(),
            },
        }
    }
}

/// Serialized form of [`IntegralResult`]: fixed key order
/// `method, value, error, status, trail`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralReport {
    pub method: String,
    pub value: f64,
    pub error: f64,
    pub status: String,
    pub trail: TrailReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrailReport {
    pub notes: Vec<String>,
    pub partition_cells: Vec<u64>,
    pub sums: Vec<f64>,
    pub extrapolation: Vec<f64>,
    pub contributions: Vec<f64>,
    pub contribution_count: u64,
    pub witness: Vec<f64>,
    pub defaults: Vec<(String, f64)>,
}

/// A function to integrate: a callable plus optional entry metadata
/// (flags, singular set, primitive) that the drivers consult for
/// applicability checks and automatic gauge schedules.
#[derive(Clone)]
pub struct Integrand<R> {
    f: Arc<dyn Fn(R) -> R + Send + Sync>,
    meta: Option<IntegrandMeta<R>>,
}

#[derive(Clone)]
struct IntegrandMeta<R> {
    id: String,
    flags: EntryFlags,
    singular: SymbolicClosedSet<R>,
    primitive: Option<Arc<dyn Fn(R) -> R + Send + Sync>>,
}

impl<R: Real> Integrand<R> {
    pub fn from_fn(f: impl Fn(R) -> R + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            meta: None,
        }
    }

    pub fn eval(&self, x: R) -> R {
        (self.f)(x)
    }

    pub fn id(&self) -> Option<&str> {
        self.meta.as_ref().map(|m| m.id.as_str())
    }

    pub fn flags(&self) -> Option<EntryFlags> {
        self.meta.as_ref().map(|m| m.flags)
    }

    pub fn singular_set(&self) -> Option<&SymbolicClosedSet<R>> {
        self.meta.as_ref().map(|m| &m.singular)
    }

    pub fn primitive(&self) -> Option<Arc<dyn Fn(R) -> R + Send + Sync>> {
        self.meta.as_ref().and_then(|m| m.primitive.clone())
    }

    /// True when metadata flags the function unbounded somewhere on the
    /// closure of `interval`.
    pub fn flagged_unbounded_on(&self, interval: &Interval<R>) -> bool {
        let Some(meta) = &self.meta else {
            return false;
        };
        if meta.flags.bounded {
            return false;
        }
        let closure = interval.closure();
        meta.singular
            .sample_points(64)
            .iter()
            .any(|&x| closure.contains(x))
    }
}

impl<R: Real> From<&FunctionEntry<R>> for Integrand<R> {
    fn from(entry: &FunctionEntry<R>) -> Self {
        Self {
            f: entry.eval_fn(),
            meta: Some(IntegrandMeta {
                id: entry.canonical_id(),
                flags: entry.flags(),
                singular: entry.singular_set().clone(),
                primitive: entry.primitive_fn(),
            }),
        }
    }
}
