//! The ground-truth function corpus: classical pathological derivatives
//! packaged with their known primitives, singular-set metadata and
//! classification flags. Every integrator is validated against these.

mod entries;
mod manifest;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use entries::{
    baire1_approximation, cantor_function, cantor_value_exact, conditional_example,
    conditional_lobe_boundary, fat_union, phi0, phi_countable, phi_countable_uniform,
    phi_interval, rational_enumeration, volterra,
};
pub use manifest::{default_manifest, parse_entry_call, parse_manifest, ParamValue};

use crate::realsets::{Interval, SymbolicClosedSet};
use crate::scalar::Real;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CorpusError {
    #[error("invalid parameter: {detail}")]
    InvalidParameter { detail: String },

    #[error("construction needs a Cantor-like set, got {got}")]
    NeedsCantorLike { got: String },

    #[error("depth {depth} cannot certify the construction: {detail}")]
    DepthInsufficient { depth: u32, detail: String },

    #[error("entry has no primitive")]
    NoPrimitive,

    #[error("finite-difference admission check failed at x={x}: derivative {expected}, difference quotient {got}")]
    AdmissionFailed { x: f64, expected: f64, got: f64 },

    #[error("unknown corpus constructor '{name}'")]
    UnknownConstructor { name: String },

    #[error("corpus call parse error at byte {position}: {detail}")]
    Parse { position: usize, detail: String },
}

/// Classification flags for an entry's evaluable function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct EntryFlags {
    pub bounded: bool,
    pub continuous_ae: bool,
    pub derivative_everywhere: bool,
    pub absolutely_integrable: bool,
    /// Parameter sits exactly on a classification threshold; excluded from
    /// threshold property tests.
    pub boundary_case: bool,
}

/// An evaluable real function with metadata: the known primitive where one
/// exists, the singular set (points of unboundedness), classification
/// flags, and the construction parameters.
#[derive(Clone)]
pub struct FunctionEntry<R> {
    name: String,
    params: BTreeMap<String, String>,
    domain: Interval<R>,
    eval: Arc<dyn Fn(R) -> R + Send + Sync>,
    primitive: Option<Arc<dyn Fn(R) -> R + Send + Sync>>,
    singular_set: SymbolicClosedSet<R>,
    flags: EntryFlags,
    /// Known bound on |primitive| when the construction provides one.
    sup_bound: Option<R>,
    /// Bound on the truncation tail of the primitive for series entries.
    truncation_error: Option<R>,
}

impl<R: Real> fmt::Debug for FunctionEntry<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionEntry")
            .field("id", &self.canonical_id())
            .field("flags", &self.flags)
            .finish_non_exhaustive()
    }
}

impl<R: Real> FunctionEntry<R> {
    pub(crate) fn new(
        name: &str,
        params: BTreeMap<String, String>,
        domain: Interval<R>,
        eval: Arc<dyn Fn(R) -> R + Send + Sync>,
        primitive: Option<Arc<dyn Fn(R) -> R + Send + Sync>>,
        singular_set: SymbolicClosedSet<R>,
        flags: EntryFlags,
    ) -> Self {
        Self {
            name: name.to_string(),
            params,
            domain,
            eval,
            primitive,
            singular_set,
            flags,
            sup_bound: None,
            truncation_error: None,
        }
    }

    pub(crate) fn with_sup_bound(mut self, bound: R) -> Self {
        self.sup_bound = Some(bound);
        self
    }

    pub(crate) fn with_truncation_error(mut self, err: R) -> Self {
        self.truncation_error = Some(err);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &BTreeMap<String, String> {
        &self.params
    }

    /// Deterministic address: `name(key=value,...)` with sorted keys.
    pub fn canonical_id(&self) -> String {
        let args: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!("{}({})", self.name, args.join(","))
    }

    pub fn domain(&self) -> &Interval<R> {
        &self.domain
    }

    pub fn eval(&self, x: R) -> R {
        (self.eval)(x)
    }

    pub fn eval_fn(&self) -> Arc<dyn Fn(R) -> R + Send + Sync> {
        self.eval.clone()
    }

    pub fn has_primitive(&self) -> bool {
        self.primitive.is_some()
    }

    pub fn primitive_at(&self, x: R) -> Option<R> {
        self.primitive.as_ref().map(|f| f(x))
    }

    pub fn primitive_fn(&self) -> Option<Arc<dyn Fn(R) -> R + Send + Sync>> {
        self.primitive.clone()
    }

    /// `F(hi) - F(lo)` over an interval, when the primitive exists.
    pub fn primitive_delta(&self, interval: &Interval<R>) -> Option<R> {
        let f = self.primitive.as_ref()?;
        Some(f(interval.hi()) - f(interval.lo()))
    }

    pub fn singular_set(&self) -> &SymbolicClosedSet<R> {
        &self.singular_set
    }

    pub fn flags(&self) -> EntryFlags {
        self.flags
    }

    pub fn sup_bound(&self) -> Option<R> {
        self.sup_bound
    }

    pub fn truncation_error(&self) -> Option<R> {
        self.truncation_error
    }

    /// Corpus admission test: the central difference quotient of the
    /// primitive matches the evaluable function at `samples` random
    /// non-singular points (`h = 1e-6`, relative tolerance `1e-3` with an
    /// absolute floor of `1e-6`).
    pub fn spot_check(&self, seed: u64, samples: u32) -> Result<(), CorpusError> {
        let primitive = self.primitive.as_ref().ok_or(CorpusError::NoPrimitive)?;
        let mut rng = SplitMix64::new(seed ^ hash_id(&self.canonical_id()));
        let (a, b) = (self.domain.lo(), self.domain.hi());
        let h = R::of(1e-6);
        let guard = R::of(1e-2);
        let mut checked = 0u32;
        let mut attempts = 0u32;
        while checked < samples {
            attempts += 1;
            if attempts > samples * 200 {
                return Err(CorpusError::InvalidParameter {
                    detail: "could not find enough points clear of the singular set".into(),
                });
            }
            let t = R::of(rng.next_unit());
            let x = a + (b - a) * t;
            if x - h <= a || x + h >= b {
                continue;
            }
            if self.singular_set.contains_approx(x, guard, 12) {
                continue;
            }
            let fd = (primitive(x + h) - primitive(x - h)) / (R::of(2.0) * h);
            let fx = self.eval(x);
            if fx.is_nan() {
                continue;
            }
            let tol = R::of(1e-3) * fx.abs().max(R::one()) + R::of(1e-6);
            if (fd - fx).abs() > tol {
                return Err(CorpusError::AdmissionFailed {
                    x: x.as_f64(),
                    expected: fx.as_f64(),
                    got: fd.as_f64(),
                });
            }
            checked += 1;
        }
        Ok(())
    }
}

fn hash_id(id: &str) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for b in id.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x1000_0000_01b3);
    }
    h
}

/// Deterministic generator for admission sampling (seeded via the CLI's
/// GAUGEWORK_SEED).
pub(crate) struct SplitMix64(u64);

impl SplitMix64 {
    pub(crate) fn new(seed: u64) -> Self {
        Self(seed)
    }

    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in (0, 1).
    pub(crate) fn next_unit(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    }
}
