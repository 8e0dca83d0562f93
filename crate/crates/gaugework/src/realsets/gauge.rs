use std::fmt;
use std::sync::Arc;

use crate::scalar::Real;

use super::SetError;

/// A gauge: a strictly positive function on the ambient interval, used by
/// the fineness predicates and by gauge-based partition construction.
///
/// The callable may signal that no positive value exists at a point (for
/// derivative-built gauges at points where the derivative fails); callers
/// decide how to recover, typically by tagging that point directly.
#[derive(Clone)]
pub struct Gauge<R> {
    delta: Arc<dyn Fn(R) -> Result<R, SetError> + Send + Sync>,
    lower_hint: Option<R>,
}

impl<R: Real> fmt::Debug for Gauge<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Gauge")
            .field("lower_hint", &self.lower_hint)
            .finish_non_exhaustive()
    }
}

impl<R: Real> Gauge<R> {
    /// Gauge from a plain positive function.
    pub fn from_fn(delta: impl Fn(R) -> R + Send + Sync + 'static) -> Self {
        Self {
            delta: Arc::new(move |x| Ok(delta(x))),
            lower_hint: None,
        }
    }

    /// Gauge from a function that may fail at individual points.
    pub fn from_fallible(
        delta: impl Fn(R) -> Result<R, SetError> + Send + Sync + 'static,
    ) -> Self {
        Self {
            delta: Arc::new(delta),
            lower_hint: None,
        }
    }

    /// Constant gauge.
    pub fn constant(delta: R) -> Self {
        Self {
            delta: Arc::new(move |_| Ok(delta)),
            lower_hint: Some(delta),
        }
    }

    pub fn with_lower_hint(mut self, hint: R) -> Self {
        self.lower_hint = Some(hint);
        self
    }

    /// Optional positive lower bound, when one is known.
    pub fn lower_hint(&self) -> Option<R> {
        self.lower_hint
    }

    /// Evaluate the gauge; rejects nonpositive or non-finite values.
    pub fn eval(&self, x: R) -> Result<R, SetError> {
        let d = (self.delta)(x)?;
        if !(d > R::zero()) || d.is_nan() {
            return Err(SetError::GaugeNotPositive { at: x.as_f64() });
        }
        Ok(d)
    }

    /// Pointwise half of this gauge (still a valid gauge).
    pub fn halved(&self) -> Self {
        let inner = self.delta.clone();
        Self {
            delta: Arc::new(move |x| inner(x).map(|d| d / R::of(2.0))),
            lower_hint: self.lower_hint.map(|h| h / R::of(2.0)),
        }
    }
}
