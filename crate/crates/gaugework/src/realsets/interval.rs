use serde::{Deserialize, Serialize};

use crate::scalar::Real;

use super::SetError;

/// An interval of the real line with open/closed endpoint flags.
///
/// Invariants: `lo <= hi`, and `lo == hi` only with both endpoints closed
/// (a degenerate point). The empty interval is a distinct value, never a
/// reversed pair of endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval<R> {
    lo: R,
    hi: R,
    lo_closed: bool,
    hi_closed: bool,
    empty: bool,
}

impl<R: Real> Interval<R> {
    /// General constructor. Degenerate half-open or open intervals normalize
    /// to the empty value; reversed endpoints are rejected.
    pub fn new(lo: R, hi: R, lo_closed: bool, hi_closed: bool) -> Result<Self, SetError> {
        if lo.is_nan() || hi.is_nan() {
            return Err(SetError::InvalidInterval {
                detail: "endpoint is NaN".into(),
            });
        }
        if lo > hi {
            return Err(SetError::InvalidInterval {
                detail: format!("lo {lo} exceeds hi {hi}"),
            });
        }
        if lo == hi && !(lo_closed && hi_closed) {
            return Ok(Self::empty());
        }
        Ok(Self {
            lo,
            hi,
            lo_closed,
            hi_closed,
            empty: false,
        })
    }

    /// Closed interval `[lo, hi]`.
    pub fn closed(lo: R, hi: R) -> Result<Self, SetError> {
        Self::new(lo, hi, true, true)
    }

    /// Open interval `(lo, hi)`.
    pub fn open(lo: R, hi: R) -> Result<Self, SetError> {
        Self::new(lo, hi, false, false)
    }

    /// Degenerate point `[x, x]`.
    pub fn point(x: R) -> Self {
        Self {
            lo: x,
            hi: x,
            lo_closed: true,
            hi_closed: true,
            empty: false,
        }
    }

    /// The distinct empty value.
    pub fn empty() -> Self {
        Self {
            lo: R::zero(),
            hi: R::zero(),
            lo_closed: false,
            hi_closed: false,
            empty: true,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn is_point(&self) -> bool {
        !self.empty && self.lo == self.hi
    }

    pub fn lo(&self) -> R {
        self.lo
    }

    pub fn hi(&self) -> R {
        self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    /// `hi - lo`, zero for the empty interval.
    pub fn length(&self) -> R {
        if self.empty {
            R::zero()
        } else {
            self.hi - self.lo
        }
    }

    pub fn midpoint(&self) -> R {
        (self.lo + self.hi) / R::of(2.0)
    }

    pub fn contains(&self, x: R) -> bool {
        if self.empty {
            return false;
        }
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    /// Closure of the interval (always closed, same endpoints).
    pub fn closure(&self) -> Self {
        if self.empty {
            *self
        } else {
            Self {
                lo_closed: true,
                hi_closed: true,
                ..*self
            }
        }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        if self.empty || other.empty {
            return Self::empty();
        }
        let (lo, lo_closed) = if self.lo > other.lo {
            (self.lo, self.lo_closed)
        } else if other.lo > self.lo {
            (other.lo, other.lo_closed)
        } else {
            (self.lo, self.lo_closed && other.lo_closed)
        };
        let (hi, hi_closed) = if self.hi < other.hi {
            (self.hi, self.hi_closed)
        } else if other.hi < self.hi {
            (other.hi, other.hi_closed)
        } else {
            (self.hi, self.hi_closed && other.hi_closed)
        };
        if lo > hi || (lo == hi && !(lo_closed && hi_closed)) {
            Self::empty()
        } else {
            Self {
                lo,
                hi,
                lo_closed,
                hi_closed,
                empty: false,
            }
        }
    }

    /// Distance from `x` to the closure of the interval.
    pub fn distance_to(&self, x: R) -> R {
        if self.empty {
            return R::infinity();
        }
        if x < self.lo {
            self.lo - x
        } else if x > self.hi {
            x - self.hi
        } else {
            R::zero()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_open_normalizes_to_empty() {
        let i = Interval::open(2.0, 2.0).unwrap();
        assert!(i.is_empty());
        assert_eq!(i.length(), 0.0);
    }

    #[test]
    fn reversed_endpoints_rejected() {
        assert!(Interval::closed(1.0, 0.0).is_err());
    }

    #[test]
    fn point_interval_is_closed_and_contained() {
        let p = Interval::point(0.5);
        assert!(p.is_point());
        assert!(p.contains(0.5));
        assert!(!p.contains(0.5 + 1e-12));
    }

    #[test]
    fn containment_respects_flags() {
        let half = Interval::new(0.0, 1.0, true, false).unwrap();
        assert!(half.contains(0.0));
        assert!(!half.contains(1.0));
    }

    #[test]
    fn intersect_takes_stricter_flags() {
        let a = Interval::new(0.0, 1.0, true, false).unwrap();
        let b = Interval::closed(0.5, 2.0).unwrap();
        let c = a.intersect(&b);
        assert_eq!(c.lo(), 0.5);
        assert_eq!(c.hi(), 1.0);
        assert!(c.lo_closed());
        assert!(!c.hi_closed());
    }

    #[test]
    fn distance_to_endpoints() {
        let i = Interval::closed(0.0f64, 0.1).unwrap();
        assert!((i.distance_to(0.5) - 0.4).abs() < 1e-15);
        assert_eq!(i.distance_to(0.05), 0.0);
    }
}
