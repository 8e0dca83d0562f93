//! Measure of symbolic closed sets and of enumerated open sets.

use serde::{Deserialize, Serialize};

use crate::scalar::{rational_to_real, Real};
use crate::sum::compensated_sum;

use super::symbolic::SymbolicClosedSet;
use super::{Interval, SetError};

/// A measure value with an error bound and convergence status.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureEstimate<R> {
    pub value: R,
    /// Bound on the distance to the true measure. For unconverged
    /// estimates this brackets the limit: it lies in
    /// `[value - error_bound, value]`.
    pub error_bound: R,
    pub converged: bool,
    pub terms_used: u32,
}

impl<R: Real> MeasureEstimate<R> {
    fn exact(value: R) -> Self {
        Self {
            value,
            error_bound: R::zero(),
            converged: true,
            terms_used: 0,
        }
    }
}

/// Default tolerance for measure partial products.
pub const MEASURE_DEFAULT_TOL: f64 = 1e-10;
/// Default cap on the number of product terms.
pub const MEASURE_DEFAULT_MAX_TERMS: u32 = 1_000_000;

/// Measure of a symbolic closed set.
///
/// Exact for finite unions of intervals and points; countable sets report
/// zero. Cantor sets use the partial products of the remaining-length
/// recurrence, stopping when consecutive products differ by less than
/// `tol` or when `max_terms` is hit (then flagged unconverged, with the
/// bracketing gap in `error_bound`). Unions of members with overlapping
/// positive-measure parts are not representable and fail loudly.
pub fn set_measure<R: Real>(
    set: &SymbolicClosedSet<R>,
    tol: R,
    max_terms: u32,
) -> Result<MeasureEstimate<R>, SetError> {
    if !(tol > R::zero()) {
        return Err(SetError::InvalidTolerance {
            detail: "measure tolerance must be positive".into(),
        });
    }
    match set {
        SymbolicClosedSet::Empty
        | SymbolicClosedSet::FinitePoints(_)
        | SymbolicClosedSet::OmegaSeq(_)
        | SymbolicClosedSet::RankTower(_) => Ok(MeasureEstimate::exact(R::zero())),
        SymbolicClosedSet::ClosedInterval(i) => Ok(MeasureEstimate::exact(i.length())),
        SymbolicClosedSet::CantorLike(c) => {
            let base = rational_to_real::<R>(c.hi()) - rational_to_real::<R>(c.lo());
            let mut product = R::one();
            let mut terms = 0u32;
            let mut converged = false;
            while terms < max_terms {
                terms += 1;
                let eps = rational_to_real::<R>(&c.eps().eps(terms)?);
                let next = product * (R::one() - eps);
                let step = (product - next) * base;
                product = next;
                if step < tol && terms >= 2 {
                    converged = true;
                    break;
                }
            }
            let value = product * base;
            // Remaining-product bracket: the limit lies in
            // [value * (1 - tail), value] when the epsilon tail is summable,
            // and in [0, value] otherwise.
            let error_bound = match c.eps().tail_sum_bound(terms) {
                Some(tail) => {
                    let t = rational_to_real::<R>(&tail).min(R::one());
                    value * t
                }
                None => value,
            };
            if converged && value < tol {
                // Thin constructions report plain zero once below tolerance.
                return Ok(MeasureEstimate {
                    value: R::zero(),
                    error_bound: value,
                    converged: true,
                    terms_used: terms,
                });
            }
            Ok(MeasureEstimate {
                value,
                error_bound,
                converged,
                terms_used: terms,
            })
        }
        SymbolicClosedSet::Union(members) => {
            // Positive-measure members must be pairwise non-overlapping for
            // member-wise addition to be exact.
            let mut hulls: Vec<Interval<R>> = Vec::new();
            let mut total = R::zero();
            let mut error = R::zero();
            let mut converged = true;
            let mut terms = 0u32;
            for m in members {
                let est = set_measure(m, tol, max_terms)?;
                if est.value > R::zero() || positive_measure_possible(m) {
                    let h = m.hull();
                    for other in &hulls {
                        let overlap = h.intersect(other);
                        if !overlap.is_empty() && !overlap.is_point() {
                            return Err(SetError::Inexpressible {
                                detail: "union members with overlapping positive-measure \
                                         hulls; measure the complement enumeration instead"
                                    .into(),
                            });
                        }
                    }
                    hulls.push(h);
                }
                total = total + est.value;
                error = error + est.error_bound;
                converged &= est.converged;
                terms = terms.max(est.terms_used);
            }
            Ok(MeasureEstimate {
                value: total,
                error_bound: error,
                converged,
                terms_used: terms,
            })
        }
    }
}

fn positive_measure_possible<R: Real>(set: &SymbolicClosedSet<R>) -> bool {
    matches!(
        set,
        SymbolicClosedSet::ClosedInterval(_) | SymbolicClosedSet::CantorLike(_)
    ) || matches!(set, SymbolicClosedSet::Union(_))
}

/// Exact measure of an enumerated open (or any) set given as intervals:
/// overlaps are merged before summing lengths.
pub fn measure_open_enumeration<R: Real>(intervals: &[Interval<R>]) -> R {
    let mut parts: Vec<Interval<R>> = intervals.iter().filter(|i| !i.is_empty()).copied().collect();
    parts.sort_by(|a, b| a.lo().partial_cmp(&b.lo()).unwrap());
    let mut merged: Vec<(R, R)> = Vec::with_capacity(parts.len());
    for p in parts {
        match merged.last_mut() {
            Some((_, hi)) if p.lo() <= *hi => {
                if p.hi() > *hi {
                    *hi = p.hi();
                }
            }
            _ => merged.push((p.lo(), p.hi())),
        }
    }
    compensated_sum(merged.into_iter().map(|(lo, hi)| hi - lo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realsets::cantor::{CantorLike, EpsilonSeq};
    use crate::scalar::ratio;

    fn unit() -> Interval<f64> {
        Interval::closed(0.0, 1.0).unwrap()
    }

    fn ternary() -> SymbolicClosedSet<f64> {
        SymbolicClosedSet::cantor_like(&unit(), EpsilonSeq::Const(ratio(1, 3))).unwrap()
    }

    #[test]
    fn ternary_measures_zero() {
        let est = set_measure(&ternary(), 1e-10, 1_000_000).unwrap();
        assert_eq!(est.value, 0.0);
        assert!(est.converged);
    }

    #[test]
    fn ternary_partial_products_below_tolerance_by_depth_60() {
        let c = CantorLike::new(ratio(0, 1), ratio(1, 1), EpsilonSeq::Const(ratio(1, 3))).unwrap();
        let p: f64 = c.measure_partial(60).unwrap();
        assert!(p < 1e-10, "partial product at depth 60 is {p}");
    }

    #[test]
    fn fat_cantor_measures_two_over_pi() {
        // theta = pi/2: eps_n = 1/(4 n^2), infinite product sin(theta)/theta.
        let fat = SymbolicClosedSet::cantor_like(
            &unit(),
            EpsilonSeq::InverseSquare(ratio(1, 4)),
        )
        .unwrap();
        let est = set_measure(&fat, 1e-6, 100_000).unwrap();
        assert!(est.converged);
        assert!((est.value - 2.0 / std::f64::consts::PI).abs() < 1e-3);
        assert!(est.terms_used <= 100_000);
    }

    #[test]
    fn countable_sets_measure_zero() {
        let pts = SymbolicClosedSet::finite_points((0..1000).map(|k| k as f64 / 1000.0));
        let est = set_measure(&pts, 1e-10, 10).unwrap();
        assert_eq!(est.value, 0.0);
        assert_eq!(est.error_bound, 0.0);
    }

    #[test]
    fn disjoint_union_adds_exactly() {
        let u = SymbolicClosedSet::union([
            SymbolicClosedSet::ClosedInterval(Interval::closed(0.0, 0.25).unwrap()),
            SymbolicClosedSet::ClosedInterval(Interval::closed(0.5, 1.0).unwrap()),
        ]);
        let est = set_measure(&u, 1e-10, 10).unwrap();
        assert_eq!(est.value, 0.75);
    }

    #[test]
    fn overlapping_positive_members_fail_loudly() {
        let u = SymbolicClosedSet::Union(vec![
            ternary(),
            SymbolicClosedSet::cantor_like(&unit(), EpsilonSeq::InverseSquare(ratio(1, 4)))
                .unwrap(),
        ]);
        assert!(matches!(
            set_measure(&u, 1e-10, 100),
            Err(SetError::Inexpressible { .. })
        ));
    }

    #[test]
    fn open_enumeration_merges_overlaps() {
        let m: f64 = measure_open_enumeration(&[
            Interval::open(0.0, 0.5).unwrap(),
            Interval::open(0.25, 0.75).unwrap(),
        ]);
        assert!((m - 0.75).abs() < 1e-15);
    }

    #[test]
    fn unconverged_reports_bracket() {
        // Very tight tolerance with a tiny term cap: flagged unconverged.
        let fat = SymbolicClosedSet::cantor_like(
            &unit(),
            EpsilonSeq::InverseSquare(ratio(1, 4)),
        )
        .unwrap();
        let est = set_measure(&fat, 1e-14, 5).unwrap();
        assert!(!est.converged);
        assert!(est.error_bound > 0.0);
        let limit = 2.0 / std::f64::consts::PI;
        assert!(est.value >= limit);
        assert!(est.value - est.error_bound <= limit);
    }
}
