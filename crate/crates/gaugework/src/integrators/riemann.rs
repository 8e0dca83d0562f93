//! The Riemann integral as a numerical procedure: nested uniform
//! partitions with halving norms, midpoint tags for the value and a
//! left-endpoint tag family as an integrability probe (the definition
//! quantifies over all tag choices, so disagreeing families refute
//! integrability at the working resolution).

use crate::realsets::Interval;
use crate::scalar::Real;

use super::cauchy::{check_tol, degenerate};
use super::extrapolate::limit_extrapolate;
use super::quad::{uniform_sums, QuadCtx, QuadFault};
use super::{IntegralResult, IntegrateError, Integrand, Method, Status, Trail};

/// Halving stages (finest uniform partition has `2^MAX_STAGES` cells).
const MAX_STAGES: u32 = 21;
const EVAL_BUDGET: u64 = 30_000_000;

/// Riemann integration of `f` over `interval` to tolerance `tol`.
///
/// Functions flagged unbounded on the interval are `NotApplicable`
/// (boundedness is necessary for Riemann integrability). Convergence
/// requires the extrapolated midpoint and left-endpoint families to agree
/// within `tol`.
pub fn riemann<R: Real>(
    f: &Integrand<R>,
    interval: &Interval<R>,
    tol: R,
) -> Result<IntegralResult<R>, IntegrateError> {
    check_tol(tol)?;
    if interval.is_empty() || interval.is_point() {
        return Ok(degenerate(Method::Riemann));
    }
    if f.flagged_unbounded_on(interval) {
        return Ok(IntegralResult::not_applicable(
            Method::Riemann,
            "integrand is flagged unbounded on the interval; Riemann integrability requires boundedness",
        ));
    }
    let (lo, hi) = (interval.lo(), interval.hi());
    let mut ctx = QuadCtx::new(EVAL_BUDGET);
    let mut mid_sums: Vec<R> = Vec::new();
    let mut left_sums: Vec<R> = Vec::new();
    let mut trail = Trail::default();
    trail.set_default("tol", tol.as_f64());

    for stage in 0..=MAX_STAGES {
        let cells = 1u64 << stage;
        let (mid, left) = match uniform_sums(&|x| f.eval(x), lo, hi, cells, &mut ctx) {
            Ok(v) => v,
            Err(QuadFault::Budget) => break,
            Err(QuadFault::Eval(x)) => return Err(IntegrateError::EvalFailure { at: x }),
        };
        mid_sums.push(mid);
        left_sums.push(left);
        trail.partition_cells.push(cells);

        // Exact stabilization across tag families (constants and step-free
        // integrands): converged at the first repeated partition.
        if stage >= 1 {
            let n = mid_sums.len();
            if mid_sums[n - 1] == mid_sums[n - 2]
                && left_sums[n - 1] == left_sums[n - 2]
                && mid_sums[n - 1] == left_sums[n - 1]
            {
                trail.sums = mid_sums.clone();
                trail.note("tag families exactly stable");
                return Ok(IntegralResult::new(
                    Method::Riemann,
                    Status::Converged,
                    mid_sums[n - 1],
                    R::zero(),
                    trail,
                ));
            }
        }

        if mid_sums.len() >= 4 {
            let m = limit_extrapolate(&mid_sums, tol)?;
            if m.status == Status::Diverged {
                trail.sums = mid_sums.clone();
                trail.witness = mid_sums.clone();
                trail.note("midpoint sums grow without contraction");
                return Ok(IntegralResult::new(
                    Method::Riemann,
                    Status::Diverged,
                    m.value,
                    m.error,
                    trail,
                ));
            }
            let l = limit_extrapolate(&left_sums, tol)?;
            let gap = (m.value - l.value).abs();
            if m.status == Status::Converged
                && l.status == Status::Converged
                && m.error <= tol
                && gap <= tol
            {
                trail.sums = mid_sums.clone();
                trail.extrapolation = m.estimates.clone();
                trail.note(format!(
                    "tag-family agreement gap {:e}",
                    gap.as_f64()
                ));
                return Ok(IntegralResult::new(
                    Method::Riemann,
                    Status::Converged,
                    m.value,
                    m.error.max(gap),
                    trail,
                ));
            }
        }
    }
    trail.sums = mid_sums.clone();
    trail.note("halving stages exhausted before the families agreed");
    let (value, error) = match limit_extrapolate(&mid_sums, tol) {
        Ok(e) => (e.value, e.error),
        Err(_) => (
            mid_sums.last().copied().unwrap_or_else(R::zero),
            tol,
        ),
    };
    Ok(IntegralResult::new(
        Method::Riemann,
        Status::Unconverged,
        value,
        error,
        trail,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn unit() -> Interval<f64> {
        Interval::closed(0.0, 1.0).unwrap()
    }

    #[test]
    fn square_integrates_to_third() {
        let f = Integrand::from_fn(|x: f64| x * x);
        let r = riemann(&f, &unit(), 1e-9).unwrap();
        assert_eq!(r.status, Status::Converged);
        assert!((r.value - 1.0 / 3.0).abs() < 1e-9, "value {}", r.value);
    }

    #[test]
    fn unbounded_entry_is_not_applicable() {
        let entry = corpus::phi0::<f64>(2.0, 2.0).unwrap();
        let f = Integrand::from(&entry);
        let r = riemann(&f, &unit(), 1e-6).unwrap();
        assert_eq!(r.status, Status::NotApplicable);
    }

    #[test]
    fn constant_exact_at_first_partitions() {
        let f = Integrand::from_fn(|_: f64| 2.5);
        let r = riemann(&f, &Interval::closed(1.0, 3.0).unwrap(), 1e-12).unwrap();
        assert_eq!(r.status, Status::Converged);
        assert_eq!(r.value, 5.0);
        assert_eq!(r.error_estimate, 0.0);
        assert!(r.trail.partition_cells.len() <= 2);
    }

    #[test]
    fn bounded_smooth_entry_matches_primitive() {
        let entry = corpus::phi0::<f64>(4.0, 2.0).unwrap();
        let f = Integrand::from(&entry);
        let r = riemann(&f, &unit(), 1e-7).unwrap();
        assert_eq!(r.status, Status::Converged);
        let expect = entry.primitive_at(1.0).unwrap();
        assert!((r.value - expect).abs() < 1e-6, "value {}", r.value);
    }

    #[test]
    fn degenerate_interval_is_zero() {
        let f = Integrand::from_fn(|x: f64| x);
        let r = riemann(&f, &Interval::point(0.3), 1e-9).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.status, Status::Converged);
    }
}
