//! Desk-scale totalization: compose the transfinite Cauchy-Riemann driver
//! over the contiguous intervals of the singular set's perfect kernel and
//! combine with the Harnack extension. One level of perfect kernel is
//! supported; the kernel must be Cantor-like structure (possibly a union
//! of such sets).

use crate::corpus::FunctionEntry;
use crate::realsets::{Interval, SetError, SymbolicClosedSet};
use crate::scalar::Real;

use super::cauchy::{cauchy_riemann_omega, check_tol, degenerate};
use super::harnack::harnack_core;
use super::{IntegralResult, IntegrateError, Integrand, Method, Status, Trail};

/// Totalize `entry` over `interval`: the declared singular structure is
/// reduced through its perfect kernel. With an empty kernel the whole
/// answer is one transfinite Cauchy-Riemann pass; otherwise contiguous
/// intervals of the kernel are integrated and combined by the Harnack
/// extension, whose absolute-convergence test guards the reduction. If
/// the absolute series fails, the result is `Diverged` and the trail
/// names the best converged contiguous sub-interval.
pub fn totalize<R: Real>(
    entry: &FunctionEntry<R>,
    interval: &Interval<R>,
    depth: u32,
    tol: R,
) -> Result<IntegralResult<R>, IntegrateError> {
    check_tol(tol)?;
    if interval.is_empty() || interval.is_point() {
        return Ok(degenerate(Method::Totalize));
    }
    let f = Integrand::from(entry);
    let singular = entry.singular_set().restrict(interval)?;
    let (rank, kernel) = match singular.rank_and_kernel(64) {
        Ok(v) => v,
        Err(SetError::RankUndetermined { steps, .. }) => {
            let mut trail = Trail::default();
            trail.note(format!(
                "singular structure unresolved after {steps} derived-set steps"
            ));
            return Ok(IntegralResult::new(
                Method::Totalize,
                Status::Unconverged,
                R::zero(),
                tol,
                trail,
            ));
        }
        Err(e) => return Err(e.into()),
    };

    if kernel.is_empty_set() {
        let mut result = cauchy_riemann_omega(&f, interval, &singular, tol)?;
        result.method = Method::Totalize;
        result
            .trail
            .note("empty perfect kernel: one transfinite Cauchy-Riemann pass suffices");
        return Ok(result);
    }

    // One level of kernel nesting: the kernel itself must be Cantor-like
    // structure, not an interval or a deeper composite.
    if !kernel_is_cantor(&kernel) {
        return Err(IntegrateError::InvalidArgument {
            detail: format!(
                "perfect kernel with rank {:?} is not Cantor-like structure; deeper \
                 totalization levels are out of desk scope",
                rank.tag
            ),
        });
    }

    let detail = harnack_core(&f, interval, &kernel, depth, tol)?;
    let mut result = detail.result;
    result.method = Method::Totalize;
    result
        .trail
        .note("kernel reduction: contiguous Cauchy-Riemann passes combined by the Harnack extension");
    if result.status == Status::Diverged {
        // The reduction always holds on some sub-interval meeting the
        // kernel; report the best one found.
        let best = detail
            .pieces
            .iter()
            .filter(|(_, status, _)| *status == Status::Converged)
            .max_by(|a, b| a.0.length().partial_cmp(&b.0.length()).unwrap());
        if let Some((gap, _, value)) = best {
            result.trail.note(format!(
                "largest converged contiguous sub-interval [{}, {}] with contribution {}",
                gap.lo(),
                gap.hi(),
                value
            ));
        }
    }
    Ok(result)
}

fn kernel_is_cantor<R: Real>(kernel: &SymbolicClosedSet<R>) -> bool {
    match kernel {
        SymbolicClosedSet::CantorLike(_) => true,
        SymbolicClosedSet::Union(members) => members
            .iter()
            .all(|m| matches!(m, SymbolicClosedSet::CantorLike(_))),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::realsets::EpsilonSeq;
    use crate::scalar::ratio;

    fn unit() -> Interval<f64> {
        Interval::closed(0.0, 1.0).unwrap()
    }

    #[test]
    fn volterra_with_unbounded_but_integrable_pieces_totals_zero() {
        // alpha = 2, beta = 1.5: unbounded on the set (alpha < beta + 1)
        // but absolutely integrable near it (alpha > beta); contiguous
        // contributions telescope to zero.
        let k = SymbolicClosedSet::cantor_like(&unit(), EpsilonSeq::Const(ratio(1, 3))).unwrap();
        let entry = corpus::volterra(&k, 2.0, 1.5, 8).unwrap();
        assert!(!entry.flags().bounded);
        let r = totalize(&entry, &unit(), 8, 1e-6).unwrap();
        assert_eq!(r.status, Status::Converged, "notes {:?}", r.trail.notes);
        assert!(r.value.abs() < 1e-6, "value {}", r.value);
    }

    #[test]
    fn empty_kernel_degenerates_to_transfinite_pass() {
        let entry = corpus::phi0::<f64>(2.0, 2.0).unwrap();
        let r = totalize(&entry, &unit(), 8, 1e-5).unwrap();
        assert_eq!(r.method, Method::Totalize);
        assert_eq!(r.status, Status::Converged);
        assert!((r.value - 1.0f64.sin()).abs() < 1e-4, "value {}", r.value);
        let f = Integrand::from(&entry);
        let cr = cauchy_riemann_omega(&f, &unit(), entry.singular_set(), 1e-5).unwrap();
        assert!((r.value - cr.value).abs() < 1e-9);
    }

    #[test]
    fn fat_union_matches_truncated_primitive() {
        let entry = corpus::fat_union::<f64>(3, 2.0, 2.0, 6).unwrap();
        let expect = entry.primitive_delta(&unit()).unwrap();
        let tail = entry.truncation_error().unwrap();
        let r = totalize(&entry, &unit(), 6, 1e-5).unwrap();
        assert_eq!(r.status, Status::Converged, "notes {:?}", r.trail.notes);
        assert!(
            (r.value - expect).abs() <= r.error_estimate + tail + 1e-5,
            "value {} vs {expect}",
            r.value
        );
    }
}
