//! The Harnack extension: integrate over a perfect set's complement as a
//! series of transfinite Cauchy-Riemann integrals over the contiguous
//! intervals, plus the set's own indicator term. The series must converge
//! absolutely (the contiguous ordering is arbitrary, so a conditionally
//! convergent arrangement has no canonical value); failure of the
//! absolute test while the signed sum settles is the divergence verdict.

use crate::realsets::{set_measure, Interval, SymbolicClosedSet, MEASURE_DEFAULT_MAX_TERMS};
use crate::scalar::Real;
use crate::sum::CompensatedSum;

use super::cauchy::{check_tol, degenerate, symbolic_core, worst, Piece};
use super::quad::{adaptive_midpoint, QuadCtx, QuadFault};
use super::{IntegralResult, IntegrateError, Integrand, Method, Status, Trail};

const EVAL_BUDGET: u64 = 40_000_000;
const QUAD_DEPTH: u32 = 44;
const RECURSION_GUARD: u32 = 16;

pub(crate) struct HarnackDetail<R> {
    pub result: IntegralResult<R>,
    /// Per-contiguous-interval outcomes in enumeration order.
    pub pieces: Vec<(Interval<R>, Status, R)>,
}

/// Harnack integration of `f` over `interval` relative to the perfect set
/// `p`, with contiguous intervals enumerated to `depth`.
pub fn harnack<R: Real>(
    f: &Integrand<R>,
    interval: &Interval<R>,
    p: &SymbolicClosedSet<R>,
    depth: u32,
    tol: R,
) -> Result<IntegralResult<R>, IntegrateError> {
    harnack_core(f, interval, p, depth, tol).map(|d| d.result)
}

pub(crate) fn harnack_core<R: Real>(
    f: &Integrand<R>,
    interval: &Interval<R>,
    p: &SymbolicClosedSet<R>,
    depth: u32,
    tol: R,
) -> Result<HarnackDetail<R>, IntegrateError> {
    check_tol(tol)?;
    if interval.is_empty() || interval.is_point() {
        return Ok(HarnackDetail {
            result: degenerate(Method::Harnack),
            pieces: Vec::new(),
        });
    }
    let canonical = p.canonicalized();
    let (_, kernel) = canonical.rank_and_kernel(64)?;
    if kernel != canonical || canonical.is_empty_set() {
        return Err(IntegrateError::InvalidArgument {
            detail: "harnack extension needs a nonempty perfect set".into(),
        });
    }

    let mut ctx = QuadCtx::new(EVAL_BUDGET);
    let mut trail = Trail::default();
    trail.set_default("tol", tol.as_f64());
    trail.set_default("depth", depth as f64);

    let contiguous = canonical.contiguous_intervals(interval, depth)?;
    let total_len: R = contiguous
        .iter()
        .fold(R::zero(), |acc, i| acc + i.length());

    // Per-interval transfinite Cauchy-Riemann contributions. The singular
    // structure inside each contiguous interval is reducible: the entry's
    // declared set restricted there, or the contiguous endpoints (points
    // of the perfect set) for bare callables.
    let mut pieces: Vec<(Interval<R>, Status, R)> = Vec::new();
    let mut piece_values: Vec<(usize, R, R)> = Vec::new();
    let mut status = Status::Converged;
    let mut piece_error = CompensatedSum::new();
    for (idx, gap) in contiguous.iter().enumerate() {
        let piece_tol = (tol * gap.length() / total_len).max(tol * R::of(1e-4));
        let endpoint_set =
            SymbolicClosedSet::finite_points([gap.lo(), gap.hi()]);
        let singular = match f.singular_set() {
            Some(s) => match s.restrict(gap) {
                Ok(r) => SymbolicClosedSet::union([r, endpoint_set]),
                Err(_) => endpoint_set,
            },
            None => endpoint_set,
        };
        let piece: Piece<R> = symbolic_core(
            f,
            gap.lo(),
            gap.hi(),
            &singular,
            piece_tol,
            RECURSION_GUARD,
            &mut ctx,
        )?;
        status = worst(status, piece.status);
        pieces.push((*gap, piece.status, piece.value));
        piece_values.push((idx, piece.value, piece.error));
        piece_error.add(piece.error);
        if piece.status == Status::Diverged {
            trail.note(format!(
                "contiguous interval [{}, {}] diverges",
                gap.lo(),
                gap.hi()
            ));
            break;
        }
    }

    // Reduction order: descending magnitude, ties by enumeration index,
    // compensated summation. The ordering is part of the contract so the
    // reduction is bit-stable.
    piece_values.sort_by(|a, b| {
        b.1.abs()
            .partial_cmp(&a.1.abs())
            .unwrap()
            .then(a.0.cmp(&b.0))
    });
    let mut signed = CompensatedSum::new();
    let mut absolute_partials: Vec<R> = Vec::with_capacity(piece_values.len());
    let mut absolute = CompensatedSum::new();
    for (_, v, _) in &piece_values {
        signed.add(*v);
        absolute.add(v.abs());
        absolute_partials.push(absolute.value());
        trail.push_contribution(*v);
    }
    trail.note("contributions reduced in descending-magnitude order");

    // Absolute-convergence requirement.
    let count = piece_values.len();
    if count >= 4 && status != Status::Diverged {
        let tail_len = (count / 4).max(1);
        let tail: R = piece_values[count - tail_len..]
            .iter()
            .fold(R::zero(), |acc, (_, v, _)| acc + v.abs());
        if tail > tol {
            let prev: R = piece_values
                [count.saturating_sub(2 * tail_len)..count - tail_len]
                .iter()
                .fold(R::zero(), |acc, (_, v, _)| acc + v.abs());
            let ratio = if prev > R::zero() { tail / prev } else { R::one() };
            if ratio >= R::of(0.9) {
                status = Status::Diverged;
                trail.witness = absolute_partials.clone();
                trail.note(
                    "absolute contribution series fails to contract while the signed sum settles",
                );
            } else {
                status = worst(status, Status::Unconverged);
                let tail_bound = tail * ratio / (R::one() - ratio);
                trail.note(format!(
                    "enumeration depth leaves an unresolved absolute tail; geometric bound {:e}",
                    tail_bound.as_f64()
                ));
                piece_error.add(tail_bound);
            }
        }
    }

    // Indicator term over the set itself: zero when the set has measure
    // below tolerance, otherwise a depth-truncated covering quadrature.
    let mut indicator = R::zero();
    let mut indicator_gap = R::zero();
    let measure = set_measure(&canonical, tol, MEASURE_DEFAULT_MAX_TERMS);
    match measure {
        Ok(m) if m.value <= tol => {
            trail.note("perfect set has measure below tolerance; indicator term is zero");
        }
        Ok(m) => {
            let covering = canonical.covering_at_depth(depth)?;
            let mut cover_len = R::zero();
            let mut term = CompensatedSum::new();
            let mut scale = R::zero();
            for c in &covering {
                if c.is_point() {
                    continue;
                }
                cover_len = cover_len + c.length();
                let q = match adaptive_midpoint(
                    &|x| f.eval(x),
                    c.lo(),
                    c.hi(),
                    tol * c.length(),
                    QUAD_DEPTH,
                    &mut ctx,
                ) {
                    Ok(q) => q,
                    Err(QuadFault::Budget) => {
                        status = worst(status, Status::Unconverged);
                        trail.note("indicator-term budget exhausted");
                        break;
                    }
                    Err(QuadFault::Eval(x)) => {
                        return Err(IntegrateError::EvalFailure { at: x })
                    }
                };
                term.add(q.value);
                scale = scale.max(f.eval(c.midpoint()).abs());
            }
            indicator = term.value();
            indicator_gap = (cover_len - m.value + m.error_bound).max(R::zero()) * scale;
            trail.note(format!(
                "indicator term over depth-{depth} covering; truncation gap bound {:e}",
                indicator_gap.as_f64()
            ));
        }
        Err(e) => {
            return Err(e.into());
        }
    }

    let value = indicator + signed.value();
    let error = piece_error.value() + indicator_gap;
    trail.sums = absolute_partials;
    let result = IntegralResult::new(Method::Harnack, status, value, error, trail);
    Ok(HarnackDetail { result, pieces })
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

    fn ternary() -> SymbolicClosedSet<f64> {
        SymbolicClosedSet::cantor_like(&unit(), EpsilonSeq::Const(ratio(1, 3))).unwrap()
    }

    #[test]
    fn volterra_contributions_telescope_to_zero() {
        let k = ternary();
        let entry = corpus::volterra(&k, 4.0, 2.0, 8).unwrap();
        let f = Integrand::from(&entry);
        let r = harnack(&f, &unit(), &k, 8, 1e-8).unwrap();
        assert_eq!(r.status, Status::Converged, "notes {:?}", r.trail.notes);
        assert!(r.value.abs() < 1e-8, "value {}", r.value);
    }

    #[test]
    fn constant_function_reconstructs_interval_length() {
        let f = Integrand::from_fn(|_: f64| 1.0);
        let r = harnack(&f, &unit(), &ternary(), 14, 1e-4).unwrap();
        assert_eq!(r.status, Status::Converged, "notes {:?}", r.trail.notes);
        assert!((r.value - 1.0).abs() < 1e-3, "value {}", r.value);
    }

    #[test]
    fn harmonic_amplitudes_diverge() {
        // Bump of unit mass on contiguous interval n, scaled 1/n with
        // alternating signs: the signed series settles, the absolute one
        // is harmonic.
        let k = ternary();
        let contiguous = k.contiguous_intervals(&unit(), 10).unwrap();
        let mut by_len = contiguous.clone();
        by_len.sort_by(|a, b| b.length().partial_cmp(&a.length()).unwrap());
        let pieces: Vec<(f64, f64, f64)> = by_len
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let n = (i + 1) as f64;
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                (g.lo(), g.hi(), sign / n)
            })
            .collect();
        let f = Integrand::from_fn(move |x: f64| {
            for &(lo, hi, amp) in &pieces {
                if x > lo && x < hi {
                    let t = (x - lo) / (hi - lo);
                    let bump = 1.0 - (2.0 * std::f64::consts::PI * t).cos();
                    return amp * bump / (hi - lo);
                }
            }
            0.0
        });
        let r = harnack(&f, &unit(), &k, 10, 1e-6).unwrap();
        assert_eq!(r.status, Status::Diverged, "notes {:?}", r.trail.notes);
        assert!(!r.trail.witness.is_empty());
        // The witness partials are monotone increasing.
        assert!(r.trail.witness.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn non_perfect_set_rejected() {
        let f = Integrand::from_fn(|x: f64| x);
        let s = SymbolicClosedSet::finite_points([0.5f64]);
        assert!(matches!(
            harnack(&f, &unit(), &s, 4, 1e-6),
            Err(IntegrateError::InvalidArgument { .. })
        ));
    }
}
