//! Gauge integration: the Henstock-Kurzweil integral over delta-fine
//! tagged partitions, the derivative-built gauge, and the free-tag
//! McShane variant with its absolute-sum divergence witness.
//!
//! The automatic schedule shrinks a singular-point cutoff radius and a
//! partition-sum tolerance together and extrapolates the resulting
//! literal Riemann sums. Each stage's partition is delta-fine for the
//! gauge implied by its acceptance rule (cutoff cells are tagged at the
//! singular points themselves), so the schedule walks down a sequence of
//! ever finer gauges.

use crate::realsets::{cousin_partition, Gauge, Interval, SetError, COUSIN_DEFAULT_DEPTH};
use crate::scalar::Real;
use crate::sum::CompensatedSum;

use super::cauchy::{check_tol, degenerate};
use super::extrapolate::limit_extrapolate;
use super::quad::{adaptive_partition_sum, QuadCtx, QuadFault};
use super::{IntegralResult, IntegrateError, Integrand, Method, Status, Trail};

const EVAL_BUDGET: u64 = 40_000_000;
const PARTITION_DEPTH: u32 = 46;
/// Default refinement stages for the automatic schedule.
pub const DEFAULT_REFINEMENTS: u32 = 14;
/// Halving-search steps in the derivative gauge.
pub const DEFAULT_GAUGE_PROBE: u32 = 48;

/// Gauge selection for [`henstock_kurzweil`].
#[derive(Clone)]
pub enum GaugeChoice<R> {
    /// Sum over one partition built from this gauge; the error is assessed
    /// by re-running under the pointwise-halved gauge and differencing.
    Explicit(Gauge<R>),
    /// Schedule of shrinking gauges derived from the entry's singular-set
    /// metadata, with extrapolation over the stage sums.
    Auto,
}

/// The pointwise gauge of the fundamental-theorem construction: at `x`,
/// the largest dyadic `h <= (b-a)/4` for which
/// `|F(v) - F(u) - (v-u) f(x)| < (v-u) eps/(b-a)` holds at the sampled
/// pairs `(x-h, x)`, `(x, x+h)`, `(x-h, x+h)` (clipped to the domain).
/// Positive wherever the derivative exists; points where the search
/// exhausts its probe budget report a gauge evaluation error, which
/// partition construction works around by endpoint tagging.
pub fn derivative_gauge<R: Real>(
    entry: &crate::corpus::FunctionEntry<R>,
    eps: R,
    probe: u32,
) -> Result<Gauge<R>, IntegrateError> {
    if !(eps > R::zero()) {
        return Err(IntegrateError::InvalidArgument {
            detail: "eps must be positive".into(),
        });
    }
    let primitive = entry
        .primitive_fn()
        .ok_or_else(|| IntegrateError::NeedsMetadata {
            detail: "derivative gauge needs an entry with a primitive".into(),
        })?;
    let f = entry.eval_fn();
    let (a, b) = (entry.domain().lo(), entry.domain().hi());
    let budget = eps / (b - a);
    let h_max = (b - a) / R::of(4.0);
    let probe = probe.max(1);
    Ok(Gauge::from_fallible(move |x: R| {
        if x < a || x > b {
            return Err(SetError::GaugeUndefined {
                at: x.as_f64(),
                detail: "outside the entry domain".into(),
            });
        }
        let fx = f(x);
        if fx.is_nan() {
            return Err(SetError::GaugeUndefined {
                at: x.as_f64(),
                detail: "derivative undefined".into(),
            });
        }
        let mut h = h_max;
        for _ in 0..=probe {
            let u = (x - h).max(a);
            let v = (x + h).min(b);
            let mut ok = true;
            for (p, q) in [(u, x), (x, v), (u, v)] {
                if q > p {
                    let defect = (primitive(q) - primitive(p) - (q - p) * fx).abs();
                    if !(defect < (q - p) * budget) {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Ok(h);
            }
            h = h / R::of(2.0);
        }
        Err(SetError::GaugeUndefined {
            at: x.as_f64(),
            detail: "halving search exhausted".into(),
        })
    }))
}

/// Henstock-Kurzweil integration over delta-fine partitions.
pub fn henstock_kurzweil<R: Real>(
    f: &Integrand<R>,
    interval: &Interval<R>,
    gauge: GaugeChoice<R>,
    refinements: u32,
    tol: R,
) -> Result<IntegralResult<R>, IntegrateError> {
    check_tol(tol)?;
    if interval.is_empty() || interval.is_point() {
        return Ok(degenerate(Method::HenstockKurzweil));
    }
    match gauge {
        GaugeChoice::Explicit(g) => explicit_gauge_sum(f, interval, &g, tol),
        GaugeChoice::Auto => schedule_drive(f, interval, refinements, tol, TagPolicy::Contained),
    }
}

/// McShane integration: the same schedule with free tags. Near-singular
/// cells are tagged at a fixed exterior probe point, and the driver
/// tracks the absolute sums `sum |f(tag)| width`; monotone growth of that
/// quantity without contraction is the divergence verdict (McShane
/// integrability is absolute).
pub fn mcshane<R: Real>(
    f: &Integrand<R>,
    interval: &Interval<R>,
    refinements: u32,
    tol: R,
) -> Result<IntegralResult<R>, IntegrateError> {
    check_tol(tol)?;
    if interval.is_empty() || interval.is_point() {
        return Ok(degenerate(Method::McShane));
    }
    schedule_drive(f, interval, refinements, tol, TagPolicy::FreeExterior)
}

fn explicit_gauge_sum<R: Real>(
    f: &Integrand<R>,
    interval: &Interval<R>,
    gauge: &Gauge<R>,
    tol: R,
) -> Result<IntegralResult<R>, IntegrateError> {
    let coarse = cousin_partition(interval, gauge, COUSIN_DEFAULT_DEPTH)?;
    let fine = cousin_partition(interval, &gauge.halved(), COUSIN_DEFAULT_DEPTH)?;
    for p in [&coarse, &fine] {
        for &tag in p.tags() {
            if f.eval(tag).is_nan() {
                return Err(IntegrateError::EvalFailure { at: tag.as_f64() });
            }
        }
    }
    let s = coarse.riemann_sum(|x| f.eval(x));
    let s_fine = fine.riemann_sum(|x| f.eval(x));
    let error = (s - s_fine).abs();
    let mut trail = Trail::default();
    trail.partition_cells.push(coarse.cell_count() as u64);
    trail.partition_cells.push(fine.cell_count() as u64);
    trail.sums = vec![s, s_fine];
    trail.note("error assessed by halving the gauge and differencing");
    let status = if error <= tol {
        Status::Converged
    } else {
        Status::Unconverged
    };
    Ok(IntegralResult::new(
        Method::HenstockKurzweil,
        status,
        s_fine,
        error,
        trail,
    ))
}

#[derive(Clone, Copy, PartialEq)]
enum TagPolicy {
    /// Cutoff cells tagged at the singular point itself (delta-fine).
    Contained,
    /// Cutoff cells tagged just outside themselves (free tags, the
    /// McShane condition).
    FreeExterior,
}

fn singular_markers<R: Real>(f: &Integrand<R>, interval: &Interval<R>) -> Vec<R> {
    let Some(set) = f.singular_set() else {
        return Vec::new();
    };
    let closure = interval.closure();
    let mut pts: Vec<R> = set
        .sample_points(6)
        .into_iter()
        .filter(|&x| closure.contains(x))
        .collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    // Merge markers too close to separate at working precision.
    let min_gap = interval.length() * R::of(1e-6);
    let mut merged: Vec<R> = Vec::with_capacity(pts.len());
    for p in pts {
        match merged.last() {
            Some(&last) if p - last < min_gap => {}
            _ => merged.push(p),
        }
    }
    merged.truncate(128);
    merged
}

fn schedule_drive<R: Real>(
    f: &Integrand<R>,
    interval: &Interval<R>,
    refinements: u32,
    tol: R,
    policy: TagPolicy,
) -> Result<IntegralResult<R>, IntegrateError> {
    let method = match policy {
        TagPolicy::Contained => Method::HenstockKurzweil,
        TagPolicy::FreeExterior => Method::McShane,
    };
    if f.singular_set().is_none() {
        return Err(IntegrateError::NeedsMetadata {
            detail: "the automatic schedule needs a function entry with singular-set metadata"
                .into(),
        });
    }
    let refinements = refinements.clamp(4, 40);
    let markers = singular_markers(f, interval);
    let (lo, hi) = (interval.lo(), interval.hi());
    let len = hi - lo;
    let mut min_gap = len;
    for w in markers.windows(2) {
        min_gap = min_gap.min(w[1] - w[0]);
    }

    let mut ctx = QuadCtx::new(EVAL_BUDGET);
    let mut trail = Trail::default();
    trail.set_default("tol", tol.as_f64());
    trail.set_default("refinements", refinements as f64);
    let mut sums: Vec<R> = Vec::new();
    let mut abs_sums: Vec<R> = Vec::new();
    let mut last_quad_error = R::zero();
    let mut budget_hit = false;

    for stage in 1..=refinements {
        let cut = (len / R::of(16.0) * R::of(0.5f64.powi(stage as i32)))
            .min(min_gap / R::of(4.0))
            .max(len * R::of(1e-14));
        let quad_tol = tol * R::of(4.0) * R::of(0.5f64.powi(stage as i32));
        match stage_sum(f, lo, hi, &markers, cut, quad_tol, policy, &mut ctx) {
            Ok((sum, abs, err, cells)) => {
                sums.push(sum);
                abs_sums.push(abs);
                last_quad_error = err;
                trail.partition_cells.push(cells);
            }
            Err(QuadFault::Budget) => {
                budget_hit = true;
                trail.note("evaluation budget exhausted");
                break;
            }
            Err(QuadFault::Eval(x)) => return Err(IntegrateError::EvalFailure { at: x }),
        }

        if policy == TagPolicy::FreeExterior && abs_sums.len() >= 4 {
            if let Some(witness) = absolute_divergence(&abs_sums, tol) {
                trail.sums = sums.clone();
                trail.witness = witness;
                trail.note(
                    "absolute sums grow monotonically without contraction: not absolutely integrable",
                );
                let value = *sums.last().unwrap();
                let error = (sums[sums.len() - 1] - sums[sums.len() - 2]).abs();
                return Ok(IntegralResult::new(
                    method,
                    Status::Diverged,
                    value,
                    error,
                    trail,
                ));
            }
        }

        if sums.len() >= 4 {
            let ext = limit_extrapolate(&sums, tol)?;
            match ext.status {
                Status::Converged if ext.error <= tol => {
                    trail.sums = sums.clone();
                    trail.extrapolation = ext.estimates.clone();
                    return Ok(IntegralResult::new(
                        method,
                        Status::Converged,
                        ext.value,
                        ext.error + last_quad_error,
                        trail,
                    ));
                }
                Status::Diverged => {
                    trail.sums = sums.clone();
                    trail.witness = sums.clone();
                    return Ok(IntegralResult::new(
                        method,
                        Status::Diverged,
                        ext.value,
                        ext.error,
                        trail,
                    ));
                }
                _ => {}
            }
        }
    }
    trail.sums = sums.clone();
    if budget_hit {
        trail.note("stopped on evaluation budget");
    } else {
        trail.note("refinement stages exhausted");
    }
    let (value, error) = if sums.len() >= 3 {
        let ext = limit_extrapolate(&sums, tol)?;
        (ext.value, ext.error + last_quad_error)
    } else {
        (sums.last().copied().unwrap_or_else(R::zero), tol)
    };
    Ok(IntegralResult::new(
        method,
        Status::Unconverged,
        value,
        error,
        trail,
    ))
}

type StageSum<R> = (R, R, R, u64);

#[allow(clippy::too_many_arguments)]
fn stage_sum<R: Real>(
    f: &Integrand<R>,
    lo: R,
    hi: R,
    markers: &[R],
    cut: R,
    quad_tol: R,
    policy: TagPolicy,
    ctx: &mut QuadCtx,
) -> Result<StageSum<R>, QuadFault> {
    let mut sum = CompensatedSum::new();
    let mut abs_sum = CompensatedSum::new();
    let mut err = CompensatedSum::new();
    let mut cells = 0u64;
    let len = hi - lo;

    // Cutoff cells around each marker, tagged per policy.
    let mut cursor = lo;
    let mut segments: Vec<(R, R)> = Vec::new();
    for &s in markers {
        let cell_lo = (s - cut).max(lo);
        let cell_hi = (s + cut).min(hi);
        if cell_hi <= cell_lo {
            continue;
        }
        if cell_lo > cursor {
            segments.push((cursor, cell_lo));
        }
        let w = cell_hi - cell_lo;
        let tag = match policy {
            TagPolicy::Contained => s,
            TagPolicy::FreeExterior => {
                // Probe just outside the cell, staying in the interval.
                let right = cell_hi + cut;
                if right <= hi {
                    right
                } else {
                    (cell_lo - cut).max(lo)
                }
            }
        };
        let ft = f.eval(tag);
        // Entries may leave the derivative undefined exactly at a singular
        // point; a single tag value does not affect the limit.
        let ft = if ft.is_nan() { R::zero() } else { ft };
        sum.add(ft * w);
        abs_sum.add(ft.abs() * w);
        cells += 1;
        cursor = cell_hi;
    }
    if hi > cursor {
        segments.push((cursor, hi));
    }

    for (a, b) in segments {
        let seg_tol = quad_tol * (b - a) / len;
        let q = adaptive_partition_sum(
            &|x| f.eval(x),
            a,
            b,
            seg_tol,
            PARTITION_DEPTH,
            &|_| R::zero(),
            ctx,
        )?;
        sum.add(q.value);
        abs_sum.add(q.abs_sum);
        err.add(q.error);
        cells += q.cells;
    }
    Ok((sum.value(), abs_sum.value(), err.value(), cells))
}

/// Monotone non-contracting growth of the absolute sums.
fn absolute_divergence<R: Real>(abs_sums: &[R], tol: R) -> Option<Vec<R>> {
    let n = abs_sums.len();
    if n < 4 {
        return None;
    }
    let tail = &abs_sums[n - 4..];
    let increments: Vec<R> = tail.windows(2).map(|w| w[1] - w[0]).collect();
    if !increments.iter().all(|&d| d > R::zero()) {
        return None;
    }
    if abs_sums[n - 1] > tol.recip() {
        return Some(abs_sums.to_vec());
    }
    let non_contracting = increments
        .windows(2)
        .all(|w| w[1] >= w[0] * R::of(0.9));
    if non_contracting {
        Some(abs_sums.to_vec())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::integrators::riemann;

    fn unit() -> Interval<f64> {
        Interval::closed(0.0, 1.0).unwrap()
    }

    #[test]
    fn explicit_gauge_on_smooth_function() {
        let f = Integrand::from_fn(|x: f64| x * x);
        let g = Gauge::constant(0.01);
        let r = henstock_kurzweil(&f, &unit(), GaugeChoice::Explicit(g), 8, 1e-3).unwrap();
        assert_eq!(r.status, Status::Converged);
        assert!((r.value - 1.0 / 3.0).abs() < 1e-3);
    }

    #[test]
    fn hk_agrees_with_riemann_on_square() {
        let entry = corpus::phi0::<f64>(4.0, 2.0).unwrap();
        let f = Integrand::from(&entry);
        let hk = henstock_kurzweil(&f, &unit(), GaugeChoice::Auto, 12, 1e-6).unwrap();
        let rm = riemann(&f, &unit(), 1e-6).unwrap();
        assert_eq!(hk.status, Status::Converged);
        assert_eq!(rm.status, Status::Converged);
        assert!(
            (hk.value - rm.value).abs() <= hk.error_estimate + rm.error_estimate + 1e-6,
            "hk {} riemann {}",
            hk.value,
            rm.value
        );
    }

    #[test]
    fn hk_auto_integrates_oscillating_unbounded_derivative() {
        let entry = corpus::phi0::<f64>(2.0, 2.0).unwrap();
        let f = Integrand::from(&entry);
        let r = henstock_kurzweil(&f, &unit(), GaugeChoice::Auto, 14, 1e-4).unwrap();
        assert_eq!(r.status, Status::Converged, "notes {:?}", r.trail.notes);
        assert!(
            (r.value - 1.0f64.sin()).abs() < 1e-3,
            "value {} vs sin 1",
            r.value
        );
    }

    #[test]
    fn hk_auto_flagship_conditional_example() {
        let entry = corpus::conditional_example::<f64>();
        let f = Integrand::from(&entry);
        let r = henstock_kurzweil(&f, &unit(), GaugeChoice::Auto, 16, 1e-4).unwrap();
        assert_eq!(r.status, Status::Converged, "notes {:?}", r.trail.notes);
        assert!((r.value - 1.0).abs() < 1e-4, "value {}", r.value);
    }

    #[test]
    fn mcshane_converges_on_absolutely_integrable() {
        let f = Integrand::from(&corpus::phi0::<f64>(4.0, 2.0).unwrap());
        let r = mcshane(&f, &unit(), 12, 1e-6).unwrap();
        assert_eq!(r.status, Status::Converged);
        let expect = (1.0f64).sin();
        assert!((r.value - expect).abs() < 1e-5, "value {}", r.value);
    }

    #[test]
    fn mcshane_diverges_on_non_absolute_integrand() {
        let f = Integrand::from(&corpus::phi0::<f64>(2.0, 2.0).unwrap());
        let r = mcshane(&f, &unit(), 14, 1e-4).unwrap();
        assert_eq!(r.status, Status::Diverged, "notes {:?}", r.trail.notes);
        assert!(!r.trail.witness.is_empty());
    }

    #[test]
    fn separation_on_conditional_example() {
        let entry = corpus::conditional_example::<f64>();
        let f = Integrand::from(&entry);
        let hk = henstock_kurzweil(&f, &unit(), GaugeChoice::Auto, 16, 1e-4).unwrap();
        let ms = mcshane(&f, &unit(), 14, 1e-4).unwrap();
        assert_eq!(hk.status, Status::Converged);
        assert_eq!(ms.status, Status::Diverged);
        assert!(!entry.flags().absolutely_integrable);
    }

    #[test]
    fn derivative_gauge_is_positive_and_validates() {
        let entry = corpus::phi0::<f64>(2.0, 2.0).unwrap();
        let g = derivative_gauge(&entry, 0.1, DEFAULT_GAUGE_PROBE).unwrap();
        for &x in &[0.0, 1e-3, 0.2, 0.5, 1.0] {
            let h = g.eval(x).unwrap();
            assert!(h > 0.0, "gauge at {x}");
        }
    }

    #[test]
    fn derivative_gauge_linear_takes_h_max() {
        use std::collections::BTreeMap;
        use std::sync::Arc;
        let entry = crate::corpus::FunctionEntry::new(
            "linear",
            BTreeMap::new(),
            unit(),
            Arc::new(|_: f64| 3.0),
            Some(Arc::new(|x: f64| 3.0 * x)),
            crate::realsets::SymbolicClosedSet::Empty,
            crate::corpus::EntryFlags {
                bounded: true,
                continuous_ae: true,
                derivative_everywhere: true,
                absolutely_integrable: true,
                boundary_case: false,
            },
        );
        let g = derivative_gauge(&entry, 0.01, 20).unwrap();
        // Zero remainder: the first probe (h_max = 1/4) passes everywhere.
        assert_eq!(g.eval(0.5).unwrap(), 0.25);
    }

    #[test]
    fn derivative_gauge_conditional_at_origin() {
        let entry = corpus::conditional_example::<f64>();
        let g = derivative_gauge(&entry, 0.1, DEFAULT_GAUGE_PROBE).unwrap();
        let h = g.eval(0.0).unwrap();
        assert!(h > 0.0);
        // Verify the defining inequality at the returned h directly.
        let fprim = entry.primitive_fn().unwrap();
        let defect = (fprim(h) - fprim(0.0)).abs();
        assert!(defect < h * 0.1);
    }
}
