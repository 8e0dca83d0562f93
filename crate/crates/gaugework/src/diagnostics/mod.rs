//! Measurement tools for the primitive-recovery theorems: oscillation,
//! absolute-continuity witnesses, absolute-divergence detection, and the
//! end-to-end harness that reconstructs primitives with each integrator
//! and checks them against the closed forms.

mod harness;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use harness::{
    compatibility_matrix, expected_status, ftc_check, run_method, FtcPoint, FtcReport,
    FtcVerdict, MatrixCell, MatrixReport, RunOptions,
};

use crate::corpus::{cantor_value_exact, FunctionEntry};
use crate::integrators::{IntegrateError, Integrand};
use crate::realsets::Interval;
use crate::scalar::Real;
use crate::sum::CompensatedSum;

#[derive(Debug, Clone, Error)]
pub enum DiagnosticsError {
    #[error("entry has no primitive")]
    NoPrimitive,

    #[error("overlapping cover intervals at index {index}")]
    OverlappingCover { index: usize },

    #[error("invalid argument: {detail}")]
    InvalidArgument { detail: String },

    #[error(transparent)]
    Integrate(#[from] IntegrateError),
}

/// Default sample count for oscillation estimation.
pub const OSCILLATION_DEFAULT_SAMPLES: u32 = 257;

/// Oscillation of `f` on an interval: `sup f - inf f`, estimated from
/// Chebyshev-spaced samples plus both endpoints. A lower bound on the
/// true oscillation (sampling never overshoots).
pub fn oscillation<R: Real>(
    f: impl Fn(R) -> R,
    interval: &Interval<R>,
    samples: u32,
) -> R {
    if interval.is_empty() {
        return R::zero();
    }
    let (a, b) = (interval.lo(), interval.hi());
    let mut min = R::infinity();
    let mut max = R::neg_infinity();
    let mut consider = |v: R| {
        if !v.is_nan() {
            min = min.min(v);
            max = max.max(v);
        }
    };
    consider(f(a));
    consider(f(b));
    let n = samples.max(2);
    let half = (b - a) / R::of(2.0);
    let mid = (a + b) / R::of(2.0);
    for k in 0..n {
        // Chebyshev nodes concentrate near the endpoints, catching
        // boundary oscillation that uniform grids miss.
        let theta = R::PI() * (R::of(2.0) * R::of(k as f64) + R::one())
            / (R::of(2.0) * R::of(n as f64));
        consider(f(mid + half * theta.cos()));
    }
    if min > max {
        R::zero()
    } else {
        max - min
    }
}

/// Witness data for the absolute-continuity inequality over a set of
/// non-overlapping sub-intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ACWitness<R> {
    pub intervals: Vec<Interval<R>>,
    /// Exact sum of the interval lengths.
    pub total_length: R,
    /// `sum |F(d_k) - F(c_k)|`.
    pub variation_sum: R,
    /// `sum osc(F; [c_k, d_k])`: the restricted (starred) variant.
    pub oscillation_sum: R,
}

/// Fill an [`ACWitness`] by direct evaluation over a non-overlapping
/// cover. Oscillations are sampled with `samples` points per interval.
pub fn ac_witness<R: Real>(
    f: impl Fn(R) -> R,
    cover: &[Interval<R>],
    samples: u32,
) -> Result<ACWitness<R>, DiagnosticsError> {
    let mut sorted: Vec<(usize, &Interval<R>)> = cover.iter().enumerate().collect();
    sorted.sort_by(|a, b| a.1.lo().partial_cmp(&b.1.lo()).unwrap());
    for w in sorted.windows(2) {
        if w[1].1.lo() < w[0].1.hi() {
            return Err(DiagnosticsError::OverlappingCover { index: w[1].0 });
        }
    }
    let mut total = CompensatedSum::new();
    let mut variation = CompensatedSum::new();
    let mut osc = CompensatedSum::new();
    for i in cover {
        total.add(i.length());
        variation.add((f(i.hi()) - f(i.lo())).abs());
        osc.add(oscillation(&f, i, samples));
    }
    Ok(ACWitness {
        intervals: cover.to_vec(),
        total_length: total.value(),
        variation_sum: variation.value(),
        oscillation_sum: osc.value(),
    })
}

/// The constructed absolute-continuity refutation for the Cantor function:
/// the `2^depth` closed intervals remaining at `depth` have total length
/// `(2/3)^depth`, yet each carries a function increment of exactly
/// `2^-depth`, so the variation sum is exactly 1. Evaluation is exact
/// (integer triadic/dyadic arithmetic throughout).
pub fn cantor_ac_witness<R: Real>(depth: u32) -> Result<ACWitness<R>, DiagnosticsError> {
    if depth == 0 || depth > 40 {
        return Err(DiagnosticsError::InvalidArgument {
            detail: format!("depth must be in 1..=40, got {depth}"),
        });
    }
    let pow3 = 3u128.pow(depth);
    let count = 1u64 << depth;
    let mut intervals = Vec::with_capacity(count as usize);
    let mut variation = CompensatedSum::new();
    let scale = (pow3 as f64).recip();
    for path in 0..count {
        // Bits of `path` choose left (0) or right (2) thirds; the left
        // endpoint numerator in base 3 follows directly.
        let mut numer: u128 = 0;
        for bit in (0..depth).rev() {
            numer = numer * 3 + if (path >> bit) & 1 == 1 { 2 } else { 0 };
        }
        let lo = numer as f64 * scale;
        let hi = (numer + 1) as f64 * scale;
        intervals.push(Interval::closed(R::of(lo), R::of(hi)).expect("remaining interval"));
        let f_lo = cantor_value_exact(numer, depth, depth);
        let f_hi = cantor_value_exact(numer + 1, depth, depth);
        // Dyadic numerators over 2^depth; the increment per interval is
        // exactly one unit.
        let inc = R::of((f_hi - f_lo) as f64) / R::of((1u64 << depth) as f64);
        variation.add(inc);
    }
    // Total length (2/3)^depth computed as an exact power ratio.
    let total_length = R::of((2.0f64 / 3.0).powi(depth as i32));
    let variation_sum = variation.value();
    Ok(ACWitness {
        intervals,
        total_length,
        // The Cantor function is monotone: the oscillation over an
        // interval equals the endpoint increment.
        oscillation_sum: variation_sum,
        variation_sum,
    })
}

/// Verdict of the absolute-integrability probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AbsoluteVerdict<R> {
    /// Exhaustion integrals of `|f|` contract geometrically; the bound is
    /// their extrapolated limit.
    AbsolutelyIntegrable { bound: R },
    /// Monotone growth with non-contracting increments, exceeding ten
    /// times the signed integral's magnitude; the witness is the stage
    /// sequence.
    NotAbsolutely { witness: Vec<R> },
    Undetermined,
}

/// Probe absolute integrability: integrate `|f|` over an increasing
/// exhaustion that cuts `2^-k`-radius holes around the entry's singular
/// points, classifying the growth of the stage values.
pub fn absolute_divergence_check<R: Real>(
    entry: &FunctionEntry<R>,
    interval: &Interval<R>,
    stages: u32,
) -> Result<AbsoluteVerdict<R>, DiagnosticsError> {
    use crate::integrators::{cauchy_riemann, limit_extrapolate, Status};

    let stages = stages.clamp(6, 40);
    let abs_entry = {
        let f = entry.eval_fn();
        Integrand::from_fn(move |x: R| f(x).abs())
    };
    let closure = interval.closure();
    let singular: Vec<R> = entry
        .singular_set()
        .sample_points(6)
        .into_iter()
        .filter(|&x| closure.contains(x))
        .collect();

    // Signed magnitude for the 10x comparison.
    let signed = {
        let f = Integrand::from(entry);
        let pts = singular.clone();
        cauchy_riemann(&f, interval, &pts, R::of(1e-4))
            .ok()
            .filter(|r| r.status == Status::Converged)
            .map(|r| r.value.abs())
            .unwrap_or_else(R::one)
    };

    let mut values: Vec<R> = Vec::new();
    for k in 1..=stages {
        let radius = interval.length() * R::of(0.5f64.powi(k as i32)) / R::of(4.0);
        // Exhaustion piece: the interval minus radius-neighborhoods of the
        // singular points.
        let mut segments: Vec<(R, R)> = vec![(interval.lo(), interval.hi())];
        for &s in &singular {
            let mut next = Vec::new();
            for (lo, hi) in segments {
                if s - radius > lo {
                    next.push((lo, (s - radius).min(hi)));
                }
                if s + radius < hi {
                    next.push(((s + radius).max(lo), hi));
                }
            }
            segments = next;
        }
        let mut stage_value = CompensatedSum::new();
        let mut ok = true;
        for (lo, hi) in segments {
            if !(hi > lo) {
                continue;
            }
            let piece = Interval::closed(lo, hi).map_err(IntegrateError::Set)?;
            let piece_tol = R::of(1e-6) * piece.length().max(R::of(1e-3));
            match cauchy_riemann(&abs_entry, &piece, &[], piece_tol) {
                Ok(r) if r.status == Status::Converged || r.status == Status::Unconverged => {
                    stage_value.add(r.value);
                }
                Ok(_) => {
                    ok = false;
                    break;
                }
                Err(e) => return Err(e.into()),
            }
        }
        if !ok {
            break;
        }
        values.push(stage_value.value());
    }
    if values.len() < 6 {
        return Ok(AbsoluteVerdict::Undetermined);
    }

    // Increment analysis over the last stages.
    let increments: Vec<R> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let tail = &increments[increments.len().saturating_sub(5)..];
    let monotone = tail.iter().all(|&d| d >= R::zero());
    let sustained_ratio = tail
        .windows(2)
        .all(|w| w[0] <= R::zero() || w[1] >= w[0] * R::of(0.5));
    let last = *values.last().unwrap();
    if monotone && sustained_ratio && last > R::of(10.0) * signed {
        return Ok(AbsoluteVerdict::NotAbsolutely { witness: values });
    }
    // Geometric contraction of increments: extrapolated bound.
    let contracting = tail.windows(2).all(|w| {
        w[1].abs() <= w[0].abs() * R::of(0.95) || w[1].abs() <= R::of(1e-12)
    });
    if contracting {
        if let Ok(ext) = limit_extrapolate(&values, R::of(1e-9)) {
            if ext.status == Status::Converged || ext.error < last * R::of(1e-3) {
                return Ok(AbsoluteVerdict::AbsolutelyIntegrable { bound: ext.value });
            }
        }
        return Ok(AbsoluteVerdict::AbsolutelyIntegrable { bound: last });
    }
    Ok(AbsoluteVerdict::Undetermined)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn unit() -> Interval<f64> {
        Interval::closed(0.0, 1.0).unwrap()
    }

    #[test]
    fn oscillation_of_monotone_is_endpoint_difference() {
        let i = Interval::closed(0.25, 4.0).unwrap();
        let osc = oscillation(|x: f64| x * x, &i, 64);
        assert!((osc - (16.0 - 0.0625)).abs() < 1e-12);
    }

    #[test]
    fn oscillation_of_constant_is_zero() {
        assert_eq!(oscillation(|_: f64| 7.0, &unit(), 32), 0.0);
    }

    #[test]
    fn oscillation_of_sine_over_period() {
        let i = Interval::closed(0.0, 2.0 * std::f64::consts::PI).unwrap();
        let osc = oscillation(|x: f64| x.sin(), &i, 64);
        assert!((osc - 2.0).abs() < 1e-3, "osc {osc}");
    }

    #[test]
    fn oscillation_superadditive_under_splitting() {
        let f = |x: f64| (5.0 * x).sin() + 0.3 * x;
        let whole = oscillation(f, &unit(), 257);
        let left = oscillation(f, &Interval::closed(0.0, 0.4).unwrap(), 257);
        let right = oscillation(f, &Interval::closed(0.4, 1.0).unwrap(), 257);
        assert!(whole + 1e-9 >= left.max(right));
    }

    #[test]
    fn ac_witness_identity_has_variation_equal_length() {
        let cover = vec![
            Interval::closed(0.0, 0.25).unwrap(),
            Interval::closed(0.5, 0.75).unwrap(),
        ];
        let w = ac_witness(|x: f64| x, &cover, 16).unwrap();
        assert_eq!(w.total_length, 0.5);
        assert_eq!(w.variation_sum, 0.5);
        assert!(w.oscillation_sum >= w.variation_sum - 1e-12);
    }

    #[test]
    fn ac_witness_rejects_overlap() {
        let cover = vec![
            Interval::closed(0.0, 0.5).unwrap(),
            Interval::closed(0.4, 0.8).unwrap(),
        ];
        assert!(matches!(
            ac_witness(|x: f64| x, &cover, 8),
            Err(DiagnosticsError::OverlappingCover { .. })
        ));
    }

    #[test]
    fn cantor_witness_small_depths() {
        // Depth n: total length (2/3)^n, variation exactly 1.
        for depth in [1u32, 4, 8] {
            let w = cantor_ac_witness::<f64>(depth).unwrap();
            assert_eq!(w.intervals.len(), 1usize << depth);
            assert!((w.total_length - (2.0f64 / 3.0).powi(depth as i32)).abs() < 1e-15);
            assert_eq!(w.variation_sum, 1.0);
            assert_eq!(w.oscillation_sum, 1.0);
        }
    }

    #[test]
    fn cantor_witness_matches_float_evaluator() {
        // The witness covers agree with the shipped entry's values at
        // the interval endpoints, at shallow depth.
        let depth = 6;
        let entry = corpus::cantor_function::<f64>(30).unwrap();
        let w = cantor_ac_witness::<f64>(depth).unwrap();
        let mut variation = 0.0;
        for i in &w.intervals {
            variation += entry.eval(i.hi()) - entry.eval(i.lo());
        }
        assert!((variation - 1.0).abs() < 1e-9, "variation {variation}");
    }

    #[test]
    fn conditional_example_is_not_absolutely_integrable() {
        let entry = corpus::conditional_example::<f64>();
        let v = absolute_divergence_check(&entry, &unit(), 14).unwrap();
        match v {
            AbsoluteVerdict::NotAbsolutely { witness } => {
                assert!(witness.windows(2).all(|w| w[1] >= w[0] - 1e-9));
            }
            other => panic!("expected NotAbsolutely, got {other:?}"),
        }
    }

    #[test]
    fn inverse_sqrt_is_absolutely_integrable_with_bound_two() {
        use std::collections::BTreeMap;
        use std::sync::Arc;
        let entry = crate::corpus::FunctionEntry::new(
            "inv_sqrt",
            BTreeMap::new(),
            unit(),
            Arc::new(|x: f64| if x > 0.0 { 1.0 / x.sqrt() } else { f64::NAN }),
            Some(Arc::new(|x: f64| 2.0 * x.sqrt())),
            crate::realsets::SymbolicClosedSet::finite_points([0.0f64]),
            crate::corpus::EntryFlags {
                bounded: false,
                continuous_ae: true,
                derivative_everywhere: false,
                absolutely_integrable: true,
                boundary_case: false,
            },
        );
        match absolute_divergence_check(&entry, &unit(), 20).unwrap() {
            AbsoluteVerdict::AbsolutelyIntegrable { bound } => {
                assert!((bound - 2.0).abs() < 1e-2, "bound {bound}");
            }
            other => panic!("expected AbsolutelyIntegrable, got {other:?}"),
        }
    }

    #[test]
    fn square_is_absolutely_integrable_with_bound_third() {
        let entry = corpus::phi0::<f64>(4.0, 2.0).unwrap();
        match absolute_divergence_check(&entry, &unit(), 16).unwrap() {
            AbsoluteVerdict::AbsolutelyIntegrable { .. } => {}
            other => panic!("expected AbsolutelyIntegrable, got {other:?}"),
        }
    }
}
