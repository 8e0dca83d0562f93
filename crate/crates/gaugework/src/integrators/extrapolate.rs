//! Sequence-limit estimation: iterated Aitken acceleration with
//! divergence and oscillation classification. This realizes every
//! "provided the limit exists" clause in the improper-integral drivers.

use crate::scalar::Real;

use super::{IntegrateError, Status};

/// Outcome of [`limit_extrapolate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation<R> {
    pub value: R,
    pub error: R,
    pub status: Status,
    /// Successive accelerated estimates (last column of the table).
    pub estimates: Vec<R>,
}

/// How many trailing increments the divergence proxy inspects.
const DIVERGENCE_WINDOW: usize = 5;
/// Increment ratio above which monotone growth counts as non-contracting.
const NON_CONTRACTING_RATIO: f64 = 0.95;

/// Estimate the limit of a sequence.
///
/// Classification, in order:
/// * `Diverged` — terms monotone in magnitude past `1/tol`, or monotone
///   with sustained non-contracting increments (ratio above 0.95 across
///   the trailing window); the divergence witness is the sequence itself.
/// * `Converged` — iterated Aitken acceleration contracts; the error is
///   the scale of the last table correction (with the raw last difference
///   as a fallback bound).
/// * `Unconverged` — oscillation without contraction, or acceleration
///   that fails to reach `tol`.
pub fn limit_extrapolate<R: Real>(
    seq: &[R],
    tol: R,
) -> Result<Extrapolation<R>, IntegrateError> {
    if seq.len() < 3 {
        return Err(IntegrateError::TooFewTerms {
            needed: 3,
            got: seq.len(),
        });
    }
    if !(tol > R::zero()) {
        return Err(IntegrateError::InvalidArgument {
            detail: "tolerance must be positive".into(),
        });
    }
    if let Some(d) = divergence_verdict(seq, tol) {
        return Ok(d);
    }

    // Iterated Aitken: each level applies the delta-squared transform to
    // the previous level. Levels stop when too short or numerically
    // degenerate.
    let mut levels: Vec<Vec<R>> = vec![seq.to_vec()];
    let mut estimates: Vec<R> = vec![*seq.last().unwrap()];
    while levels.last().unwrap().len() >= 3 && levels.len() < 7 {
        let prev = levels.last().unwrap();
        let mut next = Vec::with_capacity(prev.len() - 2);
        for w in prev.windows(3) {
            let (a, b, c) = (w[0], w[1], w[2]);
            let denom = (c - b) - (b - a);
            let scale = a.abs().max(b.abs()).max(c.abs()).max(R::one());
            if denom.abs() <= scale * R::of(1e-14) {
                // Flat to machine precision: the limit is here.
                next.push(c);
            } else {
                next.push(c - (c - b) * (c - b) / denom);
            }
        }
        if next.is_empty() {
            break;
        }
        estimates.push(*next.last().unwrap());
        levels.push(next);
    }

    // Error model: agreement between the last two acceleration levels,
    // guarded by the contraction of the final level.
    let last_level = levels.last().unwrap();
    let value = *last_level.last().unwrap();
    let mut error = if estimates.len() >= 2 {
        (estimates[estimates.len() - 1] - estimates[estimates.len() - 2]).abs()
    } else {
        R::infinity()
    };
    if last_level.len() >= 2 {
        let last_step = (last_level[last_level.len() - 1] - last_level[last_level.len() - 2]).abs();
        error = error.max(last_step);
    }
    // Exact stabilization of the raw sequence.
    let raw_tail = (seq[seq.len() - 1] - seq[seq.len() - 2]).abs();
    if raw_tail == R::zero() {
        return Ok(Extrapolation {
            value: *seq.last().unwrap(),
            error: R::zero(),
            status: Status::Converged,
            estimates,
        });
    }

    let status = if error <= tol {
        Status::Converged
    } else {
        Status::Unconverged
    };
    Ok(Extrapolation {
        value,
        error,
        status,
        estimates,
    })
}

fn divergence_verdict<R: Real>(seq: &[R], tol: R) -> Option<Extrapolation<R>> {
    if seq.len() < DIVERGENCE_WINDOW + 1 {
        // Short sequences can still trip the magnitude threshold.
        let grows = seq.windows(2).all(|w| w[1].abs() > w[0].abs());
        if grows && seq.last().unwrap().abs() > tol.recip() {
            return Some(diverged(seq));
        }
        return None;
    }
    let diffs: Vec<R> = seq.windows(2).map(|w| w[1] - w[0]).collect();
    let tail = &diffs[diffs.len() - DIVERGENCE_WINDOW..];
    let monotone_dir = tail.iter().all(|d| *d > R::zero()) || tail.iter().all(|d| *d < R::zero());
    if !monotone_dir {
        return None;
    }
    let growing_magnitude = seq[seq.len() - DIVERGENCE_WINDOW..]
        .windows(2)
        .all(|w| w[1].abs() >= w[0].abs());
    if !growing_magnitude {
        return None;
    }
    if seq.last().unwrap().abs() > tol.recip() {
        return Some(diverged(seq));
    }
    // Sustained non-contracting increments.
    let mut non_contracting = 0usize;
    for w in tail.windows(2) {
        let prev = w[0].abs();
        if prev > R::zero() && w[1].abs() >= prev * R::of(NON_CONTRACTING_RATIO) {
            non_contracting += 1;
        }
    }
    if non_contracting >= DIVERGENCE_WINDOW - 1 {
        return Some(diverged(seq));
    }
    None
}

fn diverged<R: Real>(seq: &[R]) -> Extrapolation<R> {
    let value = *seq.last().unwrap();
    let error = (seq[seq.len() - 1] - seq[seq.len() - 2]).abs();
    Extrapolation {
        value,
        error,
        status: Status::Diverged,
        estimates: seq.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_sequence_hits_limit() {
        let seq: Vec<f64> = (0..20).map(|k| 1.0 - (2.0f64).powi(-k)).collect();
        let out = limit_extrapolate(&seq, 1e-12).unwrap();
        assert_eq!(out.status, Status::Converged);
        assert!((out.value - 1.0).abs() < 1e-12, "value {}", out.value);
    }

    #[test]
    fn harmonic_partial_sums_diverge() {
        let mut sums = Vec::new();
        let mut s = 0.0f64;
        for k in 1..=40 {
            s += 1.0 / k as f64;
            sums.push(s);
        }
        // 1/tol = 3.33 is passed by the 11th partial sum with monotone
        // growth; the increments also fail to contract.
        let out = limit_extrapolate(&sums, 0.3).unwrap();
        assert_eq!(out.status, Status::Diverged);
        assert!(!out.estimates.is_empty());
    }

    #[test]
    fn slow_monotone_growth_without_contraction_diverges() {
        // Dyadic-cutoff integrals of 1/x grow by ln 2 each stage: monotone,
        // increments ratio 1, far below 1/tol. The ratio proxy fires.
        let seq: Vec<f64> = (1..=12)
            .map(|k| std::f64::consts::LN_2 * k as f64)
            .collect();
        let out = limit_extrapolate(&seq, 1e-6).unwrap();
        assert_eq!(out.status, Status::Diverged);
    }

    #[test]
    fn alternating_harmonic_accelerates_to_ln2() {
        let mut sums = Vec::new();
        let mut s = 0.0f64;
        for k in 1..=24 {
            s += (-1.0f64).powi(k as i32 + 1) / k as f64;
            sums.push(s);
        }
        let out = limit_extrapolate(&sums, 1e-8).unwrap();
        assert_eq!(out.status, Status::Converged);
        // Independent value of the limit.
        let ln2 = (2.0f64).ln();
        assert!((out.value - ln2).abs() < 1e-8, "value {}", out.value);
    }

    #[test]
    fn oscillation_without_contraction_is_unconverged() {
        let seq: Vec<f64> = (0..20).map(|k| if k % 2 == 0 { 1.0 } else { 0.0 }).collect();
        let out = limit_extrapolate(&seq, 1e-9).unwrap();
        assert_eq!(out.status, Status::Unconverged);
    }

    #[test]
    fn too_few_terms_is_an_error() {
        assert!(matches!(
            limit_extrapolate(&[1.0f64, 2.0], 1e-6),
            Err(IntegrateError::TooFewTerms { .. })
        ));
    }

    #[test]
    fn constant_sequence_converges_exactly() {
        let seq = [0.25f64; 6];
        let out = limit_extrapolate(&seq, 1e-12).unwrap();
        assert_eq!(out.status, Status::Converged);
        assert_eq!(out.value, 0.25);
        assert_eq!(out.error, 0.0);
    }
}
