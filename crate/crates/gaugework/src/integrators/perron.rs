//! Perron verification: check supplied major and minor functions against
//! an integrand on a grid, using sampled one-sided difference quotients as
//! derivate estimates, and report the value bracket they pin down.
//!
//! Exact derivates are not computable from point samples, so acceptance is
//! explicitly numerical: the derivate conditions are enforced up to a
//! published slack.

use crate::realsets::Interval;
use crate::scalar::Real;

use super::{IntegrateError, Integrand};

/// Difference-quotient scales for derivate estimation.
const H_SCALES: [f64; 3] = [1e-3, 1e-4, 1e-5];
/// Base slack of the derivate comparisons.
const BASE_SLACK: f64 = 1e-6;
/// Tolerance on `M(a) = m(a) = 0`.
const ANCHOR_TOL: f64 = 1e-12;

/// Verdict of [`perron_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct PerronVerdict<R> {
    pub accepted: bool,
    /// `sup m(b)` over the supplied minor functions.
    pub lower_bracket: R,
    /// `inf M(b)` over the supplied major functions.
    pub upper_bracket: R,
    /// Grid points where a derivate condition failed, with the estimated
    /// gap beyond the slack.
    pub grid_violations: Vec<(R, R)>,
    pub notes: Vec<String>,
}

/// Check candidate major functions (`lower derivate >= f`) and minor
/// functions (`upper derivate <= f`) on a grid of `grid` points.
///
/// Every candidate must vanish at the left endpoint. Acceptance requires
/// all derivate conditions to hold within slack
/// `1e-6 + 10 * h * osc(f; x +- h)` and the brackets not to invert.
pub fn perron_check<R: Real>(
    f: &Integrand<R>,
    majors: &[&dyn Fn(R) -> R],
    minors: &[&dyn Fn(R) -> R],
    interval: &Interval<R>,
    grid: u32,
) -> Result<PerronVerdict<R>, IntegrateError> {
    if majors.is_empty() || minors.is_empty() {
        return Err(IntegrateError::Perron {
            detail: "need at least one major and one minor function to bracket".into(),
        });
    }
    if interval.is_empty() || interval.is_point() {
        return Err(IntegrateError::Perron {
            detail: "degenerate interval".into(),
        });
    }
    let (a, b) = (interval.lo(), interval.hi());
    let anchor_tol = R::of(ANCHOR_TOL);
    for (which, fs) in [("major", majors), ("minor", minors)] {
        for (i, g) in fs.iter().enumerate() {
            if g(a).abs() > anchor_tol {
                return Err(IntegrateError::Perron {
                    detail: format!("{which} function {i} does not vanish at the left endpoint"),
                });
            }
        }
    }

    let grid = grid.max(2);
    let mut violations: Vec<(R, R)> = Vec::new();
    let mut skipped = 0u32;
    let h_max = R::of(H_SCALES[0]);
    for j in 0..grid {
        let t = R::of(j as f64) / R::of((grid - 1) as f64);
        let x = a + (b - a) * t;
        let fx = f.eval(x);
        if fx.is_nan() {
            skipped += 1;
            continue;
        }
        // Local oscillation of f over the probe window.
        let mut f_min = fx;
        let mut f_max = fx;
        for &h in &H_SCALES {
            let h = R::of(h);
            for probe in [x - h, x + h] {
                if probe >= a && probe <= b {
                    let v = f.eval(probe);
                    if !v.is_nan() {
                        f_min = f_min.min(v);
                        f_max = f_max.max(v);
                    }
                }
            }
        }
        let slack = R::of(BASE_SLACK) + R::of(10.0) * h_max * (f_max - f_min);

        for g in majors {
            if let Some(lower) = derivate_estimate(*g, x, a, b, true) {
                let gap = fx - slack - lower;
                if gap > R::zero() {
                    violations.push((x, gap));
                }
            }
        }
        for g in minors {
            if let Some(upper) = derivate_estimate(*g, x, a, b, false) {
                let gap = upper - fx - slack;
                if gap > R::zero() {
                    violations.push((x, gap));
                }
            }
        }
    }

    let mut upper_bracket = R::infinity();
    for g in majors {
        upper_bracket = upper_bracket.min(g(b));
    }
    let mut lower_bracket = R::neg_infinity();
    for g in minors {
        lower_bracket = lower_bracket.max(g(b));
    }

    let ordered = lower_bracket <= upper_bracket + anchor_tol;
    let accepted = violations.is_empty() && ordered;
    let mut notes = vec![format!(
        "numerically accepted verdict; derivate slack = 1e-6 + 10*h*osc(f; x±h) at h up to {}",
        H_SCALES[0]
    )];
    if skipped > 0 {
        notes.push(format!(
            "{skipped} grid points skipped where the integrand is undefined"
        ));
    }
    if !ordered {
        notes.push("bracket inversion: sup m(b) exceeds inf M(b)".into());
    }
    Ok(PerronVerdict {
        accepted,
        lower_bracket,
        upper_bracket,
        grid_violations: violations,
        notes,
    })
}

/// Sampled derivate: minimum (lower) or maximum (upper) of the one-sided
/// difference quotients over the probe scales.
fn derivate_estimate<R: Real>(
    g: &dyn Fn(R) -> R,
    x: R,
    a: R,
    b: R,
    lower: bool,
) -> Option<R> {
    let mut est: Option<R> = None;
    for &h in &H_SCALES {
        let h = R::of(h);
        let mut quotients = [None, None];
        if x - h >= a {
            quotients[0] = Some((g(x) - g(x - h)) / h);
        }
        if x + h <= b {
            quotients[1] = Some((g(x + h) - g(x)) / h);
        }
        for q in quotients.into_iter().flatten() {
            if q.is_nan() {
                continue;
            }
            est = Some(match est {
                None => q,
                Some(e) => {
                    if lower {
                        e.min(q)
                    } else {
                        e.max(q)
                    }
                }
            });
        }
    }
    est
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn unit() -> Interval<f64> {
        Interval::closed(0.0, 1.0).unwrap()
    }

    #[test]
    fn primitive_is_both_major_and_minor() {
        let entry = corpus::phi0::<f64>(4.0, 2.0).unwrap();
        let f = Integrand::from(&entry);
        let prim = entry.primitive_fn().unwrap();
        let p2 = prim.clone();
        let major = move |x: f64| prim(x);
        let minor = move |x: f64| p2(x);
        let verdict = perron_check(&f, &[&major], &[&minor], &unit(), 41).unwrap();
        assert!(verdict.accepted, "violations: {:?}", verdict.grid_violations);
        let expect = entry.primitive_at(1.0).unwrap();
        assert!((verdict.lower_bracket - expect).abs() < 1e-12);
        assert!((verdict.upper_bracket - expect).abs() < 1e-12);
    }

    #[test]
    fn shifted_candidates_widen_bracket() {
        let entry = corpus::phi0::<f64>(4.0, 2.0).unwrap();
        let f = Integrand::from(&entry);
        let prim = entry.primitive_fn().unwrap();
        let c = 0.25f64;
        let p_up = prim.clone();
        let p_dn = prim.clone();
        let major = move |x: f64| p_up(x) + c * x;
        let minor = move |x: f64| p_dn(x) - c * x;
        let verdict = perron_check(&f, &[&major], &[&minor], &unit(), 21).unwrap();
        assert!(verdict.accepted);
        let width = verdict.upper_bracket - verdict.lower_bracket;
        assert!((width - 2.0 * c).abs() < 1e-9, "width {width}");
    }

    #[test]
    fn bracket_inversion_rejected() {
        let f = Integrand::from_fn(|_: f64| 0.0);
        // Minor ending above every major: m(b) = 1 > M(b) = 0. Derivate
        // conditions also fail, and the bracket inverts.
        let major = |_x: f64| 0.0;
        let minor = |x: f64| x;
        let verdict = perron_check(&f, &[&major], &[&minor], &unit(), 11).unwrap();
        assert!(!verdict.accepted);
        assert!(verdict.lower_bracket > verdict.upper_bracket);
    }

    #[test]
    fn empty_candidate_lists_error() {
        let f = Integrand::from_fn(|_: f64| 0.0);
        let major = |_x: f64| 0.0;
        assert!(matches!(
            perron_check(&f, &[&major], &[], &unit(), 11),
            Err(IntegrateError::Perron { .. })
        ));
    }

    #[test]
    fn anchored_at_left_endpoint() {
        let f = Integrand::from_fn(|_: f64| 0.0);
        let bad = |_x: f64| 1.0;
        let good = |_x: f64| 0.0;
        assert!(matches!(
            perron_check(&f, &[&bad], &[&good], &unit(), 11),
            Err(IntegrateError::Perron { .. })
        ));
    }
}
