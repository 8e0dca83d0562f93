//! The primitive-recovery harness: run any integrator against a corpus
//! entry, reconstruct its primitive on a grid, compare with the closed
//! form, and assemble the full entry-by-method compatibility matrix with
//! flag-predicted expectations.

use serde::{Deserialize, Serialize};

use crate::corpus::{EntryFlags, FunctionEntry};
use crate::integrators::{
    cauchy_riemann, cauchy_riemann_omega, harnack, henstock_kurzweil, mcshane, perron_check,
    riemann, totalize, GaugeChoice, IntegralResult, IntegrateError, Integrand, Method, Status,
    Trail,
};
use crate::realsets::{Interval, SymbolicClosedSet, RANK_DEFAULT_STEPS};
use crate::scalar::Real;

use super::DiagnosticsError;

/// Common knobs for driving a method against an entry.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub tol: f64,
    pub depth: u32,
    pub refinements: u32,
    pub perron_grid: u32,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            depth: 8,
            refinements: 14,
            perron_grid: 33,
        }
    }
}

/// Run `method` on `entry` over `interval`. Methods whose preconditions
/// the entry cannot meet return `NotApplicable` rather than erroring.
pub fn run_method<R: Real>(
    entry: &FunctionEntry<R>,
    method: Method,
    interval: &Interval<R>,
    opts: &RunOptions,
) -> Result<IntegralResult<R>, IntegrateError> {
    let f = Integrand::from(entry);
    let tol = R::of(opts.tol);
    match method {
        Method::Riemann => riemann(&f, interval, tol),
        Method::CauchyRiemann => {
            let pts = match entry.singular_set() {
                SymbolicClosedSet::Empty => Vec::new(),
                SymbolicClosedSet::FinitePoints(pts) => pts.clone(),
                _ => {
                    return Ok(IntegralResult::not_applicable(
                        Method::CauchyRiemann,
                        "the finite Cauchy extension needs a finite singular set",
                    ))
                }
            };
            cauchy_riemann(&f, interval, &pts, tol)
        }
        Method::CauchyRiemannOmega => {
            cauchy_riemann_omega(&f, interval, entry.singular_set(), tol)
        }
        Method::Harnack => {
            let kernel = entry
                .singular_set()
                .perfect_kernel(RANK_DEFAULT_STEPS)
                .map_err(IntegrateError::Set)?;
            if kernel.is_empty_set() {
                return Ok(IntegralResult::not_applicable(
                    Method::Harnack,
                    "singular set has no perfect kernel; the Cauchy scale already applies",
                ));
            }
            harnack(&f, interval, &kernel, opts.depth, tol)
        }
        Method::HenstockKurzweil => {
            henstock_kurzweil(&f, interval, GaugeChoice::Auto, opts.refinements, tol)
        }
        Method::McShane => mcshane(&f, interval, opts.refinements, tol),
        Method::Perron => {
            let Some(prim) = entry.primitive_fn() else {
                return Ok(IntegralResult::not_applicable(
                    Method::Perron,
                    "no primitive available to act as major/minor candidate",
                ));
            };
            let a = interval.lo();
            let anchored = move |x: R| prim(x) - prim(a);
            let verdict = perron_check(&f, &[&anchored], &[&anchored], interval, opts.perron_grid)?;
            let mut trail = Trail::default();
            trail.notes = verdict.notes.clone();
            let half = (verdict.upper_bracket - verdict.lower_bracket) / R::of(2.0);
            let value = (verdict.upper_bracket + verdict.lower_bracket) / R::of(2.0);
            let status = if verdict.accepted {
                Status::Converged
            } else {
                trail.note(format!(
                    "{} derivate violations on the grid",
                    verdict.grid_violations.len()
                ));
                Status::Unconverged
            };
            Ok(IntegralResult::new(
                Method::Perron,
                status,
                value,
                half.abs(),
                trail,
            ))
        }
        Method::Totalize => totalize(entry, interval, opts.depth, tol),
    }
}

/// Flag-predicted outcome of a method on an entry.
pub fn expected_status<R: Real>(
    entry: &FunctionEntry<R>,
    method: Method,
) -> Status {
    let flags: EntryFlags = entry.flags();
    let singular_finite = matches!(
        entry.singular_set(),
        SymbolicClosedSet::Empty | SymbolicClosedSet::FinitePoints(_)
    );
    let kernel_empty = entry
        .singular_set()
        .perfect_kernel(RANK_DEFAULT_STEPS)
        .map(|k| k.is_empty_set())
        .unwrap_or(false);
    match method {
        Method::Riemann => {
            if flags.bounded {
                Status::Converged
            } else {
                Status::NotApplicable
            }
        }
        Method::CauchyRiemann => {
            if singular_finite {
                Status::Converged
            } else {
                Status::NotApplicable
            }
        }
        Method::CauchyRiemannOmega => {
            if kernel_empty {
                Status::Converged
            } else {
                Status::NotApplicable
            }
        }
        Method::Harnack => {
            if kernel_empty {
                Status::NotApplicable
            } else {
                Status::Converged
            }
        }
        Method::HenstockKurzweil | Method::Totalize => Status::Converged,
        Method::McShane => {
            if flags.absolutely_integrable {
                Status::Converged
            } else {
                Status::Diverged
            }
        }
        Method::Perron => {
            if entry.has_primitive() {
                Status::Converged
            } else {
                Status::NotApplicable
            }
        }
    }
}

/// Verdict of one primitive-reconstruction run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum FtcVerdict {
    Pass,
    /// The failure the entry's flags predict (rendered distinctly in
    /// reports, counted as green in the harness summary).
    ExpectedFail,
    #[default]
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FtcPoint {
    pub x: f64,
    pub status: String,
    pub error: f64,
}

/// Primitive-reconstruction report (serializes with the fixed key order
/// `entry, method, max_error, points`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FtcReport {
    pub entry: String,
    pub method: String,
    pub max_error: f64,
    pub points: Vec<FtcPoint>,
    #[serde(skip)]
    pub verdict: FtcVerdict,
    #[serde(skip)]
    pub uniqueness_spread: f64,
}

/// Reconstruct the primitive of `entry` with `method` on a `grid` of
/// right endpoints, comparing against the closed form and checking the
/// uniqueness corollary (the reconstruction minus the primitive is
/// constant across the grid to within `2 tol`).
pub fn ftc_check<R: Real>(
    entry: &FunctionEntry<R>,
    method: Method,
    grid: u32,
    tol: R,
) -> Result<FtcReport, DiagnosticsError> {
    if !entry.has_primitive() {
        return Err(DiagnosticsError::NoPrimitive);
    }
    if grid == 0 {
        return Err(DiagnosticsError::InvalidArgument {
            detail: "grid must be positive".into(),
        });
    }
    let domain = *entry.domain();
    let (a, b) = (domain.lo(), domain.hi());
    let opts = RunOptions {
        tol: tol.as_f64(),
        ..RunOptions::default()
    };
    let mut points = Vec::with_capacity(grid as usize);
    let mut max_error = R::zero();
    let mut deviations: Vec<R> = Vec::new();
    let mut any_unexpected_bad = false;
    let expected = expected_status(entry, method);
    for j in 1..=grid {
        let x = a + (b - a) * R::of(j as f64) / R::of(grid as f64);
        let target = Interval::closed(a, x).expect("grid interval");
        let result = run_method(entry, method, &target, &opts)?;
        let truth = entry.primitive_delta(&target).expect("primitive checked");
        let error = if result.status == Status::Converged {
            let e = (result.value - truth).abs();
            max_error = max_error.max(e);
            deviations.push(result.value - truth);
            e
        } else {
            if result.status != expected {
                any_unexpected_bad = true;
            }
            R::nan()
        };
        points.push(FtcPoint {
            x: x.as_f64(),
            status: result.status.as_str().to_string(),
            error: if error.is_nan() { -1.0 } else { error.as_f64() },
        });
    }
    let spread = if deviations.len() >= 2 {
        let max = deviations.iter().copied().fold(R::neg_infinity(), R::max);
        let min = deviations.iter().copied().fold(R::infinity(), R::min);
        max - min
    } else {
        R::zero()
    };
    let all_converged = points.iter().all(|p| p.status == "converged");
    let verdict = if all_converged && max_error <= tol && spread <= R::of(2.0) * tol {
        FtcVerdict::Pass
    } else if !any_unexpected_bad && expected != Status::Converged {
        FtcVerdict::ExpectedFail
    } else {
        FtcVerdict::Fail
    };
    Ok(FtcReport {
        entry: entry.canonical_id(),
        method: method.name().to_string(),
        max_error: max_error.as_f64(),
        points,
        verdict,
        uniqueness_spread: spread.as_f64(),
    })
}

/// One cell of the compatibility matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixCell {
    pub entry: String,
    pub method: String,
    pub status: String,
    pub expected: String,
    pub value: f64,
    pub error: f64,
    /// `pass`, `expected-fail`, `not-applicable`, or `fail`.
    pub verdict: String,
}

/// The full corpus-by-method matrix plus pairwise consistency checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixReport {
    pub cells: Vec<MatrixCell>,
    /// Pairs of converged methods whose values disagree beyond summed
    /// error estimates plus the consistency margin.
    pub consistency_violations: Vec<String>,
    pub passes: u32,
    pub expected_fails: u32,
    pub not_applicable: u32,
    pub failures: u32,
}

/// Consistency margin added to summed error estimates when comparing two
/// converged methods on the same entry.
pub const CONSISTENCY_MARGIN: f64 = 1e-6;

/// Run every method against every entry, judge each cell against the
/// flag-predicted expectation, and cross-check all pairs of converged
/// values (methods solving the same problem must agree).
pub fn compatibility_matrix<R: Real>(
    entries: &[FunctionEntry<R>],
    opts: &RunOptions,
) -> Result<MatrixReport, DiagnosticsError> {
    let mut cells = Vec::new();
    let mut consistency_violations = Vec::new();
    let (mut passes, mut expected_fails, mut not_applicable, mut failures) = (0u32, 0u32, 0u32, 0u32);
    for entry in entries {
        let domain = *entry.domain();
        let mut converged: Vec<(Method, R, R)> = Vec::new();
        for method in Method::all() {
            let expected = expected_status(entry, method);
            let result = run_method(entry, method, &domain, opts)?;
            let verdict = judge(entry, &result, expected, R::of(opts.tol));
            match verdict {
                "pass" => passes += 1,
                "expected-fail" => expected_fails += 1,
                "not-applicable" => not_applicable += 1,
                _ => failures += 1,
            }
            if result.status == Status::Converged {
                converged.push((method, result.value, result.error_estimate));
            }
            cells.push(MatrixCell {
                entry: entry.canonical_id(),
                method: method.name().to_string(),
                status: result.status.as_str().to_string(),
                expected: expected.as_str().to_string(),
                value: result.value.as_f64(),
                error: result.error_estimate.as_f64(),
                verdict: verdict.to_string(),
            });
        }
        for i in 0..converged.len() {
            for j in i + 1..converged.len() {
                let (ma, va, ea) = converged[i];
                let (mb, vb, eb) = converged[j];
                let budget = ea + eb + R::of(CONSISTENCY_MARGIN);
                if (va - vb).abs() > budget {
                    consistency_violations.push(format!(
                        "{}: {} = {} vs {} = {} (budget {})",
                        entry.canonical_id(),
                        ma.name(),
                        va.as_f64(),
                        mb.name(),
                        vb.as_f64(),
                        budget.as_f64()
                    ));
                }
            }
        }
    }
    Ok(MatrixReport {
        cells,
        consistency_violations,
        passes,
        expected_fails,
        not_applicable,
        failures,
    })
}

fn judge<R: Real>(
    entry: &FunctionEntry<R>,
    result: &IntegralResult<R>,
    expected: Status,
    tol: R,
) -> &'static str {
    match (expected, result.status) {
        (Status::Converged, Status::Converged) => {
            // Converged methods must also satisfy the closed form when one
            // is known.
            if let Some(truth) = entry.primitive_delta(entry.domain()) {
                let budget = result.error_estimate + tol + entry.truncation_error().unwrap_or_else(R::zero);
                if (result.value - truth).abs() > budget {
                    return "fail";
                }
            }
            "pass"
        }
        (Status::Diverged, Status::Diverged) => "expected-fail",
        (Status::NotApplicable, Status::NotApplicable) => "not-applicable",
        _ => "fail",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn ftc_check_smooth_entry_with_riemann() {
        let entry = corpus::phi0::<f64>(4.0, 2.0).unwrap();
        let report = ftc_check(&entry, Method::Riemann, 7, 1e-6).unwrap();
        assert_eq!(report.verdict, FtcVerdict::Pass, "report {report:?}");
        assert!(report.max_error <= 1e-6);
    }

    #[test]
    fn ftc_check_conditional_with_hk() {
        let entry = corpus::conditional_example::<f64>();
        let report = ftc_check(&entry, Method::HenstockKurzweil, 5, 1e-4).unwrap();
        assert_eq!(report.verdict, FtcVerdict::Pass, "report {report:?}");
    }

    #[test]
    fn ftc_check_conditional_with_mcshane_is_expected_fail() {
        let entry = corpus::conditional_example::<f64>();
        let report = ftc_check(&entry, Method::McShane, 4, 1e-4).unwrap();
        assert_eq!(report.verdict, FtcVerdict::ExpectedFail);
        assert!(report
            .points
            .iter()
            .any(|p| p.status == "diverged"));
    }

    #[test]
    fn ftc_report_serializes_with_fixed_keys() {
        let entry = corpus::phi0::<f64>(4.0, 2.0).unwrap();
        let report = ftc_check(&entry, Method::Riemann, 3, 1e-6).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let prefix = r#"{"entry":"phi0(alpha=2"#;
        assert!(json.starts_with(&prefix[..10]), "json {json}");
        assert!(json.contains("\"max_error\":"));
        let back: FtcReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.entry, report.entry);
        assert_eq!(back.points.len(), report.points.len());
    }

    #[test]
    fn expected_statuses_follow_flags() {
        let smooth = corpus::phi0::<f64>(4.0, 2.0).unwrap();
        assert_eq!(expected_status(&smooth, Method::Riemann), Status::Converged);
        assert_eq!(expected_status(&smooth, Method::McShane), Status::Converged);
        let wild = corpus::phi0::<f64>(2.0, 2.0).unwrap();
        assert_eq!(expected_status(&wild, Method::Riemann), Status::NotApplicable);
        assert_eq!(expected_status(&wild, Method::McShane), Status::Diverged);
        assert_eq!(
            expected_status(&wild, Method::HenstockKurzweil),
            Status::Converged
        );
    }
}
