//! Constructors for the pathological-derivative corpus.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::realsets::{CantorLike, EpsilonSeq, Interval, SymbolicClosedSet};
use crate::scalar::{ratio, rational_to_real, Real};

use super::{CorpusError, EntryFlags, FunctionEntry};

/// `t^alpha * sin(t^-beta)` for `t > 0`, `0` for `t <= 0`.
fn osc_primitive<R: Real>(t: R, alpha: R, beta: R) -> R {
    if t <= R::zero() {
        return R::zero();
    }
    let phase = t.powf(-beta);
    if !phase.is_finite() {
        // Phase beyond float resolution; the value is bounded by t^alpha,
        // which is zero at this precision.
        return R::zero();
    }
    t.powf(alpha) * phase.sin()
}

/// Derivative of [`osc_primitive`]:
/// `alpha t^(alpha-1) sin(t^-beta) - beta t^(alpha-beta-1) cos(t^-beta)`
/// for `t > 0`; `0` at `t <= 0` when `alpha > 1` (NaN at `t = 0`
/// otherwise: the derivative does not exist there).
fn osc_derivative<R: Real>(t: R, alpha: R, beta: R) -> R {
    if t < R::zero() {
        return R::zero();
    }
    if t == R::zero() {
        return if alpha > R::one() { R::zero() } else { R::nan() };
    }
    let phase = t.powf(-beta);
    if !phase.is_finite() {
        return R::zero();
    }
    alpha * t.powf(alpha - R::one()) * phase.sin()
        - beta * t.powf(alpha - beta - R::one()) * phase.cos()
}

fn osc_flags(alpha: f64, beta: f64) -> EntryFlags {
    EntryFlags {
        bounded: alpha >= beta + 1.0,
        continuous_ae: true,
        derivative_everywhere: alpha > 1.0,
        absolutely_integrable: alpha > beta,
        boundary_case: alpha == 1.0 || alpha == beta || alpha == beta + 1.0,
    }
}

fn require_positive(name: &str, v: f64) -> Result<(), CorpusError> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(CorpusError::InvalidParameter {
            detail: format!("{name} must be positive and finite, got {v}"),
        });
    }
    Ok(())
}

fn fmt_param(v: f64) -> String {
    format!("{v}")
}

/// The oscillating power function on `[0, 1]`: primitive
/// `x^alpha sin(x^-beta)` with value 0 at the origin, evaluable function
/// its derivative. The derivative is continuous at the origin iff
/// `alpha > beta + 1`, unbounded there iff `alpha < beta + 1`, and not
/// absolutely integrable near 0 iff `alpha <= beta`. With `alpha <= 1`
/// the entry is marked not differentiable at 0 rather than rejected.
pub fn phi0<R: Real>(alpha: f64, beta: f64) -> Result<FunctionEntry<R>, CorpusError> {
    require_positive("alpha", alpha)?;
    require_positive("beta", beta)?;
    let a = R::of(alpha);
    let b = R::of(beta);
    let flags = osc_flags(alpha, beta);
    let singular = if alpha < beta + 1.0 {
        SymbolicClosedSet::finite_points([R::zero()])
    } else {
        SymbolicClosedSet::Empty
    };
    let mut params = BTreeMap::new();
    params.insert("alpha".into(), fmt_param(alpha));
    params.insert("beta".into(), fmt_param(beta));
    Ok(FunctionEntry::new(
        "phi0",
        params,
        Interval::closed(R::zero(), R::one()).unwrap(),
        Arc::new(move |x| osc_derivative(x, a, b)),
        Some(Arc::new(move |x| osc_primitive(x, a, b))),
        singular,
        flags,
    ))
}

fn kernel<R: Real>(x: R, lo: R, hi: R) -> R {
    (x - lo) * (hi - x) / (hi - lo)
}

fn phi_interval_primitive_at<R: Real>(x: R, lo: R, hi: R, alpha: R, beta: R) -> R {
    if x <= lo || x >= hi {
        return R::zero();
    }
    osc_primitive(kernel(x, lo, hi), alpha, beta)
}

fn phi_interval_derivative_at<R: Real>(x: R, lo: R, hi: R, alpha: R, beta: R) -> R {
    if x < lo || x > hi {
        return R::zero();
    }
    if x == lo || x == hi {
        return if alpha > R::one() { R::zero() } else { R::nan() };
    }
    let du = (lo + hi - R::of(2.0) * x) / (hi - lo);
    du * osc_derivative(kernel(x, lo, hi), alpha, beta)
}

/// The two-endpoint variant on `[a, b]`: the kernel `(x-a)(b-x)/(b-a)`
/// replaces `x`, giving the same behavior at both endpoints that `phi0`
/// has at the origin. The primitive satisfies
/// `|phi| <= ((b-a)/4)^alpha`, recorded as metadata.
pub fn phi_interval<R: Real>(
    a: f64,
    b: f64,
    alpha: f64,
    beta: f64,
) -> Result<FunctionEntry<R>, CorpusError> {
    require_positive("alpha", alpha)?;
    require_positive("beta", beta)?;
    if !(a < b) {
        return Err(CorpusError::InvalidParameter {
            detail: format!("need a < b, got a={a}, b={b}"),
        });
    }
    let (lo, hi) = (R::of(a), R::of(b));
    let (al, be) = (R::of(alpha), R::of(beta));
    let flags = osc_flags(alpha, beta);
    let singular = if alpha < beta + 1.0 {
        SymbolicClosedSet::finite_points([lo, hi])
    } else {
        SymbolicClosedSet::Empty
    };
    let mut params = BTreeMap::new();
    params.insert("a".into(), fmt_param(a));
    params.insert("b".into(), fmt_param(b));
    params.insert("alpha".into(), fmt_param(alpha));
    params.insert("beta".into(), fmt_param(beta));
    let sup = R::of(((b - a) / 4.0).powf(alpha));
    Ok(FunctionEntry::new(
        "phi_interval",
        params,
        Interval::closed(lo, hi).unwrap(),
        Arc::new(move |x| phi_interval_derivative_at(x, lo, hi, al, be)),
        Some(Arc::new(move |x| phi_interval_primitive_at(x, lo, hi, al, be))),
        singular,
        flags,
    )
    .with_sup_bound(sup))
}

/// Truncated countable-singularity series on `[0, 1]`:
/// `sum_(n=1..terms) phi0(x - c_n; alpha_n, beta_n) / n!`. Requires every
/// `alpha_n > 1` so the truncated series is differentiable term by term;
/// the singular set is the point set `c`. The factorial decay plus the
/// `|phi0| <= 1` envelope bound the dropped tail, recorded as metadata.
pub fn phi_countable<R: Real>(
    points: &[R],
    alpha_of: impl Fn(usize) -> f64,
    beta_of: impl Fn(usize) -> f64,
) -> Result<FunctionEntry<R>, CorpusError> {
    let mut shifts: Vec<(R, R, R, R)> = Vec::with_capacity(points.len());
    let mut factorial = 1.0f64;
    let mut flags = EntryFlags {
        bounded: true,
        continuous_ae: true,
        derivative_everywhere: true,
        absolutely_integrable: true,
        boundary_case: false,
    };
    for (idx, &c) in points.iter().enumerate() {
        let n = idx + 1;
        let alpha = alpha_of(n);
        let beta = beta_of(n);
        require_positive("beta", beta)?;
        if !(alpha > 1.0) {
            return Err(CorpusError::InvalidParameter {
                detail: format!("alpha({n}) must exceed 1 for a differentiable series, got {alpha}"),
            });
        }
        factorial *= n as f64;
        let f = osc_flags(alpha, beta);
        flags.bounded &= f.bounded;
        flags.absolutely_integrable &= f.absolutely_integrable;
        flags.boundary_case |= f.boundary_case;
        shifts.push((c, R::of(alpha), R::of(beta), R::of(1.0 / factorial)));
    }
    let terms = shifts.len();
    // Tail of sum 1/n! past the truncation.
    let tail = if terms == 0 {
        2.0
    } else {
        2.0 / (factorial * (terms as f64 + 1.0))
    };
    let shifts_eval = shifts.clone();
    let eval = Arc::new(move |x: R| {
        let mut s = R::zero();
        for &(c, a, b, w) in &shifts_eval {
            s = s + w * osc_derivative(x - c, a, b);
        }
        s
    });
    let shifts_prim = shifts;
    let primitive = Arc::new(move |x: R| {
        let mut s = R::zero();
        for &(c, a, b, w) in &shifts_prim {
            s = s + w * osc_primitive(x - c, a, b);
        }
        s
    });
    let mut params = BTreeMap::new();
    params.insert("terms".into(), terms.to_string());
    Ok(FunctionEntry::new(
        "phi_countable",
        params,
        Interval::closed(R::zero(), R::one()).unwrap(),
        eval,
        Some(primitive),
        SymbolicClosedSet::finite_points(points.iter().copied()),
        flags,
    )
    .with_truncation_error(R::of(tail)))
}

/// [`phi_countable`] with constant parameters over a named point family.
/// `seq` is `"reciprocal"` (`c_n = 1/n`) or `"rationals"` (the fixed
/// denominator-major enumeration of the rationals in `(0,1)`).
pub fn phi_countable_uniform<R: Real>(
    seq: &str,
    terms: usize,
    alpha: f64,
    beta: f64,
) -> Result<FunctionEntry<R>, CorpusError> {
    let points: Vec<R> = match seq {
        "reciprocal" => (1..=terms).map(|n| R::of(1.0 / n as f64)).collect(),
        "rationals" => rational_enumeration(terms),
        other => {
            return Err(CorpusError::InvalidParameter {
                detail: format!("unknown point family '{other}'"),
            })
        }
    };
    let entry = phi_countable(&points, |_| alpha, |_| beta)?;
    let mut params = entry.params().clone();
    params.insert("seq".into(), seq.to_string());
    params.insert("alpha".into(), fmt_param(alpha));
    params.insert("beta".into(), fmt_param(beta));
    Ok(FunctionEntry::new(
        "phi_countable",
        params,
        *entry.domain(),
        entry.eval_fn(),
        entry.primitive_fn(),
        entry.singular_set().clone(),
        entry.flags(),
    )
    .with_truncation_error(entry.truncation_error().unwrap()))
}

/// The fixed enumeration of the rationals in `(0, 1)`: coprime `p/q`
/// ordered by denominator, then numerator: 1/2, 1/3, 2/3, 1/4, 3/4, ...
pub fn rational_enumeration<R: Real>(count: usize) -> Vec<R> {
    let mut out = Vec::with_capacity(count);
    let mut q = 2u64;
    while out.len() < count {
        for p in 1..q {
            if gcd(p, q) == 1 {
                out.push(R::of(p as f64 / q as f64));
                if out.len() == count {
                    return out;
                }
            }
        }
        q += 1;
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

struct VolterraPieces<R> {
    // Sorted by left endpoint.
    pieces: Vec<(R, R)>,
    alpha: R,
    beta: R,
}

impl<R: Real> VolterraPieces<R> {
    fn locate(&self, x: R) -> Option<(R, R)> {
        let idx = self.pieces.partition_point(|&(lo, _)| lo < x);
        if idx == 0 {
            return None;
        }
        let (lo, hi) = self.pieces[idx - 1];
        (x > lo && x < hi).then_some((lo, hi))
    }

    fn primitive(&self, x: R) -> R {
        match self.locate(x) {
            Some((lo, hi)) => phi_interval_primitive_at(x, lo, hi, self.alpha, self.beta),
            None => R::zero(),
        }
    }

    fn derivative(&self, x: R) -> R {
        match self.locate(x) {
            Some((lo, hi)) => phi_interval_derivative_at(x, lo, hi, self.alpha, self.beta),
            None => R::zero(),
        }
    }
}

fn volterra_pieces<R: Real>(
    cantor: &CantorLike,
    alpha: f64,
    beta: f64,
    depth: u32,
) -> Result<VolterraPieces<R>, CorpusError> {
    let removed = cantor
        .removed_up_to_depth(depth)
        .map_err(|e| CorpusError::InvalidParameter {
            detail: e.to_string(),
        })?;
    let mut pieces: Vec<(R, R)> = removed
        .iter()
        .map(|(a, b)| (rational_to_real(a), rational_to_real(b)))
        .collect();
    pieces.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(VolterraPieces {
        pieces,
        alpha: R::of(alpha),
        beta: R::of(beta),
    })
}

/// The Volterra-type function over a Cantor-like set: on each contiguous
/// interval enumerated to `depth` it is the matching [`phi_interval`]
/// piece, and 0 on the set itself. The derivative inherits the `phi0`
/// case thresholds at every point of the set.
pub fn volterra<R: Real>(
    k: &SymbolicClosedSet<R>,
    alpha: f64,
    beta: f64,
    depth: u32,
) -> Result<FunctionEntry<R>, CorpusError> {
    require_positive("alpha", alpha)?;
    require_positive("beta", beta)?;
    let cantor = match k {
        SymbolicClosedSet::CantorLike(c) => c.clone(),
        other => {
            return Err(CorpusError::NeedsCantorLike {
                got: crate::realsets::to_sexpr(other),
            })
        }
    };
    let pieces = volterra_pieces::<R>(&cantor, alpha, beta, depth)?;
    let pieces_prim = volterra_pieces::<R>(&cantor, alpha, beta, depth)?;
    let flags = osc_flags(alpha, beta);
    let singular = if alpha > 1.0 && alpha < beta + 1.0 {
        k.clone()
    } else {
        SymbolicClosedSet::Empty
    };
    let mut params = BTreeMap::new();
    params.insert(
        "eps".into(),
        match cantor.eps() {
            EpsilonSeq::Const(q) => q.to_string(),
            EpsilonSeq::InverseSquare(q) => format!("invsq:{q}"),
        },
    );
    params.insert("alpha".into(), fmt_param(alpha));
    params.insert("beta".into(), fmt_param(beta));
    params.insert("depth".into(), depth.to_string());
    let hull: Interval<R> = cantor.hull();
    let sup = R::of((hull.length().as_f64() / 4.0).powf(alpha));
    Ok(FunctionEntry::new(
        "volterra",
        params,
        hull,
        Arc::new(move |x| pieces.derivative(x)),
        Some(Arc::new(move |x| pieces_prim.primitive(x))),
        singular,
        flags,
    )
    .with_sup_bound(sup))
}

/// Sum of Volterra functions over fat Cantor sets `K_n`, `n = 2..=count_n`,
/// weighted `3^-n`; `K_n` is built with `eps_k = 1/(2 n^2 k^2)` and its
/// depth-truncated measure is certified to exceed `(1 - 1/n)` of the base
/// interval, so the union of singular structure carries most of the
/// interval's measure.
pub fn fat_union<R: Real>(
    count_n: u32,
    alpha: f64,
    beta: f64,
    depth: u32,
) -> Result<FunctionEntry<R>, CorpusError> {
    if count_n < 2 {
        return Err(CorpusError::InvalidParameter {
            detail: format!("count_n must be at least 2, got {count_n}"),
        });
    }
    let unit = Interval::closed(R::zero(), R::one()).unwrap();
    let mut components: Vec<(f64, FunctionEntry<R>)> = Vec::new();
    let mut singular_members = Vec::new();
    for n in 2..=count_n {
        let c = ratio(1, 2 * (n as i64) * (n as i64));
        let cantor = CantorLike::new(ratio(0, 1), ratio(1, 1), EpsilonSeq::InverseSquare(c.clone()))
            .map_err(|e| CorpusError::InvalidParameter {
                detail: e.to_string(),
            })?;
        // Certified lower bound: partial product times (1 - tail sum).
        let partial = cantor
            .partial_product(depth)
            .map_err(|e| CorpusError::InvalidParameter {
                detail: e.to_string(),
            })?;
        let tail = cantor.eps().tail_sum_bound(depth).expect("summable tail");
        let lower = &partial * (ratio(1, 1) - tail);
        let needed = ratio(1, 1) - ratio(1, n as i64);
        if lower <= needed {
            return Err(CorpusError::DepthInsufficient {
                depth,
                detail: format!(
                    "certified measure bound {lower} does not exceed 1 - 1/{n}"
                ),
            });
        }
        let set = SymbolicClosedSet::CantorLike(cantor);
        let entry = volterra(&set, alpha, beta, depth)?;
        singular_members.push(set);
        components.push(((3.0f64).powi(-(n as i32)), entry));
    }
    let evals: Vec<(R, Arc<dyn Fn(R) -> R + Send + Sync>)> = components
        .iter()
        .map(|(w, e)| (R::of(*w), e.eval_fn()))
        .collect();
    let prims: Vec<(R, Arc<dyn Fn(R) -> R + Send + Sync>)> = components
        .iter()
        .map(|(w, e)| (R::of(*w), e.primitive_fn().expect("volterra primitive")))
        .collect();
    let flags = osc_flags(alpha, beta);
    let singular = if alpha > 1.0 && alpha < beta + 1.0 {
        SymbolicClosedSet::Union(singular_members)
    } else {
        SymbolicClosedSet::Empty
    };
    let mut params = BTreeMap::new();
    params.insert("n".into(), count_n.to_string());
    params.insert("alpha".into(), fmt_param(alpha));
    params.insert("beta".into(), fmt_param(beta));
    params.insert("depth".into(), depth.to_string());
    // Tail of sum ((b-a)/4)^alpha 3^-n past count_n.
    let tail = (0.25f64).powf(alpha) * (3.0f64).powi(-(count_n as i32)) / 2.0;
    Ok(FunctionEntry::new(
        "fat_union",
        params,
        unit,
        Arc::new(move |x| {
            let mut s = R::zero();
            for (w, f) in &evals {
                s = s + *w * f(x);
            }
            s
        }),
        Some(Arc::new(move |x| {
            let mut s = R::zero();
            for (w, f) in &prims {
                s = s + *w * f(x);
            }
            s
        })),
        singular,
        flags,
    )
    .with_truncation_error(R::of(tail)))
}

/// Exact Cantor-function value at the triadic rational `numer / 3^denom_pow3`
/// as a dyadic numerator over `2^digit_budget`. Integer arithmetic
/// throughout: the base-3 digits map to binary digits (2 -> 1, 0 -> 0,
/// first 1 terminates).
pub fn cantor_value_exact(numer: u128, denom_pow3: u32, digit_budget: u32) -> u64 {
    assert!(denom_pow3 <= 75, "denominator exponent too large");
    assert!(digit_budget <= 63, "digit budget too large");
    let denom = 3u128.pow(denom_pow3);
    assert!(numer <= denom, "argument outside [0, 1]");
    if numer == denom {
        return 1u64 << digit_budget;
    }
    let mut rest = numer;
    let mut acc = 0u64;
    for i in 1..=digit_budget {
        rest *= 3;
        let d = rest / denom;
        rest -= d * denom;
        match d {
            0 => {}
            1 => {
                acc |= 1u64 << (digit_budget - i);
                return acc;
            }
            _ => acc |= 1u64 << (digit_budget - i),
        }
    }
    acc
}

/// The Cantor function on `[0, 1]`: constant `(2k-1)/2^n` on the removed
/// intervals of the ternary set (left to right at each stage) and defined
/// on the set itself by the base-3 to base-2 digit map, truncated at
/// `depth` digits. Increasing, `F(0) = 0`, `F(1) = 1`, derivative zero off
/// the set; carries no primitive field.
pub fn cantor_function<R: Real>(depth: u32) -> Result<FunctionEntry<R>, CorpusError> {
    if depth == 0 {
        return Err(CorpusError::InvalidParameter {
            detail: "depth must be at least 1".into(),
        });
    }
    let digits = depth.min(52);
    let eval = Arc::new(move |x: R| {
        let xv = x.as_f64();
        if xv <= 0.0 {
            return R::zero();
        }
        if xv >= 1.0 {
            return R::one();
        }
        let mut y = xv;
        let mut value = 0.0f64;
        let mut scale = 0.5f64;
        for _ in 0..digits {
            y *= 3.0;
            let d = y.floor().clamp(0.0, 2.0);
            y -= d;
            if d == 1.0 {
                value += scale;
                break;
            }
            if d == 2.0 {
                value += scale;
            }
            scale *= 0.5;
        }
        R::of(value)
    });
    let mut params = BTreeMap::new();
    params.insert("depth".into(), depth.to_string());
    Ok(FunctionEntry::new(
        "cantor_function",
        params,
        Interval::closed(R::zero(), R::one()).unwrap(),
        eval,
        None,
        SymbolicClosedSet::Empty,
        EntryFlags {
            bounded: true,
            continuous_ae: true,
            derivative_everywhere: false,
            absolutely_integrable: true,
            boundary_case: false,
        },
    ))
}

/// The conditionally integrable derivative on `[0, 1]`: primitive
/// `F(x) = x^2 sin(pi / (2 x^2))` with `F(0) = 0`. `F` is differentiable
/// everywhere (including 0, where the derivative is 0), but `|F'|` has
/// divergent lobe areas near the origin, so the derivative is integrable
/// only non-absolutely.
pub fn conditional_example<R: Real>() -> FunctionEntry<R> {
    let eval = Arc::new(move |x: R| {
        if x <= R::zero() {
            return R::zero();
        }
        let phase = R::PI() / (R::of(2.0) * x * x);
        if !phase.is_finite() {
            return R::zero();
        }
        R::of(2.0) * x * phase.sin() - (R::PI() / x) * phase.cos()
    });
    let primitive = Arc::new(move |x: R| {
        if x <= R::zero() {
            return R::zero();
        }
        let phase = R::PI() / (R::of(2.0) * x * x);
        if !phase.is_finite() {
            return R::zero();
        }
        x * x * phase.sin()
    });
    FunctionEntry::new(
        "conditional_example",
        BTreeMap::new(),
        Interval::closed(R::zero(), R::one()).unwrap(),
        eval,
        Some(primitive),
        SymbolicClosedSet::finite_points([R::zero()]),
        EntryFlags {
            bounded: false,
            continuous_ae: true,
            derivative_everywhere: true,
            absolutely_integrable: false,
            boundary_case: false,
        },
    )
}

/// Oscillation-lobe boundaries of the conditional example: the zeros of
/// `cos(pi/(2x^2))` at `x_k = 1/sqrt(2k+1)`, `k = 0, 1, ...` (`x_0 = 1`).
/// Solved analytically so tests need no root finding.
pub fn conditional_lobe_boundary<R: Real>(k: u32) -> R {
    R::of(1.0 / (2.0 * k as f64 + 1.0).sqrt())
}

/// The continuous difference-quotient approximation built from the
/// primitive: `phi_n(x) = n (F(x + 1/n) - F(x))`, with the argument
/// clamped at the right endpoint. Converges pointwise to the derivative
/// wherever it exists.
pub fn baire1_approximation<R: Real>(
    entry: &FunctionEntry<R>,
    n: u32,
) -> Result<Arc<dyn Fn(R) -> R + Send + Sync>, CorpusError> {
    if n == 0 {
        return Err(CorpusError::InvalidParameter {
            detail: "n must be positive".into(),
        });
    }
    let f = entry.primitive_fn().ok_or(CorpusError::NoPrimitive)?;
    let hi = entry.domain().hi();
    let nv = R::of(n as f64);
    Ok(Arc::new(move |x: R| {
        let shifted = (x + nv.recip()).min(hi);
        nv * (f(shifted) - f(x))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realsets::to_sexpr;

    #[test]
    fn phi0_standard_flags() {
        let e = phi0::<f64>(2.0, 2.0).unwrap();
        let f = e.flags();
        assert!(!f.bounded);
        assert!(!f.absolutely_integrable);
        assert!(f.derivative_everywhere);
        assert_eq!(to_sexpr(e.singular_set()), "(finite 0)");
    }

    #[test]
    fn phi0_smooth_regime() {
        let e = phi0::<f64>(4.0, 2.0).unwrap();
        assert!(e.flags().bounded);
        assert!(e.flags().absolutely_integrable);
        assert!(e.singular_set().is_empty_set());
    }

    #[test]
    fn phi0_primitive_value_at_one() {
        let e = phi0::<f64>(2.0, 2.0).unwrap();
        assert!((e.primitive_at(1.0).unwrap() - 1.0f64.sin()).abs() < 1e-12);
        assert!((e.primitive_at(1.0).unwrap() - 0.8414710).abs() < 1e-6);
    }

    #[test]
    fn phi0_alpha_at_most_one_not_differentiable() {
        let e = phi0::<f64>(0.7, 1.0).unwrap();
        assert!(!e.flags().derivative_everywhere);
        assert!(e.eval(0.0).is_nan());
    }

    #[test]
    fn phi0_admission_spot_check() {
        for (a, b) in [(2.0, 2.0), (4.0, 2.0), (2.5, 2.0), (3.0, 1.5)] {
            phi0::<f64>(a, b).unwrap().spot_check(7, 100).unwrap();
        }
    }

    #[test]
    fn phi0_unbounded_exactly_when_below_threshold() {
        // Sampled sup over [1e-4, 1] exceeds the proxy bound exactly when
        // 1 < alpha < beta + 1 (boundary parameters excluded).
        for &alpha in &[1.5, 2.0, 3.0, 4.0] {
            for &beta in &[1.0, 2.0, 3.0] {
                let e = phi0::<f64>(alpha, beta).unwrap();
                if e.flags().boundary_case {
                    continue;
                }
                let mut sup: f64 = 0.0;
                let mut x = 1e-4;
                while x <= 1.0 {
                    sup = sup.max(e.eval(x).abs());
                    x *= 1.02;
                }
                let predicted_unbounded = alpha > 1.0 && alpha < beta + 1.0;
                assert_eq!(
                    sup > 1e6,
                    predicted_unbounded,
                    "alpha={alpha} beta={beta} sup={sup}"
                );
            }
        }
    }

    #[test]
    fn phi_interval_vanishes_at_endpoints_and_respects_sup() {
        let e = phi_interval::<f64>(0.0, 1.0, 2.0, 2.0).unwrap();
        assert_eq!(e.primitive_at(0.0).unwrap(), 0.0);
        assert_eq!(e.primitive_at(1.0).unwrap(), 0.0);
        let bound = e.sup_bound().unwrap();
        assert!((bound - 0.0625).abs() < 1e-15);
        for j in 1..400 {
            let x = j as f64 / 400.0;
            assert!(e.primitive_at(x).unwrap().abs() <= bound + 1e-15);
        }
    }

    #[test]
    fn phi_interval_kernel_peaks_at_quarter_length() {
        let (a, b) = (0.25f64, 0.75f64);
        let mid = (a + b) / 2.0;
        assert!((kernel(mid, a, b) - (b - a) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn phi_countable_single_term_matches_shifted_phi0() {
        let e = phi_countable::<f64>(&[0.5], |_| 2.0, |_| 2.0).unwrap();
        let base = phi0::<f64>(2.0, 2.0).unwrap();
        for j in 0..50 {
            let x = 0.5 + j as f64 / 100.0;
            let expect = base.primitive_at(x - 0.5).unwrap();
            assert!((e.primitive_at(x).unwrap() - expect).abs() < 1e-14);
        }
        assert_eq!(e.primitive_at(0.3).unwrap(), 0.0);
    }

    #[test]
    fn phi_countable_eight_rationals() {
        let pts = rational_enumeration::<f64>(8);
        assert_eq!(pts[0], 0.5);
        assert_eq!(pts[1], 1.0 / 3.0);
        assert_eq!(pts[2], 2.0 / 3.0);
        let e = phi_countable(&pts, |_| 2.0, |_| 2.0).unwrap();
        assert_eq!(to_sexpr(e.singular_set()).matches(' ').count(), 8);
        e.spot_check(11, 100).unwrap();
    }

    #[test]
    fn phi_countable_zero_terms_is_zero() {
        let e = phi_countable::<f64>(&[], |_| 2.0, |_| 2.0).unwrap();
        assert_eq!(e.eval(0.37), 0.0);
        assert_eq!(e.primitive_at(0.9).unwrap(), 0.0);
        assert!(e.singular_set().is_empty_set());
    }

    #[test]
    fn phi_countable_rejects_small_alpha() {
        assert!(phi_countable::<f64>(&[0.5], |_| 1.0, |_| 2.0).is_err());
    }

    #[test]
    fn volterra_vanishes_on_construction_endpoints() {
        let unit = Interval::closed(0.0, 1.0).unwrap();
        let k = SymbolicClosedSet::cantor_like(&unit, EpsilonSeq::Const(ratio(1, 3))).unwrap();
        let e = volterra(&k, 2.0, 2.0, 8).unwrap();
        for x in [0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0 / 9.0, 2.0 / 9.0, 1.0] {
            assert_eq!(e.eval(x), 0.0, "derivative at {x}");
            assert_eq!(e.primitive_at(x).unwrap(), 0.0, "primitive at {x}");
        }
        // Unbounded on K, not absolutely integrable near K points.
        assert!(!e.flags().bounded);
        assert!(!e.flags().absolutely_integrable);
        assert!(!e.singular_set().is_empty_set());
    }

    #[test]
    fn volterra_fat_smooth_variant_is_continuous() {
        let unit = Interval::closed(0.0, 1.0).unwrap();
        let k = SymbolicClosedSet::cantor_like(&unit, EpsilonSeq::InverseSquare(ratio(1, 4)))
            .unwrap();
        let e = volterra(&k, 4.0, 2.0, 8).unwrap();
        assert!(e.flags().bounded);
        assert!(e.singular_set().is_empty_set());
        e.spot_check(3, 100).unwrap();
    }

    #[test]
    fn volterra_rejects_non_cantor() {
        let s = SymbolicClosedSet::finite_points([0.5f64]);
        assert!(matches!(
            volterra(&s, 2.0, 2.0, 4),
            Err(CorpusError::NeedsCantorLike { .. })
        ));
    }

    #[test]
    fn fat_union_certifies_measure() {
        let e = fat_union::<f64>(4, 2.0, 2.0, 8).unwrap();
        assert_eq!(e.eval(0.0), 0.0);
        // Certification failure with an absurd depth.
        assert!(matches!(
            fat_union::<f64>(40, 2.0, 2.0, 1),
            Err(CorpusError::DepthInsufficient { .. })
        ));
    }

    #[test]
    fn cantor_function_plateau_values() {
        let e = cantor_function::<f64>(20).unwrap();
        assert_eq!(e.eval(0.5), 0.5);
        assert_eq!(e.eval(0.4), 0.5);
        assert_eq!(e.eval(1.0 / 9.0 + 0.01), 0.25);
        assert_eq!(e.eval(7.0 / 9.0 + 0.01), 0.75);
        assert_eq!(e.eval(0.0), 0.0);
        assert_eq!(e.eval(1.0), 1.0);
    }

    #[test]
    fn cantor_function_monotone_on_sorted_sample() {
        let e = cantor_function::<f64>(20).unwrap();
        let mut prev = -1.0f64;
        for j in 0..=1000 {
            let v = e.eval(j as f64 / 1000.0);
            assert!(v >= prev, "not monotone at {j}");
            prev = v;
        }
    }

    #[test]
    fn cantor_exact_matches_float_on_plateaus() {
        // F(2/3) = 1/2 exactly: numer 2*3^19 over 3^20.
        let v = cantor_value_exact(2 * 3u128.pow(19), 20, 20);
        assert_eq!(v as f64 / (1u64 << 20) as f64, 0.5);
        assert_eq!(cantor_value_exact(0, 20, 20), 0);
        assert_eq!(cantor_value_exact(3u128.pow(20), 20, 20), 1 << 20);
    }

    #[test]
    fn conditional_example_values() {
        let e = conditional_example::<f64>();
        assert!((e.primitive_at(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(e.primitive_at(0.0).unwrap(), 0.0);
        assert_eq!(e.eval(0.0), 0.0);
        e.spot_check(13, 100).unwrap();
        assert!(!e.flags().absolutely_integrable);
    }

    #[test]
    fn conditional_lobes_are_cosine_zeros() {
        for k in 0..10u32 {
            let x: f64 = conditional_lobe_boundary(k);
            let phase = std::f64::consts::PI / (2.0 * x * x);
            assert!(phase.cos().abs() < 1e-9, "k={k}");
        }
        assert_eq!(conditional_lobe_boundary::<f64>(0), 1.0);
    }

    fn plain_entry(
        name: &str,
        domain: (f64, f64),
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        prim: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> FunctionEntry<f64> {
        FunctionEntry::new(
            name,
            BTreeMap::new(),
            Interval::closed(domain.0, domain.1).unwrap(),
            Arc::new(f),
            Some(Arc::new(prim)),
            SymbolicClosedSet::Empty,
            EntryFlags {
                bounded: true,
                continuous_ae: true,
                derivative_everywhere: true,
                absolutely_integrable: true,
                boundary_case: false,
            },
        )
    }

    #[test]
    fn baire1_difference_quotients() {
        // F(x) = x^2 on [0, 2]: phi_10(1) = 10((1.1)^2 - 1) = 2.1.
        let square = plain_entry("square", (0.0, 2.0), |x| 2.0 * x, |x| x * x);
        let q = baire1_approximation(&square, 10).unwrap();
        assert!((q(1.0) - 2.1).abs() < 1e-12);
        // Linear F with slope m: the quotient is exactly m at every n.
        let linear = plain_entry("linear", (0.0, 2.0), |_| 3.0, |x| 3.0 * x);
        for n in [1u32, 7, 100] {
            let q = baire1_approximation(&linear, n).unwrap();
            assert!((q(0.3) - 3.0).abs() < 1e-9, "n={n}");
        }
        assert!(baire1_approximation(&square, 0).is_err());
    }

    #[test]
    fn baire1_conditional_at_origin_decays() {
        let e = conditional_example::<f64>();
        for n in [100u32, 1_000, 10_000] {
            let q = baire1_approximation(&e, n).unwrap();
            let v: f64 = q(0.0);
            assert!(
                v.abs() <= 1.0 / n as f64 + 1e-12,
                "phi_{n}(0) = {v} exceeds 1/n"
            );
        }
    }
}
