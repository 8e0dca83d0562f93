//! Internal quadrature engine shared by the improper-integral and gauge
//! drivers: midpoint-based adaptive bisection with an embedded two-subcell
//! disagreement estimate. Midpoint tags never touch cell endpoints, so
//! integrands left undefined at isolated singular points are safe as long
//! as the caller trims the singular endpoints.

use crate::scalar::Real;
use crate::sum::CompensatedSum;

/// Shared evaluation budget across one driver invocation.
#[derive(Debug)]
pub(crate) struct QuadCtx {
    pub evals: u64,
    pub budget: u64,
}

impl QuadCtx {
    pub fn new(budget: u64) -> Self {
        Self { evals: 0, budget }
    }

    #[inline]
    fn spend(&mut self, n: u64) -> Result<(), QuadFault> {
        self.evals += n;
        if self.evals > self.budget {
            Err(QuadFault::Budget)
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum QuadFault {
    /// Evaluation budget exhausted; callers degrade to `Unconverged`.
    Budget,
    /// NaN from the integrand strictly inside the integration range.
    Eval(f64),
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct QuadValue<R> {
    pub value: R,
    pub error: R,
    pub cells: u64,
    /// `sum |f(tag)| * width` for partition sums; zero for the Richardson
    /// path.
    pub abs_sum: R,
}

/// Adaptive midpoint quadrature of `f` over `[lo, hi]` with absolute
/// tolerance `abs_tol`. Richardson-corrects each accepted cell.
pub(crate) fn adaptive_midpoint<R: Real>(
    f: &dyn Fn(R) -> R,
    lo: R,
    hi: R,
    abs_tol: R,
    max_depth: u32,
    ctx: &mut QuadCtx,
) -> Result<QuadValue<R>, QuadFault> {
    if !(hi > lo) {
        return Ok(QuadValue {
            value: R::zero(),
            error: R::zero(),
            cells: 0,
            abs_sum: R::zero(),
        });
    }
    let density = abs_tol / (hi - lo);
    let mut value = CompensatedSum::new();
    let mut error = CompensatedSum::new();
    let mut cells = 0u64;
    rec_adaptive(
        f, lo, hi, density, max_depth, true, ctx, &mut value, &mut error, &mut cells,
    )?;
    Ok(QuadValue {
        value: value.value(),
        error: error.value(),
        cells,
        abs_sum: R::zero(),
    })
}

#[allow(clippy::too_many_arguments)]
fn rec_adaptive<R: Real>(
    f: &dyn Fn(R) -> R,
    lo: R,
    hi: R,
    density: R,
    depth_left: u32,
    richardson: bool,
    ctx: &mut QuadCtx,
    value: &mut CompensatedSum<R>,
    error: &mut CompensatedSum<R>,
    cells: &mut u64,
) -> Result<(), QuadFault> {
    let w = hi - lo;
    let two = R::of(2.0);
    let mid = (lo + hi) / two;
    let mid_l = (lo + mid) / two;
    let mid_r = (mid + hi) / two;
    ctx.spend(3)?;
    let fm = f(mid);
    let fl = f(mid_l);
    let fr = f(mid_r);
    if fm.is_nan() {
        return Err(QuadFault::Eval(mid.as_f64()));
    }
    if fl.is_nan() {
        return Err(QuadFault::Eval(mid_l.as_f64()));
    }
    if fr.is_nan() {
        return Err(QuadFault::Eval(mid_r.as_f64()));
    }
    let one_cell = fm * w;
    let two_cell = (fl + fr) * (w / two);
    let disagreement = (two_cell - one_cell).abs();
    let resolved = disagreement <= density * w;
    let at_float_resolution = !(lo < mid && mid < hi);
    if resolved || depth_left == 0 || at_float_resolution {
        *cells += 2;
        if richardson {
            // Midpoint-rule Richardson step: halving reduces the leading
            // error term by 4.
            value.add(two_cell + (two_cell - one_cell) / R::of(3.0));
            error.add(disagreement / R::of(3.0));
        } else {
            value.add(two_cell);
            error.add(disagreement);
        }
        return Ok(());
    }
    rec_adaptive(
        f, lo, mid, density, depth_left - 1, richardson, ctx, value, error, cells,
    )?;
    rec_adaptive(
        f, mid, hi, density, depth_left - 1, richardson, ctx, value, error, cells,
    )
}

/// Literal tagged-partition sum over an adaptively refined partition: the
/// returned value is exactly `sum f(tag) * width` over the accepted cells
/// (tags at subcell midpoints), with the per-cell disagreement total as a
/// quality measure. `min_width(x)` caps refinement near `x`, playing the
/// role of a gauge floor.
pub(crate) fn adaptive_partition_sum<R: Real>(
    f: &dyn Fn(R) -> R,
    lo: R,
    hi: R,
    abs_tol: R,
    max_depth: u32,
    min_width: &dyn Fn(R) -> R,
    ctx: &mut QuadCtx,
) -> Result<QuadValue<R>, QuadFault> {
    if !(hi > lo) {
        return Ok(QuadValue {
            value: R::zero(),
            error: R::zero(),
            cells: 0,
            abs_sum: R::zero(),
        });
    }
    let density = abs_tol / (hi - lo);
    let mut value = CompensatedSum::new();
    let mut error = CompensatedSum::new();
    let mut abs_sum = CompensatedSum::new();
    let mut cells = 0u64;
    rec_sum(
        f, lo, hi, density, max_depth, min_width, ctx, &mut value, &mut error, &mut abs_sum, &mut cells,
    )?;
    Ok(QuadValue {
        value: value.value(),
        error: error.value(),
        cells,
        abs_sum: abs_sum.value(),
    })
}

#[allow(clippy::too_many_arguments)]
fn rec_sum<R: Real>(
    f: &dyn Fn(R) -> R,
    lo: R,
    hi: R,
    density: R,
    depth_left: u32,
    min_width: &dyn Fn(R) -> R,
    ctx: &mut QuadCtx,
    value: &mut CompensatedSum<R>,
    error: &mut CompensatedSum<R>,
    abs_sum: &mut CompensatedSum<R>,
    cells: &mut u64,
) -> Result<(), QuadFault> {
    let w = hi - lo;
    let two = R::of(2.0);
    let mid = (lo + hi) / two;
    let mid_l = (lo + mid) / two;
    let mid_r = (mid + hi) / two;
    ctx.spend(3)?;
    let fm = f(mid);
    let fl = f(mid_l);
    let fr = f(mid_r);
    if fm.is_nan() {
        return Err(QuadFault::Eval(mid.as_f64()));
    }
    if fl.is_nan() {
        return Err(QuadFault::Eval(mid_l.as_f64()));
    }
    if fr.is_nan() {
        return Err(QuadFault::Eval(mid_r.as_f64()));
    }
    let one_cell = fm * w;
    let two_cell = (fl + fr) * (w / two);
    let disagreement = (two_cell - one_cell).abs();
    let floor_hit = w <= min_width(mid);
    let at_float_resolution = !(lo < mid && mid < hi);
    if depth_left == 0 || floor_hit || disagreement <= density * w || at_float_resolution {
        *cells += 2;
        value.add(two_cell);
        error.add(disagreement);
        abs_sum.add((fl.abs() + fr.abs()) * (w / two));
        return Ok(());
    }
    rec_sum(
        f, lo, mid, density, depth_left - 1, min_width, ctx, value, error, abs_sum, cells,
    )?;
    rec_sum(
        f, mid, hi, density, depth_left - 1, min_width, ctx, value, error, abs_sum, cells,
    )
}

/// Uniform midpoint- and left-tagged Riemann sums over `cells` cells.
pub(crate) fn uniform_sums<R: Real>(
    f: &dyn Fn(R) -> R,
    lo: R,
    hi: R,
    cells: u64,
    ctx: &mut QuadCtx,
) -> Result<(R, R), QuadFault> {
    let n = R::of(cells as f64);
    let w = (hi - lo) / n;
    let mut mid = CompensatedSum::new();
    let mut left = CompensatedSum::new();
    ctx.spend(2 * cells)?;
    for j in 0..cells {
        let x_left = lo + w * R::of(j as f64);
        let x_mid = x_left + w / R::of(2.0);
        let fm = f(x_mid);
        let fl = f(x_left);
        if fm.is_nan() {
            return Err(QuadFault::Eval(x_mid.as_f64()));
        }
        if fl.is_nan() {
            return Err(QuadFault::Eval(x_left.as_f64()));
        }
        mid.add(fm * w);
        left.add(fl * w);
    }
    Ok((mid.value(), left.value()))
}
