//! Improper integration: the Cauchy extension of the Riemann integral at
//! finitely many singular points, and its transfinite iteration over a
//! reducible symbolic singular set (finite derived rank, or rank towers
//! through the omega limit).

use crate::realsets::{Interval, RankTag, SetError, SymbolicClosedSet, TowerDepth};
use crate::scalar::Real;
use crate::sum::CompensatedSum;

use super::extrapolate::limit_extrapolate;
use super::quad::{adaptive_midpoint, QuadCtx, QuadFault};
use super::{IntegralResult, IntegrateError, Integrand, Method, Status, Trail};

/// Minimum separation between distinct singular points.
const MIN_SEPARATION: f64 = 1e-13;
/// Dyadic cutoff stages per singular endpoint.
const MAX_STAGES: usize = 44;
/// Default evaluation budget per driver call.
const EVAL_BUDGET: u64 = 30_000_000;
/// Default recursion guard across singular-structure levels.
const RECURSION_GUARD: u32 = 16;
/// Adaptive bisection depth per slab.
const QUAD_DEPTH: u32 = 44;

/// Partial outcome of one sub-interval of a composite driver.
#[derive(Debug, Clone)]
pub(crate) struct Piece<R> {
    pub value: R,
    pub error: R,
    pub status: Status,
    pub witness: Vec<R>,
    pub stages: Vec<R>,
    pub cells: u64,
    pub notes: Vec<String>,
}

impl<R: Real> Piece<R> {
    pub fn converged(value: R, error: R) -> Self {
        Self {
            value,
            error,
            status: Status::Converged,
            witness: Vec::new(),
            stages: Vec::new(),
            cells: 0,
            notes: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        Self::converged(R::zero(), R::zero())
    }

    pub fn absorb(&mut self, other: Piece<R>) {
        self.value = self.value + other.value;
        self.error = self.error + other.error;
        self.cells += other.cells;
        self.status = worst(self.status, other.status);
        if !other.witness.is_empty() && self.witness.is_empty() {
            self.witness = other.witness;
        }
        if other.stages.len() > self.stages.len() {
            self.stages = other.stages;
        }
        self.notes.extend(other.notes);
    }
}

pub(crate) fn worst(a: Status, b: Status) -> Status {
    use Status::*;
    match (a, b) {
        (Diverged, _) | (_, Diverged) => Diverged,
        (Unconverged, _) | (_, Unconverged) => Unconverged,
        (NotApplicable, _) | (_, NotApplicable) => NotApplicable,
        _ => Converged,
    }
}

fn quad_piece<R: Real>(
    f: &Integrand<R>,
    lo: R,
    hi: R,
    tol: R,
    ctx: &mut QuadCtx,
) -> Result<Piece<R>, IntegrateError> {
    match adaptive_midpoint(&|x| f.eval(x), lo, hi, tol, QUAD_DEPTH, ctx) {
        Ok(q) => Ok(Piece {
            value: q.value,
            error: q.error,
            status: Status::Converged,
            witness: Vec::new(),
            stages: Vec::new(),
            cells: q.cells,
            notes: Vec::new(),
        }),
        Err(QuadFault::Budget) => Ok(Piece {
            value: R::zero(),
            error: tol,
            status: Status::Unconverged,
            witness: Vec::new(),
            stages: Vec::new(),
            cells: 0,
            notes: vec!["evaluation budget exhausted".into()],
        }),
        Err(QuadFault::Eval(x)) => Err(IntegrateError::EvalFailure { at: x }),
    }
}

/// Shrinking-cutoff limit at a singular endpoint: integrates slabs
/// `[sing + eps_k, sing + eps_(k-1)]` (dyadic `eps_k`), accumulates the
/// cutoff integrals, and extrapolates their limit.
pub(crate) fn one_sided_limit<R: Real>(
    sing: R,
    far: R,
    eps0: R,
    tol: R,
    slab: &mut dyn FnMut(R, R, R) -> Result<Piece<R>, IntegrateError>,
) -> Result<Piece<R>, IntegrateError> {
    let dir = if far > sing { R::one() } else { -R::one() };
    let mut cutoff = eps0.abs();
    debug_assert!(cutoff <= (far - sing).abs());
    let mut acc = CompensatedSum::new();
    let mut slab_error = CompensatedSum::new();
    let mut stage_sums: Vec<R> = Vec::new();
    let mut cells = 0u64;
    let mut notes: Vec<String> = Vec::new();
    let mut slab_status = Status::Converged;

    // Base slab from the first cutoff to the far end.
    let a0 = sing + dir * cutoff;
    let (lo, hi) = if dir > R::zero() { (a0, far) } else { (far, a0) };
    let base = slab(lo, hi, tol / R::of(4.0))?;
    if base.status == Status::Diverged {
        return Ok(base);
    }
    slab_status = worst(slab_status, base.status);
    acc.add(base.value);
    slab_error.add(base.error);
    cells += base.cells;
    notes.extend(base.notes);
    stage_sums.push(acc.value());

    for stage in 1..MAX_STAGES {
        let next_cutoff = cutoff / R::of(2.0);
        let a_prev = sing + dir * cutoff;
        let a_next = sing + dir * next_cutoff;
        if a_next == a_prev || a_next == sing {
            notes.push("cutoff reached float resolution".into());
            break;
        }
        let (lo, hi) = if dir > R::zero() {
            (a_next, a_prev)
        } else {
            (a_prev, a_next)
        };
        let slab_tol = tol / R::of(4.0) * R::of(0.5f64.powi(stage as i32));
        let piece = slab(lo, hi, slab_tol)?;
        if piece.status == Status::Diverged {
            return Ok(piece);
        }
        slab_status = worst(slab_status, piece.status);
        acc.add(piece.value);
        slab_error.add(piece.error);
        cells += piece.cells;
        notes.extend(piece.notes);
        cutoff = next_cutoff;
        stage_sums.push(acc.value());

        if stage_sums.len() >= 4 {
            let ext = limit_extrapolate(&stage_sums, tol)?;
            match ext.status {
                Status::Diverged => {
                    return Ok(Piece {
                        value: ext.value,
                        error: ext.error,
                        status: Status::Diverged,
                        witness: stage_sums,
                        stages: ext.estimates,
                        cells,
                        notes,
                    });
                }
                Status::Converged if ext.error <= tol => {
                    return Ok(Piece {
                        value: ext.value,
                        error: ext.error + slab_error.value(),
                        status: worst(Status::Converged, slab_status),
                        witness: Vec::new(),
                        stages: stage_sums,
                        cells,
                        notes,
                    });
                }
                _ => {}
            }
        }
    }
    let ext = limit_extrapolate(&stage_sums, tol)?;
    let status = if ext.status == Status::Diverged {
        Status::Diverged
    } else {
        Status::Unconverged
    };
    Ok(Piece {
        value: ext.value,
        error: ext.error + slab_error.value(),
        status: worst(status, slab_status),
        witness: if status == Status::Diverged {
            stage_sums.clone()
        } else {
            Vec::new()
        },
        stages: stage_sums,
        cells,
        notes,
    })
}

/// Validate and order singular points within the closure of `[lo, hi]`;
/// returns the points and their minimum pairwise separation.
fn prepare_singulars<R: Real>(
    lo: R,
    hi: R,
    singular: &[R],
) -> Result<(Vec<R>, R), IntegrateError> {
    let closure = Interval::closed(lo, hi).map_err(IntegrateError::Set)?;
    let mut pts: Vec<R> = singular
        .iter()
        .copied()
        .filter(|&s| closure.contains(s))
        .collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    let mut sep = R::infinity();
    for w in pts.windows(2) {
        sep = sep.min(w[1] - w[0]);
    }
    if sep < R::of(MIN_SEPARATION) {
        return Err(IntegrateError::SingularitySeparation {
            separation: sep.as_f64(),
        });
    }
    Ok((pts, sep))
}

/// Integrate with finitely many singular points: split at the interior
/// points, shrink cutoffs toward each singular boundary, extrapolate.
fn finite_singular_core<R: Real>(
    f: &Integrand<R>,
    lo: R,
    hi: R,
    pts: &[R],
    sep: R,
    tol: R,
    ctx: &mut QuadCtx,
) -> Result<Piece<R>, IntegrateError> {
    if !(hi > lo) {
        return Ok(Piece::zero());
    }
    let total_len = hi - lo;
    let mut boundaries = vec![lo];
    boundaries.extend(pts.iter().copied().filter(|&p| p > lo && p < hi));
    boundaries.push(hi);
    let is_singular = |x: R| pts.iter().any(|&p| p == x);

    let mut out = Piece::zero();
    for w in boundaries.windows(2) {
        let (u, v) = (w[0], w[1]);
        if !(v > u) {
            continue;
        }
        let seg_len = v - u;
        let seg_tol = (tol * seg_len / total_len).max(tol * R::of(1e-3));
        let left_sing = is_singular(u);
        let right_sing = is_singular(v);
        let eps0 = (sep / R::of(4.0)).min(seg_len / R::of(8.0));
        let mut slab =
            |a: R, b: R, t: R| -> Result<Piece<R>, IntegrateError> { quad_piece(f, a, b, t, ctx) };
        let piece = match (left_sing, right_sing) {
            (false, false) => quad_piece(f, u, v, seg_tol, ctx)?,
            (true, false) => one_sided_limit(u, v, eps0, seg_tol, &mut slab)?,
            (false, true) => one_sided_limit(v, u, eps0, seg_tol, &mut slab)?,
            (true, true) => {
                let mid = (u + v) / R::of(2.0);
                let half = seg_tol / R::of(2.0);
                let mut left = one_sided_limit(u, mid, eps0, half, &mut slab)?;
                if left.status != Status::Diverged {
                    let right = one_sided_limit(v, mid, eps0, half, &mut slab)?;
                    left.absorb(right);
                }
                left
            }
        };
        let diverged = piece.status == Status::Diverged;
        out.absorb(piece);
        if diverged {
            break;
        }
    }
    Ok(out)
}

/// The improper extension at finitely many singular points: split the
/// interval at each point of `singular`, integrate up to shrinking dyadic
/// cutoffs on each side, and extrapolate the cutoff limits. Sums the
/// pieces; diverges when the cutoff integrals grow without settling.
pub fn cauchy_riemann<R: Real>(
    f: &Integrand<R>,
    interval: &Interval<R>,
    singular: &[R],
    tol: R,
) -> Result<IntegralResult<R>, IntegrateError> {
    check_tol(tol)?;
    if interval.is_empty() || interval.is_point() {
        return Ok(degenerate(Method::CauchyRiemann));
    }
    let (lo, hi) = (interval.lo(), interval.hi());
    let (pts, sep) = prepare_singulars(lo, hi, singular)?;
    let mut ctx = QuadCtx::new(EVAL_BUDGET);
    let piece = finite_singular_core(f, lo, hi, &pts, sep, tol, &mut ctx)?;
    Ok(finish(Method::CauchyRiemann, piece, tol, ctx))
}

/// The transfinite Cauchy-Riemann driver over a symbolic singular set of
/// reducible (countable) structure. Recursion follows the derived-set
/// rank: finite point sets use the plain improper extension; sequence
/// limits and rank-tower anchors get shrinking cutoffs whose slabs contain
/// only lower-rank structure. Irreducible sets (nonempty perfect kernel)
/// are not applicable here and are directed to the Harnack/totalization
/// drivers.
pub fn cauchy_riemann_omega<R: Real>(
    f: &Integrand<R>,
    interval: &Interval<R>,
    singular: &SymbolicClosedSet<R>,
    tol: R,
) -> Result<IntegralResult<R>, IntegrateError> {
    check_tol(tol)?;
    if interval.is_empty() || interval.is_point() {
        return Ok(degenerate(Method::CauchyRiemannOmega));
    }
    let restricted = singular.restrict(interval)?;
    match restricted.rank_and_kernel(64) {
        Ok((rank, kernel)) => {
            if rank.tag == RankTag::Irreducible || !kernel.is_empty_set() {
                return Ok(IntegralResult::not_applicable(
                    Method::CauchyRiemannOmega,
                    "irreducible singular set (nonempty perfect kernel); use the harnack or totalize drivers",
                ));
            }
        }
        Err(SetError::RankUndetermined { steps, .. }) => {
            let mut trail = Trail::default();
            trail.note(format!(
                "derived-set iteration unresolved after {steps} steps"
            ));
            return Ok(IntegralResult::new(
                Method::CauchyRiemannOmega,
                Status::Unconverged,
                R::zero(),
                tol,
                trail,
            ));
        }
        Err(e) => return Err(e.into()),
    }
    let mut ctx = QuadCtx::new(EVAL_BUDGET);
    let piece = symbolic_core(
        f,
        interval.lo(),
        interval.hi(),
        singular,
        tol,
        RECURSION_GUARD,
        &mut ctx,
    )?;
    Ok(finish(Method::CauchyRiemannOmega, piece, tol, ctx))
}

/// Recursive core: integrate `f` on `[lo, hi]` treating `set` (restricted
/// to the range) as the singular structure.
pub(crate) fn symbolic_core<R: Real>(
    f: &Integrand<R>,
    lo: R,
    hi: R,
    set: &SymbolicClosedSet<R>,
    tol: R,
    guard: u32,
    ctx: &mut QuadCtx,
) -> Result<Piece<R>, IntegrateError> {
    if !(hi > lo) {
        return Ok(Piece::zero());
    }
    if guard == 0 {
        return Err(IntegrateError::InvalidArgument {
            detail: "singular-structure recursion exceeded its guard".into(),
        });
    }
    let range = Interval::closed(lo, hi).map_err(IntegrateError::Set)?;
    let local = set.restrict(&range)?.canonicalized();

    let (loose, structured) = decompose(&local)?;
    if structured.is_empty() {
        let (pts, sep) = prepare_singulars(lo, hi, &loose)?;
        return finite_singular_core(f, lo, hi, &pts, sep, tol, ctx);
    }

    // Structured members must occupy disjoint spans; sweep left to right,
    // handling loose segments between them.
    let mut regions: Vec<(R, R, SymbolicClosedSet<R>)> = Vec::new();
    for m in &structured {
        let h = m.hull();
        regions.push((h.lo(), h.hi(), m.clone()));
    }
    regions.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    for w in regions.windows(2) {
        if w[0].1 > w[1].0 {
            return Err(IntegrateError::Set(SetError::Inexpressible {
                detail: "overlapping accumulation structures in the singular set".into(),
            }));
        }
    }

    let total_len = hi - lo;
    let mut out = Piece::zero();
    let mut cursor = lo;
    let mut cursor_singular = loose.iter().any(|&p| p == lo);
    for (hlo, hhi, member) in regions {
        // Loose stretch before the structured hull; its right end abuts a
        // set point.
        if hlo > cursor {
            let seg_tol = (tol * (hlo - cursor) / total_len).max(tol * R::of(1e-3));
            let mut pts: Vec<R> = loose
                .iter()
                .copied()
                .filter(|&p| p >= cursor && p <= hlo)
                .collect();
            if cursor_singular && !pts.contains(&cursor) {
                pts.push(cursor);
            }
            pts.push(hlo);
            let (pts, sep) = prepare_singulars(cursor, hlo, &pts)?;
            let piece = finite_singular_core(f, cursor, hlo, &pts, sep, seg_tol, ctx)?;
            let diverged = piece.status == Status::Diverged;
            out.absorb(piece);
            if diverged {
                return Ok(out);
            }
        }
        // The structured region: shrink cutoffs toward the accumulation
        // point; each slab sees only lower-rank structure.
        let span_lo = hlo.max(cursor);
        let span_hi = hhi.min(hi);
        if span_hi > span_lo {
            let anchor = accumulation_point(&member);
            let far = if (anchor - span_lo).abs() <= (anchor - span_hi).abs() {
                span_hi
            } else {
                span_lo
            };
            let seg_tol = (tol * (span_hi - span_lo) / total_len).max(tol * R::of(1e-3));
            let eps0 = (span_hi - span_lo) / R::of(8.0);
            let set_ref = set;
            let mut slab = |a: R, b: R, t: R| -> Result<Piece<R>, IntegrateError> {
                symbolic_core(f, a, b, set_ref, t, guard - 1, ctx)
            };
            let piece = one_sided_limit(anchor, far, eps0, seg_tol, &mut slab)?;
            let diverged = piece.status == Status::Diverged;
            out.absorb(piece);
            if diverged {
                return Ok(out);
            }
        }
        cursor = span_hi;
        cursor_singular = true;
    }
    if hi > cursor {
        let seg_tol = (tol * (hi - cursor) / total_len).max(tol * R::of(1e-3));
        let mut pts: Vec<R> = loose
            .iter()
            .copied()
            .filter(|&p| p >= cursor && p <= hi)
            .collect();
        if cursor_singular && !pts.contains(&cursor) {
            pts.push(cursor);
        }
        let (pts, sep) = prepare_singulars(cursor, hi, &pts)?;
        let piece = finite_singular_core(f, cursor, hi, &pts, sep, seg_tol, ctx)?;
        out.absorb(piece);
    }
    Ok(out)
}

fn accumulation_point<R: Real>(member: &SymbolicClosedSet<R>) -> R {
    match member {
        SymbolicClosedSet::OmegaSeq(seq) => seq.limit(),
        SymbolicClosedSet::RankTower(t) => t.anchor(),
        other => other.hull().lo(),
    }
}

type Decomposed<R> = (Vec<R>, Vec<SymbolicClosedSet<R>>);

fn decompose<R: Real>(set: &SymbolicClosedSet<R>) -> Result<Decomposed<R>, IntegrateError> {
    let mut loose = Vec::new();
    let mut structured = Vec::new();
    collect(set, &mut loose, &mut structured)?;
    Ok((loose, structured))
}

fn collect<R: Real>(
    set: &SymbolicClosedSet<R>,
    loose: &mut Vec<R>,
    structured: &mut Vec<SymbolicClosedSet<R>>,
) -> Result<(), IntegrateError> {
    match set {
        SymbolicClosedSet::Empty => {}
        SymbolicClosedSet::FinitePoints(pts) => loose.extend(pts.iter().copied()),
        SymbolicClosedSet::ClosedInterval(i) if i.is_point() => loose.push(i.lo()),
        SymbolicClosedSet::OmegaSeq(_) => structured.push(set.clone()),
        SymbolicClosedSet::RankTower(t) => {
            if t.depth() == TowerDepth::Omega {
                structured.push(set.clone());
            } else {
                structured.push(set.clone());
            }
        }
        SymbolicClosedSet::Union(members) => {
            for m in members {
                collect(m, loose, structured)?;
            }
        }
        SymbolicClosedSet::ClosedInterval(_) | SymbolicClosedSet::CantorLike(_) => {
            return Err(IntegrateError::Set(SetError::Inexpressible {
                detail: "uncountable singular structure inside a Cauchy-Riemann pass".into(),
            }));
        }
    }
    Ok(())
}

pub(crate) fn check_tol<R: Real>(tol: R) -> Result<(), IntegrateError> {
    if !(tol > R::zero()) || !tol.is_finite() {
        return Err(IntegrateError::InvalidArgument {
            detail: "tolerance must be positive and finite".into(),
        });
    }
    Ok(())
}

pub(crate) fn degenerate<R: Real>(method: Method) -> IntegralResult<R> {
    let mut trail = Trail::default();
    trail.note("degenerate interval integrates to zero");
    IntegralResult::new(method, Status::Converged, R::zero(), R::zero(), trail)
}

pub(crate) fn finish<R: Real>(
    method: Method,
    piece: Piece<R>,
    tol: R,
    ctx: QuadCtx,
) -> IntegralResult<R> {
    let mut trail = Trail::default();
    trail.set_default("tol", tol.as_f64());
    trail.partition_cells.push(piece.cells);
    trail.sums = piece.stages.clone();
    trail.witness = piece.witness.clone();
    for n in &piece.notes {
        trail.note(n.clone());
    }
    trail.note(format!("evaluations: {}", ctx.evals));
    if piece.status == Status::Diverged {
        trail.note("divergence proxy: monotone growth without contracting increments");
    }
    IntegralResult::new(method, piece.status, piece.value, piece.error, trail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::realsets::{OmegaSeq, SeqGen};

    fn unit() -> Interval<f64> {
        Interval::closed(0.0, 1.0).unwrap()
    }

    #[test]
    fn inverse_sqrt_integrates_to_two() {
        let f = Integrand::from_fn(|x: f64| 1.0 / x.sqrt());
        let r = cauchy_riemann(&f, &unit(), &[0.0], 1e-6).unwrap();
        assert_eq!(r.status, Status::Converged);
        assert!((r.value - 2.0).abs() < 1e-6, "value {}", r.value);
    }

    #[test]
    fn conditional_example_integrates_to_one() {
        let entry = corpus::conditional_example::<f64>();
        let f = Integrand::from(&entry);
        let r = cauchy_riemann(&f, &unit(), &[0.0], 1e-3).unwrap();
        assert_eq!(r.status, Status::Converged);
        assert!((r.value - 1.0).abs() < 2e-3, "value {}", r.value);
    }

    #[test]
    fn log_singularity_diverges_with_witness() {
        let f = Integrand::from_fn(|x: f64| 1.0 / x);
        let r = cauchy_riemann(&f, &unit(), &[0.0], 1e-6).unwrap();
        assert_eq!(r.status, Status::Diverged);
        assert!(r.trail.witness.len() >= 5);
        assert!(r
            .trail
            .witness
            .windows(2)
            .all(|w| w[1] >= w[0]));
    }

    #[test]
    fn interior_singularity_splits() {
        // 1/sqrt|x - 1/2| on [0,1]: both halves integrate to sqrt(2);
        // total 2 sqrt(2).
        let f = Integrand::from_fn(|x: f64| 1.0 / (x - 0.5).abs().sqrt());
        let r = cauchy_riemann(&f, &unit(), &[0.5], 1e-6).unwrap();
        assert_eq!(r.status, Status::Converged);
        assert!((r.value - 2.0 * (2.0f64).sqrt()).abs() < 1e-5, "value {}", r.value);
    }

    #[test]
    fn no_singularities_degenerates_to_proper_quadrature() {
        let f = Integrand::from_fn(|x: f64| x * x);
        let r = cauchy_riemann(&f, &unit(), &[], 1e-9).unwrap();
        assert_eq!(r.status, Status::Converged);
        assert!((r.value - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn too_close_singularities_rejected() {
        let f = Integrand::from_fn(|x: f64| x);
        let err = cauchy_riemann(&f, &unit(), &[0.5, 0.5 + 1e-14], 1e-6);
        assert!(matches!(
            err,
            Err(IntegrateError::SingularitySeparation { .. })
        ));
    }

    #[test]
    fn omega_on_finite_set_matches_plain_cr() {
        let entry = corpus::phi0::<f64>(2.0, 2.0).unwrap();
        let f = Integrand::from(&entry);
        let plain = cauchy_riemann(&f, &unit(), &[0.0], 1e-5).unwrap();
        let sym = cauchy_riemann_omega(
            &f,
            &unit(),
            &SymbolicClosedSet::finite_points([0.0f64]),
            1e-5,
        )
        .unwrap();
        assert_eq!(plain.status, Status::Converged);
        assert_eq!(sym.status, Status::Converged);
        assert!((plain.value - sym.value).abs() < 2e-5);
        // Both match the primitive difference sin(1).
        assert!((sym.value - 1.0f64.sin()).abs() < 2e-5);
    }

    #[test]
    fn omega_handles_sequence_singularities() {
        // Truncated series singular along 1/n, declared symbolically as
        // the full sequence-with-limit set.
        let entry = corpus::phi_countable_uniform::<f64>("reciprocal", 5, 2.5, 2.0).unwrap();
        let f = Integrand::from(&entry);
        let s = SymbolicClosedSet::OmegaSeq(OmegaSeq::new(0.0, SeqGen::reciprocal(1.0)).unwrap());
        let r = cauchy_riemann_omega(&f, &unit(), &s, 1e-5).unwrap();
        assert_eq!(r.status, Status::Converged, "notes: {:?}", r.trail.notes);
        let expect = entry.primitive_at(1.0).unwrap() - entry.primitive_at(0.0).unwrap();
        assert!(
            (r.value - expect).abs() < 1e-4,
            "value {} vs telescope {expect}",
            r.value
        );
    }

    #[test]
    fn omega_rejects_perfect_sets() {
        use crate::realsets::EpsilonSeq;
        use crate::scalar::ratio;
        let k = SymbolicClosedSet::cantor_like(&unit(), EpsilonSeq::Const(ratio(1, 3))).unwrap();
        let f = Integrand::from_fn(|x: f64| x);
        let r = cauchy_riemann_omega(&f, &unit(), &k, 1e-6).unwrap();
        assert_eq!(r.status, Status::NotApplicable);
    }
}
