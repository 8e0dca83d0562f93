//! Symbolic closed subsets of a compact interval.
//!
//! The AST covers the closed sets the derivative corpus needs: finite sets,
//! monotone sequences with their limit, closed intervals, finite unions,
//! rank towers (sequence-of-sequences constructions of transfinite derived
//! rank) and generalized Cantor sets. Derived sets, Cantor-Bendixson rank,
//! perfect kernels and contiguous intervals are computed structurally on
//! the AST; interactions the AST cannot express exactly fail loudly rather
//! than approximating.

use serde::{Deserialize, Serialize};

use crate::scalar::{rational_to_real, real_to_rational, Real};

use super::cantor::{CantorLike, EpsilonSeq};
use super::{Interval, SetError};

/// Default number of leading terms checked when validating a sequence
/// generator at construction.
pub const SEQ_VALIDATION_TERMS: u32 = 64;

/// Stateless generator of a strictly monotone sequence converging to a
/// declared limit; `n` ranges over `first, first+1, ...`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SeqGen<R> {
    /// `x_n = limit + span / n`.
    Reciprocal { span: R, first: u32 },
    /// `x_n = limit + span * ratio^(n-1)`, `0 < ratio < 1`.
    Geometric { span: R, ratio: R, first: u32 },
}

impl<R: Real> SeqGen<R> {
    pub fn reciprocal(span: R) -> Self {
        SeqGen::Reciprocal { span, first: 1 }
    }

    pub fn geometric(span: R, ratio: R) -> Self {
        SeqGen::Geometric {
            span,
            ratio,
            first: 1,
        }
    }

    pub fn first_index(&self) -> u32 {
        match *self {
            SeqGen::Reciprocal { first, .. } | SeqGen::Geometric { first, .. } => first,
        }
    }

    fn with_first(self, first: u32) -> Self {
        match self {
            SeqGen::Reciprocal { span, .. } => SeqGen::Reciprocal { span, first },
            SeqGen::Geometric { span, ratio, .. } => SeqGen::Geometric { span, ratio, first },
        }
    }

    /// The n-th point relative to `limit`; requires `n >= first`.
    pub fn point(&self, limit: R, n: u32) -> R {
        match *self {
            SeqGen::Reciprocal { span, .. } => limit + span / R::of(n as f64),
            SeqGen::Geometric { span, ratio, .. } => {
                limit + span * ratio.powi(n as i32 - 1)
            }
        }
    }
}

/// A strictly monotone sequence together with its limit point; denotes the
/// closed set `{limit} ∪ {x_n : n >= first}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaSeq<R> {
    limit: R,
    gen: SeqGen<R>,
}

impl<R: Real> OmegaSeq<R> {
    /// Validates strict monotonicity and convergence on the first
    /// [`SEQ_VALIDATION_TERMS`] terms.
    pub fn new(limit: R, gen: SeqGen<R>) -> Result<Self, SetError> {
        Self::with_validation(limit, gen, SEQ_VALIDATION_TERMS)
    }

    pub fn with_validation(limit: R, gen: SeqGen<R>, terms: u32) -> Result<Self, SetError> {
        if let SeqGen::Geometric { ratio, .. } = gen {
            if !(ratio > R::zero() && ratio < R::one()) {
                return Err(SetError::MalformedSet {
                    detail: format!("geometric ratio must lie in (0,1), got {ratio}"),
                });
            }
        }
        let first = gen.first_index().max(1);
        let gen = gen.with_first(first);
        let mut prev_gap = R::infinity();
        for n in first..first + terms.max(2) {
            let x = gen.point(limit, n);
            let gap = (x - limit).abs();
            if !(gap > R::zero()) || gap >= prev_gap {
                return Err(SetError::MalformedSet {
                    detail: format!(
                        "sequence not strictly monotone toward its limit at index {n}"
                    ),
                });
            }
            prev_gap = gap;
        }
        Ok(Self { limit, gen })
    }

    pub fn limit(&self) -> R {
        self.limit
    }

    pub fn gen(&self) -> &SeqGen<R> {
        &self.gen
    }

    pub fn point(&self, n: u32) -> R {
        self.gen.point(self.limit, n)
    }

    pub fn first_index(&self) -> u32 {
        self.gen.first_index()
    }

    /// First `count` points, nearest the head of the sequence.
    pub fn leading_points(&self, count: u32) -> Vec<R> {
        let first = self.first_index();
        (first..first + count).map(|n| self.point(n)).collect()
    }

    fn hull(&self) -> Interval<R> {
        let head = self.point(self.first_index());
        let (lo, hi) = if head < self.limit {
            (head, self.limit)
        } else {
            (self.limit, head)
        };
        Interval::closed(lo, hi).expect("sequence hull")
    }
}

/// Recursion depth of a rank tower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TowerDepth {
    /// Finite recursion: derived-set iteration empties after `d + 1` steps.
    Finite(u32),
    /// The full construction: every finite derived set is nonempty and the
    /// omega-limit of the iteration is the anchor point.
    Omega,
}

/// A rank tower on `[lo, hi]`: anchor points `p_n = lo + (hi - lo)/n`
/// accumulating at `lo`, with a scaled copy of a lower tower on the left
/// half of each gap `(p_(n+1), p_n)`. With depth `Omega` the copy in gap
/// `n` has depth `n - 1`, so every truncation `[lo + e, hi]` meets only
/// finite-rank structure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankTower<R> {
    interval: Interval<R>,
    depth: TowerDepth,
}

impl<R: Real> RankTower<R> {
    pub fn new(interval: Interval<R>, depth: TowerDepth) -> Result<Self, SetError> {
        if interval.is_empty() || interval.is_point() {
            return Err(SetError::MalformedSet {
                detail: "rank tower needs a nondegenerate interval".into(),
            });
        }
        if let TowerDepth::Finite(0) = depth {
            return Err(SetError::MalformedSet {
                detail: "rank tower depth must be at least 1".into(),
            });
        }
        Ok(Self { interval, depth })
    }

    pub fn interval(&self) -> &Interval<R> {
        &self.interval
    }

    pub fn depth(&self) -> TowerDepth {
        self.depth
    }

    /// The accumulation point of the whole construction.
    pub fn anchor(&self) -> R {
        self.interval.lo()
    }

    /// `p_n = lo + span / n`.
    pub fn level_point(&self, n: u32) -> R {
        self.interval.lo() + self.interval.length() / R::of(n as f64)
    }

    fn copy_in_gap(&self, n: u32) -> Option<RankTower<R>> {
        let copy_depth = match self.depth {
            TowerDepth::Finite(d) => d.checked_sub(1)?,
            TowerDepth::Omega => n.checked_sub(1)?,
        };
        if copy_depth == 0 {
            return None;
        }
        let gap_lo = self.level_point(n + 1);
        let gap_hi = self.level_point(n);
        let mid = (gap_lo + gap_hi) / R::of(2.0);
        if !(gap_lo < mid) {
            return None;
        }
        Some(RankTower {
            interval: Interval::closed(gap_lo, mid).ok()?,
            depth: TowerDepth::Finite(copy_depth),
        })
    }

    /// Enumerate tower points: `levels` anchor points per tower, recursing
    /// into gap copies. Deterministic and sorted ascending.
    pub fn enumerate_points(&self, levels: u32) -> Vec<R> {
        let mut out = Vec::new();
        self.collect_points(levels, &mut out);
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.dedup();
        out
    }

    fn collect_points(&self, levels: u32, out: &mut Vec<R>) {
        out.push(self.anchor());
        for n in 1..=levels {
            out.push(self.level_point(n));
            if let Some(copy) = self.copy_in_gap(n) {
                copy.collect_points(levels.saturating_sub(1).max(1), out);
            }
        }
    }

    fn contains_approx(&self, x: R, tol: R, budget: u32) -> bool {
        if (x - self.anchor()).abs() <= tol {
            return true;
        }
        if x < self.interval.lo() - tol || x > self.interval.hi() + tol {
            return false;
        }
        for n in 1..=budget {
            let p = self.level_point(n);
            if (x - p).abs() <= tol {
                return true;
            }
            if let Some(copy) = self.copy_in_gap(n) {
                if x >= copy.interval.lo() - tol && x <= copy.interval.hi() + tol {
                    return copy.contains_approx(x, tol, budget);
                }
            }
            if p < x - tol {
                break;
            }
        }
        false
    }

    /// Restriction to `[cut, hi]` with `cut` strictly above the anchor:
    /// finitely many anchor points plus finitely many finite-depth copies.
    fn restrict_above(&self, to: &Interval<R>) -> Result<Vec<SymbolicClosedSet<R>>, SetError> {
        let mut parts: Vec<SymbolicClosedSet<R>> = Vec::new();
        let mut points = Vec::new();
        let mut n = 1u32;
        loop {
            let p = self.level_point(n);
            if to.contains(p) {
                points.push(p);
            }
            if let Some(copy) = self.copy_in_gap(n) {
                let copy_hull = *copy.interval();
                let overlap = copy_hull.intersect(&to.closure());
                if !overlap.is_empty() {
                    if overlap == copy_hull {
                        parts.push(SymbolicClosedSet::RankTower(copy));
                    } else {
                        parts.extend(copy.restrict_above(&overlap)?);
                    }
                }
            }
            // Everything below the cut accumulates toward the anchor and is
            // outside the restriction.
            if self.level_point(n + 1) < to.lo() && p < to.lo() {
                break;
            }
            n += 1;
            if n > 100_000 {
                return Err(SetError::Inexpressible {
                    detail: "rank tower restriction exceeds enumeration budget".into(),
                });
            }
        }
        if !points.is_empty() {
            parts.push(SymbolicClosedSet::FinitePoints(sorted(points)));
        }
        Ok(parts)
    }
}

/// Cantor-Bendixson rank of a symbolic closed set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankTag {
    /// Derived-set iteration empties after `n` steps (`S^(n)` empty,
    /// `S^(n-1)` nonempty): a reducible, countable set.
    Finite(u32),
    /// Empties `k` steps past the omega limit.
    OmegaPlus(u32),
    /// Stabilizes at a nonempty perfect kernel.
    Irreducible,
}

/// Index into the derived-set sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DerivedIndex {
    Finite(u32),
    OmegaPlus(u32),
}

/// Result of [`SymbolicClosedSet::cb_rank`]: the classification plus the
/// first derived-set index at which the iteration empties or stabilizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrdinalRank {
    pub tag: RankTag,
    pub witness: DerivedIndex,
}

/// Largest `k` reported in `OmegaPlus(k)`; deeper ordinal structure is out
/// of scope for the AST.
pub const OMEGA_PLUS_CAP: u32 = 8;

/// AST for a closed subset of a compact interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SymbolicClosedSet<R> {
    Empty,
    /// Sorted, strictly increasing points.
    FinitePoints(Vec<R>),
    OmegaSeq(OmegaSeq<R>),
    ClosedInterval(Interval<R>),
    Union(Vec<SymbolicClosedSet<R>>),
    RankTower(RankTower<R>),
    CantorLike(CantorLike),
}

impl<R: Real> SymbolicClosedSet<R> {
    pub fn finite_points(points: impl IntoIterator<Item = R>) -> Self {
        let pts = sorted(points.into_iter().collect());
        if pts.is_empty() {
            SymbolicClosedSet::Empty
        } else {
            SymbolicClosedSet::FinitePoints(pts)
        }
    }

    pub fn union(members: impl IntoIterator<Item = SymbolicClosedSet<R>>) -> Self {
        SymbolicClosedSet::Union(members.into_iter().collect()).canonicalized()
    }

    /// Generalized Cantor set on `interval` with the given removal
    /// fractions.
    pub fn cantor_like(interval: &Interval<R>, eps: EpsilonSeq) -> Result<Self, SetError> {
        Ok(SymbolicClosedSet::CantorLike(CantorLike::from_interval(
            interval, eps,
        )?))
    }

    pub fn is_empty_set(&self) -> bool {
        matches!(self, SymbolicClosedSet::Empty)
    }

    /// Smallest closed interval containing the set; empty for `Empty`.
    pub fn hull(&self) -> Interval<R> {
        match self {
            SymbolicClosedSet::Empty => Interval::empty(),
            SymbolicClosedSet::FinitePoints(pts) => {
                Interval::closed(pts[0], *pts.last().unwrap()).unwrap()
            }
            SymbolicClosedSet::OmegaSeq(seq) => seq.hull(),
            SymbolicClosedSet::ClosedInterval(i) => *i,
            SymbolicClosedSet::Union(members) => {
                let mut lo = R::infinity();
                let mut hi = R::neg_infinity();
                for m in members {
                    let h = m.hull();
                    if h.is_empty() {
                        continue;
                    }
                    lo = lo.min(h.lo());
                    hi = hi.max(h.hi());
                }
                if lo > hi {
                    Interval::empty()
                } else {
                    Interval::closed(lo, hi).unwrap()
                }
            }
            SymbolicClosedSet::RankTower(t) => *t.interval(),
            SymbolicClosedSet::CantorLike(c) => c.hull(),
        }
    }

    /// Membership at tolerance `tol`, resolving constructions to `depth`.
    pub fn contains_approx(&self, x: R, tol: R, depth: u32) -> bool {
        match self {
            SymbolicClosedSet::Empty => false,
            SymbolicClosedSet::FinitePoints(pts) => {
                pts.iter().any(|&p| (p - x).abs() <= tol)
            }
            SymbolicClosedSet::OmegaSeq(seq) => {
                if (x - seq.limit()).abs() <= tol {
                    return true;
                }
                let first = seq.first_index();
                let mut n = first;
                loop {
                    let p = seq.point(n);
                    if (p - x).abs() <= tol {
                        return true;
                    }
                    // Past x heading toward the limit: no later point can
                    // match.
                    if (p - seq.limit()).abs() < (x - seq.limit()).abs() - tol {
                        return false;
                    }
                    n += 1;
                    if n - first > 1_000_000 {
                        return false;
                    }
                }
            }
            SymbolicClosedSet::ClosedInterval(i) => {
                x >= i.lo() - tol && x <= i.hi() + tol
            }
            SymbolicClosedSet::Union(members) => {
                members.iter().any(|m| m.contains_approx(x, tol, depth))
            }
            SymbolicClosedSet::RankTower(t) => t.contains_approx(x, tol, depth.max(8)),
            SymbolicClosedSet::CantorLike(c) => {
                c.contains_at_depth(x, depth, tol).unwrap_or(false)
            }
        }
    }

    /// Deterministic sample of points of the set, for property checks.
    pub fn sample_points(&self, budget: u32) -> Vec<R> {
        match self {
            SymbolicClosedSet::Empty => Vec::new(),
            SymbolicClosedSet::FinitePoints(pts) => pts.clone(),
            SymbolicClosedSet::OmegaSeq(seq) => {
                let mut pts = seq.leading_points(budget);
                pts.push(seq.limit());
                pts
            }
            SymbolicClosedSet::ClosedInterval(i) => {
                if i.is_point() {
                    return vec![i.lo()];
                }
                let n = budget.max(2);
                (0..=n)
                    .map(|j| {
                        i.lo() + i.length() * R::of(j as f64) / R::of(n as f64)
                    })
                    .collect()
            }
            SymbolicClosedSet::Union(members) => members
                .iter()
                .flat_map(|m| m.sample_points(budget))
                .collect(),
            SymbolicClosedSet::RankTower(t) => {
                t.enumerate_points(budget.clamp(2, 16))
            }
            SymbolicClosedSet::CantorLike(c) => {
                let depth = budget.clamp(1, 10);
                match c.remaining_at_depth(depth) {
                    Ok(intervals) => intervals
                        .iter()
                        .flat_map(|(a, b)| {
                            [rational_to_real(a), rational_to_real(b)]
                        })
                        .collect(),
                    Err(_) => Vec::new(),
                }
            }
        }
    }

    /// Canonical form: unions flattened and sorted, empties dropped, finite
    /// points merged and absorbed into interval members, singleton unions
    /// unwrapped.
    pub fn canonicalized(&self) -> Self {
        match self {
            SymbolicClosedSet::Union(_) => {
                let mut members = Vec::new();
                self.flatten_into(&mut members);
                canonical_union(members)
            }
            SymbolicClosedSet::FinitePoints(pts) if pts.is_empty() => SymbolicClosedSet::Empty,
            SymbolicClosedSet::ClosedInterval(i) if i.is_empty() => SymbolicClosedSet::Empty,
            other => other.clone(),
        }
    }

    fn flatten_into(&self, out: &mut Vec<SymbolicClosedSet<R>>) {
        match self {
            SymbolicClosedSet::Union(members) => {
                for m in members {
                    m.flatten_into(out);
                }
            }
            SymbolicClosedSet::Empty => {}
            other => out.push(other.canonicalized()),
        }
    }

    /// First derived set (the set of limit points), computed structurally.
    ///
    /// For a finite union the derived set is the union of the members'
    /// derived sets. Full-depth rank towers do not have a representable
    /// derived set (each derivation strips isolated points at every level
    /// of the construction) and fail loudly; their rank is still computed
    /// symbolically by [`Self::cb_rank`].
    pub fn derived_set(&self) -> Result<Self, SetError> {
        let d = match self {
            SymbolicClosedSet::Empty => SymbolicClosedSet::Empty,
            SymbolicClosedSet::FinitePoints(_) => SymbolicClosedSet::Empty,
            SymbolicClosedSet::OmegaSeq(seq) => {
                SymbolicClosedSet::FinitePoints(vec![seq.limit()])
            }
            SymbolicClosedSet::ClosedInterval(i) => {
                if i.is_empty() || i.is_point() {
                    SymbolicClosedSet::Empty
                } else {
                    SymbolicClosedSet::ClosedInterval(*i)
                }
            }
            SymbolicClosedSet::Union(members) => {
                let derived = members
                    .iter()
                    .map(|m| m.derived_set())
                    .collect::<Result<Vec<_>, _>>()?;
                SymbolicClosedSet::Union(derived)
            }
            SymbolicClosedSet::RankTower(t) => match t.depth() {
                TowerDepth::Finite(1) => {
                    SymbolicClosedSet::FinitePoints(vec![t.anchor()])
                }
                TowerDepth::Finite(d) => SymbolicClosedSet::RankTower(RankTower {
                    interval: *t.interval(),
                    depth: TowerDepth::Finite(d - 1),
                }),
                TowerDepth::Omega => {
                    return Err(SetError::Inexpressible {
                        detail: "derived set of a full rank tower is not representable; \
                                 use cb_rank for its transfinite classification"
                            .into(),
                    })
                }
            },
            SymbolicClosedSet::CantorLike(c) => SymbolicClosedSet::CantorLike(c.clone()),
        };
        Ok(d.canonicalized())
    }

    fn contains_omega_tower(&self) -> bool {
        match self {
            SymbolicClosedSet::RankTower(t) => t.depth() == TowerDepth::Omega,
            SymbolicClosedSet::Union(members) => {
                members.iter().any(|m| m.contains_omega_tower())
            }
            _ => false,
        }
    }

    /// The omega-limit of the derived-set iteration, defined when every
    /// member resolves symbolically: full towers collapse to their anchor,
    /// reducible members vanish, perfect members persist.
    fn omega_jump(&self, max_steps: u32) -> Result<Self, SetError> {
        let jumped = match self {
            SymbolicClosedSet::Empty
            | SymbolicClosedSet::FinitePoints(_)
            | SymbolicClosedSet::OmegaSeq(_) => SymbolicClosedSet::Empty,
            SymbolicClosedSet::ClosedInterval(i) => {
                if i.is_point() {
                    SymbolicClosedSet::Empty
                } else {
                    SymbolicClosedSet::ClosedInterval(*i)
                }
            }
            SymbolicClosedSet::CantorLike(c) => SymbolicClosedSet::CantorLike(c.clone()),
            SymbolicClosedSet::RankTower(t) => match t.depth() {
                TowerDepth::Omega => SymbolicClosedSet::FinitePoints(vec![t.anchor()]),
                // Finite towers empty before omega.
                TowerDepth::Finite(_) => SymbolicClosedSet::Empty,
            },
            SymbolicClosedSet::Union(members) => SymbolicClosedSet::Union(
                members
                    .iter()
                    .map(|m| m.omega_jump(max_steps))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        Ok(jumped.canonicalized())
    }

    /// Iterate the derived set until it empties (reducible), stabilizes at
    /// a nonempty fixed point (irreducible, with a perfect kernel), or —
    /// for full rank towers — resolves through the omega limit computed
    /// from the tower structure.
    pub fn cb_rank(&self, max_steps: u32) -> Result<OrdinalRank, SetError> {
        self.rank_and_kernel(max_steps).map(|(rank, _)| rank)
    }

    /// Perfect kernel: empty for reducible sets, otherwise the stabilized
    /// nonempty derived set.
    pub fn perfect_kernel(&self, max_steps: u32) -> Result<Self, SetError> {
        self.rank_and_kernel(max_steps).map(|(_, kernel)| kernel)
    }

    /// Rank and kernel in one pass.
    pub fn rank_and_kernel(&self, max_steps: u32) -> Result<(OrdinalRank, Self), SetError> {
        let mut current = self.canonicalized();
        // Phase 1: finite derivations. Full towers never resolve finitely,
        // so in their presence we only iterate the rest and then jump.
        if !current.contains_omega_tower() {
            let mut steps = 0u32;
            loop {
                if current.is_empty_set() {
                    return Ok((
                        OrdinalRank {
                            tag: RankTag::Finite(steps),
                            witness: DerivedIndex::Finite(steps),
                        },
                        SymbolicClosedSet::Empty,
                    ));
                }
                if steps >= max_steps {
                    return Err(SetError::RankUndetermined {
                        steps,
                        last: format!("{current:?}"),
                    });
                }
                let next = current.derived_set()?;
                if next == current {
                    return Ok((
                        OrdinalRank {
                            tag: RankTag::Irreducible,
                            witness: DerivedIndex::Finite(steps),
                        },
                        current,
                    ));
                }
                current = next;
                steps += 1;
            }
        }
        // Phase 2: the iteration passes through omega.
        let mut current = current.omega_jump(max_steps)?;
        let mut steps = 0u32;
        loop {
            if current.is_empty_set() {
                return Ok((
                    OrdinalRank {
                        tag: RankTag::OmegaPlus(steps),
                        witness: DerivedIndex::OmegaPlus(steps),
                    },
                    SymbolicClosedSet::Empty,
                ));
            }
            if steps > OMEGA_PLUS_CAP {
                return Err(SetError::RankUndetermined {
                    steps,
                    last: format!("{current:?}"),
                });
            }
            let next = current.derived_set()?;
            if next == current {
                return Ok((
                    OrdinalRank {
                        tag: RankTag::Irreducible,
                        witness: DerivedIndex::OmegaPlus(steps),
                    },
                    current,
                ));
            }
            current = next;
            steps += 1;
        }
    }

    /// Closed intervals covering the set, exact for finite structure and
    /// truncated at `depth` for sequence/Cantor/tower constructions. The
    /// covering contains the set and shrinks to it as `depth` grows.
    pub fn covering_at_depth(&self, depth: u32) -> Result<Vec<Interval<R>>, SetError> {
        let mut out = Vec::new();
        self.covering_into(depth, &mut out)?;
        Ok(merge_intervals(out))
    }

    fn covering_into(&self, depth: u32, out: &mut Vec<Interval<R>>) -> Result<(), SetError> {
        match self {
            SymbolicClosedSet::Empty => {}
            SymbolicClosedSet::FinitePoints(pts) => {
                out.extend(pts.iter().map(|&p| Interval::point(p)));
            }
            SymbolicClosedSet::ClosedInterval(i) => {
                if !i.is_empty() {
                    out.push(*i);
                }
            }
            SymbolicClosedSet::OmegaSeq(seq) => {
                let n = depth.max(1);
                let pts = seq.leading_points(n);
                let deepest = *pts.last().unwrap();
                for p in &pts[..pts.len() - 1] {
                    out.push(Interval::point(*p));
                }
                // The unresolved tail between the limit and the deepest
                // enumerated point stays covered so no false gap appears.
                let (lo, hi) = if deepest < seq.limit() {
                    (deepest, seq.limit())
                } else {
                    (seq.limit(), deepest)
                };
                out.push(Interval::closed(lo, hi).expect("tail zone"));
            }
            SymbolicClosedSet::Union(members) => {
                for m in members {
                    m.covering_into(depth, out)?;
                }
            }
            SymbolicClosedSet::RankTower(t) => {
                let n = depth.max(2);
                for k in 1..n {
                    out.push(Interval::point(t.level_point(k)));
                    if let Some(copy) = t.copy_in_gap(k) {
                        SymbolicClosedSet::RankTower(copy)
                            .covering_into(depth.saturating_sub(1).max(1), out)?;
                    }
                }
                out.push(
                    Interval::closed(t.anchor(), t.level_point(n)).expect("tower tail zone"),
                );
            }
            SymbolicClosedSet::CantorLike(c) => {
                let d = depth.min(16);
                for (a, b) in c.remaining_at_depth(d)? {
                    out.push(
                        Interval::closed(rational_to_real(&a), rational_to_real(&b))
                            .expect("remaining interval"),
                    );
                }
            }
        }
        Ok(())
    }

    /// The closed intervals complementary to the set within `within`,
    /// enumerated exactly for finite structure and to `depth` for
    /// sequence/Cantor constructions, ordered by left endpoint.
    pub fn contiguous_intervals(
        &self,
        within: &Interval<R>,
        depth: u32,
    ) -> Result<Vec<Interval<R>>, SetError> {
        if self.is_empty_set() {
            return Err(SetError::Inexpressible {
                detail: "contiguous intervals need a nonempty set".into(),
            });
        }
        let covering = self.covering_at_depth(depth)?;
        let mut gaps = Vec::new();
        let mut cursor = within.lo();
        for part in &covering {
            let lo = part.lo().max(within.lo());
            let hi = part.hi().min(within.hi());
            if hi < within.lo() || lo > within.hi() {
                continue;
            }
            if lo > cursor {
                gaps.push(Interval::closed(cursor, lo).expect("gap"));
            }
            cursor = cursor.max(hi);
        }
        if cursor < within.hi() {
            gaps.push(Interval::closed(cursor, within.hi()).expect("gap"));
        }
        Ok(gaps.into_iter().filter(|g| !g.is_point()).collect())
    }

    /// Restriction of the set to a closed interval, when representable.
    pub fn restrict(&self, to: &Interval<R>) -> Result<Self, SetError> {
        let to = to.closure();
        let r = match self {
            SymbolicClosedSet::Empty => SymbolicClosedSet::Empty,
            SymbolicClosedSet::FinitePoints(pts) => SymbolicClosedSet::finite_points(
                pts.iter().copied().filter(|&p| to.contains(p)),
            ),
            SymbolicClosedSet::ClosedInterval(i) => {
                let j = i.intersect(&to);
                if j.is_empty() {
                    SymbolicClosedSet::Empty
                } else {
                    SymbolicClosedSet::ClosedInterval(j)
                }
            }
            SymbolicClosedSet::Union(members) => SymbolicClosedSet::Union(
                members
                    .iter()
                    .map(|m| m.restrict(&to))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            SymbolicClosedSet::OmegaSeq(seq) => restrict_omega_seq(seq, &to)?,
            SymbolicClosedSet::RankTower(t) => {
                let hull = *t.interval();
                let overlap = hull.intersect(&to);
                if overlap.is_empty() {
                    SymbolicClosedSet::Empty
                } else if overlap == hull {
                    SymbolicClosedSet::RankTower(*t)
                } else if overlap.lo() > t.anchor() && overlap.hi() == hull.hi() {
                    SymbolicClosedSet::Union(t.restrict_above(&overlap)?)
                } else {
                    return Err(SetError::Inexpressible {
                        detail: "rank tower restriction cutting the upper levels is not \
                                 representable"
                            .into(),
                    });
                }
            }
            SymbolicClosedSet::CantorLike(c) => restrict_cantor(c, &to)?,
        };
        Ok(r.canonicalized())
    }
}

fn restrict_omega_seq<R: Real>(
    seq: &OmegaSeq<R>,
    to: &Interval<R>,
) -> Result<SymbolicClosedSet<R>, SetError> {
    let limit_inside = to.contains(seq.limit());
    let first = seq.first_index();
    if limit_inside {
        // All but finitely many points lie in `to`; find the first index
        // from which the tail is inside and keep it as a sequence.
        let mut n = first;
        while !to.contains(seq.point(n)) {
            n += 1;
            if n - first > 1_000_000 {
                return Err(SetError::Inexpressible {
                    detail: "sequence restriction exceeds index budget".into(),
                });
            }
        }
        let tail = OmegaSeq::with_validation(seq.limit(), seq.gen().with_first(n), 4)?;
        Ok(SymbolicClosedSet::OmegaSeq(tail))
    } else {
        // Finitely many points can lie in `to`: once a point is strictly
        // closer to the limit than all of `to`, the tail stays outside.
        let cutoff = to.distance_to(seq.limit());
        let mut pts = Vec::new();
        let mut n = first;
        loop {
            let p = seq.point(n);
            if to.contains(p) {
                pts.push(p);
            }
            if (p - seq.limit()).abs() < cutoff {
                break;
            }
            n += 1;
            if n - first > 1_000_000 {
                return Err(SetError::Inexpressible {
                    detail: "sequence restriction exceeds index budget".into(),
                });
            }
        }
        Ok(SymbolicClosedSet::finite_points(pts))
    }
}

fn restrict_cantor<R: Real>(
    c: &CantorLike,
    to: &Interval<R>,
) -> Result<SymbolicClosedSet<R>, SetError> {
    let hull: Interval<R> = c.hull();
    let overlap = hull.intersect(to);
    if overlap.is_empty() {
        return Ok(SymbolicClosedSet::Empty);
    }
    if overlap == hull {
        return Ok(SymbolicClosedSet::CantorLike(c.clone()));
    }
    // Exact when `to` sits inside the closure of a removed interval at a
    // reachable depth: the only set points there are that interval's
    // endpoints.
    let lo_q = real_to_rational(overlap.lo()).ok_or(SetError::InvalidInterval {
        detail: "non-finite restriction endpoint".into(),
    })?;
    let hi_q = real_to_rational(overlap.hi()).ok_or(SetError::InvalidInterval {
        detail: "non-finite restriction endpoint".into(),
    })?;
    for depth in 1..=48u32 {
        for (a, b) in c.removed_at_stage(depth)? {
            if a <= lo_q && hi_q <= b {
                let mut pts = Vec::new();
                if a >= lo_q {
                    pts.push(rational_to_real(&a));
                }
                if b <= hi_q {
                    pts.push(rational_to_real(&b));
                }
                let pts: Vec<R> =
                    pts.into_iter().filter(|&p| overlap.contains(p)).collect();
                return Ok(SymbolicClosedSet::finite_points(pts));
            }
        }
        // Stop early once removed intervals at this depth are all shorter
        // than the restriction: no deeper interval can contain it.
        let mu = c.mu(depth)?;
        let width = real_to_rational(overlap.length()).unwrap_or(mu.clone());
        if mu < width && depth > 4 {
            break;
        }
    }
    Err(SetError::Inexpressible {
        detail: "Cantor restriction is not a removed-interval segment".into(),
    })
}

fn sorted<R: Real>(mut pts: Vec<R>) -> Vec<R> {
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    pts
}

fn merge_intervals<R: Real>(mut parts: Vec<Interval<R>>) -> Vec<Interval<R>> {
    parts.retain(|i| !i.is_empty());
    parts.sort_by(|a, b| {
        a.lo()
            .partial_cmp(&b.lo())
            .unwrap()
            .then(a.hi().partial_cmp(&b.hi()).unwrap())
    });
    let mut out: Vec<Interval<R>> = Vec::with_capacity(parts.len());
    for part in parts {
        match out.last_mut() {
            Some(last) if part.lo() <= last.hi() => {
                if part.hi() > last.hi() {
                    *last = Interval::closed(last.lo(), part.hi()).unwrap();
                }
            }
            _ => out.push(part),
        }
    }
    out
}

fn canonical_union<R: Real>(members: Vec<SymbolicClosedSet<R>>) -> SymbolicClosedSet<R> {
    let mut points: Vec<R> = Vec::new();
    let mut intervals: Vec<Interval<R>> = Vec::new();
    let mut rest: Vec<SymbolicClosedSet<R>> = Vec::new();
    for m in members {
        match m {
            SymbolicClosedSet::Empty => {}
            SymbolicClosedSet::FinitePoints(pts) => points.extend(pts),
            SymbolicClosedSet::ClosedInterval(i) => {
                if i.is_point() {
                    points.push(i.lo());
                } else if !i.is_empty() {
                    intervals.push(i);
                }
            }
            other => rest.push(other),
        }
    }
    let intervals = merge_intervals(intervals);
    let mut points = sorted(points);
    // Points inside interval members or at sequence limits/points add
    // nothing.
    points.retain(|&p| {
        !intervals.iter().any(|i| i.contains(p))
            && !rest.iter().any(|m| match m {
                SymbolicClosedSet::OmegaSeq(seq) => {
                    seq.limit() == p || {
                        let first = seq.first_index();
                        (first..first + SEQ_VALIDATION_TERMS)
                            .any(|n| seq.point(n) == p)
                    }
                }
                _ => false,
            })
    });
    let mut out: Vec<SymbolicClosedSet<R>> = Vec::new();
    if !points.is_empty() {
        out.push(SymbolicClosedSet::FinitePoints(points));
    }
    out.extend(
        intervals
            .into_iter()
            .map(SymbolicClosedSet::ClosedInterval),
    );
    out.extend(rest);
    out.sort_by(|a, b| {
        let ka = member_sort_key(a);
        let kb = member_sort_key(b);
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });
    match out.len() {
        0 => SymbolicClosedSet::Empty,
        1 => out.pop().unwrap(),
        _ => SymbolicClosedSet::Union(out),
    }
}

fn member_sort_key<R: Real>(m: &SymbolicClosedSet<R>) -> (u8, f64) {
    let kind = match m {
        SymbolicClosedSet::FinitePoints(_) => 0,
        SymbolicClosedSet::ClosedInterval(_) => 1,
        SymbolicClosedSet::OmegaSeq(_) => 2,
        SymbolicClosedSet::RankTower(_) => 3,
        SymbolicClosedSet::CantorLike(_) => 4,
        SymbolicClosedSet::Union(_) | SymbolicClosedSet::Empty => 5,
    };
    let lo = m.hull();
    (kind, if lo.is_empty() { f64::MAX } else { lo.lo().as_f64() })
}
