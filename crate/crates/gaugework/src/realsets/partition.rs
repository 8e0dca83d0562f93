use crate::scalar::Real;
use crate::sum::CompensatedSum;

use super::{Gauge, Interval, SetError};

/// A tagged partition: strictly increasing points `a_0 < ... < a_n` plus a
/// tag per cell. With `tag_containment`, every tag lies inside its cell;
/// free taggings (the McShane variant) drop that requirement.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggedPartition<R> {
    points: Vec<R>,
    tags: Vec<R>,
    tag_containment: bool,
}

impl<R: Real> TaggedPartition<R> {
    /// Partition with tag containment enforced.
    pub fn new(points: Vec<R>, tags: Vec<R>) -> Result<Self, SetError> {
        let p = Self::validate(points, tags)?;
        for (j, &tag) in p.tags.iter().enumerate() {
            if tag < p.points[j] || tag > p.points[j + 1] {
                return Err(SetError::TagOutsideCell {
                    cell: j,
                    tag: tag.as_f64(),
                });
            }
        }
        Ok(Self {
            tag_containment: true,
            ..p
        })
    }

    /// Free tagging: tags may lie anywhere.
    pub fn new_free(points: Vec<R>, tags: Vec<R>) -> Result<Self, SetError> {
        Self::validate(points, tags)
    }

    fn validate(points: Vec<R>, tags: Vec<R>) -> Result<Self, SetError> {
        if points.len() < 2 {
            return Err(SetError::InvalidPartition {
                detail: "need at least two partition points".into(),
            });
        }
        if tags.len() != points.len() - 1 {
            return Err(SetError::InvalidPartition {
                detail: format!(
                    "{} tags for {} cells",
                    tags.len(),
                    points.len() - 1
                ),
            });
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(SetError::InvalidPartition {
                detail: "points not strictly increasing".into(),
            });
        }
        Ok(Self {
            points,
            tags,
            tag_containment: false,
        })
    }

    /// Uniform partition of `interval` into `cells` cells, midpoint tags.
    pub fn uniform_midpoint(interval: &Interval<R>, cells: usize) -> Result<Self, SetError> {
        let (points, tags) = uniform_points_tags(interval, cells, |lo, hi| {
            (lo + hi) / R::of(2.0)
        })?;
        Self::new(points, tags)
    }

    /// Uniform partition, left-endpoint tags.
    pub fn uniform_left(interval: &Interval<R>, cells: usize) -> Result<Self, SetError> {
        let (points, tags) = uniform_points_tags(interval, cells, |lo, _| lo)?;
        Self::new(points, tags)
    }

    pub fn points(&self) -> &[R] {
        &self.points
    }

    pub fn tags(&self) -> &[R] {
        &self.tags
    }

    pub fn cell_count(&self) -> usize {
        self.tags.len()
    }

    pub fn cell(&self, j: usize) -> (R, R) {
        (self.points[j], self.points[j + 1])
    }

    pub fn has_tag_containment(&self) -> bool {
        self.tag_containment
    }

    pub fn interval(&self) -> Interval<R> {
        Interval::closed(self.points[0], *self.points.last().unwrap())
            .expect("partition points are ordered")
    }

    /// Length of the longest cell.
    pub fn norm(&self) -> R {
        self.points
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(R::zero(), R::max)
    }

    /// The Riemann sum `sum f(tag_j) * (a_j - a_{j-1})`, compensated.
    pub fn riemann_sum(&self, f: impl Fn(R) -> R) -> R {
        let mut acc = CompensatedSum::new();
        for j in 0..self.cell_count() {
            let (lo, hi) = self.cell(j);
            acc.add(f(self.tags[j]) * (hi - lo));
        }
        acc.value()
    }

    /// The fineness condition with tag containment: every cell sits inside
    /// the open gauge ball of its tag,
    /// `tag - delta(tag) < a_{j-1} <= tag <= a_j < tag + delta(tag)`.
    ///
    /// Rejects partitions built without tag containment.
    pub fn is_delta_fine(&self, gauge: &Gauge<R>) -> Result<bool, SetError> {
        if !self.tag_containment {
            return Err(SetError::InvalidPartition {
                detail: "delta-fineness requires tag containment".into(),
            });
        }
        for j in 0..self.cell_count() {
            let (lo, hi) = self.cell(j);
            let tag = self.tags[j];
            let d = gauge.eval(tag)?;
            if !(tag - d < lo && hi < tag + d) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The free-tag fineness condition: every cell sits strictly inside the
    /// gauge ball of its tag, with no containment requirement.
    pub fn is_free_delta_fine(&self, gauge: &Gauge<R>) -> Result<bool, SetError> {
        for j in 0..self.cell_count() {
            let (lo, hi) = self.cell(j);
            let tag = self.tags[j];
            let d = gauge.eval(tag)?;
            if !(tag - d < lo && hi < tag + d) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Free fineness plus the tag-distance budget
    /// `sum dist(tag_j, cell_j) < 1/eps`.
    pub fn is_c_admissible(&self, gauge: &Gauge<R>, eps: R) -> Result<bool, SetError> {
        if !(eps > R::zero()) {
            return Err(SetError::InvalidTolerance {
                detail: format!("eps must be positive, got {eps}"),
            });
        }
        if !self.is_free_delta_fine(gauge)? {
            return Ok(false);
        }
        let mut dist = CompensatedSum::new();
        for j in 0..self.cell_count() {
            let (lo, hi) = self.cell(j);
            let tag = self.tags[j];
            let d = if tag < lo {
                lo - tag
            } else if tag > hi {
                tag - hi
            } else {
                R::zero()
            };
            dist.add(d);
        }
        Ok(dist.value() < eps.recip())
    }
}

fn uniform_points_tags<R: Real>(
    interval: &Interval<R>,
    cells: usize,
    tag_of: impl Fn(R, R) -> R,
) -> Result<(Vec<R>, Vec<R>), SetError> {
    if interval.is_empty() || interval.is_point() {
        return Err(SetError::InvalidInterval {
            detail: "cannot partition an empty or degenerate interval".into(),
        });
    }
    if cells == 0 {
        return Err(SetError::InvalidPartition {
            detail: "need at least one cell".into(),
        });
    }
    let (a, b) = (interval.lo(), interval.hi());
    let n = R::of(cells as f64);
    let mut points = Vec::with_capacity(cells + 1);
    for j in 0..=cells {
        let t = R::of(j as f64) / n;
        points.push(a + (b - a) * t);
    }
    points[cells] = b;
    let tags = points.windows(2).map(|w| tag_of(w[0], w[1])).collect();
    Ok((points, tags))
}

/// Default recursion depth for [`cousin_partition`].
pub const COUSIN_DEFAULT_DEPTH: u32 = 60;

/// Constructive Cousin's lemma: build a tag-contained partition of
/// `interval` that is delta-fine for `gauge`, by recursive bisection.
///
/// A subinterval is accepted as a single cell when it fits strictly inside
/// the gauge ball of its midpoint or of either endpoint (endpoint tags are
/// what make gauges that vanish toward a singular endpoint terminate);
/// otherwise it is bisected. Exceeding `max_depth` reports the offending
/// subinterval, signaling a gauge numerically too fine near some point.
pub fn cousin_partition<R: Real>(
    interval: &Interval<R>,
    gauge: &Gauge<R>,
    max_depth: u32,
) -> Result<TaggedPartition<R>, SetError> {
    if interval.is_empty() || interval.is_point() {
        return Err(SetError::InvalidInterval {
            detail: "cannot partition an empty or degenerate interval".into(),
        });
    }
    let mut points = vec![interval.lo()];
    let mut tags = Vec::new();
    cousin_rec(
        interval.lo(),
        interval.hi(),
        gauge,
        max_depth,
        &mut points,
        &mut tags,
    )?;
    TaggedPartition::new(points, tags)
}

fn cousin_rec<R: Real>(
    lo: R,
    hi: R,
    gauge: &Gauge<R>,
    depth_left: u32,
    points: &mut Vec<R>,
    tags: &mut Vec<R>,
) -> Result<(), SetError> {
    let mid = (lo + hi) / R::of(2.0);
    for tag in [mid, lo, hi] {
        match gauge.eval(tag) {
            Ok(d) => {
                if tag - d < lo && hi < tag + d {
                    points.push(hi);
                    tags.push(tag);
                    return Ok(());
                }
            }
            // A point without a gauge value cannot carry the tag; the
            // other candidates may still work.
            Err(SetError::GaugeUndefined { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    if depth_left == 0 {
        return Err(SetError::GaugeTooFine {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    if !(lo < mid && mid < hi) {
        // Bisection hit float resolution without fitting any gauge ball.
        return Err(SetError::GaugeTooFine {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    cousin_rec(lo, mid, gauge, depth_left - 1, points, tags)?;
    cousin_rec(mid, hi, gauge, depth_left - 1, points, tags)
}
