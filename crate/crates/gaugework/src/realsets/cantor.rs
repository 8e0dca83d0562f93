//! Generalized Cantor construction with exact rational endpoints.
//!
//! Stage `n` removes `2^(n-1)` central open intervals of length
//! `eps_n * mu_(n-1)`, leaving `2^n` closed intervals of length `mu_n`,
//! so `2^n * mu_n = (b-a) * prod_(k<=n) (1 - eps_k)`. Endpoint arithmetic
//! stays rational; evaluation-facing values convert to the scalar type at
//! query time.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{rational_to_real, Real};

use super::{Interval, SetError};

/// Epsilon-sequence descriptor for the generalized Cantor construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum EpsilonSeq {
    /// Constant `eps_n = c`.
    Const(BigRational),
    /// `eps_n = c / n^2`; with `c = (theta/pi)^2` the remaining measure of
    /// the unit-interval construction is `sin(theta)/theta`.
    InverseSquare(BigRational),
}

impl EpsilonSeq {
    /// `eps_n` for `n >= 1`, checked to lie in `(0, 1)`.
    pub fn eps(&self, n: u32) -> Result<BigRational, SetError> {
        debug_assert!(n >= 1);
        let value = match self {
            EpsilonSeq::Const(c) => c.clone(),
            EpsilonSeq::InverseSquare(c) => {
                let n2 = BigRational::from_integer((n as i64 * n as i64).into());
                c / n2
            }
        };
        if value <= BigRational::zero() || value >= BigRational::one() {
            return Err(SetError::EpsilonOutOfRange {
                index: n,
                value: value.to_string(),
            });
        }
        Ok(value)
    }

    /// Upper bound on `sum_(k>n) eps_k`, when the tail is summable.
    /// `None` for constant sequences (divergent tail, measure zero).
    pub fn tail_sum_bound(&self, n: u32) -> Option<BigRational> {
        match self {
            EpsilonSeq::Const(_) => None,
            // sum_(k>n) c/k^2 <= c/n.
            EpsilonSeq::InverseSquare(c) => {
                Some(c / BigRational::from_integer((n.max(1) as i64).into()))
            }
        }
    }
}

/// A generalized Cantor set on a closed interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CantorLike {
    lo: BigRational,
    hi: BigRational,
    eps: EpsilonSeq,
}

impl CantorLike {
    pub fn new(lo: BigRational, hi: BigRational, eps: EpsilonSeq) -> Result<Self, SetError> {
        if lo >= hi {
            return Err(SetError::InvalidInterval {
                detail: "Cantor construction needs a nondegenerate interval".into(),
            });
        }
        Ok(Self { lo, hi, eps })
    }

    pub fn from_interval<R: Real>(interval: &Interval<R>, eps: EpsilonSeq) -> Result<Self, SetError> {
        let lo = crate::scalar::real_to_rational(interval.lo()).ok_or_else(|| {
            SetError::InvalidInterval {
                detail: "non-finite endpoint".into(),
            }
        })?;
        let hi = crate::scalar::real_to_rational(interval.hi()).ok_or_else(|| {
            SetError::InvalidInterval {
                detail: "non-finite endpoint".into(),
            }
        })?;
        Self::new(lo, hi, eps)
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn eps(&self) -> &EpsilonSeq {
        &self.eps
    }

    pub fn hull<R: Real>(&self) -> Interval<R> {
        Interval::closed(rational_to_real(&self.lo), rational_to_real(&self.hi))
            .expect("lo < hi by construction")
    }

    /// Exact length `mu_n` of each of the `2^n` intervals remaining after
    /// stage `n`.
    pub fn mu(&self, n: u32) -> Result<BigRational, SetError> {
        let mut mu = &self.hi - &self.lo;
        let two = BigRational::from_integer(2.into());
        for k in 1..=n {
            mu = mu * (BigRational::one() - self.eps.eps(k)?) / &two;
        }
        Ok(mu)
    }

    /// Exact `prod_(k<=n) (1 - eps_k)`.
    pub fn partial_product(&self, n: u32) -> Result<BigRational, SetError> {
        let mut p = BigRational::one();
        for k in 1..=n {
            p = p * (BigRational::one() - self.eps.eps(k)?);
        }
        Ok(p)
    }

    /// Closed intervals remaining after `depth` stages, in increasing order.
    /// `depth = 0` yields the whole base interval.
    pub fn remaining_at_depth(&self, depth: u32) -> Result<Vec<(BigRational, BigRational)>, SetError> {
        let mut current = vec![(self.lo.clone(), self.hi.clone())];
        for n in 1..=depth {
            let mu_n = self.mu(n)?;
            let mut next = Vec::with_capacity(current.len() * 2);
            for (a, b) in current {
                next.push((a.clone(), &a + &mu_n));
                next.push((&b - &mu_n, b.clone()));
            }
            current = next;
        }
        Ok(current)
    }

    /// Open intervals removed at stage `n` exactly (the `2^(n-1)` central
    /// intervals of length `eps_n * mu_(n-1)`), in increasing order.
    pub fn removed_at_stage(&self, n: u32) -> Result<Vec<(BigRational, BigRational)>, SetError> {
        if n == 0 {
            return Ok(Vec::new());
        }
        let parents = self.remaining_at_depth(n - 1)?;
        let mu_n = self.mu(n)?;
        Ok(parents
            .into_iter()
            .map(|(a, b)| (&a + &mu_n, &b - &mu_n))
            .collect())
    }

    /// All open intervals removed in the first `depth` stages, in stage
    /// order then left-to-right.
    pub fn removed_up_to_depth(
        &self,
        depth: u32,
    ) -> Result<Vec<(BigRational, BigRational)>, SetError> {
        let mut out = Vec::new();
        for n in 1..=depth {
            out.extend(self.removed_at_stage(n)?);
        }
        Ok(out)
    }

    /// Membership at construction depth `depth`: `x` lies in some remaining
    /// interval, to within `tol`. Exact for rational construction endpoints.
    pub fn contains_at_depth<R: Real>(&self, x: R, depth: u32, tol: R) -> Result<bool, SetError> {
        let xf = x.as_f64();
        let mut lo = rational_to_real::<f64>(&self.lo);
        let mut hi = rational_to_real::<f64>(&self.hi);
        let t = tol.as_f64();
        if xf < lo - t || xf > hi + t {
            return Ok(false);
        }
        // Walk the construction, descending into whichever remaining child
        // contains x.
        let mut lo_q = self.lo.clone();
        let mut hi_q = self.hi.clone();
        for n in 1..=depth {
            let mu_n = self.mu(n)?;
            let mu_f = rational_to_real::<f64>(&mu_n);
            let left_hi = lo + mu_f;
            let right_lo = hi - mu_f;
            if xf <= left_hi + t {
                hi_q = &lo_q + &mu_n;
                hi = left_hi;
            } else if xf >= right_lo - t {
                lo_q = &hi_q - &mu_n;
                lo = right_lo;
            } else {
                return Ok(false);
            }
        }
        Ok(xf >= lo - t && xf <= hi + t)
    }

    /// Exact rational membership test at depth.
    pub fn contains_rational_at_depth(&self, x: &BigRational, depth: u32) -> Result<bool, SetError> {
        if x < &self.lo || x > &self.hi {
            return Ok(false);
        }
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        for n in 1..=depth {
            let mu_n = self.mu(n)?;
            let left_hi = &lo + &mu_n;
            let right_lo = &hi - &mu_n;
            if x <= &left_hi {
                hi = left_hi;
            } else if x >= &right_lo {
                lo = right_lo;
            } else {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Floating partial products of the remaining measure, for measure
    /// estimation. Returns `(product, eps_terms_used)`.
    pub fn measure_partial<R: Real>(&self, terms: u32) -> Result<R, SetError> {
        let mut p = R::one();
        for k in 1..=terms {
            let eps = self.eps.eps(k)?;
            p = p * (R::one() - rational_to_real::<R>(&eps));
        }
        Ok(p * (rational_to_real::<R>(&self.hi) - rational_to_real::<R>(&self.lo)))
    }
}

/// Exact check that removed length plus remaining length reproduces the
/// base length at every depth (used by tests and construction audits).
pub fn stage_additivity_defect(cantor: &CantorLike, depth: u32) -> Result<BigRational, SetError> {
    let mut removed = BigRational::zero();
    for n in 1..=depth {
        let mu_prev = cantor.mu(n - 1)?;
        let eps = cantor.eps.eps(n)?;
        let count = BigRational::from_integer(num_bigint::BigInt::from(1u8) << (n - 1));
        removed = removed + count * eps * mu_prev;
    }
    let two_n_mu = BigRational::from_integer(num_bigint::BigInt::from(1u8) << depth) * cantor.mu(depth)?;
    let base = cantor.hi() - cantor.lo();
    Ok((removed + two_n_mu - base).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn ternary() -> CantorLike {
        CantorLike::new(ratio(0, 1), ratio(1, 1), EpsilonSeq::Const(ratio(1, 3))).unwrap()
    }

    #[test]
    fn ternary_first_removal_is_middle_third() {
        let removed = ternary().removed_at_stage(1).unwrap();
        assert_eq!(removed, vec![(ratio(1, 3), ratio(2, 3))]);
    }

    #[test]
    fn ternary_second_stage_removes_middle_ninths() {
        // Derived from the central-removal recurrence with mu_1 = 1/3.
        let removed = ternary().removed_at_stage(2).unwrap();
        assert_eq!(
            removed,
            vec![(ratio(1, 9), ratio(2, 9)), (ratio(7, 9), ratio(8, 9))]
        );
    }

    #[test]
    fn depth_zero_removes_nothing() {
        let c = ternary();
        assert!(c.removed_up_to_depth(0).unwrap().is_empty());
        assert_eq!(c.remaining_at_depth(0).unwrap().len(), 1);
        assert_eq!(c.mu(0).unwrap(), ratio(1, 1));
    }

    #[test]
    fn additivity_exact_to_depth_40() {
        let c = ternary();
        assert_eq!(stage_additivity_defect(&c, 40).unwrap(), ratio(0, 1));
        let fat = CantorLike::new(
            ratio(0, 1),
            ratio(1, 1),
            EpsilonSeq::InverseSquare(ratio(1, 4)),
        )
        .unwrap();
        assert_eq!(stage_additivity_defect(&fat, 40).unwrap(), ratio(0, 1));
    }

    #[test]
    fn construction_endpoints_stay_in_every_depth() {
        let c = ternary();
        // Endpoints of removed intervals belong to all later remaining sets.
        let (a, b) = c.removed_at_stage(1).unwrap()[0].clone();
        for depth in 0..10 {
            assert!(c.contains_rational_at_depth(&a, depth).unwrap());
            assert!(c.contains_rational_at_depth(&b, depth).unwrap());
        }
        assert!(!c.contains_rational_at_depth(&ratio(1, 2), 1).unwrap());
    }

    #[test]
    fn nested_nonemptiness() {
        let c = ternary();
        let mut prev = c.remaining_at_depth(0).unwrap();
        for depth in 1..=8 {
            let next = c.remaining_at_depth(depth).unwrap();
            assert!(!next.is_empty());
            // Every interval at this depth sits inside one at the previous.
            for (a, b) in &next {
                assert!(prev.iter().any(|(pa, pb)| pa <= a && b <= pb));
            }
            prev = next;
        }
    }

    #[test]
    fn eps_out_of_range_names_index() {
        let c = CantorLike::new(ratio(0, 1), ratio(1, 1), EpsilonSeq::InverseSquare(ratio(3, 2)))
            .unwrap();
        match c.eps().eps(1) {
            Err(SetError::EpsilonOutOfRange { index: 1, .. }) => {}
            other => panic!("expected range error, got {other:?}"),
        }
        assert!(c.eps().eps(2).is_ok());
    }

    #[test]
    fn fat_measure_partial_converges_to_two_over_pi() {
        let fat = CantorLike::new(
            ratio(0, 1),
            ratio(1, 1),
            EpsilonSeq::InverseSquare(ratio(1, 4)),
        )
        .unwrap();
        let p: f64 = fat.measure_partial(2000).unwrap();
        assert!((p - 2.0 / std::f64::consts::PI).abs() < 1e-3);
    }
}
