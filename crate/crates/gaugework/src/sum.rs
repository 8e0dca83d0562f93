//! Compensated (Neumaier) summation.
//!
//! Used wherever contribution order is contractually fixed and the result
//! must be bit-stable: Riemann sums, Harnack series reduction, report
//! assembly.

use crate::scalar::Real;

/// Running Neumaier sum.
#[derive(Debug, Clone, Copy)]
pub struct CompensatedSum<R> {
    sum: R,
    compensation: R,
}

impl<R: Real> Default for CompensatedSum<R> {
    fn default() -> Self {
        Self::new()
    }
}

impl<R: Real> CompensatedSum<R> {
    pub fn new() -> Self {
        Self {
            sum: R::zero(),
            compensation: R::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, value: R) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation = self.compensation + ((self.sum - t) + value);
        } else {
            self.compensation = self.compensation + ((value - t) + self.sum);
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> R {
        self.sum + self.compensation
    }
}

/// Sum an iterator with compensation, in iteration order.
pub fn compensated_sum<R: Real, I: IntoIterator<Item = R>>(iter: I) -> R {
    let mut acc = CompensatedSum::new();
    for v in iter {
        acc.add(v);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancellation() {
        // 1 + 2^60 - 2^60 loses the 1 in naive f64 order.
        let xs = [1.0f64, (2.0f64).powi(60), -(2.0f64).powi(60)];
        assert_eq!(compensated_sum(xs), 1.0);
        assert_eq!(xs.iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn many_small_terms() {
        let n = 1_000_000u32;
        let s = compensated_sum((0..n).map(|_| 0.1f64));
        assert!((s - 100_000.0).abs() < 1e-6);
    }
}
