//! Compensated (Kahan) summation for complex accumulators.

use crate::Scalar;

/// Running sum with a first-order error term. Complex addition is
/// componentwise, so the classic real-valued update compensates both lanes at
/// once.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: Scalar,
    err: Scalar,
}

impl CompensatedSum {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add(&mut self, rhs: Scalar) {
        let y = rhs - self.err;
        let new_sum = self.sum + y;
        self.err = (new_sum - self.sum) - y;
        self.sum = new_sum;
    }

    pub(crate) fn value(&self) -> Scalar {
        self.sum
    }
}
