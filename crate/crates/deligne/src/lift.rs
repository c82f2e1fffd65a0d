use std::fmt;
use std::sync::Arc;

use forms::{Chart, GradedForm, Phase};

/// `exp(2 pi i q) * exp(p)`: a root of unity times the exponential of a polynomial function.
///
/// `p` already carries the factor `2 pi i`, so `d log = dp` stays exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpLift {
    pub q: Phase,
    pub p: GradedForm,
}

impl ExpLift {
    pub fn one(chart: &Arc<Chart>) -> Self {
        ExpLift { q: Phase::zero(), p: GradedForm::zero(chart) }
    }

    pub fn phase(chart: &Arc<Chart>, q: Phase) -> Self {
        ExpLift { q, p: GradedForm::zero(chart) }
    }

    pub fn is_one(&self) -> bool {
        self.q.is_zero() && self.p.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        ExpLift { q: &self.q + &other.q, p: &self.p + &other.p }
    }

    pub fn div(&self, other: &Self) -> Self {
        ExpLift { q: &self.q - &other.q, p: &self.p - &other.p }
    }

    pub fn inverse(&self) -> Self {
        ExpLift { q: -&self.q, p: -&self.p }
    }

    /// `d log` of the value.
    pub fn dlog(&self) -> GradedForm {
        self.p.exterior_d()
    }
}

impl fmt::Display for ExpLift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            write!(f, "{}", self.q)
        } else {
            write!(f, "{};exp({})", self.q, self.p)
        }
    }
}
