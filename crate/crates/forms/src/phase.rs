//! Exact roots of unity `exp(2 pi i q)`, stored as `q` in Q/Z.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::FormError;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Phase(BigRational);

impl Phase {
    pub fn new(q: BigRational) -> Self {
        let floor = q.floor();
        Phase(q - floor)
    }

    pub fn zero() -> Self {
        Phase(BigRational::zero())
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Phase::new(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// Representative in `[0, 1)`.
    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `k * q`.
    pub fn times(&self, k: i64) -> Self {
        Phase::new(&self.0 * BigRational::from_integer(BigInt::from(k)))
    }

    /// Denominator of the reduced representative.
    pub fn order(&self) -> BigInt {
        self.0.denom().clone()
    }

    /// `exp(2 pi i q)` in floating point.
    pub fn to_complex(&self) -> Complex64 {
        let q = self.0.to_f64().unwrap_or(0.0);
        // Hit the axis values exactly.
        let four = &self.0 * BigRational::from_integer(BigInt::from(4));
        if four.is_integer() {
            return match four.to_integer().to_i64().unwrap_or(0) {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
        }
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * q)
    }
}

impl Add for &Phase {
    type Output = Phase;
    fn add(self, rhs: &Phase) -> Phase {
        Phase::new(&self.0 + &rhs.0)
    }
}

impl Sub for &Phase {
    type Output = Phase;
    fn sub(self, rhs: &Phase) -> Phase {
        Phase::new(&self.0 - &rhs.0)
    }
}

impl Neg for &Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::new(-self.0.clone())
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Phase {
    type Err = FormError;

    /// Accepts `p/q` or an integer.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let r = BigRational::from_str(t).map_err(|_| FormError::Parse(format!("bad exponent `{s}`")))?;
        Ok(Phase::new(r))
    }
}
