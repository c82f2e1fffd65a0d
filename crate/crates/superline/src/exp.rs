use std::fmt;
use std::sync::Arc;

use forms::coeff::{self, Coeff, Rat};
use forms::{Chart, GradedForm, Phase};
use num_complex::Complex64;
use num_traits::Zero;

use crate::line::{integrate_ftc, SuperFunction, SuperInterval};
use crate::{Grassmann, SuperError};

/// `exp(2 pi i phase) * exp(log) * exp(nil)` with `log` a Gaussian rational kept
/// symbolically and `nil` an even nilpotent Grassmann element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperExp {
    pub phase: Phase,
    pub log: Coeff,
    pub nil: Grassmann,
}

impl SuperExp {
    pub fn one(base: &Arc<Chart>) -> Self {
        SuperExp { phase: Phase::zero(), log: Coeff::zero(), nil: GradedForm::zero(base) }
    }

    /// `exp(c)` for an even element `c`.
    pub fn exp(c: &Grassmann) -> Result<Self, SuperError> {
        if c.parity() != Some(0) {
            return Err(SuperError::OddExponent);
        }
        let log = c.constant_term();
        let nil = c - &GradedForm::constant(c.chart(), log.clone());
        Ok(SuperExp { phase: Phase::zero(), log, nil })
    }

    pub fn root_of_unity(base: &Arc<Chart>, q: Phase) -> Self {
        SuperExp { phase: q, ..SuperExp::one(base) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        SuperExp { phase: &self.phase + &other.phase, log: &self.log + &other.log, nil: &self.nil + &other.nil }
    }

    pub fn inverse(&self) -> Self {
        SuperExp { phase: -&self.phase, log: -self.log.clone(), nil: -&self.nil }
    }

    pub fn is_one(&self) -> bool {
        self.phase.is_zero() && self.log.is_zero() && self.nil.is_zero()
    }

    /// The full exponent `2 pi i phase + log + nil` with the phase left out; equal exponents give equal values.
    pub fn exponent(&self) -> Grassmann {
        &GradedForm::constant(self.nil.chart(), self.log.clone()) + &self.nil
    }

    /// `exp(nil)` as a finite sum.
    pub fn tail(&self) -> Grassmann {
        let base = self.nil.chart();
        let mut acc = GradedForm::one(base);
        let mut term = GradedForm::one(base);
        let mut k = 1i64;
        loop {
            term = (&term * &self.nil).scale(&coeff::frac(1, k));
            if term.is_zero() {
                return acc;
            }
            acc = &acc + &term;
            k += 1;
        }
    }

    /// Numerical value of the body `exp(2 pi i phase + log)`.
    pub fn body(&self) -> Complex64 {
        let l = coeff::to_f64(&self.log);
        self.phase.to_complex() * l.exp()
    }
}

impl fmt::Display for SuperExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp(2pi*i*{})*exp({})", self.phase, coeff::render(&self.log))?;
        if !self.nil.is_zero() {
            write!(f, "*exp({})", self.nil)?;
        }
        Ok(())
    }
}

/// Connection data `A = dt a_t + dtheta a_theta` on `S x R^{1|1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    pub a_t: SuperFunction,
    pub a_theta: SuperFunction,
}

impl Connection {
    /// `A = c dt` for a constant `c`.
    pub fn constant_dt(base: &Arc<Chart>, c: Rat) -> Result<Self, SuperError> {
        let zero = SuperFunction::zero(base)?;
        let line = zero.line().clone();
        let a_t = SuperFunction::new(base, GradedForm::constant(&line, coeff::real(c)), GradedForm::zero(&line))?;
        Ok(Connection { a_t, a_theta: zero })
    }

    /// `<D, A> = a_theta - theta a_t`.
    pub fn pairing(&self) -> Result<SuperFunction, SuperError> {
        let p = self.a_theta.f().clone();
        let g = self.a_theta.g() - self.a_t.f();
        SuperFunction::new(self.a_theta.base(), p, g)
    }
}

/// Parallel transport of `d - A` along `J`: `exp` of the Berezin integral of `<D, A>`.
pub fn super_parallel_transport(a: &Connection, j: &SuperInterval) -> Result<SuperExp, SuperError> {
    let c = integrate_ftc(&a.pairing()?, j)?;
    SuperExp::exp(&c)
}
