use std::fmt;
use std::sync::Arc;

use forms::coeff::{self, Coeff, Rat};
use forms::{parse_form, Chart, GradedForm, Key, Poly};
use num_traits::Zero;

use crate::{Grassmann, SuperError};

const T: &str = "t";
const THETA: &str = "theta";

fn check_base(base: &Arc<Chart>) -> Result<(), SuperError> {
    if base.n_even() != 0 {
        return Err(SuperError::NotABase);
    }
    for reserved in [T, THETA] {
        if base.odd_index(reserved).is_some() {
            return Err(SuperError::ReservedName(reserved.into()));
        }
    }
    Ok(())
}

fn odd_names(base: &Chart) -> Vec<&str> {
    base.odd_names().iter().map(String::as_str).collect()
}

/// `(t; eta..)`: where the components `f`, `g` live.
pub(crate) fn line_chart(base: &Arc<Chart>) -> Result<Arc<Chart>, SuperError> {
    check_base(base)?;
    Ok(Chart::new(&[T], &odd_names(base))?)
}

/// `(t; theta, eta..)`: where `f + theta g` lives as a single form.
pub(crate) fn theta_chart(base: &Arc<Chart>) -> Result<Arc<Chart>, SuperError> {
    check_base(base)?;
    let mut odd = vec![THETA];
    odd.extend(odd_names(base));
    Ok(Chart::new(&[T], &odd)?)
}

fn etas(chart: &Arc<Chart>, offset: usize, count: usize) -> Vec<GradedForm> {
    (0..count).map(|j| GradedForm::odd(chart, j + offset)).collect()
}

/// Superfunction `u = f + theta g` on `S x R^{1|1}`, with `f`, `g` polynomial in `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperFunction {
    base: Arc<Chart>,
    line: Arc<Chart>,
    f: GradedForm,
    g: GradedForm,
}

impl SuperFunction {
    pub fn new(base: &Arc<Chart>, f: GradedForm, g: GradedForm) -> Result<Self, SuperError> {
        let line = line_chart(base)?;
        for h in [&f, &g] {
            if h.chart().as_ref() != line.as_ref() {
                return Err(forms::FormError::ChartMismatch.into());
            }
            if h.terms().any(|(k, _)| k.dt != 0) {
                return Err(SuperError::HasDifferential);
            }
        }
        Ok(SuperFunction { base: base.clone(), line, f, g })
    }

    pub fn zero(base: &Arc<Chart>) -> Result<Self, SuperError> {
        let line = line_chart(base)?;
        Self::new(base, GradedForm::zero(&line), GradedForm::zero(&line))
    }

    /// Parses an expression in `t`, `theta` and the base parameters.
    pub fn parse(base: &Arc<Chart>, text: &str) -> Result<Self, SuperError> {
        let chart = theta_chart(base)?;
        let u = parse_form(&chart, text)?;
        Self::from_theta_form(base, &u)
    }

    /// Splits a form on `(t; theta, eta..)` as `f + theta g`.
    pub(crate) fn from_theta_form(base: &Arc<Chart>, u: &GradedForm) -> Result<Self, SuperError> {
        if u.terms().any(|(k, _)| k.dt != 0) {
            return Err(SuperError::HasDifferential);
        }
        let line = line_chart(base)?;
        let k = base.n_odd();
        let mut odd = vec![GradedForm::zero(&line)];
        odd.extend(etas(&line, 0, k));
        let t = [GradedForm::var(&line, 0)];
        let f = u.filter(|key| key.odd & 1 == 0).substitute(&line, &t, &odd)?;
        let g = u.odd_derivative(0).substitute(&line, &t, &odd)?;
        Self::new(base, f, g)
    }

    /// `f + theta g` as one form on `(t; theta, eta..)`.
    pub fn to_theta_form(&self) -> Result<GradedForm, SuperError> {
        let chart = theta_chart(&self.base)?;
        let t = [GradedForm::var(&chart, 0)];
        let odd = etas(&chart, 1, self.base.n_odd());
        let f = self.f.substitute(&chart, &t, &odd)?;
        let g = self.g.substitute(&chart, &t, &odd)?;
        Ok(&f + &(&GradedForm::odd(&chart, 0) * &g))
    }

    pub fn base(&self) -> &Arc<Chart> {
        &self.base
    }

    pub fn line(&self) -> &Arc<Chart> {
        &self.line
    }

    pub fn f(&self) -> &GradedForm {
        &self.f
    }

    pub fn g(&self) -> &GradedForm {
        &self.g
    }

    fn with(&self, f: GradedForm, g: GradedForm) -> Self {
        SuperFunction { base: self.base.clone(), line: self.line.clone(), f, g }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.with(&self.f + &other.f, &self.g + &other.g)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.with(&self.f - &other.f, &self.g - &other.g)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        self.with(self.f.scale(c), self.g.scale(c))
    }

    pub fn partial_t(&self) -> Self {
        self.with(self.f.partial(0), self.g.partial(0))
    }

    /// `D = d/dtheta - theta d/dt`: `D(f + theta g) = g - theta f'`.
    pub fn apply_d(&self) -> Self {
        self.with(self.g.clone(), -&self.f.partial(0))
    }

    /// `v = theta f - G` with `G' = g` and `G(0) = 0`, so that `D v = u`.
    pub fn primitive(&self) -> Self {
        self.with(-&antiderivative(&self.g), self.f.clone())
    }

    /// `f(p0) + p1 g(p0)`, expanding in the nilpotent part of `p0`.
    pub fn evaluate(&self, p: &SuperPoint) -> Result<Grassmann, SuperError> {
        if p.even.chart().as_ref() != self.base.as_ref() {
            return Err(forms::FormError::ChartMismatch.into());
        }
        let at = [p.even.clone()];
        let odd = etas(&self.base, 0, self.base.n_odd());
        let f = self.f.substitute(&self.base, &at, &odd)?;
        let g = self.g.substitute(&self.base, &at, &odd)?;
        Ok(&f + &(&p.odd * &g))
    }
}

fn antiderivative(h: &GradedForm) -> GradedForm {
    let terms = h.terms().map(|(k, p)| (*k, p.antiderivative(0)));
    GradedForm::from_terms(h.chart(), terms).expect("antiderivative stays on the chart")
}

impl fmt::Display for SuperFunction {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.f.is_zero(), self.g.is_zero()) {
            (_, true) => write!(out, "{}", self.f),
            (true, false) => write!(out, "{THETA}*({})", self.g),
            (false, false) => write!(out, "{} + {THETA}*({})", self.f, self.g),
        }
    }
}

/// `S`-point of `R^{1|1}`: even part `c + n` with `c` rational and `n` nilpotent, and an odd part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperPoint {
    pub even: Grassmann,
    pub odd: Grassmann,
}

impl SuperPoint {
    pub fn new(even: Grassmann, odd: Grassmann) -> Result<Self, SuperError> {
        check_base(even.chart())?;
        if even.chart() != odd.chart() {
            return Err(forms::FormError::ChartMismatch.into());
        }
        if even.parity() != Some(0) || !even.constant_term().im.is_zero() {
            return Err(SuperError::BadEvenPart);
        }
        if !odd.is_zero() && odd.parity() != Some(1) {
            return Err(SuperError::BadOddPart);
        }
        Ok(SuperPoint { even, odd })
    }

    /// The point `(r, 0)`.
    pub fn real(base: &Arc<Chart>, r: Rat) -> Result<Self, SuperError> {
        Self::new(GradedForm::constant(base, coeff::real(r)), GradedForm::zero(base))
    }

    pub fn parse(base: &Arc<Chart>, even: &str, odd: &str) -> Result<Self, SuperError> {
        check_base(base)?;
        Self::new(parse_form(base, even)?, parse_form(base, odd)?)
    }

    /// Reduced value of the even coordinate.
    pub fn body(&self) -> Rat {
        self.even.constant_term().re
    }

    pub fn base(&self) -> &Arc<Chart> {
        self.even.chart()
    }
}

/// `[b, a]` with `b` outgoing and `a` incoming; modulo nilpotents `a >= b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperInterval {
    pub out_point: SuperPoint,
    pub in_point: SuperPoint,
}

impl SuperInterval {
    pub fn new(out_point: SuperPoint, in_point: SuperPoint) -> Result<Self, SuperError> {
        if out_point.base() != in_point.base() {
            return Err(forms::FormError::ChartMismatch.into());
        }
        if in_point.body() < out_point.body() {
            return Err(SuperError::Reversed);
        }
        Ok(SuperInterval { out_point, in_point })
    }

    /// `[c, b]` followed by `[b, a]` gives `[c, a]`.
    pub fn concat(&self, next: &SuperInterval) -> Result<SuperInterval, SuperError> {
        if self.in_point != next.out_point {
            return Err(SuperError::NotAdjacent);
        }
        SuperInterval::new(self.out_point.clone(), next.in_point.clone())
    }

    pub fn base(&self) -> &Arc<Chart> {
        self.out_point.base()
    }
}

/// Berezin integral over `[b, a]` via the primitive: `v(b) - v(a)`.
pub fn integrate_ftc(u: &SuperFunction, j: &SuperInterval) -> Result<Grassmann, SuperError> {
    let v = u.primitive();
    Ok(&v.evaluate(&j.out_point)? - &v.evaluate(&j.in_point)?)
}

/// Berezin integral from the half-line formula `p1 f(p0) - G(p0)` at both ends,
/// with the Taylor expansions written out term by term.
pub fn integrate_direct(u: &SuperFunction, j: &SuperInterval) -> Result<Grassmann, SuperError> {
    if j.base() != u.base() {
        return Err(forms::FormError::ChartMismatch.into());
    }
    let big_g = antiderivative(&u.g);
    let half_line = |p: &SuperPoint| -> Grassmann { &(&p.odd * &taylor(&u.f, &p.even)) - &taylor(&big_g, &p.even) };
    Ok(&half_line(&j.out_point) - &half_line(&j.in_point))
}

/// `h(c + n) = sum_k h^(k)(c) n^k / k!` for `h` on the line chart.
fn taylor(h: &GradedForm, at: &Grassmann) -> Grassmann {
    let base = at.chart();
    let c = at.constant_term();
    let nil = at - &GradedForm::constant(base, c.clone());
    let mut acc = GradedForm::zero(base);
    let mut deriv = h.clone();
    let mut npow = GradedForm::one(base);
    for k in 0..=h.poly_degree() {
        let mut value = GradedForm::zero(base);
        for (key, p) in deriv.terms() {
            let key = Key { odd: key.odd, dt: 0 };
            value = &value + &GradedForm::monomial(base, key, Poly::constant(0, p.eval(std::slice::from_ref(&c))));
        }
        let inv = coeff::real(Rat::new(1.into(), coeff::factorial(k)));
        acc = &acc + &(&value * &npow).scale(&inv);
        deriv = deriv.partial(0);
        npow = &npow * &nil;
        if npow.is_zero() {
            break;
        }
    }
    acc
}
