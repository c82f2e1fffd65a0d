//! Berezin integration over `[0,1] x R^{0|2}` is not invariant under the coordinate change
//! `t -> t + theta1 theta2`, which moves the boundary.

use forms::coeff::{self, Coeff};
use forms::{Chart, GradedForm, Key, Poly};

/// Integrals of `u(t)` before and after the shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RudakovReport {
    pub naive: Coeff,
    pub shifted: Coeff,
    pub discrepancy: bool,
}

/// Top Grassmann component, integrated over `t` in `[0,1]`.
fn berezin(u: &GradedForm) -> Coeff {
    u.component(Key { odd: 0b11, dt: 0 }).integrate_unit(0).constant_term()
}

/// `u` is a polynomial in one variable.
pub fn rudakov(u: &Poly) -> RudakovReport {
    let chart = Chart::new(&["t"], &["theta1", "theta2"]).expect("fixed names");
    let f = GradedForm::from_poly(&chart, u.clone());
    let naive = berezin(&f);
    let t = GradedForm::var(&chart, 0);
    let shift = &t + &(&GradedForm::odd(&chart, 0) * &GradedForm::odd(&chart, 1));
    let odd = [GradedForm::odd(&chart, 0), GradedForm::odd(&chart, 1)];
    let moved = f.substitute(&chart, &[shift], &odd).expect("shift keeps the degree");
    let shifted = berezin(&moved);
    let discrepancy = naive != shifted;
    RudakovReport { naive, shifted, discrepancy }
}

/// Reruns the example `u = t`: the naive integral vanishes while the shifted one is `u(1) - u(0) = 1`.
pub fn rudakov_regression() -> bool {
    let report = rudakov(&Poly::var(1, 0));
    report.naive == coeff::int(0) && report.shifted == coeff::int(1) && report.discrepancy
}
