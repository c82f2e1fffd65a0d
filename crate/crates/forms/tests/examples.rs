use std::sync::Arc;

use forms::coeff::{frac, int};
use forms::{parse_form, Chart, FormError, FormMatrix, GradedForm, Poly, PolyMap, VectorField};

fn chart(n: usize, k: usize) -> Arc<Chart> {
    Chart::standard(n, k)
}

fn p(c: &Arc<Chart>, s: &str) -> GradedForm {
    parse_form(c, s).unwrap()
}

#[test]
fn wedge_examples() {
    let c = chart(2, 1);
    let sum = &p(&c, "dt1*dt2") + &p(&c, "dt2*dt1");
    assert!(sum.is_zero());
    assert_eq!(p(&c, "t1*dt1").wedge(&p(&c, "t2*dt2")).unwrap(), p(&c, "t1*t2*dt1*dt2"));
    assert!(p(&c, "e1*dt1").wedge(&p(&c, "e1")).unwrap().is_zero());
}

#[test]
fn wedge_rejects_other_chart() {
    let a = GradedForm::one(&chart(1, 0));
    let b = GradedForm::one(&chart(2, 0));
    assert_eq!(a.wedge(&b), Err(FormError::ChartMismatch));
}

#[test]
fn eta_passes_dt_with_a_sign() {
    let c = chart(1, 1);
    assert_eq!(p(&c, "dt1*e1"), -&p(&c, "e1*dt1"));
}

#[test]
fn exterior_d_examples() {
    let c = chart(3, 0);
    assert_eq!(p(&c, "t1*t2").exterior_d(), p(&c, "t2*dt1 + t1*dt2"));
    assert_eq!(p(&c, "t1*dt2").exterior_d(), p(&c, "dt1*dt2"));
    assert!(p(&c, "t1^2*t2*dt3").exterior_d().exterior_d().is_zero());
}

#[test]
fn exterior_d_skips_eta_with_sign() {
    let c = chart(1, 1);
    // d(e1 t1) = -e1 dt1 since d is odd and passes e1.
    assert_eq!(p(&c, "e1*t1").exterior_d(), p(&c, "-e1*dt1"));
}

#[test]
fn pullback_examples() {
    let c = chart(1, 0);
    let square = PolyMap { source: c.clone(), target: c.clone(), images: vec![Poly::var(1, 0).pow_for_test(2)] };
    assert_eq!(p(&c, "dt1").pullback(&square).unwrap(), p(&c, "2*t1*dt1"));

    let c2 = chart(2, 0);
    let swap = PolyMap { source: c2.clone(), target: c2.clone(), images: vec![Poly::var(2, 1), Poly::var(2, 0)] };
    assert_eq!(p(&c2, "dt1*dt2").pullback(&swap).unwrap(), p(&c2, "-dt1*dt2"));

    let zero = PolyMap { source: c.clone(), target: c.clone(), images: vec![Poly::zero(1)] };
    assert!(p(&c, "t1*dt1").pullback(&zero).unwrap().is_zero());

    let bad = PolyMap { source: c.clone(), target: c.clone(), images: vec![] };
    assert!(matches!(p(&c, "t1").pullback(&bad), Err(FormError::Arity { .. })));
}

trait PowForTest {
    fn pow_for_test(&self, k: u32) -> Poly;
}

impl PowForTest for Poly {
    fn pow_for_test(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(self.nvars()), |acc, _| &acc * self)
    }
}

#[test]
fn contract_examples() {
    let c = chart(2, 0);
    let d1 = VectorField::coordinate(&c, 0);
    assert_eq!(p(&c, "dt1*dt2").contract(&d1).unwrap(), p(&c, "dt2"));
    assert!(p(&c, "(t1+t2^2)*dt2").contract(&d1).unwrap().is_zero());
    let v = VectorField { coeffs: vec![p(&c, "t2"), GradedForm::zero(&c)] };
    assert_eq!(p(&c, "dt1").contract(&v).unwrap(), p(&c, "t2"));
}

#[test]
fn exp_examples() {
    let c = chart(2, 0);
    let zero = FormMatrix::zero(&c, 1, 0);
    assert_eq!(zero.exp_positive_degree().unwrap(), FormMatrix::identity(&c, 1, 0));

    let m = FormMatrix::scalar(&p(&c, "dt1*dt2"), 1, 0);
    assert_eq!(m.exp_positive_degree().unwrap(), FormMatrix::scalar(&p(&c, "1 + dt1*dt2"), 1, 0));

    let strict = FormMatrix::from_entries(
        &c,
        2,
        0,
        vec![GradedForm::zero(&c), p(&c, "dt1"), GradedForm::zero(&c), GradedForm::zero(&c)],
    )
    .unwrap();
    let expected = FormMatrix::from_entries(
        &c,
        2,
        0,
        vec![GradedForm::one(&c), p(&c, "dt1"), GradedForm::zero(&c), GradedForm::one(&c)],
    )
    .unwrap();
    assert_eq!(strict.exp_positive_degree().unwrap(), expected);
}

#[test]
fn exp_rejects_constant_part() {
    let c = chart(1, 0);
    let m = FormMatrix::scalar(&p(&c, "1 + dt1"), 1, 0);
    assert_eq!(m.exp_positive_degree(), Err(FormError::NotNilpotent));
    let m = FormMatrix::scalar(&p(&c, "t1"), 1, 0);
    assert_eq!(m.exp_positive_degree(), Err(FormError::NotNilpotent));
}

#[test]
fn supertrace_examples() {
    let c = chart(1, 0);
    assert_eq!(FormMatrix::identity(&c, 2, 1).supertrace(), GradedForm::one(&c));
    let a = p(&c, "t1^2 + 3");
    let b = p(&c, "t1*dt1");
    let mut m = FormMatrix::zero(&c, 1, 1);
    m.set(0, 0, a.clone());
    m.set(1, 1, b.clone());
    assert_eq!(m.supertrace(), &a - &b);
}

#[test]
fn integrate_fiber_examples() {
    let c = Chart::new(&["t1", "s"], &[]).unwrap();
    let base = Chart::new(&["t1"], &[]).unwrap();
    assert_eq!(p(&c, "s*ds").integrate_fiber().unwrap(), GradedForm::constant(&base, frac(1, 2)));
    assert!(p(&c, "dt1").integrate_fiber().unwrap().is_zero());
    // The fiber differential is read at the right end.
    assert_eq!(p(&c, "t1*ds*dt1").integrate_fiber().unwrap(), parse_form(&base, "-t1*dt1").unwrap());
}

#[test]
fn restrict_fiber_evaluates() {
    let c = Chart::new(&["t1", "s"], &[]).unwrap();
    let base = Chart::new(&["t1"], &[]).unwrap();
    let f = p(&c, "s^2*dt1 + s*t1 + ds");
    assert_eq!(f.restrict_fiber(&int(0)).unwrap(), GradedForm::zero(&base));
    assert_eq!(f.restrict_fiber(&int(1)).unwrap(), parse_form(&base, "dt1 + t1").unwrap());
}

#[test]
fn rendering_is_canonical() {
    let c = chart(2, 2);
    let f = p(&c, "dt2*e1*t1^2*3/2 - i*e2 + (1+2i)*dt1*dt2");
    assert_eq!(f.to_string(), "(1+2i)*dt1*dt2 - 3/2*e1*dt2*t1^2 - i*e2");
    assert_eq!(p(&c, &f.to_string()), f);
    assert_eq!(GradedForm::zero(&c).to_string(), "0");
}

#[test]
fn degree_cap_enforced() {
    let c = chart(1, 0);
    assert!(matches!(parse_form(&c, "t1^33"), Err(FormError::DegreeCap { .. })));
    let big = p(&c, "t1^20");
    assert!(matches!(big.wedge(&big), Err(FormError::DegreeCap { degree: 40 })));
}

#[test]
fn duplicate_names_rejected() {
    assert!(matches!(Chart::new(&["x", "x"], &[]), Err(FormError::BadName(_))));
    assert!(matches!(Chart::new(&["x"], &["x"]), Err(FormError::BadName(_))));
}
