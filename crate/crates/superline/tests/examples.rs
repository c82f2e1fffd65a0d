use std::sync::Arc;

use forms::coeff::{frac, int, rat};
use forms::{parse_form, Chart, GradedForm, Poly};
use superline::*;

fn base(k: usize) -> Arc<Chart> {
    Chart::standard(0, k)
}

fn sf(b: &Arc<Chart>, s: &str) -> SuperFunction {
    SuperFunction::parse(b, s).unwrap()
}

fn g(b: &Arc<Chart>, s: &str) -> Grassmann {
    parse_form(b, s).unwrap()
}

fn pt(b: &Arc<Chart>, even: &str, odd: &str) -> SuperPoint {
    SuperPoint::parse(b, even, odd).unwrap()
}

fn interval(b: &Arc<Chart>, out: (&str, &str), inc: (&str, &str)) -> SuperInterval {
    SuperInterval::new(pt(b, out.0, out.1), pt(b, inc.0, inc.1)).unwrap()
}

#[test]
fn d_examples() {
    let b = base(0);
    assert_eq!(sf(&b, "theta").apply_d(), sf(&b, "1"));
    assert_eq!(sf(&b, "t").apply_d(), sf(&b, "-theta"));
    assert_eq!(sf(&b, "t^2 + theta*t").apply_d(), sf(&b, "t - 2*theta*t"));
}

#[test]
fn primitive_examples() {
    let b = base(0);
    assert_eq!(sf(&b, "1").primitive(), sf(&b, "theta"));
    assert_eq!(sf(&b, "theta").primitive(), sf(&b, "-t"));
    assert_eq!(sf(&b, "theta*t").primitive(), sf(&b, "-1/2*t^2"));
    for s in ["1", "theta", "theta*t", "t^3 - theta*t^2"] {
        assert_eq!(sf(&b, s).primitive().apply_d(), sf(&b, s));
    }
}

#[test]
fn evaluate_examples() {
    let b = base(2);
    assert_eq!(sf(&b, "theta").evaluate(&pt(&b, "1", "e1")).unwrap(), g(&b, "e1"));
    assert_eq!(sf(&b, "t").evaluate(&pt(&b, "2", "e1")).unwrap(), g(&b, "2"));
    assert_eq!(sf(&b, "t^2").evaluate(&pt(&b, "1 + e1*e2", "0")).unwrap(), g(&b, "1 + 2*e1*e2"));
}

#[test]
fn ftc_examples() {
    let b = base(1);
    let unit = interval(&b, ("0", "0"), ("1", "0"));
    assert_eq!(integrate_ftc(&sf(&b, "theta"), &unit).unwrap(), g(&b, "1"));
    let odd_end = interval(&b, ("0", "0"), ("1", "e1"));
    assert_eq!(integrate_ftc(&sf(&b, "1"), &odd_end).unwrap(), g(&b, "-e1"));
    assert!(integrate_ftc(&sf(&b, "0"), &odd_end).unwrap().is_zero());
}

#[test]
fn direct_examples() {
    let b = base(2);
    let unit = interval(&b, ("0", "0"), ("1", "0"));
    assert_eq!(integrate_direct(&sf(&b, "theta"), &unit).unwrap(), g(&b, "1"));
    let odd_end = interval(&b, ("0", "0"), ("1", "e1"));
    assert_eq!(integrate_direct(&sf(&b, "1"), &odd_end).unwrap(), g(&b, "-e1"));
    for r in 1..=3 {
        let j = SuperInterval::new(SuperPoint::real(&b, rat(0, 1)).unwrap(), SuperPoint::real(&b, rat(r, 1)).unwrap()).unwrap();
        assert_eq!(integrate_direct(&sf(&b, "theta"), &j).unwrap(), GradedForm::constant(&b, int(r)));
    }
    let zero_length = interval(&b, ("0", "e2"), ("0", "e1"));
    assert_eq!(integrate_direct(&sf(&b, "1"), &zero_length).unwrap(), g(&b, "e2 - e1"));
    assert_eq!(integrate_ftc(&sf(&b, "1"), &zero_length).unwrap(), g(&b, "e2 - e1"));
}

#[test]
fn reversed_interval_rejected() {
    let b = base(0);
    let r = SuperInterval::new(pt(&b, "1", "0"), pt(&b, "0", "0"));
    assert_eq!(r, Err(SuperError::Reversed));
}

#[test]
fn bad_points_rejected() {
    let b = base(2);
    assert_eq!(SuperPoint::parse(&b, "e1", "0"), Err(SuperError::BadEvenPart));
    assert_eq!(SuperPoint::parse(&b, "i", "0"), Err(SuperError::BadEvenPart));
    assert_eq!(SuperPoint::parse(&b, "0", "e1*e2"), Err(SuperError::BadOddPart));
}

#[test]
fn transport_examples() {
    let b = base(2);
    let unit = interval(&b, ("0", "0"), ("1", "0"));
    let zero = SuperFunction::zero(&b).unwrap();
    let flat = Connection { a_t: zero.clone(), a_theta: zero.clone() };
    assert!(super_parallel_transport(&flat, &unit).unwrap().is_one());

    let a = Connection::constant_dt(&b, rat(3, 2)).unwrap();
    let t = super_parallel_transport(&a, &unit).unwrap();
    assert_eq!(t.log, frac(-3, 2));
    assert!(t.nil.is_zero());

    let odd = Connection { a_t: zero, a_theta: sf(&b, "e1") };
    let step = interval(&b, ("0", "0"), ("0", "e2"));
    let t = super_parallel_transport(&odd, &step).unwrap();
    assert_eq!(t.log, int(0));
    assert_eq!(t.tail(), g(&b, "1 + e1*e2"));
}

#[test]
fn transport_calibrated_against_classical_holonomy() {
    // Classical transport of d - a(t) dt from t = 1 back to t = 0 is exp(-int_0^1 a).
    let b = base(0);
    let unit = interval(&b, ("0", "0"), ("1", "0"));
    for text in ["2", "t", "3*t^2 - 1/2", "t^4 + 2*t"] {
        let a_t = sf(&b, text);
        let classical = Chart::new(&["t"], &[] as &[&str]).unwrap();
        let integral = parse_form(&classical, text).unwrap().component(forms::Key::ONE).integrate_unit(0).constant_term();
        let conn = Connection { a_t, a_theta: SuperFunction::zero(&b).unwrap() };
        assert_eq!(super_parallel_transport(&conn, &unit).unwrap().log, -integral);
    }
}

#[test]
fn lemma2_examples() {
    let x = Chart::new(&["x1", "x2"], &[] as &[&str]).unwrap();
    let (lhs, rhs) = lemma2_check(&parse_form(&x, "x1^2 + x2").unwrap()).unwrap();
    assert_eq!(lhs, rhs);
    let target = lhs.chart().clone();
    assert_eq!(lhs, parse_form(&target, "x1^2 + x2 + theta*(2*x1*xi_x1 + xi_x2)").unwrap());

    let (lhs, rhs) = lemma2_check(&parse_form(&x, "dx1*dx2").unwrap()).unwrap();
    assert_eq!(lhs, rhs);
    assert_eq!(rhs, parse_form(&target, "-2*xi_x1*xi_x2").unwrap());

    let (lhs, rhs) = lemma2_check(&parse_form(&x, "x2*dx1").unwrap()).unwrap();
    assert_eq!(lhs, rhs);
    assert_eq!(rhs, parse_form(&target, "x2*xi_x1 - theta*xi_x1*xi_x2").unwrap());
}

#[test]
fn lemma2_sign_table() {
    assert_eq!((0..8).map(lemma2_sign).collect::<Vec<_>>(), vec![1, 1, -1, -1, 1, 1, -1, -1]);
}

#[test]
fn lemma2_rejects_mixed_degree() {
    let x = Chart::standard(2, 0);
    assert!(lemma2_check(&parse_form(&x, "t1 + dt1").unwrap()).is_err());
    let y = Chart::standard(2, 1);
    assert!(lemma2_check(&parse_form(&y, "e1*dt1").unwrap()).is_err());
}

#[test]
fn rudakov_examples() {
    let t = Poly::var(1, 0);
    let r = rudakov(&t);
    assert_eq!((r.naive, r.shifted, r.discrepancy), (int(0), int(1), true));
    let r = rudakov(&Poly::constant(1, int(5)));
    assert_eq!((r.naive, r.shifted, r.discrepancy), (int(0), int(0), false));
    let r = rudakov(&(&t * &t));
    assert_eq!((r.naive, r.shifted), (int(0), int(1)));
    assert!(rudakov_regression());
}
