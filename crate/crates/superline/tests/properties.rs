use std::sync::Arc;

use forms::coeff::{int, rat};
use forms::{random, Chart, GradedForm, Key};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use superline::*;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn function<R: Rng>(r: &mut R, b: &Arc<Chart>, deg: u32) -> SuperFunction {
    let line = SuperFunction::zero(b).unwrap().line().clone();
    let f = random::form(r, &line, deg, 3).filter(|k| k.dt == 0);
    let g = random::form(r, &line, deg, 3).filter(|k| k.dt == 0);
    SuperFunction::new(b, f, g).unwrap()
}

/// Function of fixed total parity.
fn homogeneous_function<R: Rng>(r: &mut R, b: &Arc<Chart>, parity: u32) -> SuperFunction {
    let line = SuperFunction::zero(b).unwrap().line().clone();
    let f = random::form(r, &line, 2, 3).filter(|k| k.dt == 0 && k.parity() == parity);
    let g = random::form(r, &line, 2, 3).filter(|k| k.dt == 0 && k.parity() != parity);
    SuperFunction::new(b, f, g).unwrap()
}

fn point<R: Rng>(r: &mut R, b: &Arc<Chart>, body: i64) -> SuperPoint {
    let nil = random::form(r, b, 0, 2).filter(|k| k != Key::ONE && k.parity() == 0);
    let even = &GradedForm::constant(b, int(body)) + &nil;
    let odd = random::form(r, b, 0, 2).filter(|k| k.parity() == 1);
    SuperPoint::new(even, odd).unwrap()
}

fn ordered_points<R: Rng>(r: &mut R, b: &Arc<Chart>, n: usize) -> Vec<SuperPoint> {
    let mut body = r.gen_range(-2..=2);
    (0..n)
        .map(|_| {
            let p = point(r, b, body);
            body += r.gen_range(0..=2);
            p
        })
        .collect()
}

fn base<R: Rng>(r: &mut R) -> Arc<Chart> {
    Chart::standard(0, r.gen_range(0..=3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn d_squared_is_minus_d_dt(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = base(&mut r);
        let u = function(&mut r, &b, 5);
        prop_assert_eq!(u.apply_d().apply_d(), u.partial_t().scale(&int(-1)));
    }

    #[test]
    fn primitive_inverts_d(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = base(&mut r);
        let u = function(&mut r, &b, 5);
        prop_assert_eq!(u.primitive().apply_d(), u);
    }

    #[test]
    fn ftc_is_additive(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = base(&mut r);
        let u = function(&mut r, &b, 4);
        let p = ordered_points(&mut r, &b, 3);
        let first = SuperInterval::new(p[0].clone(), p[1].clone()).unwrap();
        let second = SuperInterval::new(p[1].clone(), p[2].clone()).unwrap();
        let whole = first.concat(&second).unwrap();
        let sum = &integrate_ftc(&u, &first).unwrap() + &integrate_ftc(&u, &second).unwrap();
        prop_assert_eq!(integrate_ftc(&u, &whole).unwrap(), sum);
    }

    #[test]
    fn ftc_of_derivative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = base(&mut r);
        let v = function(&mut r, &b, 4);
        let p = ordered_points(&mut r, &b, 2);
        let j = SuperInterval::new(p[0].clone(), p[1].clone()).unwrap();
        let expected = &v.evaluate(&j.out_point).unwrap() - &v.evaluate(&j.in_point).unwrap();
        prop_assert_eq!(integrate_ftc(&v.apply_d(), &j).unwrap(), expected);
    }

    #[test]
    fn transport_is_multiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = base(&mut r);
        let a = Connection { a_t: homogeneous_function(&mut r, &b, 0), a_theta: homogeneous_function(&mut r, &b, 1) };
        let p = ordered_points(&mut r, &b, 3);
        let first = SuperInterval::new(p[0].clone(), p[1].clone()).unwrap();
        let second = SuperInterval::new(p[1].clone(), p[2].clone()).unwrap();
        let whole = first.concat(&second).unwrap();
        let product = super_parallel_transport(&a, &first).unwrap().mul(&super_parallel_transport(&a, &second).unwrap());
        let direct = super_parallel_transport(&a, &whole).unwrap();
        prop_assert_eq!(direct.exponent(), product.exponent());
        prop_assert_eq!(direct.tail(), product.tail());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn ftc_matches_direct(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = base(&mut r);
        let u = function(&mut r, &b, 5);
        let p = ordered_points(&mut r, &b, 2);
        let j = SuperInterval::new(p[0].clone(), p[1].clone()).unwrap();
        prop_assert_eq!(integrate_ftc(&u, &j).unwrap(), integrate_direct(&u, &j).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn lemma2_holds_in_every_degree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = Chart::standard(4, 0);
        for n in 0..=4 {
            let omega = random::homogeneous(&mut r, &x, n, (n % 2) as u32, 2, 2);
            let (lhs, rhs) = lemma2_check(&omega).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn lemma2_factor_and_sign_on_volume_forms() {
    for n in 0..=4usize {
        let x = Chart::standard(n, 0);
        let mut omega = GradedForm::one(&x);
        for i in 0..n {
            omega = &omega * &GradedForm::dvar(&x, i);
        }
        let (lhs, rhs) = lemma2_check(&omega).unwrap();
        assert_eq!(lhs, rhs);
        let (_, c) = lhs.terms().next().map(|(k, p)| (*k, p.constant_term())).unwrap();
        let expected = [1, 1, -2, -6, 24][n];
        assert_eq!(c, forms::coeff::real(rat(expected, 1)));
    }
}
