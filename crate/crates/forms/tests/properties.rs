use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use forms::coeff::frac;
use forms::random;
use forms::{parse_form, Chart, FormMatrix, GradedForm, Key, PolyMap, VectorField};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_chart<R: Rng>(rng: &mut R) -> Arc<Chart> {
    Chart::standard(rng.gen_range(1..=3), rng.gen_range(0..=2))
}

fn random_map<R: Rng>(rng: &mut R, target: &Arc<Chart>) -> PolyMap {
    let source = Chart::standard(rng.gen_range(1..=3), target.n_odd());
    let images = (0..target.n_even()).map(|_| random::poly(rng, source.n_even(), 2, 2, false)).collect();
    PolyMap { source, target: target.clone(), images }
}

/// Random matrix of parity `parity` with entries lacking a constant part.
fn nilpotent_matrix<R: Rng>(rng: &mut R, chart: &Arc<Chart>, p: usize, q: usize, parity: u32) -> FormMatrix {
    let mut m = FormMatrix::zero(chart, p, q);
    for i in 0..p + q {
        for j in 0..p + q {
            let want = (parity + m.grading(i) + m.grading(j)) % 2;
            let f = random::form(rng, chart, 1, 2).filter(|k| k != Key::ONE && k.parity() == want);
            m.set(i, j, f);
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn d_squared_vanishes(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = small_chart(&mut r);
        let f = random::form(&mut r, &c, 4, 4);
        prop_assert!(f.exterior_d().exterior_d().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = small_chart(&mut r);
        let (a0, a1) = random::form(&mut r, &c, 2, 3).split_parity();
        let (b0, b1) = random::form(&mut r, &c, 2, 3).split_parity();
        for (a, pa) in [(&a0, 0), (&a1, 1)] {
            for (b, pb) in [(&b0, 0), (&b1, 1)] {
                let ab = a.wedge(b).unwrap();
                let ba = b.wedge(a).unwrap();
                prop_assert_eq!(ab, if pa * pb == 1 { -&ba } else { ba });
            }
        }
    }

    #[test]
    fn wedge_is_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = small_chart(&mut r);
        let a = random::form(&mut r, &c, 2, 3);
        let b = random::form(&mut r, &c, 2, 3);
        let e = random::form(&mut r, &c, 2, 3);
        prop_assert_eq!(&(&a * &b) * &e, &a * &(&b * &e));
    }

    #[test]
    fn d_is_a_graded_derivation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = small_chart(&mut r);
        let (a0, a1) = random::form(&mut r, &c, 3, 3).split_parity();
        let b = random::form(&mut r, &c, 3, 3);
        prop_assert_eq!((&a0 * &b).exterior_d(), &(&a0.exterior_d() * &b) + &(&a0 * &b.exterior_d()));
        prop_assert_eq!((&a1 * &b).exterior_d(), &(&a1.exterior_d() * &b) - &(&a1 * &b.exterior_d()));
    }

    #[test]
    fn pullback_commutes_with_d_and_wedge(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = small_chart(&mut r);
        let phi = random_map(&mut r, &c);
        let a = random::form(&mut r, &c, 2, 3);
        let b = random::form(&mut r, &c, 2, 3);
        let pa = a.pullback(&phi).unwrap();
        let pb = b.pullback(&phi).unwrap();
        prop_assert_eq!(a.exterior_d().pullback(&phi).unwrap(), pa.exterior_d());
        prop_assert_eq!((&a * &b).pullback(&phi).unwrap(), &pa * &pb);
    }

    #[test]
    fn contraction_is_an_odd_derivation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = small_chart(&mut r);
        let v = VectorField { coeffs: (0..c.n_even()).map(|_| random::function(&mut r, &c, 2, 2)).collect() };
        let (a0, a1) = random::form(&mut r, &c, 2, 3).split_parity();
        let b = random::form(&mut r, &c, 2, 3);
        let lhs0 = (&a0 * &b).contract(&v).unwrap();
        prop_assert_eq!(lhs0, &(&a0.contract(&v).unwrap() * &b) + &(&a0 * &b.contract(&v).unwrap()));
        let lhs1 = (&a1 * &b).contract(&v).unwrap();
        prop_assert_eq!(lhs1, &(&a1.contract(&v).unwrap() * &b) - &(&a1 * &b.contract(&v).unwrap()));
        prop_assert!(a0.contract(&v).unwrap().contract(&v).unwrap().is_zero());
    }

    #[test]
    fn cartan_formula_on_functions(seed in any::<u64>()) {
        // i_v df equals the directional derivative of f.
        let mut r = rng(seed);
        let c = small_chart(&mut r);
        let f = random::function(&mut r, &c, 3, 3);
        let v = VectorField { coeffs: (0..c.n_even()).map(|_| random::function(&mut r, &c, 1, 2)).collect() };
        let mut expect = GradedForm::zero(&c);
        for i in 0..c.n_even() {
            expect = &expect + &(&v.coeffs[i] * &f.partial(i));
        }
        prop_assert_eq!(f.exterior_d().contract(&v).unwrap(), expect);
    }

    #[test]
    fn supertrace_is_supercyclic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = small_chart(&mut r);
        let (p, q) = (r.gen_range(0..=2), r.gen_range(0..=2));
        if p + q == 0 {
            return Ok(());
        }
        let (pm, pn) = (r.gen_range(0..=1), r.gen_range(0..=1));
        let m = nilpotent_matrix(&mut r, &c, p, q, pm);
        let n = nilpotent_matrix(&mut r, &c, p, q, pn);
        let mn = m.mul(&n).unwrap().supertrace();
        let nm = n.mul(&m).unwrap().supertrace();
        prop_assert_eq!(mn, if pm * pn == 1 { -&nm } else { nm });
    }

    #[test]
    fn exp_adds_for_commuting_arguments(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = Chart::standard(r.gen_range(2..=3), r.gen_range(0..=2));
        let (p, q) = (r.gen_range(1..=2), r.gen_range(0..=1));
        let m = nilpotent_matrix(&mut r, &c, p, q, 0);
        let a = m.scale(&frac(r.gen_range(-2..=2), r.gen_range(1..=3)));
        let b = m.scale(&frac(r.gen_range(-2..=2), r.gen_range(1..=3)));
        let lhs = a.add(&b).unwrap().exp_positive_degree().unwrap();
        let rhs = a.exp_positive_degree().unwrap().mul(&b.exp_positive_degree().unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);

        let f = random::form(&mut r, &c, 1, 3).filter(|k| k != Key::ONE && k.parity() == 0);
        let s = FormMatrix::scalar(&f, p, q);
        let lhs = s.add(&m).unwrap().exp_positive_degree().unwrap();
        let rhs = s.exp_positive_degree().unwrap().mul(&m.exp_positive_degree().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn stokes_on_the_fiber(seed in any::<u64>()) {
        // Integrating d over the unit fiber leaves the boundary restrictions.
        let mut r = rng(seed);
        let c = small_chart(&mut r);
        let f = random::form(&mut r, &c, 3, 4);
        let one = f.restrict_fiber(&frac(1, 1)).unwrap();
        let zero = f.restrict_fiber(&frac(0, 1)).unwrap();
        let boundary = &one - &zero;
        let fib = f.integrate_fiber().unwrap();
        // With the differential read at the right end, fiber(df) - d fiber(f) = (-1)^{|f|} (f|1 - f|0).
        let (f0, f1) = f.split_parity();
        let lhs0 = &f0.exterior_d().integrate_fiber().unwrap() - &f0.integrate_fiber().unwrap().exterior_d();
        let lhs1 = &f1.exterior_d().integrate_fiber().unwrap() - &f1.integrate_fiber().unwrap().exterior_d();
        let b0 = &f0.restrict_fiber(&frac(1, 1)).unwrap() - &f0.restrict_fiber(&frac(0, 1)).unwrap();
        let b1 = &f1.restrict_fiber(&frac(1, 1)).unwrap() - &f1.restrict_fiber(&frac(0, 1)).unwrap();
        prop_assert_eq!(lhs0, b0);
        prop_assert_eq!(lhs1, -&b1);
        prop_assert_eq!(fib.chart().n_even() + 1, c.n_even());
        prop_assert_eq!(boundary.chart(), fib.chart());
    }

    #[test]
    fn render_parse_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = small_chart(&mut r);
        let f = random::form(&mut r, &c, 3, 4);
        prop_assert_eq!(parse_form(&c, &f.to_string()).unwrap(), f);
    }
}
