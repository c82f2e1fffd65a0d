use std::sync::Arc;

use bundles::{chern_character, irreducible_projective_reps, Monomial, TwistedBundle};
use deligne::{Coboundary, DeligneCocycle, ExpLift};
use forms::coeff::{self, Rat};
use forms::{parse_form, Chart, FormMatrix, GradedForm, Phase};
use groupoid::{FiniteGroupoid, Group};
use num_complex::Complex64;
use superline::{super_parallel_transport, Connection, SuperExp, SuperInterval, SuperPoint};
use transgression::*;

fn klein() -> Group {
    Group::product(&Group::cyclic(2), &Group::cyclic(2))
}

fn torsion() -> DeligneCocycle {
    DeligneCocycle::discrete(FiniteGroupoid::from_group(&klein()), |x, y| Phase::from_ratio(((x % 2) * (y / 2)) as i64, 2))
}

fn pauli_bundle() -> TwistedBundle {
    let half = Phase::from_ratio(1, 2);
    let rho = vec![
        Monomial::identity(2),
        Monomial::diagonal(vec![Phase::zero(), half.clone()]),
        Monomial { columns: vec![(1, Phase::zero()), (0, Phase::zero())] },
        Monomial { columns: vec![(1, Phase::zero()), (0, half)] },
    ];
    TwistedBundle::from_monomials(torsion(), vec![(2, 0)], rho).unwrap()
}

fn point() -> Arc<Chart> {
    Chart::new::<&str>(&[], &[]).unwrap()
}

fn r(n: i64, d: i64) -> Rat {
    coeff::rat(n, d)
}

fn interval(base: &Arc<Chart>, lo: Rat, hi: Rat) -> SuperInterval {
    SuperInterval::new(SuperPoint::real(base, lo).unwrap(), SuperPoint::real(base, hi).unwrap()).unwrap()
}

/// Two segments `[1/2, 1]`, `[0, 1/2]` at the single object, jumps `j1` then `j2`.
fn two_jump_loop(gd: &FiniteGroupoid, j1: usize, j2: usize) -> SuperLoop {
    let base = point();
    let segs = vec![
        Segment::flat(0, interval(&base, r(1, 2), r(1, 1))).unwrap(),
        Segment::flat(0, interval(&base, r(0, 1), r(1, 2))).unwrap(),
    ];
    SuperLoop::new(gd, Skeleton::new(gd, segs, vec![j1, j2], true).unwrap()).unwrap()
}

#[test]
fn refine_splits_with_an_identity_jump() {
    let gd = FiniteGroupoid::from_group(&Group::cyclic(3));
    let base = point();
    let sk = Skeleton::constant_loop(&gd, &base, 1, r(1, 1)).unwrap();
    let fine = sk.refine(&gd, 0, SuperPoint::real(&base, r(1, 2)).unwrap()).unwrap();
    let s = fine.segments();
    assert_eq!((s[0].interval.out_point.body(), s[0].interval.in_point.body()), (r(1, 2), r(1, 1)));
    assert_eq!((s[1].interval.out_point.body(), s[1].interval.in_point.body()), (r(0, 1), r(1, 2)));
    assert_eq!(fine.jumps(), &[gd.identity(0), 1]);

    for bad in [r(0, 1), r(1, 1), r(3, 2)] {
        assert_eq!(sk.refine(&gd, 0, SuperPoint::real(&base, bad).unwrap()), Err(TransgressionError::SplitOutside(0)));
    }

    // Both orders of the two splits give the same skeleton.
    let p = |x| SuperPoint::real(&base, x).unwrap();
    let a = sk.refine(&gd, 0, p(r(1, 2))).unwrap().refine(&gd, 1, p(r(1, 4))).unwrap();
    let b = sk.refine(&gd, 0, p(r(1, 4))).unwrap().refine(&gd, 0, p(r(1, 2))).unwrap();
    assert_eq!(a, b);

    let c = torsion_like(&gd);
    let q = evaluate_q(&Comparison::Refinement { fine: a, coarse: sk.clone() }, &c).unwrap();
    assert!(q.is_one());
}

fn torsion_like(gd: &FiniteGroupoid) -> DeligneCocycle {
    DeligneCocycle::discrete(gd.clone(), |x, y| Phase::from_ratio(((x * y) % 3) as i64, 3))
}

#[test]
fn skeleton_validation() {
    let gd = FiniteGroupoid::pair_groupoid(2).unwrap();
    let base = point();
    let seg = |x, lo, hi| Segment::flat(x, interval(&base, lo, hi)).unwrap();
    let (f01, f10) = (gd.hom(0, 1)[0], gd.hom(1, 0)[0]);
    let ok = Skeleton::new(&gd, vec![seg(0, r(1, 2), r(1, 1)), seg(1, r(0, 1), r(1, 2))], vec![f01, f10], true);
    assert!(ok.is_ok());
    let wrong_jump = Skeleton::new(&gd, vec![seg(0, r(1, 2), r(1, 1)), seg(1, r(0, 1), r(1, 2))], vec![f10, f01], true);
    assert_eq!(wrong_jump, Err(TransgressionError::Jump(1)));
    let gap = Skeleton::new(&gd, vec![seg(0, r(1, 2), r(1, 1)), seg(1, r(0, 1), r(1, 3))], vec![f01, f10], true);
    assert_eq!(gap, Err(TransgressionError::NotAdjacent(1)));
    let count = Skeleton::new(&gd, vec![seg(0, r(1, 2), r(1, 1))], vec![], true);
    assert!(matches!(count, Err(TransgressionError::Length { .. })));
    let open = Skeleton::new(&gd, vec![seg(0, r(1, 2), r(1, 1)), seg(1, r(0, 1), r(1, 2))], vec![f01], false).unwrap();
    assert_eq!(SuperLoop::new(&gd, open), Err(TransgressionError::Open));
}

#[test]
fn identity_and_gauge_comparisons() {
    let c = torsion();
    let gd = c.groupoid().clone();
    let k = two_jump_loop(&gd, 2, 1);
    let id = Comparison::identity(&gd, &k.skeleton).unwrap();
    assert!(evaluate_q(&id, &c).unwrap().is_one());

    // Moving both segments by a: an automorphism of the loop since the group is abelian.
    let zero = zero_connection(k.skeleton.base()).unwrap();
    let transfers = vec![Transfer { morphism: 2, connection: zero.clone() }, Transfer { morphism: 2, connection: zero }];
    let lambda = Comparison::transport(&gd, &k.skeleton, transfers).unwrap();
    assert_eq!(lambda.target().unwrap(), k.skeleton);
    let q = evaluate_q(&lambda, &c).unwrap();
    // Oracle: h(a, a) / h(b, a) * h(a, b) / h(a, a) with q(x, y) = (x mod 2)(y div 2) / 2.
    let stored = |x: usize, y: usize| Phase::from_ratio(((x % 2) * (y / 2)) as i64, 2);
    let expected = &(&(&(&stored(2, 2) - &stored(1, 2)) + &stored(2, 1)) - &stored(2, 2));
    assert_eq!(q.phase, expected.clone());
    assert_eq!(q.phase, Phase::from_ratio(1, 2));

    let lambda_phases = vec![Phase::zero(), Phase::from_ratio(1, 3), Phase::from_ratio(1, 5), Phase::from_ratio(3, 7)];
    let gauged = c.apply_coboundary(&Coboundary::phases(&c, lambda_phases)).unwrap();
    assert_eq!(evaluate_q(&lambda, &gauged).unwrap(), q);
}

#[test]
fn loop_holonomy_examples() {
    let gd = FiniteGroupoid::from_group(&klein());
    let trivial = DeligneCocycle::trivial(gd.clone());
    assert!(loop_holonomy(&two_jump_loop(&gd, 2, 1), &trivial).unwrap().is_one());

    // Jumps a then b collapse to h(b, a), stored as 1/2.
    let k = two_jump_loop(&gd, 2, 1);
    assert_eq!(k.holonomy, 3);
    let v = loop_holonomy(&k, &torsion()).unwrap();
    assert_eq!(v.phase, Phase::from_ratio(1, 2));
    assert!((v.body() - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    // In the other order the stored exponent is h(a, b) = 0.
    assert!(loop_holonomy(&two_jump_loop(&gd, 1, 2), &torsion()).unwrap().is_one());

    // A = c dt on [0, 1].
    let base = point();
    for c in [r(1, 1), r(-2, 3), r(5, 2)] {
        let conn = Connection::constant_dt(&base, c.clone()).unwrap();
        let seg = Segment { object: 0, interval: interval(&base, r(0, 1), r(1, 1)), connection: conn.clone() };
        let g = FiniteGroupoid::pair_groupoid(1).unwrap();
        let k = SuperLoop::new(&g, Skeleton::new(&g, vec![seg.clone()], vec![0], true).unwrap()).unwrap();
        let v = loop_holonomy(&k, &DeligneCocycle::trivial(g)).unwrap();
        let oracle = super_parallel_transport(&conn, &seg.interval).unwrap();
        assert_eq!(v, oracle);
        let signed = coeff::real(c.clone());
        assert!(v.log == signed || v.log == -signed.clone());
        assert!(v.phase.is_zero() && v.nil.is_zero());
    }
}

#[test]
fn partition_function_examples() {
    // Trivial twist, flat bundle of rank 3 on S3 with trivial action.
    let s3 = FiniteGroupoid::from_group(&Group::symmetric(3).unwrap());
    let v = TwistedBundle::from_monomials(DeligneCocycle::trivial(s3.clone()), vec![(3, 0)], vec![Monomial::identity(3); 6]).unwrap();
    let base = point();
    for g in 0..6 {
        let k = SuperLoop::constant(&s3, &base, g).unwrap();
        assert_eq!(partition_function(&v, &k).unwrap().value, Complex64::new(3.0, 0.0));
    }
    let k = SuperLoop::new(&s3, Skeleton::new(&s3, two_jump_loop(&s3, 1, 4).skeleton.segments().to_vec(), vec![1, 4], true).unwrap()).unwrap();
    assert_eq!(partition_function(&v, &k).unwrap().value, Complex64::new(3.0, 0.0));

    // Pauli bundle: constant loops give str(rho(g)^-1); holonomy a gives tr(sigma_x) = 0.
    let p = pauli_bundle();
    let ch = chern_character(&p).unwrap();
    let gd = p.cocycle().groupoid().clone();
    for (o, &(_, g)) in ch.line.inertia.sectors.iter().enumerate() {
        let k = SuperLoop::constant(&gd, &base, g).unwrap();
        assert_eq!(partition_function(&p, &k).unwrap().value, ch.values[o]);
    }
    let a = SuperLoop::constant(&gd, &base, 2).unwrap();
    assert_eq!(partition_function(&p, &a).unwrap().value, Complex64::new(0.0, 0.0));
    let k = two_jump_loop(&gd, 2, 1);
    assert_eq!(partition_function(&p, &k).unwrap().value, Complex64::new(0.0, 0.0));

    // Dimension mismatch along a jump: bundle of rank 1 at object 0, rank 2 at object 1.
    let pair = FiniteGroupoid::pair_groupoid(2).unwrap();
    let bad = TwistedBundle::new(
        DeligneCocycle::trivial(pair.clone()),
        vec![(1, 0), (2, 0)],
        (0..pair.n_morphisms()).map(|f| bundles::CMatrix::identity(pair_dim(&pair, f, true), pair_dim(&pair, f, false))).collect(),
    )
    .unwrap();
    let k = SuperLoop::constant(&pair, &base, pair.identity(0)).unwrap();
    assert!(matches!(partition_function(&bad, &k), Err(TransgressionError::InvalidBundle(_))));
}

fn pair_dim(gd: &FiniteGroupoid, f: usize, target: bool) -> usize {
    let x = if target { gd.tgt(f) } else { gd.src(f) };
    x + 1
}

fn smooth_point(chart: &Arc<Chart>, a: &str, b: &str) -> DeligneCocycle {
    let gd = FiniteGroupoid::pair_groupoid(1).unwrap();
    DeligneCocycle::smooth(gd, chart.clone(), vec![ExpLift::one(chart)], vec![parse_form(chart, a).unwrap()], vec![parse_form(chart, b).unwrap()]).unwrap()
}

#[test]
fn reduced_superconnection_examples() {
    let chart = Chart::standard(3, 0);
    let plain = reduced_superconnection(&smooth_point(&chart, "0", "0")).unwrap();
    let s = bundles::InertiaSection { values: vec![parse_form(&chart, "t1^2*t3*dt2").unwrap()] };
    assert_eq!(plain.apply(&s).unwrap().values[0], s.values[0].exterior_d());

    let closed = reduced_superconnection(&smooth_point(&chart, "0", "dt1*dt2")).unwrap();
    assert_eq!(closed.apply(&s).unwrap().values[0], s.values[0].exterior_d());
    assert!(closed.mismatches(2).unwrap().is_empty());

    let curved = reduced_superconnection(&smooth_point(&chart, "0", "t3*dt1*dt2")).unwrap();
    let one = bundles::InertiaSection { values: vec![GradedForm::one(&chart)] };
    assert_eq!(curved.apply(&one).unwrap().values[0], parse_form(&chart, "dt1*dt2*dt3").unwrap());
    assert!(curved.mismatches(2).unwrap().is_empty());

    assert_eq!(reduced_superconnection(&torsion()).err(), Some(TransgressionError::Discrete));
}

#[test]
fn dimensional_reduction_examples() {
    let z2 = FiniteGroupoid::from_group(&Group::cyclic(2));
    let sign = TwistedBundle::from_monomials(
        DeligneCocycle::trivial(z2.clone()),
        vec![(2, 0)],
        vec![Monomial::identity(2), Monomial::diagonal(vec![Phase::zero(), Phase::from_ratio(1, 2)])],
    )
    .unwrap();
    assert!(dimensional_reduction_check(&sign).unwrap().is_ok());

    let s3 = DeligneCocycle::trivial(FiniteGroupoid::from_group(&Group::symmetric(3).unwrap()));
    for rep in irreducible_projective_reps(&s3, 1).unwrap() {
        assert!(dimensional_reduction_check(&rep.into_bundle(&s3).unwrap()).unwrap().is_ok());
    }
    let report = dimensional_reduction_check(&pauli_bundle()).unwrap();
    assert!(report.is_ok());
    assert_eq!(report.entries.len(), 4);

    // Rank one over a point with curving B.
    let chart = Chart::standard(2, 0);
    let c = smooth_point(&chart, "0", "t1*dt1*dt2");
    let v = TwistedBundle::from_monomials(c, vec![(1, 0)], vec![Monomial::identity(1)])
        .unwrap()
        .with_superconnection(vec![FormMatrix::scalar(&parse_form(&chart, "t1*dt2").unwrap(), 1, 0)])
        .unwrap();
    let report = dimensional_reduction_check(&v).unwrap();
    assert!(report.is_ok());
    // exp(F) = 1 + dt1 dt2 before the gauge factor.
    assert_eq!(report.entries[0].partition.form, Some(parse_form(&chart, "1 + dt1*dt2").unwrap()));

    // Negative control: the trivial representation against the sign character.
    let perturbed = TwistedBundle::from_monomials(DeligneCocycle::trivial(z2), vec![(2, 0)], vec![Monomial::identity(2); 2]).unwrap();
    let report = compare_reduction(&perturbed, &chern_character(&sign).unwrap()).unwrap();
    assert_eq!(report.mismatches, vec![1]);
}

#[test]
fn one_is_one() {
    assert!(SuperExp::one(&point()).is_one());
}
