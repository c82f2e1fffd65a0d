use std::collections::BTreeSet;

use deligne::*;
use forms::{parse_form, Chart, GradedForm, Phase};
use groupoid::{FiniteGroupoid, Group};

fn klein() -> Group {
    Group::product(&Group::cyclic(2), &Group::cyclic(2))
}

/// Element `i` of the Klein group is `(i / 2, i % 2)`.
fn torsion(x: usize, y: usize) -> Phase {
    Phase::from_ratio(((x % 2) * (y / 2)) as i64, 2)
}

#[test]
fn trivial_cocycle_is_valid() {
    for g in [Group::trivial(), klein(), Group::symmetric(3).unwrap()] {
        let c = DeligneCocycle::trivial(FiniteGroupoid::from_group(&g));
        assert!(c.validate().is_valid());
        let line = c.transgress().unwrap();
        assert!(line.holonomy.iter().all(ExpLift::is_one));
    }
}

#[test]
fn discrete_torsion_is_valid() {
    let gd = FiniteGroupoid::from_group(&klein());
    assert_eq!(gd.composable_triples().count(), 64);
    let c = DeligneCocycle::discrete(gd, torsion);
    assert_eq!(c.validate(), CocycleReport::default());
}

#[test]
fn perturbed_torsion_reports_the_failing_triples() {
    let gd = FiniteGroupoid::from_group(&klein());
    let (a, b) = (2, 1);
    let c = DeligneCocycle::discrete(gd, |x, y| {
        let q = torsion(x, y);
        if (x, y) == (a, b) {
            &q + &Phase::from_ratio(1, 4)
        } else {
            q
        }
    });
    // Oracle: the same identity in quarters, group law is xor.
    let quarter = |x: usize, y: usize| -> i64 { 2 * ((x % 2) * (y / 2)) as i64 + i64::from((x, y) == (a, b)) };
    let mut expected = BTreeSet::new();
    for x in 0..4 {
        for y in 0..4 {
            for z in 0..4 {
                let d = quarter(x, y) - quarter(x, y ^ z) + quarter(x ^ y, z) - quarter(y, z);
                if d.rem_euclid(4) != 0 {
                    expected.insert((x, y, z));
                }
            }
        }
    }
    let report = c.validate();
    assert!(report.normalization.is_empty() && report.pairs.is_empty() && report.morphisms.is_empty());
    assert_eq!(report.triples.iter().copied().collect::<BTreeSet<_>>(), expected);
    assert_eq!(expected.len(), 10);
    assert!(matches!(c.transgress(), Err(DeligneError::Invalid(_))));
}

#[test]
fn non_normalized_cocycle_is_reported() {
    let c = DeligneCocycle::discrete(FiniteGroupoid::from_group(&Group::cyclic(2)), |_, _| Phase::from_ratio(1, 2));
    let r = c.validate();
    assert_eq!(r.normalization, vec![(0, 0), (0, 1), (1, 0)]);
}

#[test]
fn coboundary_examples() {
    let c = DeligneCocycle::discrete(FiniteGroupoid::from_group(&klein()), torsion);
    assert_eq!(c.apply_coboundary(&Coboundary::zero(&c)).unwrap(), c);
    let lambda = vec![Phase::zero(), Phase::from_ratio(1, 3), Phase::from_ratio(1, 5), Phase::from_ratio(3, 7)];
    let d = c.apply_coboundary(&Coboundary::phases(&c, lambda)).unwrap();
    assert!(d.validate().is_valid());
    assert_ne!(d, c);
    let bad = Coboundary::phases(&c, vec![Phase::from_ratio(1, 2); 4]);
    assert!(matches!(c.apply_coboundary(&bad), Err(DeligneError::NotNormalized(_))));
}

#[test]
fn holonomy_of_discrete_torsion() {
    let c = DeligneCocycle::discrete(FiniteGroupoid::from_group(&klein()), torsion);
    let line = c.transgress().unwrap();
    let (a, b) = (2, 1);
    let sector = line.inertia.sector(0, a).unwrap();
    let arrow = line.inertia.arrows.iter().position(|&(f, o)| f == b && o == sector).unwrap();
    assert_eq!(line.holonomy[arrow].q, Phase::from_ratio(1, 2));
    assert!(line.multiplicativity_failures().is_empty());
    // Only the untwisted sector and the sectors commuting trivially survive: (0,0) alone.
    assert_eq!(line.regular_sectors(), vec![line.inertia.sector(0, 0).unwrap()]);
}

#[test]
fn h2_examples() {
    // The full Z/2 cohomology of the Klein group is three-dimensional; the U(1) part is one factor.
    assert_eq!(group_h2(&klein(), 2).unwrap().divisors, vec![2, 2, 2]);
    assert_eq!(u1_classes(&klein()).divisors, vec![2]);
    assert_eq!(group_h2(&Group::cyclic(4), 2).unwrap().divisors, vec![2]);
    assert_eq!(group_h2(&Group::cyclic(3), 2).unwrap().divisors, Vec::<u64>::new());
    assert_eq!(group_h2(&Group::trivial(), 5).unwrap().divisors, Vec::<u64>::new());
    assert_eq!(group_h2(&Group::cyclic(3), 1), Err(DeligneError::Modulus));
}

#[test]
fn h2_of_cyclic_groups_follows_the_gcd_rule() {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    for m in 1..=12u64 {
        for n in 2..=12u64 {
            let got = group_h2(&Group::cyclic(m as usize), n).unwrap().divisors;
            let g = gcd(m, n);
            let expected = if g > 1 { vec![g] } else { vec![] };
            assert_eq!(got, expected, "m={m} n={n}");
        }
    }
}

#[test]
fn schur_multipliers_of_small_groups() {
    let c = Group::cyclic;
    let p = Group::product;
    let table: Vec<(Group, Vec<u64>)> = vec![
        (c(6), vec![]),
        (klein(), vec![2]),
        (p(&c(4), &c(2)), vec![2]),
        (p(&klein(), &c(2)), vec![2, 2, 2]),
        (Group::dihedral(4).unwrap(), vec![2]),
        (Group::quaternion(), vec![]),
        (p(&c(3), &c(3)), vec![3]),
        (Group::symmetric(3).unwrap(), vec![]),
        (Group::dihedral(6).unwrap(), vec![2]),
        (Group::alternating(4).unwrap(), vec![2]),
        (p(&c(6), &c(2)), vec![2]),
        (Group::semidirect_cyclic(3, 4, 2).unwrap(), vec![]),
    ];
    for (g, expected) in table {
        assert_eq!(u1_classes(&g).divisors, expected, "order {}", g.order());
    }
}

#[test]
fn three_curvature_examples() {
    let chart = Chart::standard(3, 0);
    let gd = FiniteGroupoid::pair_groupoid(1).unwrap();
    let b = parse_form(&chart, "t1*dt2*dt3").unwrap();
    let c = DeligneCocycle::smooth(gd.clone(), chart.clone(), vec![ExpLift::one(&chart)], vec![GradedForm::zero(&chart)], vec![b])
        .unwrap();
    let w = c.three_curvature();
    assert_eq!(w.omega[0], parse_form(&chart, "dt1*dt2*dt3").unwrap());
    assert!(w.closed && w.invariant && w.note.is_none());

    let closed = parse_form(&chart, "dt1*dt2").unwrap();
    let c = DeligneCocycle::smooth(gd.clone(), chart.clone(), vec![ExpLift::one(&chart)], vec![GradedForm::zero(&chart)], vec![closed])
        .unwrap();
    assert!(c.three_curvature().omega[0].is_zero());

    let d = DeligneCocycle::trivial(gd).three_curvature();
    assert!(d.omega[0].is_zero() && d.note.is_some());
}

#[test]
fn smooth_constructor_checks_degrees() {
    let chart = Chart::standard(2, 0);
    let gd = FiniteGroupoid::pair_groupoid(1).unwrap();
    let one_form = parse_form(&chart, "dt1").unwrap();
    let bad = DeligneCocycle::smooth(gd.clone(), chart.clone(), vec![ExpLift::one(&chart)], vec![GradedForm::zero(&chart)], vec![one_form]);
    assert!(matches!(bad, Err(DeligneError::Degree(_, 2))));
    let short = DeligneCocycle::smooth(gd, chart.clone(), vec![], vec![GradedForm::zero(&chart)], vec![GradedForm::zero(&chart)]);
    assert!(matches!(short, Err(DeligneError::Length { .. })));
}

#[test]
fn smooth_cocycle_on_a_pair_groupoid() {
    // Two objects glued by one transition with A = t1 dt2, so B must jump by dt1 dt2.
    let chart = Chart::standard(2, 0);
    let gd = FiniteGroupoid::pair_groupoid(2).unwrap();
    let a_f = parse_form(&chart, "t1*dt2").unwrap();
    let mut a = vec![GradedForm::zero(&chart); 4];
    // Morphism (i-1)*2 + (j-1) goes j -> i.
    a[1] = -&a_f;
    a[2] = a_f.clone();
    let b = vec![GradedForm::zero(&chart), parse_form(&chart, "dt1*dt2").unwrap()];
    let h = vec![ExpLift::one(&chart); gd.n_pairs()];
    let c = DeligneCocycle::smooth(gd, chart.clone(), h.clone(), a.clone(), b.clone()).unwrap();
    assert!(c.validate().is_valid());
    let mut wrong = b;
    wrong[1] = GradedForm::zero(&chart);
    let gd = FiniteGroupoid::pair_groupoid(2).unwrap();
    let c = DeligneCocycle::smooth(gd, chart, h, a, wrong).unwrap();
    assert_eq!(c.validate().morphisms, vec![1, 2]);
}
