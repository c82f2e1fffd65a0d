use std::collections::BTreeSet;

use groupoid::*;
use proptest::prelude::*;

/// Every group of order at most 12 up to isomorphism.
fn small_groups() -> Vec<(&'static str, Group)> {
    let c = Group::cyclic;
    let p = Group::product;
    vec![
        ("1", c(1)),
        ("Z2", c(2)),
        ("Z3", c(3)),
        ("Z4", c(4)),
        ("Z2^2", p(&c(2), &c(2))),
        ("Z5", c(5)),
        ("Z6", c(6)),
        ("S3", Group::symmetric(3).unwrap()),
        ("Z7", c(7)),
        ("Z8", c(8)),
        ("Z4xZ2", p(&c(4), &c(2))),
        ("Z2^3", p(&p(&c(2), &c(2)), &c(2))),
        ("D4", Group::dihedral(4).unwrap()),
        ("Q8", Group::quaternion()),
        ("Z9", c(9)),
        ("Z3^2", p(&c(3), &c(3))),
        ("Z10", c(10)),
        ("D5", Group::dihedral(5).unwrap()),
        ("Z11", c(11)),
        ("Z12", c(12)),
        ("Z6xZ2", p(&c(6), &c(2))),
        ("D6", Group::dihedral(6).unwrap()),
        ("A4", Group::alternating(4).unwrap()),
        ("Dic3", Group::semidirect_cyclic(3, 4, 2).unwrap()),
    ]
}

/// Conjugacy classes by orbit search on the raw table, as a set of sets.
fn oracle_classes(g: &Group) -> BTreeSet<BTreeSet<usize>> {
    let n = g.order();
    let inv = |a: usize| (0..n).find(|&b| g.mul(a, b) == g.identity()).unwrap();
    let mut out = BTreeSet::new();
    for a in 0..n {
        let mut orbit = BTreeSet::from([a]);
        let mut frontier = vec![a];
        while let Some(x) = frontier.pop() {
            for h in 0..n {
                let y = g.mul(g.mul(h, x), inv(h));
                if orbit.insert(y) {
                    frontier.push(y);
                }
            }
        }
        out.insert(orbit);
    }
    out
}

#[test]
fn fixtures_have_the_right_orders_and_class_numbers() {
    let expected = [1, 2, 3, 4, 4, 5, 6, 3, 7, 8, 8, 8, 5, 5, 9, 9, 10, 4, 11, 12, 12, 6, 4, 6];
    let groups = small_groups();
    let orders = [1, 2, 3, 4, 4, 5, 6, 6, 7, 8, 8, 8, 8, 8, 9, 9, 10, 10, 11, 12, 12, 12, 12, 12];
    for (((name, g), k), n) in groups.iter().zip(expected).zip(orders) {
        assert_eq!(g.order(), n, "{name}");
        assert_eq!(oracle_classes(g).len(), k, "{name}");
    }
}

#[test]
fn inertia_sectors_are_conjugacy_classes() {
    for (name, g) in small_groups() {
        let gd = FiniteGroupoid::from_group(&g);
        let inertia = InertiaGroupoid::new(&gd);
        assert_eq!(inertia.groupoid.n_objects(), g.order(), "{name}");
        let comps: BTreeSet<BTreeSet<usize>> = inertia
            .groupoid
            .connected_components()
            .into_iter()
            .map(|c| c.into_iter().map(|o| inertia.sectors[o].1).collect())
            .collect();
        assert_eq!(comps, oracle_classes(&g), "{name}");
        let lib: BTreeSet<BTreeSet<usize>> = g.conjugacy_classes().into_iter().map(|c| c.into_iter().collect()).collect();
        assert_eq!(lib, oracle_classes(&g), "{name}");
    }
}

#[test]
fn inertia_functor_laws() {
    for (name, g) in small_groups() {
        let gd = FiniteGroupoid::from_group(&g);
        let inertia = InertiaGroupoid::new(&gd);
        let i = &inertia.groupoid;
        assert!(inertia.projection().validate(i, &gd).is_ok(), "{name}");
        for (b, a) in i.composable_pairs() {
            let (fb, _) = inertia.arrows[b];
            let (fa, _) = inertia.arrows[a];
            assert_eq!(inertia.arrows[i.compose(b, a)].0, gd.compose(fb, fa));
        }
        for f in 0..i.n_morphisms() {
            let (h, o) = inertia.arrows[f];
            let (x, loop_) = inertia.sectors[o];
            assert_eq!(inertia.sectors[i.tgt(f)], (gd.tgt(h), gd.conjugate(h, loop_)));
            assert_eq!(x, gd.src(h));
        }
    }
}

fn groupoid_strategy() -> impl Strategy<Value = FiniteGroupoid> {
    let groups = small_groups();
    (0..groups.len(), 1usize..4, 0usize..3).prop_map(move |(i, pts, kind)| {
        let g = &groups[i].1;
        match kind {
            0 => FiniteGroupoid::from_group(g),
            1 => FiniteGroupoid::pair_groupoid(pts).unwrap(),
            _ => {
                // Left multiplication of the group on itself.
                let action: Vec<Vec<usize>> = g.elements().map(|a| g.elements().map(|b| g.mul(a, b)).collect()).collect();
                FiniteGroupoid::action_groupoid(g, g.names().to_vec(), &action).unwrap()
            }
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inertia_commutes_with_disjoint_union(a in groupoid_strategy(), b in groupoid_strategy()) {
        let lhs = InertiaGroupoid::new(&a.disjoint_union(&b));
        let rhs = InertiaGroupoid::new(&a).groupoid.disjoint_union(&InertiaGroupoid::new(&b).groupoid);
        prop_assert_eq!(lhs.groupoid, rhs);
    }

    #[test]
    fn skeleton_inclusion_is_an_equivalence(a in groupoid_strategy(), b in groupoid_strategy()) {
        let g = a.disjoint_union(&b);
        let reps: Vec<usize> = g.connected_components().iter().map(|c| c[c.len() - 1]).collect();
        let (skeleton, incl) = g.full_subgroupoid(&reps);
        prop_assert!(incl.check_morita(&skeleton, &g).unwrap());
        prop_assert_eq!(skeleton.connected_components().len(), g.connected_components().len());
        // Fully faithful: restriction to each automorphism group is a bijective homomorphism.
        for x in 0..skeleton.n_objects() {
            let loops = skeleton.loops(x);
            let images: BTreeSet<usize> = loops.iter().map(|&f| incl.on_morphisms[f]).collect();
            prop_assert_eq!(images, g.loops(reps[x]).into_iter().collect::<BTreeSet<_>>());
            for &f in &loops {
                for &h in &loops {
                    prop_assert_eq!(incl.on_morphisms[skeleton.compose(f, h)], g.compose(incl.on_morphisms[f], incl.on_morphisms[h]));
                }
            }
        }
    }

    #[test]
    fn groupoid_laws(a in groupoid_strategy()) {
        for f in 0..a.n_morphisms() {
            prop_assert_eq!(a.compose(a.inverse(f), f), a.identity(a.src(f)));
            prop_assert_eq!(a.compose(f, a.identity(a.src(f))), f);
        }
        for (h, g, f) in a.composable_triples().take(5000) {
            prop_assert_eq!(a.compose(a.compose(h, g), f), a.compose(h, a.compose(g, f)));
        }
    }
}
