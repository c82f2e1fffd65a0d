//! Seeded valid cocycles for tests and self checks.

use std::sync::Arc;

use rand::Rng;

use forms::{random, Chart, GradedForm, Phase};
use groupoid::{FiniteGroupoid, Group};

use crate::cocycle::{Coboundary, DeligneCocycle};
use crate::h2::{u1_classes, PhaseTable};
use crate::lift::ExpLift;

/// Random phase with denominator dividing `den`.
pub fn phase<R: Rng>(rng: &mut R, den: i64) -> Phase {
    Phase::from_ratio(rng.gen_range(0..den), den)
}

/// Random normalized phase per morphism.
pub fn phases<R: Rng>(rng: &mut R, gd: &FiniteGroupoid, den: i64) -> Vec<Phase> {
    (0..gd.n_morphisms()).map(|f| if gd.is_identity(f) { Phase::zero() } else { phase(rng, den) }).collect()
}

/// Random class of `H^2(G; U(1))` plus a random coboundary, as a table.
pub fn group_cocycle<R: Rng>(rng: &mut R, group: &Group) -> PhaseTable {
    let classes = u1_classes(group);
    let coeffs: Vec<i64> = classes.divisors.iter().map(|&d| rng.gen_range(0..d as i64)).collect();
    let mut table = classes.cocycle(&coeffs).expect("matching length");
    if table.is_empty() {
        table = vec![vec![Phase::zero(); group.order()]; group.order()];
    }
    let den = 2 * group.order() as i64;
    let lambda: Vec<Phase> = group.elements().map(|a| if a == group.identity() { Phase::zero() } else { phase(rng, den) }).collect();
    for a in group.elements() {
        for b in group.elements() {
            table[a][b] = &(&(&table[a][b] + &lambda[a]) + &lambda[b]) - &lambda[group.mul(a, b)];
        }
    }
    table
}

/// Discrete cocycle on the one-object groupoid of `group`.
pub fn group_discrete<R: Rng>(rng: &mut R, group: &Group) -> DeligneCocycle {
    let table = group_cocycle(rng, group);
    DeligneCocycle::discrete(FiniteGroupoid::from_group(group), |g, f| table[g][f].clone())
}

/// Smooth cocycle: `base` with `B = B0` everywhere, then a random coboundary with polynomial
/// exponents and 1-forms.
pub fn smooth<R: Rng>(rng: &mut R, base: &DeligneCocycle, chart: &Arc<Chart>) -> DeligneCocycle {
    let gd = base.groupoid().clone();
    let h = base.h_values().iter().map(|x| ExpLift::phase(chart, x.q.clone())).collect();
    let a = vec![GradedForm::zero(chart); gd.n_morphisms()];
    let b0 = random::homogeneous(rng, chart, 2, 0, 2, 2);
    let b = vec![b0; gd.n_objects()];
    let c = DeligneCocycle::smooth(gd.clone(), chart.clone(), h, a, b).expect("well formed");
    let lambda = (0..gd.n_morphisms())
        .map(|f| {
            if gd.is_identity(f) {
                ExpLift::one(chart)
            } else {
                ExpLift { q: phase(rng, 4), p: random::function(rng, chart, 2, 2) }
            }
        })
        .collect();
    let pi = (0..gd.n_objects()).map(|_| random::homogeneous(rng, chart, 1, 1, 2, 2)).collect();
    c.apply_coboundary(&Coboundary { lambda, pi }).expect("normalized coboundary")
}
