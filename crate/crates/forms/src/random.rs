//! Seeded generators for test fixtures.

use std::sync::Arc;

use rand::Rng;

use crate::chart::Chart;
use crate::coeff::{self, Coeff};
use crate::form::{GradedForm, Key};
use crate::poly::Poly;

/// Small Gaussian rational with numerators in `-3..=3` and denominators in `1..=3`.
pub fn coeff<R: Rng>(rng: &mut R, complex: bool) -> Coeff {
    let re = coeff::rat(rng.gen_range(-3..=3), rng.gen_range(1..=3));
    let im = if complex { coeff::rat(rng.gen_range(-3..=3), rng.gen_range(1..=3)) } else { coeff::rat(0, 1) };
    Coeff::new(re, im)
}

/// Polynomial with up to `terms` monomials of total degree at most `max_deg`.
pub fn poly<R: Rng>(rng: &mut R, nvars: usize, max_deg: u32, terms: usize, complex: bool) -> Poly {
    let mut p = Poly::zero(nvars);
    for _ in 0..terms {
        let mut exps = vec![0u32; nvars];
        if nvars > 0 {
            let deg = rng.gen_range(0..=max_deg);
            for _ in 0..deg {
                exps[rng.gen_range(0..nvars)] += 1;
            }
        }
        p.add_term(exps, coeff(rng, complex));
    }
    p
}

/// Random mask of `n` bits with exactly `weight` bits set.
pub fn mask<R: Rng>(rng: &mut R, n: usize, weight: usize) -> u32 {
    let mut idx: Vec<usize> = (0..n).collect();
    let mut m = 0u32;
    for k in 0..weight.min(n) {
        let pick = rng.gen_range(k..n);
        idx.swap(k, pick);
        m |= 1 << idx[k];
    }
    m
}

/// Random form with up to `terms` terms, polynomial degree at most `max_deg`.
pub fn form<R: Rng>(rng: &mut R, chart: &Arc<Chart>, max_deg: u32, terms: usize) -> GradedForm {
    let (n, k) = (chart.n_even(), chart.n_odd());
    let mut f = GradedForm::zero(chart);
    for _ in 0..terms {
        let (wo, wd) = (rng.gen_range(0..=k), rng.gen_range(0..=n));
        let key = Key { odd: mask(rng, k, wo), dt: mask(rng, n, wd) };
        let p = poly(rng, n, max_deg, 2, true);
        f = &f + &GradedForm::monomial(chart, key, p);
    }
    f
}

/// Random form of fixed form degree and parity.
pub fn homogeneous<R: Rng>(rng: &mut R, chart: &Arc<Chart>, degree: usize, parity: u32, max_deg: u32, terms: usize) -> GradedForm {
    let (n, k) = (chart.n_even(), chart.n_odd());
    let mut f = GradedForm::zero(chart);
    for _ in 0..terms {
        let dt = mask(rng, n, degree);
        // Pick an odd weight with the requested total parity.
        let choices: Vec<usize> = (0..=k).filter(|w| (w + degree) as u32 % 2 == parity).collect();
        if choices.is_empty() {
            continue;
        }
        let w = choices[rng.gen_range(0..choices.len())];
        let key = Key { odd: mask(rng, k, w), dt };
        if key.form_degree() as usize != degree {
            continue;
        }
        f = &f + &GradedForm::monomial(chart, key, poly(rng, n, max_deg, 2, true));
    }
    f
}

/// Random real polynomial function (no generators).
pub fn function<R: Rng>(rng: &mut R, chart: &Arc<Chart>, max_deg: u32, terms: usize) -> GradedForm {
    GradedForm::from_poly(chart, poly(rng, chart.n_even(), max_deg, terms, false))
}
