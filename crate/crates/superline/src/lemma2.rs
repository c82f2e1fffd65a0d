//! A small bigraded calculus on `Pi T X x R^{0|1}` for the contraction identity
//! `<(d/dtheta)^n, ev^* omega> = +- n! (omega~ + theta (d omega)~)`.
//!
//! Generators carry a bidegree `(form degree, parity)` and commute up to
//! `(-1)^{deg deg' + par par'}`. Coordinates `x_i` are functions on `X`, `xi_i` the fiber
//! coordinates of `Pi T X`, `theta` the coordinate of `R^{0|1}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use forms::coeff::{self, Coeff};
use forms::{Chart, GradedForm, Key, Poly};
use num_traits::{One, Zero};

use crate::SuperError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Gen {
    X(usize),
    Theta,
    Xi(usize),
    Dx(usize),
    Dxi(usize),
    Dtheta,
}

impl Gen {
    fn bidegree(self) -> (u32, u32) {
        match self {
            Gen::X(_) => (0, 0),
            Gen::Theta | Gen::Xi(_) => (0, 1),
            Gen::Dx(_) => (1, 0),
            Gen::Dxi(_) | Gen::Dtheta => (1, 1),
        }
    }

    /// Squares to zero.
    fn exterior(self) -> bool {
        let (d, p) = self.bidegree();
        (d + p) % 2 == 1
    }

    fn differential(self) -> Option<Gen> {
        match self {
            Gen::X(i) => Some(Gen::Dx(i)),
            Gen::Xi(i) => Some(Gen::Dxi(i)),
            Gen::Theta => Some(Gen::Dtheta),
            _ => None,
        }
    }
}

fn swap_sign(a: Gen, b: Gen) -> bool {
    let ((da, pa), (db, pb)) = (a.bidegree(), b.bidegree());
    (da * db + pa * pb) % 2 == 1
}

/// Sorts a word of generators into canonical order; `None` if an exterior generator repeats.
fn normalize(mut word: Vec<Gen>) -> Option<(bool, Vec<Gen>)> {
    let mut neg = false;
    for i in 1..word.len() {
        let mut j = i;
        while j > 0 && word[j - 1] > word[j] {
            neg ^= swap_sign(word[j - 1], word[j]);
            word.swap(j - 1, j);
            j -= 1;
        }
    }
    if word.windows(2).any(|w| w[0] == w[1] && w[0].exterior()) {
        return None;
    }
    Some((neg, word))
}

/// Element of the bigraded algebra, as canonical words with coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PiTxForm {
    terms: BTreeMap<Vec<Gen>, Coeff>,
}

impl PiTxForm {
    fn add_term(&mut self, word: Vec<Gen>, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(word.clone()).or_insert_with(Coeff::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&word);
        }
    }

    fn word(word: Vec<Gen>, c: Coeff) -> Self {
        let mut out = Self::default();
        if let Some((neg, w)) = normalize(word) {
            out.add_term(w, if neg { -c } else { c });
        }
        out
    }

    fn gen(g: Gen) -> Self {
        Self::word(vec![g], Coeff::one())
    }

    fn constant(c: Coeff) -> Self {
        Self::word(vec![], c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let word: Vec<Gen> = wa.iter().chain(wb).copied().collect();
                if let Some((neg, w)) = normalize(word) {
                    let c = ca * cb;
                    out.add_term(w, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// Exterior derivative, of bidegree `(1, 0)`.
    fn d(&self) -> Self {
        let mut out = Self::default();
        for (w, c) in &self.terms {
            let mut neg = false;
            for (k, g) in w.iter().enumerate() {
                if let Some(dg) = g.differential() {
                    let mut word = w.clone();
                    word[k] = dg;
                    let term = Self::word(word, if neg { -c.clone() } else { c.clone() });
                    out = out.add(&term);
                }
                neg ^= g.bidegree().0 % 2 == 1;
            }
        }
        out
    }

    /// Contraction with `d/dtheta`, sending `dtheta` to 1.
    fn contract_theta(&self) -> Self {
        let mut out = Self::default();
        for (w, c) in &self.terms {
            let mut neg = false;
            for (k, g) in w.iter().enumerate() {
                if *g == Gen::Dtheta {
                    let mut word = w.clone();
                    word.remove(k);
                    out = out.add(&Self::word(word, if neg { -c.clone() } else { c.clone() }));
                }
                let (d, p) = g.bidegree();
                neg ^= (d + p) % 2 == 1;
            }
        }
        out
    }

    /// Reads a function of `x`, `theta`, `xi` as a form on `chart = (x; theta, xi..)`.
    fn to_function(&self, chart: &Arc<Chart>) -> Option<GradedForm> {
        let n = chart.n_even();
        let mut out = GradedForm::zero(chart);
        for (w, c) in &self.terms {
            let mut exps = vec![0u32; n];
            let mut odd = 0u32;
            for g in w {
                match *g {
                    Gen::X(i) => exps[i] += 1,
                    Gen::Theta => odd |= 1,
                    Gen::Xi(i) => odd |= 1 << (i + 1),
                    _ => return None,
                }
            }
            out = &out + &GradedForm::monomial(chart, Key { odd, dt: 0 }, Poly::monomial(exps, c.clone()));
        }
        Some(out)
    }
}

/// `(-1)^{n(n-1)/2}`: `-1` exactly when `n = 2, 3 mod 4`.
pub fn lemma2_sign(n: u32) -> i64 {
    if n % 4 >= 2 {
        -1
    } else {
        1
    }
}

/// `ev^* omega`, with `x_i -> x_i + theta xi_i` and `dx_i` mapped to its differential.
fn ev_pullback(omega: &GradedForm) -> PiTxForm {
    let n = omega.chart().n_even();
    let images: Vec<PiTxForm> =
        (0..n).map(|i| PiTxForm::gen(Gen::X(i)).add(&PiTxForm::gen(Gen::Theta).mul(&PiTxForm::gen(Gen::Xi(i))))).collect();
    let d_images: Vec<PiTxForm> = images.iter().map(PiTxForm::d).collect();
    let mut out = PiTxForm::default();
    for (key, p) in omega.terms() {
        let mut f0 = PiTxForm::default();
        for (exps, c) in p.terms() {
            let mut m = PiTxForm::constant(c.clone());
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    m = m.mul(&images[i]);
                }
            }
            f0 = f0.add(&m);
        }
        for i in (0..n).filter(|i| key.dt & (1 << i) != 0) {
            f0 = f0.mul(&d_images[i]);
        }
        out = out.add(&f0);
    }
    out
}

/// `omega~` with `dt_i -> xi_i`, placed after the parameter `theta`.
fn tilde(omega: &GradedForm, chart: &Arc<Chart>) -> GradedForm {
    let mut out = GradedForm::zero(chart);
    for (key, p) in omega.terms() {
        out = &out + &GradedForm::monomial(chart, Key { odd: key.dt << 1, dt: 0 }, p.clone());
    }
    out
}

/// Both sides of the contraction identity for a homogeneous `n`-form on an ordinary chart.
///
/// The sides are functions on `Pi T X x R^{0|1}`, returned as forms on the chart with the
/// same even coordinates and odd parameters `theta, xi_<x1>, ..`.
pub fn lemma2_check(omega: &GradedForm) -> Result<(GradedForm, GradedForm), SuperError> {
    let chart = omega.chart();
    let n = omega.homogeneous_degree().ok_or(SuperError::NotHomogeneous(0))?;
    if chart.n_odd() != 0 {
        return Err(SuperError::NotHomogeneous(n));
    }
    let mut odd = vec!["theta".to_string()];
    odd.extend(chart.even_names().iter().map(|x| format!("xi_{x}")));
    let target = Chart::new(chart.even_names(), &odd)?;

    let mut lhs = ev_pullback(omega);
    for _ in 0..n {
        lhs = lhs.contract_theta();
    }
    let lhs = lhs.to_function(&target).expect("all differentials are contracted away");

    let theta = GradedForm::odd(&target, 0);
    let inner = &tilde(omega, &target) + &(&theta * &tilde(&omega.exterior_d(), &target));
    let factor = coeff::real(coeff::Rat::from_integer(coeff::factorial(n))) * coeff::int(lemma2_sign(n));
    Ok((lhs, inner.scale(&factor)))
}
