//! Sparse polynomials with Gaussian-rational coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::coeff::{self, Coeff};

/// Exponent vector; its length is the number of variables.
pub type Exps = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exps, Coeff>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Coeff) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, coeff::int(1))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::monomial(e, coeff::int(1))
    }

    pub fn monomial(exps: Exps, c: Coeff) -> Self {
        let mut p = Poly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Coeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c * x^exps`, dropping the entry if it cancels.
    pub fn add_term(&mut self, exps: Exps, c: Coeff) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> Coeff {
        self.terms.get(exps).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Coeff {
        self.coeff(&vec![0; self.nvars])
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        let mut out = Poly::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, v) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, v * coeff::int(e[i] as i64));
            }
        }
        out
    }

    /// Antiderivative in variable `i` vanishing on `x_i = 0`.
    pub fn antiderivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, v) in &self.terms {
            let mut e2 = e.clone();
            e2[i] += 1;
            out.add_term(e2, v * coeff::frac(1, e[i] as i64 + 1));
        }
        out
    }

    /// Integral over `x_i` in `[0,1]`; the result no longer depends on `x_i` but keeps the slot.
    pub fn integrate_unit(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, v) in &self.terms {
            let mut e2 = e.clone();
            e2[i] = 0;
            out.add_term(e2, v * coeff::frac(1, e[i] as i64 + 1));
        }
        out
    }

    /// Removes variable `i`; it must not occur.
    pub fn drop_var(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars - 1);
        for (e, v) in &self.terms {
            debug_assert_eq!(e[i], 0);
            let mut e2 = e.clone();
            e2.remove(i);
            out.add_term(e2, v.clone());
        }
        out
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Coeff]) -> Coeff {
        let mut acc = Coeff::zero();
        for (e, v) in &self.terms {
            let mut m = v.clone();
            for (x, k) in point.iter().zip(e) {
                for _ in 0..*k {
                    m *= x;
                }
            }
            acc += m;
        }
        acc
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(e.clone(), v.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(e.clone(), -v.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), -v.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e1, v1) in &self.terms {
            for (e2, v2) in &rhs.terms {
                let e: Exps = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, v1 * v2);
            }
        }
        out
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

// Structural order so that polynomials can key sorted containers.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |p: &Poly| {
            p.terms
                .iter()
                .map(|(e, c)| (e.clone(), c.re.clone(), c.im.clone()))
                .collect::<Vec<_>>()
        };
        self.nvars.cmp(&other.nvars).then_with(|| key(self).cmp(&key(other)))
    }
}
