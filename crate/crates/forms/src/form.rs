use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::chart::Chart;
use crate::coeff::{self, Coeff};
use crate::poly::Poly;
use crate::FormError;

/// Constructors and `wedge` reject polynomial coefficients of higher total degree.
pub const DEGREE_CAP: u32 = 32;

/// Grassmann monomial `eta^odd` followed by the wedge monomial `dt^dt`, both as bit masks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Key {
    pub odd: u32,
    pub dt: u32,
}

impl Key {
    pub const ONE: Key = Key { odd: 0, dt: 0 };

    pub fn odd_degree(&self) -> u32 {
        self.odd.count_ones()
    }

    pub fn form_degree(&self) -> u32 {
        self.dt.count_ones()
    }

    /// Total Z/2 parity: number of odd generators mod 2.
    pub fn parity(&self) -> u32 {
        (self.odd.count_ones() + self.dt.count_ones()) % 2
    }
}

/// Parity of the number of pairs `(a, b)` with `a` in `x`, `b` in `y`, `a > b`.
fn inversions(x: u32, y: u32) -> u32 {
    let mut count = 0;
    let mut rest = y;
    while rest != 0 {
        let b = rest.trailing_zeros();
        count += x.checked_shr(b + 1).unwrap_or(0).count_ones();
        rest &= rest - 1;
    }
    count
}

/// Product of two canonical monomials as `(sign, key)`, or `None` if a generator repeats.
pub fn key_product(a: Key, b: Key) -> Option<(bool, Key)> {
    if a.odd & b.odd != 0 || a.dt & b.dt != 0 {
        return None;
    }
    // Move b's eta block past a's dt block, then merge each block.
    let swaps = a.dt.count_ones() * b.odd.count_ones() + inversions(a.odd, b.odd) + inversions(a.dt, b.dt);
    Some((swaps % 2 == 1, Key { odd: a.odd | b.odd, dt: a.dt | b.dt }))
}

/// Element of `Poly[t] (x) Lambda[eta] (x) Lambda[dt]` over one chart.
#[derive(Clone, Debug)]
pub struct GradedForm {
    chart: Arc<Chart>,
    terms: BTreeMap<Key, Poly>,
}

impl PartialEq for GradedForm {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.chart, &other.chart) || self.chart == other.chart) && self.terms == other.terms
    }
}

impl Eq for GradedForm {}

impl PartialOrd for GradedForm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GradedForm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.chart.cmp(&other.chart).then_with(|| self.terms.iter().cmp(other.terms.iter()))
    }
}

impl GradedForm {
    pub fn zero(chart: &Arc<Chart>) -> Self {
        GradedForm { chart: chart.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(chart: &Arc<Chart>, c: Coeff) -> Self {
        Self::from_poly(chart, Poly::constant(chart.n_even(), c))
    }

    pub fn one(chart: &Arc<Chart>) -> Self {
        Self::constant(chart, coeff::int(1))
    }

    /// The coordinate function `t_i`.
    pub fn var(chart: &Arc<Chart>, i: usize) -> Self {
        Self::from_poly(chart, Poly::var(chart.n_even(), i))
    }

    /// The one-form `dt_i`.
    pub fn dvar(chart: &Arc<Chart>, i: usize) -> Self {
        Self::monomial(chart, Key { odd: 0, dt: 1 << i }, Poly::one(chart.n_even()))
    }

    /// The Grassmann generator `eta_j`.
    pub fn odd(chart: &Arc<Chart>, j: usize) -> Self {
        Self::monomial(chart, Key { odd: 1 << j, dt: 0 }, Poly::one(chart.n_even()))
    }

    pub fn from_poly(chart: &Arc<Chart>, p: Poly) -> Self {
        Self::monomial(chart, Key::ONE, p)
    }

    pub fn monomial(chart: &Arc<Chart>, key: Key, p: Poly) -> Self {
        let mut f = Self::zero(chart);
        f.add_poly(key, &p);
        f
    }

    /// Builds a form from raw terms, enforcing the degree cap.
    pub fn from_terms(chart: &Arc<Chart>, terms: impl IntoIterator<Item = (Key, Poly)>) -> Result<Self, FormError> {
        let mut f = Self::zero(chart);
        for (k, p) in terms {
            let fits = |mask: u32, n: usize| n >= 32 || mask >> n == 0;
            if p.nvars() != chart.n_even() || !fits(k.odd, chart.n_odd()) || !fits(k.dt, chart.n_even()) {
                return Err(FormError::Arity { expected: chart.n_even(), found: p.nvars() });
            }
            f.add_poly(k, &p);
        }
        f.check_cap()?;
        Ok(f)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &Poly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.values().map(Poly::len).sum()
    }

    pub fn component(&self, key: Key) -> Poly {
        self.terms.get(&key).cloned().unwrap_or_else(|| Poly::zero(self.chart.n_even()))
    }

    /// Coefficient of `1` (no generators, constant polynomial).
    pub fn constant_term(&self) -> Coeff {
        self.terms.get(&Key::ONE).map(Poly::constant_term).unwrap_or_else(Coeff::zero)
    }

    /// Largest total polynomial degree among the coefficients.
    pub fn poly_degree(&self) -> u32 {
        self.terms.values().filter_map(Poly::degree).max().unwrap_or(0)
    }

    pub fn check_cap(&self) -> Result<(), FormError> {
        let d = self.poly_degree();
        if d > DEGREE_CAP {
            return Err(FormError::DegreeCap { degree: d });
        }
        Ok(())
    }

    pub(crate) fn add_poly(&mut self, key: Key, p: &Poly) {
        if p.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(|| Poly::zero(p.nvars()));
        *slot = &*slot + p;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn same_chart(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.chart, &other.chart) || self.chart == other.chart
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = Self::zero(&self.chart);
        for (k, p) in &self.terms {
            out.add_poly(*k, &p.scale(c));
        }
        out
    }

    /// Multiplies every coefficient polynomial by an even polynomial.
    pub fn scale_poly(&self, q: &Poly) -> Self {
        let mut out = Self::zero(&self.chart);
        for (k, p) in &self.terms {
            out.add_poly(*k, &(p * q));
        }
        out
    }

    /// Terms whose key satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(Key) -> bool) -> Self {
        GradedForm {
            chart: self.chart.clone(),
            terms: self.terms.iter().filter(|(k, _)| keep(**k)).map(|(k, p)| (*k, p.clone())).collect(),
        }
    }

    /// `(even part, odd part)`.
    pub fn split_parity(&self) -> (Self, Self) {
        (self.filter(|k| k.parity() == 0), self.filter(|k| k.parity() == 1))
    }

    /// `Some(parity)` when every term has the same parity; zero counts as even.
    pub fn parity(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Key::parity);
        match it.next() {
            None => Some(0),
            Some(p) => it.all(|q| q == p).then_some(p),
        }
    }

    /// Degree-`n` part in the dt generators.
    pub fn form_degree_part(&self, n: u32) -> Self {
        self.filter(|k| k.form_degree() == n)
    }

    /// `Some(n)` when every term has form degree `n`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Key::form_degree);
        match it.next() {
            None => Some(0),
            Some(d) => it.all(|e| e == d).then_some(d),
        }
    }

    /// True when no term is free of both eta and dt generators.
    pub fn is_nilpotent(&self) -> bool {
        !self.terms.contains_key(&Key::ONE)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        assert!(self.same_chart(other), "chart mismatch in product");
        let mut out = Self::zero(&self.chart);
        for (ka, pa) in &self.terms {
            for (kb, pb) in &other.terms {
                if let Some((neg, k)) = key_product(*ka, *kb) {
                    let prod = pa * pb;
                    out.add_poly(k, &if neg { -&prod } else { prod });
                }
            }
        }
        out
    }

    /// Graded product with Koszul signs.
    pub fn wedge(&self, other: &Self) -> Result<Self, FormError> {
        if !self.same_chart(other) {
            return Err(FormError::ChartMismatch);
        }
        if self.poly_degree() + other.poly_degree() > DEGREE_CAP {
            let out = self.mul_unchecked(other);
            out.check_cap()?;
            return Ok(out);
        }
        Ok(self.mul_unchecked(other))
    }

    /// `a^k` by repeated products.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.chart);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exterior derivative; the eta are constants and `d` is an odd left derivation.
    pub fn exterior_d(&self) -> Self {
        let n = self.chart.n_even();
        let mut out = Self::zero(&self.chart);
        for (k, p) in &self.terms {
            // d(m p) = (-1)^{|m|} m dp for a constant monomial m.
            let outer_neg = k.parity() == 1;
            for i in 0..n {
                let dp = p.derivative(i);
                if dp.is_zero() {
                    continue;
                }
                if let Some((neg, key)) = key_product(*k, Key { odd: 0, dt: 1 << i }) {
                    out.add_poly(key, &if neg != outer_neg { -&dp } else { dp });
                }
            }
        }
        out
    }

    /// Partial derivative of the coefficients in `t_i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.chart);
        for (k, p) in &self.terms {
            out.add_poly(*k, &p.derivative(i));
        }
        out
    }

    /// Left derivative with respect to `eta_j`.
    pub fn odd_derivative(&self, j: usize) -> Self {
        let bit = 1u32 << j;
        let mut out = Self::zero(&self.chart);
        for (k, p) in &self.terms {
            if k.odd & bit == 0 {
                continue;
            }
            let before = (k.odd & (bit - 1)).count_ones();
            let key = Key { odd: k.odd & !bit, dt: k.dt };
            out.add_poly(key, &if before % 2 == 1 { -p } else { p.clone() });
        }
        out
    }

    /// Algebra homomorphism into `target`: `t_i -> even[i]`, `eta_j -> odd[j]`, `dt_i -> d(even[i])`.
    ///
    /// The images of `t_i` must be even; the images of `eta_j` must be odd.
    pub fn substitute(&self, target: &Arc<Chart>, even: &[GradedForm], odd: &[GradedForm]) -> Result<Self, FormError> {
        if even.len() != self.chart.n_even() {
            return Err(FormError::Arity { expected: self.chart.n_even(), found: even.len() });
        }
        if odd.len() != self.chart.n_odd() {
            return Err(FormError::Arity { expected: self.chart.n_odd(), found: odd.len() });
        }
        if even.iter().chain(odd).any(|f| f.chart.as_ref() != target.as_ref()) {
            return Err(FormError::ChartMismatch);
        }
        let d_images: Vec<GradedForm> = even.iter().map(GradedForm::exterior_d).collect();
        let mut powers: Vec<Vec<GradedForm>> = even.iter().map(|_| vec![GradedForm::one(target)]).collect();
        let mut out = Self::zero(target);
        for (k, p) in &self.terms {
            let mut head = GradedForm::one(target);
            for j in bits(k.odd) {
                head = &head * &odd[j];
            }
            for i in bits(k.dt) {
                head = &head * &d_images[i];
            }
            let mut value = Self::zero(target);
            for (exps, c) in p.terms() {
                let mut m = GradedForm::constant(target, c.clone());
                for (i, &e) in exps.iter().enumerate() {
                    while powers[i].len() <= e as usize {
                        let next = powers[i].last().expect("nonempty") * &even[i];
                        powers[i].push(next);
                    }
                    if e > 0 {
                        m = &m * &powers[i][e as usize];
                    }
                }
                value = &value + &m;
            }
            out = &out + &(&head * &value);
        }
        out.check_cap()?;
        Ok(out)
    }

    /// Pullback along a polynomial map of even coordinates; eta pass through.
    pub fn pullback(&self, map: &PolyMap) -> Result<Self, FormError> {
        if map.target.as_ref() != self.chart.as_ref() {
            return Err(FormError::ChartMismatch);
        }
        if map.images.len() != self.chart.n_even() {
            return Err(FormError::Arity { expected: self.chart.n_even(), found: map.images.len() });
        }
        if map.source.n_odd() != self.chart.n_odd() {
            return Err(FormError::Arity { expected: self.chart.n_odd(), found: map.source.n_odd() });
        }
        let even: Vec<GradedForm> = map.images.iter().map(|p| GradedForm::from_poly(&map.source, p.clone())).collect();
        let odd: Vec<GradedForm> = (0..map.source.n_odd()).map(|j| GradedForm::odd(&map.source, j)).collect();
        self.substitute(&map.source, &even, &odd)
    }

    /// Interior product with `v`, an odd derivation lowering form degree by one.
    pub fn contract(&self, v: &VectorField) -> Result<Self, FormError> {
        if v.coeffs.len() != self.chart.n_even() {
            return Err(FormError::Arity { expected: self.chart.n_even(), found: v.coeffs.len() });
        }
        if v.coeffs.iter().any(|c| !c.same_chart(self)) {
            return Err(FormError::ChartMismatch);
        }
        let mut out = Self::zero(&self.chart);
        for (k, p) in &self.terms {
            let dts: Vec<usize> = bits(k.dt).collect();
            let eta = GradedForm::monomial(&self.chart, Key { odd: k.odd, dt: 0 }, Poly::one(self.chart.n_even()));
            let tail = GradedForm::from_poly(&self.chart, p.clone());
            for (r, &j) in dts.iter().enumerate() {
                let mut term = eta.clone();
                for &i in &dts[..r] {
                    term = &term * &GradedForm::dvar(&self.chart, i);
                }
                term = &term * &v.coeffs[j];
                for &i in &dts[r + 1..] {
                    term = &term * &GradedForm::dvar(&self.chart, i);
                }
                term = &term * &tail;
                if (k.odd_degree() as usize + r) % 2 == 1 {
                    term = -&term;
                }
                out = &out + &term;
            }
        }
        Ok(out)
    }

    /// Integrates over `[0,1]` in the last even coordinate.
    ///
    /// Terms without its differential are dropped; the differential is read off at the
    /// right end of the monomial, which is where the canonical order already puts it.
    pub fn integrate_fiber(&self) -> Result<Self, FormError> {
        let n = self.chart.n_even();
        if n == 0 {
            return Err(FormError::Arity { expected: 1, found: 0 });
        }
        let f = n - 1;
        let names: Vec<&String> = self.chart.even_names()[..f].iter().collect();
        let base = Chart::new(&names, &self.chart.odd_names().iter().collect::<Vec<_>>())?;
        let mut out = Self::zero(&base);
        for (k, p) in &self.terms {
            if k.dt & (1 << f) == 0 {
                continue;
            }
            let key = Key { odd: k.odd, dt: k.dt & !(1 << f) };
            out.add_poly(key, &p.integrate_unit(f).drop_var(f));
        }
        Ok(out)
    }

    /// Restricts the last even coordinate to the constant `value`, dropping it from the chart.
    pub fn restrict_fiber(&self, value: &Coeff) -> Result<Self, FormError> {
        let n = self.chart.n_even();
        if n == 0 {
            return Err(FormError::Arity { expected: 1, found: 0 });
        }
        let names: Vec<&String> = self.chart.even_names()[..n - 1].iter().collect();
        let base = Chart::new(&names, &self.chart.odd_names().iter().collect::<Vec<_>>())?;
        let mut even: Vec<GradedForm> = (0..n - 1).map(|i| GradedForm::var(&base, i)).collect();
        even.push(GradedForm::constant(&base, value.clone()));
        let odd: Vec<GradedForm> = (0..base.n_odd()).map(|j| GradedForm::odd(&base, j)).collect();
        self.substitute(&base, &even, &odd)
    }

    /// Same form viewed on `target`, whose first coordinates and parameters extend this chart.
    pub fn extend_to(&self, target: &Arc<Chart>) -> Result<Self, FormError> {
        if target.n_even() < self.chart.n_even()
            || target.n_odd() < self.chart.n_odd()
            || target.even_names()[..self.chart.n_even()] != *self.chart.even_names()
            || target.odd_names()[..self.chart.n_odd()] != *self.chart.odd_names()
        {
            return Err(FormError::ChartMismatch);
        }
        let even: Vec<GradedForm> = (0..self.chart.n_even()).map(|i| GradedForm::var(target, i)).collect();
        let odd: Vec<GradedForm> = (0..self.chart.n_odd()).map(|j| GradedForm::odd(target, j)).collect();
        self.substitute(target, &even, &odd)
    }
}

pub(crate) fn bits(mask: u32) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(b)
        }
    })
}

/// Polynomial map `source -> target`, given by the images of the target coordinates.
#[derive(Clone, Debug)]
pub struct PolyMap {
    pub source: Arc<Chart>,
    pub target: Arc<Chart>,
    pub images: Vec<Poly>,
}

/// Vector field `sum_i v_i d/dt_i`; coefficients may be any forms on the chart.
#[derive(Clone, Debug)]
pub struct VectorField {
    pub coeffs: Vec<GradedForm>,
}

impl VectorField {
    /// `d/dt_i`.
    pub fn coordinate(chart: &Arc<Chart>, i: usize) -> Self {
        let coeffs = (0..chart.n_even())
            .map(|j| if i == j { GradedForm::one(chart) } else { GradedForm::zero(chart) })
            .collect();
        VectorField { coeffs }
    }
}

impl<'a> Add<&'a GradedForm> for &'a GradedForm {
    type Output = GradedForm;
    fn add(self, rhs: &GradedForm) -> GradedForm {
        assert!(self.same_chart(rhs), "chart mismatch in sum");
        let mut out = self.clone();
        for (k, p) in &rhs.terms {
            out.add_poly(*k, p);
        }
        out
    }
}

impl<'a> Sub<&'a GradedForm> for &'a GradedForm {
    type Output = GradedForm;
    fn sub(self, rhs: &GradedForm) -> GradedForm {
        self + &(-rhs)
    }
}

impl Neg for &GradedForm {
    type Output = GradedForm;
    fn neg(self) -> GradedForm {
        self.scale(&-Coeff::one())
    }
}

/// Panics on chart mismatch; use [`GradedForm::wedge`] for checked products.
impl<'a> Mul<&'a GradedForm> for &'a GradedForm {
    type Output = GradedForm;
    fn mul(self, rhs: &GradedForm) -> GradedForm {
        self.mul_unchecked(rhs)
    }
}

impl fmt::Display for GradedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, p) in &self.terms {
            for (exps, c) in p.terms() {
                let mut factors: Vec<String> = Vec::new();
                factors.extend(bits(k.odd).map(|j| self.chart.odd_names()[j].clone()));
                factors.extend(bits(k.dt).map(|i| format!("d{}", self.chart.even_names()[i])));
                for (i, &e) in exps.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => factors.push(self.chart.even_names()[i].clone()),
                        _ => factors.push(format!("{}^{}", self.chart.even_names()[i], e)),
                    }
                }
                let neg = coeff::is_negative(c);
                let mag = if neg { -c.clone() } else { c.clone() };
                let body = if factors.is_empty() {
                    coeff::render(&mag)
                } else if mag.is_one() {
                    factors.join("*")
                } else {
                    format!("{}*{}", coeff::render(&mag), factors.join("*"))
                };
                match (first, neg) {
                    (true, false) => write!(f, "{body}")?,
                    (true, true) => write!(f, "-{body}")?,
                    (false, false) => write!(f, " + {body}")?,
                    (false, true) => write!(f, " - {body}")?,
                }
                first = false;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
