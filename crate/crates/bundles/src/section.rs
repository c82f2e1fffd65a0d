use std::sync::Arc;

use deligne::TransgressedLine;
use forms::{coeff, Chart, GradedForm};
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{BundleError, TOL};

/// Name of the interval coordinate added by [`concordance_witness`].
pub const CONCORDANCE_VAR: &str = "u";

/// A form per inertia object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InertiaSection {
    pub values: Vec<GradedForm>,
}

impl InertiaSection {
    pub fn zero(line: &TransgressedLine) -> Self {
        InertiaSection { values: line.nabla.iter().map(|a| GradedForm::zero(a.chart())).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        InertiaSection { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        InertiaSection { values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect() }
    }
}

fn check(line: &TransgressedLine, s: &InertiaSection) -> Result<(), BundleError> {
    if s.values.len() != line.nabla.len() {
        return Err(BundleError::Length { what: "sector values", expected: line.nabla.len(), found: s.values.len() });
    }
    if s.values.iter().zip(&line.nabla).any(|(v, a)| v.chart() != a.chart()) {
        return Err(forms::FormError::ChartMismatch.into());
    }
    Ok(())
}

fn apply(a: &GradedForm, omega: &GradedForm, s: &GradedForm) -> GradedForm {
    &(&s.exterior_d() + &(a * s)) + &(omega * s)
}

/// `s -> ds + A s + Omega s` on every sector.
pub fn twisted_differential(line: &TransgressedLine, s: &InertiaSection) -> Result<InertiaSection, BundleError> {
    check(line, s)?;
    let values = s
        .values
        .iter()
        .enumerate()
        .map(|(o, v)| apply(&line.nabla[o], &line.omega3[o], v))
        .collect();
    Ok(InertiaSection { values })
}

pub fn is_closed(line: &TransgressedLine, s: &InertiaSection) -> Result<bool, BundleError> {
    Ok(twisted_differential(line, s)?.values.iter().all(GradedForm::is_zero))
}

/// Basis of sections `tau` with `tau(t f) = exp(2 pi i H(f)) tau(s f)`, as vectors over the
/// sectors.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatBasis {
    pub vectors: Vec<Vec<Complex64>>,
}

impl FlatBasis {
    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    /// Whether `v` lies in the span, by a rank test.
    pub fn contains(&self, v: &[Complex64]) -> bool {
        let n = v.len();
        let mut cols: Vec<Vec<Complex64>> = self.vectors.clone();
        let before = rank(&cols, n);
        cols.push(v.to_vec());
        rank(&cols, n) == before
    }
}

/// Numerical rank of a set of column vectors of length `n`.
pub fn rank(cols: &[Vec<Complex64>], n: usize) -> usize {
    if cols.is_empty() || n == 0 {
        return 0;
    }
    let m = DMatrix::from_fn(n, cols.len(), |i, j| cols[j][i]);
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    m.svd(false, false).singular_values.iter().filter(|&&s| s > TOL * scale).count()
}

pub fn flat_sections(line: &TransgressedLine) -> FlatBasis {
    let n = line.inertia.groupoid.n_objects();
    let vectors = line
        .flat_sections()
        .into_iter()
        .map(|s| {
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            for (o, x) in s.component.iter().zip(&s.values) {
                v[*o] = x.q.to_complex();
            }
            v
        })
        .collect();
    FlatBasis { vectors }
}

/// `omega = omega0 + D(u alpha)` on the chart extended by the interval coordinate `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Concordance {
    pub chart: Arc<Chart>,
    pub witness: InertiaSection,
    /// `omega` at `u = 0` equals `omega0`.
    pub starts_at_omega0: bool,
    /// `omega` at `u = 1` equals `omega0 + D alpha`.
    pub ends_at_shift: bool,
    /// `omega` is closed for the extended differential.
    pub closed: bool,
    /// `-(-1)^|omega| times the fiber integral of omega`, per parity.
    pub recovered: InertiaSection,
    /// `D recovered` equals the difference of the endpoints.
    pub recovered_ok: bool,
}

pub fn concordance_witness(line: &TransgressedLine, omega0: &InertiaSection, alpha: &InertiaSection) -> Result<Concordance, BundleError> {
    check(line, omega0)?;
    check(line, alpha)?;
    if !is_closed(line, omega0)? {
        return Err(BundleError::NotClosed);
    }
    let base = match line.nabla.first() {
        Some(a) => a.chart().clone(),
        None => return Err(BundleError::Length { what: "sectors", expected: 1, found: 0 }),
    };
    let ext = base.with_fiber(CONCORDANCE_VAR)?;
    let u = GradedForm::var(&ext, base.n_even());
    let lift = |f: &GradedForm| f.extend_to(&ext);
    let mut witness = Vec::new();
    let mut recovered = Vec::new();
    let (mut start, mut end, mut closed, mut rec_ok) = (true, true, true, true);
    for o in 0..line.nabla.len() {
        let (a, w) = (lift(&line.nabla[o])?, lift(&line.omega3[o])?);
        let d = |s: &GradedForm| apply(&a, &w, s);
        let w0 = lift(&omega0.values[o])?;
        let omega = &w0 + &d(&(&u * &lift(&alpha.values[o])?));
        let base_d = |s: &GradedForm| apply(&line.nabla[o], &line.omega3[o], s);
        let at0 = omega.restrict_fiber(&coeff::int(0))?;
        let at1 = omega.restrict_fiber(&coeff::int(1))?;
        start &= at0 == omega0.values[o];
        end &= at1 == &omega0.values[o] + &base_d(&alpha.values[o]);
        closed &= d(&omega).is_zero();
        let (even, odd) = omega.split_parity();
        let r = &odd.integrate_fiber()? - &even.integrate_fiber()?;
        rec_ok &= base_d(&r) == &at1 - &at0;
        witness.push(omega);
        recovered.push(r);
    }
    Ok(Concordance {
        chart: ext,
        witness: InertiaSection { values: witness },
        starts_at_omega0: start,
        ends_at_shift: end,
        closed,
        recovered: InertiaSection { values: recovered },
        recovered_ok: rec_ok,
    })
}
