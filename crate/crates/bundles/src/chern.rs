use deligne::TransgressedLine;
use forms::{coeff, FormMatrix, Phase};
use num_complex::Complex64;

use crate::bundle::{supertrace, TwistedBundle};
use crate::monomial::gaussian;
use crate::section::InertiaSection;
use crate::{BundleError, TOL};

/// Sign in `ch(t f) = exp(2 pi i EPSILON H(f)) ch(s f)`, fixed by the untwisted oracle
/// together with the choice of `rho(g)^-1` inside the supertrace.
pub const EPSILON: i64 = 1;

/// Twisted Chern character on the inertia groupoid.
#[derive(Clone, Debug, PartialEq)]
pub struct ChernCharacter {
    pub line: TransgressedLine,
    /// Degree-zero value per sector.
    pub values: Vec<Complex64>,
    /// Full form per sector in the smooth case.
    pub forms: Option<InertiaSection>,
}

/// `str(rho(g)^-1 exp(F - B))` on the sector `(x, g)`; discrete bundles drop the exponential.
pub fn chern_character(v: &TwistedBundle) -> Result<ChernCharacter, BundleError> {
    let report = v.validate();
    if !report.is_valid() {
        return Err(BundleError::Invalid(format!("{report:?}")));
    }
    let line = v.cocycle().transgress()?;
    let sectors = line.inertia.sectors.clone();
    let mut values = Vec::with_capacity(sectors.len());
    for &(x, g) in &sectors {
        let dims = v.dims()[x];
        let inv = match v.exact_rho() {
            Some(e) => e[g].inverse().to_matrix(),
            None => v.rho(g).clone().try_inverse().ok_or(BundleError::Invalid(format!("singular matrix at {g}")))?,
        };
        values.push(supertrace(&inv, dims));
    }
    let forms = if v.is_smooth() {
        let chart = v.cocycle().chart().clone();
        let exact = v.exact_rho().ok_or(BundleError::Inexact)?;
        let mut out = Vec::with_capacity(sectors.len());
        for &(x, g) in &sectors {
            let (p, q) = v.dims()[x];
            let inv = exact[g].inverse().to_form_matrix(&chart, p, q).ok_or(BundleError::Inexact)?;
            let b = FormMatrix::scalar(v.cocycle().b(x), p, q);
            let e = v.curvature(x)?.sub(&b)?.exp_positive_degree()?;
            out.push(inv.mul(&e)?.supertrace());
        }
        for (o, f) in out.iter().enumerate() {
            values[o] = coeff::to_f64(&f.constant_term());
        }
        Some(InertiaSection { values: out })
    } else {
        None
    };
    Ok(ChernCharacter { line, values, forms })
}

impl ChernCharacter {
    /// Inertia morphisms violating `ch(t f) = exp(2 pi i EPSILON H(f)) ch(s f)`.
    pub fn equivariance_failures(&self) -> Vec<usize> {
        let i = &self.line.inertia.groupoid;
        (0..i.n_morphisms())
            .filter(|&f| {
                let (s, t) = (i.src(f), i.tgt(f));
                let q: Phase = self.line.holonomy[f].q.times(EPSILON);
                let numeric = (self.values[t] - q.to_complex() * self.values[s]).norm() > TOL * (1.0 + self.values[s].norm());
                let exact = match (&self.forms, gaussian(&q)) {
                    (Some(forms), Some(c)) => forms.values[t] != forms.values[s].scale(&c),
                    _ => false,
                };
                numeric || exact
            })
            .collect()
    }
}

/// `true` iff the character is a section of the transgressed line.
pub fn ch_equivariance_check(v: &TwistedBundle) -> Result<bool, BundleError> {
    Ok(chern_character(v)?.equivariance_failures().is_empty())
}
