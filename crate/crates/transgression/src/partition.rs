use bundles::{chern_character, supertrace, ChernCharacter, CMatrix, Monomial, TwistedBundle, TOL};
use forms::{coeff, FormMatrix, GradedForm};
use num_complex::Complex64;

use crate::skeleton::SuperLoop;
use crate::TransgressionError;

/// Value of the field theory on a superloop; `form` is present for smooth bundles.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionValue {
    pub value: Complex64,
    pub form: Option<GradedForm>,
}

fn check_loop(v: &TwistedBundle, k: &SuperLoop) -> Result<(), TransgressionError> {
    let gd = v.cocycle().groupoid();
    k.skeleton.check(gd)?;
    let dims = v.dims();
    for (n, &j) in k.skeleton.jumps().iter().enumerate() {
        let (s, t) = (gd.src(j), gd.tgt(j));
        if dims[s] != dims[t] || v.rho(j).shape() != (dims[s].0 + dims[s].1, dims[s].0 + dims[s].1) {
            return Err(TransgressionError::Dimension(n + 1));
        }
    }
    Ok(())
}

/// `str` of the inverse of `rho(j_n) SP_{n-1} .. rho(j_1) SP_0` on `V_{a_0}`.
///
/// Segment transport is `exp(-l F)` for a segment of length `l` in the smooth case and the
/// identity otherwise.
pub fn partition_function(v: &TwistedBundle, k: &SuperLoop) -> Result<PartitionValue, TransgressionError> {
    let report = v.validate();
    if !report.is_valid() {
        return Err(TransgressionError::InvalidBundle(format!("{report:?}")));
    }
    check_loop(v, k)?;
    let sk = &k.skeleton;
    let dims = v.dims()[k.base_object()];
    let value = match v.exact_rho() {
        Some(e) => {
            let inv = sk.jumps().iter().fold(Monomial::identity(dims.0 + dims.1), |acc, &j| acc.mul(&e[j].inverse()));
            supertrace(&inv.to_matrix(), dims)
        }
        None => {
            let mut inv = CMatrix::identity(dims.0 + dims.1, dims.0 + dims.1);
            for &j in sk.jumps() {
                let r = v.rho(j).clone().try_inverse().ok_or(TransgressionError::InvalidBundle(format!("singular matrix at {j}")))?;
                inv = &inv * &r;
            }
            supertrace(&inv, dims)
        }
    };
    if !v.is_smooth() {
        return Ok(PartitionValue { value, form: None });
    }
    let chart = v.cocycle().chart().clone();
    let exact = v.exact_rho().ok_or(TransgressionError::InvalidBundle("smooth bundle without exact matrices".into()))?;
    let mut acc = FormMatrix::identity(&chart, dims.0, dims.1);
    for (seg, &j) in sk.segments().iter().zip(sk.jumps()) {
        let (p, q) = v.dims()[seg.object];
        let back = v.curvature(seg.object)?.scale(&coeff::real(seg.length())).exp_positive_degree()?;
        let r = exact[j].inverse().to_form_matrix(&chart, p, q).ok_or(TransgressionError::InvalidBundle(format!("matrix at {j}")))?;
        acc = acc.mul(&back)?.mul(&r)?;
    }
    let form = acc.supertrace();
    Ok(PartitionValue { value: coeff::to_f64(&form.constant_term()), form: Some(form) })
}

/// Product over the components of a disjoint union of loops.
pub fn partition_function_disjoint(v: &TwistedBundle, loops: &[SuperLoop]) -> Result<PartitionValue, TransgressionError> {
    let mut value = Complex64::new(1.0, 0.0);
    let mut form: Option<GradedForm> = v.is_smooth().then(|| GradedForm::one(v.cocycle().chart()));
    for k in loops {
        let p = partition_function(v, k)?;
        value *= p.value;
        if let (Some(acc), Some(f)) = (&form, &p.form) {
            form = Some(acc * f);
        }
    }
    Ok(PartitionValue { value, form })
}

/// `exp(f)` for a nilpotent even form.
pub fn exp_nilpotent(f: &GradedForm) -> Result<GradedForm, TransgressionError> {
    Ok(FormMatrix::scalar(f, 1, 0).exp_positive_degree()?.get(0, 0).clone())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionEntry {
    pub sector: (usize, usize),
    pub partition: PartitionValue,
    pub character: Complex64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionReport {
    pub entries: Vec<ReductionEntry>,
    /// Sectors where the two sides differ.
    pub mismatches: Vec<usize>,
}

impl ReductionReport {
    pub fn is_ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Partition function of `v` on each constant length-1 loop, against `ch`.
///
/// Smooth values are compared as forms after the gauge factor `exp(-B)`.
pub fn compare_reduction(v: &TwistedBundle, ch: &ChernCharacter) -> Result<ReductionReport, TransgressionError> {
    let gd = v.cocycle().groupoid();
    let base = forms::Chart::new::<&str>(&[], &[])?;
    let mut entries = Vec::new();
    let mut mismatches = Vec::new();
    for (o, &(x, g)) in ch.line.inertia.sectors.iter().enumerate() {
        let k = SuperLoop::constant(gd, &base, g)?;
        let partition = partition_function(v, &k)?;
        let character = ch.values[o];
        let ok = match (&partition.form, &ch.forms) {
            (Some(p), Some(c)) => &(p * &exp_nilpotent(&-v.cocycle().b(x))?) == &c.values[o],
            (None, None) => match v.exact_rho() {
                Some(_) => partition.value == character,
                None => (partition.value - character).norm() <= TOL * (1.0 + character.norm()),
            },
            _ => false,
        };
        if !ok {
            mismatches.push(o);
        }
        entries.push(ReductionEntry { sector: (x, g), partition, character, ok });
    }
    Ok(ReductionReport { entries, mismatches })
}

/// Every inertia object: partition function on the constant loop equals the Chern character.
pub fn dimensional_reduction_check(v: &TwistedBundle) -> Result<ReductionReport, TransgressionError> {
    let ch = chern_character(v)?;
    compare_reduction(v, &ch)
}
