use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use forms::{coeff, Chart, Coeff, FormMatrix, GradedForm, Phase};

pub type CMatrix = DMatrix<Complex64>;

/// Square matrix with exactly one root of unity per column: column `j` is
/// `exp(2 pi i q_j) e_{i_j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub columns: Vec<(usize, Phase)>,
}

impl Monomial {
    pub fn identity(n: usize) -> Self {
        Monomial { columns: (0..n).map(|i| (i, Phase::zero())).collect() }
    }

    pub fn diagonal(phases: Vec<Phase>) -> Self {
        Monomial { columns: phases.into_iter().enumerate().collect() }
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    /// Rows form a permutation.
    pub fn is_invertible(&self) -> bool {
        let mut seen = vec![false; self.dim()];
        for &(i, _) in &self.columns {
            if i >= seen.len() || std::mem::replace(&mut seen[i], true) {
                return false;
            }
        }
        true
    }

    pub fn mul(&self, other: &Self) -> Self {
        Monomial {
            columns: other
                .columns
                .iter()
                .map(|(k, q)| {
                    let (i, p) = &self.columns[*k];
                    (*i, p + q)
                })
                .collect(),
        }
    }

    /// Panics unless invertible.
    pub fn inverse(&self) -> Self {
        let mut cols = vec![(0, Phase::zero()); self.dim()];
        for (j, (i, q)) in self.columns.iter().enumerate() {
            cols[*i] = (j, -q);
        }
        Monomial { columns: cols }
    }

    pub fn scale(&self, q: &Phase) -> Self {
        Monomial { columns: self.columns.iter().map(|(i, p)| (*i, p + q)).collect() }
    }

    pub fn to_matrix(&self) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for (j, (i, q)) in self.columns.iter().enumerate() {
            m[(*i, j)] = q.to_complex();
        }
        m
    }

    /// Exact form-valued matrix when every phase is a fourth root of unity.
    pub fn to_form_matrix(&self, chart: &Arc<Chart>, even_dim: usize, odd_dim: usize) -> Option<FormMatrix> {
        let n = self.dim();
        let mut entries = vec![GradedForm::zero(chart); n * n];
        for (j, (i, q)) in self.columns.iter().enumerate() {
            entries[i * n + j] = GradedForm::constant(chart, gaussian(q)?);
        }
        FormMatrix::from_entries(chart, even_dim, odd_dim, entries).ok()
    }

    /// Recognizes a complex matrix with one unit-modulus root of unity `e(k/d)`, `d <= 24`,
    /// per column.
    pub fn from_matrix(m: &CMatrix, tol: f64) -> Option<Self> {
        if m.nrows() != m.ncols() {
            return None;
        }
        let mut columns = Vec::with_capacity(m.ncols());
        for j in 0..m.ncols() {
            let nz: Vec<usize> = (0..m.nrows()).filter(|&i| m[(i, j)].norm() > tol).collect();
            let [i] = nz[..] else { return None };
            columns.push((i, root_of_unity(m[(i, j)], tol)?));
        }
        let out = Monomial { columns };
        out.is_invertible().then_some(out)
    }
}

/// `exp(2 pi i q)` as a Gaussian rational, for `4q` integral.
pub fn gaussian(q: &Phase) -> Option<Coeff> {
    let quarter = (0..4).find(|&k| Phase::from_ratio(k, 4) == *q)?;
    Some(match quarter {
        0 => coeff::int(1),
        1 => coeff::imag_unit(),
        2 => coeff::int(-1),
        _ => -coeff::imag_unit(),
    })
}

/// Phase `q` with `exp(2 pi i q) = z`, if `z` is a root of unity of order at most 24.
pub fn root_of_unity(z: Complex64, tol: f64) -> Option<Phase> {
    if (z.norm() - 1.0).abs() > tol {
        return None;
    }
    let angle = z.arg() / (2.0 * std::f64::consts::PI);
    for d in 1..=24i64 {
        let k = (angle * d as f64).round();
        let q = Phase::from_ratio(k as i64, d);
        if (q.to_complex() - z).norm() <= tol {
            return Some(q);
        }
    }
    None
}
