//! Square matrices of forms acting on a super vector space `C^{p|q}`.

use std::sync::Arc;

use num_traits::Zero;

use crate::chart::Chart;
use crate::coeff::{self, Coeff};
use crate::form::GradedForm;
use crate::FormError;

/// Entry `(i, j)` stands for `m_ij (x) E_ij`; products follow the tensor sign rule
/// `(w (x) X)(v (x) Y) = (-1)^{|X||v|} wv (x) XY`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormMatrix {
    chart: Arc<Chart>,
    even_dim: usize,
    odd_dim: usize,
    entries: Vec<GradedForm>,
}

impl FormMatrix {
    pub fn zero(chart: &Arc<Chart>, even_dim: usize, odd_dim: usize) -> Self {
        let n = even_dim + odd_dim;
        FormMatrix { chart: chart.clone(), even_dim, odd_dim, entries: vec![GradedForm::zero(chart); n * n] }
    }

    pub fn identity(chart: &Arc<Chart>, even_dim: usize, odd_dim: usize) -> Self {
        Self::scalar(&GradedForm::one(chart), even_dim, odd_dim)
    }

    /// `f * Id`.
    pub fn scalar(f: &GradedForm, even_dim: usize, odd_dim: usize) -> Self {
        let mut m = Self::zero(f.chart(), even_dim, odd_dim);
        for i in 0..m.dim() {
            m.set(i, i, f.clone());
        }
        m
    }

    pub fn from_entries(
        chart: &Arc<Chart>,
        even_dim: usize,
        odd_dim: usize,
        entries: Vec<GradedForm>,
    ) -> Result<Self, FormError> {
        let n = even_dim + odd_dim;
        if entries.len() != n * n {
            return Err(FormError::NotSquare { entries: entries.len(), dim: n });
        }
        if entries.iter().any(|e| e.chart().as_ref() != chart.as_ref()) {
            return Err(FormError::ChartMismatch);
        }
        Ok(FormMatrix { chart: chart.clone(), even_dim, odd_dim, entries })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.even_dim + self.odd_dim
    }

    pub fn super_dim(&self) -> (usize, usize) {
        (self.even_dim, self.odd_dim)
    }

    /// Grading of basis vector `i`: 0 for the even block, 1 for the odd block.
    pub fn grading(&self, i: usize) -> u32 {
        u32::from(i >= self.even_dim)
    }

    pub fn get(&self, i: usize, j: usize) -> &GradedForm {
        &self.entries[i * self.dim() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: GradedForm) {
        let n = self.dim();
        self.entries[i * n + j] = f;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GradedForm::is_zero)
    }

    fn same_shape(&self, other: &Self) -> Result<(), FormError> {
        if self.super_dim() != other.super_dim() {
            return Err(FormError::ShapeMismatch);
        }
        if self.chart.as_ref() != other.chart.as_ref() {
            return Err(FormError::ChartMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, FormError> {
        self.same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(FormMatrix { entries, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FormError> {
        self.same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(FormMatrix { entries, ..self.clone() })
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        FormMatrix { entries: self.entries.iter().map(|e| e.scale(c)).collect(), ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FormError> {
        self.same_shape(other)?;
        let n = self.dim();
        let mut out = Self::zero(&self.chart, self.even_dim, self.odd_dim);
        let split: Vec<(GradedForm, GradedForm)> = other.entries.iter().map(GradedForm::split_parity).collect();
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                let flip = (self.grading(i) + self.grading(j)) % 2 == 1;
                for k in 0..n {
                    let (even, odd) = &split[j * n + k];
                    let b = if flip { even - odd } else { even + odd };
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, k) + &(a * &b);
                    out.set(i, k, cur);
                }
            }
        }
        Ok(out)
    }

    /// Applies `f` to every entry.
    pub fn map(&self, f: impl Fn(&GradedForm) -> GradedForm) -> Self {
        FormMatrix { entries: self.entries.iter().map(f).collect(), ..self.clone() }
    }

    /// Total parity of every entry, `(entry parity + row grading + column grading) mod 2`,
    /// when it is the same for all nonzero entries.
    pub fn parity(&self) -> Option<u32> {
        let n = self.dim();
        let mut seen = None;
        for i in 0..n {
            for j in 0..n {
                let e = self.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let p = (e.parity()? + self.grading(i) + self.grading(j)) % 2;
                match seen {
                    None => seen = Some(p),
                    Some(q) if q != p => return None,
                    _ => {}
                }
            }
        }
        Some(seen.unwrap_or(0))
    }

    /// Trace over the even block minus trace over the odd block.
    pub fn supertrace(&self) -> GradedForm {
        let mut acc = GradedForm::zero(&self.chart);
        for i in 0..self.dim() {
            acc = if self.grading(i) == 0 { &acc + self.get(i, i) } else { &acc - self.get(i, i) };
        }
        acc
    }

    /// `exp(M)` as a finite Taylor sum; every entry must be nilpotent.
    pub fn exp_positive_degree(&self) -> Result<Self, FormError> {
        if self.entries.iter().any(|e| !e.is_nilpotent()) {
            return Err(FormError::NotNilpotent);
        }
        let mut result = Self::identity(&self.chart, self.even_dim, self.odd_dim);
        let mut power = result.clone();
        let mut k: i64 = 0;
        loop {
            k += 1;
            power = power.mul(self)?.scale(&coeff::frac(1, k));
            if power.is_zero() {
                return Ok(result);
            }
            result = result.add(&power)?;
            // The nilpotency index is bounded by the number of generators.
            if k as usize > 2 * (self.chart.n_even() + self.chart.n_odd()) + 2 {
                return Err(FormError::NotNilpotent);
            }
        }
    }

    /// Applies `d` entrywise.
    pub fn exterior_d(&self) -> Self {
        self.map(GradedForm::exterior_d)
    }

    /// Entries as constant scalars when every entry is a constant.
    pub fn constant_entries(&self) -> Option<Vec<Coeff>> {
        self.entries
            .iter()
            .map(|e| {
                let c = e.constant_term();
                let back = GradedForm::constant(&self.chart, c.clone());
                (&back == e || (e.is_zero() && c.is_zero())).then_some(c)
            })
            .collect()
    }
}
