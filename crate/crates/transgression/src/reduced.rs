use std::sync::Arc;

use bundles::{twisted_differential, InertiaSection};
use deligne::{DeligneCocycle, TransgressedLine};
use forms::{Chart, GradedForm, Key, Poly};

use crate::partition::exp_nilpotent;
use crate::TransgressionError;

const THETA: &str = "theta";

/// `d + A + Omega` on inertia sections, assembled from the rotation of constant loops.
///
/// On a sector `(x, g)` a rotation by `(t, theta)` acts on `Q'` by `1 + theta A(g)`; the
/// operator is the `theta` component of `(w + theta dw)(1 + theta A)`, conjugated by
/// `exp(-B_x)` to land on `L'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedSuperconnection {
    pub line: TransgressedLine,
    /// Rotation factor `A(g)` per sector.
    pub rotation: Vec<GradedForm>,
    /// Gauge `B_x` per sector.
    pub gauge: Vec<GradedForm>,
    ext: Arc<Chart>,
}

pub fn reduced_superconnection(c: &DeligneCocycle) -> Result<ReducedSuperconnection, TransgressionError> {
    if !c.is_smooth() {
        return Err(TransgressionError::Discrete);
    }
    let line = c.transgress()?;
    let rotation = line.nabla.clone();
    let gauge = line.inertia.sectors.iter().map(|&(x, _)| c.b(x).clone()).collect();
    let ext = c.chart().with_odd(THETA)?;
    Ok(ReducedSuperconnection { line, rotation, gauge, ext })
}

impl ReducedSuperconnection {
    fn sector(&self, o: usize, s: &GradedForm) -> Result<GradedForm, TransgressionError> {
        let chart = s.chart();
        let theta_index = chart.n_odd();
        let w = (s * &exp_nilpotent(&self.gauge[o])?).extend_to(&self.ext)?;
        let theta = GradedForm::odd(&self.ext, theta_index);
        let a = self.rotation[o].extend_to(&self.ext)?;
        let moved = &w + &(&theta * &w.exterior_d());
        let rotated = &moved * &(&GradedForm::one(&self.ext) + &(&theta * &a));
        let generator = rotated.odd_derivative(theta_index);
        let even: Vec<GradedForm> = (0..chart.n_even()).map(|i| GradedForm::var(chart, i)).collect();
        let mut odd: Vec<GradedForm> = (0..chart.n_odd()).map(|j| GradedForm::odd(chart, j)).collect();
        odd.push(GradedForm::zero(chart));
        let back = generator.substitute(chart, &even, &odd)?;
        Ok(&back * &exp_nilpotent(&-&self.gauge[o])?)
    }

    pub fn apply(&self, s: &InertiaSection) -> Result<InertiaSection, TransgressionError> {
        if s.values.len() != self.rotation.len() {
            return Err(TransgressionError::Length { what: "sector values", expected: self.rotation.len(), found: s.values.len() });
        }
        let values = s.values.iter().enumerate().map(|(o, v)| self.sector(o, v)).collect::<Result<_, _>>()?;
        Ok(InertiaSection { values })
    }

    /// Monomial sections `t^a dt_I` with `|a| <= max_degree` on one sector at a time where
    /// this operator and the twisted differential disagree.
    pub fn mismatches(&self, max_degree: u32) -> Result<Vec<(usize, Key, Vec<u32>)>, TransgressionError> {
        let n = self.rotation.len();
        let Some(first) = self.rotation.first() else { return Ok(Vec::new()) };
        let chart = first.chart().clone();
        let vars = chart.n_even();
        let mut exponents: Vec<Vec<u32>> = vec![Vec::new()];
        for _ in 0..vars {
            exponents = exponents
                .into_iter()
                .flat_map(|e| (0..=max_degree).map(move |k| [e.clone(), vec![k]].concat()))
                .filter(|e| e.iter().sum::<u32>() <= max_degree)
                .collect();
        }
        let mut out = Vec::new();
        for o in 0..n {
            for dt in 0..1u32 << vars {
                for e in &exponents {
                    let key = Key { odd: 0, dt };
                    let mut values = vec![GradedForm::zero(&chart); n];
                    values[o] = GradedForm::monomial(&chart, key, Poly::monomial(e.clone(), forms::coeff::int(1)));
                    let s = InertiaSection { values };
                    if self.apply(&s)? != twisted_differential(&self.line, &s)? {
                        out.push((o, key, e.clone()));
                    }
                }
            }
        }
        Ok(out)
    }
}
