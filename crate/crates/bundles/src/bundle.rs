use deligne::DeligneCocycle;
use forms::{FormMatrix, GradedForm, Phase};
use num_complex::Complex64;

use crate::monomial::{CMatrix, Monomial};
use crate::{BundleError, TOL};

/// Vector bundle twisted by a cocycle: `rho(g) rho(f) = h(g, f) rho(g f)`.
///
/// Basis vectors of each fiber are ordered even first. In the smooth case every fiber
/// carries a superconnection `d + A`, stored as the odd form-valued matrix `A`, and
/// `rho` must be exact with fourth-root-of-unity phases.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedBundle {
    cocycle: DeligneCocycle,
    dims: Vec<(usize, usize)>,
    rho: Vec<CMatrix>,
    exact: Option<Vec<Monomial>>,
    nabla: Option<Vec<FormMatrix>>,
}

/// Every failing condition, by morphism, object or pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BundleReport {
    pub cocycle_valid: bool,
    pub shapes: Vec<usize>,
    pub parity: Vec<usize>,
    pub identities: Vec<usize>,
    pub singular: Vec<usize>,
    pub squares: Vec<(usize, usize)>,
    pub connections: Vec<usize>,
    /// Squares were compared exactly rather than to tolerance.
    pub exact: bool,
}

impl BundleReport {
    pub fn is_valid(&self) -> bool {
        self.cocycle_valid
            && self.shapes.is_empty()
            && self.parity.is_empty()
            && self.identities.is_empty()
            && self.singular.is_empty()
            && self.squares.is_empty()
            && self.connections.is_empty()
    }
}

fn max_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn grading(dims: (usize, usize), i: usize) -> usize {
    usize::from(i >= dims.0)
}

impl TwistedBundle {
    pub fn new(cocycle: DeligneCocycle, dims: Vec<(usize, usize)>, rho: Vec<CMatrix>) -> Result<Self, BundleError> {
        let gd = cocycle.groupoid();
        if dims.len() != gd.n_objects() {
            return Err(BundleError::Length { what: "fiber dimensions", expected: gd.n_objects(), found: dims.len() });
        }
        if rho.len() != gd.n_morphisms() {
            return Err(BundleError::Length { what: "matrices", expected: gd.n_morphisms(), found: rho.len() });
        }
        Ok(TwistedBundle { cocycle, dims, rho, exact: None, nabla: None })
    }

    /// Exact representation by monomial matrices.
    pub fn from_monomials(cocycle: DeligneCocycle, dims: Vec<(usize, usize)>, rho: Vec<Monomial>) -> Result<Self, BundleError> {
        let float = rho.iter().map(Monomial::to_matrix).collect();
        let mut b = Self::new(cocycle, dims, float)?;
        b.exact = Some(rho);
        Ok(b)
    }

    /// Attaches superconnections; needs a smooth cocycle and exact Gaussian `rho`.
    pub fn with_superconnection(mut self, nabla: Vec<FormMatrix>) -> Result<Self, BundleError> {
        if !self.cocycle.is_smooth() {
            return Err(BundleError::Discrete);
        }
        if nabla.len() != self.dims.len() {
            return Err(BundleError::Length { what: "superconnections", expected: self.dims.len(), found: nabla.len() });
        }
        self.gaussian_rho()?;
        for (x, a) in nabla.iter().enumerate() {
            if a.chart() != self.cocycle.chart() || a.super_dim() != self.dims[x] {
                return Err(BundleError::Shape(format!("superconnection on object {x}")));
            }
            if !a.is_zero() && a.parity() != Some(1) {
                return Err(BundleError::Shape(format!("superconnection on object {x} is not odd")));
            }
        }
        self.nabla = Some(nabla);
        Ok(self)
    }

    fn gaussian_rho(&self) -> Result<Vec<FormMatrix>, BundleError> {
        let exact = self.exact.as_ref().ok_or(BundleError::Inexact)?;
        let gd = self.cocycle.groupoid();
        exact
            .iter()
            .enumerate()
            .map(|(f, m)| {
                let (p, q) = self.dims[gd.src(f)];
                if m.dim() != p + q {
                    return Err(BundleError::Shape(format!("matrix of {}", gd.morphism_name(f))));
                }
                m.to_form_matrix(self.cocycle.chart(), p, q).ok_or(BundleError::Inexact)
            })
            .collect()
    }

    pub fn cocycle(&self) -> &DeligneCocycle {
        &self.cocycle
    }

    pub fn dims(&self) -> &[(usize, usize)] {
        &self.dims
    }

    pub fn rho(&self, f: usize) -> &CMatrix {
        &self.rho[f]
    }

    pub fn exact_rho(&self) -> Option<&[Monomial]> {
        self.exact.as_deref()
    }

    pub fn superconnection(&self, x: usize) -> Option<&FormMatrix> {
        self.nabla.as_ref().map(|n| &n[x])
    }

    pub fn is_smooth(&self) -> bool {
        self.nabla.is_some()
    }

    pub fn validate(&self) -> BundleReport {
        let gd = self.cocycle.groupoid();
        let mut r = BundleReport { cocycle_valid: self.cocycle.validate().is_valid(), exact: self.exact.is_some(), ..Default::default() };
        let total = |x: usize| self.dims[x].0 + self.dims[x].1;
        for f in 0..gd.n_morphisms() {
            let (s, t) = (gd.src(f), gd.tgt(f));
            let m = &self.rho[f];
            if self.dims[s] != self.dims[t] || m.nrows() != total(t) || m.ncols() != total(s) {
                r.shapes.push(f);
                continue;
            }
            let mixes = (0..m.nrows()).any(|i| (0..m.ncols()).any(|j| grading(self.dims[t], i) != grading(self.dims[s], j) && m[(i, j)].norm() > TOL));
            if mixes {
                r.parity.push(f);
            }
            let invertible = match &self.exact {
                Some(e) => e[f].is_invertible(),
                None => m.clone().svd(false, false).singular_values.iter().all(|&s| s > TOL),
            };
            if !invertible {
                r.singular.push(f);
            }
        }
        for x in 0..gd.n_objects() {
            let i = gd.identity(x);
            let ok = match &self.exact {
                Some(e) => e[i] == Monomial::identity(total(x)),
                None => self.rho[i].shape() == (total(x), total(x)) && max_norm(&(&self.rho[i] - CMatrix::identity(total(x), total(x)))) <= TOL,
            };
            if !ok {
                r.identities.push(x);
            }
        }
        if !r.shapes.is_empty() {
            return r;
        }
        for (g, f) in gd.composable_pairs() {
            let h = self.cocycle.h(g, f);
            let ok = h.p.is_zero()
                && match &self.exact {
                    Some(e) => e[g].mul(&e[f]) == e[gd.compose(g, f)].scale(&h.q),
                    None => {
                        let lhs = &self.rho[g] * &self.rho[f];
                        let rhs = &self.rho[gd.compose(g, f)] * h.q.to_complex();
                        max_norm(&(lhs - rhs)) <= TOL
                    }
                };
            if !ok {
                r.squares.push((g, f));
            }
        }
        if let Some(nabla) = &self.nabla {
            let rho = self.gaussian_rho().expect("checked on construction");
            for f in 0..gd.n_morphisms() {
                let (s, t) = (gd.src(f), gd.tgt(f));
                let (p, q) = self.dims[s];
                let shifted = nabla[s].add(&FormMatrix::scalar(self.cocycle.a(f), p, q)).expect("same shape");
                let lhs = nabla[t].mul(&rho[f]).expect("same shape");
                let rhs = rho[f].mul(&shifted).expect("same shape");
                if lhs != rhs {
                    r.connections.push(f);
                }
            }
        }
        r
    }

    /// `(d + A)^2 = dA + A A` on the fiber over `x`.
    pub fn curvature(&self, x: usize) -> Result<FormMatrix, BundleError> {
        let a = self.superconnection(x).ok_or(BundleError::Discrete)?;
        Ok(a.exterior_d().add(&a.mul(a)?)?)
    }

    /// Fiberwise direct sum; basis order is even of `self`, even of `other`, odd of `self`,
    /// odd of `other`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, BundleError> {
        if self.cocycle != other.cocycle {
            return Err(BundleError::CocycleMismatch);
        }
        let gd = self.cocycle.groupoid();
        let place = |x: usize| -> (Vec<usize>, Vec<usize>) {
            let ((p1, q1), (p2, q2)) = (self.dims[x], other.dims[x]);
            let left = (0..p1 + q1).map(|i| if i < p1 { i } else { p1 + p2 + (i - p1) }).collect();
            let right = (0..p2 + q2).map(|i| if i < p2 { p1 + i } else { p1 + p2 + q1 + (i - p2) }).collect();
            (left, right)
        };
        let dims: Vec<(usize, usize)> = self.dims.iter().zip(&other.dims).map(|(a, b)| (a.0 + b.0, a.1 + b.1)).collect();
        let mut rho = Vec::with_capacity(gd.n_morphisms());
        for f in 0..gd.n_morphisms() {
            let (s, t) = (gd.src(f), gd.tgt(f));
            let ((ls, rs), (lt, rt)) = (place(s), place(t));
            let n = dims[t].0 + dims[t].1;
            let mut m = CMatrix::zeros(n, dims[s].0 + dims[s].1);
            for (a, src, tgt) in [(&self.rho[f], &ls, &lt), (&other.rho[f], &rs, &rt)] {
                for j in 0..a.ncols() {
                    for i in 0..a.nrows() {
                        m[(tgt[i], src[j])] = a[(i, j)];
                    }
                }
            }
            rho.push(m);
        }
        let exact = match (&self.exact, &other.exact) {
            (Some(e1), Some(e2)) => Some(
                (0..gd.n_morphisms())
                    .map(|f| {
                        let (s, t) = (gd.src(f), gd.tgt(f));
                        let ((ls, rs), (lt, rt)) = (place(s), place(t));
                        let mut cols = vec![(0, Phase::zero()); dims[s].0 + dims[s].1];
                        for (j, (i, q)) in e1[f].columns.iter().enumerate() {
                            cols[ls[j]] = (lt[*i], q.clone());
                        }
                        for (j, (i, q)) in e2[f].columns.iter().enumerate() {
                            cols[rs[j]] = (rt[*i], q.clone());
                        }
                        Monomial { columns: cols }
                    })
                    .collect(),
            ),
            _ => None,
        };
        let nabla = match (&self.nabla, &other.nabla) {
            (Some(n1), Some(n2)) => Some(
                (0..gd.n_objects())
                    .map(|x| {
                        let (l, r) = place(x);
                        let n = dims[x].0 + dims[x].1;
                        let chart = self.cocycle.chart();
                        let mut entries = vec![GradedForm::zero(chart); n * n];
                        for (m, idx) in [(&n1[x], &l), (&n2[x], &r)] {
                            for i in 0..idx.len() {
                                for j in 0..idx.len() {
                                    entries[idx[i] * n + idx[j]] = m.get(i, j).clone();
                                }
                            }
                        }
                        FormMatrix::from_entries(chart, dims[x].0, dims[x].1, entries).expect("square")
                    })
                    .collect(),
            ),
            (None, None) => None,
            _ => return Err(BundleError::Discrete),
        };
        Ok(TwistedBundle { cocycle: self.cocycle.clone(), dims, rho, exact, nabla })
    }

    /// Graded tensor product with a bundle for the trivial cocycle; discrete only.
    pub fn tensor_untwisted(&self, other: &Self) -> Result<Self, BundleError> {
        if self.is_smooth() || other.is_smooth() {
            return Err(BundleError::Smooth);
        }
        if other.cocycle.groupoid() != self.cocycle.groupoid() || other.cocycle.h_values().iter().any(|h| !h.is_one()) {
            return Err(BundleError::CocycleMismatch);
        }
        let gd = self.cocycle.groupoid();
        // Pairs (i, j) with even total grading first, each group in lexicographic order.
        let order = |x: usize| -> (Vec<usize>, (usize, usize)) {
            let (d1, d2) = (self.dims[x], other.dims[x]);
            let (n1, n2) = (d1.0 + d1.1, d2.0 + d2.1);
            let mut pairs: Vec<(usize, usize, usize)> =
                (0..n1).flat_map(|i| (0..n2).map(move |j| ((grading(d1, i) + grading(d2, j)) % 2, i, j))).collect();
            pairs.sort_unstable();
            let mut pos = vec![0; n1 * n2];
            for (k, &(_, i, j)) in pairs.iter().enumerate() {
                pos[i * n2 + j] = k;
            }
            (pos, (d1.0 * d2.0 + d1.1 * d2.1, d1.0 * d2.1 + d1.1 * d2.0))
        };
        let dims: Vec<(usize, usize)> = (0..gd.n_objects()).map(|x| order(x).1).collect();
        let rho = (0..gd.n_morphisms())
            .map(|f| {
                let (ps, _) = order(gd.src(f));
                let (pt, _) = order(gd.tgt(f));
                let k = self.rho[f].kronecker(&other.rho[f]);
                let mut m = CMatrix::zeros(k.nrows(), k.ncols());
                for i in 0..k.nrows() {
                    for j in 0..k.ncols() {
                        m[(pt[i], ps[j])] = k[(i, j)];
                    }
                }
                m
            })
            .collect::<Vec<_>>();
        let exact = match (&self.exact, &other.exact) {
            (Some(e1), Some(e2)) => Some(
                (0..gd.n_morphisms())
                    .map(|f| {
                        let (ps, _) = order(gd.src(f));
                        let (pt, _) = order(gd.tgt(f));
                        let n2 = e2[f].dim();
                        let mut cols = vec![(0, Phase::zero()); ps.len()];
                        for (j1, (i1, q1)) in e1[f].columns.iter().enumerate() {
                            for (j2, (i2, q2)) in e2[f].columns.iter().enumerate() {
                                cols[ps[j1 * n2 + j2]] = (pt[i1 * n2 + i2], q1 + q2);
                            }
                        }
                        Monomial { columns: cols }
                    })
                    .collect(),
            ),
            _ => None,
        };
        Ok(TwistedBundle { cocycle: self.cocycle.clone(), dims, rho, exact, nabla: None })
    }
}

/// Supertrace of a constant matrix on `C^{p|q}`.
pub fn supertrace(m: &CMatrix, dims: (usize, usize)) -> Complex64 {
    (0..m.nrows()).map(|i| if i < dims.0 { m[(i, i)] } else { -m[(i, i)] }).sum()
}
