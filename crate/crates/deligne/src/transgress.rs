use std::collections::VecDeque;

use forms::GradedForm;
use groupoid::InertiaGroupoid;

use crate::cocycle::DeligneCocycle;
use crate::lift::ExpLift;
use crate::DeligneError;

/// Line bundle on the inertia groupoid obtained from a cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransgressedLine {
    pub inertia: InertiaGroupoid,
    /// Holonomy `H` per inertia morphism.
    pub holonomy: Vec<ExpLift>,
    /// Connection 1-form per sector: `A` of the loop.
    pub nabla: Vec<GradedForm>,
    /// Curvature 3-form per sector.
    pub omega3: Vec<GradedForm>,
}

/// A flat section on one connected component, by sector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatSection {
    pub component: Vec<usize>,
    pub values: Vec<ExpLift>,
}

/// `H(f on g)` by the two formulas.
fn holonomy_pair(c: &DeligneCocycle, f: usize, g: usize) -> (ExpLift, ExpLift) {
    let gd = c.groupoid();
    let fi = gd.inverse(f);
    let fg = gd.compose(f, g);
    let first = c.h(f, g).div(c.h(f, fi)).mul(c.h(fg, fi));
    let second = c.h(f, g).div(c.h(gd.conjugate(f, g), f));
    (first, second)
}

impl DeligneCocycle {
    pub fn transgress(&self) -> Result<TransgressedLine, DeligneError> {
        let report = self.validate();
        if !report.is_valid() {
            return Err(DeligneError::Invalid(report.summary()));
        }
        let gd = self.groupoid();
        let inertia = InertiaGroupoid::new(gd);
        let mut holonomy = Vec::with_capacity(inertia.arrows.len());
        for &(f, o) in &inertia.arrows {
            let g = inertia.sectors[o].1;
            let (first, second) = holonomy_pair(self, f, g);
            if first != second {
                return Err(DeligneError::Mismatch(inertia.groupoid.morphism_name(holonomy.len()).to_string()));
            }
            holonomy.push(first);
        }
        let nabla = inertia.sectors.iter().map(|&(_, g)| self.a(g).clone()).collect();
        let curvature = self.three_curvature();
        let omega3 = inertia.sectors.iter().map(|&(x, _)| curvature.omega[x].clone()).collect();
        Ok(TransgressedLine { inertia, holonomy, nabla, omega3 })
    }
}

impl TransgressedLine {
    /// Composable pairs where `H(f2 f1) != H(f2) H(f1)`.
    pub fn multiplicativity_failures(&self) -> Vec<(usize, usize)> {
        let i = &self.inertia.groupoid;
        i.composable_pairs()
            .filter(|&(b, a)| self.holonomy[i.compose(b, a)] != self.holonomy[b].mul(&self.holonomy[a]))
            .collect()
    }

    /// Every sector connection is closed.
    pub fn is_flat(&self) -> bool {
        self.nabla.iter().all(|a| a.exterior_d().is_zero())
    }

    /// One flat section per component on which `H` has trivial monodromy.
    ///
    /// A section `s` satisfies `s(t f) = H(f) s(s f)`; it is normalized to `1` at the least
    /// sector of its component.
    pub fn flat_sections(&self) -> Vec<FlatSection> {
        let i = &self.inertia.groupoid;
        let chart = self.nabla.first().map(|a| a.chart().clone());
        let Some(chart) = chart else { return vec![] };
        let mut out = Vec::new();
        for comp in i.connected_components() {
            let root = comp[0];
            let mut value: Vec<Option<ExpLift>> = vec![None; i.n_objects()];
            value[root] = Some(ExpLift::one(&chart));
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                for y in 0..i.n_objects() {
                    if value[y].is_some() {
                        continue;
                    }
                    if let Some(&f) = i.hom(x, y).first() {
                        value[y] = Some(self.holonomy[f].mul(value[x].as_ref().unwrap()));
                        queue.push_back(y);
                    }
                }
            }
            let consistent = comp.iter().all(|&x| {
                i.morphisms_into(x).iter().all(|&f| {
                    let s = i.src(f);
                    self.holonomy[f].mul(value[s].as_ref().unwrap()) == *value[x].as_ref().unwrap()
                })
            });
            if consistent {
                let values = comp.iter().map(|&x| value[x].clone().unwrap()).collect();
                out.push(FlatSection { component: comp, values });
            }
        }
        out
    }

    /// Sectors lying on components with trivial monodromy.
    pub fn regular_sectors(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.flat_sections().into_iter().flat_map(|s| s.component).collect();
        v.sort_unstable();
        v
    }
}
