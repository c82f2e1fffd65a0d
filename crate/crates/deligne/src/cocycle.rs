use std::sync::Arc;

use forms::{Chart, FormError, GradedForm, Phase};
use groupoid::FiniteGroupoid;

use crate::lift::ExpLift;
use crate::DeligneError;

/// Gerbe data `(h, A, B)` on a finite groupoid.
///
/// A discrete cocycle lives on the empty chart and carries only phases. A smooth one has all
/// objects on one shared chart with identity transition maps; `A` is indexed by morphism and
/// `B` by object. Cocycles are normalized: `h` is trivial whenever an identity is involved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeligneCocycle {
    groupoid: FiniteGroupoid,
    chart: Arc<Chart>,
    smooth: bool,
    h: Vec<ExpLift>,
    a: Vec<GradedForm>,
    b: Vec<GradedForm>,
}

/// Every violated instance of the cocycle conditions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CocycleReport {
    /// Pairs `(g, f)` involving an identity where `h` is not trivial.
    pub normalization: Vec<(usize, usize)>,
    /// Triples `(a, b, c)` with `a.b.c` defined where the cocycle identity fails.
    pub triples: Vec<(usize, usize, usize)>,
    /// Pairs `(g, f)` where `A(g) + A(f) - A(g.f) != d log h(g, f)`.
    pub pairs: Vec<(usize, usize)>,
    /// Morphisms `f` where `B(t f) - B(s f) != dA(f)`.
    pub morphisms: Vec<usize>,
}

impl CocycleReport {
    pub fn is_valid(&self) -> bool {
        self.normalization.is_empty() && self.triples.is_empty() && self.pairs.is_empty() && self.morphisms.is_empty()
    }

    pub fn summary(&self) -> String {
        format!(
            "{} normalization, {} triple, {} pair, {} morphism failures",
            self.normalization.len(),
            self.triples.len(),
            self.pairs.len(),
            self.morphisms.len()
        )
    }
}

/// Gauge transformation: `lambda` per morphism, `pi` (1-forms) per object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coboundary {
    pub lambda: Vec<ExpLift>,
    pub pi: Vec<GradedForm>,
}

impl Coboundary {
    pub fn zero(c: &DeligneCocycle) -> Self {
        Coboundary {
            lambda: vec![ExpLift::one(&c.chart); c.groupoid.n_morphisms()],
            pi: vec![GradedForm::zero(&c.chart); c.groupoid.n_objects()],
        }
    }

    /// Pure phases, no differential data.
    pub fn phases(c: &DeligneCocycle, lambda: Vec<Phase>) -> Self {
        Coboundary {
            lambda: lambda.into_iter().map(|q| ExpLift::phase(&c.chart, q)).collect(),
            pi: vec![GradedForm::zero(&c.chart); c.groupoid.n_objects()],
        }
    }
}

/// `dB` per object together with the consistency checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeCurvature {
    pub omega: Vec<GradedForm>,
    pub closed: bool,
    /// `Omega(t f) = Omega(s f)` for every morphism.
    pub invariant: bool,
    pub note: Option<&'static str>,
}

fn check_len(what: &'static str, expected: usize, found: usize) -> Result<(), DeligneError> {
    if expected != found {
        return Err(DeligneError::Length { what, expected, found });
    }
    Ok(())
}

fn check_form(f: &GradedForm, chart: &Arc<Chart>, degree: u32, what: &str) -> Result<(), DeligneError> {
    if f.chart() != chart {
        return Err(FormError::ChartMismatch.into());
    }
    if !f.is_zero() && f.homogeneous_degree() != Some(degree) {
        return Err(DeligneError::Degree(what.to_string(), degree));
    }
    Ok(())
}

pub fn empty_chart() -> Arc<Chart> {
    Chart::new::<&str>(&[], &[]).expect("empty chart")
}

impl DeligneCocycle {
    /// Discrete cocycle with `h(g, f) = exp(2 pi i q(g, f))`.
    pub fn discrete(groupoid: FiniteGroupoid, q: impl Fn(usize, usize) -> Phase) -> Self {
        let chart = empty_chart();
        let h = groupoid.composable_pairs().map(|(g, f)| ExpLift::phase(&chart, q(g, f))).collect();
        let a = vec![GradedForm::zero(&chart); groupoid.n_morphisms()];
        let b = vec![GradedForm::zero(&chart); groupoid.n_objects()];
        DeligneCocycle { groupoid, chart, smooth: false, h, a, b }
    }

    pub fn trivial(groupoid: FiniteGroupoid) -> Self {
        Self::discrete(groupoid, |_, _| Phase::zero())
    }

    /// Smooth cocycle; `h` is indexed like [`FiniteGroupoid::composable_pairs`].
    pub fn smooth(
        groupoid: FiniteGroupoid,
        chart: Arc<Chart>,
        h: Vec<ExpLift>,
        a: Vec<GradedForm>,
        b: Vec<GradedForm>,
    ) -> Result<Self, DeligneError> {
        if chart.n_odd() > 0 {
            return Err(DeligneError::OddChart);
        }
        check_len("pair values", groupoid.n_pairs(), h.len())?;
        check_len("connection forms", groupoid.n_morphisms(), a.len())?;
        check_len("curving forms", groupoid.n_objects(), b.len())?;
        for (i, x) in h.iter().enumerate() {
            check_form(&x.p, &chart, 0, &format!("exponent of pair {i}"))?;
        }
        for (f, x) in a.iter().enumerate() {
            check_form(x, &chart, 1, &format!("A({})", groupoid.morphism_name(f)))?;
        }
        for (o, x) in b.iter().enumerate() {
            check_form(x, &chart, 2, &format!("B({})", groupoid.object_name(o)))?;
        }
        Ok(DeligneCocycle { groupoid, chart, smooth: true, h, a, b })
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn is_smooth(&self) -> bool {
        self.smooth
    }

    /// `h(g, f)`; panics unless composable.
    pub fn h(&self, g: usize, f: usize) -> &ExpLift {
        &self.h[self.groupoid.pair_index(g, f).expect("composable pair")]
    }

    pub fn q(&self, g: usize, f: usize) -> &Phase {
        &self.h(g, f).q
    }

    pub fn h_values(&self) -> &[ExpLift] {
        &self.h
    }

    pub fn a(&self, f: usize) -> &GradedForm {
        &self.a[f]
    }

    pub fn b(&self, x: usize) -> &GradedForm {
        &self.b[x]
    }

    pub fn validate(&self) -> CocycleReport {
        let gd = &self.groupoid;
        let mut report = CocycleReport::default();
        for (g, f) in gd.composable_pairs() {
            if (gd.is_identity(g) || gd.is_identity(f)) && !self.h(g, f).is_one() {
                report.normalization.push((g, f));
            }
            if self.smooth {
                let lhs = &(&self.a[g] + &self.a[f]) - &self.a[gd.compose(g, f)];
                if lhs != self.h(g, f).dlog() {
                    report.pairs.push((g, f));
                }
            }
        }
        for (a, b, c) in gd.composable_triples() {
            let (ab, bc) = (gd.compose(a, b), gd.compose(b, c));
            let delta = self.h(a, b).div(self.h(a, bc)).mul(self.h(ab, c)).div(self.h(b, c));
            if !delta.is_one() {
                report.triples.push((a, b, c));
            }
        }
        if self.smooth {
            for f in 0..gd.n_morphisms() {
                if &self.b[gd.tgt(f)] - &self.b[gd.src(f)] != self.a[f].exterior_d() {
                    report.morphisms.push(f);
                }
            }
        }
        report
    }

    /// `h'(g, f) = h(g, f) lambda(g) lambda(f) / lambda(g.f)`, `A' = A + d log lambda + t*Pi - s*Pi`,
    /// `B' = B + d Pi`.
    pub fn apply_coboundary(&self, cob: &Coboundary) -> Result<Self, DeligneError> {
        let gd = &self.groupoid;
        check_len("coboundary phases", gd.n_morphisms(), cob.lambda.len())?;
        check_len("coboundary forms", gd.n_objects(), cob.pi.len())?;
        for (f, l) in cob.lambda.iter().enumerate() {
            check_form(&l.p, &self.chart, 0, &format!("lambda({})", gd.morphism_name(f)))?;
            if gd.is_identity(f) && !l.is_one() {
                return Err(DeligneError::NotNormalized(gd.morphism_name(f).to_string()));
            }
            if !self.smooth && !l.p.is_zero() {
                return Err(DeligneError::DiscreteDifferential);
            }
        }
        for (o, p) in cob.pi.iter().enumerate() {
            check_form(p, &self.chart, 1, &format!("Pi({})", gd.object_name(o)))?;
            if !self.smooth && !p.is_zero() {
                return Err(DeligneError::DiscreteDifferential);
            }
        }
        let h = gd
            .composable_pairs()
            .zip(&self.h)
            .map(|((g, f), x)| x.mul(&cob.lambda[g]).mul(&cob.lambda[f]).div(&cob.lambda[gd.compose(g, f)]))
            .collect();
        let a = (0..gd.n_morphisms())
            .map(|f| &(&(&self.a[f] + &cob.lambda[f].dlog()) + &cob.pi[gd.tgt(f)]) - &cob.pi[gd.src(f)])
            .collect();
        let b = (0..gd.n_objects()).map(|x| &self.b[x] + &cob.pi[x].exterior_d()).collect();
        Ok(DeligneCocycle { groupoid: self.groupoid.clone(), chart: self.chart.clone(), smooth: self.smooth, h, a, b })
    }

    pub fn three_curvature(&self) -> ThreeCurvature {
        let gd = &self.groupoid;
        let omega: Vec<GradedForm> = self.b.iter().map(GradedForm::exterior_d).collect();
        let closed = omega.iter().all(|w| w.exterior_d().is_zero());
        let invariant = (0..gd.n_morphisms()).all(|f| omega[gd.tgt(f)] == omega[gd.src(f)]);
        let note = (!self.smooth).then_some("discrete cocycle: no curving, curvature is zero");
        ThreeCurvature { omega, closed, invariant, note }
    }
}
