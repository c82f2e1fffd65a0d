use deligne::{DeligneCocycle, ExpLift};
use groupoid::FiniteGroupoid;
use superline::{super_parallel_transport, Connection, SuperExp};

use crate::skeleton::{Skeleton, SuperLoop};
use crate::TransgressionError;

/// Data over one segment of a compatible comparison: the morphism from the source chart
/// to the target chart, and the connection pulled back along it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transfer {
    pub morphism: usize,
    pub connection: Connection,
}

/// Morphism between skeletons over the same loop or path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// `fine` subdivides `coarse` with identity jumps; the underlying map is the identity.
    Refinement { fine: Skeleton, coarse: Skeleton },
    /// Same triangulation, segment `i` of `source` moved into the chart of segment `i` of
    /// `target` by `transfers[i]`.
    Compatible { source: Skeleton, target: Skeleton, transfers: Vec<Transfer> },
    Inverse(Box<Comparison>),
    /// Applied left to right.
    Composite(Vec<Comparison>),
}

impl Comparison {
    /// Identity transfers with zero connections.
    pub fn identity(gd: &FiniteGroupoid, sk: &Skeleton) -> Result<Self, TransgressionError> {
        let zero = crate::skeleton::zero_connection(sk.base())?;
        let transfers = sk.segments().iter().map(|s| Transfer { morphism: gd.identity(s.object), connection: zero.clone() }).collect();
        Ok(Comparison::Compatible { source: sk.clone(), target: sk.clone(), transfers })
    }

    /// Target of moving `source` along `morphisms` (one per segment), with jumps conjugated
    /// to match.
    pub fn transport(gd: &FiniteGroupoid, source: &Skeleton, transfers: Vec<Transfer>) -> Result<Self, TransgressionError> {
        let n = source.segments().len();
        if transfers.len() != n {
            return Err(TransgressionError::Length { what: "transfers", expected: n, found: transfers.len() });
        }
        for (i, t) in transfers.iter().enumerate() {
            if t.morphism >= gd.n_morphisms() || gd.src(t.morphism) != source.segments()[i].object {
                return Err(TransgressionError::Incompatible(format!("transfer {i}")));
            }
        }
        let segments = source
            .segments()
            .iter()
            .zip(&transfers)
            .map(|(s, t)| crate::skeleton::Segment { object: gd.tgt(t.morphism), ..s.clone() })
            .collect();
        let jumps = source
            .jumps()
            .iter()
            .enumerate()
            .map(|(k, &j)| {
                let (before, after) = (transfers[k].morphism, transfers[(k + 1) % n].morphism);
                gd.compose(gd.compose(after, j), gd.inverse(before))
            })
            .collect();
        let target = Skeleton::new(gd, segments, jumps, source.is_closed())?;
        Ok(Comparison::Compatible { source: source.clone(), target, transfers })
    }

    pub fn source(&self) -> Result<Skeleton, TransgressionError> {
        match self {
            Comparison::Refinement { fine, .. } => Ok(fine.clone()),
            Comparison::Compatible { source, .. } => Ok(source.clone()),
            Comparison::Inverse(c) => c.target(),
            Comparison::Composite(cs) => cs.first().ok_or(TransgressionError::Empty)?.source(),
        }
    }

    pub fn target(&self) -> Result<Skeleton, TransgressionError> {
        match self {
            Comparison::Refinement { coarse, .. } => Ok(coarse.clone()),
            Comparison::Compatible { target, .. } => Ok(target.clone()),
            Comparison::Inverse(c) => c.source(),
            Comparison::Composite(cs) => cs.last().ok_or(TransgressionError::Empty)?.target(),
        }
    }
}

fn lift(base: &std::sync::Arc<forms::Chart>, h: &ExpLift) -> SuperExp {
    // Skeletons sit over the origin of the cocycle chart.
    SuperExp { phase: h.q.clone(), log: h.p.constant_term(), nil: forms::GradedForm::zero(base) }
}

fn check_refinement(gd: &FiniteGroupoid, fine: &Skeleton, coarse: &Skeleton) -> Result<(), TransgressionError> {
    let bad = |msg: &str| Err(TransgressionError::Incompatible(format!("not a refinement: {msg}")));
    fine.check(gd)?;
    coarse.check(gd)?;
    if fine.is_closed() != coarse.is_closed() {
        return bad("closedness");
    }
    let mut k = 0;
    for (i, c) in coarse.segments().iter().enumerate() {
        let start = k;
        loop {
            let Some(f) = fine.segments().get(k) else { return bad("runs out of segments") };
            if f.object != c.object || f.connection != c.connection {
                return bad("segment data");
            }
            if k > start && !gd.is_identity(fine.jumps()[k - 1]) {
                return bad("jump inside a block");
            }
            k += 1;
            if f.interval.out_point == c.interval.out_point {
                break;
            }
        }
        if fine.segments()[start].interval.in_point != c.interval.in_point {
            return bad("block start");
        }
        if i < coarse.jumps().len() && k - 1 < fine.jumps().len() && fine.jumps()[k - 1] != coarse.jumps()[i] {
            return bad("jump between blocks");
        }
    }
    if k != fine.segments().len() {
        return bad("extra segments");
    }
    Ok(())
}

fn compatible(c: &DeligneCocycle, source: &Skeleton, target: &Skeleton, transfers: &[Transfer]) -> Result<SuperExp, TransgressionError> {
    let gd = c.groupoid();
    source.check(gd)?;
    target.check(gd)?;
    let n = source.segments().len();
    let bad = |msg: String| Err(TransgressionError::Incompatible(msg));
    if target.segments().len() != n || transfers.len() != n || source.is_closed() != target.is_closed() {
        return bad("shapes differ".into());
    }
    let base = source.base();
    let mut value = SuperExp::one(base);
    for (i, ((s, t), tr)) in source.segments().iter().zip(target.segments()).zip(transfers).enumerate() {
        if s.interval != t.interval {
            return bad(format!("segment {i} intervals differ"));
        }
        if tr.morphism >= gd.n_morphisms() || gd.src(tr.morphism) != s.object || gd.tgt(tr.morphism) != t.object {
            return bad(format!("transfer {i} endpoints"));
        }
        value = value.mul(&super_parallel_transport(&tr.connection, &s.interval)?);
    }
    if !source.is_closed() && (!gd.is_identity(transfers[0].morphism) || !gd.is_identity(transfers[n - 1].morphism)) {
        return Err(TransgressionError::NotGlobular);
    }
    for (k, (&j, &jt)) in source.jumps().iter().zip(target.jumps()).enumerate() {
        let (before, after) = (transfers[k].morphism, transfers[(k + 1) % n].morphism);
        if gd.compose(after, j) != gd.compose(jt, before) {
            return bad(format!("square at jump {}", k + 1));
        }
        value = value.mul(&lift(base, &c.h(after, j).div(c.h(jt, before))));
    }
    Ok(value)
}

/// `Q(lambda)`: transports along the segments of the source times the gerbe factors
/// `h(a_k, j_k) / h(j'_k, b_{k-1})`; refinements give one.
pub fn evaluate_q(lambda: &Comparison, c: &DeligneCocycle) -> Result<SuperExp, TransgressionError> {
    match lambda {
        Comparison::Refinement { fine, coarse } => {
            check_refinement(c.groupoid(), fine, coarse)?;
            Ok(SuperExp::one(fine.base()))
        }
        Comparison::Compatible { source, target, transfers } => compatible(c, source, target, transfers),
        Comparison::Inverse(inner) => Ok(evaluate_q(inner, c)?.inverse()),
        Comparison::Composite(parts) => {
            let first = parts.first().ok_or(TransgressionError::Empty)?;
            let mut value = SuperExp::one(first.source()?.base());
            for (k, part) in parts.iter().enumerate() {
                if k > 0 && parts[k - 1].target()? != part.source()? {
                    return Err(TransgressionError::Incompatible(format!("composite breaks at {k}")));
                }
                value = value.mul(&evaluate_q(part, c)?);
            }
            Ok(value)
        }
    }
}

/// Phase identifying `L_{j_n} .. L_{j_1}` with `L_hol` by repeated gerbe multiplication.
pub fn collapse(c: &DeligneCocycle, jumps: &[usize]) -> ExpLift {
    let gd = c.groupoid();
    let chart = c.chart();
    let mut acc = ExpLift::one(chart);
    let Some((&first, rest)) = jumps.split_first() else { return acc };
    let mut prefix = first;
    for &j in rest {
        acc = acc.mul(c.h(j, prefix));
        prefix = gd.compose(j, prefix);
    }
    acc
}

/// Transports along the segments times the collapse phase, a coordinate on `L_hol`.
pub fn loop_holonomy(k: &SuperLoop, c: &DeligneCocycle) -> Result<SuperExp, TransgressionError> {
    let sk = &k.skeleton;
    sk.check(c.groupoid())?;
    let base = sk.base();
    let mut value = lift(base, &collapse(c, sk.jumps()));
    for s in sk.segments() {
        value = value.mul(&super_parallel_transport(&s.connection, &s.interval)?);
    }
    Ok(value)
}
