use std::sync::Arc;

use forms::coeff::{self, Rat};
use forms::{Chart, GradedForm};
use groupoid::FiniteGroupoid;
use superline::{Connection, SuperFunction, SuperInterval, SuperPoint};

use crate::TransgressionError;

/// One chart-level piece of a skeleton: an interval `[b, a]` mapped into the chart of
/// `object`, with the pulled back connection on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub object: usize,
    pub interval: SuperInterval,
    pub connection: Connection,
}

impl Segment {
    /// Segment with the zero connection.
    pub fn flat(object: usize, interval: SuperInterval) -> Result<Self, TransgressionError> {
        let connection = zero_connection(interval.base())?;
        Ok(Segment { object, interval, connection })
    }

    /// Reduced length `body(a) - body(b)`.
    pub fn length(&self) -> Rat {
        self.interval.in_point.body() - self.interval.out_point.body()
    }
}

pub fn zero_connection(base: &Arc<Chart>) -> Result<Connection, TransgressionError> {
    let zero = SuperFunction::zero(base)?;
    Ok(Connection { a_t: zero.clone(), a_theta: zero })
}

/// Segments `I_0, I_1, ..` with jumps `j_k: b_{k-1} -> a_k`.
///
/// Consecutive segments share the point `b_{k-1} = a_k`, so the parameter decreases along
/// the skeleton. A closed skeleton has one more jump `b_{n-1} -> a_0`; its endpoints
/// differ by the circumference in the even coordinate only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    segments: Vec<Segment>,
    jumps: Vec<usize>,
    closed: bool,
}

impl Skeleton {
    pub fn new(gd: &FiniteGroupoid, segments: Vec<Segment>, jumps: Vec<usize>, closed: bool) -> Result<Self, TransgressionError> {
        let sk = Skeleton { segments, jumps, closed };
        sk.check(gd)?;
        Ok(sk)
    }

    /// One segment `[0, length]` at `src(g)` closed up by `g`.
    pub fn constant_loop(gd: &FiniteGroupoid, base: &Arc<Chart>, g: usize, length: Rat) -> Result<Self, TransgressionError> {
        if g >= gd.n_morphisms() {
            return Err(TransgressionError::Index { what: "morphism", index: g });
        }
        let interval = SuperInterval::new(SuperPoint::real(base, Rat::from_integer(0.into()))?, SuperPoint::real(base, length)?)?;
        Skeleton::new(gd, vec![Segment::flat(gd.src(g), interval)?], vec![g], true)
    }

    /// Checks indices, jump endpoints and the matching of consecutive endpoints.
    pub fn check(&self, gd: &FiniteGroupoid) -> Result<(), TransgressionError> {
        let n = self.segments.len();
        if n == 0 {
            return Err(TransgressionError::Empty);
        }
        let expected = if self.closed { n } else { n - 1 };
        if self.jumps.len() != expected {
            return Err(TransgressionError::Length { what: "jumps", expected, found: self.jumps.len() });
        }
        let base = self.base();
        for s in &self.segments {
            if s.object >= gd.n_objects() {
                return Err(TransgressionError::Index { what: "object", index: s.object });
            }
            if s.interval.base() != base || s.connection.a_t.base() != base || s.connection.a_theta.base() != base {
                return Err(forms::FormError::ChartMismatch.into());
            }
        }
        for (k, &j) in self.jumps.iter().enumerate() {
            if j >= gd.n_morphisms() {
                return Err(TransgressionError::Index { what: "morphism", index: j });
            }
            let (before, after) = (&self.segments[k], &self.segments[(k + 1) % n]);
            if gd.src(j) != before.object || gd.tgt(j) != after.object {
                return Err(TransgressionError::Jump(k + 1));
            }
        }
        for k in 1..n {
            if self.segments[k].interval.in_point != self.segments[k - 1].interval.out_point {
                return Err(TransgressionError::NotAdjacent(k));
            }
        }
        if self.closed {
            let (first, last) = (&self.segments[0].interval.in_point, &self.segments[n - 1].interval.out_point);
            if first.odd != last.odd || first.body() <= last.body() {
                return Err(TransgressionError::NotAdjacent(0));
            }
        }
        Ok(())
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// `jumps()[k - 1]` is `j_k`.
    pub fn jumps(&self) -> &[usize] {
        &self.jumps
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn base(&self) -> &Arc<Chart> {
        self.segments[0].interval.base()
    }

    /// Sum of the reduced segment lengths.
    pub fn length(&self) -> Rat {
        self.segments.iter().map(Segment::length).sum()
    }

    /// Splits segment `index` at `point`; the upper half keeps the index, an identity jump
    /// joins it to the lower half.
    pub fn refine(&self, gd: &FiniteGroupoid, index: usize, point: SuperPoint) -> Result<Self, TransgressionError> {
        let s = self.segments.get(index).ok_or(TransgressionError::Index { what: "segment", index })?;
        let (lo, hi) = (s.interval.out_point.body(), s.interval.in_point.body());
        if point.base() != self.base() || point.body() <= lo || point.body() >= hi {
            return Err(TransgressionError::SplitOutside(index));
        }
        let upper = Segment { interval: SuperInterval::new(point.clone(), s.interval.in_point.clone())?, ..s.clone() };
        let lower = Segment { interval: SuperInterval::new(s.interval.out_point.clone(), point)?, ..s.clone() };
        let mut segments = self.segments.clone();
        segments.splice(index..=index, [upper, lower]);
        let mut jumps = self.jumps.clone();
        jumps.insert(index, gd.identity(s.object));
        Skeleton::new(gd, segments, jumps, self.closed)
    }

    /// Closed skeletons only: start at segment 1; the old first segment moves down by the
    /// circumference.
    pub fn rotate(&self, gd: &FiniteGroupoid) -> Result<Self, TransgressionError> {
        if !self.closed {
            return Err(TransgressionError::Open);
        }
        let n = self.segments.len();
        let last = &self.segments[n - 1].interval.out_point;
        let first = &self.segments[0].interval;
        let period = &first.in_point.even - &last.even;
        let shift = |p: &SuperPoint| SuperPoint::new(&p.even - &period, p.odd.clone());
        let moved = Segment {
            object: self.segments[0].object,
            interval: SuperInterval::new(shift(&first.out_point)?, shift(&first.in_point)?)?,
            connection: shift_connection(&self.segments[0].connection, &period)?,
        };
        let mut segments = self.segments[1..].to_vec();
        segments.push(moved);
        let mut jumps = self.jumps[1..].to_vec();
        jumps.push(self.jumps[0]);
        Skeleton::new(gd, segments, jumps, true)
    }
}

/// `A(t) -> A(t + period)`, for the same connection on the translated segment.
fn shift_connection(a: &Connection, period: &GradedForm) -> Result<Connection, TransgressionError> {
    let shift = |u: &SuperFunction| -> Result<SuperFunction, TransgressionError> {
        let line = u.line();
        let odd: Vec<GradedForm> = (0..line.n_odd()).map(|j| GradedForm::odd(line, j)).collect();
        let t = &GradedForm::var(line, 0) + &period.substitute(line, &[], &odd)?;
        let f = u.f().substitute(line, std::slice::from_ref(&t), &odd)?;
        let g = u.g().substitute(line, &[t], &odd)?;
        Ok(SuperFunction::new(u.base(), f, g)?)
    };
    Ok(Connection { a_t: shift(&a.a_t)?, a_theta: shift(&a.a_theta)? })
}

/// A closed skeleton with its holonomy `j_n ... j_1`, an automorphism of the first object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperLoop {
    pub skeleton: Skeleton,
    pub holonomy: usize,
}

impl SuperLoop {
    pub fn new(gd: &FiniteGroupoid, skeleton: Skeleton) -> Result<Self, TransgressionError> {
        skeleton.check(gd)?;
        if !skeleton.closed {
            return Err(TransgressionError::Open);
        }
        let holonomy = skeleton.jumps.iter().fold(gd.identity(skeleton.segments[0].object), |acc, &j| gd.compose(j, acc));
        Ok(SuperLoop { skeleton, holonomy })
    }

    pub fn constant(gd: &FiniteGroupoid, base: &Arc<Chart>, g: usize) -> Result<Self, TransgressionError> {
        SuperLoop::new(gd, Skeleton::constant_loop(gd, base, g, coeff::rat(1, 1))?)
    }

    pub fn base_object(&self) -> usize {
        self.skeleton.segments[0].object
    }
}
