//! Second cohomology of finite groups from the normalized bar complex.
//!
//! Both coefficient systems come out of the integral complex `C^1 -> C^2 -> C^3`:
//! the torsion of `coker(d2)` gives `H^3(G; Z)`, which is `H^2(G; U(1))`, and
//! `H^2(G; Z/n)` splits as `Tor(H^3(G; Z), Z/n)` plus `coker(d1|ker d2) (x) Z/n`.

use num_integer::Integer;

use forms::Phase;
use groupoid::Group;

use crate::snf::{smith, IntMatrix, Track};
use crate::DeligneError;

/// A normalized group 2-cochain as a full table `q[a][b]` in Q/Z.
pub type PhaseTable = Vec<Vec<Phase>>;

struct Bar<'g> {
    group: &'g Group,
    /// Non-identity elements.
    elems: Vec<usize>,
    /// Index into `elems`, `None` for the identity.
    idx: Vec<Option<usize>>,
}

impl<'g> Bar<'g> {
    fn new(group: &'g Group) -> Self {
        let elems: Vec<usize> = group.elements().filter(|&a| a != group.identity()).collect();
        let mut idx = vec![None; group.order()];
        for (i, &a) in elems.iter().enumerate() {
            idx[a] = Some(i);
        }
        Bar { group, elems, idx }
    }

    fn k(&self) -> usize {
        self.elems.len()
    }

    fn pair(&self, a: usize, b: usize) -> Option<usize> {
        Some(self.idx[a]? * self.k() + self.idx[b]?)
    }

    /// `(d lambda)(a, b) = lambda(a) + lambda(b) - lambda(ab)`.
    fn d1(&self) -> IntMatrix {
        let k = self.k();
        let mut m = vec![vec![0i128; k]; k * k];
        for &a in &self.elems {
            for &b in &self.elems {
                let row = &mut m[self.pair(a, b).unwrap()];
                row[self.idx[a].unwrap()] += 1;
                row[self.idx[b].unwrap()] += 1;
                if let Some(j) = self.idx[self.group.mul(a, b)] {
                    row[j] -= 1;
                }
            }
        }
        m
    }

    /// `(d c)(a, b, c) = c(b, c) - c(ab, c) + c(a, bc) - c(a, b)`.
    fn d2(&self) -> IntMatrix {
        let k = self.k();
        let g = self.group;
        let mut m = Vec::with_capacity(k * k * k);
        for &a in &self.elems {
            for &b in &self.elems {
                for &c in &self.elems {
                    let mut row = vec![0i128; k * k];
                    let terms = [(b, c, 1), (g.mul(a, b), c, -1), (a, g.mul(b, c), 1), (a, b, -1)];
                    for (x, y, s) in terms {
                        if let Some(j) = self.pair(x, y) {
                            row[j] += s;
                        }
                    }
                    m.push(row);
                }
            }
        }
        m
    }

    /// Expand coordinates on normalized pairs into a full table of `v / denom`.
    fn table(&self, values: &[i128], denom: i128) -> PhaseTable {
        let n = self.group.order();
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| match self.pair(a, b) {
                        Some(j) => phase(values[j], denom),
                        None => Phase::zero(),
                    })
                    .collect()
            })
            .collect()
    }
}

fn phase(num: i128, den: i128) -> Phase {
    let r = num.rem_euclid(den);
    Phase::from_ratio(r as i64, den as i64)
}

fn column(m: &IntMatrix, j: usize) -> Vec<i128> {
    m.iter().map(|row| row[j]).collect()
}

/// `H^2(G; Z/n)` with one representative cocycle per invariant factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H2 {
    pub n: u64,
    /// Invariant factors greater than one, each dividing the next.
    pub divisors: Vec<u64>,
    /// Representative cocycles, values `z / n`.
    pub generators: Vec<PhaseTable>,
}

impl H2 {
    /// Order of the group.
    pub fn order(&self) -> u64 {
        self.divisors.iter().product()
    }

    /// `sum_i c_i * generator_i`.
    pub fn cocycle(&self, coeffs: &[i64]) -> Result<PhaseTable, DeligneError> {
        combine(&self.generators, coeffs)
    }
}

/// `H^2(G; U(1))` (the Schur multiplier) with representative cocycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct U1Classes {
    pub divisors: Vec<u64>,
    pub generators: Vec<PhaseTable>,
}

impl U1Classes {
    pub fn order(&self) -> u64 {
        self.divisors.iter().product()
    }

    pub fn cocycle(&self, coeffs: &[i64]) -> Result<PhaseTable, DeligneError> {
        combine(&self.generators, coeffs)
    }

    /// Every coefficient vector, one per class, in lexicographic order.
    pub fn classes(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for &d in &self.divisors {
            out = out.into_iter().flat_map(|v| (0..d as i64).map(move |c| [v.clone(), vec![c]].concat())).collect();
        }
        out
    }
}

fn combine(generators: &[PhaseTable], coeffs: &[i64]) -> Result<PhaseTable, DeligneError> {
    if coeffs.len() != generators.len() {
        return Err(DeligneError::Length { what: "class coefficients", expected: generators.len(), found: coeffs.len() });
    }
    let zero: Option<PhaseTable> = None;
    let mut acc = zero;
    for (g, &c) in generators.iter().zip(coeffs) {
        let term: PhaseTable = g.iter().map(|row| row.iter().map(|q| q.times(c)).collect()).collect();
        acc = Some(match acc {
            None => term,
            Some(a) => a.iter().zip(&term).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect(),
        });
    }
    Ok(acc.unwrap_or_default())
}

pub fn group_h2(group: &Group, n: u64) -> Result<H2, DeligneError> {
    if n < 2 {
        return Err(DeligneError::Modulus);
    }
    let bar = Bar::new(group);
    let k = bar.k();
    let nn = n as i128;
    if k == 0 {
        return Ok(H2 { n, divisors: vec![], generators: vec![] });
    }
    let c2 = k * k;
    let s2 = smith(&bar.d2(), c2, Track { right: true, right_inv: true, ..Track::default() });
    let v = s2.right.as_ref().unwrap();
    let v_inv = s2.right_inv.as_ref().unwrap();
    let r = s2.rank;

    // Raw cyclic summands as (order, y-coordinates).
    let mut raw: Vec<(i128, Vec<i128>)> = Vec::new();
    for i in 0..r {
        let g = s2.diag[i].gcd(&nn);
        if g > 1 {
            let mut y = vec![0; c2];
            y[i] = nn / g;
            raw.push((g, y));
        }
    }
    // Image of d1 sits in coordinates r.. because d2 d1 = 0.
    let d1 = bar.d1();
    let m: IntMatrix = v_inv[r..]
        .iter()
        .map(|row| (0..k).map(|j| (0..c2).fold(0i128, |acc, t| acc + row[t] * d1[t][j])).collect())
        .collect();
    let s1 = smith(&m, k, Track { left_inv: true, ..Track::default() });
    let u1_inv = s1.left_inv.as_ref().unwrap();
    for j in 0..c2 - r {
        let d = s1.diag.get(j).copied().unwrap_or(0);
        let g = d.gcd(&nn);
        if g > 1 {
            let mut y = vec![0; c2];
            for (t, x) in column(u1_inv, j).into_iter().enumerate() {
                y[r + t] = x;
            }
            raw.push((g, y));
        }
    }
    // Regroup into invariant factors.
    let rel: IntMatrix = (0..raw.len()).map(|i| (0..raw.len()).map(|j| if i == j { raw[i].0 } else { 0 }).collect()).collect();
    let s3 = smith(&rel, raw.len(), Track { left_inv: true, ..Track::default() });
    let w = s3.left_inv.as_ref().unwrap();
    let mut divisors = Vec::new();
    let mut generators = Vec::new();
    for (j, &d) in s3.diag.iter().enumerate() {
        if d <= 1 {
            continue;
        }
        let y: Vec<i128> = (0..c2).map(|t| raw.iter().enumerate().map(|(i, (_, yi))| (w[i][j] * yi[t]).rem_euclid(nn)).sum()).collect();
        let z: Vec<i128> = (0..c2).map(|t| (0..c2).map(|s| (v[t][s] % nn) * y[s] % nn).sum::<i128>().rem_euclid(nn)).collect();
        divisors.push(d as u64);
        generators.push(bar.table(&z, nn));
    }
    Ok(H2 { n, divisors, generators })
}

/// Schur multiplier with a representative U(1)-cocycle per invariant factor.
pub fn u1_classes(group: &Group) -> U1Classes {
    let bar = Bar::new(group);
    let k = bar.k();
    if k == 0 {
        return U1Classes { divisors: vec![], generators: vec![] };
    }
    let s2 = smith(&bar.d2(), k * k, Track { right: true, ..Track::default() });
    let v = s2.right.as_ref().unwrap();
    let mut divisors = Vec::new();
    let mut generators = Vec::new();
    for i in 0..s2.rank {
        let e = s2.diag[i];
        if e > 1 {
            divisors.push(e as u64);
            generators.push(bar.table(&column(v, i), e));
        }
    }
    U1Classes { divisors, generators }
}

/// Solve `d lambda = q` in Q/Z with `lambda(1) = 0`, searching `lambda` in `(1/N) Z` for
/// `N = |G| * den(q)` and then once more for `N * |G|`.
pub fn u1_coboundary(group: &Group, q: &PhaseTable) -> Option<Vec<Phase>> {
    let bar = Bar::new(group);
    let k = bar.k();
    if k == 0 {
        return Some(vec![Phase::zero(); group.order()]);
    }
    let den = q
        .iter()
        .flatten()
        .map(|p| i128::try_from(p.order()).expect("denominator fits"))
        .fold(1i128, |a, b| a.lcm(&b));
    let d1 = bar.d1();
    let s = smith(&d1, k, Track { left: true, right: true, ..Track::default() });
    let (u, v) = (s.left.as_ref().unwrap(), s.right.as_ref().unwrap());
    let order = group.order() as i128;
    for modulus in [den * order, den * order * order] {
        let mut b = vec![0i128; k * k];
        for &a in &bar.elems {
            for &c in &bar.elems {
                let p = q[a][c].value();
                let scaled = p * num_rational::BigRational::from_integer(modulus.into());
                b[bar.pair(a, c).unwrap()] = i128::try_from(scaled.to_integer()).expect("fits");
            }
        }
        if let Some(mu) = solve_mod(u, v, &s.diag, s.rank, &b, modulus) {
            let mut lambda = vec![Phase::zero(); group.order()];
            for (i, &a) in bar.elems.iter().enumerate() {
                lambda[a] = phase(mu[i], modulus);
            }
            return Some(lambda);
        }
    }
    None
}

/// Solve `A x = b (mod m)` given `U A V = diag`.
fn solve_mod(u: &IntMatrix, v: &IntMatrix, diag: &[i128], rank: usize, b: &[i128], m: i128) -> Option<Vec<i128>> {
    let ub: Vec<i128> = u.iter().map(|row| row.iter().zip(b).map(|(x, y)| (x % m) * y % m).sum::<i128>().rem_euclid(m)).collect();
    let cols = v.len();
    let mut w = vec![0i128; cols];
    for (i, &c) in ub.iter().enumerate() {
        if i < rank {
            let s = diag[i];
            let g = s.gcd(&m);
            if c % g != 0 {
                return None;
            }
            let mg = m / g;
            let inv = (s / g).extended_gcd(&mg).x.rem_euclid(mg);
            w[i] = (c / g) % mg * inv % mg;
        } else if c != 0 {
            return None;
        }
    }
    Some(v.iter().map(|row| row.iter().zip(&w).map(|(x, y)| (x % m) * y % m).sum::<i128>().rem_euclid(m)).collect())
}
