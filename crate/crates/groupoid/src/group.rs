use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::GroupoidError;

/// Finite group given by a dense multiplication table, `mul(a, b) = ab`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    n: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
    names: Vec<String>,
}

impl Group {
    /// Validates `table[a][b] = ab`: closure, identity, inverses and associativity.
    pub fn from_table(table: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Self, GroupoidError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupoidError::NotAGroup("empty table".into()));
        }
        if n > crate::MAX_MORPHISMS {
            return Err(GroupoidError::TooLarge(n));
        }
        if table.iter().any(|row| row.len() != n) {
            return Err(GroupoidError::NotAGroup("table is not square".into()));
        }
        if let Some(&bad) = table.iter().flatten().find(|&&x| x >= n) {
            return Err(GroupoidError::OutOfRange(bad));
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let at = |a: usize, b: usize| flat[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| at(e, a) == a && at(a, e) == a))
            .ok_or_else(|| GroupoidError::NotAGroup("no identity".into()))?;
        let mut inv = vec![0; n];
        for a in 0..n {
            inv[a] = (0..n)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or_else(|| GroupoidError::NotAGroup(format!("element {a} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(GroupoidError::NotAGroup(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let names = match names {
            Some(v) if v.len() == n => v,
            Some(v) => return Err(GroupoidError::NotAGroup(format!("{} names for {n} elements", v.len()))),
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        Ok(Group { n, table: flat, inv, identity, names })
    }

    /// Builds from a multiplication rule known to be a group; `0` must be the identity.
    fn trusted(n: usize, mul: impl Fn(usize, usize) -> usize, names: Vec<String>) -> Self {
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(mul(a, b));
            }
        }
        let mut inv = vec![0; n];
        for a in 0..n {
            inv[a] = (0..n).find(|&b| table[a * n + b] == 0).expect("group rule has inverses");
        }
        Group { n, table, inv, identity: 0, names }
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        Self::trusted(n, |a, b| (a + b) % n, (0..n).map(|i| i.to_string()).collect())
    }

    /// Direct product; element `i` is the pair `(i / |H|, i % |H|)` in identity-first numbering.
    pub fn product(g: &Group, h: &Group) -> Self {
        let (og, oh) = (g.identity_first(), h.identity_first());
        let (pg, ph) = (inverse_perm(&og), inverse_perm(&oh));
        let m = h.n;
        let names = (0..g.n * m).map(|i| format!("({},{})", g.names[og[i / m]], h.names[oh[i % m]])).collect();
        Self::trusted(
            g.n * m,
            |x, y| {
                let a = g.mul(og[x / m], og[y / m]);
                let b = h.mul(oh[x % m], oh[y % m]);
                pg[a] * m + ph[b]
            },
            names,
        )
    }

    fn identity_first(&self) -> Vec<usize> {
        std::iter::once(self.identity).chain((0..self.n).filter(|&a| a != self.identity)).collect()
    }

    /// `Z/n x| Z/m` with the generator of `Z/m` acting by multiplication by `r`.
    pub fn semidirect_cyclic(n: usize, m: usize, r: usize) -> Result<Self, GroupoidError> {
        if n == 0 || m == 0 {
            return Err(GroupoidError::NotAGroup("empty factor".into()));
        }
        let pow = |k: usize| (0..k).fold(1 % n, |acc, _| acc * r % n);
        if pow(m) != 1 % n {
            return Err(GroupoidError::NotAGroup(format!("{r}^{m} is not 1 mod {n}")));
        }
        let names = (0..n * m).map(|i| format!("a{}b{}", i % n, i / n)).collect();
        Ok(Self::trusted(
            n * m,
            |x, y| {
                let (a1, b1) = (x % n, x / n);
                let (a2, b2) = (y % n, y / n);
                let a = (a1 + pow(b1) * a2) % n;
                let b = (b1 + b2) % m;
                b * n + a
            },
            names,
        ))
    }

    /// Symmetries of the regular `n`-gon, of order `2n`.
    pub fn dihedral(n: usize) -> Result<Self, GroupoidError> {
        if n == 0 {
            return Err(GroupoidError::NotAGroup("dihedral group of a 0-gon".into()));
        }
        Self::semidirect_cyclic(n, 2, n - 1)
    }

    /// `{+-1, +-i, +-j, +-k}`.
    pub fn quaternion() -> Self {
        // Element 2u + s is (-1)^s times unit u in {1, i, j, k}.
        let unit = |u: usize, v: usize| -> (usize, usize) {
            match (u, v) {
                (0, w) | (w, 0) => (w, 0),
                (a, b) if a == b => (0, 1),
                (1, 2) => (3, 0),
                (2, 3) => (1, 0),
                (3, 1) => (2, 0),
                (2, 1) => (3, 1),
                (3, 2) => (1, 1),
                (1, 3) => (2, 1),
                _ => unreachable!(),
            }
        };
        let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].iter().map(|s| s.to_string()).collect();
        Self::trusted(
            8,
            |x, y| {
                let (w, s) = unit(x / 2, y / 2);
                2 * w + (x % 2 + y % 2 + s) % 2
            },
            names,
        )
    }

    /// Closure of permutations of `0..degree` under composition `(pq)(x) = p(q(x))`.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<Self, GroupoidError> {
        for g in generators {
            let distinct: BTreeSet<usize> = g.iter().copied().collect();
            if g.len() != degree || distinct.len() != degree || g.iter().any(|&x| x >= degree) {
                return Err(GroupoidError::NotAGroup(format!("{g:?} is not a permutation of {degree} points")));
            }
        }
        let compose = |p: &Vec<usize>, q: &Vec<usize>| -> Vec<usize> { q.iter().map(|&x| p[x]).collect() };
        let id: Vec<usize> = (0..degree).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in generators {
                let q = compose(g, &p);
                if seen.insert(q.clone()) {
                    if seen.len() > crate::MAX_MORPHISMS {
                        return Err(GroupoidError::TooLarge(seen.len()));
                    }
                    queue.push_back(q);
                }
            }
        }
        // Lexicographic order puts the identity first.
        let elems: Vec<Vec<usize>> = seen.into_iter().collect();
        let index: HashMap<&Vec<usize>, usize> = elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let names = elems.iter().map(|p| cycle_notation(p)).collect();
        Ok(Self::trusted(elems.len(), |a, b| index[&compose(&elems[a], &elems[b])], names))
    }

    pub fn symmetric(n: usize) -> Result<Self, GroupoidError> {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(0, 1);
            gens.push(swap);
            gens.push((0..n).map(|x| (x + 1) % n).collect());
        }
        Self::from_permutations(n.max(1), &gens)
    }

    pub fn alternating(n: usize) -> Result<Self, GroupoidError> {
        // Generated by the 3-cycles (0 1 k).
        let gens: Vec<Vec<usize>> = (2..n)
            .map(|k| {
                let mut p: Vec<usize> = (0..n).collect();
                p[0] = 1;
                p[1] = k;
                p[k] = 0;
                p
            })
            .collect();
        Self::from_permutations(n.max(1), &gens)
    }

    /// Parses `trivial`, `Z/n`, `(Z/n)^k`, `D<n>`, `Q8`, `S<n>`, `A<n>`, `Dic3`, and products joined by `x`.
    pub fn parse(spec: &str) -> Result<Self, GroupoidError> {
        let unknown = || GroupoidError::UnknownGroup(spec.to_string());
        let factors: Vec<&str> = spec.split('x').map(str::trim).collect();
        if factors.len() > 1 {
            let mut acc = Group::trivial();
            for f in factors {
                acc = Group::product(&acc, &Group::parse(f)?);
            }
            return Ok(acc);
        }
        let s = spec.trim();
        let number = |t: &str| t.parse::<usize>().ok().filter(|&k| k > 0);
        if s == "trivial" || s == "1" {
            return Ok(Group::trivial());
        }
        if s == "Q8" {
            return Ok(Group::quaternion());
        }
        if s == "Dic3" {
            return Group::semidirect_cyclic(3, 4, 2);
        }
        if let Some(rest) = s.strip_prefix("(Z/") {
            let (n, k) = rest.split_once(")^").ok_or_else(unknown)?;
            let (n, k) = (number(n).ok_or_else(unknown)?, number(k).ok_or_else(unknown)?);
            return Ok((1..k).fold(Group::cyclic(n), |acc, _| Group::product(&acc, &Group::cyclic(n))));
        }
        if let Some(n) = s.strip_prefix("Z/").and_then(number) {
            return Ok(Group::cyclic(n));
        }
        if let Some(n) = s.strip_prefix('D').and_then(number) {
            return Group::dihedral(n);
        }
        if let Some(n) = s.strip_prefix('S').and_then(number) {
            return Group::symmetric(n);
        }
        if let Some(n) = s.strip_prefix('A').and_then(number) {
            return Group::alternating(n);
        }
        Err(unknown())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Conjugacy classes, each sorted, ordered by least element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut classes = Vec::new();
        for a in 0..self.n {
            if seen[a] {
                continue;
            }
            let class: BTreeSet<usize> = (0..self.n).map(|g| self.mul(self.mul(g, a), self.inv(g))).collect();
            for &c in &class {
                seen[c] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }
}

fn inverse_perm(p: &[usize]) -> Vec<usize> {
    let mut out = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[x] = i;
    }
    out
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = vec![start + 1];
        seen[start] = true;
        let mut x = p[start];
        while x != start {
            seen[x] = true;
            cycle.push(x + 1);
            x = p[x];
        }
        let body: Vec<String> = cycle.iter().map(usize::to_string).collect();
        out.push_str(&format!("({})", body.join(" ")));
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}
