use crate::group::Group;
use crate::GroupoidError;

/// Finite groupoid with dense ids. Composition is stored per fiber: `g . f` is looked up
/// in the row of `g` at the position of `f` among the morphisms into `src(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    object_names: Vec<String>,
    morphism_names: Vec<String>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    into: Vec<Vec<usize>>,
    pos: Vec<usize>,
    table: Vec<Vec<usize>>,
    pair_offset: Vec<usize>,
    identity: Vec<usize>,
    inverse: Vec<usize>,
}

impl FiniteGroupoid {
    /// Validated construction from an explicit table: `compose[g][f] = Some(g . f)` exactly
    /// when `src(g) = tgt(f)`.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<(String, usize, usize)>,
        compose: &[Vec<Option<usize>>],
    ) -> Result<Self, GroupoidError> {
        let m = morphisms.len();
        if compose.len() != m || compose.iter().any(|row| row.len() != m) {
            return Err(GroupoidError::NotAGroup("composition table has the wrong shape".into()));
        }
        for (g, (_, sg, _)) in morphisms.iter().enumerate() {
            for (f, (_, _, tf)) in morphisms.iter().enumerate() {
                if compose[g][f].is_some() != (sg == tf) {
                    return Err(GroupoidError::BadComposite(g, f));
                }
            }
        }
        Self::from_rule(objects, morphisms, |g, f| compose[g][f].expect("checked composable"), true)
    }

    /// Builds from a composition rule called on composable pairs only.
    pub(crate) fn from_rule(
        objects: Vec<String>,
        morphisms: Vec<(String, usize, usize)>,
        compose: impl Fn(usize, usize) -> usize,
        check_associative: bool,
    ) -> Result<Self, GroupoidError> {
        let m = morphisms.len();
        if m > crate::MAX_MORPHISMS {
            return Err(GroupoidError::TooLarge(m));
        }
        let n = objects.len();
        let mut morphism_names = Vec::with_capacity(m);
        let (mut src, mut tgt) = (Vec::with_capacity(m), Vec::with_capacity(m));
        for (name, s, t) in morphisms {
            if s >= n || t >= n {
                return Err(GroupoidError::OutOfRange(s.max(t)));
            }
            morphism_names.push(name);
            src.push(s);
            tgt.push(t);
        }
        let mut into = vec![Vec::new(); n];
        let mut pos = vec![0; m];
        for f in 0..m {
            pos[f] = into[tgt[f]].len();
            into[tgt[f]].push(f);
        }
        let mut table = Vec::with_capacity(m);
        for g in 0..m {
            let mut row = Vec::with_capacity(into[src[g]].len());
            for &f in &into[src[g]] {
                let h = compose(g, f);
                if h >= m {
                    return Err(GroupoidError::OutOfRange(h));
                }
                if src[h] != src[f] || tgt[h] != tgt[g] {
                    return Err(GroupoidError::BadComposite(g, f));
                }
                row.push(h);
            }
            table.push(row);
        }
        let mut pair_offset = Vec::with_capacity(m + 1);
        pair_offset.push(0);
        for row in &table {
            pair_offset.push(pair_offset.last().unwrap() + row.len());
        }
        let mut gd = FiniteGroupoid {
            object_names: objects,
            morphism_names,
            src,
            tgt,
            into,
            pos,
            table,
            pair_offset,
            identity: vec![0; n],
            inverse: vec![0; m],
        };
        for x in 0..n {
            gd.identity[x] = gd
                .hom(x, x)
                .into_iter()
                .find(|&e| {
                    gd.into[x].iter().all(|&f| gd.compose(e, f) == f)
                        && (0..m).filter(|&g| gd.src[g] == x).all(|g| gd.compose(g, e) == g)
                })
                .ok_or(GroupoidError::NoIdentity(x))?;
        }
        for f in 0..m {
            let (x, y) = (gd.src[f], gd.tgt[f]);
            gd.inverse[f] = gd
                .hom(y, x)
                .into_iter()
                .find(|&h| gd.compose(h, f) == gd.identity[x] && gd.compose(f, h) == gd.identity[y])
                .ok_or(GroupoidError::NoInverse(f))?;
        }
        if check_associative {
            for (h, g, f) in gd.composable_triples() {
                if gd.compose(gd.compose(h, g), f) != gd.compose(h, gd.compose(g, f)) {
                    return Err(GroupoidError::NotAssociative(h, g, f));
                }
            }
        }
        Ok(gd)
    }

    /// One object; morphisms are the group elements.
    pub fn from_group(group: &Group) -> Self {
        let morphisms = group.elements().map(|a| (group.name(a).to_string(), 0, 0)).collect();
        Self::from_rule(vec!["*".into()], morphisms, |g, f| group.mul(g, f), false).expect("groups are groupoids")
    }

    /// `X // G`: objects are points, morphism `x * |G| + g` is `(g, x): x -> g x`.
    pub fn action_groupoid(group: &Group, points: Vec<String>, action: &[Vec<usize>]) -> Result<Self, GroupoidError> {
        let n = points.len();
        let k = group.order();
        if action.len() != k || action.iter().any(|row| row.len() != n || row.iter().any(|&y| y >= n)) {
            return Err(GroupoidError::NotAnAction("table must list g.x for every g and x".into()));
        }
        if (0..n).any(|x| action[group.identity()][x] != x) {
            return Err(GroupoidError::NotAnAction("identity moves a point".into()));
        }
        for g in group.elements() {
            for h in group.elements() {
                for x in 0..n {
                    if action[g][action[h][x]] != action[group.mul(g, h)][x] {
                        return Err(GroupoidError::NotAnAction(format!("g.(h.x) != (gh).x at g={g}, h={h}, x={x}")));
                    }
                }
            }
        }
        let mut morphisms = Vec::with_capacity(n * k);
        for x in 0..n {
            for g in group.elements() {
                morphisms.push((format!("{}@{}", group.name(g), points[x]), x, action[g][x]));
            }
        }
        // (h, g x) . (g, x) = (hg, x)
        Self::from_rule(points, morphisms, |h, f| (f / k) * k + group.mul(h % k, f % k), false)
    }

    /// Objects `1..n`, one morphism `j -> i` with id `(i-1) n + (j-1)` for each pair.
    pub fn pair_groupoid(n: usize) -> Result<Self, GroupoidError> {
        if n == 0 {
            return Err(GroupoidError::Empty);
        }
        let objects = (1..=n).map(|i| i.to_string()).collect();
        let mut morphisms = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                morphisms.push((format!("{}<-{}", i + 1, j + 1), j, i));
            }
        }
        // (i <- j) . (j <- l) = (i <- l)
        Self::from_rule(objects, morphisms, |g, f| (g / n) * n + f % n, false)
    }

    /// Objects and morphisms of `other` are numbered after those of `self`.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let (n, m) = (self.n_objects(), self.n_morphisms());
        let objects = self.object_names.iter().chain(&other.object_names).cloned().collect();
        let mut morphisms: Vec<(String, usize, usize)> =
            (0..m).map(|f| (self.morphism_names[f].clone(), self.src[f], self.tgt[f])).collect();
        morphisms.extend((0..other.n_morphisms()).map(|f| (other.morphism_names[f].clone(), other.src[f] + n, other.tgt[f] + n)));
        Self::from_rule(
            objects,
            morphisms,
            |g, f| if g < m { self.compose(g, f) } else { other.compose(g - m, f - m) + m },
            false,
        )
        .expect("union of groupoids")
    }

    /// Full subgroupoid on `objects` (kept in the given order) with its inclusion functor.
    pub fn full_subgroupoid(&self, objects: &[usize]) -> (Self, crate::Functor) {
        let names = objects.iter().map(|&x| self.object_names[x].clone()).collect();
        let local = |x: usize| objects.iter().position(|&o| o == x);
        let kept: Vec<usize> = (0..self.n_morphisms())
            .filter(|&f| local(self.src[f]).is_some() && local(self.tgt[f]).is_some())
            .collect();
        let morphisms = kept
            .iter()
            .map(|&f| (self.morphism_names[f].clone(), local(self.src[f]).unwrap(), local(self.tgt[f]).unwrap()))
            .collect();
        let sub = Self::from_rule(
            names,
            morphisms,
            |g, f| kept.binary_search(&self.compose(kept[g], kept[f])).expect("full subgroupoid is closed"),
            false,
        )
        .expect("full subgroupoid");
        (sub, crate::Functor { on_objects: objects.to_vec(), on_morphisms: kept })
    }

    pub fn n_objects(&self) -> usize {
        self.object_names.len()
    }

    pub fn n_morphisms(&self) -> usize {
        self.src.len()
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.object_names[x]
    }

    pub fn morphism_name(&self, f: usize) -> &str {
        &self.morphism_names[f]
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.object_names.iter().position(|o| o == name)
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.morphism_names.iter().position(|o| o == name)
    }

    pub fn src(&self, f: usize) -> usize {
        self.src[f]
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.tgt[f]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identity[x]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identity[self.src[f]] == f
    }

    pub fn inverse(&self, f: usize) -> usize {
        self.inverse[f]
    }

    pub fn composable(&self, g: usize, f: usize) -> bool {
        self.src[g] == self.tgt[f]
    }

    /// `g . f`; panics unless `src(g) = tgt(f)`.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        assert!(self.composable(g, f), "morphisms {g} and {f} are not composable");
        self.table[g][self.pos[f]]
    }

    pub fn try_compose(&self, g: usize, f: usize) -> Option<usize> {
        self.composable(g, f).then(|| self.table[g][self.pos[f]])
    }

    /// `f g f^-1` for a loop `g` at `src(f)`.
    pub fn conjugate(&self, f: usize, g: usize) -> usize {
        self.compose(self.compose(f, g), self.inverse[f])
    }

    /// Morphisms `x -> y` in increasing id order.
    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        self.into[y].iter().copied().filter(|&f| self.src[f] == x).collect()
    }

    pub fn loops(&self, x: usize) -> Vec<usize> {
        self.hom(x, x)
    }

    pub fn morphisms_into(&self, x: usize) -> &[usize] {
        &self.into[x]
    }

    /// Number of composable pairs.
    pub fn n_pairs(&self) -> usize {
        *self.pair_offset.last().unwrap_or(&0)
    }

    /// Dense index of a composable pair, in the order of [`Self::composable_pairs`].
    pub fn pair_index(&self, g: usize, f: usize) -> Option<usize> {
        self.composable(g, f).then(|| self.pair_offset[g] + self.pos[f])
    }

    /// Pairs `(g, f)` with `src(g) = tgt(f)`.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n_morphisms()).flat_map(move |g| self.into[self.src[g]].iter().map(move |&f| (g, f)))
    }

    /// Triples `(h, g, f)` composable as `h . g . f`.
    pub fn composable_triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.composable_pairs().flat_map(move |(h, g)| self.into[self.src[g]].iter().map(move |&f| (h, g, f)))
    }

    /// Components as sorted object lists, ordered by least object.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.n_objects();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for f in 0..self.n_morphisms() {
            let (a, b) = (find(&mut parent, self.src[f]), find(&mut parent, self.tgt[f]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for x in 0..n {
            let r = find(&mut parent, x);
            if slot[r] == usize::MAX {
                slot[r] = comps.len();
                comps.push(Vec::new());
            }
            comps[slot[r]].push(x);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// `Aut(x)` as a group; element `i` is the `i`-th loop at `x`.
    pub fn automorphism_group(&self, x: usize) -> Group {
        let loops = self.loops(x);
        let index = |f: usize| loops.iter().position(|&l| l == f).expect("loop");
        let table = loops.iter().map(|&a| loops.iter().map(|&b| index(self.compose(a, b))).collect()).collect();
        let names = loops.iter().map(|&f| self.morphism_names[f].clone()).collect();
        Group::from_table(table, Some(names)).expect("automorphisms form a group")
    }
}
