use crate::functor::Functor;
use crate::groupoid::FiniteGroupoid;

/// Inertia groupoid: objects are loops `(x, g)`, morphisms `(f, (x, g)): (x, g) -> (t(f), f g f^-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InertiaGroupoid {
    pub groupoid: FiniteGroupoid,
    /// `(x, g)` for each object, ordered by `x` then `g`.
    pub sectors: Vec<(usize, usize)>,
    /// `(f, source object)` for each morphism.
    pub arrows: Vec<(usize, usize)>,
}

impl InertiaGroupoid {
    pub fn new(parent: &FiniteGroupoid) -> Self {
        let n = parent.n_objects();
        let mut out_of: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut out_pos = vec![0; parent.n_morphisms()];
        for f in 0..parent.n_morphisms() {
            out_pos[f] = out_of[parent.src(f)].len();
            out_of[parent.src(f)].push(f);
        }
        let sectors: Vec<(usize, usize)> = (0..n).flat_map(|x| parent.loops(x).into_iter().map(move |g| (x, g))).collect();
        let sector_index = |x: usize, g: usize| -> usize {
            sectors.binary_search(&(x, g)).expect("sector exists")
        };
        let mut offset = Vec::with_capacity(sectors.len());
        let mut arrows = Vec::new();
        let mut morphisms = Vec::new();
        for (o, &(x, g)) in sectors.iter().enumerate() {
            offset.push(arrows.len());
            for &f in &out_of[x] {
                let target = sector_index(parent.tgt(f), parent.conjugate(f, g));
                arrows.push((f, o));
                morphisms.push((format!("{}|{}", parent.morphism_name(f), parent.morphism_name(g)), o, target));
            }
        }
        let objects = sectors
            .iter()
            .map(|&(x, g)| format!("({},{})", parent.object_name(x), parent.morphism_name(g)))
            .collect();
        let groupoid = FiniteGroupoid::from_rule(
            objects,
            morphisms,
            |a, b| {
                let (f2, _) = arrows[a];
                let (f1, o) = arrows[b];
                offset[o] + out_pos[parent.compose(f2, f1)]
            },
            false,
        )
        .expect("inertia of a groupoid is a groupoid");
        InertiaGroupoid { groupoid, sectors, arrows }
    }

    /// Index of the object `(x, g)`.
    pub fn sector(&self, x: usize, g: usize) -> Option<usize> {
        self.sectors.binary_search(&(x, g)).ok()
    }

    /// `p: (x, g) -> x`.
    pub fn projection(&self) -> Functor {
        Functor {
            on_objects: self.sectors.iter().map(|&(x, _)| x).collect(),
            on_morphisms: self.arrows.iter().map(|&(f, _)| f).collect(),
        }
    }

    /// `i: x -> (x, 1_x)`.
    pub fn inclusion(&self, parent: &FiniteGroupoid) -> Functor {
        let on_objects: Vec<usize> =
            (0..parent.n_objects()).map(|x| self.sector(x, parent.identity(x)).expect("identity sector")).collect();
        let on_morphisms = (0..parent.n_morphisms())
            .map(|f| {
                let o = on_objects[parent.src(f)];
                self.arrows.iter().position(|&(h, s)| h == f && s == o).expect("arrow")
            })
            .collect();
        Functor { on_objects, on_morphisms }
    }
}
