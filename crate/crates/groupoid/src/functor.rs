use crate::groupoid::FiniteGroupoid;
use crate::GroupoidError;

/// Functor between finite groupoids given on object and morphism ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    pub on_objects: Vec<usize>,
    pub on_morphisms: Vec<usize>,
}

impl Functor {
    pub fn identity(g: &FiniteGroupoid) -> Self {
        Functor { on_objects: (0..g.n_objects()).collect(), on_morphisms: (0..g.n_morphisms()).collect() }
    }

    /// Sends everything to the single object of `target`, each morphism to its identity.
    pub fn collapse(source: &FiniteGroupoid, target: &FiniteGroupoid, object: usize) -> Self {
        Functor { on_objects: vec![object; source.n_objects()], on_morphisms: vec![target.identity(object); source.n_morphisms()] }
    }

    /// Checks sources, targets, identities and composition.
    pub fn validate(&self, source: &FiniteGroupoid, target: &FiniteGroupoid) -> Result<(), GroupoidError> {
        if self.on_objects.len() != source.n_objects() || self.on_morphisms.len() != source.n_morphisms() {
            return Err(GroupoidError::NotAFunctor("wrong number of images".into()));
        }
        if self.on_objects.iter().any(|&y| y >= target.n_objects()) || self.on_morphisms.iter().any(|&h| h >= target.n_morphisms()) {
            return Err(GroupoidError::NotAFunctor("image out of range".into()));
        }
        for f in 0..source.n_morphisms() {
            let h = self.on_morphisms[f];
            if target.src(h) != self.on_objects[source.src(f)] || target.tgt(h) != self.on_objects[source.tgt(f)] {
                return Err(GroupoidError::NotAFunctor(format!("morphism {f} lands between the wrong objects")));
            }
        }
        for x in 0..source.n_objects() {
            if self.on_morphisms[source.identity(x)] != target.identity(self.on_objects[x]) {
                return Err(GroupoidError::NotAFunctor(format!("identity at {x} not preserved")));
            }
        }
        for (g, f) in source.composable_pairs() {
            if self.on_morphisms[source.compose(g, f)] != target.compose(self.on_morphisms[g], self.on_morphisms[f]) {
                return Err(GroupoidError::NotAFunctor(format!("composition of {g} and {f} not preserved")));
            }
        }
        Ok(())
    }

    /// True iff the functor is fully faithful and essentially surjective.
    pub fn check_morita(&self, source: &FiniteGroupoid, target: &FiniteGroupoid) -> Result<bool, GroupoidError> {
        self.validate(source, target)?;
        for x in 0..source.n_objects() {
            for y in 0..source.n_objects() {
                let mut images: Vec<usize> = source.hom(x, y).iter().map(|&f| self.on_morphisms[f]).collect();
                images.sort_unstable();
                images.dedup();
                let expected = target.hom(self.on_objects[x], self.on_objects[y]).len();
                if images.len() != source.hom(x, y).len() || images.len() != expected {
                    return Ok(false);
                }
            }
        }
        let comps = target.connected_components();
        let hit = comps.iter().all(|c| c.iter().any(|y| self.on_objects.contains(y)));
        Ok(hit)
    }
}
