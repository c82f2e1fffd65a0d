//! Finite groupoids: groups, action and pair groupoids, inertia, components and
//! equivalence checks.

mod functor;
mod group;
mod groupoid;
mod inertia;

pub use functor::Functor;
pub use group::Group;
pub use groupoid::FiniteGroupoid;
pub use inertia::InertiaGroupoid;

/// Upper bound on morphism counts accepted by constructors.
pub const MAX_MORPHISMS: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupoidError {
    #[error("multiplication table is not a group: {0}")]
    NotAGroup(String),
    #[error("object {0} has no identity morphism")]
    NoIdentity(usize),
    #[error("morphism {0} has no inverse")]
    NoInverse(usize),
    #[error("composition is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("composite of {0} and {1} has the wrong source or target")]
    BadComposite(usize, usize),
    #[error("index {0} out of range")]
    OutOfRange(usize),
    #[error("map is not a group action: {0}")]
    NotAnAction(String),
    #[error("pair groupoid needs at least one object")]
    Empty,
    #[error("not a functor: {0}")]
    NotAFunctor(String),
    #[error("{0} morphisms exceed the limit of {MAX_MORPHISMS}")]
    TooLarge(usize),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
}
