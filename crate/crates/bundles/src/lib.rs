//! Twisted vector bundles over finite groupoids: validation, curvature, twisted Chern
//! characters on the inertia groupoid, flat sections and concordances.

mod bundle;
mod chern;
mod irreps;
mod monomial;
mod section;

pub use bundle::{supertrace, BundleReport, TwistedBundle};
pub use chern::{ch_equivariance_check, chern_character, ChernCharacter, EPSILON};
pub use irreps::{irreducible_projective_reps, ProjectiveRep, MAX_ORDER};
pub use monomial::{gaussian, root_of_unity, CMatrix, Monomial};
pub use section::{concordance_witness, flat_sections, is_closed, rank, twisted_differential, Concordance, FlatBasis, InertiaSection, CONCORDANCE_VAR};

use deligne::DeligneError;
use forms::FormError;

/// Tolerance for floating point comparisons of representation matrices.
pub const TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BundleError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Deligne(#[from] DeligneError),
    #[error("expected {expected} {what}, found {found}")]
    Length { what: &'static str, expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("operation needs a bundle with superconnection")]
    Discrete,
    #[error("operation is only defined for discrete bundles")]
    Smooth,
    #[error("smooth bundles need monomial matrices with entries in {{1, i, -1, -i}}")]
    Inexact,
    #[error("bundles are twisted by different cocycles")]
    CocycleMismatch,
    #[error("invalid bundle: {0}")]
    Invalid(String),
    #[error("section is not closed")]
    NotClosed,
    #[error("groupoid has more than one object")]
    NotAGroup,
    #[error("group of order {0} is too large")]
    TooLarge(usize),
    #[error("eigenspace decomposition did not separate the irreducibles; retry with another seed")]
    NotConverged,
}
