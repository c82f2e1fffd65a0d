//! Gerbe data as cocycles `(h, A, B)` on finite groupoids, twist classes of finite groups,
//! and transgression to a line bundle on the inertia groupoid.

mod cocycle;
mod h2;
mod lift;
pub mod random;
pub mod snf;
mod transgress;

pub use cocycle::{empty_chart, Coboundary, CocycleReport, DeligneCocycle, ThreeCurvature};
pub use h2::{group_h2, u1_classes, u1_coboundary, PhaseTable, U1Classes, H2};
pub use lift::ExpLift;
pub use transgress::{FlatSection, TransgressedLine};

use forms::FormError;
use groupoid::GroupoidError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DeligneError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error("expected {expected} {what}, found {found}")]
    Length { what: &'static str, expected: usize, found: usize },
    #[error("{0} must be a {1}-form")]
    Degree(String, u32),
    #[error("smooth cocycles need a chart without Grassmann parameters")]
    OddChart,
    #[error("coboundary is nontrivial on the identity {0}")]
    NotNormalized(String),
    #[error("a discrete cocycle cannot take differential data")]
    DiscreteDifferential,
    #[error("modulus must be at least 2")]
    Modulus,
    #[error("invalid cocycle: {0}")]
    Invalid(String),
    #[error("the two holonomy formulas disagree on {0}")]
    Mismatch(String),
}
