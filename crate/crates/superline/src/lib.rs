//! Calculus on the super line `R^{1|1}` with coordinates `(t, theta)` over a finite
//! Grassmann base.
//!
//! Base values ("Grassmann elements") are [`GradedForm`]s on a chart with no even
//! coordinates. Functions on the line are polynomial in `t`.

mod exp;
mod lemma2;
mod line;
mod rudakov;

pub use exp::{super_parallel_transport, Connection, SuperExp};
pub use lemma2::{lemma2_check, lemma2_sign, PiTxForm};
pub use line::{integrate_direct, integrate_ftc, SuperFunction, SuperInterval, SuperPoint};
pub use rudakov::{rudakov, rudakov_regression, RudakovReport};

use forms::{FormError, GradedForm};

/// Element of the Grassmann algebra of the base.
pub type Grassmann = GradedForm;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SuperError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("base chart must have no even coordinates")]
    NotABase,
    #[error("the name `{0}` is reserved for the line coordinates")]
    ReservedName(String),
    #[error("even part of a point must be even with a real rational body")]
    BadEvenPart,
    #[error("odd part of a point must be odd")]
    BadOddPart,
    #[error("incoming endpoint must not lie below the outgoing one")]
    Reversed,
    #[error("superintervals do not share the middle endpoint")]
    NotAdjacent,
    #[error("exponent must be even")]
    OddExponent,
    #[error("form is not homogeneous of degree {0} or carries Grassmann parameters")]
    NotHomogeneous(u32),
    #[error("expression depends on dt")]
    HasDifferential,
}
