//! Exact polynomial differential forms on a chart, tensored with a finite Grassmann
//! algebra of parameters.
//!
//! Coefficients are Gaussian rationals. Every generator `eta_j` and `dt_i` is odd, and a
//! monomial is stored in the canonical order `eta_{j1}..eta_{jr} dt_{i1}..dt_{is}` with
//! increasing indices, so equality is structural.

pub mod chart;
pub mod coeff;
pub mod form;
pub mod matrix;
pub mod parse;
pub mod phase;
pub mod poly;
pub mod random;

pub use chart::Chart;
pub use coeff::Coeff;
pub use form::{GradedForm, Key, PolyMap, VectorField};
pub use matrix::FormMatrix;
pub use parse::parse_form;
pub use phase::Phase;
pub use poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("operands live on different charts")]
    ChartMismatch,
    #[error("polynomial degree {degree} exceeds the cap of {}", form::DEGREE_CAP)]
    DegreeCap { degree: u32 },
    #[error("a chart holds at most 32 even and 32 odd generators")]
    TooManyGenerators,
    #[error("invalid or duplicate generator name `{0}`")]
    BadName(String),
    #[error("arity mismatch: expected {expected}, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("matrix has a non-nilpotent entry")]
    NotNilpotent,
    #[error("{entries} entries do not fill a {dim}x{dim} matrix")]
    NotSquare { entries: usize, dim: usize },
    #[error("matrices have different shapes")]
    ShapeMismatch,
    #[error("form is not homogeneous of the required degree")]
    NotHomogeneous,
    #[error("parse error: {0}")]
    Parse(String),
}
