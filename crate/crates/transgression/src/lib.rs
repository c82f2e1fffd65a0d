//! Skeletons of superpaths and superloops over a finite groupoid, the comparison factor
//! `Q`, loop holonomy, partition functions of twisted bundles and the reduced
//! superconnection on the inertia groupoid.

mod compare;
mod partition;
mod reduced;
mod skeleton;

pub use compare::{collapse, evaluate_q, loop_holonomy, Comparison, Transfer};
pub use partition::{
    compare_reduction, dimensional_reduction_check, exp_nilpotent, partition_function, partition_function_disjoint, PartitionValue,
    ReductionEntry, ReductionReport,
};
pub use reduced::{reduced_superconnection, ReducedSuperconnection};
pub use skeleton::{zero_connection, Segment, Skeleton, SuperLoop};

use bundles::BundleError;
use deligne::DeligneError;
use forms::FormError;
use superline::SuperError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransgressionError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Super(#[from] SuperError),
    #[error(transparent)]
    Deligne(#[from] DeligneError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error("skeleton has no segments")]
    Empty,
    #[error("expected {expected} {what}, found {found}")]
    Length { what: &'static str, expected: usize, found: usize },
    #[error("no {what} with index {index}")]
    Index { what: &'static str, index: usize },
    #[error("jump {0} does not connect its segments")]
    Jump(usize),
    #[error("segment {0} does not start where the previous one ends")]
    NotAdjacent(usize),
    #[error("split point lies outside segment {0}")]
    SplitOutside(usize),
    #[error("skeleton is not closed")]
    Open,
    #[error("incompatible skeletons: {0}")]
    Incompatible(String),
    #[error("comparison moves an endpoint of an open skeleton")]
    NotGlobular,
    #[error("dimension mismatch along jump {0}")]
    Dimension(usize),
    #[error("invalid bundle: {0}")]
    InvalidBundle(String),
    #[error("needs a smooth cocycle")]
    Discrete,
}
