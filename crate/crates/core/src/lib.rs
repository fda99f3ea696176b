//! Best constants in abstract Hardy inequalities over finite measure
//! spaces with ordered cores.
//!
//! The pipeline: a [`spaces::CoreMap`] turns a weighted index set into a
//! chain of nested sets; [`minorant`] computes greatest core-decreasing
//! minorants and their transport description; [`transition`] moves the
//! data to an atomic measure on the half line; [`hardy`] evaluates the
//! closed best-constant formulas for `p = 1` and the tail/ball
//! conditions for `p > 1`; [`oracle`] verifies everything against
//! independent brute force (point-mass duals, an exact rational linear
//! program, and direct quotient maximization); [`metric`] specializes to
//! anchored balls in finite metric measure spaces.
//!
//! All aggregation is exact rational arithmetic; binary64 enters only
//! where a fractional power is unavoidable.

pub mod check;
pub mod error;
pub mod hardy;
pub mod lp;
pub mod metric;
pub mod minorant;
pub mod oracle;
pub mod problem;
pub mod rational;
pub mod spaces;
pub mod transition;

pub use error::{Error, Result};
pub use hardy::{
    condition_p_le_q, condition_q_lt_p, decompose_eta, l1_best_constant, reduce_to_halfline,
    ConstantEstimate, ConstantKind, Exponents, HardyProblem, OuterExponent, QltPRegime,
};
pub use minorant::{greatest_minorant, push_mass_witness, variational_value, MinorantResult};
pub use oracle::{exact_norm_p1, lp_variational, maximize_ratio, ratio, OracleNorm, RatioReport};
pub use rational::{ExtRat, Rat};
pub use spaces::{CoreMap, InducedCore, MeasureSpace, OrderedCore, ScalarField};
pub use transition::{LineField, LineMeasure};
