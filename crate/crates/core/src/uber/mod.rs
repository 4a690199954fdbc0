//! Uberalgebras of folding maps: the Hecke braiding on the square of a
//! vector representation and its braided symmetric algebra, the Gelfand
//! model cross-check, named PBW presentations of the uberalgebras with
//! Chevalley-like relation lists, the full cross product with its Lusztig
//! braid action, verification of the structural homomorphisms, explicit
//! PBW formulas for the two-tine folding, the rank obstruction against a
//! naive relation ansatz, and the semiclassical Lie-algebra table of the
//! triality folding.

mod gelfand;
mod psi;

pub use gelfand::{gelfand_model, GelfandModel, GelfandReport};
pub use psi::{braided_factorial, build_psi, t_op, t_slot, FactorialReport, PsiOperator, PsiReport, SparseOp};

use thiserror::Error;

use crate::cartan::CartanError;
use crate::folding::FoldError;
use crate::freealg::FreeAlgError;
use crate::qrat::QratError;
use crate::rewrite::RewriteError;
use crate::uqfull::UqError;

#[derive(Debug, Error)]
pub enum UberError {
    #[error("rank {0} is too small; need at least {1}")]
    RankTooSmall(usize, usize),
    #[error("rank {0} exceeds the desk-scale bound {1}")]
    RankTooLarge(usize, usize),
    #[error("operator dimension {0} exceeds the desk-scale bound {1}")]
    DimensionTooLarge(usize, usize),
    #[error("braided factorial order {0} is outside 1..=4")]
    FactorialOrder(usize),
    #[error("the supplied operator does not satisfy the braid equation")]
    NotBraiding,
    #[error("unknown presentation id {0:?}")]
    UnknownPresentation(String),
    #[error("no quadratic straightening rule for adjacent Chevalley pair ({0}, {1})")]
    NonQuadraticPair(String, String),
    #[error("derived straightening for ({0}, {1}) is not admissible: {2}")]
    DerivedRule(String, String, String),
    #[error("unknown homomorphism id {0:?}")]
    UnknownHom(String),
    #[error("braid index {0} out of range for {1}")]
    BraidIndex(usize, String),
    #[error("structure constants violate the Jacobi identity on triple ({0}, {1}, {2})")]
    Jacobi(String, String, String),
    #[error(transparent)]
    Qrat(#[from] QratError),
    #[error(transparent)]
    FreeAlg(#[from] FreeAlgError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Uq(#[from] UqError),
    #[error(transparent)]
    Fold(#[from] FoldError),
}
