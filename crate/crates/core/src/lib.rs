//! Certifying uniqueness of Waring decompositions of symmetric tensors.
//!
//! Given `p = Σ wᵢ (aᵢ·x)^d`, [`criteria::certify`] checks that the tangent
//! spaces at the `r` points span the expected dimension, that `p` is a smooth
//! point of the secant variety (via catalecticant or Koszul flattenings), and
//! that the tangential contact locus is zero-dimensional at every point (the
//! stacked-Hessian test). The [`scan`] module runs the same pipeline on random
//! decompositions and the [`cubics`] module computes dimensions and local
//! singular loci of linear systems of cubics with prescribed double points.

pub mod criteria;
pub mod cubics;
pub mod error;
pub mod field;
pub mod flattening;
pub mod io;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod reference;
pub mod scan;
pub mod veronese;

pub use criteria::{certify, CertConfig, CertReport, Reason, Stage, Status};
pub use error::Error;
pub use field::{Field, PrimeField, RationalField, DEFAULT_PRIME};
pub use linalg::Matrix;
pub use poly::{expand_power, LinearForm, MonomialBasis, SymTensor};
pub use veronese::WaringInput;
