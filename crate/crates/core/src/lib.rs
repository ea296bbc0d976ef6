//! Binary sequence families with low correlation built from cyclic elliptic
//! curves over GF(2^n) and their Riemann-Roch spaces.
//!
//! The pipeline: [`curve::search_cyclic_curve`] finds a curve with a cyclic
//! group of the requested order, [`place::find_place`] picks a degree-d
//! place Q, [`riemann_roch::rr_basis`] splits L(Q) into constants and V, and
//! [`sequence::gen_family`] evaluates `Tr(z(P_j))` for every nonzero z in V
//! along the multiples of a generator. [`analysis`] measures correlation and
//! linear complexity; [`format`] reads and writes family files.

pub mod analysis;
pub mod bits;
pub mod curve;
pub mod error;
pub mod field;
pub mod format;
pub mod pipeline;
pub mod place;
pub mod riemann_roch;
pub mod sequence;

pub use bits::BitSeq;
pub use error::{Error, Result};
