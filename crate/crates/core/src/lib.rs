//! Exact lattice computations for the Brauer class of an Enriques surface
//! pulled back to its K3 cover.
//!
//! The crate is organised bottom-up:
//!
//! - [`intlinalg`]: Smith/Hermite normal forms, integral solving, saturation
//!   and quotient groups over arbitrary-precision integers.
//! - [`lattice`]: integral lattices, signatures, orthogonal complements,
//!   discriminant groups and exact fixed-norm enumeration.
//! - [`involution`]: isometries of finite order, eigenlattices and Tate
//!   cohomology.
//! - [`mod2`]: reductions modulo 2 of even lattices and their quadratic
//!   refinement.
//! - [`enriques`]: the K3 lattice `E+E+H` with its involution, push-forward
//!   and pull-back, and the two vanishing tests for the pulled-back class.
//! - [`census`]: primitive anti-invariant vectors, hypersurface records and
//!   period-domain membership.

pub mod census;
pub mod enriques;
pub mod error;
pub mod intlinalg;
pub mod involution;
pub mod json;
pub mod lattice;
pub mod mod2;
pub mod report;

pub use error::{Error, Result};
