//! latlab: exact-arithmetic toolkit for even integral lattices.
//!
//! The crate has four layers:
//!
//! - [`linalg`]: arbitrary-precision dense matrices with Smith/Hermite normal
//!   forms, exact determinants, and rational solving.
//! - [`lattice`]: even nondegenerate lattices given by Gram matrices,
//!   sublattices with saturation and orthogonal complements, discriminant
//!   groups with their torsion quadratic forms, and the standard lattices of
//!   K3 geometry.
//! - [`glue`]: gluing groups of primitive orthogonal decompositions,
//!   unimodular glue isomorphisms, anti-isometry verification, and overlattice
//!   reconstruction from glue data.
//! - [`k3`]: Mukai vectors, moduli-space lattice invariants (divisibility,
//!   gluing order, Picard discriminant, fineness), and the genus-g
//!   comparison of the two natural moduli spaces that exhibits non-isomorphic
//!   derived-equivalent pairs.
//!
//! [`oracle`] provides independent brute-force recomputations (naive
//! determinants, full quotient enumeration) used by the randomized
//! verification campaigns, and [`jsonio`] fixes the exact JSON wire format
//! used by the CLI.

pub mod error;
pub mod glue;
pub mod jsonio;
pub mod k3;
pub mod lattice;
pub mod linalg;
pub mod oracle;

pub use error::{Error, Result};
