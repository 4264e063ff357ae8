//! Exact linear algebra over `Q` and `Q(i)` together with the homological
//! machinery built on top of it: chain complexes, weight filtrations and
//! their spectral pages, mixed Hodge structures and complexes, truncation
//! zig-zags witnessing formality, and nonsymmetric operads / graded monoids
//! that transport those witnesses across composition maps.
//!
//! Every computation is exact: scalars are arbitrary-precision rationals or
//! Gaussian rationals, subspaces are kept in canonical reduced row echelon
//! form, and all verdicts (purity, quasi-isomorphism, axiom checks) are
//! decided by subspace identities with no tolerances.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so concurrent reads are safe throughout.

pub mod bigraded;
pub mod complex;
pub mod error;
pub mod filtration;
pub mod fixtures;
pub mod io;
pub mod jordan;
pub mod matrix;
pub mod mhc;
pub mod mhs;
pub mod operad;
pub mod purity;
pub mod scalar;
pub mod spectral;
pub mod splitting;
pub mod subspace;
pub mod truncation;
pub mod witness;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use scalar::{Field, GaussRat, Rat, Scalar};
pub use subspace::Subspace;
