//! Numerical verification toolkit for elliptic Kronecker functions, their odd
//! (Grassmann-valued) deformations and the associated Belavin-type R-matrices.

pub mod belavin;
pub mod context;
pub mod contour;
pub mod elliptic;
pub mod error;
pub mod grassmann;
pub mod super_rmatrix;
pub mod superkron;

pub use context::{DerivOrder, EllipticContext};
pub use error::{Error, Result};
pub use grassmann::{CMatrix, Generator, GrassmannElement, Monomial, Parity, RingTag, SuperNumber};
