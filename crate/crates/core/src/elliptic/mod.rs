//! Theta function, Kronecker function and Weierstrass ℘, plus the scalar
//! Fay and heat identity residuals.

pub mod jet;
pub mod kronecker;
pub mod residuals;
pub mod theta;

pub use kronecker::{kronecker, weierstrass, weierstrass_constant, KroneckerJet};
pub use residuals::{fay_residual, fay_residual_dh1, heat_residual, ScalarResidual};
pub use theta::{theta, theta_jet, ThetaJet};
