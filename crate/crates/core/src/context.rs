use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_CUTOFF: u32 = 20;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_POLE_MARGIN: f64 = 1e-3;

/// Evaluation environment shared by every special function: the modulus,
/// the theta series truncation and the numerical tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticContext {
    tau: Complex64,
    cutoff: u32,
    tol: f64,
    pole_margin: f64,
}

impl EllipticContext {
    pub fn new(tau: Complex64, cutoff: u32, tol: f64, pole_margin: f64) -> Result<Self> {
        if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(Error::InvalidContext(format!(
                "tau must lie in the upper half plane, got {tau}"
            )));
        }
        if cutoff < 1 {
            return Err(Error::InvalidContext("cutoff must be at least 1".into()));
        }
        if !(tol > 0.0) {
            return Err(Error::InvalidContext(format!("tol must be positive, got {tol}")));
        }
        if !(pole_margin > 0.0) {
            return Err(Error::InvalidContext(format!(
                "pole_margin must be positive, got {pole_margin}"
            )));
        }
        Ok(Self {
            tau,
            cutoff,
            tol,
            pole_margin,
        })
    }

    /// Context with the default cutoff, tolerance and pole margin.
    pub fn with_tau(tau: Complex64) -> Result<Self> {
        Self::new(tau, DEFAULT_CUTOFF, DEFAULT_TOL, DEFAULT_POLE_MARGIN)
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn pole_margin(&self) -> f64 {
        self.pole_margin
    }

    /// Same context at a different modulus (used by finite-difference checks in τ).
    pub fn at_tau(&self, tau: Complex64) -> Result<Self> {
        Self::new(tau, self.cutoff, self.tol, self.pole_margin)
    }

    /// Distance from `w` to the nearest point of the lattice Z + τZ.
    pub fn lattice_distance(&self, w: Complex64) -> f64 {
        let n0 = (w.im / self.tau.im).round();
        let mut best = f64::INFINITY;
        for dn in -1..=1 {
            let n = n0 + dn as f64;
            let shifted = w - self.tau * n;
            let m0 = shifted.re.round();
            for dm in -1..=1 {
                let d = (shifted - (m0 + dm as f64)).norm();
                best = best.min(d);
            }
        }
        best
    }

    /// Fails with [`Error::PoleProximity`] when `w` is within the pole margin of the lattice.
    pub fn require_regular(&self, what: &str, w: Complex64) -> Result<()> {
        let distance = self.lattice_distance(w);
        if distance > self.pole_margin {
            Ok(())
        } else {
            Err(Error::PoleProximity {
                what: format!("{what} = {w}"),
                distance,
                margin: self.pole_margin,
            })
        }
    }
}

pub const MAX_ORDER_HBAR: u8 = 4;
pub const MAX_ORDER_Z: u8 = 2;
pub const MAX_ORDER_TAU: u8 = 1;

/// Mixed partial derivative order: `m` in the first argument ħ, `n` in the
/// second argument z, `t` in the modulus τ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct DerivOrder {
    pub m: u8,
    pub n: u8,
    pub t: u8,
}

impl DerivOrder {
    pub const VALUE: DerivOrder = DerivOrder { m: 0, n: 0, t: 0 };

    pub const fn new(m: u8, n: u8, t: u8) -> Self {
        Self { m, n, t }
    }

    pub fn is_supported(&self) -> bool {
        self.m <= MAX_ORDER_HBAR && self.n <= MAX_ORDER_Z && self.t <= MAX_ORDER_TAU
    }

    pub fn check(&self) -> Result<()> {
        if self.is_supported() {
            Ok(())
        } else {
            Err(Error::UnsupportedOrder(self.to_string()))
        }
    }

    pub fn plus(self, other: DerivOrder) -> Self {
        Self {
            m: self.m + other.m,
            n: self.n + other.n,
            t: self.t + other.t,
        }
    }

    pub fn d_hbar(self) -> Self {
        self.plus(DerivOrder::new(1, 0, 0))
    }

    pub fn d_z(self) -> Self {
        self.plus(DerivOrder::new(0, 1, 0))
    }

    pub fn d_tau(self) -> Self {
        self.plus(DerivOrder::new(0, 0, 1))
    }
}

impl fmt::Display for DerivOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(∂ħ^{} ∂z^{} ∂τ^{})", self.m, self.n, self.t)
    }
}
