use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::kronecker::KroneckerJet;
use crate::context::{DerivOrder, EllipticContext};
use crate::error::Result;

/// A scalar identity residual together with the magnitude of the largest
/// summand that went into it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarResidual {
    pub value: Complex64,
    pub scale: f64,
}

impl ScalarResidual {
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.value.norm() / self.scale
        } else {
            self.value.norm()
        }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.value.norm() < tol * self.scale
    }
}

fn from_terms(terms: &[Complex64]) -> ScalarResidual {
    ScalarResidual {
        value: terms.iter().sum(),
        scale: terms.iter().map(|t| t.norm()).fold(0.0, f64::max),
    }
}

struct FayJets {
    a: KroneckerJet,
    b: KroneckerJet,
    c: KroneckerJet,
    d: KroneckerJet,
    e: KroneckerJet,
    f: KroneckerJet,
}

fn fay_jets(
    ctx: &EllipticContext,
    h1: Complex64,
    h2: Complex64,
    z1: Complex64,
    z2: Complex64,
    z3: Complex64,
) -> Result<FayJets> {
    let (z12, z23, z31) = (z1 - z2, z2 - z3, z3 - z1);
    Ok(FayJets {
        a: KroneckerJet::new(ctx, h1, z12)?,
        b: KroneckerJet::new(ctx, h2, z23)?,
        c: KroneckerJet::new(ctx, -h2, z31)?,
        d: KroneckerJet::new(ctx, h1 - h2, z12)?,
        e: KroneckerJet::new(ctx, h2 - h1, z23)?,
        f: KroneckerJet::new(ctx, -h1, z31)?,
    })
}

/// φ(ħ₁, z₁₂)φ(ħ₂, z₂₃) + φ(−ħ₂, z₃₁)φ(ħ₁−ħ₂, z₁₂) + φ(ħ₂−ħ₁, z₂₃)φ(−ħ₁, z₃₁).
pub fn fay_residual(
    ctx: &EllipticContext,
    h1: Complex64,
    h2: Complex64,
    z1: Complex64,
    z2: Complex64,
    z3: Complex64,
) -> Result<ScalarResidual> {
    let j = fay_jets(ctx, h1, h2, z1, z2, z3)?;
    Ok(from_terms(&[
        j.a.value() * j.b.value(),
        j.c.value() * j.d.value(),
        j.e.value() * j.f.value(),
    ]))
}

/// ∂_{ħ₁} of [`fay_residual`], each term differentiated analytically.
pub fn fay_residual_dh1(
    ctx: &EllipticContext,
    h1: Complex64,
    h2: Complex64,
    z1: Complex64,
    z2: Complex64,
    z3: Complex64,
) -> Result<ScalarResidual> {
    let j = fay_jets(ctx, h1, h2, z1, z2, z3)?;
    let d1 = DerivOrder::new(1, 0, 0);
    Ok(from_terms(&[
        j.a.derivative(d1)? * j.b.value(),
        j.c.value() * j.d.derivative(d1)?,
        -j.e.derivative(d1)? * j.f.value(),
        -j.e.value() * j.f.derivative(d1)?,
    ]))
}

/// 2πi ∂_τφ − ∂_z∂_ħφ at (ħ, z).
pub fn heat_residual(ctx: &EllipticContext, h: Complex64, z: Complex64) -> Result<ScalarResidual> {
    let jet = KroneckerJet::new(ctx, h, z)?;
    let lhs = 2.0 * PI * Complex64::i() * jet.derivative(DerivOrder::new(0, 0, 1))?;
    let rhs = jet.derivative(DerivOrder::new(1, 1, 0))?;
    Ok(from_terms(&[lhs, -rhs]))
}
