use num_complex::Complex64;

use super::jet::Jet;
use super::theta::{theta_jet, ThetaJet};
use crate::context::{DerivOrder, EllipticContext};
use crate::error::Result;

/// Taylor jet of φ(ħ, z; τ) = θ′(0)θ(ħ+z) / (θ(ħ)θ(z)) at one point, carrying
/// every mixed partial ∂_ħ^m ∂_z^n ∂_τ^t with m ≤ 4, n ≤ 2, t ≤ 1.
///
/// The τ direction comes from the τ-differentiated theta series, so ∂_τφ is
/// independent of the (ħ, z) derivatives.
#[derive(Debug, Clone, Copy)]
pub struct KroneckerJet {
    jet: Jet,
}

impl KroneckerJet {
    pub fn new(ctx: &EllipticContext, h: Complex64, z: Complex64) -> Result<Self> {
        ctx.require_regular("ħ", h)?;
        ctx.require_regular("z", z)?;
        ctx.require_regular("ħ+z", h + z)?;

        let origin = theta_jet(ctx, Complex64::new(0.0, 0.0))?;
        let th_h = theta_jet(ctx, h)?;
        let th_z = theta_jet(ctx, z)?;
        let th_sum = theta_jet(ctx, h + z)?;

        let numerator = Jet::from_sum(|k, t| th_sum.get(k, t));
        let norm = Jet::from_u(|k, t| if k == 0 { origin.get(1, t) } else { Complex64::new(0.0, 0.0) });
        let den_h = Jet::from_u(|k, t| th_h.get(k, t));
        let den_z = Jet::from_v(|k, t| th_z.get(k, t));

        Ok(Self {
            jet: norm * numerator * den_h.recip() * den_z.recip(),
        })
    }

    pub fn derivative(&self, order: DerivOrder) -> Result<Complex64> {
        order.check()?;
        Ok(self
            .jet
            .derivative(order.m as usize, order.n as usize, order.t as usize))
    }

    pub fn value(&self) -> Complex64 {
        self.jet.coeff(0, 0, 0)
    }
}

/// ∂_ħ^m ∂_z^n ∂_τ^t φ(ħ, z; τ).
pub fn kronecker(ctx: &EllipticContext, h: Complex64, z: Complex64, order: DerivOrder) -> Result<Complex64> {
    order.check()?;
    KroneckerJet::new(ctx, h, z)?.derivative(order)
}

/// Constant c(τ) in ℘(z) = −∂_z² log θ(z) + c(τ), fixed by ℘(z) − 1/z² → 0.
pub fn weierstrass_constant(ctx: &EllipticContext) -> Result<Complex64> {
    let origin = theta_jet(ctx, Complex64::new(0.0, 0.0))?;
    Ok(weierstrass_constant_from(&origin))
}

fn weierstrass_constant_from(origin: &ThetaJet) -> Complex64 {
    origin.get(3, 0) / (3.0 * origin.get(1, 0))
}

/// ℘(z), ℘′(z) or ℘″(z) for the lattice Z + τZ (`d` = 0, 1, 2).
pub fn weierstrass(ctx: &EllipticContext, z: Complex64, d: usize) -> Result<Complex64> {
    if d > 2 {
        return Err(crate::error::Error::UnsupportedOrder(format!("weierstrass d={d}")));
    }
    ctx.require_regular("z", z)?;
    let th = theta_jet(ctx, z)?;
    // Normalized Taylor coefficients of θ(z + s) and of log θ(z + s).
    let a: Vec<Complex64> = (0..=4).map(|k| th.get(k, 0) / super::jet::FACTORIAL[k]).collect();
    let mut b = [Complex64::new(0.0, 0.0); 5];
    for k in 1..=4 {
        let mut s = Complex64::new(0.0, 0.0);
        for j in 1..k {
            s += b[j] * a[k - j] * j as f64;
        }
        b[k] = (a[k] - s / k as f64) / a[0];
    }
    Ok(match d {
        0 => -2.0 * b[2] + weierstrass_constant(ctx)?,
        1 => -6.0 * b[3],
        _ => -24.0 * b[4],
    })
}
