//! The five-coefficient odd Kronecker ansatz
//!
//! Φ = A₁(ζ₁−ζ₂)φ + A₂ω∂ħφ + A₃ζ₁ζ₂ω∂τφ + A₄ζ₁ζ₂μ∂ħφ + (A₅/2)(ζ₁+ζ₂)μω∂ħ²φ,
//!
//! with φ = φ(ħ, z₁−z₂), and residuals of the identities it may satisfy.

mod scan;
mod series;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::context::{DerivOrder, EllipticContext};
use crate::contour::residue_nodes;
use crate::elliptic::KroneckerJet;
use crate::error::{Error, Result};
use crate::grassmann::{Generator, Monomial, SuperNumber};

pub use scan::{constraint_scan, ScanCategory, ScanReport, ScanSample, ScanTally};
pub use series::{SuperResidual, SuperSeries};

const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * PI);

/// Defect `|x − y|` relative to the larger side (or absolute near zero).
pub(crate) fn relative_gap(x: Complex64, y: Complex64) -> f64 {
    (x - y).norm() / x.norm().max(y.norm()).max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsatzCoefficients {
    pub a1: Complex64,
    pub a2: Complex64,
    pub a3: Complex64,
    pub a4: Complex64,
    pub a5: Complex64,
}

impl AnsatzCoefficients {
    pub const CANONICAL: AnsatzCoefficients = AnsatzCoefficients {
        a1: Complex64::new(1.0, 0.0),
        a2: Complex64::new(1.0, 0.0),
        a3: TWO_PI_I,
        a4: Complex64::new(1.0, 0.0),
        a5: Complex64::new(1.0, 0.0),
    };

    pub const TRUNCATED: AnsatzCoefficients = AnsatzCoefficients {
        a1: Complex64::new(1.0, 0.0),
        a2: Complex64::new(1.0, 0.0),
        a3: TWO_PI_I,
        a4: Complex64::new(0.0, 0.0),
        a5: Complex64::new(0.0, 0.0),
    };

    pub fn new(a1: Complex64, a2: Complex64, a3: Complex64, a4: Complex64, a5: Complex64) -> Self {
        Self { a1, a2, a3, a4, a5 }
    }

    pub fn from_array(a: [Complex64; 5]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4])
    }

    pub fn to_array(&self) -> [Complex64; 5] {
        [self.a1, self.a2, self.a3, self.a4, self.a5]
    }

    pub fn scaled(&self, lambda: Complex64) -> Self {
        Self::from_array(self.to_array().map(|a| a * lambda))
    }

    /// A₁A₅ − A₂A₄.
    pub fn fay_defect(&self) -> Complex64 {
        self.a1 * self.a5 - self.a2 * self.a4
    }

    pub fn fay_compatible(&self, tol: f64) -> bool {
        relative_gap(self.a1 * self.a5, self.a2 * self.a4) <= tol
    }

    /// A₁ = A₂ = A₄ = A₅ and A₃ = 2πiA₁.
    pub fn boundary_compatible(&self, tol: f64) -> bool {
        [self.a2, self.a4, self.a5].iter().all(|a| relative_gap(*a, self.a1) <= tol)
            && relative_gap(self.a3, TWO_PI_I * self.a1) <= tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatParams {
    pub k: Complex64,
    pub kappa: Complex64,
}

impl HeatParams {
    pub fn new(k: Complex64, kappa: Complex64) -> Self {
        Self { k, kappa }
    }

    /// κA₂ = A₁, κA₃ = 2πiA₁, A₄ = kA₁, κA₅ = kA₁.
    pub fn heat_compatible(&self, a: &AnsatzCoefficients, tol: f64) -> bool {
        let (k, kappa) = (self.k, self.kappa);
        relative_gap(kappa * a.a2, a.a1) <= tol
            && relative_gap(kappa * a.a3, TWO_PI_I * a.a1) <= tol
            && relative_gap(a.a4, k * a.a1) <= tol
            && relative_gap(kappa * a.a5, k * a.a1) <= tol
    }

    /// The coefficients solving the heat constraints for a given A₁ (κ ≠ 0).
    pub fn solution(&self, a1: Complex64) -> Result<AnsatzCoefficients> {
        if self.kappa.norm() == 0.0 {
            return Err(Error::InvalidArgument("kappa must be nonzero".into()));
        }
        let inv = 1.0 / self.kappa;
        Ok(AnsatzCoefficients::new(a1, a1 * inv, TWO_PI_I * a1 * inv, self.k * a1, self.k * a1 * inv))
    }
}

fn require_degree(what: &str, x: &SuperNumber, keep: impl Fn(u32) -> bool, expect: &str) -> Result<()> {
    match x.terms().find(|(m, _)| !keep(m.degree())) {
        Some((m, _)) => Err(Error::InvalidArgument(format!("{what} must be {expect}, has monomial {m}"))),
        None => Ok(()),
    }
}

/// Degree-one (odd linear) element check for ζ and μ arguments.
pub(crate) fn require_linear(what: &str, x: &SuperNumber) -> Result<()> {
    require_degree(what, x, |d| d == 1, "linear in the odd generators")
}

/// A point of superspace: an even coordinate z + z_soul and its odd partner ζ.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperArgument {
    z: Complex64,
    z_soul: SuperNumber,
    zeta: SuperNumber,
}

impl SuperArgument {
    pub fn new(z: Complex64, z_soul: SuperNumber, zeta: SuperNumber) -> Result<Self> {
        require_degree("z soul", &z_soul, |d| d > 0 && d % 2 == 0, "even and nilpotent")?;
        require_linear("zeta", &zeta)?;
        Ok(Self { z, z_soul, zeta })
    }

    /// Point with no soul and ζ a bare generator.
    pub fn plain(z: Complex64, zeta: Generator) -> Self {
        Self {
            z,
            z_soul: SuperNumber::zero_scalar(),
            zeta: SuperNumber::generator(zeta),
        }
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn z_soul(&self) -> &SuperNumber {
        &self.z_soul
    }

    pub fn zeta(&self) -> &SuperNumber {
        &self.zeta
    }

    /// z → z + 1.
    pub fn unit_shift(&self) -> Self {
        Self {
            z: self.z + 1.0,
            ..self.clone()
        }
    }

    /// z → z + τ + 2πiζω, ζ → ζ + 2πiω.
    pub fn tau_shift(&self, tau: Complex64) -> Self {
        let omega = SuperNumber::generator(Generator::OMEGA);
        let zeta_omega = (self.zeta() * &omega).scale(TWO_PI_I);
        Self {
            z: self.z + tau,
            z_soul: &self.z_soul + &zeta_omega,
            zeta: &self.zeta + &omega.scale(TWO_PI_I),
        }
    }
}

/// The ansatz as a series in derivatives of φ(ħ, z_{ij}).
pub fn ansatz_series(a: &AnsatzCoefficients, mu: &SuperNumber, zi: &SuperNumber, zj: &SuperNumber) -> SuperSeries {
    let omega = SuperNumber::generator(Generator::OMEGA);
    let zz = zi * zj;
    SuperSeries::new()
        .with((zi - zj).scale(a.a1), DerivOrder::VALUE)
        .with(omega.scale(a.a2), DerivOrder::new(1, 0, 0))
        .with((&zz * &omega).scale(a.a3), DerivOrder::new(0, 0, 1))
        .with((&zz * mu).scale(a.a4), DerivOrder::new(1, 0, 0))
        .with((&(&(zi + zj) * mu) * &omega).scale(a.a5 * 0.5), DerivOrder::new(2, 0, 0))
}

/// Φ^{ħ|μ}(p₁, p₂ | A) with its summand scale.
pub fn super_phi_with_scale(
    ctx: &EllipticContext,
    a: &AnsatzCoefficients,
    h: Complex64,
    mu: &SuperNumber,
    p1: &SuperArgument,
    p2: &SuperArgument,
) -> Result<SuperResidual> {
    require_linear("mu", mu)?;
    let jet = KroneckerJet::new(ctx, h, p1.z - p2.z)?;
    let soul = p1.z_soul() - p2.z_soul();
    ansatz_series(a, mu, p1.zeta(), p2.zeta()).evaluate_shifted(&soul, |o| jet.derivative(o))
}

pub fn super_phi(
    ctx: &EllipticContext,
    a: &AnsatzCoefficients,
    h: Complex64,
    mu: &SuperNumber,
    p1: &SuperArgument,
    p2: &SuperArgument,
) -> Result<SuperNumber> {
    Ok(super_phi_with_scale(ctx, a, h, mu, p1, p2)?.value)
}

/// Φ₁₂^{ħ₁|μ₁}Φ₂₃^{ħ₂|μ₂} + Φ₃₁^{−ħ₂|−μ₂}Φ₁₂^{ħ₁−ħ₂|μ₁−μ₂} + Φ₂₃^{ħ₂−ħ₁|μ₂−μ₁}Φ₃₁^{−ħ₁|−μ₁},
/// with ζ₁, ζ₂, ζ₃ attached to z₁, z₂, z₃.
#[allow(clippy::too_many_arguments)]
pub fn super_fay_residual(
    ctx: &EllipticContext,
    a: &AnsatzCoefficients,
    h1: Complex64,
    h2: Complex64,
    mu1: &SuperNumber,
    mu2: &SuperNumber,
    z1: Complex64,
    z2: Complex64,
    z3: Complex64,
) -> Result<SuperResidual> {
    let p = [
        SuperArgument::plain(z1, Generator::ZETA1),
        SuperArgument::plain(z2, Generator::ZETA2),
        SuperArgument::plain(z3, Generator::ZETA3),
    ];
    let phi = |h: Complex64, mu: &SuperNumber, i: usize, j: usize| super_phi_with_scale(ctx, a, h, mu, &p[i], &p[j]);
    let t1 = phi(h1, mu1, 0, 1)?.product(&phi(h2, mu2, 1, 2)?)?;
    let t2 = phi(-h2, &-mu2, 2, 0)?.product(&phi(h1 - h2, &(mu1 - mu2), 0, 1)?)?;
    let t3 = phi(h2 - h1, &(mu2 - mu1), 1, 2)?.product(&phi(-h1, &-mu1, 2, 0)?)?;
    t1.sum(&t2)?.sum(&t3)
}

/// (κ∂ω + 2πi(ζ₁+ζ₂)∂τ)Φ − (∂ζ₁ + ζ₁∂z₁ − (k/2)μ∂ħ)∂ħΦ.
#[allow(clippy::too_many_arguments)]
pub fn super_heat_residual(
    ctx: &EllipticContext,
    a: &AnsatzCoefficients,
    params: &HeatParams,
    h: Complex64,
    mu_gen: Generator,
    z1: Complex64,
    z2: Complex64,
    zeta1: Generator,
    zeta2: Generator,
) -> Result<SuperResidual> {
    if zeta1 == zeta2 || mu_gen == zeta1 || mu_gen == zeta2 || Generator::OMEGA == mu_gen {
        return Err(Error::InvalidArgument("heat residual needs distinct ζ₁, ζ₂, μ and ω".into()));
    }
    let (zeta1_el, zeta2_el) = (SuperNumber::generator(zeta1), SuperNumber::generator(zeta2));
    let mu = SuperNumber::generator(mu_gen);
    let phi = ansatz_series(a, &mu, &zeta1_el, &zeta2_el);
    let lhs = phi
        .gderiv(Generator::OMEGA)
        .scale(params.kappa)
        .plus(&phi.d_tau().left_mul(&(&zeta1_el + &zeta2_el).scale(TWO_PI_I)));
    let dh = phi.d_hbar();
    let rhs = dh
        .gderiv(zeta1)
        .plus(&dh.d_z().left_mul(&zeta1_el))
        .minus(&dh.d_hbar().left_mul(&mu).scale(params.k * 0.5));
    let jet = KroneckerJet::new(ctx, h, z1 - z2)?;
    lhs.minus(&rhs).evaluate(|o| jet.derivative(o))
}

/// Residuals of the quasi-periodicity relations in z₁ and z₂.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryResiduals {
    pub z1_unit: SuperResidual,
    pub z2_unit: SuperResidual,
    pub z1_tau: SuperResidual,
    pub z2_tau: SuperResidual,
}

impl BoundaryResiduals {
    pub fn all(&self) -> [&SuperResidual; 4] {
        [&self.z1_unit, &self.z2_unit, &self.z1_tau, &self.z2_tau]
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.all().iter().all(|r| r.holds(tol))
    }
}

/// Boundary residuals with ζ₁, ζ₂ attached to z₁, z₂. The odd parameter `mu`
/// may be zero for the μ-free case.
pub fn super_boundary_residuals(
    ctx: &EllipticContext,
    a: &AnsatzCoefficients,
    h: Complex64,
    mu: &SuperNumber,
    z1: Complex64,
    z2: Complex64,
) -> Result<BoundaryResiduals> {
    let p1 = SuperArgument::plain(z1, Generator::ZETA1);
    let p2 = SuperArgument::plain(z2, Generator::ZETA2);
    let base = super_phi_with_scale(ctx, a, h, mu, &p1, &p2)?;
    let z1_unit = super_phi_with_scale(ctx, a, h, mu, &p1.unit_shift(), &p2)?.difference(&base)?;
    let z2_unit = super_phi_with_scale(ctx, a, h, mu, &p1, &p2.unit_shift())?.difference(&base)?;

    let omega = SuperNumber::generator(Generator::OMEGA);
    let omega_mu = &omega * mu;
    let tau = ctx.tau();

    // exp(−2πi(ħ + ζ₁μ + πiωμ)); the odd products are ordered with μ on the right.
    let e1 = (&(&SuperNumber::scalar(h) + &(p1.zeta() * mu)) + &omega_mu.scale(Complex64::new(0.0, PI)))
        .scale(-TWO_PI_I)
        .gexp()?;
    let lhs1 = super_phi_with_scale(ctx, a, h, mu, &p1.tau_shift(tau), &p2)?;
    let z1_tau = lhs1.difference(&scaled_by(&e1, &base))?;

    // exp(2πi(ħ + ζ₂μ + πiωμ))
    let e2 = (&(&SuperNumber::scalar(h) + &(p2.zeta() * mu)) + &omega_mu.scale(Complex64::new(0.0, PI)))
        .scale(TWO_PI_I)
        .gexp()?;
    let lhs2 = super_phi_with_scale(ctx, a, h, mu, &p1, &p2.tau_shift(tau))?;
    let z2_tau = lhs2.difference(&scaled_by(&e2, &base))?;

    Ok(BoundaryResiduals {
        z1_unit,
        z2_unit,
        z1_tau,
        z2_tau,
    })
}

fn scaled_by(factor: &SuperNumber, x: &SuperResidual) -> SuperResidual {
    SuperResidual::new(factor * &x.value, factor.max_magnitude() * x.scale)
}

/// Contour residue of Φ in z₁ around z₂ on a circle of the given radius.
pub fn super_phi_residue(
    ctx: &EllipticContext,
    a: &AnsatzCoefficients,
    h: Complex64,
    mu: &SuperNumber,
    z2: Complex64,
    radius: f64,
    nodes: usize,
) -> Result<SuperNumber> {
    let p2 = SuperArgument::plain(z2, Generator::ZETA2);
    let mut acc = SuperNumber::zero_scalar();
    for (z, w) in residue_nodes(z2, radius, nodes) {
        let phi = super_phi(ctx, a, h, mu, &SuperArgument::plain(z, Generator::ZETA1), &p2)?;
        acc = &acc + &phi.scale(w);
    }
    Ok(acc)
}

/// Monomials of a residual whose coefficient exceeds `threshold · scale`.
pub fn offending_monomials(r: &SuperResidual, threshold: f64) -> Vec<Monomial> {
    r.value
        .terms()
        .filter(|(_, c)| c.norm() > threshold * r.scale)
        .map(|(m, _)| *m)
        .collect()
}

#[cfg(test)]
mod tests;
