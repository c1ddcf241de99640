//! Odd basis functions Φ_α with the free constant B, the odd R-matrix
//! R_ab = Σ_α T_α^{(a)} T_{−α}^{(b)} Φ_α and the classical odd r-matrix.
//!
//! Tensor slot k is bound to the odd coordinate ζ_k. All operators live on the
//! triple product (C^N)^{⊗3}.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::belavin::{max_norm, t_matrix, with_index, BasisFunction, BasisIndex, SquareOperator};
use crate::context::{DerivOrder, EllipticContext};
use crate::contour::residue_nodes;
use crate::elliptic::weierstrass;
use crate::error::{Error, Result};
use crate::grassmann::{CMatrix, Generator, GrassmannElement, Monomial, Parity, RingTag, SuperNumber};
use crate::superkron::{ansatz_series, relative_gap, require_linear, AnsatzCoefficients, SuperResidual};

/// Ansatz coefficients together with the constant B of the index-dependent term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperBasisParams {
    pub a: AnsatzCoefficients,
    pub b: Complex64,
}

impl SuperBasisParams {
    pub fn new(a: AnsatzCoefficients, b: Complex64) -> Self {
        Self { a, b }
    }

    /// B = A₃, the value used inside the R-matrix.
    pub fn with_b_a3(a: AnsatzCoefficients) -> Self {
        Self { a, b: a.a3 }
    }

    /// Invariance under a₂ → a₂ + N requires B = A₃.
    pub fn shift_invariant(&self, tol: f64) -> bool {
        relative_gap(self.b, self.a.a3) <= tol
    }
}

fn zeta(slot: usize) -> Result<SuperNumber> {
    Ok(SuperNumber::generator(Generator::zeta(slot)?))
}

fn check_slots(i: usize, j: usize) -> Result<()> {
    if i == j || !(1..=3).contains(&i) || !(1..=3).contains(&j) {
        return Err(Error::InvalidArgument(format!("invalid slot pair ({i}, {j})")));
    }
    Ok(())
}

/// Φ_a^{ħ+Ω_a|μ}(z_i, z_j | ζ_i, ζ_j | A, B) with its summand scale.
#[allow(clippy::too_many_arguments)]
pub fn super_basis_phi_with_scale(
    ctx: &EllipticContext,
    n: usize,
    params: &SuperBasisParams,
    a: BasisIndex,
    h: Complex64,
    mu: &SuperNumber,
    i: usize,
    j: usize,
    zi: Complex64,
    zj: Complex64,
) -> Result<SuperResidual> {
    check_slots(i, j)?;
    require_linear("mu", mu)?;
    let (zeta_i, zeta_j) = (zeta(i)?, zeta(j)?);
    let f = with_index(BasisFunction::new(ctx, n, a, h, zi - zj), a)?;
    let omega = SuperNumber::generator(Generator::OMEGA);
    let extra = (&(&zeta_i * &zeta_j) * &omega).scale(params.b * f.omega_rate());
    ansatz_series(&params.a, mu, &zeta_i, &zeta_j)
        .with(extra, DerivOrder::new(1, 0, 0))
        .evaluate(|o| f.partial(o))
}

#[allow(clippy::too_many_arguments)]
pub fn super_basis_phi(
    ctx: &EllipticContext,
    n: usize,
    params: &SuperBasisParams,
    a: BasisIndex,
    h: Complex64,
    mu: &SuperNumber,
    i: usize,
    j: usize,
    zi: Complex64,
    zj: Complex64,
) -> Result<SuperNumber> {
    Ok(super_basis_phi_with_scale(ctx, n, params, a, h, mu, i, j, zi, zj)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndexShift {
    /// a₁ → a₁ + N.
    First,
    /// a₂ → a₂ + N.
    Second,
}

/// Φ at the shifted index (with Ω shifted along) minus Φ at `a`.
#[allow(clippy::too_many_arguments)]
pub fn shift_residual(
    ctx: &EllipticContext,
    n: usize,
    params: &SuperBasisParams,
    a: BasisIndex,
    shift: IndexShift,
    h: Complex64,
    mu: &SuperNumber,
    i: usize,
    j: usize,
    zi: Complex64,
    zj: Complex64,
) -> Result<SuperResidual> {
    let step = n as i64;
    let shifted = match shift {
        IndexShift::First => a + BasisIndex::new(step, 0),
        IndexShift::Second => a + BasisIndex::new(0, step),
    };
    let phi = |idx| super_basis_phi_with_scale(ctx, n, params, idx, h, mu, i, j, zi, zj);
    phi(shifted)?.difference(&phi(a)?)
}

/// Φ_{α;12}^{ħ₁|μ₁}Φ_{β;23}^{ħ₂|μ₂} + Φ_{−β;31}^{−ħ₂|−μ₂}Φ_{α−β;12}^{ħ₁−ħ₂|μ₁−μ₂}
/// + Φ_{β−α;23}^{ħ₂−ħ₁|μ₂−μ₁}Φ_{−α;31}^{−ħ₁|−μ₁}, every ħ-argument offset by the Ω of its index.
#[allow(clippy::too_many_arguments)]
pub fn super_basis_fay_residual(
    ctx: &EllipticContext,
    n: usize,
    params: &SuperBasisParams,
    alpha: BasisIndex,
    beta: BasisIndex,
    h1: Complex64,
    h2: Complex64,
    mu1: &SuperNumber,
    mu2: &SuperNumber,
    z: [Complex64; 3],
) -> Result<SuperResidual> {
    let phi = |idx: BasisIndex, h: Complex64, mu: &SuperNumber, i: usize, j: usize| {
        super_basis_phi_with_scale(ctx, n, params, idx, h, mu, i, j, z[i - 1], z[j - 1])
    };
    let t1 = phi(alpha, h1, mu1, 1, 2)?.product(&phi(beta, h2, mu2, 2, 3)?)?;
    let t2 = phi(-beta, -h2, &-mu2, 3, 1)?.product(&phi(alpha - beta, h1 - h2, &(mu1 - mu2), 1, 2)?)?;
    let t3 = phi(beta - alpha, h2 - h1, &(mu2 - mu1), 2, 3)?.product(&phi(-alpha, -h1, &-mu1, 3, 1)?)?;
    t1.sum(&t2)?.sum(&t3)
}

/// Grassmann-valued operator on (C^N)^{⊗3}.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOperator {
    n: usize,
    slots: Option<(usize, usize)>,
    element: GrassmannElement<CMatrix>,
    scale: f64,
}

impl SuperOperator {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            slots: None,
            element: GrassmannElement::zero(RingTag::Matrix(n * n * n)),
            scale: 0.0,
        }
    }

    /// A Grassmann scalar times the identity.
    pub fn scalar(n: usize, s: &SuperNumber) -> Self {
        let dim = n * n * n;
        Self {
            n,
            slots: None,
            element: s.lift(&CMatrix::identity(dim, dim)),
            scale: s.max_magnitude(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The slot pair (i, j) of an R- or r-matrix, `None` for composite operators.
    pub fn slots(&self) -> Option<(usize, usize)> {
        self.slots
    }

    pub fn element(&self) -> &GrassmannElement<CMatrix> {
        &self.element
    }

    pub fn gcoeff(&self, m: Monomial) -> CMatrix {
        self.element.gcoeff(m)
    }

    pub fn parity(&self) -> Parity {
        self.element.parity()
    }

    /// Largest single-summand magnitude that went into the operator.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn residual(&self) -> SuperResidual<CMatrix> {
        SuperResidual::new(self.element.clone(), self.scale)
    }

    fn composite(element: GrassmannElement<CMatrix>, n: usize, scale: f64) -> Self {
        Self {
            n,
            slots: None,
            element,
            scale,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(Self::composite(self.element.gmul(&other.element)?, self.n, self.scale * other.scale))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self::composite(self.element.gadd(&other.element)?, self.n, self.scale.max(other.scale)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self::composite(self.element.gsub(&other.element)?, self.n, self.scale.max(other.scale)))
    }

    pub fn scale_by(&self, c: Complex64) -> Self {
        Self::composite(self.element.scale(c), self.n, self.scale * c.norm())
    }

    /// Left product with a Grassmann scalar.
    pub fn left_mul_scalar(&self, s: &SuperNumber) -> Self {
        Self::composite(self.element.left_mul_scalar(s), self.n, self.scale * s.max_magnitude())
    }

    /// xy + yx.
    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.add(&other.mul(self)?)
    }
}

fn pair_matrix(n: usize, a: BasisIndex, i: usize, j: usize) -> Result<CMatrix> {
    let pair = SquareOperator::tensor(&t_matrix(n, a)?, &t_matrix(n, -a)?);
    Ok(pair.embed(i, j)?.into_matrix())
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    ctx: &EllipticContext,
    n: usize,
    params: &SuperBasisParams,
    indices: impl Iterator<Item = BasisIndex>,
    h: Complex64,
    mu: &SuperNumber,
    i: usize,
    j: usize,
    zi: Complex64,
    zj: Complex64,
) -> Result<SuperOperator> {
    check_slots(i, j)?;
    let dim = n * n * n;
    let mut element = GrassmannElement::zero(RingTag::Matrix(dim));
    let mut scale: f64 = 0.0;
    for a in indices {
        let phi = super_basis_phi_with_scale(ctx, n, params, a, h, mu, i, j, zi, zj)?;
        scale = scale.max(phi.scale);
        element = element.gadd(&phi.value.lift(&pair_matrix(n, a, i, j)?))?;
    }
    Ok(SuperOperator {
        n,
        slots: Some((i, j)),
        element,
        scale,
    })
}

/// 𝐑_ij^{ħ|μ}(z_i, z_j | ζ_i, ζ_j | A) with B = A₃.
#[allow(non_snake_case, clippy::too_many_arguments)]
pub fn super_R(
    ctx: &EllipticContext,
    n: usize,
    a: &AnsatzCoefficients,
    h: Complex64,
    mu: &SuperNumber,
    i: usize,
    j: usize,
    zi: Complex64,
    zj: Complex64,
) -> Result<SuperOperator> {
    let params = SuperBasisParams::with_b_a3(*a);
    assemble(ctx, n, &params, BasisIndex::all(n), h, mu, i, j, zi, zj)
}

/// Three points with ζ_k bound to z_k; `r(h, mu, a, b)` builds 𝐑_ab.
struct Triple<'a> {
    ctx: &'a EllipticContext,
    n: usize,
    a: &'a AnsatzCoefficients,
    z: [Complex64; 3],
}

impl Triple<'_> {
    fn r(&self, h: Complex64, mu: &SuperNumber, i: usize, j: usize) -> Result<SuperOperator> {
        super_R(self.ctx, self.n, self.a, h, mu, i, j, self.z[i - 1], self.z[j - 1])
    }
}

/// 𝐑₁₂^{ħ₁|μ₁}𝐑₂₃^{ħ₂|μ₂} + 𝐑₃₁^{−ħ₂|−μ₂}𝐑₁₂^{ħ₁−ħ₂|μ₁−μ₂} + 𝐑₂₃^{ħ₂−ħ₁|μ₂−μ₁}𝐑₃₁^{−ħ₁|−μ₁}.
#[allow(clippy::too_many_arguments)]
pub fn super_aybe_residual(
    ctx: &EllipticContext,
    n: usize,
    a: &AnsatzCoefficients,
    h1: Complex64,
    h2: Complex64,
    mu1: &SuperNumber,
    mu2: &SuperNumber,
    z: [Complex64; 3],
) -> Result<SuperResidual<CMatrix>> {
    let t = Triple { ctx, n, a, z };
    let t1 = t.r(h1, mu1, 1, 2)?.mul(&t.r(h2, mu2, 2, 3)?)?;
    let t2 = t.r(-h2, &-mu2, 3, 1)?.mul(&t.r(h1 - h2, &(mu1 - mu2), 1, 2)?)?;
    let t3 = t.r(h2 - h1, &(mu2 - mu1), 2, 3)?.mul(&t.r(-h1, &-mu1, 3, 1)?)?;
    Ok(t1.add(&t2)?.add(&t3)?.residual())
}

/// 𝐑_ij^{ħ|μ} − 𝐑_ji^{−ħ|−μ}.
#[allow(clippy::too_many_arguments)]
pub fn super_symmetry_residual(
    ctx: &EllipticContext,
    n: usize,
    a: &AnsatzCoefficients,
    h: Complex64,
    mu: &SuperNumber,
    i: usize,
    j: usize,
    zi: Complex64,
    zj: Complex64,
) -> Result<SuperResidual<CMatrix>> {
    let lhs = super_R(ctx, n, a, h, mu, i, j, zi, zj)?;
    let rhs = super_R(ctx, n, a, -h, &-mu, j, i, zj, zi)?;
    Ok(lhs.sub(&rhs)?.residual())
}

fn require_fay(a: &AnsatzCoefficients, what: &str) -> Result<()> {
    if a.fay_compatible(1e-12) {
        Ok(())
    } else {
        Err(Error::ConstraintViolated(format!(
            "{what} requires A1*A5 = A2*A4, defect {}",
            a.fay_defect()
        )))
    }
}

/// A₁A₂(ζ_i − ζ_j)ωN³℘′(Nħ) + A₁A₅ζ_iζ_jμωN⁴℘″(Nħ).
#[allow(clippy::too_many_arguments)]
pub fn unitarity_scalar(
    ctx: &EllipticContext,
    n: usize,
    a: &AnsatzCoefficients,
    h: Complex64,
    mu: &SuperNumber,
    i: usize,
    j: usize,
) -> Result<SuperNumber> {
    let nf = n as f64;
    let (zi, zj) = (zeta(i)?, zeta(j)?);
    let omega = SuperNumber::generator(Generator::OMEGA);
    let p1 = weierstrass(ctx, h * nf, 1)? * nf.powi(3);
    let p2 = weierstrass(ctx, h * nf, 2)? * nf.powi(4);
    let first = (&(&zi - &zj) * &omega).scale(a.a1 * a.a2 * p1);
    let second = (&(&(&zi * &zj) * mu) * &omega).scale(a.a1 * a.a5 * p2);
    Ok(&first + &second)
}

/// 𝐑₁₂^{ħ|μ}𝐑₂₁^{ħ|μ} minus its closed form, on slots (i, j) = (1, 2).
pub fn super_unitarity_residual(
    ctx: &EllipticContext,
    n: usize,
    a: &AnsatzCoefficients,
    h: Complex64,
    mu: &SuperNumber,
    z1: Complex64,
    z2: Complex64,
) -> Result<SuperResidual<CMatrix>> {
    require_fay(a, "unitarity")?;
    let product = super_unitarity_product(ctx, n, a, h, mu, z1, z2)?;
    let closed = SuperOperator::scalar(n, &unitarity_scalar(ctx, n, a, h, mu, 1, 2)?);
    Ok(product.sub(&closed)?.residual())
}

/// 𝐑₁₂^{ħ|μ}𝐑₂₁^{ħ|μ}.
pub fn super_unitarity_product(
    ctx: &EllipticContext,
    n: usize,
    a: &AnsatzCoefficients,
    h: Complex64,
    mu: &SuperNumber,
    z1: Complex64,
    z2: Complex64,
) -> Result<SuperOperator> {
    super_R(ctx, n, a, h, mu, 1, 2, z1, z2)?.mul(&super_R(ctx, n, a, h, mu, 2, 1, z2, z1)?)
}

/// Residuals of the two cubic relations and the consistency of their difference.
#[derive(Debug, Clone, PartialEq)]
pub struct ModifiedQybe {
    /// 𝐑₁₂𝐑₁₃𝐑₂₃ − 𝐑₂₃𝐑₁₃𝐑₁₂ − 2(A₁A₂(ζ₂−ζ₃)ωN³℘′ + A₁A₅ζ₂ζ₃μωN⁴℘″)𝐑₁₃^{2ħ|2μ}.
    pub residual1: SuperResidual<CMatrix>,
    /// 𝐑₁₂𝐑₁₃𝐑₂₃ + 𝐑₂₃𝐑₁₃𝐑₁₂ + 2𝐑₂₃𝐑₁₂^{2ħ|2μ}𝐑₂₃.
    pub residual2: SuperResidual<CMatrix>,
    /// 2𝐑₂₃𝐑₃₂𝐑₁₃^{2ħ|2μ} against its closed form.
    pub consistency: SuperResidual<CMatrix>,
}

pub fn modified_qybe_residuals(
    ctx: &EllipticContext,
    n: usize,
    a: &AnsatzCoefficients,
    h: Complex64,
    mu: &SuperNumber,
    z: [Complex64; 3],
) -> Result<ModifiedQybe> {
    require_fay(a, "the cubic relations")?;
    let t = Triple { ctx, n, a, z };
    let two = Complex64::new(2.0, 0.0);
    let mu2 = mu.scale(two);
    let (r12, r13, r23) = (t.r(h, mu, 1, 2)?, t.r(h, mu, 1, 3)?, t.r(h, mu, 2, 3)?);
    let r32 = t.r(h, mu, 3, 2)?;
    let r13_2 = t.r(h * 2.0, &mu2, 1, 3)?;
    let r12_2 = t.r(h * 2.0, &mu2, 1, 2)?;

    let left = r12.mul(&r13)?.mul(&r23)?;
    let right = r23.mul(&r13)?.mul(&r12)?;
    let prefactor = unitarity_scalar(ctx, n, a, h, mu, 2, 3)?.scale(two);
    let closed = r13_2.left_mul_scalar(&prefactor);
    let residual1 = left.sub(&right)?.sub(&closed)?.residual();
    let residual2 = left
        .add(&right)?
        .add(&r23.mul(&r12_2)?.mul(&r23)?.scale_by(two))?
        .residual();
    let direct = r23.mul(&r32)?.mul(&r13_2)?.scale_by(two);
    let consistency = direct.sub(&closed)?.residual();
    Ok(ModifiedQybe {
        residual1,
        residual2,
        consistency,
    })
}

fn require_mu_free(a: &AnsatzCoefficients) -> Result<()> {
    if a.a4.norm() == 0.0 && a.a5.norm() == 0.0 {
        Ok(())
    } else {
        Err(Error::ConstraintViolated("the classical r-matrix requires A4 = A5 = 0".into()))
    }
}

/// 𝐫_ij = Σ_{α≠0} T_α^{(i)}T_{−α}^{(j)} Φ_α^{Ω_α|0}(z_i, z_j | ζ_i, ζ_j | A, B = A₃).
pub fn super_classical_r(
    ctx: &EllipticContext,
    n: usize,
    a: &AnsatzCoefficients,
    i: usize,
    j: usize,
    zi: Complex64,
    zj: Complex64,
) -> Result<SuperOperator> {
    require_mu_free(a)?;
    let params = SuperBasisParams::with_b_a3(*a);
    let zero = Complex64::new(0.0, 0.0);
    assemble(
        ctx,
        n,
        &params,
        BasisIndex::all(n).filter(|x| *x != BasisIndex::ZERO),
        zero,
        &SuperNumber::zero_scalar(),
        i,
        j,
        zi,
        zj,
    )
}

/// [𝐫₁₂, 𝐫₁₃]₊ + [𝐫₁₂, 𝐫₂₃]₊ + [𝐫₁₃, 𝐫₂₃]₊.
pub fn super_cybe_residual(
    ctx: &EllipticContext,
    n: usize,
    a: &AnsatzCoefficients,
    z: [Complex64; 3],
) -> Result<SuperResidual<CMatrix>> {
    let r = |i: usize, j: usize| super_classical_r(ctx, n, a, i, j, z[i - 1], z[j - 1]);
    let (r12, r13, r23) = (r(1, 2)?, r(1, 3)?, r(2, 3)?);
    let sum = r12
        .anticommutator(&r13)?
        .add(&r12.anticommutator(&r23)?)?
        .add(&r13.anticommutator(&r23)?)?;
    Ok(sum.residual())
}

/// Contour residue of 𝐑₁₂^{ħ|μ}(z₁, z₂) in z₁ around z₂.
#[allow(clippy::too_many_arguments)]
pub fn super_r_residue(
    ctx: &EllipticContext,
    n: usize,
    a: &AnsatzCoefficients,
    h: Complex64,
    mu: &SuperNumber,
    z2: Complex64,
    radius: f64,
    nodes: usize,
) -> Result<GrassmannElement<CMatrix>> {
    let mut acc = SuperOperator::zero(n);
    for (z, w) in residue_nodes(z2, radius, nodes) {
        acc = acc.add(&super_R(ctx, n, a, h, mu, 1, 2, z, z2)?.scale_by(w))?;
    }
    Ok(acc.element)
}

/// (ζ₁ − ζ₂)A₁N·P₁₂ on the triple product.
pub fn expected_super_residue(n: usize, a: &AnsatzCoefficients) -> Result<GrassmannElement<CMatrix>> {
    let p = SquareOperator::permutation(n).embed(1, 2)?.into_matrix() * (a.a1 * n as f64);
    Ok((&zeta(1)? - &zeta(2)?).lift(&p))
}

/// Largest entry of `m` away from a multiple of the identity.
pub fn identity_defect(m: &CMatrix) -> f64 {
    max_norm(&crate::belavin::off_identity_part(m))
}

#[cfg(test)]
mod tests;
