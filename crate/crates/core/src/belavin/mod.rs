//! Sine-algebra basis of Mat(N), the elliptic basis functions φ_a and the
//! Baxter-Belavin R-matrix with its Yang-Baxter type identities.

mod operator;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::context::{DerivOrder, EllipticContext};
use crate::elliptic::{weierstrass, KroneckerJet};
use crate::error::{Error, Result};
use crate::grassmann::CMatrix;

pub use operator::{embed_pair, SquareOperator};
pub(crate) use operator::max_norm;

/// Index a = (a₁, a₂) of the basis, kept unreduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisIndex {
    pub a1: i64,
    pub a2: i64,
}

impl BasisIndex {
    pub const ZERO: BasisIndex = BasisIndex { a1: 0, a2: 0 };

    pub const fn new(a1: i64, a2: i64) -> Self {
        Self { a1, a2 }
    }

    /// Representative in {0, …, N−1}².
    pub fn reduced(self, n: usize) -> Self {
        let n = n as i64;
        Self::new(self.a1.rem_euclid(n), self.a2.rem_euclid(n))
    }

    pub fn is_zero_mod(self, n: usize) -> bool {
        self.reduced(n) == Self::ZERO
    }

    /// Ω_a = (a₁ + a₂τ)/N from the unreduced components.
    pub fn omega(self, n: usize, tau: Complex64) -> Complex64 {
        (Complex64::new(self.a1 as f64, 0.0) + tau * self.a2 as f64) / n as f64
    }

    /// All of {0, …, N−1}², ordered by (a₁, a₂).
    pub fn all(n: usize) -> impl Iterator<Item = BasisIndex> {
        let n = n as i64;
        (0..n).flat_map(move |a1| (0..n).map(move |a2| BasisIndex::new(a1, a2)))
    }
}

impl std::ops::Add for BasisIndex {
    type Output = BasisIndex;
    fn add(self, rhs: BasisIndex) -> BasisIndex {
        BasisIndex::new(self.a1 + rhs.a1, self.a2 + rhs.a2)
    }
}

impl std::ops::Sub for BasisIndex {
    type Output = BasisIndex;
    fn sub(self, rhs: BasisIndex) -> BasisIndex {
        BasisIndex::new(self.a1 - rhs.a1, self.a2 - rhs.a2)
    }
}

impl std::ops::Neg for BasisIndex {
    type Output = BasisIndex;
    fn neg(self) -> BasisIndex {
        BasisIndex::new(-self.a1, -self.a2)
    }
}

impl std::fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.a1, self.a2)
    }
}

fn require_size(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("matrix size N must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn cis(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

/// Clock matrix Q, Q_kk = exp(2πik/N) with k = 1..N.
pub fn clock(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |r, c| {
        if r == c {
            cis(2.0 * PI * (r + 1) as f64 / n as f64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Shift matrix Λ, Λ_kl = 1 iff k − l + 1 ≡ 0 mod N.
pub fn shift(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |r, c| {
        if (r + 1) % n == c % n {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn matrix_power(m: &CMatrix, k: i64, n: usize) -> CMatrix {
    // Both generators satisfy X^N = 1, so negative powers reduce mod N.
    let k = k.rem_euclid(n as i64);
    let mut out = CMatrix::identity(n, n);
    for _ in 0..k {
        out = &out * m;
    }
    out
}

/// T_a = exp(πi a₁a₂/N) Q^{a₁} Λ^{a₂}, with the phase taken from the unreduced index.
pub fn t_matrix(n: usize, a: BasisIndex) -> Result<CMatrix> {
    require_size(n)?;
    let phase = cis(PI * (a.a1 * a.a2) as f64 / n as f64);
    Ok(matrix_power(&clock(n), a.a1, n) * matrix_power(&shift(n), a.a2, n) * phase)
}

/// κ_{α,β} = exp(πi(β₁α₂ − β₂α₁)/N), so that T_α T_β = κ_{α,β} T_{α+β}.
pub fn structure_constant(n: usize, alpha: BasisIndex, beta: BasisIndex) -> Complex64 {
    cis(PI * (beta.a1 * alpha.a2 - beta.a2 * alpha.a1) as f64 / n as f64)
}

/// φ_a(ħ + Ω_a, z) = exp(2πi a₂z/N) φ(ħ + Ω_a, z) with all its derivatives.
#[derive(Debug, Clone)]
pub struct BasisFunction {
    rate: Complex64,
    prefactor: Complex64,
    jet: KroneckerJet,
}

impl BasisFunction {
    pub fn new(ctx: &EllipticContext, n: usize, a: BasisIndex, h: Complex64, z: Complex64) -> Result<Self> {
        require_size(n)?;
        let jet = KroneckerJet::new(ctx, h + a.omega(n, ctx.tau()), z)?;
        let rate = Complex64::new(0.0, 2.0 * PI * a.a2 as f64 / n as f64);
        Ok(Self {
            rate,
            prefactor: (rate * z).exp(),
            jet,
        })
    }

    /// a₂/N.
    pub fn omega_rate(&self) -> f64 {
        self.rate.im / (2.0 * PI)
    }

    /// ∂ħ^m ∂z^n ∂τ^t with the first argument held fixed in τ.
    pub fn partial(&self, order: DerivOrder) -> Result<Complex64> {
        order.check()?;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut binom = 1.0;
        for k in 0..=order.n {
            let g = self.jet.derivative(DerivOrder::new(order.m, k, order.t))?;
            acc += binom * self.rate.powu((order.n - k) as u32) * g;
            binom = binom * (order.n - k) as f64 / (k + 1) as f64;
        }
        Ok(self.prefactor * acc)
    }

    /// ∂ħ^{d_h} d/dτ with the chain term of Ω_a(τ): ∂τ + (a₂/N)∂ħ.
    pub fn total_tau(&self, d_h: u8) -> Result<Complex64> {
        Ok(self.partial(DerivOrder::new(d_h, 0, 1))?
            + self.omega_rate() * self.partial(DerivOrder::new(d_h + 1, 0, 0))?)
    }
}

/// ∂ħ^{d_h} (d/dτ)^{total_tau} φ_a(ħ + Ω_a, z).
pub fn varphi(
    ctx: &EllipticContext,
    n: usize,
    a: BasisIndex,
    h: Complex64,
    z: Complex64,
    d_h: u8,
    total_tau: u8,
) -> Result<Complex64> {
    let f = BasisFunction::new(ctx, n, a, h, z)?;
    match total_tau {
        0 => f.partial(DerivOrder::new(d_h, 0, 0)),
        1 => f.total_tau(d_h),
        _ => Err(Error::UnsupportedOrder(format!("total τ-derivative of order {total_tau}"))),
    }
}

/// Adds the offending index to a pole error.
pub(crate) fn with_index<T>(r: Result<T>, a: BasisIndex) -> Result<T> {
    r.map_err(|e| match e {
        Error::PoleProximity { what, distance, margin } => Error::PoleProximity {
            what: format!("{what} (index {a})"),
            distance,
            margin,
        },
        e => e,
    })
}

/// Σ_α T_α ⊗ T_{−α} f(α) over the given indices.
pub(crate) fn basis_sum(
    n: usize,
    indices: impl Iterator<Item = BasisIndex>,
    mut f: impl FnMut(BasisIndex) -> Result<Complex64>,
) -> Result<SquareOperator> {
    let mut acc = CMatrix::zeros(n * n, n * n);
    for a in indices {
        let value = with_index(f(a), a)?;
        acc += t_matrix(n, a)?.kronecker(&t_matrix(n, -a)?) * value;
    }
    SquareOperator::new(n, 2, vec![1, 2], acc)
}

/// R^ħ₁₂(z) = Σ_α T_α ⊗ T_{−α} φ_α(ħ + Ω_α, z).
#[allow(non_snake_case)]
pub fn quantum_R(ctx: &EllipticContext, n: usize, h: Complex64, z: Complex64) -> Result<SquareOperator> {
    require_size(n)?;
    basis_sum(n, BasisIndex::all(n), |a| varphi(ctx, n, a, h, z, 0, 0))
}

/// r₁₂(z) = Σ_{α≠0} T_α ⊗ T_{−α} φ_α(Ω_α, z).
pub fn classical_r(ctx: &EllipticContext, n: usize, z: Complex64) -> Result<SquareOperator> {
    require_size(n)?;
    let zero = Complex64::new(0.0, 0.0);
    basis_sum(n, BasisIndex::all(n).filter(|a| *a != BasisIndex::ZERO), |a| {
        varphi(ctx, n, a, zero, z, 0, 0)
    })
}

/// An operator identity residual with the largest norm among its summands.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorResidual {
    pub value: CMatrix,
    pub scale: f64,
}

impl OperatorResidual {
    pub fn from_terms(terms: &[(f64, CMatrix)]) -> Self {
        let mut value = CMatrix::zeros(terms[0].1.nrows(), terms[0].1.ncols());
        let mut scale: f64 = 0.0;
        for (sign, t) in terms {
            value += t * Complex64::new(*sign, 0.0);
            scale = scale.max(max_norm(t));
        }
        Self { value, scale }
    }

    pub fn norm(&self) -> f64 {
        max_norm(&self.value)
    }

    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.norm() / self.scale
        } else {
            self.norm()
        }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.norm() <= tol * self.scale
    }
}

fn r_embedded(ctx: &EllipticContext, n: usize, h: Complex64, z: &[Complex64; 3], a: usize, b: usize) -> Result<CMatrix> {
    Ok(quantum_R(ctx, n, h, z[a - 1] - z[b - 1])?.embed(a, b)?.into_matrix())
}

/// R₁₂^{ħ₁}R₂₃^{ħ₂} + R₃₁^{−ħ₂}R₁₂^{ħ₁−ħ₂} + R₂₃^{ħ₂−ħ₁}R₃₁^{−ħ₁}, each at its own z_ab.
#[allow(clippy::too_many_arguments)]
pub fn aybe_residual(
    ctx: &EllipticContext,
    n: usize,
    h1: Complex64,
    h2: Complex64,
    z1: Complex64,
    z2: Complex64,
    z3: Complex64,
) -> Result<OperatorResidual> {
    let z = [z1, z2, z3];
    let r = |h, a, b| r_embedded(ctx, n, h, &z, a, b);
    Ok(OperatorResidual::from_terms(&[
        (1.0, r(h1, 1, 2)? * r(h2, 2, 3)?),
        (1.0, r(-h2, 3, 1)? * r(h1 - h2, 1, 2)?),
        (1.0, r(h2 - h1, 2, 3)? * r(-h1, 3, 1)?),
    ]))
}

/// R₁₂R₁₃R₂₃ − R₂₃R₁₃R₁₂ at equal ħ.
pub fn qybe_residual(
    ctx: &EllipticContext,
    n: usize,
    h: Complex64,
    z1: Complex64,
    z2: Complex64,
    z3: Complex64,
) -> Result<OperatorResidual> {
    let z = [z1, z2, z3];
    let (r12, r13, r23) = (r_embedded(ctx, n, h, &z, 1, 2)?, r_embedded(ctx, n, h, &z, 1, 3)?, r_embedded(ctx, n, h, &z, 2, 3)?);
    Ok(OperatorResidual::from_terms(&[
        (1.0, &r12 * &r13 * &r23),
        (-1.0, &r23 * &r13 * &r12),
    ]))
}

/// [r₁₂, r₁₃] + [r₁₂, r₂₃] + [r₁₃, r₂₃].
pub fn cybe_residual(
    ctx: &EllipticContext,
    n: usize,
    z1: Complex64,
    z2: Complex64,
    z3: Complex64,
) -> Result<OperatorResidual> {
    let z = [z1, z2, z3];
    let r = |a: usize, b: usize| -> Result<CMatrix> {
        Ok(classical_r(ctx, n, z[a - 1] - z[b - 1])?.embed(a, b)?.into_matrix())
    };
    let (r12, r13, r23) = (r(1, 2)?, r(1, 3)?, r(2, 3)?);
    Ok(OperatorResidual::from_terms(&[
        (1.0, &r12 * &r13),
        (-1.0, &r13 * &r12),
        (1.0, &r12 * &r23),
        (-1.0, &r23 * &r12),
        (1.0, &r13 * &r23),
        (-1.0, &r23 * &r13),
    ]))
}

/// f(ħ, z) = N²(℘(Nħ) − ℘(z)).
pub fn unitarity_factor(ctx: &EllipticContext, n: usize, h: Complex64, z: Complex64) -> Result<Complex64> {
    let nf = n as f64;
    Ok(nf * nf * (weierstrass(ctx, h * nf, 0)? - weierstrass(ctx, z, 0)?))
}

/// R₁₂^ħ(z)R₂₁^ħ(−z) − N²(℘(Nħ) − ℘(z))·Id.
pub fn unitarity_residual(ctx: &EllipticContext, n: usize, h: Complex64, z: Complex64) -> Result<OperatorResidual> {
    let product = quantum_R(ctx, n, h, z)?.into_matrix() * quantum_R(ctx, n, h, -z)?.swapped()?.into_matrix();
    let dim = n * n;
    let f = unitarity_factor(ctx, n, h, z)?;
    Ok(OperatorResidual::from_terms(&[
        (1.0, product),
        (-1.0, CMatrix::identity(dim, dim) * f),
    ]))
}

/// Part of a matrix orthogonal to the identity, M − (tr M / dim)·Id.
pub fn off_identity_part(m: &CMatrix) -> CMatrix {
    let dim = m.nrows();
    m - CMatrix::identity(dim, dim) * (m.trace() / dim as f64)
}

/// R₂₃^ħR₁₃^ħR₁₂^ħ − R₂₃^ħR₁₂^{2ħ}R₂₃^ħ − f(ħ, z₂₃)R₁₃^{2ħ}.
pub fn cubic_identity_residual(
    ctx: &EllipticContext,
    n: usize,
    h: Complex64,
    z1: Complex64,
    z2: Complex64,
    z3: Complex64,
) -> Result<OperatorResidual> {
    let z = [z1, z2, z3];
    let r = |h, a, b| r_embedded(ctx, n, h, &z, a, b);
    let (r12, r13, r23) = (r(h, 1, 2)?, r(h, 1, 3)?, r(h, 2, 3)?);
    let (r12_2, r13_2) = (r(h * 2.0, 1, 2)?, r(h * 2.0, 1, 3)?);
    let f = unitarity_factor(ctx, n, h, z2 - z3)?;
    Ok(OperatorResidual::from_terms(&[
        (1.0, &r23 * &r13 * &r12),
        (-1.0, &r23 * &r12_2 * &r23),
        (-1.0, r13_2 * f),
    ]))
}

#[cfg(test)]
mod tests;
