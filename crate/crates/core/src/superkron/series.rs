//! Finite sums Σ gᵢ · ∂^{oᵢ}f of Grassmann elements times partial derivatives
//! of one even base function f(ħ, z; τ). Even operators (∂ħ, ∂z, ∂τ) act on the
//! derivative orders, odd ones on the Grassmann parts.

use num_complex::Complex64;

use crate::context::DerivOrder;
use crate::error::Result;
use crate::grassmann::{Coefficient, Generator, GrassmannElement, RingTag, SuperNumber};

/// A Grassmann-valued quantity together with the largest magnitude of the
/// individual summands that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperResidual<C = Complex64> {
    pub value: GrassmannElement<C>,
    pub scale: f64,
}

impl<C: Coefficient> SuperResidual<C> {
    pub fn new(value: GrassmannElement<C>, scale: f64) -> Self {
        Self { value, scale }
    }

    /// Largest coefficient magnitude of the residual.
    pub fn max_coefficient(&self) -> f64 {
        self.value.max_magnitude()
    }

    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.max_coefficient() / self.scale
        } else {
            self.max_coefficient()
        }
    }

    /// Every coefficient is below `tol · scale`.
    pub fn holds(&self, tol: f64) -> bool {
        self.value.terms().all(|(_, c)| c.magnitude() < tol * self.scale)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            value: self.value.gadd(&other.value)?,
            scale: self.scale.max(other.scale),
        })
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            value: self.value.gsub(&other.value)?,
            scale: self.scale.max(other.scale),
        })
    }

    /// Product; the scale is that of the largest single coefficient product.
    pub fn product(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            value: self.value.gmul(&other.value)?,
            scale: self.scale * other.scale,
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct SuperSeries {
    terms: Vec<(SuperNumber, DerivOrder)>,
}

impl SuperSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, g: SuperNumber, order: DerivOrder) {
        if !g.is_zero() {
            self.terms.push((g, order));
        }
    }

    pub fn with(mut self, g: SuperNumber, order: DerivOrder) -> Self {
        self.push(g, order);
        self
    }

    pub fn terms(&self) -> &[(SuperNumber, DerivOrder)] {
        &self.terms
    }

    fn map_orders(&self, f: impl Fn(DerivOrder) -> DerivOrder) -> Self {
        Self {
            terms: self.terms.iter().map(|(g, o)| (g.clone(), f(*o))).collect(),
        }
    }

    fn map_parts(&self, f: impl Fn(&SuperNumber) -> SuperNumber) -> Self {
        let mut out = Self::new();
        for (g, o) in &self.terms {
            out.push(f(g), *o);
        }
        out
    }

    pub fn d_hbar(&self) -> Self {
        self.map_orders(DerivOrder::d_hbar)
    }

    pub fn d_z(&self) -> Self {
        self.map_orders(DerivOrder::d_z)
    }

    pub fn d_tau(&self) -> Self {
        self.map_orders(DerivOrder::d_tau)
    }

    /// Left derivative in an odd generator.
    pub fn gderiv(&self, g: Generator) -> Self {
        self.map_parts(|x| x.gderiv(g))
    }

    pub fn left_mul(&self, s: &SuperNumber) -> Self {
        self.map_parts(|x| s * x)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map_parts(|x| x.scale(c))
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Evaluates with `derivative(o)` returning ∂^o f at the body point.
    pub fn evaluate(&self, derivative: impl FnMut(DerivOrder) -> Result<Complex64>) -> Result<SuperResidual> {
        self.evaluate_shifted(&SuperNumber::zero_scalar(), derivative)
    }

    /// Evaluates at z + `soul`, with `soul` even and nilpotent, by the
    /// terminating Taylor series Σ soulʲ/j! ∂zʲ.
    pub fn evaluate_shifted(
        &self,
        soul: &SuperNumber,
        mut derivative: impl FnMut(DerivOrder) -> Result<Complex64>,
    ) -> Result<SuperResidual> {
        let mut powers = vec![SuperNumber::one()];
        loop {
            let next = (powers.last().unwrap() * soul).scale(Complex64::new(1.0 / powers.len() as f64, 0.0));
            if next.is_zero() {
                break;
            }
            powers.push(next);
        }
        let mut value = SuperNumber::zero(RingTag::Scalar);
        let mut scale: f64 = 0.0;
        for (g, order) in &self.terms {
            for (j, p) in powers.iter().enumerate() {
                let part = g * p;
                if part.is_zero() {
                    continue;
                }
                let f = derivative(order.plus(DerivOrder::new(0, j as u8, 0)))?;
                let term = part.scale(f);
                scale = scale.max(part.max_magnitude() * f.norm());
                value = &value + &term;
            }
        }
        Ok(SuperResidual { value, scale })
    }
}
