//! Exterior algebra on the six ordered odd generators ζ₁, ζ₂, ζ₃, μ₁, μ₂, ω.
//!
//! Elements are sparse maps from monomials (6-bit masks) to coefficients in a
//! complex scalar ring or a complex matrix ring. Matrix coefficients are even:
//! they commute with every generator, so Koszul signs only depend on the
//! generator content of the monomials being multiplied.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub const GENERATOR_COUNT: usize = 6;
pub const MONOMIAL_COUNT: usize = 1 << GENERATOR_COUNT;

/// Coefficients smaller than this fraction of an element's largest
/// coefficient are dropped.
pub const DROP_THRESHOLD: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator(u8);

impl Generator {
    pub const ZETA1: Generator = Generator(0);
    pub const ZETA2: Generator = Generator(1);
    pub const ZETA3: Generator = Generator(2);
    pub const MU1: Generator = Generator(3);
    pub const MU2: Generator = Generator(4);
    pub const OMEGA: Generator = Generator(5);

    pub fn new(index: u8) -> Result<Self> {
        if (index as usize) < GENERATOR_COUNT {
            Ok(Generator(index))
        } else {
            Err(Error::InvalidArgument(format!("generator index {index} out of range 0..6")))
        }
    }

    /// ζ_k for k ∈ {1, 2, 3}.
    pub fn zeta(k: usize) -> Result<Self> {
        match k {
            1..=3 => Ok(Generator(k as u8 - 1)),
            _ => Err(Error::InvalidArgument(format!("no generator ζ{k}"))),
        }
    }

    /// μ_i for i ∈ {1, 2}.
    pub fn mu(i: usize) -> Result<Self> {
        match i {
            1 | 2 => Ok(Generator(i as u8 + 2)),
            _ => Err(Error::InvalidArgument(format!("no generator μ{i}"))),
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn name(self) -> &'static str {
        ["ζ1", "ζ2", "ζ3", "μ1", "μ2", "ω"][self.0 as usize]
    }

    pub fn all() -> impl Iterator<Item = Generator> {
        (0..GENERATOR_COUNT as u8).map(Generator)
    }
}

/// A product of distinct generators in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(u8);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_bits(bits: u8) -> Result<Self> {
        if (bits as usize) < MONOMIAL_COUNT {
            Ok(Monomial(bits))
        } else {
            Err(Error::InvalidArgument(format!("monomial mask {bits:#b} uses unknown generators")))
        }
    }

    /// The set of the given generators (order and repetition are ignored).
    pub fn of(generators: &[Generator]) -> Self {
        Monomial(generators.iter().fold(0, |acc, g| acc | (1 << g.0)))
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, g: Generator) -> bool {
        self.0 & (1 << g.0) != 0
    }

    pub fn generators(self) -> impl Iterator<Item = Generator> {
        Generator::all().filter(move |g| self.contains(*g))
    }

    pub fn all() -> impl Iterator<Item = Monomial> {
        (0..MONOMIAL_COUNT as u8).map(Monomial)
    }

    /// Sign and monomial of `self · other`, or `None` if they share a generator.
    pub fn product(self, other: Monomial) -> Option<(f64, Monomial)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // Each generator of `other` moves left past the generators of `self` above it.
        let mut swaps = 0;
        let mut rest = other.0;
        while rest != 0 {
            let j = rest.trailing_zeros();
            swaps += (self.0 >> (j + 1)).count_ones();
            rest &= rest - 1;
        }
        let sign = if swaps % 2 == 0 { 1.0 } else { -1.0 };
        Some((sign, Monomial(self.0 | other.0)))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        for g in self.generators() {
            write!(f, "{}", g.name())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingTag {
    Scalar,
    Matrix(usize),
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::Scalar => write!(f, "C"),
            RingTag::Matrix(n) => write!(f, "Mat({n}, C)"),
        }
    }
}

/// Coefficient ring of a [`GrassmannElement`].
pub trait Coefficient: Clone + fmt::Debug {
    fn ring(&self) -> RingTag;
    fn zero_in(ring: RingTag) -> Self;
    fn add_assign_ref(&mut self, other: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn scaled(&self, c: Complex64) -> Self;
    /// Largest entry modulus.
    fn magnitude(&self) -> f64;
}

impl Coefficient for Complex64 {
    fn ring(&self) -> RingTag {
        RingTag::Scalar
    }

    fn zero_in(_: RingTag) -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn scaled(&self, c: Complex64) -> Self {
        c * self
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Coefficient for CMatrix {
    fn ring(&self) -> RingTag {
        RingTag::Matrix(self.nrows())
    }

    fn zero_in(ring: RingTag) -> Self {
        match ring {
            RingTag::Matrix(n) => CMatrix::zeros(n, n),
            RingTag::Scalar => CMatrix::zeros(1, 1),
        }
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn scaled(&self, c: Complex64) -> Self {
        self * c
    }

    fn magnitude(&self) -> f64 {
        self.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrassmannElement<C> {
    ring: RingTag,
    terms: BTreeMap<Monomial, C>,
}

/// Grassmann element with complex scalar coefficients.
pub type SuperNumber = GrassmannElement<Complex64>;

impl<C: Coefficient> GrassmannElement<C> {
    pub fn zero(ring: RingTag) -> Self {
        Self {
            ring,
            terms: BTreeMap::new(),
        }
    }

    /// `c` times the monomial `m`.
    pub fn monomial(m: Monomial, c: C) -> Self {
        let ring = c.ring();
        Self::from_terms(ring, [(m, c)]).expect("single coefficient ring")
    }

    /// Builds an element from (monomial, coefficient) pairs, summing repeats.
    pub fn from_terms(ring: RingTag, terms: impl IntoIterator<Item = (Monomial, C)>) -> Result<Self> {
        let mut map: BTreeMap<Monomial, C> = BTreeMap::new();
        for (m, c) in terms {
            if c.ring() != ring {
                return Err(Error::RingMismatch {
                    left: ring.to_string(),
                    right: c.ring().to_string(),
                });
            }
            match map.get_mut(&m) {
                Some(existing) => existing.add_assign_ref(&c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        Ok(Self::normalized(ring, map))
    }

    fn normalized(ring: RingTag, mut terms: BTreeMap<Monomial, C>) -> Self {
        let max = terms.values().map(|c| c.magnitude()).fold(0.0, f64::max);
        let floor = DROP_THRESHOLD * max;
        terms.retain(|_, c| {
            let mag = c.magnitude();
            mag > floor && mag > 0.0
        });
        Self { ring, terms }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: self.ring.to_string(),
                right: other.ring.to_string(),
            })
        }
    }

    pub fn ring(&self) -> RingTag {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    /// Largest coefficient magnitude over all monomials.
    pub fn max_magnitude(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    pub fn gadd(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(existing) => existing.add_assign_ref(c),
                None => {
                    terms.insert(*m, c.clone());
                }
            }
        }
        Ok(Self::normalized(self.ring, terms))
    }

    pub fn gsub(&self, other: &Self) -> Result<Self> {
        self.gadd(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Left multiplication of every coefficient by the ring element `c`.
    pub fn gscale(&self, c: &C) -> Result<Self> {
        if c.ring() != self.ring {
            return Err(Error::RingMismatch {
                left: c.ring().to_string(),
                right: self.ring.to_string(),
            });
        }
        let terms = self.terms.iter().map(|(m, x)| (*m, c.mul_ref(x))).collect();
        Ok(Self::normalized(self.ring, terms))
    }

    /// Multiplication by a complex number, valid in either ring.
    pub fn scale(&self, c: Complex64) -> Self {
        let terms = self.terms.iter().map(|(m, x)| (*m, x.scaled(c))).collect();
        Self::normalized(self.ring, terms)
    }

    pub fn gmul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut terms: BTreeMap<Monomial, C> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let Some((sign, m)) = ma.product(*mb) else {
                    continue;
                };
                let mut prod = ca.mul_ref(cb);
                if sign < 0.0 {
                    prod = prod.scaled(Complex64::new(-1.0, 0.0));
                }
                match terms.get_mut(&m) {
                    Some(existing) => existing.add_assign_ref(&prod),
                    None => {
                        terms.insert(m, prod);
                    }
                }
            }
        }
        Ok(Self::normalized(self.ring, terms))
    }

    /// Left derivative ∂/∂g: the generator is moved to the front before
    /// being removed.
    pub fn gderiv(&self, g: Generator) -> Self {
        let below = (1u8 << g.0) - 1;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.contains(g))
            .map(|(m, c)| {
                let c = if (m.0 & below).count_ones() % 2 == 0 {
                    c.clone()
                } else {
                    c.scaled(Complex64::new(-1.0, 0.0))
                };
                (Monomial(m.0 & !(1 << g.0)), c)
            })
            .collect();
        Self::normalized(self.ring, terms)
    }

    /// Coefficient of `m` (the ring zero if absent).
    pub fn gcoeff(&self, m: Monomial) -> C {
        self.terms
            .get(&m)
            .cloned()
            .unwrap_or_else(|| C::zero_in(self.ring))
    }

    /// Degree parity of the stored monomials; the zero element reports `Even`.
    pub fn parity(&self) -> Parity {
        let odd = self.terms.keys().filter(|m| m.degree() % 2 == 1).count();
        if odd == 0 {
            Parity::Even
        } else if odd == self.terms.len() {
            Parity::Odd
        } else {
            Parity::Mixed
        }
    }

    /// Part of the element with only the given degrees kept.
    pub fn filter_degree(&self, keep: impl Fn(u32) -> bool) -> Self {
        Self {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m.degree()))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }
}

impl SuperNumber {
    pub fn scalar(c: Complex64) -> Self {
        Self::from_terms(RingTag::Scalar, [(Monomial::ONE, c)]).expect("scalar ring")
    }

    pub fn one() -> Self {
        Self::scalar(Complex64::new(1.0, 0.0))
    }

    pub fn zero_scalar() -> Self {
        Self::zero(RingTag::Scalar)
    }

    pub fn generator(g: Generator) -> Self {
        Self::monomial(Monomial::of(&[g]), Complex64::new(1.0, 0.0))
    }

    pub fn body(&self) -> Complex64 {
        self.gcoeff(Monomial::ONE)
    }

    /// exp of an element whose positive-degree part is even (hence central
    /// and nilpotent); the series terminates after at most three powers.
    pub fn gexp(&self) -> Result<Self> {
        let soul = self.filter_degree(|d| d > 0);
        if soul.terms.keys().any(|m| m.degree() % 2 == 1) {
            return Err(Error::OddBodyUnsupported);
        }
        let mut acc = Self::one();
        let mut power = Self::one();
        let mut k = 1.0;
        loop {
            power = power.gmul(&soul)?.scale(Complex64::new(1.0 / k, 0.0));
            if power.is_zero() {
                break;
            }
            acc = acc.gadd(&power)?;
            k += 1.0;
        }
        Ok(acc.scale(self.body().exp()))
    }

    /// Σ_m c_m · matrix, the element with every coefficient replaced by a
    /// multiple of `matrix`.
    pub fn lift(&self, matrix: &CMatrix) -> GrassmannElement<CMatrix> {
        let ring = RingTag::Matrix(matrix.nrows());
        let terms = self.terms.iter().map(|(m, c)| (*m, matrix * *c)).collect();
        GrassmannElement::normalized(ring, terms)
    }
}

impl<C: Coefficient> GrassmannElement<C> {
    /// Product with a scalar-ring element on the left.
    pub fn left_mul_scalar(&self, s: &SuperNumber) -> Self {
        let mut terms: BTreeMap<Monomial, C> = BTreeMap::new();
        for (ma, a) in &s.terms {
            for (mb, b) in &self.terms {
                let Some((sign, m)) = ma.product(*mb) else {
                    continue;
                };
                let prod = b.scaled(*a * sign);
                match terms.get_mut(&m) {
                    Some(existing) => existing.add_assign_ref(&prod),
                    None => {
                        terms.insert(m, prod);
                    }
                }
            }
        }
        Self::normalized(self.ring, terms)
    }
}

impl Add for &SuperNumber {
    type Output = SuperNumber;
    fn add(self, rhs: &SuperNumber) -> SuperNumber {
        self.gadd(rhs).expect("scalar ring")
    }
}

impl Sub for &SuperNumber {
    type Output = SuperNumber;
    fn sub(self, rhs: &SuperNumber) -> SuperNumber {
        self.gsub(rhs).expect("scalar ring")
    }
}

impl Mul for &SuperNumber {
    type Output = SuperNumber;
    fn mul(self, rhs: &SuperNumber) -> SuperNumber {
        self.gmul(rhs).expect("scalar ring")
    }
}

impl Mul<&SuperNumber> for Complex64 {
    type Output = SuperNumber;
    fn mul(self, rhs: &SuperNumber) -> SuperNumber {
        rhs.scale(self)
    }
}

impl Neg for &SuperNumber {
    type Output = SuperNumber;
    fn neg(self) -> SuperNumber {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl fmt::Display for SuperNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})·{m}")?;
        }
        Ok(())
    }
}
