//! Dense operators on tensor powers of C^N and the slot plumbing between
//! pair and triple products.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grassmann::CMatrix;

/// A dense operator on (C^N)^{⊗factors}, tagged with the tensor slots
/// (1-based) it acts on non-trivially.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareOperator {
    n: usize,
    factors: u32,
    acts_on: Vec<usize>,
    matrix: CMatrix,
}

impl SquareOperator {
    pub fn new(n: usize, factors: u32, acts_on: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        let dim = n.pow(factors);
        if n == 0 || matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::InvalidArgument(format!(
                "operator on {factors} copies of C^{n} needs a {dim}x{dim} matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if acts_on.iter().any(|s| *s == 0 || *s > factors as usize) {
            return Err(Error::InvalidArgument(format!("slots {acts_on:?} outside 1..={factors}")));
        }
        Ok(Self {
            n,
            factors,
            acts_on,
            matrix,
        })
    }

    pub fn identity(n: usize, factors: u32) -> Self {
        let dim = n.pow(factors);
        Self {
            n,
            factors,
            acts_on: Vec::new(),
            matrix: CMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(n: usize, factors: u32) -> Self {
        let dim = n.pow(factors);
        Self {
            n,
            factors,
            acts_on: Vec::new(),
            matrix: CMatrix::zeros(dim, dim),
        }
    }

    /// Pair operator A ⊗ B.
    pub fn tensor(a: &CMatrix, b: &CMatrix) -> Self {
        let n = a.nrows();
        Self {
            n,
            factors: 2,
            acts_on: vec![1, 2],
            matrix: a.kronecker(b),
        }
    }

    /// The permutation P₁₂ on C^N ⊗ C^N.
    pub fn permutation(n: usize) -> Self {
        let mut m = CMatrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                m[(i * n + j, j * n + i)] = Complex64::new(1.0, 0.0);
            }
        }
        Self {
            n,
            factors: 2,
            acts_on: vec![1, 2],
            matrix: m,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> u32 {
        self.factors
    }

    pub fn acts_on(&self) -> &[usize] {
        &self.acts_on
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        max_norm(&self.matrix)
    }

    /// The pair operator with its two tensor factors exchanged, P M P.
    pub fn swapped(&self) -> Result<Self> {
        if self.factors != 2 {
            return Err(Error::InvalidArgument("swap needs a pair operator".into()));
        }
        let p = Self::permutation(self.n).matrix;
        Ok(Self {
            matrix: &p * &self.matrix * &p,
            acts_on: self.acts_on.iter().rev().copied().collect(),
            ..self.clone()
        })
    }

    /// Places a pair operator in the triple product: its first factor in
    /// slot `a`, its second in slot `b`, identity in the remaining slot.
    pub fn embed(&self, a: usize, b: usize) -> Result<Self> {
        if self.factors != 2 {
            return Err(Error::InvalidArgument("only pair operators can be embedded".into()));
        }
        Ok(Self {
            n: self.n,
            factors: 3,
            acts_on: vec![a, b],
            matrix: embed_pair(&self.matrix, self.n, a, b)?,
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            matrix: &self.matrix * c,
            ..self.clone()
        }
    }

    fn combine(&self, other: &Self, matrix: CMatrix) -> Self {
        let mut acts_on = self.acts_on.clone();
        for s in &other.acts_on {
            if !acts_on.contains(s) {
                acts_on.push(*s);
            }
        }
        Self {
            n: self.n,
            factors: self.factors,
            acts_on,
            matrix,
        }
    }
}

impl Add for &SquareOperator {
    type Output = SquareOperator;
    fn add(self, rhs: &SquareOperator) -> SquareOperator {
        self.combine(rhs, &self.matrix + &rhs.matrix)
    }
}

impl Sub for &SquareOperator {
    type Output = SquareOperator;
    fn sub(self, rhs: &SquareOperator) -> SquareOperator {
        self.combine(rhs, &self.matrix - &rhs.matrix)
    }
}

impl Mul for &SquareOperator {
    type Output = SquareOperator;
    fn mul(self, rhs: &SquareOperator) -> SquareOperator {
        self.combine(rhs, &self.matrix * &rhs.matrix)
    }
}

pub(crate) fn max_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// N² → N³ embedding of a pair matrix into slots (a, b), 1-based, with the
/// first slot most significant in the flattened index.
pub fn embed_pair(m: &CMatrix, n: usize, a: usize, b: usize) -> Result<CMatrix> {
    if a == b || !(1..=3).contains(&a) || !(1..=3).contains(&b) {
        return Err(Error::InvalidArgument(format!("invalid slot pair ({a}, {b})")));
    }
    let c = 6 - a - b;
    let dim = n * n * n;
    let mut out = CMatrix::zeros(dim, dim);
    let digit = |idx: usize, slot: usize| (idx / n.pow(3 - slot as u32)) % n;
    for row in 0..dim {
        for col in 0..dim {
            if digit(row, c) != digit(col, c) {
                continue;
            }
            let r = digit(row, a) * n + digit(row, b);
            let s = digit(col, a) * n + digit(col, b);
            out[(row, col)] = m[(r, s)];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_matrix(n: usize, seed: u64) -> CMatrix {
        CMatrix::from_fn(n, n, |i, j| {
            let x = (seed as f64 + 1.3 * i as f64 + 0.7 * j as f64).sin();
            let y = (seed as f64 * 0.3 + 0.4 * i as f64 - 1.1 * j as f64).cos();
            Complex64::new(x, y)
        })
    }

    #[test]
    fn embedding_matches_kronecker_products() {
        let n = 2;
        let (a, b) = (random_matrix(n, 1), random_matrix(n, 2));
        let id = CMatrix::identity(n, n);
        let pair = SquareOperator::tensor(&a, &b);
        assert_eq!(pair.embed(1, 2).unwrap().matrix, a.kronecker(&b).kronecker(&id));
        assert_eq!(pair.embed(2, 3).unwrap().matrix, id.kronecker(&a).kronecker(&b));
        assert_eq!(pair.embed(1, 3).unwrap().matrix, a.kronecker(&id).kronecker(&b));
        assert_eq!(pair.embed(3, 1).unwrap().matrix, b.kronecker(&id).kronecker(&a));
        assert_eq!(pair.embed(2, 1).unwrap().matrix, b.kronecker(&a).kronecker(&id));
        assert!(pair.embed(2, 2).is_err());
    }

    #[test]
    fn swap_exchanges_factors() {
        let (a, b) = (random_matrix(3, 4), random_matrix(3, 5));
        let swapped = SquareOperator::tensor(&a, &b).swapped().unwrap();
        assert!(max_norm(&(swapped.matrix - b.kronecker(&a))) < 1e-15);
    }

    #[test]
    fn size_is_validated() {
        assert!(SquareOperator::new(2, 2, vec![1, 2], CMatrix::zeros(3, 3)).is_err());
        assert!(SquareOperator::new(2, 2, vec![1, 3], CMatrix::zeros(4, 4)).is_err());
    }
}
