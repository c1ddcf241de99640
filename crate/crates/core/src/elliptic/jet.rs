//! Truncated trivariate Taylor jets in (u, v, e) with degrees ≤ (4, 2, 1).
//!
//! Coefficients are normalized: `c[i][j][t]` is ∂_u^i ∂_v^j ∂_e^t f / (i! j!).
//! Truncation is per variable (tensor truncation), which is closed under
//! multiplication.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

pub const DEG_U: usize = 4;
pub const DEG_V: usize = 2;
pub const DEG_E: usize = 1;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    c: [[[Complex64; DEG_E + 1]; DEG_V + 1]; DEG_U + 1],
}

pub(crate) const FACTORIAL: [f64; 7] = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0];

impl Jet {
    pub fn zero() -> Self {
        Self {
            c: [[[ZERO; DEG_E + 1]; DEG_V + 1]; DEG_U + 1],
        }
    }

    pub fn constant(value: Complex64) -> Self {
        let mut j = Self::zero();
        j.c[0][0][0] = value;
        j
    }

    /// Jet of g(x + u) where `derivs[k][t]` = ∂_x^k ∂_e^t g.
    pub fn from_u(derivs: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut j = Self::zero();
        for i in 0..=DEG_U {
            for t in 0..=DEG_E {
                j.c[i][0][t] = derivs(i, t) / FACTORIAL[i];
            }
        }
        j
    }

    /// Jet of g(y + v).
    pub fn from_v(derivs: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut j = Self::zero();
        for k in 0..=DEG_V {
            for t in 0..=DEG_E {
                j.c[0][k][t] = derivs(k, t) / FACTORIAL[k];
            }
        }
        j
    }

    /// Jet of g(w + u + v); needs derivatives of g up to order DEG_U + DEG_V.
    pub fn from_sum(derivs: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut j = Self::zero();
        for i in 0..=DEG_U {
            for k in 0..=DEG_V {
                for t in 0..=DEG_E {
                    j.c[i][k][t] = derivs(i + k, t) / (FACTORIAL[i] * FACTORIAL[k]);
                }
            }
        }
        j
    }

    pub fn coeff(&self, i: usize, j: usize, t: usize) -> Complex64 {
        self.c[i][j][t]
    }

    /// The mixed partial ∂_u^i ∂_v^j ∂_e^t at the expansion point.
    pub fn derivative(&self, i: usize, j: usize, t: usize) -> Complex64 {
        self.c[i][j][t] * FACTORIAL[i] * FACTORIAL[j]
    }

    /// Multiplicative inverse; the constant term must be non-zero.
    pub fn recip(&self) -> Self {
        let a0 = self.c[0][0][0];
        // 1/a = (1/a0) Σ (−d)^k with d = a/a0 − 1 nilpotent of index DEG_U+DEG_V+DEG_E+1.
        let mut d = *self * (1.0 / a0);
        d.c[0][0][0] = ZERO;
        let neg_d = d * -1.0;
        let mut acc = Self::constant(Complex64::new(1.0, 0.0));
        let mut power = acc;
        for _ in 0..(DEG_U + DEG_V + DEG_E) {
            power = power * neg_d;
            acc = acc + power;
        }
        acc * (1.0 / a0)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        for i in 0..=DEG_U {
            for j in 0..=DEG_V {
                for t in 0..=DEG_E {
                    self.c[i][j][t] += rhs.c[i][j][t];
                }
            }
        }
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + rhs * -1.0
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self * Complex64::new(rhs, 0.0)
    }
}

impl Mul<Complex64> for Jet {
    type Output = Jet;
    fn mul(mut self, rhs: Complex64) -> Jet {
        for plane in self.c.iter_mut() {
            for row in plane.iter_mut() {
                for v in row.iter_mut() {
                    *v *= rhs;
                }
            }
        }
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut out = Jet::zero();
        for i1 in 0..=DEG_U {
            for j1 in 0..=DEG_V {
                for t1 in 0..=DEG_E {
                    let a = self.c[i1][j1][t1];
                    if a == ZERO {
                        continue;
                    }
                    for i2 in 0..=DEG_U - i1 {
                        for j2 in 0..=DEG_V - j1 {
                            for t2 in 0..=DEG_E - t1 {
                                out.c[i1 + i2][j1 + j2][t1 + t2] += a * rhs.c[i2][j2][t2];
                            }
                        }
                    }
                }
            }
        }
        out
    }
}
