//! The odd theta function
//!
//! ```text
//! θ(z; τ) = Σ_k exp(πiτ(k+½)² + 2πi(z+½)(k+½))
//! ```
//!
//! and its term-wise derivatives: every ∂_z multiplies the k-th term by
//! 2πi(k+½) and ∂_τ multiplies it by πi(k+½)².

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::context::EllipticContext;
use crate::error::{Error, Result};

/// Highest z-derivative order of θ that a [`ThetaJet`] carries.
pub const MAX_Z_ORDER: usize = 6;

/// All derivatives ∂_z^k ∂_τ^t θ at one point for k ≤ 6, t ≤ 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaJet {
    values: [[Complex64; 2]; MAX_Z_ORDER + 1],
}

impl ThetaJet {
    pub fn get(&self, n_z: usize, n_tau: usize) -> Complex64 {
        self.values[n_z][n_tau]
    }
}

/// ∂_z^{n_z} ∂_τ^{n_tau} θ(z; τ).
pub fn theta(ctx: &EllipticContext, z: Complex64, n_z: usize, n_tau: usize) -> Result<Complex64> {
    if n_z > MAX_Z_ORDER || n_tau > 1 {
        return Err(Error::UnsupportedOrder(format!("theta n_z={n_z}, n_tau={n_tau}")));
    }
    Ok(theta_jet(ctx, z)?.get(n_z, n_tau))
}

/// Evaluates the full derivative table of θ at `z`.
///
/// The real part of `z` is reduced to [-½, ½] using θ(z+1) = −θ(z), which
/// holds term by term for every derivative. The imaginary part is handled by
/// centring the summation window on the dominant index, which is the
/// series-level form of the reduction z → z − nτ together with its
/// quasi-periodicity factor.
pub fn theta_jet(ctx: &EllipticContext, z: Complex64) -> Result<ThetaJet> {
    let tau = ctx.tau();
    let shift_re = z.re.round();
    let z0 = z - shift_re;
    let sign = if (shift_re as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };

    let cutoff = ctx.cutoff() as i64;
    let centre = (z0.im / tau.im).round() as i64;
    // half-integers p = k + ½ with |p + centre| ≤ cutoff
    let k_lo = -centre - cutoff;
    let k_hi = -centre + cutoff - 1;

    let i = Complex64::i();
    let weights = |p: f64| -> (Complex64, Complex64) { (2.0 * PI * i * p, PI * i * p * p) };
    let term = |p: f64| -> Complex64 {
        (PI * i * tau * p * p + 2.0 * PI * i * (z0 + 0.5) * p).exp()
    };

    let mut values = [[Complex64::new(0.0, 0.0); 2]; MAX_Z_ORDER + 1];
    let mut magnitudes = [[0.0f64; 2]; MAX_Z_ORDER + 1];
    for k in k_lo..=k_hi {
        let p = k as f64 + 0.5;
        let (wz, wt) = weights(p);
        let mut t = term(p);
        for n in 0..=MAX_Z_ORDER {
            values[n][0] += t;
            values[n][1] += t * wt;
            magnitudes[n][0] += t.norm();
            magnitudes[n][1] += (t * wt).norm();
            t *= wz;
        }
    }

    // First omitted term on each side bounds the Gaussian tail.
    for p in [(k_lo - 1) as f64 + 0.5, (k_hi + 1) as f64 + 0.5] {
        let (wz, wt) = weights(p);
        let mut t = term(p);
        for n in 0..=MAX_Z_ORDER {
            for (tail, scale) in [(t.norm(), magnitudes[n][0]), ((t * wt).norm(), magnitudes[n][1])] {
                if tail > ctx.tol() * scale {
                    return Err(Error::TailTooLarge { tail, scale });
                }
            }
            t *= wz;
        }
    }

    for row in values.iter_mut() {
        for v in row.iter_mut() {
            *v *= sign;
        }
    }
    Ok(ThetaJet { values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> EllipticContext {
        EllipticContext::with_tau(Complex64::new(0.13, 1.07)).unwrap()
    }

    /// Plain symmetric summation without any reduction, for comparison.
    fn naive(tau: Complex64, z: Complex64, n_z: u32, n_tau: u32, kmax: i64) -> Complex64 {
        let i = Complex64::i();
        (-kmax..kmax)
            .map(|k| {
                let p = k as f64 + 0.5;
                let t = (PI * i * tau * p * p + 2.0 * PI * i * (z + 0.5) * p).exp();
                t * (2.0 * PI * i * p).powu(n_z) * (PI * i * p * p).powu(n_tau)
            })
            .sum()
    }

    #[test]
    fn odd_at_origin() {
        let c = ctx();
        assert!(theta(&c, Complex64::new(0.0, 0.0), 0, 0).unwrap().norm() < 1e-15);
    }

    #[test]
    fn odd_symmetry() {
        let c = ctx();
        for z in [Complex64::new(0.31, 0.22), Complex64::new(-0.4, 0.9), Complex64::new(2.7, -1.3)] {
            let a = theta(&c, z, 0, 0).unwrap();
            let b = theta(&c, -z, 0, 0).unwrap();
            assert!((a + b).norm() <= 1e-14 * a.norm().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn matches_unreduced_sum() {
        let c = ctx();
        for z in [Complex64::new(1.8, 0.4), Complex64::new(-2.3, 1.6), Complex64::new(0.2, -2.1)] {
            for n_z in 0..=6 {
                for n_tau in 0..=1 {
                    let got = theta(&c, z, n_z, n_tau).unwrap();
                    let want = naive(c.tau(), z, n_z as u32, n_tau as u32, 60);
                    assert!(
                        (got - want).norm() <= 1e-11 * want.norm().max(1.0),
                        "z={z} n_z={n_z} n_tau={n_tau}: {got} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn tau_derivative_is_heat_flow() {
        // ∂_τ θ = ∂_z² θ / (4πi) holds term by term.
        let c = ctx();
        for z in [Complex64::new(0.27, 0.11), Complex64::new(-0.35, 0.6)] {
            let lhs = theta(&c, z, 0, 1).unwrap();
            let rhs = naive(c.tau(), z, 2, 0, 60) / (4.0 * PI * Complex64::i());
            assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm());
        }
    }

    #[test]
    fn quasi_periodicity() {
        let c = ctx();
        let tau = c.tau();
        let z = Complex64::new(0.21, 0.17);
        let a = theta(&c, z + 1.0, 0, 0).unwrap();
        let b = theta(&c, z, 0, 0).unwrap();
        assert!((a + b).norm() < 1e-13);
        let shifted = theta(&c, z + tau, 0, 0).unwrap();
        let factor = -(-PI * Complex64::i() * tau - 2.0 * PI * Complex64::i() * z).exp();
        assert!((shifted - factor * b).norm() < 1e-12 * shifted.norm());
    }

    #[test]
    fn short_cutoff_reports_tail() {
        let c = EllipticContext::new(Complex64::new(0.0, 0.8), 1, 1e-9, 1e-3).unwrap();
        assert!(matches!(
            theta(&c, Complex64::new(0.1, 0.0), 0, 0),
            Err(Error::TailTooLarge { .. })
        ));
    }

    #[test]
    fn rejects_deep_orders() {
        assert!(theta(&ctx(), Complex64::new(0.1, 0.0), 7, 0).is_err());
        assert!(theta(&ctx(), Complex64::new(0.1, 0.0), 0, 2).is_err());
    }
}
