//! Residues by the trapezoidal rule on a circle, which converges
//! geometrically for integrands analytic on an annulus around the contour.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Default number of nodes on the contour.
pub const DEFAULT_NODES: usize = 128;

/// Nodes `z_k` and weights `w_k` such that Σ w_k f(z_k) ≈ (1/2πi)∮ f dz
/// over the circle |z − centre| = radius.
pub fn residue_nodes(centre: Complex64, radius: f64, nodes: usize) -> Vec<(Complex64, Complex64)> {
    (0..nodes)
        .map(|k| {
            let angle = 2.0 * PI * (k as f64 + 0.5) / nodes as f64;
            let offset = Complex64::from_polar(radius, angle);
            // dz / (2πi) = i r e^{iθ} dθ / (2πi) = offset dθ / (2π)
            (centre + offset, offset / nodes as f64)
        })
        .collect()
}

/// (1/2πi)∮ f dz for a scalar integrand.
pub fn residue<E>(
    centre: Complex64,
    radius: f64,
    nodes: usize,
    mut f: impl FnMut(Complex64) -> Result<Complex64, E>,
) -> Result<Complex64, E> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (z, w) in residue_nodes(centre, radius, nodes) {
        acc += w * f(z)?;
    }
    Ok(acc)
}
