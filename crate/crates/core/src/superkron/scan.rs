//! Seeded sampling of coefficient space against the Fay, heat and boundary
//! residuals.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    super_boundary_residuals, super_fay_residual, super_heat_residual, AnsatzCoefficients, HeatParams, TWO_PI_I,
};
use crate::context::EllipticContext;
use crate::error::{Error, Result};
use crate::grassmann::{Generator, SuperNumber};

const MAX_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanCategory {
    /// Unconstrained coefficients.
    Random,
    /// A₅ = A₂A₄/A₁.
    FayProjected,
    /// Solutions of the heat constraints for random (k, κ).
    HeatFamily,
    /// A₁ = A₂ = A₄ = A₅, A₃ = 2πiA₁.
    BoundaryFamily,
}

impl ScanCategory {
    pub const ALL: [ScanCategory; 4] = [
        ScanCategory::Random,
        ScanCategory::FayProjected,
        ScanCategory::HeatFamily,
        ScanCategory::BoundaryFamily,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSample {
    pub index: usize,
    pub category: ScanCategory,
    pub coefficients: [Complex64; 5],
    pub heat: HeatParams,
    /// |A₁A₅ − A₂A₄|.
    pub fay_defect: f64,
    pub fay_compatible: bool,
    pub heat_compatible: bool,
    pub boundary_compatible: bool,
    pub fay_relative: f64,
    pub heat_relative: f64,
    pub boundary_relative: f64,
    pub fay_pass: bool,
    pub heat_pass: bool,
    pub boundary_pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ScanTally {
    pub samples: usize,
    pub fay_pass: usize,
    pub heat_pass: usize,
    pub boundary_pass: usize,
    /// Samples whose pass/fail matches the predicted constraint.
    pub fay_agree: usize,
    pub heat_agree: usize,
    pub boundary_agree: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub seed: u64,
    pub samples_per_category: usize,
    pub tol: f64,
    pub resampled_poles: usize,
    pub tallies: Vec<(ScanCategory, ScanTally)>,
    pub samples: Vec<ScanSample>,
}

impl ScanReport {
    pub fn tally(&self, category: ScanCategory) -> Option<&ScanTally> {
        self.tallies.iter().find(|(c, _)| *c == category).map(|(_, t)| t)
    }

    /// Every sample's verdicts agree with the predicted constraints.
    pub fn consistent(&self) -> bool {
        self.tallies
            .iter()
            .all(|(_, t)| t.fay_agree == t.samples && t.heat_agree == t.samples && t.boundary_agree == t.samples)
    }
}

fn complex_in(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

/// A complex number with modulus at least `floor`.
fn nonzero_in(rng: &mut ChaCha8Rng, r: f64, floor: f64) -> Complex64 {
    loop {
        let x = complex_in(rng, r);
        if x.norm() >= floor {
            return x;
        }
    }
}

fn torus_point(rng: &mut ChaCha8Rng, tau: Complex64) -> Complex64 {
    Complex64::new(rng.gen_range(0.0..1.0), 0.0) + tau * rng.gen_range(0.0..1.0)
}

fn draw_coefficients(rng: &mut ChaCha8Rng, category: ScanCategory) -> (AnsatzCoefficients, HeatParams) {
    let mut heat = HeatParams::new(complex_in(rng, 2.0), nonzero_in(rng, 2.0, 0.2));
    let a = match category {
        ScanCategory::Random => AnsatzCoefficients::from_array(std::array::from_fn(|_| complex_in(rng, 2.0))),
        ScanCategory::FayProjected => {
            let (a1, a2, a3, a4) = (
                nonzero_in(rng, 2.0, 0.2),
                complex_in(rng, 2.0),
                complex_in(rng, 2.0),
                complex_in(rng, 2.0),
            );
            AnsatzCoefficients::new(a1, a2, a3, a4, a2 * a4 / a1)
        }
        ScanCategory::HeatFamily => heat
            .solution(nonzero_in(rng, 2.0, 0.2))
            .expect("kappa drawn away from zero"),
        ScanCategory::BoundaryFamily => {
            let a1 = nonzero_in(rng, 2.0, 0.2);
            heat = HeatParams::new(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
            AnsatzCoefficients::new(a1, a1, TWO_PI_I * a1, a1, a1)
        }
    };
    (a, heat)
}

struct Verdicts {
    fay: f64,
    heat: f64,
    boundary: f64,
}

fn evaluate(ctx: &EllipticContext, rng: &mut ChaCha8Rng, a: &AnsatzCoefficients, heat: &HeatParams) -> Result<Verdicts> {
    let tau = ctx.tau();
    let (h1, h2) = (torus_point(rng, tau), torus_point(rng, tau));
    let (z1, z2, z3) = (torus_point(rng, tau), torus_point(rng, tau), torus_point(rng, tau));
    let mu1 = SuperNumber::generator(Generator::MU1);
    let mu2 = SuperNumber::generator(Generator::MU2);
    let fay = super_fay_residual(ctx, a, h1, h2, &mu1, &mu2, z1, z2, z3)?;
    let heat = super_heat_residual(
        ctx,
        a,
        heat,
        h1,
        Generator::MU1,
        z1,
        z2,
        Generator::ZETA1,
        Generator::ZETA2,
    )?;
    let boundary = super_boundary_residuals(ctx, a, h1, &mu1, z1, z2)?;
    Ok(Verdicts {
        fay: fay.relative(),
        heat: heat.relative(),
        boundary: boundary.all().iter().map(|r| r.relative()).fold(0.0, f64::max),
    })
}

/// Runs `n_samples` points of each category. The report depends only on the
/// context, `n_samples` and `seed`.
pub fn constraint_scan(ctx: &EllipticContext, n_samples: usize, seed: u64) -> Result<ScanReport> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument("n_samples must be at least 1".into()));
    }
    let tol = ctx.tol();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::new();
    let mut tallies = Vec::new();
    let mut resampled_poles = 0;
    for category in ScanCategory::ALL {
        let mut tally = ScanTally::default();
        for _ in 0..n_samples {
            let (a, heat) = draw_coefficients(&mut rng, category);
            let mut verdicts = None;
            for _ in 0..MAX_ATTEMPTS {
                match evaluate(ctx, &mut rng, &a, &heat) {
                    Ok(v) => {
                        verdicts = Some(v);
                        break;
                    }
                    Err(Error::PoleProximity { .. }) => resampled_poles += 1,
                    Err(e) => return Err(e),
                }
            }
            let Some(v) = verdicts else {
                continue;
            };
            // Compatibility is judged on the same relative scale as the residuals.
            let predicted_tol = 1e-12;
            let sample = ScanSample {
                index: samples.len(),
                category,
                coefficients: a.to_array(),
                heat,
                fay_defect: a.fay_defect().norm(),
                fay_compatible: a.fay_compatible(predicted_tol),
                heat_compatible: heat.heat_compatible(&a, predicted_tol),
                boundary_compatible: a.boundary_compatible(predicted_tol),
                fay_relative: v.fay,
                heat_relative: v.heat,
                boundary_relative: v.boundary,
                fay_pass: v.fay < tol,
                heat_pass: v.heat < tol,
                boundary_pass: v.boundary < tol,
            };
            tally.samples += 1;
            tally.fay_pass += sample.fay_pass as usize;
            tally.heat_pass += sample.heat_pass as usize;
            tally.boundary_pass += sample.boundary_pass as usize;
            tally.fay_agree += (sample.fay_pass == sample.fay_compatible) as usize;
            tally.heat_agree += (sample.heat_pass == sample.heat_compatible) as usize;
            tally.boundary_agree += (sample.boundary_pass == sample.boundary_compatible) as usize;
            samples.push(sample);
        }
        tallies.push((category, tally));
    }
    Ok(ScanReport {
        seed,
        samples_per_category: n_samples,
        tol,
        resampled_poles,
        tallies,
        samples,
    })
}
