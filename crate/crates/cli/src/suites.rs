//! The residual suites. Each suite owns one ChaCha8 stream seeded from
//! (seed, suite name), so running a subset reproduces the full run's draws.

use std::f64::consts::PI;

use num_complex::Complex64;
use odd_elliptic::belavin::{
    aybe_residual, cubic_identity_residual, cybe_residual, qybe_residual, structure_constant, t_matrix,
    unitarity_residual, varphi, BasisIndex, OperatorResidual,
};
use odd_elliptic::contour::{residue, DEFAULT_NODES};
use odd_elliptic::elliptic::{fay_residual, fay_residual_dh1, heat_residual, kronecker, ScalarResidual};
use odd_elliptic::super_rmatrix::{
    expected_super_residue, identity_defect, modified_qybe_residuals, shift_residual, super_R,
    super_aybe_residual, super_cybe_residual, super_r_residue, super_symmetry_residual,
    super_unitarity_product, super_unitarity_residual, IndexShift, SuperBasisParams,
};
use odd_elliptic::superkron::{
    constraint_scan, super_boundary_residuals, super_fay_residual, super_heat_residual, super_phi_residue,
    AnsatzCoefficients, HeatParams, SuperResidual,
};
use odd_elliptic::grassmann::Coefficient;
use odd_elliptic::{CMatrix, DerivOrder, EllipticContext, Error, Generator, Parity, SuperNumber};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{RunConfig, Suite};

/// Draws per sample before a suite gives up on finding a regular point.
const MAX_ATTEMPTS: usize = 1000;
/// Falsification suites need every sample above this relative residual.
pub const FALSIFY_FLOOR: f64 = 1e-3;
/// Off-constraint draws keep |A₁A₅ − A₂A₄| at least this large.
const MIN_DEFECT: f64 = 0.1;
/// Points per falsification sample. A residual function that is not
/// identically zero still vanishes somewhere, so one point can miss it.
pub const FALSIFY_POINTS: usize = 3;
/// Largest contour radius for the residue suite.
const RESIDUE_RADIUS: f64 = 0.05;

type CoreResult<T> = odd_elliptic::Result<T>;

/// Parameters a suite actually used, echoed per record.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n_list: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coeffs: Option<AnsatzCoefficients>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub b: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub heat: Option<HeatParams>,
    /// True when coefficients were drawn per sample rather than taken from the config.
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub random_coeffs: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteRecord {
    pub suite: Suite,
    pub params: SuiteParams,
    pub samples: usize,
    pub resampled_poles: usize,
    pub max_relative: Option<f64>,
    pub min_relative: Option<f64>,
    /// Residual scale of the deciding sample: the worst one, or for
    /// falsification suites the one closest to passing.
    pub scale: Option<f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

/// One sample's relative residual and the scale it was measured against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measure {
    pub relative: f64,
    pub scale: f64,
}

impl Measure {
    pub fn new(relative: f64, scale: f64) -> Self {
        Measure { relative, scale }
    }

    fn worst(items: impl IntoIterator<Item = Measure>) -> Measure {
        items
            .into_iter()
            .fold(Measure::new(0.0, 0.0), |acc, m| if m.relative >= acc.relative { m } else { acc })
    }
}

impl From<&ScalarResidual> for Measure {
    fn from(r: &ScalarResidual) -> Self {
        Measure::new(r.relative(), r.scale)
    }
}

impl From<&OperatorResidual> for Measure {
    fn from(r: &OperatorResidual) -> Self {
        Measure::new(r.relative(), r.scale)
    }
}

impl<C: Coefficient> From<&SuperResidual<C>> for Measure {
    fn from(r: &SuperResidual<C>) -> Self {
        Measure::new(r.relative(), r.scale)
    }
}

#[derive(Debug, Default)]
struct Stats {
    count: usize,
    max: Option<Measure>,
    min: Option<Measure>,
}

impl Stats {
    fn add(&mut self, m: Measure) {
        self.count += 1;
        if self.max.map_or(true, |x| m.relative > x.relative) {
            self.max = Some(m);
        }
        if self.min.map_or(true, |x| m.relative < x.relative) {
            self.min = Some(m);
        }
    }
}

/// FNV-1a over the seed bytes and the suite name.
pub fn stream_seed(seed: u64, name: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in seed.to_le_bytes().iter().chain(name.as_bytes()) {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

struct Sampler<'a> {
    cfg: &'a RunConfig,
    rng: ChaCha8Rng,
    resampled: usize,
}

impl<'a> Sampler<'a> {
    fn new(cfg: &'a RunConfig, suite: Suite) -> Self {
        Sampler {
            cfg,
            rng: ChaCha8Rng::seed_from_u64(stream_seed(cfg.seed, suite.name())),
            resampled: 0,
        }
    }

    fn context(&mut self) -> CoreResult<EllipticContext> {
        let tau = match self.cfg.tau {
            Some(t) => t,
            None => Complex64::new(self.rng.gen_range(-0.5..=0.5), self.rng.gen_range(0.8..=2.0)),
        };
        EllipticContext::new(tau, self.cfg.cutoff, self.cfg.tol, self.cfg.pole_margin)
    }

    /// Evaluates `f` at fresh random points until none is pole-proximate.
    fn draw<T>(&mut self, mut f: impl FnMut(&mut ChaCha8Rng, &EllipticContext) -> CoreResult<T>) -> CoreResult<T> {
        let mut last = None;
        for _ in 0..MAX_ATTEMPTS {
            let ctx = self.context()?;
            match f(&mut self.rng, &ctx) {
                Ok(v) => return Ok(v),
                Err(e @ Error::PoleProximity { .. }) => {
                    self.resampled += 1;
                    last = Some(e);
                }
                Err(e) => return Err(e),
            }
        }
        Err(last.expect("at least one attempt"))
    }
}

/// A point u + vτ of the fundamental cell.
fn cell(rng: &mut ChaCha8Rng, tau: Complex64) -> Complex64 {
    Complex64::new(rng.gen_range(0.0..1.0), 0.0) + tau * rng.gen_range(0.0..1.0)
}

fn cells<const K: usize>(rng: &mut ChaCha8Rng, tau: Complex64) -> [Complex64; K] {
    std::array::from_fn(|_| cell(rng, tau))
}

/// Modulus in [floor, floor + 1], uniform phase.
fn nonzero(rng: &mut ChaCha8Rng, floor: f64) -> Complex64 {
    Complex64::from_polar(rng.gen_range(floor..floor + 1.0), rng.gen_range(0.0..2.0 * PI))
}

/// Random coefficients with |A₁A₅ − A₂A₄| ≥ 0.1.
fn off_fay_coefficients(rng: &mut ChaCha8Rng) -> AnsatzCoefficients {
    let (a1, a2, a3, a4) = (nonzero(rng, 0.5), nonzero(rng, 0.1), nonzero(rng, 0.1), nonzero(rng, 0.1));
    let defect = nonzero(rng, MIN_DEFECT);
    AnsatzCoefficients::new(a1, a2, a3, a4, (a2 * a4 + defect) / a1)
}

/// A heat family member with exactly one of its four conditions broken; the
/// two sides of the broken condition differ by at least their own size.
fn off_heat_coefficients(rng: &mut ChaCha8Rng, which: usize) -> CoreResult<(AnsatzCoefficients, HeatParams)> {
    let heat = HeatParams::new(nonzero(rng, 0.1), nonzero(rng, 0.5));
    let a = heat.solution(nonzero(rng, 0.5))?;
    let mut arr = a.to_array();
    // condition i constrains A₂, A₃, A₄, A₅ respectively
    let target = which % 4 + 1;
    arr[target] *= Complex64::new(1.0, 0.0) + nonzero(rng, 1.0);
    Ok((AnsatzCoefficients::from_array(arr), heat))
}

fn mu(i: usize) -> SuperNumber {
    SuperNumber::generator(if i == 1 { Generator::MU1 } else { Generator::MU2 })
}

fn super_params(cfg: &RunConfig) -> SuperBasisParams {
    SuperBasisParams::new(cfg.coeffs, cfg.b.unwrap_or(cfg.coeffs.a3))
}

fn mu_free(a: &AnsatzCoefficients) -> AnsatzCoefficients {
    let zero = Complex64::new(0.0, 0.0);
    AnsatzCoefficients { a4: zero, a5: zero, ..*a }
}

/// Runs one suite to completion; core errors other than pole proximity end
/// the suite with a failing record.
pub fn run_suite(cfg: &RunConfig, suite: Suite) -> SuiteRecord {
    let mut sampler = Sampler::new(cfg, suite);
    let mut stats = Stats::default();
    let mut params = SuiteParams::default();
    let outcome = dispatch(&mut sampler, suite, &mut stats, &mut params);
    let (max, min) = (stats.max, stats.min);
    let error = outcome.err().map(|e| e.to_string());
    let pass = error.is_none()
        && stats.count > 0
        && if suite.is_falsification() {
            min.is_some_and(|m| m.relative > FALSIFY_FLOOR)
        } else {
            max.is_some_and(|m| m.relative < cfg.tol)
        };
    let deciding = if suite.is_falsification() { min } else { max };
    SuiteRecord {
        suite,
        params,
        samples: stats.count,
        resampled_poles: sampler.resampled,
        max_relative: max.map(|m| m.relative),
        min_relative: min.map(|m| m.relative),
        scale: deciding.map(|m| m.scale),
        pass,
        error,
    }
}

fn dispatch(s: &mut Sampler, suite: Suite, stats: &mut Stats, params: &mut SuiteParams) -> CoreResult<()> {
    let cfg = s.cfg;
    let samples = cfg.samples;
    let ns = cfg.n_list.clone();
    let per_n = |params: &mut SuiteParams| params.n_list = Some(ns.clone());
    match suite.name() {
        "fay" => {
            for _ in 0..samples {
                stats.add(s.draw(|rng, ctx| {
                    let [h1, h2, z1, z2, z3] = cells(rng, ctx.tau());
                    let r1 = fay_residual(ctx, h1, h2, z1, z2, z3)?;
                    let r2 = fay_residual_dh1(ctx, h1, h2, z1, z2, z3)?;
                    Ok(Measure::worst([(&r1).into(), (&r2).into()]))
                })?);
            }
        }
        "heat" => {
            for _ in 0..samples {
                stats.add(s.draw(|rng, ctx| {
                    let [h, z] = cells(rng, ctx.tau());
                    Ok((&heat_residual(ctx, h, z)?).into())
                })?);
            }
        }
        "boundary" => {
            params.coeffs = Some(cfg.coeffs);
            for _ in 0..samples {
                stats.add(s.draw(|rng, ctx| {
                    let [h, z1, z2] = cells(rng, ctx.tau());
                    let r = super_boundary_residuals(ctx, &cfg.coeffs, h, &mu(1), z1, z2)?;
                    Ok(Measure::worst(r.all().map(Measure::from)))
                })?);
            }
        }
        "super-fay" | "super-fay-falsify" => {
            let falsify = suite.is_falsification();
            let random = falsify && cfg.coeffs.fay_compatible(1e-12);
            params.random_coeffs = random;
            if !random {
                params.coeffs = Some(cfg.coeffs);
            }
            let points = if falsify { FALSIFY_POINTS } else { 1 };
            for _ in 0..samples {
                let a = if random { off_fay_coefficients(&mut s.rng) } else { cfg.coeffs };
                let mut worst = Vec::new();
                for _ in 0..points {
                    worst.push(s.draw(|rng, ctx| {
                        let [h1, h2, z1, z2, z3] = cells(rng, ctx.tau());
                        Ok((&super_fay_residual(ctx, &a, h1, h2, &mu(1), &mu(2), z1, z2, z3)?).into())
                    })?);
                }
                stats.add(Measure::worst(worst));
            }
        }
        "super-heat" | "super-heat-falsify" => {
            let falsify = suite.is_falsification();
            let random = falsify && cfg.heat.heat_compatible(&cfg.coeffs, 1e-12);
            params.random_coeffs = random;
            if !random {
                params.coeffs = Some(cfg.coeffs);
                params.heat = Some(cfg.heat);
            }
            let points = if falsify { FALSIFY_POINTS } else { 1 };
            for i in 0..samples {
                let (a, heat) = if random { off_heat_coefficients(&mut s.rng, i)? } else { (cfg.coeffs, cfg.heat) };
                let mut worst = Vec::new();
                for _ in 0..points {
                    worst.push(s.draw(|rng, ctx| {
                        let [h, z1, z2] = cells(rng, ctx.tau());
                        let r = super_heat_residual(ctx, &a, &heat, h, Generator::MU1, z1, z2, Generator::ZETA1, Generator::ZETA2)?;
                        Ok((&r).into())
                    })?);
                }
                stats.add(Measure::worst(worst));
            }
        }
        "basis-algebra" => {
            per_n(params);
            for &n in &ns {
                basis_algebra(n, stats)?;
            }
        }
        "shift-invariance" => {
            per_n(params);
            let sp = super_params(cfg);
            params.coeffs = Some(sp.a);
            params.b = Some(sp.b);
            for _ in 0..samples {
                for &n in &ns {
                    stats.add(s.draw(|rng, ctx| {
                        let a = BasisIndex::new(rng.gen_range(0..n as i64), rng.gen_range(0..n as i64));
                        let [h, z1, z2] = cells(rng, ctx.tau());
                        let mut out = Vec::new();
                        let base = varphi(ctx, n, a, h, z1 - z2, 0, 0)?;
                        for shifted in [a + BasisIndex::new(n as i64, 0), a + BasisIndex::new(0, n as i64)] {
                            let v = varphi(ctx, n, shifted, h, z1 - z2, 0, 0)?;
                            let scale = v.norm().max(base.norm());
                            out.push(Measure::new((v - base).norm() / scale, scale));
                        }
                        for shift in [IndexShift::First, IndexShift::Second] {
                            out.push((&shift_residual(ctx, n, &sp, a, shift, h, &mu(1), 1, 2, z1, z2)?).into());
                        }
                        Ok(Measure::worst(out))
                    })?);
                }
            }
        }
        "aybe" | "qybe" | "cybe" | "unitarity" | "cubic-3-24" => {
            per_n(params);
            let name = suite.name();
            for _ in 0..samples {
                for &n in &ns {
                    stats.add(s.draw(|rng, ctx| {
                        let [h1, h2, z1, z2, z3] = cells(rng, ctx.tau());
                        let r = match name {
                            "aybe" => aybe_residual(ctx, n, h1, h2, z1, z2, z3)?,
                            "qybe" => qybe_residual(ctx, n, h1, z1, z2, z3)?,
                            "cybe" => cybe_residual(ctx, n, z1, z2, z3)?,
                            "unitarity" => unitarity_residual(ctx, n, h1, z1 - z2)?,
                            _ => cubic_identity_residual(ctx, n, h1, z1, z2, z3)?,
                        };
                        Ok((&r).into())
                    })?);
                }
            }
        }
        "super-aybe" | "super-symmetry" | "super-unitarity" | "super-qybe-1" | "super-qybe-2" | "super-cybe" => {
            per_n(params);
            let name = suite.name();
            let a = if name == "super-cybe" { mu_free(&cfg.coeffs) } else { cfg.coeffs };
            params.coeffs = Some(a);
            for _ in 0..samples {
                for &n in &ns {
                    stats.add(s.draw(|rng, ctx| {
                        let [h1, h2, z1, z2, z3] = cells(rng, ctx.tau());
                        let z = [z1, z2, z3];
                        let (m1, m2) = (mu(1), mu(2));
                        Ok(match name {
                            "super-aybe" => (&super_aybe_residual(ctx, n, &a, h1, h2, &m1, &m2, z)?).into(),
                            "super-symmetry" => (&super_symmetry_residual(ctx, n, &a, h1, &m1, 1, 2, z1, z2)?).into(),
                            "super-unitarity" => super_unitarity_measure(ctx, n, &a, h1, &m1, z1, z2)?,
                            "super-qybe-1" => {
                                let q = modified_qybe_residuals(ctx, n, &a, h1, &m1, z)?;
                                Measure::worst([(&q.residual1).into(), (&q.consistency).into()])
                            }
                            "super-qybe-2" => (&modified_qybe_residuals(ctx, n, &a, h1, &m1, z)?.residual2).into(),
                            _ => (&super_cybe_residual(ctx, n, &a, z)?).into(),
                        })
                    })?);
                }
            }
        }
        "residue" => {
            per_n(params);
            params.coeffs = Some(cfg.coeffs);
            for _ in 0..samples {
                stats.add(s.draw(|rng, ctx| residue_measure(ctx, rng, &ns, &cfg.coeffs))?);
            }
        }
        "scan" => {
            let ctx = s.context()?;
            let seed = s.rng.gen();
            let report = constraint_scan(&ctx, samples, seed)?;
            s.resampled += report.resampled_poles;
            for (_, t) in &report.tallies {
                let agree = [t.fay_agree, t.heat_agree, t.boundary_agree];
                for a in agree {
                    let disagree = (t.samples - a) as f64 / t.samples.max(1) as f64;
                    stats.add(Measure::new(disagree, 1.0));
                }
            }
        }
        other => unreachable!("unregistered suite {other}"),
    }
    Ok(())
}

/// T_αT_β = κ_{α,β}T_{α+β} and tr(T_αT_β) for every pair, as absolute entry errors.
fn basis_algebra(n: usize, stats: &mut Stats) -> CoreResult<()> {
    let nf = n as f64;
    let ts: Vec<(BasisIndex, CMatrix)> = BasisIndex::all(n).map(|a| Ok((a, t_matrix(n, a)?))).collect::<CoreResult<_>>()?;
    for (alpha, ta) in &ts {
        for (beta, tb) in &ts {
            let product = ta * tb;
            let kappa = structure_constant(n, *alpha, *beta);
            let sum = *alpha + *beta;
            let err = (&product - t_matrix(n, sum)? * kappa).iter().map(|c| c.norm()).fold(0.0, f64::max);
            // T at an unreduced multiple N·m of the identity index is (−1)^{N m₁ m₂}·Id
            let trace = if sum.is_zero_mod(n) {
                let (m1, m2) = (sum.a1 / n as i64, sum.a2 / n as i64);
                let sign = if (n as i64 * m1 * m2) % 2 == 0 { 1.0 } else { -1.0 };
                kappa * nf * sign
            } else {
                Complex64::new(0.0, 0.0)
            };
            let trace_err = (product.trace() - trace).norm();
            stats.add(Measure::new(err.max(trace_err), 1.0));
        }
    }
    Ok(())
}

fn super_unitarity_measure(
    ctx: &EllipticContext,
    n: usize,
    a: &AnsatzCoefficients,
    h: Complex64,
    m: &SuperNumber,
    z1: Complex64,
    z2: Complex64,
) -> CoreResult<Measure> {
    let r = super_unitarity_residual(ctx, n, a, h, m, z1, z2)?;
    let product = super_unitarity_product(ctx, n, a, h, m, z1, z2)?;
    let shape = product
        .element()
        .terms()
        .map(|(_, c)| identity_defect(c))
        .fold(0.0, f64::max)
        / product.scale();
    let odd = super_R(ctx, n, a, h, m, 1, 2, z1, z2)?.parity() == Parity::Odd;
    Ok(Measure::worst([
        (&r).into(),
        Measure::new(shape, product.scale()),
        Measure::new(if odd { 0.0 } else { 1.0 }, 1.0),
    ]))
}

/// Contour residues of φ, of the odd ansatz and of the odd R-matrices,
/// relative to their expected values.
fn residue_measure(
    ctx: &EllipticContext,
    rng: &mut ChaCha8Rng,
    ns: &[usize],
    a: &AnsatzCoefficients,
) -> CoreResult<Measure> {
    let tau = ctx.tau();
    let [h, z2] = cells(rng, tau);
    // The contour shrinks so other poles stay at least three radii away.
    let mut nearest = ctx.lattice_distance(h);
    for &n in ns {
        for idx in BasisIndex::all(n) {
            nearest = nearest.min(ctx.lattice_distance(h + idx.omega(n, tau)));
        }
    }
    let radius = RESIDUE_RADIUS.min(nearest / 3.0);
    let mut out = Vec::new();
    let zero = Complex64::new(0.0, 0.0);
    let scalar = residue(zero, radius, DEFAULT_NODES, |z| kronecker(ctx, h, z, DerivOrder::VALUE))?;
    out.push(Measure::new((scalar - 1.0).norm(), 1.0));

    let zeta = SuperNumber::generator;
    let expected = &zeta(Generator::ZETA1).scale(a.a1) - &zeta(Generator::ZETA2).scale(a.a1);
    let got = super_phi_residue(ctx, a, h, &mu(1), z2, radius, DEFAULT_NODES)?;
    let scale = expected.max_magnitude().max(f64::MIN_POSITIVE);
    out.push(Measure::new((&got - &expected).max_magnitude() / scale, scale));

    for &n in ns {
        let got = super_r_residue(ctx, n, a, h, &mu(1), z2, radius, DEFAULT_NODES)?;
        let expected = expected_super_residue(n, a)?;
        let scale = expected.max_magnitude().max(f64::MIN_POSITIVE);
        out.push(Measure::new(got.gsub(&expected)?.max_magnitude() / scale, scale));
    }
    Ok(Measure::worst(out))
}
