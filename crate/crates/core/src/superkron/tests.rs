use super::*;
use crate::elliptic::kronecker;
use crate::grassmann::Parity;
use proptest::prelude::*;

fn ctx() -> EllipticContext {
    EllipticContext::with_tau(Complex64::new(0.13, 1.07)).unwrap()
}

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn gen(g: Generator) -> SuperNumber {
    SuperNumber::generator(g)
}

fn mono(gs: &[Generator]) -> Monomial {
    Monomial::of(gs)
}

const H: Complex64 = Complex64::new(0.21, 0.33);
const Z1: Complex64 = Complex64::new(0.47, 0.61);
const Z2: Complex64 = Complex64::new(-0.12, 0.18);
const Z3: Complex64 = Complex64::new(0.29, -0.35);

fn plain_phi(a: &AnsatzCoefficients, mu: &SuperNumber) -> SuperNumber {
    super_phi(
        &ctx(),
        a,
        H,
        mu,
        &SuperArgument::plain(Z1, Generator::ZETA1),
        &SuperArgument::plain(Z2, Generator::ZETA2),
    )
    .unwrap()
}

#[test]
fn canonical_coefficients_are_kronecker_derivatives() {
    let k = ctx();
    let phi = plain_phi(&AnsatzCoefficients::CANONICAL, &gen(Generator::MU1));
    let z12 = Z1 - Z2;
    let f = |o| kronecker(&k, H, z12, o).unwrap();
    let close = |x: Complex64, y: Complex64| (x - y).norm() < 1e-12 * y.norm().max(1.0);
    assert!(close(phi.gcoeff(mono(&[Generator::ZETA1])), f(DerivOrder::VALUE)));
    assert!(close(phi.gcoeff(mono(&[Generator::ZETA2])), -f(DerivOrder::VALUE)));
    assert!(close(phi.gcoeff(mono(&[Generator::OMEGA])), f(DerivOrder::new(1, 0, 0))));
    assert!(close(
        phi.gcoeff(mono(&[Generator::ZETA1, Generator::ZETA2, Generator::OMEGA])),
        TWO_PI_I * f(DerivOrder::new(0, 0, 1))
    ));
    assert!(close(
        phi.gcoeff(mono(&[Generator::ZETA1, Generator::ZETA2, Generator::MU1])),
        f(DerivOrder::new(1, 0, 0))
    ));
    // ζ₁μ₁ω and ζ₂μ₁ω each carry ∂ħ²φ/2
    assert!(close(
        phi.gcoeff(mono(&[Generator::ZETA1, Generator::MU1, Generator::OMEGA])),
        f(DerivOrder::new(2, 0, 0)) * 0.5
    ));
    assert_eq!(phi.len(), 7);
    assert_eq!(phi.parity(), Parity::Odd);
}

#[test]
fn truncated_has_no_mu_monomials() {
    let phi = plain_phi(&AnsatzCoefficients::TRUNCATED, &gen(Generator::MU1));
    assert!(phi.terms().all(|(m, _)| !m.contains(Generator::MU1)));
    assert_eq!(phi.len(), 4);
}

#[test]
fn linear_in_coefficients() {
    let a = AnsatzCoefficients::new(cx(0.3, 1.0), cx(-1.0, 0.2), cx(0.5, 0.5), cx(2.0, 0.0), cx(0.0, -1.0));
    let lambda = cx(1.5, -0.7);
    let mu = gen(Generator::MU2);
    let lhs = plain_phi(&a.scaled(lambda), &mu);
    let rhs = plain_phi(&a, &mu).scale(lambda);
    assert!(lhs.gsub(&rhs).unwrap().max_magnitude() < 1e-12 * rhs.max_magnitude());
}

#[test]
fn mu_must_be_linear() {
    let mu = &gen(Generator::MU1) * &gen(Generator::OMEGA);
    let r = super_phi(
        &ctx(),
        &AnsatzCoefficients::CANONICAL,
        H,
        &mu,
        &SuperArgument::plain(Z1, Generator::ZETA1),
        &SuperArgument::plain(Z2, Generator::ZETA2),
    );
    assert!(matches!(r, Err(Error::InvalidArgument(_))));
    assert!(SuperArgument::new(Z1, gen(Generator::OMEGA), gen(Generator::ZETA1)).is_err());
}

#[test]
fn pole_is_reported() {
    let r = super_phi(
        &ctx(),
        &AnsatzCoefficients::CANONICAL,
        H,
        &gen(Generator::MU1),
        &SuperArgument::plain(Z2, Generator::ZETA1),
        &SuperArgument::plain(Z2, Generator::ZETA2),
    );
    assert!(matches!(r, Err(Error::PoleProximity { .. })));
}

#[test]
fn residue_is_a1_times_zeta_difference() {
    let a = AnsatzCoefficients::new(cx(0.7, -0.4), cx(1.3, 0.2), cx(0.1, 2.0), cx(-0.5, 0.5), cx(0.9, 0.0));
    let res = super_phi_residue(&ctx(), &a, H, &gen(Generator::MU1), Z2, 0.08, 128).unwrap();
    let want = (&gen(Generator::ZETA1) - &gen(Generator::ZETA2)).scale(a.a1);
    assert!(res.gsub(&want).unwrap().max_magnitude() < 1e-10, "{res}");
}

#[test]
fn fay_holds_for_canonical_and_truncated() {
    let k = ctx();
    let (mu1, mu2) = (gen(Generator::MU1), gen(Generator::MU2));
    for a in [AnsatzCoefficients::CANONICAL, AnsatzCoefficients::TRUNCATED] {
        let r = super_fay_residual(&k, &a, H, cx(-0.31, 0.12), &mu1, &mu2, Z1, Z2, Z3).unwrap();
        assert!(r.holds(1e-10), "relative {}", r.relative());
    }
}

#[test]
fn fay_fails_off_constraint_on_zeta_zeta_mu_omega() {
    let a = AnsatzCoefficients::new(cx(1.0, 0.0), cx(1.0, 0.0), TWO_PI_I, cx(1.0, 0.0), cx(2.0, 0.0));
    let (mu1, mu2) = (gen(Generator::MU1), gen(Generator::MU2));
    let r = super_fay_residual(&ctx(), &a, H, cx(-0.31, 0.12), &mu1, &mu2, Z1, Z2, Z3).unwrap();
    let bad = offending_monomials(&r, 1e-3);
    assert!(!bad.is_empty());
    for m in bad {
        let zetas = [Generator::ZETA1, Generator::ZETA2, Generator::ZETA3]
            .iter()
            .filter(|g| m.contains(**g))
            .count();
        let mus = [Generator::MU1, Generator::MU2].iter().filter(|g| m.contains(**g)).count();
        assert_eq!((zetas, mus, m.contains(Generator::OMEGA)), (2, 1, true), "{m}");
    }
}

#[test]
fn heat_holds_for_known_solutions() {
    let k = ctx();
    let cases = [
        (AnsatzCoefficients::CANONICAL, HeatParams::new(cx(1.0, 0.0), cx(1.0, 0.0))),
        (AnsatzCoefficients::TRUNCATED, HeatParams::new(cx(0.0, 0.0), cx(1.0, 0.0))),
    ];
    for (a, p) in cases {
        let r = super_heat_residual(&k, &a, &p, H, Generator::MU1, Z1, Z2, Generator::ZETA1, Generator::ZETA2)
            .unwrap();
        assert!(r.holds(1e-10), "relative {}", r.relative());
    }
}

#[test]
fn heat_body_defect() {
    let k = ctx();
    let a = AnsatzCoefficients::new(cx(1.0, 0.0), cx(2.0, 0.0), TWO_PI_I, cx(1.0, 0.0), cx(1.0, 0.0));
    let p = HeatParams::new(cx(1.0, 0.0), cx(1.0, 0.0));
    let r = super_heat_residual(&k, &a, &p, H, Generator::MU1, Z1, Z2, Generator::ZETA1, Generator::ZETA2).unwrap();
    let want = (p.kappa * a.a2 - a.a1) * kronecker(&k, H, Z1 - Z2, DerivOrder::new(1, 0, 0)).unwrap();
    let got = r.value.gcoeff(Monomial::ONE);
    assert!((got - want).norm() < 1e-10 * want.norm());
}

#[test]
fn heat_family_solutions() {
    let k = ctx();
    let p = HeatParams::new(cx(0.4, -1.1), cx(-0.6, 0.9));
    let a = p.solution(cx(1.2, 0.3)).unwrap();
    assert!(p.heat_compatible(&a, 1e-14));
    assert!(a.fay_compatible(1e-14));
    let r = super_heat_residual(&k, &a, &p, H, Generator::MU2, Z1, Z3, Generator::ZETA1, Generator::ZETA3).unwrap();
    assert!(r.holds(1e-10), "relative {}", r.relative());
}

#[test]
fn boundary_holds_for_canonical() {
    let r = super_boundary_residuals(&ctx(), &AnsatzCoefficients::CANONICAL, H, &gen(Generator::MU1), Z1, Z2)
        .unwrap();
    for x in r.all() {
        assert!(x.holds(1e-10), "relative {}", x.relative());
    }
}

#[test]
fn boundary_holds_for_truncated_without_mu() {
    let r = super_boundary_residuals(&ctx(), &AnsatzCoefficients::TRUNCATED, H, &SuperNumber::zero_scalar(), Z1, Z2)
        .unwrap();
    assert!(r.holds(1e-10));
}

#[test]
fn boundary_fails_for_wrong_a3() {
    let a = AnsatzCoefficients::new(cx(1.0, 0.0), cx(1.0, 0.0), cx(0.0, 1.0), cx(1.0, 0.0), cx(1.0, 0.0));
    let r = super_boundary_residuals(&ctx(), &a, H, &gen(Generator::MU1), Z1, Z2).unwrap();
    assert!(r.z1_unit.holds(1e-10) && r.z2_unit.holds(1e-10));
    assert!(r.z1_tau.relative() > 1e-3);
    assert!(r.z2_tau.relative() > 1e-3);
}

#[test]
fn scan_is_deterministic_and_consistent() {
    let k = ctx();
    let a = constraint_scan(&k, 6, 17).unwrap();
    let b = constraint_scan(&k, 6, 17).unwrap();
    assert_eq!(a, b);
    assert!(a.consistent(), "{:#?}", a.tallies);
    let projected = a.tally(ScanCategory::FayProjected).unwrap();
    assert_eq!(projected.fay_pass, projected.samples);
    for s in a.samples.iter().filter(|s| s.fay_defect > 0.1) {
        assert!(!s.fay_pass);
    }
    assert!(matches!(constraint_scan(&k, 0, 1), Err(Error::InvalidArgument(_))));
}

fn arb_complex() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| cx(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn heat_constraints_imply_fay(k in arb_complex(), kappa in arb_complex(), a1 in arb_complex()) {
        prop_assume!(kappa.norm() > 0.1);
        let a = HeatParams::new(k, kappa).solution(a1).unwrap();
        prop_assert!(a.fay_compatible(1e-12));
    }

    #[test]
    fn ansatz_is_odd(a in proptest::array::uniform5(arb_complex()), x in 0.05f64..0.95, y in 0.05f64..0.95) {
        let k = ctx();
        let z1 = Z2 + cx(x, 0.0) + k.tau() * y;
        let phi = super_phi(
            &k,
            &AnsatzCoefficients::from_array(a),
            H,
            &gen(Generator::MU1),
            &SuperArgument::plain(z1, Generator::ZETA1),
            &SuperArgument::plain(Z2, Generator::ZETA2),
        );
        if let Ok(phi) = phi {
            prop_assert!(matches!(phi.parity(), Parity::Odd | Parity::Even));
            prop_assert!(phi.terms().all(|(m, _)| m.degree() % 2 == 1));
        }
    }

    #[test]
    fn fay_constraint_both_directions(a1 in arb_complex(), a2 in arb_complex(), a4 in arb_complex(), d in arb_complex()) {
        prop_assume!(a1.norm() > 0.2);
        let on = AnsatzCoefficients::new(a1, a2, TWO_PI_I, a4, a2 * a4 / a1);
        let (mu1, mu2) = (gen(Generator::MU1), gen(Generator::MU2));
        let k = ctx();
        let r = super_fay_residual(&k, &on, H, cx(-0.31, 0.12), &mu1, &mu2, Z1, Z2, Z3).unwrap();
        prop_assert!(r.holds(1e-9));
        prop_assume!(d.norm() > 0.3);
        let off = AnsatzCoefficients { a5: on.a5 + d, ..on };
        let r = super_fay_residual(&k, &off, H, cx(-0.31, 0.12), &mu1, &mu2, Z1, Z2, Z3).unwrap();
        // the residual is linear in the defect while the scale is quadratic in A
        let size = off.to_array().iter().map(|c| c.norm()).fold(0.0, f64::max);
        let defect = off.fay_defect().norm() / (size * size);
        prop_assert!(r.relative() > 1e-3 * defect, "{} vs defect {}", r.relative(), defect);
    }
}


