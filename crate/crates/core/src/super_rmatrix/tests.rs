use super::*;
use crate::belavin::{quantum_R, varphi};
use crate::superkron::{super_fay_residual, super_phi, SuperArgument};
use std::f64::consts::PI;

fn ctx() -> EllipticContext {
    EllipticContext::with_tau(Complex64::new(0.07, 1.21)).unwrap()
}

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn gen(g: Generator) -> SuperNumber {
    SuperNumber::generator(g)
}

const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * PI);
const H: Complex64 = Complex64::new(0.143, 0.087);
const Z: [Complex64; 3] = [
    Complex64::new(0.38, 0.49),
    Complex64::new(-0.11, 0.21),
    Complex64::new(0.26, -0.33),
];

fn mono(gs: &[Generator]) -> Monomial {
    Monomial::of(gs)
}

fn general_fay_compatible() -> AnsatzCoefficients {
    let (a1, a2, a4) = (cx(0.8, 0.3), cx(-0.4, 1.1), cx(1.2, -0.5));
    AnsatzCoefficients::new(a1, a2, cx(0.6, 2.2), a4, a2 * a4 / a1)
}

#[test]
fn zero_index_reduces_to_super_phi() {
    let k = ctx();
    let params = SuperBasisParams::new(AnsatzCoefficients::CANONICAL, cx(3.0, -1.0));
    let mu = gen(Generator::MU1);
    let got = super_basis_phi(&k, 3, &params, BasisIndex::ZERO, H, &mu, 1, 2, Z[0], Z[1]).unwrap();
    let want = super_phi(
        &k,
        &params.a,
        H,
        &mu,
        &SuperArgument::plain(Z[0], Generator::ZETA1),
        &SuperArgument::plain(Z[1], Generator::ZETA2),
    )
    .unwrap();
    assert!(got.gsub(&want).unwrap().max_magnitude() < 1e-13 * want.max_magnitude());
}

#[test]
fn canonical_matches_total_derivative_form() {
    // With B = A₃ the ζ₁ζ₂ω coefficient is 2πi d/dτ φ_α, the τ-derivative
    // including the motion of Ω_α.
    let k = ctx();
    let n = 3;
    let a = BasisIndex::new(2, 1);
    let params = SuperBasisParams::with_b_a3(AnsatzCoefficients::CANONICAL);
    let phi = super_basis_phi(&k, n, &params, a, H, &gen(Generator::MU2), 1, 2, Z[0], Z[1]).unwrap();
    let z12 = Z[0] - Z[1];
    let v = |d_h, total| varphi(&k, n, a, H, z12, d_h, total).unwrap();
    let close = |x: Complex64, y: Complex64| (x - y).norm() < 1e-11 * y.norm().max(1.0);
    assert!(close(phi.gcoeff(mono(&[Generator::ZETA1])), v(0, 0)));
    assert!(close(phi.gcoeff(mono(&[Generator::OMEGA])), v(1, 0)));
    assert!(close(
        phi.gcoeff(mono(&[Generator::ZETA1, Generator::ZETA2, Generator::OMEGA])),
        TWO_PI_I * v(0, 1)
    ));
    assert!(close(phi.gcoeff(mono(&[Generator::ZETA1, Generator::ZETA2, Generator::MU2])), v(1, 0)));
    assert!(close(
        phi.gcoeff(mono(&[Generator::ZETA2, Generator::MU2, Generator::OMEGA])),
        v(2, 0) * 0.5
    ));
}

#[test]
fn shift_in_second_index_needs_b_equal_a3() {
    let k = ctx();
    let a3 = TWO_PI_I;
    for n in [2usize, 3] {
        for a in BasisIndex::all(n) {
            let mu = gen(Generator::MU1);
            let good = SuperBasisParams::with_b_a3(AnsatzCoefficients::CANONICAL);
            let r = shift_residual(&k, n, &good, a, IndexShift::Second, H, &mu, 1, 2, Z[0], Z[1]).unwrap();
            assert!(r.holds(1e-10), "N={n} {a}: {}", r.relative());

            let b = cx(1.5, -0.5);
            let bad = SuperBasisParams::new(AnsatzCoefficients::CANONICAL, b);
            let r = shift_residual(&k, n, &bad, a, IndexShift::Second, H, &mu, 1, 2, Z[0], Z[1]).unwrap();
            let support = mono(&[Generator::ZETA1, Generator::ZETA2, Generator::OMEGA]);
            for (m, c) in r.value.terms() {
                assert!(*m == support || c.norm() < 1e-10 * r.scale, "N={n} {a}: stray {m}");
            }
            // the difference is (B − A₃)ζ₁ζ₂ω∂ħφ_a
            let d1 = varphi(&k, n, a, H, Z[0] - Z[1], 1, 0).unwrap();
            let got = r.value.gcoeff(support);
            assert!((got - (b - a3) * d1).norm() < 1e-9 * r.scale, "N={n} {a}");

            let r = shift_residual(&k, n, &bad, a, IndexShift::First, H, &mu, 1, 2, Z[0], Z[1]).unwrap();
            assert!(r.holds(1e-10));
        }
    }
}

#[test]
fn basis_fay_for_any_b() {
    let k = ctx();
    let n = 3;
    let (mu1, mu2) = (gen(Generator::MU1), gen(Generator::MU2));
    for b in [cx(0.0, 0.0), cx(1.0, 2.0), TWO_PI_I] {
        let params = SuperBasisParams::new(general_fay_compatible(), b);
        for (alpha, beta) in [(BasisIndex::new(1, 2), BasisIndex::new(2, 2)), (BasisIndex::new(0, 1), BasisIndex::new(1, 0))] {
            let r = super_basis_fay_residual(&k, n, &params, alpha, beta, H, cx(-0.21, 0.04), &mu1, &mu2, Z).unwrap();
            assert!(r.holds(1e-9), "B={b} {alpha} {beta}: {}", r.relative());
        }
    }
}

#[test]
fn n1_matches_scalar_ansatz() {
    let k = ctx();
    let a = general_fay_compatible();
    let mu = gen(Generator::MU1);
    let r = super_R(&k, 1, &a, H, &mu, 1, 2, Z[0], Z[1]).unwrap();
    let phi = super_phi(
        &k,
        &a,
        H,
        &mu,
        &SuperArgument::plain(Z[0], Generator::ZETA1),
        &SuperArgument::plain(Z[1], Generator::ZETA2),
    )
    .unwrap();
    for m in Monomial::all() {
        assert!((r.gcoeff(m)[(0, 0)] - phi.gcoeff(m)).norm() < 1e-12 * phi.max_magnitude());
    }
    let (mu1, mu2) = (gen(Generator::MU1), gen(Generator::MU2));
    let aybe = super_aybe_residual(&k, 1, &a, H, cx(-0.2, 0.1), &mu1, &mu2, Z).unwrap();
    let fay = super_fay_residual(&k, &a, H, cx(-0.2, 0.1), &mu1, &mu2, Z[0], Z[1], Z[2]).unwrap();
    for m in Monomial::all() {
        assert!((aybe.value.gcoeff(m)[(0, 0)] - fay.value.gcoeff(m)).norm() < 1e-10 * fay.scale);
    }
}

#[test]
fn zeta_coefficient_is_quantum_r() {
    let k = ctx();
    let a = general_fay_compatible();
    for n in [2usize, 3] {
        let r = super_R(&k, n, &a, H, &gen(Generator::MU1), 1, 3, Z[0], Z[2]).unwrap();
        assert_eq!(r.parity(), Parity::Odd);
        assert!(r.element().terms().all(|(m, _)| m.degree() == 1 || m.degree() == 3));
        let want = quantum_R(&k, n, H, Z[0] - Z[2]).unwrap().embed(1, 3).unwrap().into_matrix() * a.a1;
        let got = r.gcoeff(mono(&[Generator::ZETA1]));
        assert!(max_norm(&(got - &want)) < 1e-11 * max_norm(&want));
    }
}

#[test]
fn residue_is_a1_n_permutation() {
    let k = ctx();
    let a = general_fay_compatible();
    for n in [2usize, 3] {
        let got = super_r_residue(&k, n, &a, H, &gen(Generator::MU1), Z[1], 0.06, 128).unwrap();
        let want = expected_super_residue(n, &a).unwrap();
        assert!(got.gsub(&want).unwrap().max_magnitude() < 1e-6);
    }
}

#[test]
fn associative_yang_baxter() {
    let k = ctx();
    let (mu1, mu2) = (gen(Generator::MU1), gen(Generator::MU2));
    for n in [2usize, 3] {
        for a in [AnsatzCoefficients::CANONICAL, general_fay_compatible()] {
            let r = super_aybe_residual(&k, n, &a, H, cx(-0.19, 0.06), &mu1, &mu2, Z).unwrap();
            assert!(r.holds(1e-9), "N={n}: {}", r.relative());
        }
        let off = AnsatzCoefficients { a5: cx(2.0, 0.0), ..AnsatzCoefficients::CANONICAL };
        let r = super_aybe_residual(&k, n, &off, H, cx(-0.19, 0.06), &mu1, &mu2, Z).unwrap();
        assert!(r.relative() > 1e-3, "N={n}: {}", r.relative());
    }
}

#[test]
fn symmetry_and_unitarity() {
    let k = ctx();
    let mu = gen(Generator::MU1);
    for n in [2usize, 3] {
        for a in [AnsatzCoefficients::CANONICAL, AnsatzCoefficients::TRUNCATED, general_fay_compatible()] {
            let s = super_symmetry_residual(&k, n, &a, H, &mu, 1, 2, Z[0], Z[1]).unwrap();
            assert!(s.holds(1e-9), "symmetry N={n}: {}", s.relative());
            let u = super_unitarity_residual(&k, n, &a, H, &mu, Z[0], Z[1]).unwrap();
            assert!(u.holds(1e-9), "unitarity N={n}: {}", u.relative());
            let p = super_unitarity_product(&k, n, &a, H, &mu, Z[0], Z[1]).unwrap();
            let q = super_R(&k, n, &a, H, &mu, 2, 1, Z[1], Z[0])
                .unwrap()
                .mul(&super_R(&k, n, &a, H, &mu, 1, 2, Z[0], Z[1]).unwrap())
                .unwrap();
            assert!(p.add(&q).unwrap().residual().holds(1e-9));
            for (m, c) in p.element().terms() {
                assert!(identity_defect(c) < 1e-9 * p.scale(), "{m}");
            }
        }
        let off = AnsatzCoefficients { a5: cx(2.0, 0.0), ..AnsatzCoefficients::CANONICAL };
        assert!(matches!(
            super_unitarity_residual(&k, n, &off, H, &mu, Z[0], Z[1]),
            Err(Error::ConstraintViolated(_))
        ));
    }
}

#[test]
fn cubic_relations() {
    let k = ctx();
    let mu = gen(Generator::MU1);
    for n in [1usize, 2, 3] {
        for a in [AnsatzCoefficients::CANONICAL, AnsatzCoefficients::TRUNCATED] {
            let q = modified_qybe_residuals(&k, n, &a, H, &mu, Z).unwrap();
            assert!(q.residual1.holds(1e-9), "N={n} first: {}", q.residual1.relative());
            assert!(q.residual2.holds(1e-9), "N={n} second: {}", q.residual2.relative());
            assert!(q.consistency.holds(1e-9), "N={n} consistency: {}", q.consistency.relative());
        }
    }
}

#[test]
fn classical_super_yang_baxter() {
    let k = ctx();
    for n in [1usize, 2, 3] {
        let r = super_cybe_residual(&k, n, &AnsatzCoefficients::TRUNCATED, Z).unwrap();
        assert!(r.holds(1e-9) || r.value.is_zero(), "N={n}: {}", r.relative());
    }
    assert!(matches!(
        super_classical_r(&k, 2, &AnsatzCoefficients::CANONICAL, 1, 2, Z[0], Z[1]),
        Err(Error::ConstraintViolated(_))
    ));
}

