use super::*;
use crate::contour::residue_nodes;
use crate::elliptic::{fay_residual, kronecker};
use proptest::prelude::*;

fn ctx() -> EllipticContext {
    EllipticContext::with_tau(Complex64::new(-0.18, 1.13)).unwrap()
}

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const H: Complex64 = Complex64::new(0.137, 0.093);
const Z: [Complex64; 3] = [
    Complex64::new(0.41, 0.52),
    Complex64::new(-0.09, 0.17),
    Complex64::new(0.23, -0.31),
];

fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    max_norm(&(a - b)) < tol
}

#[test]
fn zero_index_is_identity() {
    for n in 1..=5 {
        assert!(close(&t_matrix(n, BasisIndex::ZERO).unwrap(), &CMatrix::identity(n, n), 1e-15));
    }
}

#[test]
fn generators_have_order_n() {
    for n in 2..=5 {
        let id = CMatrix::identity(n, n);
        let mut q = CMatrix::identity(n, n);
        let mut l = CMatrix::identity(n, n);
        for _ in 0..n {
            q = &q * clock(n);
            l = &l * shift(n);
        }
        assert!(close(&q, &id, 1e-12));
        assert!(close(&l, &id, 1e-12));
    }
}

#[test]
fn two_by_two_entries() {
    let l = shift(2);
    let one = cx(1.0, 0.0);
    let zero = cx(0.0, 0.0);
    assert_eq!(l, CMatrix::from_row_slice(2, 2, &[zero, one, one, zero]));
    let q = clock(2);
    for a1 in 0..3i64 {
        for a2 in 0..3i64 {
            let lhs = matrix_power(&q, a1, 2) * matrix_power(&l, a2, 2) * cis(2.0 * PI * (a1 * a2) as f64 / 2.0);
            let rhs = matrix_power(&l, a2, 2) * matrix_power(&q, a1, 2);
            assert!(close(&lhs, &rhs, 1e-14));
        }
    }
}

#[test]
fn structure_constant_values() {
    let a = BasisIndex::new(1, 0);
    let b = BasisIndex::new(0, 1);
    assert!((structure_constant(2, a, b) - cx(0.0, -1.0)).norm() < 1e-15);
    assert!((structure_constant(3, b, b) - cx(1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn product_rule_for_all_pairs() {
    for n in 2..=5 {
        for a in BasisIndex::all(n) {
            for b in BasisIndex::all(n) {
                let lhs = t_matrix(n, a).unwrap() * t_matrix(n, b).unwrap();
                let rhs = t_matrix(n, a + b).unwrap() * structure_constant(n, a, b);
                assert!(close(&lhs, &rhs, 1e-12), "N={n} {a} {b}");
            }
        }
    }
}

#[test]
fn trace_orthogonality() {
    for n in 2..=5 {
        for a in BasisIndex::all(n) {
            for b in BasisIndex::all(n) {
                let tr = (t_matrix(n, a).unwrap() * t_matrix(n, b).unwrap()).trace();
                let sum = a + b;
                let want = if sum.is_zero_mod(n) {
                    // T_{N·m} = (−1)^{N m₁ m₂} Id for the unreduced index
                    let (m1, m2) = (sum.a1 / n as i64, sum.a2 / n as i64);
                    let sign = if (n as i64 * m1 * m2) % 2 == 0 { 1.0 } else { -1.0 };
                    structure_constant(n, a, b) * (n as f64 * sign)
                } else {
                    cx(0.0, 0.0)
                };
                assert!((tr - want).norm() < 1e-12, "N={n} {a} {b}");
            }
        }
    }
}

#[test]
fn basis_sum_is_permutation() {
    for n in 1..=4 {
        let s = basis_sum(n, BasisIndex::all(n), |_| Ok(cx(1.0, 0.0))).unwrap();
        let p = SquareOperator::permutation(n).scale(cx(n as f64, 0.0));
        assert!(close(s.matrix(), p.matrix(), 1e-12));
    }
}

#[test]
fn varphi_at_zero_index_is_kronecker() {
    let k = ctx();
    let got = varphi(&k, 3, BasisIndex::ZERO, H, Z[0], 0, 0).unwrap();
    assert!((got - kronecker(&k, H, Z[0], DerivOrder::VALUE).unwrap()).norm() < 1e-14);
}

#[test]
fn varphi_index_shifts() {
    let k = ctx();
    for n in [2usize, 3] {
        for a in BasisIndex::all(n) {
            let base = varphi(&k, n, a, H, Z[0], 0, 0).unwrap();
            let n_i = n as i64;
            for shifted in [a + BasisIndex::new(n_i, 0), a + BasisIndex::new(0, n_i), a - BasisIndex::new(n_i, n_i)] {
                let v = varphi(&k, n, shifted, H, Z[0], 0, 0).unwrap();
                assert!((v - base).norm() < 1e-10 * base.norm(), "N={n} {a} -> {shifted}");
            }
        }
    }
}

#[test]
fn varphi_derivatives_match_differences() {
    let k = ctx();
    let a = BasisIndex::new(1, 2);
    let n = 3;
    let step = 1e-4;
    let f = BasisFunction::new(&k, n, a, H, Z[0]).unwrap();
    let at = |h: Complex64, z: Complex64, tau: Complex64| {
        BasisFunction::new(&k.at_tau(tau).unwrap(), n, a, h, z)
            .unwrap()
            .partial(DerivOrder::VALUE)
            .unwrap()
    };
    let tau = k.tau();
    let dz = (at(H, Z[0] + step, tau) - at(H, Z[0] - step, tau)) / (2.0 * step);
    assert!((f.partial(DerivOrder::new(0, 1, 0)).unwrap() - dz).norm() < 1e-6 * dz.norm());
    // total derivative moves Ω_a(τ) along with τ
    let dtau = (at(H, Z[0], tau + step) - at(H, Z[0], tau - step)) / (2.0 * step);
    assert!((f.total_tau(0).unwrap() - dtau).norm() < 1e-6 * dtau.norm());
    assert!(matches!(varphi(&k, n, a, H, Z[0], 0, 2), Err(Error::UnsupportedOrder(_))));
}

#[test]
fn n1_reduces_to_scalars() {
    let k = ctx();
    let r = quantum_R(&k, 1, H, Z[0]).unwrap();
    assert!((r.matrix()[(0, 0)] - kronecker(&k, H, Z[0], DerivOrder::VALUE).unwrap()).norm() < 1e-14);
    assert_eq!(classical_r(&k, 1, Z[0]).unwrap().max_norm(), 0.0);
    let a = aybe_residual(&k, 1, H, cx(-0.2, 0.3), Z[0], Z[1], Z[2]).unwrap();
    let f = fay_residual(&k, H, cx(-0.2, 0.3), Z[0], Z[1], Z[2]).unwrap();
    assert!((a.value[(0, 0)] - f.value).norm() < 1e-12 * f.scale);
    let q = qybe_residual(&k, 1, H, Z[0], Z[1], Z[2]).unwrap();
    assert!(q.norm() <= 4.0 * f64::EPSILON * q.scale);
}

#[test]
fn skew_symmetry() {
    let k = ctx();
    for n in [2usize, 3] {
        let r = quantum_R(&k, n, H, Z[0]).unwrap();
        let s = quantum_R(&k, n, -H, -Z[0]).unwrap().swapped().unwrap().scale(cx(-1.0, 0.0));
        assert!(close(r.matrix(), s.matrix(), 1e-10 * r.max_norm()));
        let c = classical_r(&k, n, Z[0]).unwrap();
        let d = classical_r(&k, n, -Z[0]).unwrap().swapped().unwrap().scale(cx(-1.0, 0.0));
        assert!(close(c.matrix(), d.matrix(), 1e-10 * c.max_norm()));
    }
}

#[test]
fn residue_is_n_times_permutation() {
    let k = ctx();
    for n in [2usize, 3] {
        let mut acc = CMatrix::zeros(n * n, n * n);
        for (z, w) in residue_nodes(cx(0.0, 0.0), 0.05, 128) {
            acc += quantum_R(&k, n, H, z).unwrap().into_matrix() * w;
        }
        let want = SquareOperator::permutation(n).scale(cx(n as f64, 0.0));
        assert!(close(&acc, want.matrix(), 1e-6));
    }
}

#[test]
fn yang_baxter_family() {
    let k = ctx();
    for n in [2usize, 3] {
        let a = aybe_residual(&k, n, H, cx(-0.21, 0.05), Z[0], Z[1], Z[2]).unwrap();
        assert!(a.holds(1e-9), "AYBE N={n}: {}", a.relative());
        let q = qybe_residual(&k, n, H, Z[0], Z[1], Z[2]).unwrap();
        assert!(q.holds(1e-9), "QYBE N={n}: {}", q.relative());
        let c = cybe_residual(&k, n, Z[0], Z[1], Z[2]).unwrap();
        assert!(c.holds(1e-9), "CYBE N={n}: {}", c.relative());
    }
}

#[test]
fn cybe_antisymmetric_under_relabeling() {
    let k = ctx();
    let n = 2;
    let a = cybe_residual(&k, n, Z[0], Z[1], Z[2]).unwrap();
    let b = cybe_residual(&k, n, Z[0], Z[2], Z[1]).unwrap();
    // conjugating by the 2↔3 swap turns b into −a
    let p23 = SquareOperator::permutation(n).embed(2, 3).unwrap().into_matrix();
    let conj = &p23 * &b.value * &p23;
    assert!(close(&conj, &(-&a.value), 1e-12 * a.scale.max(1.0)));
}

#[test]
fn unitarity_and_cubic_identity() {
    let k = ctx();
    for n in [1usize, 2, 3] {
        let u = unitarity_residual(&k, n, H, Z[0]).unwrap();
        assert!(u.holds(1e-9), "unitarity N={n}: {}", u.relative());
        let product = quantum_R(&k, n, H, Z[0]).unwrap().into_matrix()
            * quantum_R(&k, n, H, -Z[0]).unwrap().swapped().unwrap().into_matrix();
        assert!(max_norm(&off_identity_part(&product)) < 1e-9 * max_norm(&product));
        let c = cubic_identity_residual(&k, n, H, Z[0], Z[1], Z[2]).unwrap();
        assert!(c.holds(1e-9), "cubic N={n}: {}", c.relative());
    }
}

#[test]
fn pole_reports_index() {
    let k = ctx();
    let n = 2;
    // ħ = −Ω_(1,0) puts the (1,0) term on a pole
    let h = -BasisIndex::new(1, 0).omega(n, k.tau());
    match quantum_R(&k, n, h, Z[0]) {
        Err(Error::PoleProximity { what, .. }) => assert!(what.contains("(1, 0)"), "{what}"),
        other => panic!("expected pole error, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn yang_baxter_random(
        n in 2usize..=3,
        h in (0.02f64..0.3, -0.3f64..0.3),
        pts in proptest::array::uniform3((0.0f64..1.0, 0.0f64..1.0)),
    ) {
        let k = ctx();
        let h = cx(h.0, h.1);
        let z = pts.map(|(x, y)| cx(x, 0.0) + k.tau() * y);
        match qybe_residual(&k, n, h, z[0], z[1], z[2]) {
            Ok(q) => prop_assert!(q.holds(1e-8), "{}", q.relative()),
            Err(Error::PoleProximity { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }
}
