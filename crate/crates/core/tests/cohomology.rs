#![allow(clippy::needless_range_loop)]

mod common;

use gtorsion_core::cohomology::{
    self, coboundary, coboundary_matrix, codifferential, cohomology_dims, differentiated_jacobi, homotopy,
    homotopy_via_dual_basis, pairing, Cochain, CohomologyDims, HOMOTOPY_SIGN,
};
use gtorsion_core::frame::{seeded_rng, stream};
use gtorsion_core::linalg::Matrix;
use gtorsion_core::{DualBasisPair, LieAlgebra};
use proptest::prelude::*;

fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

fn all_named() -> Vec<LieAlgebra> {
    ["so3", "su2", "sl2r", "heisenberg3", "abelian4", "so4"]
        .iter()
        .map(|n| LieAlgebra::named(n).unwrap())
        .collect()
}

#[test]
fn coboundary_squares_to_zero() {
    let mut rng = seeded_rng(11, stream::COCYCLES);
    for alg in all_named() {
        for degree in [0, 1] {
            for _ in 0..100 {
                let c = Cochain::random(alg.dim(), degree, &mut rng).unwrap();
                let dd = coboundary(&alg, &coboundary(&alg, &c).unwrap()).unwrap();
                assert!(dd.norm() <= 1e-12, "{} degree {degree}: {}", alg.name(), dd.norm());
            }
        }
    }
}

#[test]
fn so3_matrix_ranks_match_elimination_oracle() {
    let alg = LieAlgebra::so3();
    for (k, rank) in [(0, 3), (1, 6), (2, 3)] {
        let m = coboundary_matrix(&alg, k).unwrap();
        assert_eq!(common::elimination_rank(&m, 1e-9), rank);
        assert_eq!(gtorsion_core::linalg::numerical_rank(&m, 1e-9), rank);
    }
}

#[test]
fn cohomology_dimensions() {
    for name in ["so3", "su2", "sl2r", "so4"] {
        let dims = cohomology_dims(&LieAlgebra::named(name).unwrap()).unwrap();
        assert_eq!(dims, CohomologyDims { h0: 0, h1: 0, h2: 0 }, "{name}");
    }
    // pinned from the elimination-rank oracle
    let heis = cohomology_dims(&LieAlgebra::heisenberg3()).unwrap();
    assert_eq!(heis, CohomologyDims { h0: 1, h1: 4, h2: 5 });
    let ab2 = cohomology_dims(&LieAlgebra::abelian(2).unwrap()).unwrap();
    assert_eq!(ab2.h1, 4);
    let ab4 = cohomology_dims(&LieAlgebra::abelian(4).unwrap()).unwrap();
    assert_eq!(ab4, CohomologyDims { h0: 4, h1: 16, h2: 24 });
}

#[test]
fn heisenberg_center_is_kernel_of_d0() {
    // centralizer computation: x with [b_i, x] = 0 for all i is span(Z)
    let alg = LieAlgebra::heisenberg3();
    let z = Cochain::from_element(&[0.0, 0.0, 1.0]);
    assert_eq!(coboundary(&alg, &z).unwrap().norm(), 0.0);
    let x = Cochain::from_element(&[1.0, 0.0, 0.0]);
    assert!(coboundary(&alg, &x).unwrap().norm() > 0.5);
}

#[test]
fn homotopy_sign_calibration() {
    // A0: b0 ↦ b1, others ↦ 0
    let alg = LieAlgebra::so3();
    let mut a0 = Matrix::zeros(3, 3);
    a0[(1, 0)] = 1.0;
    let omega = coboundary(&alg, &Cochain::from_linear_map(&a0)).unwrap();
    let prim = homotopy(&alg, &omega).unwrap();
    let back = coboundary(&alg, &prim).unwrap();
    assert!(back.sub(&omega).norm() <= 1e-12);
    // the opposite sign reproduces -ω instead
    let flipped = coboundary(&alg, &prim.scale(-1.0)).unwrap();
    assert!(flipped.sub(&omega).norm() > 0.1);
    assert_eq!(HOMOTOPY_SIGN, 1.0);
}

#[test]
fn homotopy_inverts_coboundary_on_random_cocycles() {
    let mut rng = seeded_rng(5, stream::COCYCLES);
    for name in ["so3", "sl2r", "so4"] {
        let alg = LieAlgebra::named(name).unwrap();
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let a = Cochain::random(alg.dim(), 1, &mut rng).unwrap();
            let omega = coboundary(&alg, &a).unwrap();
            let back = coboundary(&alg, &homotopy(&alg, &omega).unwrap()).unwrap();
            worst = worst.max(back.sub(&omega).norm() / omega.norm());
        }
        assert!(worst <= 1e-9, "{name}: {worst}");
    }
}

#[test]
fn homotopy_output_is_coclosed() {
    let mut rng = seeded_rng(9, stream::COCYCLES);
    for name in ["so3", "sl2r", "so4"] {
        let alg = LieAlgebra::named(name).unwrap();
        for _ in 0..20 {
            let a = Cochain::random(alg.dim(), 1, &mut rng).unwrap();
            let omega = coboundary(&alg, &a).unwrap();
            let prim = homotopy(&alg, &omega).unwrap();
            let co = codifferential(&alg, &prim).unwrap();
            assert!(co.norm() <= 1e-9 * omega.norm().max(1.0), "{name}: {}", co.norm());
        }
    }
}

#[test]
fn codifferential_is_adjoint_of_coboundary() {
    let mut rng = seeded_rng(21, stream::COCYCLES);
    for name in ["so3", "sl2r", "so4"] {
        let alg = LieAlgebra::named(name).unwrap();
        let n = alg.dim();
        for degree in 1..=3 {
            for _ in 0..5 {
                let alpha = Cochain::random(n, degree, &mut rng).unwrap();
                let beta = Cochain::random(n, degree - 1, &mut rng).unwrap();
                let lhs = pairing(&alg, &codifferential(&alg, &alpha).unwrap(), &beta).unwrap();
                let rhs = pairing(&alg, &alpha, &coboundary(&alg, &beta).unwrap()).unwrap();
                assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()), "{name} degree {degree}: {lhs} vs {rhs}");
            }
        }
    }
}

#[test]
fn homotopy_agrees_with_explicit_dual_basis_sum() {
    let mut rng = seeded_rng(2, stream::COCYCLES);
    for name in ["so3", "sl2r", "so4"] {
        let alg = LieAlgebra::named(name).unwrap();
        let pair = alg.dual_basis().unwrap();
        for _ in 0..10 {
            let omega = coboundary(&alg, &Cochain::random(alg.dim(), 1, &mut rng).unwrap()).unwrap();
            let a = homotopy(&alg, &omega).unwrap();
            let b = homotopy_via_dual_basis(&alg, &pair, &omega).unwrap();
            assert!(a.sub(&b).norm() <= 1e-12, "{name}");
        }
    }
    // a rotated eigenbasis of so3 gives the same primitive
    let alg = LieAlgebra::so3();
    let eig = alg.killing_metric().eigen().clone();
    let t = 0.9_f64;
    let rot = Matrix::from_row_major(3, 3, vec![t.cos(), 0.0, t.sin(), 0.0, 1.0, 0.0, -t.sin(), 0.0, t.cos()]);
    let pair = DualBasisPair::from_eigen(&eig.values, &eig.vectors.mul(&rot));
    let omega = coboundary(&alg, &Cochain::random(3, 1, &mut rng).unwrap()).unwrap();
    let a = homotopy(&alg, &omega).unwrap();
    let b = homotopy_via_dual_basis(&alg, &pair, &omega).unwrap();
    assert!(a.sub(&b).norm() <= 1e-10);
}

/// `Σ_cyc T(ω(X,Y),Z) + Σ_cyc ω(T(X,Y),Z)` evaluated on basis triples with the
/// public bracket and component access.
fn six_term_oracle(alg: &LieAlgebra, omega: &Cochain, x: usize, y: usize, z: usize) -> Vec<f64> {
    let n = alg.dim();
    let eval = |p: usize, q: usize| -> Vec<f64> { (0..n).map(|m| omega.get(m, &[p, q])).collect() };
    let eval_vec = |v: &[f64], r: usize| -> Vec<f64> {
        (0..n).map(|c| (0..n).map(|m| v[m] * omega.get(c, &[m, r])).sum()).collect()
    };
    let mut out = vec![0.0; n];
    for (p, q, r) in [(x, y, z), (y, z, x), (z, x, y)] {
        let a = alg.bracket(&eval(p, q), &unit(n, r)).unwrap();
        let b = eval_vec(&alg.bracket(&unit(n, p), &unit(n, q)).unwrap(), r);
        for c in 0..n {
            out[c] += a[c] + b[c];
        }
    }
    out
}

#[test]
fn differentiated_jacobi_vanishes_on_coboundaries() {
    let mut rng = seeded_rng(4, stream::COCYCLES);
    for name in ["so3", "sl2r", "heisenberg3", "so4"] {
        let alg = LieAlgebra::named(name).unwrap();
        let n = alg.dim();
        let omega = coboundary(&alg, &Cochain::random(n, 1, &mut rng).unwrap()).unwrap();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let v = six_term_oracle(&alg, &omega, x, y, z);
                    assert!(v.iter().all(|c| c.abs() <= 1e-12), "{name}");
                }
            }
        }
        assert!(differentiated_jacobi(&alg, &omega).unwrap().norm() <= 1e-12);
    }
}

#[test]
fn differentiated_jacobi_is_minus_coboundary() {
    let mut rng = seeded_rng(8, stream::COCYCLES);
    for name in ["so3", "sl2r", "so4"] {
        let alg = LieAlgebra::named(name).unwrap();
        let n = alg.dim();
        let omega = Cochain::random(n, 2, &mut rng).unwrap();
        let d = coboundary(&alg, &omega).unwrap();
        let six = differentiated_jacobi(&alg, &omega).unwrap();
        assert!(six.scale(-1.0).sub(&d).norm() <= 1e-12);
        for idx in cohomology::subsets(n, 3) {
            let v = six_term_oracle(&alg, &omega, idx[0], idx[1], idx[2]);
            for c in 0..n {
                assert!((v[c] + d.get(c, &idx)).abs() <= 1e-12);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_squared_zero_on_arbitrary_cochains(seed in any::<u64>(), name in prop::sample::select(vec!["so3", "sl2r", "heisenberg3", "so4", "abelian4"])) {
        let alg = LieAlgebra::named(name).unwrap();
        let mut rng = seeded_rng(seed, stream::COCYCLES);
        for degree in [0, 1] {
            let c = Cochain::random(alg.dim(), degree, &mut rng).unwrap();
            let dd = coboundary(&alg, &coboundary(&alg, &c).unwrap()).unwrap();
            prop_assert!(dd.norm() <= 1e-12);
        }
    }

    #[test]
    fn coboundary_matrix_matches_operator(seed in any::<u64>(), k in 0usize..3) {
        let alg = LieAlgebra::sl2r();
        let mut rng = seeded_rng(seed, stream::COCYCLES);
        let c = Cochain::random(3, k, &mut rng).unwrap();
        let via_matrix = coboundary_matrix(&alg, k).unwrap().mul_vec(c.components());
        let direct = coboundary(&alg, &c).unwrap();
        for (a, b) in via_matrix.iter().zip(direct.components()) {
            prop_assert!((a - b).abs() <= 1e-13);
        }
    }
}

/// so3 in the basis `R b_i` for a non-orthogonal `R`, so no Killing entry is dyadic.
fn skewed_so3() -> LieAlgebra {
    let t: f64 = 0.7;
    let r = Matrix::from_row_major(3, 3, vec![t.cos(), -t.sin(), 0.0, t.sin(), t.cos(), 0.0, 0.0, 0.3, 1.3]);
    let ri = r.inverse().unwrap();
    let so3 = LieAlgebra::so3();
    let c = so3.constants();
    let t = gtorsion_core::Tensor3::from_fn(3, |k, i0, j0| {
        if i0 == j0 {
            return 0.0;
        }
        let (i, j, s) = if i0 < j0 { (i0, j0, 1.0) } else { (j0, i0, -1.0) };
        let mut v = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                for m in 0..3 {
                    v += ri[(k, m)] * c[[m, a, b]] * r[(a, i)] * r[(b, j)];
                }
            }
        }
        s * v
    });
    LieAlgebra::from_constants("so3 skewed", t).unwrap()
}

#[test]
fn homotopy_in_a_generic_basis() {
    let alg = skewed_so3();
    assert!(alg.jacobi_residual() <= 1e-12);
    assert!(alg.classify().compact_type);
    let mut rng = seeded_rng(13, stream::COCYCLES);
    for _ in 0..100 {
        let omega = coboundary(&alg, &Cochain::random(3, 1, &mut rng).unwrap()).unwrap();
        let prim = homotopy(&alg, &omega).unwrap();
        assert!(coboundary(&alg, &prim).unwrap().sub(&omega).norm() <= 1e-9 * omega.norm());
        assert!(codifferential(&alg, &prim).unwrap().norm() <= 1e-9 * omega.norm());
    }
}
