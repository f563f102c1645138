use gtorsion_core::geometry::{
    self, bracket_field_from_frame, christoffel_field, covariant_derivative_t, curvature_field,
    exterior_covariant_t, gauge_field_a, gauge_via_dual_basis, residual_report, torsion_field, PointSample,
    StencilField,
};
use gtorsion_core::linalg::{self, Matrix};
use gtorsion_core::{Chart, Error, Frame, FrameField, FrameKind, LieAlgebra, Result};

fn chart(n: usize, h: f64, count: usize) -> Chart {
    Chart::sampled(n, h, 0.4, count, 7).unwrap()
}

fn random(seed: u64) -> FrameKind {
    FrameKind::RandomSmooth { seed, scale: 1.0 }
}

/// `u(x) = φ(ad_x)` without the inverse, the right-invariant alternative.
struct DirectPhi(LieAlgebra);

impl Frame for DirectPhi {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn evaluate(&self, x: &[f64]) -> Result<Matrix> {
        let u = FrameField::new(&self.0, FrameKind::ExpChart)?.evaluate(x)?;
        Ok(u.inverse().unwrap())
    }
}

/// `u(x) = exp(x_0 · ad_v)`, a curve of inner automorphisms.
struct InnerAutomorphism(LieAlgebra, Vec<f64>);

impl Frame for InnerAutomorphism {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn evaluate(&self, x: &[f64]) -> Result<Matrix> {
        Ok(linalg::expm(&self.0.ad(&self.1).scale(x[0])))
    }
}

struct Fixed(Matrix);

impl Frame for Fixed {
    fn dim(&self) -> usize {
        self.0.rows()
    }
    fn evaluate(&self, _: &[f64]) -> Result<Matrix> {
        Ok(self.0.clone())
    }
}

/// Finite-difference bracket of `V_A = u A`, `V_B = u B` minus `u [A, B]`.
fn vector_field_bracket_error<F: Frame>(alg: &LieAlgebra, frame: &F, x: &[f64], a: &[f64], b: &[f64], h: f64) -> f64 {
    let n = alg.dim();
    let field = |y: &[f64], v: &[f64]| frame.evaluate(y).unwrap().mul_vec(v);
    let deriv = |v: &[f64], j: usize| -> Vec<f64> {
        let mut p = x.to_vec();
        let mut m = x.to_vec();
        p[j] += h;
        m[j] -= h;
        field(&p, v).iter().zip(field(&m, v)).map(|(a, b)| (a - b) / (2.0 * h)).collect()
    };
    let va = field(x, a);
    let vb = field(x, b);
    let mut br = vec![0.0; n];
    for j in 0..n {
        let db = deriv(b, j);
        let da = deriv(a, j);
        for k in 0..n {
            br[k] += va[j] * db[k] - vb[j] * da[k];
        }
    }
    let expected = field(x, &alg.bracket(a, b).unwrap());
    br.iter().zip(expected).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}

#[test]
fn exp_chart_frame_intertwines_vector_field_bracket() {
    let alg = LieAlgebra::so3();
    let frame = FrameField::new(&alg, FrameKind::ExpChart).unwrap();
    let x = [0.3, 0.0, 0.0];
    for (a, b) in [([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]), ([0.0, 1.0, 0.0], [0.0, 0.0, 1.0]), ([0.2, -0.5, 1.0], [1.0, 0.3, 0.0])] {
        let e1 = vector_field_bracket_error(&alg, &frame, &x, &a, &b, 0.02);
        let e2 = vector_field_bracket_error(&alg, &frame, &x, &a, &b, 0.01);
        assert!(e1 < 1e-4, "{e1}");
        let ratio = e1 / e2;
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }
    // the non-inverted series gives the bracket with the wrong sign
    let wrong = vector_field_bracket_error(&alg, &DirectPhi(alg.clone()), &x, &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], 0.01);
    assert!(wrong > 0.5, "{wrong}");
}

#[test]
fn identity_and_scaled_frames() {
    let alg = LieAlgebra::so3();
    let id = FrameField::new(&alg, FrameKind::Identity).unwrap();
    let field = bracket_field_from_frame(&alg, &id, &chart(3, 0.02, 5)).unwrap();
    for (_, s) in field.points() {
        assert_eq!(&s.center_sample().bracket, alg.constants());
    }
    let scaled = FrameField::new(&alg, FrameKind::Scaled(2.0)).unwrap();
    let p = PointSample::from_frame(&alg, &scaled.evaluate(&[0.1, 0.0, 0.0]).unwrap()).unwrap();
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(p.bracket[[k, i, j]], 0.5 * alg.structure_constant(k, i, j));
            }
        }
    }
    assert!(p.metric.sub(&Matrix::identity(3).scale(0.5)).max_abs() < 1e-15);
}

#[test]
fn automorphism_frames_preserve_structure_constants() {
    for (alg, v) in [(LieAlgebra::so3(), vec![0.3, -0.7, 0.2]), (LieAlgebra::sl2r(), vec![0.5, 0.1, -0.2])] {
        let frame = InnerAutomorphism(alg.clone(), v);
        let field = bracket_field_from_frame(&alg, &frame, &chart(3, 0.02, 10)).unwrap();
        for (_, s) in field.points() {
            let diff = s.center_sample().bracket.sub(alg.constants()).max_abs();
            assert!(diff <= 1e-12, "{}: {diff}", alg.name());
        }
    }
}

#[test]
fn constant_field_has_vanishing_geometry() {
    let alg = LieAlgebra::so3();
    let id = FrameField::new(&alg, FrameKind::Identity).unwrap();
    let field = bracket_field_from_frame(&alg, &id, &chart(3, 0.02, 10)).unwrap();
    assert!(christoffel_field(&field).iter().all(|g| g.max_abs() == 0.0));
    assert!(covariant_derivative_t(&field).iter().all(|t| t.max_abs() == 0.0));
    assert!(exterior_covariant_t(&field).iter().all(|t| t.max_abs() == 0.0));
    assert!(gauge_field_a(&field).iter().all(|t| t.max_abs() == 0.0));
    assert!(torsion_field(&field).iter().all(|t| t.max_abs() == 0.0));
    assert!(curvature_field(&field).iter().all(|t| t.max_abs() <= 1e-12));
    let report = residual_report(&field);
    assert_eq!(report.points.len(), 10);
    assert!(report.max.values().iter().all(|v| *v == 0.0));
}

fn sample_fields() -> Vec<(LieAlgebra, FrameKind)> {
    vec![
        (LieAlgebra::so3(), FrameKind::ExpChart),
        (LieAlgebra::so3(), random(7)),
        (LieAlgebra::sl2r(), FrameKind::ExpChart),
        (LieAlgebra::so4(), random(3)),
    ]
}

#[test]
fn stencil_points_satisfy_jacobi() {
    for (alg, kind) in sample_fields() {
        let frame = FrameField::new(&alg, kind).unwrap();
        let c = Chart::sampled(alg.dim(), 0.02, 0.4, 3, 1).unwrap();
        for x in c.points() {
            let s = StencilField::evaluate(&alg, &frame, x, 0.02).unwrap();
            assert_eq!(s.stencil_len(), 1 + 2 * alg.dim() * alg.dim() + 2 * alg.dim());
            let t = LieAlgebra::from_constants("t", s.center_sample().bracket.clone()).unwrap();
            assert!(t.jacobi_residual() <= 1e-10);
        }
    }
}

#[test]
fn christoffel_symmetry_and_discrete_metric_compatibility() {
    for (alg, kind) in sample_fields() {
        let n = alg.dim();
        let frame = FrameField::new(&alg, kind).unwrap();
        let field = bracket_field_from_frame(&alg, &frame, &chart(n, 0.02, 5)).unwrap();
        for (_, s) in field.points() {
            let g = s.christoffel();
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        assert_eq!(g[[k, i, j]], g[[k, j, i]]);
                    }
                }
            }
            let scale = s.center_sample().metric.max_abs();
            let defect = s.metric_compatibility_defect().max_abs();
            assert!(defect <= 1e-12 * scale.max(1.0), "{} {}: {defect}", alg.name(), kind.label());
        }
    }
}

#[test]
fn tensor_symmetry_types() {
    for (alg, kind) in sample_fields() {
        let n = alg.dim();
        let frame = FrameField::new(&alg, kind).unwrap();
        let field = bracket_field_from_frame(&alg, &frame, &chart(n, 0.02, 3)).unwrap();
        for (_, s) in field.points() {
            let geo = s.geometry();
            for i in 0..n {
                for c in 0..n {
                    for a in 0..n {
                        for b in 0..n {
                            assert!((geo.dt[[i, c, a, b]] + geo.dt[[i, c, b, a]]).abs() <= 1e-12);
                        }
                    }
                }
            }
            for c in 0..n {
                for x in 0..n {
                    for y in 0..n {
                        assert_eq!(geo.torsion[[c, x, y]], -geo.torsion[[c, y, x]]);
                        for z in 0..n {
                            let v = geo.ddt[[c, x, y, z]];
                            assert!((v + geo.ddt[[c, y, x, z]]).abs() <= 1e-12);
                            assert!((v + geo.ddt[[c, x, z, y]]).abs() <= 1e-12);
                            assert!((v + geo.ddt[[c, z, y, x]]).abs() <= 1e-12);
                            assert_eq!(geo.riemann[[c, x, y, z]], -geo.riemann[[c, x, z, y]]);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn gauge_field_matches_explicit_dual_basis_sum() {
    for (alg, kind) in sample_fields() {
        let frame = FrameField::new(&alg, kind).unwrap();
        let field = bracket_field_from_frame(&alg, &frame, &chart(alg.dim(), 0.02, 3)).unwrap();
        for (_, s) in field.points() {
            let sample = s.center_sample();
            let dt = s.covariant_derivative();
            let pair = sample.dual_basis().unwrap();
            let explicit = gauge_via_dual_basis(sample, &dt, &pair);
            let diff = explicit.sub(&s.gauge_field()).max_abs();
            assert!(diff <= 1e-12, "{} {}: {diff}", alg.name(), kind.label());
        }
    }
}

fn max_norms(alg: &LieAlgebra, kind: FrameKind, h: f64, count: usize) -> gtorsion_core::NormSet {
    let frame = FrameField::new(alg, kind).unwrap();
    let base = Chart::sampled(alg.dim(), 0.04, 0.4, count, 7).unwrap();
    geometry::diagnose(alg, &frame, &base.with_step(h).unwrap()).unwrap().max
}

#[test]
fn exp_chart_torsion_and_skewness_converge_at_second_order() {
    let alg = LieAlgebra::so3();
    let coarse = max_norms(&alg, FrameKind::ExpChart, 0.02, 40);
    let fine = max_norms(&alg, FrameKind::ExpChart, 0.01, 40);
    for (name, a, b) in [
        ("tau", coarse.tau, fine.tau),
        ("A", coarse.gauge, fine.gauge),
        ("DT", coarse.dt, fine.dt),
        ("dDT", coarse.ddt, fine.ddt),
        ("skew", coarse.metric_skew, fine.metric_skew),
    ] {
        let ratio = a / b;
        assert!((3.5..=4.5).contains(&ratio), "{name}: {ratio}");
    }
    // bi-invariant group: the Riemann tensor does not shrink
    assert!(fine.riemann > 0.2);
}

#[test]
fn bi_invariant_curvature_at_origin() {
    // R(X,Y)Z = -¼ [[X,Y],Z] in the chart's coordinate basis at x = 0
    let alg = LieAlgebra::so3();
    let frame = FrameField::new(&alg, FrameKind::ExpChart).unwrap();
    let mut errors = Vec::new();
    for h in [0.04, 0.02, 0.01] {
        let s = StencilField::evaluate(&alg, &frame, &[0.0; 3], h).unwrap();
        let r = s.riemann();
        let mut err: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let e = |v: usize| {
                        let mut u = vec![0.0; 3];
                        u[v] = 1.0;
                        u
                    };
                    let ij = alg.bracket(&e(i), &e(j)).unwrap();
                    let oracle = alg.bracket(&ij, &e(k)).unwrap();
                    for l in 0..3 {
                        err = err.max((r[[l, k, i, j]] + 0.25 * oracle[l]).abs());
                    }
                }
            }
        }
        errors.push(err);
    }
    assert!(errors[2] < 1e-4, "{errors:?}");
    let order = (errors[1] / errors[2]).log2();
    assert!(order >= 1.8, "{errors:?}");
}

#[test]
fn so3_fields_are_always_parallel() {
    // Every so3 bracket field on a 3-manifold is a multiple of the metric volume
    // form raised by the metric, so DT vanishes in the continuum even for random
    // frames and the finite-difference values shrink like h².
    let alg = LieAlgebra::so3();
    let coarse = max_norms(&alg, random(7), 0.02, 30);
    let fine = max_norms(&alg, random(7), 0.01, 30);
    for (a, b) in [(coarse.dt, fine.dt), (coarse.tau, fine.tau), (coarse.ddt, fine.ddt)] {
        assert!((3.5..=4.5).contains(&(a / b)));
    }
    // and the residual of ∇T = 0 is at round-off on every so3 field
    assert!(fine.nabla_residual < 1e-12);
}

#[test]
fn so4_random_field_is_not_integrable_and_nabla_t_converges() {
    let alg = LieAlgebra::so4();
    let norms: Vec<_> = [0.04, 0.02, 0.01].iter().map(|&h| max_norms(&alg, random(7), h, 20)).collect();
    for w in norms.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        for (x, y) in [(a.tau, b.tau), (a.gauge, b.gauge), (a.dt, b.dt), (a.ddt, b.ddt)] {
            assert!(x > 1e-2 && (0.8..=1.2).contains(&(x / y)));
        }
        for (x, y) in [(a.nabla_residual, b.nabla_residual), (a.metric_skew, b.metric_skew)] {
            let order = (x / y).log2();
            assert!((1.8..=2.2).contains(&order), "order {order}");
        }
    }
    assert!(norms[1].ddt > 1e-2);
}

#[test]
fn conditioning_failures_are_reported() {
    let alg = LieAlgebra::so3();
    let singular = Fixed(Matrix::from_row_major(3, 3, vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]));
    assert!(matches!(
        StencilField::evaluate(&alg, &singular, &[0.0; 3], 0.01),
        Err(Error::SingularFrame { .. })
    ));
    // frame condition 1e5 is accepted, but the metric then has condition 1e10
    let stretched = Fixed(Matrix::from_row_major(3, 3, vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1e-5]));
    let err = StencilField::evaluate(&alg, &stretched, &[0.0; 3], 0.01).unwrap_err();
    assert!(matches!(err, Error::IllConditionedMetric { .. }), "{err:?}");
    assert!(err.is_conditioning());
    assert!(FrameField::new(&alg, FrameKind::Scaled(0.0)).is_err());
}

#[test]
fn report_skips_points_whose_stencil_leaves_the_chart() {
    let alg = LieAlgebra::so3();
    let frame = FrameField::new(&alg, FrameKind::ExpChart).unwrap();
    let c = Chart::new(3, vec![vec![0.0; 3], vec![0.39, 0.0, 0.0], vec![0.1, -0.2, 0.3]], 0.02, 0.4).unwrap();
    let report = geometry::diagnose(&alg, &frame, &c).unwrap();
    let ids: Vec<usize> = report.points.iter().map(|p| p.point_id).collect();
    assert_eq!(ids, vec![0, 2]);
    let field = bracket_field_from_frame(&alg, &frame, &c).unwrap();
    assert_eq!(residual_report(&field), report);
}
