//! Bracket fields `T(x)` generated by a frame, their Killing metric field,
//! the finite-difference Levi-Civita connection `D`, and the adapted
//! connection `∇ = D + A`.
//!
//! Tensor layouts (upper index first, then lower indices in order, except
//! where a derivative direction leads):
//!
//! | quantity             | layout            |
//! |----------------------|-------------------|
//! | `T^c_{ab}`           | `[c][a][b]`       |
//! | `Γ^k_{ij}`           | `[k][i][j]`       |
//! | `(D_i T)^c_{ab}`     | `[i][c][a][b]`    |
//! | `(d^D T)^c_{xyz}`    | `[c][x][y][z]`    |
//! | `A^c_{ib}`           | `[i][c][b]`       |
//! | `τ^c_{ij}`           | `[c][i][j]`       |
//! | `(∇_i T)^c_{ab}`     | `[i][c][a][b]`    |
//! | metric skewness      | `[i][c][b]`       |
//! | `R^l_{kij}`          | `[l][k][i][j]`    |
//!
//! All derivatives are second-order central differences with the chart
//! step. Every sample point carries its own stencil, so no global grid is
//! stored.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::cohomology::contract_primitive;
use crate::error::{Error, Result};
use crate::frame::{Chart, Frame};
use crate::lie::{DualBasisPair, KillingMetric, LieAlgebra};
use crate::linalg::Matrix;
use crate::tensor::{Tensor3, Tensor4};

/// Pointwise Jacobi tolerance for frame-generated brackets (unit scale).
pub const POINT_JACOBI_TOLERANCE: f64 = 1e-10;
/// Metrics with condition number above this are rejected.
pub const MAX_METRIC_CONDITION: f64 = 1e8;

/// `T`, `G` and `G⁻¹` at one point.
#[derive(Debug, Clone)]
pub struct PointSample {
    pub bracket: Tensor3,
    pub metric: Matrix,
    pub inv_metric: Matrix,
}

impl PointSample {
    /// Pulls the structure constants through the frame:
    /// `T^c_{ab} = u^c_m C^m_{ij} (u⁻¹)^i_a (u⁻¹)^j_b`.
    pub fn from_frame(alg: &LieAlgebra, u: &Matrix) -> Result<Self> {
        let n = alg.dim();
        let w = u.inverse().ok_or(Error::SingularFrame {
            condition: f64::INFINITY,
        })?;
        let c = alg.constants();
        // x[m][a][j] = Σ_i C^m_{ij} w^i_a
        let x = Tensor3::from_fn(n, |m, a, j| (0..n).map(|i| c[[m, i, j]] * w[(i, a)]).sum());
        let mut y = Tensor3::zeros(n);
        for m in 0..n {
            for a in 0..n {
                for b in a + 1..n {
                    y[[m, a, b]] = (0..n).map(|j| x[[m, a, j]] * w[(j, b)]).sum();
                }
            }
        }
        let mut t = Tensor3::zeros(n);
        for cc in 0..n {
            for a in 0..n {
                for b in a + 1..n {
                    let v: f64 = (0..n).map(|m| u[(cc, m)] * y[[m, a, b]]).sum();
                    t[[cc, a, b]] = v;
                    t[[cc, b, a]] = -v;
                }
            }
        }
        Self::from_bracket(t)
    }

    /// Checks the pointwise Jacobi identity and builds the metric pair.
    pub fn from_bracket(t: Tensor3) -> Result<Self> {
        let scale = t.max_abs().max(1.0);
        let alg = LieAlgebra::from_constants("T(x)", t)?;
        let residual = alg.jacobi_residual();
        if residual > POINT_JACOBI_TOLERANCE * scale * scale {
            return Err(Error::JacobiViolation { residual });
        }
        let km = alg.killing_metric();
        let condition = km.condition_number();
        if condition.is_nan() || condition > MAX_METRIC_CONDITION {
            return Err(Error::IllConditionedMetric { condition });
        }
        let inv_metric = km.inverse()?;
        let metric = km.gram().clone();
        Ok(Self {
            bracket: alg.constants().clone(),
            metric,
            inv_metric,
        })
    }

    /// Dual basis of the pointwise metric.
    pub fn dual_basis(&self) -> Result<DualBasisPair> {
        KillingMetric::from_gram(self.metric.clone()).dual_basis()
    }
}

type Offset = Vec<i8>;

fn shifted(base: &[i8], axis: usize, delta: i8) -> Offset {
    let mut o = base.to_vec();
    o[axis] += delta;
    o
}

/// Field samples on the stencil `{0, ±h e_i, ±h e_i ± h e_j}` around one
/// sample point.
#[derive(Debug, Clone)]
pub struct StencilField {
    center: Vec<f64>,
    step: f64,
    samples: BTreeMap<Offset, PointSample>,
}

impl StencilField {
    pub fn evaluate<F: Frame + ?Sized>(
        alg: &LieAlgebra,
        frame: &F,
        center: &[f64],
        step: f64,
    ) -> Result<Self> {
        let n = alg.dim();
        if center.len() != n || frame.dim() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: center.len(),
            });
        }
        let zero: Offset = vec![0; n];
        let mut offsets: Vec<Offset> = vec![zero.clone()];
        for i in 0..n {
            for si in [-1i8, 1] {
                let first = shifted(&zero, i, si);
                offsets.push(first.clone());
                for j in 0..n {
                    for sj in [-1i8, 1] {
                        offsets.push(shifted(&first, j, sj));
                    }
                }
            }
        }
        let mut samples = BTreeMap::new();
        for off in offsets {
            if samples.contains_key(&off) {
                continue;
            }
            let x: Vec<f64> = center
                .iter()
                .zip(&off)
                .map(|(c, o)| c + step * f64::from(*o))
                .collect();
            let u = frame.evaluate(&x)?;
            samples.insert(off, PointSample::from_frame(alg, &u)?);
        }
        Ok(Self {
            center: center.to_vec(),
            step,
            samples,
        })
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Number of distinct stencil points.
    pub fn stencil_len(&self) -> usize {
        self.samples.len()
    }

    fn at(&self, offset: &[i8]) -> &PointSample {
        &self.samples[offset]
    }

    fn origin(&self) -> Offset {
        vec![0; self.dim()]
    }

    pub fn center_sample(&self) -> &PointSample {
        self.at(&self.origin())
    }

    /// `∂_k G_{ij}` at `offset`, as `[k][i][j]`.
    fn metric_derivative(&self, offset: &[i8]) -> Tensor3 {
        let n = self.dim();
        let inv2h = 0.5 / self.step;
        let mut d = Tensor3::zeros(n);
        for k in 0..n {
            let plus = &self.at(&shifted(offset, k, 1)).metric;
            let minus = &self.at(&shifted(offset, k, -1)).metric;
            for i in 0..n {
                for j in 0..n {
                    d[[k, i, j]] = (plus[(i, j)] - minus[(i, j)]) * inv2h;
                }
            }
        }
        d
    }

    fn christoffel_at(&self, offset: &[i8]) -> Tensor3 {
        let n = self.dim();
        let dg = self.metric_derivative(offset);
        let ginv = &self.at(offset).inv_metric;
        let mut gamma = Tensor3::zeros(n);
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let mut s = 0.0;
                    for l in 0..n {
                        s += ginv[(k, l)] * (dg[[i, j, l]] + dg[[j, i, l]] - dg[[l, i, j]]);
                    }
                    gamma[[k, i, j]] = 0.5 * s;
                    gamma[[k, j, i]] = 0.5 * s;
                }
            }
        }
        gamma
    }

    /// `Γ^k_{ij}` at the sample point.
    pub fn christoffel(&self) -> Tensor3 {
        self.christoffel_at(&self.origin())
    }

    /// `∂_k G_{ij} − Γ^l_{ki} G_{lj} − Γ^l_{kj} G_{li}` with the same
    /// difference operator, `[k][i][j]`.
    pub fn metric_compatibility_defect(&self) -> Tensor3 {
        let n = self.dim();
        let o = self.origin();
        let dg = self.metric_derivative(&o);
        let gamma = self.christoffel_at(&o);
        let g = &self.at(&o).metric;
        Tensor3::from_fn(n, |k, i, j| {
            let mut s = dg[[k, i, j]];
            for l in 0..n {
                s -= gamma[[l, k, i]] * g[(l, j)] + gamma[[l, k, j]] * g[(l, i)];
            }
            s
        })
    }

    /// `(D_i T)^c_{ab}` as `[i][c][a][b]`.
    pub fn covariant_derivative(&self) -> Tensor4 {
        let o = self.origin();
        self.covariant_derivative_with(&self.christoffel_at(&o))
    }

    fn covariant_derivative_with(&self, gamma: &Tensor3) -> Tensor4 {
        let n = self.dim();
        let o = self.origin();
        let t = &self.at(&o).bracket;
        let inv2h = 0.5 / self.step;
        let mut dt = Tensor4::zeros(n);
        for i in 0..n {
            let plus = &self.at(&shifted(&o, i, 1)).bracket;
            let minus = &self.at(&shifted(&o, i, -1)).bracket;
            for c in 0..n {
                for a in 0..n {
                    for b in a + 1..n {
                        let mut s = (plus[[c, a, b]] - minus[[c, a, b]]) * inv2h;
                        for m in 0..n {
                            s += gamma[[c, i, m]] * t[[m, a, b]]
                                - gamma[[m, i, a]] * t[[c, m, b]]
                                - gamma[[m, i, b]] * t[[c, a, m]];
                        }
                        dt[[i, c, a, b]] = s;
                        dt[[i, c, b, a]] = -s;
                    }
                }
            }
        }
        dt
    }

    /// Gauge field `A^c_{ib} = Σ G^{kl} T^c_{km} (D_i T)^m_{bl}` as `[i][c][b]`.
    pub fn gauge_field(&self) -> Tensor3 {
        gauge_from(self.center_sample(), &self.covariant_derivative())
    }

    /// Riemann tensor `R^l_{kij}` as `[l][k][i][j]`.
    pub fn riemann(&self) -> Tensor4 {
        let n = self.dim();
        let o = self.origin();
        let gamma = self.christoffel_at(&o);
        let inv2h = 0.5 / self.step;
        // dgamma[i] = ∂_i Γ
        let dgamma: Vec<Tensor3> = (0..n)
            .map(|i| {
                let p = self.christoffel_at(&shifted(&o, i, 1));
                let m = self.christoffel_at(&shifted(&o, i, -1));
                Tensor3::from_fn(n, |a, b, c| (p[[a, b, c]] - m[[a, b, c]]) * inv2h)
            })
            .collect();
        let mut r = Tensor4::zeros(n);
        for l in 0..n {
            for k in 0..n {
                for i in 0..n {
                    for j in i + 1..n {
                        let mut s = dgamma[i][[l, j, k]] - dgamma[j][[l, i, k]];
                        for m in 0..n {
                            s += gamma[[l, i, m]] * gamma[[m, j, k]] - gamma[[l, j, m]] * gamma[[m, i, k]];
                        }
                        r[[l, k, i, j]] = s;
                        r[[l, k, j, i]] = -s;
                    }
                }
            }
        }
        r
    }

    /// Everything at the sample point in one pass.
    pub fn geometry(&self) -> PointGeometry {
        let sample = self.center_sample();
        let christoffel = self.christoffel();
        let dt = self.covariant_derivative_with(&christoffel);
        let gauge = gauge_from(sample, &dt);
        PointGeometry {
            ddt: exterior_covariant(&dt),
            torsion: torsion_from(&gauge),
            nabla_residual: nabla_residual(&sample.bracket, &dt, &gauge),
            metric_skew: metric_skewness(&sample.metric, &gauge),
            riemann: self.riemann(),
            christoffel,
            dt,
            gauge,
        }
    }
}

fn gauge_from(sample: &PointSample, dt: &Tensor4) -> Tensor3 {
    let n = sample.bracket.dim();
    let mut a = Tensor3::zeros(n);
    for i in 0..n {
        let ai = contract_primitive(&sample.bracket, &sample.inv_metric, |m, b, l| dt[[i, m, b, l]]);
        for c in 0..n {
            for b in 0..n {
                a[[i, c, b]] = ai[(c, b)];
            }
        }
    }
    a
}

/// `Σ_k T(e_k, (D_i T)(b, e^k))` evaluated literally over a dual pair.
pub fn gauge_via_dual_basis(sample: &PointSample, dt: &Tensor4, pair: &DualBasisPair) -> Tensor3 {
    let n = sample.bracket.dim();
    let t = &sample.bracket;
    let mut a = Tensor3::zeros(n);
    for i in 0..n {
        for b in 0..n {
            for k in 0..n {
                let ek = pair.primal.column(k);
                let eku = pair.dual.column(k);
                let w: Vec<f64> = (0..n)
                    .map(|m| (0..n).map(|l| dt[[i, m, b, l]] * eku[l]).sum())
                    .collect();
                for c in 0..n {
                    let mut s = 0.0;
                    for p in 0..n {
                        for m in 0..n {
                            s += t[[c, p, m]] * ek[p] * w[m];
                        }
                    }
                    a[[i, c, b]] += s;
                }
            }
        }
    }
    a
}

/// `τ^c_{ij} = A^c_{ij} − A^c_{ji}`.
fn torsion_from(gauge: &Tensor3) -> Tensor3 {
    let n = gauge.dim();
    let mut tau = Tensor3::zeros(n);
    for c in 0..n {
        for i in 0..n {
            for j in i + 1..n {
                let v = gauge[[i, c, j]] - gauge[[j, c, i]];
                tau[[c, i, j]] = v;
                tau[[c, j, i]] = -v;
            }
        }
    }
    tau
}

/// Cyclic sum `(D_x T)(y,z) + (D_y T)(z,x) + (D_z T)(x,y)`.
fn exterior_covariant(dt: &Tensor4) -> Tensor4 {
    let n = dt.dim();
    Tensor4::from_fn(n, |c, x, y, z| dt[[x, c, y, z]] + dt[[y, c, z, x]] + dt[[z, c, x, y]])
}

/// `(∇_i T)^c_{ab} = (D_i T)^c_{ab} + A^c_{im} T^m_{ab} − A^m_{ia} T^c_{mb} − A^m_{ib} T^c_{am}`.
fn nabla_residual(t: &Tensor3, dt: &Tensor4, gauge: &Tensor3) -> Tensor4 {
    let n = t.dim();
    Tensor4::from_fn(n, |i, c, a, b| {
        let mut s = dt[[i, c, a, b]];
        for m in 0..n {
            s += gauge[[i, c, m]] * t[[m, a, b]]
                - gauge[[i, m, a]] * t[[c, m, b]]
                - gauge[[i, m, b]] * t[[c, a, m]];
        }
        s
    })
}

/// `G_{cm} A^m_{ib} + G_{bm} A^m_{ic}`.
fn metric_skewness(g: &Matrix, gauge: &Tensor3) -> Tensor3 {
    let n = g.rows();
    Tensor3::from_fn(n, |i, c, b| {
        (0..n)
            .map(|m| g[(c, m)] * gauge[[i, m, b]] + g[(b, m)] * gauge[[i, m, c]])
            .sum()
    })
}

/// All derived tensors at one sample point.
#[derive(Debug, Clone)]
pub struct PointGeometry {
    pub christoffel: Tensor3,
    pub dt: Tensor4,
    pub ddt: Tensor4,
    pub gauge: Tensor3,
    pub torsion: Tensor3,
    pub nabla_residual: Tensor4,
    pub metric_skew: Tensor3,
    pub riemann: Tensor4,
}

impl PointGeometry {
    pub fn norms(&self) -> NormSet {
        NormSet {
            tau: self.torsion.max_abs(),
            gauge: self.gauge.max_abs(),
            dt: self.dt.max_abs(),
            ddt: self.ddt.max_abs(),
            nabla_residual: self.nabla_residual.max_abs(),
            metric_skew: self.metric_skew.max_abs(),
            riemann: self.riemann.max_abs(),
        }
    }
}

/// Max-abs norms of the diagnosed tensors.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NormSet {
    pub tau: f64,
    pub gauge: f64,
    pub dt: f64,
    pub ddt: f64,
    pub nabla_residual: f64,
    pub metric_skew: f64,
    pub riemann: f64,
}

impl NormSet {
    pub const NAMES: [&'static str; 7] = [
        "norm_tau",
        "norm_A",
        "norm_DT",
        "norm_dDT",
        "norm_nablaT_residual",
        "norm_metric_skew",
        "norm_riemann",
    ];

    /// Values in the order of [`NormSet::NAMES`].
    pub fn values(&self) -> [f64; 7] {
        [
            self.tau,
            self.gauge,
            self.dt,
            self.ddt,
            self.nabla_residual,
            self.metric_skew,
            self.riemann,
        ]
    }

    pub fn from_values(v: [f64; 7]) -> Self {
        Self {
            tau: v[0],
            gauge: v[1],
            dt: v[2],
            ddt: v[3],
            nabla_residual: v[4],
            metric_skew: v[5],
            riemann: v[6],
        }
    }

    /// Componentwise maximum.
    pub fn max(&self, other: &NormSet) -> NormSet {
        let a = self.values();
        let b = other.values();
        let mut out = [0.0; 7];
        for k in 0..7 {
            out[k] = a[k].max(b[k]);
        }
        Self::from_values(out)
    }
}

/// Stencil samples for every chart point whose stencil fits in the chart.
#[derive(Debug, Clone)]
pub struct BracketField {
    step: f64,
    /// `(point_id, stencil)`, where `point_id` indexes the chart's points.
    points: Vec<(usize, StencilField)>,
}

pub fn bracket_field_from_frame<F: Frame + ?Sized>(
    alg: &LieAlgebra,
    frame: &F,
    chart: &Chart,
) -> Result<BracketField> {
    if chart.dim() != alg.dim() {
        return Err(Error::LengthMismatch {
            expected: alg.dim(),
            found: chart.dim(),
        });
    }
    let mut points = Vec::new();
    for (id, x) in chart.points().iter().enumerate() {
        if chart.stencil_inside(x) {
            points.push((id, StencilField::evaluate(alg, frame, x, chart.step())?));
        }
    }
    Ok(BracketField {
        step: chart.step(),
        points,
    })
}

impl BracketField {
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn points(&self) -> &[(usize, StencilField)] {
        &self.points
    }

    fn map<T>(&self, f: impl Fn(&StencilField) -> T) -> Vec<T> {
        self.points.iter().map(|(_, s)| f(s)).collect()
    }
}

pub fn christoffel_field(field: &BracketField) -> Vec<Tensor3> {
    field.map(StencilField::christoffel)
}

pub fn covariant_derivative_t(field: &BracketField) -> Vec<Tensor4> {
    field.map(StencilField::covariant_derivative)
}

pub fn exterior_covariant_t(field: &BracketField) -> Vec<Tensor4> {
    field.map(|s| exterior_covariant(&s.covariant_derivative()))
}

pub fn gauge_field_a(field: &BracketField) -> Vec<Tensor3> {
    field.map(StencilField::gauge_field)
}

pub fn torsion_field(field: &BracketField) -> Vec<Tensor3> {
    field.map(|s| torsion_from(&s.gauge_field()))
}

pub fn curvature_field(field: &BracketField) -> Vec<Tensor4> {
    field.map(StencilField::riemann)
}

/// Norms at one reported sample point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointDiagnostics {
    pub point_id: usize,
    pub x: Vec<f64>,
    pub norms: NormSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport {
    pub step: f64,
    pub points: Vec<PointDiagnostics>,
    pub max: NormSet,
}

impl DiagnosticsReport {
    /// Global maxima are reduced in point order.
    pub fn from_points(step: f64, points: Vec<PointDiagnostics>) -> Self {
        let max = points
            .iter()
            .fold(NormSet::default(), |acc, p| acc.max(&p.norms));
        Self { step, points, max }
    }
}

pub fn residual_report(field: &BracketField) -> DiagnosticsReport {
    let points = field
        .points
        .iter()
        .map(|(id, s)| PointDiagnostics {
            point_id: *id,
            x: s.center().to_vec(),
            norms: s.geometry().norms(),
        })
        .collect();
    DiagnosticsReport::from_points(field.step, points)
}

/// Diagnostics for chart point `index`, or `None` when its stencil leaves the
/// chart. Independent per point, for concurrent evaluation.
pub fn point_diagnostics<F: Frame + ?Sized>(
    alg: &LieAlgebra,
    frame: &F,
    chart: &Chart,
    index: usize,
) -> Result<Option<PointDiagnostics>> {
    let x = &chart.points()[index];
    if !chart.stencil_inside(x) {
        return Ok(None);
    }
    let stencil = StencilField::evaluate(alg, frame, x, chart.step())?;
    Ok(Some(PointDiagnostics {
        point_id: index,
        x: x.clone(),
        norms: stencil.geometry().norms(),
    }))
}

/// Serial diagnostics over a whole chart.
pub fn diagnose<F: Frame + ?Sized>(
    alg: &LieAlgebra,
    frame: &F,
    chart: &Chart,
) -> Result<DiagnosticsReport> {
    let mut points = Vec::new();
    for index in 0..chart.points().len() {
        if let Some(p) = point_diagnostics(alg, frame, chart, index)? {
            points.push(p);
        }
    }
    Ok(DiagnosticsReport::from_points(chart.step(), points))
}
