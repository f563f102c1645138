//! Moving frames `u(x): 𝔤 → T_xM` on a coordinate chart, and the sampled
//! charts they are evaluated on.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohomology::{self, RANK_TOLERANCE};
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{self, Matrix};

/// Frames with condition number above this are rejected.
pub const MAX_FRAME_CONDITION: f64 = 1e6;
/// Exponential-chart points must satisfy `Σ_i |x_i| ‖ad_{b_i}‖ < π`, which
/// keeps every eigenvalue of `ad_x` away from the poles of `φ⁻¹` at `2πi·k`.
pub const EXP_CHART_LIMIT: f64 = core::f64::consts::PI;
/// Minimum distance of a random generator from the derivation algebra.
pub const DERIVATION_MARGIN: f64 = 1e-6;

const SERIES_TOLERANCE: f64 = 1e-14;
const SERIES_CAP: usize = 30;

/// Random streams derived from the single global seed.
pub mod stream {
    pub const SAMPLE_POINTS: u64 = 1;
    pub const FRAME_GENERATORS: u64 = 2;
    pub const COCYCLES: u64 = 3;
}

/// ChaCha8 generator for `seed` on one of the [`stream`] channels.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A moving frame. Column `i` of `evaluate(x)` is `u(x)(b_i)` in chart
/// coordinates.
pub trait Frame {
    fn dim(&self) -> usize;
    fn evaluate(&self, x: &[f64]) -> Result<Matrix>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrameKind {
    /// `u(x) = I`.
    Identity,
    /// Left-invariant frame of exponential coordinates, `u(x) = φ(ad_x)⁻¹`
    /// with `φ(z) = (1 − e^{−z})/z`.
    ExpChart,
    /// `u(x) = exp(Σ_i x_i S_i)` with seeded random generators `S_i` whose
    /// entries are uniform in `[-scale, scale]`.
    RandomSmooth { seed: u64, scale: f64 },
    /// `u(x) = λ·I`.
    Scaled(f64),
}

impl FrameKind {
    pub fn label(&self) -> &'static str {
        match self {
            FrameKind::Identity => "identity",
            FrameKind::ExpChart => "exp_chart",
            FrameKind::RandomSmooth { .. } => "random_smooth",
            FrameKind::Scaled(_) => "scaled",
        }
    }
}

#[derive(Debug, Clone)]
pub struct FrameField {
    kind: FrameKind,
    dim: usize,
    ad_basis: Vec<Matrix>,
    ad_norms: Vec<f64>,
    generators: Vec<Matrix>,
}

impl FrameField {
    pub fn new(alg: &LieAlgebra, kind: FrameKind) -> Result<Self> {
        let n = alg.dim();
        let ad_basis: Vec<Matrix> = (0..n).map(|i| alg.ad_basis(i)).collect();
        let ad_norms = ad_basis.iter().map(linalg::spectral_norm).collect();
        let mut generators = Vec::new();
        match kind {
            FrameKind::ExpChart => {
                let ratio = alg.killing_metric().eigenvalue_ratio();
                if ratio <= crate::lie::SEMISIMPLE_RATIO {
                    return Err(Error::DegenerateKilling { ratio });
                }
            }
            FrameKind::RandomSmooth { seed, scale } => {
                generators = random_generators(alg, seed, scale)?;
            }
            FrameKind::Scaled(s) => {
                if s == 0.0 || !s.is_finite() {
                    return Err(Error::SingularFrame {
                        condition: f64::INFINITY,
                    });
                }
            }
            FrameKind::Identity => {}
        }
        Ok(Self {
            kind,
            dim: n,
            ad_basis,
            ad_norms,
            generators,
        })
    }

    pub fn kind(&self) -> FrameKind {
        self.kind
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    /// Default chart radius `0.4/ρ`, `ρ` the largest spectral norm of
    /// `ad_{b_i}` (0.4 for abelian algebras).
    pub fn default_radius(alg: &LieAlgebra) -> f64 {
        let rho = (0..alg.dim())
            .map(|i| linalg::spectral_norm(&alg.ad_basis(i)))
            .fold(0.0, f64::max);
        if rho > 0.0 {
            0.4 / rho
        } else {
            0.4
        }
    }

    fn exp_chart(&self, x: &[f64]) -> Result<Matrix> {
        let n = self.dim;
        let bound: f64 = x.iter().zip(&self.ad_norms).map(|(xi, r)| xi.abs() * r).sum();
        if bound >= EXP_CHART_LIMIT {
            return Err(Error::ChartRadiusExceeded {
                bound,
                limit: EXP_CHART_LIMIT,
            });
        }
        let mut minus_ad = Matrix::zeros(n, n);
        for (xi, ad) in x.iter().zip(&self.ad_basis) {
            minus_ad = minus_ad.sub(&ad.scale(*xi));
        }
        // φ(ad_x) = Σ_{m≥0} (−ad_x)^m / (m+1)!
        let mut term = Matrix::identity(n);
        let mut phi = term.clone();
        for m in 1..SERIES_CAP {
            term = term.mul(&minus_ad).scale(1.0 / (m + 1) as f64);
            phi = phi.add(&term);
            if term.max_abs() < SERIES_TOLERANCE {
                break;
            }
        }
        phi.inverse().ok_or(Error::SingularFrame {
            condition: f64::INFINITY,
        })
    }
}

impl Frame for FrameField {
    fn dim(&self) -> usize {
        self.dim
    }

    fn evaluate(&self, x: &[f64]) -> Result<Matrix> {
        if x.len() != self.dim {
            return Err(Error::LengthMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        let n = self.dim;
        let u = match self.kind {
            FrameKind::Identity => return Ok(Matrix::identity(n)),
            FrameKind::Scaled(s) => return Ok(Matrix::identity(n).scale(s)),
            FrameKind::ExpChart => self.exp_chart(x)?,
            FrameKind::RandomSmooth { .. } => {
                let mut gen = Matrix::zeros(n, n);
                for (xi, s) in x.iter().zip(&self.generators) {
                    gen = gen.add(&s.scale(*xi));
                }
                linalg::expm(&gen)
            }
        };
        let condition = linalg::condition_number(&u);
        if condition.is_nan() || condition >= MAX_FRAME_CONDITION {
            return Err(Error::SingularFrame { condition });
        }
        Ok(u)
    }
}

/// Distance of a linear map (as a matrix) from the derivation algebra, i.e.
/// from the kernel of the degree-1 coboundary.
pub fn distance_from_derivations(alg: &LieAlgebra, m: &Matrix) -> Result<f64> {
    let d1 = cohomology::coboundary_matrix(alg, 1)?;
    let svd = linalg::svd(&d1);
    let top = svd.singular_values.first().copied().unwrap_or(0.0);
    let s = m.as_slice();
    let mut dist2 = 0.0;
    for (k, sv) in svd.singular_values.iter().enumerate() {
        if top > 0.0 && *sv > RANK_TOLERANCE * top {
            let dot: f64 = (0..s.len()).map(|r| svd.v[(r, k)] * s[r]).sum();
            dist2 += dot * dot;
        }
    }
    Ok(libm::sqrt(dist2))
}

fn random_generators(alg: &LieAlgebra, seed: u64, scale: f64) -> Result<Vec<Matrix>> {
    let n = alg.dim();
    let mut rng = seeded_rng(seed, stream::FRAME_GENERATORS);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let s = Matrix::from_fn(n, n, |_, _| scale * rng.gen_range(-1.0..1.0));
        if distance_from_derivations(alg, &s)? >= DERIVATION_MARGIN {
            out.push(s);
        }
    }
    Ok(out)
}

/// Sample points of a coordinate chart with a finite-difference step.
///
/// Each sample carries the stencil `{0, ±h e_i, ±h e_i ± h e_j}`, so a point
/// is usable only when `‖x‖∞ + 2h ≤ r`.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    dim: usize,
    points: Vec<Vec<f64>>,
    step: f64,
    radius: f64,
}

impl Chart {
    pub fn new(dim: usize, points: Vec<Vec<f64>>, step: f64, radius: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::NonPositiveDimension);
        }
        if !step.is_finite() || step <= 0.0 {
            return Err(Error::InvalidChart("step must be positive"));
        }
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::InvalidChart("radius must be positive"));
        }
        if step * dim as f64 >= radius {
            return Err(Error::InvalidChart("step times dimension must be below the radius"));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::LengthMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        Ok(Self {
            dim,
            points,
            step,
            radius,
        })
    }

    /// `count` points uniform in the ∞-ball of radius `radius − 2·step`.
    pub fn sampled(dim: usize, step: f64, radius: f64, count: usize, seed: u64) -> Result<Self> {
        let inner = radius - 2.0 * step;
        if inner.is_nan() || inner <= 0.0 {
            return Err(Error::InvalidChart("radius must exceed twice the step"));
        }
        let mut rng = seeded_rng(seed, stream::SAMPLE_POINTS);
        let points = (0..count)
            .map(|_| (0..dim).map(|_| rng.gen_range(-inner..=inner)).collect())
            .collect();
        Self::new(dim, points, step, radius)
    }

    /// Same points and radius with a different step.
    pub fn with_step(&self, step: f64) -> Result<Self> {
        Self::new(self.dim, self.points.clone(), step, self.radius)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Whether the whole stencil of `x` stays inside the chart.
    pub fn stencil_inside(&self, x: &[f64]) -> bool {
        let inf = x.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
        inf + 2.0 * self.step <= self.radius * (1.0 + 1e-12)
    }
}
