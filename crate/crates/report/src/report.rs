//! The four commands as library functions returning serializable reports.

use gtorsion_core::cohomology::{coboundary, codifferential, cohomology_dims, homotopy, Cochain};
use gtorsion_core::frame::{seeded_rng, stream};
use gtorsion_core::geometry::diagnose;
use gtorsion_core::{Chart, DiagnosticsReport, FrameField, LieAlgebra, NormSet};
use serde::Serialize;

use crate::config::RunConfig;
use crate::csv::diagnostics_csv;
use crate::error::{RunError, RunResult};
use crate::parallel::diagnose_parallel;

/// Number of random cocycles in the homotopy check.
pub const COCYCLE_BATCH: usize = 100;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct VerifyReport {
    pub algebra: String,
    pub dim: usize,
    pub jacobi_residual: f64,
    pub ad_invariance_error: f64,
    pub killing_signature: [usize; 2],
    pub killing_eigenvalue_ratio: f64,
    pub semisimple: bool,
    pub compact_type: bool,
    /// Absent for non-semisimple algebras.
    pub dual_basis_pairing_error: Option<f64>,
    pub dual_basis_completeness_error: Option<f64>,
}

/// `require_dual_basis` turns a degenerate Killing form into an error.
pub fn run_verify(alg: &LieAlgebra, require_dual_basis: bool) -> RunResult<VerifyReport> {
    let n = alg.dim();
    let km = alg.killing_metric();
    let class = km.classification();
    let b = alg.killing_form();
    let mut ad_invariance_error: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let s: f64 = (0..n)
                    .map(|m| alg.structure_constant(m, i, j) * b[(m, k)] + alg.structure_constant(m, i, k) * b[(j, m)])
                    .sum();
                ad_invariance_error = ad_invariance_error.max(s.abs());
            }
        }
    }
    let (pairing, completeness) = match km.dual_basis() {
        Ok(pair) => {
            let ginv = km.inverse()?;
            (
                Some(pair.pairing_error(km.gram())),
                Some(pair.completeness_tensor().sub(&ginv).max_abs()),
            )
        }
        Err(e) if require_dual_basis => return Err(e.into()),
        Err(_) => (None, None),
    };
    Ok(VerifyReport {
        algebra: alg.name().to_string(),
        dim: n,
        jacobi_residual: alg.jacobi_residual(),
        ad_invariance_error,
        killing_signature: [class.signature.0, class.signature.1],
        killing_eigenvalue_ratio: km.eigenvalue_ratio(),
        semisimple: class.semisimple,
        compact_type: class.compact_type,
        dual_basis_pairing_error: pairing,
        dual_basis_completeness_error: completeness,
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct HomotopyCheck {
    pub cocycles: usize,
    /// `max ‖d(h(ω)) − ω‖ / ‖ω‖`.
    pub homotopy_max_relative_error: f64,
    /// `max ‖d*(h(ω))‖ / ‖ω‖`.
    pub coclosedness_max_error: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CohomologyReport {
    pub algebra: String,
    pub seed: u64,
    pub semisimple: bool,
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    pub homotopy: Option<HomotopyCheck>,
}

/// Cohomology dimensions plus, for semisimple algebras, the homotopy check on
/// seeded random coboundaries. `require_homotopy` makes a non-semisimple
/// algebra an error instead of omitting the section.
pub fn run_cohomology(alg: &LieAlgebra, seed: u64, require_homotopy: bool) -> RunResult<CohomologyReport> {
    let dims = cohomology_dims(alg)?;
    let semisimple = alg.classify().semisimple;
    let homotopy_check = if semisimple {
        Some(homotopy_check(alg, seed)?)
    } else if require_homotopy {
        return Err(RunError::Precondition(format!(
            "homotopy requires a semisimple algebra; {} has a degenerate Killing form",
            alg.name()
        )));
    } else {
        None
    };
    Ok(CohomologyReport {
        algebra: alg.name().to_string(),
        seed,
        semisimple,
        h0: dims.h0,
        h1: dims.h1,
        h2: dims.h2,
        homotopy: homotopy_check,
    })
}

fn homotopy_check(alg: &LieAlgebra, seed: u64) -> RunResult<HomotopyCheck> {
    let mut rng = seeded_rng(seed, stream::COCYCLES);
    let mut err: f64 = 0.0;
    let mut co: f64 = 0.0;
    for _ in 0..COCYCLE_BATCH {
        let a = Cochain::random(alg.dim(), 1, &mut rng)?;
        let omega = coboundary(alg, &a)?;
        let norm = omega.norm();
        if norm == 0.0 {
            continue;
        }
        let prim = homotopy(alg, &omega)?;
        err = err.max(coboundary(alg, &prim)?.sub(&omega).norm() / norm);
        co = co.max(codifferential(alg, &prim)?.norm() / norm);
    }
    Ok(HomotopyCheck {
        cocycles: COCYCLE_BATCH,
        homotopy_max_relative_error: err,
        coclosedness_max_error: co,
    })
}

/// Norm maxima keyed by their CSV column names.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct NormSummary {
    pub norm_tau: f64,
    #[serde(rename = "norm_A")]
    pub norm_a: f64,
    #[serde(rename = "norm_DT")]
    pub norm_dt: f64,
    #[serde(rename = "norm_dDT")]
    pub norm_ddt: f64,
    #[serde(rename = "norm_nablaT_residual")]
    pub norm_nabla_t_residual: f64,
    pub norm_metric_skew: f64,
    pub norm_riemann: f64,
}

impl From<&NormSet> for NormSummary {
    fn from(n: &NormSet) -> Self {
        Self {
            norm_tau: n.tau,
            norm_a: n.gauge,
            norm_dt: n.dt,
            norm_ddt: n.ddt,
            norm_nabla_t_residual: n.nabla_residual,
            norm_metric_skew: n.metric_skew,
            norm_riemann: n.riemann,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FieldSummary {
    pub algebra: String,
    pub frame: String,
    pub seed: u64,
    pub h: f64,
    pub radius: f64,
    pub samples: usize,
    pub reported_points: usize,
    pub max: NormSummary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldRun {
    pub summary: FieldSummary,
    pub report: DiagnosticsReport,
    pub csv: String,
}

struct Prepared {
    alg: LieAlgebra,
    frame: FrameField,
    radius: f64,
}

fn prepare(config: &RunConfig) -> RunResult<Prepared> {
    config.validate()?;
    let alg = config.algebra.load()?;
    if !alg.classify().semisimple {
        return Err(RunError::Precondition(format!(
            "field diagnostics need a semisimple algebra; {} has a degenerate Killing form",
            alg.name()
        )));
    }
    let frame = FrameField::new(&alg, config.frame.kind(config.seed))?;
    let radius = config.radius.unwrap_or_else(|| FrameField::default_radius(&alg));
    Ok(Prepared { alg, frame, radius })
}

fn evaluate(p: &Prepared, chart: &Chart, parallel: bool) -> RunResult<DiagnosticsReport> {
    Ok(if parallel {
        diagnose_parallel(&p.alg, &p.frame, chart)?
    } else {
        diagnose(&p.alg, &p.frame, chart)?
    })
}

pub fn run_field(config: &RunConfig) -> RunResult<FieldRun> {
    let p = prepare(config)?;
    let chart = Chart::sampled(p.alg.dim(), config.step, p.radius, config.samples, config.seed)?;
    let report = evaluate(&p, &chart, config.parallel)?;
    let summary = FieldSummary {
        algebra: p.alg.name().to_string(),
        frame: p.frame.kind().label().to_string(),
        seed: config.seed,
        h: config.step,
        radius: p.radius,
        samples: config.samples,
        reported_points: report.points.len(),
        max: NormSummary::from(&report.max),
    };
    let csv = diagnostics_csv(p.alg.dim(), &report);
    Ok(FieldRun { summary, report, csv })
}

/// Observed order between consecutive levels: a number, or `"exact"` when the
/// finer norm is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order {
    Value(f64),
    Exact,
}

impl Order {
    pub fn between(coarse: f64, fine: f64) -> Self {
        if fine == 0.0 {
            Order::Exact
        } else {
            Order::Value((coarse / fine).log2())
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Order::Value(v) => Some(v),
            Order::Exact => None,
        }
    }
}

impl Serialize for Order {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Order::Value(v) => s.serialize_f64(*v),
            Order::Exact => s.serialize_str("exact"),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConvergenceLevel {
    pub h: f64,
    pub reported_points: usize,
    pub norms: NormSummary,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct OrderRow {
    pub norm_tau: Order,
    #[serde(rename = "norm_A")]
    pub norm_a: Order,
    #[serde(rename = "norm_DT")]
    pub norm_dt: Order,
    #[serde(rename = "norm_dDT")]
    pub norm_ddt: Order,
    #[serde(rename = "norm_nablaT_residual")]
    pub norm_nabla_t_residual: Order,
    pub norm_metric_skew: Order,
    pub norm_riemann: Order,
}

impl OrderRow {
    fn between(coarse: &NormSet, fine: &NormSet) -> Self {
        let o = |a: f64, b: f64| Order::between(a, b);
        Self {
            norm_tau: o(coarse.tau, fine.tau),
            norm_a: o(coarse.gauge, fine.gauge),
            norm_dt: o(coarse.dt, fine.dt),
            norm_ddt: o(coarse.ddt, fine.ddt),
            norm_nabla_t_residual: o(coarse.nabla_residual, fine.nabla_residual),
            norm_metric_skew: o(coarse.metric_skew, fine.metric_skew),
            norm_riemann: o(coarse.riemann, fine.riemann),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConvergenceTable {
    pub algebra: String,
    pub frame: String,
    pub seed: u64,
    pub radius: f64,
    pub samples: usize,
    pub levels: Vec<ConvergenceLevel>,
    /// `orders[l]` compares level `l` with level `l + 1`.
    pub orders: Vec<OrderRow>,
    #[serde(skip)]
    pub maxima: Vec<NormSet>,
}

/// Steps `h, h/2, …` on one fixed set of points drawn for the coarsest step.
pub fn run_convergence(config: &RunConfig) -> RunResult<ConvergenceTable> {
    let p = prepare(config)?;
    let base = Chart::sampled(p.alg.dim(), config.step, p.radius, config.samples, config.seed)?;
    let mut levels = Vec::with_capacity(config.levels);
    let mut maxima = Vec::with_capacity(config.levels);
    for l in 0..config.levels {
        let h = config.step / f64::from(1u32 << l);
        let report = evaluate(&p, &base.with_step(h)?, config.parallel)?;
        levels.push(ConvergenceLevel {
            h,
            reported_points: report.points.len(),
            norms: NormSummary::from(&report.max),
        });
        maxima.push(report.max);
    }
    let orders = maxima.windows(2).map(|w| OrderRow::between(&w[0], &w[1])).collect();
    Ok(ConvergenceTable {
        algebra: p.alg.name().to_string(),
        frame: p.frame.kind().label().to_string(),
        seed: config.seed,
        radius: p.radius,
        samples: config.samples,
        levels,
        orders,
        maxima,
    })
}
