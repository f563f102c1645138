use gtorsion_core::geometry::point_diagnostics;
use gtorsion_core::{Chart, DiagnosticsReport, Frame, LieAlgebra};
use rayon::prelude::*;

/// Point-parallel version of `geometry::diagnose`. Results are gathered in
/// point order and the first failing point by index is reported, so the
/// output does not depend on scheduling.
pub fn diagnose_parallel<F: Frame + Sync + ?Sized>(
    alg: &LieAlgebra,
    frame: &F,
    chart: &Chart,
) -> gtorsion_core::Result<DiagnosticsReport> {
    let results: Vec<_> = (0..chart.points().len())
        .into_par_iter()
        .map(|i| point_diagnostics(alg, frame, chart, i))
        .collect();
    let mut points = Vec::with_capacity(results.len());
    for r in results {
        if let Some(p) = r? {
            points.push(p);
        }
    }
    Ok(DiagnosticsReport::from_points(chart.step(), points))
}
