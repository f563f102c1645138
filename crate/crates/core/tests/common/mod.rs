#![allow(clippy::needless_range_loop)]

#![allow(dead_code)]

use gtorsion_core::linalg::Matrix;

/// Rank by Gaussian elimination with full pivoting; pivots below
/// `rel_tol · max|m|` count as zero.
pub fn elimination_rank(m: &Matrix, rel_tol: f64) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<f64>> = (0..rows).map(|i| (0..cols).map(|j| m[(i, j)]).collect()).collect();
    let scale = m.max_abs();
    if scale == 0.0 {
        return 0;
    }
    let mut rank = 0;
    let mut used_cols = vec![false; cols];
    for r in 0..rows.min(cols) {
        let mut best = (0.0, 0, 0);
        for (i, row) in a.iter().enumerate().skip(r) {
            for (j, v) in row.iter().enumerate() {
                if !used_cols[j] && v.abs() > best.0 {
                    best = (v.abs(), i, j);
                }
            }
        }
        if best.0 <= rel_tol * scale {
            break;
        }
        let (_, pi, pj) = best;
        a.swap(r, pi);
        used_cols[pj] = true;
        let pivot = a[r][pj];
        for i in r + 1..rows {
            let f = a[i][pj] / pivot;
            if f != 0.0 {
                for j in 0..cols {
                    a[i][j] -= f * a[r][j];
                }
            }
        }
        rank += 1;
    }
    rank
}
