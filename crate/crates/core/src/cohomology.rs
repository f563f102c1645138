//! Chevalley–Eilenberg complex of a Lie algebra with adjoint coefficients,
//! up to degree 3.
//!
//! A degree-`k` cochain is stored by its components `ω^c_I` on increasing
//! index sets `I` (colex order), value index `c` outermost. Components on
//! other index tuples follow by alternation.
//!
//! Coboundary conventions:
//!
//! * degree 0: `(dA)(X) = [X, A]`
//! * degree 1: `(dA)(X,Y) = [AX, Y] + [X, AY] − A([X,Y])`
//! * degree 2: `(dω)(X,Y,Z) = Σ_cyc [X, ω(Y,Z)] − Σ_cyc ω([X,Y], Z)`
//!
//! With this sign choice the differentiated Jacobi expression
//! `Σ_cyc T(ω(X,Y), Z) + Σ_cyc ω(T(X,Y), Z)` equals `−dω`.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::lie::{DualBasisPair, LieAlgebra};
use crate::linalg::{self, Matrix};
use crate::tensor::Tensor3;

/// Highest cochain degree represented.
pub const MAX_DEGREE: usize = 3;
/// Relative singular-value cutoff for numerical rank.
pub const RANK_TOLERANCE: f64 = 1e-9;
/// Global sign of the explicit primitive, fixed by the so3 calibration test
/// (`homotopy_sign_calibration`): with it, `d(h(dA)) = dA`.
pub const HOMOTOPY_SIGN: f64 = 1.0;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Colex rank of an increasing index set.
fn subset_rank(indices: &[usize]) -> usize {
    indices
        .iter()
        .enumerate()
        .map(|(t, &c)| binomial(c, t + 1))
        .sum()
}

/// All increasing `k`-subsets of `0..n` in colex order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut current: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(current.clone());
        // advance in colex: bump the first index that can move
        let mut t = 0;
        while t < k {
            let limit = if t + 1 < k { current[t + 1] } else { n };
            if current[t] + 1 < limit {
                current[t] += 1;
                for (s, slot) in current.iter_mut().enumerate().take(t) {
                    *slot = s;
                }
                break;
            }
            t += 1;
        }
        if t == k {
            break;
        }
    }
    out
}

/// Sorts a small index tuple, returning the permutation sign, or `None` when
/// an index repeats.
fn canonicalize(indices: &[usize]) -> Option<(f64, [usize; MAX_DEGREE])> {
    let mut buf = [0usize; MAX_DEGREE];
    buf[..indices.len()].copy_from_slice(indices);
    let s = &mut buf[..indices.len()];
    let mut sign = 1.0;
    for i in 1..s.len() {
        let mut j = i;
        while j > 0 && s[j - 1] > s[j] {
            s.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if s.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, buf))
}

/// Alternating `k`-linear map on an `n`-dimensional algebra with values in
/// the algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain {
    dim: usize,
    degree: usize,
    data: Vec<f64>,
}

impl Cochain {
    pub fn zero(dim: usize, degree: usize) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange { degree });
        }
        Ok(Self {
            dim,
            degree,
            data: vec![0.0; dim * binomial(dim, degree)],
        })
    }

    /// From canonical components in storage order (value index outermost).
    pub fn from_components(dim: usize, degree: usize, data: Vec<f64>) -> Result<Self> {
        let mut c = Self::zero(dim, degree)?;
        if data.len() != c.data.len() {
            return Err(Error::LengthMismatch {
                expected: c.data.len(),
                found: data.len(),
            });
        }
        c.data = data;
        Ok(c)
    }

    /// Degree-0 cochain from an algebra element.
    pub fn from_element(x: &[f64]) -> Self {
        Self {
            dim: x.len(),
            degree: 0,
            data: x.to_vec(),
        }
    }

    /// Degree-1 cochain from a linear map given as a matrix `A^c_x = m[(c, x)]`.
    pub fn from_linear_map(m: &Matrix) -> Self {
        assert!(m.is_square());
        let n = m.rows();
        Self {
            dim: n,
            degree: 1,
            data: m.as_slice().to_vec(),
        }
    }

    /// Degree-2 cochain from a bilinear tensor `t[[c, a, b]]`, keeping the
    /// `a < b` components.
    pub fn from_bilinear(t: &Tensor3) -> Self {
        let n = t.dim();
        let mut out = Self::zero(n, 2).expect("degree 2 is in range");
        for c in 0..n {
            for b in 0..n {
                for a in 0..b {
                    out.set(c, &[a, b], t[[c, a, b]]);
                }
            }
        }
        out
    }

    pub fn random<R: Rng + ?Sized>(dim: usize, degree: usize, rng: &mut R) -> Result<Self> {
        let mut c = Self::zero(dim, degree)?;
        for v in c.data.iter_mut() {
            *v = rng.gen_range(-1.0..1.0);
        }
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &[f64] {
        &self.data
    }

    fn block(&self) -> usize {
        binomial(self.dim, self.degree)
    }

    /// `ω^c_{i1…ik}` for any index tuple.
    pub fn get(&self, c: usize, indices: &[usize]) -> f64 {
        debug_assert_eq!(indices.len(), self.degree);
        match canonicalize(indices) {
            Some((sign, buf)) => sign * self.data[c * self.block() + subset_rank(&buf[..self.degree])],
            None => 0.0,
        }
    }

    /// Sets the component on `indices` (and by alternation all permutations).
    pub fn set(&mut self, c: usize, indices: &[usize], value: f64) {
        let (sign, buf) = canonicalize(indices).expect("repeated index in alternating cochain");
        let slot = c * self.block() + subset_rank(&buf[..self.degree]);
        self.data[slot] = sign * value;
    }

    /// Degree-1 cochain as the matrix `A^c_x`.
    pub fn to_matrix(&self) -> Matrix {
        assert_eq!(self.degree, 1);
        Matrix::from_row_major(self.dim, self.dim, self.data.clone())
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree));
        Cochain {
            dim: self.dim,
            degree: self.degree,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Cochain {
        Cochain {
            dim: self.dim,
            degree: self.degree,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Max-abs over canonical components.
    pub fn norm(&self) -> f64 {
        linalg::max_abs(&self.data)
    }
}

fn check_dim(alg: &LieAlgebra, c: &Cochain) -> Result<()> {
    if c.dim != alg.dim() {
        return Err(Error::LengthMismatch {
            expected: alg.dim(),
            found: c.dim,
        });
    }
    Ok(())
}

/// Coboundary `d_ad` from degree `k ≤ 2` to `k + 1`.
pub fn coboundary(alg: &LieAlgebra, c: &Cochain) -> Result<Cochain> {
    check_dim(alg, c)?;
    let n = alg.dim();
    let k = c.degree;
    if k >= MAX_DEGREE {
        return Err(Error::DegreeOutOfRange { degree: k });
    }
    let cc = alg.constants();
    let mut out = Cochain::zero(n, k + 1)?;
    for idx in subsets(n, k + 1) {
        for v in 0..n {
            let value = match k {
                0 => {
                    let x = idx[0];
                    (0..n).map(|a| cc[[v, x, a]] * c.data[a]).sum()
                }
                1 => {
                    let (x, y) = (idx[0], idx[1]);
                    (0..n)
                        .map(|m| {
                            cc[[v, m, y]] * c.get(m, &[x]) + cc[[v, x, m]] * c.get(m, &[y])
                                - c.get(v, &[m]) * cc[[m, x, y]]
                        })
                        .sum()
                }
                _ => {
                    let (x, y, z) = (idx[0], idx[1], idx[2]);
                    let mut s = 0.0;
                    for (p, q, r) in [(x, y, z), (y, z, x), (z, x, y)] {
                        for m in 0..n {
                            s += cc[[v, p, m]] * c.get(m, &[q, r]);
                            s -= cc[[m, p, q]] * c.get(v, &[m, r]);
                        }
                    }
                    s
                }
            };
            out.set(v, &idx, value);
        }
    }
    Ok(out)
}

/// Matrix of `d_ad` on degree `k` in the canonical bases, of shape
/// `(n·C(n,k+1)) × (n·C(n,k))`.
pub fn coboundary_matrix(alg: &LieAlgebra, k: usize) -> Result<Matrix> {
    if k >= MAX_DEGREE {
        return Err(Error::DegreeOutOfRange { degree: k });
    }
    let n = alg.dim();
    let cols = n * binomial(n, k);
    let rows = n * binomial(n, k + 1);
    let mut m = Matrix::zeros(rows, cols);
    for j in 0..cols {
        let mut unit = vec![0.0; cols];
        unit[j] = 1.0;
        let image = coboundary(alg, &Cochain::from_components(n, k, unit)?)?;
        m.set_column(j, image.components());
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CohomologyDims {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
}

/// `h_k = dim ker d_k − rank d_{k−1}` for `k = 0, 1, 2`.
pub fn cohomology_dims(alg: &LieAlgebra) -> Result<CohomologyDims> {
    let n = alg.dim();
    let ranks = (0..3)
        .map(|k| Ok(linalg::numerical_rank(&coboundary_matrix(alg, k)?, RANK_TOLERANCE)))
        .collect::<Result<Vec<_>>>()?;
    let size = |k: usize| n * binomial(n, k);
    Ok(CohomologyDims {
        h0: size(0) - ranks[0],
        h1: size(1) - ranks[1] - ranks[0],
        h2: size(2) - ranks[2] - ranks[1],
    })
}

/// `A^c_x = Σ_{a,b,m} ginv^{ab} C^c_{am} ω^m_{xb}`: the dual-basis sum
/// `Σ_k [e_k, ω(X, e^k)]` written through `Σ_k e_k ⊗ e^k = ginv`. Returned
/// as the matrix `A^c_x`, without the global sign.
pub fn contract_primitive(
    bracket: &Tensor3,
    inv_metric: &Matrix,
    omega: impl Fn(usize, usize, usize) -> f64,
) -> Matrix {
    let n = bracket.dim();
    let mut out = Matrix::zeros(n, n);
    let mut lowered = vec![0.0; n * n];
    for x in 0..n {
        // lowered[m][a] = Σ_b ginv^{ab} ω^m_{xb}
        for m in 0..n {
            for a in 0..n {
                lowered[m * n + a] = (0..n).map(|b| inv_metric[(a, b)] * omega(m, x, b)).sum();
            }
        }
        for c in 0..n {
            let mut s = 0.0;
            for a in 0..n {
                for m in 0..n {
                    s += bracket[[c, a, m]] * lowered[m * n + a];
                }
            }
            out[(c, x)] = s;
        }
    }
    out
}

/// Explicit primitive of a degree-2 cocycle: `d(homotopy(ω)) = ω` for
/// `dω = 0` on a semisimple algebra.
pub fn homotopy(alg: &LieAlgebra, omega: &Cochain) -> Result<Cochain> {
    check_dim(alg, omega)?;
    if omega.degree != 2 {
        return Err(Error::DegreeOutOfRange { degree: omega.degree });
    }
    let ginv = alg.killing_metric().inverse()?;
    let a = contract_primitive(alg.constants(), &ginv, |m, x, b| omega.get(m, &[x, b]));
    Ok(Cochain::from_linear_map(&a.scale(HOMOTOPY_SIGN)))
}

/// Same primitive evaluated literally as `Σ_k [e_k, ω(X, e^k)]` over a given
/// dual pair.
pub fn homotopy_via_dual_basis(
    alg: &LieAlgebra,
    pair: &DualBasisPair,
    omega: &Cochain,
) -> Result<Cochain> {
    check_dim(alg, omega)?;
    if omega.degree != 2 {
        return Err(Error::DegreeOutOfRange { degree: omega.degree });
    }
    let n = alg.dim();
    let mut a = Matrix::zeros(n, n);
    for x in 0..n {
        let mut acc = vec![0.0; n];
        for k in 0..n {
            let ek = pair.primal.column(k);
            let eku = pair.dual.column(k);
            // ω(b_x, e^k)
            let w: Vec<f64> = (0..n)
                .map(|m| (0..n).map(|b| omega.get(m, &[x, b]) * eku[b]).sum())
                .collect();
            for (o, v) in acc.iter_mut().zip(alg.bracket_unchecked(&ek, &w)) {
                *o += v;
            }
        }
        for c in 0..n {
            a[(c, x)] = HOMOTOPY_SIGN * acc[c];
        }
    }
    Ok(Cochain::from_linear_map(&a))
}

/// Gram matrix of the cochain pairing on degree `k`: `G` on the value slot
/// and the induced `Λ^k(G⁻¹)` on the form slots.
pub fn cochain_gram(metric: &Matrix, inv_metric: &Matrix, k: usize) -> Matrix {
    let n = metric.rows();
    let sets = subsets(n, k);
    let s = sets.len();
    let mut lambda = Matrix::zeros(s, s);
    for (p, i) in sets.iter().enumerate() {
        for (q, j) in sets.iter().enumerate() {
            let minor = Matrix::from_fn(k, k, |r, c| inv_metric[(i[r], j[c])]);
            lambda[(p, q)] = if k == 0 { 1.0 } else { linalg::determinant(&minor) };
        }
    }
    Matrix::from_fn(n * s, n * s, |r, c| {
        metric[(r / s, c / s)] * lambda[(r % s, c % s)]
    })
}

/// Cochain pairing `⟨α, β⟩` (possibly indefinite).
pub fn pairing(alg: &LieAlgebra, alpha: &Cochain, beta: &Cochain) -> Result<f64> {
    check_dim(alg, alpha)?;
    check_dim(alg, beta)?;
    if alpha.degree != beta.degree {
        return Err(Error::DegreeOutOfRange { degree: beta.degree });
    }
    let km = alg.killing_metric();
    let m = cochain_gram(km.gram(), &km.inverse()?, alpha.degree);
    let mb = m.mul_vec(beta.components());
    Ok(alpha.components().iter().zip(&mb).map(|(a, b)| a * b).sum())
}

/// Formal adjoint of the coboundary, degree `k` to `k − 1`:
/// `d* = M_{k−1}⁻¹ Dᵀ M_k`.
pub fn codifferential(alg: &LieAlgebra, c: &Cochain) -> Result<Cochain> {
    check_dim(alg, c)?;
    let k = c.degree;
    if k == 0 || k > MAX_DEGREE {
        return Err(Error::DegreeOutOfRange { degree: k });
    }
    let km = alg.killing_metric();
    let ginv = km.inverse()?;
    let upper = cochain_gram(km.gram(), &ginv, k);
    let lower_inv = cochain_gram(&ginv, km.gram(), k - 1);
    // Λ(G⁻¹)⁻¹ = Λ(G), so the inverse Gram matrix swaps the roles of G and G⁻¹.
    let d = coboundary_matrix(alg, k - 1)?;
    let v = lower_inv.mul_vec(&d.transpose().mul_vec(&upper.mul_vec(c.components())));
    Cochain::from_components(alg.dim(), k - 1, v)
}

/// Differentiated Jacobi expression of a degree-2 cochain:
/// `Σ_cyc T(ω(X,Y), Z) + Σ_cyc ω(T(X,Y), Z)`, a degree-3 cochain.
pub fn differentiated_jacobi(alg: &LieAlgebra, omega: &Cochain) -> Result<Cochain> {
    check_dim(alg, omega)?;
    if omega.degree != 2 {
        return Err(Error::DegreeOutOfRange { degree: omega.degree });
    }
    let n = alg.dim();
    let cc = alg.constants();
    let mut out = Cochain::zero(n, 3)?;
    for idx in subsets(n, 3) {
        let (x, y, z) = (idx[0], idx[1], idx[2]);
        for v in 0..n {
            let mut s = 0.0;
            for (p, q, r) in [(x, y, z), (y, z, x), (z, x, y)] {
                for m in 0..n {
                    s += cc[[v, m, r]] * omega.get(m, &[p, q]);
                    s += cc[[m, p, q]] * omega.get(v, &[m, r]);
                }
            }
            out.set(v, &idx, s);
        }
    }
    Ok(out)
}
