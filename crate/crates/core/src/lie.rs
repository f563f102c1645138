//! Finite-dimensional real Lie algebras given by structure constants.
//!
//! Index convention: `[b_i, b_j] = Σ_k C^k_{ij} b_k`, stored as
//! `constants[[k, i, j]]` with the output slot first. Every component formula
//! in the crate uses this layout.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, SymmetricEigen};
use crate::tensor::Tensor3;

/// Absolute Jacobi tolerance for unit-scale algebras.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
/// Smallest accepted ratio of min to max |eigenvalue| of the Killing metric.
pub const SEMISIMPLE_RATIO: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    name: String,
    constants: Tensor3,
}

impl LieAlgebra {
    /// Wraps a dense constant array. Antisymmetry in the lower pair must hold
    /// exactly; the Jacobi identity is not checked here (see
    /// [`LieAlgebra::jacobi_residual`]).
    pub fn from_constants(name: impl Into<String>, constants: Tensor3) -> Result<Self> {
        let n = constants.dim();
        if n == 0 {
            return Err(Error::NonPositiveDimension);
        }
        for k in 0..n {
            for i in 0..n {
                for j in i..n {
                    if constants[[k, i, j]] != -constants[[k, j, i]] {
                        return Err(Error::NotAntisymmetric { i, j, k });
                    }
                }
            }
        }
        Ok(Self {
            name: name.into(),
            constants,
        })
    }

    /// Builds an algebra from upper-triangle entries `(i, j, k, v)` meaning
    /// `C^k_{ij} = v`. Entries with `i > j` are read as `C^k_{ij}` too and
    /// must agree with anything already set through antisymmetry.
    pub fn from_entries(
        name: impl Into<String>,
        dim: usize,
        entries: &[(usize, usize, usize, f64)],
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::NonPositiveDimension);
        }
        let mut c = Tensor3::zeros(dim);
        let mut set = vec![false; dim * dim * dim];
        for &(i, j, k, v) in entries {
            for index in [i, j, k] {
                if index >= dim {
                    return Err(Error::IndexOutOfRange { index, dim });
                }
            }
            if !v.is_finite() {
                return Err(Error::InvalidSpec(format!("non-finite constant at ({i}, {j}, {k})")));
            }
            if i == j {
                if v != 0.0 {
                    return Err(Error::ConflictingConstant { i, j, k });
                }
                continue;
            }
            let (lo, hi, val) = if i < j { (i, j, v) } else { (j, i, -v) };
            let slot = (k * dim + lo) * dim + hi;
            if set[slot] && c[[k, lo, hi]] != val {
                return Err(Error::ConflictingConstant { i, j, k });
            }
            set[slot] = true;
            c[[k, lo, hi]] = val;
            c[[k, hi, lo]] = -val;
        }
        Self::from_constants(name, c)
    }

    /// Named algebras: `so3`, `su2`, `sl2r`, `heisenberg3`, `so4`,
    /// `abelian<n>` / `abelian(<n>)`.
    pub fn named(label: &str) -> Result<Self> {
        let label = label.trim();
        match label {
            "so3" => Ok(Self::so3()),
            "su2" => Ok(Self::su2()),
            "sl2r" => Ok(Self::sl2r()),
            "heisenberg3" => Ok(Self::heisenberg3()),
            "so4" => Ok(Self::so4()),
            _ => {
                let digits = label
                    .strip_prefix("abelian")
                    .map(|rest| rest.trim_start_matches('(').trim_end_matches(')'));
                match digits.and_then(|d| d.parse::<usize>().ok()) {
                    Some(n) => Self::abelian(n),
                    None => Err(Error::UnknownAlgebra(label.to_string())),
                }
            }
        }
    }

    /// ε-symbol basis: `[b0,b1]=b2`, `[b1,b2]=b0`, `[b2,b0]=b1`.
    pub fn so3() -> Self {
        Self::epsilon("so3")
    }

    /// Isomorphic copy of `so3` in the same ε basis (the real form shared by
    /// `su(2)` and `so(3)`).
    pub fn su2() -> Self {
        Self::epsilon("su2")
    }

    fn epsilon(name: &str) -> Self {
        Self::from_entries(name, 3, &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (0, 2, 1, -1.0)])
            .expect("epsilon constants are valid")
    }

    /// Basis `(H, E, F)` with `[H,E]=2E`, `[H,F]=-2F`, `[E,F]=H`.
    pub fn sl2r() -> Self {
        Self::from_entries("sl2r", 3, &[(0, 1, 1, 2.0), (0, 2, 2, -2.0), (1, 2, 0, 1.0)])
            .expect("sl2r constants are valid")
    }

    /// `[X,Y]=Z`, all other brackets zero.
    pub fn heisenberg3() -> Self {
        Self::from_entries("heisenberg3", 3, &[(0, 1, 2, 1.0)]).expect("heisenberg constants are valid")
    }

    pub fn abelian(n: usize) -> Result<Self> {
        Self::from_entries(format!("abelian{n}"), n, &[])
    }

    /// `so3 ⊕ so3`.
    pub fn so4() -> Self {
        Self::direct_sum("so4", &[Self::so3(), Self::so3()])
    }

    pub fn direct_sum(name: impl Into<String>, parts: &[LieAlgebra]) -> Self {
        let n: usize = parts.iter().map(LieAlgebra::dim).sum();
        let mut c = Tensor3::zeros(n);
        let mut offset = 0;
        for part in parts {
            let m = part.dim();
            for k in 0..m {
                for i in 0..m {
                    for j in 0..m {
                        c[[offset + k, offset + i, offset + j]] = part.constants[[k, i, j]];
                    }
                }
            }
            offset += m;
        }
        Self {
            name: name.into(),
            constants: c,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.constants.dim()
    }

    pub fn constants(&self) -> &Tensor3 {
        &self.constants
    }

    /// `C^k_{ij}`.
    pub fn structure_constant(&self, k: usize, i: usize, j: usize) -> f64 {
        self.constants[[k, i, j]]
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        for v in [x, y] {
            if v.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
        }
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n];
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0.0 {
                    continue;
                }
                let xy = x[i] * y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    *o += self.constants[[k, i, j]] * xy;
                }
            }
        }
        out
    }

    /// Matrix of `ad_x`: `(ad_x)^a_b = Σ_i x^i C^a_{ib}`.
    pub fn ad(&self, x: &[f64]) -> Matrix {
        let n = self.dim();
        Matrix::from_fn(n, n, |a, b| (0..n).map(|i| x[i] * self.constants[[a, i, b]]).sum())
    }

    /// `ad` of a basis element.
    pub fn ad_basis(&self, i: usize) -> Matrix {
        let n = self.dim();
        Matrix::from_fn(n, n, |a, b| self.constants[[a, i, b]])
    }

    /// Max over basis triples and output index of the Jacobiator
    /// `[[b_i,b_j],b_k] + [[b_j,b_k],b_i] + [[b_k,b_i],b_j]`.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim();
        let c = &self.constants;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = 0.0;
                        for m in 0..n {
                            s += c[[m, i, j]] * c[[l, m, k]]
                                + c[[m, j, k]] * c[[l, m, i]]
                                + c[[m, k, i]] * c[[l, m, j]];
                        }
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// Killing form `B_{ij} = tr(ad_i ad_j) = Σ_{a,b} C^a_{ib} C^b_{ja}`,
    /// symmetrized from its upper triangle.
    pub fn killing_form(&self) -> Matrix {
        let n = self.dim();
        let c = &self.constants;
        let mut b = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for a in 0..n {
                    for bb in 0..n {
                        s += c[[a, i, bb]] * c[[bb, j, a]];
                    }
                }
                b[(i, j)] = s;
                b[(j, i)] = s;
            }
        }
        b
    }

    pub fn killing_metric(&self) -> KillingMetric {
        KillingMetric::from_gram(self.killing_form().scale(-1.0))
    }

    pub fn classify(&self) -> Classification {
        self.killing_metric().classification()
    }

    pub fn dual_basis(&self) -> Result<DualBasisPair> {
        self.killing_metric().dual_basis()
    }
}

/// The metric `⟨X,Y⟩ = -B(X,Y)` together with its eigendecomposition.
#[derive(Debug, Clone)]
pub struct KillingMetric {
    gram: Matrix,
    eigen: SymmetricEigen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub semisimple: bool,
    pub compact_type: bool,
    /// Counts of positive and negative eigenvalues of the metric.
    pub signature: (usize, usize),
}

impl KillingMetric {
    /// Wraps any symmetric Gram matrix (also used for pointwise metrics of a
    /// bracket field).
    pub fn from_gram(gram: Matrix) -> Self {
        let gram = gram.symmetrized_upper();
        let eigen = linalg::symmetric_eigen(&gram);
        Self { gram, eigen }
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn eigen(&self) -> &SymmetricEigen {
        &self.eigen
    }

    fn largest_magnitude(&self) -> f64 {
        self.eigen.values.iter().fold(0.0, |m: f64, v| m.max(v.abs()))
    }

    /// Smallest over largest |eigenvalue|; zero for the zero matrix.
    pub fn eigenvalue_ratio(&self) -> f64 {
        let top = self.largest_magnitude();
        if top == 0.0 {
            return 0.0;
        }
        let bottom = self.eigen.values.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        bottom / top
    }

    pub fn condition_number(&self) -> f64 {
        let ratio = self.eigenvalue_ratio();
        if ratio == 0.0 {
            f64::INFINITY
        } else {
            1.0 / ratio
        }
    }

    pub fn classification(&self) -> Classification {
        let top = self.largest_magnitude();
        let semisimple = self.eigenvalue_ratio() > SEMISIMPLE_RATIO;
        let cut = SEMISIMPLE_RATIO * top;
        let p = self.eigen.values.iter().filter(|&&v| v > cut).count();
        let q = self.eigen.values.iter().filter(|&&v| v < -cut).count();
        Classification {
            semisimple,
            compact_type: semisimple && q == 0,
            signature: (p, q),
        }
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let ratio = self.eigenvalue_ratio();
        if ratio <= SEMISIMPLE_RATIO {
            return Err(Error::DegenerateKilling { ratio });
        }
        let e = &self.eigen;
        let n = self.gram.rows();
        let inv = Matrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| e.vectors[(i, k)] * e.vectors[(j, k)] / e.values[k]).sum()
        });
        Ok(inv.symmetrized_upper())
    }

    /// Dual pair from the eigenvalue-sign split: `e_k = q_k/√|λ_k|`,
    /// `e^k = sign(λ_k) e_k`.
    pub fn dual_basis(&self) -> Result<DualBasisPair> {
        let ratio = self.eigenvalue_ratio();
        if ratio <= SEMISIMPLE_RATIO {
            return Err(Error::DegenerateKilling { ratio });
        }
        Ok(DualBasisPair::from_eigen(&self.eigen.values, &self.eigen.vectors))
    }
}

/// Bases `{e_k}` and `{e^k}` with `⟨e_k, e^j⟩ = δ_k^j`, stored as matrix
/// columns in the structure-constant basis.
#[derive(Debug, Clone)]
pub struct DualBasisPair {
    pub primal: Matrix,
    pub dual: Matrix,
}

impl DualBasisPair {
    /// From eigenvalues and orthonormal eigenvectors (columns) of a metric.
    /// Any orthonormal eigenbasis of the same metric gives a valid pair.
    pub fn from_eigen(values: &[f64], vectors: &Matrix) -> Self {
        let n = values.len();
        let primal = Matrix::from_fn(n, n, |i, k| vectors[(i, k)] / libm::sqrt(values[k].abs()));
        let dual = Matrix::from_fn(n, n, |i, k| primal[(i, k)] * values[k].signum());
        Self { primal, dual }
    }

    pub fn dim(&self) -> usize {
        self.primal.cols()
    }

    /// `max |e_kᵀ G e^j − δ_kj|`.
    pub fn pairing_error(&self, gram: &Matrix) -> f64 {
        let pairing = self.primal.transpose().mul(gram).mul(&self.dual);
        pairing.sub(&Matrix::identity(self.dim())).max_abs()
    }

    /// `Σ_k e_k ⊗ e^k`, which equals the inverse metric.
    pub fn completeness_tensor(&self) -> Matrix {
        self.primal.mul(&self.dual.transpose())
    }

    /// `|e^k ∓ e_k|` check: +1 where `e^k = e_k`, -1 where `e^k = -e_k`.
    pub fn signs(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|k| {
                let p = self.primal.column(k);
                let d = self.dual.column(k);
                let dot: f64 = p.iter().zip(&d).map(|(a, b)| a * b).sum();
                dot.signum()
            })
            .collect()
    }
}

/// One `(i, j, k, v)` entry of an algebra spec document.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub v: f64,
}

/// In-memory form of an algebra spec document.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AlgebraSpec {
    pub name: String,
    /// Signed so that non-positive values from a document can be rejected.
    pub dim: i64,
    pub constants: Vec<SpecEntry>,
    /// Named summands. When present the algebra is their direct sum; `dim`
    /// must then equal the total dimension and `constants` must be empty.
    pub sum: Option<Vec<String>>,
}

impl AlgebraSpec {
    pub fn build(&self) -> Result<LieAlgebra> {
        if self.dim <= 0 {
            return Err(Error::NonPositiveDimension);
        }
        let dim = self.dim as usize;
        let algebra = match &self.sum {
            Some(names) => {
                if names.is_empty() {
                    return Err(Error::InvalidSpec("empty `sum`".to_string()));
                }
                if !self.constants.is_empty() {
                    return Err(Error::InvalidSpec(
                        "`constants` cannot be combined with `sum`".to_string(),
                    ));
                }
                let parts = names
                    .iter()
                    .map(|n| LieAlgebra::named(n))
                    .collect::<Result<Vec<_>>>()?;
                let sum = LieAlgebra::direct_sum(self.name.clone(), &parts);
                if sum.dim() != dim {
                    return Err(Error::InvalidSpec(format!(
                        "`dim` is {dim} but the summands have total dimension {}",
                        sum.dim()
                    )));
                }
                sum
            }
            None => {
                let entries: Vec<_> = self.constants.iter().map(|e| (e.i, e.j, e.k, e.v)).collect();
                LieAlgebra::from_entries(self.name.clone(), dim, &entries)?
            }
        };
        let scale = algebra.constants().max_abs().max(1.0);
        let residual = algebra.jacobi_residual();
        if residual > JACOBI_TOLERANCE * scale * scale {
            return Err(Error::JacobiViolation { residual });
        }
        Ok(algebra)
    }
}
