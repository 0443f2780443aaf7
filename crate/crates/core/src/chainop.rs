//! Operators on `(C^n)^{⊗N}`, stored sparse or as a sum of local terms that
//! is applied without materialising the full matrix.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::scalar::C64;
use crate::sparse::CsrMatrix;

/// Largest chain dimension for sparse materialisation.
pub const SPARSE_BUDGET: usize = 20_000;
/// Largest chain dimension for dense work (eigensolves, ranks).
pub const DENSE_BUDGET: usize = 4_096;
/// Above this dimension, sums of local terms stay matrix-free.
pub const DENSIFY_THRESHOLD: usize = 4_096;

/// Checked `n^sites`.
pub fn chain_dim(n: usize, sites: usize) -> Option<usize> {
    n.checked_pow(u32::try_from(sites).ok()?)
}

pub fn check_budget(n: usize, sites: usize, budget: usize) -> Result<usize> {
    match chain_dim(n, sites) {
        Some(dim) if dim <= budget => Ok(dim),
        Some(dim) => Err(Error::SizeBudgetExceeded { dim, budget }),
        None => Err(Error::SizeBudgetExceeded { dim: usize::MAX, budget }),
    }
}

/// `coeff * op` acting on sites `first .. first + width` (0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct LocalTerm {
    pub op: CMat,
    pub first: usize,
    pub width: usize,
    pub coeff: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChainRepr {
    Sparse(CsrMatrix),
    Terms(Vec<LocalTerm>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainOp {
    pub n: usize,
    pub sites: usize,
    pub label: String,
    pub repr: ChainRepr,
}

impl ChainOp {
    pub fn from_sparse(n: usize, sites: usize, m: CsrMatrix, label: impl Into<String>) -> Self {
        assert_eq!(Some(m.dim()), chain_dim(n, sites));
        Self { n, sites, label: label.into(), repr: ChainRepr::Sparse(m) }
    }

    /// `op` (acting on `width` sites) placed at 0-based site `first`, sparse.
    pub fn embedded(op: &CMat, n: usize, first: usize, width: usize, sites: usize, label: &str) -> Result<Self> {
        let local_dim = n.pow(width as u32);
        if op.nrows() != local_dim || op.ncols() != local_dim {
            return Err(Error::InvalidInput(format!(
                "local operator is {}x{}, expected {local_dim}x{local_dim}",
                op.nrows(),
                op.ncols()
            )));
        }
        if width == 0 || first + width > sites {
            return Err(Error::InvalidInput(format!(
                "cannot place a {width}-site operator at site {} of a {sites}-site chain",
                first + 1
            )));
        }
        let dim = check_budget(n, sites, SPARSE_BUDGET)?;
        let left = n.pow(first as u32);
        let right = n.pow((sites - first - width) as u32);
        let local = CsrMatrix::from_dense(op);
        let mut triplets = Vec::with_capacity(local.nnz() * left * right);
        for l in 0..left {
            for (r, c, v) in local.iter() {
                let (row0, col0) = ((l * local_dim + r) * right, (l * local_dim + c) * right);
                for rr in 0..right {
                    triplets.push((row0 + rr, col0 + rr, v));
                }
            }
        }
        let m = CsrMatrix::from_triplets(dim, triplets);
        Ok(Self::from_sparse(n, sites, m, format!("{label}[{}]", first + 1)))
    }

    /// A matrix-free sum of local terms.
    pub fn from_terms(n: usize, sites: usize, terms: Vec<LocalTerm>, label: impl Into<String>) -> Result<Self> {
        for t in &terms {
            let local_dim = n.pow(t.width as u32);
            if t.first + t.width > sites || t.op.nrows() != local_dim || t.op.ncols() != local_dim {
                return Err(Error::InvalidInput("local term does not fit the chain".into()));
            }
        }
        chain_dim(n, sites).ok_or(Error::SizeBudgetExceeded { dim: usize::MAX, budget: usize::MAX })?;
        Ok(Self { n, sites, label: label.into(), repr: ChainRepr::Terms(terms) })
    }

    pub fn dim(&self) -> usize {
        self.n.pow(self.sites as u32)
    }

    pub fn as_sparse(&self) -> Option<&CsrMatrix> {
        match &self.repr {
            ChainRepr::Sparse(m) => Some(m),
            ChainRepr::Terms(_) => None,
        }
    }

    pub fn is_matrix_free(&self) -> bool {
        matches!(self.repr, ChainRepr::Terms(_))
    }

    /// Materialised sparse form. Fails above the sparse budget.
    pub fn try_to_sparse(&self) -> Result<CsrMatrix> {
        match &self.repr {
            ChainRepr::Sparse(m) => Ok(m.clone()),
            ChainRepr::Terms(terms) => {
                let dim = check_budget(self.n, self.sites, SPARSE_BUDGET)?;
                let mut acc = CsrMatrix::zeros(dim);
                for t in terms {
                    let e = Self::embedded(&t.op, self.n, t.first, t.width, self.sites, "")?;
                    let ChainRepr::Sparse(m) = e.repr else { unreachable!() };
                    acc = CsrMatrix::linear_combination(dim, &[(C64::new(1.0, 0.0), &acc), (t.coeff, &m)]);
                }
                Ok(acc)
            }
        }
    }

    /// Sparse form; panics if over budget. Sparse ops built by `embedded` are
    /// always within budget.
    pub fn to_sparse(&self) -> CsrMatrix {
        self.try_to_sparse().expect("chain operator exceeds the sparse budget")
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.dim());
        match &self.repr {
            ChainRepr::Sparse(m) => m.apply(x),
            ChainRepr::Terms(terms) => {
                let mut y = vec![C64::new(0.0, 0.0); x.len()];
                for t in terms {
                    apply_local(t, self.n, self.sites, x, &mut y);
                }
                y
            }
        }
    }

    pub fn adjoint(&self) -> Self {
        let repr = match &self.repr {
            ChainRepr::Sparse(m) => ChainRepr::Sparse(m.adjoint()),
            ChainRepr::Terms(terms) => ChainRepr::Terms(
                terms.iter().map(|t| LocalTerm { op: t.op.adjoint(), coeff: t.coeff.conj(), ..*t }).collect(),
            ),
        };
        Self { n: self.n, sites: self.sites, label: format!("{}^dag", self.label), repr }
    }

    /// Spectral-norm estimate by power iteration on `A^dag A` from a seeded
    /// random start.
    pub fn norm_estimate(&self, iterations: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = self.dim();
        let mut v: Vec<C64> =
            (0..dim).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let adj = self.adjoint();
        let mut estimate = 0.0;
        for _ in 0..iterations {
            let norm = vec_norm(&v);
            if norm == 0.0 {
                return 0.0;
            }
            v.iter_mut().for_each(|z| *z /= norm);
            let av = self.apply(&v);
            estimate = vec_norm(&av);
            v = adj.apply(&av);
        }
        estimate
    }
}

fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn apply_local(t: &LocalTerm, n: usize, sites: usize, x: &[C64], y: &mut [C64]) {
    let local_dim = n.pow(t.width as u32);
    let left = n.pow(t.first as u32);
    let right = n.pow((sites - t.first - t.width) as u32);
    let mut buf = vec![C64::new(0.0, 0.0); local_dim];
    for l in 0..left {
        for rr in 0..right {
            let base = l * local_dim * right + rr;
            for (m, slot) in buf.iter_mut().enumerate() {
                *slot = x[base + m * right];
            }
            for r in 0..local_dim {
                let mut acc = C64::new(0.0, 0.0);
                for (c, &xc) in buf.iter().enumerate() {
                    acc += t.op[(r, c)] * xc;
                }
                y[base + r * right] += t.coeff * acc;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, kron, max_abs};
    use crate::scalar::c64;

    fn op2(n: usize) -> CMat {
        CMat::from_fn(n * n, n * n, |r, c| c64((r as f64 - c as f64) * 0.3, ((r * c) % 3) as f64))
    }

    #[test]
    fn embedded_matches_kron_oracle() {
        let op = op2(2);
        let e = ChainOp::embedded(&op, 2, 1, 2, 4, "A").unwrap().to_sparse().to_dense();
        let oracle = kron(&kron(&identity(2), &op), &identity(2));
        assert_eq!(e, oracle);
    }

    #[test]
    fn terms_and_sparse_agree_on_probe() {
        let n = 3;
        let sites = 4;
        let terms: Vec<LocalTerm> =
            (0..3).map(|j| LocalTerm { op: op2(n), first: j, width: 2, coeff: c64(1.0, 0.5 * j as f64) }).collect();
        let free = ChainOp::from_terms(n, sites, terms, "H").unwrap();
        let sparse = free.try_to_sparse().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x: Vec<C64> =
            (0..free.dim()).map(|_| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let (a, b) = (free.apply(&x), sparse.apply(&x));
        let diff = a.iter().zip(&b).fold(0.0_f64, |acc, (u, v)| acc.max((u - v).norm()));
        assert!(diff < 1e-12);
        let adj_dense = free.adjoint().try_to_sparse().unwrap().to_dense();
        assert!(max_abs(&(adj_dense - sparse.to_dense().adjoint())) < 1e-12);
    }

    #[test]
    fn norm_estimate_of_scaled_identity() {
        let op = identity(4) * c64(0.0, 2.5);
        let t = ChainOp::embedded(&op, 2, 0, 2, 3, "I").unwrap();
        assert!((t.norm_estimate(20, 1) - 2.5).abs() < 1e-12);
    }

    #[test]
    fn budget_is_enforced() {
        let err = ChainOp::embedded(&identity(9), 3, 0, 2, 10, "X").unwrap_err();
        assert!(matches!(err, Error::SizeBudgetExceeded { dim: 59049, budget: SPARSE_BUDGET }));
    }

    #[test]
    fn placement_out_of_range() {
        assert!(ChainOp::embedded(&identity(4), 2, 2, 2, 3, "X").is_err());
    }
}
