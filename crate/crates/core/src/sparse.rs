//! Square compressed-row matrices over `C64`.
//!
//! Column indices within a row are strictly increasing and explicit zeros are
//! dropped, so two matrices with the same entries have identical storage.

use crate::linalg::CMat;
use crate::scalar::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    dim: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<C64>,
}

impl CsrMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, indptr: vec![0; dim + 1], indices: Vec::new(), values: Vec::new() }
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, indptr: (0..=dim).collect(), indices: (0..dim).collect(), values: vec![C64::new(1.0, 0.0); dim] }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut indptr = vec![0; dim + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        let mut rows = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "triplet ({r}, {c}) out of range for dim {dim}");
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                values.push(v);
                rows.push(r);
                last = Some((r, c));
            }
        }
        let mut k_out = 0;
        for k in 0..values.len() {
            if values[k] != C64::new(0.0, 0.0) {
                indices[k_out] = indices[k];
                values[k_out] = values[k];
                rows[k_out] = rows[k];
                k_out += 1;
            }
        }
        indices.truncate(k_out);
        values.truncate(k_out);
        rows.truncate(k_out);
        for &r in &rows {
            indptr[r + 1] += 1;
        }
        for r in 0..dim {
            indptr[r + 1] += indptr[r];
        }
        Self { dim, indptr, indices, values }
    }

    pub fn from_dense(m: &CMat) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "sparse storage is square only");
        let dim = m.nrows();
        let mut triplets = Vec::new();
        for r in 0..dim {
            for c in 0..dim {
                let v = m[(r, c)];
                if v != C64::new(0.0, 0.0) {
                    triplets.push((r, c, v));
                }
            }
        }
        Self::from_triplets(dim, triplets)
    }

    pub fn to_dense(&self) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for (r, c, v) in self.iter() {
            m[(r, c)] = v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim)
            .flat_map(move |r| (self.indptr[r]..self.indptr[r + 1]).map(move |k| (r, self.indices[k], self.values[k])))
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        let row = &self.indices[self.indptr[r]..self.indptr[r + 1]];
        match row.binary_search(&c) {
            Ok(k) => self.values[self.indptr[r] + k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
    }

    pub fn scale(&self, s: C64) -> Self {
        let triplets = self.iter().map(|(r, c, v)| (r, c, v * s)).collect();
        Self::from_triplets(self.dim, triplets)
    }

    /// `sum_i coef_i * m_i`.
    pub fn linear_combination(dim: usize, terms: &[(C64, &CsrMatrix)]) -> Self {
        let mut triplets = Vec::new();
        for &(coef, m) in terms {
            assert_eq!(m.dim, dim);
            triplets.extend(m.iter().map(|(r, c, v)| (r, c, v * coef)));
        }
        Self::from_triplets(dim, triplets)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::linear_combination(self.dim, &[(C64::new(1.0, 0.0), self), (C64::new(1.0, 0.0), other)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::linear_combination(self.dim, &[(C64::new(1.0, 0.0), self), (C64::new(-1.0, 0.0), other)])
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let dim = self.dim;
        let mut acc = vec![C64::new(0.0, 0.0); dim];
        let mut touched = vec![false; dim];
        let mut cols = Vec::new();
        let mut triplets = Vec::new();
        for r in 0..dim {
            for k in self.indptr[r]..self.indptr[r + 1] {
                let mid = self.indices[k];
                let a = self.values[k];
                for kk in other.indptr[mid]..other.indptr[mid + 1] {
                    let c = other.indices[kk];
                    if !touched[c] {
                        touched[c] = true;
                        cols.push(c);
                    }
                    acc[c] += a * other.values[kk];
                }
            }
            for &c in &cols {
                triplets.push((r, c, acc[c]));
                acc[c] = C64::new(0.0, 0.0);
                touched[c] = false;
            }
            cols.clear();
        }
        Self::from_triplets(dim, triplets)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn kron(&self, other: &Self) -> Self {
        let dim = self.dim * other.dim;
        let mut triplets = Vec::with_capacity(self.nnz() * other.nnz());
        for (r1, c1, v1) in self.iter() {
            for (r2, c2, v2) in other.iter() {
                triplets.push((r1 * other.dim + r2, c1 * other.dim + c2, v1 * v2));
            }
        }
        Self::from_triplets(dim, triplets)
    }

    pub fn adjoint(&self) -> Self {
        let triplets = self.iter().map(|(r, c, v)| (c, r, v.conj())).collect();
        Self::from_triplets(self.dim, triplets)
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|r| (self.indptr[r]..self.indptr[r + 1]).map(|k| self.values[k] * x[self.indices[k]]).sum())
            .collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, max_abs};
    use crate::scalar::c64;

    fn sample(dim: usize, seed: u64) -> CMat {
        CMat::from_fn(dim, dim, |r, c| {
            let h = (r as u64 * 31 + c as u64 * 17 + seed * 7) % 5;
            if h < 2 {
                C64::new(0.0, 0.0)
            } else {
                c64(h as f64 - 3.0, (r as f64) - (c as f64) * 0.5)
            }
        })
    }

    #[test]
    fn dense_round_trip_and_ops() {
        let a = sample(5, 1);
        let b = sample(5, 2);
        let (sa, sb) = (CsrMatrix::from_dense(&a), CsrMatrix::from_dense(&b));
        assert_eq!(sa.to_dense(), a);
        assert!(max_abs(&(sa.matmul(&sb).to_dense() - &a * &b)) < 1e-12);
        assert!(max_abs(&(sa.add(&sb).to_dense() - (&a + &b))) < 1e-15);
        assert!(max_abs(&(sa.kron(&sb).to_dense() - kron(&a, &b))) < 1e-12);
        assert_eq!(sa.adjoint().to_dense(), a.adjoint());
    }

    #[test]
    fn duplicates_are_summed_and_zeros_dropped() {
        let one = c64(1.0, 0.0);
        let m = CsrMatrix::from_triplets(3, vec![(1, 2, one), (0, 0, one), (1, 2, one), (2, 1, one), (2, 1, -one)]);
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.get(1, 2), c64(2.0, 0.0));
        assert_eq!(m.get(2, 1), c64(0.0, 0.0));
    }

    #[test]
    fn apply_matches_dense() {
        let a = sample(6, 3);
        let s = CsrMatrix::from_dense(&a);
        let x: Vec<C64> = (0..6).map(|i| c64(i as f64, 1.0 - i as f64)).collect();
        let y = s.apply(&x);
        let yd = &a * crate::linalg::CVec::from_vec(x);
        for i in 0..6 {
            assert!((y[i] - yd[i]).norm() < 1e-12);
        }
    }
}
