//! Dense helpers on `DMatrix<C64>`.

use nalgebra::{DMatrix, DVector};

use crate::scalar::C64;

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Singular values above `rel_tol * sigma_max` count toward the numerical rank.
pub const RANK_TOL: f64 = 1e-8;

pub fn identity(dim: usize) -> CMat {
    CMat::identity(dim, dim)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// The flip operator on `C^n ⊗ C^n`: `e_c ⊗ e_d -> e_d ⊗ e_c`.
pub fn flip(n: usize) -> CMat {
    let mut p = CMat::zeros(n * n, n * n);
    for c in 0..n {
        for d in 0..n {
            p[(d * n + c, c * n + d)] = C64::new(1.0, 0.0);
        }
    }
    p
}

/// Max-abs difference, scaled by the larger of the two operands (floored at 1).
pub fn rel_diff(a: &CMat, b: &CMat) -> f64 {
    let scale = max_abs(a).max(max_abs(b)).max(1.0);
    max_abs(&(a - b)) / scale
}

/// Max-abs of `m` relative to `scale` (floored at 1).
pub fn rel_norm(m: &CMat, scale: f64) -> f64 {
    max_abs(m) / scale.max(1.0)
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn numerical_rank(m: &CMat, rel_tol: f64) -> usize {
    let s = singular_values(m);
    let Some(&top) = s.first() else { return 0 };
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_tol * top).count()
}

/// Dimension of the span of a set of vectors.
pub fn span_rank(vectors: &[CVec], rel_tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = CMat::from_columns(vectors);
    numerical_rank(&m, rel_tol)
}

/// Distance of `v` from the line spanned by `target`, relative to `|v|`.
/// The zero vector lies on every line.
pub fn line_residual(v: &CVec, target: &CVec) -> f64 {
    let vn = v.norm();
    if vn == 0.0 {
        return 0.0;
    }
    let tn2 = target.norm_squared();
    if tn2 == 0.0 {
        return 1.0;
    }
    let coef = target.dotc(v) / tn2;
    (v - target * coef).norm() / vn
}

/// Least-squares distance of `v` from the span of `basis`, relative to `|v|`.
pub fn span_residual(v: &CVec, basis: &[CVec]) -> f64 {
    let vn = v.norm();
    if vn == 0.0 {
        return 0.0;
    }
    if basis.is_empty() {
        return 1.0;
    }
    let a = CMat::from_columns(basis);
    let svd = a.clone().svd(true, true);
    let Ok(x) = svd.solve(v, 1e-12) else { return 1.0 };
    (&a * x - v).norm() / vn
}

/// Places a two-site operator on sites `i`, `j` (0-based, any order) of a
/// `sites`-fold tensor product of `C^n`. The first tensor factor of `op`
/// lands on site `i`.
pub fn place_two_site(op: &CMat, n: usize, i: usize, j: usize, sites: usize) -> CMat {
    assert!(i != j && i < sites && j < sites);
    let dim = n.pow(sites as u32);
    let digits = |mut x: usize| {
        let mut d = vec![0; sites];
        for s in (0..sites).rev() {
            d[s] = x % n;
            x /= n;
        }
        d
    };
    let mut out = CMat::zeros(dim, dim);
    for r in 0..dim {
        let rd = digits(r);
        for c in 0..dim {
            let cd = digits(c);
            let spectators_match = (0..sites).filter(|&s| s != i && s != j).all(|s| rd[s] == cd[s]);
            if spectators_match {
                out[(r, c)] = op[(rd[i] * n + rd[j], cd[i] * n + cd[j])];
            }
        }
    }
    out
}

/// Basis vector `e_i ⊗ e_j ⊗ ...` for the given digits.
pub fn product_basis(n: usize, digits: &[usize]) -> CVec {
    let idx = digits.iter().fold(0, |acc, &d| acc * n + d);
    let mut v = CVec::zeros(n.pow(digits.len() as u32));
    v[idx] = C64::new(1.0, 0.0);
    v
}

/// Row-major flattening of a square matrix into a vector of `C^n ⊗ C^n`.
pub fn vectorize(m: &CMat) -> CVec {
    CVec::from_iterator(m.nrows() * m.ncols(), m.transpose().iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c64, real};

    #[test]
    fn flip_is_an_involution() {
        let p = flip(3);
        assert_eq!(&p * &p, identity(9));
    }

    #[test]
    fn place_two_site_adjacent_matches_kron() {
        let n = 2;
        let op = CMat::from_fn(4, 4, |r, c| c64(r as f64 + 0.5, c as f64 - 1.0));
        let id = identity(n);
        assert_eq!(place_two_site(&op, n, 0, 1, 3), kron(&op, &id));
        assert_eq!(place_two_site(&op, n, 1, 2, 3), kron(&id, &op));
    }

    #[test]
    fn place_two_site_reversed_is_conjugated_by_flip() {
        let n = 3;
        let op = CMat::from_fn(9, 9, |r, c| real((r * 9 + c) as f64));
        let p = flip(n);
        let rev = place_two_site(&op, n, 1, 0, 2);
        assert_eq!(rev, &p * &op * &p);
    }

    #[test]
    fn vectorize_is_row_major() {
        let m = CMat::from_row_slice(2, 2, &[real(1.0), real(2.0), real(3.0), real(4.0)]);
        let v = vectorize(&m);
        assert_eq!(v.as_slice(), &[real(1.0), real(2.0), real(3.0), real(4.0)]);
    }

    #[test]
    fn rank_and_line_residual() {
        let u = CVec::from_vec(vec![real(1.0), real(2.0), real(0.0)]);
        let m = &u * u.transpose();
        assert_eq!(numerical_rank(&m, RANK_TOL), 1);
        assert!(line_residual(&(&u * c64(0.0, 3.0)), &u) < 1e-15);
        let w = CVec::from_vec(vec![real(0.0), real(0.0), real(1.0)]);
        assert!((line_residual(&w, &u) - 1.0).abs() < 1e-15);
        assert!(span_residual(&(&u + &w), &[u.clone(), w.clone()]) < 1e-12);
    }
}
