//! Dimension and multiplicity bookkeeping for `(C^n)^{⊗N} = ⊕_k ν_k(N) V_k(n)`.
//!
//! `p_k(n) = dim V_k(n)` obeys `n p_k = p_{k+1} + p_{k-1}` with `p_{-1} = 0`,
//! `p_0 = 1`; `ν_k(N)` counts Bratteli paths, `ν_k(N) = ν_{k+1}(N-1) + ν_{k-1}(N-1)`.
//! All integer sequences use checked `u128`/`i128` arithmetic.

use serde::Serialize;

use crate::bform::BForm;
use crate::chainop::{check_budget, ChainOp, DENSE_BUDGET};
use crate::error::{Error, Result};
use crate::linalg::{identity, kron, max_abs, numerical_rank, CMat, RANK_TOL};
use crate::rmatrix::{projectors, spectral_r};
use crate::scalar::C64;
use crate::sparse::CsrMatrix;
use crate::tl::local_x;

/// Largest `N` accepted by [`catalan`].
pub const CATALAN_MAX: u32 = 30;

fn overflow(what: &str) -> Error {
    Error::Overflow(what.to_string())
}

/// `[p_0(n), ..., p_{k_max}(n)]`.
pub fn dims_p(n: u64, k_max: usize) -> Result<Vec<u128>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n must be at least 2, got {n}")));
    }
    let n = n as u128;
    let mut out = vec![1u128];
    let mut prev = 0u128;
    while out.len() <= k_max {
        let cur = *out.last().unwrap();
        // n >= 2 keeps the sequence increasing, so the subtraction never underflows.
        let next = n.checked_mul(cur).ok_or_else(|| overflow("p_k(n)"))? - prev;
        prev = cur;
        out.push(next);
    }
    Ok(out)
}

/// `ν_k(N)` for `k = 0..=N`; entries with `k ≢ N (mod 2)` are zero.
pub fn mult_nu(sites: usize) -> Result<Vec<u128>> {
    if sites == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    let mut nu = vec![0u128, 1];
    for m in 2..=sites {
        let mut next = vec![0u128; m + 1];
        for (k, slot) in next.iter_mut().enumerate() {
            let up = nu.get(k + 1).copied().unwrap_or(0);
            let down = if k >= 1 { nu.get(k - 1).copied().unwrap_or(0) } else { 0 };
            *slot = up.checked_add(down).ok_or_else(|| overflow("nu_k(N)"))?;
        }
        nu = next;
    }
    Ok(nu)
}

/// `C_N = (2N)! / (N! (N+1)!)`.
pub fn catalan(n: u32) -> Result<u128> {
    if n > CATALAN_MAX {
        return Err(Error::Overflow(format!("Catalan number C_{n} is above the budget C_{CATALAN_MAX}")));
    }
    // C_{k+1} = C_k * 2(2k+1) / (k+2), exact at every step.
    let mut c = 1u128;
    for k in 0..n as u128 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionRow {
    pub k: usize,
    pub p_k: u128,
    pub nu_k: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionChecks {
    /// `sum_k ν_k p_k`, which must equal `n^N`.
    pub sum_pk_nuk: u128,
    /// `sum_k ν_k^2`, which must equal `C_N`.
    pub catalan_check: u128,
    pub expected_dim: u128,
    pub expected_catalan: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionTable {
    pub n: usize,
    #[serde(rename = "N")]
    pub sites: usize,
    pub rows: Vec<DecompositionRow>,
    pub checks: DecompositionChecks,
}

impl DecompositionTable {
    pub fn is_consistent(&self) -> bool {
        self.checks.sum_pk_nuk == self.checks.expected_dim && self.checks.catalan_check == self.checks.expected_catalan
    }

    pub fn row(&self, k: usize) -> Option<&DecompositionRow> {
        self.rows.iter().find(|r| r.k == k)
    }
}

pub fn decomposition_table(n: usize, sites: usize) -> Result<DecompositionTable> {
    let p = dims_p(n as u64, sites)?;
    let nu = mult_nu(sites)?;
    let rows: Vec<DecompositionRow> =
        (0..=sites).filter(|k| k % 2 == sites % 2).map(|k| DecompositionRow { k, p_k: p[k], nu_k: nu[k] }).collect();
    let mut sum = 0u128;
    let mut squares = 0u128;
    for r in &rows {
        sum = r.p_k.checked_mul(r.nu_k).and_then(|x| x.checked_add(sum)).ok_or_else(|| overflow("sum nu p"))?;
        squares =
            r.nu_k.checked_mul(r.nu_k).and_then(|x| x.checked_add(squares)).ok_or_else(|| overflow("sum nu^2"))?;
    }
    let expected_dim = (n as u128).checked_pow(sites as u32).ok_or_else(|| overflow("n^N"))?;
    let expected_catalan = catalan(sites as u32)?;
    Ok(DecompositionTable {
        n,
        sites,
        rows,
        checks: DecompositionChecks { sum_pk_nuk: sum, catalan_check: squares, expected_dim, expected_catalan },
    })
}

/// Coefficients of `1 / a(t)` to order `order`, for an integer polynomial with `a_0 = 1`.
pub fn invert_series(a: &[i128], order: usize) -> Result<Vec<i128>> {
    if a.first() != Some(&1) {
        return Err(Error::InvalidInput("series inversion needs a constant term of 1".into()));
    }
    let mut c: Vec<i128> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut acc: i128 = if k == 0 { 1 } else { 0 };
        for i in 1..a.len().min(k + 1) {
            let term = a[i].checked_mul(c[k - i]).ok_or_else(|| overflow("series coefficient"))?;
            acc = acc.checked_sub(term).ok_or_else(|| overflow("series coefficient"))?;
        }
        c.push(acc);
    }
    Ok(c)
}

/// Graded dimensions of the exterior analogue: `P_-(t) = 1 + n t + t^2`.
pub fn exterior_series(n: usize) -> [i128; 3] {
    [1, n as i128, 1]
}

/// Coefficients of `P_+(t) = 1 / P_-(-t)` up to `t^order`.
pub fn poincare_series(n: usize, order: usize) -> Result<Vec<u128>> {
    let [a0, a1, a2] = exterior_series(n);
    let c = invert_series(&[a0, -a1, a2], order)?;
    c.into_iter()
        .map(|x| u128::try_from(x).map_err(|_| Error::InvalidInput("negative coefficient in P_+(t)".into())))
        .collect()
}

/// `U_k(x)` evaluated through its trigonometric or hyperbolic closed form.
/// For `x = n/2 > 1` this is the analytic continuation `sinh((k+1)t)/sinh t`
/// with `x = cosh t`.
pub fn chebyshev_u(k: usize, x: f64) -> f64 {
    let kk = (k + 1) as f64;
    if (x - 1.0).abs() < 1e-15 {
        kk
    } else if x > 1.0 {
        let t = x.acosh();
        (kk * t).sinh() / t.sinh()
    } else if x < -1.0 {
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * chebyshev_u(k, -x)
    } else {
        let t = x.acos();
        (kk * t).sin() / t.sin()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuantumPlaneDims {
    pub sym: Vec<usize>,
    pub ext: Vec<usize>,
}

/// Degree-`d` dimension of `T(V)/(R)`: `n^d - dim(sum_i V^i ⊗ R ⊗ V^{d-2-i})`,
/// where `R` is the row space of `relation` (an operator on `V ⊗ V`).
fn quotient_dim(relation: &CMat, n: usize, d: usize) -> usize {
    let dim = n.pow(d as u32);
    if d < 2 {
        return dim;
    }
    let mut gram = CMat::zeros(dim, dim);
    for i in 0..=d - 2 {
        let left = identity(n.pow(i as u32));
        let right = identity(n.pow((d - 2 - i) as u32));
        let placed = kron(&kron(&left, relation), &right);
        gram += placed.adjoint() * &placed;
    }
    dim - numerical_rank(&gram, RANK_TOL)
}

/// Graded dimensions of the symmetric (`X Z Z = 0`) and exterior
/// (`P_+ W W = 0`) quadratic algebras for degrees `0..=d_max`.
pub fn quantum_plane_dims(f: &BForm, d_max: usize) -> Result<QuantumPlaneDims> {
    if d_max > 4 {
        return Err(Error::InvalidInput(format!("d_max must be at most 4, got {d_max}")));
    }
    let n = f.n();
    check_budget(n, d_max, DENSE_BUDGET)?;
    let x = local_x(f).mat;
    let (plus, _) = projectors(f)?;
    let sym = (0..=d_max).map(|d| quotient_dim(&x, n, d)).collect();
    let ext = (0..=d_max).map(|d| quotient_dim(&plus.mat, n, d)).collect();
    Ok(QuantumPlaneDims { sym, ext })
}

#[derive(Debug, Clone)]
pub struct Symmetrizer {
    pub op: ChainOp,
    pub rank: usize,
    /// `|P^2 - P|`, relative.
    pub idempotency_residual: f64,
    /// Normalisation `tr(M^2)/tr(M)` applied at the last step.
    pub lambda: C64,
}

/// `P_N ∝ P_{N-1} Ř_{N-1,N}(q^{N-1}) P_{N-1}`, starting from `P_2 = I - P_-`,
/// normalised at each level by `λ = tr(M^2)/tr(M)`.
pub fn symmetrizer(f: &BForm, sites: usize) -> Result<Symmetrizer> {
    if sites < 2 {
        return Err(Error::InvalidInput("symmetrizer needs at least 2 sites".into()));
    }
    let n = f.n();
    check_budget(n, sites, DENSE_BUDGET)?;
    let (plus, _) = projectors(f)?;
    let mut p = plus.mat;
    let mut lambda = C64::new(1.0, 0.0);
    let mut q_pow = f.q();
    for m in 3..=sites {
        q_pow *= f.q();
        let r = spectral_r(f, q_pow)?.mat.mat;
        let r_last = kron(&identity(n.pow((m - 2) as u32)), &r);
        let p_ext = kron(&p, &identity(n));
        let raw = &p_ext * r_last * &p_ext;
        let tr = raw.trace();
        let tr2 = (&raw * &raw).trace();
        if tr.norm() <= 1e-12 * max_abs(&raw).max(1.0) {
            return Err(Error::NormalizationFailure(format!("tr(M) vanishes at N = {m}")));
        }
        lambda = tr2 / tr;
        p = raw / lambda;
    }
    let idempotency_residual = max_abs(&(&p * &p - &p)) / max_abs(&p).max(1.0);
    let rank = numerical_rank(&p, RANK_TOL);
    let op = ChainOp::from_sparse(n, sites, CsrMatrix::from_dense(&p), format!("P+[{sites}]"));
    Ok(Symmetrizer { op, rank, idempotency_residual, lambda })
}

/// Max over `(a, b)` of `|[P, T^(N)_ab]|`, relative.
pub fn symmetrizer_commutation_residual(f: &BForm, sym: &Symmetrizer) -> Result<f64> {
    let t = crate::qalg::coproduct_t(f, sym.op.sites)?;
    let p = sym.op.to_sparse();
    let mut worst = 0.0_f64;
    for a in 0..t.n_a {
        for b in 0..t.n_a {
            let tab = t.sparse(a, b);
            let (pt, tp) = (p.matmul(tab), tab.matmul(&p));
            let scale = pt.max_abs().max(tp.max_abs()).max(1.0);
            worst = worst.max(pt.sub(&tp).max_abs() / scale);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bform::{builtin_bform, Family};
    use crate::scalar::real;

    #[test]
    fn p_sequences() {
        assert_eq!(dims_p(3, 4).unwrap(), vec![1, 3, 8, 21, 55]);
        assert_eq!(dims_p(2, 4).unwrap(), vec![1, 2, 3, 4, 5]);
        assert_eq!(dims_p(4, 3).unwrap(), vec![1, 4, 15, 56]);
        assert!(dims_p(1, 3).is_err());
        assert!(matches!(dims_p(6, 200), Err(Error::Overflow(_))));
    }

    #[test]
    fn nu_sequences() {
        assert_eq!(mult_nu(2).unwrap(), vec![1, 0, 1]);
        assert_eq!(mult_nu(3).unwrap(), vec![0, 2, 0, 1]);
        assert_eq!(mult_nu(4).unwrap(), vec![2, 0, 3, 0, 1]);
        assert_eq!(mult_nu(1).unwrap(), vec![0, 1]);
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(0).unwrap(), 1);
        assert_eq!(catalan(3).unwrap(), 5);
        assert_eq!(catalan(4).unwrap(), 14);
        assert_eq!(catalan(30).unwrap(), 3_814_986_502_092_304);
        assert!(matches!(catalan(31), Err(Error::Overflow(_))));
    }

    #[test]
    fn tables() {
        let t = decomposition_table(3, 3).unwrap();
        assert_eq!(
            t.rows,
            vec![DecompositionRow { k: 1, p_k: 3, nu_k: 2 }, DecompositionRow { k: 3, p_k: 21, nu_k: 1 }]
        );
        assert_eq!(t.checks.sum_pk_nuk, 27);
        assert_eq!(t.checks.catalan_check, 5);
        let t = decomposition_table(3, 4).unwrap();
        let flat: Vec<(usize, u128, u128)> = t.rows.iter().map(|r| (r.k, r.p_k, r.nu_k)).collect();
        assert_eq!(flat, vec![(0, 1, 2), (2, 8, 3), (4, 55, 1)]);
        assert_eq!(t.checks.sum_pk_nuk, 81);
        assert!(t.is_consistent());
        let t = decomposition_table(3, 2).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.checks.sum_pk_nuk, 9);
    }

    #[test]
    fn series() {
        assert_eq!(poincare_series(3, 3).unwrap(), vec![1, 3, 8, 21]);
        assert_eq!(poincare_series(2, 4).unwrap(), vec![1, 2, 3, 4, 5]);
        assert_eq!(invert_series(&[1, -1], 3).unwrap(), vec![1, 1, 1, 1]);
        assert!(invert_series(&[2, 1], 3).is_err());
    }

    #[test]
    fn chebyshev_continuation() {
        for n in 2..=6u64 {
            let p = dims_p(n, 8).unwrap();
            for (k, &pk) in p.iter().enumerate() {
                let u = chebyshev_u(k, n as f64 / 2.0);
                assert!((u - pk as f64).abs() <= 1e-9 * pk as f64, "n={n} k={k}: {u} vs {pk}");
            }
        }
        assert!((chebyshev_u(3, 0.3) - (8.0 * 0.027 - 4.0 * 0.3)).abs() < 1e-12);
    }

    #[test]
    fn quantum_plane_kls() {
        let f = builtin_bform(Family::Kls, real(2.0)).unwrap();
        let d = quantum_plane_dims(&f, 3).unwrap();
        assert_eq!(d.sym, vec![1, 3, 8, 21]);
        assert_eq!(d.ext, vec![1, 3, 1, 0]);
    }

    #[test]
    fn quantum_plane_random_two_dim() {
        let mut rng = crate::sample::rng(11);
        for _ in 0..5 {
            let f = crate::sample::random_bform(2, &mut rng);
            let d = quantum_plane_dims(&f, 3).unwrap();
            assert_eq!(d.sym, vec![1, 2, 3, 4]);
            assert_eq!(d.ext, vec![1, 2, 1, 0]);
        }
    }

    #[test]
    fn symmetrizer_ranks() {
        let f = builtin_bform(Family::Kls, real(2.0)).unwrap();
        for (sites, rank) in [(2, 8), (3, 21), (4, 55)] {
            let s = symmetrizer(&f, sites).unwrap();
            assert_eq!(s.rank, rank);
            assert!(s.idempotency_residual < 1e-10, "N={sites}: {}", s.idempotency_residual);
            assert!(symmetrizer_commutation_residual(&f, &s).unwrap() < 1e-8);
        }
    }
}
