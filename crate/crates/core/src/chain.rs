//! The open-chain Hamiltonian `H = Σ_j X_j`, its spectrum, and the check that
//! eigenvalue multiplicities split into irreducible dimensions.

use nalgebra::SymmetricEigen;
use serde::Serialize;

use crate::bform::{BForm, EPS};
use crate::chainop::{check_budget, ChainOp, LocalTerm, DENSE_BUDGET, DENSIFY_THRESHOLD};
use crate::error::{Error, Result};
use crate::io::serialize_complex;
use crate::linalg::CMat;
use crate::rep_ring::DecompositionTable;
use crate::scalar::C64;
use crate::sparse::CsrMatrix;
use crate::tl::{embed, local_x};

/// Largest dimension for a matrix-free Hamiltonian (one state vector).
pub const MATRIX_FREE_BUDGET: usize = 1 << 22;

pub const HERMITIAN_CLUSTER_TOL: f64 = 1e-8;
pub const GENERAL_CLUSTER_TOL: f64 = 1e-6;

/// `Σ_{j=1}^{N-1} X_j`. Sparse up to the densify threshold, matrix-free above it.
pub fn hamiltonian(f: &BForm, sites: usize) -> Result<ChainOp> {
    if sites < 2 {
        return Err(Error::InvalidInput("a chain needs at least 2 sites".into()));
    }
    let n = f.n();
    let dim = check_budget(n, sites, MATRIX_FREE_BUDGET)?;
    let x = local_x(f);
    if dim <= DENSIFY_THRESHOLD {
        let mut acc = CsrMatrix::zeros(dim);
        for j in 1..sites {
            acc = acc.add(&embed(&x, j, sites)?.to_sparse());
        }
        Ok(ChainOp::from_sparse(n, sites, acc, "H"))
    } else {
        let terms = (0..sites - 1)
            .map(|first| LocalTerm { op: x.mat.clone(), first, width: 2, coeff: C64::new(1.0, 0.0) })
            .collect();
        ChainOp::from_terms(n, sites, terms, "H")
    }
}

/// `|H - H^dag|_max <= EPS`. Matrix-free operators are checked term by term.
pub fn is_hermitian(h: &ChainOp) -> bool {
    match h.as_sparse() {
        Some(m) => m.sub(&m.adjoint()).max_abs() <= EPS,
        None => match &h.repr {
            crate::chainop::ChainRepr::Terms(terms) => terms.iter().all(|t| {
                let scaled = &t.op * t.coeff;
                crate::linalg::max_abs(&(&scaled - scaled.adjoint())) <= EPS
            }),
            crate::chainop::ChainRepr::Sparse(_) => unreachable!(),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    #[serde(serialize_with = "serialize_complex")]
    pub value: C64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub n: usize,
    #[serde(rename = "N")]
    pub sites: usize,
    pub clusters: Vec<Cluster>,
    pub total: usize,
    pub hermitian: bool,
    pub cluster_tol: f64,
    /// Raw eigenvalues in solver order after sorting.
    #[serde(skip)]
    pub eigenvalues: Vec<C64>,
}

impl SpectrumReport {
    /// The cluster whose value is within `tol` of `z`.
    pub fn cluster_near(&self, z: C64, tol: f64) -> Option<&Cluster> {
        self.clusters.iter().find(|c| (c.value - z).norm() <= tol * (1.0 + z.norm()))
    }
}

pub fn dense_eigenvalues(m: &CMat, hermitian: bool) -> Result<Vec<C64>> {
    if hermitian {
        let eig = SymmetricEigen::new(m.clone());
        Ok(eig.eigenvalues.iter().map(|&x| C64::new(x, 0.0)).collect())
    } else {
        let ev = m.clone().schur().eigenvalues().ok_or(Error::ConvergenceFailure)?;
        Ok(ev.iter().copied().collect())
    }
}

fn sort_complex(v: &mut [C64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Greedy clustering of sorted values: a value joins the open cluster when it
/// lies within `tol (1 + |center|)` of the cluster's first member.
pub fn cluster_values(sorted: &[C64], tol: f64) -> Vec<Cluster> {
    let mut groups: Vec<Vec<C64>> = Vec::new();
    for &z in sorted {
        let joined = groups.iter_mut().rev().find(|g| (g[0] - z).norm() <= tol * (1.0 + g[0].norm()));
        match joined {
            Some(g) => g.push(z),
            None => groups.push(vec![z]),
        }
    }
    let mut clusters: Vec<Cluster> = groups
        .into_iter()
        .map(|g| {
            let mean = g.iter().sum::<C64>() / g.len() as f64;
            Cluster { value: mean, multiplicity: g.len() }
        })
        .collect();
    clusters.sort_by(|a, b| a.value.re.total_cmp(&b.value.re).then(a.value.im.total_cmp(&b.value.im)));
    clusters
}

/// Full spectrum with clustering. `cluster_tol` defaults by hermiticity.
pub fn spectrum(h: &ChainOp, cluster_tol: Option<f64>) -> Result<SpectrumReport> {
    let dim = check_budget(h.n, h.sites, DENSE_BUDGET)?;
    let sparse = h.try_to_sparse()?;
    let hermitian = sparse.sub(&sparse.adjoint()).max_abs() <= EPS;
    let tol = cluster_tol.unwrap_or(if hermitian { HERMITIAN_CLUSTER_TOL } else { GENERAL_CLUSTER_TOL });
    let mut eigenvalues = dense_eigenvalues(&sparse.to_dense(), hermitian)?;
    sort_complex(&mut eigenvalues);
    let clusters = cluster_values(&eigenvalues, tol);
    Ok(SpectrumReport { n: h.n, sites: h.sites, clusters, total: dim, hermitian, cluster_tol: tol, eigenvalues })
}

/// Spectrum of the Hamiltonian built from `f`.
pub fn chain_spectrum(f: &BForm, sites: usize, cluster_tol: Option<f64>) -> Result<SpectrumReport> {
    spectrum(&hamiltonian(f, sites)?, cluster_tol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterAssignment {
    #[serde(serialize_with = "serialize_complex")]
    pub value: C64,
    pub multiplicity: usize,
    /// `(k, a_k)` with `a_k > 0` and `Σ a_k p_k = multiplicity`.
    pub terms: Vec<(usize, u128)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsotypicAssignment {
    pub clusters: Vec<ClusterAssignment>,
    /// `(k, Σ_clusters a_k, ν_k)`.
    pub totals: Vec<(usize, u128, u128)>,
}

/// Splits every cluster multiplicity into `Σ_k a_k p_k(n)` such that the
/// per-`k` totals over clusters are `ν_k(N)`. Exact backtracking search.
pub fn check_isotypic(report: &SpectrumReport, table: &DecompositionTable) -> Result<IsotypicAssignment> {
    if report.n != table.n || report.sites != table.sites {
        return Err(Error::InvalidInput(format!(
            "spectrum is for (n, N) = ({}, {}) but the table is for ({}, {})",
            report.n, report.sites, table.n, table.sites
        )));
    }
    let dims: Vec<u128> = table.rows.iter().map(|r| r.p_k).collect();
    let mut remaining: Vec<u128> = table.rows.iter().map(|r| r.nu_k).collect();
    let mults: Vec<u128> = report.clusters.iter().map(|c| c.multiplicity as u128).collect();
    let mut chosen: Vec<Vec<u128>> = Vec::with_capacity(mults.len());
    if !assign(&mults, &dims, &mut remaining, &mut chosen) {
        let listing: Vec<String> = report
            .clusters
            .iter()
            .map(|c| format!("{:.6}{:+.6}i x{}", c.value.re, c.value.im, c.multiplicity))
            .collect();
        let rows: Vec<String> = table.rows.iter().map(|r| format!("k={} p={} nu={}", r.k, r.p_k, r.nu_k)).collect();
        return Err(Error::NoConsistentAssignment(format!(
            "clusters [{}] against table [{}]",
            listing.join(", "),
            rows.join(", ")
        )));
    }
    let clusters = report
        .clusters
        .iter()
        .zip(&chosen)
        .map(|(c, a)| ClusterAssignment {
            value: c.value,
            multiplicity: c.multiplicity,
            terms: table.rows.iter().zip(a).filter(|(_, &x)| x > 0).map(|(r, &x)| (r.k, x)).collect(),
        })
        .collect();
    let totals = table.rows.iter().enumerate().map(|(i, r)| (r.k, chosen.iter().map(|a| a[i]).sum(), r.nu_k)).collect();
    Ok(IsotypicAssignment { clusters, totals })
}

fn assign(mults: &[u128], dims: &[u128], remaining: &mut [u128], chosen: &mut Vec<Vec<u128>>) -> bool {
    let Some((&m, rest)) = mults.split_first() else {
        return remaining.iter().all(|&r| r == 0);
    };
    let mut counts = vec![0u128; dims.len()];
    split(m, 0, dims, remaining, &mut counts, &mut |remaining, counts| {
        chosen.push(counts.to_vec());
        if assign(rest, dims, remaining, chosen) {
            return true;
        }
        chosen.pop();
        false
    })
}

/// Enumerates `counts` with `Σ counts_i dims_i = m` and `counts_i <= remaining_i`,
/// consuming `remaining` while `found` is evaluated.
fn split(
    m: u128,
    i: usize,
    dims: &[u128],
    remaining: &mut [u128],
    counts: &mut [u128],
    found: &mut dyn FnMut(&mut [u128], &[u128]) -> bool,
) -> bool {
    if i == dims.len() {
        return m == 0 && found(remaining, counts);
    }
    let max = (m / dims[i]).min(remaining[i]);
    for c in (0..=max).rev() {
        counts[i] = c;
        remaining[i] -= c;
        let hit = split(m - c * dims[i], i + 1, dims, remaining, counts, found);
        remaining[i] += c;
        if hit {
            return true;
        }
    }
    counts[i] = 0;
    false
}
