//! The L-operator `L = PŘ` viewed as an `n x n` matrix in the auxiliary
//! space whose entries are operators on the quantum space, its iterated
//! coproduct `T^(N) = L_N ... L_2 L_1`, the Casimir contraction, and the
//! commutation checks against the chain's braid generators.
//!
//! Conventions: chain site 1 is the leftmost Kronecker factor, and in the
//! auxiliary product the factor for site `N` is leftmost, so
//! `T^(2)_{ab} = sum_k L_{kb} ⊗ L_{ak}`.

use crate::bform::{BForm, Family, EPS};
use crate::chain::hamiltonian;
use crate::chainop::{check_budget, ChainOp, SPARSE_BUDGET};
use crate::error::{Error, Result};
use crate::linalg::{
    flip, line_residual, max_abs, place_two_site, product_basis, rel_diff, span_rank, span_residual, vectorize, CMat,
    CVec, RANK_TOL,
};
use crate::report::ResidualReport;
use crate::rmatrix::{constant_r, projectors, IDENTITY_TOL};
use crate::scalar::{real, C64};
use crate::sparse::CsrMatrix;
use crate::tl::embed;

/// An `n_a x n_a` grid of chain operators, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxOperatorMatrix {
    pub n_a: usize,
    pub n: usize,
    pub sites: usize,
    entries: Vec<ChainOp>,
}

impl AuxOperatorMatrix {
    fn new(n_a: usize, n: usize, sites: usize, entries: Vec<ChainOp>) -> Self {
        assert_eq!(entries.len(), n_a * n_a);
        Self { n_a, n, sites, entries }
    }

    /// 0-based entry `(a, b)`.
    pub fn entry(&self, a: usize, b: usize) -> &ChainOp {
        &self.entries[a * self.n_a + b]
    }

    pub fn sparse(&self, a: usize, b: usize) -> &CsrMatrix {
        self.entry(a, b).as_sparse().expect("aux entries are stored sparse")
    }

    pub fn dim(&self) -> usize {
        self.entries[0].dim()
    }

    /// The whole operator on `C^{n_a} ⊗ (C^n)^{⊗N}`, auxiliary factor first.
    pub fn to_dense(&self) -> CMat {
        let d = self.dim();
        let mut m = CMat::zeros(self.n_a * d, self.n_a * d);
        for a in 0..self.n_a {
            for b in 0..self.n_a {
                for (r, c, v) in self.sparse(a, b).iter() {
                    m[(a * d + r, b * d + c)] = v;
                }
            }
        }
        m
    }
}

/// `P Ř` as a dense `n^2 x n^2` matrix, auxiliary space first.
pub fn l_matrix(f: &BForm) -> CMat {
    flip(f.n()) * constant_r(f).mat
}

fn block(m: &CMat, n: usize, a: usize, b: usize) -> CMat {
    m.view((a * n, b * n), (n, n)).into_owned()
}

pub fn l_operator(f: &BForm) -> AuxOperatorMatrix {
    let n = f.n();
    let l = l_matrix(f);
    let entries = (0..n * n)
        .map(|i| {
            let (a, b) = (i / n, i % n);
            ChainOp::from_sparse(n, 1, CsrMatrix::from_dense(&block(&l, n, a, b)), format!("L[{a}{b}]"))
        })
        .collect();
    AuxOperatorMatrix::new(n, n, 1, entries)
}

/// Named blocks of the 3x3 L-operator:
///
/// ```text
/// A1 B1 B3
/// C1 A2 B2
/// C3 C2 A3
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    pub a: [CMat; 3],
    pub b: [CMat; 3],
    pub c: [CMat; 3],
}

impl GeneratorSet {
    /// Grid position (0-based) of a generator name such as `"B3"`.
    pub fn position(name: &str) -> Option<(usize, usize)> {
        Some(match name {
            "A1" => (0, 0),
            "A2" => (1, 1),
            "A3" => (2, 2),
            "B1" => (0, 1),
            "B2" => (1, 2),
            "B3" => (0, 2),
            "C1" => (1, 0),
            "C2" => (2, 1),
            "C3" => (2, 0),
            _ => return None,
        })
    }

    pub fn get(&self, name: &str) -> Option<&CMat> {
        let (kind, idx) = name.split_at(1);
        let idx: usize = idx.parse().ok().filter(|i| (1..=3).contains(i))?;
        match kind {
            "A" => Some(&self.a[idx - 1]),
            "B" => Some(&self.b[idx - 1]),
            "C" => Some(&self.c[idx - 1]),
            _ => None,
        }
    }

    pub fn reassemble(&self) -> CMat {
        let mut m = CMat::zeros(9, 9);
        for kind in ["A", "B", "C"] {
            for i in 1..=3 {
                let name = format!("{kind}{i}");
                let (r, c) = Self::position(&name).unwrap();
                m.view_mut((r * 3, c * 3), (3, 3)).copy_from(self.get(&name).unwrap());
            }
        }
        m
    }
}

pub fn generator_blocks(f: &BForm) -> Result<GeneratorSet> {
    if f.n() != 3 {
        return Err(Error::UnsupportedDimension(format!("named generators need n = 3, got {}", f.n())));
    }
    let l = l_matrix(f);
    let at = |name: &str| {
        let (r, c) = GeneratorSet::position(name).unwrap();
        block(&l, 3, r, c)
    };
    Ok(GeneratorSet {
        a: [at("A1"), at("A2"), at("A3")],
        b: [at("B1"), at("B2"), at("B3")],
        c: [at("C1"), at("C2"), at("C3")],
    })
}

/// Multiplies by a new `L` on a site appended at the right:
/// `(L_{N+1} T)_{ab} = sum_k T_{kb} ⊗ L_{ak}`.
fn append_site(t: &AuxOperatorMatrix, l: &AuxOperatorMatrix) -> AuxOperatorMatrix {
    let n_a = t.n_a;
    let sites = t.sites + l.sites;
    let entries = (0..n_a * n_a)
        .map(|i| {
            let (a, b) = (i / n_a, i % n_a);
            let dim = t.dim() * l.dim();
            let terms: Vec<CsrMatrix> = (0..n_a).map(|k| t.sparse(k, b).kron(l.sparse(a, k))).collect();
            let refs: Vec<(C64, &CsrMatrix)> = terms.iter().map(|m| (real(1.0), m)).collect();
            ChainOp::from_sparse(t.n, sites, CsrMatrix::linear_combination(dim, &refs), format!("T[{a}{b}]"))
        })
        .collect();
    AuxOperatorMatrix::new(n_a, t.n, sites, entries)
}

/// Multiplies by a new `L` on a site prepended at the left:
/// `(T L_0)_{ab} = sum_k L_{kb} ⊗ T_{ak}`.
fn prepend_site(l: &AuxOperatorMatrix, t: &AuxOperatorMatrix) -> AuxOperatorMatrix {
    let n_a = t.n_a;
    let sites = t.sites + l.sites;
    let entries = (0..n_a * n_a)
        .map(|i| {
            let (a, b) = (i / n_a, i % n_a);
            let dim = t.dim() * l.dim();
            let terms: Vec<CsrMatrix> = (0..n_a).map(|k| l.sparse(k, b).kron(t.sparse(a, k))).collect();
            let refs: Vec<(C64, &CsrMatrix)> = terms.iter().map(|m| (real(1.0), m)).collect();
            ChainOp::from_sparse(t.n, sites, CsrMatrix::linear_combination(dim, &refs), format!("T[{a}{b}]"))
        })
        .collect();
    AuxOperatorMatrix::new(n_a, t.n, sites, entries)
}

/// `T^(N) = L_N ... L_1`.
pub fn coproduct_t(f: &BForm, sites: usize) -> Result<AuxOperatorMatrix> {
    if sites == 0 {
        return Err(Error::InvalidInput("coproduct needs at least one site".into()));
    }
    check_budget(f.n(), sites, SPARSE_BUDGET)?;
    let l = l_operator(f);
    let mut t = l.clone();
    for _ in 1..sites {
        t = append_site(&t, &l);
    }
    Ok(t)
}

/// `T^(3)` built as `L_3 T^(2)_{12}` against `T^(2)_{23} L_1`.
pub fn coassociativity_residual(f: &BForm) -> f64 {
    let l = l_operator(f);
    let t2 = append_site(&l, &l);
    let right = append_site(&t2, &l);
    let left = prepend_site(&l, &t2);
    let mut worst = 0.0_f64;
    for a in 0..l.n_a {
        for b in 0..l.n_a {
            let (x, y) = (right.sparse(a, b), left.sparse(a, b));
            let scale = x.max_abs().max(y.max_abs()).max(1.0);
            worst = worst.max(x.sub(y).max_abs() / scale);
        }
    }
    worst
}

fn commutator_residual(x: &CsrMatrix, y: &CsrMatrix) -> f64 {
    let (xy, yx) = (x.matmul(y), y.matmul(x));
    let scale = xy.max_abs().max(yx.max_abs()).max(1.0);
    xy.sub(&yx).max_abs() / scale
}

/// `[Ř_{k,k+1}, T^(N)_{ab}]` for every `k` and `(a, b)`, plus `[H, T^(N)_{ab}]`.
pub fn check_centralizer(f: &BForm, sites: usize) -> Result<ResidualReport> {
    if sites < 2 {
        return Err(Error::InvalidInput("centralizer check needs at least 2 sites".into()));
    }
    let t = coproduct_t(f, sites)?;
    let r = constant_r(f);
    let mut report = ResidualReport::new();
    for k in 1..sites {
        let rk = embed(&r, k, sites)?.to_sparse();
        let worst = (0..t.n_a * t.n_a)
            .map(|i| commutator_residual(&rk, t.sparse(i / t.n_a, i % t.n_a)))
            .fold(0.0_f64, f64::max);
        report.push(format!("centralizer.R[{k}]"), worst, IDENTITY_TOL);
    }
    let h = hamiltonian(f, sites)?.try_to_sparse()?;
    let worst =
        (0..t.n_a * t.n_a).map(|i| commutator_residual(&h, t.sparse(i / t.n_a, i % t.n_a))).fold(0.0_f64, f64::max);
    report.push("centralizer.H", worst, IDENTITY_TOL);
    Ok(report)
}

/// `Ř_{a1 a2} L_{a1 q} L_{a2 q} = L_{a1 q} L_{a2 q} Ř_{a1 a2}` on
/// `C^n ⊗ C^n ⊗ C^n` (two auxiliary copies, one quantum space).
pub fn check_rll(f: &BForm) -> ResidualReport {
    let n = f.n();
    let l = l_matrix(f);
    let r12 = place_two_site(&constant_r(f).mat, n, 0, 1, 3);
    let l1 = place_two_site(&l, n, 0, 2, 3);
    let l2 = place_two_site(&l, n, 1, 2, 3);
    let mut report = ResidualReport::new();
    report.push("rll", rel_diff(&(&r12 * &l1 * &l2), &(&l1 * &l2 * &r12)), IDENTITY_TOL);
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CasimirOrdering {
    /// `(b^{-1})_{aj} L_{jk} b_{kl} L_{bl}` with `L_{jk}` acting first on the left.
    Forward,
    /// Same contraction with the two operator factors reversed.
    Reversed,
}

#[derive(Debug, Clone)]
pub struct CasimirResult {
    pub c2: C64,
    pub ordering: CasimirOrdering,
    pub forward_residual: f64,
    pub reversed_residual: f64,
    /// `C_{ab}` for the chosen ordering, row-major.
    pub entries: Vec<CsrMatrix>,
    pub report: ResidualReport,
}

/// `C_{ab} = sum_{jkl} (b^{-1})_{aj} b_{kl} T_{jk} T_{bl}` (or the reversed product).
pub fn casimir_contraction(f: &BForm, t: &AuxOperatorMatrix, reversed: bool) -> Vec<CsrMatrix> {
    let n = t.n_a;
    let dim = t.dim();
    let (b, bi) = (f.b(), f.b_inv());
    let mut out = Vec::with_capacity(n * n);
    for a in 0..n {
        for bb in 0..n {
            let mut terms: Vec<(C64, CsrMatrix)> = Vec::new();
            for j in 0..n {
                if bi[(a, j)] == real(0.0) {
                    continue;
                }
                for k in 0..n {
                    for l in 0..n {
                        let coef = bi[(a, j)] * b[(k, l)];
                        if coef == real(0.0) {
                            continue;
                        }
                        let prod = if reversed {
                            t.sparse(bb, l).matmul(t.sparse(j, k))
                        } else {
                            t.sparse(j, k).matmul(t.sparse(bb, l))
                        };
                        terms.push((coef, prod));
                    }
                }
            }
            let refs: Vec<(C64, &CsrMatrix)> = terms.iter().map(|(c, m)| (*c, m)).collect();
            out.push(CsrMatrix::linear_combination(dim, &refs));
        }
    }
    out
}

/// Best scalar `c` with `C_{ab} ≈ c δ_{ab} I`, and the relative misfit.
fn scalar_fit(entries: &[CsrMatrix], n_a: usize) -> (C64, f64) {
    let dim = entries[0].dim();
    let c = entries[0].trace() / dim as f64;
    let id = CsrMatrix::identity(dim);
    let mut worst = 0.0_f64;
    for a in 0..n_a {
        for b in 0..n_a {
            let e = &entries[a * n_a + b];
            let diff = if a == b { e.sub(&id.scale(c)) } else { e.clone() };
            let scale = e.max_abs().max(c.norm()).max(1.0);
            worst = worst.max(diff.max_abs() / scale);
        }
    }
    (c, worst)
}

/// Casimir contraction on any coproduct power.
pub fn casimir_on(f: &BForm, t: &AuxOperatorMatrix) -> Result<CasimirResult> {
    let forward = casimir_contraction(f, t, false);
    let reversed = casimir_contraction(f, t, true);
    let (c_forward, r_forward) = scalar_fit(&forward, t.n_a);
    let (c_reversed, r_reversed) = scalar_fit(&reversed, t.n_a);
    let (c2, ordering, entries, residual) = if r_forward <= IDENTITY_TOL {
        (c_forward, CasimirOrdering::Forward, forward, r_forward)
    } else if r_reversed <= IDENTITY_TOL {
        (c_reversed, CasimirOrdering::Reversed, reversed, r_reversed)
    } else {
        return Err(Error::ConventionMismatch { forward: r_forward, reversed: r_reversed });
    };
    let mut report = ResidualReport::new();
    report.push("casimir.scalar", residual, IDENTITY_TOL);
    Ok(CasimirResult { c2, ordering, forward_residual: r_forward, reversed_residual: r_reversed, entries, report })
}

/// Casimir of the fundamental L-operator. For the antidiagonal family the
/// value is also checked against `q`.
pub fn casimir(f: &BForm) -> Result<CasimirResult> {
    let mut res = casimir_on(f, &l_operator(f))?;
    if f.family() == Some(Family::Kls) {
        let rel = (res.c2 - f.q()).norm() / f.q().norm();
        res.report.push("casimir.value_q", rel, IDENTITY_TOL);
    }
    Ok(res)
}

/// `p (p^{-1} A3 A1 + C2 B1 + p C3 B3)` for the antidiagonal family.
pub fn casimir_explicit_kls(f: &BForm) -> Result<CMat> {
    let p = f.p().filter(|_| f.n() == 3).ok_or_else(|| {
        Error::UnsupportedDimension("explicit Casimir combination is defined for the kls family".into())
    })?;
    let g = generator_blocks(f)?;
    let [a1, _, a3] = &g.a;
    let [b1, _, b3] = &g.b;
    let [_, c2, c3] = &g.c;
    Ok((a3 * a1 * p.inv() + c2 * b1 + c3 * b3 * p) * p)
}

/// `Δ c2 = c2 ⊗ c2`: the contraction on `T^(2)` against `c2^2 I`.
pub fn casimir_group_like(f: &BForm) -> Result<(C64, f64)> {
    let c2 = casimir(f)?.c2;
    let t2 = coproduct_t(f, 2)?;
    let res = casimir_on(f, &t2)?;
    let target = c2 * c2;
    Ok((res.c2, (res.c2 - target).norm() / target.norm().max(1.0)))
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct HighestWeightEvidence {
    pub orbit_rank: usize,
    pub orbit_size: usize,
    /// Distance of `Δ(B3) θ⊗θ` from `span{Δ(B_i)^2 θ⊗θ}`.
    pub b3_in_span_residual: f64,
    /// Distance of `Δ(B_i)^4 θ⊗θ` from the line through `e3 ⊗ e3`.
    pub fourth_power_residual: f64,
    /// Max over `(a, b)` of the distance of `T_ab |b>` from the line `|b>`,
    /// relative to `|T_ab| |b|`.
    pub invariant_line_residual: f64,
    /// `|Ř|b> + q^{-1}|b>|`, relative.
    pub r_eigen_residual: f64,
    /// `|P_+ T_ab P_-|` over all `(a, b)`, relative.
    pub projector_invariance_residual: f64,
}

impl HighestWeightEvidence {
    pub fn report(&self) -> ResidualReport {
        let mut r = ResidualReport::new();
        r.push("highest_weight.orbit_rank", (self.orbit_rank as f64 - 8.0).abs(), 0.0);
        r.push("highest_weight.b3_in_span", self.b3_in_span_residual, IDENTITY_TOL);
        r.push("highest_weight.fourth_power", self.fourth_power_residual, IDENTITY_TOL);
        r.push("highest_weight.invariant_line", self.invariant_line_residual, IDENTITY_TOL);
        r.push("highest_weight.r_eigenvalue", self.r_eigen_residual, EPS);
        r.push("highest_weight.projector_invariance", self.projector_invariance_residual, EPS);
        r
    }
}

fn apply(m: &CsrMatrix, v: &CVec) -> CVec {
    CVec::from_vec(m.apply(v.as_slice()))
}

/// Lowering-operator orbit of `θ⊗θ`, `θ = e1`, for the antidiagonal family at `N = 2`.
pub fn highest_weight_scan(f: &BForm) -> Result<HighestWeightEvidence> {
    if f.n() != 3 || f.family() != Some(Family::Kls) {
        return Err(Error::UnsupportedDimension("highest-weight scan is defined for the kls family (n = 3)".into()));
    }
    let t = coproduct_t(f, 2)?;
    let theta = product_basis(3, &[0, 0]);
    let lowering = [t.sparse(0, 1), t.sparse(1, 2)];

    let mut orbit = vec![theta.clone()];
    let mut squares = Vec::new();
    let mut fourth_power_residual = 0.0_f64;
    let bottom = product_basis(3, &[2, 2]);
    for op in lowering {
        let mut v = theta.clone();
        for k in 1..=4 {
            v = apply(op, &v);
            if k == 2 {
                squares.push(v.clone());
            }
            if k == 4 {
                let res = if v.norm() == 0.0 { 1.0 } else { line_residual(&v, &bottom) };
                fourth_power_residual = fourth_power_residual.max(res);
            }
            orbit.push(v.clone());
        }
    }
    let orbit_rank = span_rank(&orbit, RANK_TOL);
    let b3 = apply(t.sparse(0, 2), &theta);
    let b3_in_span_residual = span_residual(&b3, &squares);

    let bvec = vectorize(f.b());
    let mut invariant_line_residual = 0.0_f64;
    for a in 0..3 {
        for b in 0..3 {
            // Off-diagonal entries annihilate |b> up to rounding, so scale by |T_ab| |b|.
            let tab = t.sparse(a, b);
            let v = apply(tab, &bvec);
            let scale = tab.max_abs().max(1.0) * bvec.norm();
            invariant_line_residual = invariant_line_residual.max(line_residual(&v, &bvec) * v.norm() / scale);
        }
    }
    let rb = constant_r(f).mat * &bvec;
    let r_eigen_residual = (rb + &bvec * f.q().inv()).camax() / bvec.camax();

    let (plus, minus) = projectors(f)?;
    let mut projector_invariance_residual = 0.0_f64;
    for a in 0..3 {
        for b in 0..3 {
            let tab = t.sparse(a, b).to_dense();
            let leak = &plus.mat * &tab * &minus.mat;
            projector_invariance_residual = projector_invariance_residual.max(max_abs(&leak) / max_abs(&tab).max(1.0));
        }
    }

    Ok(HighestWeightEvidence {
        orbit_rank,
        orbit_size: orbit.len(),
        b3_in_span_residual,
        fourth_power_residual,
        invariant_line_residual,
        r_eigen_residual,
        projector_invariance_residual,
    })
}

/// Single-site weight `h` summed over the chain.
pub fn global_weight(n: usize, sites: usize) -> Result<CsrMatrix> {
    let h = crate::rmatrix::weight_generator(n);
    let dim = check_budget(n, sites, SPARSE_BUDGET)?;
    let mut acc = CsrMatrix::zeros(dim);
    for s in 0..sites {
        let e = ChainOp::embedded(&h, n, s, 1, sites, "h")?.to_sparse();
        acc = acc.add(&e);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bform::builtin_bform;
    use crate::linalg::{identity, kron};

    fn kls() -> BForm {
        builtin_bform(Family::Kls, real(2.0)).unwrap()
    }

    fn xxz() -> BForm {
        builtin_bform(Family::Xxz, real(3.0)).unwrap()
    }

    #[test]
    fn l_matrix_matches_closed_form_rows() {
        let f = kls();
        let (p, q) = (2.0, f.q().re);
        let l = l_matrix(&f);
        let mut expected = CMat::zeros(9, 9);
        let set = |m: &mut CMat, r: usize, c: usize, v: f64| m[(r - 1, c - 1)] = real(v);
        set(&mut expected, 1, 1, q);
        set(&mut expected, 2, 4, q);
        set(&mut expected, 3, 3, 1.0);
        set(&mut expected, 3, 5, 1.0 / p);
        set(&mut expected, 3, 7, q + 1.0 / (p * p));
        set(&mut expected, 4, 2, q);
        set(&mut expected, 5, 3, p);
        set(&mut expected, 5, 5, q + 1.0);
        set(&mut expected, 5, 7, 1.0 / p);
        set(&mut expected, 6, 8, q);
        set(&mut expected, 7, 3, q + p * p);
        set(&mut expected, 7, 5, p);
        set(&mut expected, 7, 7, 1.0);
        set(&mut expected, 8, 6, q);
        set(&mut expected, 9, 9, q);
        assert!(max_abs(&(l - expected)) < 1e-13);
    }

    #[test]
    fn named_blocks() {
        let f = kls();
        let q = f.q();
        let g = generator_blocks(&f).unwrap();
        let z = real(0.0);
        let b1 = CMat::from_row_slice(3, 3, &[z, z, z, q, z, z, z, real(0.5), z]);
        let b2 = CMat::from_row_slice(3, 3, &[z, z, z, real(0.5), z, z, z, q, z]);
        let a1 = CMat::from_row_slice(3, 3, &[q, z, z, z, z, z, z, z, real(1.0)]);
        assert!(max_abs(&(g.get("B1").unwrap() - b1)) < 1e-14);
        assert!(max_abs(&(g.get("B2").unwrap() - b2)) < 1e-14);
        assert!(max_abs(&(g.get("A1").unwrap() - a1)) < 1e-14);
        assert_eq!(g.reassemble(), l_matrix(&f));
        assert!(g.get("D1").is_none() && g.get("B4").is_none());
        assert!(matches!(generator_blocks(&xxz()), Err(Error::UnsupportedDimension(_))));
    }

    #[test]
    fn l_operator_grid_reassembles() {
        for f in [kls(), xxz()] {
            assert_eq!(l_operator(&f).to_dense(), l_matrix(&f));
        }
    }

    #[test]
    fn coproduct_blocks_match_closed_forms() {
        let f = kls();
        let g = generator_blocks(&f).unwrap();
        let t2 = coproduct_t(&f, 2).unwrap();
        let [a1, a2, a3] = &g.a;
        let [b1, b2, b3] = &g.b;
        let [c1, c2, _] = &g.c;
        let d_b1 = kron(b1, a1) + kron(a2, b1) + kron(c2, b3);
        let d_b2 = kron(b3, c1) + kron(b2, a2) + kron(a3, b2);
        let d_b3 = kron(b3, a1) + kron(b2, b1) + kron(a3, b3);
        assert!(max_abs(&(t2.sparse(0, 1).to_dense() - d_b1)) <= 1e-12);
        assert!(max_abs(&(t2.sparse(1, 2).to_dense() - d_b2)) <= 1e-12);
        assert!(max_abs(&(t2.sparse(0, 2).to_dense() - d_b3)) <= 1e-12);
        let t1 = coproduct_t(&f, 1).unwrap();
        assert_eq!(t1, l_operator(&f));
    }

    #[test]
    fn centralizer_small_cases() {
        assert!(check_centralizer(&kls(), 2).unwrap().all_pass());
        assert!(check_centralizer(&kls(), 3).unwrap().all_pass());
        let r = check_centralizer(&xxz(), 4).unwrap();
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.checks.len(), 4);
    }

    #[test]
    fn rll_and_coassociativity() {
        for f in [kls(), xxz()] {
            assert!(check_rll(&f).all_pass());
            assert!(coassociativity_residual(&f) < 1e-12);
        }
    }

    #[test]
    fn casimir_kls_is_q() {
        let f = kls();
        let c = casimir(&f).unwrap();
        assert_eq!(c.ordering, CasimirOrdering::Forward);
        assert!(c.report.all_pass(), "{:?}", c.report);
        assert!((c.c2 - f.q()).norm() < 1e-8);
        let explicit = casimir_explicit_kls(&f).unwrap();
        assert!(max_abs(&(explicit - identity(3) * c.c2)) < 1e-8);
        let (c22, rel) = casimir_group_like(&f).unwrap();
        assert!(rel < 1e-8, "{c22} vs {}", c.c2 * c.c2);
    }

    #[test]
    fn highest_weight_orbit() {
        let ev = highest_weight_scan(&kls()).unwrap();
        assert_eq!(ev.orbit_rank, 8);
        assert!(ev.report().all_pass(), "{ev:?}");
        assert!(matches!(highest_weight_scan(&xxz()), Err(Error::UnsupportedDimension(_))));
    }

    #[test]
    fn global_weight_commutes_with_braid() {
        let f = kls();
        let w = global_weight(3, 3).unwrap();
        for k in 1..3 {
            let rk = embed(&constant_r(&f), k, 3).unwrap().to_sparse();
            assert!(commutator_residual(&w, &rk) < 1e-12);
        }
    }
}
