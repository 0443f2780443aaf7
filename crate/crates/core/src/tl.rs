//! The Temperley–Lieb generator `X = |b><b^{-1}|` and its embeddings in an
//! open chain of `N` sites.

use crate::bform::{BForm, EPS};
use crate::chainop::ChainOp;
use crate::error::{Error, Result};
use crate::linalg::{max_abs, CMat};
use crate::report::ResidualReport;
use crate::scalar::C64;
use crate::sparse::CsrMatrix;

/// A dense operator on `C^n ⊗ C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalOp {
    pub n: usize,
    pub mat: CMat,
    pub label: String,
}

impl LocalOp {
    pub fn new(n: usize, mat: CMat, label: impl Into<String>) -> Self {
        assert_eq!(mat.nrows(), n * n);
        assert_eq!(mat.ncols(), n * n);
        Self { n, mat, label: label.into() }
    }
}

/// `X_{(c,d),(x,y)} = b_{cd} (b^{-1})_{xy}`.
pub fn local_x(f: &BForm) -> LocalOp {
    let n = f.n();
    let (b, bi) = (f.b(), f.b_inv());
    let mat = CMat::from_fn(n * n, n * n, |r, c| b[(r / n, r % n)] * bi[(c / n, c % n)]);
    LocalOp::new(n, mat, "X")
}

/// `I^{⊗(j-1)} ⊗ op ⊗ I^{⊗(N-j-1)}`, with `j` 1-based.
pub fn embed(op: &LocalOp, j: usize, sites: usize) -> Result<ChainOp> {
    if j == 0 || j >= sites {
        return Err(Error::InvalidInput(format!("site {j} is outside 1..={}", sites.saturating_sub(1))));
    }
    ChainOp::embedded(&op.mat, op.n, j - 1, 2, sites, &op.label)
}

/// Residuals of the three defining relation families, each the maximum over
/// all admissible sites and relative to the operand magnitudes.
pub fn check_tl_relations(f: &BForm, sites: usize) -> Result<ResidualReport> {
    check_tl_relations_with(f, sites, EPS)
}

pub fn check_tl_relations_with(f: &BForm, sites: usize, threshold: f64) -> Result<ResidualReport> {
    if sites < 3 {
        return Err(Error::InvalidInput("TL relations need at least 3 sites".into()));
    }
    let x = local_x(f);
    let gens: Vec<CsrMatrix> =
        (1..sites).map(|j| embed(&x, j, sites).map(|op| op.to_sparse())).collect::<Result<_>>()?;
    let dim = gens[0].dim();
    let one = C64::new(1.0, 0.0);

    let mut quadratic = 0.0_f64;
    for xj in &gens {
        let sq = xj.matmul(xj);
        let tx = xj.scale(f.tau());
        let scale = sq.max_abs().max(tx.max_abs()).max(1.0);
        quadratic = quadratic.max(sq.sub(&tx).max_abs() / scale);
    }

    let mut adjacent = 0.0_f64;
    for j in 0..gens.len() {
        for k in [j.wrapping_sub(1), j + 1] {
            if k >= gens.len() {
                continue;
            }
            let xjk = gens[j].matmul(&gens[k]).matmul(&gens[j]);
            let scale = xjk.max_abs().max(gens[j].max_abs()).max(1.0);
            let diff = CsrMatrix::linear_combination(dim, &[(one, &xjk), (-one, &gens[j])]);
            adjacent = adjacent.max(diff.max_abs() / scale);
        }
    }

    let mut distant = 0.0_f64;
    for j in 0..gens.len() {
        for k in j + 2..gens.len() {
            let ab = gens[j].matmul(&gens[k]);
            let ba = gens[k].matmul(&gens[j]);
            let scale = ab.max_abs().max(ba.max_abs()).max(1.0);
            distant = distant.max(ab.sub(&ba).max_abs() / scale);
        }
    }

    let mut report = ResidualReport::new();
    report.push("tl.quadratic", quadratic, threshold);
    report.push("tl.adjacent_cubic", adjacent, threshold);
    report.push("tl.distant_commute", distant, threshold);
    Ok(report)
}

/// `X^2 - tau X` on the local space.
pub fn quadratic_residual(f: &BForm) -> f64 {
    let x = local_x(f).mat;
    max_abs(&(&x * &x - &x * f.tau()))
}
