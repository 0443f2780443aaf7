//! The invertible matrix `b` that determines the whole construction.
//!
//! From `b` we derive `tau = tr(b^t b^{-1})` and the deformation parameter
//! `q`, one of the two roots of `q^2 + tau q + 1 = 0`. The roots are mutual
//! inverses; we keep the one with `|q| > 1` (or, when both lie on the unit
//! circle, the one with non-negative imaginary part).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{identity, max_abs, singular_values, CMat};
use crate::scalar::{is_finite, real, C64};

/// Global identity tolerance.
pub const EPS: f64 = 1e-10;

/// Largest order checked when rejecting roots of unity on the unit circle.
const MAX_ROOT_OF_UNITY_ORDER: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// 3x3 antidiagonal `(p, 1, 1/p)`.
    Kls,
    /// 2x2 `[[0, 1], [-q, 0]]`, reproducing the XXZ braid matrix.
    Xxz,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kls" => Ok(Family::Kls),
            "xxz" => Ok(Family::Xxz),
            other => Err(Error::InvalidInput(format!("unknown family `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BFormOptions {
    pub tol: f64,
    /// Accept `|q| = 1` as long as `q` is not a low-order root of unity.
    pub allow_unit_circle: bool,
}

impl Default for BFormOptions {
    fn default() -> Self {
        Self { tol: EPS, allow_unit_circle: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BForm {
    n: usize,
    b: CMat,
    b_inv: CMat,
    tau: C64,
    q: C64,
    p: Option<C64>,
}

impl BForm {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> &CMat {
        &self.b
    }

    pub fn b_inv(&self) -> &CMat {
        &self.b_inv
    }

    /// `tr(b^t b^{-1})`, equal to `-(q + 1/q)`.
    pub fn tau(&self) -> C64 {
        self.tau
    }

    pub fn q(&self) -> C64 {
        self.q
    }

    /// The parameter of the antidiagonal family, when built from it.
    pub fn p(&self) -> Option<C64> {
        self.p
    }

    pub fn family(&self) -> Option<Family> {
        match (self.n, self.p) {
            (3, Some(_)) => Some(Family::Kls),
            _ => None,
        }
    }

    /// Builds a new form from `M b M^t`. `tau` is invariant.
    pub fn gauge_transform(&self, m: &CMat) -> Result<BForm> {
        if m.nrows() != self.n || m.ncols() != self.n {
            return Err(Error::InvalidInput(format!(
                "gauge matrix is {}x{}, expected {}x{}",
                m.nrows(),
                m.ncols(),
                self.n,
                self.n
            )));
        }
        check_invertible(m, EPS)?;
        make_bform(m * &self.b * m.transpose())
    }
}

pub fn make_bform(b: CMat) -> Result<BForm> {
    make_bform_with(b, &BFormOptions::default())
}

pub fn make_bform_with(b: CMat, opts: &BFormOptions) -> Result<BForm> {
    let n = b.nrows();
    if b.ncols() != n {
        return Err(Error::InvalidInput(format!("b must be square, got {}x{}", n, b.ncols())));
    }
    if n < 2 {
        return Err(Error::InvalidInput("b must be at least 2x2".into()));
    }
    if !b.iter().all(|z| is_finite(*z)) {
        return Err(Error::InvalidInput("b has non-finite entries".into()));
    }
    check_invertible(&b, opts.tol)?;
    let b_inv = b.clone().try_inverse().ok_or(Error::SingularMatrix { ratio: 0.0 })?;
    let defect = max_abs(&(&b * &b_inv - identity(n)));
    if defect > opts.tol {
        return Err(Error::SingularMatrix { ratio: defect });
    }
    let tau = trace_bt_binv(&b, &b_inv);
    let q = select_q(tau, opts)?;
    Ok(BForm { n, b, b_inv, tau, q, p: None })
}

/// Built-in families. For `kls` the parameter is `p`, for `xxz` it is `q`.
pub fn builtin_bform(family: Family, param: C64) -> Result<BForm> {
    builtin_bform_with(family, param, &BFormOptions::default())
}

pub fn builtin_bform_with(family: Family, param: C64, opts: &BFormOptions) -> Result<BForm> {
    if !is_finite(param) || param.norm() == 0.0 {
        return Err(Error::DegenerateParameter(format!("parameter must be finite and non-zero, got {param}")));
    }
    let zero = real(0.0);
    match family {
        Family::Kls => {
            let p = param;
            let mut b = CMat::zeros(3, 3);
            b[(0, 2)] = p;
            b[(1, 1)] = real(1.0);
            b[(2, 0)] = p.inv();
            let tau = p * p + real(1.0) + (p * p).inv();
            let q = select_q(tau, opts)?;
            Ok(BForm { n: 3, b_inv: b.clone(), b, tau, q, p: Some(p) })
        }
        Family::Xxz => {
            let q = param;
            let b = CMat::from_row_slice(2, 2, &[zero, real(1.0), -q, zero]);
            let mut f = make_bform_with(b, opts)?;
            // Keep the caller's root rather than the |q| > 1 rule.
            f.q = q;
            Ok(f)
        }
    }
}

fn trace_bt_binv(b: &CMat, b_inv: &CMat) -> C64 {
    b.iter().zip(b_inv.iter()).map(|(x, y)| x * y).sum()
}

fn check_invertible(m: &CMat, tol: f64) -> Result<()> {
    let s = singular_values(m);
    let (top, bottom) = (s[0], *s.last().unwrap());
    let ratio = if top > 0.0 { bottom / top } else { 0.0 };
    if ratio > tol {
        Ok(())
    } else {
        Err(Error::SingularMatrix { ratio })
    }
}

/// Root of `q^2 + tau q + 1 = 0` chosen by the `|q| > 1`, then `Im q >= 0` rule.
pub fn select_q(tau: C64, opts: &BFormOptions) -> Result<C64> {
    if (tau - real(2.0)).norm() <= opts.tol || (tau + real(2.0)).norm() <= opts.tol {
        return Err(Error::DegenerateParameter(format!("tau = {tau} forces q = -+1")));
    }
    let disc = (tau * tau - real(4.0)).sqrt();
    let r1 = newton_polish((-tau + disc) / 2.0, tau);
    let r2 = newton_polish((-tau - disc) / 2.0, tau);
    let (m1, m2) = (r1.norm(), r2.norm());
    let on_circle = (m1 - 1.0).abs() <= opts.tol.sqrt() && (m2 - 1.0).abs() <= opts.tol.sqrt();
    let q = if on_circle {
        if r1.im >= 0.0 {
            r1
        } else {
            r2
        }
    } else if m1 > m2 {
        r1
    } else {
        r2
    };
    if on_circle {
        if !opts.allow_unit_circle {
            return Err(Error::DegenerateParameter(format!(
                "q = {q} lies on the unit circle (tau = {tau}); enable allow_unit_circle to accept it"
            )));
        }
        if let Some(m) = root_of_unity_order(q, opts.tol.sqrt()) {
            return Err(Error::DegenerateParameter(format!("q = {q} is a root of unity of order {m}")));
        }
    }
    Ok(q)
}

fn newton_polish(q: C64, tau: C64) -> C64 {
    let f = q * q + tau * q + real(1.0);
    let df = q * 2.0 + tau;
    if df.norm() == 0.0 {
        q
    } else {
        q - f / df
    }
}

fn root_of_unity_order(q: C64, tol: f64) -> Option<u32> {
    let mut z = q;
    for m in 1..=MAX_ROOT_OF_UNITY_ORDER {
        if (z - real(1.0)).norm() <= tol {
            return Some(m);
        }
        z *= q;
    }
    None
}
