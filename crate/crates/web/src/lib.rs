//! Browser bindings. Each export returns a JSON string; on failure the JSON is
//! `{"error": kind, "message": text}`.

use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::wasm_bindgen;

use tlsym_core::bform::{builtin_bform, Family};
use tlsym_core::chain::chain_spectrum;
use tlsym_core::rep_ring::decomposition_table;
use tlsym_core::rmatrix::spectral_r;
use tlsym_core::{Error, C64};

/// Largest chain length the page may request (`3^6 = 729`).
pub const MAX_SITES: usize = 6;
/// Largest number of points in a spectrum scan.
pub const MAX_STEPS: usize = 200;

fn to_json<T: Serialize>(r: Result<T, Error>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).expect("value serialises"),
        Err(e) => json!({ "error": e.kind(), "message": e.to_string() }).to_string(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanPoint {
    pub p: f64,
    pub tau: f64,
    /// `(value, multiplicity)`, real parts only: the spectrum is real for real `p`.
    pub levels: Vec<(f64, usize)>,
}

/// Spectrum of the kls chain for `steps` real values of `p` in `[p_min, p_max]`.
pub fn scan(p_min: f64, p_max: f64, steps: usize, sites: usize) -> Result<Vec<ScanPoint>, Error> {
    if !(2..=MAX_SITES).contains(&sites) {
        return Err(Error::InvalidInput(format!("N must be in 2..={MAX_SITES}")));
    }
    if !(2..=MAX_STEPS).contains(&steps) || !(p_min > 0.0 && p_max > p_min && p_max.is_finite()) {
        return Err(Error::InvalidInput("need 0 < p_min < p_max and 2 <= steps <= 200".into()));
    }
    let mut out = Vec::with_capacity(steps);
    for i in 0..steps {
        let p = p_min + (p_max - p_min) * i as f64 / (steps - 1) as f64;
        // Isolated degenerate values of p are skipped rather than aborting the scan.
        let Ok(f) = builtin_bform(Family::Kls, C64::new(p, 0.0)) else { continue };
        let spec = chain_spectrum(&f, sites, None)?;
        let levels = spec.clusters.iter().map(|c| (c.value.re, c.multiplicity)).collect();
        out.push(ScanPoint { p, tau: f.tau().re, levels });
    }
    Ok(out)
}

pub fn decomposition_json(n: usize, sites: usize) -> String {
    if n > 12 || sites > 40 {
        return to_json::<()>(Err(Error::InvalidInput("n <= 12 and N <= 40 in the demo".into())));
    }
    to_json(decomposition_table(n, sites))
}

#[derive(Debug, Clone, Serialize)]
pub struct RMatrixView {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
    pub q: [f64; 2],
    pub tau: [f64; 2],
}

pub fn r_matrix(p: f64, u: C64) -> Result<RMatrixView, Error> {
    let f = builtin_bform(Family::Kls, C64::new(p, 0.0))?;
    let m = spectral_r(&f, u)?.mat.mat;
    let dim = m.nrows();
    let part = |g: fn(&C64) -> f64| (0..dim).map(|r| (0..dim).map(|c| g(&m[(r, c)])).collect()).collect();
    Ok(RMatrixView {
        dim,
        re: part(|z| z.re),
        im: part(|z| z.im),
        q: [f.q().re, f.q().im],
        tau: [f.tau().re, f.tau().im],
    })
}

#[wasm_bindgen]
pub fn spectrum_scan(p_min: f64, p_max: f64, steps: usize, sites: usize) -> String {
    to_json(scan(p_min, p_max, steps, sites))
}

#[wasm_bindgen]
pub fn decomposition(n: usize, sites: usize) -> String {
    decomposition_json(n, sites)
}

#[wasm_bindgen]
pub fn spectral_r_matrix(p: f64, u_re: f64, u_im: f64) -> String {
    to_json(r_matrix(p, C64::new(u_re, u_im)))
}
