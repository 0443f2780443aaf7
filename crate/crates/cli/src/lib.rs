//! Command-line front end: argument parsing, command dispatch and report output.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use tlsym_core::bform::{builtin_bform_with, make_bform_with, BForm, BFormOptions, Family, EPS};
use tlsym_core::chain::{chain_spectrum, check_isotypic};
use tlsym_core::io::{parse_b_matrix, DenseMatrixJson};
use tlsym_core::qalg::{casimir, check_centralizer, check_rll};
use tlsym_core::rep_ring::{
    decomposition_table, dims_p, poincare_series, symmetrizer, symmetrizer_commutation_residual,
};
use tlsym_core::rmatrix::{
    characteristic_residual, check_braid, check_spectral_ybe, check_tl_cubic, check_weight_symmetry, q_antisymmetrizer,
    spectral_r, unitarity_residual, IDENTITY_TOL,
};
use tlsym_core::sample::spectral_pairs;
use tlsym_core::tl::check_tl_relations_with;
use tlsym_core::{Error, ResidualReport, C64};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Kls,
    Xxz,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Run the full identity suite.
    Verify,
    /// Spectrum of H = sum X_j with the isotypic check.
    Spectrum,
    /// Multiplicity table for (C^n)^N.
    Decompose,
    /// The spectral R-matrix at --u.
    Rmatrix,
    /// Casimir contraction of the L-operator.
    Casimir,
    /// Commutators of the braid matrices and H with T^(N).
    Centralizer,
    /// Series coefficients of 1/(1 - n t + t^2) up to order N.
    Poincare,
    /// The N-site q-symmetrizer.
    Symmetrizer,
}

fn parse_complex(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    t.parse::<C64>().map_err(|_| format!("cannot parse `{s}` as a complex number (use forms like 2, -1.5, 0.3+2i)"))
}

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "tlsym", version, about = "Temperley-Lieb representations, R-matrices and open-chain checks")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Source of the matrix b.
    #[arg(long, value_enum, default_value = "kls", global = true)]
    pub family: FamilyArg,

    /// Parameter of the kls family (default 2).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, global = true)]
    #[serde(serialize_with = "tlsym_core::io::serialize_complex_opt")]
    pub p: Option<C64>,

    /// Parameter of the xxz family (default 3).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, global = true)]
    #[serde(serialize_with = "tlsym_core::io::serialize_complex_opt")]
    pub q: Option<C64>,

    /// Spectral parameter.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, global = true)]
    #[serde(serialize_with = "tlsym_core::io::serialize_complex_opt")]
    pub u: Option<C64>,

    /// Second spectral parameter (Yang-Baxter check in `rmatrix`).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, global = true)]
    #[serde(serialize_with = "tlsym_core::io::serialize_complex_opt")]
    pub v: Option<C64>,

    /// JSON file {"n": .., "entries": [[[re, im], ..], ..]} for --family file.
    #[arg(long, global = true)]
    pub b_file: Option<PathBuf>,

    /// Local dimension. Inferred from the family when omitted.
    #[arg(long, global = true)]
    pub n: Option<usize>,

    /// Number of chain sites.
    #[arg(long = "N", default_value_t = 3, global = true)]
    #[serde(rename = "N")]
    pub sites: usize,

    /// Tolerance for invertibility and identity checks.
    #[arg(long, default_value_t = EPS, global = true)]
    pub tol: f64,

    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,

    /// Seed for randomized spectral parameters.
    #[arg(long, default_value_t = 42, global = true)]
    pub seed: u64,
}

/// A failure before any check ran.
#[derive(Debug, Clone, PartialEq)]
pub struct RunError {
    pub kind: String,
    pub message: String,
    pub exit: i32,
}

impl RunError {
    fn config(message: impl Into<String>) -> Self {
        Self { kind: "InvalidConfig".into(), message: message.into(), exit: 2 }
    }

    pub fn to_json(&self) -> String {
        json!({ "schema": SCHEMA, "error": self.kind, "message": self.message, "exit": self.exit }).to_string()
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        let exit = if e.is_config_error() { 2 } else { 1 };
        Self { kind: e.kind().into(), message: e.to_string(), exit }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub config: RunConfig,
    pub checks: ResidualReport,
    pub tables: Value,
    pub exit: i32,
    pub wall_time_ms: u128,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serialises"),
            Format::Csv => self.render_csv(),
            Format::Text => self.render_text(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        if let Some(clusters) = self.tables.get("spectrum").and_then(|s| s.get("clusters")).and_then(Value::as_array) {
            out.push_str("value_re,value_im,multiplicity\n");
            for c in clusters {
                let v = &c["value"];
                out.push_str(&format!("{},{},{}\n", v[0], v[1], c["multiplicity"]));
            }
            return out;
        }
        if let Some(rows) = self.tables.get("decomposition").and_then(|t| t.get("rows")).and_then(Value::as_array) {
            out.push_str("k,p_k,nu_k\n");
            for r in rows {
                out.push_str(&format!("{},{},{}\n", r["k"], r["p_k"], r["nu_k"]));
            }
            return out;
        }
        out.push_str("name,residual,threshold,pass\n");
        for c in &self.checks.checks {
            out.push_str(&format!("{},{:e},{:e},{}\n", c.name, c.residual, c.threshold, c.pass));
        }
        out
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks.checks {
            let status = if c.pass { "ok  " } else { "FAIL" };
            out.push_str(&format!("{status} {:<40} {:>10.3e} <= {:.0e}\n", c.name, c.residual, c.threshold));
        }
        if let Some(tables) = self.tables.as_object() {
            for (key, value) in tables {
                out.push_str(&format!("{key}: {value}\n"));
            }
        }
        out.push_str(&format!("exit {} ({} ms)\n", self.exit, self.wall_time_ms));
        out
    }
}

fn build_form(cfg: &RunConfig) -> Result<BForm, RunError> {
    // --tol tightens identity thresholds; conditioning never goes below EPS.
    let opts = BFormOptions { tol: cfg.tol.max(EPS), ..BFormOptions::default() };
    let f = match cfg.family {
        FamilyArg::Kls => {
            if cfg.q.is_some() || cfg.b_file.is_some() {
                return Err(RunError::config("--family kls takes --p only"));
            }
            builtin_bform_with(Family::Kls, cfg.p.unwrap_or(C64::new(2.0, 0.0)), &opts)?
        }
        FamilyArg::Xxz => {
            if cfg.p.is_some() || cfg.b_file.is_some() {
                return Err(RunError::config("--family xxz takes --q only"));
            }
            builtin_bform_with(Family::Xxz, cfg.q.unwrap_or(C64::new(3.0, 0.0)), &opts)?
        }
        FamilyArg::File => {
            if cfg.p.is_some() || cfg.q.is_some() {
                return Err(RunError::config("--family file takes --b-file only"));
            }
            let path = cfg.b_file.as_ref().ok_or_else(|| RunError::config("--family file needs --b-file"))?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| RunError::config(format!("cannot read {}: {e}", path.display())))?;
            make_bform_with(parse_b_matrix(&text)?, &opts)?
        }
    };
    if let Some(n) = cfg.n {
        if n != f.n() {
            return Err(RunError::config(format!("--n {n} does not match the {}-dimensional b", f.n())));
        }
    }
    Ok(f)
}

fn verify(cfg: &RunConfig, f: &BForm) -> Result<(ResidualReport, Value), RunError> {
    let mut checks = ResidualReport::new();
    let tl_sites = cfg.sites.max(3);
    checks.extend(check_tl_relations_with(f, tl_sites, cfg.tol)?);
    checks.extend(check_braid(f));
    checks.push("characteristic", characteristic_residual(f), IDENTITY_TOL);
    for (i, (u, v)) in spectral_pairs(cfg.seed, 5).into_iter().enumerate() {
        checks.extend(check_spectral_ybe(f, u, v)?.prefixed(&format!("pair{i}")));
    }
    checks.extend(check_tl_cubic(f));
    let anti = q_antisymmetrizer(f);
    checks.push("antisymmetrizer", anti.residual, IDENTITY_TOL);
    checks.extend(check_rll(f));
    checks.extend(check_centralizer(f, cfg.sites.max(2))?);
    let casimir_table = match casimir(f) {
        Ok(c) => {
            checks.extend(c.report.clone());
            json!({ "c2": [c.c2.re, c.c2.im], "ordering": c.ordering,
                    "forward_residual": c.forward_residual, "reversed_residual": c.reversed_residual })
        }
        Err(Error::ConventionMismatch { forward, reversed }) => {
            checks.push("casimir.scalar", forward.min(reversed), IDENTITY_TOL);
            json!({ "error": "ConventionMismatch", "forward_residual": forward, "reversed_residual": reversed })
        }
        Err(e) => return Err(e.into()),
    };
    // The diagonal weight is a symmetry of the built-in families only.
    if cfg.family != FamilyArg::File {
        checks.extend(check_weight_symmetry(f));
    }
    let tables = json!({
        "form": form_table(f),
        "antisymmetrizer": { "winner": anti.winner, "candidates": anti.candidates },
        "casimir": casimir_table,
    });
    Ok((checks, tables))
}

fn form_table(f: &BForm) -> Value {
    json!({
        "n": f.n(),
        "tau": [f.tau().re, f.tau().im],
        "q": [f.q().re, f.q().im],
        "b": DenseMatrixJson::from(f.b()),
    })
}

fn run_command(cfg: &RunConfig) -> Result<(ResidualReport, Value), RunError> {
    match cfg.command {
        Command::Decompose | Command::Poincare => {
            let n = match (cfg.n, cfg.family) {
                (Some(n), _) => n,
                (None, FamilyArg::Xxz) => 2,
                (None, _) => 3,
            };
            if n < 2 {
                return Err(RunError::config("--n must be at least 2"));
            }
            let mut checks = ResidualReport::new();
            if cfg.command == Command::Decompose {
                let t = decomposition_table(n, cfg.sites)?;
                let miss = |a: u128, b: u128| if a == b { 0.0 } else { 1.0 };
                checks.push("sum_nu_p", miss(t.checks.sum_pk_nuk, t.checks.expected_dim), 0.0);
                checks.push("sum_nu_squared", miss(t.checks.catalan_check, t.checks.expected_catalan), 0.0);
                Ok((checks, json!({ "decomposition": t })))
            } else {
                let series = poincare_series(n, cfg.sites)?;
                let dims = dims_p(n as u64, cfg.sites)?;
                checks.push("series_equals_dims", if series == dims { 0.0 } else { 1.0 }, 0.0);
                Ok((checks, json!({ "poincare": series, "dims_p": dims })))
            }
        }
        _ => {
            let f = build_form(cfg)?;
            match cfg.command {
                Command::Verify => verify(cfg, &f),
                Command::Spectrum => {
                    let spec = chain_spectrum(&f, cfg.sites, None)?;
                    let table = decomposition_table(f.n(), cfg.sites)?;
                    let mut checks = ResidualReport::new();
                    let tables = match check_isotypic(&spec, &table) {
                        Ok(a) => {
                            checks.push("isotypic", 0.0, 0.0);
                            json!({ "spectrum": spec, "isotypic": a })
                        }
                        Err(e @ Error::NoConsistentAssignment(_)) => {
                            checks.push("isotypic", 1.0, 0.0);
                            json!({ "spectrum": spec, "isotypic": { "error": e.to_string() } })
                        }
                        Err(e) => return Err(e.into()),
                    };
                    Ok((checks, tables))
                }
                Command::Rmatrix => {
                    let u = cfg.u.unwrap_or(C64::new(2.0, 0.0));
                    let r = spectral_r(&f, u)?;
                    let mut checks = check_braid(&f);
                    checks.push("characteristic", characteristic_residual(&f), IDENTITY_TOL);
                    checks.push("unitarity", unitarity_residual(&f, u)?, IDENTITY_TOL);
                    if let Some(v) = cfg.v {
                        checks.extend(check_spectral_ybe(&f, u, v)?);
                    }
                    Ok((
                        checks,
                        json!({ "form": form_table(&f), "u": [u.re, u.im], "r": DenseMatrixJson::from(&r.mat.mat) }),
                    ))
                }
                Command::Casimir => {
                    let c = casimir(&f)?;
                    let tables = json!({ "c2": [c.c2.re, c.c2.im], "ordering": c.ordering,
                        "forward_residual": c.forward_residual, "reversed_residual": c.reversed_residual });
                    Ok((c.report, tables))
                }
                Command::Centralizer => Ok((check_centralizer(&f, cfg.sites)?, json!({}))),
                Command::Symmetrizer => {
                    let s = symmetrizer(&f, cfg.sites)?;
                    let expected = dims_p(f.n() as u64, cfg.sites)?[cfg.sites];
                    let mut checks = ResidualReport::new();
                    checks.push("idempotency", s.idempotency_residual, IDENTITY_TOL);
                    checks.push("rank", (s.rank as f64 - expected as f64).abs(), 0.0);
                    checks.push("commutes_with_T", symmetrizer_commutation_residual(&f, &s)?, IDENTITY_TOL);
                    Ok((
                        checks,
                        json!({ "rank": s.rank, "expected_rank": expected, "lambda": [s.lambda.re, s.lambda.im] }),
                    ))
                }
                Command::Decompose | Command::Poincare => unreachable!(),
            }
        }
    }
}

/// Runs one command. `Ok` carries the report (whose `exit` is 0 or 1).
pub fn run(cfg: &RunConfig) -> Result<Report, RunError> {
    let start = Instant::now();
    let (checks, tables) = run_command(cfg)?;
    let exit = if checks.all_pass() { 0 } else { 1 };
    Ok(Report { schema: SCHEMA, config: cfg.clone(), checks, tables, exit, wall_time_ms: start.elapsed().as_millis() })
}
