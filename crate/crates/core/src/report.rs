//! Named residual checks.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    /// `pass` is `residual <= threshold`; a NaN residual never passes.
    pub fn new(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Self { name: name.into(), residual, threshold, pass: residual <= threshold }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ResidualReport {
    pub checks: Vec<Check>,
}

impl ResidualReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, residual: f64, threshold: f64) {
        self.checks.push(Check::new(name, residual, threshold));
    }

    pub fn extend(&mut self, other: ResidualReport) {
        self.checks.extend(other.checks);
    }

    /// Prefixes every check name with `prefix.`.
    pub fn prefixed(mut self, prefix: &str) -> Self {
        for c in &mut self.checks {
            c.name = format!("{prefix}.{}", c.name);
        }
        self
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().fold(0.0_f64, |acc, c| acc.max(c.residual))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_residual_within_threshold() {
        let mut r = ResidualReport::new();
        r.push("a", 1e-12, 1e-10);
        r.push("b", 1e-10, 1e-10);
        assert!(r.all_pass());
        r.push("c", f64::NAN, 1.0);
        assert!(!r.all_pass());
        assert_eq!(r.failures().count(), 1);
    }
}
