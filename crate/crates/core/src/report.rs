use serde::Serialize;

/// One numeric verification: a measured residual against a tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `residual <= tol`.
    pub fn at_most(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tol,
            pass: residual <= tol,
        }
    }

    /// Passes when `residual < tol`.
    pub fn below(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tol,
            pass: residual < tol,
        }
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {}: residual {:.3e} (tol {:.1e})",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.residual,
            self.tol
        )
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}
