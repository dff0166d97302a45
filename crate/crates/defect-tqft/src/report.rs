use std::collections::BTreeMap;

use serde::Serialize;

/// One violated constraint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub location: String,
    pub message: String,
    pub residual: Option<f64>,
}

/// Outcome of a validator: clean iff there are no violations.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Named residuals that were measured, violated or not.
    pub residuals: Vec<(String, f64)>,
    /// How many times each residual was measured.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub checked: BTreeMap<String, usize>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, location: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            location: location.into(),
            message: message.into(),
            residual: None,
        });
    }

    pub fn push_residual(
        &mut self,
        location: impl Into<String>,
        message: impl Into<String>,
        residual: f64,
    ) {
        self.violations.push(Violation {
            location: location.into(),
            message: message.into(),
            residual: Some(residual),
        });
    }

    /// Records a measured residual and flags it if it exceeds `tol`.
    pub fn measure(&mut self, name: impl Into<String>, residual: f64, tol: f64) {
        let name = name.into();
        *self.checked.entry(name.clone()).or_default() += 1;
        if !(residual <= tol) {
            self.push_residual(name.clone(), format!("residual {residual:e} exceeds {tol:e}"), residual);
        }
        match self.residuals.iter_mut().find(|(n, _)| *n == name) {
            Some(entry) => entry.1 = entry.1.max(residual),
            None => self.residuals.push((name, residual)),
        }
    }

    pub fn max_residual(&self, name: &str) -> Option<f64> {
        self.residuals.iter().find(|(n, _)| n == name).map(|(_, r)| *r)
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
        for (n, k) in other.checked {
            *self.checked.entry(n).or_default() += k;
        }
        for (n, r) in other.residuals {
            match self.residuals.iter_mut().find(|(m, _)| *m == n) {
                Some(entry) => entry.1 = entry.1.max(r),
                None => self.residuals.push((n, r)),
            }
        }
    }
}
