//! Outcome records for the verification routines.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

/// A named list of checks. Verifiers never fail with an error for a broken
/// identity; they record a failed check with a localized diff instead.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub checks: Vec<Check>,
    /// Informational lines (computed orders, sign conventions, ...).
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn pass(&mut self, label: impl Into<String>) {
        self.checks.push(Check {
            label: label.into(),
            passed: true,
            detail: String::new(),
        });
    }

    pub fn fail(&mut self, label: impl Into<String>, detail: impl Into<String>) {
        self.checks.push(Check {
            label: label.into(),
            passed: false,
            detail: detail.into(),
        });
    }

    pub fn record(&mut self, label: impl Into<String>, passed: bool, detail: impl Into<String>) {
        if passed {
            self.pass(label);
        } else {
            self.fail(label, detail);
        }
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    /// Appends another report's checks, prefixing their labels.
    pub fn absorb(&mut self, other: Report) {
        for mut c in other.checks {
            c.label = format!("{}: {}", other.name, c.label);
            self.checks.push(c);
        }
        self.notes.extend(other.notes.into_iter().map(|n| format!("{}: {n}", other.name)));
    }

    pub fn is_success(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn failure_count(&self) -> usize {
        self.failures().count()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let passed = self.checks.iter().filter(|c| c.passed).count();
        writeln!(f, "{}: {passed}/{} checks passed", self.name, self.checks.len())?;
        for c in self.failures() {
            writeln!(f, "  FAIL {}: {}", c.label, c.detail)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
