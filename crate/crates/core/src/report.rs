//! Verification reports shared by all structure verifiers.

use std::fmt;

/// A single violated axiom together with a concrete witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Short stable identifier of the axiom, e.g. `"union-closure"`.
    pub axiom: String,
    /// Human-readable witness data.
    pub witness: String,
}

impl Violation {
    pub fn new(axiom: impl Into<String>, witness: impl Into<String>) -> Self {
        Violation {
            axiom: axiom.into(),
            witness: witness.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.axiom, self.witness)
    }
}

/// Outcome of verifying a structure against its axioms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn valid() -> Self {
        Report::default()
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, axiom: impl Into<String>, witness: impl Into<String>) {
        self.violations.push(Violation::new(axiom, witness));
    }

    /// Merges another report into this one.
    pub fn absorb(&mut self, other: Report) {
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "valid")
        } else {
            writeln!(f, "{} violation(s):", self.violations.len())?;
            for v in &self.violations {
                writeln!(f, "  {v}")?;
            }
            Ok(())
        }
    }
}
