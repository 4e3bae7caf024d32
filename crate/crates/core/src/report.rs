use std::fmt;

use serde::Serialize;

/// A list of violated invariants. Violations are data: an empty report means
/// the checked value satisfies every law.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport<V> {
    pub violations: Vec<V>,
}

impl<V> ValidationReport<V> {
    pub fn new(violations: Vec<V>) -> Self {
        Self { violations }
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &V> {
        self.violations.iter()
    }
}

impl<V> Default for ValidationReport<V> {
    fn default() -> Self {
        Self {
            violations: Vec::new(),
        }
    }
}

impl<V: fmt::Display> fmt::Display for ValidationReport<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "- {v}")?;
        }
        Ok(())
    }
}

/// Outcome of a decision procedure: either the property holds, with
/// witnesses, or it fails with a concrete counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision<W, C> {
    Holds(W),
    Fails(C),
}

impl<W, C> Decision<W, C> {
    pub fn holds(&self) -> bool {
        matches!(self, Decision::Holds(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Decision::Holds(w) => Some(w),
            Decision::Fails(_) => None,
        }
    }

    pub fn counterexample(&self) -> Option<&C> {
        match self {
            Decision::Holds(_) => None,
            Decision::Fails(c) => Some(c),
        }
    }
}
