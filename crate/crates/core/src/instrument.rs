//! Runtime checks of analytic invariants, recorded instead of panicking.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub iteration: usize,
    pub check: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct InstrumentLog {
    pub enabled: bool,
    pub checks: usize,
    pub violations: Vec<Violation>,
}

impl InstrumentLog {
    pub fn new(enabled: bool) -> Self {
        Self {
            enabled,
            ..Self::default()
        }
    }

    /// Records one evaluation of `check`. The detail closure runs only on failure.
    pub fn check(
        &mut self,
        ok: bool,
        iteration: usize,
        check: &'static str,
        detail: impl FnOnce() -> String,
    ) {
        if !self.enabled {
            return;
        }
        self.checks += 1;
        if !ok {
            self.violations.push(Violation {
                iteration,
                check,
                detail: detail(),
            });
        }
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn absorb(&mut self, other: InstrumentLog) {
        self.checks += other.checks;
        self.violations.extend(other.violations);
    }

    /// Number of evaluations of a named check that failed.
    pub fn count(&self, check: &str) -> usize {
        self.violations.iter().filter(|v| v.check == check).count()
    }
}
