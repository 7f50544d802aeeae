//! Verification reports in `key=value` form.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

/// How much of the verification suite to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CheckLevel {
    /// Closed forms, exhaustive per-element scans and sampled pair checks.
    #[default]
    Fast,
    /// Adds the pairwise distance oracle and exhaustive pair checks.
    All,
}

impl CheckLevel {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "fast" => Some(CheckLevel::Fast),
            "all" => Some(CheckLevel::All),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
}

/// One reproduced row of the twisted-vs-repetition comparison, with every
/// check that backs it.
#[derive(Debug, Clone, Default)]
pub struct VerificationReport {
    pub family: String,
    pub params: Vec<(String, String)>,
    pub code_size: usize,
    pub length: usize,
    pub alphabet: usize,
    pub r: usize,
    pub delta_tw: usize,
    pub delta_rep: usize,
    pub checks: Vec<CheckResult>,
    /// Diagnostic values that are not pass/fail.
    pub info: Vec<(String, String)>,
    pub timings: Vec<(String, Duration)>,
}

impl VerificationReport {
    pub fn new(family: &str, params: Vec<(String, String)>) -> Self {
        VerificationReport {
            family: family.to_string(),
            params,
            ..Default::default()
        }
    }

    pub fn gap(&self) -> isize {
        self.delta_tw as isize - self.delta_rep as isize
    }

    pub fn check(&mut self, name: &str, passed: bool) -> bool {
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed,
            detail: None,
        });
        passed
    }

    pub fn check_with(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed,
            detail: Some(detail.into()),
        });
        passed
    }

    pub fn info(&mut self, key: &str, value: impl ToString) {
        self.info.push((key.to_string(), value.to_string()));
    }

    pub fn get_check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed_checks(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Runs `f`, recording its wall time under `phase`.
    pub fn timed<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.push((phase.to_string(), start.elapsed()));
        out
    }

    /// Deterministic report body (timings excluded).
    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "family={}", self.family);
        for (k, v) in &self.params {
            let _ = writeln!(s, "{k}={v}");
        }
        let _ = writeln!(s, "code_size={}", self.code_size);
        let _ = writeln!(s, "length={}", self.length);
        let _ = writeln!(s, "q={}", self.alphabet);
        let _ = writeln!(s, "r={}", self.r);
        let _ = writeln!(s, "delta_tw={}", self.delta_tw);
        let _ = writeln!(s, "delta_rep={}", self.delta_rep);
        let _ = writeln!(s, "gap={}", self.gap());
        for (k, v) in &self.info {
            let _ = writeln!(s, "info.{k}={v}");
        }
        for c in &self.checks {
            let _ = writeln!(
                s,
                "check.{}={}",
                c.name,
                if c.passed { "PASS" } else { "FAIL" }
            );
        }
        s
    }

    pub fn timings_text(&self) -> String {
        self.timings
            .iter()
            .map(|(k, d)| format!("time.{k}_ms={}\n", d.as_millis()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_value_layout() {
        let mut r = VerificationReport::new("affine", vec![("p".into(), "3".into())]);
        r.delta_tw = 24;
        r.delta_rep = 18;
        r.check("a", true);
        r.check("b", false);
        r.info("x", 1);
        let text = r.to_key_value();
        assert!(text.starts_with("family=affine\np=3\n"));
        assert!(text.contains("gap=6\n"));
        assert!(text.contains("info.x=1\n"));
        assert!(text.contains("check.a=PASS\ncheck.b=FAIL\n"));
        assert!(!r.all_passed());
        assert_eq!(r.failed_checks().len(), 1);
    }

    #[test]
    fn timings_stay_out_of_the_body() {
        let mut r = VerificationReport::new("custom", vec![]);
        let v = r.timed("phase", || 5);
        assert_eq!(v, 5);
        assert!(!r.to_key_value().contains("time."));
        assert!(r.timings_text().starts_with("time.phase_ms="));
    }
}
