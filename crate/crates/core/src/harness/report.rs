//! Line-oriented result records.

use std::fmt;

use crate::counters::Counters;

/// Outcome of running one solver over one query stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialReport {
    pub instance_hash: u64,
    /// `(query, row)`, both 1-based, where the solver disagreed with the oracle.
    pub mismatches: Vec<(usize, usize)>,
    /// Totals over the whole solver tree.
    pub counters: Counters,
    pub success: bool,
    /// Set when the solver returned an error instead of an answer.
    pub error: Option<String>,
}

impl TrialReport {
    pub fn new(instance_hash: u64, mismatches: Vec<(usize, usize)>, counters: Counters) -> Self {
        TrialReport {
            instance_hash,
            success: mismatches.is_empty(),
            mismatches,
            counters,
            error: None,
        }
    }

    pub fn failed(instance_hash: u64, error: impl Into<String>) -> Self {
        TrialReport {
            instance_hash,
            mismatches: Vec::new(),
            counters: Counters::default(),
            success: false,
            error: Some(error.into()),
        }
    }
}

impl fmt::Display for TrialReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "trial hash={:016x} success={} mismatches={}",
            self.instance_hash,
            self.success,
            self.mismatches.len()
        )?;
        if let Some(&(j, i)) = self.mismatches.first() {
            write!(f, " first=({j},{i})")?;
        }
        if let Some(e) = &self.error {
            write!(f, " error=\"{e}\"")?;
        }
        write!(f, " {}", self.counters)
    }
}

/// Pass/fail of one structural counter bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterCheck {
    pub name: String,
    /// Human-readable bound, e.g. `== 4` or `<= 64`.
    pub bound: String,
    pub observed: u64,
    pub pass: bool,
}

impl fmt::Display for CounterCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: observed {} (expected {})",
            if self.pass { "ok" } else { "FAIL" },
            self.name,
            self.observed,
            self.bound
        )
    }
}

/// Full-correctness rate of the randomized reduction over many trials.
#[derive(Clone, Debug, PartialEq)]
pub struct SuccessRate {
    pub trials: usize,
    pub successes: usize,
    pub rate: f64,
    /// 95% Wilson score interval for `rate`.
    pub interval: (f64, f64),
    pub entries: u64,
    pub entry_failures: u64,
    pub entry_failure_rate: f64,
    /// `1/n^3`, the per-entry failure bound before the union over entries.
    pub entry_bound: f64,
}

impl fmt::Display for SuccessRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "success {}/{} rate={:.4} wilson95=[{:.4}, {:.4}] entry_failures={}/{} \
             entry_rate={:.3e} entry_bound={:.3e}",
            self.successes,
            self.trials,
            self.rate,
            self.interval.0,
            self.interval.1,
            self.entry_failures,
            self.entries,
            self.entry_failure_rate,
            self.entry_bound
        )
    }
}

/// 95% Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}
